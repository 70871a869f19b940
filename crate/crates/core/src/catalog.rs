//! Built-in exact category data and the Deligne product.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactnum::{zeta, CycloNum};
use crate::fusion::{FusionRingData, Label};
use crate::ribbon::CategorySpec;
use crate::tannakian::{FiniteGroup, GroupData};

pub const NAMES: [&str; 10] = [
    "trivial",
    "rep_z2",
    "rep_z3",
    "rep_z2z2",
    "rep_s3",
    "rep_d4",
    "toric_code",
    "ising",
    "fibonacci",
    "semion",
];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: CategorySpec,
    pub provenance: &'static str,
}

fn int(k: i64) -> CycloNum {
    CycloNum::from_int(k)
}

fn ones(n: usize) -> Vec<CycloNum> {
    vec![CycloNum::one(); n]
}

fn names(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

/// Group ring of an abelian group given by its multiplication table;
/// labels are group elements.
fn group_ring(labels: &[&str], g: &FiniteGroup) -> FusionRingData {
    let n = g.order();
    let entries = (0..n).flat_map(|a| (0..n).map(move |b| (a, b, g.mul(a, b), 1)));
    let dual = (0..n).map(|a| g.inv(a)).collect();
    FusionRingData::new(names(labels), g.identity(), dual, entries).expect("static data")
}

fn pointed(labels: &[&str], g: &FiniteGroup, twists: Vec<CycloNum>) -> CategorySpec {
    let n = g.order();
    CategorySpec::new(group_ring(labels, g), twists, Some(ones(n))).expect("static data")
}

fn rep_s3() -> CategorySpec {
    let (one, sgn, std) = (0, 1, 2);
    let entries = vec![
        (one, one, one, 1),
        (one, sgn, sgn, 1),
        (one, std, std, 1),
        (sgn, one, sgn, 1),
        (sgn, sgn, one, 1),
        (sgn, std, std, 1),
        (std, one, std, 1),
        (std, sgn, std, 1),
        (std, std, one, 1),
        (std, std, sgn, 1),
        (std, std, std, 1),
    ];
    let ring = FusionRingData::new(names(&["1", "sgn", "std"]), 0, vec![0, 1, 2], entries).expect("static data");
    CategorySpec::new(ring, ones(3), Some(vec![int(1), int(1), int(2)])).expect("static data")
}

fn rep_d4() -> CategorySpec {
    let sigma = 4;
    let v4 = FiniteGroup::named("Z2xZ2").unwrap();
    let mut entries = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            entries.push((a, b, v4.mul(a, b), 1));
        }
        entries.push((a, sigma, sigma, 1));
        entries.push((sigma, a, sigma, 1));
        entries.push((sigma, sigma, a, 1));
    }
    let ring = FusionRingData::new(names(&["1", "a", "b", "ab", "sigma"]), 0, (0..5).collect(), entries)
        .expect("static data");
    let mut dims = ones(5);
    dims[sigma] = int(2);
    CategorySpec::new(ring, ones(5), Some(dims)).expect("static data")
}

fn ising() -> CategorySpec {
    let (one, psi, sigma) = (0, 1, 2);
    let entries = vec![
        (one, one, one, 1),
        (one, psi, psi, 1),
        (one, sigma, sigma, 1),
        (psi, one, psi, 1),
        (psi, psi, one, 1),
        (psi, sigma, sigma, 1),
        (sigma, one, sigma, 1),
        (sigma, psi, sigma, 1),
        (sigma, sigma, one, 1),
        (sigma, sigma, psi, 1),
    ];
    let ring = FusionRingData::new(names(&["1", "psi", "sigma"]), 0, vec![0, 1, 2], entries).expect("static data");
    let sqrt2 = zeta(8, 1) + zeta(8, 7);
    CategorySpec::new(ring, vec![int(1), int(-1), zeta(16, 1)], Some(vec![int(1), int(1), sqrt2]))
        .expect("static data")
}

fn fibonacci() -> CategorySpec {
    let entries = vec![(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)];
    let ring = FusionRingData::new(names(&["1", "tau"]), 0, vec![0, 1], entries).expect("static data");
    let phi = int(1) + zeta(5, 1) + zeta(5, 4);
    CategorySpec::new(ring, vec![int(1), zeta(5, 2)], Some(vec![int(1), phi])).expect("static data")
}

/// Every built-in entry, in [`NAMES`] order.
pub fn entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| entry(n).unwrap()).collect()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    let z2 = FiniteGroup::cyclic(2);
    let v4 = FiniteGroup::named("Z2xZ2").unwrap();
    let (name, spec, provenance): (&'static str, CategorySpec, &'static str) = match name {
        "trivial" => ("trivial", pointed(&["1"], &FiniteGroup::trivial(), ones(1)), "Vec: one simple object"),
        "rep_z2" => ("rep_z2", pointed(&["1", "sgn"], &z2, ones(2)), "Rep(Z2), symmetric, all twists 1"),
        "rep_z3" => (
            "rep_z3",
            pointed(&["1", "w", "w2"], &FiniteGroup::cyclic(3), ones(3)),
            "Rep(Z3), symmetric; w is the character sending the generator to ζ3",
        ),
        "rep_z2z2" => (
            "rep_z2z2",
            pointed(&["1", "a", "b", "ab"], &v4, ones(4)),
            "Rep(Z2×Z2), symmetric",
        ),
        "rep_s3" => ("rep_s3", rep_s3(), "Rep(S3): trivial, sign and the 2-dimensional irrep"),
        "rep_d4" => (
            "rep_d4",
            rep_d4(),
            "Rep(D4): four characters and the 2-dimensional irrep sigma",
        ),
        "toric_code" => (
            "toric_code",
            pointed(&["1", "e", "m", "f"], &v4, vec![int(1), int(1), int(1), int(-1)]),
            "Z2 toric code: bosons e, m and the fermion f = e⊗m",
        ),
        "ising" => ("ising", ising(), "Ising with θ_σ = ζ16, one of the eight Ising-type choices"),
        "fibonacci" => ("fibonacci", fibonacci(), "Fibonacci with θ_τ = ζ5², d_τ the golden ratio"),
        "semion" => (
            "semion",
            pointed(&["1", "s"], &z2, vec![int(1), zeta(4, 1)]),
            "semion: Z2 fusion with θ_s = ζ4",
        ),
        other => return Err(Error::InvalidData(format!("no catalog entry named `{other}`"))),
    };
    Ok(CatalogEntry { name, spec, provenance })
}

pub fn load_named(name: &str) -> Result<CategorySpec> {
    entry(name).map(|e| e.spec)
}

fn label_map(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(l, i)| (l.to_string(), i)).collect()
}

/// Group and character table of the symmetric catalog entries, with
/// columns ordered by smallest class element.
pub fn group_hint(name: &str) -> Option<GroupData> {
    let w = zeta(3, 1);
    let w2 = zeta(3, 2);
    let (group, characters, labels) = match name {
        "trivial" => (FiniteGroup::trivial(), vec![vec![int(1)]], label_map(&[("1", 0)])),
        "rep_z2" => (
            FiniteGroup::cyclic(2),
            vec![vec![int(1), int(1)], vec![int(1), int(-1)]],
            label_map(&[("1", 0), ("sgn", 1)]),
        ),
        "rep_z3" => (
            FiniteGroup::cyclic(3),
            vec![
                vec![int(1), int(1), int(1)],
                vec![int(1), w.clone(), w2.clone()],
                vec![int(1), w2, w],
            ],
            label_map(&[("1", 0), ("w", 1), ("w2", 2)]),
        ),
        "rep_z2z2" => (
            FiniteGroup::named("Z2xZ2").unwrap(),
            [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
            label_map(&[("1", 0), ("a", 1), ("b", 2), ("ab", 3)]),
        ),
        // classes {e}, {r, r²}, {s, sr, sr²}
        "rep_s3" => (
            FiniteGroup::symmetric3(),
            [[1, 1, 1], [1, 1, -1], [2, -1, 0]]
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
            label_map(&[("1", 0), ("sgn", 1), ("std", 2)]),
        ),
        // classes {e}, {r, r³}, {r²}, {s, sr²}, {sr, sr³}
        "rep_d4" => (
            FiniteGroup::dihedral(4),
            [
                [1, 1, 1, 1, 1],
                [1, 1, 1, -1, -1],
                [1, -1, 1, 1, -1],
                [1, -1, 1, -1, 1],
                [2, 0, -2, 0, 0],
            ]
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect(),
            label_map(&[("1", 0), ("a", 1), ("b", 2), ("ab", 3), ("sigma", 4)]),
        ),
        _ => return None,
    };
    Some(GroupData {
        group,
        characters,
        label_to_irrep: labels,
    })
}

/// `a ⊠ b`: labels `(x,y)` at index `i·rank(b) + j`, componentwise fusion
/// and duals, multiplied twists and dims.
pub fn deligne_product(a: &CategorySpec, b: &CategorySpec) -> CategorySpec {
    let (ra, rb) = (a.rank(), b.rank());
    let idx = |i: Label, j: Label| i * rb + j;
    let labels = (0..ra)
        .flat_map(|i| (0..rb).map(move |j| (i, j)))
        .map(|(i, j)| format!("({},{})", a.name(i), b.name(j)))
        .collect();
    let (ar, br) = (a.ring(), b.ring());
    let dual = (0..ra * rb)
        .map(|x| idx(ar.dual(x / rb), br.dual(x % rb)))
        .collect();
    let mut entries = Vec::new();
    for (i1, i2, i3, n) in ar.entries() {
        for (j1, j2, j3, m) in br.entries() {
            entries.push((idx(i1, j1), idx(i2, j2), idx(i3, j3), n * m));
        }
    }
    let ring = FusionRingData::new(labels, idx(ar.unit(), br.unit()), dual, entries)
        .expect("product of well-formed rings is well formed");
    let twists = (0..ra * rb)
        .map(|x| a.twist(x / rb) * b.twist(x % rb))
        .collect();
    let dims = match (a.dims(), b.dims()) {
        (Some(da), Some(db)) => Some((0..ra * rb).map(|x| &da[x / rb] * &db[x % rb]).collect()),
        _ => None,
    };
    CategorySpec::new(ring, twists, dims).expect("product of well-formed specs is well formed")
}
