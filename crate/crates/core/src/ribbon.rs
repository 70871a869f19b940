//! Twists, monodromy phases, the centre, the S-matrix and the modularity
//! verdict.
//!
//! Convention: `S̃_ab = Σ_c N[ā][b][c] · θ_c/(θ_a θ_b) · d_c`, so the first
//! row and column of `S̃` are the dimensions.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::poly::lcm;
use crate::exactnum::{rat, CycloNum};
use crate::fusion::{self, FusionRingData, Label, RingCheckOptions, ValidationReport, ViolationKind};
use crate::par;

pub const S_CONVENTION: &str = "S̃_ab = Σ_c N[dual(a)][b][c]·θ_c/(θ_a·θ_b)·d_c";

/// A skeletal braided ribbon category: fusion ring, twists and optional exact
/// dimensions. Twists are roots of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySpec {
    ring: FusionRingData,
    twists: Vec<CycloNum>,
    twist_inv: Vec<CycloNum>,
    dims: Option<Vec<CycloNum>>,
}

impl CategorySpec {
    pub fn new(ring: FusionRingData, twists: Vec<CycloNum>, dims: Option<Vec<CycloNum>>) -> Result<Self> {
        let r = ring.rank();
        if twists.len() != r {
            return Err(Error::Structural(format!("{} twists for {r} labels", twists.len())));
        }
        if let Some(d) = &dims {
            if d.len() != r {
                return Err(Error::Structural(format!("{} dims for {r} labels", d.len())));
            }
        }
        let twist_inv = twists
            .iter()
            .enumerate()
            .map(|(a, t)| {
                t.inv()
                    .map_err(|_| Error::Structural(format!("twist of `{}` is zero", ring.name(a))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CategorySpec {
            ring,
            twists,
            twist_inv,
            dims,
        })
    }

    pub fn ring(&self) -> &FusionRingData {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn twist(&self, a: Label) -> &CycloNum {
        &self.twists[a]
    }

    pub fn twists(&self) -> &[CycloNum] {
        &self.twists
    }

    pub fn dims(&self) -> Option<&[CycloNum]> {
        self.dims.as_deref()
    }

    pub fn exact_dims(&self) -> Result<&[CycloNum]> {
        self.dims()
            .ok_or_else(|| Error::ExactDimsRequired("the category carries no exact dims".into()))
    }

    pub fn name(&self, a: Label) -> &str {
        self.ring.name(a)
    }

    pub fn index_of(&self, name: &str) -> Result<Label> {
        self.ring.index_of(name)
    }

    /// Replaces a twist; used to build mutated test data.
    pub fn with_twist(&self, a: Label, t: CycloNum) -> Result<Self> {
        let mut twists = self.twists.clone();
        twists[a] = t;
        CategorySpec::new(self.ring.clone(), twists, self.dims.clone())
    }

    pub fn with_ring(&self, ring: FusionRingData) -> Result<Self> {
        CategorySpec::new(ring, self.twists.clone(), self.dims.clone())
    }

    pub fn with_dims(&self, dims: Option<Vec<CycloNum>>) -> Result<Self> {
        CategorySpec::new(self.ring.clone(), self.twists.clone(), dims)
    }

    /// Smallest cyclotomic order containing every twist and dim.
    fn common_order(&self) -> u32 {
        let mut m = 1;
        for t in self.twists.iter().chain(self.dims.iter().flatten()) {
            m = lcm(m, t.order());
        }
        m
    }
}

/// Scalar by which the double braiding acts on channel `c` of `a ⊗ b`:
/// `θ_c / (θ_a θ_b)`.
pub fn channel_monodromy(spec: &CategorySpec, a: Label, b: Label, c: Label) -> Result<CycloNum> {
    let r = spec.rank();
    for x in [a, b, c] {
        if x >= r {
            return Err(Error::UnknownLabel(format!("#{x}")));
        }
    }
    if spec.ring.n(a, b, c) == 0 {
        return Err(Error::ChannelAbsent {
            a: spec.name(a).into(),
            b: spec.name(b).into(),
            c: spec.name(c).into(),
        });
    }
    Ok(monodromy_unchecked(spec, a, b, c))
}

fn monodromy_unchecked(spec: &CategorySpec, a: Label, b: Label, c: Label) -> CycloNum {
    &(&spec.twists[c] * &spec.twist_inv[a]) * &spec.twist_inv[b]
}

/// A channel on which the monodromy of `label` against `partner` is not 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyWitness {
    pub partner: Label,
    pub channel: Label,
    pub phase: CycloNum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyCheck {
    pub degenerate: bool,
    pub witness: Option<MonodromyWitness>,
}

/// `a` is degenerate iff every channel of every `a ⊗ b` has trivial
/// monodromy. The witness is the first failing `(b, c)` in label order.
pub fn is_degenerate(spec: &CategorySpec, a: Label) -> DegeneracyCheck {
    let r = spec.rank();
    for b in 0..r {
        for (c, _) in spec.ring.channels(a, b) {
            let phase = monodromy_unchecked(spec, a, b, c);
            if !phase.is_one() {
                return DegeneracyCheck {
                    degenerate: false,
                    witness: Some(MonodromyWitness {
                        partner: b,
                        channel: c,
                        phase,
                    }),
                };
            }
        }
    }
    DegeneracyCheck {
        degenerate: true,
        witness: None,
    }
}

/// Labels of all degenerate simples, in index order.
pub fn centre(spec: &CategorySpec) -> Vec<Label> {
    let flags = par::map_range(spec.rank(), |a| is_degenerate(spec, a).degenerate);
    flags
        .into_iter()
        .enumerate()
        .filter_map(|(a, d)| d.then_some(a))
        .collect()
}

/// First `(a, b, c)` showing that `labels` is not closed under fusion, or
/// `(a, ā, ā)` when it is not closed under duals.
pub fn closure_witness(ring: &FusionRingData, labels: &[Label]) -> Option<(Label, Label, Label)> {
    let mut member = vec![false; ring.rank()];
    for &a in labels {
        member[a] = true;
    }
    for &a in labels {
        if !member[ring.dual(a)] {
            return Some((a, ring.dual(a), ring.dual(a)));
        }
        for &b in labels {
            if let Some((c, _)) = ring.channels(a, b).find(|&(c, _)| !member[c]) {
                return Some((a, b, c));
            }
        }
    }
    None
}

/// Square matrix of cyclotomic entries indexed by labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SMatrix {
    pub entries: Vec<Vec<CycloNum>>,
    /// False for `S̃`; the normalized `S = S̃/D` is only formed numerically.
    pub normalized: bool,
    pub convention: &'static str,
}

impl SMatrix {
    pub fn get(&self, a: Label, b: Label) -> &CycloNum {
        &self.entries[a][b]
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(CycloNum::to_complex).collect())
            .collect()
    }
}

/// The unnormalized S-matrix `S̃`, exactly. Requires exact dims.
pub fn s_matrix(spec: &CategorySpec) -> Result<SMatrix> {
    let dims = spec.exact_dims()?;
    let m = spec.common_order();
    let theta: Vec<CycloNum> = spec.twists.iter().map(|t| t.lift_to(m)).collect();
    let theta_inv: Vec<CycloNum> = spec.twist_inv.iter().map(|t| t.reduced().lift_to(m)).collect();
    let d: Vec<CycloNum> = dims.iter().map(|x| x.lift_to(m)).collect();
    let theta_d: Vec<CycloNum> = theta.iter().zip(&d).map(|(t, x)| t * x).collect();
    let r = spec.rank();
    let ring = &spec.ring;
    let entries = par::map_range(r, |a| {
        let abar = ring.dual(a);
        (0..r)
            .map(|b| {
                let mut acc = CycloNum::zero().lift_to(m);
                for (c, n) in ring.channels(abar, b) {
                    if n == 1 {
                        acc += &theta_d[c];
                    } else {
                        acc += &theta_d[c].scale(&rat(n as i64, 1));
                    }
                }
                &(&acc * &theta_inv[a]) * &theta_inv[b]
            })
            .collect()
    });
    Ok(SMatrix {
        entries,
        normalized: false,
        convention: S_CONVENTION,
    })
}

/// `S̃` in floating point from Perron–Frobenius dims; used only when exact
/// dims are absent and the caller opted into a non-certified verdict.
pub fn s_matrix_numeric(spec: &CategorySpec, dims: &[f64]) -> Vec<Vec<Complex64>> {
    let r = spec.rank();
    let theta: Vec<Complex64> = spec.twists.iter().map(CycloNum::to_complex).collect();
    let ring = &spec.ring;
    par::map_range(r, |a| {
        (0..r)
            .map(|b| {
                let acc: Complex64 = ring
                    .channels(ring.dual(a), b)
                    .map(|(c, n)| theta[c] * dims[c] * n as f64)
                    .sum();
                acc / (theta[a] * theta[b])
            })
            .collect()
    })
}

/// Exact determinant by Gaussian elimination over the cyclotomic field.
pub fn determinant(matrix: &[Vec<CycloNum>]) -> CycloNum {
    let n = matrix.len();
    if n == 0 {
        return CycloNum::one();
    }
    let m = matrix
        .iter()
        .flatten()
        .fold(1, |acc, x| lcm(acc, x.order()));
    let mut rows: Vec<Vec<CycloNum>> = matrix
        .iter()
        .map(|row| row.iter().map(|x| x.lift_to(m)).collect())
        .collect();
    let mut det = CycloNum::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !rows[i][k].is_zero()) else {
            return CycloNum::zero();
        };
        if p != k {
            rows.swap(p, k);
            det = -det;
        }
        det = &det * &rows[k][k];
        let inv = rows[k][k].inv().expect("pivot is nonzero");
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot = &head[k];
        par::for_each_mut(tail, |row| {
            if row[k].is_zero() {
                return;
            }
            let f = &row[k] * &inv;
            for j in k..n {
                if !pivot[j].is_zero() {
                    let t = &f * &pivot[j];
                    row[j] -= &t;
                }
            }
        });
    }
    det
}

fn determinant_numeric(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap();
        if a[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = f * a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ModularityOptions {
    /// Allow a floating-point verdict when exact dims are missing.
    pub numeric_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModularityReport {
    pub centre: Vec<String>,
    #[serde(skip)]
    pub centre_idx: Vec<Label>,
    /// Exact `det S̃`; absent for non-certified numeric verdicts.
    pub det: Option<CycloNum>,
    pub det_approx: (f64, f64),
    pub modular: bool,
    pub certified: bool,
    pub convention: &'static str,
}

const NUMERIC_RANK_TOL: f64 = 1e-9;

/// Modularity verdict: exact `det S̃ ≠ 0`, cross-checked against triviality
/// of the centre. A disagreement between the two is reported as a data
/// inconsistency.
pub fn is_modular(spec: &CategorySpec, opts: ModularityOptions) -> Result<ModularityReport> {
    let centre_idx = centre(spec);
    let trivial_centre = centre_idx == [spec.ring.unit()];
    let names = centre_idx.iter().map(|&a| spec.name(a).to_string()).collect();
    let (det, det_approx, modular, certified) = match spec.dims() {
        Some(_) => {
            let s = s_matrix(spec)?;
            let det = determinant(&s.entries);
            let z = det.to_complex();
            let modular = !det.is_zero();
            (Some(det), (z.re, z.im), modular, true)
        }
        None if opts.numeric_fallback => {
            let fp = fusion::fp_dims(&spec.ring, None)?;
            let s = s_matrix_numeric(spec, &fp.dims);
            let z = determinant_numeric(s);
            let scale = fp.global_dim.powf(spec.rank() as f64 / 2.0);
            (None, (z.re, z.im), z.norm() > NUMERIC_RANK_TOL * scale, false)
        }
        None => {
            return Err(Error::ExactDimsRequired(
                "the modularity verdict needs exact dims (or the numeric fallback)".into(),
            ))
        }
    };
    if certified && modular != trivial_centre {
        return Err(Error::DataInconsistency(format!(
            "det S̃ {} zero but the centre {} trivial",
            if modular { "is not" } else { "is" },
            if trivial_centre { "is" } else { "is not" }
        )));
    }
    Ok(ModularityReport {
        centre: names,
        centre_idx,
        det,
        det_approx,
        modular,
        certified,
        convention: S_CONVENTION,
    })
}

/// Degeneracy read off `S̃`: `a` is degenerate iff `S̃_ab = d_a d_b` for all
/// `b`.
pub fn row_proportional_labels(spec: &CategorySpec, s: &SMatrix) -> Result<Vec<bool>> {
    let d = spec.exact_dims()?;
    let r = spec.rank();
    Ok(par::map_range(r, |a| (0..r).all(|b| s.entries[a][b] == &d[a] * &d[b])))
}

const VERLINDE_TOL: f64 = 1e-9;

/// Checks `N_ab^c = Σ_x S_ax S_bx conj(S_cx) / S_1x` for the normalized
/// `S = S̃/D`, `D = √(Σ d²)`, within 1e-9. Requires a modular category.
pub fn verlinde_check(spec: &CategorySpec) -> Result<bool> {
    let report = is_modular(spec, ModularityOptions::default())?;
    if !report.modular {
        return Err(Error::Precondition("Verlinde check needs a modular category".into()));
    }
    let s = s_matrix(spec)?.to_complex();
    let r = spec.rank();
    let u = spec.ring.unit();
    let global: f64 = spec
        .exact_dims()?
        .iter()
        .map(|d| d.to_complex().norm_sqr())
        .sum();
    let big_d = global.sqrt();
    let sn: Vec<Vec<Complex64>> = s
        .iter()
        .map(|row| row.iter().map(|z| z / big_d).collect())
        .collect();
    let ok = par::map_range(r, |a| {
        (0..r).all(|b| {
            (0..r).all(|c| {
                let v: Complex64 = (0..r)
                    .map(|x| sn[a][x] * sn[b][x] * sn[c][x].conj() / sn[u][x])
                    .sum();
                (v - Complex64::new(spec.ring.n(a, b, c) as f64, 0.0)).norm() < VERLINDE_TOL
            })
        })
    });
    Ok(ok.into_iter().all(|x| x))
}

/// Twist-level checks: unit twist, dual twists, unit modulus, roots of unity
/// and fusion/dual closure of the degenerate labels.
pub fn validate_ribbon(spec: &CategorySpec) -> ValidationReport {
    let ring = &spec.ring;
    let r = ring.rank();
    let u = ring.unit();
    let mut report = ValidationReport::default();

    report.push(
        ring,
        ViolationKind::UnitTwist,
        (!spec.twists[u].is_one()).then(|| (vec![u], 1, format!("θ_1 = {}", spec.twists[u]))),
        false,
    );

    let dual_bad: Vec<Label> = (0..r).filter(|&a| spec.twists[ring.dual(a)] != spec.twists[a]).collect();
    report.push(
        ring,
        ViolationKind::DualTwist,
        dual_bad.first().map(|&a| {
            (
                vec![a, ring.dual(a)],
                dual_bad.len(),
                format!("θ = {} but θ of the dual = {}", spec.twists[a], spec.twists[ring.dual(a)]),
            )
        }),
        false,
    );

    let modulus: Vec<bool> = par::map_slice(&spec.twists, |t| (t * &t.conj()).is_one());
    let mod_bad: Vec<Label> = (0..r).filter(|&a| !modulus[a]).collect();
    report.push(
        ring,
        ViolationKind::TwistModulus,
        mod_bad
            .first()
            .map(|&a| (vec![a], mod_bad.len(), format!("|θ|² = {}", &spec.twists[a] * &spec.twists[a].conj()))),
        false,
    );

    let root_bad: Vec<Label> = (0..r)
        .filter(|&a| modulus[a] && spec.twists[a].as_root_of_unity().is_none())
        .collect();
    report.push(
        ring,
        ViolationKind::TwistNotRootOfUnity,
        root_bad
            .first()
            .map(|&a| (vec![a], root_bad.len(), format!("θ = {} is not a root of unity", spec.twists[a]))),
        false,
    );

    let z = centre(spec);
    report.push(
        ring,
        ViolationKind::DegeneracyCoherence,
        closure_witness(ring, &z).map(|(a, b, c)| {
            (
                vec![a, b, c],
                1,
                "degenerate labels are not closed under fusion and duals".to_string(),
            )
        }),
        false,
    );
    report
}

/// Full validation: ring axioms, then twists, then exact dims when present.
pub fn validate_spec(spec: &CategorySpec, opts: RingCheckOptions) -> ValidationReport {
    let mut report = fusion::validate_ring(&spec.ring, opts);
    if !report.passed() {
        return report;
    }
    report.merge(validate_ribbon(spec));
    if let Some(d) = spec.dims() {
        let ring = &spec.ring;
        let u = ring.unit();
        let bad_unit = !d[u].is_one();
        report.push(
            ring,
            ViolationKind::Dimension,
            bad_unit.then(|| (vec![u], 1, format!("d_1 = {}", d[u]))),
            false,
        );
        let not_positive: Vec<Label> = (0..ring.rank())
            .filter(|&a| {
                let z = d[a].to_complex();
                z.im.abs() > 1e-9 || z.re < 1.0 - 1e-9
            })
            .collect();
        report.push(
            ring,
            ViolationKind::Dimension,
            not_positive
                .first()
                .map(|&a| (vec![a], not_positive.len(), format!("d = {} is not a real number ≥ 1", d[a]))),
            false,
        );
        report.push(
            ring,
            ViolationKind::Dimension,
            fusion::exact_dim_witness(ring, d).map(|(a, b, count)| {
                (vec![a, b], count, "d_a·d_b ≠ Σ_c N[a][b][c]·d_c".to_string())
            }),
            false,
        );
    }
    report
}

/// A label bijection `a → b` preserving unit, duals, fusion, twists and
/// (when both carry them) exact dims.
pub fn find_equivalence(a: &CategorySpec, b: &CategorySpec) -> Option<Vec<Label>> {
    let r = a.rank();
    if b.rank() != r {
        return None;
    }
    let compatible = |x: Label, y: Label| {
        a.twists[x] == b.twists[y]
            && match (a.dims(), b.dims()) {
                (Some(da), Some(db)) => da[x] == db[y],
                _ => true,
            }
    };
    let cand: Vec<Vec<Label>> = (0..r)
        .map(|x| (0..r).filter(|&y| compatible(x, y)).collect())
        .collect();
    let mut map = vec![usize::MAX; r];
    let mut used = vec![false; r];
    map[a.ring.unit()] = b.ring.unit();
    used[b.ring.unit()] = true;
    if !compatible(a.ring.unit(), b.ring.unit()) {
        return None;
    }
    let order: Vec<Label> = (0..r).filter(|&x| x != a.ring.unit()).collect();

    fn consistent(a: &CategorySpec, b: &CategorySpec, map: &[Label], x: Label) -> bool {
        let r = a.rank();
        let ax = a.ring.dual(x);
        if map[ax] != usize::MAX && b.ring.dual(map[x]) != map[ax] {
            return false;
        }
        for y in 0..r {
            if map[y] == usize::MAX {
                continue;
            }
            for z in 0..r {
                if map[z] == usize::MAX {
                    continue;
                }
                let (mx, my, mz) = (map[x], map[y], map[z]);
                if a.ring.n(x, y, z) != b.ring.n(mx, my, mz)
                    || a.ring.n(y, x, z) != b.ring.n(my, mx, mz)
                    || a.ring.n(y, z, x) != b.ring.n(my, mz, mx)
                {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        a: &CategorySpec,
        b: &CategorySpec,
        order: &[Label],
        cand: &[Vec<Label>],
        map: &mut Vec<Label>,
        used: &mut Vec<bool>,
        k: usize,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for &y in &cand[x] {
            if used[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if consistent(a, b, map, x) && go(a, b, order, cand, map, used, k + 1) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }

    go(a, b, &order, &cand, &mut map, &mut used, 0).then_some(map)
}
