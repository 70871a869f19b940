//! Tannakian subcategories of the centre and recognition of their groups.

pub mod cohomology;
pub mod group;

use std::collections::BTreeMap;

use serde::Serialize;

pub use cohomology::{h2, projective_irrep_profile, Cocycle, CocycleClass, H2Group, ProjectiveProfile};
pub use group::FiniteGroup;

use crate::error::{Error, Result};
use crate::exactnum::{rat, CycloNum};
use crate::fusion::Label;
use crate::ribbon::{self, CategorySpec};

/// A fusion-closed set of degenerate bosons, `Rep(G)` for some group `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TannakianSubcat {
    pub labels: Vec<String>,
    #[serde(skip)]
    pub label_idx: Vec<Label>,
    /// Degenerate labels with twist −1, left out of the subcategory.
    pub fermions: Vec<String>,
    /// `Σ d²` over the subcategory, the order of its group.
    pub group_order: u64,
    pub pointed: bool,
}

fn integer_dim(spec: &CategorySpec, a: Label) -> Result<u64> {
    let d = spec.exact_dims()?[a]
        .to_rational()
        .filter(|q| q.is_integer())
        .ok_or_else(|| {
            Error::DataInconsistency(format!(
                "degenerate boson `{}` has non-integer dimension",
                spec.name(a)
            ))
        })?;
    u64::try_from(d.to_integer())
        .map_err(|_| Error::DataInconsistency(format!("dimension of `{}` out of range", spec.name(a))))
}

/// The maximal Tannakian subcategory of the centre: its degenerate labels
/// with trivial twist, pruned until closed under fusion and duals.
pub fn maximal_tannakian(spec: &CategorySpec) -> Result<TannakianSubcat> {
    let z = ribbon::centre(spec);
    let fermions: Vec<Label> = z
        .iter()
        .copied()
        .filter(|&a| *spec.twist(a) == CycloNum::from_int(-1))
        .collect();
    let mut t: Vec<Label> = z.iter().copied().filter(|&a| spec.twist(a).is_one()).collect();
    let ring = spec.ring();
    loop {
        if let Some(pos) = t.iter().position(|&a| !t.contains(&ring.dual(a))) {
            t.remove(pos);
            continue;
        }
        match ribbon::closure_witness(ring, &t) {
            // drop the later factor; 1 ⊗ 1 = 1 so the unit is never dropped
            Some((a, b, _)) => t.retain(|&x| x != a.max(b)),
            None => break,
        }
    }
    let mut group_order = 0u64;
    let mut pointed = true;
    for &a in &t {
        let d = integer_dim(spec, a)?;
        pointed &= d == 1;
        group_order += d * d;
    }
    Ok(TannakianSubcat {
        labels: t.iter().map(|&a| spec.name(a).to_string()).collect(),
        label_idx: t,
        fermions: fermions.iter().map(|&a| spec.name(a).to_string()).collect(),
        group_order,
        pointed,
    })
}

/// Builds a subcategory record from explicit label names, checking that
/// they are degenerate bosons closed under fusion and duals. A
/// non-degenerate label is reported with its first nontrivial channel.
pub fn subcategory_from_labels(spec: &CategorySpec, names: &[String]) -> Result<TannakianSubcat> {
    let mut idx = names
        .iter()
        .map(|n| spec.index_of(n))
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    if !idx.contains(&spec.ring().unit()) {
        return Err(Error::InvalidSubcategory("the subcategory must contain the unit".into()));
    }
    for &a in &idx {
        if let Some(w) = ribbon::is_degenerate(spec, a).witness {
            return Err(Error::DegeneracyViolation {
                label: spec.name(a).to_string(),
                partner: spec.name(w.partner).to_string(),
                channel: spec.name(w.channel).to_string(),
                phase: w.phase.to_string(),
            });
        }
        if !spec.twist(a).is_one() {
            return Err(Error::InvalidSubcategory(format!("`{}` is not a boson", spec.name(a))));
        }
    }
    if let Some((a, b, c)) = ribbon::closure_witness(spec.ring(), &idx) {
        return Err(Error::InvalidSubcategory(format!(
            "not closed: `{}` ⊗ `{}` contains `{}`",
            spec.name(a),
            spec.name(b),
            spec.name(c)
        )));
    }
    let mut group_order = 0;
    let mut pointed = true;
    for &a in &idx {
        let d = integer_dim(spec, a)?;
        pointed &= d == 1;
        group_order += d * d;
    }
    Ok(TannakianSubcat {
        labels: idx.iter().map(|&a| spec.name(a).to_string()).collect(),
        label_idx: idx,
        fermions: Vec::new(),
        group_order,
        pointed,
    })
}

/// The subcategory of all invertible degenerate bosons.
pub fn pointed_part(spec: &CategorySpec, sub: &TannakianSubcat) -> Result<TannakianSubcat> {
    let names: Vec<String> = sub
        .label_idx
        .iter()
        .filter(|&&a| integer_dim(spec, a).map(|d| d == 1).unwrap_or(false))
        .map(|&a| spec.name(a).to_string())
        .collect();
    subcategory_from_labels(spec, &names)
}

/// A user-supplied group with its character table. Columns of the table
/// are conjugacy classes ordered by their smallest element index; rows are
/// irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupData {
    pub group: FiniteGroup,
    pub characters: Vec<Vec<CycloNum>>,
    /// Category label name to row of the character table.
    pub label_to_irrep: BTreeMap<String, usize>,
}

/// The group of a Tannakian subcategory together with the correspondence
/// between its simples and group data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedGroup {
    pub group: FiniteGroup,
    /// Pointed case: `labels[g]` is the label acting as group element `g`.
    /// Otherwise `labels[i]` is the label of irreducible character `i`.
    pub labels: Vec<Label>,
    pub pointed: bool,
    pub characters: Option<Vec<Vec<CycloNum>>>,
}

/// Identifies the group of `sub`: read off the fusion rules when pointed,
/// otherwise verified against `data`.
pub fn recognize_group(
    spec: &CategorySpec,
    sub: &TannakianSubcat,
    data: Option<&GroupData>,
) -> Result<RecognizedGroup> {
    if sub.pointed {
        let ring = spec.ring();
        let t = &sub.label_idx;
        let pos = |c: Label| t.iter().position(|&x| x == c);
        let mut rows = Vec::with_capacity(t.len());
        for &a in t {
            let mut row = Vec::with_capacity(t.len());
            for &b in t {
                let ch: Vec<(Label, u32)> = ring.channels(a, b).collect();
                match ch.as_slice() {
                    [(c, 1)] => row.push(pos(*c).ok_or_else(|| {
                        Error::InvalidSubcategory("subcategory not closed under fusion".into())
                    })?),
                    _ => {
                        return Err(Error::DataInconsistency(format!(
                            "`{}` ⊗ `{}` is not a single invertible",
                            spec.name(a),
                            spec.name(b)
                        )))
                    }
                }
            }
            rows.push(row);
        }
        let group = FiniteGroup::from_table(rows)?;
        return Ok(RecognizedGroup {
            group,
            labels: t.clone(),
            pointed: true,
            characters: None,
        });
    }
    let data = data.ok_or_else(|| {
        Error::NeedsGroup(format!(
            "the Tannakian subcategory {{{}}} is not pointed; supply its group and character table",
            sub.labels.join(", ")
        ))
    })?;
    verify_group(spec, sub, data)
}

fn mismatch(reason: impl Into<String>) -> Error {
    Error::GroupMismatch {
        reason: reason.into(),
        triple: None,
    }
}

fn verify_group(spec: &CategorySpec, sub: &TannakianSubcat, data: &GroupData) -> Result<RecognizedGroup> {
    let g = &data.group;
    let order = g.order() as u64;
    let classes = g.conjugacy_classes();
    let chars = &data.characters;
    let k = sub.label_idx.len();
    if chars.len() != k {
        return Err(mismatch(format!("{} characters for {k} labels", chars.len())));
    }
    if classes.len() != k {
        return Err(mismatch(format!(
            "the group has {} conjugacy classes but the subcategory has {k} simples",
            classes.len()
        )));
    }
    if chars.iter().any(|row| row.len() != classes.len()) {
        return Err(mismatch("character rows must have one entry per conjugacy class"));
    }
    if sub.group_order != order {
        return Err(mismatch(format!(
            "Σ d² = {} but |G| = {order}",
            sub.group_order
        )));
    }
    let mut labels = vec![usize::MAX; k];
    for (name, &i) in &data.label_to_irrep {
        let a = spec.index_of(name)?;
        if !sub.label_idx.contains(&a) {
            return Err(mismatch(format!("`{name}` is not in the subcategory")));
        }
        if i >= k || labels[i] != usize::MAX {
            return Err(mismatch(format!("irrep index {i} for `{name}` is out of range or repeated")));
        }
        labels[i] = a;
    }
    if labels.contains(&usize::MAX) {
        return Err(mismatch("every subcategory label needs an irrep"));
    }
    let id_class = classes
        .iter()
        .position(|c| c.contains(&g.identity()))
        .expect("identity has a class");
    let dims = spec.exact_dims()?;
    for (i, &a) in labels.iter().enumerate() {
        if chars[i][id_class] != dims[a] {
            return Err(mismatch(format!(
                "χ(e) = {} but d_{} = {}",
                chars[i][id_class],
                spec.name(a),
                dims[a]
            )));
        }
    }
    if g.is_abelian() && sub.label_idx.iter().any(|&a| !dims[a].is_one()) {
        return Err(mismatch("an abelian group has only one-dimensional irreps"));
    }

    let inv_order = rat(1, order as i64);
    let ring = spec.ring();
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate() {
            for (l, &c) in labels.iter().enumerate() {
                let sum: CycloNum = classes
                    .iter()
                    .enumerate()
                    .map(|(x, cls)| {
                        (&(&chars[i][x] * &chars[j][x]) * &chars[l][x].conj())
                            .scale(&rat(cls.len() as i64, 1))
                    })
                    .sum();
                let n = sum.scale(&inv_order);
                if n != CycloNum::from_int(ring.n(a, b, c) as i64) {
                    return Err(Error::GroupMismatch {
                        reason: format!(
                            "character multiplicity {n} differs from N = {}",
                            ring.n(a, b, c)
                        ),
                        triple: Some((
                            spec.name(a).to_string(),
                            spec.name(b).to_string(),
                            spec.name(c).to_string(),
                        )),
                    });
                }
            }
        }
    }
    Ok(RecognizedGroup {
        group: g.clone(),
        labels,
        pointed: false,
        characters: Some(chars.clone()),
    })
}
