//! Condensation of a Tannakian subcategory: orbit/stabilizer analysis, the
//! decomposition of the extension functor `Φ`, the condensed category and
//! the checks it must pass.

mod factor;
mod pointed;
mod solve;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use factor::condense_general;
pub use pointed::condense_pointed;
pub use verify::{verify_condensation, Check, CheckReport};

use crate::error::{Error, Result};
use crate::exactnum::CycloNum;
use crate::fusion::Label;
use crate::ribbon::{self, CategorySpec};
use crate::tannakian::{Cocycle, GroupData, TannakianSubcat};

/// How the stabilizer cocycle of an orbit was fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CocycleStatus {
    /// Non-pointed subcategory: no stabilizer analysis.
    NotApplicable,
    /// `H²` of the stabilizer is trivial.
    Forced { class_id: u64 },
    Override { class_id: u64 },
    Inferred { class_id: u64 },
    RequiredFromUser { candidates: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    pub labels: Vec<String>,
    #[serde(skip)]
    pub label_idx: Vec<Label>,
    pub representative: String,
    /// Subcategory labels fixing the orbit, in group-element order.
    pub stabilizer: Option<Vec<String>>,
    /// Multiplication table of the stabilizer on `0..|H|`.
    pub stabilizer_table: Option<Vec<Vec<usize>>>,
    pub index: Option<u64>,
    /// Invariant factors of `H²` of the stabilizer.
    pub h2: Option<Vec<u64>>,
    pub cocycle: CocycleStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub pointed: bool,
    pub orbits: Vec<OrbitInfo>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pointed,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationResult {
    pub condensed: CategorySpec,
    /// `m[η][x]`: multiplicity of condensed label `x` in `Φ(η)`.
    pub m: Vec<Vec<u64>>,
    pub report: OrbitReport,
    pub subcategory: Vec<String>,
    pub group_order: u64,
    pub method: Method,
}

impl CondensationResult {
    /// Nonzero entries of `m` as `(η, x, multiplicity)` by name.
    pub fn phi_entries(&self, original: &CategorySpec) -> Vec<(String, String, u64)> {
        let mut out = Vec::new();
        for (eta, row) in self.m.iter().enumerate() {
            for (x, &v) in row.iter().enumerate() {
                if v != 0 {
                    out.push((original.name(eta).to_string(), self.condensed.name(x).to_string(), v));
                }
            }
        }
        out
    }
}

/// User-fixed stabilizer cocycle for one orbit, keyed by the orbit
/// representative's name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CocycleOverride {
    ClassId(u64),
    /// Values `c(g, h)` on the stabilizer in its element order.
    Values(Cocycle),
}

#[derive(Debug, Clone, Default)]
pub struct CondenseOptions {
    pub group: Option<GroupData>,
    pub cocycles: BTreeMap<String, CocycleOverride>,
}

/// Integer dimension of a subcategory label.
pub(crate) fn t_dims(spec: &CategorySpec, t: &TannakianSubcat) -> Result<Vec<u64>> {
    let dims = spec.exact_dims()?;
    t.label_idx
        .iter()
        .map(|&k| {
            dims[k]
                .to_rational()
                .filter(|q| q.is_integer())
                .and_then(|q| num_traits::ToPrimitive::to_u64(&q.to_integer()))
                .ok_or_else(|| Error::InvalidSubcategory(format!("`{}` has non-integer dimension", spec.name(k))))
        })
        .collect()
}

/// Checks that `t` is a closed set of degenerate bosons of `spec`. The first
/// non-degenerate label is reported with its witness channel.
pub(crate) fn check_subcategory(spec: &CategorySpec, t: &TannakianSubcat) -> Result<()> {
    let r = spec.rank();
    if t.label_idx.iter().any(|&k| k >= r) {
        return Err(Error::InvalidSubcategory("label index out of range".into()));
    }
    if !t.label_idx.contains(&spec.ring().unit()) {
        return Err(Error::InvalidSubcategory("the subcategory must contain the unit".into()));
    }
    for &k in &t.label_idx {
        if let Some(w) = ribbon::is_degenerate(spec, k).witness {
            return Err(Error::DegeneracyViolation {
                label: spec.name(k).to_string(),
                partner: spec.name(w.partner).to_string(),
                channel: spec.name(w.channel).to_string(),
                phase: w.phase.to_string(),
            });
        }
        if !spec.twist(k).is_one() {
            return Err(Error::InvalidSubcategory(format!("`{}` is not a boson", spec.name(k))));
        }
    }
    if let Some((a, b, c)) = ribbon::closure_witness(spec.ring(), &t.label_idx) {
        return Err(Error::InvalidSubcategory(format!(
            "not closed: `{}` ⊗ `{}` contains `{}`",
            spec.name(a),
            spec.name(b),
            spec.name(c)
        )));
    }
    Ok(())
}

/// `Σ_k d_k · N[γ_k][η1][η2]`.
pub fn extended_hom(spec: &CategorySpec, t: &TannakianSubcat, eta1: Label, eta2: Label) -> Result<u64> {
    let r = spec.rank();
    if eta1 >= r || eta2 >= r || t.label_idx.iter().any(|&k| k >= r) {
        return Err(Error::InvalidSubcategory("labels out of range".into()));
    }
    let d = t_dims(spec, t)?;
    Ok(t
        .label_idx
        .iter()
        .zip(&d)
        .map(|(&k, &dk)| dk * spec.ring().n(k, eta1, eta2) as u64)
        .sum())
}

/// The full extended-hom matrix.
pub fn extended_hom_matrix(spec: &CategorySpec, t: &TannakianSubcat) -> Result<Vec<Vec<u64>>> {
    let r = spec.rank();
    let d = t_dims(spec, t)?;
    let ring = spec.ring();
    Ok(crate::par::map_range(r, |a| {
        (0..r)
            .map(|b| {
                t.label_idx
                    .iter()
                    .zip(&d)
                    .map(|(&k, &dk)| dk * ring.n(k, a, b) as u64)
                    .sum()
            })
            .collect()
    }))
}

/// Orbits of labels under fusion with `t`. Pointed subcategories also get
/// stabilizers; twist and dimension constancy on orbits are asserted.
pub fn orbits_and_stabilizers(spec: &CategorySpec, t: &TannakianSubcat) -> Result<OrbitReport> {
    pointed::orbit_report(spec, t)
}

/// Condenses `t`, choosing the pointed or general algorithm.
pub fn condense(spec: &CategorySpec, t: &TannakianSubcat, opts: &CondenseOptions) -> Result<CondensationResult> {
    if t.pointed {
        condense_pointed(spec, t, &opts.cocycles)
    } else {
        condense_general(spec, t, opts.group.as_ref())
    }
}

pub(crate) fn sum_dims_sq(dims: &[CycloNum]) -> CycloNum {
    dims.iter().map(|d| d * d).sum()
}
