//! Independent re-checks of a condensation result.

use serde::Serialize;

use super::{extended_hom_matrix, sum_dims_sq, CondensationResult};
use crate::exactnum::{rat, CycloNum};
use crate::fusion::RingCheckOptions;
use crate::ribbon::{self, CategorySpec};
use crate::tannakian::TannakianSubcat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
    /// Whether the condensed category has trivial centre.
    pub condensed_modular: bool,
    /// Whether the condensed subcategory was the whole centre.
    pub full_centre: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &'static str, failure: Option<String>) {
        self.checks.push(Check {
            name,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        });
    }
}

/// Re-asserts every invariant of a condensation: Gram identity, dimension
/// and global-dimension conservation, twist inheritance, dominance, the
/// decategorified monoidality of `Φ`, validity of the condensed data, and
/// that the condensed centre is trivial exactly when `t` was the whole
/// centre.
pub fn verify_condensation(result: &CondensationResult, original: &CategorySpec, t: &TannakianSubcat) -> CheckReport {
    let mut report = CheckReport {
        checks: Vec::new(),
        condensed_modular: false,
        full_centre: false,
    };
    let m = &result.m;
    let c = &result.condensed;
    let r = original.rank();
    let k = c.rank();

    let shape_ok = m.len() == r && m.iter().all(|row| row.len() == k);
    report.push("shape", (!shape_ok).then(|| format!("m is not {r}×{k}")));
    if !shape_ok {
        return report;
    }

    let gram = extended_hom_matrix(original, t);
    report.push(
        "gram",
        match &gram {
            Err(e) => Some(e.to_string()),
            Ok(ext) => (0..r)
                .flat_map(|a| (0..r).map(move |b| (a, b)))
                .find(|&(a, b)| (0..k).map(|x| m[a][x] * m[b][x]).sum::<u64>() != ext[a][b])
                .map(|(a, b)| format!("M ≠ m·mᵀ at ({}, {})", original.name(a), original.name(b))),
        },
    );

    let (Some(d), Some(dx)) = (original.dims(), c.dims()) else {
        report.push("dimensions", Some("exact dims missing".into()));
        return report;
    };
    let scaled = |x: usize, v: u64| dx[x].scale(&rat(v as i64, 1));
    report.push(
        "dimension_preservation",
        (0..r)
            .find(|&eta| (0..k).filter(|&x| m[eta][x] > 0).map(|x| scaled(x, m[eta][x])).sum::<CycloNum>() != d[eta])
            .map(|eta| format!("Σ_x m[{0}][x]·d_x ≠ d_{0}", original.name(eta))),
    );

    let lhs = sum_dims_sq(dx);
    let rhs = sum_dims_sq(d).scale(&rat(1, result.group_order as i64));
    report.push(
        "global_dimension",
        (lhs != rhs).then(|| format!("Σ d_x² = {lhs} but Σ d_η²/|G| = {rhs}")),
    );

    report.push(
        "twist_inheritance",
        (0..r)
            .flat_map(|eta| (0..k).map(move |x| (eta, x)))
            .find(|&(eta, x)| m[eta][x] > 0 && c.twist(x) != original.twist(eta))
            .map(|(eta, x)| format!("θ_{} ≠ θ_{}", c.name(x), original.name(eta))),
    );

    report.push(
        "dominance",
        (0..k)
            .find(|&x| (0..r).all(|eta| m[eta][x] == 0))
            .map(|x| format!("`{}` occurs in no Φ(η)", c.name(x))),
    );

    // Φ(a ⊗ b) = Φ(a) ⊗ Φ(b) in the condensed ring
    let (ro, rc) = (original.ring(), c.ring());
    let homomorphism = (0..r).flat_map(|a| (0..r).map(move |b| (a, b))).find(|&(a, b)| {
        let mut left = vec![0u64; k];
        for (e, n) in ro.channels(a, b) {
            for (z, l) in left.iter_mut().enumerate() {
                *l += n as u64 * m[e][z];
            }
        }
        let mut right = vec![0u64; k];
        for x in (0..k).filter(|&x| m[a][x] > 0) {
            for y in (0..k).filter(|&y| m[b][y] > 0) {
                for (z, n) in rc.channels(x, y) {
                    right[z] += m[a][x] * m[b][y] * n as u64;
                }
            }
        }
        left != right
    });
    report.push(
        "ring_homomorphism",
        homomorphism.map(|(a, b)| format!("Φ({0}⊗{1}) ≠ Φ({0})⊗Φ({1})", original.name(a), original.name(b))),
    );

    let validity = ribbon::validate_spec(c, RingCheckOptions::default());
    report.push(
        "condensed_validity",
        (!validity.passed()).then(|| {
            validity
                .violations
                .iter()
                .map(|v| format!("{:?} at {:?}", v.kind, v.witness))
                .collect::<Vec<_>>()
                .join("; ")
        }),
    );

    let centre_orig = ribbon::centre(original);
    let mut t_sorted = t.label_idx.clone();
    t_sorted.sort_unstable();
    report.full_centre = t_sorted == centre_orig;
    report.condensed_modular = ribbon::centre(c) == [c.ring().unit()];
    report.push(
        "centre_criterion",
        (report.full_centre != report.condensed_modular).then(|| {
            format!(
                "condensed centre trivial: {}, subcategory is the whole centre: {}",
                report.condensed_modular, report.full_centre
            )
        }),
    );
    report
}
