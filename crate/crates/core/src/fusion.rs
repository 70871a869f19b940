//! Fusion-ring data: labels, unit, duals and the multiplicity tensor.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::CycloNum;
use crate::par;

/// Index of a simple object. Labels are totally ordered by index and every
/// report lists them in that order.
pub type Label = usize;

/// Skeletal fusion ring. `N[a][b][c]` is the multiplicity of `c` in `a ⊗ b`,
/// stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRingData {
    labels: Vec<String>,
    unit: Label,
    dual: Vec<Label>,
    mult: Vec<u32>,
}

impl FusionRingData {
    /// Builds a ring from sparse `(a, b, c, multiplicity)` entries. Only
    /// structural problems are reported here; the axioms are checked by
    /// [`validate_ring`].
    pub fn new(
        labels: Vec<String>,
        unit: Label,
        dual: Vec<Label>,
        entries: impl IntoIterator<Item = (Label, Label, Label, u32)>,
    ) -> Result<Self> {
        let r = labels.len();
        if r == 0 {
            return Err(Error::Structural("a fusion ring needs at least one label".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Structural(format!("duplicate label name `{l}`")));
            }
        }
        if unit >= r {
            return Err(Error::Structural(format!("unit index {unit} out of range")));
        }
        if dual.len() != r {
            return Err(Error::Structural(format!(
                "dual map has {} entries for {r} labels",
                dual.len()
            )));
        }
        if let Some(&d) = dual.iter().find(|&&d| d >= r) {
            return Err(Error::Structural(format!("dual index {d} out of range")));
        }
        let mut mult = vec![0u32; r * r * r];
        for (a, b, c, m) in entries {
            if a >= r || b >= r || c >= r {
                return Err(Error::Structural(format!(
                    "fusion entry ({a}, {b}, {c}) out of range for rank {r}"
                )));
            }
            mult[(a * r + b) * r + c] = m;
        }
        Ok(FusionRingData {
            labels,
            unit,
            dual,
            mult,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a]
    }

    pub fn duals(&self) -> &[Label] {
        &self.dual
    }

    pub fn name(&self, a: Label) -> &str {
        &self.labels[a]
    }

    pub fn names(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, name: &str) -> Result<Label> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// `N[a][b][c]`.
    #[inline]
    pub fn n(&self, a: Label, b: Label, c: Label) -> u32 {
        let r = self.labels.len();
        self.mult[(a * r + b) * r + c]
    }

    pub fn set_n(&mut self, a: Label, b: Label, c: Label, m: u32) {
        let r = self.labels.len();
        self.mult[(a * r + b) * r + c] = m;
    }

    pub fn set_dual(&mut self, a: Label, d: Label) {
        self.dual[a] = d;
    }

    /// Channels of `a ⊗ b` with their multiplicities.
    pub fn channels(&self, a: Label, b: Label) -> impl Iterator<Item = (Label, u32)> + '_ {
        (0..self.rank()).filter_map(move |c| {
            let m = self.n(a, b, c);
            (m > 0).then_some((c, m))
        })
    }

    /// Non-zero entries as `(a, b, c, multiplicity)` in index order.
    pub fn entries(&self) -> Vec<(Label, Label, Label, u32)> {
        let r = self.rank();
        let mut out = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let m = self.n(a, b, c);
                    if m > 0 {
                        out.push((a, b, c, m));
                    }
                }
            }
        }
        out
    }

    pub fn with_names(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::Structural("label count mismatch".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    fn check(&self, a: Label) -> Result<()> {
        if a < self.rank() {
            Ok(())
        } else {
            Err(Error::UnknownLabel(format!("#{a}")))
        }
    }
}

/// A formal direct sum `⊕ m_a·a`. Zero multiplicities are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ObjectVec(BTreeMap<Label, u64>);

impl ObjectVec {
    pub fn zero() -> Self {
        ObjectVec(BTreeMap::new())
    }

    pub fn simple(a: Label) -> Self {
        Self::from_pairs([(a, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, u64)>) -> Self {
        let mut v = ObjectVec::zero();
        for (a, m) in pairs {
            v.add_simple(a, m);
        }
        v
    }

    pub fn add_simple(&mut self, a: Label, m: u64) {
        if m > 0 {
            *self.0.entry(a).or_insert(0) += m;
        }
    }

    pub fn multiplicity(&self, a: Label) -> u64 {
        self.0.get(&a).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, u64)> + '_ {
        self.0.iter().map(|(&a, &m)| (a, m))
    }

    /// Direct sum.
    pub fn plus(&self, other: &ObjectVec) -> ObjectVec {
        let mut out = self.clone();
        for (a, m) in other.iter() {
            out.add_simple(a, m);
        }
        out
    }

    /// Sorted support with multiplicities.
    pub fn decompose(&self) -> Vec<(Label, u64)> {
        self.iter().collect()
    }

    /// Image under a label permutation such as the dual map.
    pub fn map_labels(&self, f: impl Fn(Label) -> Label) -> ObjectVec {
        Self::from_pairs(self.iter().map(|(a, m)| (f(a), m)))
    }
}

/// Bilinear extension of the fusion tensor.
pub fn fuse(ring: &FusionRingData, x: &ObjectVec, y: &ObjectVec) -> Result<ObjectVec> {
    let mut out = ObjectVec::zero();
    for (a, ma) in x.iter() {
        ring.check(a)?;
        for (b, mb) in y.iter() {
            ring.check(b)?;
            for (c, n) in ring.channels(a, b) {
                out.add_simple(c, ma * mb * n as u64);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DualInvolution,
    UnitLaw,
    Rigidity,
    Associativity,
    FrobeniusSymmetry,
    Dimension,
    UnitTwist,
    DualTwist,
    TwistModulus,
    TwistNotRootOfUnity,
    DegeneracyCoherence,
}

/// One violated axiom: the first witness in label order and how many
/// witnesses exist in total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<String>,
    #[serde(skip)]
    pub witness_idx: Vec<Label>,
    pub count: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn find(&self, kind: ViolationKind) -> Option<&Violation> {
        self.violations.iter().find(|v| v.kind == kind)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    pub(crate) fn push(
        &mut self,
        ring: &FusionRingData,
        kind: ViolationKind,
        found: Option<(Vec<Label>, usize, String)>,
        warn: bool,
    ) {
        if let Some((witness_idx, count, detail)) = found {
            let v = Violation {
                kind,
                witness: witness_idx.iter().map(|&a| ring.name(a).to_string()).collect(),
                witness_idx,
                count,
                detail,
            };
            if warn {
                self.warnings.push(v);
            } else {
                self.violations.push(v);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RingCheckOptions {
    /// Report Frobenius-symmetry failures as warnings instead of violations.
    pub frobenius_as_warning: bool,
}

/// Scans all index tuples of length `k` in lexicographic order for failures
/// of `pred`, returning the first failing tuple, the failure count and the
/// detail for the first failure.
fn scan<F>(r: usize, k: usize, pred: F) -> Option<(Vec<Label>, usize, String)>
where
    F: Fn(&[Label]) -> Option<String> + Sync + Send,
{
    // parallel over the leading index, sequential inside
    let per_lead = par::map_range(r, |a| {
        let mut first: Option<(Vec<Label>, String)> = None;
        let mut count = 0usize;
        let mut idx = vec![0; k];
        idx[0] = a;
        let inner = r.pow(k as u32 - 1);
        for t in 0..inner {
            let mut rest = t;
            for slot in idx[1..].iter_mut().rev() {
                *slot = rest % r;
                rest /= r;
            }
            if let Some(detail) = pred(&idx) {
                count += 1;
                if first.is_none() {
                    first = Some((idx.clone(), detail));
                }
            }
        }
        (first, count)
    });
    let total: usize = per_lead.iter().map(|(_, c)| c).sum();
    per_lead
        .into_iter()
        .find_map(|(f, _)| f)
        .map(|(w, d)| (w, total, d))
}

/// Checks the fusion-ring axioms. Labels are scanned in index order so the
/// reported witnesses are the lexicographically first failing tuples.
pub fn validate_ring(ring: &FusionRingData, opts: RingCheckOptions) -> ValidationReport {
    let r = ring.rank();
    let u = ring.unit();
    let mut report = ValidationReport::default();

    let dual_bad = (0..r)
        .filter(|&a| ring.dual(ring.dual(a)) != a || (a == u && ring.dual(a) != u))
        .collect::<Vec<_>>();
    report.push(
        ring,
        ViolationKind::DualInvolution,
        dual_bad.first().map(|&a| {
            (
                vec![a],
                dual_bad.len(),
                format!("dual(dual({0})) = {1}", ring.name(a), ring.name(ring.dual(ring.dual(a)))),
            )
        }),
        false,
    );

    report.push(
        ring,
        ViolationKind::UnitLaw,
        scan(r, 2, |t| {
            let (b, c) = (t[0], t[1]);
            let want = (b == c) as u32;
            let (l, rr) = (ring.n(u, b, c), ring.n(b, u, c));
            (l != want || rr != want).then(|| format!("N[1][b][c] = {l}, N[b][1][c] = {rr}, expected {want}"))
        }),
        false,
    );

    report.push(
        ring,
        ViolationKind::Rigidity,
        scan(r, 2, |t| {
            let (a, b) = (t[0], t[1]);
            let want = (b == ring.dual(a)) as u32;
            let got = ring.n(a, b, u);
            (got != want).then(|| format!("N[a][b][1] = {got}, expected {want}"))
        }),
        false,
    );

    report.push(
        ring,
        ViolationKind::Associativity,
        scan(r, 4, |t| {
            let (a, b, c, d) = (t[0], t[1], t[2], t[3]);
            let left: u64 = (0..r).map(|e| ring.n(a, b, e) as u64 * ring.n(e, c, d) as u64).sum();
            let right: u64 = (0..r).map(|f| ring.n(b, c, f) as u64 * ring.n(a, f, d) as u64).sum();
            (left != right).then(|| format!("(a⊗b)⊗c has {left} copies of d, a⊗(b⊗c) has {right}"))
        }),
        false,
    );

    report.push(
        ring,
        ViolationKind::FrobeniusSymmetry,
        scan(r, 3, |t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            let x = ring.n(a, b, c);
            let y = ring.n(ring.dual(a), c, b);
            let z = ring.n(c, ring.dual(b), a);
            (x != y || x != z).then(|| format!("N[a][b][c] = {x}, N[ā][c][b] = {y}, N[c][b̄][a] = {z}"))
        }),
        opts.frobenius_as_warning,
    );

    report
}

/// First `(a, b)` with `d_a·d_b ≠ Σ_c N[a][b][c]·d_c`, checked exactly.
pub fn exact_dim_witness(ring: &FusionRingData, dims: &[CycloNum]) -> Option<(Label, Label, usize)> {
    let r = ring.rank();
    let failures = par::map_range(r, |a| {
        let mut first = None;
        let mut count = 0;
        for b in 0..r {
            let lhs = &dims[a] * &dims[b];
            let rhs: CycloNum = ring
                .channels(a, b)
                .map(|(c, m)| dims[c].scale(&crate::exactnum::rat(m as i64, 1)))
                .sum();
            if lhs != rhs {
                count += 1;
                first.get_or_insert(b);
            }
        }
        (first, count)
    });
    let total = failures.iter().map(|f| f.1).sum();
    failures
        .iter()
        .enumerate()
        .find_map(|(a, (f, _))| f.map(|b| (a, b, total)))
}

/// Perron–Frobenius dimensions with a multiplicativity certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpDims {
    pub dims: Vec<f64>,
    pub global_dim: f64,
    pub certificate: DimCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimCertificate {
    /// True when the identities were checked on exact cyclotomic dims.
    pub exact: bool,
    pub passed: bool,
    pub witness: Option<(String, String)>,
}

const PF_TOL: f64 = 1e-12;
const PF_MAX_ITER: usize = 10_000;
const CERT_TOL: f64 = 1e-9;

/// Perron–Frobenius dimensions by power iteration on `Σ_a N_a`, whose
/// positive eigenvector is `(d_b)_b`. When exact dims are supplied the
/// certificate checks `d_a d_b = Σ_c N[a][b][c] d_c` exactly; otherwise it
/// checks the same identity numerically.
pub fn fp_dims(ring: &FusionRingData, exact: Option<&[CycloNum]>) -> Result<FpDims> {
    let r = ring.rank();
    let mut total = vec![0f64; r * r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                total[b * r + c] += ring.n(a, b, c) as f64;
            }
        }
    }
    let mut v = vec![1f64; r];
    let mut converged = false;
    for _ in 0..PF_MAX_ITER {
        let mut w: Vec<f64> = (0..r)
            .map(|b| (0..r).map(|c| total[b * r + c] * v[c]).sum())
            .collect();
        let norm = w.iter().cloned().fold(0f64, f64::max);
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidData("fusion matrix has no positive eigenvector".into()));
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0f64, f64::max);
        v = w;
        if delta < PF_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::InvalidData("power iteration did not converge".into()));
    }
    let scale = v[ring.unit()];
    if scale <= 0.0 {
        return Err(Error::InvalidData("unit has zero Perron–Frobenius weight".into()));
    }
    let dims: Vec<f64> = v.iter().map(|x| x / scale).collect();
    if let Some(a) = (0..r).find(|&a| dims[a] < 1.0 - CERT_TOL) {
        return Err(Error::InvalidData(format!(
            "label `{}` has Perron–Frobenius dimension {} < 1",
            ring.name(a),
            dims[a]
        )));
    }
    let global_dim = dims.iter().map(|d| d * d).sum();

    let certificate = match exact {
        Some(ed) => {
            if ed.len() != r {
                return Err(Error::Structural("dims length differs from label count".into()));
            }
            let w = exact_dim_witness(ring, ed);
            DimCertificate {
                exact: true,
                passed: w.is_none(),
                witness: w.map(|(a, b, _)| (ring.name(a).to_string(), ring.name(b).to_string())),
            }
        }
        None => {
            let mut witness = None;
            'outer: for a in 0..r {
                for b in 0..r {
                    let rhs: f64 = ring.channels(a, b).map(|(c, m)| m as f64 * dims[c]).sum();
                    if (dims[a] * dims[b] - rhs).abs() > CERT_TOL * rhs.max(1.0) {
                        witness = Some((ring.name(a).to_string(), ring.name(b).to_string()));
                        break 'outer;
                    }
                }
            }
            DimCertificate {
                exact: false,
                passed: witness.is_none(),
                witness,
            }
        }
    };
    Ok(FpDims {
        dims,
        global_dim,
        certificate,
    })
}
