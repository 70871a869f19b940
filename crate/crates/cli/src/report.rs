use std::fmt::Write as _;

use modcat_core::fusion;
use modcat_core::ribbon::{self, CategorySpec, ModularityOptions, ModularityReport};
use modcat_core::tannakian::{self, GroupData, TannakianSubcat};
use modcat_core::{CycloNum, Error};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GroupStatus {
    /// `pointed`, `verified`, `needs_group` or `mismatch`.
    pub status: &'static str,
    pub order: Option<usize>,
    pub abelian: Option<bool>,
    /// Invariant factors of the Schur multiplier.
    pub h2: Option<Vec<u64>>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TannakianReport {
    #[serde(flatten)]
    pub sub: TannakianSubcat,
    pub group: GroupStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub labels: Vec<String>,
    pub dims: Option<Vec<CycloNum>>,
    pub dims_approx: Vec<f64>,
    pub global_dim: Option<CycloNum>,
    pub global_dim_approx: f64,
    pub modularity: ModularityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_matrix: Option<Vec<Vec<CycloNum>>>,
    pub verlinde: Option<bool>,
    pub tannakian: Option<TannakianReport>,
    pub verdict: String,
}

fn group_status(spec: &CategorySpec, sub: &TannakianSubcat, data: Option<&GroupData>) -> Result<GroupStatus, Error> {
    let status = if sub.pointed { "pointed" } else { "verified" };
    match tannakian::recognize_group(spec, sub, data) {
        Ok(rg) => {
            let h2 = tannakian::h2(&rg.group).ok().map(|h| h.invariants().to_vec());
            Ok(GroupStatus {
                status,
                order: Some(rg.group.order()),
                abelian: Some(rg.group.is_abelian()),
                h2,
                detail: None,
            })
        }
        Err(e @ Error::NeedsGroup(_)) => Ok(GroupStatus {
            status: "needs_group",
            order: None,
            abelian: None,
            h2: None,
            detail: Some(e.to_string()),
        }),
        Err(e @ Error::GroupMismatch { .. }) => Ok(GroupStatus {
            status: "mismatch",
            order: None,
            abelian: None,
            h2: None,
            detail: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

pub fn analyze(
    spec: &CategorySpec,
    show_s: bool,
    numeric_fallback: bool,
    data: Option<&GroupData>,
) -> Result<AnalyzeReport, Error> {
    let fp = fusion::fp_dims(spec.ring(), spec.dims())?;
    let modularity = ribbon::is_modular(spec, ModularityOptions { numeric_fallback })?;
    let exact = spec.dims().is_some();
    let global_dim = spec.dims().map(|d| {
        d.iter()
            .fold(CycloNum::zero(), |acc, x| &acc + &(x * &x.conj()))
    });
    let s_matrix = if show_s && exact {
        Some(ribbon::s_matrix(spec)?.entries)
    } else {
        None
    };
    let verlinde = if modularity.modular && exact {
        Some(ribbon::verlinde_check(spec)?)
    } else {
        None
    };
    let tannakian = if exact && !modularity.modular {
        let sub = tannakian::maximal_tannakian(spec)?;
        let group = group_status(spec, &sub, data)?;
        Some(TannakianReport { sub, group })
    } else {
        None
    };
    let verdict = verdict(&modularity, tannakian.as_ref());
    Ok(AnalyzeReport {
        labels: spec.ring().names().to_vec(),
        dims: spec.dims().map(<[CycloNum]>::to_vec),
        dims_approx: fp.dims,
        global_dim,
        global_dim_approx: fp.global_dim,
        modularity,
        s_matrix,
        verlinde,
        tannakian,
        verdict,
    })
}

fn verdict(m: &ModularityReport, t: Option<&TannakianReport>) -> String {
    let cert = if m.certified { "" } else { " (numeric, not certified)" };
    if m.modular {
        return format!("modular{cert}");
    }
    let centre = format!("not modular{cert}; centre = {{{}}}", m.centre.join(", "));
    match t {
        None => centre,
        Some(t) if t.sub.labels.len() <= 1 => format!("{centre}; no bosons to condense"),
        Some(t) if t.group.status == "needs_group" => format!("{centre}; condensable; group needs user input"),
        Some(t) if t.group.status == "mismatch" => format!("{centre}; condensable; supplied group does not match"),
        Some(_) => format!("{centre}; condensable"),
    }
}

impl AnalyzeReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "labels: {}", self.labels.join(", "));
        match &self.dims {
            Some(d) => {
                let shown: Vec<String> = self.labels.iter().zip(d).map(|(l, x)| format!("{l}={x}")).collect();
                let _ = writeln!(s, "dims: {}", shown.join(", "));
            }
            None => {
                let shown: Vec<String> = self
                    .labels
                    .iter()
                    .zip(&self.dims_approx)
                    .map(|(l, x)| format!("{l}≈{x:.6}"))
                    .collect();
                let _ = writeln!(s, "dims (Frobenius–Perron): {}", shown.join(", "));
            }
        }
        match &self.global_dim {
            Some(g) => {
                let _ = writeln!(s, "global dimension: {g} ≈ {:.6}", self.global_dim_approx);
            }
            None => {
                let _ = writeln!(s, "global dimension ≈ {:.6}", self.global_dim_approx);
            }
        }
        let m = &self.modularity;
        let _ = writeln!(s, "centre: {{{}}}", m.centre.join(", "));
        match &m.det {
            Some(d) => {
                let _ = writeln!(s, "det S̃ = {d}");
            }
            None => {
                let _ = writeln!(s, "det S̃ ≈ {:.6}{:+.6}i", m.det_approx.0, m.det_approx.1);
            }
        }
        if let Some(rows) = &self.s_matrix {
            let _ = writeln!(s, "S̃ ({}):", m.convention);
            for row in rows {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "  [{}]", cells.join(", "));
            }
        }
        if let Some(v) = self.verlinde {
            let _ = writeln!(s, "Verlinde: {}", if v { "holds" } else { "fails" });
        }
        if let Some(t) = &self.tannakian {
            let _ = writeln!(s, "Tannakian: {{{}}} of dimension {}", t.sub.labels.join(", "), t.sub.group_order);
            if !t.sub.fermions.is_empty() {
                let _ = writeln!(s, "fermions: {{{}}}", t.sub.fermions.join(", "));
            }
            match t.group.status {
                "pointed" | "verified" => {
                    let h2 = t.group.h2.as_deref().unwrap_or(&[]);
                    let _ = writeln!(
                        s,
                        "group: {} order {}, {}, H² invariants {:?}",
                        t.group.status,
                        t.group.order.unwrap_or(0),
                        if t.group.abelian == Some(true) { "abelian" } else { "non-abelian" },
                        h2
                    );
                }
                _ => {
                    let _ = writeln!(s, "group: {}", t.group.detail.as_deref().unwrap_or(t.group.status));
                }
            }
        }
        let _ = writeln!(s, "verdict: {}", self.verdict);
        s
    }
}
