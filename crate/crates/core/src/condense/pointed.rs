//! Condensation by a pointed subcategory: orbits, stabilizers and their
//! cocycle classes.

use std::collections::BTreeMap;

use super::solve::{solve_fusion, SolveInput};
use super::{
    check_subcategory, extended_hom_matrix, CocycleOverride, CocycleStatus, CondensationResult, Method,
    OrbitInfo, OrbitReport,
};
use crate::error::{Error, Result};
use crate::exactnum::{rat, CycloNum};
use crate::fusion::Label;
use crate::ribbon::CategorySpec;
use crate::tannakian::{
    h2, projective_irrep_profile, recognize_group, FiniteGroup, H2Group, ProjectiveProfile, TannakianSubcat,
};

const COMBINATION_LIMIT: usize = 4096;

struct OrbitData {
    stabilizer: FiniteGroup,
    h2: H2Group,
}

fn orbit_error(spec: &CategorySpec, what: &str, a: Label, b: Label) -> Error {
    Error::DataInconsistency(format!(
        "{what} differs between `{}` and `{}` in one orbit; the subcategory cannot be degenerate",
        spec.name(a),
        spec.name(b)
    ))
}

/// Twists are constant on every orbit; dimensions only on pointed orbits,
/// since a non-invertible label can move between dimensions.
fn check_constant(spec: &CategorySpec, orbit: &[Label], pointed: bool) -> Result<()> {
    let a = orbit[0];
    for &b in &orbit[1..] {
        if spec.twist(a) != spec.twist(b) {
            return Err(orbit_error(spec, "the twist", a, b));
        }
        if let (true, Some(d)) = (pointed, spec.dims()) {
            if d[a] != d[b] {
                return Err(orbit_error(spec, "the dimension", a, b));
            }
        }
    }
    Ok(())
}

fn analyze(spec: &CategorySpec, t: &TannakianSubcat) -> Result<(OrbitReport, Vec<Option<OrbitData>>)> {
    let r = spec.rank();
    let ring = spec.ring();
    let mut seen = vec![false; r];
    let mut orbits = Vec::new();
    let mut data = Vec::new();

    if !t.pointed {
        // orbits under "η′ occurs in γ ⊗ η", transitively closed
        for eta in 0..r {
            if seen[eta] {
                continue;
            }
            let mut orbit = vec![eta];
            seen[eta] = true;
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for &k in &t.label_idx {
                    for (c, _) in ring.channels(k, x) {
                        if !seen[c] {
                            seen[c] = true;
                            orbit.push(c);
                        }
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            check_constant(spec, &orbit, false)?;
            orbits.push(OrbitInfo {
                labels: orbit.iter().map(|&a| spec.name(a).to_string()).collect(),
                representative: spec.name(orbit[0]).to_string(),
                label_idx: orbit,
                stabilizer: None,
                stabilizer_table: None,
                index: None,
                h2: None,
                cocycle: CocycleStatus::NotApplicable,
            });
            data.push(None);
        }
        return Ok((OrbitReport { pointed: false, orbits }, data));
    }

    let g = recognize_group(spec, t, None)?;
    let order = g.group.order();
    let act = |k: Label, eta: Label| -> Result<Label> {
        let ch: Vec<(Label, u32)> = ring.channels(k, eta).collect();
        match ch.as_slice() {
            [(c, 1)] => Ok(*c),
            _ => Err(Error::DataInconsistency(format!(
                "`{}` ⊗ `{}` is not simple although `{}` is invertible",
                spec.name(k),
                spec.name(eta),
                spec.name(k)
            ))),
        }
    };
    for eta in 0..r {
        if seen[eta] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut stab = Vec::new();
        for (elem, &k) in g.labels.iter().enumerate() {
            let c = act(k, eta)?;
            if c == eta {
                stab.push(elem);
            }
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        orbit.sort_unstable();
        for &c in &orbit {
            seen[c] = true;
        }
        if orbit.len() * stab.len() != order {
            return Err(Error::DataInconsistency(format!(
                "orbit of `{}` has size {} and stabilizer order {} in a group of order {order}",
                spec.name(eta),
                orbit.len(),
                stab.len()
            )));
        }
        check_constant(spec, &orbit, true)?;
        let stabilizer = g.group.subgroup(&stab)?;
        let h2g = h2(&stabilizer)?;
        let table = stabilizer
            .elements()
            .map(|a| stabilizer.elements().map(|b| stabilizer.mul(a, b)).collect())
            .collect();
        let cocycle = if h2g.is_trivial() {
            CocycleStatus::Forced { class_id: 0 }
        } else {
            CocycleStatus::RequiredFromUser {
                candidates: (0..h2g.order()).collect(),
            }
        };
        orbits.push(OrbitInfo {
            labels: orbit.iter().map(|&a| spec.name(a).to_string()).collect(),
            representative: spec.name(eta).to_string(),
            label_idx: orbit.clone(),
            stabilizer: Some(stab.iter().map(|&e| spec.name(g.labels[e]).to_string()).collect()),
            stabilizer_table: Some(table),
            index: Some(orbit.len() as u64),
            h2: Some(h2g.invariants().to_vec()),
            cocycle,
        });
        data.push(Some(OrbitData {
            stabilizer,
            h2: h2g,
        }));
    }
    Ok((OrbitReport { pointed: true, orbits }, data))
}

pub(crate) fn orbit_report(spec: &CategorySpec, t: &TannakianSubcat) -> Result<OrbitReport> {
    analyze(spec, t).map(|(r, _)| r)
}

/// A candidate class with the projective profile it induces.
#[derive(Clone)]
struct Candidate {
    class_id: u64,
    profile: ProjectiveProfile,
}

/// Condensation by a pointed subcategory of degenerate bosons.
///
/// Each orbit with stabilizer `H` and cocycle class `c` contributes one
/// condensed simple per `c`-projective irrep `π` of `H`, with multiplicity
/// `dim π` in `Φ(η)` and dimension `d_η·dim π/|H|`. Classes come from
/// `overrides`, are forced when `H²(H)` is trivial, or are inferred as the
/// unique choice admitting a consistent condensed ring.
pub fn condense_pointed(
    spec: &CategorySpec,
    t: &TannakianSubcat,
    overrides: &BTreeMap<String, CocycleOverride>,
) -> Result<CondensationResult> {
    check_subcategory(spec, t)?;
    if !t.pointed {
        return Err(Error::Precondition("condense_pointed needs a pointed subcategory".into()));
    }
    let dims = spec.exact_dims()?.to_vec();
    let (mut report, data) = analyze(spec, t)?;

    for key in overrides.keys() {
        if !report.orbits.iter().any(|o| &o.representative == key) {
            return Err(Error::InvalidData(format!("no orbit has representative `{key}`")));
        }
    }

    // candidate classes per orbit
    let mut cands: Vec<Vec<Candidate>> = Vec::new();
    for (orbit, od) in report.orbits.iter_mut().zip(&data) {
        let od = od.as_ref().expect("pointed orbits carry stabilizer data");
        let h = &od.stabilizer;
        let rep = orbit.label_idx[0];
        let profile_of = |id: u64| -> Result<Candidate> {
            let cls = od.h2.class_from_id(id)?;
            let profile = projective_irrep_profile(h, &od.h2.representative(&cls))?;
            Ok(Candidate { class_id: id, profile })
        };
        let list = match overrides.get(&orbit.representative) {
            Some(CocycleOverride::ClassId(id)) => {
                let c = profile_of(*id)?;
                orbit.cocycle = CocycleStatus::Override { class_id: *id };
                vec![c]
            }
            Some(CocycleOverride::Values(c)) => {
                if c.group_order() != h.order() {
                    return Err(Error::InvalidData(format!(
                        "cocycle for `{}` is given on {} elements, the stabilizer has {}",
                        orbit.representative,
                        c.group_order(),
                        h.order()
                    )));
                }
                let id = od.h2.classify(c)?.id;
                orbit.cocycle = CocycleStatus::Override { class_id: id };
                vec![profile_of(id)?]
            }
            None => {
                let all = (0..od.h2.order()).map(profile_of).collect::<Result<Vec<_>>>()?;
                let d = dims[rep].to_complex().re;
                all.into_iter()
                    .filter(|c| d * c.profile.dim as f64 / h.order() as f64 >= 1.0 - 1e-9)
                    .collect()
            }
        };
        if list.is_empty() {
            return Err(Error::Inconsistent(format!(
                "no stabilizer cocycle for the orbit of `{}` gives condensed dimensions ≥ 1",
                orbit.representative
            )));
        }
        cands.push(list);
    }

    // distinct profiles per orbit; classes sharing a profile are indistinguishable
    let profiles: Vec<Vec<ProjectiveProfile>> = cands
        .iter()
        .map(|list| {
            let mut ps: Vec<ProjectiveProfile> = Vec::new();
            for c in list {
                if !ps.contains(&c.profile) {
                    ps.push(c.profile);
                }
            }
            ps
        })
        .collect();
    let combos: usize = profiles
        .iter()
        .try_fold(1usize, |acc, p| acc.checked_mul(p.len()).filter(|&n| n <= COMBINATION_LIMIT))
        .ok_or_else(|| Error::ResourceLimit("too many stabilizer cocycle combinations".into()))?;

    let ext = extended_hom_matrix(spec, t)?;
    let mut feasible: Vec<(Vec<ProjectiveProfile>, Result<CondensationResult>)> = Vec::new();
    let mut last_err = None;
    for mut n in 0..combos {
        let choice: Vec<ProjectiveProfile> = profiles
            .iter()
            .map(|ps| {
                let p = ps[n % ps.len()];
                n /= ps.len();
                p
            })
            .collect();
        match build(spec, t, &report, &choice, &dims, &ext) {
            Err(e @ Error::Inconsistent(_)) => last_err = Some(e),
            res => feasible.push((choice, res)),
        }
    }

    let ambiguous_orbits = |sel: &[&Vec<ProjectiveProfile>]| -> Vec<usize> {
        (0..report.orbits.len())
            .filter(|&i| {
                let classes: Vec<u64> = cands[i]
                    .iter()
                    .filter(|c| sel.iter().any(|ch| ch[i] == c.profile))
                    .map(|c| c.class_id)
                    .collect();
                classes.len() > 1
            })
            .collect()
    };

    match feasible.len() {
        0 => Err(last_err.unwrap_or_else(|| Error::Inconsistent("no consistent condensation".into()))),
        1 => {
            let (choice, res) = feasible.pop().unwrap();
            let amb = ambiguous_orbits(&[&choice]);
            if !amb.is_empty() {
                return Err(needs_cocycle(&report, &cands, &amb, &[&choice]));
            }
            let mut result = res?;
            for (i, orbit) in report.orbits.iter_mut().enumerate() {
                if matches!(orbit.cocycle, CocycleStatus::RequiredFromUser { .. }) {
                    let c = cands[i].iter().find(|c| c.profile == choice[i]).unwrap();
                    orbit.cocycle = CocycleStatus::Inferred { class_id: c.class_id };
                }
            }
            result.report = report;
            Ok(result)
        }
        _ => {
            let sel: Vec<&Vec<ProjectiveProfile>> = feasible.iter().map(|(c, _)| c).collect();
            let amb = ambiguous_orbits(&sel);
            Err(needs_cocycle(&report, &cands, &amb, &sel))
        }
    }
}

fn needs_cocycle(
    report: &OrbitReport,
    cands: &[Vec<Candidate>],
    amb: &[usize],
    sel: &[&Vec<ProjectiveProfile>],
) -> Error {
    let orbits: Vec<String> = amb.iter().map(|&i| report.orbits[i].representative.clone()).collect();
    let candidates = amb
        .iter()
        .map(|&i| {
            let ids: Vec<String> = cands[i]
                .iter()
                .filter(|c| sel.iter().any(|ch| ch[i] == c.profile))
                .map(|c| c.class_id.to_string())
                .collect();
            format!("{}: {{{}}}", report.orbits[i].representative, ids.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ");
    Error::NeedsCocycle { orbits, candidates }
}

fn build(
    spec: &CategorySpec,
    t: &TannakianSubcat,
    report: &OrbitReport,
    choice: &[ProjectiveProfile],
    dims: &[CycloNum],
    ext: &[Vec<u64>],
) -> Result<CondensationResult> {
    let r = spec.rank();
    let unit = spec.ring().unit();
    let mut names = Vec::new();
    let mut cols: Vec<(Vec<Label>, u64)> = Vec::new();
    let mut new_dims = Vec::new();
    let mut twists = Vec::new();
    let mut new_unit = None;
    for (orbit, p) in report.orbits.iter().zip(choice) {
        let rep = orbit.label_idx[0];
        let h = (t.label_idx.len() / orbit.label_idx.len()) as i64;
        for i in 0..p.count {
            let name = match (p.count, p.dim) {
                (1, _) => orbit.representative.clone(),
                (_, 1) => format!("{}[χ{i}]", orbit.representative),
                _ => format!("{}[π{i}]", orbit.representative),
            };
            if orbit.label_idx.contains(&unit) {
                new_unit = Some(names.len());
            }
            names.push(name);
            cols.push((orbit.label_idx.clone(), p.dim as u64));
            new_dims.push(dims[rep].scale(&rat(p.dim as i64, h)));
            twists.push(spec.twist(rep).clone());
        }
    }
    let k = names.len();
    let mut m = vec![vec![0u64; k]; r];
    for (x, (orbit, mult)) in cols.iter().enumerate() {
        for &eta in orbit {
            m[eta][x] = *mult;
        }
    }
    let unit_x = new_unit.expect("the unit lies in some orbit");
    let ring = solve_fusion(&SolveInput {
        ring: spec.ring(),
        ext,
        m: &m,
        dims: &new_dims,
        unit: unit_x,
        names: &names,
    })?;
    let condensed = CategorySpec::new(ring, twists, Some(new_dims))?;
    Ok(CondensationResult {
        condensed,
        m,
        report: report.clone(),
        subcategory: t.labels.clone(),
        group_order: t.group_order,
        method: Method::Pointed,
    })
}
