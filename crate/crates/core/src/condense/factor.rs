//! Condensation by a general (possibly non-pointed) Tannakian subcategory
//! through factorizations `M = m·mᵀ` of the extended-hom matrix.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::solve::{solve_fusion, SolveInput};
use super::{check_subcategory, extended_hom_matrix, sum_dims_sq, CondensationResult, Method};
use crate::error::{Error, Result};
use crate::exactnum::{rat, CycloNum};
use crate::ribbon::CategorySpec;
use crate::tannakian::{recognize_group, GroupData, TannakianSubcat};

const STEP_LIMIT: usize = 5_000_000;

/// Columns of a partial factorization; `cols[x][i]` is the entry in the
/// `i`-th processed row.
type Partial = Vec<Vec<u64>>;

struct Factorizer<'a> {
    /// `M` permuted into processing order.
    gram: Vec<Vec<u64>>,
    steps: &'a AtomicUsize,
}

impl Factorizer<'_> {
    fn tick(&self) -> Result<()> {
        if self.steps.fetch_add(1, Ordering::Relaxed) > STEP_LIMIT {
            return Err(Error::ResourceLimit("factorization search exceeded its step budget".into()));
        }
        Ok(())
    }

    /// All extensions of `cols` by row `i`.
    fn extend(&self, cols: &Partial, i: usize) -> Result<Vec<Partial>> {
        let k = cols.len();
        let res: Vec<i64> = (0..i).map(|p| self.gram[i][p] as i64).collect();
        // last column touching each processed row
        let last: Vec<Option<usize>> = (0..i).map(|p| (0..k).rev().find(|&x| cols[x][p] > 0)).collect();
        let mut out = Vec::new();
        let mut v = vec![0u64; k];
        self.assign(cols, i, 0, &mut v, res, self.gram[i][i] as i64, &last, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        cols: &Partial,
        i: usize,
        j: usize,
        v: &mut Vec<u64>,
        res: Vec<i64>,
        diag: i64,
        last: &[Option<usize>],
        out: &mut Vec<Partial>,
    ) -> Result<()> {
        self.tick()?;
        let k = cols.len();
        if j == k {
            if res.iter().any(|&r| r != 0) {
                return Ok(());
            }
            for tail in square_partitions(diag as u64, u64::MAX) {
                let mut next: Partial = cols
                    .iter()
                    .zip(v.iter())
                    .map(|(c, &x)| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                    .collect();
                for x in tail {
                    let mut c = vec![0; i];
                    c.push(x);
                    next.push(c);
                }
                out.push(next);
            }
            return Ok(());
        }
        let mut max = (diag as f64).sqrt().floor() as i64;
        for (p, &r) in res.iter().enumerate() {
            let c = cols[j][p] as i64;
            if c > 0 {
                max = max.min(r / c);
            }
        }
        // identical columns take nonincreasing values
        if j > 0 && cols[j - 1] == cols[j] {
            max = max.min(v[j - 1] as i64);
        }
        for x in (0..=max.max(0)).rev() {
            let mut r2 = res.clone();
            for (p, r) in r2.iter_mut().enumerate() {
                *r -= x * cols[j][p] as i64;
            }
            if (0..i).any(|p| last[p] == Some(j) && r2[p] != 0) {
                continue;
            }
            v[j] = x as u64;
            self.assign(cols, i, j + 1, v, r2, diag - x * x, last, out)?;
        }
        v[j] = 0;
        Ok(())
    }

    fn finish(&self, cols: Partial, i: usize, out: &mut Vec<Partial>) -> Result<()> {
        if i == self.gram.len() {
            out.push(cols);
            return Ok(());
        }
        for next in self.extend(&cols, i)? {
            self.finish(next, i + 1, out)?;
        }
        Ok(())
    }
}

/// Nonincreasing lists of positive integers whose squares sum to `n`, each
/// part at most `cap`.
fn square_partitions(n: u64, cap: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let top = ((n as f64).sqrt().floor() as u64).min(cap);
    for x in (1..=top).rev() {
        for mut rest in square_partitions(n - x * x, x) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// All nonnegative-integer `m` with `M = m·mᵀ`, columns in canonical
/// (sorted) order, rows in original label order.
pub(crate) fn factorizations(gram: &[Vec<u64>], order: &[usize]) -> Result<Vec<Vec<Vec<u64>>>> {
    let n = gram.len();
    let permuted: Vec<Vec<u64>> = order
        .iter()
        .map(|&a| order.iter().map(|&b| gram[a][b]).collect())
        .collect();
    let steps = AtomicUsize::new(0);
    let f = Factorizer { gram: permuted, steps: &steps };
    // expand the first rows sequentially, then search subtrees in parallel
    let split = n.min(2);
    let mut frontier: Vec<Partial> = vec![Vec::new()];
    for i in 0..split {
        let mut next = Vec::new();
        for cols in &frontier {
            next.extend(f.extend(cols, i)?);
        }
        frontier = next;
    }
    let results = crate::par::map_slice(&frontier, |cols| {
        let mut out = Vec::new();
        f.finish(cols.clone(), split, &mut out).map(|_| out)
    });
    let mut canon = BTreeSet::new();
    for r in results {
        for cols in r? {
            // back to original row order
            let mut cs: Vec<Vec<u64>> = cols
                .iter()
                .map(|c| {
                    let mut orig = vec![0; n];
                    for (p, &a) in order.iter().enumerate() {
                        orig[a] = c[p];
                    }
                    orig
                })
                .collect();
            cs.sort();
            canon.insert(cs);
        }
    }
    Ok(canon
        .into_iter()
        .map(|cs| (0..n).map(|a| cs.iter().map(|c| c[a]).collect()).collect())
        .collect())
}

/// Condensation through the factorization `M = m·mᵀ`, for any Tannakian
/// subcategory whose group is known. Condensed dimensions follow from
/// `d_x = Σ_η m[η][x]·d_η / |G|`; a solution must also preserve every
/// `d_η`, the global dimension and `d_x ≥ 1`, and must be unique up to
/// column order.
pub fn condense_general(
    spec: &CategorySpec,
    t: &TannakianSubcat,
    group: Option<&GroupData>,
) -> Result<CondensationResult> {
    check_subcategory(spec, t)?;
    let dims = spec.exact_dims()?.to_vec();
    let g = recognize_group(spec, t, group)?;
    let order = g.group.order() as i64;
    if t.group_order != order as u64 {
        return Err(Error::GroupMismatch {
            reason: format!("Σ d² = {} but |G| = {order}", t.group_order),
            triple: None,
        });
    }
    let ext = extended_hom_matrix(spec, t)?;
    let r = spec.rank();
    let approx: Vec<f64> = dims.iter().map(|d| d.to_complex().re).collect();
    let mut rows: Vec<usize> = (0..r).collect();
    rows.sort_by(|&a, &b| approx[b].total_cmp(&approx[a]).then(a.cmp(&b)));

    let target_global = sum_dims_sq(&dims).scale(&rat(1, order));
    let inv_order = rat(1, order);
    let mut accepted = Vec::new();
    for m in factorizations(&ext, &rows)? {
        let k = m[0].len();
        let dx: Vec<CycloNum> = (0..k)
            .map(|x| {
                (0..r)
                    .filter(|&eta| m[eta][x] > 0)
                    .map(|eta| dims[eta].scale(&rat(m[eta][x] as i64, 1)))
                    .sum::<CycloNum>()
                    .scale(&inv_order)
            })
            .collect();
        if dx.iter().any(|d| d.to_complex().re < 1.0 - 1e-9) {
            continue;
        }
        let preserved = (0..r).all(|eta| {
            (0..k)
                .filter(|&x| m[eta][x] > 0)
                .map(|x| dx[x].scale(&rat(m[eta][x] as i64, 1)))
                .sum::<CycloNum>()
                == dims[eta]
        });
        if preserved && sum_dims_sq(&dx) == target_global {
            accepted.push((m, dx));
        }
    }
    if accepted.len() != 1 {
        return Err(Error::Ambiguous {
            what: "the factorization M = m·mᵀ".into(),
            count: accepted.len(),
        });
    }
    let (m, dx) = accepted.pop().unwrap();
    let k = dx.len();

    // deterministic column order: by first supporting row, then larger entries first
    let first_row = |x: usize| (0..r).find(|&eta| m[eta][x] > 0).unwrap();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.sort_by(|&x, &y| {
        first_row(x)
            .cmp(&first_row(y))
            .then_with(|| (0..r).map(|e| m[e][y]).cmp((0..r).map(|e| m[e][x])))
    });
    let m: Vec<Vec<u64>> = (0..r).map(|eta| perm.iter().map(|&x| m[eta][x]).collect()).collect();
    let dx: Vec<CycloNum> = perm.iter().map(|&x| dx[x].clone()).collect();

    let mut names = Vec::with_capacity(k);
    let mut twists = Vec::with_capacity(k);
    for x in 0..k {
        let f = first_row(perm[x]);
        let siblings: Vec<usize> = (0..k).filter(|&y| first_row(perm[y]) == f).collect();
        names.push(if siblings.len() == 1 {
            spec.name(f).to_string()
        } else {
            let i = siblings.iter().position(|&y| y == x).unwrap();
            format!("{}[π{i}]", spec.name(f))
        });
        let theta = spec.twist(f);
        if let Some(eta) = (0..r).find(|&eta| m[eta][x] > 0 && spec.twist(eta) != theta) {
            return Err(Error::DataInconsistency(format!(
                "`{}` and `{}` share a condensed summand but have different twists",
                spec.name(f),
                spec.name(eta)
            )));
        }
        twists.push(theta.clone());
    }
    let unit = spec.ring().unit();
    let unit_x = (0..k)
        .find(|&x| m[unit][x] > 0)
        .expect("the unit row has a nonzero entry");
    let ring = solve_fusion(&SolveInput {
        ring: spec.ring(),
        ext: &ext,
        m: &m,
        dims: &dx,
        unit: unit_x,
        names: &names,
    })?;
    let condensed = CategorySpec::new(ring, twists, Some(dx))?;
    let mut plain = t.clone();
    plain.pointed = false;
    let report = super::orbits_and_stabilizers(spec, &plain)?;
    Ok(CondensationResult {
        condensed,
        m,
        report,
        subcategory: t.labels.clone(),
        group_order: order as u64,
        method: Method::General,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_partition_examples() {
        assert_eq!(square_partitions(4, u64::MAX), vec![vec![2], vec![1, 1, 1, 1]]);
        assert_eq!(square_partitions(5, u64::MAX), vec![vec![2, 1], vec![1, 1, 1, 1, 1]]);
        assert_eq!(square_partitions(0, u64::MAX), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn rank_one_gram_has_one_factorization() {
        let d = [1u64, 1, 2];
        let gram: Vec<Vec<u64>> = d.iter().map(|a| d.iter().map(|b| a * b).collect()).collect();
        let f = factorizations(&gram, &[2, 0, 1]).unwrap();
        assert!(f.contains(&vec![vec![1], vec![1], vec![2]]));
    }

    #[test]
    fn identity_gram_factors_as_permutation() {
        let gram = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(factorizations(&gram, &[0, 1]).unwrap(), vec![vec![vec![0, 1], vec![1, 0]]]);
    }
}
