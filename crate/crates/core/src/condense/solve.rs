//! Recovering the condensed fusion tensor `Ñ` from the decomposition
//! matrix `m`.
//!
//! The hom-space count `Σ_e N[a][b][e]·M[e][c]` must equal
//! `Σ_{x,y,z} m[a][x]·m[b][y]·m[c][z]·Ñ[x][y][z]`. Identical columns of `m`
//! cannot be told apart by this system, so it determines only block sums
//! over classes of identical columns; a bounded search distributes them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{CycloNum, QMatrix};
use crate::fusion::{self, FusionRingData, Label, RingCheckOptions};

/// Input to the solver. `m` has one row per original label and one column
/// per condensed label.
pub(crate) struct SolveInput<'a> {
    pub ring: &'a FusionRingData,
    /// `M[e][c]`, the extended-hom matrix.
    pub ext: &'a [Vec<u64>],
    pub m: &'a [Vec<u64>],
    pub dims: &'a [CycloNum],
    pub unit: Label,
    pub names: &'a [String],
}

const PERMUTATION_LIMIT: usize = 100_000;
const SEARCH_LIMIT: usize = 2_000_000;

/// Dense `Ñ` of the condensed ring, `R³` entries.
pub(crate) type Tensor = Vec<u32>;

pub(crate) fn solve_fusion(input: &SolveInput) -> Result<FusionRingData> {
    let r = input.ring.rank();
    let k = input.m.first().map_or(0, Vec::len);
    let ring = input.ring;

    // right-hand side R[a][b][c] = Σ_e N[a][b][e]·M[e][c]
    let rhs: Vec<u64> = crate::par::map_range(r * r, |ab| {
        let (a, b) = (ab / r, ab % r);
        (0..r)
            .map(|c| {
                ring.channels(a, b)
                    .map(|(e, n)| n as u64 * input.ext[e][c])
                    .sum::<u64>()
            })
            .collect::<Vec<u64>>()
    })
    .into_iter()
    .flatten()
    .collect();

    // classes of identical columns
    let mut class_of = vec![usize::MAX; k];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..k {
        let col = |y: usize| (0..r).map(move |a| input.m[a][y]);
        match reps.iter().position(|&y| col(y).eq(col(x))) {
            Some(c) => class_of[x] = c,
            None => {
                class_of[x] = reps.len();
                reps.push(x);
            }
        }
    }
    let nk = reps.len();
    let mhat = QMatrix::from_integers(r, nk, |a, c| input.m[a][reps[c]] as i64);
    let left = mhat.left_inverse().ok_or_else(|| {
        Error::Unsupported(
            "the decomposition matrix has linearly dependent distinct columns; condensed fusion rules are underdetermined"
                .into(),
        )
    })?;

    let blocks = contract3(&left, &rhs, r, nk);
    let mut block_int = vec![0u64; nk * nk * nk];
    for (i, q) in blocks.iter().enumerate() {
        if !q.is_integer() || q.numer() < &BigInt::zero() {
            return Err(Error::Inconsistent(format!(
                "block multiplicity {q} is not a nonnegative integer"
            )));
        }
        block_int[i] = q.to_integer().to_u64().ok_or_else(|| Error::ResourceLimit("multiplicity overflow".into()))?;
    }
    // the block sums must reproduce the right-hand side exactly
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let mut s = 0u64;
                for x in 0..nk {
                    let ma = input.m[a][reps[x]];
                    if ma == 0 {
                        continue;
                    }
                    for y in 0..nk {
                        let mb = input.m[b][reps[y]];
                        if mb == 0 {
                            continue;
                        }
                        for z in 0..nk {
                            s += ma * mb * input.m[c][reps[z]] * block_int[(x * nk + y) * nk + z];
                        }
                    }
                }
                if s != rhs[(a * r + b) * r + c] {
                    return Err(Error::Inconsistent(format!(
                        "no condensed fusion tensor reproduces Hom(Φ({})⊗Φ({}), Φ({}))",
                        ring.name(a),
                        ring.name(b),
                        ring.name(c)
                    )));
                }
            }
        }
    }

    let dims: Vec<f64> = input.dims.iter().map(|d| d.to_complex().re).collect();
    let search = Search {
        k,
        last: Vec::new(),
        unit: input.unit,
        class_of: &class_of,
        nk,
        blocks: &block_int,
        dims: &dims,
    };
    let candidates = search.run()?;

    let mut valid = Vec::new();
    for t in candidates {
        if let Some(ring) = accept(&t, k, input) {
            valid.push((t, ring));
        }
    }
    let distinct = dedupe(&valid.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>(), k, input.unit, &class_of)?;
    match distinct {
        0 => Err(Error::Inconsistent(
            "no nonnegative-integer condensed fusion tensor satisfies the ring axioms".into(),
        )),
        1 => Ok(valid.swap_remove(0).1),
        n => Err(Error::Ambiguous {
            what: "condensed fusion rules".into(),
            count: n,
        }),
    }
}

/// `B[X][Y][Z] = Σ L[X][a]·L[Y][b]·L[Z][c]·R[a][b][c]`, one mode at a time.
fn contract3(left: &QMatrix, rhs: &[u64], r: usize, nk: usize) -> Vec<BigRational> {
    let l = |x: usize, a: usize| left.get(x, a).clone();
    // mode 3
    let mut t1 = vec![BigRational::zero(); r * r * nk];
    for ab in 0..r * r {
        for z in 0..nk {
            let mut s = BigRational::zero();
            for c in 0..r {
                let v = rhs[ab * r + c];
                if v != 0 {
                    s += l(z, c) * BigRational::from_integer(v.into());
                }
            }
            t1[ab * nk + z] = s;
        }
    }
    // mode 2
    let mut t2 = vec![BigRational::zero(); r * nk * nk];
    for a in 0..r {
        for y in 0..nk {
            for z in 0..nk {
                let mut s = BigRational::zero();
                for b in 0..r {
                    let v = &t1[(a * r + b) * nk + z];
                    if !v.is_zero() {
                        s += l(y, b) * v;
                    }
                }
                t2[(a * nk + y) * nk + z] = s;
            }
        }
    }
    // mode 1
    let mut out = vec![BigRational::zero(); nk * nk * nk];
    for x in 0..nk {
        for yz in 0..nk * nk {
            let mut s = BigRational::zero();
            for a in 0..r {
                let v = &t2[a * nk * nk + yz];
                if !v.is_zero() {
                    s += l(x, a) * v;
                }
            }
            out[x * nk * nk + yz] = s;
        }
    }
    out
}

struct Search<'a> {
    k: usize,
    /// Last search position `(pair, channel)` touching each block.
    last: Vec<Option<(usize, usize)>>,
    unit: Label,
    class_of: &'a [usize],
    nk: usize,
    blocks: &'a [u64],
    dims: &'a [f64],
}

impl Search<'_> {
    fn block(&self, x: usize, y: usize, z: usize) -> usize {
        (self.class_of[x] * self.nk + self.class_of[y]) * self.nk + self.class_of[z]
    }

    /// All commutative tensors with the unit rows fixed, matching the block
    /// sums and the numeric dimension equations.
    fn run(&self) -> Result<Vec<Tensor>> {
        let k = self.k;
        let u = self.unit;
        let mut t = vec![0u32; k * k * k];
        let mut budget: Vec<i64> = self.blocks.iter().map(|&b| b as i64).collect();
        for y in 0..k {
            t[(u * k + y) * k + y] = 1;
            t[(y * k + u) * k + y] = 1;
            budget[self.block(u, y, y)] -= 1;
            if y != u {
                budget[self.block(y, u, y)] -= 1;
            }
        }
        if budget.iter().any(|&b| b < 0) {
            return Ok(Vec::new());
        }
        let pairs: Vec<(usize, usize)> = (0..k)
            .filter(|&x| x != u)
            .flat_map(|x| (x..k).filter(move |&y| y != u).map(move |y| (x, y)))
            .collect();
        let mut last = vec![None; budget.len()];
        for (p, &(x, y)) in pairs.iter().enumerate() {
            for z in 0..k {
                last[self.block(x, y, z)] = Some((p, z));
                last[self.block(y, x, z)] = Some((p, z));
            }
        }
        if (0..budget.len()).any(|b| last[b].is_none() && budget[b] != 0) {
            return Ok(Vec::new());
        }
        let search = Search { last, ..*self };
        let mut out = Vec::new();
        let mut steps = 0usize;
        search.pair(&pairs, 0, &mut t, &mut budget, &mut out, &mut steps)?;
        Ok(out)
    }

    fn pair(
        &self,
        pairs: &[(usize, usize)],
        p: usize,
        t: &mut Tensor,
        budget: &mut [i64],
        out: &mut Vec<Tensor>,
        steps: &mut usize,
    ) -> Result<()> {
        if p == pairs.len() {
            if budget.iter().all(|&b| b == 0) {
                out.push(t.clone());
            }
            return Ok(());
        }
        let (x, y) = pairs[p];
        let target = self.dims[x] * self.dims[y];
        self.channel(pairs, p, x, y, 0, target, t, budget, out, steps)
    }

    #[allow(clippy::too_many_arguments)]
    fn channel(
        &self,
        pairs: &[(usize, usize)],
        p: usize,
        x: usize,
        y: usize,
        z: usize,
        remaining: f64,
        t: &mut Tensor,
        budget: &mut [i64],
        out: &mut Vec<Tensor>,
        steps: &mut usize,
    ) -> Result<()> {
        *steps += 1;
        if *steps > SEARCH_LIMIT {
            return Err(Error::ResourceLimit("condensed fusion search exceeded its step budget".into()));
        }
        let k = self.k;
        if z == k {
            if remaining.abs() > 1e-6 {
                return Ok(());
            }
            return self.pair(pairs, p + 1, t, budget, out, steps);
        }
        let b1 = self.block(x, y, z);
        let b2 = self.block(y, x, z);
        let per = if x == y { 1 } else if b1 == b2 { 2 } else { 1 };
        let mut max = budget[b1] / per;
        if x != y && b1 != b2 {
            max = max.min(budget[b2]);
        }
        let by_dim = ((remaining + 1e-6) / self.dims[z]).floor() as i64;
        let max = max.min(by_dim).max(0);
        let mut min = 0;
        for b in [b1, b2] {
            if self.last[b] == Some((p, z)) {
                let share = if b1 == b2 { per } else { 1 };
                if budget[b] % share != 0 {
                    return Ok(());
                }
                min = min.max(budget[b] / share);
            }
        }
        if min > max {
            return Ok(());
        }
        for v in (min..=max).rev() {
            budget[b1] -= v * per;
            if x != y && b1 != b2 {
                budget[b2] -= v;
            }
            t[(x * k + y) * k + z] = v as u32;
            t[(y * k + x) * k + z] = v as u32;
            let res = self.channel(
                pairs,
                p,
                x,
                y,
                z + 1,
                remaining - v as f64 * self.dims[z],
                t,
                budget,
                out,
                steps,
            );
            budget[b1] += v * per;
            if x != y && b1 != b2 {
                budget[b2] += v;
            }
            res?;
        }
        t[(x * k + y) * k + z] = 0;
        t[(y * k + x) * k + z] = 0;
        Ok(())
    }
}

/// Builds the ring if the tensor has a rigid dual structure and passes the
/// ring axioms and exact dimension equations.
fn accept(t: &Tensor, k: usize, input: &SolveInput) -> Option<FusionRingData> {
    let u = input.unit;
    let mut dual = vec![usize::MAX; k];
    for (x, d) in dual.iter_mut().enumerate() {
        let ys: Vec<usize> = (0..k).filter(|&y| t[(x * k + y) * k + u] != 0).collect();
        match ys.as_slice() {
            [y] if t[(x * k + y) * k + u] == 1 => *d = *y,
            _ => return None,
        }
    }
    let entries = (0..k * k * k)
        .filter(|&i| t[i] != 0)
        .map(|i| (i / (k * k), (i / k) % k, i % k, t[i]));
    let ring = FusionRingData::new(input.names.to_vec(), u, dual, entries).ok()?;
    let report = fusion::validate_ring(&ring, RingCheckOptions::default());
    if !report.passed() || fusion::exact_dim_witness(&ring, input.dims).is_some() {
        return None;
    }
    Some(ring)
}

/// Number of solutions up to relabelling within classes of identical
/// columns (the unit stays fixed).
fn dedupe(sols: &[Tensor], k: usize, unit: Label, class_of: &[usize]) -> Result<usize> {
    if sols.len() <= 1 {
        return Ok(sols.len());
    }
    let nk = class_of.iter().copied().max().map_or(0, |m| m + 1);
    let groups: Vec<Vec<usize>> = (0..nk)
        .map(|c| (0..k).filter(|&x| class_of[x] == c && x != unit).collect())
        .collect();
    let count: usize = groups
        .iter()
        .map(|g| (1..=g.len()).product::<usize>())
        .try_fold(1usize, |acc, f| acc.checked_mul(f).filter(|&p| p <= PERMUTATION_LIMIT))
        .ok_or_else(|| Error::ResourceLimit("too many relabellings to compare condensed fusion rules".into()))?;
    let perms = relabellings(&groups, k);
    debug_assert_eq!(perms.len(), count);
    let canon: BTreeSet<Tensor> = sols
        .iter()
        .map(|t| {
            perms
                .iter()
                .map(|p| {
                    let mut out = vec![0u32; k * k * k];
                    for x in 0..k {
                        for y in 0..k {
                            for z in 0..k {
                                out[(p[x] * k + p[y]) * k + p[z]] = t[(x * k + y) * k + z];
                            }
                        }
                    }
                    out
                })
                .min()
                .unwrap()
        })
        .collect();
    Ok(canon.len())
}

fn relabellings(groups: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..k).collect::<Vec<_>>()];
    for g in groups {
        let mut next = Vec::new();
        for base in &out {
            for perm in permutations(g) {
                let mut p = base.clone();
                for (from, to) in g.iter().zip(&perm) {
                    p[*from] = *to;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
