//! Second cohomology `H²(G, 𝕋)` of a finite group with explicit normalized
//! cocycle representatives.
//!
//! `H²(G, 𝕋) ≅ H³(G, ℤ)`, which is the torsion of the cokernel of the
//! coboundary `δ²` on normalized integral bar cochains. The invariant factors
//! come from a Smith normal form of `δ²` in which the column transform is
//! tracked; its columns give representatives and its inverse classifies.

use std::sync::atomic::{AtomicBool, Ordering};

use num_integer::Integer;

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactnum::CycloNum;
use crate::par;

/// Largest group order accepted by [`h2`].
pub const MAX_GROUP_ORDER: usize = 16;

/// A 2-cochain with values `c(g, h) = ζ_base^{exps[g·n + h]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cocycle {
    n: usize,
    base: u32,
    exps: Vec<u32>,
}

impl Cocycle {
    pub fn trivial(n: usize) -> Self {
        Cocycle {
            n,
            base: 1,
            exps: vec![0; n * n],
        }
    }

    pub fn from_exponents(n: usize, base: u32, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != n * n || base == 0 {
            return Err(Error::InvalidData(format!(
                "cocycle needs {} exponents and a positive base",
                n * n
            )));
        }
        let exps = exps.into_iter().map(|e| e % base).collect();
        Ok(Cocycle { n, base, exps })
    }

    /// From a table of values; every value must be a root of unity.
    pub fn from_values(values: &[Vec<CycloNum>]) -> Result<Self> {
        let n = values.len();
        let mut roots = Vec::with_capacity(n * n);
        for row in values {
            if row.len() != n {
                return Err(Error::InvalidData("cocycle table is not square".into()));
            }
            for v in row {
                let r = v
                    .as_root_of_unity()
                    .ok_or_else(|| Error::InvalidData(format!("cocycle value {v} is not a root of unity")))?;
                roots.push(r);
            }
        }
        let base = roots.iter().fold(1u32, |acc, &(m, _)| acc.lcm(&m));
        let exps = roots.iter().map(|&(m, k)| k * (base / m)).collect();
        Cocycle::from_exponents(n, base, exps)
    }

    pub fn group_order(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// `c(g, h)` as `k` with value `ζ_base^k`.
    pub fn exponent(&self, g: usize, h: usize) -> u32 {
        self.exps[g * self.n + h]
    }

    pub fn value(&self, g: usize, h: usize) -> CycloNum {
        CycloNum::root_of_unity(self.base, self.exponent(g, h) as i64)
    }

    pub fn values(&self) -> Vec<Vec<CycloNum>> {
        (0..self.n)
            .map(|g| (0..self.n).map(|h| self.value(g, h)).collect())
            .collect()
    }

    /// Rewrites the exponents over base `m`, a multiple of the current base.
    fn rebase(&self, m: u32) -> Cocycle {
        let f = m / self.base;
        Cocycle {
            n: self.n,
            base: m,
            exps: self.exps.iter().map(|&e| e * f).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Cocycle) -> Cocycle {
        let m = self.base.lcm(&other.base);
        let (a, b) = (self.rebase(m), other.rebase(m));
        Cocycle {
            n: self.n,
            base: m,
            exps: a.exps.iter().zip(&b.exps).map(|(x, y)| (x + y) % m).collect(),
        }
        .simplified()
    }

    pub fn pow(&self, k: u64) -> Cocycle {
        let m = self.base as u64;
        Cocycle {
            n: self.n,
            base: self.base,
            exps: self.exps.iter().map(|&e| ((e as u64 * k) % m) as u32).collect(),
        }
        .simplified()
    }

    /// Smallest base expressing the same values.
    fn simplified(self) -> Cocycle {
        let g = self.exps.iter().fold(self.base, |acc, &e| acc.gcd(&e));
        Cocycle {
            n: self.n,
            base: self.base / g,
            exps: self.exps.iter().map(|&e| e / g).collect(),
        }
    }

    /// `c(g,h)·c(gh,k) = c(g,hk)·c(h,k)` for all triples.
    pub fn is_cocycle(&self, group: &FiniteGroup) -> bool {
        if group.order() != self.n {
            return false;
        }
        let m = self.base;
        let e = |a, b| self.exponent(a, b);
        group.elements().all(|g| {
            group.elements().all(|h| {
                group.elements().all(|k| {
                    (e(g, h) + e(group.mul(g, h), k)) % m == (e(g, group.mul(h, k)) + e(h, k)) % m
                })
            })
        })
    }

    /// Divides out `c(e, e)`, a constant coboundary; the result satisfies
    /// `c(e, g) = c(g, e) = 1` whenever the input is a cocycle.
    pub fn normalized(&self, group: &FiniteGroup) -> Cocycle {
        let id = group.identity();
        let c0 = self.exponent(id, id);
        let m = self.base;
        Cocycle {
            n: self.n,
            base: m,
            exps: self.exps.iter().map(|&e| (e + m - c0) % m).collect(),
        }
        .simplified()
    }

    /// For abelian groups: the alternating bicharacter `c(g,h)/c(h,g)`,
    /// which determines the class.
    pub fn commutator_exponent(&self, g: usize, h: usize) -> u32 {
        (self.exponent(g, h) + self.base - self.exponent(h, g)) % self.base
    }
}

/// Coordinates of a class in the invariant-factor decomposition together
/// with its mixed-radix id (first coordinate least significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CocycleClass {
    pub coords: Vec<u64>,
    pub id: u64,
}

/// `H²(G, 𝕋) ≅ ⊕ ℤ/d_i` with generators and a classifier.
#[derive(Debug, Clone)]
pub struct H2Group {
    group: FiniteGroup,
    invariants: Vec<u64>,
    generators: Vec<Cocycle>,
    /// Rows of the inverse column transform for the nontrivial factors.
    classifier: Vec<Vec<i128>>,
    columns: Vec<(usize, usize)>,
}

impl H2Group {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Nontrivial invariant factors `d_1 | d_2 | …`.
    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Normalized representative of generator `i`, of order `d_i`.
    pub fn generators(&self) -> &[Cocycle] {
        &self.generators
    }

    pub fn class_from_coords(&self, coords: Vec<u64>) -> Result<CocycleClass> {
        if coords.len() != self.invariants.len()
            || coords.iter().zip(&self.invariants).any(|(c, d)| c >= d)
        {
            return Err(Error::InvalidData(format!(
                "class coordinates {coords:?} do not fit invariants {:?}",
                self.invariants
            )));
        }
        let mut id = 0;
        for (c, d) in coords.iter().zip(&self.invariants).rev() {
            id = id * d + c;
        }
        Ok(CocycleClass { coords, id })
    }

    pub fn class_from_id(&self, mut id: u64) -> Result<CocycleClass> {
        if id >= self.order() {
            return Err(Error::InvalidData(format!("class id {id} out of range")));
        }
        let coords = self
            .invariants
            .iter()
            .map(|d| {
                let c = id % d;
                id /= d;
                c
            })
            .collect();
        self.class_from_coords(coords)
    }

    /// All classes in id order.
    pub fn classes(&self) -> Vec<CocycleClass> {
        (0..self.order()).map(|i| self.class_from_id(i).unwrap()).collect()
    }

    /// A normalized cocycle in the given class.
    pub fn representative(&self, class: &CocycleClass) -> Cocycle {
        class
            .coords
            .iter()
            .zip(&self.generators)
            .fold(Cocycle::trivial(self.group.order()), |acc, (&k, g)| acc.mul(&g.pow(k)))
    }

    /// The class of a `𝕋`-valued cocycle.
    pub fn classify(&self, c: &Cocycle) -> Result<CocycleClass> {
        if !c.is_cocycle(&self.group) {
            return Err(Error::InvalidData("the given values do not satisfy the cocycle condition".into()));
        }
        let c = c.normalized(&self.group);
        let base = c.base() as i128;
        let mut coords = Vec::with_capacity(self.invariants.len());
        for (row, &d) in self.classifier.iter().zip(&self.invariants) {
            let s: i128 = row
                .iter()
                .zip(&self.columns)
                .map(|(v, &(g, h))| v * c.exponent(g, h) as i128)
                .sum();
            // coordinate = d·s/base mod d
            let num = s * d as i128;
            if num % base != 0 {
                return Err(Error::InvalidData("cocycle failed to classify".into()));
            }
            coords.push((num / base).rem_euclid(d as i128) as u64);
        }
        self.class_from_coords(coords)
    }

    pub fn cohomologous(&self, a: &Cocycle, b: &Cocycle) -> Result<bool> {
        Ok(self.classify(a)? == self.classify(b)?)
    }
}

/// Computes `H²(G, 𝕋)` for `|G| ≤ 16`.
pub fn h2(group: &FiniteGroup) -> Result<H2Group> {
    let n = group.order();
    if n > MAX_GROUP_ORDER {
        return Err(Error::ResourceLimit(format!(
            "H² is computed for groups of order at most {MAX_GROUP_ORDER}, got {n}"
        )));
    }
    let ne: Vec<usize> = group.non_identity().collect();
    let k = ne.len();
    let mut pos = vec![usize::MAX; n];
    for (i, &g) in ne.iter().enumerate() {
        pos[g] = i;
    }
    let columns: Vec<(usize, usize)> = ne
        .iter()
        .flat_map(|&g| ne.iter().map(move |&h| (g, h)))
        .collect();
    let col = |g: usize, h: usize| -> Option<usize> {
        (pos[g] != usize::MAX && pos[h] != usize::MAX).then(|| pos[g] * k + pos[h])
    };

    // δ²f(g1,g2,g3) = f(g2,g3) − f(g1g2,g3) + f(g1,g2g3) − f(g1,g2)
    let ncols = k * k;
    let rows: Vec<Vec<i128>> = par::map_range(k * k * k, |t| {
        let (g1, g2, g3) = (ne[t / (k * k)], ne[(t / k) % k], ne[t % k]);
        let mut row = vec![0i128; ncols];
        let mut add = |c: Option<usize>, s: i128| {
            if let Some(c) = c {
                row[c] += s;
            }
        };
        add(col(g2, g3), 1);
        add(col(group.mul(g1, g2), g3), -1);
        add(col(g1, group.mul(g2, g3)), 1);
        add(col(g1, g2), -1);
        row
    });

    let reduced = row_echelon(rows, ncols)?;
    let snf = smith(reduced, ncols)?;

    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    let mut classifier = Vec::new();
    for (i, &d) in snf.diagonal.iter().enumerate() {
        if d <= 1 {
            continue;
        }
        let d = d as u64;
        if n as u64 % d != 0 {
            return Err(Error::DataInconsistency(format!(
                "invariant factor {d} does not divide the group order {n}"
            )));
        }
        let scale = n as u64 / d;
        let mut exps = vec![0u32; n * n];
        for (c, &(g, h)) in columns.iter().enumerate() {
            let v = snf.v[c][i].rem_euclid(d as i128) as u64;
            exps[g * n + h] = (v * scale) as u32;
        }
        generators.push(Cocycle::from_exponents(n, n as u32, exps)?.simplified());
        classifier.push(snf.v_inv[i].clone());
        invariants.push(d);
    }
    Ok(H2Group {
        group: group.clone(),
        invariants,
        generators,
        classifier,
        columns,
    })
}

fn overflow() -> Error {
    Error::ResourceLimit("integer overflow in Smith normal form".into())
}

/// Row-reduces an integer matrix to echelon form with unimodular row
/// operations; returns only the nonzero rows.
fn row_echelon(mut rows: Vec<Vec<i128>>, ncols: usize) -> Result<Vec<Vec<i128>>> {
    let mut t = 0;
    for j in 0..ncols {
        if t == rows.len() {
            break;
        }
        loop {
            let Some(p) = (t..rows.len())
                .filter(|&i| rows[i][j] != 0)
                .min_by_key(|&i| rows[i][j].abs())
            else {
                break;
            };
            rows.swap(t, p);
            let (head, tail) = rows.split_at_mut(t + 1);
            let pivot = &head[t];
            let piv = pivot[j];
            let failed = AtomicBool::new(false);
            par::for_each_mut(tail, |row| {
                if row[j] == 0 {
                    return;
                }
                let q = row[j] / piv;
                for c in j..ncols {
                    if pivot[c] != 0 {
                        match q.checked_mul(pivot[c]).and_then(|x| row[c].checked_sub(x)) {
                            Some(v) => row[c] = v,
                            None => failed.store(true, Ordering::Relaxed),
                        }
                    }
                }
            });
            if failed.load(Ordering::Relaxed) {
                return Err(overflow());
            }
            if rows[t + 1..].iter().all(|r| r[j] == 0) {
                t += 1;
                break;
            }
        }
    }
    rows.truncate(t);
    Ok(rows)
}

struct Smith {
    diagonal: Vec<i128>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
}

/// Smith normal form `U·A·V = diag`, tracking `V` and `V⁻¹`.
fn smith(mut a: Vec<Vec<i128>>, ncols: usize) -> Result<Smith> {
    let nrows = a.len();
    let mut v: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| (i == j) as i128).collect())
        .collect();
    let mut v_inv = v.clone();
    let mut diagonal = Vec::new();

    // col_j −= q·col_k on A and V; row_k += q·row_j on V⁻¹
    fn col_op(
        a: &mut [Vec<i128>],
        v: &mut [Vec<i128>],
        v_inv: &mut [Vec<i128>],
        k: usize,
        j: usize,
        q: i128,
    ) -> Result<()> {
        for row in a.iter_mut().chain(v.iter_mut()) {
            if row[k] != 0 {
                row[j] = q
                    .checked_mul(row[k])
                    .and_then(|x| row[j].checked_sub(x))
                    .ok_or_else(overflow)?;
            }
        }
        let rj = v_inv[j].clone();
        for (x, y) in v_inv[k].iter_mut().zip(rj) {
            if y != 0 {
                *x = q.checked_mul(y).and_then(|t| x.checked_add(t)).ok_or_else(overflow)?;
            }
        }
        Ok(())
    }

    fn row_op(a: &mut [Vec<i128>], i: usize, k: usize, q: i128) -> Result<()> {
        let rk = a[k].clone();
        for (x, y) in a[i].iter_mut().zip(rk) {
            if y != 0 {
                *x = q.checked_mul(y).and_then(|t| x.checked_sub(t)).ok_or_else(overflow)?;
            }
        }
        Ok(())
    }

    for k in 0..nrows.min(ncols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..nrows {
                for j in k..ncols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(Smith { diagonal, v, v_inv });
            };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut().chain(v.iter_mut()) {
                    row.swap(k, pj);
                }
                v_inv.swap(k, pj);
            }
            let piv = a[k][k];
            for i in k + 1..nrows {
                if a[i][k] != 0 {
                    let q = a[i][k] / piv;
                    row_op(&mut a, i, k, q)?;
                }
            }
            for j in k + 1..ncols {
                if a[k][j] != 0 {
                    let q = a[k][j] / piv;
                    col_op(&mut a, &mut v, &mut v_inv, k, j, q)?;
                }
            }
            let clean = (k + 1..nrows).all(|i| a[i][k] == 0) && (k + 1..ncols).all(|j| a[k][j] == 0);
            if !clean {
                continue;
            }
            let bad = (k + 1..nrows).find(|&i| (k + 1..ncols).any(|j| a[i][j] % piv != 0));
            match bad {
                Some(i) => row_op(&mut a, k, i, -1)?,
                None => break,
            }
        }
        diagonal.push(a[k][k].abs());
    }
    Ok(Smith { diagonal, v, v_inv })
}

/// Projective irreducible representations of an abelian group for a
/// cocycle: there are `count` of them, all of dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectiveProfile {
    pub count: usize,
    pub dim: usize,
}

/// For abelian `H`, the radical `{h : c(h,k) = c(k,h) ∀k}` has size `r`;
/// there are `r` projective irreps, each of dimension `√(|H|/r)`.
pub fn projective_irrep_profile(group: &FiniteGroup, c: &Cocycle) -> Result<ProjectiveProfile> {
    if !group.is_abelian() {
        return Err(Error::Unsupported(
            "projective irrep profiles are computed for abelian groups".into(),
        ));
    }
    let radical = group
        .elements()
        .filter(|&h| group.elements().all(|k| c.commutator_exponent(h, k) == 0))
        .count();
    let q = group.order() / radical;
    let dim = (q as f64).sqrt().round() as usize;
    if dim * dim != q {
        return Err(Error::DataInconsistency(format!(
            "radical of size {radical} in a group of order {}",
            group.order()
        )));
    }
    Ok(ProjectiveProfile { count: radical, dim })
}
