//! Finite groups given by multiplication tables.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite group on elements `0..n`. Element 0 need not be the identity;
/// the identity is located when the table is validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidData("empty group table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidData("group table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidData("group table entry out of range".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let at = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidData("group table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidData(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::InvalidData(format!(
                            "group table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            n,
            table,
            identity,
            inverse,
        })
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        FiniteGroup::from_table(rows).expect("generated table is a group")
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteGroup::from_fn(n, |a, b| (a + b) % n)
    }

    /// Direct product; element `(g, h)` has index `g·|H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.order();
        FiniteGroup::from_fn(g.order() * m, |x, y| {
            g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
        })
    }

    /// Dihedral group of order `2k`; `r^i s^e` has index `i + k·e`.
    pub fn dihedral(k: usize) -> Self {
        FiniteGroup::from_fn(2 * k, |x, y| {
            let (i, e) = (x % k, x / k);
            let (j, f) = (y % k, y / k);
            // s r^j = r^{-j} s
            let j = if e == 1 { (k - j) % k } else { j };
            (i + j) % k + k * ((e + f) % 2)
        })
    }

    pub fn symmetric3() -> Self {
        FiniteGroup::dihedral(3)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}` in that index order.
    pub fn quaternion() -> Self {
        // unit quaternions as (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k
        let basis = |x: usize| ((x % 2 == 1) as u8, x / 2);
        let mul = |a: usize, b: usize| -> (u8, usize) {
            match (a, b) {
                (0, b) => (0, b),
                (a, 0) => (0, a),
                (a, b) if a == b => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        FiniteGroup::from_fn(8, |x, y| {
            let (sx, ax) = basis(x);
            let (sy, ay) = basis(y);
            let (s, a) = mul(ax, ay);
            2 * a + ((sx ^ sy ^ s) as usize)
        })
    }

    /// Parses names like `Z4`, `Z2xZ2`, `Z2xZ4`, `S3`, `D4`, `Q8`, `1`.
    pub fn named(name: &str) -> Result<Self> {
        let unknown = || Error::InvalidData(format!("unknown group name `{name}`"));
        let factors: Vec<&str> = name.split(['x', '×']).map(str::trim).collect();
        let mut g = FiniteGroup::trivial();
        for f in factors {
            let h = match f {
                "1" | "trivial" => FiniteGroup::trivial(),
                "S3" => FiniteGroup::symmetric3(),
                "Q8" => FiniteGroup::quaternion(),
                _ => {
                    let (kind, k) = f.split_at(1);
                    let k: usize = k.parse().map_err(|_| unknown())?;
                    match kind {
                        "Z" | "C" if k >= 1 => FiniteGroup::cyclic(k),
                        "D" if k >= 2 => FiniteGroup::dihedral(k),
                        _ => return Err(unknown()),
                    }
                }
            };
            g = FiniteGroup::product(&g, &h);
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Non-identity elements in index order.
    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&g| g != self.identity)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    /// Conjugacy classes, each sorted, ordered by their smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut classes = Vec::new();
        for g in 0..self.n {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.n)
                .map(|x| self.mul(self.mul(x, g), self.inv(x)))
                .collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Whether `elems` is closed under products and inverses and contains
    /// the identity.
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| {
                set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    /// The subgroup on `elems` (sorted), relabelled `0..elems.len()`.
    pub fn subgroup(&self, elems: &[usize]) -> Result<FiniteGroup> {
        let mut sorted = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if !self.is_subgroup(&sorted) {
            return Err(Error::InvalidData("elements do not form a subgroup".into()));
        }
        let pos = |x: usize| sorted.binary_search(&x).unwrap();
        let rows = sorted
            .iter()
            .map(|&a| sorted.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        FiniteGroup::from_table(rows)
    }

    /// Whether some bijection of elements carries one table to the other.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.n != other.n || self.is_abelian() != other.is_abelian() {
            return false;
        }
        let mut prof_a: Vec<usize> = (0..self.n).map(|g| self.element_order(g)).collect();
        let mut prof_b: Vec<usize> = (0..other.n).map(|g| other.element_order(g)).collect();
        prof_a.sort_unstable();
        prof_b.sort_unstable();
        if prof_a != prof_b {
            return false;
        }
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        self.iso_search(other, &mut map, &mut used, 0)
    }

    fn iso_search(&self, other: &FiniteGroup, map: &mut [usize], used: &mut [bool], k: usize) -> bool {
        if k == self.n {
            return true;
        }
        for y in 0..other.n {
            if used[y] || self.element_order(k) != other.element_order(y) {
                continue;
            }
            map[k] = y;
            used[y] = true;
            let ok = (0..=k).all(|a| {
                (0..=k).all(|b| {
                    let c = self.mul(a, b);
                    map[c] == usize::MAX || map[c] == other.mul(map[a], map[b])
                })
            });
            if ok && self.iso_search(other, map, used, k + 1) {
                return true;
            }
            used[y] = false;
            map[k] = usize::MAX;
        }
        false
    }
}
