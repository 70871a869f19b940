use std::borrow::Cow;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{self, lcm, prime_factors, totient};
use super::qmat::QMatrix;
use crate::error::{Error, Result};

/// An element of ℚ(ζₙ).
#[derive(Clone)]
pub struct CycloNum {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    /// Builds a value from coordinates over the reduced power basis.
    pub fn from_coords(order: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Structural("cyclotomic order must be positive".into()));
        }
        let phi = totient(order) as usize;
        if coeffs.len() != phi {
            return Err(Error::Structural(format!(
                "order {order} needs {phi} coordinates, got {}",
                coeffs.len()
            )));
        }
        Ok(CycloNum { order, coeffs })
    }

    /// Builds a value from an arbitrary polynomial in ζₙ (any length).
    pub fn from_poly(order: u32, p: Vec<BigRational>) -> Self {
        assert!(order >= 1);
        CycloNum {
            order,
            coeffs: poly::reduce(p, order),
        }
    }

    pub fn zero() -> Self {
        CycloNum {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloNum {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    /// `ζₙ^k` for any integer `k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let e = k.rem_euclid(n as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Self::from_poly(n, p)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in ℚ.
    pub fn to_rational(&self) -> Option<BigRational> {
        let r = self.reduced();
        (r.order == 1).then(|| r.coeffs[0].clone())
    }

    /// Coordinates of `self` inside ℚ(ζ_m); `m` must be a multiple of the order.
    fn embed(&self, m: u32) -> Cow<'_, [BigRational]> {
        if m == self.order {
            return Cow::Borrowed(&self.coeffs);
        }
        debug_assert_eq!(m % self.order, 0);
        let step = (m / self.order) as usize;
        let mut p = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            p[j * step] = c.clone();
        }
        Cow::Owned(poly::reduce(p, m))
    }

    /// Re-expresses the value over ℚ(ζ_m) for a multiple `m` of its order.
    pub fn lift_to(&self, m: u32) -> CycloNum {
        assert_eq!(m % self.order, 0, "{m} is not a multiple of {}", self.order);
        CycloNum {
            order: m,
            coeffs: self.embed(m).into_owned(),
        }
    }

    /// Image under the Galois automorphism ζₙ ↦ ζₙ^k (k coprime to n).
    pub fn galois(&self, k: i64) -> CycloNum {
        let n = self.order as i64;
        let k = k.rem_euclid(n);
        debug_assert_eq!(k.gcd(&n), 1);
        let mut p = vec![BigRational::zero(); self.order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = ((j as i64 * k) % n) as usize;
                p[e] += c;
            }
        }
        Self::from_poly(self.order, p)
    }

    /// Complex conjugate, ζₙ ↦ ζₙ^{n−1}.
    pub fn conj(&self) -> CycloNum {
        if self.order <= 2 {
            return self.clone();
        }
        self.galois(self.order as i64 - 1)
    }

    /// Field norm down to ℚ.
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for k in 2..self.order as i64 {
            if k.gcd(&(self.order as i64)) == 1 {
                acc = &acc * &self.galois(k);
            }
        }
        acc.reduced().coeffs[0].clone()
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order <= 2 {
            return Ok(CycloNum {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // a · Π_{k≠1} σ_k(a) = N(a)
        let mut others = CycloNum::one();
        for k in 2..self.order as i64 {
            if k.gcd(&(self.order as i64)) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (&others * self).reduced();
        debug_assert_eq!(norm.order, 1);
        Ok(others.scale(&norm.coeffs[0].recip()))
    }

    pub fn div(&self, other: &CycloNum) -> Result<CycloNum> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> CycloNum {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CycloNum {
        let mut base = self.clone();
        let mut acc = CycloNum::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value under the embedding ζₙ ↦ e^{2πi/n}. Display and diagnostics only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// The same value written over the smallest cyclotomic field containing it.
    pub fn reduced(&self) -> CycloNum {
        let mut cur = self.clone();
        'outer: loop {
            if cur.order == 1 {
                return cur;
            }
            for p in prime_factors(cur.order) {
                if let Some(smaller) = cur.descend(p) {
                    cur = smaller;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Tries to write the value over ℚ(ζ_{n/p}).
    fn descend(&self, p: u32) -> Option<CycloNum> {
        let n = self.order;
        let d = n / p;
        let pu = p as usize;
        if d % p == 0 {
            // Φₙ(x) = Φ_d(x^p): the subfield is spanned by the powers x^{pq}.
            if self
                .coeffs
                .iter()
                .enumerate()
                .any(|(j, c)| j % pu != 0 && !c.is_zero())
            {
                return None;
            }
            let coeffs = self.coeffs.iter().step_by(pu).cloned().collect();
            return Some(CycloNum { order: d, coeffs });
        }
        let phi_d = totient(d) as usize;
        let basis: Vec<Vec<BigRational>> = (0..phi_d)
            .map(|q| CycloNum::root_of_unity(d, q as i64).embed(n).into_owned())
            .collect();
        let a = QMatrix::from_fn(self.coeffs.len(), phi_d, |i, j| basis[j][i].clone());
        let y = a.solve(&self.coeffs)?;
        Some(CycloNum { order: d, coeffs: y })
    }

    /// `(n, k)` with `self = ζₙ^k`, `n` the multiplicative order and
    /// `0 ≤ k < n`, if the value is a root of unity.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        let r = self.reduced();
        if !(&r * &r.conj()).is_one() {
            return None;
        }
        let m = lcm(2, r.order);
        for k in 0..m {
            if CycloNum::root_of_unity(m, k as i64) == r {
                let g = k.gcd(&m);
                return Some((m / g, k / g));
            }
        }
        None
    }

    fn aligned<'a>(&'a self, other: &'a CycloNum) -> (u32, Cow<'a, [BigRational]>, Cow<'a, [BigRational]>) {
        let m = lcm(self.order, other.order);
        (m, self.embed(m), other.embed(m))
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.aligned(other);
        a == b
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum({self})")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.order == 1 {
            return write!(f, "{}", r.coeffs[0]);
        }
        if let Some((n, k)) = r.as_root_of_unity() {
            return match (n, k) {
                (2, 1) => write!(f, "-1"),
                _ if k == 1 => write!(f, "ζ{n}"),
                _ => write!(f, "ζ{n}^{k}"),
            };
        }
        let mut first = true;
        for (j, c) in r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "ζ{}", r.order)?,
                (1, false) => write!(f, "{mag}·ζ{}", r.order)?,
                (_, true) => write!(f, "ζ{}^{j}", r.order)?,
                (_, false) => write!(f, "{mag}·ζ{}^{j}", r.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let (order, a, b) = self.aligned(rhs);
        CycloNum {
            order,
            coeffs: a.iter().zip(b.iter()).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        let (order, a, b) = self.aligned(rhs);
        CycloNum {
            order,
            coeffs: a.iter().zip(b.iter()).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (order, a, b) = self.aligned(rhs);
        let mut p = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        CycloNum::from_poly(order, p)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum { (&self).$m(&rhs) }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum { (&self).$m(rhs) }
        }
        impl $tr<CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, rhs: &CycloNum) {
        *self = &*self * rhs;
    }
}

impl From<i64> for CycloNum {
    fn from(k: i64) -> Self {
        CycloNum::from_int(k)
    }
}

impl From<BigRational> for CycloNum {
    fn from(q: BigRational) -> Self {
        CycloNum::from_rational(q)
    }
}

impl std::iter::Sum for CycloNum {
    fn sum<I: Iterator<Item = CycloNum>>(iter: I) -> Self {
        iter.fold(CycloNum::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}
