//! Cyclotomic polynomials and reduction modulo them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

pub fn totient(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn prime_factors(n: u32) -> Vec<u32> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = cache().lock().expect("poisoned cache").get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic(d));
        }
    }
    let arc = Arc::new(num);
    cache()
        .lock()
        .expect("poisoned cache")
        .insert(n, Arc::clone(&arc));
    arc
}

/// Exact division by a monic integer polynomial.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Reduces a polynomial (lowest degree first) modulo Φ_n, returning exactly
/// φ(n) coefficients.
pub fn reduce(mut p: Vec<BigRational>, n: u32) -> Vec<BigRational> {
    let phi = cyclotomic(n);
    let deg = phi.len() - 1;
    if p.len() > deg {
        for i in (deg..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[i], BigRational::zero());
            let base = i - deg;
            for (j, &pj) in phi.iter().take(deg).enumerate() {
                if pj != 0 {
                    p[base + j] -= &c * BigRational::from_integer(pj.into());
                }
            }
        }
    }
    p.resize(deg, BigRational::zero());
    p
}
