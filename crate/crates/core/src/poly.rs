//! Small exact polynomial types used by the symbolic identity checks and the
//! GIT weight polynomial: univariate polynomials in one formal variable over
//! the rationals, and sparse bivariate polynomials in (m, n).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn brat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Coefficient ring abstraction so the tautological-class expansion can be
/// evaluated both at a concrete rank and with the rank left symbolic.
pub trait CoeffRing: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn from_int(v: i64) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn is_zero_elem(&self) -> bool;

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::ring_one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    fn mul_int(&self, v: i64) -> Self {
        self.mul_ref(&Self::from_int(v))
    }
}

impl CoeffRing for BigRational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn from_int(v: i64) -> Self {
        brat(v)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// Dense univariate polynomial over BigRational; coefficient of x^i at
/// index i. Trailing zeros are stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPoly(Vec<BigRational>);

impl RPoly {
    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        RPoly(c)
    }

    pub fn constant(v: i64) -> Self {
        Self::from_coeffs(alloc::vec![brat(v)])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::from_coeffs(alloc::vec![brat(0), brat(1)])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn scale(&self, v: &BigRational) -> Self {
        Self::from_coeffs(self.0.iter().map(|c| c * v).collect())
    }
}

impl CoeffRing for RPoly {
    fn ring_zero() -> Self {
        RPoly(Vec::new())
    }
    fn ring_one() -> Self {
        Self::constant(1)
    }
    fn from_int(v: i64) -> Self {
        Self::constant(v)
    }
    fn add_ref(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Zero::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(Zero::zero);
            out.push(a + b);
        }
        Self::from_coeffs(out)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.scale(&brat(-1)))
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::ring_zero();
        }
        let mut out = alloc::vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
    fn is_zero_elem(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sparse bivariate polynomial in (m, n) over BigRational; key (i, j) is the
/// coefficient of m^i n^j.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(v: BigRational) -> Self {
        let mut p = Poly2::default();
        p.set(0, 0, v);
        p
    }

    pub fn monomial(i: u32, j: u32, v: BigRational) -> Self {
        let mut p = Poly2::default();
        p.set(i, j, v);
        p
    }

    pub fn var_m() -> Self {
        Self::monomial(1, 0, BigRational::one())
    }

    pub fn var_n() -> Self {
        Self::monomial(0, 1, BigRational::one())
    }

    /// a + b*n, both integer-valued.
    pub fn linear_n(a: i64, b: i64) -> Self {
        let mut p = Poly2::default();
        p.set(0, 0, brat(a));
        p.set(0, 1, brat(b));
        p
    }

    fn set(&mut self, i: u32, j: u32, v: BigRational) {
        if v.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, v) in &other.coeffs {
            let cur = out.coeffs.get(&k).cloned().unwrap_or_else(Zero::zero);
            out.set(k.0, k.1, cur + v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&brat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly2::default();
        for (&(i1, j1), a) in &self.coeffs {
            for (&(i2, j2), b) in &other.coeffs {
                let k = (i1 + i2, j1 + j2);
                let cur = out.coeffs.get(&k).cloned().unwrap_or_else(Zero::zero);
                out.set(k.0, k.1, cur + a * b);
            }
        }
        out
    }

    pub fn scale(&self, v: &BigRational) -> Self {
        let mut out = Poly2::default();
        if v.is_zero() {
            return out;
        }
        for (&k, c) in &self.coeffs {
            out.set(k.0, k.1, c * v);
        }
        out
    }

    /// Substitutes a concrete n; returns the coefficients of m^0, m^1, ...
    pub fn eval_n(&self, n: i64) -> Vec<BigRational> {
        let deg_m = self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let nr = brat(n);
        let mut out = alloc::vec![BigRational::zero(); deg_m as usize + 1];
        for (&(i, j), c) in &self.coeffs {
            out[i as usize] += c * nr.pow_u(j);
        }
        out
    }

    pub fn eval(&self, m: i64, n: i64) -> BigRational {
        let (mr, nr) = (brat(m), brat(n));
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.coeffs {
            acc += c * mr.pow_u(i) * nr.pow_u(j);
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn all_nonpositive(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_positive())
    }
}
