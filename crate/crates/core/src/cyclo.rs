//! Exact arithmetic in the cyclotomic field Q(zeta_m).
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(m)-1)` of
//! `Q[z]/(Phi_m(z))`. Since `Phi_m` is irreducible the quotient is a field and
//! every nonzero element is invertible. Values of different orders never mix.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub fn euler_phi(m: u32) -> usize {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi as usize
}

/// Integer coefficients of `Phi_m`, lowest degree first.
///
/// Computed by dividing `z^m - 1` by `Phi_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic_poly(d));
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (t, &dc) in den.iter().enumerate() {
            rem[k + t] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

fn modulus(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().expect("modulus cache poisoned").get(&m) {
        return p.clone();
    }
    let p = Arc::new(cyclotomic_poly(m));
    cache
        .write()
        .expect("modulus cache poisoned")
        .insert(m, p.clone());
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact element of Q(zeta_m).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn zero(order: u32) -> Self {
        CycScalar {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u32, q: BigRational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = q;
        s
    }

    pub fn from_integer(order: u32, n: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from arbitrary-length power-basis coefficients, reducing mod `Phi_m`.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Self {
        CycScalar {
            order,
            coeffs: reduce(order, coeffs),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::IncompatibleField {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CycScalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CycScalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        if self.coeffs.len() == 1 {
            return Ok(CycScalar {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(CycScalar {
            order: self.order,
            coeffs: reduce(self.order, prod),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Self::from_rational(self.order, self.coeffs[0].recip()));
        }
        let phi: Vec<BigRational> = modulus(self.order)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        // a*s + phi*t = 1, so s is the inverse of a modulo phi.
        let s = ext_gcd_inverse(trim(self.coeffs.clone()), phi);
        Ok(Self::from_coeffs(self.order, s))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Textual form used in reports, e.g. `1/2 + 3*zeta - zeta^2`.
    fn render(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let zeta = match k {
                0 => String::new(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{k}"),
            };
            if zeta.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&zeta);
            } else {
                out.push_str(&format!("{abs}*{zeta}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Number of nonzero power-basis coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Powers of zeta_m; the exponent is reduced mod m.
pub fn zeta_pow(m: u32, k: i64) -> CycScalar {
    let e = k.rem_euclid(m as i64) as usize;
    let mut coeffs = vec![BigRational::zero(); e + 1];
    coeffs[e] = BigRational::one();
    CycScalar::from_coeffs(m, coeffs)
}

pub fn cyc_arith(a: &CycScalar, b: &CycScalar, op: ArithOp) -> Result<CycScalar> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

fn reduce(order: u32, mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
    let phi = modulus(order);
    let d = phi.len() - 1;
    if coeffs.len() > d {
        for top in (d..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[top]);
            if c.is_zero() {
                continue;
            }
            for (t, &pc) in phi[..d].iter().enumerate() {
                if pc != 0 {
                    coeffs[top - d + t] -= &c * BigRational::from_integer(BigInt::from(pc));
                }
            }
        }
    }
    coeffs.resize(d, BigRational::zero());
    coeffs
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = trim(den.to_vec());
    let mut rem = trim(num.to_vec());
    let dd = den.len() - 1;
    if rem.len() - 1 < dd || (rem.len() == 1 && rem[0].is_zero()) {
        return (vec![BigRational::zero()], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for (t, dc) in den.iter().enumerate() {
                rem[k + t] -= &c * dc;
            }
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn ext_gcd_inverse(a: Vec<BigRational>, modulus: Vec<BigRational>) -> Vec<BigRational> {
    // Invariant: r_i = s_i * a (mod modulus).
    let (mut r0, mut r1) = (modulus, a);
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant because the modulus is irreducible.
    let c = r0[0].clone();
    s0.into_iter().map(|x| x / &c).collect()
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar[m={}]({})", self.order, self.render())
    }
}

// Operator impls panic on mixed orders; use `cyc_arith` or `try_*` when orders may differ.
impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.try_add(rhs).expect("mixed cyclotomic orders")
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.try_sub(rhs).expect("mixed cyclotomic orders")
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.try_mul(rhs).expect("mixed cyclotomic orders")
    }
}

impl<'a> Div<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn div(self, rhs: &CycScalar) -> CycScalar {
        self.try_div(rhs).expect("cyclotomic division failed")
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;
    use num::ToPrimitive;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn eval(s: &CycScalar) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / s.order() as f64);
        s.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| zeta.powu(k as u32) * c.to_f64().unwrap())
            .sum()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for p in [2u32, 3, 5, 7, 11] {
            assert_eq!(cyclotomic_poly(p), vec![1; p as usize]);
        }
        for m in 1..=30 {
            assert_eq!(cyclotomic_poly(m).len() - 1, euler_phi(m));
        }
    }

    #[test]
    fn spec_arith_examples() {
        let z4 = zeta_pow(4, 1);
        assert_eq!(&z4 * &z4, CycScalar::from_integer(4, -1));
        let one3 = CycScalar::one(3);
        let a = &one3 + &zeta_pow(3, 1);
        let b = &one3 + &zeta_pow(3, 2);
        assert_eq!(&a * &b, one3);
        let half = CycScalar::from_rational(2, q(1, 2));
        let minus = CycScalar::from_integer(2, -1);
        assert_eq!(
            cyc_arith(&half, &minus, ArithOp::Div).unwrap(),
            CycScalar::from_rational(2, q(-1, 2))
        );
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(zeta_pow(2, 1), CycScalar::from_integer(2, -1));
        assert_eq!(zeta_pow(4, 6), CycScalar::from_integer(4, -1));
        let expected = CycScalar::from_coeffs(3, vec![q(-1, 1), q(-1, 1)]);
        assert_eq!(zeta_pow(3, 2), expected);
        assert_eq!(zeta_pow(3, 2).to_string(), "-1 - zeta");
        for m in 1..=12 {
            assert!(zeta_pow(m, m as i64).is_one());
            if m > 1 {
                let mut sum = CycScalar::zero(m);
                for k in 0..m {
                    sum += &zeta_pow(m, k as i64);
                }
                assert!(sum.is_zero(), "sum of roots of unity for m={m}");
            }
        }
    }

    #[test]
    fn errors() {
        let a = CycScalar::one(3);
        let b = CycScalar::one(4);
        assert_eq!(
            cyc_arith(&a, &b, ArithOp::Add),
            Err(Error::IncompatibleField { left: 3, right: 4 })
        );
        assert_eq!(
            cyc_arith(&a, &CycScalar::zero(3), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn display_form() {
        let s = CycScalar::from_coeffs(5, vec![q(1, 2), q(3, 1), q(-1, 1)]);
        assert_eq!(s.to_string(), "1/2 + 3*zeta - zeta^2");
        assert_eq!(CycScalar::zero(5).to_string(), "0");
    }

    fn arb_scalar(m: u32) -> impl Strategy<Value = CycScalar> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), euler_phi(m))
            .prop_map(move |v| CycScalar::from_coeffs(m, v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    fn arb_triple() -> impl Strategy<Value = (CycScalar, CycScalar, CycScalar)> {
        prop_oneof![Just(3u32), Just(4), Just(5), Just(7), Just(8), Just(12)]
            .prop_flat_map(|m| (arb_scalar(m), arb_scalar(m), arb_scalar(m)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
                prop_assert_eq!(&(&b / &a) * &a, b.clone());
            }
        }

        #[test]
        fn products_match_complex_evaluation((a, b, _c) in arb_triple()) {
            // independent oracle: evaluate at exp(2 pi i / m) in floating point
            let lhs = eval(&(&a * &b));
            let rhs = eval(&a) * eval(&b);
            prop_assert!((lhs - rhs).norm() < 1e-6);
        }
    }
}
