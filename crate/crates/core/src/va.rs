//! The commutative vertex algebra on the jet algebra: `Y(a,z) = e^{zT} a`.
//!
//! Every mode `a_(n)` is multiplication by an element, so operator identities are
//! checked on the vacuum, where they become identities between polynomials.

use std::cell::RefCell;
use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::jetpoly::{derivation_t, divided_power_t, JetPoly, PuiseuxSeries};
use crate::jetscheme::DiagAutomorphism;
use crate::rational::{big_int, binomial};
use crate::report::{Check, CheckReport};

/// `Y(a,z) = sum_n T^n(a)/n! z^n`, exact for exponents `0..=window`.
pub fn vertex_op(a: &JetPoly, window: u32) -> PuiseuxSeries {
    let m = a.order() as i64;
    let mut terms = Vec::with_capacity(window as usize + 1);
    let mut current = a.clone();
    for n in 0..=window as i64 {
        if current.is_zero() {
            break;
        }
        terms.push((n * m, current.clone()));
        current = derivation_t(&current).scale_rational(&BigRational::new(BigInt::one(), BigInt::from(n + 1)));
    }
    PuiseuxSeries::from_terms(a.order(), terms, Some(window as i64 * m))
}

/// The multiplication element `a_(n)`: `T^{-n-1} a / (-n-1)!` for `n <= -1`, zero otherwise.
pub fn mode(a: &JetPoly, n: i64, window: u32) -> Result<JetPoly> {
    if n >= 0 {
        return Ok(JetPoly::zero(a.order()));
    }
    let k = -n - 1;
    if k > window as i64 {
        return Err(Error::WindowExceeded(format!(
            "mode {n} needs T^{k} but the window is {window}"
        )));
    }
    Ok(divided_power_t(a, k as u64))
}

/// Memoized modes `a_(n)` for repeated identity checks.
pub struct ModeCache {
    window: u32,
    powers: RefCell<HashMap<JetPoly, Vec<JetPoly>>>,
}

impl ModeCache {
    pub fn new(window: u32) -> Self {
        ModeCache {
            window,
            powers: RefCell::new(HashMap::new()),
        }
    }

    pub fn mode(&self, a: &JetPoly, n: i64) -> Result<JetPoly> {
        if n >= 0 {
            return Ok(JetPoly::zero(a.order()));
        }
        let k = (-n - 1) as usize;
        if k > self.window as usize {
            return mode(a, n, self.window);
        }
        let mut powers = self.powers.borrow_mut();
        let list = powers.entry(a.clone()).or_insert_with(|| vec![a.clone()]);
        while list.len() <= k {
            let j = list.len() as i64;
            let next = derivation_t(list.last().expect("nonempty"))
                .scale_rational(&BigRational::new(BigInt::one(), BigInt::from(j)));
            list.push(next);
        }
        Ok(list[k].clone())
    }
}

fn sign(e: i64) -> BigRational {
    if e.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Both sides of the Borcherds identity applied to the vacuum.
///
/// Every sum is finite: `a_(n+j) b` vanishes once `n+j >= 0`, `binom(n,j)` once
/// `j > n >= 0`, and `b_(k+j)`, `a_(m+j)` once their index is nonnegative.
pub fn borcherds_sides(
    a: &JetPoly,
    b: &JetPoly,
    m: i64,
    n: i64,
    k: i64,
    window: u32,
) -> Result<(JetPoly, JetPoly)> {
    borcherds_sides_cached(&ModeCache::new(window), a, b, m, n, k)
}

/// `borcherds_sides` drawing modes from `cache`.
pub fn borcherds_sides_cached(
    cache: &ModeCache,
    a: &JetPoly,
    b: &JetPoly,
    m: i64,
    n: i64,
    k: i64,
) -> Result<(JetPoly, JetPoly)> {
    let order = a.order();
    let mut lhs = JetPoly::zero(order);
    if n < 0 {
        let upper = if m >= 0 { (-n - 1).min(m) } else { -n - 1 };
        for j in 0..=upper {
            let c = binomial(&big_int(m), j as u64);
            if c.is_zero() {
                continue;
            }
            let ab = &cache.mode(a, n + j)? * b;
            lhs = &lhs + &cache.mode(&ab, m + k - j)?.scale_rational(&c);
        }
    }

    let mut rhs = JetPoly::zero(order);
    let mut upper = (-k - 1).max(-m - 1);
    if n >= 0 {
        upper = upper.min(n);
    }
    let sign_n = sign(n);
    for j in 0..=upper {
        let c = binomial(&big_int(n), j as u64) * sign(j);
        if c.is_zero() {
            continue;
        }
        let mut term = JetPoly::zero(order);
        if k + j < 0 {
            term = &term + &(&cache.mode(a, m + n - j)? * &cache.mode(b, k + j)?);
        }
        if m + j < 0 {
            let other = &cache.mode(b, n + k - j)? * &cache.mode(a, m + j)?;
            term = &term - &other.scale_rational(&sign_n);
        }
        rhs = &rhs + &term.scale_rational(&c);
    }
    Ok((lhs, rhs))
}

pub fn check_borcherds(a: &JetPoly, b: &JetPoly, m: i64, n: i64, k: i64, window: u32) -> Result<Check> {
    check_borcherds_cached(&ModeCache::new(window), a, b, m, n, k)
}

pub fn check_borcherds_cached(cache: &ModeCache, a: &JetPoly, b: &JetPoly, m: i64, n: i64, k: i64) -> Result<Check> {
    let (lhs, rhs) = borcherds_sides_cached(cache, a, b, m, n, k)?;
    let diff = &lhs - &rhs;
    Ok(Check::from_difference(
        format!("borcherds(a={a}, b={b}, m={m}, n={n}, k={k})"),
        &diff,
        diff.is_zero(),
    ))
}

/// Translation, vacuum, creation and automorphism axioms for `a`.
///
/// The automorphism law `g(a)_(n) g(b) = g(a_(n) b)` is checked against each
/// element of `samples` for `-window-1 <= n <= 1`.
pub fn check_va_axioms(
    a: &JetPoly,
    g: &DiagAutomorphism,
    samples: &[JetPoly],
    window: u32,
) -> Result<CheckReport> {
    let order = a.order();
    let mut report = CheckReport::new();

    let y = vertex_op(a, window + 1);
    let lhs = vertex_op(&derivation_t(a), window);
    let diff = lhs.difference_in_window(&y.derivative());
    report.push(Check::from_difference(
        format!("translation Y(Ta,z) = d/dz Y(a,z) for a={a}"),
        &diff,
        diff.terms().is_empty(),
    ));

    let vac = vertex_op(&JetPoly::one(order), window);
    let expected = PuiseuxSeries::constant(JetPoly::one(order));
    let diff = vac.difference_in_window(&expected);
    report.push(Check::from_difference("vacuum Y(1,z) = id", &diff, diff.terms().is_empty()));

    let y = vertex_op(a, window);
    let negative = y.terms().keys().any(|&e| e < 0);
    let constant = y.coeff_num(0)?;
    report.push(if !negative && constant == *a {
        Check::pass(format!("creation Y(a,z)1 regular with constant term a for a={a}"))
    } else {
        Check::fail(
            format!("creation Y(a,z)1 regular with constant term a for a={a}"),
            format!("Y(a,z)1 = {y}"),
        )
    });

    let ga = g.apply(a);
    for b in samples {
        let gb = g.apply(b);
        for n in -(window as i64) - 1..=1 {
            let lhs = &mode(&ga, n, window)? * &gb;
            let rhs = g.apply(&(&mode(a, n, window)? * b));
            let diff = &lhs - &rhs;
            report.push(Check::from_difference(
                format!("automorphism g(a)_({n}) g(b) = g(a_({n}) b) for a={a}, b={b}"),
                &diff,
                diff.is_zero(),
            ));
        }
    }
    Ok(report)
}

/// `Y(ab,z) = Y(a,z) Y(b,z)` within the window.
pub fn check_multiplicativity(a: &JetPoly, b: &JetPoly, window: u32) -> Check {
    let lhs = vertex_op(&(a * b), window);
    let rhs = vertex_op(a, window).mul(&vertex_op(b, window));
    let diff = lhs.difference_in_window(&rhs);
    Check::from_difference(
        format!("multiplicativity Y(ab,z) = Y(a,z)Y(b,z) for a={a}, b={b}"),
        &diff,
        diff.terms().is_empty(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetpoly::JetVar;
    use proptest::prelude::*;

    fn x(n: i64) -> JetPoly {
        JetPoly::var(1, JetVar::new(1, n))
    }

    #[test]
    fn vertex_op_examples() {
        let one = JetPoly::one(1);
        assert_eq!(vertex_op(&one, 4).terms().len(), 1);
        assert_eq!(vertex_op(&one, 4).coeff_num(0).unwrap(), one);

        let y = vertex_op(&x(0), 3);
        for n in 0..=3 {
            assert_eq!(y.coeff_num(n).unwrap(), x(-n));
        }
        assert!(y.coeff_num(4).is_err());

        let y = vertex_op(&x(0).pow(2), 1);
        assert_eq!(y.coeff_num(0).unwrap(), x(0).pow(2));
        assert_eq!(
            y.coeff_num(1).unwrap(),
            (&x(0) * &x(-1)).scale_rational(&big_int(2))
        );
    }

    #[test]
    fn mode_examples() {
        assert_eq!(mode(&x(0), -1, 4).unwrap(), x(0));
        assert_eq!(mode(&x(0), -2, 4).unwrap(), x(-1));
        assert!(mode(&x(0), 0, 4).unwrap().is_zero());
        assert!(matches!(mode(&x(0), -7, 4), Err(Error::WindowExceeded(_))));
    }

    #[test]
    fn borcherds_examples() {
        let one = JetPoly::one(1);
        for (m, n, k) in [(0, 0, 0), (-1, -1, -1), (2, -3, 1), (-3, 2, -2)] {
            assert!(check_borcherds(&one, &one, m, n, k, 8).unwrap().pass);
        }
        assert!(check_borcherds(&x(0), &x(0), 0, 0, -2, 8).unwrap().pass);
        let (lhs, rhs) = borcherds_sides(&x(0), &x(-1), -1, -1, -1, 8).unwrap();
        assert_eq!(lhs, derivation_t(&(&x(0) * &x(-1))));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn axioms_examples() {
        let g = DiagAutomorphism::identity(1, 1);
        let samples = [JetPoly::one(1), x(0), x(-1)];
        for a in [x(0), JetPoly::one(1), &x(0) * &x(-1)] {
            let report = check_va_axioms(&a, &g, &samples, 4).unwrap();
            assert!(report.all_pass(), "{:?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn automorphism_law_with_nontrivial_g() {
        let g = DiagAutomorphism::new(3, vec![1, 2]).unwrap();
        let a = &JetPoly::var(3, JetVar::new(1, 0)) * &JetPoly::var(3, JetVar::new(2, -3));
        let b = JetPoly::var(3, JetVar::new(1, -6));
        assert!(check_va_axioms(&a, &g, &[b], 3).unwrap().all_pass());
    }

    #[test]
    fn vacuum_modes_are_delta() {
        let one = JetPoly::one(1);
        assert_eq!(mode(&one, -1, 2).unwrap(), one);
        for n in [-4, -2, 0, 3] {
            assert!(mode(&one, n, 4).unwrap().is_zero());
        }
    }

    fn small_poly() -> impl Strategy<Value = JetPoly> {
        prop::collection::vec((0i64..3, 0i64..3, -3i64..4), 1..4).prop_map(|terms| {
            let mut p = JetPoly::zero(1);
            for (l1, l2, c) in terms {
                let t = (&x(-l1) * &x(-l2)).scale_rational(&big_int(c));
                p = &p + &t;
            }
            p
        })
    }

    proptest! {
        #[test]
        fn multiplicative(a in small_poly(), b in small_poly()) {
            prop_assert!(check_multiplicativity(&a, &b, 5).pass);
        }

        #[test]
        fn mode_minus_one_is_identity(a in small_poly()) {
            prop_assert_eq!(mode(&a, -1, 0).unwrap(), a);
        }

        #[test]
        fn borcherds_random(a in small_poly(), b in small_poly(), m in -2i64..3, n in -2i64..3, k in -2i64..3) {
            prop_assert!(check_borcherds(&a, &b, m, n, k, 8).unwrap().pass);
        }
    }
}
