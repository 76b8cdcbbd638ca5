//! Actions of the non-negative Virasoro modes on jet and twisted jet algebras.
//!
//! `L_a x[i,q] = -(q+a) x[i,q+a]` and `Lt_a x[i,q] = -m (q+a) x[i,q+a]` when
//! `q+a < 0`, zero otherwise, extended as derivations. `L_a` lowers weight by `a`.
//!
//! The operators come from precomposing jets with disk automorphisms, so they act
//! on the right: the bracket is `[L_a, L_b] = L_b L_a - L_a L_b`, and with this
//! convention `[L_a, L_b] = (b-a) L_{a+b}` and `[Lt_a, Lt_b] = m(b-a) Lt_{a+b}`.

use num::{BigInt, BigRational, Rational64};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetpoly::{JetPoly, JetVar, Point};
use crate::jetscheme::{admissible_variables, DiagAutomorphism};
use crate::rational::{fmt_ratio, numerator_over};
use crate::report::{Check, CheckReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VirasoroLabel {
    pub index: u32,
    pub twisted: bool,
}

impl std::fmt::Display for VirasoroLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twisted {
            write!(f, "Lt_{}", self.index)
        } else {
            write!(f, "L_{}", self.index)
        }
    }
}

fn shift_derivation(p: &JetPoly, a: u32, scale: i64, window_num: i64) -> Result<JetPoly> {
    let order = p.order();
    let m = order as i64;
    if let Some(v) = p.variables().iter().find(|v| -v.level > window_num) {
        return Err(Error::WindowExceeded(format!(
            "{} has weight above {}",
            v.display(order),
            fmt_ratio(window_num, order)
        )));
    }
    let shift = a as i64 * m;
    Ok(p.apply_derivation(|v| {
        let target = v.level + shift;
        if target >= 0 {
            return JetPoly::zero(order);
        }
        // -(q+a) with q = level/m, times `scale`
        let c = BigRational::new(BigInt::from(-target * scale), BigInt::from(m));
        JetPoly::var(order, JetVar { level: target, ..*v }).scale_rational(&c)
    }))
}

/// `L_a` on a polynomial in untwisted variables of weight at most `window`.
pub fn l_op(a: u32, p: &JetPoly, window: u32) -> Result<JetPoly> {
    let m = p.order() as i64;
    if let Some(v) = p.variables().iter().find(|v| v.level % m != 0) {
        return Err(Error::Precondition(format!(
            "{} is not an untwisted variable",
            v.display(p.order())
        )));
    }
    shift_derivation(p, a, 1, window as i64 * m)
}

/// `Lt_r` on a polynomial in the twisted variables of `g`, weight at most `window`.
pub fn ltilde_op(r: u32, p: &JetPoly, g: &DiagAutomorphism, window: Rational64) -> Result<JetPoly> {
    let order = p.order();
    if order != g.order() {
        return Err(Error::IncompatibleField {
            left: g.order(),
            right: order,
        });
    }
    let m = order as i64;
    for v in p.variables() {
        let ok = (v.index as usize) <= g.exponents().len()
            && (v.level - g.exponent(v.index) as i64).rem_euclid(m) == 0;
        if !ok {
            return Err(Error::Precondition(format!(
                "{} is not a twisted variable for this automorphism",
                v.display(order)
            )));
        }
    }
    shift_derivation(p, r, m, numerator_over(window, order)?)
}

/// The right-action bracket `op_b(op_a(p)) - op_a(op_b(p))`.
pub fn bracket(
    op: &dyn Fn(u32, &JetPoly) -> Result<JetPoly>,
    a: u32,
    b: u32,
    p: &JetPoly,
) -> Result<JetPoly> {
    Ok(&op(b, &op(a, p)?)? - &op(a, &op(b, p)?)?)
}

fn untwisted_variables(k: usize, order: u32, window: u32) -> Vec<JetPoly> {
    let indices: Vec<u32> = (1..=k as u32).collect();
    admissible_variables(order, &indices, |_| 0, Point::Origin, window as i64 * order as i64)
        .into_iter()
        .map(|v| JetPoly::var(order, v))
        .collect()
}

fn twisted_variables(g: &DiagAutomorphism, window_num: i64) -> Vec<JetPoly> {
    let indices: Vec<u32> = (1..=g.exponents().len() as u32).collect();
    admissible_variables(g.order(), &indices, |i| g.exponent(i), Point::Origin, window_num)
        .into_iter()
        .map(|v| JetPoly::var(g.order(), v))
        .collect()
}

fn relation_check(
    name: String,
    vars: &[JetPoly],
    lhs: impl Fn(&JetPoly) -> Result<JetPoly>,
    rhs: impl Fn(&JetPoly) -> Result<JetPoly>,
) -> Result<Check> {
    for v in vars {
        let diff = &lhs(v)? - &rhs(v)?;
        if !diff.is_zero() {
            return Ok(Check::fail(name, format!("on {v}: difference {diff}")));
        }
    }
    Ok(Check::pass(name))
}

/// Bracket relations for `0 <= a, b <= max_index` on every variable of weight at
/// most `window`, plus the grading identities for `L_0` and `Lt_0`.
pub fn check_commutators(g: &DiagAutomorphism, max_index: u32, window: Rational64) -> Result<CheckReport> {
    if max_index < 1 {
        return Err(Error::Precondition("max index must be at least 1".into()));
    }
    let order = g.order();
    let m = order as i64;
    let w_num = numerator_over(window, order)?;
    let w_int = (w_num / m).max(0) as u32;
    let plain = untwisted_variables(g.exponents().len(), order, w_int);
    let twisted = twisted_variables(g, w_num);
    let l = |a: u32, p: &JetPoly| l_op(a, p, w_int);
    let lt = |a: u32, p: &JetPoly| ltilde_op(a, p, g, window);

    let mut report = CheckReport::new();
    for a in 0..=max_index {
        for b in 0..=max_index {
            let c = BigRational::from_integer(BigInt::from(b as i64 - a as i64));
            report.push(relation_check(
                format!("[L_{a}, L_{b}] = {} L_{}", b as i64 - a as i64, a + b),
                &plain,
                |v| bracket(&l, a, b, v),
                |v| Ok(l(a + b, v)?.scale_rational(&c)),
            )?);
            let ct = &c * BigRational::from_integer(BigInt::from(m));
            report.push(relation_check(
                format!("[Lt_{a}, Lt_{b}] = {} Lt_{}", m * (b as i64 - a as i64), a + b),
                &twisted,
                |v| bracket(&lt, a, b, v),
                |v| Ok(lt(a + b, v)?.scale_rational(&ct)),
            )?);
        }
    }
    report.push(relation_check(
        "L_0 acts by weight".into(),
        &plain,
        |v| l(0, v),
        |v| Ok(v.scale_rational(&BigRational::new(v.max_weight_num().into(), m.into()))),
    )?);
    report.push(relation_check(
        format!("Lt_0 acts by {m} times weight"),
        &twisted,
        |v| lt(0, v),
        |v| Ok(v.scale_rational(&BigRational::from_integer(v.max_weight_num().into()))),
    )?);
    Ok(report)
}
