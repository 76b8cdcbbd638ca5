//! The `g`-twisted module structure on the twisted jet algebra.
//!
//! `Y_g(x[i,0], z^{1/m}) = sum_n x[i,n] z^{-n}` over the twisted levels of `x_i`, and
//! on monomials `Y_g(prod x[i_j,n_j]) = prod d_z^{-n_j} Y_g(x[i_j,0]) / (-n_j)!`.

use std::cell::RefCell;
use std::rc::Rc;
use std::collections::HashMap;

use num::{BigRational, Rational64, Zero};

use crate::error::{Error, Result};
use crate::jetpoly::{
    derivation_t, divided_power_t, eigenindex, substitute_jets, JetPoly, JetVar, Monomial, Point,
    PuiseuxSeries,
};
use crate::jetscheme::{DiagAutomorphism, SchemeSpec};
use crate::rational::{big, big_int, binomial, fmt_ratio, numerator_over};
use crate::report::{Check, CheckReport};
use crate::va;

/// A twisted field together with the element it represents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedField {
    pub series: PuiseuxSeries,
    pub source: JetPoly,
    pub eigenindex: Option<u32>,
}

/// `d_z^k X_i / k!` where `X_i` is the twisted expansion of `x_i`, exact up to `trunc/m`.
fn derived_expansion(order: u32, index: u32, alpha_i: u32, point: Point, k: i64, trunc: i64) -> PuiseuxSeries {
    let m = order as i64;
    let mut level = (alpha_i as i64).rem_euclid(m);
    if level > 0 {
        level -= m;
    }
    let mut terms = Vec::new();
    while -level - k * m <= trunc {
        let e = big(Rational64::new(-level, m));
        let c = binomial(&e, k as u64);
        if !c.is_zero() {
            terms.push((
                -level - k * m,
                JetPoly::var(order, JetVar::at(point, index, level)).scale_rational(&c),
            ));
        }
        level -= m;
    }
    PuiseuxSeries::from_terms(order, terms, Some(trunc))
}

/// Twisted fields for a fixed automorphism, memoized per monomial.
pub struct TwistedModule {
    g: DiagAutomorphism,
    point: Point,
    window: i64,
    cache: RefCell<HashMap<i64, HashMap<Monomial, Rc<PuiseuxSeries>>>>,
}

impl TwistedModule {
    /// Module whose modes are available for exponents up to `window`.
    pub fn new(g: &DiagAutomorphism, window: Rational64) -> Result<Self> {
        Self::at_point(g, window, Point::Origin)
    }

    /// Same, with the twisted variables labelled by `point`.
    pub fn at_point(g: &DiagAutomorphism, window: Rational64, point: Point) -> Result<Self> {
        Ok(TwistedModule {
            g: g.clone(),
            point,
            window: numerator_over(window, g.order())?,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn automorphism(&self) -> &DiagAutomorphism {
        &self.g
    }

    pub fn order(&self) -> u32 {
        self.g.order()
    }

    /// Window as a numerator over m.
    pub fn window_num(&self) -> i64 {
        self.window
    }

    fn monomial_field(&self, mono: &Monomial, trunc: i64) -> Result<Rc<PuiseuxSeries>> {
        if let Some(s) = self.cache.borrow().get(&trunc).and_then(|c| c.get(mono)) {
            return Ok(Rc::clone(s));
        }
        let order = self.order();
        let m = order as i64;
        let mut k_sum = 0;
        for (v, e) in mono.factors() {
            if v.point != Point::Origin || v.level > 0 || v.level % m != 0 {
                return Err(Error::Precondition(format!(
                    "{} is not an untwisted jet variable",
                    v.display(order)
                )));
            }
            if (v.index as usize) > self.g.exponents().len() {
                return Err(Error::Precondition(format!(
                    "no automorphism exponent for variable {}",
                    v.index
                )));
            }
            k_sum += (-v.level) * *e as i64;
        }
        // each factor has valuation >= -k_j, so this much slack keeps the product exact
        let inner = trunc + k_sum;
        let mut acc = PuiseuxSeries::constant(JetPoly::one(order));
        for (v, e) in mono.factors() {
            let k = -v.level / m;
            let f = derived_expansion(order, v.index, self.g.exponent(v.index), self.point, k, inner);
            acc = acc.mul(&f.pow(*e));
        }
        let out = Rc::new(acc.truncate(trunc));
        self.cache
            .borrow_mut()
            .entry(trunc)
            .or_default()
            .insert(mono.clone(), Rc::clone(&out));
        Ok(out)
    }

    /// `Y_g(a, z^{1/m})` exact up to `z^{trunc/m}`.
    pub fn field_to(&self, a: &JetPoly, trunc: i64) -> Result<PuiseuxSeries> {
        if a.order() != self.order() {
            return Err(Error::IncompatibleField {
                left: self.order(),
                right: a.order(),
            });
        }
        let mut out = PuiseuxSeries::zero(self.order(), Some(trunc));
        for (mono, c) in a.terms() {
            let f = self.monomial_field(mono, trunc)?;
            out = out.add(&f.map_coeffs(|p| p.scale(c)));
        }
        Ok(out)
    }

    /// `Y_g(a, z^{1/m})` exact up to the module window.
    pub fn field(&self, a: &JetPoly) -> Result<TwistedField> {
        Ok(TwistedField {
            series: self.field_to(a, self.window)?,
            source: a.clone(),
            eigenindex: eigenindex(self.g.exponents(), a),
        })
    }

    /// The multiplication element `a_(n)`, the coefficient of `z^{-n-1}`.
    pub fn mode(&self, a: &JetPoly, n: Rational64) -> Result<JetPoly> {
        let m = self.order() as i64;
        let e = -numerator_over(n, self.order())? - m;
        if a.is_zero() || e < -a.max_weight_num() {
            return Ok(JetPoly::zero(self.order()));
        }
        if e > self.window {
            return Err(Error::WindowExceeded(format!(
                "mode {} needs z^({}) but the window is {}",
                n,
                fmt_ratio(e, self.order()),
                fmt_ratio(self.window, self.order())
            )));
        }
        let mut out = JetPoly::zero(self.order());
        for (mono, c) in a.terms() {
            let coeff = self.monomial_field(mono, self.window)?.coeff_num(e)?;
            out.add_scaled(&coeff, c);
        }
        Ok(out)
    }
}

pub fn twisted_vertex_op(a: &JetPoly, g: &DiagAutomorphism, window: Rational64) -> Result<TwistedField> {
    TwistedModule::new(g, window)?.field(a)
}

pub fn twisted_mode(a: &JetPoly, g: &DiagAutomorphism, n: Rational64, window: Rational64) -> Result<JetPoly> {
    TwistedModule::new(g, window)?.mode(a, n)
}

fn homogeneous_index(module: &TwistedModule, a: &JetPoly) -> Result<u32> {
    eigenindex(module.automorphism().exponents(), a)
        .ok_or_else(|| Error::Precondition(format!("{a} is not an eigenvector of g")))
}

fn support_check(module: &TwistedModule, a: &JetPoly) -> Result<Check> {
    let m = module.order() as i64;
    let r = homogeneous_index(module, a)? as i64;
    let field = module.field_to(a, module.window_num())?;
    // mode index n = -e/m - 1 lies in r/m + Z iff e + r = 0 mod m
    let bad: Vec<String> = field
        .terms()
        .keys()
        .filter(|&&e| (e + r).rem_euclid(m) != 0)
        .map(|&e| fmt_ratio(e, module.order()))
        .collect();
    let name = format!("support of Y_g({a}) in {r}/{m} + Z");
    Ok(if bad.is_empty() {
        Check::pass(name)
    } else {
        Check::fail(name, format!("exponents {}", bad.join(", ")))
    })
}

fn derivative_check(module: &TwistedModule, a: &JetPoly) -> Result<Check> {
    let w = module.window_num();
    let lhs = module.field_to(&derivation_t(a), w)?;
    let rhs = module.field_to(a, w + module.order() as i64)?.derivative();
    let diff = lhs.difference_in_window(&rhs);
    Ok(Check::from_difference(
        format!("derivative Y_g(Ta) = d/dz Y_g(a) for a={a}"),
        &diff,
        diff.terms().is_empty(),
    ))
}

fn multiplicativity_check(module: &TwistedModule, a: &JetPoly, b: &JetPoly) -> Result<Check> {
    let w = module.window_num();
    let lhs = module.field_to(&(a * b), w)?;
    let fa = module.field_to(a, w + b.max_weight_num().max(0))?;
    let fb = module.field_to(b, w + a.max_weight_num().max(0))?;
    let diff = lhs.difference_in_window(&fa.mul(&fb).truncate(w));
    Ok(Check::from_difference(
        format!("multiplicativity Y_g(ab) = Y_g(a)Y_g(b) for a={a}, b={b}"),
        &diff,
        diff.terms().is_empty(),
    ))
}

/// Coset support, lower truncation on `samples`, vacuum, derivative rule and
/// multiplicativity for eigenvectors `a`, `b`.
pub fn check_twisted_axioms(
    module: &TwistedModule,
    a: &JetPoly,
    b: &JetPoly,
    samples: &[JetPoly],
) -> Result<CheckReport> {
    let order = module.order();
    let mut report = CheckReport::new();
    report.push(support_check(module, a)?);
    report.push(support_check(module, b)?);

    let field = module.field_to(a, module.window_num())?;
    for v in samples {
        let applied = field.mul_poly(v);
        let low = applied.terms().keys().next().copied();
        let name = format!("lower truncation of Y_g({a}) applied to {v}");
        report.push(match low {
            Some(e) if e < -a.max_weight_num() => {
                Check::fail(name, format!("term at z^({})", fmt_ratio(e, order)))
            }
            _ => Check::pass(name),
        });
    }

    let vac = module.field_to(&JetPoly::one(order), module.window_num())?;
    let diff = vac.difference_in_window(&PuiseuxSeries::constant(JetPoly::one(order)));
    report.push(Check::from_difference("vacuum Y_g(1) = id", &diff, diff.terms().is_empty()));

    report.push(derivative_check(module, a)?);
    report.push(derivative_check(module, b)?);
    report.push(multiplicativity_check(module, a, b)?);
    Ok(report)
}

fn parity_sign(n: i64) -> BigRational {
    if n.rem_euclid(2) == 0 {
        big_int(1)
    } else {
        big_int(-1)
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Both sides of the twisted Borcherds identity applied to the vacuum of the module.
///
/// The left side is finite because `a_(l+i) b = 0` once `l+i >= 0`; on the right
/// `b_q` and `a_q` vanish once `-q-1` drops below minus the weight.
pub fn twisted_borcherds_sides(
    module: &TwistedModule,
    a: &JetPoly,
    b: &JetPoly,
    l: i64,
    m_idx: Rational64,
    n_idx: Rational64,
) -> Result<(JetPoly, JetPoly)> {
    let order = module.order();
    let m = order as i64;
    let r = homogeneous_index(module, a)? as i64;
    let s = homogeneous_index(module, b)? as i64;
    let m_num = numerator_over(m_idx, order)?;
    let n_num = numerator_over(n_idx, order)?;
    if (m_num - r).rem_euclid(m) != 0 || (n_num - s).rem_euclid(m) != 0 {
        return Err(Error::Precondition(format!(
            "indices ({m_idx}, {n_idx}) are not in the cosets ({r}/{m} + Z, {s}/{m} + Z)"
        )));
    }

    let mut lhs = JetPoly::zero(order);
    for i in 0..(-l).max(0) {
        let c = binomial(&big(m_idx), i as u64);
        let ab = &va::mode(a, l + i, u32::MAX)? * b;
        let q = m_idx + n_idx - Rational64::from_integer(i);
        lhs = &lhs + &module.mode(&ab, q)?.scale_rational(&c);
    }

    // last i with b_(n+i) or a_(m+i) possibly nonzero
    let bound_b = floor_div(b.max_weight_num() - m - n_num, m);
    let bound_a = floor_div(a.max_weight_num() - m - m_num, m);
    let mut upper = bound_a.max(bound_b);
    if l >= 0 {
        upper = upper.min(l);
    }
    let sign_l = parity_sign(l + 1);
    let mut rhs = JetPoly::zero(order);
    for i in 0..=upper {
        let c = binomial(&big_int(l), i as u64) * parity_sign(i);
        if c.is_zero() {
            continue;
        }
        let ri = Rational64::from_integer(i);
        let rl = Rational64::from_integer(l);
        let mut term = JetPoly::zero(order);
        if i <= bound_b {
            term = &term + &(&module.mode(a, rl + m_idx - ri)? * &module.mode(b, n_idx + ri)?);
        }
        if i <= bound_a {
            let other = &module.mode(b, rl + n_idx - ri)? * &module.mode(a, m_idx + ri)?;
            term = &term + &other.scale_rational(&sign_l);
        }
        rhs = &rhs + &term.scale_rational(&c);
    }
    Ok((lhs, rhs))
}

pub fn check_twisted_borcherds(
    module: &TwistedModule,
    a: &JetPoly,
    b: &JetPoly,
    l: i64,
    m_idx: Rational64,
    n_idx: Rational64,
) -> Result<Check> {
    let (lhs, rhs) = twisted_borcherds_sides(module, a, b, l, m_idx, n_idx)?;
    let diff = &lhs - &rhs;
    Ok(Check::from_difference(
        format!("twisted borcherds(a={a}, b={b}, l={l}, m={m_idx}, n={n_idx})"),
        &diff,
        diff.is_zero(),
    ))
}

/// Checks that the `z^w` coefficient of `Y_g(P_{i,n})` is `binom(w+n, n) P^g_{i,w+n}`
/// for every admissible `w` from `-n` to `window - n`.
pub fn check_descent(
    spec: &SchemeSpec,
    g: &DiagAutomorphism,
    relation: usize,
    n: u32,
    window: Rational64,
) -> Result<Check> {
    let order = spec.order();
    let m = order as i64;
    let p = spec
        .relations()
        .get(relation.wrapping_sub(1))
        .ok_or_else(|| Error::Precondition(format!("no relation {relation}")))?;
    let w_num = numerator_over(window, order)?;
    let shift = n as i64 * m;
    if shift > w_num {
        return Err(Error::Precondition(format!("n = {n} exceeds the window {window}")));
    }
    let module = TwistedModule::new(g, window)?;
    let field = module.field_to(&divided_power_t(p, n as u64), w_num - shift)?;
    let generators = substitute_jets(p, g.exponents(), window)?;
    let name = format!("descent(relation={relation}, n={n})");
    for w in -shift..=w_num - shift {
        let lhs = field.coeff_num(w)?;
        let top = big(Rational64::new(w + shift, m));
        let rhs = generators.coeff_num(w + shift)?.scale_rational(&binomial(&top, n as u64));
        if lhs != rhs {
            return Ok(Check::fail(
                name,
                format!(
                    "at z^({}): {} vs {}",
                    fmt_ratio(w, order),
                    lhs,
                    rhs
                ),
            ));
        }
    }
    Ok(Check::pass(name))
}
