use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Rational64};

use super::{JetPoly, JetVar, Point};
use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, from_numerator, numerator_over};

/// Truncated series in `z^{1/m}` with polynomial coefficients.
///
/// Exponents are stored as numerators over `m`. Coefficients above the
/// truncation order are unknown, not zero; `trunc == None` marks a series that
/// is exact in every degree (a finite sum).
#[derive(Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    order: u32,
    terms: BTreeMap<i64, JetPoly>,
    trunc: Option<i64>,
}

impl PuiseuxSeries {
    pub fn zero(order: u32, trunc: Option<i64>) -> Self {
        PuiseuxSeries {
            order,
            terms: BTreeMap::new(),
            trunc,
        }
    }

    /// The exact series with a single constant coefficient.
    pub fn constant(p: JetPoly) -> Self {
        let mut s = Self::zero(p.order(), None);
        s.insert(0, p);
        s
    }

    pub fn from_terms(
        order: u32,
        terms: impl IntoIterator<Item = (i64, JetPoly)>,
        trunc: Option<i64>,
    ) -> Self {
        let mut s = Self::zero(order, trunc);
        for (e, p) in terms {
            s.insert(e, p);
        }
        s
    }

    fn insert(&mut self, exp: i64, p: JetPoly) {
        if p.is_zero() || self.trunc.is_some_and(|t| exp > t) {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Truncation order as a numerator over m (`None` when exact).
    pub fn trunc_num(&self) -> Option<i64> {
        self.trunc
    }

    pub fn trunc_order(&self) -> Option<Rational64> {
        self.trunc.map(|t| from_numerator(t, self.order))
    }

    pub fn terms(&self) -> &BTreeMap<i64, JetPoly> {
        &self.terms
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Smallest exponent that can carry a nonzero coefficient.
    fn valuation_bound(&self) -> Option<i64> {
        match (self.terms.keys().next(), self.trunc) {
            (Some(&e), _) => Some(e),
            (None, Some(t)) => Some(t + 1),
            (None, None) => None,
        }
    }

    /// Coefficient of `z^{num/m}`.
    pub fn coeff_num(&self, num: i64) -> Result<JetPoly> {
        if let Some(t) = self.trunc {
            if num > t {
                return Err(Error::Truncation {
                    requested: fmt_ratio(num, self.order),
                    available: fmt_ratio(t, self.order),
                });
            }
        }
        Ok(self
            .terms
            .get(&num)
            .cloned()
            .unwrap_or_else(|| JetPoly::zero(self.order)))
    }

    /// Coefficient of `z^w`; errors past the truncation order.
    pub fn coefficient(&self, w: Rational64) -> Result<JetPoly> {
        self.coeff_num(numerator_over(w, self.order)?)
    }

    pub fn add(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        let trunc = min_trunc(self.trunc, other.trunc);
        let mut out = PuiseuxSeries::zero(self.order, trunc);
        for (e, p) in self.terms.iter().chain(&other.terms) {
            out.insert(*e, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            order: self.order,
            terms: self.terms.iter().map(|(e, p)| (*e, -p)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &BigRational) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.order,
            self.terms.iter().map(|(e, p)| (*e, p.scale_rational(c))),
            self.trunc,
        )
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn mul_poly(&self, q: &JetPoly) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.order,
            self.terms.iter().map(|(e, p)| (*e, p * q)),
            self.trunc,
        )
    }

    pub fn mul(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        // c_w uses a_i with i <= w - v(b); it is known while that stays within a's window.
        let trunc = match (self.valuation_bound(), other.valuation_bound()) {
            (Some(va), Some(vb)) => min_trunc(
                self.trunc.map(|t| t + vb),
                other.trunc.map(|t| t + va),
            ),
            _ => min_trunc(self.trunc, other.trunc),
        };
        let mut out = PuiseuxSeries::zero(self.order, trunc);
        for (ea, pa) in &self.terms {
            for (eb, pb) in &other.terms {
                let e = ea + eb;
                if trunc.is_some_and(|t| e > t) {
                    continue;
                }
                out.insert(e, pa * pb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::constant(JetPoly::one(self.order));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Term-wise `d/dz`; lowers the truncation order by one.
    pub fn derivative(&self) -> PuiseuxSeries {
        let m = self.order as i64;
        PuiseuxSeries::from_terms(
            self.order,
            self.terms.iter().map(|(e, p)| {
                (
                    e - m,
                    p.scale_rational(&BigRational::new(BigInt::from(*e), BigInt::from(m))),
                )
            }),
            self.trunc.map(|t| t - m),
        )
    }

    /// Drops everything above `num/m` and marks the series as truncated there.
    pub fn truncate(&self, num: i64) -> PuiseuxSeries {
        let trunc = min_trunc(self.trunc, Some(num));
        PuiseuxSeries {
            order: self.order,
            terms: self
                .terms
                .range(..=trunc.expect("bounded"))
                .map(|(e, p)| (*e, p.clone()))
                .collect(),
            trunc,
        }
    }

    /// Difference restricted to the common window; empty when the series agree there.
    pub fn difference_in_window(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        let trunc = min_trunc(self.trunc, other.trunc);
        let diff = self.sub(other);
        match trunc {
            Some(t) => diff.truncate(t),
            None => diff,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&JetPoly) -> JetPoly) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.order,
            self.terms.iter().map(|(e, p)| (*e, f(p))),
            self.trunc,
        )
    }

    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, p)| {
                let z = match *e {
                    0 => String::new(),
                    e if e == self.order as i64 => "z".to_string(),
                    e => format!("z^({})", fmt_ratio(e, self.order)),
                };
                if z.is_empty() {
                    format!("({p})")
                } else {
                    format!("({p})*{z}")
                }
            })
            .collect();
        if let Some(t) = self.trunc {
            parts.push(format!("O(z^({}))", fmt_ratio(t + 1, self.order)));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxSeries[m={}]({})", self.order, self.display())
    }
}

/// The expansion `x_i(t) = sum_n x[i,n] t^{-n}` over `n` in `alpha_i/m + Z`, `n <= 0`,
/// truncated at exponent `trunc/m`. All zeros in `alpha` gives the untwisted expansion.
pub fn jet_expansion(order: u32, index: u32, alpha_i: u32, point: Point, trunc: i64) -> PuiseuxSeries {
    let m = order as i64;
    let mut s = PuiseuxSeries::zero(order, Some(trunc));
    // largest admissible level numerator: the representative of alpha_i mod m that is <= 0
    let mut level = (alpha_i as i64).rem_euclid(m);
    if level > 0 {
        level -= m;
    }
    while -level <= trunc {
        s.insert(-level, JetPoly::var(order, JetVar::at(point, index, level)));
        level -= m;
    }
    s
}

/// Substitutes the jet expansions into a polynomial in level-0 variables, giving
/// `P(x_1(t), ..., x_k(t))` exactly up to `t^{trunc}`.
pub fn substitute_jets(p: &JetPoly, alpha: &[u32], trunc: Rational64) -> Result<PuiseuxSeries> {
    let order = p.order();
    let t = numerator_over(trunc, order)?;
    if let Some(v) = p.variables().iter().find(|v| v.level != 0) {
        return Err(Error::Precondition(format!(
            "substitution expects level-0 variables, found {}",
            v.display(order)
        )));
    }
    let mut cache: BTreeMap<JetVar, PuiseuxSeries> = BTreeMap::new();
    let mut out = PuiseuxSeries::zero(order, Some(t));
    for (mono, c) in p.terms() {
        let mut term = PuiseuxSeries::constant(JetPoly::constant(c.clone()));
        for (v, e) in mono.factors() {
            let alpha_i = *alpha.get((v.index - 1) as usize).ok_or_else(|| {
                Error::Precondition(format!("no automorphism exponent for variable {}", v.index))
            })?;
            let x = cache
                .entry(*v)
                .or_insert_with(|| jet_expansion(order, v.index, alpha_i, v.point, t));
            term = term.mul(&x.pow(*e));
        }
        out = out.add(&term);
    }
    Ok(out.truncate(t))
}
