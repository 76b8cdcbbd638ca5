//! Jet variables `x[i,n]`, sparse polynomials in them over Q(zeta_m), the
//! translation derivation and the diagonal automorphism action.
//!
//! Levels are stored as integer numerators over the session order `m`, so the
//! untwisted variables (numerators divisible by `m`) and the twisted ones share
//! a single representation.

mod series;

pub use series::{substitute_jets, PuiseuxSeries};

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Rational64};

use crate::cyclo::{zeta_pow, CycScalar};
use crate::rational::{big_int, fmt_ratio, from_numerator};

/// Which insertion point a variable belongs to. Coinvariant computations use
/// two disjoint alphabets, one per marked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Point {
    #[default]
    Origin,
    Infinity,
}

/// The jet variable `x[index, level/m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JetVar {
    pub point: Point,
    pub index: u32,
    /// Numerator of the level over the session order; always `<= 0`.
    pub level: i64,
}

impl JetVar {
    pub fn new(index: u32, level: i64) -> Self {
        debug_assert!(level <= 0, "jet levels are nonpositive");
        JetVar {
            point: Point::Origin,
            index,
            level,
        }
    }

    pub fn at(point: Point, index: u32, level: i64) -> Self {
        JetVar {
            point,
            index,
            level,
        }
    }

    /// Weight numerator over `m`: `-level`.
    pub fn weight_num(&self) -> i64 {
        -self.level
    }

    pub fn weight(&self, order: u32) -> Rational64 {
        from_numerator(-self.level, order)
    }

    pub fn display(&self, order: u32) -> String {
        let prefix = match self.point {
            Point::Origin => "x",
            Point::Infinity => "xinf",
        };
        format!("{prefix}{}[{}]", self.index, fmt_ratio(self.level, order))
    }
}

impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.point, self.index, Reverse(self.level)).cmp(&(
            other.point,
            other.index,
            Reverse(other.level),
        ))
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A monomial: variables in increasing order with positive exponents.
///
/// Monomials are ordered by total degree first, which makes the last key of a
/// polynomial its leading term for the degree filtration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(JetVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (JetVar, u32)>) -> Self {
        let mut acc: BTreeMap<JetVar, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *acc.entry(v).or_default() += e;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn weight_num(&self) -> i64 {
        self.0.iter().map(|(v, e)| v.weight_num() * *e as i64).sum()
    }

    pub fn exponent_of(&self, v: &JetVar) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes one power of `v`; returns the exponent it had.
    pub fn without_one(&self, v: &JetVar) -> Option<(u32, Monomial)> {
        let pos = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// The eigencharacter `sum alpha_i * e_i mod m` of the monomial.
    pub fn character(&self, alpha: &[u32], order: u32) -> u32 {
        let total: u64 = self
            .0
            .iter()
            .map(|(v, e)| alpha[(v.index - 1) as usize] as u64 * *e as u64)
            .sum();
        (total % order as u64) as u32
    }

    pub fn map_vars(&self, f: impl Fn(&JetVar) -> JetVar) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|(v, e)| (f(v), *e)))
    }

    pub fn display(&self, order: u32) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.display(order)
                } else {
                    format!("{}^{e}", v.display(order))
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in jet variables with coefficients in Q(zeta_m).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetPoly {
    order: u32,
    terms: BTreeMap<Monomial, CycScalar>,
}

impl JetPoly {
    pub fn zero(order: u32) -> Self {
        JetPoly {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(CycScalar::one(order))
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(order: u32, v: JetVar) -> Self {
        Self::monomial(Monomial::var(v), CycScalar::one(order))
    }

    /// `x[index, 0]`.
    pub fn gen(order: u32, index: u32) -> Self {
        Self::var(order, JetVar::new(index, 0))
    }

    pub fn monomial(mono: Monomial, c: CycScalar) -> Self {
        let mut p = JetPoly::zero(c.order());
        p.add_term(mono, &c);
        p
    }

    pub fn from_terms(order: u32, terms: impl IntoIterator<Item = (Monomial, CycScalar)>) -> Self {
        let mut p = JetPoly::zero(order);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CycScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, CycScalar> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomials (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coefficient(&self, mono: &Monomial) -> CycScalar {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| CycScalar::zero(self.order))
    }

    /// Leading term in the degree-first monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &CycScalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, mono: Monomial, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &JetPoly, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), &(d * c));
        }
    }

    pub fn scale(&self, c: &CycScalar) -> JetPoly {
        if c.is_zero() {
            return JetPoly::zero(self.order);
        }
        JetPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), d * c))
                .collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> JetPoly {
        self.scale(&CycScalar::from_rational(self.order, q.clone()))
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> JetPoly {
        JetPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> JetPoly {
        let mut acc = JetPoly::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest monomial weight (as a numerator over m); 0 for constants and zero.
    pub fn max_weight_num(&self) -> i64 {
        self.terms.keys().map(Monomial::weight_num).max().unwrap_or(0)
    }

    /// The common weight of all monomials, if the polynomial is weight-homogeneous.
    /// The zero polynomial reports `None`.
    pub fn homogeneous_weight(&self) -> Option<Rational64> {
        let mut weights = self.terms.keys().map(Monomial::weight_num);
        let w = weights.next()?;
        weights
            .all(|x| x == w)
            .then(|| from_numerator(w, self.order))
    }

    pub fn variables(&self) -> Vec<JetVar> {
        let mut vs: Vec<JetVar> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn map_vars(&self, f: impl Fn(&JetVar) -> JetVar) -> JetPoly {
        JetPoly::from_terms(
            self.order,
            self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())),
        )
    }

    /// Moves every variable to the given alphabet.
    pub fn to_point(&self, point: Point) -> JetPoly {
        self.map_vars(|v| JetVar { point, ..*v })
    }

    /// Sets every variable matching `kill` to zero.
    pub fn set_zero(&self, kill: impl Fn(&JetVar) -> bool) -> JetPoly {
        JetPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.factors().iter().any(|(v, _)| kill(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, v: &JetVar) -> JetPoly {
        let mut out = JetPoly::zero(self.order);
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.without_one(v) {
                out.add_term(rest, &c.scale(&big_int(e as i64)));
            }
        }
        out
    }

    /// Applies the derivation determined by its values on variables.
    pub fn apply_derivation(&self, on_var: impl Fn(&JetVar) -> JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.order);
        for (m, c) in &self.terms {
            for (v, e) in m.factors() {
                let image = on_var(v);
                if image.is_zero() {
                    continue;
                }
                let (_, rest) = m.without_one(v).expect("variable present");
                let coeff = c.scale(&big_int(*e as i64));
                for (im, ic) in image.terms() {
                    out.add_term(im.mul(&rest), &(ic * &coeff));
                }
            }
        }
        out
    }

    pub fn display(&self) -> String {
        self.render(|m| m.display(self.order))
    }

    fn render(&self, mono: impl Fn(&Monomial) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            let (neg, body) = match (c.as_rational(), c.term_count()) {
                (Some(q), _) => {
                    let neg = q < &BigRational::from_integer(BigInt::from(0));
                    let abs = if neg { -q } else { q.clone() };
                    let body = if m.is_one() {
                        abs.to_string()
                    } else if abs == BigRational::from_integer(BigInt::from(1)) {
                        mono(m)
                    } else {
                        format!("{abs}*{}", mono(m))
                    };
                    (neg, body)
                }
                (None, 1) if !c.to_string().starts_with('-') => {
                    if m.is_one() {
                        (false, c.to_string())
                    } else {
                        (false, format!("{c}*{}", mono(m)))
                    }
                }
                _ => {
                    if m.is_one() {
                        (false, format!("({c})"))
                    } else {
                        (false, format!("({c})*{}", mono(m)))
                    }
                }
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    /// Like `display`, with variables labelled by user names: `name[level]`, and
    /// `name_inf[level]` at infinity.
    pub fn display_named(&self, names: &[String]) -> String {
        let order = self.order;
        self.render(|m| {
            if m.is_one() {
                return "1".to_string();
            }
            m.factors()
                .iter()
                .map(|(v, e)| {
                    let base = names
                        .get((v.index - 1) as usize)
                        .map(|n| match v.point {
                            Point::Origin => format!("{n}[{}]", fmt_ratio(v.level, order)),
                            Point::Infinity => format!("{n}_inf[{}]", fmt_ratio(v.level, order)),
                        })
                        .unwrap_or_else(|| v.display(order));
                    if *e == 1 {
                        base
                    } else {
                        format!("{base}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        })
    }

    /// Expression text over user variable names; level-0 origin variables print
    /// as their names, so the result parses back for polynomials in `x[i,0]`.
    pub fn to_expr(&self, names: &[String]) -> String {
        let order = self.order;
        self.render(|m| {
            m.factors()
                .iter()
                .map(|(v, e)| {
                    let name = if v.level == 0 && v.point == Point::Origin {
                        names
                            .get((v.index - 1) as usize)
                            .cloned()
                            .unwrap_or_else(|| v.display(order))
                    } else {
                        v.display(order)
                    };
                    if *e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        })
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Debug for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetPoly[m={}]({})", self.order, self.display())
    }
}

impl Add for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        JetPoly {
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        let mut out = JetPoly::zero(self.order);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.mul(b), &(c * d));
            }
        }
        out
    }
}

impl Add for JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: JetPoly) -> JetPoly {
        &self + &rhs
    }
}

impl Sub for JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: JetPoly) -> JetPoly {
        &self - &rhs
    }
}

impl Mul for JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: JetPoly) -> JetPoly {
        &self * &rhs
    }
}

/// The translation derivation `T x[i,n] = -(n-1) x[i,n-1]`, extended by Leibniz.
pub fn derivation_t(p: &JetPoly) -> JetPoly {
    let m = p.order();
    p.apply_derivation(|v| {
        // -(n - 1) with n = level/m
        let c = BigRational::new(BigInt::from(m as i64 - v.level), BigInt::from(m));
        JetPoly::var(m, JetVar { level: v.level - m as i64, ..*v }).scale_rational(&c)
    })
}

/// `T^k(p) / k!`.
pub fn divided_power_t(p: &JetPoly, k: u64) -> JetPoly {
    let mut acc = p.clone();
    for j in 1..=k {
        acc = derivation_t(&acc).scale_rational(&BigRational::new(BigInt::from(1), BigInt::from(j)));
    }
    acc
}

/// The diagonal automorphism `x[i,n] -> zeta^{alpha_i} x[i,n]`.
pub fn apply_automorphism(alpha: &[u32], p: &JetPoly) -> JetPoly {
    let m = p.order();
    JetPoly::from_terms(
        m,
        p.terms()
            .iter()
            .map(|(mono, c)| (mono.clone(), c * &zeta_pow(m, mono.character(alpha, m) as i64))),
    )
}

/// Splits `p` into its eigencomponents `p_0, ..., p_{m-1}` with `g p_r = zeta^r p_r`.
pub fn eigen_decompose(alpha: &[u32], p: &JetPoly) -> Vec<JetPoly> {
    let m = p.order();
    let mut parts = vec![JetPoly::zero(m); m as usize];
    for (mono, c) in p.terms() {
        parts[mono.character(alpha, m) as usize].add_term(mono.clone(), c);
    }
    parts
}

/// The eigenindex of `p` when it lies in a single eigenspace.
pub fn eigenindex(alpha: &[u32], p: &JetPoly) -> Option<u32> {
    let m = p.order();
    let mut chars = p.terms().keys().map(|mono| mono.character(alpha, m));
    let first = chars.next().unwrap_or(0);
    chars.all(|c| c == first).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(m: u32, i: u32, n: i64) -> JetPoly {
        JetPoly::var(m, JetVar::new(i, n * m as i64))
    }

    fn int(m: u32, c: i64) -> CycScalar {
        CycScalar::from_integer(m, c)
    }

    #[test]
    fn translation_examples() {
        assert_eq!(derivation_t(&x(1, 1, 0)), x(1, 1, -1));
        assert_eq!(derivation_t(&x(1, 1, -1)), x(1, 1, -2).scale(&int(1, 2)));
        let sq = x(1, 1, 0).pow(2);
        let expect = (&x(1, 1, 0) * &x(1, 1, -1)).scale(&int(1, 2));
        assert_eq!(derivation_t(&sq), expect);
        assert!(derivation_t(&JetPoly::one(1)).is_zero());
    }

    #[test]
    fn translation_respects_session_order() {
        // with m = 2 the untwisted variable x[1,-1] has numerator -2
        assert_eq!(derivation_t(&x(2, 1, -1)), x(2, 1, -2).scale(&int(2, 2)));
        assert_eq!(divided_power_t(&x(3, 2, 0), 4), x(3, 2, -4));
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(apply_automorphism(&[1], &x(2, 1, 0)), -&x(2, 1, 0));
        let sq = x(2, 1, 0).pow(2);
        assert_eq!(apply_automorphism(&[1], &sq), sq);
        let cube = x(4, 1, -1).pow(3);
        assert_eq!(apply_automorphism(&[1], &cube), cube.scale(&-zeta_pow(4, 1)));
    }

    #[test]
    fn eigen_examples() {
        let p = &x(2, 1, 0) + &x(2, 1, 0).pow(2);
        let parts = eigen_decompose(&[1], &p);
        assert_eq!(parts[1], x(2, 1, 0));
        assert_eq!(parts[0], x(2, 1, 0).pow(2));
        let q = &x(3, 1, 0) * &x(3, 2, 0);
        let parts = eigen_decompose(&[1, 2], &q);
        assert_eq!(parts[0], q);
        assert!(parts[1].is_zero() && parts[2].is_zero());
        assert_eq!(eigenindex(&[1, 2], &q), Some(0));
    }

    #[test]
    fn display_forms() {
        let v = JetVar::new(1, -3);
        assert_eq!(v.display(2), "x1[-3/2]");
        assert_eq!(JetVar::new(2, 0).display(3), "x2[0]");
        let p = &x(1, 1, 0).pow(2) - &x(1, 2, 0);
        assert_eq!(p.to_string(), "-x2[0] + x1[0]^2");
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(p.to_expr(&names), "-b + a^2");
    }

    fn arb_poly(m: u32) -> impl Strategy<Value = JetPoly> {
        let term = (
            proptest::collection::vec((1u32..=2, 0i64..=3, 1u32..=2), 0..=3),
            -3i64..=3,
            0i64..(m as i64),
        );
        proptest::collection::vec(term, 0..=4).prop_map(move |terms| {
            let mut p = JetPoly::zero(m);
            for (factors, c, z) in terms {
                let mono = Monomial::from_factors(
                    factors
                        .into_iter()
                        .map(|(i, n, e)| (JetVar::new(i, -n * m as i64), e)),
                );
                p.add_term(mono, &(&int(m, c) * &zeta_pow(m, z)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn t_commutes_with_automorphism(p in arb_poly(3), a1 in 0u32..3, a2 in 0u32..3) {
            let alpha = [a1, a2];
            prop_assert_eq!(
                derivation_t(&apply_automorphism(&alpha, &p)),
                apply_automorphism(&alpha, &derivation_t(&p))
            );
        }

        #[test]
        fn t_is_a_derivation(p in arb_poly(2), q in arb_poly(2)) {
            let lhs = derivation_t(&(&p * &q));
            let rhs = &(&derivation_t(&p) * &q) + &(&p * &derivation_t(&q));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eigen_components_sum_and_scale(p in arb_poly(4), a1 in 0u32..4, a2 in 0u32..4) {
            let alpha = [a1, a2];
            let parts = eigen_decompose(&alpha, &p);
            let mut sum = JetPoly::zero(4);
            for (r, part) in parts.iter().enumerate() {
                prop_assert_eq!(apply_automorphism(&alpha, part), part.scale(&zeta_pow(4, r as i64)));
                sum = &sum + part;
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn weight_is_additive(a in arb_poly(1), b in arb_poly(1)) {
            let parts_a: Vec<_> = a.terms().keys().cloned().collect();
            let parts_b: Vec<_> = b.terms().keys().cloned().collect();
            for ma in &parts_a {
                for mb in &parts_b {
                    prop_assert_eq!(ma.mul(mb).weight_num(), ma.weight_num() + mb.weight_num());
                    prop_assert_eq!(ma.mul(mb).degree(), ma.degree() + mb.degree());
                }
            }
        }
    }
}
