//! Truncated presentations of jet and twisted jet algebras, fixed-point rings,
//! and bigraded quotient dimensions by exact linear algebra.

use std::collections::{BTreeMap, HashMap};

use num::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetpoly::{
    apply_automorphism, divided_power_t, substitute_jets, JetPoly, JetVar, Monomial, Point,
};
use crate::linalg::{in_span, EchelonSpan};
use crate::rational::{from_numerator, numerator_over};

/// `Z = Spec C[x_i]/(P_1, ..., P_r)` with relations in level-0 variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    order: u32,
    variables: Vec<u32>,
    relations: Vec<JetPoly>,
}

impl SchemeSpec {
    /// Scheme in variables `x_1..x_k`.
    pub fn new(order: u32, k: u32, relations: Vec<JetPoly>) -> Result<Self> {
        Self::with_variables(order, (1..=k).collect(), relations)
    }

    pub fn with_variables(order: u32, mut variables: Vec<u32>, relations: Vec<JetPoly>) -> Result<Self> {
        variables.sort_unstable();
        variables.dedup();
        for (j, p) in relations.iter().enumerate() {
            if p.order() != order {
                return Err(Error::IncompatibleField {
                    left: order,
                    right: p.order(),
                });
            }
            for v in p.variables() {
                if v.level != 0 || v.point != Point::Origin {
                    return Err(Error::Precondition(format!(
                        "relation {} uses {}; relations must be in level-0 variables",
                        j + 1,
                        v.display(order)
                    )));
                }
                if variables.binary_search(&v.index).is_err() {
                    return Err(Error::Precondition(format!(
                        "relation {} uses undeclared variable x{}",
                        j + 1,
                        v.index
                    )));
                }
            }
        }
        Ok(SchemeSpec {
            order,
            variables,
            relations,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Indices of the coordinate variables.
    pub fn variables(&self) -> &[u32] {
        &self.variables
    }

    pub fn k(&self) -> usize {
        self.variables.len()
    }

    pub fn relations(&self) -> &[JetPoly] {
        &self.relations
    }

    /// Largest variable index, used to size exponent vectors.
    pub fn max_index(&self) -> u32 {
        self.variables.iter().copied().max().unwrap_or(0)
    }
}

/// The diagonalized automorphism `x_i -> zeta_m^{alpha_i} x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagAutomorphism {
    order: u32,
    exponents: Vec<u32>,
}

impl DiagAutomorphism {
    pub fn new(order: u32, exponents: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("automorphism order must be positive".into()));
        }
        if let Some(a) = exponents.iter().find(|&&a| a >= order) {
            return Err(Error::Precondition(format!(
                "exponent {a} is not in 0..{order}"
            )));
        }
        Ok(DiagAutomorphism { order, exponents })
    }

    pub fn identity(order: u32, k: usize) -> Self {
        DiagAutomorphism {
            order,
            exponents: vec![0; k],
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, index: u32) -> u32 {
        self.exponents[(index - 1) as usize]
    }

    pub fn inverse(&self) -> Self {
        DiagAutomorphism {
            order: self.order,
            exponents: self
                .exponents
                .iter()
                .map(|&a| (self.order - a) % self.order)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn apply(&self, p: &JetPoly) -> JetPoly {
        apply_automorphism(&self.exponents, p)
    }

    /// Checks that each relation is mapped into the linear span of the relations.
    pub fn check_preserves(&self, spec: &SchemeSpec) -> Result<()> {
        if self.order != spec.order() {
            return Err(Error::IncompatibleField {
                left: self.order,
                right: spec.order(),
            });
        }
        if (self.exponents.len() as u32) < spec.max_index() {
            return Err(Error::Precondition(format!(
                "automorphism has {} exponents but the scheme uses x{}",
                self.exponents.len(),
                spec.max_index()
            )));
        }
        for (j, p) in spec.relations().iter().enumerate() {
            if !in_span(self.order, spec.relations(), &self.apply(p)) {
                return Err(Error::IdealNotPreserved { relation: j + 1 });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMethod {
    /// `P_{i,n} = T^n P_i / n!`
    TRecursion,
    /// coefficient of `t^n` in `P_i(x_1(t), ..., x_k(t))`
    Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// 1-based index of the relation it came from.
    pub relation: usize,
    pub weight: Rational64,
    pub poly: JetPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPresentation {
    pub automorphism: Option<DiagAutomorphism>,
    pub max_weight: Rational64,
    pub variables: Vec<JetVar>,
    pub generators: Vec<Generator>,
}

impl JetPresentation {
    pub fn generator_polys(&self) -> Vec<JetPoly> {
        self.generators.iter().map(|g| g.poly.clone()).collect()
    }

    pub fn generators_of(&self, relation: usize) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(move |g| g.relation == relation)
    }
}

/// Variables `x[i,n]` with `n` in `alpha_i/m + Z`, `n <= 0`, weight `<= max_weight_num/m`.
pub fn admissible_variables(
    order: u32,
    indices: &[u32],
    alpha: impl Fn(u32) -> u32,
    point: Point,
    max_weight_num: i64,
) -> Vec<JetVar> {
    let m = order as i64;
    let mut out = Vec::new();
    for &i in indices {
        let mut level = (alpha(i) as i64).rem_euclid(m);
        if level > 0 {
            level -= m;
        }
        while -level <= max_weight_num {
            out.push(JetVar::at(point, i, level));
            level -= m;
        }
    }
    out.sort();
    out
}

/// Presentation of the jet algebra truncated at weight `max_weight`.
pub fn jet_generators(spec: &SchemeSpec, max_weight: u32, method: GeneratorMethod) -> Result<JetPresentation> {
    let m = spec.order();
    let w_num = max_weight as i64 * m as i64;
    let mut generators = Vec::new();
    let zeros = vec![0u32; spec.max_index() as usize];
    for (j, p) in spec.relations().iter().enumerate() {
        let series = match method {
            GeneratorMethod::Substitution => {
                Some(substitute_jets(p, &zeros, Rational64::from_integer(max_weight as i64))?)
            }
            GeneratorMethod::TRecursion => None,
        };
        for n in 0..=max_weight as i64 {
            let poly = match &series {
                Some(s) => s.coeff_num(n * m as i64)?,
                None => divided_power_t(p, n as u64),
            };
            if !poly.is_zero() {
                generators.push(Generator {
                    relation: j + 1,
                    weight: Rational64::from_integer(n),
                    poly,
                });
            }
        }
    }
    Ok(JetPresentation {
        automorphism: None,
        max_weight: Rational64::from_integer(max_weight as i64),
        variables: admissible_variables(m, spec.variables(), |_| 0, Point::Origin, w_num),
        generators,
    })
}

/// Presentation of the twisted jet algebra truncated at weight `max_weight`.
pub fn twisted_jet_generators(
    spec: &SchemeSpec,
    g: &DiagAutomorphism,
    max_weight: Rational64,
) -> Result<JetPresentation> {
    g.check_preserves(spec)?;
    if max_weight < Rational64::from_integer(0) {
        return Err(Error::Precondition("max weight must be nonnegative".into()));
    }
    let m = spec.order();
    let w_num = numerator_over(max_weight, m)?;
    let mut generators = Vec::new();
    for (j, p) in spec.relations().iter().enumerate() {
        let series = substitute_jets(p, g.exponents(), max_weight)?;
        for w in 0..=w_num {
            let poly = series.coeff_num(w)?;
            if !poly.is_zero() {
                generators.push(Generator {
                    relation: j + 1,
                    weight: from_numerator(w, m),
                    poly,
                });
            }
        }
    }
    Ok(JetPresentation {
        automorphism: Some(g.clone()),
        max_weight,
        variables: admissible_variables(m, spec.variables(), |i| g.exponent(i), Point::Origin, w_num),
        generators,
    })
}

/// `C[Z^G]` for the cyclic group generated by `g`: keep the fixed coordinates,
/// set the others to zero, and drop relations that vanish.
pub fn fixed_point_ring(spec: &SchemeSpec, g: &DiagAutomorphism) -> Result<SchemeSpec> {
    g.check_preserves(spec)?;
    let keep: Vec<u32> = spec
        .variables()
        .iter()
        .copied()
        .filter(|&i| g.exponent(i) == 0)
        .collect();
    let relations = spec
        .relations()
        .iter()
        .map(|p| p.set_zero(|v| g.exponent(v.index) != 0))
        .filter(|p| !p.is_zero())
        .collect();
    SchemeSpec::with_variables(spec.order(), keep, relations)
}

/// Dimension table keyed by `(weight, degree)`.
pub type DimTable = BTreeMap<(Rational64, u32), usize>;

/// Monomials in `ambient` with weight numerator `<= max_w` and degree `<= max_d`, grouped by weight.
pub fn monomials_by_weight(ambient: &[JetVar], max_w: i64, max_d: u32) -> BTreeMap<i64, Vec<Monomial>> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        vars: &[JetVar],
        start: usize,
        current: &mut Vec<(JetVar, u32)>,
        w: i64,
        d: u32,
        max_w: i64,
        max_d: u32,
        out: &mut BTreeMap<i64, Vec<Monomial>>,
    ) {
        out.entry(w)
            .or_default()
            .push(Monomial::from_factors(current.iter().copied()));
        for idx in start..vars.len() {
            let v = vars[idx];
            let vw = v.weight_num();
            let mut e = 1;
            while d + e <= max_d && w + vw * e as i64 <= max_w {
                current.push((v, e));
                go(vars, idx + 1, current, w + vw * e as i64, d + e, max_w, max_d, out);
                current.pop();
                e += 1;
            }
        }
    }
    let mut vars = ambient.to_vec();
    vars.sort();
    vars.dedup();
    let mut out = BTreeMap::new();
    go(&vars, 0, &mut Vec::new(), 0, 0, max_w, max_d, &mut out);
    out
}

/// Dimensions of the associated graded of the quotient for the degree
/// filtration, weight by weight, computed inside the window `(max_weight, max_degree)`.
///
/// The ideal is approximated by `{ q * gen : deg(q * gen) <= max_degree }`, so the
/// numbers are upper bounds that become exact once the window is large enough.
pub fn graded_quotient_dims(
    order: u32,
    ambient: &[JetVar],
    ideal_gens: &[JetPoly],
    max_weight: Rational64,
    max_degree: u32,
) -> Result<DimTable> {
    let w_num = numerator_over(max_weight, order)?;
    let known: std::collections::HashSet<JetVar> = ambient.iter().copied().collect();
    let mut gens: Vec<(i64, u32, &JetPoly)> = Vec::new();
    for g in ideal_gens.iter().filter(|g| !g.is_zero()) {
        let w = g.homogeneous_weight().ok_or_else(|| {
            Error::Precondition(format!("ideal generator {g} is not weight-homogeneous"))
        })?;
        if let Some(v) = g.variables().into_iter().find(|v| !known.contains(v)) {
            return Err(Error::Precondition(format!(
                "ideal generator uses {} outside the ambient variables",
                v.display(order)
            )));
        }
        gens.push((numerator_over(w, order)?, g.degree(), g));
    }
    let monos = monomials_by_weight(ambient, w_num, max_degree);
    let mut table = DimTable::new();
    for (&w, list) in &monos {
        let mut span = EchelonSpan::new(order);
        for &(gw, gd, g) in &gens {
            if gw > w || gd > max_degree {
                continue;
            }
            let Some(mults) = monos.get(&(w - gw)) else {
                continue;
            };
            for q in mults.iter().filter(|q| q.degree() + gd <= max_degree) {
                span.insert(&g.mul_monomial(q));
            }
        }
        let mut pivots_by_degree: HashMap<u32, usize> = HashMap::new();
        for p in span.pivots() {
            *pivots_by_degree.entry(p.degree()).or_default() += 1;
        }
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for mono in list {
            *counts.entry(mono.degree()).or_default() += 1;
        }
        for d in 0..=max_degree {
            let total = counts.get(&d).copied().unwrap_or(0);
            let killed = pivots_by_degree.get(&d).copied().unwrap_or(0);
            table.insert((from_numerator(w, order), d), total - killed);
        }
    }
    // weights with no monomials at all still get explicit zeros
    for w in 0..=w_num {
        for d in 0..=max_degree {
            table.entry((from_numerator(w, order), d)).or_insert(0);
        }
    }
    Ok(table)
}

pub fn total_dimension(table: &DimTable) -> usize {
    table.values().sum()
}
