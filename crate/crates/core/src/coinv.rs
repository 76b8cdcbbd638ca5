//! Coinvariants on the orbicurve `[P^1 / (Z/m)]` with marked points `0` and `infinity`.
//!
//! The group acts by `u -> zeta u`. The module at `0` is the `g`-twisted jet algebra,
//! the module at `infinity` is the `g^{-1}`-twisted one, written in a separate
//! alphabet. An invariant section `p u^j du` acts on the tensor product by
//! multiplication with `m_0 + m_inf`, its residues against the two twisted fields.

use num::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetpoly::{JetPoly, JetVar, Monomial, Point};
use crate::jetscheme::{
    fixed_point_ring, graded_quotient_dims, monomials_by_weight, twisted_jet_generators,
    DiagAutomorphism, DimTable, SchemeSpec,
};
use crate::rational::{fmt_ratio, numerator_over};
use crate::report::{Check, CheckReport};
use crate::twisted::TwistedModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbiSetup {
    pub spec: SchemeSpec,
    /// Stabilizer generator at `0`; the one at `infinity` is its inverse.
    pub g: DiagAutomorphism,
    pub max_weight: Rational64,
    pub max_degree: u32,
    /// Range of `j` for the sections `p u^j du`; defaults to `-(mW+1)..=mW`.
    pub j_range: Option<(i64, i64)>,
}

impl OrbiSetup {
    pub fn new(spec: SchemeSpec, g: DiagAutomorphism, max_weight: Rational64, max_degree: u32) -> Result<Self> {
        g.check_preserves(&spec)?;
        numerator_over(max_weight, spec.order())?;
        Ok(OrbiSetup {
            spec,
            g,
            max_weight,
            max_degree,
            j_range: None,
        })
    }

    pub fn with_j_range(mut self, lo: i64, hi: i64) -> Self {
        self.j_range = Some((lo, hi));
        self
    }

    pub fn order(&self) -> u32 {
        self.spec.order()
    }

    fn weight_num(&self) -> i64 {
        numerator_over(self.max_weight, self.order()).expect("checked in constructor")
    }

    pub fn default_j_range(&self) -> (i64, i64) {
        let w = self.weight_num();
        (-(w + 1), w)
    }

    pub fn j_range(&self) -> (i64, i64) {
        self.j_range.unwrap_or_else(|| self.default_j_range())
    }
}

/// The section `p u^j du` with `p` a monomial in level-0 variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutSection {
    #[serde(serialize_with = "serialize_monomial")]
    pub p: Monomial,
    pub j: i64,
}

fn serialize_monomial<S: serde::Serializer>(p: &Monomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.display(1))
}

/// `m_0 (x) 1 + 1 (x) m_inf`, stored as its two tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleElement {
    pub origin: JetPoly,
    pub infinity: JetPoly,
}

impl BimoduleElement {
    /// The element as a polynomial in the union of both alphabets.
    pub fn to_poly(&self) -> JetPoly {
        &self.origin + &self.infinity
    }

    pub fn is_zero(&self) -> bool {
        self.origin.is_zero() && self.infinity.is_zero()
    }
}

/// Invariant sections: `j + 1 = sum alpha_i deg_i (mod m)`, `deg p <= max_degree`, `j` in range.
pub fn enumerate_sections(setup: &OrbiSetup, max_degree: u32, j_range: (i64, i64)) -> Vec<OutSection> {
    let order = setup.order();
    let m = order as i64;
    let level0: Vec<JetVar> = setup.spec.variables().iter().map(|&i| JetVar::new(i, 0)).collect();
    let monos = monomials_by_weight(&level0, 0, max_degree).remove(&0).unwrap_or_default();
    let mut out = Vec::new();
    for p in monos {
        let chi = p.character(setup.g.exponents(), order) as i64;
        for j in j_range.0..=j_range.1 {
            if (j + 1 - chi).rem_euclid(m) == 0 {
                out.push(OutSection { p: p.clone(), j });
            }
        }
    }
    out
}

/// Twisted modules at both marked points, sized for a range of residues.
pub struct ResidueContext {
    origin: TwistedModule,
    infinity: TwistedModule,
    alpha: Vec<u32>,
}

impl ResidueContext {
    /// Residues are available while `|j+1| <= window_num`.
    pub fn new(g: &DiagAutomorphism, window_num: i64) -> Result<Self> {
        let window = Rational64::new(window_num.max(0), g.order() as i64);
        Ok(ResidueContext {
            origin: TwistedModule::new(g, window)?,
            infinity: TwistedModule::at_point(&g.inverse(), window, Point::Infinity)?,
            alpha: g.exponents().to_vec(),
        })
    }

    fn coefficient(module: &TwistedModule, p: &JetPoly, e: i64) -> Result<JetPoly> {
        if e < 0 {
            return Ok(JetPoly::zero(module.order()));
        }
        if e > module.window_num() {
            return Err(Error::WindowExceeded(format!(
                "residue needs z^({}) beyond the window {}",
                fmt_ratio(e, module.order()),
                fmt_ratio(module.window_num(), module.order())
            )));
        }
        module.field_to(p, e)?.coeff_num(e)
    }

    pub fn relation(&self, s: &OutSection) -> Result<BimoduleElement> {
        let order = self.origin.order();
        let p = JetPoly::monomial(s.p.clone(), crate::cyclo::CycScalar::one(order));
        // u^j du = (1/m) z^{(j+1)/m - 1} dz near 0 and -(1/m) w^{-(j+1)/m - 1} dw near infinity
        let origin = Self::coefficient(&self.origin, &p, -(s.j + 1))?;
        let infinity = -&Self::coefficient(&self.infinity, &p, s.j + 1)?;
        let out = BimoduleElement { origin, infinity };
        if let Some(v) = coset_violation(&out, &self.alpha, order) {
            return Err(Error::Precondition(format!(
                "residue of p u^{} du produced {} outside its coset",
                s.j,
                v.display(order)
            )));
        }
        Ok(out)
    }
}

/// A variable whose level is not in `alpha_i/m + Z` at `0` or `-alpha_i/m + Z` at infinity.
pub fn coset_violation(e: &BimoduleElement, alpha: &[u32], order: u32) -> Option<JetVar> {
    let m = order as i64;
    let bad = |v: &JetVar, point: Point, sign: i64| {
        v.point != point
            || v.level > 0
            || alpha
                .get((v.index as usize).wrapping_sub(1))
                .is_none_or(|&a| (v.level - sign * a as i64).rem_euclid(m) != 0)
    };
    e.origin
        .variables()
        .into_iter()
        .find(|v| bad(v, Point::Origin, 1))
        .or_else(|| e.infinity.variables().into_iter().find(|v| bad(v, Point::Infinity, -1)))
}

pub fn residue_relation(s: &OutSection, setup: &OrbiSetup) -> Result<BimoduleElement> {
    ResidueContext::new(&setup.g, (s.j + 1).abs())?.relation(s)
}

/// Ambient variables and ideal generators of the coinvariant quotient.
#[derive(Clone, Debug)]
pub struct CoinvariantPresentation {
    pub variables: Vec<JetVar>,
    pub jet_relations: Vec<JetPoly>,
    pub residue_relations: Vec<(OutSection, BimoduleElement)>,
}

impl CoinvariantPresentation {
    pub fn generators(&self) -> Vec<JetPoly> {
        self.jet_relations
            .iter()
            .cloned()
            .chain(self.residue_relations.iter().map(|(_, e)| e.to_poly()))
            .collect()
    }
}

pub fn coinvariant_presentation(setup: &OrbiSetup) -> Result<CoinvariantPresentation> {
    let w = setup.weight_num();
    let at_zero = twisted_jet_generators(&setup.spec, &setup.g, setup.max_weight)?;
    let at_inf = twisted_jet_generators(&setup.spec, &setup.g.inverse(), setup.max_weight)?;

    let mut variables = at_zero.variables.clone();
    variables.extend(at_inf.variables.iter().map(|v| JetVar { point: Point::Infinity, ..*v }));
    let mut jet_relations = at_zero.generator_polys();
    jet_relations.extend(at_inf.generators.iter().map(|g| g.poly.to_point(Point::Infinity)));

    let range = setup.j_range();
    let ctx = ResidueContext::new(&setup.g, w)?;
    let mut residue_relations = Vec::new();
    for s in enumerate_sections(setup, setup.max_degree, range) {
        // the relation has weight |j+1|/m
        if (s.j + 1).abs() > w {
            continue;
        }
        let e = ctx.relation(&s)?;
        if !e.is_zero() {
            residue_relations.push((s, e));
        }
    }
    Ok(CoinvariantPresentation {
        variables,
        jet_relations,
        residue_relations,
    })
}

/// Bigraded dimensions of the coinvariants inside the window of `setup`.
pub fn coinvariant_dims(setup: &OrbiSetup) -> Result<DimTable> {
    let pres = coinvariant_presentation(setup)?;
    graded_quotient_dims(
        setup.order(),
        &pres.variables,
        &pres.generators(),
        setup.max_weight,
        setup.max_degree,
    )
}

/// Degree-graded dimensions of the fixed-point ring, placed at weight 0.
pub fn fixed_ring_dims(setup: &OrbiSetup) -> Result<DimTable> {
    let fixed = fixed_point_ring(&setup.spec, &setup.g)?;
    let vars: Vec<JetVar> = fixed.variables().iter().map(|&i| JetVar::new(i, 0)).collect();
    graded_quotient_dims(
        setup.order(),
        &vars,
        fixed.relations(),
        Rational64::from_integer(0),
        setup.max_degree,
    )
}

fn fmt_table(t: &DimTable) -> String {
    t.iter()
        .filter(|(_, &d)| d > 0)
        .map(|((w, d), n)| format!("({w},{d}):{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Compares the coinvariant dimensions with those of the fixed-point ring.
pub fn verify_fixed_ring(setup: &OrbiSetup) -> Result<CheckReport> {
    let order = setup.order();
    let pres = coinvariant_presentation(setup)?;
    let coinv = graded_quotient_dims(
        order,
        &pres.variables,
        &pres.generators(),
        setup.max_weight,
        setup.max_degree,
    )?;
    let fixed = fixed_ring_dims(setup)?;
    let mut report = CheckReport::new();

    let alpha = setup.g.exponents();
    let bad = pres
        .residue_relations
        .iter()
        .find_map(|(s, e)| coset_violation(e, alpha, order).map(|v| (s, v)));
    report.push(match bad {
        None => Check::pass("residue relations land in the twisted cosets"),
        Some((s, v)) => Check::fail(
            "residue relations land in the twisted cosets",
            format!("j={} p={}: {}", s.j, s.p.display(order), v.display(order)),
        ),
    });

    for &i in setup.spec.variables() {
        if setup.g.exponent(i) != 0 {
            continue;
        }
        let x0 = JetPoly::var(order, JetVar::new(i, 0));
        let xinf = JetPoly::var(order, JetVar::at(Point::Infinity, i, 0));
        let expected = &x0 - &xinf;
        let found = pres
            .residue_relations
            .iter()
            .any(|(s, e)| s.j == -1 && (e.to_poly() == expected || e.to_poly() == -&expected));
        let name = format!("weight-0 identification of x{i} at both points");
        report.push(if found {
            Check::pass(name)
        } else {
            Check::fail(name, "relation x[i,0] - xinf[i,0] not produced")
        });
    }

    let mut mismatch = Vec::new();
    for (&(w, d), &n) in &coinv {
        let want = if w == Rational64::from_integer(0) {
            fixed.get(&(w, d)).copied().unwrap_or(0)
        } else {
            0
        };
        if n != want {
            mismatch.push(format!("({w},{d}): {n} vs {want}"));
        }
    }
    let name = "coinvariant dimensions match the fixed-point ring";
    report.push(if mismatch.is_empty() {
        Check::pass(name)
    } else {
        Check::fail(
            name,
            format!("{}; coinvariants {}", mismatch.join(", "), fmt_table(&coinv)),
        )
    });
    Ok(report)
}

/// Whether the table of `small` agrees with `large` on the window of `small`.
pub fn tables_agree_on(small: &DimTable, large: &DimTable) -> bool {
    small
        .iter()
        .all(|(k, v)| large.get(k).copied().unwrap_or(0) == *v)
}
