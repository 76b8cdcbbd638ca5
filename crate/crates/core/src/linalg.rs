//! Exact row echelon spans of polynomials viewed as coefficient vectors.

use std::collections::HashMap;

use crate::cyclo::CycScalar;
use crate::jetpoly::{JetPoly, Monomial};

/// Echelon basis of a subspace of polynomials, keyed by leading monomial in the
/// degree-first order. Each stored row is monic.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    order: u32,
    rows: HashMap<Monomial, JetPoly>,
}

impl EchelonSpan {
    pub fn new(order: u32) -> Self {
        EchelonSpan {
            order,
            rows: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `p` until its leading monomial is not a pivot. Zero iff `p` lies in the span.
    pub fn reduce(&self, p: &JetPoly) -> JetPoly {
        let mut row = p.clone();
        loop {
            let (lead, c) = match row.leading() {
                Some((m, c)) => (m.clone(), c.clone()),
                None => return row,
            };
            match self.rows.get(&lead) {
                Some(pivot) => row.add_scaled(pivot, &-c),
                None => return row,
            }
        }
    }

    /// Inserts `p`; returns whether it enlarged the span.
    pub fn insert(&mut self, p: &JetPoly) -> bool {
        let row = self.reduce(p);
        let Some((lead, c)) = row.leading() else {
            return false;
        };
        let lead = lead.clone();
        let inv = c.inverse().expect("nonzero leading coefficient");
        self.rows.insert(lead, row.scale(&inv));
        true
    }

    pub fn contains(&self, p: &JetPoly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

/// Rank of a list of polynomials over Q(zeta_m).
pub fn rank(order: u32, polys: &[JetPoly]) -> usize {
    let mut span = EchelonSpan::new(order);
    for p in polys {
        span.insert(p);
    }
    span.rank()
}

/// Whether `p` is a Q(zeta_m)-linear combination of `basis`.
pub fn in_span(order: u32, basis: &[JetPoly], p: &JetPoly) -> bool {
    let mut span = EchelonSpan::new(order);
    for b in basis {
        span.insert(b);
    }
    span.contains(p)
}

/// Coefficient of `c` such that `p == c * q`, when one exists.
pub fn proportionality(p: &JetPoly, q: &JetPoly) -> Option<CycScalar> {
    if p.is_zero() {
        return Some(CycScalar::zero(p.order()));
    }
    let (lead, c) = q.leading()?;
    let d = p.coefficient(lead);
    let ratio = &d / c;
    (q.scale(&ratio) == *p).then_some(ratio)
}
