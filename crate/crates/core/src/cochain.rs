//! Finite linear combinations of canonical graph classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::canon::canonical_form;
use crate::error::{CalcError, GraphError};
use crate::flavor::{ComplexSpec, Flavor};
use crate::graph::DirectedGraph;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(num: i64) -> Q {
    Q::from_integer(BigInt::from(num))
}

/// Accumulates signed raw terms into canonical classes with integer weights.
pub(crate) struct Accum {
    spec: ComplexSpec,
    filter: bool,
    pub(crate) map: HashMap<DirectedGraph, i64>,
}

impl Accum {
    /// `filter` drops raw terms that are not admissible in `spec` before canonicalizing.
    pub(crate) fn new(spec: ComplexSpec, filter: bool) -> Self {
        Self { spec, filter, map: HashMap::new() }
    }

    pub(crate) fn push(&mut self, raw: DirectedGraph, weight: i64) {
        if weight == 0 || (self.filter && !self.spec.admissible(&raw)) {
            return;
        }
        let form = canonical_form(&raw, self.spec.conv(), self.spec.directed());
        if form.is_zero() {
            return;
        }
        *self.map.entry(form.graph).or_insert(0) += weight * form.sign as i64;
    }

    pub(crate) fn into_terms(self) -> impl Iterator<Item = (DirectedGraph, i64)> {
        self.map.into_iter().filter(|(_, w)| *w != 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub spec: ComplexSpec,
    terms: BTreeMap<DirectedGraph, Q>,
}

impl Cochain {
    pub fn zero(spec: ComplexSpec) -> Self {
        Self { spec, terms: BTreeMap::new() }
    }

    /// A single raw graph, canonicalized (possibly to zero).
    pub fn from_graph(spec: ComplexSpec, g: &DirectedGraph) -> Self {
        let mut c = Self::zero(spec);
        c.add_raw(g, &Q::one());
        c
    }

    /// Add `coef * g` for a raw labeled graph.
    pub fn add_raw(&mut self, g: &DirectedGraph, coef: &Q) {
        let form = canonical_form(g, self.spec.conv(), self.spec.directed());
        if !form.is_zero() {
            let c = if form.sign < 0 { -coef.clone() } else { coef.clone() };
            self.add_canonical(form.graph, &c);
        }
    }

    /// Add `coef * g` for `g` already in canonical form and nonzero.
    pub fn add_canonical(&mut self, g: DirectedGraph, coef: &Q) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(g);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&DirectedGraph, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &DirectedGraph) -> Q {
        self.terms.get(g).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of a raw graph, accounting for its orientation sign.
    pub fn coefficient_of_raw(&self, g: &DirectedGraph) -> Q {
        let form = canonical_form(g, self.spec.conv(), self.spec.directed());
        if form.is_zero() {
            return Q::zero();
        }
        let c = self.coefficient(&form.graph);
        if form.sign < 0 {
            -c
        } else {
            c
        }
    }

    pub fn check_spec(&self, other: &Cochain) -> Result<(), CalcError> {
        if self.spec != other.spec {
            return Err(CalcError::SpecMismatch(self.spec.label(), other.spec.label()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, CalcError> {
        self.check_spec(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_canonical(g.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain, CalcError> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Cochain {
        let mut out = Cochain::zero(self.spec);
        if s.is_zero() {
            return out;
        }
        for (g, c) in &self.terms {
            out.terms.insert(g.clone(), c * s);
        }
        out
    }

    /// Degree shared by all terms; `Ok(None)` for the zero cochain.
    pub fn degree(&self) -> Result<Option<i64>, CalcError> {
        let mut degs = self.terms.keys().map(|g| self.spec.degree(g));
        let Some(first) = degs.next() else {
            return Ok(None);
        };
        if degs.any(|d| d != first) {
            return Err(CalcError::Inhomogeneous);
        }
        Ok(Some(first))
    }

    /// Split into the part satisfying `keep` and the rest.
    pub fn partition(&self, keep: impl Fn(&DirectedGraph) -> bool) -> (Cochain, Cochain) {
        let mut a = Cochain::zero(self.spec);
        let mut b = Cochain::zero(self.spec);
        for (g, c) in &self.terms {
            if keep(g) {
                a.terms.insert(g.clone(), c.clone());
            } else {
                b.terms.insert(g.clone(), c.clone());
            }
        }
        (a, b)
    }

    /// The same terms regarded in another complex with the same sign rules.
    pub fn respec(&self, spec: ComplexSpec) -> Cochain {
        debug_assert_eq!(spec.directed(), self.spec.directed());
        debug_assert_eq!(spec.conv(), self.spec.conv());
        Cochain { spec, terms: self.terms.clone() }
    }

    /// Keep only terms admissible in `spec` (valence projection).
    pub fn project(&self, spec: ComplexSpec) -> Cochain {
        let (kept, _) = self.partition(|g| spec.admissible(g));
        kept.respec(spec)
    }

    pub fn map_coefficients(&self, f: impl Fn(&DirectedGraph, &Q) -> Q) -> Cochain {
        let mut out = Cochain::zero(self.spec);
        for (g, c) in &self.terms {
            out.add_canonical(g.clone(), &f(g, c));
        }
        out
    }

    /// Terms sorted by encoding key.
    pub fn sorted_terms(&self) -> Vec<(String, &DirectedGraph, &Q)> {
        let mut v: Vec<_> = self.terms.iter().map(|(g, c)| (g.encode(), g, c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Text form: header `cochain <flavor> <n> <degree>` then `<num>/<den> <key>` lines.
    pub fn to_text(&self) -> String {
        let deg = self.degree().ok().flatten().map(|d| d.to_string()).unwrap_or_else(|| "-".to_string());
        let mut out = format!("cochain {} {} {}\n", self.spec.flavor, self.spec.n, deg);
        for (key, _, c) in self.sorted_terms() {
            out.push_str(&format!("{}/{} {}\n", c.numer(), c.denom(), key));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Cochain, CalcError> {
        let bad = |why: &str| CalcError::Graph(GraphError::Parse(why.to_string()));
        let mut lines = text.lines();
        let head: Vec<&str> = lines.next().ok_or_else(|| bad("empty cochain file"))?.split_whitespace().collect();
        if head.len() != 4 || head[0] != "cochain" {
            return Err(bad("cochain header must be 'cochain <flavor> <n> <degree>'"));
        }
        let flavor: Flavor = head[1].parse().map_err(|e: String| bad(&e))?;
        let n: i64 = head[2].parse().map_err(|_| bad("bad n"))?;
        let spec = ComplexSpec::new(flavor, n);
        let mut out = Cochain::zero(spec);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (coef, key) = line.split_once(' ').ok_or_else(|| bad("term must be '<num>/<den> <key>'"))?;
            let (num, den) = coef.split_once('/').ok_or_else(|| bad("coefficient must be num/den"))?;
            let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
            let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            let g = DirectedGraph::parse(key)?;
            out.add_raw(&g, &Q::new(num, den));
        }
        if head[3] != "-" {
            let d: i64 = head[3].parse().map_err(|_| bad("bad degree"))?;
            if out.degree()?.is_some_and(|x| x != d) {
                return Err(bad("degree in header does not match the terms"));
            }
        }
        Ok(out)
    }

    /// Largest absolute coefficient, for reporting.
    pub fn max_abs(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_terms_cancel_through_signs() {
        let spec = ComplexSpec::new(Flavor::FcGCor, 2);
        let a = DirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let b = a.with_edge_order(&[1, 0]);
        let mut c = Cochain::zero(spec);
        c.add_raw(&a, &qi(1));
        c.add_raw(&b, &qi(1));
        // odd edges: swapping the two edges is a sign
        assert!(c.is_zero());
    }

    #[test]
    fn text_roundtrip() {
        let spec = ComplexSpec::new(Flavor::GCor, 2);
        let g = DirectedGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let mut c = Cochain::zero(spec);
        c.add_raw(&g, &qi(1));
        assert!(c.is_zero());
        let g = DirectedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        c.add_raw(&g, &q(-3, 4));
        let text = c.to_text();
        assert!(text.starts_with("cochain GCor 2 1\n-3/4 g 3 3 0 :"));
        assert_eq!(Cochain::from_text(&text).unwrap(), c);
    }
}
