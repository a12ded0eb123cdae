//! The oriented complex with outgoing legs: its differential, the hairy map
//! from the oriented complex, and the corolla class.
//!
//! The differential has three parts. The first inserts the directed edge at
//! each vertex (legs at that vertex are redistributed). The second adjoins a
//! new source vertex with one edge into the graph and `k` legs. The third turns
//! one leg into an edge towards a new vertex carrying `j >= 1` legs. The new
//! vertex and the new edge come first in the orientation data. Relative signs
//! and the weight of the second part are not fixed by the pictures alone; the
//! admissible choices are found by the constraint search in the tests and
//! frozen in [`HatRule::FROZEN`].

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::{edge_graph, insert_raw, sign_pow};
use crate::cochain::{qi, Cochain, Q};
use crate::error::CalcError;
use crate::flavor::{ComplexSpec, Flavor};
use crate::graph::DirectedGraph;

/// Weight of the second term with `k` legs on the new vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegWeight {
    /// `1/k!`: the legs are symmetrized among themselves.
    PerLeg,
    /// `1/(k+1)!`: the new vertex of valence `k+1` is weighted as a whole.
    PerValence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HatRule {
    pub source_sign: i64,
    pub leg_sign: i64,
    pub source_weight: LegWeight,
}

impl HatRule {
    pub const FROZEN: HatRule = HatRule { source_sign: 1, leg_sign: 1, source_weight: LegWeight::PerLeg };

    pub fn candidates() -> Vec<HatRule> {
        let mut out = Vec::new();
        for source_sign in [1, -1] {
            for leg_sign in [1, -1] {
                for source_weight in [LegWeight::PerLeg, LegWeight::PerValence] {
                    out.push(HatRule { source_sign, leg_sign, source_weight });
                }
            }
        }
        out
    }
}

pub(crate) fn factorial(k: usize) -> Q {
    (1..=k as i64).fold(Q::one(), |acc, i| acc * qi(i))
}

fn hat_spec_check(spec: &ComplexSpec) -> Result<(), CalcError> {
    if spec.flavor != Flavor::HatGCor {
        return Err(CalcError::WrongFlavor(spec.flavor));
    }
    Ok(())
}

/// Raw expansion of the differential of one graph, truncated to at most `max_legs` legs.
pub fn hat_differential_raw(
    spec: &ComplexSpec,
    x: &DirectedGraph,
    max_legs: usize,
    rule: HatRule,
    emit: &mut dyn FnMut(DirectedGraph, Q),
) {
    let conv = spec.conv();
    let m = edge_graph();
    let nv = x.n_vertices();
    let l = x.n_legs();
    if l > max_legs {
        return;
    }

    let t1 = -sign_pow(spec.degree(x).rem_euclid(2) == 1);
    for v in 0..nv {
        insert_raw(x, v, &m, conv, &mut |g, k| emit(g, qi(t1 * k)));
    }

    // shifted copy with the new vertex 0 in front
    let shifted_edges: Vec<(u8, u8)> = x.edges().iter().map(|&(s, t)| (s + 1, t + 1)).collect();
    let shifted_legs: Vec<u8> = x.legs().iter().map(|&v| v + 1).collect();

    for target in 0..nv {
        for k in 0..=(max_legs - l) {
            let mut edges = Vec::with_capacity(x.n_edges() + 1);
            edges.push((0u8, target as u8 + 1));
            edges.extend_from_slice(&shifted_edges);
            let mut legs = shifted_legs.clone();
            legs.extend(std::iter::repeat_n(0u8, k));
            let weight = match rule.source_weight {
                LegWeight::PerLeg => factorial(k),
                LegWeight::PerValence => factorial(k + 1),
            };
            emit(DirectedGraph::from_raw(nv + 1, 0, edges, legs), qi(rule.source_sign) / weight);
        }
    }

    let vsign = sign_pow(conv.vertices_odd());
    for (i, &from) in x.legs().iter().enumerate() {
        for j in 1..=(max_legs + 1 - l) {
            let mut edges = Vec::with_capacity(x.n_edges() + 1);
            edges.push((from + 1, 0u8));
            edges.extend_from_slice(&shifted_edges);
            let mut legs: Vec<u8> = shifted_legs.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &v)| v).collect();
            legs.extend(std::iter::repeat_n(0u8, j));
            emit(DirectedGraph::from_raw(nv + 1, 0, edges, legs), qi(rule.leg_sign * vsign) / factorial(j));
        }
    }
}

/// Differential with an explicit rule, truncated to `max_legs` legs.
pub fn hat_differential_with(x: &Cochain, max_legs: usize, rule: HatRule) -> Result<Cochain, CalcError> {
    hat_spec_check(&x.spec)?;
    let spec = x.spec;
    let mut out = Cochain::zero(spec);
    for (g, c) in x.terms() {
        hat_differential_raw(&spec, g, max_legs, rule, &mut |h, w| {
            if spec.admissible(&h) {
                out.add_raw(&h, &(c * w));
            }
        });
    }
    Ok(out)
}

pub fn hat_differential(x: &Cochain, max_legs: usize) -> Result<Cochain, CalcError> {
    hat_differential_with(x, max_legs, HatRule::FROZEN)
}

/// Call `f` with every multiset of `total` legs on `nv` vertices, given as counts.
pub(crate) fn for_each_distribution(nv: usize, total: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(counts: &mut Vec<usize>, v: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
        if v + 1 == counts.len() {
            counts[v] = left;
            f(counts);
            counts[v] = 0;
            return;
        }
        for c in 0..=left {
            counts[v] = c;
            rec(counts, v + 1, left - c, f);
        }
        counts[v] = 0;
    }
    if nv == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    let mut counts = vec![0; nv];
    rec(&mut counts, 0, total, f);
}

/// The hairy map: attach legs in all ways, weighted by `1/prod(c_v!)`,
/// keeping terms with at most `max_legs` legs.
pub fn hairy_map(x: &Cochain, max_legs: usize) -> Result<Cochain, CalcError> {
    if x.spec.flavor != Flavor::GCor {
        return Err(CalcError::WrongFlavor(x.spec.flavor));
    }
    let spec = ComplexSpec { flavor: Flavor::HatGCor, ..x.spec };
    let mut out = Cochain::zero(spec);
    for (g, c) in x.terms() {
        let nv = g.n_vertices();
        for total in 0..=max_legs {
            for_each_distribution(nv, total, &mut |counts| {
                let extra: Vec<usize> =
                    counts.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect();
                let h = g.with_added_legs(&extra);
                if !spec.admissible(&h) {
                    return;
                }
                let w = counts.iter().fold(Q::one(), |acc, &k| acc * factorial(k));
                out.add_raw(&h, &(c / w));
            });
        }
    }
    Ok(out)
}

/// The single vertex with `j` legs.
pub fn corolla(j: usize) -> DirectedGraph {
    DirectedGraph::from_raw(1, 0, Vec::new(), vec![0; j])
}

/// `sum_{j=2}^{max_j} (j-1)/j! * corolla_j`.
pub fn corolla_class(n: i64, max_j: usize) -> Cochain {
    let spec = ComplexSpec::new(Flavor::HatGCor, n);
    let mut out = Cochain::zero(spec);
    for j in 2..=max_j {
        out.add_raw(&corolla(j), &(qi(j as i64 - 1) / factorial(j)));
    }
    out
}

/// Part of `x` with exactly `l` legs.
pub fn leg_component(x: &Cochain, l: usize) -> Cochain {
    x.partition(|g| g.n_legs() == l).0
}

/// Whether `x` vanishes in every leg count up to `max_legs`.
pub fn vanishes_through(x: &Cochain, max_legs: usize) -> bool {
    x.terms().all(|(g, c)| g.n_legs() > max_legs || c.is_zero())
}
