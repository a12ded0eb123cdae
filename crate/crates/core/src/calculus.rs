//! Pre-Lie insertion, bracket and the differential `[m, -]`.
//!
//! Orientation conventions for `x •_v y`: the vertex `v` is moved to the end
//! of the vertex order (a sign when vertices are odd) and replaced by the
//! vertices of `y`; edges of `x` come first, then the edges of `y`. Every
//! edge end and leg formerly at `v` is reattached to some vertex of `y`
//! independently.

use std::collections::HashMap;

use crate::cochain::{qi, Accum, Cochain, Q};
use crate::error::CalcError;
use crate::flavor::ComplexSpec;
use crate::graph::DirectedGraph;
use crate::sign::SignConvention;

/// The single-edge graph `0 -> 1`.
pub fn edge_graph() -> DirectedGraph {
    DirectedGraph::from_raw(2, 0, vec![(0, 1)], Vec::new())
}

pub(crate) fn sign_pow(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

/// Expand `x •_v y` into raw labeled graphs with their signs.
///
/// `v` must be an internal vertex of `x`; `y` has no external vertices.
pub fn insert_raw(
    x: &DirectedGraph,
    v: usize,
    y: &DirectedGraph,
    conv: SignConvention,
    emit: &mut dyn FnMut(DirectedGraph, i64),
) {
    debug_assert!(!x.is_external(v));
    debug_assert_eq!(y.n_external(), 0);
    let nx = x.n_vertices();
    let ny = y.n_vertices();
    let nv = nx - 1 + ny;
    let sign = sign_pow(conv.vertices_odd() && (nx - 1 - v) % 2 == 1);
    let map_x = |u: usize| if u < v { u } else { u - 1 };
    let base = nx - 1;

    // slots: (index into edge list or leg list, which end); end 2 marks a leg
    let mut slots: Vec<(usize, u8)> = Vec::new();
    let mut edges: Vec<(u8, u8)> = Vec::with_capacity(x.n_edges() + y.n_edges());
    for (i, &(s, t)) in x.edges().iter().enumerate() {
        let (s, t) = (s as usize, t as usize);
        if s == v {
            slots.push((i, 0));
        }
        if t == v {
            slots.push((i, 1));
        }
        edges.push((if s == v { 0 } else { map_x(s) as u8 }, if t == v { 0 } else { map_x(t) as u8 }));
    }
    for &(s, t) in y.edges() {
        edges.push(((base + s as usize) as u8, (base + t as usize) as u8));
    }
    let mut legs: Vec<u8> = Vec::with_capacity(x.n_legs() + y.n_legs());
    for (i, &l) in x.legs().iter().enumerate() {
        if l as usize == v {
            slots.push((i, 2));
            legs.push(0);
        } else {
            legs.push(map_x(l as usize) as u8);
        }
    }
    for &l in y.legs() {
        legs.push((base + l as usize) as u8);
    }

    let mut choice = vec![0usize; slots.len()];
    loop {
        for (k, &(i, end)) in slots.iter().enumerate() {
            let w = (base + choice[k]) as u8;
            match end {
                0 => edges[i].0 = w,
                1 => edges[i].1 = w,
                _ => legs[i] = w,
            }
        }
        emit(DirectedGraph::from_raw(nv, x.n_external(), edges.clone(), legs.clone()), sign);
        // odometer over ny^{#slots} reattachments
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            choice[k] += 1;
            if choice[k] < ny {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `x • y` summed over all internal vertices of `x`.
pub fn pre_lie_raw(
    x: &DirectedGraph,
    y: &DirectedGraph,
    conv: SignConvention,
    emit: &mut dyn FnMut(DirectedGraph, i64),
) {
    for v in x.n_external()..x.n_vertices() {
        insert_raw(x, v, y, conv, emit);
    }
}

/// Raw expansion of `δx = m•x - (-1)^{|x|} x•m` for a single graph.
pub fn differential_raw(spec: &ComplexSpec, x: &DirectedGraph, emit: &mut dyn FnMut(DirectedGraph, i64)) {
    let conv = spec.conv();
    let m = edge_graph();
    for w in 0..2 {
        insert_raw(&m, w, x, conv, emit);
    }
    let s = -sign_pow(spec.degree(x).rem_euclid(2) == 1);
    pre_lie_raw(x, &m, conv, &mut |g, k| emit(g, s * k));
}

/// `δ` of one canonical graph as integer combination of canonical classes.
/// Terms are computed in the ambient flavor and projected to `spec`.
pub fn differential_graph(spec: &ComplexSpec, x: &DirectedGraph) -> HashMap<DirectedGraph, i64> {
    let mut acc = Accum::new(*spec, true);
    differential_raw(spec, x, &mut |g, k| acc.push(g, k));
    acc.into_terms().collect()
}

/// `δ` computed in the ambient flavor without projection.
pub fn ambient_differential(x: &Cochain) -> Cochain {
    let amb = x.spec.ambient();
    let mut out = Cochain::zero(amb);
    for (g, c) in x.terms() {
        let mut acc = Accum::new(amb, false);
        differential_raw(&amb, g, &mut |h, k| acc.push(h, k));
        for (h, k) in acc.into_terms() {
            out.add_canonical(h, &(c * qi(k)));
        }
    }
    out
}

pub fn differential(x: &Cochain) -> Cochain {
    let mut out = Cochain::zero(x.spec);
    for (g, c) in x.terms() {
        for (h, k) in differential_graph(&x.spec, g) {
            out.add_canonical(h, &(c * qi(k)));
        }
    }
    out
}

/// Pre-Lie product of cochains, projected to `x`'s complex.
pub fn pre_lie(x: &Cochain, y: &Cochain) -> Result<Cochain, CalcError> {
    x.check_spec(y)?;
    let spec = x.spec;
    let mut out = Cochain::zero(spec);
    for (gx, cx) in x.terms() {
        for (gy, cy) in y.terms() {
            let mut acc = Accum::new(spec, true);
            pre_lie_raw(gx, gy, spec.conv(), &mut |g, k| acc.push(g, k));
            let c = cx * cy;
            for (h, k) in acc.into_terms() {
                out.add_canonical(h, &(&c * qi(k)));
            }
        }
    }
    Ok(out)
}

/// Graded bracket `[x, y] = x•y - (-1)^{|x||y|} y•x` of homogeneous cochains.
pub fn bracket(x: &Cochain, y: &Cochain) -> Result<Cochain, CalcError> {
    x.check_spec(y)?;
    let (Some(dx), Some(dy)) = (x.degree()?, y.degree()?) else {
        return Ok(Cochain::zero(x.spec));
    };
    let xy = pre_lie(x, y)?;
    let yx = pre_lie(y, x)?;
    let s = sign_pow((dx * dy).rem_euclid(2) == 1);
    xy.sub(&yx.scale(&qi(s)))
}

/// Multiply every term by `lambda^{betti}`.
pub fn genus_rescale(x: &Cochain, lambda: &Q) -> Cochain {
    x.map_coefficients(|g, c| c * num_traits::pow(lambda.clone(), g.betti() as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flavor::Flavor;

    fn spec(f: Flavor, n: i64) -> ComplexSpec {
        ComplexSpec::new(f, n)
    }

    fn edge(f: Flavor, n: i64) -> Cochain {
        Cochain::from_graph(spec(f, n), &edge_graph())
    }

    #[test]
    fn insertion_term_count() {
        let m = edge_graph();
        let mut count = 0;
        insert_raw(&m, 0, &m, SignConvention::new(2), &mut |g, _| {
            assert_eq!((g.n_vertices(), g.n_edges()), (3, 2));
            count += 1;
        });
        assert_eq!(count, 2);
        let point = DirectedGraph::from_raw(1, 0, vec![], vec![]);
        let mut count = 0;
        insert_raw(&point, 0, &m, SignConvention::new(2), &mut |_, _| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn edge_is_maurer_cartan() {
        for f in [Flavor::FcGC, Flavor::FcGCor, Flavor::DfGC, Flavor::FGC] {
            for n in 1..=4 {
                let m = edge(f, n);
                assert!(!m.is_zero());
                assert!(bracket(&m, &m).unwrap().is_zero(), "{f} n={n}");
                assert!(differential(&m).is_zero(), "{f} n={n}");
            }
        }
    }

    #[test]
    fn rescale_identity_and_zero() {
        let x = edge(Flavor::FcGC, 2);
        assert_eq!(genus_rescale(&x, &qi(1)), x);
        assert_eq!(genus_rescale(&x, &qi(0)), x);
    }
}
