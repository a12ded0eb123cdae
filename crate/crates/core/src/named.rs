//! Named cochains: the edge, wheels, the theta graph, the corolla class and
//! the three-graph cocycle on four vertices in the oriented complex for `n = 2`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::calculus::{differential, edge_graph};
use crate::cochain::Cochain;
use crate::error::CalcError;
use crate::flavor::{ComplexSpec, Flavor};
use crate::graph::DirectedGraph;
use crate::hairy::corolla_class;
use crate::matrix::{normalize_primitive, rational_kernel, SparseMatrix};

/// The single edge in `flavor`, defaulting to the connected complexes.
pub fn mc_edge(n: i64, directed: bool) -> Cochain {
    let flavor = if directed { Flavor::FcGCor } else { Flavor::FcGC };
    Cochain::from_graph(ComplexSpec::new(flavor, n), &edge_graph())
}

/// Cycle on `length` vertices; with `alternating`, edge directions alternate
/// (this needs an even length).
pub fn wheel_graph(length: usize, alternating: bool) -> Result<DirectedGraph, CalcError> {
    if length == 0 || (alternating && length % 2 == 1) {
        return Err(CalcError::BadParameter(format!(
            "wheel of length {length}{}",
            if alternating { " cannot alternate" } else { "" }
        )));
    }
    let edges = (0..length)
        .map(|i| {
            let j = (i + 1) % length;
            if alternating && i % 2 == 1 {
                (j, i)
            } else {
                (i, j)
            }
        })
        .collect();
    Ok(DirectedGraph::new(length, edges)?)
}

/// Plain wheels live in the connected complex, alternating ones in the oriented complex.
pub fn wheel(n: i64, length: usize, alternating: bool) -> Result<Cochain, CalcError> {
    let flavor = if alternating { Flavor::GCor } else { Flavor::FcGC };
    Ok(Cochain::from_graph(ComplexSpec::new(flavor, n), &wheel_graph(length, alternating)?))
}

/// Two vertices joined by three edges, in the trivalent complex.
pub fn theta(n: i64) -> Cochain {
    let g = DirectedGraph::from_raw(2, 0, vec![(0, 1), (0, 1), (0, 1)], Vec::new());
    Cochain::from_graph(ComplexSpec::new(Flavor::GC, n), &g)
}

/// The three oriented graphs on four vertices and five edges spanning the cocycle.
pub fn shoikhet_graphs() -> [DirectedGraph; 3] {
    let mk = |e: &[(usize, usize)]| {
        DirectedGraph::new(4, e.iter().map(|&(s, t)| (s - 1, t - 1)).collect()).expect("valid graph")
    };
    [
        mk(&[(1, 2), (3, 2), (3, 1), (4, 1), (4, 2)]),
        mk(&[(1, 2), (2, 3), (1, 3), (1, 4), (2, 4)]),
        mk(&[(1, 2), (1, 3), (2, 3), (4, 1), (4, 2)]),
    ]
}

/// The combination of [`shoikhet_graphs`] killed by `δ` in `GCor_2`, with
/// coefficient `+1` on the graph whose canonical key sorts first.
pub fn shoikhet() -> Result<Cochain, CalcError> {
    let spec = ComplexSpec::new(Flavor::GCor, 2);
    let mut classes: Vec<Cochain> = shoikhet_graphs().iter().map(|g| Cochain::from_graph(spec, g)).collect();
    if classes.iter().any(|c| c.len() != 1) {
        return Err(CalcError::BadParameter("a cocycle graph vanishes".into()));
    }
    classes.sort_by_key(|c| c.sorted_terms()[0].0.clone());
    let mut rows: BTreeMap<DirectedGraph, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (j, c) in classes.iter().enumerate() {
        for (h, k) in differential(c).terms() {
            let next = rows.len();
            let r = *rows.entry(h.clone()).or_insert(next);
            let k = crate::matrix::from_big(k).ok_or_else(|| CalcError::BadParameter("coefficient overflow".into()))?;
            entries.push((r, j, k));
        }
    }
    let m = SparseMatrix::from_entries(rows.len(), classes.len(), entries);
    let kernel = rational_kernel(&m);
    if kernel.len() != 1 {
        return Err(CalcError::BadParameter(format!("kernel has dimension {}", kernel.len())));
    }
    let mut x = kernel[0].clone();
    normalize_primitive(&mut x);
    if x[0].is_zero() {
        return Err(CalcError::BadParameter("first graph does not appear in the cocycle".into()));
    }
    let mut out = Cochain::zero(spec);
    for (c, coef) in classes.iter().zip(&x) {
        out = out.add(&c.scale(coef))?;
    }
    let lead = out.sorted_terms()[0].2.clone();
    Ok(out.scale(&lead.recip()))
}

/// Look up a named cochain. Parameters: `n`, and `length` for wheels or `max_j` for the corolla class.
pub fn named_cochain(name: &str, n: i64, param: Option<usize>) -> Result<Cochain, CalcError> {
    let need = |what: &str| param.ok_or_else(|| CalcError::BadParameter(format!("{name} needs {what}")));
    match name {
        "mc_edge" | "edge" => Ok(mc_edge(n, false)),
        "mc_edge_directed" | "directed_edge" => Ok(mc_edge(n, true)),
        "wheel" => wheel(n, need("a length")?, false),
        "alt_wheel" | "alternating_wheel" => wheel(n, need("a length")?, true),
        "theta" => Ok(theta(n)),
        "corolla" | "corolla_class" => Ok(corolla_class(n, need("max_j")?)),
        "shoikhet" => {
            if n != 2 {
                return Err(CalcError::BadParameter("the four-vertex cocycle lives at n = 2".into()));
            }
            shoikhet()
        }
        other => Err(CalcError::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::qi;
    use num_traits::Signed;

    #[test]
    fn shoikhet_magnitudes_and_closedness() {
        let s = shoikhet().unwrap();
        assert_eq!(s.len(), 3);
        let mags: Vec<_> = shoikhet_graphs().iter().map(|g| s.coefficient_of_raw(g).abs()).collect();
        assert_eq!(mags, vec![qi(1), qi(1), qi(2)]);
        assert!(differential(&s).is_zero());
        assert_eq!(s.degree().unwrap(), Some(1));
        assert_eq!(s.sorted_terms()[0].2, &qi(1));
    }

    #[test]
    fn wheels_and_theta() {
        assert_eq!(wheel(1, 3, false).unwrap().degree().unwrap(), Some(2));
        assert!(wheel(2, 3, false).unwrap().is_zero());
        assert!(!wheel(2, 5, false).unwrap().is_zero());
        assert!(!wheel(3, 6, true).unwrap().is_zero());
        assert!(wheel(3, 5, true).is_err());
        assert!(!theta(1).is_zero());
        assert!(theta(2).is_zero());
        let w = wheel_graph(6, true).unwrap();
        assert!(w.is_oriented_acyclic());
    }

    #[test]
    fn lookup() {
        assert!(named_cochain("nope", 2, None).is_err());
        assert_eq!(named_cochain("corolla", 2, Some(4)).unwrap().len(), 3);
        assert!(named_cochain("wheel", 2, None).is_err());
    }
}
