use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::DirectedGraph;
use crate::sign::{FlipReading, SignConvention};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    /// Full graph complex: undirected, any valence, possibly disconnected.
    FGC,
    /// Connected graphs, any valence.
    FcGC,
    /// Connected graphs with all vertices at least trivalent.
    GC,
    /// Directed full graph complex.
    DfGC,
    /// Directed graphs without directed cycles.
    FGCor,
    FcGCor,
    /// Connected, acyclic, all vertices at least bivalent.
    GCor,
    /// Connected acyclic graphs with outgoing legs; every vertex needs an outgoing edge or leg.
    HatGCor,
    /// Graphs operad: undirected, internal vertices at least trivalent.
    Graphs,
    /// Oriented graphs operad.
    GraphsOr,
}

impl Flavor {
    pub const ALL: [Flavor; 10] = [
        Flavor::FGC,
        Flavor::FcGC,
        Flavor::GC,
        Flavor::DfGC,
        Flavor::FGCor,
        Flavor::FcGCor,
        Flavor::GCor,
        Flavor::HatGCor,
        Flavor::Graphs,
        Flavor::GraphsOr,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Flavor::FGC => "fGC",
            Flavor::FcGC => "fcGC",
            Flavor::GC => "GC",
            Flavor::DfGC => "dfGC",
            Flavor::FGCor => "fGCor",
            Flavor::FcGCor => "fcGCor",
            Flavor::GCor => "GCor",
            Flavor::HatGCor => "hGCor",
            Flavor::Graphs => "Graphs",
            Flavor::GraphsOr => "Graphsor",
        }
    }

    /// Edge directions are data rather than quotiented.
    pub fn directed(self) -> bool {
        !matches!(self, Flavor::FGC | Flavor::FcGC | Flavor::GC | Flavor::Graphs)
    }

    pub fn oriented(self) -> bool {
        matches!(self, Flavor::FGCor | Flavor::FcGCor | Flavor::GCor | Flavor::HatGCor | Flavor::GraphsOr)
    }

    pub fn connected(self) -> bool {
        matches!(self, Flavor::FcGC | Flavor::GC | Flavor::FcGCor | Flavor::GCor | Flavor::HatGCor)
    }

    pub fn is_operad(self) -> bool {
        matches!(self, Flavor::Graphs | Flavor::GraphsOr)
    }

    pub fn has_legs(self) -> bool {
        self == Flavor::HatGCor
    }

    /// Minimum valence of (internal) vertices.
    pub fn min_valence(self) -> usize {
        match self {
            Flavor::GC | Flavor::Graphs => 3,
            Flavor::GCor | Flavor::GraphsOr => 2,
            _ => 0,
        }
    }

    /// The flavor in which the differential is computed before projecting.
    pub fn ambient(self) -> Flavor {
        match self {
            Flavor::GC => Flavor::FcGC,
            Flavor::GCor => Flavor::FcGCor,
            f => f,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Flavor::ALL.iter().copied().find(|f| f.token().eq_ignore_ascii_case(s)).ok_or_else(|| {
            let names: Vec<&str> = Flavor::ALL.iter().map(|f| f.token()).collect();
            format!("unknown flavor {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComplexSpec {
    pub flavor: Flavor,
    pub n: i64,
    pub reading: FlipReading,
}

impl ComplexSpec {
    pub fn new(flavor: Flavor, n: i64) -> Self {
        Self { flavor, n, reading: FlipReading::default() }
    }

    pub fn with_reading(self, reading: FlipReading) -> Self {
        Self { reading, ..self }
    }

    pub fn conv(&self) -> SignConvention {
        SignConvention::with_reading(self.n, self.reading)
    }

    pub fn directed(&self) -> bool {
        self.flavor.directed()
    }

    pub fn ambient(&self) -> ComplexSpec {
        Self { flavor: self.flavor.ambient(), ..*self }
    }

    /// Degree of a graph in this complex.
    pub fn degree(&self, g: &DirectedGraph) -> i64 {
        if self.flavor.is_operad() {
            g.operad_degree(self.n)
        } else {
            g.degree(self.n)
        }
    }

    /// Flavor predicates on a raw graph; says nothing about odd symmetries.
    pub fn admissible(&self, g: &DirectedGraph) -> bool {
        let f = self.flavor;
        if !f.has_legs() && g.n_legs() > 0 {
            return false;
        }
        if f.is_operad() != (g.n_external() > 0) {
            return false;
        }
        if f.oriented() && !g.is_oriented_acyclic() {
            return false;
        }
        if f.connected() && !g.is_connected() {
            return false;
        }
        if f.is_operad() && !every_component_has_external(g) {
            return false;
        }
        let min_val = f.min_valence();
        if min_val > 0 && (g.n_external()..g.n_vertices()).any(|v| g.valence(v) < min_val) {
            return false;
        }
        match f {
            Flavor::HatGCor => (0..g.n_vertices()).all(|v| g.out_degree(v) > 0 || g.leg_count(v) > 0),
            Flavor::GraphsOr => {
                g.edges().iter().all(|&(s, _)| !g.is_external(s as usize))
                    && (g.n_external()..g.n_vertices()).all(|v| g.out_degree(v) > 0)
            }
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.flavor, self.n)
    }
}

impl fmt::Display for ComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn every_component_has_external(g: &DirectedGraph) -> bool {
    let labels = g.component_labels();
    // component labels are minimal vertices, and externals come first
    labels.iter().all(|&l| g.is_external(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shoikhet_graphs() -> Vec<DirectedGraph> {
        let mk =
            |e: &[(usize, usize)]| DirectedGraph::new(4, e.iter().map(|&(s, t)| (s - 1, t - 1)).collect()).unwrap();
        vec![
            mk(&[(1, 2), (3, 2), (3, 1), (4, 1), (4, 2)]),
            mk(&[(1, 2), (2, 3), (1, 3), (1, 4), (2, 4)]),
            mk(&[(1, 2), (1, 3), (2, 3), (4, 1), (4, 2)]),
        ]
    }

    #[test]
    fn tokens_roundtrip() {
        for f in Flavor::ALL {
            assert_eq!(f.token().parse::<Flavor>().unwrap(), f);
        }
        assert!("nope".parse::<Flavor>().is_err());
    }

    #[test]
    fn admissibility_examples() {
        let edge = DirectedGraph::new(2, vec![(0, 1)]).unwrap();
        assert!(!ComplexSpec::new(Flavor::GC, 2).admissible(&edge));
        assert!(ComplexSpec::new(Flavor::FcGC, 2).admissible(&edge));
        for g in shoikhet_graphs() {
            assert!(ComplexSpec::new(Flavor::GCor, 2).admissible(&g));
        }
        // bottom vertex without outgoing edges
        let bare = DirectedGraph::with_parts(2, 0, vec![(0, 1), (0, 1)], vec![]).unwrap();
        assert!(!ComplexSpec::new(Flavor::HatGCor, 3).admissible(&bare));
        let legged = bare.with_added_legs(&[1, 1, 1, 1]);
        assert!(ComplexSpec::new(Flavor::HatGCor, 3).admissible(&legged));
        assert!(!ComplexSpec::new(Flavor::GCor, 3).admissible(&legged));
    }

    #[test]
    fn operad_admissibility() {
        let spec = ComplexSpec::new(Flavor::GraphsOr, 3);
        let product = DirectedGraph::with_parts(2, 2, vec![], vec![]).unwrap();
        assert!(spec.admissible(&product));
        let fork = DirectedGraph::with_parts(3, 2, vec![(2, 0), (2, 1)], vec![]).unwrap();
        assert!(spec.admissible(&fork));
        let backwards = DirectedGraph::with_parts(3, 2, vec![(0, 2), (2, 1)], vec![]).unwrap();
        assert!(!spec.admissible(&backwards));
        let floating = DirectedGraph::with_parts(4, 2, vec![(2, 3), (3, 2)], vec![]).unwrap();
        assert!(!spec.admissible(&floating));
    }
}
