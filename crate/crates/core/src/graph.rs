//! Raw directed multigraphs with optional external vertices and outgoing legs.
//!
//! Vertices are indexed from 0 in the API and from 1 in the text encoding.
//! External (operad) vertices, when present, always occupy the leading
//! indices `0..n_external` in label order.

use std::fmt;

use crate::error::GraphError;

/// Upper bound on vertices handled anywhere in the crate.
pub const MAX_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedGraph {
    n_vertices: usize,
    n_external: usize,
    edges: Vec<(u8, u8)>,
    legs: Vec<u8>,
}

impl DirectedGraph {
    /// A graph on `n_vertices` vertices with the given `(source, target)` edges.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        Self::with_parts(n_vertices, 0, edges, Vec::new())
    }

    pub fn with_parts(
        n_vertices: usize,
        n_external: usize,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
    ) -> Result<Self, GraphError> {
        if n_vertices > MAX_VERTICES {
            return Err(GraphError::TooLarge(n_vertices));
        }
        if n_external > n_vertices {
            return Err(GraphError::ExternalCount { n_external, n_vertices });
        }
        for &(s, t) in &edges {
            if s >= n_vertices || t >= n_vertices {
                return Err(GraphError::VertexOutOfRange { vertex: s.max(t), n_vertices });
            }
        }
        if let Some(&l) = legs.iter().find(|&&l| l >= n_vertices) {
            return Err(GraphError::VertexOutOfRange { vertex: l, n_vertices });
        }
        Ok(Self {
            n_vertices,
            n_external,
            edges: edges.into_iter().map(|(s, t)| (s as u8, t as u8)).collect(),
            legs: legs.into_iter().map(|l| l as u8).collect(),
        })
    }

    /// Internal constructor for callers that already guarantee the invariants.
    pub(crate) fn from_raw(n_vertices: usize, n_external: usize, edges: Vec<(u8, u8)>, legs: Vec<u8>) -> Self {
        debug_assert!(edges.iter().all(|&(s, t)| (s as usize) < n_vertices && (t as usize) < n_vertices));
        debug_assert!(legs.iter().all(|&l| (l as usize) < n_vertices));
        Self { n_vertices, n_external, edges, legs }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_external(&self) -> usize {
        self.n_external
    }

    pub fn n_internal(&self) -> usize {
        self.n_vertices - self.n_external
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn legs(&self) -> &[u8] {
        &self.legs
    }

    pub fn is_external(&self, v: usize) -> bool {
        v < self.n_external
    }

    /// Cohomological degree `n(V-1) - (n-1)E` of a graph complex element; legs are degree 0.
    pub fn degree(&self, n: i64) -> i64 {
        n * (self.n_vertices as i64 - 1) - (n - 1) * self.edges.len() as i64
    }

    /// Operadic degree: only internal vertices and edges contribute.
    pub fn operad_degree(&self, n: i64) -> i64 {
        n * self.n_internal() as i64 - (n - 1) * self.edges.len() as i64
    }

    /// First Betti number of the underlying undirected graph (legs excluded).
    pub fn betti(&self) -> i64 {
        self.edges.len() as i64 - self.n_vertices as i64 + self.components() as i64
    }

    /// Component label of every vertex; labels are the smallest vertex of each component.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(s, t) in &self.edges {
            let a = find(&mut parent, s as usize);
            let b = find(&mut parent, t as usize);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
        (0..self.n_vertices).map(|v| find(&mut parent, v)).collect()
    }

    pub fn components(&self) -> usize {
        let labels = self.component_labels();
        labels.iter().enumerate().filter(|&(v, &l)| v == l).count()
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices > 0 && self.components() == 1
    }

    /// Valence of `v` counting both ends of a self-loop; legs excluded.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|&(s, t)| (s as usize == v) as usize + (t as usize == v) as usize).sum()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(s, _)| s as usize == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, t)| t as usize == v).count()
    }

    pub fn leg_count(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&l| l as usize == v).count()
    }

    /// True iff the graph has no directed cycle; a self-loop is a directed cycle.
    pub fn is_oriented_acyclic(&self) -> bool {
        let n = self.n_vertices;
        let mut indeg = vec![0usize; n];
        for &(s, t) in &self.edges {
            if s == t {
                return false;
            }
            indeg[t as usize] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.edges {
                if s as usize == v {
                    indeg[t as usize] -= 1;
                    if indeg[t as usize] == 0 {
                        stack.push(t as usize);
                    }
                }
            }
        }
        seen == n
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|&(s, t)| s == t)
    }

    /// Reverse every edge.
    pub fn reversed(&self) -> Self {
        Self { edges: self.edges.iter().map(|&(s, t)| (t, s)).collect(), ..self.clone() }
    }

    /// Relabel vertices by `perm[old] = new`. External vertices must stay fixed.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n_vertices);
        Self {
            n_vertices: self.n_vertices,
            n_external: self.n_external,
            edges: self.edges.iter().map(|&(s, t)| (perm[s as usize] as u8, perm[t as usize] as u8)).collect(),
            legs: self.legs.iter().map(|&l| perm[l as usize] as u8).collect(),
        }
    }

    pub fn with_edge_order(&self, order: &[usize]) -> Self {
        Self { edges: order.iter().map(|&i| self.edges[i]).collect(), ..self.clone() }
    }

    pub fn with_added_legs(&self, extra: &[usize]) -> Self {
        let mut legs = self.legs.clone();
        legs.extend(extra.iter().map(|&v| v as u8));
        Self { legs, ..self.clone() }
    }

    fn vertex_token(&self, v: usize) -> String {
        if v < self.n_external {
            format!("e{}", v + 1)
        } else {
            format!("{}", v - self.n_external + 1)
        }
    }

    /// One-line text form `g V E L : s->t ... : s->* ...`, with a trailing
    /// `: e1 ... eN` section when external vertices are present. Internal
    /// vertices are numbered from 1; `V` counts internal vertices only.
    pub fn encode(&self) -> String {
        let mut out = format!("g {} {} {} :", self.n_internal(), self.edges.len(), self.legs.len());
        for &(s, t) in &self.edges {
            out.push(' ');
            out.push_str(&self.vertex_token(s as usize));
            out.push_str("->");
            out.push_str(&self.vertex_token(t as usize));
        }
        out.push_str(" :");
        for &l in &self.legs {
            out.push(' ');
            out.push_str(&self.vertex_token(l as usize));
            out.push_str("->*");
        }
        if self.n_external > 0 {
            out.push_str(" :");
            for i in 0..self.n_external {
                out.push_str(&format!(" e{}", i + 1));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let bad = |why: &str| GraphError::Parse(format!("{why}: {text:?}"));
        let sections: Vec<&str> = text.trim().split(':').collect();
        if sections.len() < 3 || sections.len() > 4 {
            return Err(bad("expected 3 or 4 ':'-separated sections"));
        }
        let head: Vec<&str> = sections[0].split_whitespace().collect();
        if head.len() != 4 || head[0] != "g" {
            return Err(bad("header must be 'g V E L'"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad count"));
        let (n_int, n_e, n_l) = (num(head[1])?, num(head[2])?, num(head[3])?);
        let n_ext = if sections.len() == 4 {
            let toks: Vec<&str> = sections[3].split_whitespace().collect();
            for (i, t) in toks.iter().enumerate() {
                if *t != format!("e{}", i + 1) {
                    return Err(bad("external section must read e1 ... eN"));
                }
            }
            toks.len()
        } else {
            0
        };
        let n_vertices = n_int + n_ext;
        let vertex = |tok: &str| -> Result<usize, GraphError> {
            if let Some(rest) = tok.strip_prefix('e') {
                let i = rest.parse::<usize>().map_err(|_| bad("bad external token"))?;
                if i == 0 || i > n_ext {
                    return Err(bad("external label out of range"));
                }
                Ok(i - 1)
            } else {
                let i = tok.parse::<usize>().map_err(|_| bad("bad vertex token"))?;
                if i == 0 || i > n_int {
                    return Err(bad("vertex label out of range"));
                }
                Ok(n_ext + i - 1)
            }
        };
        let mut edges = Vec::new();
        for tok in sections[1].split_whitespace() {
            let (s, t) = tok.split_once("->").ok_or_else(|| bad("edge must be s->t"))?;
            edges.push((vertex(s)?, vertex(t)?));
        }
        let mut legs = Vec::new();
        for tok in sections[2].split_whitespace() {
            let s = tok.strip_suffix("->*").ok_or_else(|| bad("leg must be s->*"))?;
            legs.push(vertex(s)?);
        }
        if edges.len() != n_e || legs.len() != n_l {
            return Err(bad("edge or leg count does not match header"));
        }
        Self::with_parts(n_vertices, n_ext, edges, legs)
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}
