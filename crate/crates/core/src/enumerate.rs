//! Isomorphism-free generation of basis slices.
//!
//! Undirected skeletons are grown one edge at a time with canonical
//! deduplication per level and monotone pruning; directed flavors then
//! assign edge directions to each skeleton, and the legged flavor
//! distributes legs. A brute-force generator over all labeled edge
//! multisets is kept as an oracle.

use std::collections::{HashMap, HashSet};

use crate::canon::{canonical_form, unsigned_form, CanonicalClass};
use crate::error::BasisError;
use crate::flavor::{ComplexSpec, Flavor};
use crate::graph::DirectedGraph;

/// Ordered basis of nonzero classes in one `(V, E, L)` bucket.
#[derive(Clone, Debug)]
pub struct BasisSlice {
    pub spec: ComplexSpec,
    /// External vertices (operads only).
    pub n_ext: usize,
    /// Vertices; internal vertices for operads.
    pub v: usize,
    pub e: usize,
    pub l: usize,
    classes: Vec<CanonicalClass>,
    index: HashMap<DirectedGraph, usize>,
}

impl BasisSlice {
    /// Build a slice from canonical nonzero representatives; sorts by key and drops duplicates.
    pub fn from_graphs(
        spec: ComplexSpec,
        n_ext: usize,
        v: usize,
        e: usize,
        l: usize,
        graphs: impl IntoIterator<Item = DirectedGraph>,
    ) -> Self {
        let mut classes: Vec<CanonicalClass> =
            graphs.into_iter().map(|g| CanonicalClass { key: g.encode(), repr: g, zero: false }).collect();
        classes.sort_by(|a, b| a.key.cmp(&b.key));
        classes.dedup_by(|a, b| a.key == b.key);
        let index = classes.iter().enumerate().map(|(i, c)| (c.repr.clone(), i)).collect();
        Self { spec, n_ext, v, e, l, classes, index }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[CanonicalClass] {
        &self.classes
    }

    pub fn graph(&self, i: usize) -> &DirectedGraph {
        &self.classes[i].repr
    }

    pub fn key(&self, i: usize) -> &str {
        &self.classes[i].key
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|c| c.key.as_str())
    }

    pub fn position(&self, g: &DirectedGraph) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Common degree of the slice's classes.
    pub fn degree(&self) -> i64 {
        let n = self.spec.n;
        if self.spec.flavor.is_operad() {
            n * self.v as i64 - (n - 1) * self.e as i64
        } else {
            n * (self.v as i64 - 1) - (n - 1) * self.e as i64
        }
    }
}

impl PartialEq for BasisSlice {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && (self.n_ext, self.v, self.e, self.l) == (other.n_ext, other.v, other.e, other.l)
            && self.keys().eq(other.keys())
    }
}

/// Enumerate the basis of a graph complex bucket.
pub fn enumerate_basis(spec: &ComplexSpec, v: usize, e: usize, l: usize) -> Result<BasisSlice, BasisError> {
    if spec.flavor.is_operad() {
        return Err(BasisError::OperadFlavor(spec.flavor));
    }
    if l > 0 && !spec.flavor.has_legs() {
        return Err(BasisError::LegsNotAllowed(spec.flavor));
    }
    if v == 0 {
        return Err(BasisError::EmptyBucket);
    }
    Ok(generate(spec, 0, v, e, l))
}

/// Enumerate the basis of an operad bucket with `n_ext` labeled external vertices.
pub fn enumerate_operad_basis(
    spec: &ComplexSpec,
    n_ext: usize,
    v_int: usize,
    e: usize,
) -> Result<BasisSlice, BasisError> {
    if !spec.flavor.is_operad() {
        return Err(BasisError::NotOperad(spec.flavor));
    }
    if n_ext == 0 {
        return Err(BasisError::NoExternals);
    }
    Ok(generate(spec, n_ext, v_int, e, 0))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Conn {
    Connected,
    ExternalEach,
    Free,
}

#[derive(Clone, Copy)]
struct Skeleton {
    nv: usize,
    n_ext: usize,
    ne: usize,
    max_loops: usize,
    max_mult: usize,
    conn: Conn,
    min_val: usize,
    ext_edges: bool,
}

impl Skeleton {
    fn for_spec(spec: &ComplexSpec, n_ext: usize, v: usize, e: usize) -> Self {
        let f = spec.flavor;
        let conv = spec.conv();
        let odd = conv.edges_odd();
        let (max_loops, max_mult) = if f.oriented() {
            (0, if odd { 1 } else { e })
        } else if f.directed() {
            (if odd { 1 } else { e }, if odd { 2 } else { e })
        } else {
            (
                if conv.flip() < 0 {
                    0
                } else if odd {
                    1
                } else {
                    e
                },
                if odd { 1 } else { e },
            )
        };
        let conn = if f.connected() {
            Conn::Connected
        } else if f.is_operad() {
            Conn::ExternalEach
        } else {
            Conn::Free
        };
        Skeleton {
            nv: n_ext + v,
            n_ext,
            ne: e,
            max_loops,
            max_mult,
            conn,
            min_val: f.min_valence(),
            ext_edges: f != Flavor::GraphsOr,
        }
    }

    fn viable(&self, g: &DirectedGraph, remaining: usize) -> bool {
        let deficit: usize = (self.n_ext..self.nv).map(|v| self.min_val.saturating_sub(g.valence(v))).sum();
        if deficit > 2 * remaining {
            return false;
        }
        match self.conn {
            Conn::Connected => g.components() <= remaining + 1,
            Conn::ExternalEach => {
                let labels = g.component_labels();
                let floating = (0..self.nv).filter(|&v| labels[v] == v && !g.is_external(v)).count();
                floating <= remaining
            }
            Conn::Free => true,
        }
    }

    fn complete(&self, g: &DirectedGraph) -> bool {
        self.viable(g, 0)
    }

    fn children(&self, g: &DirectedGraph, out: &mut Vec<DirectedGraph>) {
        let nv = self.nv;
        let mut mult = vec![0usize; nv * nv];
        let mut touched = vec![false; nv];
        for &(s, t) in g.edges() {
            let (a, b) = ((s.min(t)) as usize, (s.max(t)) as usize);
            mult[a * nv + b] += 1;
            touched[a] = true;
            touched[b] = true;
        }
        let connected_growth = self.conn == Conn::Connected && self.n_ext == 0;
        let first_untouched = (0..nv).find(|&v| !touched[v]);
        let no_edges = g.n_edges() == 0;
        for a in 0..nv {
            for b in a..nv {
                let cap = if a == b { self.max_loops } else { self.max_mult };
                if mult[a * nv + b] >= cap {
                    continue;
                }
                if !self.ext_edges && (g.is_external(a) && (a == b || g.is_external(b))) {
                    continue;
                }
                if connected_growth {
                    if no_edges {
                        // all vertices are interchangeable before the first edge
                        if a != 0 || b > 1 {
                            continue;
                        }
                    } else {
                        match (touched[a], touched[b]) {
                            (true, true) => {}
                            (true, false) => {
                                if Some(b) != first_untouched {
                                    continue;
                                }
                            }
                            (false, true) => {
                                if Some(a) != first_untouched {
                                    continue;
                                }
                            }
                            (false, false) => continue,
                        }
                    }
                }
                let mut edges = g.edges().to_vec();
                edges.push((a as u8, b as u8));
                out.push(DirectedGraph::from_raw(nv, self.n_ext, edges, Vec::new()));
            }
        }
    }

    /// Undirected skeleton classes (unsigned, edges stored with `s <= t`).
    fn generate(&self) -> Vec<DirectedGraph> {
        let start = DirectedGraph::from_raw(self.nv, self.n_ext, Vec::new(), Vec::new());
        if !self.viable(&start, self.ne) {
            return Vec::new();
        }
        let mut level = vec![start];
        let mut buf = Vec::new();
        for k in 0..self.ne {
            let remaining = self.ne - k - 1;
            let mut next: HashSet<DirectedGraph> = HashSet::new();
            for g in &level {
                buf.clear();
                self.children(g, &mut buf);
                for child in buf.drain(..) {
                    if self.viable(&child, remaining) {
                        next.insert(unsigned_form(&child, false));
                    }
                }
            }
            level = next.into_iter().collect();
            if level.is_empty() {
                break;
            }
        }
        level.retain(|g| self.complete(g));
        level.sort();
        level
    }
}

fn generate(spec: &ComplexSpec, n_ext: usize, v: usize, e: usize, l: usize) -> BasisSlice {
    let skel = Skeleton::for_spec(spec, n_ext, v, e);
    let conv = spec.conv();
    let skeletons = skel.generate();
    let mut found: HashSet<DirectedGraph> = HashSet::new();
    let keep = |g: DirectedGraph, found: &mut HashSet<DirectedGraph>| {
        if spec.admissible(&g) {
            let form = canonical_form(&g, conv, spec.directed());
            if !form.is_zero() {
                found.insert(form.graph);
            }
        }
    };
    if !spec.directed() {
        for s in skeletons {
            keep(s, &mut found);
        }
    } else if spec.flavor.has_legs() {
        let mut dags: HashSet<DirectedGraph> = HashSet::new();
        for s in &skeletons {
            orientations(s, true, conv.edges_odd(), &mut |g| {
                dags.insert(unsigned_form(&g, true));
            });
        }
        let mut dags: Vec<DirectedGraph> = dags.into_iter().collect();
        dags.sort();
        for g in dags {
            distribute_legs(&g, l, &mut |h| keep(h, &mut found));
        }
    } else {
        for s in &skeletons {
            orientations(s, spec.flavor.oriented(), conv.edges_odd(), &mut |g| keep(g, &mut found));
        }
    }
    BasisSlice::from_graphs(*spec, n_ext, v, e, l, found)
}

/// All direction assignments of an undirected skeleton. Parallel bundles
/// are split into forward/backward counts; `oriented` forbids directed cycles.
fn orientations(skel: &DirectedGraph, oriented: bool, edges_odd: bool, f: &mut dyn FnMut(DirectedGraph)) {
    let nv = skel.n_vertices();
    let mut bundles: Vec<(u8, u8, usize)> = Vec::new();
    let mut loops: Vec<(u8, u8)> = Vec::new();
    let mut sorted = skel.edges().to_vec();
    sorted.sort_unstable();
    for &(a, b) in &sorted {
        if a == b {
            loops.push((a, b));
        } else if let Some(last) = bundles.last_mut().filter(|x| (x.0, x.1) == (a, b)) {
            last.2 += 1;
        } else {
            bundles.push((a, b, 1));
        }
    }
    let mut edges = loops;
    let reach = vec![0u32; nv];
    assign(&bundles, 0, oriented, edges_odd, &mut edges, reach, skel, f);
}

#[allow(clippy::too_many_arguments)]
fn assign(
    bundles: &[(u8, u8, usize)],
    i: usize,
    oriented: bool,
    edges_odd: bool,
    edges: &mut Vec<(u8, u8)>,
    reach: Vec<u32>,
    skel: &DirectedGraph,
    f: &mut dyn FnMut(DirectedGraph),
) {
    if i == bundles.len() {
        f(DirectedGraph::from_raw(skel.n_vertices(), skel.n_external(), edges.clone(), skel.legs().to_vec()));
        return;
    }
    let (a, b, k) = bundles[i];
    let options: Vec<usize> =
        if oriented { vec![k, 0] } else { (0..=k).filter(|&fw| !edges_odd || (fw <= 1 && k - fw <= 1)).collect() };
    for fw in options {
        let mut reach = reach.clone();
        if oriented {
            let (s, t) = if fw == k { (a, b) } else { (b, a) };
            if reach[t as usize] & (1 << s) != 0 {
                continue;
            }
            let add = reach[t as usize] | (1 << t);
            for x in 0..reach.len() {
                if x == s as usize || reach[x] & (1 << s) != 0 {
                    reach[x] |= add;
                }
            }
        }
        let before = edges.len();
        edges.extend(std::iter::repeat_n((a, b), fw));
        edges.extend(std::iter::repeat_n((b, a), k - fw));
        assign(bundles, i + 1, oriented, edges_odd, edges, reach, skel, f);
        edges.truncate(before);
    }
}

/// Every multiset of `l` legs on `g` giving each sink at least one leg.
fn distribute_legs(g: &DirectedGraph, l: usize, f: &mut dyn FnMut(DirectedGraph)) {
    let nv = g.n_vertices();
    let sinks: Vec<usize> = (0..nv).filter(|&v| g.out_degree(v) == 0).collect();
    if sinks.len() > l {
        return;
    }
    let mut legs = Vec::with_capacity(l);
    multisets(nv, l, 0, &mut legs, &mut |legs| {
        if sinks.iter().all(|s| legs.contains(s)) {
            f(g.with_added_legs(legs));
        }
    });
}

fn multisets(n: usize, k: usize, from: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for x in from..n {
        acc.push(x);
        multisets(n, k, x, acc, f);
        acc.pop();
    }
}

/// Brute-force oracle: every labeled multiset of edges (and legs), filtered
/// and canonicalized. Exponential; intended for small buckets only.
pub fn oracle_basis(spec: &ComplexSpec, n_ext: usize, v: usize, e: usize, l: usize) -> BasisSlice {
    let nv = n_ext + v;
    let conv = spec.conv();
    let directed = spec.directed();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..nv {
        for b in 0..nv {
            if directed || a <= b {
                pairs.push((a, b));
            }
        }
    }
    let mut found: HashSet<DirectedGraph> = HashSet::new();
    let legs_allowed = spec.flavor.has_legs();
    let mut choice = Vec::with_capacity(e);
    multisets(pairs.len(), e, 0, &mut choice, &mut |choice| {
        let edges: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
        let g = DirectedGraph::with_parts(nv, n_ext, edges, Vec::new()).expect("valid indices");
        let mut consider = |h: DirectedGraph| {
            if spec.admissible(&h) {
                let form = canonical_form(&h, conv, directed);
                if !form.is_zero() {
                    found.insert(form.graph);
                }
            }
        };
        if legs_allowed {
            let mut legs = Vec::with_capacity(l);
            multisets(nv, l, 0, &mut legs, &mut |legs| consider(g.with_added_legs(legs)));
        } else {
            consider(g);
        }
    });
    BasisSlice::from_graphs(*spec, n_ext, v, e, l, found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Flavor, n: i64) -> ComplexSpec {
        ComplexSpec::new(f, n)
    }

    #[test]
    fn small_examples() {
        assert!(enumerate_basis(&spec(Flavor::GC, 2), 2, 1, 0).unwrap().is_empty());
        let tadpole = enumerate_basis(&spec(Flavor::FGC, 2), 1, 1, 0).unwrap();
        assert_eq!(tadpole.len(), 1);
        assert!(enumerate_basis(&spec(Flavor::FGC, 1), 1, 1, 0).unwrap().is_empty());
        let k4 = DirectedGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let k4 = canonical_form(&k4, ComplexSpec::new(Flavor::GC, 2).conv(), false).graph;
        let slice = enumerate_basis(&spec(Flavor::GC, 2), 4, 6, 0).unwrap();
        assert!(slice.position(&k4).is_some());
        // without tadpoles the tetrahedron is the only class
        assert_eq!(slice.classes().iter().filter(|c| !c.repr.has_self_loop()).count(), 1);
        let point = enumerate_basis(&spec(Flavor::FcGC, 2), 1, 0, 0).unwrap();
        assert_eq!(point.len(), 1);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(enumerate_basis(&spec(Flavor::GC, 2), 2, 1, 1).is_err());
        assert!(enumerate_basis(&spec(Flavor::Graphs, 2), 2, 1, 0).is_err());
        assert!(enumerate_operad_basis(&spec(Flavor::GC, 2), 2, 1, 0).is_err());
        assert!(enumerate_operad_basis(&spec(Flavor::GraphsOr, 2), 0, 1, 0).is_err());
    }

    #[test]
    fn matches_oracle_on_a_few_buckets() {
        let cases = [
            (Flavor::FcGC, 1, 4, 5, 0),
            (Flavor::FGC, 2, 3, 3, 0),
            (Flavor::GCor, 2, 4, 5, 0),
            (Flavor::GCor, 3, 3, 4, 0),
            (Flavor::DfGC, 2, 3, 3, 0),
            (Flavor::HatGCor, 3, 2, 2, 2),
        ];
        for (f, n, v, e, l) in cases {
            let s = spec(f, n);
            let fast = enumerate_basis(&s, v, e, l).unwrap();
            let slow = oracle_basis(&s, 0, v, e, l);
            assert_eq!(fast, slow, "{f} n={n} V={v} E={e} L={l}");
        }
        let s = spec(Flavor::GraphsOr, 3);
        assert_eq!(enumerate_operad_basis(&s, 2, 2, 4).unwrap(), oracle_basis(&s, 2, 2, 4, 0));
    }

    #[test]
    fn product_graph_is_the_only_arity_two_edgeless_class() {
        let s = spec(Flavor::GraphsOr, 3);
        let slice = enumerate_operad_basis(&s, 2, 0, 0).unwrap();
        assert_eq!(slice.keys().collect::<Vec<_>>(), vec!["g 0 0 0 : : : e1 e2"]);
    }
}
