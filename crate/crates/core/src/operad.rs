//! The graph operads: composition at external vertices, the vertex-splitting
//! differential, generator images, the projection killing doubly-fed
//! vertices, and the action of oriented graph cochains.
//!
//! In `a ∘_i b` the vertices are ordered as: externals of `a` before `i`, the
//! externals of `b`, the remaining externals of `a`, the internal vertices of
//! `a`, then those of `b`. Edges of `a` come first. Edge ends at external `i`
//! are reattached to every vertex of `b` independently.
//!
//! Signs of the three parts of the differential and of the action are chosen
//! by constraint search (see [`rule_solutions`] and [`action_rule_solutions`])
//! and frozen in [`OperadRule::frozen`] and [`ActionRule::FROZEN`].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::calculus::{edge_graph, insert_raw, sign_pow};
use crate::cochain::{qi, Accum, Cochain, Q};
use crate::enumerate::enumerate_operad_basis;
use crate::error::CalcError;
use crate::flavor::{ComplexSpec, Flavor};
use crate::graph::DirectedGraph;
use crate::matrix::{from_big, rank, Field, SparseMatrix};
use crate::sign::SignConvention;

/// A homogeneous-arity combination of operad graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct OperadElement {
    pub arity: usize,
    pub chain: Cochain,
}

impl OperadElement {
    pub fn zero(spec: ComplexSpec, arity: usize) -> Self {
        Self { arity, chain: Cochain::zero(spec) }
    }

    pub fn from_graph(spec: ComplexSpec, g: &DirectedGraph) -> Result<Self, CalcError> {
        if !spec.flavor.is_operad() {
            return Err(CalcError::WrongFlavor(spec.flavor));
        }
        if g.n_external() == 0 {
            return Err(CalcError::BadParameter("operad graphs need external vertices".into()));
        }
        let mut chain = Cochain::zero(spec);
        if spec.admissible(g) {
            chain.add_raw(g, &qi(1));
        }
        Ok(Self { arity: g.n_external(), chain })
    }

    /// Wrap a cochain whose terms all have the same number of external vertices.
    pub fn from_cochain(chain: Cochain) -> Result<Self, CalcError> {
        if !chain.spec.flavor.is_operad() {
            return Err(CalcError::WrongFlavor(chain.spec.flavor));
        }
        let arities: Vec<usize> = chain.terms().map(|(g, _)| g.n_external()).collect();
        let &arity = arities.first().ok_or_else(|| CalcError::BadParameter("empty element has no arity".into()))?;
        if arities.iter().any(|&a| a != arity) {
            return Err(CalcError::BadParameter("terms of different arity".into()));
        }
        Ok(Self { arity, chain })
    }

    pub fn spec(&self) -> ComplexSpec {
        self.chain.spec
    }

    pub fn is_zero(&self) -> bool {
        self.chain.is_zero()
    }

    pub fn degree(&self) -> Result<Option<i64>, CalcError> {
        self.chain.degree()
    }

    fn check(&self, other: &Self) -> Result<(), CalcError> {
        self.chain.check_spec(&other.chain)?;
        if self.arity != other.arity {
            return Err(CalcError::BadParameter(format!("arity {} vs {}", self.arity, other.arity)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CalcError> {
        self.check(other)?;
        Ok(Self { arity: self.arity, chain: self.chain.add(&other.chain)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CalcError> {
        self.check(other)?;
        Ok(Self { arity: self.arity, chain: self.chain.sub(&other.chain)? })
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self { arity: self.arity, chain: self.chain.scale(s) }
    }
}

/// Raw expansion of `a ∘_slot b` (0-based slot), every term with sign `+1`.
pub fn compose_raw(a: &DirectedGraph, slot: usize, b: &DirectedGraph, emit: &mut dyn FnMut(DirectedGraph)) {
    debug_assert!(slot < a.n_external());
    let (na_ext, nb_ext) = (a.n_external(), b.n_external());
    let nb = b.n_vertices();
    let n_ext = na_ext - 1 + nb_ext;
    let a_int = n_ext;
    let b_int = a_int + a.n_internal();
    let map_a = |u: usize| {
        if u < slot {
            u
        } else if u < na_ext {
            u - 1 + nb_ext
        } else {
            a_int + (u - na_ext)
        }
    };
    let map_b = |u: usize| if u < nb_ext { slot + u } else { b_int + (u - nb_ext) };

    let mut slots: Vec<(usize, bool)> = Vec::new();
    let mut edges: Vec<(u8, u8)> = Vec::with_capacity(a.n_edges() + b.n_edges());
    for (k, &(s, t)) in a.edges().iter().enumerate() {
        let (s, t) = (s as usize, t as usize);
        if s == slot {
            slots.push((k, false));
        }
        if t == slot {
            slots.push((k, true));
        }
        let m = |u: usize| if u == slot { 0 } else { map_a(u) as u8 };
        edges.push((m(s), m(t)));
    }
    for &(s, t) in b.edges() {
        edges.push((map_b(s as usize) as u8, map_b(t as usize) as u8));
    }
    let legs: Vec<u8> = a
        .legs()
        .iter()
        .map(|&l| map_a(l as usize) as u8)
        .chain(b.legs().iter().map(|&l| map_b(l as usize) as u8))
        .collect();
    let nv = a.n_vertices() - 1 + nb;

    let mut choice = vec![0usize; slots.len()];
    loop {
        for (k, &(i, head)) in slots.iter().enumerate() {
            let w = map_b(choice[k]) as u8;
            if head {
                edges[i].1 = w;
            } else {
                edges[i].0 = w;
            }
        }
        emit(DirectedGraph::from_raw(nv, n_ext, edges.clone(), legs.clone()));
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            choice[k] += 1;
            if choice[k] < nb {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `a ∘_i b` with a 1-based slot `i`.
pub fn operad_compose(a: &OperadElement, i: usize, b: &OperadElement) -> Result<OperadElement, CalcError> {
    a.chain.check_spec(&b.chain)?;
    if i == 0 || i > a.arity {
        return Err(CalcError::SlotOutOfRange { slot: i, arity: a.arity });
    }
    let spec = a.spec();
    let mut out = Cochain::zero(spec);
    for (ga, ca) in a.chain.terms() {
        for (gb, cb) in b.chain.terms() {
            let mut acc = Accum::new(spec, true);
            compose_raw(ga, i - 1, gb, &mut |g| acc.push(g, 1));
            let c = ca * cb;
            for (h, k) in acc.into_terms() {
                out.add_canonical(h, &(&c * qi(k)));
            }
        }
    }
    Ok(OperadElement { arity: a.arity - 1 + b.arity, chain: out })
}

/// A sign `sign * (-1)^{twist * |x|}` depending on the degree of the argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermSign {
    pub sign: i64,
    pub twist: bool,
}

impl TermSign {
    pub fn eval(self, degree: i64) -> i64 {
        self.sign * sign_pow(self.twist && degree.rem_euclid(2) == 1)
    }

    fn all() -> [TermSign; 4] {
        [
            TermSign { sign: 1, twist: false },
            TermSign { sign: -1, twist: false },
            TermSign { sign: 1, twist: true },
            TermSign { sign: -1, twist: true },
        ]
    }
}

/// Signs of the two parts of `δΓ`: splitting internal vertices (`Γ •_v m`)
/// and splitting external vertices (`Γ ∘_j m1`), where `m1` is one internal
/// vertex with an edge to the external vertex. The remaining term `m1 ∘_1 Γ`
/// only produces univalent internal vertices and never survives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperadRule {
    pub internal: TermSign,
    pub inner: TermSign,
}

impl OperadRule {
    /// The solved rule; splitting an external vertex picks up an extra sign
    /// when vertices are odd.
    pub fn frozen(conv: SignConvention) -> OperadRule {
        let internal = TermSign { sign: -1, twist: true };
        let inner = TermSign { sign: if conv.vertices_odd() { 1 } else { -1 }, twist: true };
        OperadRule { internal, inner }
    }

    pub fn sign(&self, part: usize, degree: i64) -> i64 {
        [self.internal, self.inner][part].eval(degree)
    }

    pub fn candidates() -> Vec<OperadRule> {
        let mut out = Vec::new();
        for internal in TermSign::all() {
            for inner in TermSign::all() {
                out.push(OperadRule { internal, inner });
            }
        }
        out
    }
}

/// The arity-one graph `w -> e1`.
pub fn unit_edge() -> DirectedGraph {
    DirectedGraph::from_raw(2, 1, vec![(1, 0)], Vec::new())
}

fn operad_check(spec: &ComplexSpec) -> Result<(), CalcError> {
    if !spec.flavor.is_operad() {
        return Err(CalcError::WrongFlavor(spec.flavor));
    }
    Ok(())
}

/// Raw expansion of `δΓ` for one graph under `rule`.
pub fn operad_differential_raw(
    spec: &ComplexSpec,
    g: &DirectedGraph,
    rule: OperadRule,
    emit: &mut dyn FnMut(DirectedGraph, i64),
) {
    let d = spec.degree(g);
    for part in 0..2 {
        let s = rule.sign(part, d);
        differential_part_raw(spec, g, part, &mut |h, k| emit(h, s * k));
    }
}

/// Unsigned part of `δ`: 0 splits internal vertices, 1 splits external ones.
fn differential_part_raw(spec: &ComplexSpec, g: &DirectedGraph, part: usize, emit: &mut dyn FnMut(DirectedGraph, i64)) {
    if part == 0 {
        let m = edge_graph();
        for v in g.n_external()..g.n_vertices() {
            insert_raw(g, v, &m, spec.conv(), emit);
        }
    } else {
        // internal splittings of undirected graphs count each split twice
        let w = if spec.directed() { 1 } else { 2 };
        let m1 = unit_edge();
        for j in 0..g.n_external() {
            compose_raw(g, j, &m1, &mut |h| emit(h, w));
        }
    }
}

fn differential_part(x: &OperadElement, part: usize) -> OperadElement {
    let spec = x.spec();
    let mut out = Cochain::zero(spec);
    for (g, c) in x.chain.terms() {
        let mut acc = Accum::new(spec, true);
        differential_part_raw(&spec, g, part, &mut |h, k| acc.push(h, k));
        for (h, k) in acc.into_terms() {
            out.add_canonical(h, &(c * qi(k)));
        }
    }
    OperadElement { arity: x.arity, chain: out }
}

fn operad_differential_graph(spec: &ComplexSpec, g: &DirectedGraph, rule: OperadRule) -> HashMap<DirectedGraph, i64> {
    let mut acc = Accum::new(*spec, true);
    operad_differential_raw(spec, g, rule, &mut |h, k| acc.push(h, k));
    acc.into_terms().collect()
}

pub fn operad_differential_with(x: &OperadElement, rule: OperadRule) -> Result<OperadElement, CalcError> {
    let spec = x.spec();
    operad_check(&spec)?;
    let mut out = Cochain::zero(spec);
    for (g, c) in x.chain.terms() {
        for (h, k) in operad_differential_graph(&spec, g, rule) {
            out.add_canonical(h, &(c * qi(k)));
        }
    }
    Ok(OperadElement { arity: x.arity, chain: out })
}

pub fn operad_differential(x: &OperadElement) -> Result<OperadElement, CalcError> {
    operad_differential_with(x, OperadRule::frozen(x.spec().conv()))
}

/// Images of the generators: `product` (two external vertices, no edges)
/// and `mu` (one internal vertex with an edge to each of `N` external vertices).
pub fn generator_image(spec: ComplexSpec, name: &str, arity: Option<usize>) -> Result<OperadElement, CalcError> {
    operad_check(&spec)?;
    match name {
        "product" => OperadElement::from_graph(spec, &DirectedGraph::from_raw(2, 2, Vec::new(), Vec::new())),
        "mu" if spec.flavor != Flavor::GraphsOr => Err(CalcError::WrongFlavor(spec.flavor)),
        "mu" => {
            let n = arity.ok_or_else(|| CalcError::BadParameter("mu needs an arity".into()))?;
            if n < 2 {
                return Err(CalcError::BadParameter(format!("mu_{n} needs arity at least 2")));
            }
            let edges = (0..n).map(|j| (n as u8, j as u8)).collect();
            OperadElement::from_graph(spec, &DirectedGraph::from_raw(n + 1, n, edges, Vec::new()))
        }
        other => Err(CalcError::UnknownName(other.to_string())),
    }
}

/// Relabel external vertices: external `i` becomes external `perm[i]` (0-based).
pub fn permute_externals(x: &OperadElement, perm: &[usize]) -> Result<OperadElement, CalcError> {
    let mut seen = vec![false; x.arity];
    if perm.len() != x.arity || perm.iter().any(|&p| p >= x.arity || std::mem::replace(&mut seen[p], true)) {
        return Err(CalcError::BadParameter(format!("{perm:?} is not a permutation of {} externals", x.arity)));
    }
    let mut out = Cochain::zero(x.spec());
    for (g, c) in x.chain.terms() {
        let full: Vec<usize> = (0..g.n_vertices()).map(|v| if v < x.arity { perm[v] } else { v }).collect();
        out.add_raw(&g.relabeled(&full), c);
    }
    Ok(OperadElement { arity: x.arity, chain: out })
}

/// Whether some vertex has at least two incoming edges.
pub fn is_bad(g: &DirectedGraph) -> bool {
    (0..g.n_vertices()).any(|v| g.in_degree(v) >= 2)
}

/// Zero every term with a vertex fed by two or more edges.
pub fn bad_projection(x: &OperadElement) -> Result<OperadElement, CalcError> {
    if x.spec().flavor != Flavor::GraphsOr {
        return Err(CalcError::WrongFlavor(x.spec().flavor));
    }
    Ok(OperadElement { arity: x.arity, chain: x.chain.partition(|g| !is_bad(g)).0 })
}

/// `γ` with its unique vertex without outgoing edges declared external,
/// and the orientation sign of moving it to the front; `None` if there is
/// not exactly one such vertex.
pub fn gamma_one(gamma: &DirectedGraph, spec: &ComplexSpec) -> Option<(DirectedGraph, i64)> {
    let sinks: Vec<usize> = (0..gamma.n_vertices()).filter(|&v| gamma.out_degree(v) == 0).collect();
    let [p] = sinks[..] else {
        return None;
    };
    let map = |u: usize| {
        if u == p {
            0u8
        } else if u < p {
            u as u8 + 1
        } else {
            u as u8
        }
    };
    let edges = gamma.edges().iter().map(|&(s, t)| (map(s as usize), map(t as usize))).collect();
    let sign = sign_pow(spec.conv().vertices_odd() && p % 2 == 1);
    Some((DirectedGraph::from_raw(gamma.n_vertices(), 1, edges, Vec::new()), sign))
}

/// A sign `sign * (-1)^{a|Γ| + b|γ||Γ|}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionSign {
    pub sign: i64,
    pub twist_target: bool,
    pub twist_both: bool,
}

impl ActionSign {
    pub fn eval(self, gamma_degree: i64, degree: i64) -> i64 {
        let odd = (self.twist_target && degree.rem_euclid(2) == 1)
            ^ (self.twist_both && (gamma_degree * degree).rem_euclid(2) == 1);
        self.sign * sign_pow(odd)
    }

    fn all() -> Vec<ActionSign> {
        let mut out = Vec::new();
        for sign in [1, -1] {
            for twist_target in [false, true] {
                for twist_both in [false, true] {
                    out.push(ActionSign { sign, twist_target, twist_both });
                }
            }
        }
        out
    }
}

/// Signs of the three parts of `γ·Γ`: `γ1 ∘_1 Γ`, `Γ •_v γ` and `Γ ∘_j γ1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionRule {
    pub outer: ActionSign,
    pub internal: ActionSign,
    pub inner: ActionSign,
}

impl ActionRule {
    pub const FROZEN: ActionRule = ActionRule {
        outer: ActionSign { sign: 1, twist_target: false, twist_both: false },
        internal: ActionSign { sign: -1, twist_target: false, twist_both: true },
        inner: ActionSign { sign: -1, twist_target: false, twist_both: true },
    };

    /// Sign of part `k` acting with `|γ| = gamma_degree` on a graph of degree `degree`.
    pub fn sign(&self, part: usize, gamma_degree: i64, degree: i64) -> i64 {
        [self.outer, self.internal, self.inner][part].eval(gamma_degree, degree)
    }

    pub fn candidates() -> Vec<ActionRule> {
        let mut out = Vec::new();
        for outer in ActionSign::all() {
            for internal in ActionSign::all() {
                for inner in ActionSign::all() {
                    out.push(ActionRule { outer, internal, inner });
                }
            }
        }
        out
    }
}

/// The three unsigned parts of `γ·Γ` for single graphs, in canonical form.
fn action_parts(spec: &ComplexSpec, gamma: &DirectedGraph, g: &DirectedGraph) -> [HashMap<DirectedGraph, i64>; 3] {
    let mut parts: [Accum; 3] = [Accum::new(*spec, true), Accum::new(*spec, true), Accum::new(*spec, true)];
    if let Some((g1, s)) = gamma_one(gamma, spec) {
        compose_raw(&g1, 0, g, &mut |h| parts[0].push(h, s));
        for j in 0..g.n_external() {
            compose_raw(g, j, &g1, &mut |h| parts[2].push(h, s));
        }
    }
    for v in g.n_external()..g.n_vertices() {
        insert_raw(g, v, gamma, spec.conv(), &mut |h, k| parts[1].push(h, k));
    }
    parts.map(|a| a.into_terms().collect())
}

fn check_gamma(gamma: &Cochain, spec: &ComplexSpec) -> Result<(), CalcError> {
    if !matches!(gamma.spec.flavor, Flavor::FcGCor | Flavor::GCor) {
        return Err(CalcError::WrongFlavor(gamma.spec.flavor));
    }
    if spec.flavor != Flavor::GraphsOr {
        return Err(CalcError::WrongFlavor(spec.flavor));
    }
    if gamma.spec.n != spec.n || gamma.spec.conv() != spec.conv() {
        return Err(CalcError::SpecMismatch(gamma.spec.label(), spec.label()));
    }
    if gamma.terms().any(|(g, _)| !g.is_connected()) {
        return Err(CalcError::Disconnected);
    }
    Ok(())
}

/// One unsigned part of `γ·x` (0: `γ1 ∘_1 x`, 1: `x •_v γ`, 2: `x ∘_j γ1`).
pub fn gc_action_part(gamma: &Cochain, x: &OperadElement, part: usize) -> Result<OperadElement, CalcError> {
    let spec = x.spec();
    check_gamma(gamma, &spec)?;
    let mut out = Cochain::zero(spec);
    for (gg, cg) in gamma.terms() {
        for (g, c) in x.chain.terms() {
            let coef = cg * c;
            let parts = action_parts(&spec, gg, g);
            for (h, k) in parts.into_iter().nth(part).unwrap_or_default() {
                out.add_canonical(h, &(&coef * qi(k)));
            }
        }
    }
    Ok(OperadElement { arity: x.arity, chain: out })
}

pub fn gc_action_with(gamma: &Cochain, x: &OperadElement, rule: ActionRule) -> Result<OperadElement, CalcError> {
    let spec = x.spec();
    check_gamma(gamma, &spec)?;
    let mut out = Cochain::zero(spec);
    for (gg, cg) in gamma.terms() {
        let dg = gamma.spec.degree(gg);
        for (g, c) in x.chain.terms() {
            let d = spec.degree(g);
            let coef = cg * c;
            for (k, part) in action_parts(&spec, gg, g).into_iter().enumerate() {
                let s = rule.sign(k, dg, d);
                for (h, w) in part {
                    out.add_canonical(h, &(&coef * qi(s * w)));
                }
            }
        }
    }
    Ok(OperadElement { arity: x.arity, chain: out })
}

pub fn gc_action(gamma: &Cochain, x: &OperadElement) -> Result<OperadElement, CalcError> {
    gc_action_with(gamma, x, ActionRule::FROZEN)
}

/// Bounds on externals, internal vertices and edges for sampled checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBounds {
    pub max_ext: usize,
    pub max_int: usize,
    pub max_e: usize,
}

impl SampleBounds {
    pub const fn new(max_ext: usize, max_int: usize, max_e: usize) -> Self {
        Self { max_ext, max_int, max_e }
    }
}

/// Basis graphs of `spec` within `bounds`, as single-graph elements.
pub fn sample_elements(spec: &ComplexSpec, bounds: SampleBounds) -> Result<Vec<OperadElement>, CalcError> {
    let mut out = Vec::new();
    for n_ext in 1..=bounds.max_ext {
        for v in 0..=bounds.max_int {
            for e in 0..=bounds.max_e {
                for class in enumerate_operad_basis(spec, n_ext, v, e)?.classes() {
                    out.push(OperadElement::from_graph(*spec, &class.repr)?);
                }
            }
        }
    }
    Ok(out)
}

/// All permutations of `0..k`.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Rational rank of the span of `xs`.
pub fn span_rank(xs: &[&OperadElement]) -> Result<usize, CalcError> {
    let mut rows: HashMap<DirectedGraph, usize> = HashMap::new();
    let mut entries = Vec::new();
    for (j, x) in xs.iter().enumerate() {
        for (g, c) in x.chain.terms() {
            let next = rows.len();
            let r = *rows.entry(g.clone()).or_insert(next);
            let c = from_big(c).ok_or_else(|| CalcError::BadParameter(format!("coefficient {c} too large")))?;
            entries.push((r, j, c));
        }
    }
    Ok(rank(&SparseMatrix::from_entries(rows.len(), xs.len(), entries), Field::Rational))
}

/// Whether `δμ_N` lies in the span of the relabeled composites `μ_i ∘_k μ_j`
/// with `i + j - 1 = N` (the homotopy Lie relations).
pub fn mu_boundary_is_quadratic(spec: ComplexSpec, big: usize) -> Result<bool, CalcError> {
    let mu = |k| generator_image(spec, "mu", Some(k));
    let d = operad_differential(&mu(big)?)?;
    let mut span = Vec::new();
    for i in 2..big {
        let j = big + 1 - i;
        for k in 1..=i {
            let c = operad_compose(&mu(i)?, k, &mu(j)?)?;
            for perm in permutations(big) {
                span.push(permute_externals(&c, &perm)?);
            }
        }
    }
    let r = span_rank(&span.iter().collect::<Vec<_>>())?;
    span.push(d);
    Ok(span_rank(&span.iter().collect::<Vec<_>>())? == r)
}

/// Number of failing instances of sequential and parallel associativity
/// over all triples from `xs`; parallel composites trade places with the
/// Koszul sign.
pub fn associativity_defects(xs: &[OperadElement]) -> Result<usize, CalcError> {
    let deg = |x: &OperadElement| -> Result<i64, CalcError> { Ok(homogeneous_degree(&x.chain)?.unwrap_or(0)) };
    let mut bad = 0;
    for a in xs {
        for b in xs {
            let ab: Vec<OperadElement> = (1..=a.arity).map(|i| operad_compose(a, i, b)).collect::<Result<_, _>>()?;
            for c in xs {
                let s = qi(sign_pow((deg(b)? * deg(c)?).rem_euclid(2) == 1));
                for i in 1..=a.arity {
                    for j in 0..b.arity {
                        let lhs = operad_compose(&ab[i - 1], i + j, c)?;
                        let rhs = operad_compose(a, i, &operad_compose(b, j + 1, c)?)?;
                        bad += usize::from(lhs != rhs);
                    }
                    for k in 1..i {
                        let lhs = operad_compose(&ab[i - 1], k, c)?;
                        let rhs = operad_compose(&operad_compose(a, k, c)?, i + c.arity - 1, b)?;
                        bad += usize::from(lhs != rhs.scale(&s));
                    }
                }
            }
        }
    }
    Ok(bad)
}

/// A linear identity `Σ ± (Π rule signs) * chain = 0` whose chains do not
/// depend on the rule, so that candidate rules can be tested cheaply.
struct Identity<K> {
    terms: Vec<(Vec<K>, i64, Cochain)>,
}

impl<K> Identity<K> {
    fn holds(&self, sign: impl Fn(&K) -> i64) -> Result<bool, CalcError> {
        let Some(first) = self.terms.first() else {
            return Ok(true);
        };
        let mut sum = Cochain::zero(first.2.spec);
        for (factors, s, chain) in &self.terms {
            let s = factors.iter().fold(*s, |acc, k| acc * sign(k));
            sum = sum.add(&chain.scale(&qi(s)))?;
        }
        Ok(sum.is_zero())
    }
}

fn all_hold<K>(ids: &[Identity<K>], sign: impl Fn(&K) -> i64) -> Result<bool, CalcError> {
    for id in ids {
        if !id.holds(&sign)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn homogeneous_degree(chain: &Cochain) -> Result<Option<i64>, CalcError> {
    chain.degree().map_err(|_| CalcError::Inhomogeneous)
}

/// `δδx` split into the four products of parts.
fn square_identities(xs: &[OperadElement]) -> Result<Vec<Identity<(usize, i64)>>, CalcError> {
    let mut out = Vec::new();
    for x in xs {
        let Some(d) = homogeneous_degree(&x.chain)? else { continue };
        let mut terms = Vec::new();
        for k in 0..2 {
            let first = differential_part(x, k);
            for l in 0..2 {
                terms.push((vec![(k, d), (l, d + 1)], 1, differential_part(&first, l).chain));
            }
        }
        out.push(Identity { terms });
    }
    Ok(out)
}

/// `δ(a ∘_i b) - δa ∘_i b - (-1)^{|a|} a ∘_i δb` split by part.
fn derivation_identities(
    left: &[OperadElement],
    right: &[OperadElement],
) -> Result<Vec<Identity<(usize, i64)>>, CalcError> {
    let mut out = Vec::new();
    for a in left {
        let Some(da) = homogeneous_degree(&a.chain)? else { continue };
        let pa = [differential_part(a, 0), differential_part(a, 1)];
        let koszul = sign_pow(da.rem_euclid(2) == 1);
        for b in right {
            let Some(db) = homogeneous_degree(&b.chain)? else { continue };
            let pb = [differential_part(b, 0), differential_part(b, 1)];
            for i in 1..=a.arity {
                let ab = operad_compose(a, i, b)?;
                let mut terms = Vec::new();
                for k in 0..2 {
                    terms.push((vec![(k, da + db)], 1, differential_part(&ab, k).chain));
                    terms.push((vec![(k, da)], -1, operad_compose(&pa[k], i, b)?.chain));
                    terms.push((vec![(k, db)], -koszul, operad_compose(a, i, &pb[k])?.chain));
                }
                out.push(Identity { terms });
            }
        }
    }
    Ok(out)
}

/// Whether `δ² = 0` on every element.
pub fn square_vanishes(xs: &[OperadElement], rule: OperadRule) -> Result<bool, CalcError> {
    all_hold(&square_identities(xs)?, |&(k, d)| rule.sign(k, d))
}

/// Whether `δ(a ∘_i b) = δa ∘_i b + (-1)^{|a|} a ∘_i δb` for all pairs and slots.
pub fn derivation_holds(left: &[OperadElement], right: &[OperadElement], rule: OperadRule) -> Result<bool, CalcError> {
    all_hold(&derivation_identities(left, right)?, |&(k, d)| rule.sign(k, d))
}

/// Rules passing both the square and the derivation checks on the sample.
pub fn rule_solutions(
    spec: &ComplexSpec,
    square: SampleBounds,
    left: SampleBounds,
    right: SampleBounds,
) -> Result<Vec<OperadRule>, CalcError> {
    let xs = sample_elements(spec, square)?;
    let left = sample_elements(spec, left)?;
    let right = sample_elements(spec, right)?;
    let square = square_identities(&xs)?;
    let derivation = derivation_identities(&left, &right)?;
    let mut out = Vec::new();
    for rule in OperadRule::candidates() {
        let sign = |&(k, d): &(usize, i64)| rule.sign(k, d);
        if all_hold(&square, sign)? && all_hold(&derivation, sign)? {
            out.push(rule);
        }
    }
    Ok(out)
}

/// `γ·(a ∘_i b) - (γ·a) ∘_i b - (-1)^{|γ||a|} a ∘_i (γ·b)`, split by part.
fn action_derivation_identities(
    gammas: &[Cochain],
    left: &[OperadElement],
    right: &[OperadElement],
) -> Result<Vec<Identity<ActionKey>>, CalcError> {
    let mut out = Vec::new();
    for gamma in gammas {
        let Some(dg) = homogeneous_degree(gamma)? else { continue };
        for a in left {
            let Some(da) = homogeneous_degree(&a.chain)? else { continue };
            let pa: Vec<OperadElement> = (0..3).map(|k| gc_action_part(gamma, a, k)).collect::<Result<_, _>>()?;
            for b in right {
                let Some(db) = homogeneous_degree(&b.chain)? else { continue };
                let pb: Vec<OperadElement> = (0..3).map(|k| gc_action_part(gamma, b, k)).collect::<Result<_, _>>()?;
                let koszul = sign_pow((dg * da).rem_euclid(2) == 1);
                for i in 1..=a.arity {
                    let ab = operad_compose(a, i, b)?;
                    let mut terms = Vec::new();
                    for k in 0..3 {
                        terms.push((vec![(k, dg, da + db)], 1, gc_action_part(gamma, &ab, k)?.chain));
                        terms.push((vec![(k, dg, da)], -1, operad_compose(&pa[k], i, b)?.chain));
                        terms.push((vec![(k, dg, db)], -koszul, operad_compose(a, i, &pb[k])?.chain));
                    }
                    out.push(Identity { terms });
                }
            }
        }
    }
    Ok(out)
}

/// `δ(γ·x) - (-1)^{|γ|} γ·(δx) - (δγ)·x`, split by part.
/// Part, degree of the acting graph, degree of the argument.
type ActionKey = (usize, i64, i64);

fn commutator_identities(gammas: &[Cochain], xs: &[OperadElement]) -> Result<Vec<Identity<ActionKey>>, CalcError> {
    let mut out = Vec::new();
    for gamma in gammas {
        let Some(dg) = homogeneous_degree(gamma)? else { continue };
        let d_gamma = crate::calculus::differential(gamma);
        let s = -sign_pow(dg.rem_euclid(2) == 1);
        for x in xs {
            let Some(dx) = homogeneous_degree(&x.chain)? else { continue };
            let delta_x = operad_differential(x)?;
            let mut terms = Vec::new();
            for k in 0..3 {
                terms.push((vec![(k, dg, dx)], 1, operad_differential(&gc_action_part(gamma, x, k)?)?.chain));
                terms.push((vec![(k, dg, dx + 1)], s, gc_action_part(gamma, &delta_x, k)?.chain));
                terms.push((vec![(k, dg + 1, dx)], -1, gc_action_part(&d_gamma, x, k)?.chain));
            }
            out.push(Identity { terms });
        }
    }
    Ok(out)
}

/// Whether `γ·` is a derivation: `γ·(a ∘_i b) = (γ·a) ∘_i b + (-1)^{|γ||a|} a ∘_i (γ·b)`.
pub fn action_is_derivation(
    gammas: &[Cochain],
    left: &[OperadElement],
    right: &[OperadElement],
    rule: ActionRule,
) -> Result<bool, CalcError> {
    all_hold(&action_derivation_identities(gammas, left, right)?, |&(k, g, d)| rule.sign(k, g, d))
}

/// Whether `δ(γ·Γ) - (-1)^{|γ|} γ·(δΓ) = (δγ)·Γ`.
pub fn action_commutes(gammas: &[Cochain], xs: &[OperadElement], rule: ActionRule) -> Result<bool, CalcError> {
    all_hold(&commutator_identities(gammas, xs)?, |&(k, g, d)| rule.sign(k, g, d))
}

/// Action rules passing the commutator check for `commuting` and the
/// derivation check for `deriving`. The latter should avoid graphs with
/// univalent vertices: declaring the sink external then leaves a univalent
/// internal vertex, which the operad does not contain, so composites
/// through it are lost and the derivation identity fails for every rule.
pub fn action_rule_solutions(
    commuting: &[Cochain],
    deriving: &[Cochain],
    xs: &[OperadElement],
    right: &[OperadElement],
) -> Result<Vec<ActionRule>, CalcError> {
    let comm = commutator_identities(commuting, xs)?;
    let der = action_derivation_identities(deriving, xs, right)?;
    let mut out = Vec::new();
    for rule in ActionRule::candidates() {
        let sign = |&(k, g, d): &ActionKey| rule.sign(k, g, d);
        if all_hold(&comm, sign)? && all_hold(&der, sign)? {
            out.push(rule);
        }
    }
    Ok(out)
}

/// Basis graphs of an oriented complex with at most `max_v` vertices and `max_e` edges.
pub fn sample_gammas(flavor: Flavor, n: i64, max_v: usize, max_e: usize) -> Result<Vec<Cochain>, CalcError> {
    let spec = ComplexSpec::new(flavor, n);
    let mut out = Vec::new();
    for v in 1..=max_v {
        for e in 0..=max_e {
            for class in crate::enumerate::enumerate_basis(&spec, v, e, 0)?.classes() {
                out.push(Cochain::from_graph(spec, &class.repr));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn or(n: i64) -> ComplexSpec {
        ComplexSpec::new(Flavor::GraphsOr, n)
    }

    fn el(spec: ComplexSpec, n_ext: usize, n_v: usize, edges: &[(usize, usize)]) -> OperadElement {
        let edges = edges.iter().map(|&(s, t)| (s as u8, t as u8)).collect();
        OperadElement::from_graph(spec, &DirectedGraph::from_raw(n_v, n_ext, edges, Vec::new())).unwrap()
    }

    fn negated(r: OperadRule) -> OperadRule {
        let neg = |t: TermSign| TermSign { sign: -t.sign, ..t };
        OperadRule { internal: neg(r.internal), inner: neg(r.inner) }
    }

    fn negated_action(r: ActionRule) -> ActionRule {
        let neg = |t: ActionSign| ActionSign { sign: -t.sign, ..t };
        ActionRule { outer: neg(r.outer), internal: neg(r.internal), inner: neg(r.inner) }
    }

    #[test]
    fn differential_signs_are_unique_up_to_sign() {
        let b = SampleBounds::new(2, 2, 3);
        for f in [Flavor::GraphsOr, Flavor::Graphs] {
            for n in [2, 3] {
                let spec = ComplexSpec::new(f, n);
                let sols = rule_solutions(&spec, SampleBounds::new(2, 2, 4), b, b).unwrap();
                let frozen = OperadRule::frozen(spec.conv());
                assert_eq!(sols.len(), 2, "{f} n={n}: {sols:?}");
                assert!(sols.contains(&frozen) && sols.contains(&negated(frozen)), "{f} n={n}");
            }
        }
    }

    #[test]
    fn action_signs_are_unique_up_to_sign() {
        for n in [2, 3] {
            let gammas = sample_gammas(Flavor::FcGCor, n, 3, 3).unwrap();
            let xs = sample_elements(&or(n), SampleBounds::new(2, 2, 3)).unwrap();
            let ids = commutator_identities(&gammas, &xs).unwrap();
            let sols: Vec<ActionRule> = ActionRule::candidates()
                .into_iter()
                .filter(|r| all_hold(&ids, |&(k, g, d)| r.sign(k, g, d)).unwrap())
                .collect();
            assert_eq!(sols, vec![ActionRule::FROZEN, negated_action(ActionRule::FROZEN)], "n={n}");
        }
    }

    #[test]
    fn frozen_action_is_a_derivation() {
        for n in [2, 3] {
            let spec = or(n);
            let gammas = sample_gammas(Flavor::GCor, n, 3, 3).unwrap();
            let left = sample_elements(&spec, SampleBounds::new(2, 2, 3)).unwrap();
            let right = sample_elements(&spec, SampleBounds::new(2, 1, 2)).unwrap();
            assert!(action_is_derivation(&gammas, &left, &right, ActionRule::FROZEN).unwrap(), "n={n}");
        }
    }

    #[test]
    fn antennas_break_the_derivation_identity() {
        // 0 -> 1 -> 2: declaring 2 external leaves the univalent source 0
        let spec = ComplexSpec::new(Flavor::FcGCor, 2);
        let path = Cochain::from_graph(spec, &DirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap());
        let x = el(or(2), 1, 3, &[(1, 0), (2, 0), (2, 1)]);
        assert!(!action_is_derivation(&[path], &[x.clone()], &[x], ActionRule::FROZEN).unwrap());
    }

    #[test]
    fn edge_acts_as_the_differential() {
        for n in [2, 3] {
            let m = crate::named::mc_edge(n, true);
            for x in sample_elements(&or(n), SampleBounds::new(3, 2, 4)).unwrap() {
                assert_eq!(gc_action(&m, &x).unwrap(), operad_differential(&x).unwrap(), "n={n}");
            }
        }
    }

    #[test]
    fn gamma_one_needs_a_unique_sink() {
        let spec = ComplexSpec::new(Flavor::FcGCor, 2);
        let cherry = DirectedGraph::new(3, vec![(0, 1), (0, 2)]).unwrap();
        assert!(gamma_one(&cherry, &spec).is_none());
        let x = el(or(2), 2, 3, &[(2, 0), (2, 1)]);
        let gamma = Cochain::from_graph(spec, &cherry);
        let full = gc_action(&gamma, &x).unwrap();
        assert_eq!(full, gc_action_part(&gamma, &x, 1).unwrap().scale(&qi(ActionRule::FROZEN.sign(1, 1, 2 - 2))));
        let (g1, s) = gamma_one(&edge_graph(), &ComplexSpec::new(Flavor::FcGCor, 3)).unwrap();
        assert_eq!((g1, s), (unit_edge(), -1));
    }

    #[test]
    fn generators() {
        for n in [2, 3] {
            let spec = or(n);
            let product = generator_image(spec, "product", None).unwrap();
            let slice = enumerate_operad_basis(&spec, 2, 0, 0).unwrap();
            assert_eq!(slice.len(), 1);
            assert_eq!(product.chain.terms().next().unwrap().0, &slice.classes()[0].repr);
            assert!(operad_differential(&product).unwrap().is_zero());
            for k in 2..=4 {
                let mu = generator_image(spec, "mu", Some(k)).unwrap();
                assert_eq!(mu.arity, k);
                assert_eq!(bad_projection(&mu).unwrap(), mu);
            }
            assert!(operad_differential(&generator_image(spec, "mu", Some(2)).unwrap()).unwrap().is_zero());
            let mu2 = generator_image(spec, "mu", Some(2)).unwrap();
            assert_eq!(mu2.degree().unwrap(), Some(2 - n));
        }
        assert!(generator_image(or(2), "mu", Some(1)).is_err());
        assert!(generator_image(or(2), "nope", None).is_err());
        // forks are generators of the oriented operad only
        assert!(generator_image(ComplexSpec::new(Flavor::Graphs, 2), "mu", Some(3)).is_err());
    }

    #[test]
    fn forks_satisfy_the_homotopy_lie_relations() {
        for n in [2, 3] {
            for big in 3..=4 {
                let d = operad_differential(&generator_image(or(n), "mu", Some(big)).unwrap()).unwrap();
                assert!(!d.is_zero(), "n={n} N={big}");
                assert!(mu_boundary_is_quadratic(or(n), big).unwrap(), "n={n} N={big}");
            }
        }
    }

    #[test]
    fn product_is_associative_and_commutative() {
        let p = generator_image(or(2), "product", None).unwrap();
        let left = operad_compose(&p, 1, &p).unwrap();
        let right = operad_compose(&p, 2, &p).unwrap();
        assert_eq!(left, right);
        assert_eq!(left, el(or(2), 3, 3, &[]));
        assert_eq!(permute_externals(&p, &[1, 0]).unwrap(), p);
        assert!(matches!(operad_compose(&p, 3, &p), Err(CalcError::SlotOutOfRange { slot: 3, arity: 2 })));
    }

    #[test]
    fn leibniz_fixture() {
        for n in [2, 3] {
            let spec = or(n);
            let mu = generator_image(spec, "mu", Some(2)).unwrap();
            let p = generator_image(spec, "product", None).unwrap();
            let got = operad_compose(&mu, 1, &p).unwrap();
            let expected = el(spec, 3, 4, &[(3, 0), (3, 2)]).add(&el(spec, 3, 4, &[(3, 1), (3, 2)])).unwrap();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn composition_is_associative() {
        for n in [2, 3] {
            let xs = sample_elements(&or(n), SampleBounds::new(2, 1, 2)).unwrap();
            assert_eq!(associativity_defects(&xs).unwrap(), 0, "n={n}");
        }
    }

    #[test]
    fn composition_is_equivariant() {
        let spec = or(2);
        let xs = sample_elements(&spec, SampleBounds::new(2, 2, 3)).unwrap();
        for a in xs.iter().filter(|a| a.arity == 2) {
            let swapped = permute_externals(a, &[1, 0]).unwrap();
            for b in &xs {
                // a ∘_1 b has externals [b.., a2]; swapped ∘_2 b has [a2, b..]
                let lhs = operad_compose(&swapped, 2, b).unwrap();
                let k = b.arity;
                let perm: Vec<usize> = (0..=k).map(|v| if v < k { v + 1 } else { 0 }).collect();
                let rhs = permute_externals(&operad_compose(a, 1, b).unwrap(), &perm).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert!(permute_externals(&xs[0], &[0, 0]).is_err());
    }

    #[test]
    fn differential_is_a_derivation() {
        for f in [Flavor::GraphsOr, Flavor::Graphs] {
            for n in [2, 3] {
                let spec = ComplexSpec::new(f, n);
                let left = sample_elements(&spec, SampleBounds::new(2, 2, 4)).unwrap();
                let right = sample_elements(&spec, SampleBounds::new(2, 1, 3)).unwrap();
                assert!(derivation_holds(&left, &right, OperadRule::frozen(spec.conv())).unwrap(), "{f} n={n}");
            }
        }
    }

    #[test]
    fn bad_projection_properties() {
        let spec = or(2);
        let fed_twice = el(spec, 2, 3, &[(2, 0), (2, 1), (2, 0)]);
        let fed_twice = if fed_twice.is_zero() { el(spec, 1, 3, &[(1, 0), (2, 0), (2, 1)]) } else { fed_twice };
        assert!(!fed_twice.is_zero());
        assert!(bad_projection(&fed_twice).unwrap().is_zero());
        assert!(bad_projection(&OperadElement::zero(ComplexSpec::new(Flavor::Graphs, 2), 1)).is_err());
        for n in [2, 3] {
            let spec = or(n);
            for x in sample_elements(&spec, SampleBounds::new(3, 2, 4)).unwrap() {
                let p = bad_projection(&x).unwrap();
                assert_eq!(bad_projection(&p).unwrap(), p);
                let lhs = bad_projection(&operad_differential(&p).unwrap()).unwrap();
                let rhs = bad_projection(&operad_differential(&x).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "n={n}");
            }
        }
    }

    fn composites(spec: ComplexSpec) -> Vec<OperadElement> {
        let gens = vec![
            generator_image(spec, "product", None).unwrap(),
            generator_image(spec, "mu", Some(2)).unwrap(),
            generator_image(spec, "mu", Some(3)).unwrap(),
        ];
        let mut out = gens.clone();
        for a in &gens {
            for b in &gens {
                for i in 1..=a.arity {
                    if a.arity + b.arity - 1 <= 3 {
                        out.push(operad_compose(a, i, b).unwrap());
                    }
                }
            }
        }
        for k in out.clone() {
            for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
                if k.arity == 3 {
                    out.push(permute_externals(&k, &perm).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn bad_projection_is_injective_on_composites() {
        for n in [2, 3] {
            let all = composites(or(n));
            for arity in 1..=3 {
                let mut degrees: Vec<i64> =
                    all.iter().filter(|x| x.arity == arity).filter_map(|x| x.degree().unwrap()).collect();
                degrees.sort();
                degrees.dedup();
                for d in degrees {
                    let span: Vec<&OperadElement> =
                        all.iter().filter(|x| x.arity == arity && x.degree().unwrap() == Some(d)).collect();
                    let projected: Vec<OperadElement> = span.iter().map(|x| bad_projection(x).unwrap()).collect();
                    let r = span_rank(&span).unwrap();
                    assert!(r > 0);
                    assert_eq!(
                        span_rank(&projected.iter().collect::<Vec<_>>()).unwrap(),
                        r,
                        "n={n} arity={arity} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn action_rejects_bad_input() {
        let x = generator_image(or(2), "mu", Some(2)).unwrap();
        let spec = ComplexSpec::new(Flavor::FcGCor, 2);
        let two = DirectedGraph::from_raw(4, 0, vec![(0, 1), (2, 3)], Vec::new());
        let mut gamma = Cochain::zero(ComplexSpec::new(Flavor::FGC, 2));
        gamma.add_raw(&two, &qi(1));
        assert!(matches!(gc_action(&gamma, &x), Err(CalcError::WrongFlavor(_))));
        let m = Cochain::from_graph(ComplexSpec::new(Flavor::FcGCor, 3), &edge_graph());
        assert!(matches!(gc_action(&m, &x), Err(CalcError::SpecMismatch(..))));
        assert!(gc_action(&Cochain::from_graph(spec, &edge_graph()), &x).is_ok());
    }
}
