//! Step-by-step construction of a Maurer–Cartan element `m = m4 + m5 + ...`
//! in the oriented complex for `n = 2`, where `m_k` has `k` vertices.
//!
//! The residual `δm + ½[m,m]` has a component for each vertex count `V`:
//! `δ m_{V-1} + ½ Σ_{i+j=V+1} [m_i, m_j]`. A state with truncation `max_k`
//! has a clean residual for all `V <= max_k`; extending it solves
//! `δx = -r` for the residual `r` at `V = max_k + 1` with `x` on `max_k`
//! vertices and adds `x` to `m_{max_k}`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::calculus::{bracket, differential, genus_rescale};
use crate::cochain::{q, Cochain, Q};
use crate::error::{HomologyError, McError};
use crate::flavor::{ComplexSpec, Flavor};
use crate::homology::{bucket_degree, Engine};
use crate::matrix::{from_big, Rationals, Reduction};
use crate::named::shoikhet;

#[derive(Clone, Debug, PartialEq)]
pub struct McState {
    pub spec: ComplexSpec,
    pub parts: BTreeMap<usize, Cochain>,
    pub max_k: usize,
}

/// The residual at the first vertex count where it could not be removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub v: usize,
    pub residual: Cochain,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    Extended(McState),
    Obstructed(Obstruction),
}

pub fn mc_init() -> Result<McState, McError> {
    let m4 = shoikhet()?;
    let spec = m4.spec;
    Ok(McState { spec, parts: BTreeMap::from([(4, m4)]), max_k: 4 })
}

impl McState {
    pub fn part(&self, k: usize) -> Cochain {
        self.parts.get(&k).cloned().unwrap_or_else(|| Cochain::zero(self.spec))
    }

    /// Component of `δm + ½[m,m]` on `v` vertices.
    pub fn residual(&self, v: usize) -> Result<Cochain, McError> {
        let mut r = if v >= 1 { differential(&self.part(v - 1)) } else { Cochain::zero(self.spec) };
        let half = q(1, 2);
        for (&i, mi) in &self.parts {
            for (&j, mj) in &self.parts {
                if i + j == v + 1 {
                    r = r.add(&bracket(mi, mj)?.scale(&half))?;
                }
            }
        }
        Ok(r)
    }

    /// Vertex counts `<= max_k` with a nonzero residual.
    pub fn dirty_buckets(&self) -> Result<Vec<usize>, McError> {
        let mut out = Vec::new();
        for v in 1..=self.max_k {
            if !self.residual(v)?.is_zero() {
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// Try to make the residual vanish on `max_k + 1` vertices.
pub fn mc_extend(engine: &Engine, state: &McState) -> Result<Extension, McError> {
    if let Some(&v) = state.dirty_buckets()?.first() {
        return Err(McError::Inconsistent(v));
    }
    let k = state.max_k;
    let r = state.residual(k + 1)?;
    if !differential(&r).is_zero() {
        return Err(McError::NotCocycle(k + 1));
    }
    let mut next = state.clone();
    next.max_k = k + 1;
    if r.is_zero() {
        return Ok(Extension::Extended(next));
    }
    // x has degree 1 on k vertices: E = 2k - 3 for n = 2
    let e = (state.spec.n * (k as i64 - 1) - 1) / (state.spec.n - 1);
    let e = e as usize;
    debug_assert_eq!(bucket_degree(&state.spec, k, e), 1);
    let source = engine.basis(&state.spec, k, e)?;
    let target = engine.basis(&state.spec, k + 1, e + 1)?;
    let m = engine.differential_matrix(&state.spec, k, e)?;
    let mut rhs = Vec::with_capacity(r.len());
    for (g, c) in r.terms() {
        let row = target.position(g).ok_or_else(|| HomologyError::MissingTarget { col: 0, key: g.encode() })?;
        rhs.push((row as u32, -c.clone()));
    }
    let red = Reduction::new(Rationals, &m, true);
    let Some(x) = red.solve(&rhs) else {
        return Ok(Extension::Obstructed(Obstruction { v: k + 1, residual: r }));
    };
    let mut part = next.part(k);
    for (col, c) in x {
        part.add_canonical(source.graph(col as usize).clone(), &c);
    }
    if part.is_zero() {
        next.parts.remove(&k);
    } else {
        next.parts.insert(k, part);
    }
    if !next.residual(k + 1)?.is_zero() {
        return Err(McError::Inconsistent(k + 1));
    }
    Ok(Extension::Extended(next))
}

/// Extend until the residual is clean through `target` vertices.
pub fn mc_run(engine: &Engine, target: usize) -> Result<Extension, McError> {
    let mut state = mc_init()?;
    while state.max_k < target {
        match mc_extend(engine, &state)? {
            Extension::Extended(s) => state = s,
            obstructed => return Ok(obstructed),
        }
    }
    Ok(Extension::Extended(state))
}

/// Rescale every part by `λ^{betti}`; the result is rechecked, not assumed.
pub fn mc_family(state: &McState, lambda: &Q) -> Result<McState, McError> {
    let mut parts = BTreeMap::new();
    for (&k, p) in &state.parts {
        let scaled = genus_rescale(p, lambda);
        if !scaled.is_zero() {
            parts.insert(k, scaled);
        }
    }
    let out = McState { spec: state.spec, parts, max_k: state.max_k };
    if let Some(&v) = out.dirty_buckets()?.first() {
        return Err(McError::Inconsistent(v));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionRow {
    pub b: i64,
    pub d: i64,
    pub v: usize,
    pub e: usize,
    pub h_dim: usize,
    /// Value stated for this cell in the literature, when there is one.
    pub cited: Option<usize>,
}

/// Cohomology of the oriented complex in degrees 0, 1, 2 for `b <= max_b`.
pub fn obstruction_table(engine: &Engine, n: i64, max_b: i64) -> Result<Vec<ObstructionRow>, McError> {
    let spec = ComplexSpec::new(Flavor::GCor, n);
    let mut rows = Vec::new();
    for b in 0..=max_b {
        for d in 0..=2 {
            let rep = match engine.cohomology_confirmed(&spec, b, d) {
                Ok(rep) => rep,
                Err(HomologyError::NoBucket { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            let cited = match (n, b, d) {
                (2, _, 0) => Some(0),
                (2, 2, 1) => Some(1),
                (2, b, 1) if b != 2 => Some(0),
                (2, 1, 2) => Some(1),
                _ => None,
            };
            rows.push(ObstructionRow { b, d, v: rep.v, e: rep.e, h_dim: rep.h_dim, cited });
        }
    }
    Ok(rows)
}

/// Part coefficients as small rationals, for reports.
pub fn small_coefficients(x: &Cochain) -> Option<Vec<(String, Rational64)>> {
    x.sorted_terms().into_iter().map(|(k, _, c)| from_big(c).map(|c| (k, c))).collect()
}

/// Whether every part is supported on its own vertex count and has degree 1.
pub fn parts_well_formed(state: &McState) -> bool {
    state.parts.iter().all(|(&k, p)| {
        !p.is_zero() && p.terms().all(|(g, c)| g.n_vertices() == k && !c.is_zero()) && p.degree().ok() == Some(Some(1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::{BasisStore, Bounds};
    use crate::cochain::qi;

    #[test]
    fn initial_state_is_clean_through_six() {
        let s = mc_init().unwrap();
        assert_eq!(s.part(4).degree().unwrap(), Some(1));
        assert!(s.residual(5).unwrap().is_zero());
        assert!(s.residual(6).unwrap().is_zero());
        assert!(parts_well_formed(&s));
    }

    #[test]
    fn first_steps_choose_zero() {
        let engine = Engine::new(BasisStore::in_memory(Bounds::default()));
        let s = mc_init().unwrap();
        let Extension::Extended(s) = mc_extend(&engine, &s).unwrap() else { panic!("obstructed") };
        let Extension::Extended(s) = mc_extend(&engine, &s).unwrap() else { panic!("obstructed") };
        assert_eq!(s.max_k, 6);
        assert!(s.part(5).is_zero());
        assert_eq!(s.part(4), mc_init().unwrap().part(4));
        let zero = mc_family(&s, &qi(0)).unwrap();
        assert!(zero.parts.is_empty());
    }
}
