//! Differential matrices, cohomology dimensions and cocycle representatives.
//!
//! For connected complexes, a (betti, degree) pair pins down the bucket:
//! `V = d + 1 + (n-1) b` and `E = V + b - 1`. The cohomology at that bucket
//! is `dim - rank(in) - rank(out)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::cache::BasisStore;
use crate::calculus::differential_graph;
use crate::cochain::{Cochain, Q};
use crate::enumerate::BasisSlice;
use crate::error::HomologyError;
use crate::flavor::ComplexSpec;
use crate::graph::DirectedGraph;
use crate::matrix::{
    from_big, normalize_primitive, rank, rational_kernel, Field, Rationals, Reduction, SparseMatrix, DEFAULT_PRIME,
    SECOND_PRIME,
};

/// Matrices with fewer columns than this are also reduced over the rationals.
pub const RATIONAL_CONFIRM_LIMIT: usize = 2000;

/// The bucket holding connected graphs of betti number `b` in degree `d`.
pub fn resolve_bucket(spec: &ComplexSpec, b: i64, d: i64) -> Result<(usize, usize), HomologyError> {
    if !spec.flavor.connected() || spec.flavor.has_legs() {
        return Err(HomologyError::Unsupported(spec.flavor));
    }
    let v = d + 1 + (spec.n - 1) * b;
    let e = v + b - 1;
    if b < 0 || v < 1 || e < 0 {
        return Err(HomologyError::NoBucket { b, d, n: spec.n });
    }
    Ok((v as usize, e as usize))
}

/// Degree of the bucket `(v, e)`; inverse of [`resolve_bucket`].
pub fn bucket_degree(spec: &ComplexSpec, v: usize, e: usize) -> i64 {
    spec.n * (v as i64 - 1) - (spec.n - 1) * e as i64
}

/// Matrix of `δ` from `from` to `to` (buckets `(V, E)` and `(V+1, E+1)`).
pub fn assemble(from: &BasisSlice, to: &BasisSlice) -> Result<SparseMatrix, HomologyError> {
    if from.spec != to.spec || to.v != from.v + 1 || to.e != from.e + 1 || from.spec.flavor.has_legs() {
        return Err(HomologyError::BucketMismatch(from.v, from.e, to.v, to.e));
    }
    let spec = from.spec;
    let mut m = SparseMatrix::zeros(to.len(), from.len());
    for j in 0..from.len() {
        let mut col = Vec::new();
        for (h, k) in differential_graph(&spec, from.graph(j)) {
            let row = to.position(&h).ok_or_else(|| HomologyError::MissingTarget { col: j, key: h.encode() })?;
            col.push((row as u32, Rational64::from_integer(k)));
        }
        m.set_column(j, col);
    }
    Ok(m)
}

/// Number of source columns on which `op ∘ op` does not vanish.
pub fn square_defect<F>(sources: &[DirectedGraph], op: F) -> usize
where
    F: Fn(&DirectedGraph) -> Vec<(DirectedGraph, Q)>,
{
    let mut memo: HashMap<DirectedGraph, Vec<(DirectedGraph, Q)>> = HashMap::new();
    let mut bad = 0;
    for g in sources {
        let mut acc: HashMap<DirectedGraph, Q> = HashMap::new();
        for (h, c) in op(g) {
            let second = memo.entry(h.clone()).or_insert_with(|| op(&h));
            for (k, c2) in second.iter() {
                *acc.entry(k.clone()).or_insert_with(Q::zero) += &c * c2;
            }
        }
        if acc.values().any(|c| !c.is_zero()) {
            bad += 1;
        }
    }
    bad
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub flavor: String,
    pub n: i64,
    pub b: i64,
    pub d: i64,
    pub v: usize,
    pub e: usize,
    pub dim_in: usize,
    pub dim_mid: usize,
    pub dim_out: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub h_dim: usize,
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D2Report {
    pub flavor: String,
    pub n: i64,
    pub v: usize,
    pub e: usize,
    pub l: usize,
    pub columns: usize,
    pub nonzero_columns: usize,
}

impl D2Report {
    pub fn ok(&self) -> bool {
        self.nonzero_columns == 0
    }
}

type MatrixKey = (ComplexSpec, usize, usize);

/// Bucket store plus memoized differential matrices and ranks.
pub struct Engine {
    pub store: BasisStore,
    matrices: Mutex<HashMap<MatrixKey, Arc<SparseMatrix>>>,
    ranks: Mutex<HashMap<(MatrixKey, Field), usize>>,
}

impl Engine {
    pub fn new(store: BasisStore) -> Self {
        Self { store, matrices: Mutex::new(HashMap::new()), ranks: Mutex::new(HashMap::new()) }
    }

    fn slice_or_empty(&self, spec: &ComplexSpec, v: usize, e: usize) -> Result<Arc<BasisSlice>, HomologyError> {
        if v == 0 {
            return Ok(Arc::new(BasisSlice::from_graphs(*spec, 0, 0, e, 0, Vec::new())));
        }
        Ok(self.store.basis(spec, v, e, 0)?)
    }

    pub fn basis(&self, spec: &ComplexSpec, v: usize, e: usize) -> Result<Arc<BasisSlice>, HomologyError> {
        self.slice_or_empty(spec, v, e)
    }

    /// `δ` from bucket `(v, e)` to `(v+1, e+1)`.
    pub fn differential_matrix(
        &self,
        spec: &ComplexSpec,
        v: usize,
        e: usize,
    ) -> Result<Arc<SparseMatrix>, HomologyError> {
        let key = (*spec, v, e);
        if let Some(m) = self.matrices.lock().expect("matrix memo poisoned").get(&key) {
            return Ok(m.clone());
        }
        let from = self.slice_or_empty(spec, v, e)?;
        let to = self.slice_or_empty(spec, v + 1, e + 1)?;
        let m = Arc::new(assemble(&from, &to)?);
        self.matrices.lock().expect("matrix memo poisoned").insert(key, m.clone());
        Ok(m)
    }

    pub fn rank(&self, spec: &ComplexSpec, v: usize, e: usize, field: Field) -> Result<usize, HomologyError> {
        let key = ((*spec, v, e), field);
        if let Some(&r) = self.ranks.lock().expect("rank memo poisoned").get(&key) {
            return Ok(r);
        }
        let m = self.differential_matrix(spec, v, e)?;
        let r = rank(&m, field);
        log::debug!("rank {} V={v} E={e} over {field}: {r} ({}x{})", spec, m.rows, m.cols);
        self.ranks.lock().expect("rank memo poisoned").insert(key, r);
        Ok(r)
    }

    /// Rank over both primes, and over the rationals below the size limit; errors on disagreement.
    pub fn confirmed_rank(&self, spec: &ComplexSpec, v: usize, e: usize) -> Result<(usize, bool), HomologyError> {
        let r1 = self.rank(spec, v, e, Field::Prime(DEFAULT_PRIME))?;
        let r2 = self.rank(spec, v, e, Field::Prime(SECOND_PRIME))?;
        if r1 != r2 {
            return Err(HomologyError::FieldDisagreement(format!(
                "{spec} V={v} E={e}: rank {r1} mod {DEFAULT_PRIME} vs {r2} mod {SECOND_PRIME}"
            )));
        }
        let cols = self.differential_matrix(spec, v, e)?.cols;
        if cols < RATIONAL_CONFIRM_LIMIT {
            let rq = self.rank(spec, v, e, Field::Rational)?;
            if rq != r1 {
                return Err(HomologyError::FieldDisagreement(format!(
                    "{spec} V={v} E={e}: rank {r1} mod p vs {rq} over Q"
                )));
            }
            return Ok((r1, true));
        }
        Ok((r1, false))
    }

    fn report(
        &self,
        spec: &ComplexSpec,
        b: i64,
        d: i64,
        field: Option<Field>,
    ) -> Result<CohomologyReport, HomologyError> {
        let (v, e) = resolve_bucket(spec, b, d)?;
        self.store.bounds.check(v + 1, e + 1, 0)?;
        let dim_in = if v >= 2 && e >= 1 { self.slice_or_empty(spec, v - 1, e - 1)?.len() } else { 0 };
        let dim_mid = self.slice_or_empty(spec, v, e)?.len();
        let dim_out = self.slice_or_empty(spec, v + 1, e + 1)?.len();
        let (rank_in, rank_out, field) = match field {
            Some(f) => {
                let rin = if dim_in > 0 { self.rank(spec, v - 1, e - 1, f)? } else { 0 };
                (rin, self.rank(spec, v, e, f)?, f.to_string())
            }
            None => {
                let (rin, qin) = if dim_in > 0 { self.confirmed_rank(spec, v - 1, e - 1)? } else { (0, true) };
                let (rout, qout) = self.confirmed_rank(spec, v, e)?;
                let mut label = format!("{}+{}", Field::Prime(DEFAULT_PRIME), Field::Prime(SECOND_PRIME));
                if qin && qout {
                    label.push_str("+Q");
                }
                (rin, rout, label)
            }
        };
        let h_dim = dim_mid
            .checked_sub(rank_in + rank_out)
            .expect("ranks exceed the dimension; the differential does not square to zero");
        Ok(CohomologyReport {
            flavor: spec.flavor.to_string(),
            n: spec.n,
            b,
            d,
            v,
            e,
            dim_in,
            dim_mid,
            dim_out,
            rank_in,
            rank_out,
            h_dim,
            field,
        })
    }

    /// Cohomology dimension over a single field.
    pub fn cohomology_dim(
        &self,
        spec: &ComplexSpec,
        b: i64,
        d: i64,
        field: Field,
    ) -> Result<CohomologyReport, HomologyError> {
        self.report(spec, b, d, Some(field))
    }

    /// Cohomology dimension confirmed over two primes and, where small enough, the rationals.
    pub fn cohomology_confirmed(&self, spec: &ComplexSpec, b: i64, d: i64) -> Result<CohomologyReport, HomologyError> {
        self.report(spec, b, d, None)
    }

    /// Rational cocycles spanning a complement of the image inside the kernel.
    pub fn cocycle_representatives(&self, spec: &ComplexSpec, b: i64, d: i64) -> Result<Vec<Cochain>, HomologyError> {
        let (v, e) = resolve_bucket(spec, b, d)?;
        self.store.bounds.check(v + 1, e + 1, 0)?;
        let mid = self.slice_or_empty(spec, v, e)?;
        let out = self.differential_matrix(spec, v, e)?;
        let inc = if v >= 2 && e >= 1 {
            (*self.differential_matrix(spec, v - 1, e - 1)?).clone()
        } else {
            SparseMatrix::zeros(mid.len(), 0)
        };
        let mut kernel = rational_kernel(&out);
        let mut combined = SparseMatrix::zeros(mid.len(), inc.cols + kernel.len());
        for c in 0..inc.cols {
            combined.set_column(c, inc.column(c).to_vec());
        }
        for (k, vec) in kernel.iter_mut().enumerate() {
            normalize_primitive(vec);
            let col = vec
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| from_big(x).map(|x| (i as u32, x)).ok_or_else(|| HomologyError::Overflow(x.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            combined.set_column(inc.cols + k, col);
        }
        let red = Reduction::new(Rationals, &combined, false);
        let mut reps = Vec::new();
        for (k, vec) in kernel.iter().enumerate() {
            if red.is_pivot_column(inc.cols + k) {
                let mut x = Cochain::zero(*spec);
                for (i, c) in vec.iter().enumerate() {
                    x.add_canonical(mid.graph(i).clone(), c);
                }
                reps.push(x);
            }
        }
        Ok(reps)
    }

    /// Normal form of a cochain in bucket `(v, e)` modulo the image of `δ`.
    pub fn reduce_modulo_image(&self, x: &Cochain, v: usize, e: usize) -> Result<Vec<Q>, HomologyError> {
        let mid = self.slice_or_empty(&x.spec, v, e)?;
        let inc = if v >= 2 && e >= 1 {
            (*self.differential_matrix(&x.spec, v - 1, e - 1)?).clone()
        } else {
            SparseMatrix::zeros(mid.len(), 0)
        };
        let mut b = Vec::new();
        for (g, c) in x.terms() {
            let i = mid.position(g).ok_or_else(|| HomologyError::MissingTarget { col: 0, key: g.encode() })?;
            b.push((i as u32, c.clone()));
        }
        let red = Reduction::new(Rationals, &inc, false);
        let nf = red.normal_form(&b);
        let mut dense = vec![Q::zero(); mid.len()];
        for (i, c) in nf {
            dense[i as usize] = c;
        }
        Ok(dense)
    }

    /// Check `δ∘δ = 0` on every class of bucket `(v, e)` by composing differentials.
    pub fn verify_d2(&self, spec: &ComplexSpec, v: usize, e: usize) -> Result<D2Report, HomologyError> {
        let from = self.slice_or_empty(spec, v, e)?;
        let sources: Vec<DirectedGraph> = from.classes().iter().map(|c| c.repr.clone()).collect();
        let bad = square_defect(&sources, |g| {
            differential_graph(spec, g).into_iter().map(|(h, k)| (h, Q::from_integer(k.into()))).collect()
        });
        Ok(D2Report {
            flavor: spec.flavor.to_string(),
            n: spec.n,
            v,
            e,
            l: 0,
            columns: sources.len(),
            nonzero_columns: bad,
        })
    }

    /// Check that the product of the two assembled matrices out of `(v, e)` is zero.
    pub fn verify_d2_matrices(&self, spec: &ComplexSpec, v: usize, e: usize) -> Result<bool, HomologyError> {
        let first = self.differential_matrix(spec, v, e)?;
        let second = self.differential_matrix(spec, v + 1, e + 1)?;
        Ok(second.mul(&first).is_zero())
    }

    /// Alternating sums of bucket dimensions and of cohomology dimensions at
    /// fixed `b`, for complexes in which the degree range at fixed `b` is finite.
    pub fn euler_characteristics(&self, spec: &ComplexSpec, b: i64, field: Field) -> Result<(i64, i64), HomologyError> {
        if spec.flavor.min_valence() < 3 || b < 2 {
            return Err(HomologyError::Unsupported(spec.flavor));
        }
        // 2E >= 3V and E = V + b - 1 give V <= 2b - 2
        let max_v = 2 * b - 2;
        let (mut chi_chain, mut chi_h) = (0i64, 0i64);
        for v in 1..=max_v {
            let d = v - 1 - (spec.n - 1) * b;
            let r = self.cohomology_dim(spec, b, d, field)?;
            let s = if d.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_chain += s * r.dim_mid as i64;
            chi_h += s * r.h_dim as i64;
        }
        Ok((chi_chain, chi_h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::Bounds;
    use crate::flavor::Flavor;

    fn engine() -> Engine {
        Engine::new(BasisStore::in_memory(Bounds { max_v: 7, max_e: 10, max_l: 0 }))
    }

    #[test]
    fn resolves_buckets() {
        let s = ComplexSpec::new(Flavor::GCor, 2);
        assert_eq!(resolve_bucket(&s, 2, 1).unwrap(), (4, 5));
        let s = ComplexSpec::new(Flavor::FcGC, 1);
        assert_eq!(resolve_bucket(&s, 1, 2).unwrap(), (3, 3));
        assert_eq!(bucket_degree(&s, 3, 3), 2);
        let s = ComplexSpec::new(Flavor::GC, 2);
        assert_eq!(resolve_bucket(&s, 3, 0).unwrap(), (4, 6));
        assert!(resolve_bucket(&ComplexSpec::new(Flavor::FGC, 2), 1, 1).is_err());
    }

    #[test]
    fn theta_and_tetrahedron_classes() {
        let eng = engine();
        let r = eng.cohomology_confirmed(&ComplexSpec::new(Flavor::GCor, 2), 2, 1).unwrap();
        assert_eq!(r.h_dim, 1, "{r:?}");
        let r = eng.cohomology_confirmed(&ComplexSpec::new(Flavor::GC, 2), 3, 0).unwrap();
        assert_eq!(r.h_dim, 1, "{r:?}");
        let r = eng.cohomology_confirmed(&ComplexSpec::new(Flavor::FcGC, 1), 1, 2).unwrap();
        assert_eq!(r.h_dim, 1, "{r:?}");
        assert!(r.field.ends_with("+Q"));
    }

    #[test]
    fn d2_small_buckets() {
        let eng = engine();
        for (f, n) in [(Flavor::FcGC, 1), (Flavor::FcGC, 2), (Flavor::GC, 2), (Flavor::GCor, 2), (Flavor::GCor, 3)] {
            let spec = ComplexSpec::new(f, n);
            for v in 1..=4usize {
                for e in v.saturating_sub(1)..=v + 1 {
                    assert!(eng.verify_d2(&spec, v, e).unwrap().ok(), "{spec} V={v} E={e}");
                    assert!(eng.verify_d2_matrices(&spec, v, e).unwrap(), "{spec} V={v} E={e}");
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_matches() {
        let eng = engine();
        let spec = ComplexSpec::new(Flavor::GC, 2);
        for b in 2..=4 {
            let (a, h) = eng.euler_characteristics(&spec, b, Field::Prime(DEFAULT_PRIME)).unwrap();
            assert_eq!(a, h, "b={b}");
        }
    }

    #[test]
    fn representatives_are_cocycles() {
        let eng = engine();
        let spec = ComplexSpec::new(Flavor::GCor, 2);
        let reps = eng.cocycle_representatives(&spec, 2, 1).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(crate::calculus::differential(&reps[0]).is_zero());
        assert!(eng.cocycle_representatives(&spec, 2, 0).unwrap().is_empty());
    }
}
