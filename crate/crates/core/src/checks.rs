//! The experiments behind the command-line tool. Each returns a [`Report`]
//! whose failures list every check that did not come out as expected.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::cache::{BasisCache, Bounds};
use crate::calculus::differential;
use crate::cochain::{qi, Cochain, Q};
use crate::enumerate::enumerate_basis;
use crate::error::{CheckError, HomologyError};
use crate::flavor::{ComplexSpec, Flavor};
use crate::hairy::{corolla_class, hairy_map, hat_differential, vanishes_through};
use crate::homology::{resolve_bucket, Engine};
use crate::matrix::Field;
use crate::mc::{mc_family, mc_init, mc_run, obstruction_table, Extension};
use crate::named::{shoikhet, shoikhet_graphs, wheel};
use crate::operad::{
    associativity_defects, bad_projection, derivation_holds, gc_action, generator_image, mu_boundary_is_quadratic,
    operad_differential, sample_elements, OperadElement, OperadRule, SampleBounds,
};
use crate::report::{Cell, Report};

/// Ranges scanned by a command. `max_v` counts internal vertices for operads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scan {
    pub max_ext: usize,
    pub max_v: usize,
    pub max_e: usize,
    pub max_legs: usize,
    pub max_b: usize,
}

impl Default for Scan {
    fn default() -> Self {
        Self { max_ext: 3, max_v: 5, max_e: 8, max_legs: 3, max_b: 3 }
    }
}

impl Scan {
    /// Store bounds that admit every bucket of the scan and the targets of its differentials.
    pub fn bounds(&self) -> Bounds {
        Bounds { max_v: self.max_v + self.max_ext + 1, max_e: self.max_e + 1, max_l: self.max_legs.max(8) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bucket {
    pub ext: usize,
    pub v: usize,
    pub e: usize,
    pub l: usize,
}

/// Buckets of `spec` within the scan; connected flavors also respect `max_b`.
pub fn buckets(spec: &ComplexSpec, scan: &Scan) -> Vec<Bucket> {
    let mut out = Vec::new();
    let f = spec.flavor;
    if f.is_operad() {
        for ext in 1..=scan.max_ext {
            for v in 0..=scan.max_v {
                for e in 0..=scan.max_e {
                    out.push(Bucket { ext, v, e, l: 0 });
                }
            }
        }
        return out;
    }
    let max_l = if f.has_legs() { scan.max_legs } else { 0 };
    for v in 1..=scan.max_v {
        let (lo, hi) = if f.connected() { (v - 1, (v - 1 + scan.max_b).min(scan.max_e)) } else { (0, scan.max_e) };
        for e in lo..=hi {
            for l in 0..=max_l {
                out.push(Bucket { ext: 0, v, e, l });
            }
        }
    }
    out
}

/// Apply `f` to every item on a pool of `jobs` workers (0: one per core), keeping order.
pub fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("worker pool");
    pool.install(|| items.par_iter().map(f).collect())
}

fn slice_graphs(
    engine: &Engine,
    spec: &ComplexSpec,
    b: Bucket,
) -> Result<Vec<crate::graph::DirectedGraph>, CheckError> {
    let slice = if spec.flavor.is_operad() {
        engine.store.operad_basis(spec, b.ext, b.v, b.e)?
    } else {
        engine.store.basis(spec, b.v, b.e, b.l)?
    };
    Ok(slice.classes().iter().map(|c| c.repr.clone()).collect())
}

/// Bucket sizes and degrees.
pub fn basis_report(engine: &Engine, spec: &ComplexSpec, scan: &Scan, jobs: usize) -> Result<Report, CheckError> {
    let mut report = Report::new("basis", &spec.conv().id(), &["flavor", "n", "ext", "v", "e", "l", "degree", "count"]);
    let all = buckets(spec, scan);
    let rows = par_map(jobs, &all, |&b| -> Result<Vec<Cell>, CheckError> {
        let slice = if spec.flavor.is_operad() {
            engine.store.operad_basis(spec, b.ext, b.v, b.e)?
        } else {
            engine.store.basis(spec, b.v, b.e, b.l)?
        };
        Ok(vec![
            spec.flavor.token().into(),
            spec.n.into(),
            b.ext.into(),
            b.v.into(),
            b.e.into(),
            b.l.into(),
            slice.degree().into(),
            slice.len().into(),
        ])
    });
    for row in rows {
        report.push(row?)?;
    }
    Ok(report)
}

/// Shape and rank of each differential matrix.
pub fn diff_report(
    engine: &Engine,
    spec: &ComplexSpec,
    scan: &Scan,
    field: Field,
    jobs: usize,
) -> Result<Report, CheckError> {
    if spec.flavor.is_operad() || spec.flavor.has_legs() {
        return Err(CheckError::Config(format!(
            "diff assembles matrices for leg-free graph complexes, not {}",
            spec.flavor
        )));
    }
    let mut report = Report::new(
        "diff",
        &spec.conv().id(),
        &["flavor", "n", "v", "e", "degree", "rows", "cols", "nnz", "rank", "field"],
    );
    let all = buckets(spec, scan);
    let rows = par_map(jobs, &all, |&b| -> Result<Vec<Cell>, CheckError> {
        let m = engine.differential_matrix(spec, b.v, b.e)?;
        let r = engine.rank(spec, b.v, b.e, field)?;
        Ok(vec![
            spec.flavor.token().into(),
            spec.n.into(),
            b.v.into(),
            b.e.into(),
            crate::homology::bucket_degree(spec, b.v, b.e).into(),
            m.rows.into(),
            m.cols.into(),
            m.nnz().into(),
            r.into(),
            field.to_string().into(),
        ])
    });
    for row in rows {
        report.push(row?)?;
    }
    Ok(report)
}

/// (b, d) cells of a connected complex whose buckets fit the scan.
pub fn cells(spec: &ComplexSpec, scan: &Scan, betti: Option<i64>, degree: Option<i64>) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in 0..=scan.max_b as i64 {
        if betti.is_some_and(|x| x != b) {
            continue;
        }
        for v in 1..scan.max_v as i64 {
            let d = v - 1 - (spec.n - 1) * b;
            if degree.is_some_and(|x| x != d) {
                continue;
            }
            if let Ok((v, e)) = resolve_bucket(spec, b, d) {
                if v < scan.max_v && e < scan.max_e {
                    out.push((b, d));
                }
            }
        }
    }
    out
}

/// Cohomology dimensions; with several fields every cell is computed over
/// each and disagreements are failures. Without fields, ranks are confirmed
/// over two primes and, for small matrices, the rationals.
pub fn cohomology_report(
    engine: &Engine,
    spec: &ComplexSpec,
    scan: &Scan,
    fields: &[Field],
    betti: Option<i64>,
    degree: Option<i64>,
    jobs: usize,
) -> Result<Report, CheckError> {
    resolve_bucket(spec, 0, 0).or_else(|e| match e {
        HomologyError::NoBucket { .. } => Ok((0, 0)),
        e => Err(e),
    })?;
    let mut report = Report::new(
        "cohomology",
        &spec.conv().id(),
        &["flavor", "n", "b", "d", "v", "e", "dim", "rank_in", "rank_out", "h", "field"],
    );
    let mut cells = cells(spec, scan, betti, degree);
    if let (Some(b), Some(d)) = (betti, degree) {
        if cells.is_empty() {
            // an explicitly requested cell is computed or fails loudly
            cells.push((b, d));
        }
    }
    let results = par_map(jobs, &cells, |&(b, d)| -> Result<Vec<crate::homology::CohomologyReport>, CheckError> {
        if fields.is_empty() {
            return Ok(vec![engine.cohomology_confirmed(spec, b, d)?]);
        }
        fields.iter().map(|&f| Ok(engine.cohomology_dim(spec, b, d, f)?)).collect()
    });
    for per_field in results {
        let per_field = per_field?;
        for r in &per_field {
            if r.h_dim != per_field[0].h_dim {
                report.fail(&format!("h(b={}, d={}) over {}", r.b, r.d, r.field), per_field[0].h_dim, r.h_dim);
            }
            report.push(vec![
                r.flavor.as_str().into(),
                r.n.into(),
                r.b.into(),
                r.d.into(),
                r.v.into(),
                r.e.into(),
                r.dim_mid.into(),
                r.rank_in.into(),
                r.rank_out.into(),
                r.h_dim.into(),
                r.field.as_str().into(),
            ])?;
        }
    }
    Ok(report)
}

/// `δ∘δ = 0` on every class of every bucket in the scan; for graph complexes
/// the product of assembled matrices is also checked when its target fits.
pub fn verify_d2_report(engine: &Engine, spec: &ComplexSpec, scan: &Scan, jobs: usize) -> Result<Report, CheckError> {
    let mut report = Report::new(
        "verify-d2",
        &spec.conv().id(),
        &["flavor", "n", "ext", "v", "e", "l", "classes", "nonzero_columns", "matrix_product"],
    );
    let all = buckets(spec, scan);
    let rows = par_map(jobs, &all, |&b| -> Result<(Bucket, usize, usize, Option<bool>), CheckError> {
        let f = spec.flavor;
        if f.is_operad() {
            let graphs = slice_graphs(engine, spec, b)?;
            let mut bad = 0;
            for g in &graphs {
                let x = OperadElement::from_graph(*spec, g)?;
                bad += usize::from(!operad_differential(&operad_differential(&x)?)?.is_zero());
            }
            Ok((b, graphs.len(), bad, None))
        } else if f.has_legs() {
            let graphs = slice_graphs(engine, spec, b)?;
            let mut bad = 0;
            for g in &graphs {
                let x = Cochain::from_graph(*spec, g);
                let dd = hat_differential(&hat_differential(&x, scan.max_legs)?, scan.max_legs)?;
                bad += usize::from(!vanishes_through(&dd, scan.max_legs));
            }
            Ok((b, graphs.len(), bad, None))
        } else {
            let r = engine.verify_d2(spec, b.v, b.e)?;
            let matrix = if b.v + 2 <= scan.max_v && b.e + 2 <= scan.max_e {
                Some(engine.verify_d2_matrices(spec, b.v, b.e)?)
            } else {
                None
            };
            Ok((b, r.columns, r.nonzero_columns, matrix))
        }
    });
    for row in rows {
        let (b, classes, bad, matrix) = row?;
        if bad > 0 {
            report.fail(&format!("d2 on {spec} ext={} V={} E={} L={}", b.ext, b.v, b.e, b.l), "0 nonzero columns", bad);
        }
        if matrix == Some(false) {
            report.fail(&format!("matrix product on {spec} V={} E={}", b.v, b.e), "zero", "nonzero");
        }
        let matrix: Cell = match matrix {
            Some(ok) => ok.into(),
            None => "-".into(),
        };
        report.push(vec![
            spec.flavor.token().into(),
            spec.n.into(),
            b.ext.into(),
            b.v.into(),
            b.e.into(),
            b.l.into(),
            classes.into(),
            bad.into(),
            matrix,
        ])?;
    }
    Ok(report)
}

/// Per-cell comparison of the oriented complex for `n` with the connected
/// complex for `n - 1`, over every cell whose buckets fit the scan on both sides.
pub fn comparison_report(engine: &Engine, n: i64, scan: &Scan, jobs: usize) -> Result<Report, CheckError> {
    if n < 2 {
        return Err(CheckError::Config(format!("verify-theorem1 needs n >= 2, got {n}")));
    }
    let or = ComplexSpec::new(Flavor::GCor, n);
    let fc = ComplexSpec::new(Flavor::FcGC, n - 1);
    let fc_cells = cells(&fc, scan, None, None);
    let both: Vec<(i64, i64)> = cells(&or, scan, None, None).into_iter().filter(|c| fc_cells.contains(c)).collect();
    let mut report = Report::new(
        "verify-theorem1",
        &format!("{}/{}", or.conv().id(), fc.conv().id()),
        &["n", "b", "d", "or_v", "or_e", "or_h", "fc_v", "fc_e", "fc_h", "equal"],
    );
    let results = par_map(jobs, &both, |&(b, d)| -> Result<_, CheckError> {
        Ok((engine.cohomology_confirmed(&or, b, d)?, engine.cohomology_confirmed(&fc, b, d)?))
    });
    for r in results {
        let (x, y) = r?;
        if x.h_dim != y.h_dim {
            report.fail(
                &format!("n={n} b={} d={}", x.b, x.d),
                format!("{} (from {fc})", y.h_dim),
                format!("{} in {or}", x.h_dim),
            );
        }
        report.push(vec![
            n.into(),
            x.b.into(),
            x.d.into(),
            x.v.into(),
            x.e.into(),
            x.h_dim.into(),
            y.v.into(),
            y.e.into(),
            y.h_dim.into(),
            (x.h_dim == y.h_dim).into(),
        ])?;
    }
    Ok(report)
}

/// The hairy map commutes with the differentials on every class with at most
/// `scan.max_v` vertices (terms compared through `scan.max_legs` legs), and
/// the corolla cochain is closed through `corolla_legs` legs.
pub fn hairy_report(ns: &[i64], scan: &Scan, corolla_legs: usize, jobs: usize) -> Result<Report, CheckError> {
    let mut report =
        Report::new("verify-prop32", &conventions_of(ns), &["n", "check", "v", "e", "max_legs", "classes", "failing"]);
    for &n in ns {
        let spec = ComplexSpec::new(Flavor::GCor, n);
        let mut all = Vec::new();
        for v in 2..=scan.max_v {
            for e in v..=(v - 1 + scan.max_b).min(scan.max_e) {
                all.push((v, e));
            }
        }
        let rows = par_map(jobs, &all, |&(v, e)| -> Result<(usize, usize), CheckError> {
            let mut bad = 0;
            let slice = enumerate_basis(&spec, v, e, 0)?;
            for class in slice.classes() {
                let x = Cochain::from_graph(spec, &class.repr);
                let lhs = hat_differential(&hairy_map(&x, scan.max_legs)?, scan.max_legs)?;
                let rhs = hairy_map(&differential(&x), scan.max_legs)?;
                bad += usize::from(!vanishes_through(&lhs.sub(&rhs)?, scan.max_legs));
            }
            Ok((slice.len(), bad))
        });
        for (&(v, e), row) in all.iter().zip(rows) {
            let (classes, bad) = row?;
            if bad > 0 {
                report.fail(&format!("chain map n={n} V={v} E={e}"), 0, bad);
            }
            report.push(vec![
                n.into(),
                "chain_map".into(),
                v.into(),
                e.into(),
                scan.max_legs.into(),
                classes.into(),
                bad.into(),
            ])?;
        }
        let d = hat_differential(&corolla_class(n, corolla_legs), corolla_legs)?;
        let closed = vanishes_through(&d, corolla_legs);
        if !closed {
            report.fail(&format!("corolla cochain closed n={n}"), "closed", "not closed");
        }
        report.push(vec![
            n.into(),
            "corolla_closed".into(),
            2usize.into(),
            1usize.into(),
            corolla_legs.into(),
            (corolla_legs - 1).into(),
            usize::from(!closed).into(),
        ])?;
    }
    Ok(report)
}

fn conventions_of(ns: &[i64]) -> String {
    let ids: Vec<String> = ns.iter().map(|&n| crate::sign::SignConvention::new(n).id()).collect();
    ids.join("/")
}

/// Whether `x` is a nonzero class: closed, and not in the image of `δ`.
fn class_status(engine: &Engine, x: &Cochain, v: usize, e: usize) -> Result<(bool, bool), CheckError> {
    let closed = differential(x).is_zero();
    if x.is_zero() || !closed {
        return Ok((closed, false));
    }
    let nf = engine.reduce_modulo_image(x, v, e)?;
    Ok((closed, nf.iter().any(|c| !c.is_zero())))
}

/// (flavor, n, length, alternating, expected class)
pub const WHEEL_CASES: [(Flavor, i64, usize, bool, bool); 8] = [
    (Flavor::FcGC, 2, 1, false, true),
    (Flavor::FcGC, 2, 3, false, false),
    (Flavor::FcGC, 2, 5, false, true),
    (Flavor::GCor, 3, 2, true, true),
    (Flavor::GCor, 3, 4, true, false),
    (Flavor::GCor, 3, 6, true, true),
    (Flavor::FcGC, 1, 3, false, true),
    (Flavor::GCor, 2, 4, true, true),
];

pub fn wheels_report(engine: &Engine) -> Result<Report, CheckError> {
    let mut report = Report::new(
        "wheels",
        &conventions_of(&[1, 2]),
        &["flavor", "n", "length", "degree", "nonzero", "closed", "class", "expected"],
    );
    for (flavor, n, len, alt, expected) in WHEEL_CASES {
        let x = wheel(n, len, alt)?;
        let spec = ComplexSpec::new(flavor, n);
        let degree = spec.n * (len as i64 - 1) - (spec.n - 1) * len as i64;
        let (closed, class) = class_status(engine, &x, len, len)?;
        if class != expected {
            report.fail(&format!("{}-wheel in {spec}", len), expected, class);
        }
        report.push(vec![
            flavor.token().into(),
            n.into(),
            len.into(),
            degree.into(),
            (!x.is_zero()).into(),
            closed.into(),
            class.into(),
            expected.into(),
        ])?;
    }
    Ok(report)
}

/// The four-vertex cocycle: kernel membership, coefficient magnitudes and its class.
pub fn shoikhet_report(engine: &Engine) -> Result<Report, CheckError> {
    let spec = ComplexSpec::new(Flavor::GCor, 2);
    let mut report = Report::new("shoikhet", &spec.conv().id(), &["item", "value"]);
    // errors unless the kernel on the three graphs is one-dimensional
    let s = shoikhet()?;
    for (key, _, c) in s.sorted_terms() {
        report.push(vec![format!("term {key}").into(), c.to_string().into()])?;
    }
    let mut mags: Vec<Q> = shoikhet_graphs().iter().map(|g| s.coefficient_of_raw(g).abs()).collect();
    mags.sort();
    let want = vec![qi(1), qi(1), qi(2)];
    if mags != want {
        report.fail("coefficient magnitudes", "1, 1, 2", format!("{mags:?}"));
    }
    let closed = differential(&s).is_zero();
    if !closed {
        report.fail("closed", "yes", "no");
    }
    let h = engine.cohomology_confirmed(&spec, 2, 1)?;
    if h.h_dim != 1 {
        report.fail("h(b=2, d=1)", 1, h.h_dim);
    }
    let (_, class) = class_status(engine, &s, 4, 5)?;
    if !class {
        report.fail("nonzero class", "yes", "no");
    }
    report.push(vec!["kernel_dim".into(), 1usize.into()])?;
    report.push(vec!["degree".into(), s.degree()?.unwrap_or(0).into()])?;
    report.push(vec!["closed".into(), closed.into()])?;
    report.push(vec!["nonzero_class".into(), class.into()])?;
    report.push(vec!["h(b=2,d=1)".into(), h.h_dim.into()])?;
    Ok(report)
}

/// Build the MC element through `target` vertices, check the residual, the
/// rescaled family and the obstruction table for `b <= max_b`.
pub fn mc_report(engine: &Engine, target: usize, max_b: i64) -> Result<Report, CheckError> {
    let spec = ComplexSpec::new(Flavor::GCor, 2);
    let mut report = Report::new("mc", &spec.conv().id(), &["item", "v", "value"]);
    // the first obstruction to extending m4 alone: ½[m4, m4] on seven vertices
    let init = mc_init()?;
    let half = init.residual(7)?;
    let closed = differential(&half).is_zero();
    let exact = closed && !class_status(engine, &half, 7, 10)?.1;
    if !closed || !exact {
        report.fail("half bracket of m4 at V=7", "closed and exact", format!("closed={closed} exact={exact}"));
    }
    report.push(vec!["half_bracket_terms".into(), 7usize.into(), half.len().into()])?;
    report.push(vec!["half_bracket_closed".into(), 7usize.into(), closed.into()])?;
    report.push(vec!["half_bracket_exact".into(), 7usize.into(), exact.into()])?;
    let state = match mc_run(engine, target)? {
        Extension::Extended(s) => s,
        Extension::Obstructed(o) => {
            report.fail(
                &format!("extension to V={}", o.v),
                "solvable",
                format!("obstructed ({} residual terms)", o.residual.len()),
            );
            report.push(vec!["obstructed_at".into(), o.v.into(), o.residual.len().into()])?;
            return Ok(report);
        }
    };
    // m_k with k < max_k is final; m_{max_k} is only fixed by the next step
    for k in 4..state.max_k {
        report.push(vec!["part_terms".into(), k.into(), state.part(k).len().into()])?;
    }
    for v in 1..=state.max_k {
        let r = state.residual(v)?;
        if !r.is_zero() {
            report.fail(&format!("residual at V={v}"), 0, format!("{} terms", r.len()));
        }
        report.push(vec!["residual_terms".into(), v.into(), r.len().into()])?;
    }
    for lambda in [0, 1, 2] {
        let clean = mc_family(&state, &qi(lambda)).is_ok();
        if !clean {
            report.fail(&format!("rescaled family at lambda={lambda}"), "clean", "dirty");
        }
        report.push(vec![format!("family_clean lambda={lambda}").into(), target.into(), clean.into()])?;
    }
    let table = obstruction_table(engine, 2, max_b)?;
    let mut h1 = 0;
    for row in &table {
        if row.d == 0 && row.h_dim != 0 {
            report.fail(&format!("H^0 at b={}", row.b), 0, row.h_dim);
        }
        if row.d == 1 {
            h1 += row.h_dim;
        }
        if let Some(c) = row.cited {
            if c != row.h_dim {
                report.fail(&format!("H^{} at b={}", row.d, row.b), c, row.h_dim);
            }
        }
        report.push(vec![format!("h b={} d={}", row.b, row.d).into(), row.v.into(), row.h_dim.into()])?;
    }
    if h1 != 1 {
        report.fail("total H^1", 1, h1);
    }
    report.push(vec!["h1_total".into(), 0usize.into(), h1.into()])?;
    Ok(report)
}

/// Differential, composition and generator checks in an operad flavor.
pub fn operad_report(spec: &ComplexSpec, scan: &Scan, jobs: usize) -> Result<Report, CheckError> {
    if !spec.flavor.is_operad() {
        return Err(CheckError::Config(format!("operad-check needs Graphs or Graphsor, not {}", spec.flavor)));
    }
    let engine = Engine::new(crate::cache::BasisStore::in_memory(scan.bounds()));
    let mut report = Report::new("operad-check", &spec.conv().id(), &["check", "n", "count", "failing"]);
    let d2 = verify_d2_report(&engine, spec, scan, jobs)?;
    let classes: i64 = d2.rows().iter().map(|r| if let Cell::Int(c) = r[6] { c } else { 0 }).sum();
    let bad: i64 = d2.rows().iter().map(|r| if let Cell::Int(c) = r[7] { c } else { 0 }).sum();
    let add = |report: &mut Report, check: &str, count: usize, failing: usize| -> Result<(), CheckError> {
        if failing > 0 {
            report.fail(check, 0, failing);
        }
        report.push(vec![check.into(), spec.n.into(), count.into(), failing.into()])?;
        Ok(())
    };
    add(&mut report, "d2", classes as usize, bad as usize)?;

    let small = sample_elements(spec, SampleBounds::new(2, 1, 2))?;
    add(&mut report, "associativity", small.len().pow(3), associativity_defects(&small)?)?;

    let left = sample_elements(spec, SampleBounds::new(2, 2, 3))?;
    let right = sample_elements(spec, SampleBounds::new(2, 1, 2))?;
    let ok = derivation_holds(&left, &right, OperadRule::frozen(spec.conv()))?;
    add(&mut report, "derivation", left.len() * right.len(), usize::from(!ok))?;

    let product = generator_image(*spec, "product", None)?;
    add(&mut report, "product_closed", 1, usize::from(!operad_differential(&product)?.is_zero()))?;

    if spec.flavor == Flavor::GraphsOr {
        let mu2 = generator_image(*spec, "mu", Some(2))?;
        add(&mut report, "mu2_closed", 1, usize::from(!operad_differential(&mu2)?.is_zero()))?;
        for big in 3..=4 {
            let ok = mu_boundary_is_quadratic(*spec, big)?;
            add(&mut report, &format!("mu{big}_boundary_quadratic"), 1, usize::from(!ok))?;
        }
        let xs = sample_elements(spec, SampleBounds::new(3, 2, 4))?;
        let mut bad = 0;
        for x in &xs {
            let p = bad_projection(x)?;
            bad += usize::from(bad_projection(&p)? != p);
            bad += usize::from(bad_projection(&operad_differential(&p)?)? != bad_projection(&operad_differential(x)?)?);
        }
        add(&mut report, "bad_projection", xs.len(), bad)?;
        let m = crate::named::mc_edge(spec.n, true);
        let mut bad = 0;
        for x in &xs {
            bad += usize::from(gc_action(&m, x)? != operad_differential(x)?);
        }
        add(&mut report, "edge_action_is_differential", xs.len(), bad)?;
    }
    Ok(report)
}

/// `stat`, `purge` or `verify` on a cache directory.
pub fn cache_report(cache: &BasisCache, action: &str) -> Result<Report, CheckError> {
    match action {
        "stat" => {
            let mut report =
                Report::new("cache stat", "-", &["file", "flavor", "n", "v", "e", "l", "count", "convention"]);
            for e in cache.entries()? {
                report.push(vec![
                    e.file.into(),
                    e.flavor.token().into(),
                    e.n.into(),
                    e.v.into(),
                    e.e.into(),
                    e.l.into(),
                    e.count.into(),
                    e.convention.into(),
                ])?;
            }
            Ok(report)
        }
        "purge" => {
            let mut report = Report::new("cache purge", "-", &["removed"]);
            report.push(vec![cache.purge()?.into()])?;
            Ok(report)
        }
        "verify" => {
            let mut report = Report::new("cache verify", "-", &["file", "ok", "reason"]);
            for o in cache.verify()? {
                if !o.ok {
                    report.fail(&o.file, "intact", o.reason.clone().unwrap_or_default());
                }
                report.push(vec![o.file.into(), o.ok.into(), o.reason.unwrap_or_else(|| "-".into()).into()])?;
            }
            Ok(report)
        }
        other => Err(CheckError::Config(format!("unknown cache action {other:?} (expected stat, purge or verify)"))),
    }
}
