//! Checks shared by the property suites and the acceptance run. Each returns
//! the number of cases examined, or a description of the first mismatch.

#![allow(dead_code)]

use gcomplex::cache::{BasisStore, Bounds};
use gcomplex::calculus::{bracket, differential, genus_rescale};
use gcomplex::canon::brute_force_form;
use gcomplex::cochain::{qi, Cochain};
use gcomplex::enumerate::oracle_basis;
use gcomplex::homology::Engine;
use gcomplex::matrix::{Field, DEFAULT_PRIME, SECOND_PRIME};
use gcomplex::{
    canonical_form, enumerate_basis, enumerate_operad_basis, ComplexSpec, DirectedGraph, Flavor, SignConvention,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest edge-multiset count the brute-force oracle is asked to scan.
const ORACLE_BUDGET: u64 = 400_000;

fn multiset_count(kinds: u64, k: u64) -> u64 {
    // C(kinds + k - 1, k)
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (kinds + i) / (i + 1);
    }
    acc
}

fn oracle_cost(spec: &ComplexSpec, nv: usize, e: usize, l: usize) -> u64 {
    let pairs = if spec.directed() { nv * nv } else { nv * (nv + 1) / 2 } as u64;
    let legs = if l > 0 { multiset_count(nv as u64, l as u64) } else { 1 };
    multiset_count(pairs, e as u64).saturating_mul(legs)
}

/// Fast enumeration equals the brute-force oracle on every bucket with at
/// most `max_v` vertices whose oracle scan fits the budget.
pub fn oracle_equivalence(max_v: usize) -> Result<usize, String> {
    let mut checked = 0;
    for flavor in Flavor::ALL {
        for n in [1i64, 2] {
            let spec = ComplexSpec::new(flavor, n);
            if flavor.is_operad() {
                for ext in 1..=2 {
                    for v in 0..=2 {
                        for e in 0..=4 {
                            if oracle_cost(&spec, ext + v, e, 0) > ORACLE_BUDGET {
                                continue;
                            }
                            let fast = enumerate_operad_basis(&spec, ext, v, e).map_err(|err| err.to_string())?;
                            if fast != oracle_basis(&spec, ext, v, e, 0) {
                                return Err(format!("{spec} ext={ext} V={v} E={e}"));
                            }
                            checked += 1;
                        }
                    }
                }
                continue;
            }
            let max_l = if flavor.has_legs() { 2 } else { 0 };
            for v in 1..=max_v {
                for e in 0..=2 * v {
                    for l in 0..=max_l {
                        if oracle_cost(&spec, v, e, l) > ORACLE_BUDGET {
                            continue;
                        }
                        let fast = enumerate_basis(&spec, v, e, l).map_err(|err| err.to_string())?;
                        if fast != oracle_basis(&spec, 0, v, e, l) {
                            return Err(format!("{spec} V={v} E={e} L={l}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Fast canonical form agrees with the all-permutations reference on `g`.
pub fn sign_consistent(g: &DirectedGraph, n: i64, directed: bool) -> Result<(), String> {
    let conv = SignConvention::new(n);
    let fast = canonical_form(g, conv, directed);
    let slow = brute_force_form(g, conv, directed);
    if fast.is_zero() != slow.is_zero() {
        return Err(format!("{g} n={n} directed={directed}: zero {} vs {}", fast.is_zero(), slow.is_zero()));
    }
    if !fast.is_zero() {
        let via = canonical_form(&slow.graph, conv, directed);
        if via.graph != fast.graph || fast.sign != slow.sign * via.sign {
            return Err(format!("{g} n={n} directed={directed}: representatives or signs disagree"));
        }
    }
    Ok(())
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> DirectedGraph {
    let nv = rng.gen_range(1..=max_v);
    let ne = rng.gen_range(0..=max_e);
    let edges = (0..ne).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nv))).collect();
    DirectedGraph::new(nv, edges).expect("indices in range")
}

/// Sign consistency on `samples` seeded random graphs with at most five vertices.
pub fn sign_consistency(seed: u64, samples: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let g = random_graph(&mut rng, 5, 7);
        for n in [1, 2] {
            for directed in [false, true] {
                sign_consistent(&g, n, directed)?;
            }
        }
    }
    Ok(samples * 4)
}

/// A random combination of basis classes from one bucket.
pub fn random_cochain(rng: &mut ChaCha8Rng, spec: ComplexSpec, v: usize, e: usize, terms: usize) -> Cochain {
    let slice = enumerate_basis(&spec, v, e, 0).expect("small bucket");
    let mut x = Cochain::zero(spec);
    let classes: Vec<_> = slice.classes().iter().collect();
    for class in classes.choose_multiple(rng, terms) {
        x.add_canonical(class.repr.clone(), &qi(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    x
}

fn degree(x: &Cochain) -> i64 {
    x.degree().expect("homogeneous").unwrap_or(0)
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Graded antisymmetry `[x,y] = -(-1)^{|x||y|}[y,x]`.
pub fn antisymmetry(x: &Cochain, y: &Cochain) -> Result<(), String> {
    let xy = bracket(x, y).map_err(|e| e.to_string())?;
    let yx = bracket(y, x).map_err(|e| e.to_string())?;
    let s = sign(degree(x) * degree(y));
    if xy.add(&yx.scale(&qi(s))).map_err(|e| e.to_string())?.is_zero() {
        Ok(())
    } else {
        Err(format!("antisymmetry fails for\n{}\n{}", x.to_text(), y.to_text()))
    }
}

/// Graded Jacobi identity in its cyclic form.
pub fn jacobi(x: &Cochain, y: &Cochain, z: &Cochain) -> Result<(), String> {
    let (dx, dy, dz) = (degree(x), degree(y), degree(z));
    let br = |a: &Cochain, b: &Cochain| bracket(a, b).map_err(|e| e.to_string());
    let t1 = br(x, &br(y, z)?)?.scale(&qi(sign(dx * dz)));
    let t2 = br(y, &br(z, x)?)?.scale(&qi(sign(dy * dx)));
    let t3 = br(z, &br(x, y)?)?.scale(&qi(sign(dz * dy)));
    let sum = t1.add(&t2).and_then(|s| s.add(&t3)).map_err(|e| e.to_string())?;
    if sum.is_zero() {
        Ok(())
    } else {
        Err(format!("Jacobi fails ({} terms) for\n{}\n{}\n{}", sum.len(), x.to_text(), y.to_text(), z.to_text()))
    }
}

/// `δ` is a derivation of the bracket and squares to zero.
pub fn derivation(x: &Cochain, y: &Cochain) -> Result<(), String> {
    let br = |a: &Cochain, b: &Cochain| bracket(a, b).map_err(|e| e.to_string());
    let lhs = differential(&br(x, y)?);
    let rhs = br(&differential(x), y)?
        .add(&br(x, &differential(y))?.scale(&qi(sign(degree(x)))))
        .map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("derivation fails for\n{}\n{}", x.to_text(), y.to_text()));
    }
    if !differential(&differential(x)).is_zero() {
        return Err(format!("d^2 != 0 on\n{}", x.to_text()));
    }
    Ok(())
}

/// Rescaling by `λ^b` is compatible with the bracket. Loop orders add under
/// insertion of connected graphs; a disconnected insertion can close fewer loops.
pub fn rescale_compatible(x: &Cochain, y: &Cochain, lambda: i64) -> Result<(), String> {
    let l = qi(lambda);
    let lhs = genus_rescale(&bracket(x, y).map_err(|e| e.to_string())?, &l);
    let rhs = bracket(&genus_rescale(x, &l), &genus_rescale(y, &l)).map_err(|e| e.to_string())?;
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("rescale by {lambda} is not a bracket map"))
    }
}

/// Seeded bracket identities on small cochains of the ambient complexes.
pub fn bracket_identities(seed: u64, samples: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let buckets = [(2, 1), (2, 2), (3, 2), (3, 3), (3, 4)];
    let mut count = 0;
    for flavor in [Flavor::FcGC, Flavor::FcGCor, Flavor::FGC] {
        for n in [1, 2] {
            let spec = ComplexSpec::new(flavor, n);
            for _ in 0..samples {
                let pick = |rng: &mut ChaCha8Rng| {
                    let (v, e) = *buckets.choose(rng).expect("nonempty");
                    random_cochain(rng, spec, v, e, 2)
                };
                let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                antisymmetry(&x, &y)?;
                jacobi(&x, &y, &z)?;
                derivation(&x, &y)?;
                if flavor.connected() {
                    rescale_compatible(&x, &y, rng.gen_range(0..=3))?;
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Every differential rank with at most `max_v` source vertices and loop
/// order at most `max_b` agrees over both primes and the rationals.
pub fn field_independence(flavors: &[(Flavor, i64)], max_v: usize, max_b: usize) -> Result<usize, String> {
    let engine = Engine::new(BasisStore::in_memory(Bounds { max_v: max_v + 1, max_e: max_v + max_b + 1, max_l: 0 }));
    let mut checked = 0;
    for &(flavor, n) in flavors {
        let spec = ComplexSpec::new(flavor, n);
        for v in 1..=max_v {
            for e in v - 1..=v - 1 + max_b {
                let rank = |f: Field| engine.rank(&spec, v, e, f).map_err(|err| err.to_string());
                let ranks =
                    [rank(Field::Prime(DEFAULT_PRIME))?, rank(Field::Prime(SECOND_PRIME))?, rank(Field::Rational)?];
                if ranks[0] != ranks[1] || ranks[0] != ranks[2] {
                    return Err(format!("{spec} V={v} E={e}: ranks {ranks:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Euler characteristic of the chain spaces equals that of cohomology.
pub fn euler_consistency(spec: ComplexSpec, max_b: i64) -> Result<usize, String> {
    let engine =
        Engine::new(BasisStore::in_memory(Bounds { max_v: 2 * max_b as usize, max_e: 3 * max_b as usize, max_l: 0 }));
    for b in 2..=max_b {
        for field in [Field::Prime(DEFAULT_PRIME), Field::Rational] {
            let (chain, h) = engine.euler_characteristics(&spec, b, field).map_err(|e| e.to_string())?;
            if chain != h {
                return Err(format!("{spec} b={b} over {field}: chi {chain} vs {h}"));
            }
        }
    }
    Ok(max_b as usize - 1)
}
