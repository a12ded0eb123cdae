//! Sparse matrices and exact column reduction over prime fields and the rationals.
//!
//! Columns are reduced left to right against pivots keyed by their lowest
//! nonzero row in a fixed row order. Rows are ordered so that sparse rows
//! come last, which makes them the preferred pivots and keeps fill-in low.
//! The order is a function of the matrix alone, so results are reproducible.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cochain::Q;

pub const DEFAULT_PRIME: u64 = 32003;
pub const SECOND_PRIME: u64 = 46337;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Prime(u64),
    Rational,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "p{p}"),
            Field::Rational => f.write_str("Q"),
        }
    }
}

impl FromStr for Field {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("q") || s.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = s.strip_prefix('p').unwrap_or(s);
        let p: u64 = digits.parse().map_err(|_| format!("bad field {s:?}"))?;
        if p <= 10_000 || p >= 1 << 31 || !is_prime(p) {
            return Err(format!("field characteristic must be a prime in (10^4, 2^31), got {p}"));
        }
        Ok(Field::Prime(p))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Column-major sparse matrix with small exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    columns: Vec<Vec<(u32, Rational64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Build from triplets; duplicates are summed and zeros dropped.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational64)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mut acc: Vec<HashMap<u32, Rational64>> = vec![HashMap::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            *acc[c].entry(r as u32).or_insert_with(Rational64::zero) += v;
        }
        for (c, col) in acc.into_iter().enumerate() {
            let mut col: Vec<(u32, Rational64)> = col.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            col.sort_unstable_by_key(|e| e.0);
            m.columns[c] = col;
        }
        m
    }

    /// Set column `c` from (row, value) pairs with distinct rows.
    pub fn set_column(&mut self, c: usize, mut col: Vec<(u32, Rational64)>) {
        col.retain(|(_, v)| !v.is_zero());
        col.sort_unstable_by_key(|e| e.0);
        debug_assert!(col.windows(2).all(|w| w[0].0 != w[1].0));
        debug_assert!(col.iter().all(|&(r, _)| (r as usize) < self.rows));
        self.columns[c] = col;
    }

    pub fn column(&self, c: usize) -> &[(u32, Rational64)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Rational64)> + '_ {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
    }

    /// Matrix product `self * rhs`, with exact rational arithmetic.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for c in 0..rhs.cols {
            let mut acc: HashMap<u32, BigRational> = HashMap::new();
            for &(k, v) in &rhs.columns[c] {
                let v = to_big(v);
                for &(r, w) in &self.columns[k as usize] {
                    *acc.entry(r).or_insert_with(BigRational::zero) += &v * to_big(w);
                }
            }
            let col = acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(r, v)| (r, from_big(&v).expect("product entry fits in 64 bits")))
                .collect();
            out.set_column(c, col);
        }
        out
    }

    /// Text form: header `matrix <rows> <cols> <field>`, then `r c num/den` lines.
    pub fn to_text(&self, field: Field) -> String {
        let mut out = format!("matrix {} {} {}\n", self.rows, self.cols, field);
        let mut entries: Vec<_> = self.entries().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for (r, c, v) in entries {
            out.push_str(&format!("{} {} {}/{}\n", r, c, v.numer(), v.denom()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<(SparseMatrix, Field), String> {
        let mut lines = text.lines();
        let head: Vec<&str> = lines.next().ok_or("empty matrix file")?.split_whitespace().collect();
        if head.len() != 4 || head[0] != "matrix" {
            return Err("matrix header must be 'matrix <rows> <cols> <field>'".into());
        }
        let rows: usize = head[1].parse().map_err(|_| "bad row count")?;
        let cols: usize = head[2].parse().map_err(|_| "bad column count")?;
        let field: Field = head[3].parse()?;
        let mut entries = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(format!("bad matrix line {line:?}"));
            }
            let r: usize = parts[0].parse().map_err(|_| "bad row")?;
            let c: usize = parts[1].parse().map_err(|_| "bad column")?;
            let (n, d) = parts[2].split_once('/').ok_or("entry must be num/den")?;
            let n: i64 = n.parse().map_err(|_| "bad numerator")?;
            let d: i64 = d.parse().map_err(|_| "bad denominator")?;
            if d == 0 || r >= rows || c >= cols {
                return Err(format!("invalid entry {line:?}"));
            }
            entries.push((r, c, Rational64::new(n, d)));
        }
        Ok((SparseMatrix::from_entries(rows, cols, entries), field))
    }
}

pub fn to_big(v: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

pub fn from_big(v: &BigRational) -> Option<Rational64> {
    Some(Rational64::new(v.numer().to_i64()?, v.denom().to_i64()?))
}

/// Arithmetic of a field of coefficients.
pub trait FieldOps {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_q(&self, v: Rational64) -> Self::E;
    fn from_big(&self, v: &BigRational) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

#[derive(Clone, Copy, Debug)]
pub struct Fp(pub u64);

impl Fp {
    fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.0);
        n.mod_floor(&p).to_u64().expect("residue fits")
    }
}

impl FieldOps for Fp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_q(&self, v: Rational64) -> u64 {
        let p = self.0 as i128;
        let n = (*v.numer() as i128).rem_euclid(p) as u64;
        let d = (*v.denom() as i128).rem_euclid(p) as u64;
        assert!(d != 0, "denominator divisible by the characteristic");
        self.mul(&n, &self.inv(&d))
    }
    fn from_big(&self, v: &BigRational) -> u64 {
        let n = self.reduce_int(v.numer());
        let d = self.reduce_int(v.denom());
        assert!(d != 0, "denominator divisible by the characteristic");
        self.mul(&n, &self.inv(&d))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        let mut result = 1u64;
        let mut base = *a % self.0;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        result
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Rationals;

impl FieldOps for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_q(&self, v: Rational64) -> BigRational {
        to_big(v)
    }
    fn from_big(&self, v: &BigRational) -> BigRational {
        v.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

type SparseVec<E> = Vec<(u32, E)>;

/// `a + s*b` for sparse vectors sorted by position.
fn axpy<F: FieldOps>(f: &F, a: &SparseVec<F::E>, s: &F::E, b: &SparseVec<F::E>) -> SparseVec<F::E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(s, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(s, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Column reduction state.
pub struct Reduction<F: FieldOps> {
    field: F,
    /// row order: position of each row
    pos: Vec<u32>,
    /// pivot position -> column index
    pivots: HashMap<u32, usize>,
    reduced: Vec<SparseVec<F::E>>,
    /// column combinations (in positions of original columns); only when tracking
    combos: Option<Vec<SparseVec<F::E>>>,
}

impl<F: FieldOps> Reduction<F> {
    /// Reduce all columns of `m`. With `track`, remember how each reduced
    /// column is combined from original columns.
    pub fn new(field: F, m: &SparseMatrix, track: bool) -> Self {
        let pos = row_order(m);
        let mut red = Reduction {
            field,
            pos,
            pivots: HashMap::new(),
            reduced: Vec::with_capacity(m.cols),
            combos: if track { Some(Vec::with_capacity(m.cols)) } else { None },
        };
        for c in 0..m.cols {
            let col = red.convert(m.column(c));
            let combo = vec![(c as u32, red.field.from_q(Rational64::one()))];
            let (col, combo) = red.reduce_vec(col, combo);
            if let Some(&(low, _)) = col.last() {
                red.pivots.insert(low, c);
            }
            red.reduced.push(col);
            if let Some(cs) = red.combos.as_mut() {
                cs.push(combo);
            }
        }
        red
    }

    fn convert(&self, col: &[(u32, Rational64)]) -> SparseVec<F::E> {
        let mut v: SparseVec<F::E> = col
            .iter()
            .map(|&(r, x)| (self.pos[r as usize], self.field.from_q(x)))
            .filter(|(_, x)| !self.field.is_zero(x))
            .collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }

    fn reduce_vec(&self, mut col: SparseVec<F::E>, mut combo: SparseVec<F::E>) -> (SparseVec<F::E>, SparseVec<F::E>) {
        let f = &self.field;
        while let Some((low, val)) = col.last().cloned() {
            let Some(&p) = self.pivots.get(&low) else { break };
            let pcol = &self.reduced[p];
            let pval = &pcol.last().expect("pivot column is nonzero").1;
            let s = f.neg(&f.mul(&val, &f.inv(pval)));
            col = axpy(f, &col, &s, pcol);
            if let Some(cs) = &self.combos {
                combo = axpy(f, &combo, &s, &cs[p]);
            }
        }
        (col, combo)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Whether column `c` contributed a new pivot.
    pub fn is_pivot_column(&self, c: usize) -> bool {
        !self.reduced[c].is_empty()
    }

    /// Canonical representative of `b` modulo the column span: every entry
    /// at a pivot position is eliminated, from the highest position down.
    pub fn normal_form(&self, b: &[(u32, F::E)]) -> Vec<(u32, F::E)> {
        let f = &self.field;
        let inverse: HashMap<u32, u32> = self.pos.iter().enumerate().map(|(r, &p)| (p, r as u32)).collect();
        let mut col: SparseVec<F::E> = b.iter().map(|(r, v)| (self.pos[*r as usize], v.clone())).collect();
        col.sort_unstable_by_key(|e| e.0);
        let mut idx = col.len();
        while idx > 0 {
            let (p, val) = col[idx - 1].clone();
            if let Some(&c) = self.pivots.get(&p) {
                let pcol = &self.reduced[c];
                let pval = &pcol.last().expect("pivot column is nonzero").1;
                let s = f.neg(&f.mul(&val, &f.inv(pval)));
                col = axpy(f, &col, &s, pcol);
            }
            // entries above `p` are final; continue strictly below it
            idx = col.partition_point(|e| e.0 < p);
        }
        let mut out: Vec<(u32, F::E)> = col.into_iter().map(|(p, v)| (inverse[&p], v)).collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Kernel basis as combinations of columns, in column order.
    pub fn kernel(&self) -> Vec<SparseVec<F::E>> {
        let combos = self.combos.as_ref().expect("kernel needs tracked reduction");
        (0..self.reduced.len()).filter(|&c| self.reduced[c].is_empty()).map(|c| combos[c].clone()).collect()
    }

    /// Solve `M x = b` for `b` given as (row, value); `None` if inconsistent.
    pub fn solve(&self, b: &[(u32, F::E)]) -> Option<SparseVec<F::E>> {
        let combos = self.combos.as_ref().expect("solve needs tracked reduction");
        let f = &self.field;
        let mut col: SparseVec<F::E> = b.iter().map(|(r, v)| (self.pos[*r as usize], v.clone())).collect();
        col.sort_unstable_by_key(|e| e.0);
        let mut x: SparseVec<F::E> = Vec::new();
        while let Some((low, val)) = col.last().cloned() {
            let &p = self.pivots.get(&low)?;
            let pcol = &self.reduced[p];
            let pval = &pcol.last().expect("pivot column is nonzero").1;
            let s = f.mul(&val, &f.inv(pval));
            col = axpy(f, &col, &f.neg(&s), pcol);
            x = axpy(f, &x, &s, &combos[p]);
        }
        Some(x)
    }

    /// Whether `b` lies in the column span.
    pub fn in_span(&self, b: &[(u32, F::E)]) -> bool {
        let f = &self.field;
        let mut col: SparseVec<F::E> = b.iter().map(|(r, v)| (self.pos[*r as usize], v.clone())).collect();
        col.sort_unstable_by_key(|e| e.0);
        while let Some((low, val)) = col.last().cloned() {
            let Some(&p) = self.pivots.get(&low) else { return false };
            let pcol = &self.reduced[p];
            let pval = &pcol.last().expect("pivot column is nonzero").1;
            let s = f.neg(&f.mul(&val, &f.inv(pval)));
            col = axpy(f, &col, &s, pcol);
        }
        true
    }
}

/// Static row order: denser rows first, sparse rows last (preferred pivots).
fn row_order(m: &SparseMatrix) -> Vec<u32> {
    let mut count = vec![0usize; m.rows];
    for col in &m.columns {
        for &(r, _) in col {
            count[r as usize] += 1;
        }
    }
    let mut rows: Vec<usize> = (0..m.rows).collect();
    rows.sort_by(|&a, &b| count[b].cmp(&count[a]).then(a.cmp(&b)));
    let mut pos = vec![0u32; m.rows];
    for (i, &r) in rows.iter().enumerate() {
        pos[r] = i as u32;
    }
    pos
}

pub fn rank(m: &SparseMatrix, field: Field) -> usize {
    match field {
        Field::Prime(p) => Reduction::new(Fp(p), m, false).rank(),
        Field::Rational => Reduction::new(Rationals, m, false).rank(),
    }
}

/// Rational kernel basis, each vector as dense coefficients over columns.
pub fn rational_kernel(m: &SparseMatrix) -> Vec<Vec<Q>> {
    let red = Reduction::new(Rationals, m, true);
    red.kernel()
        .into_iter()
        .map(|v| {
            let mut dense = vec![Q::zero(); m.cols];
            for (c, x) in v {
                dense[c as usize] = x;
            }
            dense
        })
        .collect()
}

/// Rational solution of `m x = b`, or `None` when `b` is not in the image.
pub fn rational_solve(m: &SparseMatrix, b: &[(usize, Q)]) -> Option<Vec<Q>> {
    let red = Reduction::new(Rationals, m, true);
    let b: Vec<(u32, Q)> = b.iter().map(|(r, v)| (*r as u32, v.clone())).collect();
    let x = red.solve(&b)?;
    let mut dense = vec![Q::zero(); m.cols];
    for (c, v) in x {
        dense[c as usize] = v;
    }
    Some(dense)
}

/// Whether `b` lies in the image of `m` over a prime field.
pub fn in_image_mod_p(m: &SparseMatrix, b: &[(usize, Q)], p: u64) -> bool {
    let f = Fp(p);
    let red = Reduction::new(f, m, false);
    let b: Vec<(u32, u64)> = b.iter().map(|(r, v)| (*r as u32, f.from_big(v))).collect();
    red.in_span(&b)
}

/// Make a rational vector integral and primitive with a positive leading entry.
pub fn normalize_primitive(v: &mut [Q]) {
    let mut den = BigInt::one();
    for x in v.iter() {
        den = den.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if lead_negative {
            *x = -&*x;
        }
    }
    for (slot, x) in v.iter_mut().zip(ints) {
        *slot = Q::from_integer(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn trivial_ranks() {
        let z = SparseMatrix::zeros(3, 4);
        assert_eq!(rank(&z, Field::Prime(DEFAULT_PRIME)), 0);
        let id = SparseMatrix::from_entries(5, 5, (0..5).map(|i| (i, i, r(1))));
        for f in [Field::Prime(DEFAULT_PRIME), Field::Prime(SECOND_PRIME), Field::Rational] {
            assert_eq!(rank(&id, f), 5);
        }
    }

    #[test]
    fn rank_depends_on_characteristic_only_for_small_primes() {
        let m = SparseMatrix::from_entries(2, 2, vec![(0, 0, r(1)), (0, 1, r(1)), (1, 0, r(1)), (1, 1, r(-1))]);
        assert_eq!(rank(&m, Field::Rational), 2);
        assert_eq!(rank(&m, Field::Prime(DEFAULT_PRIME)), 2);
    }

    #[test]
    fn kernel_and_solve() {
        // columns: (1,1,0), (0,1,1), (1,2,1)
        let m = SparseMatrix::from_entries(
            3,
            3,
            vec![(0, 0, r(1)), (1, 0, r(1)), (1, 1, r(1)), (2, 1, r(1)), (0, 2, r(1)), (1, 2, r(2)), (2, 2, r(1))],
        );
        let ker = rational_kernel(&m);
        assert_eq!(ker.len(), 1);
        let mut k = ker[0].clone();
        normalize_primitive(&mut k);
        assert_eq!(k, vec![Q::from_integer(1.into()), Q::from_integer(1.into()), Q::from_integer((-1).into())]);
        let b =
            vec![(0usize, Q::from_integer(2.into())), (1, Q::from_integer(3.into())), (2, Q::from_integer(1.into()))];
        let x = rational_solve(&m, &b).unwrap();
        let mx =
            m.mul(&SparseMatrix::from_entries(3, 1, x.iter().enumerate().map(|(i, v)| (i, 0, from_big(v).unwrap()))));
        let got: Vec<(usize, usize, Rational64)> = mx.entries().collect();
        assert_eq!(got, vec![(0, 0, r(2)), (1, 0, r(3)), (2, 0, r(1))]);
        assert!(rational_solve(&m, &[(0, Q::from_integer(1.into()))]).is_none());
    }

    #[test]
    fn text_roundtrip() {
        let m = SparseMatrix::from_entries(2, 3, vec![(0, 2, Rational64::new(1, 2)), (1, 0, r(-3))]);
        let text = m.to_text(Field::Rational);
        assert_eq!(text, "matrix 2 3 Q\n0 2 1/2\n1 0 -3/1\n");
        assert_eq!(SparseMatrix::from_text(&text).unwrap(), (m, Field::Rational));
    }

    #[test]
    fn field_parsing() {
        assert_eq!("p32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert!("p101".parse::<Field>().is_err());
        assert!("p32004".parse::<Field>().is_err());
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
    }
}
