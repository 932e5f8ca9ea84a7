//! Exact dense linear algebra over Q and GF(p).
//!
//! GF(2) rows are bit-packed into `u64` words and eliminated with XOR. GF(p)
//! rows hold residues in `u32`. Rational rows are stored as integer
//! numerators over a common per-row denominator; elimination runs
//! fraction-free on `i64` and restarts on `BigInt` if any entry grows too
//! large, so results are always exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub const GF2: FieldSpec = FieldSpec::Prime(2);

    /// GF(p); `p` must be a prime below 2^31.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    pub fn is_gf2(self) -> bool {
        self == FieldSpec::GF2
    }
}

fn is_prime(p: u64) -> bool {
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

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `q`, `Q`, a bare prime such as `2`, or `p:<prime>`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldSpec> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t.strip_prefix("p:").unwrap_or(t);
        let p: u64 = digits.parse().map_err(|_| Error::Malformed(format!("unknown field {s:?}")))?;
        FieldSpec::prime(p)
    }
}

/// A field element, as returned by [`FMatrix::get`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Modular(u32),
}

impl Scalar {
    /// The image of an integer in `field`.
    pub fn from_int(field: FieldSpec, v: i64) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Modular(reduce_mod(v, p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v) => *v == 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Modular(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Row `num / den` with `den > 0` and `gcd(num_1, ..., num_n, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RatRow {
    num: Vec<BigInt>,
    den: BigInt,
}

impl RatRow {
    fn zeros(cols: usize) -> RatRow {
        RatRow { num: vec![BigInt::zero(); cols], den: BigInt::one() }
    }

    fn integral(num: Vec<BigInt>) -> RatRow {
        RatRow { num, den: BigInt::one() }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in &mut self.num {
                *x = -x.clone();
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |g, x| g.gcd(x));
        if !g.is_one() && !Zero::is_zero(&g) {
            self.den /= &g;
            for x in &mut self.num {
                *x /= &g;
            }
        }
    }

    fn get(&self, c: usize) -> BigRational {
        BigRational::new(self.num[c].clone(), self.den.clone())
    }

    fn set(&mut self, c: usize, q: &BigRational) {
        // bring everything over lcm(den, q.den)
        let l = self.den.lcm(q.denom());
        let scale = &l / &self.den;
        if !scale.is_one() {
            for x in &mut self.num {
                *x *= &scale;
            }
        }
        self.num[c] = q.numer() * (&l / q.denom());
        self.den = l;
        self.normalize();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Data {
    Bits(Vec<Vec<u64>>),
    Modular(Vec<Vec<u32>>),
    Rational(Vec<RatRow>),
}

/// A dense matrix over a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Data,
}

fn words(cols: usize) -> usize {
    cols.div_ceil(64)
}

fn reduce_mod(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

impl FMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> FMatrix {
        let data = match field {
            FieldSpec::Prime(2) => Data::Bits(vec![vec![0; words(cols)]; rows]),
            FieldSpec::Prime(_) => Data::Modular(vec![vec![0; cols]; rows]),
            FieldSpec::Rationals => Data::Rational(vec![RatRow::zeros(cols); rows]),
        };
        FMatrix { field, rows, cols, data }
    }

    pub fn identity(field: FieldSpec, n: usize) -> FMatrix {
        FMatrix::from_sparse_rows(field, n, (0..n).map(|i| vec![(i, 1)]))
    }

    /// Integer entries reduced into the field. Every row must have `cols` entries.
    pub fn from_int_rows(field: FieldSpec, cols: usize, rows: &[Vec<i64>]) -> Result<FMatrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ColumnMismatch(r.len(), cols));
        }
        Ok(FMatrix::from_sparse_rows(
            field,
            cols,
            rows.iter().map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c, v)).collect()),
        ))
    }

    /// Rows given as `(column, value)` lists. Panics on a column out of range.
    pub fn from_sparse_rows<I>(field: FieldSpec, cols: usize, rows: I) -> FMatrix
    where
        I: IntoIterator<Item = Vec<(usize, i64)>>,
    {
        let sparse: Vec<Vec<(usize, i64)>> = rows.into_iter().collect();
        let n = sparse.len();
        let data = match field {
            FieldSpec::Prime(2) => Data::Bits(
                sparse
                    .iter()
                    .map(|r| {
                        let mut w = vec![0u64; words(cols)];
                        for &(c, v) in r {
                            assert!(c < cols);
                            if v & 1 == 1 {
                                w[c / 64] ^= 1 << (c % 64);
                            }
                        }
                        w
                    })
                    .collect(),
            ),
            FieldSpec::Prime(p) => Data::Modular(
                sparse
                    .iter()
                    .map(|r| {
                        let mut row = vec![0u32; cols];
                        for &(c, v) in r {
                            row[c] = ((row[c] as u64 + reduce_mod(v, p) as u64) % p as u64) as u32;
                        }
                        row
                    })
                    .collect(),
            ),
            FieldSpec::Rationals => Data::Rational(
                sparse
                    .iter()
                    .map(|r| {
                        let mut row = RatRow::zeros(cols);
                        for &(c, v) in r {
                            row.num[c] += v;
                        }
                        row
                    })
                    .collect(),
            ),
        };
        FMatrix { field, rows: n, cols, data }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols);
        match &self.data {
            Data::Bits(rows) => Scalar::Modular((rows[r][c / 64] >> (c % 64) & 1) as u32),
            Data::Modular(rows) => Scalar::Modular(rows[r][c]),
            Data::Rational(rows) => Scalar::Rational(rows[r].get(c)),
        }
    }

    pub fn set_int(&mut self, r: usize, c: usize, v: i64) {
        self.set_rational(r, c, &BigRational::from_integer(BigInt::from(v)));
    }

    /// Set an entry from a rational; over GF(p) the denominator must be invertible.
    pub fn set_rational(&mut self, r: usize, c: usize, q: &BigRational) {
        assert!(r < self.rows && c < self.cols);
        let field = self.field;
        let to_mod = |p: u32| -> u32 {
            let pm = BigInt::from(p);
            let n = (q.numer() % &pm + &pm) % &pm;
            let d = (q.denom() % &pm + &pm) % &pm;
            let d = d.to_u32().expect("residue fits");
            assert!(d != 0, "denominator not invertible in {field}");
            ((n.to_u64().expect("residue fits") * inv_mod(d, p) as u64) % p as u64) as u32
        };
        match &mut self.data {
            Data::Bits(rows) => {
                let bit = to_mod(2) as u64;
                let w = &mut rows[r][c / 64];
                *w = (*w & !(1 << (c % 64))) | bit << (c % 64);
            }
            Data::Modular(rows) => {
                let FieldSpec::Prime(p) = field else { unreachable!() };
                rows[r][c] = to_mod(p);
            }
            Data::Rational(rows) => rows[r].set(c, q),
        }
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Bits(rows) => rows.iter().flatten().all(|&w| w == 0),
            Data::Modular(rows) => rows.iter().flatten().all(|&v| v == 0),
            Data::Rational(rows) => rows.iter().all(|r| r.num.iter().all(Zero::is_zero)),
        }
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set_scalar(c, r, &v);
                }
            }
        }
        t
    }

    fn set_scalar(&mut self, r: usize, c: usize, v: &Scalar) {
        match (v, &mut self.data) {
            (Scalar::Modular(x), Data::Bits(rows)) => {
                let w = &mut rows[r][c / 64];
                *w = (*w & !(1 << (c % 64))) | ((*x as u64) & 1) << (c % 64);
            }
            (Scalar::Modular(x), Data::Modular(rows)) => rows[r][c] = *x,
            (Scalar::Rational(q), Data::Rational(_)) => self.set_rational(r, c, q),
            _ => panic!("scalar from another field"),
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.cols {
            return Err(Error::ColumnMismatch(self.cols, other.cols));
        }
        assert_eq!(self.field, other.field, "matrices over different fields");
        let data = match (&self.data, &other.data) {
            (Data::Bits(a), Data::Bits(b)) => Data::Bits(a.iter().chain(b).cloned().collect()),
            (Data::Modular(a), Data::Modular(b)) => Data::Modular(a.iter().chain(b).cloned().collect()),
            (Data::Rational(a), Data::Rational(b)) => Data::Rational(a.iter().chain(b).cloned().collect()),
            _ => unreachable!(),
        };
        Ok(FMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Keep the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> FMatrix {
        let data = match &self.data {
            Data::Bits(a) => Data::Bits(idx.iter().map(|&i| a[i].clone()).collect()),
            Data::Modular(a) => Data::Modular(idx.iter().map(|&i| a[i].clone()).collect()),
            Data::Rational(a) => Data::Rational(idx.iter().map(|&i| a[i].clone()).collect()),
        };
        FMatrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    /// Send column `j` to column `map[j]` of a matrix with `new_cols` columns.
    pub fn embed_columns(&self, map: &[usize], new_cols: usize) -> FMatrix {
        assert_eq!(map.len(), self.cols);
        let data = match &self.data {
            Data::Bits(a) => Data::Bits(
                a.iter()
                    .map(|row| {
                        let mut w = vec![0u64; words(new_cols)];
                        for (j, &t) in map.iter().enumerate() {
                            if row[j / 64] >> (j % 64) & 1 == 1 {
                                w[t / 64] |= 1 << (t % 64);
                            }
                        }
                        w
                    })
                    .collect(),
            ),
            Data::Modular(a) => Data::Modular(
                a.iter()
                    .map(|row| {
                        let mut out = vec![0u32; new_cols];
                        for (j, &t) in map.iter().enumerate() {
                            out[t] = row[j];
                        }
                        out
                    })
                    .collect(),
            ),
            Data::Rational(a) => Data::Rational(
                a.iter()
                    .map(|row| {
                        let mut out = RatRow::zeros(new_cols);
                        for (j, &t) in map.iter().enumerate() {
                            out.num[t] = row.num[j].clone();
                        }
                        out.den = row.den.clone();
                        out
                    })
                    .collect(),
            ),
        };
        FMatrix { field: self.field, rows: self.rows, cols: new_cols, data }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows {
            return Err(Error::ColumnMismatch(self.cols, other.rows));
        }
        assert_eq!(self.field, other.field, "matrices over different fields");
        let data = match (&self.data, &other.data) {
            (Data::Bits(a), Data::Bits(b)) => Data::Bits(
                a.iter()
                    .map(|row| {
                        let mut acc = vec![0u64; words(other.cols)];
                        for (j, brow) in b.iter().enumerate() {
                            if row[j / 64] >> (j % 64) & 1 == 1 {
                                acc.iter_mut().zip(brow).for_each(|(x, y)| *x ^= y);
                            }
                        }
                        acc
                    })
                    .collect(),
            ),
            (Data::Modular(a), Data::Modular(b)) => {
                let p = self.field.characteristic() as u64;
                Data::Modular(
                    a.iter()
                        .map(|row| {
                            (0..other.cols)
                                .map(|c| {
                                    (row.iter().zip(b).map(|(&x, br)| x as u64 * br[c] as u64 % p).sum::<u64>() % p)
                                        as u32
                                })
                                .collect()
                        })
                        .collect(),
                )
            }
            (Data::Rational(a), Data::Rational(b)) => {
                // entry c = (1 / (den * L)) * sum_j num_j * bnum_jc * (L / bden_j)
                let l = b.iter().fold(BigInt::one(), |l, br| l.lcm(&br.den));
                let scales: Vec<BigInt> = b.iter().map(|br| &l / &br.den).collect();
                Data::Rational(
                    a.iter()
                        .map(|row| {
                            let mut out = RatRow::zeros(other.cols);
                            for (j, br) in b.iter().enumerate() {
                                if Zero::is_zero(&row.num[j]) {
                                    continue;
                                }
                                let f = &row.num[j] * &scales[j];
                                for (o, x) in out.num.iter_mut().zip(&br.num) {
                                    if !Zero::is_zero(x) {
                                        *o += &f * x;
                                    }
                                }
                            }
                            out.den = &row.den * &l;
                            out.normalize();
                            out
                        })
                        .collect(),
                )
            }
            _ => unreachable!(),
        };
        Ok(FMatrix { field: self.field, rows: self.rows, cols: other.cols, data })
    }

    pub fn rank(&self) -> usize {
        match &self.data {
            Data::Bits(rows) => {
                let mut w = rows.clone();
                bits_echelon(&mut w, self.cols)
            }
            Data::Modular(rows) => {
                let mut w = rows.clone();
                mod_echelon(&mut w, self.cols, self.field.characteristic())
            }
            Data::Rational(rows) => {
                let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.num.clone()).collect();
                IntRows::echelon(ints, self.cols).1
            }
        }
    }

    /// A basis of the row space, as echelon rows.
    pub fn row_basis(&self) -> FMatrix {
        let (data, rank) = match &self.data {
            Data::Bits(rows) => {
                let mut w = rows.clone();
                let r = bits_echelon(&mut w, self.cols);
                w.truncate(r);
                (Data::Bits(w), r)
            }
            Data::Modular(rows) => {
                let mut w = rows.clone();
                let r = mod_echelon(&mut w, self.cols, self.field.characteristic());
                w.truncate(r);
                (Data::Modular(w), r)
            }
            Data::Rational(rows) => {
                let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.num.clone()).collect();
                let (reduced, r) = IntRows::echelon(ints, self.cols);
                let mut big = reduced.into_big();
                big.truncate(r);
                (Data::Rational(big.into_iter().map(RatRow::integral).collect()), r)
            }
        };
        FMatrix { field: self.field, rows: rank, cols: self.cols, data }
    }

    /// Basis of `{x : x * self = 0}`, one vector per row (`rows()` columns).
    pub fn left_null_space(&self) -> FMatrix {
        let (m, n) = (self.rows, self.cols);
        let data = match &self.data {
            Data::Bits(rows) => {
                let width = n + m;
                let mut w: Vec<Vec<u64>> = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut a = vec![0u64; words(width)];
                        for c in 0..n {
                            if row[c / 64] >> (c % 64) & 1 == 1 {
                                a[c / 64] |= 1 << (c % 64);
                            }
                        }
                        a[(n + i) / 64] |= 1 << ((n + i) % 64);
                        a
                    })
                    .collect();
                let r = bits_echelon(&mut w, n);
                Data::Bits(
                    w[r..]
                        .iter()
                        .map(|a| {
                            let mut out = vec![0u64; words(m)];
                            for j in 0..m {
                                if a[(n + j) / 64] >> ((n + j) % 64) & 1 == 1 {
                                    out[j / 64] |= 1 << (j % 64);
                                }
                            }
                            out
                        })
                        .collect(),
                )
            }
            Data::Modular(rows) => {
                let mut w: Vec<Vec<u32>> = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut a = row.clone();
                        a.resize(n + m, 0);
                        a[n + i] = 1;
                        a
                    })
                    .collect();
                let r = mod_echelon(&mut w, n, self.field.characteristic());
                Data::Modular(w[r..].iter().map(|a| a[n..].to_vec()).collect())
            }
            Data::Rational(rows) => {
                // track combinations of the stored rows num_i / den_i
                let ints: Vec<Vec<BigInt>> = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut a = row.num.clone();
                        a.resize(n + m, BigInt::zero());
                        a[n + i] = row.den.clone();
                        a
                    })
                    .collect();
                let (reduced, r) = IntRows::echelon(ints, n);
                let big = reduced.into_big();
                Data::Rational(big[r..].iter().map(|a| RatRow::integral(a[n..].to_vec())).collect())
            }
        };
        let rows = match &data {
            Data::Bits(v) => v.len(),
            Data::Modular(v) => v.len(),
            Data::Rational(v) => v.len(),
        };
        FMatrix { field: self.field, rows, cols: m, data }
    }
}

/// `dim(rowspace(a) + rowspace(b))`.
pub fn dim_sum(a: &FMatrix, b: &FMatrix) -> Result<usize> {
    Ok(a.vstack(b)?.rank())
}

/// `dim(rowspace(a) ∩ rowspace(b))`.
pub fn dim_intersection(a: &FMatrix, b: &FMatrix) -> Result<usize> {
    let s = dim_sum(a, b)?;
    Ok(a.rank() + b.rank() - s)
}

/// Forward elimination on bit rows over the first `pivot_cols` columns.
/// Returns the rank; pivot rows end up first, zero rows (in the pivot
/// columns) after them.
fn bits_echelon(rows: &mut [Vec<u64>], pivot_cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..pivot_cols {
        if rank == rows.len() {
            break;
        }
        let (wi, bit) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][wi] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[wi] & bit != 0 {
                row[wi..].iter_mut().zip(&pivot[wi..]).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

fn mod_echelon(rows: &mut [Vec<u32>], pivot_cols: usize, p: u32) -> usize {
    let p64 = p as u64;
    let mut rank = 0;
    for c in 0..pivot_cols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p) as u64;
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = row[c] as u64 * inv % p64;
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = ((*x as u64 + p64 - f * y as u64 % p64) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

/// Integer types usable for fraction-free elimination.
trait IntEntry: Clone {
    fn is_nil(&self) -> bool;
    fn gcd_with(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
    /// `a * x - b * y`, or `None` on overflow.
    fn comb(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
}

const SMALL_LIMIT: i64 = 1 << 62;

impl IntEntry for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn comb(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        let r = a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)?;
        (r.abs() < SMALL_LIMIT).then_some(r)
    }
}

impl IntEntry for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn comb(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
}

/// Fraction-free forward elimination; rows are kept primitive. `None` on overflow.
fn int_echelon<T: IntEntry>(rows: &mut [Vec<T>], pivot_cols: usize) -> Option<usize> {
    let mut rank = 0;
    for c in 0..pivot_cols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][c].is_nil()) else {
            continue;
        };
        rows.swap(rank, piv);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[c].is_nil() {
                continue;
            }
            let g = pivot[c].gcd_with(&row[c]);
            let a = pivot[c].div_exact(&g);
            let b = row[c].div_exact(&g);
            for j in c..row.len() {
                if pivot[j].is_nil() && row[j].is_nil() {
                    continue;
                }
                let z = row[j].clone();
                row[j] = T::comb(&a, &z, &b, &pivot[j])?;
            }
            make_primitive(row);
        }
        rank += 1;
    }
    Some(rank)
}

fn make_primitive<T: IntEntry>(row: &mut [T]) {
    let mut g: Option<T> = None;
    for x in row.iter().filter(|x| !x.is_nil()) {
        let next = match &g {
            None => x.gcd_with(x),
            Some(h) => h.gcd_with(x),
        };
        if next.is_unit() {
            return;
        }
        g = Some(next);
    }
    if let Some(g) = g {
        for x in row.iter_mut() {
            if !x.is_nil() {
                *x = x.div_exact(&g);
            }
        }
    }
}

enum IntRows {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

impl IntRows {
    /// Echelon form over Q of integer rows, trying `i64` first.
    fn echelon(rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> (IntRows, usize) {
        let small: Option<Vec<Vec<i64>>> =
            rows.iter().map(|r| r.iter().map(|x| x.to_i64().filter(|v| v.abs() < SMALL_LIMIT)).collect()).collect();
        if let Some(mut s) = small {
            if let Some(rank) = int_echelon(&mut s, pivot_cols) {
                return (IntRows::Small(s), rank);
            }
        }
        let mut big = rows;
        let rank = int_echelon(&mut big, pivot_cols).expect("BigInt arithmetic cannot overflow");
        (IntRows::Big(big), rank)
    }

    fn into_big(self) -> Vec<Vec<BigInt>> {
        match self {
            IntRows::Small(s) => s.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
            IntRows::Big(b) => b,
        }
    }
}
