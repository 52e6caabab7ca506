//! Prime-field scalars, vectors, matrices and invertible maps.
//!
//! Vectors of `F_q^n` are also addressed by a dense index in `0..q^n` whose
//! base-`q` digit `i` is coordinate `i` (coordinate 0 least significant). For
//! `q = 2` the index of a vector is exactly its support bitmask, which is what
//! the exhaustive oracles iterate over. The public enumeration order is still
//! lexicographic by entries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};

/// Largest `n` supported by the compact column representation of linear maps.
pub const MAX_MAP_N: usize = 8;

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    q: u32,
}

impl TryFrom<u32> for Field {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        Field::new(q)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.q
    }
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        // u8-sized scalars keep the add tables small; desk scale never needs more.
        if !is_prime(q) || q > 251 {
            return Err(Error::NotPrime(q));
        }
        Ok(Field { q })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.q - a) % self.q
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a % self.q != 0);
        let mut result = 1u64;
        let mut base = (a % self.q) as u64;
        let mut e = self.q - 2;
        let q = self.q as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        result as u32
    }
}

/// An element of `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqVector {
    field: Field,
    entries: Vec<u32>,
}

impl FqVector {
    pub fn new(q: u32, entries: Vec<u32>) -> Result<Self> {
        let field = Field::new(q)?;
        if let Some(bad) = entries.iter().find(|&&e| e >= q) {
            return Err(Error::Parse(format!("entry {bad} outside F_{q}")));
        }
        Ok(FqVector { field, entries })
    }

    pub fn zero(field: Field, n: usize) -> Self {
        FqVector { field, entries: vec![0; n] }
    }

    /// The standard basis vector `e_i` (0-based).
    pub fn unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.entries[i] = 1;
        v
    }

    /// Parses a digit string such as `"1011"`, first character = coordinate 1.
    pub fn parse(q: u32, digits: &str) -> Result<Self> {
        let entries = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in vector {digits:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FqVector::new(q, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// 0-based indices of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Support as a bitmask, bit `i` = coordinate `i`.
    pub fn support_mask(&self) -> u64 {
        assert!(self.len() <= 64, "support mask needs n <= 64");
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    fn check_compatible(&self, other: &FqVector) -> Result<()> {
        if self.field != other.field || self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "vectors over F_{}^{} and F_{}^{}",
                self.q(),
                self.len(),
                other.q(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FqVector) -> Result<FqVector> {
        self.check_compatible(other)?;
        let f = self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(FqVector { field: f, entries })
    }

    pub fn sub(&self, other: &FqVector) -> Result<FqVector> {
        self.check_compatible(other)?;
        let f = self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(FqVector { field: f, entries })
    }

    pub fn scale(&self, c: u32) -> FqVector {
        let f = self.field;
        FqVector { field: f, entries: self.entries.iter().map(|&a| f.mul(a, c % f.q)).collect() }
    }

    /// Packs a binary vector into a word, bit `i` = coordinate `i`.
    pub fn to_bits(&self) -> Option<u64> {
        (self.q() == 2 && self.len() <= 63).then(|| self.support_mask())
    }

    pub fn from_bits(bits: u64, n: usize) -> Self {
        assert!(n <= 63);
        let field = Field { q: 2 };
        FqVector { field, entries: (0..n).map(|i| ((bits >> i) & 1) as u32).collect() }
    }

    pub fn digit_string(&self) -> String {
        self.entries.iter().map(|e| char::from_digit(*e, 36).unwrap_or('?')).collect()
    }
}

impl fmt::Display for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q() <= 10 {
            f.write_str(&self.digit_string())
        } else {
            write!(f, "{:?}", self.entries)
        }
    }
}

/// `vec_add`: componentwise sum.
pub fn vec_add(a: &FqVector, b: &FqVector) -> Result<FqVector> {
    a.add(b)
}

/// `F_q^n` with dense vector indexing and precomputed supports.
#[derive(Debug, Clone)]
pub struct Space {
    field: Field,
    n: usize,
    size: usize,
    pow: Vec<usize>,
    supports: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n
    }
}
impl Eq for Space {}

impl Space {
    pub fn new(n: usize, q: u32, caps: &Caps) -> Result<Self> {
        let field = Field::new(q)?;
        if n > 32 {
            return Err(Error::CapExceeded { what: "vector length", size: n as u128, cap: 32 });
        }
        let size = (q as u128).pow(n as u32);
        Caps::check("vector enumeration", size, caps.vectors)?;
        let size = size as usize;
        let mut pow = Vec::with_capacity(n + 1);
        let mut p = 1usize;
        for _ in 0..=n {
            pow.push(p);
            p = p.saturating_mul(q as usize);
        }
        let supports = (0..size)
            .map(|mut x| {
                let mut m = 0u32;
                for i in 0..n {
                    if x % q as usize != 0 {
                        m |= 1 << i;
                    }
                    x /= q as usize;
                }
                m
            })
            .collect();
        let mut space = Space { field, n, size, pow, supports, add_table: None };
        if q > 2 && size <= 256 {
            let mut t = vec![0u16; size * size];
            for a in 0..size {
                for b in 0..size {
                    t[a * size + b] = space.add_slow(a, b) as u16;
                }
            }
            space.add_table = Some(t);
        }
        Ok(space)
    }

    /// Convenience constructor with default caps.
    pub fn with_default_caps(n: usize, q: u32) -> Result<Self> {
        Space::new(n, q, &Caps::default())
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `q^n`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn digit(&self, x: usize, i: usize) -> u32 {
        ((x / self.pow[i]) % self.q() as usize) as u32
    }

    /// Index of `e_i` scaled by `c`.
    #[inline]
    pub fn unit(&self, i: usize) -> usize {
        self.pow[i]
    }

    #[inline]
    pub fn support(&self, x: usize) -> u32 {
        self.supports[x]
    }

    pub fn index_of(&self, v: &FqVector) -> Result<usize> {
        if v.field() != self.field || v.len() != self.n {
            return Err(Error::Dimension(format!(
                "vector over F_{}^{} used in F_{}^{}",
                v.q(),
                v.len(),
                self.q(),
                self.n
            )));
        }
        Ok(v.entries().iter().enumerate().map(|(i, &e)| e as usize * self.pow[i]).sum())
    }

    pub fn vector(&self, x: usize) -> FqVector {
        FqVector { field: self.field, entries: (0..self.n).map(|i| self.digit(x, i)).collect() }
    }

    fn add_slow(&self, a: usize, b: usize) -> usize {
        let q = self.q() as usize;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in 0..self.n {
            out += ((a % q + b % q) % q) * self.pow[i];
            a /= q;
            b /= q;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.q() == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[a * self.size + b] as usize
        } else {
            self.add_slow(a, b)
        }
    }

    pub fn scale(&self, c: u32, a: usize) -> usize {
        let c = c % self.q();
        match c {
            0 => 0,
            1 => a,
            _ => {
                let q = self.q() as usize;
                let mut a = a;
                let mut out = 0;
                for i in 0..self.n {
                    out += ((a % q) * c as usize % q) * self.pow[i];
                    a /= q;
                }
                out
            }
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        self.scale(self.q() - 1, a)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// All indices in lexicographic order of their entry sequences.
    pub fn lex_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).map(move |r| {
            // r read as a base-q numeral with coordinate 0 most significant.
            let mut x = 0;
            let mut r = r;
            for i in (0..self.n).rev() {
                x += (r % self.q() as usize) * self.pow[i];
                r /= self.q() as usize;
            }
            x
        })
    }

    /// Applies a map given by the images of the basis vectors.
    #[inline]
    pub fn apply_cols(&self, cols: &[u32], x: usize) -> usize {
        if self.q() == 2 {
            let mut out = 0;
            let mut m = x;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                out ^= cols[i] as usize;
                m &= m - 1;
            }
            return out;
        }
        let q = self.q() as usize;
        let mut out = 0;
        let mut x = x;
        let mut i = 0;
        while x != 0 {
            let d = (x % q) as u32;
            if d != 0 {
                out = self.add(out, self.scale(d, cols[i] as usize));
            }
            x /= q;
            i += 1;
        }
        out
    }

    /// Indices of all vectors whose support lies inside `mask`.
    pub fn vectors_within(&self, mask: u32) -> Vec<usize> {
        (0..self.size).filter(|&x| self.supports[x] & !mask == 0).collect()
    }
}

/// `enumerate_vectors`: all `q^n` vectors in lexicographic order.
pub fn enumerate_vectors(n: usize, q: u32, caps: &Caps) -> Result<impl Iterator<Item = FqVector>> {
    let space = Space::new(n, q, caps)?;
    let order: Vec<usize> = space.lex_indices().collect();
    Ok(order.into_iter().map(move |x| space.vector(x)))
}

/// A dense matrix over `F_q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FqMatrix {
    pub fn new(q: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        let field = Field::new(q)?;
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= q) {
            return Err(Error::Parse(format!("entry {bad} outside F_{q}")));
        }
        Ok(FqMatrix { field, rows, cols, entries })
    }

    pub fn from_rows(q: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("row of length {} in a matrix with {cols} columns", r.len())));
        }
        FqMatrix::new(q, rows.len(), cols, rows.concat())
    }

    pub fn from_vectors(field: Field, n: usize, rows: &[FqVector]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * n);
        for r in rows {
            if r.len() != n || r.field() != field {
                return Err(Error::Dimension("generator row does not match the ambient space".into()));
            }
            entries.extend_from_slice(r.entries());
        }
        Ok(FqMatrix { field, rows: rows.len(), cols: n, entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FqMatrix { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.field.q;
    }

    pub fn row(&self, r: usize) -> FqVector {
        FqVector { field: self.field, entries: self.entries[r * self.cols..(r + 1) * self.cols].to_vec() }
    }

    pub fn row_vectors(&self) -> Vec<FqVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> FqVector {
        FqVector { field: self.field, entries: (0..self.rows).map(|r| self.get(r, c)).collect() }
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &FqVector) -> Result<FqVector> {
        if v.len() != self.cols || v.field() != self.field {
            return Err(Error::Dimension(format!("{}x{} matrix applied to a length-{} vector", self.rows, self.cols, v.len())));
        }
        let f = self.field;
        let entries = (0..self.rows)
            .map(|r| (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.get(r, c), v.entries()[c]))))
            .collect();
        Ok(FqVector { field: f, entries })
    }

    /// Reduced row echelon form (zero rows dropped) and its pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        self.rref_with_order(&(0..self.cols).collect::<Vec<_>>())
    }

    /// Row reduction choosing pivots by scanning columns in `order`.
    pub(crate) fn rref_with_order(&self, order: &[usize]) -> (FqMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for &c in order {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if p != row {
                for k in 0..m.cols {
                    m.entries.swap(p * m.cols + k, row * m.cols + k);
                }
            }
            let inv = f.inv(m.get(row, c));
            for k in 0..m.cols {
                let v = f.mul(m.get(row, k), inv);
                m.set(row, k, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for k in 0..m.cols {
                    let v = f.sub(m.get(r, k), f.mul(factor, m.get(row, k)));
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            row += 1;
        }
        m.entries.truncate(row * m.cols);
        m.rows = row;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{ x : self · xᵀ = 0 }`.
    pub fn null_space(&self) -> FqMatrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FqMatrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(r.get(pr, fc)));
            }
        }
        out
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &FqMatrix) -> bool {
        self.cols == other.cols && self.field == other.field && self.rref().0 == other.rref().0
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        let mut aug = FqMatrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = FqMatrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Some(inv)
    }
}

impl Serialize for FqMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::io::MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FqMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = crate::io::MatrixJson::deserialize(d)?;
        j.try_into().map_err(serde::de::Error::custom)
    }
}

/// `null_space`.
pub fn null_space(g: &FqMatrix) -> FqMatrix {
    g.null_space()
}

/// A linear map `F_q^n → F_q^n` acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    matrix: FqMatrix,
    invertible: bool,
}

impl LinearMap {
    pub fn new(matrix: FqMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::Dimension(format!("linear map needs a square matrix, got {}x{}", matrix.rows(), matrix.cols())));
        }
        let invertible = matrix.rank() == matrix.rows();
        Ok(LinearMap { matrix, invertible })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        LinearMap { matrix: FqMatrix::identity(field, n), invertible: true }
    }

    /// Builds the map sending `e_j` to `images[j]`.
    pub fn from_images(field: Field, images: &[FqVector]) -> Result<Self> {
        let n = images.len();
        let mut m = FqMatrix::zeros(field, n, n);
        for (j, img) in images.iter().enumerate() {
            if img.len() != n || img.field() != field {
                return Err(Error::Dimension("image vector does not match the map dimension".into()));
            }
            for i in 0..n {
                m.set(i, j, img.entries()[i]);
            }
        }
        LinearMap::new(m)
    }

    pub(crate) fn from_cols(space: &Space, cols: &[u32]) -> Self {
        let images: Vec<FqVector> = cols.iter().map(|&c| space.vector(c as usize)).collect();
        LinearMap::from_images(space.field(), &images).expect("columns match the space")
    }

    pub(crate) fn cols(&self, space: &Space) -> [u32; MAX_MAP_N] {
        assert!(self.n() <= MAX_MAP_N);
        let mut out = [0u32; MAX_MAP_N];
        for j in 0..self.n() {
            out[j] = space.index_of(&self.matrix.column(j)).expect("map matches space") as u32;
        }
        out
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    /// `T(e_j)`.
    pub fn image_of_unit(&self, j: usize) -> FqVector {
        self.matrix.column(j)
    }

    pub fn apply(&self, v: &FqVector) -> Result<FqVector> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        let m = self.matrix.mul(&other.matrix)?;
        Ok(LinearMap { matrix: m, invertible: self.invertible && other.invertible })
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.matrix.inverse().map(|m| LinearMap { matrix: m, invertible: true })
    }
}

/// Serialized as its matrix; columns are the images of the basis vectors.
impl Serialize for LinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LinearMap::new(FqMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `∏_{i<n} (q^n − q^i)`.
pub fn gl_order(n: usize, q: u32) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Depth-first enumeration of invertible maps as column-index tuples,
/// columns chosen in increasing index order.
pub(crate) struct ColumnTuples {
    space: Space,
    cols: Vec<u32>,
    // spans[j] = all vectors in the span of the first j columns.
    spans: Vec<Vec<usize>>,
    in_span: Vec<u32>,
    started: bool,
    done: bool,
}

impl ColumnTuples {
    pub(crate) fn new(space: Space) -> Self {
        let mut in_span = vec![0u32; space.size()];
        in_span[0] = 1;
        ColumnTuples {
            cols: Vec::with_capacity(space.n()),
            spans: vec![vec![0]],
            // in_span[x] = depth+1 at which x entered the span, 0 = not in span.
            in_span,
            started: false,
            done: space.n() == 0,
            space,
        }
    }

    fn push(&mut self, c: usize) {
        let depth = self.cols.len();
        let q = self.space.q();
        let prev = &self.spans[depth];
        let mut next = Vec::with_capacity(prev.len() * q as usize);
        for a in 0..q {
            let ac = self.space.scale(a, c);
            for &y in prev {
                let z = self.space.add(y, ac);
                next.push(z);
                if self.in_span[z] == 0 {
                    self.in_span[z] = depth as u32 + 2;
                }
            }
        }
        self.cols.push(c as u32);
        self.spans.push(next);
    }

    fn pop(&mut self) -> Option<usize> {
        let c = self.cols.pop()? as usize;
        let depth = self.cols.len();
        for &z in &self.spans[depth + 1] {
            if self.in_span[z] == depth as u32 + 2 {
                self.in_span[z] = 0;
            }
        }
        self.spans.pop();
        Some(c)
    }

    // Extends from the current prefix with the smallest candidates >= start.
    fn fill(&mut self, mut start: usize) -> bool {
        while self.cols.len() < self.space.n() {
            match (start..self.space.size()).find(|&c| self.in_span[c] == 0) {
                Some(c) => {
                    self.push(c);
                    start = 0;
                }
                None => match self.pop() {
                    Some(c) => start = c + 1,
                    None => return false,
                },
            }
        }
        true
    }
}

impl Iterator for ColumnTuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            if !self.started && self.space.n() == 0 {
                self.started = true;
                return Some(Vec::new());
            }
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.fill(0)
        } else {
            let last = self.pop().expect("full tuple");
            self.fill(last + 1)
        };
        if ok {
            Some(self.cols.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// `invertible_maps`: every element of `GL(n, q)` exactly once.
pub fn invertible_maps(n: usize, q: u32, caps: &Caps) -> Result<impl Iterator<Item = LinearMap>> {
    let order = gl_order(n, q);
    Caps::check("GL(n,q) enumeration", order, caps.gl)?;
    let space = Space::new(n, q, caps)?;
    let field = space.field();
    let n = space.n();
    let decode = space.clone();
    Ok(ColumnTuples::new(space).map(move |cols| {
        let images: Vec<FqVector> = cols.iter().map(|&c| decode.vector(c as usize)).collect();
        debug_assert_eq!(images.len(), n);
        LinearMap::from_images(field, &images).expect("columns match the space")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: u32, s: &str) -> FqVector {
        FqVector::parse(q, s).unwrap()
    }

    #[test]
    fn field_rejects_composites() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(9).is_err());
        assert!(Field::new(7).is_ok());
        let f = Field::new(5).unwrap();
        for a in 1..5 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn vec_add_examples() {
        assert_eq!(vec_add(&v(2, "10"), &v(2, "01")).unwrap(), v(2, "11"));
        assert_eq!(vec_add(&v(3, "12"), &v(3, "22")).unwrap(), v(3, "01"));
        let a = v(3, "2101");
        assert_eq!(vec_add(&a, &FqVector::zero(a.field(), 4)).unwrap(), a);
        assert!(vec_add(&v(2, "10"), &v(2, "101")).is_err());
        assert!(vec_add(&v(2, "10"), &v(3, "10")).is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(v(2, "1011").support(), vec![0, 2, 3]);
        assert!(v(2, "0000").support().is_empty());
        assert_eq!(v(3, "020").support(), vec![1]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let caps = Caps::default();
        let all: Vec<String> = enumerate_vectors(2, 2, &caps).unwrap().map(|v| v.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        let all: Vec<String> = enumerate_vectors(1, 3, &caps).unwrap().map(|v| v.to_string()).collect();
        assert_eq!(all, ["0", "1", "2"]);
        assert_eq!(enumerate_vectors(3, 2, &caps).unwrap().count(), 8);
        let tiny = Caps { vectors: 4, ..Caps::default() };
        assert!(matches!(enumerate_vectors(3, 2, &tiny), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn index_round_trip_and_binary_masks() {
        let s = Space::with_default_caps(3, 3).unwrap();
        for x in 0..s.size() {
            assert_eq!(s.index_of(&s.vector(x)).unwrap(), x);
        }
        let b = Space::with_default_caps(4, 2).unwrap();
        for x in 0..16 {
            assert_eq!(b.support(x) as usize, x);
            assert_eq!(b.vector(x).to_bits().unwrap() as usize, x);
        }
    }

    #[test]
    fn null_space_examples() {
        let g = FqMatrix::from_rows(2, 2, &[vec![1, 1]]).unwrap();
        let ns = null_space(&g);
        assert_eq!(ns.rows(), 1);
        assert_eq!(ns.row(0), v(2, "11"));

        let id = FqMatrix::identity(Field::new(3).unwrap(), 3);
        assert_eq!(null_space(&id).rows(), 0);

        let g = FqMatrix::from_rows(2, 3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let ns = null_space(&g);
        assert_eq!(ns.rows(), 1);
        assert_eq!(ns.row(0), v(2, "111"));
        // G · (1,1,1)ᵀ = 0 by hand.
        assert!(g.mul_vec(&v(2, "111")).unwrap().is_zero());
    }

    #[test]
    fn rref_is_idempotent() {
        let g = FqMatrix::from_rows(3, 3, &[vec![2, 1, 0], vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let (r, _) = g.rref();
        assert_eq!(r.rref().0, r);
    }

    #[test]
    fn gl_counts() {
        let caps = Caps::default();
        assert_eq!(invertible_maps(2, 2, &caps).unwrap().count(), 6);
        assert_eq!(invertible_maps(1, 3, &caps).unwrap().count(), 2);
        assert_eq!(invertible_maps(2, 3, &caps).unwrap().count(), 48);
        let small = Caps { gl: 10, ..Caps::default() };
        assert!(matches!(invertible_maps(2, 3, &small), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn gl_counts_match_closed_form() {
        let caps = Caps::default();
        for q in [2u32, 3, 5] {
            for n in 1..=3 {
                if gl_order(n, q) > 2_000_000 {
                    continue;
                }
                let maps: Vec<LinearMap> = invertible_maps(n, q, &caps).unwrap().collect();
                assert_eq!(maps.len() as u128, gl_order(n, q), "GL({n},{q})");
                assert!(maps.iter().all(|m| m.is_invertible()));
            }
        }
        // GL(3,5) is the largest case above; check distinctness on a smaller one.
        let maps: std::collections::HashSet<LinearMap> = invertible_maps(3, 2, &caps).unwrap().collect();
        assert_eq!(maps.len(), 168);
    }

    #[test]
    fn inverse_and_compose() {
        let f = Field::new(3).unwrap();
        let m = LinearMap::new(FqMatrix::from_rows(3, 2, &[vec![1, 2], vec![0, 2]]).unwrap()).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv).unwrap(), LinearMap::identity(f, 2));
        let sing = LinearMap::new(FqMatrix::from_rows(3, 2, &[vec![1, 2], vec![2, 1]]).unwrap()).unwrap();
        assert!(!sing.is_invertible());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn apply_cols_matches_matrix() {
        let s = Space::with_default_caps(3, 3).unwrap();
        let m = LinearMap::new(FqMatrix::from_rows(3, 3, &[vec![1, 2, 0], vec![0, 2, 1], vec![1, 0, 1]]).unwrap()).unwrap();
        let cols = m.cols(&s);
        for x in 0..s.size() {
            let direct = s.index_of(&m.apply(&s.vector(x)).unwrap()).unwrap();
            assert_eq!(s.apply_cols(&cols, x), direct);
        }
    }
}
