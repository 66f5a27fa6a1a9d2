//! Dense matrices over an exact field.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::rng::Rng;

/// Row-major dense matrix. Entries are always in canonical form for `F`.
#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<_> = self.row(r).iter().map(|e| self.field.format(e)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// The elementary matrix with a single one at `(i, j)` (zero-based).
    pub fn unit(field: &F, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.set(i, j, field.one());
        m
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer rows, reduced into the field.
    pub fn from_i64_rows(field: &F, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter()
                .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    /// Every entry drawn with [`Field::random`].
    pub fn random(field: &F, rows: usize, cols: usize, rng: &mut Rng) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<F::Elem> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Ok(Self { data, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Ok(Self { data, ..self.clone_shape() })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self { data, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Self {
        Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut exp: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(&self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let ech = crate::linalg::rref(&aug);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, ech.reduced.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Copy of the block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut b = Self::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    /// Writes `src` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j).clone());
            }
        }
    }
}

/// A matrix whose field was chosen at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMat {
    Q(Mat<Rationals>),
    Fp(Mat<PrimeField>),
}

impl AnyMat {
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyMat::Q(m) => m.field().spec(),
            AnyMat::Fp(m) => m.field().spec(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMat::Q(m) => m.shape(),
            AnyMat::Fp(m) => m.shape(),
        }
    }

    /// Canonical text form of every entry, row by row.
    pub fn text_rows(&self) -> Vec<Vec<alloc::string::String>> {
        fn rows<F: Field>(m: &Mat<F>) -> Vec<Vec<alloc::string::String>> {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|e| m.field().format(e)).collect())
                .collect()
        }
        match self {
            AnyMat::Q(m) => rows(m),
            AnyMat::Fp(m) => rows(m),
        }
    }

    /// Parses text entries over `spec`.
    pub fn parse_rows(spec: FieldSpec, rows: &[Vec<alloc::string::String>]) -> Result<Self> {
        fn build<F: Field>(f: &F, rows: &[Vec<alloc::string::String>]) -> Result<Mat<F>> {
            let parsed = rows
                .iter()
                .map(|row| row.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Mat::from_rows(f, parsed)
        }
        Ok(match spec {
            FieldSpec::Rationals => AnyMat::Q(build(&Rationals, rows)?),
            FieldSpec::Prime(p) => AnyMat::Fp(build(&PrimeField::new(p)?, rows)?),
        })
    }
}

impl From<Mat<Rationals>> for AnyMat {
    fn from(m: Mat<Rationals>) -> Self {
        AnyMat::Q(m)
    }
}

impl From<Mat<PrimeField>> for AnyMat {
    fn from(m: Mat<PrimeField>) -> Self {
        AnyMat::Fp(m)
    }
}

/// Conversion between a generic `Mat<F>` and [`AnyMat`].
pub trait DynField: Field {
    fn wrap(m: Mat<Self>) -> AnyMat;
    fn unwrap(m: &AnyMat) -> Option<&Mat<Self>>;
}

impl DynField for Rationals {
    fn wrap(m: Mat<Self>) -> AnyMat {
        AnyMat::Q(m)
    }
    fn unwrap(m: &AnyMat) -> Option<&Mat<Self>> {
        match m {
            AnyMat::Q(m) => Some(m),
            AnyMat::Fp(_) => None,
        }
    }
}

impl DynField for PrimeField {
    fn wrap(m: Mat<Self>) -> AnyMat {
        AnyMat::Fp(m)
    }
    fn unwrap(m: &AnyMat) -> Option<&Mat<Self>> {
        match m {
            AnyMat::Fp(m) => Some(m),
            AnyMat::Q(_) => None,
        }
    }
}

/// Runs `$body` with `$f` bound to the concrete field named by `$spec`.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            $crate::field::FieldSpec::Rationals => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldSpec::Prime(p) => {
                let $f = $crate::field::PrimeField::new(p)?;
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_power() {
        let f = Rationals;
        let x = Mat::from_i64_rows(&f, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        let x2 = x.mul(&x).unwrap();
        assert_eq!(x2, Mat::unit(&f, 3, 0, 2));
        assert!(x.pow(3).unwrap().is_zero());
        assert_eq!(x.pow(0).unwrap(), Mat::identity(&f, 3));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = PrimeField::new(7).unwrap();
        let g = Mat::from_i64_rows(&f, &[&[2, 1], &[1, 1]]).unwrap();
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi).unwrap(), Mat::identity(&f, 2));
        let s = Mat::from_i64_rows(&f, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn shape_errors() {
        let f = Rationals;
        let a = Mat::zeros(&f, 2, 3);
        let b = Mat::zeros(&f, 2, 3);
        assert!(a.mul(&b).is_err());
        assert!(a.add(&Mat::zeros(&f, 3, 2)).is_err());
        assert!(Mat::from_vec(&f, 2, 2, vec![f.zero(); 3]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let f = Rationals;
        let m = Mat::from_rows(&f, vec![vec![f.parse("1/2").unwrap(), f.from_i64(-3)]]).unwrap();
        let any = AnyMat::Q(m.clone());
        let back = AnyMat::parse_rows(FieldSpec::Rationals, &any.text_rows()).unwrap();
        assert_eq!(back, any);
    }
}
