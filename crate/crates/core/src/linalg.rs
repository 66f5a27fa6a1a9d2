//! Row reduction, kernels, spans and linear solves.
//!
//! Pivot choice is fixed: columns are scanned left to right and the topmost
//! usable row wins, so the reduced form is identical on every platform.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mat::Mat;

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<F: Field> {
    pub reduced: Mat<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref<F: Field>(m: &Mat<F>) -> Echelon<F> {
    let f = m.field().clone();
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<F::Elem>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let Some(found) = (prow..rows).find(|&r| !f.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(prow, found);
        let inv = f.inv(&a[prow][col]).expect("pivot is nonzero");
        if !f.is_one(&a[prow][col]) {
            for e in a[prow][col..].iter_mut() {
                *e = f.mul(e, &inv);
            }
        }
        let pivot_row = core::mem::take(&mut a[prow]);
        for (r, row) in a.iter_mut().enumerate() {
            if r == prow || f.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (e, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                f.sub_mul_assign(e, &factor, p);
            }
        }
        a[prow] = pivot_row;
        pivots.push(col);
        prow += 1;
    }
    let reduced = Mat::from_vec(&f, rows, cols, a.into_iter().flatten().collect())
        .expect("shape preserved");
    Echelon {
        rank: pivots.len(),
        reduced,
        pivots,
    }
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    let mut span = SpanBuilder::new(m.field(), m.cols());
    for i in 0..m.rows() {
        span.insert(m.row(i).to_vec());
    }
    span.dim()
}

/// A basis of `{v : M v = 0}`, one vector per free column.
pub fn nullspace<F: Field>(m: &Mat<F>) -> Vec<Vec<F::Elem>> {
    let f = m.field();
    let cols = m.cols();
    let ech = rref(m);
    let mut is_pivot = alloc::vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(cols - ech.rank);
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = alloc::vec![f.zero(); cols];
        v[free] = f.one();
        for (i, &p) in ech.pivots.iter().enumerate() {
            v[p] = f.neg(ech.reduced.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// Dimension of the linear span of equally-shaped matrices.
pub fn span_dim<F: Field>(vs: &[Mat<F>]) -> Result<usize> {
    let Some(first) = vs.first() else {
        return Ok(0);
    };
    let mut span = SpanBuilder::new(first.field(), first.rows() * first.cols());
    for v in vs {
        if v.field() != first.field() {
            return Err(Error::FieldMismatch);
        }
        if v.shape() != first.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?} in span",
                v.shape(),
                first.shape()
            )));
        }
        span.insert(v.as_slice().to_vec());
    }
    Ok(span.dim())
}

/// One solution of `M x = b` with free variables set to zero, or `None`.
pub fn solve<F: Field>(m: &Mat<F>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
    let f = m.field();
    let (rows, cols) = m.shape();
    if b.len() != rows {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side has {} entries, expected {rows}",
            b.len()
        )));
    }
    let mut aug = Mat::zeros(f, rows, cols + 1);
    aug.set_block(0, 0, m);
    for (i, e) in b.iter().enumerate() {
        aug.set(i, cols, e.clone());
    }
    let ech = rref(&aug);
    if ech.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = alloc::vec![f.zero(); cols];
    for (i, &p) in ech.pivots.iter().enumerate() {
        x[p] = ech.reduced.get(i, cols).clone();
    }
    Ok(Some(x))
}

/// `M v` for a column vector `v`.
pub fn mat_vec<F: Field>(m: &Mat<F>, v: &[F::Elem]) -> Vec<F::Elem> {
    let f = m.field();
    (0..m.rows())
        .map(|i| {
            m.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                if f.is_zero(a) || f.is_zero(b) {
                    acc
                } else {
                    f.add(&acc, &f.mul(a, b))
                }
            })
        })
        .collect()
}

/// Incrementally maintained basis of a subspace of `F^len`.
///
/// Stored rows are in semi-echelon form: each row is monic at its pivot and
/// vanishes at the pivots of every row inserted before it.
#[derive(Clone, Debug)]
pub struct SpanBuilder<F: Field> {
    field: F,
    len: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> SpanBuilder<F> {
    pub fn new(field: &F, len: usize) -> Self {
        Self {
            field: field.clone(),
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let factor = v[*p].clone();
            for (e, r) in v[*p..].iter_mut().zip(&row[*p..]) {
                f.sub_mul_assign(e, &factor, r);
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|e| self.field.is_zero(e))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.len, "vector length");
        self.reduce(&mut v);
        let f = &self.field;
        let Some(p) = v.iter().position(|e| !f.is_zero(e)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for e in v[p..].iter_mut() {
            *e = f.mul(e, &inv);
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rref_identity_and_zero() {
        let f = Rationals;
        let e = rref(&Mat::identity(&f, 2));
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivots, [0, 1]);
        let z = rref(&Mat::zeros(&f, 3, 4));
        assert_eq!(z.rank, 0);
        assert!(z.pivots.is_empty());
    }

    #[test]
    fn rref_dependent_rows() {
        let f = Rationals;
        let m = Mat::from_i64_rows(&f, &[&[1, 2], &[2, 4]]).unwrap();
        let e = rref(&m);
        assert_eq!(e.rank, 1);
        assert_eq!(e.reduced, Mat::from_i64_rows(&f, &[&[1, 2], &[0, 0]]).unwrap());
    }

    #[test]
    fn nullspace_small_cases() {
        let f = Rationals;
        assert!(nullspace(&Mat::identity(&f, 3)).is_empty());
        assert_eq!(nullspace(&Mat::zeros(&f, 3, 3)).len(), 3);

        let f5 = PrimeField::new(5).unwrap();
        let m = Mat::from_i64_rows(&f5, &[&[1, 1]]).unwrap();
        let ns = nullspace(&m);
        assert_eq!(ns, [[4u64, 1]]);
    }

    #[test]
    fn span_examples() {
        let f = Rationals;
        let i = Mat::identity(&f, 3);
        assert_eq!(span_dim(&[i.clone(), i.scale(&f.from_i64(2))]).unwrap(), 1);
        let units = [Mat::unit(&f, 2, 0, 0), Mat::unit(&f, 2, 0, 1), Mat::unit(&f, 2, 1, 0)];
        assert_eq!(span_dim(&units).unwrap(), 3);
        assert!(span_dim(&[i, Mat::zeros(&f, 2, 2)]).is_err());
    }

    #[test]
    fn solve_examples() {
        let f = Rationals;
        let b = [f.from_i64(3), f.from_i64(-1)];
        assert_eq!(solve(&Mat::identity(&f, 2), &b).unwrap().unwrap(), b);
        let m = Mat::from_i64_rows(&f, &[&[1, 1]]).unwrap();
        assert_eq!(
            solve(&m, &[f.one()]).unwrap().unwrap(),
            [f.one(), f.zero()]
        );
        let inc = Mat::from_i64_rows(&f, &[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(solve(&inc, &[f.one(), f.one()]).unwrap(), None);
        assert!(solve(&inc, &[f.one()]).is_err());
    }
}
