//! Commutators, nilpotency, centralizers, conjugation and the non-unital
//! algebra generated by a tuple of matrices.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{nullspace, SpanBuilder};
use crate::mat::Mat;

/// An ordered tuple of `n x n` matrices over one field.
#[derive(Clone, Debug, PartialEq)]
pub struct MatTuple<F: Field> {
    n: usize,
    mats: Vec<Mat<F>>,
}

impl<F: Field> MatTuple<F> {
    pub fn new(mats: Vec<Mat<F>>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty tuple".into()))?;
        let n = first.rows();
        for m in &mats {
            if m.field() != first.field() {
                return Err(Error::FieldMismatch);
            }
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "tuple entry is {:?}, expected {n}x{n}",
                    m.shape()
                )));
            }
        }
        Ok(Self { n, mats })
    }

    pub fn single(x: Mat<F>) -> Result<Self> {
        Self::new(alloc::vec![x])
    }

    /// The all-zero `r`-tuple.
    pub fn zeros(field: &F, n: usize, r: usize) -> Self {
        Self {
            n,
            mats: alloc::vec![Mat::zeros(field, n, n); r],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.mats.len()
    }
    pub fn mats(&self) -> &[Mat<F>] {
        &self.mats
    }
    pub fn into_mats(self) -> Vec<Mat<F>> {
        self.mats
    }
    pub fn field(&self) -> &F {
        self.mats[0].field()
    }
}

pub fn commutator<F: Field>(x: &Mat<F>, y: &Mat<F>) -> Result<Mat<F>> {
    if !x.is_square() || x.shape() != y.shape() {
        return Err(Error::ShapeMismatch(format!(
            "commutator of {:?} and {:?}",
            x.shape(),
            y.shape()
        )));
    }
    x.mul(y)?.sub(&y.mul(x)?)
}

/// `x^n = 0`.
pub fn is_nilpotent<F: Field>(x: &Mat<F>) -> bool {
    x.is_square() && x.pow(x.rows() as u32).map(|p| p.is_zero()).unwrap_or(false)
}

pub fn is_commuting_tuple<F: Field>(t: &MatTuple<F>) -> bool {
    let m = t.mats();
    (0..m.len()).all(|i| {
        (i + 1..m.len()).all(|j| commutator(&m[i], &m[j]).map(|c| c.is_zero()).unwrap_or(false))
    })
}

/// The single `n x n` Jordan block with eigenvalue zero.
pub fn regular_nilpotent<F: Field>(field: &F, n: usize) -> Mat<F> {
    let mut x = Mat::zeros(field, n, n);
    for i in 0..n.saturating_sub(1) {
        x.set(i, i + 1, field.one());
    }
    x
}

/// Matrix of `y -> x y - y x` on `gl_n`, in the elementary basis
/// `e_{ab}` ordered row-major (index `a * n + b`).
pub fn ad_matrix<F: Field>(x: &Mat<F>) -> Mat<F> {
    let n = x.rows();
    let f = x.field();
    let mut ad = Mat::zeros(f, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            // (x e_ab)_ij = x_ia [b = j]
            for a in 0..n {
                let v = x.get(i, a);
                if !f.is_zero(v) {
                    let col = a * n + j;
                    ad.set(row, col, f.add(ad.get(row, col), v));
                }
            }
            // (e_ab x)_ij = [i = a] x_bj
            for b in 0..n {
                let v = x.get(b, j);
                if !f.is_zero(v) {
                    let col = i * n + b;
                    ad.set(row, col, f.sub(ad.get(row, col), v));
                }
            }
        }
    }
    ad
}

/// A subspace of `gl_n` given by a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSpace<F: Field> {
    pub basis: Vec<Mat<F>>,
    pub dim: usize,
}

fn vectors_to_mats<F: Field>(f: &F, n: usize, vs: Vec<Vec<F::Elem>>) -> Vec<Mat<F>> {
    vs.into_iter()
        .map(|v| Mat::from_vec(f, n, n, v).expect("n^2 coordinates"))
        .collect()
}

/// `z(x) = {y : xy = yx}`, the kernel of `ad x`.
pub fn centralizer<F: Field>(x: &Mat<F>) -> Result<MatSpace<F>> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch("centralizer of a non-square matrix".into()));
    }
    let basis = vectors_to_mats(x.field(), x.rows(), nullspace(&ad_matrix(x)));
    Ok(MatSpace {
        dim: basis.len(),
        basis,
    })
}

/// Stacked `ad` operators of every tuple entry.
pub fn stacked_ad<F: Field>(t: &MatTuple<F>) -> Mat<F> {
    let n2 = t.n() * t.n();
    let mut m = Mat::zeros(t.field(), t.r() * n2, n2);
    for (k, x) in t.mats().iter().enumerate() {
        m.set_block(k * n2, 0, &ad_matrix(x));
    }
    m
}

/// Intersection of the centralizers of every tuple entry.
pub fn simultaneous_centralizer<F: Field>(t: &MatTuple<F>) -> MatSpace<F> {
    let basis = vectors_to_mats(t.field(), t.n(), nullspace(&stacked_ad(t)));
    MatSpace {
        dim: basis.len(),
        basis,
    }
}

/// Nilpotent with a centralizer of the minimal dimension `n`.
pub fn is_regular_nilpotent<F: Field>(x: &Mat<F>) -> bool {
    is_nilpotent(x) && centralizer(x).map(|z| z.dim == x.rows()).unwrap_or(false)
}

/// The non-unital algebra generated by a tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraClosure<F: Field> {
    pub basis: Vec<Mat<F>>,
    pub dim: usize,
    /// Product rounds run before the span stopped growing.
    pub generations: usize,
}

/// Smallest product-closed linear span containing the tuple; the identity is
/// not adjoined.
///
/// Each round multiplies every ordered pair of current basis elements and
/// adds the products to the span, stopping on the first round that adds
/// nothing.
pub fn algebra_closure<F: Field>(t: &MatTuple<F>) -> AlgebraClosure<F> {
    let n = t.n();
    let f = t.field();
    let mut span = SpanBuilder::new(f, n * n);
    let mut basis: Vec<Mat<F>> = Vec::new();
    for x in t.mats() {
        if span.insert(x.as_slice().to_vec()) {
            basis.push(x.clone());
        }
    }
    let mut generations = 0;
    loop {
        generations += 1;
        let mut fresh = Vec::new();
        for a in &basis {
            for b in &basis {
                let p = a.mul(b).expect("same shape");
                if span.insert(p.as_slice().to_vec()) {
                    fresh.push(p);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        basis.extend(fresh);
    }
    AlgebraClosure {
        dim: basis.len(),
        basis,
        generations,
    }
}

/// `(g x_i g^{-1})_i`; fails when `g` is singular.
pub fn conjugate<F: Field>(g: &Mat<F>, t: &MatTuple<F>) -> Result<MatTuple<F>> {
    if g.shape() != (t.n(), t.n()) {
        return Err(Error::ShapeMismatch("conjugating matrix size".into()));
    }
    let gi = g.inverse()?;
    let mats = t
        .mats()
        .iter()
        .map(|x| g.mul(x)?.mul(&gi))
        .collect::<Result<Vec<_>>>()?;
    MatTuple::new(mats)
}

/// Dimension of the conjugation orbit, `n^2 - dim` of the joint centralizer.
pub fn orbit_dim<F: Field>(t: &MatTuple<F>) -> usize {
    t.n() * t.n() - simultaneous_centralizer(t).dim
}

/// `sum_k coeffs[k] * x^(k+1)`, a polynomial in `x` without constant term.
pub fn polynomial_no_constant<F: Field>(x: &Mat<F>, coeffs: &[F::Elem]) -> Result<Mat<F>> {
    let f = x.field();
    let mut acc = Mat::zeros(f, x.rows(), x.cols());
    let mut power = x.clone();
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = power.mul(x)?;
        }
        if !f.is_zero(c) {
            acc = acc.add(&power.scale(c))?;
        }
    }
    Ok(acc)
}
