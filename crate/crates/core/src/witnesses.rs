//! Explicit witness families: the nilradical `u_P` of the two-block
//! parabolic, the matrix `v` and the linear family `Γ ⊂ gl_{4s}`, and a
//! sampler for tuples on the regular component.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::nullspace;
use crate::mat::Mat;
use crate::nilcore::{conjugate, polynomial_no_constant, regular_nilpotent, MatTuple};
use crate::rng::Rng;

/// Block sizes of the two-block parabolic for `gl_n`.
///
/// The top block has `m = n/2` rows (`m + 1` when `n` is odd) and the bottom
/// block `m`; `u_P` is the lower-left `bottom x top` block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParabolicShape {
    pub n: usize,
    pub m: usize,
    pub top: usize,
    pub bottom: usize,
}

impl ParabolicShape {
    pub fn new(n: usize) -> Self {
        let m = n / 2;
        Self {
            n,
            m,
            top: n - m,
            bottom: m,
        }
    }

    /// `dim u_P = top * bottom = floor(n^2 / 4)`.
    pub fn nilradical_dim(&self) -> usize {
        self.top * self.bottom
    }
}

/// Elementary-matrix basis of `u_P`, row-major over the lower-left block.
pub fn parabolic_nilradical<F: Field>(n: usize, field: &F) -> Result<(ParabolicShape, Vec<Mat<F>>)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("parabolic needs n >= 2, got {n}")));
    }
    let shape = ParabolicShape::new(n);
    let basis = (0..shape.bottom)
        .flat_map(|i| (0..shape.top).map(move |j| (shape.top + i, j)))
        .map(|(i, j)| Mat::unit(field, n, i, j))
        .collect();
    Ok((shape, basis))
}

/// Whether `x` lies in `u_P`: zero outside the lower-left block.
pub fn in_nilradical<F: Field>(x: &Mat<F>) -> bool {
    let n = x.rows();
    if !x.is_square() || n < 2 {
        return false;
    }
    let shape = ParabolicShape::new(n);
    let f = x.field();
    (0..n).all(|i| {
        (0..n).all(|j| (i >= shape.top && j < shape.top) || f.is_zero(x.get(i, j)))
    })
}

/// `4s x 4s` block matrix with `I_s` at blocks (1,2) and (2,4).
pub fn gamma_v<F: Field>(s: usize, field: &F) -> Result<Mat<F>> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    let id = Mat::identity(field, s);
    let mut v = Mat::zeros(field, 4 * s, 4 * s);
    v.set_block(0, s, &id);
    v.set_block(s, 3 * s, &id);
    Ok(v)
}

/// Coordinates `(A1, A2, A3, A4)` of a point of `Γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaCoords<F: Field> {
    pub a: [Mat<F>; 4],
}

impl<F: Field> GammaCoords<F> {
    pub fn new(a1: Mat<F>, a2: Mat<F>, a3: Mat<F>, a4: Mat<F>) -> Result<Self> {
        let s = a1.rows();
        for m in [&a1, &a2, &a3, &a4] {
            if m.shape() != (s, s) {
                return Err(Error::ShapeMismatch(format!(
                    "Γ block is {:?}, expected {s}x{s}",
                    m.shape()
                )));
            }
            if m.field() != a1.field() {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Self {
            a: [a1, a2, a3, a4],
        })
    }

    pub fn zeros(field: &F, s: usize) -> Self {
        let z = Mat::zeros(field, s, s);
        Self {
            a: [z.clone(), z.clone(), z.clone(), z],
        }
    }

    pub fn random(field: &F, s: usize, rng: &mut Rng) -> Self {
        Self {
            a: core::array::from_fn(|_| Mat::random(field, s, s, rng)),
        }
    }

    pub fn s(&self) -> usize {
        self.a[0].rows()
    }

    /// Flattened `A1 | A2 | A3 | A4`, each row-major.
    pub fn to_vec(&self) -> Vec<F::Elem> {
        self.a.iter().flat_map(|m| m.as_slice().iter().cloned()).collect()
    }

    pub fn from_vec(field: &F, s: usize, v: &[F::Elem]) -> Result<Self> {
        let s2 = s * s;
        if v.len() != 4 * s2 {
            return Err(Error::ShapeMismatch(format!(
                "{} Γ coordinates, expected {}",
                v.len(),
                4 * s2
            )));
        }
        let a = core::array::from_fn(|k| {
            Mat::from_vec(field, s, s, v[k * s2..(k + 1) * s2].to_vec()).expect("s^2 entries")
        });
        Ok(Self { a })
    }
}

/// The realized `4s x 4s` matrix
/// `[[0, A1, A2, A3], [0, 0, 0, A1], [0, 0, 0, A4], [0, 0, 0, 0]]`.
pub fn gamma_element<F: Field>(x: &GammaCoords<F>) -> Mat<F> {
    let s = x.s();
    let [a1, a2, a3, a4] = &x.a;
    let mut m = Mat::zeros(a1.field(), 4 * s, 4 * s);
    m.set_block(0, s, a1);
    m.set_block(0, 2 * s, a2);
    m.set_block(0, 3 * s, a3);
    m.set_block(s, 3 * s, a1);
    m.set_block(2 * s, 3 * s, a4);
    m
}

/// The only possibly nonzero block of `[X, Y]` for `X, Y ∈ Γ`, which sits at
/// block position (1,4): `A1 B1 + A2 B4 - B1 A1 - B2 A4`.
pub fn gamma_commutator_block<F: Field>(x: &GammaCoords<F>, y: &GammaCoords<F>) -> Result<Mat<F>> {
    if x.s() != y.s() {
        return Err(Error::ShapeMismatch("Γ points of different s".into()));
    }
    let [a1, a2, _, a4] = &x.a;
    let [b1, b2, _, b4] = &y.a;
    a1.mul(b1)?
        .add(&a2.mul(b4)?)?
        .sub(&b1.mul(a1)?)?
        .sub(&b2.mul(a4)?)
}

/// Coefficient matrix of `Y -> gamma_commutator_block(X, Y)` on the
/// flattened coordinates of `Y`; `s^2` rows, `4 s^2` columns.
pub fn gamma_partner_equations<F: Field>(x: &GammaCoords<F>) -> Mat<F> {
    let s = x.s();
    let s2 = s * s;
    let [a1, a2, _, a4] = &x.a;
    let f = a1.field();
    let mut eq = Mat::zeros(f, s2, 4 * s2);
    let mut bump = |row: usize, col: usize, v: &F::Elem, negate: bool| {
        if f.is_zero(v) {
            return;
        }
        let cur = eq.get(row, col).clone();
        let next = if negate { f.sub(&cur, v) } else { f.add(&cur, v) };
        eq.set(row, col, next);
    };
    let (b1, b2, b4) = (0, s2, 3 * s2);
    for i in 0..s {
        for j in 0..s {
            let row = i * s + j;
            for k in 0..s {
                // (A1 B1)_ij
                bump(row, b1 + k * s + j, a1.get(i, k), false);
                // -(B1 A1)_ij
                bump(row, b1 + i * s + k, a1.get(k, j), true);
                // (A2 B4)_ij
                bump(row, b4 + k * s + j, a2.get(i, k), false);
                // -(B2 A4)_ij
                bump(row, b2 + i * s + k, a4.get(k, j), true);
            }
        }
    }
    eq
}

/// `{Y ∈ Γ : [X, Y] = 0}`, linear in `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartnerSpace<F: Field> {
    pub basis: Vec<GammaCoords<F>>,
    pub dim: usize,
}

impl<F: Field> PartnerSpace<F> {
    /// `s^2` equations in `4 s^2` unknowns leave at least `3 s^2`; equality is the generic case.
    pub fn is_generic(&self, s: usize) -> bool {
        self.dim == 3 * s * s
    }
}

pub fn gamma_partner_space<F: Field>(x: &GammaCoords<F>) -> PartnerSpace<F> {
    let s = x.s();
    let f = x.a[0].field();
    let basis: Vec<_> = nullspace(&gamma_partner_equations(x))
        .into_iter()
        .map(|v| GammaCoords::from_vec(f, s, &v).expect("4 s^2 coordinates"))
        .collect();
    PartnerSpace {
        dim: basis.len(),
        basis,
    }
}

/// A `Γ` point drawn from `seed`.
pub fn sample_gamma_point<F: Field>(s: usize, field: &F, seed: u64) -> GammaCoords<F> {
    GammaCoords::random(field, s, &mut Rng::new(seed))
}

/// Tries `seed, seed + 1, …` until the partner space has the generic
/// dimension `3 s^2`. Returns the seed that worked with its point.
pub fn first_generic_gamma_point<F: Field>(
    s: usize,
    field: &F,
    seed: u64,
    max_tries: u32,
) -> Result<(u64, GammaCoords<F>, PartnerSpace<F>)> {
    for k in 0..max_tries {
        let sd = seed.wrapping_add(k as u64);
        let x = sample_gamma_point(s, field, sd);
        let partners = gamma_partner_space(&x);
        if partners.is_generic(s) {
            return Ok((sd, x, partners));
        }
    }
    Err(Error::SeedExhausted { tries: max_tries })
}

/// Invertible matrix with entries from [`Field::random`], retried at most
/// `max_tries` times.
pub fn random_invertible<F: Field>(field: &F, n: usize, rng: &mut Rng, max_tries: u32) -> Result<Mat<F>> {
    for _ in 0..max_tries {
        let g = Mat::random(field, n, n, rng);
        if crate::linalg::rank(&g) == n {
            return Ok(g);
        }
    }
    Err(Error::SeedExhausted { tries: max_tries })
}

const INVERTIBLE_RETRIES: u32 = 64;

/// `g (x_reg, p_1(x_reg), …, p_{r-1}(x_reg)) g^{-1}` with random polynomials
/// `p_i` of degree below `n` and without constant term, and a random
/// invertible `g`. The result is a commuting nilpotent tuple on the regular
/// component.
pub fn sample_regular_tuple<F: Field>(n: usize, r: usize, field: &F, seed: u64) -> Result<MatTuple<F>> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and r >= 1".into()));
    }
    field.spec().require_char_above(n)?;
    let mut rng = Rng::new(seed);
    let x = regular_nilpotent(field, n);
    let mut mats = Vec::with_capacity(r);
    mats.push(x.clone());
    for _ in 1..r {
        let coeffs: Vec<_> = (1..n).map(|_| field.random(&mut rng)).collect();
        mats.push(polynomial_no_constant(&x, &coeffs)?);
    }
    let g = random_invertible(field, n, &mut rng, INVERTIBLE_RETRIES)?;
    conjugate(&g, &MatTuple::new(mats)?)
}
