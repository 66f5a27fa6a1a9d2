//! Dimension witnesses by linearization.
//!
//! Upper bounds come from tangent spaces of the commuting scheme; lower
//! bounds come from the rank of the differential of a parametrizing map at an
//! explicit point. The rank of a differential at any point is at most its
//! generic rank, which equals the dimension of the closure of the image, so a
//! computed rank is a certified lower bound.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{nullspace, rank};
use crate::mat::Mat;
use crate::nilcore::{ad_matrix, centralizer, is_commuting_tuple, stacked_ad, MatTuple};
use crate::rng::Rng;
use crate::witnesses::{
    first_generic_gamma_point, gamma_element, gamma_partner_equations, gamma_v, parabolic_nilradical,
    sample_regular_tuple, GammaCoords, ParabolicShape,
};

/// Dimension of the Zariski tangent space of `C_r(gl_n)` at `t`:
/// `{(ξ_i) : [ξ_i, x_j] + [x_i, ξ_j] = 0 for all i < j}`.
pub fn commuting_tangent_dim<F: Field>(t: &MatTuple<F>) -> Result<usize> {
    if !is_commuting_tuple(t) {
        return Err(Error::NonCommuting);
    }
    let sys = commuting_tangent_system(t);
    Ok(sys.cols() - rank(&sys))
}

fn commuting_tangent_system<F: Field>(t: &MatTuple<F>) -> Mat<F> {
    let n2 = t.n() * t.n();
    let r = t.r();
    let f = t.field();
    let ads: Vec<Mat<F>> = t.mats().iter().map(ad_matrix).collect();
    let pairs = r * r.saturating_sub(1) / 2;
    let mut sys = Mat::zeros(f, pairs * n2, r * n2);
    let mut block = 0;
    for i in 0..r {
        for j in i + 1..r {
            // [ξ_i, x_j] = -ad(x_j) ξ_i   and   [x_i, ξ_j] = ad(x_i) ξ_j
            let neg = ads[j].scale(&f.neg(&f.one()));
            sys.set_block(block * n2, i * n2, &neg);
            sys.set_block(block * n2, j * n2, &ads[i]);
            block += 1;
        }
    }
    sys
}

/// Linearized trace-power equations at `x`: row `k` (for `k = 1..n`) is the
/// functional `ξ -> k tr(x^{k-1} ξ)` in row-major coordinates of `ξ`.
pub fn nilpotent_tangent_rows<F: Field>(x: &Mat<F>) -> Result<Vec<Vec<F::Elem>>> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch("square matrix expected".into()));
    }
    let n = x.rows();
    let f = x.field();
    f.spec().require_char_above(n)?;
    let mut rows = Vec::with_capacity(n);
    let mut power = Mat::identity(f, n);
    for k in 1..=n {
        let kk = f.from_i64(k as i64);
        let mut row = alloc::vec![f.zero(); n * n];
        // tr(P ξ) = sum_{a,b} P_ba ξ_ab
        for a in 0..n {
            for b in 0..n {
                row[a * n + b] = f.mul(&kk, power.get(b, a));
            }
        }
        rows.push(row);
        power = power.mul(x)?;
    }
    Ok(rows)
}

/// Tangent dimension at `t` of the scheme cut out by the commutators together
/// with the trace-power equations of every entry; an upper-bound probe for
/// `C_r(N_n)`.
pub fn nilpotent_commuting_tangent_dim<F: Field>(t: &MatTuple<F>) -> Result<usize> {
    if !is_commuting_tuple(t) {
        return Err(Error::NonCommuting);
    }
    let n2 = t.n() * t.n();
    let base = commuting_tangent_system(t);
    let mut rows = base.to_rows();
    for (i, x) in t.mats().iter().enumerate() {
        for tr in nilpotent_tangent_rows(x)? {
            let mut row = alloc::vec![t.field().zero(); t.r() * n2];
            row[i * n2..(i + 1) * n2].clone_from_slice(&tr);
            rows.push(row);
        }
    }
    let sys = Mat::from_vec(t.field(), rows.len(), t.r() * n2, rows.into_iter().flatten().collect())?;
    Ok(sys.cols() - rank(&sys))
}

/// The parametrized families whose differentials are ranked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// `g -> g·t` for a fixed tuple `t`.
    OrbitOfTuple,
    /// `(g, w_1, …, w_r) -> g·(w_1, …, w_r)` with `w_i ∈ u_P`.
    ParabolicFamily,
    /// `(g, X, Y) -> g·(v, X, Y)` with `(X, Y) ∈ C_2(Γ)`.
    GammaFamily,
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            MapKind::OrbitOfTuple => "OrbitOfTuple",
            MapKind::ParabolicFamily => "ParabolicFamily",
            MapKind::GammaFamily => "GammaFamily",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "OrbitOfTuple" => Ok(MapKind::OrbitOfTuple),
            "ParabolicFamily" => Ok(MapKind::ParabolicFamily),
            "GammaFamily" => Ok(MapKind::GammaFamily),
            _ => Err(Error::Parse(format!("unknown map kind `{s}`"))),
        }
    }
}

/// A map together with its parameters and, optionally, its base point.
///
/// The base point lists the family parameters: the tuple itself for
/// `OrbitOfTuple`, `(w_1, …, w_r)` for `ParabolicFamily`, and the realized
/// `(X, Y)` for `GammaFamily`. When absent it is drawn from the seed.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec<F: Field> {
    pub kind: MapKind,
    pub n: usize,
    pub r: usize,
    pub s: Option<usize>,
    pub base_point: Option<Vec<Mat<F>>>,
}

impl<F: Field> MapSpec<F> {
    pub fn orbit(n: usize, r: usize) -> Self {
        Self {
            kind: MapKind::OrbitOfTuple,
            n,
            r,
            s: None,
            base_point: None,
        }
    }

    pub fn parabolic(n: usize, r: usize) -> Self {
        Self {
            kind: MapKind::ParabolicFamily,
            n,
            r,
            s: None,
            base_point: None,
        }
    }

    pub fn gamma(s: usize) -> Self {
        Self {
            kind: MapKind::GammaFamily,
            n: 4 * s,
            r: 3,
            s: Some(s),
            base_point: None,
        }
    }

    pub fn with_base_point(mut self, point: Vec<Mat<F>>) -> Self {
        self.base_point = Some(point);
        self
    }
}

/// Result of [`param_rank`]: everything needed to recompute the rank.
#[derive(Clone, Debug, PartialEq)]
pub struct RankWitness<F: Field> {
    pub spec: MapSpec<F>,
    pub seed: u64,
    pub base_point: Vec<Mat<F>>,
    /// `(rows, cols)` of the differential: codomain by domain dimension.
    pub jacobian_shape: (usize, usize),
    pub rank: usize,
}

const GAMMA_RETRIES: u32 = 16;

/// Rank of the differential at the base point of the map described by
/// `spec`, evaluated at the identity group element, where it reads
/// `(ξ, δ) -> ([ξ, c_i] + δ_i)_i`.
pub fn param_rank<F: Field>(spec: &MapSpec<F>, field: &F, seed: u64) -> Result<RankWitness<F>> {
    let (base_point, jac) = match spec.kind {
        MapKind::OrbitOfTuple => orbit_jacobian(spec, field, seed)?,
        MapKind::ParabolicFamily => parabolic_jacobian(spec, field, seed)?,
        MapKind::GammaFamily => gamma_jacobian(spec, field, seed)?,
    };
    Ok(RankWitness {
        spec: MapSpec {
            base_point: None,
            ..spec.clone()
        },
        seed,
        jacobian_shape: jac.shape(),
        rank: rank(&jac),
        base_point,
    })
}

fn check_point<F: Field>(point: &[Mat<F>], n: usize, r: usize, field: &F) -> Result<()> {
    if point.len() != r {
        return Err(Error::InvalidSpec(format!("base point has {} entries, expected {r}", point.len())));
    }
    if point.iter().any(|m| m.shape() != (n, n) || m.field() != field) {
        return Err(Error::InvalidSpec(format!("base point entries must be {n}x{n} over {}", field.spec())));
    }
    Ok(())
}

fn orbit_jacobian<F: Field>(spec: &MapSpec<F>, field: &F, seed: u64) -> Result<(Vec<Mat<F>>, Mat<F>)> {
    let (n, r) = (spec.n, spec.r);
    if n == 0 || r == 0 {
        return Err(Error::InvalidSpec("need n, r >= 1".into()));
    }
    let t = match &spec.base_point {
        Some(p) => {
            check_point(p, n, r, field)?;
            MatTuple::new(p.clone())?
        }
        None => sample_regular_tuple(n, r, field, seed)?,
    };
    let jac = stacked_ad(&t);
    Ok((t.into_mats(), jac))
}

fn parabolic_jacobian<F: Field>(spec: &MapSpec<F>, field: &F, seed: u64) -> Result<(Vec<Mat<F>>, Mat<F>)> {
    let (n, r) = (spec.n, spec.r);
    if n < 2 || r == 0 {
        return Err(Error::InvalidSpec("parabolic family needs n >= 2, r >= 1".into()));
    }
    let (shape, basis) = parabolic_nilradical(n, field)?;
    let point = match &spec.base_point {
        Some(p) => {
            check_point(p, n, r, field)?;
            if !p.iter().all(crate::witnesses::in_nilradical) {
                return Err(Error::InvalidSpec("base point leaves u_P".into()));
            }
            p.clone()
        }
        None => random_nilradical_tuple(&shape, field, r, seed),
    };
    let n2 = n * n;
    let d = basis.len();
    let t = MatTuple::new(point.clone())?;
    let mut jac = Mat::zeros(field, r * n2, n2 + r * d);
    jac.set_block(0, 0, &stacked_ad(&t));
    for i in 0..r {
        for (k, b) in basis.iter().enumerate() {
            let col = n2 + i * d + k;
            for (idx, e) in b.as_slice().iter().enumerate() {
                if !field.is_zero(e) {
                    jac.set(i * n2 + idx, col, e.clone());
                }
            }
        }
    }
    Ok((point, jac))
}

/// `r` random elements of `u_P` drawn from `seed`.
pub fn random_nilradical_tuple<F: Field>(shape: &ParabolicShape, field: &F, r: usize, seed: u64) -> Vec<Mat<F>> {
    let mut rng = Rng::new(seed);
    (0..r)
        .map(|_| {
            let a = Mat::random(field, shape.bottom, shape.top, &mut rng);
            let mut w = Mat::zeros(field, shape.n, shape.n);
            w.set_block(shape.top, 0, &a);
            w
        })
        .collect()
}

/// Block coordinates of a realized `Γ` matrix.
fn gamma_coords_of<F: Field>(m: &Mat<F>, s: usize) -> Result<GammaCoords<F>> {
    let c = GammaCoords::new(
        m.block(0, s, s, s),
        m.block(0, 2 * s, s, s),
        m.block(0, 3 * s, s, s),
        m.block(2 * s, 3 * s, s, s),
    )?;
    if gamma_element(&c) != *m {
        return Err(Error::InvalidSpec("matrix is not in Γ".into()));
    }
    Ok(c)
}

/// A point `(X, Y)` of `C_2(Γ)` drawn from `seed`: `X` generic, `Y` a random
/// combination of its partner basis.
pub fn sample_gamma_pair<F: Field>(s: usize, field: &F, seed: u64) -> Result<(GammaCoords<F>, GammaCoords<F>)> {
    let (_, x, partners) = first_generic_gamma_point(s, field, seed, GAMMA_RETRIES)?;
    let mut rng = Rng::for_attempt(seed, 1);
    let mut y = alloc::vec![field.zero(); 4 * s * s];
    for b in &partners.basis {
        let c = field.random(&mut rng);
        for (acc, e) in y.iter_mut().zip(b.to_vec()) {
            *acc = field.add(acc, &field.mul(&c, &e));
        }
    }
    let y = GammaCoords::from_vec(field, s, &y)?;
    Ok((x, y))
}

fn gamma_jacobian<F: Field>(spec: &MapSpec<F>, field: &F, seed: u64) -> Result<(Vec<Mat<F>>, Mat<F>)> {
    let s = spec.s.ok_or_else(|| Error::InvalidSpec("GammaFamily needs s".into()))?;
    if s == 0 || spec.n != 4 * s || spec.r != 3 {
        return Err(Error::InvalidSpec("GammaFamily needs s >= 1, n = 4s, r = 3".into()));
    }
    let n = 4 * s;
    let (x, y) = match &spec.base_point {
        Some(p) => {
            check_point(p, n, 2, field)?;
            (gamma_coords_of(&p[0], s)?, gamma_coords_of(&p[1], s)?)
        }
        None => sample_gamma_pair(s, field, seed)?,
    };
    let v = gamma_v(s, field)?;
    let (xm, ym) = (gamma_element(&x), gamma_element(&y));
    let t = MatTuple::new(alloc::vec![v, xm.clone(), ym.clone()])?;
    if !is_commuting_tuple(&t) {
        return Err(Error::InvalidSpec("Γ base point does not commute".into()));
    }

    // Tangent space of C_2(Γ) at (X, Y): block(δX, Y) + block(X, δY) = 0,
    // and block is antisymmetric.
    let s2 = s * s;
    let ex = gamma_partner_equations(&x);
    let ey = gamma_partner_equations(&y);
    let mut lin = Mat::zeros(field, s2, 8 * s2);
    lin.set_block(0, 0, &ey.scale(&field.neg(&field.one())));
    lin.set_block(0, 4 * s2, &ex);
    let tangent = nullspace(&lin);
    // Every component of C_2(Γ) has dimension >= 7 s^2, so a 7 s^2 tangent
    // space means the point is smooth on a component of exactly that dimension.
    if tangent.len() != 7 * s2 {
        return Err(Error::InvalidSpec(format!(
            "C_2(Γ) tangent dimension {} at base point, expected {}",
            tangent.len(),
            7 * s2
        )));
    }

    let n2 = n * n;
    let mut jac = Mat::zeros(field, 3 * n2, n2 + tangent.len());
    jac.set_block(0, 0, &stacked_ad(&t));
    for (k, tv) in tangent.iter().enumerate() {
        let dx = gamma_element(&GammaCoords::from_vec(field, s, &tv[..4 * s2])?);
        let dy = gamma_element(&GammaCoords::from_vec(field, s, &tv[4 * s2..])?);
        for (slot, m) in [(1, &dx), (2, &dy)] {
            for (idx, e) in m.as_slice().iter().enumerate() {
                if !field.is_zero(e) {
                    jac.set(slot * n2 + idx, n2 + k, e.clone());
                }
            }
        }
    }
    Ok((alloc::vec![xm, ym], jac))
}

/// Parts of the `Γ` family dimension bound for `C_3(N_{4s})`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFamilyDim<F: Field> {
    pub s: usize,
    pub n: usize,
    pub seed: u64,
    /// `n^2 - dim z(v)`, the dimension of the orbit of `v`.
    pub orbit_term: usize,
    /// `dim Γ = 4 s^2`, the free choice of `X`.
    pub free_term: usize,
    /// Dimension of the partner space of `X`.
    pub partner_term: usize,
    pub dim_lower_bound: usize,
    /// Whether the partner space has the generic dimension `3 s^2`.
    pub generic: bool,
    pub point: GammaCoords<F>,
}

/// `dim G·v + dim Γ + dim{Y : [X, Y] = 0}` at the `X` drawn from `seed`.
///
/// The sum bounds `dim C_3(N_{4s})` from below through the fiber-dimension
/// argument over `G·v`; it is only meaningful when `generic` holds, since the
/// partner space can only jump up at special points.
pub fn gamma_family_dim<F: Field>(s: usize, field: &F, seed: u64) -> Result<GammaFamilyDim<F>> {
    let x = crate::witnesses::sample_gamma_point(s, field, seed);
    gamma_family_dim_at(s, field, seed, x)
}

/// Same as [`gamma_family_dim`] at a given point.
pub fn gamma_family_dim_at<F: Field>(s: usize, field: &F, seed: u64, x: GammaCoords<F>) -> Result<GammaFamilyDim<F>> {
    if s == 0 || x.s() != s {
        return Err(Error::InvalidArgument("Γ point size does not match s >= 1".into()));
    }
    let n = 4 * s;
    let v = gamma_v(s, field)?;
    let orbit_term = n * n - centralizer(&v)?.dim;
    let free_term = 4 * s * s;
    let partners = crate::witnesses::gamma_partner_space(&x);
    Ok(GammaFamilyDim {
        s,
        n,
        seed,
        orbit_term,
        free_term,
        partner_term: partners.dim,
        dim_lower_bound: orbit_term + free_term + partners.dim,
        generic: partners.is_generic(s),
        point: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::nilcore::regular_nilpotent;

    fn fp() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn tangent_examples() {
        let f = Rationals;
        let x = regular_nilpotent(&f, 2);
        let t = MatTuple::new(alloc::vec![x.clone(), x]).unwrap();
        assert_eq!(commuting_tangent_dim(&t).unwrap(), 6);
        assert_eq!(commuting_tangent_dim(&MatTuple::zeros(&f, 3, 3)).unwrap(), 27);
        let x4 = regular_nilpotent(&f, 4);
        let t = MatTuple::new(alloc::vec![x4, Mat::zeros(&f, 4, 4), Mat::zeros(&f, 4, 4)]).unwrap();
        assert_eq!(commuting_tangent_dim(&t).unwrap(), 16 + 2 * 4);
        let bad = MatTuple::new(alloc::vec![Mat::unit(&f, 2, 0, 1), Mat::unit(&f, 2, 1, 0)]).unwrap();
        assert_eq!(commuting_tangent_dim(&bad), Err(Error::NonCommuting));
    }

    #[test]
    fn trace_rows() {
        let f = Rationals;
        let rows = nilpotent_tangent_rows(&Mat::zeros(&f, 3, 3)).unwrap();
        assert_eq!(rows[0], [1, 0, 0, 0, 1, 0, 0, 0, 1].map(|v| f.from_i64(v)));
        assert!(rows[1..].iter().all(|r| r.iter().all(|e| f.is_zero(e))));

        let rows = nilpotent_tangent_rows(&regular_nilpotent(&f, 2)).unwrap();
        assert_eq!(rows[1], [0, 0, 2, 0].map(|v| f.from_i64(v)));

        let small = PrimeField::new(3).unwrap();
        assert!(nilpotent_tangent_rows(&Mat::zeros(&small, 3, 3)).is_err());
    }

    #[test]
    fn orbit_rank_of_regular_nilpotent() {
        let f = Rationals;
        let spec = MapSpec::orbit(4, 1).with_base_point(alloc::vec![regular_nilpotent(&f, 4)]);
        let w = param_rank(&spec, &f, 0).unwrap();
        assert_eq!(w.rank, 12);
        assert_eq!(w.jacobian_shape, (16, 16));
    }

    #[test]
    fn parabolic_ranks() {
        let f = fp();
        assert_eq!(param_rank(&MapSpec::parabolic(4, 2), &f, 1).unwrap().rank, 12);
        assert_eq!(param_rank(&MapSpec::parabolic(4, 6), &f, 1).unwrap().rank, 28);
    }

    #[test]
    fn parabolic_rejects_points_outside_nilradical() {
        let f = fp();
        let spec = MapSpec::parabolic(4, 1).with_base_point(alloc::vec![Mat::unit(&f, 4, 0, 1)]);
        assert!(matches!(param_rank(&spec, &f, 0), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn gamma_dims_small() {
        let f = fp();
        let g1 = gamma_family_dim(1, &f, 3).unwrap();
        assert_eq!((g1.orbit_term, g1.free_term), (10, 4));
        if g1.generic {
            assert_eq!(g1.dim_lower_bound, 17);
        }
    }

    #[test]
    fn gamma_family_rank_is_at_least_parts() {
        let f = fp();
        for s in 1..=2 {
            let w = param_rank(&MapSpec::gamma(s), &f, 5).unwrap();
            let n = 4 * s;
            assert!(w.rank >= n * n - 6 * s * s + 7 * s * s, "s={s} rank={}", w.rank);
        }
    }
}
