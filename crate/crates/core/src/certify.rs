//! Dimension formulas, reducibility certificates and their verifier.
//!
//! A certificate carries enough data to recompute its quantity from scratch:
//! an explicit tuple for algebra-dimension certificates, a base point for
//! rank certificates, and a `Γ` point for the `C_3` certificates. Absence of
//! a certificate is reported as `NotFound`; irreducibility is never claimed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Rationals};
use crate::geomdim::{gamma_family_dim_at, param_rank, MapKind, MapSpec};
use crate::mat::{AnyMat, DynField, Mat};
use crate::nilcore::{algebra_closure, is_commuting_tuple, is_nilpotent, MatTuple};
use crate::rng::Rng;
use crate::witnesses::{first_generic_gamma_point, parabolic_nilradical, GammaCoords};
use crate::with_field;

/// Default number of randomized attempts in the algebra-dimension search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 64;
/// Extra seeds tried when a parabolic rank comes out below its generic value.
pub const COMPONENT_RESEEDS: u64 = 3;
const GAMMA_RETRIES: u32 = 16;

/// Closed-form dimensions for `(n, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub n: usize,
    pub r: usize,
    /// `n^2 - n + (r-1)(n-1)`, the regular component of `C_r(N_n)`.
    pub dim_n_component: usize,
    /// `n^2 + (r-1) n`, the regular component of `C_r(gl_n)`.
    pub dim_g_component: usize,
    /// `floor(n^2 / 4)`.
    pub dim_u_p: usize,
    /// `(r+1) dim u_P`.
    pub dim_v_p: usize,
    pub lower_bound_nilpotent: usize,
    pub lower_bound_general: usize,
}

pub fn formula_dims(n: usize, r: usize) -> DimReport {
    let dim_n_component = n * n - n + r.saturating_sub(1) * n.saturating_sub(1);
    let dim_g_component = n * n + r.saturating_sub(1) * n;
    let dim_u_p = n * n / 4;
    let dim_v_p = (r + 1) * dim_u_p;
    DimReport {
        n,
        r,
        dim_n_component,
        dim_g_component,
        dim_u_p,
        dim_v_p,
        lower_bound_nilpotent: dim_n_component.max(dim_v_p),
        lower_bound_general: dim_g_component.max(dim_v_p + r),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertKind {
    AlgebraDim,
    ComponentDim,
    GammaDim,
}

impl CertKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertKind::AlgebraDim => "AlgebraDim",
            CertKind::ComponentDim => "ComponentDim",
            CertKind::GammaDim => "GammaDim",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "AlgebraDim" => Ok(CertKind::AlgebraDim),
            "ComponentDim" => Ok(CertKind::ComponentDim),
            "GammaDim" => Ok(CertKind::GammaDim),
            _ => Err(Error::Parse(format!("unknown certificate kind `{s}`"))),
        }
    }

    /// The mathematical fact the certificate relies on.
    pub fn basis(&self) -> &'static str {
        match self {
            CertKind::AlgebraDim => {
                "every tuple in the closure of the regular nilpotent locus generates a non-unital \
                 algebra of dimension at most n-1; a commuting nilpotent tuple generating one of \
                 dimension >= n lies on another component"
            }
            CertKind::ComponentDim => {
                "G·u_P^r is an irreducible closed subset of C_r(N_n); a rank of its moment map above \
                 n^2-n+(r-1)(n-1) cannot fit inside the regular component"
            }
            CertKind::GammaDim => {
                "fiber-dimension bound dim G·(v, C_2(Γ)) >= dim G·v + dim C_2(Γ) in gl_{4s}; \
                 exceeding n^2+n-2 forces C_3(N_n) to be reducible"
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Reducible,
    NotFound,
    Unknown,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Reducible => "REDUCIBLE",
            Verdict::NotFound => "NOT_FOUND",
            Verdict::Unknown => "UNKNOWN",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "REDUCIBLE" => Ok(Verdict::Reducible),
            "NOT_FOUND" => Ok(Verdict::NotFound),
            "UNKNOWN" => Ok(Verdict::Unknown),
            _ => Err(Error::Parse(format!("unknown verdict `{s}`"))),
        }
    }
}

/// The re-verifiable data behind a certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A commuting nilpotent tuple; the quantity is its algebra dimension.
    Tuple { construction: String, mats: Vec<AnyMat> },
    /// A differential rank at an explicit base point.
    Rank {
        map: MapKind,
        n: usize,
        r: usize,
        s: Option<usize>,
        base_point: Vec<AnyMat>,
        jacobian_shape: (usize, usize),
        rank: usize,
    },
    /// A point `X ∈ Γ` with the parts of the `Γ` family bound.
    Gamma {
        s: usize,
        coords: Vec<AnyMat>,
        orbit_term: usize,
        free_term: usize,
        partner_term: usize,
    },
    /// Nothing usable was produced.
    Empty,
}

/// One method tried by the dispatcher.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub kind: CertKind,
    pub quantity: usize,
    pub threshold: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub kind: CertKind,
    pub n: usize,
    pub r: usize,
    pub field: FieldSpec,
    pub witness: Witness,
    pub quantity: usize,
    pub threshold: usize,
    pub verdict: Verdict,
    pub basis: String,
    pub seed: u64,
    pub budget: u64,
    /// Which characteristic the computation certifies.
    pub semantics: String,
    /// Every method the dispatcher ran, in order (empty for direct calls).
    pub attempts: Vec<Attempt>,
}

impl Certificate {
    fn new(kind: CertKind, n: usize, r: usize, field: FieldSpec, seed: u64, budget: u64) -> Self {
        Self {
            kind,
            n,
            r,
            field,
            witness: Witness::Empty,
            quantity: 0,
            threshold: 0,
            verdict: Verdict::Unknown,
            basis: kind.basis().to_string(),
            seed,
            budget,
            semantics: semantics(field),
            attempts: Vec::new(),
        }
    }

    fn decide(&mut self) {
        self.verdict = if self.quantity > self.threshold {
            Verdict::Reducible
        } else {
            Verdict::NotFound
        };
    }

    pub fn attempt(&self) -> Attempt {
        Attempt {
            kind: self.kind,
            quantity: self.quantity,
            threshold: self.threshold,
            verdict: self.verdict,
        }
    }
}

/// Integer witness data over `F_p` lifts to Q with rank and algebra
/// dimension at least as large, so an `F_p` certificate also covers
/// characteristic zero.
fn semantics(field: FieldSpec) -> String {
    match field {
        FieldSpec::Rationals => "characteristic 0 (exact rational computation)".to_string(),
        FieldSpec::Prime(p) => format!(
            "characteristic {p} and characteristic 0 (integer witness data; F_{p} ranks bound Q ranks from below)"
        ),
    }
}

fn check_nr(n: usize, r: usize) -> Result<()> {
    if n < 2 || r < 2 {
        return Err(Error::InvalidArgument(format!("need n, r >= 2, got n={n}, r={r}")));
    }
    Ok(())
}

/// Pads the first `n` elements of the `u_P` basis to length `r` by repeating
/// the last one.
fn nilradical_catalog_tuple<F: Field>(n: usize, r: usize, field: &F) -> Result<Vec<Mat<F>>> {
    let (_, basis) = parabolic_nilradical(n, field)?;
    let take = n.min(basis.len()).min(r);
    let mut mats: Vec<_> = basis[..take].to_vec();
    while mats.len() < r {
        let last = mats.last().cloned().expect("non-empty basis");
        mats.push(last);
    }
    Ok(mats)
}

/// `r` random elements of `u_P`.
fn search_nilradical<F: Field>(n: usize, r: usize, field: &F, rng: &mut Rng) -> Vec<Mat<F>> {
    let shape = crate::witnesses::ParabolicShape::new(n);
    (0..r)
        .map(|_| {
            let a = Mat::random(field, shape.bottom, shape.top, rng);
            let mut w = Mat::zeros(field, n, n);
            w.set_block(shape.top, 0, &a);
            w
        })
        .collect()
}

/// A three-step graded family `V0 -> V1 -> V2`: each generator is
/// `[[0,0,0],[A,0,0],[C,B,0]]`, and commutation reduces to the linear
/// conditions `B_i A_j = B_j A_i` on the `B` blocks once the `A` blocks are
/// fixed. Generators are randomly allowed or denied `A`/`B` parts.
fn search_graded<F: Field>(n: usize, r: usize, field: &F, rng: &mut Rng) -> Option<Vec<Mat<F>>> {
    if n < 3 {
        return None;
    }
    let a = rng.range_inclusive(1, n - 2);
    let b = rng.range_inclusive(1, n - 1 - a);
    let c = n - a - b;
    let (o1, o2) = (a, a + b);
    // 0: full, 1: no B, 2: no A, 3: C only
    let kinds: Vec<u64> = (0..r).map(|_| rng.below(4)).collect();
    let amats: Vec<Mat<F>> = kinds
        .iter()
        .map(|&k| {
            if k == 0 || k == 1 {
                Mat::random(field, b, a, rng)
            } else {
                Mat::zeros(field, b, a)
            }
        })
        .collect();
    let free: Vec<usize> = (0..r).filter(|&i| kinds[i] == 0 || kinds[i] == 2).collect();
    let cb = c * b;
    let unknowns = free.len() * cb;
    let mut bmats: Vec<Mat<F>> = (0..r).map(|_| Mat::zeros(field, c, b)).collect();
    if unknowns > 0 {
        let pairs = r * (r - 1) / 2;
        let mut sys = Mat::zeros(field, pairs * c * a, unknowns);
        let mut row0 = 0;
        for i in 0..r {
            for j in i + 1..r {
                // (B_i A_j - B_j A_i)_{pq} = sum_k B_i[p,k] A_j[k,q] - B_j[p,k] A_i[k,q]
                for p in 0..c {
                    for q in 0..a {
                        let row = row0 + p * a + q;
                        for k in 0..b {
                            if let Some(fi) = free.iter().position(|&x| x == i) {
                                let col = fi * cb + p * b + k;
                                let cur = sys.get(row, col).clone();
                                sys.set(row, col, field.add(&cur, amats[j].get(k, q)));
                            }
                            if let Some(fj) = free.iter().position(|&x| x == j) {
                                let col = fj * cb + p * b + k;
                                let cur = sys.get(row, col).clone();
                                sys.set(row, col, field.sub(&cur, amats[i].get(k, q)));
                            }
                        }
                    }
                }
                row0 += c * a;
            }
        }
        let kernel = crate::linalg::nullspace(&sys);
        let mut sol = alloc::vec![field.zero(); unknowns];
        for v in &kernel {
            let coef = field.random(rng);
            for (s, e) in sol.iter_mut().zip(v) {
                *s = field.add(s, &field.mul(&coef, e));
            }
        }
        for (fi, &i) in free.iter().enumerate() {
            bmats[i] = Mat::from_vec(field, c, b, sol[fi * cb..(fi + 1) * cb].to_vec()).ok()?;
        }
    }
    let mats = (0..r)
        .map(|i| {
            let mut x = Mat::zeros(field, n, n);
            x.set_block(o1, 0, &amats[i]);
            x.set_block(o2, o1, &bmats[i]);
            x.set_block(o2, 0, &Mat::random(field, c, a, rng));
            x
        })
        .collect();
    Some(mats)
}

fn valid_candidate<F: Field>(t: &MatTuple<F>) -> bool {
    is_commuting_tuple(t) && t.mats().iter().all(is_nilpotent)
}

/// Scales every matrix by the lcm of its denominators and maps the
/// resulting integer matrix into `F`.
fn integerize<F: Field>(mats: &[Mat<Rationals>], field: &F) -> Vec<Mat<F>> {
    use num_integer::Integer;
    mats.iter()
        .map(|m| {
            let l = m
                .as_slice()
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, e| acc.lcm(e.denom()));
            let data = m
                .as_slice()
                .iter()
                .map(|e| field.from_bigint(&(e.numer() * (&l / e.denom()))))
                .collect();
            Mat::from_vec(field, m.rows(), m.cols(), data).expect("same shape")
        })
        .collect()
}

fn algebra_search<F: DynField>(
    n: usize,
    r: usize,
    field: &F,
    seed: u64,
    budget: u64,
) -> Result<(String, Vec<Mat<F>>, usize)> {
    let catalog = nilradical_catalog_tuple(n, r, field)?;
    let catalog_dim = algebra_closure(&MatTuple::new(catalog.clone())?).dim;
    let mut best = ("nilradical-catalog".to_string(), catalog, catalog_dim);
    if r >= n && n >= 4 {
        return Ok(best);
    }
    // Candidates are built over Q from small integers and cleared of
    // denominators, so a witness found over F_p usually lifts to Z.
    let q = Rationals;
    for attempt in 0..budget {
        if best.2 >= n {
            break;
        }
        let mut rng = Rng::for_attempt(seed, attempt);
        let (name, cand) = if attempt % 2 == 0 {
            ("graded-three-step", search_graded(n, r, &q, &mut rng))
        } else {
            ("nilradical-random", Some(search_nilradical(n, r, &q, &mut rng)))
        };
        let Some(cand) = cand else { continue };
        let t = MatTuple::new(integerize(&cand, field))?;
        if !valid_candidate(&t) {
            continue;
        }
        let dim = algebra_closure(&t).dim;
        if dim > best.2 {
            best = (format!("{name}#{attempt}"), t.into_mats(), dim);
        }
    }
    Ok(best)
}

/// Algebra-dimension certificate: a commuting nilpotent `r`-tuple whose
/// non-unital algebra has dimension `>= n`.
pub fn certify_algebra(n: usize, r: usize, field: FieldSpec, seed: u64, budget: u64) -> Result<Certificate> {
    check_nr(n, r)?;
    with_field!(field, |f| certify_algebra_in(n, r, &f, seed, budget))
}

fn certify_algebra_in<F: DynField>(n: usize, r: usize, f: &F, seed: u64, budget: u64) -> Result<Certificate> {
    let (construction, mats, dim) = algebra_search(n, r, f, seed, budget)?;
    let mut cert = Certificate::new(CertKind::AlgebraDim, n, r, f.spec(), seed, budget);
    cert.quantity = dim;
    cert.threshold = n - 1;
    let mats: Vec<AnyMat> = mats.into_iter().map(F::wrap).collect();
    cert.semantics = algebra_semantics(f.spec(), &mats);
    cert.witness = Witness::Tuple { construction, mats };
    cert.decide();
    Ok(cert)
}

/// The integer lift of residues (symmetric representatives), as rationals.
fn lift_to_rationals(m: &AnyMat) -> Mat<Rationals> {
    match m {
        AnyMat::Q(m) => m.clone(),
        AnyMat::Fp(m) => {
            let q = Rationals;
            let f = m.field();
            let data = m
                .as_slice()
                .iter()
                .map(|&v| q.from_bigint(&num_bigint::BigInt::from(f.symmetric_lift(v))))
                .collect();
            Mat::from_vec(&q, m.rows(), m.cols(), data).expect("same shape")
        }
    }
}

/// An `F_p` tuple certifies characteristic 0 only if its integer lift
/// (residues read in `(-p/2, p/2]`) is itself a commuting nilpotent tuple; the
/// lifted algebra then has dimension at least the `F_p` one.
fn algebra_semantics(field: FieldSpec, mats: &[AnyMat]) -> String {
    match field {
        FieldSpec::Rationals => semantics(field),
        FieldSpec::Prime(p) => {
            let lifted: Vec<_> = mats.iter().map(lift_to_rationals).collect();
            let ok = MatTuple::new(lifted)
                .map(|t| valid_candidate(&t))
                .unwrap_or(false);
            if ok {
                semantics(field)
            } else {
                format!("characteristic {p} only (integer lift does not commute)")
            }
        }
    }
}

/// Rank of the moment map `G × u_P^r -> gl_n^r` against the dimension of
/// the regular component.
pub fn certify_component_dim(n: usize, r: usize, field: FieldSpec, seed: u64) -> Result<Certificate> {
    check_nr(n, r)?;
    with_field!(field, |f| certify_component_in(n, r, &f, seed))
}

fn certify_component_in<F: DynField>(n: usize, r: usize, f: &F, seed: u64) -> Result<Certificate> {
    let dims = formula_dims(n, r);
    let spec = MapSpec::parabolic(n, r);
    let mut best = param_rank(&spec, f, seed)?;
    for k in 1..=COMPONENT_RESEEDS {
        if best.rank >= dims.dim_v_p {
            break;
        }
        let next = param_rank(&spec, f, seed.wrapping_add(k))?;
        if next.rank > best.rank {
            best = next;
        }
    }
    let mut cert = Certificate::new(CertKind::ComponentDim, n, r, f.spec(), best.seed, 0);
    cert.quantity = best.rank;
    cert.threshold = dims.dim_n_component;
    cert.witness = Witness::Rank {
        map: MapKind::ParabolicFamily,
        n,
        r,
        s: None,
        base_point: best.base_point.into_iter().map(F::wrap).collect(),
        jacobian_shape: best.jacobian_shape,
        rank: best.rank,
    };
    cert.decide();
    Ok(cert)
}

/// The `Γ` family bound for `C_3(N_{4s})` against `n^2 + n - 2`.
pub fn certify_gamma(s: usize, field: FieldSpec, seed: u64) -> Result<Certificate> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    with_field!(field, |f| certify_gamma_in(s, &f, seed))
}

fn certify_gamma_in<F: DynField>(s: usize, f: &F, seed: u64) -> Result<Certificate> {
    let n = 4 * s;
    let mut cert = Certificate::new(CertKind::GammaDim, n, 3, f.spec(), seed, GAMMA_RETRIES as u64);
    cert.threshold = n * n + n - 2;
    let (used, x, _) = match first_generic_gamma_point(s, f, seed, GAMMA_RETRIES) {
        Ok(found) => found,
        Err(Error::SeedExhausted { .. }) => {
            cert.verdict = Verdict::Unknown;
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    let parts = gamma_family_dim_at(s, f, used, x)?;
    cert.seed = used;
    cert.quantity = parts.dim_lower_bound;
    cert.witness = Witness::Gamma {
        s,
        coords: parts.point.a.iter().cloned().map(F::wrap).collect(),
        orbit_term: parts.orbit_term,
        free_term: parts.free_term,
        partner_term: parts.partner_term,
    };
    cert.decide();
    Ok(cert)
}

/// Tries the component-dimension, algebra-dimension and (for `r = 3`,
/// `4 | n`) `Γ` certificates in that order and returns the first
/// `Reducible` one, else the component-dimension certificate marked
/// `NotFound` with every attempt recorded.
pub fn certify(n: usize, r: usize, field: FieldSpec, seed: u64, budget: u64) -> Result<Certificate> {
    check_nr(n, r)?;
    let mut attempts = Vec::new();
    let component = certify_component_dim(n, r, field, seed)?;
    attempts.push(component.attempt());
    let mut chosen = None;
    if component.verdict == Verdict::Reducible {
        chosen = Some(component.clone());
    }
    if chosen.is_none() {
        let alg = certify_algebra(n, r, field, seed, budget)?;
        attempts.push(alg.attempt());
        if alg.verdict == Verdict::Reducible {
            chosen = Some(alg);
        }
    }
    if chosen.is_none() && r == 3 && n.is_multiple_of(4) {
        let gamma = certify_gamma(n / 4, field, seed)?;
        attempts.push(gamma.attempt());
        if gamma.verdict == Verdict::Reducible {
            chosen = Some(gamma);
        }
    }
    let mut cert = chosen.unwrap_or(component);
    cert.attempts = attempts;
    Ok(cert)
}

/// Why a certificate failed to re-verify.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("recomputed {what} = {recomputed}, certificate says {stored}")]
    Mismatch {
        what: &'static str,
        recomputed: usize,
        stored: usize,
    },
    #[error("verdict {verdict} inconsistent with quantity {quantity} and threshold {threshold}")]
    Verdict {
        verdict: &'static str,
        quantity: usize,
        threshold: usize,
    },
    #[error("witness rejected: {0}")]
    Witness(String),
}

impl From<Error> for VerifyError {
    fn from(e: Error) -> Self {
        VerifyError::Malformed(e.to_string())
    }
}

fn expect_eq(what: &'static str, recomputed: usize, stored: usize) -> Result<(), VerifyError> {
    if recomputed == stored {
        Ok(())
    } else {
        Err(VerifyError::Mismatch {
            what,
            recomputed,
            stored,
        })
    }
}

fn unwrap_all<F: DynField>(mats: &[AnyMat]) -> Result<Vec<Mat<F>>, VerifyError> {
    mats.iter()
        .map(|m| {
            F::unwrap(m)
                .cloned()
                .ok_or_else(|| VerifyError::Malformed("witness field differs from certificate field".into()))
        })
        .collect()
}

/// Recomputes the quantity from the embedded witness alone and checks it
/// against the stored quantity, threshold and verdict.
pub fn verify(cert: &Certificate) -> Result<(), VerifyError> {
    cert.field.validate()?;
    let field = cert.field;
    let run = || -> Result<Result<(), VerifyError>> {
        Ok(with_field!(field, |f| verify_in(cert, &f)))
    };
    run()?
}

fn verify_in<F: DynField>(cert: &Certificate, f: &F) -> Result<(), VerifyError> {
    let (n, r) = (cert.n, cert.r);
    if n < 2 || r < 2 {
        return Err(VerifyError::Malformed("n and r must be at least 2".into()));
    }
    match (cert.kind, &cert.witness) {
        (CertKind::AlgebraDim, Witness::Tuple { mats, .. }) => {
            let mats = unwrap_all::<F>(mats)?;
            if mats.len() != r || mats.iter().any(|m| m.shape() != (n, n)) {
                return Err(VerifyError::Witness(format!("expected {r} matrices of size {n}x{n}")));
            }
            let t = MatTuple::new(mats)?;
            if !is_commuting_tuple(&t) {
                return Err(VerifyError::Witness("tuple does not commute".into()));
            }
            if !t.mats().iter().all(is_nilpotent) {
                return Err(VerifyError::Witness("tuple entry is not nilpotent".into()));
            }
            expect_eq("threshold", n - 1, cert.threshold)?;
            expect_eq("algebra dimension", algebra_closure(&t).dim, cert.quantity)?;
            let claimed = algebra_semantics(f.spec(), &t.into_mats().into_iter().map(F::wrap).collect::<Vec<_>>());
            if claimed != cert.semantics {
                return Err(VerifyError::Witness(format!("semantics should read `{claimed}`")));
            }
        }
        (
            CertKind::ComponentDim,
            Witness::Rank {
                map,
                n: wn,
                r: wr,
                base_point,
                jacobian_shape,
                rank,
                ..
            },
        ) => {
            if *map != MapKind::ParabolicFamily || *wn != n || *wr != r {
                return Err(VerifyError::Witness("rank witness does not match (n, r)".into()));
            }
            let point = unwrap_all::<F>(base_point)?;
            let spec = MapSpec::parabolic(n, r).with_base_point(point);
            let w = param_rank(&spec, f, cert.seed).map_err(|e| VerifyError::Witness(e.to_string()))?;
            if w.jacobian_shape != *jacobian_shape {
                return Err(VerifyError::Witness("jacobian shape differs".into()));
            }
            expect_eq("rank", w.rank, *rank)?;
            expect_eq("threshold", formula_dims(n, r).dim_n_component, cert.threshold)?;
            expect_eq("quantity", w.rank, cert.quantity)?;
        }
        (
            CertKind::GammaDim,
            Witness::Gamma {
                s,
                coords,
                orbit_term,
                free_term,
                partner_term,
            },
        ) => {
            let s = *s;
            if s == 0 || n != 4 * s || r != 3 {
                return Err(VerifyError::Witness("Γ certificate needs n = 4s, r = 3".into()));
            }
            let c = unwrap_all::<F>(coords)?;
            let [a1, a2, a3, a4]: [Mat<F>; 4] = c
                .try_into()
                .map_err(|_| VerifyError::Malformed("Γ point needs four blocks".into()))?;
            let x = GammaCoords::new(a1, a2, a3, a4)?;
            if x.s() != s {
                return Err(VerifyError::Witness("Γ block size differs from s".into()));
            }
            let parts = gamma_family_dim_at(s, f, cert.seed, x)?;
            expect_eq("orbit term", parts.orbit_term, *orbit_term)?;
            expect_eq("free term", parts.free_term, *free_term)?;
            expect_eq("partner term", parts.partner_term, *partner_term)?;
            expect_eq("threshold", n * n + n - 2, cert.threshold)?;
            expect_eq("quantity", parts.dim_lower_bound, cert.quantity)?;
            if cert.verdict == Verdict::Reducible && !parts.generic {
                return Err(VerifyError::Witness("partner space is not generic at the Γ point".into()));
            }
        }
        (_, Witness::Empty) if cert.verdict != Verdict::Reducible => {
            return Ok(());
        }
        _ => return Err(VerifyError::Malformed("witness does not match certificate kind".into())),
    }
    let consistent = match cert.verdict {
        Verdict::Reducible => cert.quantity > cert.threshold,
        Verdict::NotFound => cert.quantity <= cert.threshold,
        Verdict::Unknown => true,
    };
    if !consistent {
        return Err(VerifyError::Verdict {
            verdict: cert.verdict.name(),
            quantity: cert.quantity,
            threshold: cert.threshold,
        });
    }
    Ok(())
}

/// One row of the known bounds on the least `n` with a reducible variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundsRow {
    /// `"3"` or `">=4"`.
    pub r: &'static str,
    /// `"n'_r"` for `C_r(N_n)`, `"n_r"` for `C_r(gl_n)`.
    pub quantity: &'static str,
    pub lower: usize,
    pub upper: usize,
}

pub fn bounds_ledger() -> Vec<BoundsRow> {
    alloc::vec![
        BoundsRow {
            r: ">=4",
            quantity: "n'_r",
            lower: 4,
            upper: 4,
        },
        BoundsRow {
            r: "3",
            quantity: "n'_r",
            lower: 4,
            upper: 16,
        },
        BoundsRow {
            r: ">=4",
            quantity: "n_r",
            lower: 4,
            upper: 4,
        },
        BoundsRow {
            r: "3",
            quantity: "n_r",
            lower: 11,
            upper: 29,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        let d = formula_dims(4, 4);
        assert_eq!((d.dim_n_component, d.dim_v_p), (21, 20));
        let d = formula_dims(4, 6);
        assert_eq!((d.dim_n_component, d.dim_v_p), (27, 28));
        let d = formula_dims(8, 4);
        assert_eq!((d.dim_n_component, d.dim_v_p), (77, 80));
        let d = formula_dims(1, 1);
        assert_eq!(
            (d.dim_n_component, d.dim_u_p, d.dim_v_p, d.lower_bound_nilpotent, d.dim_g_component),
            (0, 0, 0, 0, 1)
        );
        assert_eq!(formula_dims(2, 2).dim_n_component, 3);
    }

    #[test]
    fn ledger_rows() {
        let rows = bounds_ledger();
        assert!(rows.contains(&BoundsRow { r: ">=4", quantity: "n'_r", lower: 4, upper: 4 }));
        assert!(rows.contains(&BoundsRow { r: "3", quantity: "n'_r", lower: 4, upper: 16 }));
        assert!(rows.contains(&BoundsRow { r: "3", quantity: "n_r", lower: 11, upper: 29 }));
    }

    #[test]
    fn algebra_certificate_four_four() {
        let c = certify_algebra(4, 4, FieldSpec::default_prime(), 1, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::Reducible);
        assert_eq!((c.quantity, c.threshold), (4, 3));
        verify(&c).unwrap();
    }

    #[test]
    fn tampered_quantity_fails() {
        let mut c = certify_algebra(5, 5, FieldSpec::Rationals, 1, 4).unwrap();
        assert_eq!((c.quantity, c.threshold, c.verdict), (5, 4, Verdict::Reducible));
        c.quantity ^= 1;
        assert!(verify(&c).is_err());
    }

    #[test]
    fn small_n_never_certified() {
        for r in 2..=6 {
            let c = certify_algebra(3, r, FieldSpec::default_prime(), 9, 32).unwrap();
            assert_eq!(c.verdict, Verdict::NotFound, "r={r}");
            assert!(c.quantity <= 2);
            verify(&c).unwrap();
        }
    }
}
