//! Coefficient fields: the rationals and prime fields `F_p`.
//!
//! Every algorithm in the crate is generic over [`Field`]; the runtime choice
//! is carried by [`FieldSpec`] and resolved once at the entry points.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Default modulus for prime-field computations, the Mersenne prime `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Runtime description of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// A validated prime field. The modulus must be an odd prime.
    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| f.spec())
    }

    pub fn default_prime() -> Self {
        FieldSpec::Prime(DEFAULT_PRIME)
    }

    /// `None` for the rationals.
    pub fn characteristic(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    /// Checks the modulus invariant (prime, greater than 2).
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) => PrimeField::new(*p).map(|_| ()),
        }
    }

    /// Rejects prime fields whose characteristic does not exceed `n`.
    pub fn require_char_above(&self, n: usize) -> Result<()> {
        match self {
            FieldSpec::Prime(p) if *p <= n as u64 => Err(Error::SmallCharacteristic { p: *p, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `q`/`Q` and `fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let rest = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("Fp:"))
            .ok_or_else(|| Error::Parse(format!("unknown field spec `{s}`")))?;
        let p = rest
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad modulus in `{s}`")))?;
        FieldSpec::prime(p)
    }
}

/// Arithmetic in an exact coefficient field.
///
/// The field value itself carries any context the arithmetic needs (the
/// modulus for `F_p`), so elements stay plain data.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` on zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// One random element: uniform on `F_p`, uniform integer in `[-9, 9]` over Q.
    fn random(&self, rng: &mut Rng) -> Self::Elem;

    /// Canonical text form (`a/b` for rationals, the residue for `F_p`).
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// `a -= b * c`
    fn sub_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        let prod = self.mul(b, c);
        *a = self.sub(a, &prod);
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random(&self, rng: &mut Rng) -> BigRational {
        self.from_i64(rng.below(19) as i64 - 9)
    }
    fn format(&self, a: &BigRational) -> String {
        // Ratio keeps lowest terms with a positive denominator.
        format!("{}/{}", a.numer(), a.denom())
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let bad = || Error::Parse(format!("bad rational `{s}`"));
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() || den.is_negative() {
            return Err(bad());
        }
        Ok(BigRational::new(num, den))
    }
    fn sub_mul_assign(&self, a: &mut BigRational, b: &BigRational, c: &BigRational) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        *a -= b * c;
    }
}

/// The prime field `F_p`, residues stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces a machine integer into `[0, p)`.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    /// The representative of a residue in `(-p/2, p/2]`.
    pub fn symmetric_lift(&self, v: u64) -> i128 {
        if v > self.p / 2 {
            v as i128 - self.p as i128
        } else {
            v as i128
        }
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            exp >>= 1;
        }
        acc
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue below p")
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random(&self, rng: &mut Rng) -> u64 {
        rng.below(self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let v: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue `{s}`")))?;
        if v >= self.p {
            return Err(Error::Parse(format!("residue {v} not in [0, {})", self.p)));
        }
        Ok(v)
    }
    #[inline]
    fn sub_mul_assign(&self, a: &mut u64, b: &u64, c: &u64) {
        let prod = mulmod(*b, *c, self.p);
        *a = self.sub(a, &prod);
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b, n);
            }
            b = mulmod(b, b, n);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
