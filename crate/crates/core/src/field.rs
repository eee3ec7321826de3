//! Field descriptions and exact scalar arithmetic.
//!
//! Three kinds of field are supported: prime fields `GF(p)`, simple
//! extensions `GF(p)[x]/(m)` and `Q[x]/(m)` with `m` monic irreducible, and
//! the rationals `Q`. Towers deeper than one extension step are always
//! re-expressed over the prime field before use, so a field is fully
//! described by `(kind, p, k, modulus)`.
//!
//! Elements are coefficient vectors over the base field, little-endian in
//! the class of `x`. Arithmetic between elements of different fields is an
//! error, never a coercion; the checked methods on [`FieldElement`] return
//! [`FieldError::FieldMismatch`], and the operator impls panic on the same
//! condition.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

/// Errors arising from field construction and element arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 2 (got {0})")]
    BadDegree(usize),
    #[error("modulus must be monic of degree {expected}, got {got}")]
    BadModulus { expected: usize, got: String },
    #[error("modulus coefficient {0} does not lie in the base field")]
    BadModulusCoefficient(String),
    #[error("modulus {0} is reducible over the base field")]
    ReducibleModulus(String),
    #[error("the rationals admit no canonical default modulus; supply one explicitly")]
    NoDefaultModulus,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot enumerate an infinite field")]
    InfiniteField,
    #[error("field of order {0} is too large to enumerate")]
    EnumerationTooLarge(String),
    #[error("element {0} does not lie in the base field image")]
    NotInBase(String),
    #[error("no embedding from the given field into the target")]
    NoEmbedding,
    #[error("coefficient {got} out of range for characteristic {p}")]
    CoefficientRange { got: u64, p: u64 },
    #[error("denominator must be nonzero")]
    ZeroDenominator,
}

// ---------------------------------------------------------------------------
// u64 modular arithmetic
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn addm(p: u64, a: u64, b: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn subm(p: u64, a: u64, b: u64) -> u64 {
    let s = a as u128 + (p - b) as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn mulm(p: u64, a: u64, b: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn powm(p: u64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(p, acc, base);
        }
        base = mulm(p, base, base);
        exp >>= 1;
    }
    acc
}

/// Modular inverse by the extended Euclidean algorithm; `a` must be nonzero.
pub(crate) fn invm(p: u64, a: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of a noninvertible residue");
    (t0.rem_euclid(p as i128)) as u64
}

/// Deterministic Miller–Rabin primality for u64 (complete witness set).
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(n, a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(n, x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Base scalars: residues mod p, or arbitrary-precision rationals
// ---------------------------------------------------------------------------

/// One coefficient over the base field: a residue in `[0, p)` for prime
/// bases, or a reduced arbitrary-precision rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseScalar {
    Mod(u64),
    Rat(BigRational),
}

impl BaseScalar {
    pub fn rational_from_i64(num: i64, den: i64) -> Result<BaseScalar, FieldError> {
        if den == 0 {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(BaseScalar::Rat(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }
}

impl fmt::Display for BaseScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseScalar::Mod(r) => write!(f, "{r}"),
            BaseScalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

/// Base-field context: `p > 0` means `GF(p)`, `p == 0` means the rationals.
#[inline]
fn bzero(p: u64) -> BaseScalar {
    if p == 0 {
        BaseScalar::Rat(BigRational::zero())
    } else {
        BaseScalar::Mod(0)
    }
}

#[inline]
fn bone(p: u64) -> BaseScalar {
    if p == 0 {
        BaseScalar::Rat(BigRational::one())
    } else {
        BaseScalar::Mod(1 % p)
    }
}

fn badd(p: u64, a: &BaseScalar, b: &BaseScalar) -> BaseScalar {
    match (a, b) {
        (BaseScalar::Mod(x), BaseScalar::Mod(y)) => BaseScalar::Mod(addm(p, *x, *y)),
        (BaseScalar::Rat(x), BaseScalar::Rat(y)) => BaseScalar::Rat(x + y),
        _ => unreachable!("mixed base scalars"),
    }
}

fn bsub(p: u64, a: &BaseScalar, b: &BaseScalar) -> BaseScalar {
    match (a, b) {
        (BaseScalar::Mod(x), BaseScalar::Mod(y)) => BaseScalar::Mod(subm(p, *x, *y)),
        (BaseScalar::Rat(x), BaseScalar::Rat(y)) => BaseScalar::Rat(x - y),
        _ => unreachable!("mixed base scalars"),
    }
}

fn bmul(p: u64, a: &BaseScalar, b: &BaseScalar) -> BaseScalar {
    match (a, b) {
        (BaseScalar::Mod(x), BaseScalar::Mod(y)) => BaseScalar::Mod(mulm(p, *x, *y)),
        (BaseScalar::Rat(x), BaseScalar::Rat(y)) => BaseScalar::Rat(x * y),
        _ => unreachable!("mixed base scalars"),
    }
}

fn bneg(p: u64, a: &BaseScalar) -> BaseScalar {
    match a {
        BaseScalar::Mod(x) => BaseScalar::Mod(if *x == 0 { 0 } else { p - *x }),
        BaseScalar::Rat(x) => BaseScalar::Rat(-x),
    }
}

fn binv(p: u64, a: &BaseScalar) -> Option<BaseScalar> {
    match a {
        BaseScalar::Mod(x) => {
            if *x == 0 {
                None
            } else {
                Some(BaseScalar::Mod(invm(p, *x)))
            }
        }
        BaseScalar::Rat(x) => {
            if x.is_zero() {
                None
            } else {
                Some(BaseScalar::Rat(x.recip()))
            }
        }
    }
}

fn bis_zero(a: &BaseScalar) -> bool {
    match a {
        BaseScalar::Mod(x) => *x == 0,
        BaseScalar::Rat(x) => x.is_zero(),
    }
}

fn bcmp(a: &BaseScalar, b: &BaseScalar) -> Ordering {
    match (a, b) {
        (BaseScalar::Mod(x), BaseScalar::Mod(y)) => x.cmp(y),
        (BaseScalar::Rat(x), BaseScalar::Rat(y)) => x.cmp(y),
        _ => unreachable!("mixed base scalars"),
    }
}

// ---------------------------------------------------------------------------
// Base-coefficient polynomial helpers (used for extension arithmetic and
// the default-modulus search; all little-endian, trimmed on demand)
// ---------------------------------------------------------------------------

fn bvec_deg(v: &[BaseScalar]) -> Option<usize> {
    v.iter().rposition(|c| !bis_zero(c))
}

fn bvec_trim(mut v: Vec<BaseScalar>) -> Vec<BaseScalar> {
    while v.last().map(bis_zero).unwrap_or(false) {
        v.pop();
    }
    v
}

fn bvec_mul(p: u64, a: &[BaseScalar], b: &[BaseScalar]) -> Vec<BaseScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![bzero(p); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if bis_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = badd(p, &out[i + j], &bmul(p, ai, bj));
        }
    }
    bvec_trim(out)
}

/// Remainder of `a` modulo `m`; `m` must have an invertible leading
/// coefficient (always the case over a field when `m` is nonzero).
fn bvec_rem(p: u64, a: &[BaseScalar], m: &[BaseScalar]) -> Vec<BaseScalar> {
    let md = bvec_deg(m).expect("division by the zero polynomial");
    let lead_inv = binv(p, &m[md]).expect("leading coefficient not invertible");
    let mut r: Vec<BaseScalar> = a.to_vec();
    while let Some(rd) = bvec_deg(&r) {
        if rd < md {
            break;
        }
        let factor = bmul(p, &r[rd], &lead_inv);
        for j in 0..=md {
            let t = bmul(p, &factor, &m[j]);
            r[rd - md + j] = bsub(p, &r[rd - md + j], &t);
        }
    }
    bvec_trim(r)
}

/// Extended gcd: returns `(g, s)` with `g = gcd(a, m)` monic and
/// `s * a = g (mod m)`; used to invert extension elements.
fn bvec_half_xgcd(
    p: u64,
    a: &[BaseScalar],
    m: &[BaseScalar],
) -> (Vec<BaseScalar>, Vec<BaseScalar>) {
    let mut r0: Vec<BaseScalar> = m.to_vec();
    let mut r1: Vec<BaseScalar> = a.to_vec();
    let mut s0: Vec<BaseScalar> = Vec::new();
    let mut s1: Vec<BaseScalar> = vec![bone(p)];
    while bvec_deg(&r1).is_some() {
        // r0 = q * r1 + r  (long division, tracking only the s-line)
        let d1 = bvec_deg(&r1).unwrap();
        let lead_inv = binv(p, &r1[d1]).unwrap();
        let mut r = r0.clone();
        let mut q: Vec<BaseScalar> = Vec::new();
        while let Some(d0) = bvec_deg(&r) {
            if d0 < d1 {
                break;
            }
            let c = bmul(p, &r[d0], &lead_inv);
            if q.len() < d0 - d1 + 1 {
                q.resize(d0 - d1 + 1, bzero(p));
            }
            q[d0 - d1] = badd(p, &q[d0 - d1], &c);
            for j in 0..=d1 {
                let t = bmul(p, &c, &r1[j]);
                r[d0 - d1 + j] = bsub(p, &r[d0 - d1 + j], &t);
            }
        }
        let qs1 = bvec_mul(p, &q, &s1);
        let mut s = s0.clone();
        if s.len() < qs1.len() {
            s.resize(qs1.len(), bzero(p));
        }
        for (i, c) in qs1.iter().enumerate() {
            s[i] = bsub(p, &s[i], c);
        }
        r0 = bvec_trim(r1);
        r1 = bvec_trim(r);
        s0 = s1;
        s1 = bvec_trim(s);
    }
    // normalise g monic
    let d = bvec_deg(&r0).expect("gcd of zero polynomials");
    let li = binv(p, &r0[d]).unwrap();
    let g = r0.iter().map(|c| bmul(p, c, &li)).collect();
    let s = s0.iter().map(|c| bmul(p, c, &li)).collect();
    (g, s)
}

// ---------------------------------------------------------------------------
// Scalars: one element of whichever field
// ---------------------------------------------------------------------------

/// An element value, detached from its field. `Base` is used by prime and
/// rational fields; `Poly` (length exactly `k`) by extensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Base(BaseScalar),
    Poly(Vec<BaseScalar>),
}

// ---------------------------------------------------------------------------
// Field specifications
// ---------------------------------------------------------------------------

/// The three supported kinds of field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Extension,
    Rational,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Prime => "prime",
            FieldKind::Extension => "extension",
            FieldKind::Rational => "rational",
        }
    }
}

/// Full description of a field: kind, characteristic (`0` for rational
/// base), extension degree, and the monic modulus for extensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
    p: u64,
    k: usize,
    /// Little-endian, length `k + 1`, monic. `None` unless `kind` is
    /// `Extension`.
    modulus: Option<Vec<BaseScalar>>,
}

impl FieldSpec {
    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Characteristic of the base field; `0` when the base is `Q`.
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> Option<&[BaseScalar]> {
        self.modulus.as_deref()
    }

    pub fn is_finite(&self) -> bool {
        self.p != 0
    }

    /// Number of elements for finite fields, if it fits in `u128`.
    pub fn order(&self) -> Option<u128> {
        if self.p == 0 {
            return None;
        }
        let mut acc: u128 = 1;
        for _ in 0..self.k {
            acc = acc.checked_mul(self.p as u128)?;
        }
        Some(acc)
    }

    // -- scalar constructors ------------------------------------------------

    pub fn zero(&self) -> Scalar {
        match self.kind {
            FieldKind::Extension => Scalar::Poly(vec![bzero(self.p); self.k]),
            _ => Scalar::Base(bzero(self.p)),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.kind {
            FieldKind::Extension => {
                let mut v = vec![bzero(self.p); self.k];
                v[0] = bone(self.p);
                Scalar::Poly(v)
            }
            _ => Scalar::Base(bone(self.p)),
        }
    }

    pub fn from_u64(&self, n: u64) -> Scalar {
        let b = if self.p == 0 {
            BaseScalar::Rat(BigRational::from(BigInt::from(n)))
        } else {
            BaseScalar::Mod(n % self.p)
        };
        self.lift_base(b)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        let b = if self.p == 0 {
            BaseScalar::Rat(BigRational::from(BigInt::from(n)))
        } else {
            BaseScalar::Mod(n.rem_euclid(self.p as i64) as u64)
        };
        self.lift_base(b)
    }

    /// Class of `x` for extensions; equals `one()` on degree-1 fields.
    pub fn generator(&self) -> Scalar {
        match self.kind {
            FieldKind::Extension => {
                let mut v = vec![bzero(self.p); self.k];
                v[1] = bone(self.p);
                Scalar::Poly(v)
            }
            _ => self.one(),
        }
    }

    fn lift_base(&self, b: BaseScalar) -> Scalar {
        match self.kind {
            FieldKind::Extension => {
                let mut v = vec![bzero(self.p); self.k];
                v[0] = b;
                Scalar::Poly(v)
            }
            _ => Scalar::Base(b),
        }
    }

    // -- arithmetic ----------------------------------------------------------

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Base(x), Scalar::Base(y)) => Scalar::Base(badd(self.p, x, y)),
            (Scalar::Poly(x), Scalar::Poly(y)) => Scalar::Poly(
                x.iter()
                    .zip(y.iter())
                    .map(|(u, v)| badd(self.p, u, v))
                    .collect(),
            ),
            _ => unreachable!("mixed scalar shapes"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Base(x), Scalar::Base(y)) => Scalar::Base(bsub(self.p, x, y)),
            (Scalar::Poly(x), Scalar::Poly(y)) => Scalar::Poly(
                x.iter()
                    .zip(y.iter())
                    .map(|(u, v)| bsub(self.p, u, v))
                    .collect(),
            ),
            _ => unreachable!("mixed scalar shapes"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Base(x) => Scalar::Base(bneg(self.p, x)),
            Scalar::Poly(x) => Scalar::Poly(x.iter().map(|c| bneg(self.p, c)).collect()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Base(x), Scalar::Base(y)) => Scalar::Base(bmul(self.p, x, y)),
            (Scalar::Poly(x), Scalar::Poly(y)) => {
                let m = self.modulus.as_ref().expect("extension without modulus");
                let prod = bvec_mul(self.p, x, y);
                let mut red = bvec_rem(self.p, &prod, m);
                red.resize(self.k, bzero(self.p));
                Scalar::Poly(red)
            }
            _ => unreachable!("mixed scalar shapes"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        match a {
            Scalar::Base(x) => binv(self.p, x)
                .map(Scalar::Base)
                .ok_or(FieldError::DivisionByZero),
            Scalar::Poly(x) => {
                if self.is_zero(a) {
                    return Err(FieldError::DivisionByZero);
                }
                let m = self.modulus.as_ref().expect("extension without modulus");
                let (g, s) = bvec_half_xgcd(self.p, x, m);
                debug_assert_eq!(
                    bvec_deg(&g),
                    Some(0),
                    "modulus not coprime to a nonzero element"
                );
                let mut inv = bvec_rem(self.p, &s, m);
                inv.resize(self.k, bzero(self.p));
                Ok(Scalar::Poly(inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Base(x) => bis_zero(x),
            Scalar::Poly(x) => x.iter().all(bis_zero),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn pow_u64(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Deterministic total order on scalars: little-endian
    /// coefficient-lexicographic, residues by value, rationals numerically.
    pub fn scalar_cmp(&self, a: &Scalar, b: &Scalar) -> Ordering {
        match (a, b) {
            (Scalar::Base(x), Scalar::Base(y)) => bcmp(x, y),
            (Scalar::Poly(x), Scalar::Poly(y)) => {
                for (u, v) in x.iter().zip(y.iter()) {
                    let c = bcmp(u, v);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }
            _ => unreachable!("mixed scalar shapes"),
        }
    }

    /// Uniformly random element for finite fields; for rational kinds, a
    /// small random fraction (used only by search heuristics and tests).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        let pick = |rng: &mut R| -> BaseScalar {
            if self.p == 0 {
                let num = rng.gen_range(-9i64..=9);
                let den = rng.gen_range(1i64..=9);
                BaseScalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
            } else {
                BaseScalar::Mod(rng.gen_range(0..self.p))
            }
        };
        match self.kind {
            FieldKind::Extension => Scalar::Poly((0..self.k).map(|_| pick(rng)).collect()),
            _ => Scalar::Base(pick(rng)),
        }
    }

    /// Coefficient vector of length `k` over the base field.
    pub fn coefficients(&self, a: &Scalar) -> Vec<BaseScalar> {
        match a {
            Scalar::Base(x) => vec![x.clone()],
            Scalar::Poly(x) => x.clone(),
        }
    }

    /// Rebuilds a scalar from base coefficients (length must be `k`).
    pub fn from_coefficients(&self, coeffs: Vec<BaseScalar>) -> Result<Scalar, FieldError> {
        if coeffs.len() != self.k {
            return Err(FieldError::BadModulus {
                expected: self.k,
                got: format!("{} coefficients", coeffs.len()),
            });
        }
        for c in &coeffs {
            self.check_base(c)?;
        }
        match self.kind {
            FieldKind::Extension => Ok(Scalar::Poly(coeffs)),
            _ => Ok(Scalar::Base(coeffs.into_iter().next().unwrap())),
        }
    }

    fn check_base(&self, c: &BaseScalar) -> Result<(), FieldError> {
        match (self.p, c) {
            (0, BaseScalar::Rat(_)) => Ok(()),
            (p, BaseScalar::Mod(r)) if p > 0 => {
                if *r < p {
                    Ok(())
                } else {
                    Err(FieldError::CoefficientRange { got: *r, p })
                }
            }
            _ => Err(FieldError::BadModulusCoefficient(format!("{c}"))),
        }
    }

    /// The constant coefficient if all higher coefficients vanish.
    pub fn project_to_base(&self, a: &Scalar) -> Option<BaseScalar> {
        match a {
            Scalar::Base(x) => Some(x.clone()),
            Scalar::Poly(x) => {
                if x[1..].iter().all(bis_zero) {
                    Some(x[0].clone())
                } else {
                    None
                }
            }
        }
    }

    /// Element at `index` in the canonical enumeration (base-`p` digits,
    /// little-endian); only meaningful for finite fields.
    fn element_at(&self, mut index: u64) -> Scalar {
        match self.kind {
            FieldKind::Extension => {
                // digits arranged so that enumeration order coincides with
                // the lexicographic order on coefficient vectors (c0 first)
                let mut v = vec![BaseScalar::Mod(0); self.k];
                for j in (0..self.k).rev() {
                    v[j] = BaseScalar::Mod(index % self.p);
                    index /= self.p;
                }
                Scalar::Poly(v)
            }
            _ => Scalar::Base(BaseScalar::Mod(index)),
        }
    }
}

fn display_scalar(spec: &FieldSpec, a: &Scalar) -> String {
    match a {
        Scalar::Base(b) => match b {
            BaseScalar::Mod(r) => format!("{r}"),
            BaseScalar::Rat(q) => format!("{}/{}", q.numer(), q.denom()),
        },
        Scalar::Poly(v) => {
            let coeffs: Vec<String> = v
                .iter()
                .map(|c| match c {
                    BaseScalar::Mod(r) => format!("{r}"),
                    BaseScalar::Rat(q) => format!("{}/{}", q.numer(), q.denom()),
                })
                .collect();
            let _ = spec;
            format!("({})", coeffs.join(","))
        }
    }
}

// ---------------------------------------------------------------------------
// Field: shared, validated handle
// ---------------------------------------------------------------------------

/// A validated, cheaply clonable field handle. Equality is structural.
#[derive(Clone, Debug, Eq)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl std::ops::Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Prime => write!(f, "GF({})", self.characteristic()),
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Extension => {
                let m = self
                    .modulus()
                    .unwrap()
                    .iter()
                    .map(|c| format!("{c}"))
                    .collect::<Vec<_>>()
                    .join(",");
                if self.characteristic() == 0 {
                    write!(f, "Q[x]/({m})")
                } else {
                    write!(f, "GF({}^{})[{m}]", self.characteristic(), self.degree())
                }
            }
        }
    }
}

impl Field {
    /// The rationals.
    pub fn rationals() -> Field {
        Field(Arc::new(FieldSpec {
            kind: FieldKind::Rational,
            p: 0,
            k: 1,
            modulus: None,
        }))
    }

    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime_u64(p) {
            return Err(FieldError::NonPrime(p));
        }
        Ok(Field(Arc::new(FieldSpec {
            kind: FieldKind::Prime,
            p,
            k: 1,
            modulus: None,
        })))
    }

    /// `GF(p^k)`. With `k == 1` this is the prime field. When `modulus` is
    /// absent and `k > 1`, the lexicographically smallest monic irreducible
    /// of degree `k` (little-endian coefficient order) is installed.
    pub fn finite(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Field, FieldError> {
        if !is_prime_u64(p) {
            return Err(FieldError::NonPrime(p));
        }
        if k == 1 {
            return match modulus {
                None => Field::prime(p),
                Some(_) => Err(FieldError::BadDegree(1)),
            };
        }
        let coeffs = match modulus {
            Some(v) => {
                let mut out = Vec::with_capacity(v.len());
                for c in v {
                    if c >= p {
                        return Err(FieldError::CoefficientRange { got: c, p });
                    }
                    out.push(BaseScalar::Mod(c));
                }
                Some(out)
            }
            None => None,
        };
        Field::create(FieldKind::Extension, p, k, coeffs)
    }

    /// `Q[x]/(m)` for a monic irreducible `m` (little-endian rational
    /// coefficients, leading coefficient 1). A modulus is required: there
    /// is no canonical smallest irreducible over an infinite base.
    pub fn rational_extension(modulus: Vec<BigRational>) -> Result<Field, FieldError> {
        let k = modulus.len().saturating_sub(1);
        Field::create(
            FieldKind::Extension,
            0,
            k,
            Some(modulus.into_iter().map(BaseScalar::Rat).collect()),
        )
    }

    /// General constructor matching the serialized field description.
    pub fn create(
        kind: FieldKind,
        p: u64,
        k: usize,
        modulus: Option<Vec<BaseScalar>>,
    ) -> Result<Field, FieldError> {
        match kind {
            FieldKind::Prime => {
                if k != 1 || modulus.is_some() {
                    return Err(FieldError::BadDegree(k));
                }
                Field::prime(p)
            }
            FieldKind::Rational => {
                if p != 0 || k != 1 || modulus.is_some() {
                    return Err(FieldError::BadDegree(k));
                }
                Ok(Field::rationals())
            }
            FieldKind::Extension => {
                if k < 2 {
                    return Err(FieldError::BadDegree(k));
                }
                if p != 0 && !is_prime_u64(p) {
                    return Err(FieldError::NonPrime(p));
                }
                let coeffs = match modulus {
                    Some(c) => c,
                    None => {
                        if p == 0 {
                            return Err(FieldError::NoDefaultModulus);
                        }
                        smallest_irreducible(p, k)
                    }
                };
                let spec = FieldSpec {
                    kind: FieldKind::Extension,
                    p,
                    k,
                    modulus: Some(coeffs),
                };
                validate_modulus(&spec)?;
                Ok(Field(Arc::new(spec)))
            }
        }
    }

    /// The base field (`GF(p)` or `Q`) of this field.
    pub fn base(&self) -> Field {
        if self.characteristic() == 0 {
            Field::rationals()
        } else {
            Field::prime(self.characteristic()).expect("validated at construction")
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    // -- element constructors ------------------------------------------------

    pub fn el_zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: self.zero(),
        }
    }

    pub fn el_one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: self.one(),
        }
    }

    pub fn el_from_u64(&self, n: u64) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: self.from_u64(n),
        }
    }

    pub fn el_from_i64(&self, n: i64) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: self.from_i64(n),
        }
    }

    /// Class of `x` in an extension.
    pub fn el_generator(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: self.generator(),
        }
    }

    pub fn el_from_coefficients(
        &self,
        coeffs: Vec<BaseScalar>,
    ) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            field: self.clone(),
            value: self.from_coefficients(coeffs)?,
        })
    }

    pub(crate) fn el(&self, value: Scalar) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    pub fn el_random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: self.random(rng),
        }
    }

    /// Deterministic enumeration of a finite field: `0, 1, ...` by
    /// little-endian base-`p` digits of the index.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = FieldElement> + '_, FieldError> {
        let order = self.order().ok_or(FieldError::InfiniteField)?;
        if order > u32::MAX as u128 {
            return Err(FieldError::EnumerationTooLarge(order.to_string()));
        }
        Ok((0..order as u64).map(move |i| self.el(self.element_at(i))))
    }
}

/// Embeds a base-field element into an extension of that base (or returns
/// it unchanged when the target is the base itself).
pub fn embed_base(x: &FieldElement, target: &Field) -> Result<FieldElement, FieldError> {
    if x.field() == target {
        return Ok(x.clone());
    }
    if x.field() != &target.base() {
        return Err(FieldError::NoEmbedding);
    }
    let Scalar::Base(b) = &x.value else {
        return Err(FieldError::NoEmbedding);
    };
    Ok(target.el(target.lift_base(b.clone())))
}

// ---------------------------------------------------------------------------
// Default modulus search and validation
// ---------------------------------------------------------------------------

/// Lexicographically smallest monic irreducible of degree `k` over `GF(p)`
/// (little-endian coefficient order). Deterministic.
fn smallest_irreducible(p: u64, k: usize) -> Vec<BaseScalar> {
    let total = (p as u128).checked_pow(k as u32).expect("degree too large");
    // scan monic candidates in lexicographic order on (c0, .., c_{k-1})
    for idx in 0..total {
        let mut rest = idx;
        let mut coeffs = vec![BaseScalar::Mod(0); k + 1];
        coeffs[k] = BaseScalar::Mod(1);
        for j in (0..k).rev() {
            coeffs[j] = BaseScalar::Mod((rest % p as u128) as u64);
            rest /= p as u128;
        }
        if base_poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Rabin's irreducibility test over `GF(p)` on base-coefficient vectors.
fn base_poly_is_irreducible(p: u64, f: &[BaseScalar]) -> bool {
    let n = match bvec_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    // x^(p^n) == x mod f, and gcd(x^(p^(n/l)) - x, f) == 1 for prime l | n.
    let x = vec![bzero(p), bone(p)];
    let frob = |e: u32| -> Vec<BaseScalar> {
        // x^(p^e) mod f by iterated p-th powering
        let mut acc = x.clone();
        for _ in 0..e {
            acc = bvec_powmod(p, &acc, p, f);
        }
        acc
    };
    let mut m = n;
    let mut primes = Vec::new();
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for l in primes {
        let h = frob((n / l) as u32);
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, bzero(p));
        }
        diff[1] = bsub(p, &diff[1], &bone(p));
        let diff = bvec_trim(diff);
        if bvec_deg(&diff).is_none() {
            return false; // x^(p^(n/l)) == x: proper-degree factors exist
        }
        let (g, _) = bvec_half_xgcd(p, &diff, f);
        if bvec_deg(&g) != Some(0) {
            return false;
        }
    }
    let h = frob(n as u32);
    let mut diff = h;
    if diff.len() < 2 {
        diff.resize(2, bzero(p));
    }
    diff[1] = bsub(p, &diff[1], &bone(p));
    bvec_deg(&bvec_trim(diff)).is_none()
}

/// `a^e mod f` over `GF(p)` for u64 exponents.
fn bvec_powmod(p: u64, a: &[BaseScalar], mut e: u64, f: &[BaseScalar]) -> Vec<BaseScalar> {
    let mut acc = vec![bone(p)];
    let mut base = bvec_rem(p, a, f);
    while e > 0 {
        if e & 1 == 1 {
            acc = bvec_rem(p, &bvec_mul(p, &acc, &base), f);
        }
        base = bvec_rem(p, &bvec_mul(p, &base, &base), f);
        e >>= 1;
    }
    acc
}

fn validate_modulus(spec: &FieldSpec) -> Result<(), FieldError> {
    let m = spec.modulus.as_ref().unwrap();
    let describe = || {
        m.iter()
            .map(|c| format!("{c}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    if m.len() != spec.k + 1 {
        return Err(FieldError::BadModulus {
            expected: spec.k,
            got: format!("{} coefficients", m.len()),
        });
    }
    for c in m {
        match (spec.p, c) {
            (0, BaseScalar::Rat(_)) => {}
            (p, BaseScalar::Mod(r)) if p > 0 => {
                if *r >= p {
                    return Err(FieldError::CoefficientRange { got: *r, p });
                }
            }
            _ => return Err(FieldError::BadModulusCoefficient(format!("{c}"))),
        }
    }
    let leading_one = match &m[spec.k] {
        BaseScalar::Mod(r) => *r == 1,
        BaseScalar::Rat(q) => q.is_one(),
    };
    if !leading_one {
        return Err(FieldError::BadModulus {
            expected: spec.k,
            got: format!("non-monic ({})", describe()),
        });
    }
    let irreducible = if spec.p > 0 {
        base_poly_is_irreducible(spec.p, m)
    } else {
        rational_modulus_is_irreducible(m)?
    };
    if !irreducible {
        return Err(FieldError::ReducibleModulus(describe()));
    }
    Ok(())
}

/// Irreducibility over `Q` for modulus validation. Complete for degree <= 3
/// via the rational root theorem; for higher degrees a factor-degree
/// certificate modulo several primes is attempted, and failure to conclude
/// is reported as reducible-unknown via `ReducibleModulus`.
fn rational_modulus_is_irreducible(m: &[BaseScalar]) -> Result<bool, FieldError> {
    let coeffs: Vec<BigRational> = m
        .iter()
        .map(|c| match c {
            BaseScalar::Rat(q) => q.clone(),
            BaseScalar::Mod(_) => unreachable!("validated earlier"),
        })
        .collect();
    match crate::poly::rational_irreducible(&coeffs) {
        Some(answer) => Ok(answer),
        None => Err(FieldError::ReducibleModulus(
            "irreducibility over Q could not be decided for this degree".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// FieldElement: value + owning field handle
// ---------------------------------------------------------------------------

/// An element bundled with its field. All arithmetic checks field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Scalar,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub(crate) fn value(&self) -> &Scalar {
        &self.value
    }

    pub(crate) fn into_value(self) -> Scalar {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.field.is_one(&self.value)
    }

    pub fn coefficients(&self) -> Vec<BaseScalar> {
        self.field.coefficients(&self.value)
    }

    /// The constant coefficient when the element lies in the base image.
    pub fn project_to_base(&self) -> Result<FieldElement, FieldError> {
        match self.field.project_to_base(&self.value) {
            Some(b) => Ok(self.field.base().el(Scalar::Base(b))),
            None => Err(FieldError::NotInBase(format!("{self}"))),
        }
    }

    pub fn is_in_base(&self) -> bool {
        self.field.project_to_base(&self.value).is_some()
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.el(self.field.add(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.el(self.field.sub(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.el(self.field.mul(&self.value, &other.value)))
    }

    pub fn checked_inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.field.el(self.field.inv(&self.value)?))
    }

    pub fn checked_neg(&self) -> FieldElement {
        self.field.el(self.field.neg(&self.value))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.el(self.field.pow_u64(&self.value, e))
    }

    /// Canonical comparison used wherever a deterministic element order is
    /// needed (eigenvalue canonicalization, tie-breaking).
    pub fn canonical_cmp(&self, other: &FieldElement) -> Ordering {
        assert!(
            self.field == other.field,
            "canonical_cmp across different fields"
        );
        self.field.scalar_cmp(&self.value, &other.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_scalar(&self.field, &self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", display_scalar(&self.field, &self.value), self.field)
    }
}

macro_rules! element_binop {
    ($trait:ident, $method:ident, $checked:ident, $what:literal) => {
        impl std::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!(concat!($what, ": {}"), e))
            }
        }
    };
}

element_binop!(Add, add, checked_add, "element addition");
element_binop!(Sub, sub, checked_sub, "element subtraction");
element_binop!(Mul, mul, checked_mul, "element multiplication");

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.checked_neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn gf9_default_modulus_is_x2_plus_1() {
        let f = Field::finite(3, 2, None).unwrap();
        // Independent check: scan all monic quadratics over GF(3) in
        // little-endian lexicographic order and find the first with no root.
        let mut expected = None;
        'outer: for c0 in 0u64..3 {
            for c1 in 0u64..3 {
                let has_root = (0u64..3).any(|t| (t * t + c1 * t + c0) % 3 == 0);
                if !has_root {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(expected, Some(vec![1, 0, 1]), "hand oracle: x^2+1");
        let m: Vec<u64> = f
            .modulus()
            .unwrap()
            .iter()
            .map(|c| match c {
                BaseScalar::Mod(r) => *r,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(m, vec![1, 0, 1]);
    }

    #[test]
    fn gf9_generator_squares_to_minus_one() {
        let f = Field::finite(3, 2, None).unwrap();
        let i = f.el_generator();
        let one_plus_i = &f.el_one() + &i;
        let sq = &one_plus_i * &one_plus_i;
        // (1+i)^2 = 2i over GF(9) with i^2 = -1
        let two_i = &f.el_from_u64(2) * &i;
        assert_eq!(sq, two_i);
    }

    #[test]
    fn x2_plus_1_reducible_over_gf2() {
        let err = Field::finite(2, 2, Some(vec![1, 0, 1])).unwrap_err();
        assert!(matches!(err, FieldError::ReducibleModulus(_)));
    }

    #[test]
    fn inverses_match_hand_values() {
        let f3 = gf(3);
        assert_eq!(
            f3.el_from_u64(2).checked_inv().unwrap(),
            f3.el_from_u64(2),
            "2 * 2 = 4 = 1 mod 3"
        );
        let q = Field::rationals();
        let three_quarters = q
            .el_from_coefficients(vec![BaseScalar::rational_from_i64(3, 4).unwrap()])
            .unwrap();
        let four_thirds = q
            .el_from_coefficients(vec![BaseScalar::rational_from_i64(4, 3).unwrap()])
            .unwrap();
        assert_eq!(three_quarters.checked_inv().unwrap(), four_thirds);
        assert!(matches!(
            q.el_zero().checked_inv(),
            Err(FieldError::DivisionByZero)
        ));
    }

    #[test]
    fn embedding_is_constant_coefficient() {
        let f3 = gf(3);
        let f9 = Field::finite(3, 2, None).unwrap();
        let two = f3.el_from_u64(2);
        let embedded = embed_base(&two, &f9).unwrap();
        assert_eq!(
            embedded.coefficients(),
            vec![BaseScalar::Mod(2), BaseScalar::Mod(0)]
        );
        // embedding into the base itself is the identity
        assert_eq!(embed_base(&two, &f3).unwrap(), two);
        // no embedding from GF(3) into GF(4)
        let f4 = Field::finite(2, 2, None).unwrap();
        assert!(embed_base(&two, &f4).is_err());
    }

    #[test]
    fn enumeration_is_deterministic_and_complete() {
        let f2 = gf(2);
        let elems: Vec<_> = f2.enumerate().unwrap().collect();
        assert_eq!(elems, vec![f2.el_zero(), f2.el_one()]);

        let f4 = Field::finite(2, 2, None).unwrap();
        let elems: Vec<_> = f4.enumerate().unwrap().collect();
        assert_eq!(elems.len(), 4);
        assert_eq!(elems[0], f4.el_zero());
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert_ne!(elems[i], elems[j], "enumeration must be duplicate-free");
            }
        }

        let f9 = Field::finite(3, 2, None).unwrap();
        let elems: Vec<_> = f9.enumerate().unwrap().collect();
        assert_eq!(elems.len(), 9);
        for i in 0..9 {
            for j in (i + 1)..9 {
                assert_ne!(elems[i], elems[j]);
            }
        }

        assert!(matches!(
            Field::rationals().enumerate().map(|_| ()),
            Err(FieldError::InfiniteField)
        ));
    }

    #[test]
    fn mismatched_fields_error_rather_than_coerce() {
        let a = gf(3).el_one();
        let b = gf(5).el_one();
        assert!(matches!(
            a.checked_add(&b),
            Err(FieldError::FieldMismatch)
        ));
    }

    #[test]
    fn non_prime_characteristic_rejected() {
        assert!(matches!(Field::prime(6), Err(FieldError::NonPrime(6))));
        assert!(matches!(
            Field::finite(10, 2, None),
            Err(FieldError::NonPrime(10))
        ));
    }

    fn test_fields() -> Vec<Field> {
        vec![
            gf(2),
            gf(3),
            gf(7),
            Field::finite(2, 2, None).unwrap(),
            Field::finite(3, 2, None).unwrap(),
            Field::finite(2, 3, None).unwrap(),
            Field::rationals(),
            Field::rational_extension(vec![
                BigRational::from(BigInt::from(-2)),
                BigRational::zero(),
                BigRational::one(),
            ])
            .unwrap(),
        ]
    }

    #[test]
    fn field_axioms_on_random_triples() {
        for field in test_fields() {
            let mut rng = ChaCha12Rng::seed_from_u64(0x5eed_f1e1d);
            for _ in 0..1000 {
                let a = field.el_random(&mut rng);
                let b = field.el_random(&mut rng);
                let c = field.el_random(&mut rng);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c), "associativity (+)");
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c), "associativity (*)");
                assert_eq!(&a + &b, &b + &a, "commutativity (+)");
                assert_eq!(&a * &b, &b * &a, "commutativity (*)");
                assert_eq!(
                    &a * &(&b + &c),
                    &(&a * &b) + &(&a * &c),
                    "distributivity"
                );
                assert_eq!(&a + &field.el_zero(), a, "additive identity");
                assert_eq!(&a * &field.el_one(), a, "multiplicative identity");
                assert_eq!(&a + &(-&a), field.el_zero(), "additive inverse");
                if !a.is_zero() {
                    assert_eq!(
                        &a * &a.checked_inv().unwrap(),
                        field.el_one(),
                        "multiplicative inverse in {field}"
                    );
                }
            }
        }
    }

    #[test]
    fn default_modulus_search_is_reproducible() {
        for (p, k) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let a = Field::finite(p, k, None).unwrap();
            let b = Field::finite(p, k, None).unwrap();
            assert_eq!(a.modulus(), b.modulus(), "GF({p}^{k}) modulus must be stable");
            assert_eq!(a, b);
        }
    }

    #[test]
    fn embedding_respects_field_operations() {
        let cases = vec![
            (gf(3), Field::finite(3, 2, None).unwrap()),
            (gf(2), Field::finite(2, 3, None).unwrap()),
            (
                Field::rationals(),
                Field::rational_extension(vec![
                    BigRational::from(BigInt::from(-2)),
                    BigRational::zero(),
                    BigRational::one(),
                ])
                .unwrap(),
            ),
        ];
        for (base, ext) in cases {
            let mut rng = ChaCha12Rng::seed_from_u64(7);
            for _ in 0..100 {
                let a = base.el_random(&mut rng);
                let b = base.el_random(&mut rng);
                let ea = embed_base(&a, &ext).unwrap();
                let eb = embed_base(&b, &ext).unwrap();
                assert_eq!(embed_base(&(&a * &b), &ext).unwrap(), &ea * &eb);
                assert_eq!(embed_base(&(&a + &b), &ext).unwrap(), &ea + &eb);
            }
        }
    }

    #[test]
    fn canonical_order_is_total_and_stable() {
        let f9 = Field::finite(3, 2, None).unwrap();
        let elems: Vec<_> = f9.enumerate().unwrap().collect();
        let mut sorted = elems.clone();
        sorted.sort_by(|a, b| a.canonical_cmp(b));
        // enumeration order coincides with the canonical coefficient order
        assert_eq!(sorted, elems);
    }
}
