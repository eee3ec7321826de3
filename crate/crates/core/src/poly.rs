//! Univariate polynomials over any supported field: exact arithmetic,
//! gcds, modular exponentiation, irreducibility tests, and root finding.
//!
//! Coefficients are little-endian and kept trimmed (no trailing zeros), so
//! the zero polynomial has an empty coefficient vector and `degree()` is
//! `None`. Root searches report whether they are *complete*: over finite
//! fields and the rationals they always are (up to an explicit divisor
//! budget for huge integer coefficients); over number fields only roots in
//! the embedded rational image are found, and a nonconstant remainder is
//! reported as an incomplete search rather than as "no roots".

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::field::{embed_base, BaseScalar, Field, FieldElement, FieldKind, Scalar};
use crate::field::{is_prime_u64, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials belong to different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("irreducibility over this field cannot be decided at degree {0}")]
    Undecidable(usize),
}

// ---------------------------------------------------------------------------
// Free helpers on raw coefficient vectors
// ---------------------------------------------------------------------------

pub(crate) fn ptrim(spec: &FieldSpec, mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().map(|c| spec.is_zero(c)).unwrap_or(false) {
        v.pop();
    }
    v
}

pub(crate) fn pdeg(v: &[Scalar]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn padd(spec: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| spec.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| spec.zero());
        out.push(spec.add(&x, &y));
    }
    ptrim(spec, out)
}

pub(crate) fn psub(spec: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| spec.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| spec.zero());
        out.push(spec.sub(&x, &y));
    }
    ptrim(spec, out)
}

pub(crate) fn pmul(spec: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![spec.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if spec.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = spec.mul(ai, bj);
            out[i + j] = spec.add(&out[i + j], &t);
        }
    }
    ptrim(spec, out)
}

pub(crate) fn pscale(spec: &FieldSpec, a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    ptrim(spec, a.iter().map(|x| spec.mul(x, c)).collect())
}

/// Quotient and remainder; the divisor must be nonzero.
pub(crate) fn pdivrem(
    spec: &FieldSpec,
    a: &[Scalar],
    b: &[Scalar],
) -> Result<(Vec<Scalar>, Vec<Scalar>), PolyError> {
    let bd = pdeg(b).ok_or(PolyError::DivisionByZero)?;
    let lead_inv = spec
        .inv(&b[bd])
        .expect("nonzero polynomial has invertible leading coefficient");
    let mut r: Vec<Scalar> = a.to_vec();
    let mut q: Vec<Scalar> = Vec::new();
    while let Some(rd) = pdeg(&ptrim(spec, r.clone())) {
        r = ptrim(spec, r);
        if rd < bd {
            break;
        }
        let c = spec.mul(&r[rd], &lead_inv);
        if q.len() < rd - bd + 1 {
            q.resize(rd - bd + 1, spec.zero());
        }
        q[rd - bd] = spec.add(&q[rd - bd], &c);
        for j in 0..=bd {
            let t = spec.mul(&c, &b[j]);
            r[rd - bd + j] = spec.sub(&r[rd - bd + j], &t);
        }
    }
    Ok((ptrim(spec, q), ptrim(spec, r)))
}

/// Monic gcd.
pub(crate) fn pgcd(spec: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r0 = ptrim(spec, a.to_vec());
    let mut r1 = ptrim(spec, b.to_vec());
    while !r1.is_empty() {
        let (_, rem) = pdivrem(spec, &r0, &r1).unwrap();
        r0 = r1;
        r1 = rem;
    }
    pmonic(spec, r0)
}

pub(crate) fn pmonic(spec: &FieldSpec, v: Vec<Scalar>) -> Vec<Scalar> {
    match pdeg(&v) {
        None => v,
        Some(d) => {
            if spec.is_one(&v[d]) {
                v
            } else {
                let inv = spec.inv(&v[d]).unwrap();
                pscale(spec, &v, &inv)
            }
        }
    }
}

pub(crate) fn peval(spec: &FieldSpec, f: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = spec.zero();
    for c in f.iter().rev() {
        acc = spec.mul(&acc, x);
        acc = spec.add(&acc, c);
    }
    acc
}

pub(crate) fn pderiv(spec: &FieldSpec, f: &[Scalar]) -> Vec<Scalar> {
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(f.len() - 1);
    for (i, c) in f.iter().enumerate().skip(1) {
        let n = spec.from_u64(i as u64);
        out.push(spec.mul(&n, c));
    }
    ptrim(spec, out)
}

/// `base^exp mod m` with an arbitrary-precision exponent.
pub(crate) fn pmodpow(
    spec: &FieldSpec,
    base: &[Scalar],
    exp: &BigUint,
    m: &[Scalar],
) -> Vec<Scalar> {
    if exp.is_zero() {
        return vec![spec.one()];
    }
    let (_, base_red) = pdivrem(spec, base, m).unwrap();
    let mut acc = vec![spec.one()];
    for ch in exp.to_str_radix(2).chars() {
        acc = pdivrem(spec, &pmul(spec, &acc, &acc), m).unwrap().1;
        if ch == '1' {
            acc = pdivrem(spec, &pmul(spec, &acc, &base_red), m).unwrap().1;
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Polynomial: public wrapper
// ---------------------------------------------------------------------------

/// A polynomial bound to its coefficient field. Little-endian, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(field: &Field, coeffs: Vec<FieldElement>) -> Result<Polynomial, PolyError> {
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field() != field {
                return Err(PolyError::FieldMismatch);
            }
            raw.push(c.into_value());
        }
        Ok(Polynomial {
            field: field.clone(),
            coeffs: ptrim(field.spec(), raw),
        })
    }

    pub(crate) fn from_scalars(field: &Field, coeffs: Vec<Scalar>) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: ptrim(field.spec(), coeffs),
        }
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: vec![field.one()],
        }
    }

    pub fn x(field: &Field) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    /// `x - r`
    pub fn linear_root(r: &FieldElement) -> Polynomial {
        let f = r.field().clone();
        let neg = f.neg(r.value());
        Polynomial {
            field: f.clone(),
            coeffs: vec![neg, f.one()],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> Option<usize> {
        pdeg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        let v = self
            .coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero());
        self.field.el(v)
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs
            .iter()
            .map(|c| self.field.el(c.clone()))
            .collect()
    }

    pub(crate) fn scalars(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        match pdeg(&self.coeffs) {
            None => false,
            Some(d) => self.field.is_one(&self.coeffs[d]),
        }
    }

    pub fn monic(&self) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            coeffs: pmonic(self.field.spec(), self.coeffs.clone()),
        }
    }

    fn check(&self, other: &Polynomial) {
        assert!(
            self.field == other.field,
            "polynomial arithmetic across different fields"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        Polynomial {
            field: self.field.clone(),
            coeffs: padd(self.field.spec(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        Polynomial {
            field: self.field.clone(),
            coeffs: psub(self.field.spec(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        Polynomial {
            field: self.field.clone(),
            coeffs: pmul(self.field.spec(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn divrem(&self, other: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.check(other);
        let (q, r) = pdivrem(self.field.spec(), &self.coeffs, &other.coeffs)?;
        Ok((
            Polynomial {
                field: self.field.clone(),
                coeffs: q,
            },
            Polynomial {
                field: self.field.clone(),
                coeffs: r,
            },
        ))
    }

    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        Polynomial {
            field: self.field.clone(),
            coeffs: pgcd(self.field.spec(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn lcm(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let g = self.gcd(other);
        let (q, r) = self.divrem(&g).unwrap();
        debug_assert!(r.is_zero());
        q.mul(other).monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        assert!(x.field() == &self.field, "evaluation point field mismatch");
        self.field
            .el(peval(self.field.spec(), &self.coeffs, x.value()))
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            coeffs: pderiv(self.field.spec(), &self.coeffs),
        }
    }

    /// True when `gcd(f, f') = 1`, i.e. no repeated factors.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return false;
                }
                self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// Maps coefficients of a base-field polynomial into an extension.
    pub fn embed(&self, target: &Field) -> Result<Polynomial, crate::field::FieldError> {
        let coeffs = self
            .coefficients()
            .into_iter()
            .map(|c| embed_base(&c, target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(target, coeffs).expect("embedded coefficients share the target field"))
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = format!("{}", self.field.el(c.clone()));
            let part = match i {
                0 => cs,
                1 => {
                    if self.field.is_one(c) {
                        "x".into()
                    } else {
                        format!("({cs})*x")
                    }
                }
                _ => {
                    if self.field.is_one(c) {
                        format!("x^{i}")
                    } else {
                        format!("({cs})*x^{i}")
                    }
                }
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Roots found in the coefficient field, with multiplicities, plus a flag
/// recording whether the search provably found *all* roots in that field.
#[derive(Clone, Debug)]
pub struct RootSearch {
    pub roots: Vec<(FieldElement, usize)>,
    pub complete: bool,
}

/// All roots of `f` in its coefficient field. See module docs for the
/// meaning of `complete`.
pub fn roots_in_field(f: &Polynomial) -> RootSearch {
    let field = f.field().clone();
    let mut work = f.monic();
    let mut roots: Vec<(FieldElement, usize)> = Vec::new();
    let mut complete = true;

    let mut try_root = |work: &mut Polynomial, r: FieldElement| {
        let mut mult = 0usize;
        let lin = Polynomial::linear_root(&r);
        loop {
            let (q, rem) = work.divrem(&lin).unwrap();
            if rem.is_zero() {
                *work = q;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    };

    match work.degree() {
        None | Some(0) => {
            return RootSearch {
                roots,
                complete: true,
            }
        }
        _ => {}
    }

    if field.is_finite() {
        let order = field.order().expect("finite field has an order");
        if order <= 4096 {
            for candidate in field.enumerate().expect("small field enumerates") {
                if work.degree() == Some(0) {
                    break;
                }
                if work.eval(&candidate).is_zero() {
                    try_root(&mut work, candidate);
                }
            }
        } else {
            // gcd with x^(p^k) - x isolates the product of in-field linear
            // factors; then scan for the few actual roots.
            let spec = field.spec();
            let q = BigUint::from(field.characteristic()).pow(field.degree() as u32);
            let xq = pmodpow(spec, &[spec.zero(), spec.one()], &q, work.scalars());
            let diff = psub(spec, &xq, &[spec.zero(), spec.one()]);
            let g = Polynomial::from_scalars(&field, pgcd(spec, &diff, work.scalars()));
            if let Some(gd) = g.degree() {
                if gd >= 1 {
                    match field.enumerate() {
                        Ok(iter) => {
                            let mut found = 0usize;
                            for candidate in iter {
                                if found == gd {
                                    break;
                                }
                                if g.eval(&candidate).is_zero() {
                                    found += 1;
                                    try_root(&mut work, candidate);
                                }
                            }
                            if found < gd {
                                complete = false;
                            }
                        }
                        Err(_) => complete = false,
                    }
                }
            }
        }
    } else {
        match field.kind() {
            FieldKind::Rational => {
                let (cands, cands_complete) = rational_root_candidates(&work);
                for r in cands {
                    if work.degree() == Some(0) {
                        break;
                    }
                    if work.eval(&r).is_zero() {
                        try_root(&mut work, r);
                    }
                }
                complete = cands_complete;
            }
            FieldKind::Extension => {
                // Number field: peel off degree-1 remainders and roots in
                // the embedded rational image; anything further is reported
                // as an incomplete search, never as a negative answer.
                loop {
                    match work.degree() {
                        None | Some(0) => break,
                        Some(1) => {
                            let c0 = work.coeff(0);
                            let c1 = work.coeff(1);
                            let r = -&(&c0 * &c1.checked_inv().unwrap());
                            try_root(&mut work, r);
                        }
                        Some(_) => {
                            let (cands, cands_complete) = embedded_rational_roots(&work);
                            let mut advanced = false;
                            for r in cands {
                                let lifted = embed_base(&r, &field)
                                    .expect("base roots embed into the extension");
                                if work.eval(&lifted).is_zero() {
                                    try_root(&mut work, lifted);
                                    advanced = true;
                                }
                            }
                            if !cands_complete {
                                complete = false;
                            }
                            if !advanced {
                                if work.degree().map(|d| d >= 2).unwrap_or(false) {
                                    complete = false;
                                }
                                break;
                            }
                        }
                    }
                }
            }
            FieldKind::Prime => unreachable!("prime fields are finite"),
        }
    }

    if field.is_finite() {
        // Exhaustive or gcd-guided searches above are complete whenever the
        // enumeration succeeded.
    }
    roots.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    RootSearch { roots, complete }
}

/// Rational numbers whose embedding is a root of the number-field
/// polynomial `f`. Writing each coefficient in modulus-basis coordinates
/// splits `f(r) = 0` (for rational `r`) into one rational polynomial
/// condition per coordinate; the common roots are the roots of their gcd,
/// so the returned list is exhaustive whenever the flag is true.
fn embedded_rational_roots(f: &Polynomial) -> (Vec<FieldElement>, bool) {
    let q = Field::rationals();
    let k = f.field().degree();
    let coeffs = f.coefficients();
    let mut g = Polynomial::zero(&q);
    let mut started = false;
    for t in 0..k {
        let component = Polynomial::new(
            &q,
            coeffs
                .iter()
                .map(|c| {
                    q.el_from_coefficients(vec![c.coefficients()[t].clone()])
                        .expect("rational coordinate")
                })
                .collect(),
        )
        .unwrap();
        if component.is_zero() {
            continue;
        }
        g = if started { g.gcd(&component) } else { component };
        started = true;
        if g.degree() == Some(0) {
            return (Vec::new(), true);
        }
    }
    if !started {
        return (Vec::new(), true);
    }
    let search = roots_in_field(&g);
    (
        search.roots.into_iter().map(|(r, _)| r).collect(),
        search.complete,
    )
}

/// Candidate rational roots by the rational root theorem on the primitive
/// integer form. The boolean reports whether the divisor enumeration was
/// exhaustive (it can be cut off for astronomically large coefficients).
fn rational_root_candidates(f: &Polynomial) -> (Vec<FieldElement>, bool) {
    let field = f.field().clone();
    let ints = clear_denominators(f);
    // strip powers of x: zero is a candidate exactly when a0 == 0
    let mut low = 0usize;
    while low < ints.len() && ints[low].is_zero() {
        low += 1;
    }
    let mut cands = vec![field.el_zero()];
    if low >= ints.len() {
        return (cands, true);
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    let (d0, c0) = bounded_divisors(&a0);
    let (dn, cn) = bounded_divisors(&an);
    let complete = c0 && cn;
    for num in &d0 {
        for den in &dn {
            if num.gcd(den) != BigInt::one() {
                continue;
            }
            let pos = BigRational::new(num.clone(), den.clone());
            let neg = -&pos;
            for r in [pos, neg] {
                cands.push(
                    field
                        .el_from_coefficients(vec![BaseScalar::Rat(r)])
                        .expect("rational candidate"),
                );
            }
        }
    }
    cands.sort_by(|a, b| a.canonical_cmp(b));
    cands.dedup();
    (cands, complete)
}

/// Integer coefficient vector (primitive up to sign) of a rational
/// polynomial, little-endian.
fn clear_denominators(f: &Polynomial) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    let rats: Vec<BigRational> = f
        .coefficients()
        .iter()
        .map(|c| match &c.coefficients()[0] {
            BaseScalar::Rat(q) => q.clone(),
            BaseScalar::Mod(_) => unreachable!("rational polynomial"),
        })
        .collect();
    for q in &rats {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|q| (q * &lcm).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        ints
    } else {
        ints.iter().map(|c| c / &content).collect()
    }
}

/// All positive divisors of `n` (n > 0), found by trial division with a
/// budget; the boolean is false when the factorization was abandoned.
fn bounded_divisors(n: &BigInt) -> (Vec<BigInt>, bool) {
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut complete = true;
    let mut d: u64 = 2;
    while d <= 1_000_000 {
        let dd = BigInt::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            e += 1;
        }
        if e > 0 {
            factors.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let treat_as_prime = match rest.to_u64() {
            Some(r) => is_prime_u64(r),
            None => false,
        };
        if treat_as_prime || {
            let dd = BigInt::from(1_000_001u64);
            &dd * &dd > rest
        } {
            factors.push((rest.clone(), 1));
        } else {
            complete = false;
        }
    }
    let mut divisors = vec![BigInt::one()];
    for (prime, e) in factors {
        let mut next = Vec::new();
        for dv in &divisors {
            let mut acc = dv.clone();
            for _ in 0..=e {
                next.push(acc.clone());
                acc *= &prime;
                if next.len() > 100_000 {
                    return (divisors, false);
                }
            }
        }
        next.dedup();
        divisors = next;
    }
    divisors.sort();
    divisors.dedup();
    (divisors, complete)
}

// ---------------------------------------------------------------------------
// Irreducibility
// ---------------------------------------------------------------------------

/// Decides irreducibility where an exact decision procedure exists:
/// Rabin's test over finite fields (any `GF(p^k)` coefficients), and over
/// `Q` the rational root theorem for degree <= 3 with a modular
/// factor-degree certificate attempted above that. `Err(Undecidable)` is an
/// honest refusal, never a guess.
pub fn is_irreducible(f: &Polynomial) -> Result<bool, PolyError> {
    let deg = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d,
    };
    let field = f.field();
    if field.is_finite() {
        return Ok(finite_irreducible(f));
    }
    match field.kind() {
        FieldKind::Rational => {
            let rats: Vec<BigRational> = f
                .coefficients()
                .iter()
                .map(|c| match &c.coefficients()[0] {
                    BaseScalar::Rat(q) => q.clone(),
                    BaseScalar::Mod(_) => unreachable!(),
                })
                .collect();
            rational_irreducible(&rats).ok_or(PolyError::Undecidable(deg))
        }
        _ => Err(PolyError::Undecidable(deg)),
    }
}

/// Rabin's irreducibility criterion over `GF(q)`, `q = p^k`.
fn finite_irreducible(f: &Polynomial) -> bool {
    let field = f.field();
    let spec = field.spec();
    let n = f.degree().unwrap();
    let q = BigUint::from(field.characteristic()).pow(field.degree() as u32);
    let work = f.monic();
    let m = work.scalars();
    let x = [spec.zero(), spec.one()];

    let frob = |steps: usize| -> Vec<Scalar> {
        let mut acc = x.to_vec();
        for _ in 0..steps {
            acc = pmodpow(spec, &acc, &q, m);
        }
        acc
    };

    let mut rest = n;
    let mut prime_divisors = Vec::new();
    let mut d = 2usize;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            prime_divisors.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        prime_divisors.push(rest);
    }

    for l in prime_divisors {
        let h = frob(n / l);
        let diff = psub(spec, &h, &x);
        if pdeg(&diff).is_none() {
            return false;
        }
        let g = pgcd(spec, &diff, m);
        if pdeg(&g) != Some(0) {
            return false;
        }
    }
    let h = frob(n);
    pdeg(&psub(spec, &h, &x)).is_none()
}

/// Irreducibility over `Q` on raw rational coefficients. `None` means the
/// procedure could not decide (possible from degree 4 up).
pub(crate) fn rational_irreducible(coeffs: &[BigRational]) -> Option<bool> {
    let q = Field::rationals();
    let f = Polynomial::new(
        &q,
        coeffs
            .iter()
            .map(|c| q.el_from_coefficients(vec![BaseScalar::Rat(c.clone())]).unwrap())
            .collect(),
    )
    .unwrap();
    let deg = match f.degree() {
        None | Some(0) => return Some(false),
        Some(1) => return Some(true),
        Some(d) => d,
    };
    if !f.is_squarefree() {
        return Some(false);
    }
    let search = roots_in_field(&f);
    if !search.roots.is_empty() {
        return Some(false);
    }
    if !search.complete {
        return None;
    }
    if deg <= 3 {
        // a reducible cubic or quadratic over Q must have a linear factor
        return Some(true);
    }
    modular_degree_certificate(&f, deg)
}

/// Tries to prove irreducibility of a rootless squarefree integer
/// polynomial by intersecting achievable factor-degree sums modulo several
/// primes. Sound: a factorization over `Q` reduces modulo any good prime.
fn modular_degree_certificate(f: &Polynomial, deg: usize) -> Option<bool> {
    let ints = clear_denominators(f);
    let lead = ints.last().unwrap().clone();
    let mut feasible: Option<Vec<bool>> = None; // feasible[d] for 1..deg-1
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let mut used = 0;
    for p in primes {
        if (&lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let gfp = Field::prime(p).unwrap();
        let red = Polynomial::new(
            &gfp,
            ints.iter()
                .map(|c| {
                    let r = c.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                    gfp.el_from_u64(r)
                })
                .collect(),
        )
        .unwrap();
        if red.degree() != Some(deg) || !red.is_squarefree() {
            continue;
        }
        let degrees = distinct_degree_profile(&red);
        // subset sums achievable from the factor-degree multiset
        let mut reach = vec![false; deg + 1];
        reach[0] = true;
        for (d, count) in degrees {
            for _ in 0..count {
                for s in (0..=deg.saturating_sub(d)).rev() {
                    if reach[s] {
                        reach[s + d] = true;
                    }
                }
            }
        }
        let this: Vec<bool> = (0..deg).map(|d| d >= 1 && reach[d]).collect();
        feasible = Some(match feasible {
            None => this,
            Some(prev) => prev.iter().zip(this.iter()).map(|(a, b)| *a && *b).collect(),
        });
        used += 1;
        if let Some(fe) = &feasible {
            if fe.iter().all(|b| !b) {
                return Some(true);
            }
        }
        if used >= 6 {
            break;
        }
    }
    None
}

/// Factor-degree profile `(degree, count)` of a squarefree polynomial over
/// a finite field, by distinct-degree gcds (no full factorization needed).
fn distinct_degree_profile(f: &Polynomial) -> Vec<(usize, usize)> {
    let field = f.field().clone();
    let spec = field.spec();
    let q = BigUint::from(field.characteristic()).pow(field.degree() as u32);
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut i = 1usize;
    let mut frob = vec![spec.zero(), spec.one()];
    while let Some(d) = rest.degree() {
        if d == 0 {
            break;
        }
        if d < 2 * i {
            out.push((d, 1));
            break;
        }
        frob = pmodpow(spec, &frob, &q, rest.scalars());
        let diff = psub(spec, &frob, &[spec.zero(), spec.one()]);
        let g = Polynomial::from_scalars(&field, pgcd(spec, &diff, rest.scalars()));
        if let Some(gd) = g.degree() {
            if gd > 0 {
                out.push((i, gd / i));
                let (qq, rr) = rest.divrem(&g).unwrap();
                debug_assert!(rr.is_zero());
                rest = qq.monic();
                frob = pdivrem(spec, &frob, rest.scalars()).unwrap().1;
            }
        }
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Partial factor extraction (for zero-divisor witnesses)
// ---------------------------------------------------------------------------

/// Finds one monic irreducible factor of `f`, if the available machinery
/// can isolate one: linear factors from roots, the polynomial itself when
/// irreducible, distinct-degree isolation, and a few Cantor–Zassenhaus
/// splitting attempts over finite fields. `None` is an honest failure.
pub fn some_irreducible_factor<R: Rng + ?Sized>(
    f: &Polynomial,
    rng: &mut R,
    attempts: usize,
) -> Option<Polynomial> {
    let deg = f.degree()?;
    if deg == 0 {
        return None;
    }
    if deg == 1 {
        return Some(f.monic());
    }
    let search = roots_in_field(f);
    if let Some((r, _)) = search.roots.first() {
        return Some(Polynomial::linear_root(r));
    }
    if let Ok(true) = is_irreducible(f) {
        return Some(f.monic());
    }
    if !f.field().is_finite() {
        return None;
    }

    // Reduce to a squarefree divisor with the same irreducible factors.
    let mut s = f.monic();
    loop {
        let d = s.derivative();
        if d.is_zero() {
            // char-p perfect power: take the p-th root of the coefficients
            s = finite_pth_root(&s);
            continue;
        }
        let g = s.gcd(&d);
        if g.degree() == Some(0) {
            break;
        }
        let (q, r) = s.divrem(&g).unwrap();
        debug_assert!(r.is_zero());
        s = q.monic();
        if s.degree() == Some(1) {
            return Some(s);
        }
    }

    // Distinct-degree isolation, then equal-degree splitting if required.
    let field = f.field().clone();
    let spec = field.spec();
    let q = BigUint::from(field.characteristic()).pow(field.degree() as u32);
    let rest = s.clone();
    let mut i = 1usize;
    let mut frob = vec![spec.zero(), spec.one()];
    while let Some(d) = rest.degree() {
        if d == 0 {
            break;
        }
        if d < 2 * i {
            return Some(rest.monic());
        }
        frob = pmodpow(spec, &frob, &q, rest.scalars());
        let diff = psub(spec, &frob, &[spec.zero(), spec.one()]);
        let g = Polynomial::from_scalars(&field, pgcd(spec, &diff, rest.scalars()));
        if let Some(gd) = g.degree() {
            if gd == i {
                return Some(g.monic());
            }
            if gd > i {
                return equal_degree_split(&g, i, rng, attempts);
            }
        }
        i += 1;
    }
    None
}

/// p-th root of a polynomial whose derivative vanishes (so `f = h(x^p)`).
fn finite_pth_root(f: &Polynomial) -> Polynomial {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let q = field.order().expect("finite field");
    let root_exp = (q / p as u128) as u64;
    let mut out = Vec::new();
    let coeffs = f.coefficients();
    let mut i = 0usize;
    while i < coeffs.len() {
        out.push(coeffs[i].pow(root_exp));
        i += p;
    }
    Polynomial::new(&field, out).unwrap()
}

/// Cantor–Zassenhaus equal-degree splitting: `g` is a product of at least
/// two irreducible factors of degree `d`.
fn equal_degree_split<R: Rng + ?Sized>(
    g: &Polynomial,
    d: usize,
    rng: &mut R,
    attempts: usize,
) -> Option<Polynomial> {
    let field = g.field().clone();
    let spec = field.spec();
    let deg_g = g.degree()?;
    let p = field.characteristic();
    let q = BigUint::from(p).pow(field.degree() as u32);
    for _ in 0..attempts {
        let r: Vec<Scalar> = (0..deg_g).map(|_| field.random(rng)).collect();
        let r = ptrim(spec, r);
        if pdeg(&r).is_none() {
            continue;
        }
        let h = if p == 2 {
            // trace map over GF(2^m): sum of r^(2^j)
            let mut acc = r.clone();
            let mut term = r.clone();
            let steps = d * field.degree();
            for _ in 1..steps {
                term = pdivrem(spec, &pmul(spec, &term, &term), g.scalars())
                    .unwrap()
                    .1;
                acc = padd(spec, &acc, &term);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let pw = pmodpow(spec, &r, &e, g.scalars());
            psub(spec, &pw, &[spec.one()])
        };
        let cand = Polynomial::from_scalars(&field, pgcd(spec, &h, g.scalars()));
        if let Some(cd) = cand.degree() {
            if cd > 0 && cd < deg_g {
                let smaller = if cd <= deg_g - cd {
                    cand
                } else {
                    let (qq, rr) = g.divrem(&cand).unwrap();
                    debug_assert!(rr.is_zero());
                    qq.monic()
                };
                if smaller.degree() == Some(d) {
                    return Some(smaller.monic());
                }
                return equal_degree_split(&smaller, d, rng, attempts);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn poly_u64(field: &Field, coeffs: &[u64]) -> Polynomial {
        Polynomial::new(
            field,
            coeffs.iter().map(|c| field.el_from_u64(*c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn x2_plus_1_has_no_roots_over_gf3() {
        let f3 = gf(3);
        let f = poly_u64(&f3, &[1, 0, 1]);
        // independent oracle: evaluate at all three elements by hand
        for t in 0u64..3 {
            assert_ne!((t * t + 1) % 3, 0);
        }
        let search = roots_in_field(&f);
        assert!(search.roots.is_empty());
        assert!(search.complete);
    }

    #[test]
    fn x2_minus_1_over_q_has_roots_plus_minus_one() {
        let q = Field::rationals();
        let f = Polynomial::new(
            &q,
            vec![q.el_from_i64(-1), q.el_zero(), q.el_one()],
        )
        .unwrap();
        let search = roots_in_field(&f);
        assert!(search.complete);
        let got: Vec<String> = search.roots.iter().map(|(r, m)| format!("{r}:{m}")).collect();
        assert_eq!(got, vec!["-1/1:1", "1/1:1"]);
    }

    #[test]
    fn multiplicities_are_reported() {
        // x(x-1)^2 over GF(5)
        let f5 = gf(5);
        let x = Polynomial::x(&f5);
        let xm1 = Polynomial::linear_root(&f5.el_one());
        let f = x.mul(&xm1).mul(&xm1);
        let search = roots_in_field(&f);
        assert!(search.complete);
        assert_eq!(search.roots.len(), 2);
        assert_eq!(search.roots[0].0, f5.el_zero());
        assert_eq!(search.roots[0].1, 1);
        assert_eq!(search.roots[1].0, f5.el_one());
        assert_eq!(search.roots[1].1, 2);
    }

    #[test]
    fn rabin_agrees_with_bruteforce_over_small_fields() {
        // all monic quadratics and cubics over GF(2), GF(3): compare Rabin
        // against exhaustive root/product checking
        for p in [2u64, 3] {
            let field = gf(p);
            for deg in [2usize, 3] {
                let total = p.pow(deg as u32);
                for idx in 0..total {
                    let mut coeffs = Vec::new();
                    let mut rest = idx;
                    for _ in 0..deg {
                        coeffs.push(rest % p);
                        rest /= p;
                    }
                    coeffs.push(1);
                    let f = poly_u64(&field, &coeffs);
                    // brute force: reducible iff it has a root (deg 2,3)
                    let has_root = field
                        .enumerate()
                        .unwrap()
                        .any(|e| f.eval(&e).is_zero());
                    assert_eq!(
                        is_irreducible(&f).unwrap(),
                        !has_root,
                        "disagreement on {f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn rabin_handles_degree_four_products_of_quadratics() {
        // (x^2+1)(x^2+x+2) over GF(3) is rootless but reducible
        let f3 = gf(3);
        let a = poly_u64(&f3, &[1, 0, 1]);
        let b = poly_u64(&f3, &[2, 1, 1]);
        let f = a.mul(&b);
        assert!(roots_in_field(&f).roots.is_empty());
        assert!(!is_irreducible(&f).unwrap());
        assert!(is_irreducible(&a).unwrap());
        assert!(is_irreducible(&b).unwrap());
    }

    #[test]
    fn rational_irreducibility_small_degrees() {
        let q = Field::rationals();
        let irr = Polynomial::new(&q, vec![q.el_from_i64(-2), q.el_zero(), q.el_one()]).unwrap();
        assert!(is_irreducible(&irr).unwrap(), "x^2 - 2");
        let red = Polynomial::new(&q, vec![q.el_from_i64(-1), q.el_zero(), q.el_one()]).unwrap();
        assert!(!is_irreducible(&red).unwrap(), "x^2 - 1");
        // x^4 + 1: rootless, squarefree, reducible mod every prime; the
        // modular certificate cannot decide it and must say so
        let x4p1 = Polynomial::new(
            &q,
            vec![q.el_one(), q.el_zero(), q.el_zero(), q.el_zero(), q.el_one()],
        )
        .unwrap();
        assert!(matches!(
            is_irreducible(&x4p1),
            Err(PolyError::Undecidable(4))
        ));
        // x^4 + x + 1 is irreducible mod 2, so the certificate succeeds
        let f = Polynomial::new(
            &q,
            vec![q.el_one(), q.el_one(), q.el_zero(), q.el_zero(), q.el_one()],
        )
        .unwrap();
        assert!(is_irreducible(&f).unwrap());
    }

    #[test]
    fn gcd_and_lcm_are_monic_and_divide() {
        let f7 = gf(7);
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..50 {
            let a = Polynomial::new(
                &f7,
                (0..4).map(|_| f7.el_random(&mut rng)).collect(),
            )
            .unwrap();
            let b = Polynomial::new(
                &f7,
                (0..3).map(|_| f7.el_random(&mut rng)).collect(),
            )
            .unwrap();
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let g = a.gcd(&b);
            assert!(g.is_monic());
            assert!(a.divrem(&g).unwrap().1.is_zero());
            assert!(b.divrem(&g).unwrap().1.is_zero());
            let l = a.lcm(&b);
            assert!(l.divrem(&a).unwrap().1.is_zero());
            assert!(l.divrem(&b).unwrap().1.is_zero());
        }
    }

    #[test]
    fn factor_extraction_produces_genuine_factors() {
        let f3 = gf(3);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        // product of two distinct irreducible quadratics: needs splitting
        let a = poly_u64(&f3, &[1, 0, 1]);
        let b = poly_u64(&f3, &[2, 1, 1]);
        let f = a.mul(&b);
        let factor = some_irreducible_factor(&f, &mut rng, 40).expect("splits");
        assert_eq!(factor.degree(), Some(2));
        assert!(f.divrem(&factor).unwrap().1.is_zero());
        assert!(is_irreducible(&factor).unwrap());
    }

    #[test]
    fn number_field_roots_from_embedded_rationals() {
        let e = Field::rational_extension(vec![
            BigRational::from(BigInt::from(-2)),
            BigRational::zero(),
            BigRational::one(),
        ])
        .unwrap();
        // (x - 3)(x - sqrt2): only the rational root is found, and the
        // search honestly reports completeness because the remainder is
        // linear and gets peeled exactly.
        let sqrt2 = e.el_generator();
        let three = e.el_from_u64(3);
        let f = Polynomial::linear_root(&three).mul(&Polynomial::linear_root(&sqrt2));
        let search = roots_in_field(&f);
        assert!(search.complete);
        assert_eq!(search.roots.len(), 2);
    }
}
