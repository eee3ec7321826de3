//! Instance construction.
//!
//! Everything here produces *candidates*: bidiagonal split-form pairs,
//! Kronecker-sum composites, scalar restrictions of extension-field
//! records, and the twisted diameter-1 family whose restrictions come out
//! nonsharp. No construction is trusted — callers re-verify every output,
//! because irreducibility genuinely fails for bad parameter choices.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{embed_base, Field, FieldElement};
use crate::matrix::ExactMatrix;
use crate::td::{verify_td_system_default, TdSystemRecord};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("eigenvalue sequence entries must be pairwise distinct")]
    RepeatedEigenvalue,
    #[error("dual eigenvalue sequence entries must be pairwise distinct")]
    RepeatedDualEigenvalue,
    #[error("split sequence entries must be nonzero")]
    ZeroSplitEntry,
    #[error("sequence lengths disagree: {0} eigenvalues, {1} dual eigenvalues, {2} split entries")]
    LengthMismatch(usize, usize, usize),
    #[error("all parameters must lie in the declared field")]
    FieldMismatch,
    #[error("the field has too few elements for {needed} distinct values")]
    FieldTooSmall { needed: usize },
    #[error("eigenvalue at position {0} lies outside the base field")]
    EigenvalueOutsideBase(usize),
    #[error("dual eigenvalue at position {0} lies outside the base field")]
    DualEigenvalueOutsideBase(usize),
    #[error(
        "twist parameter equals the product of the eigenvalue differences, \
         which leaves an eigenline invariant and makes the seed reducible"
    )]
    SeedReducible,
    #[error("twist parameter must lie outside the base field")]
    TwistInBase,
    #[error("the square of the twist parameter must lie outside the base field")]
    TwistSquareInBase,
    #[error("the seed pair failed verification: {0}")]
    SeedRejected(String),
    #[error("field construction failed: {0}")]
    Field(#[from] crate::field::FieldError),
}

/// Parameters of a bidiagonal split-form candidate: distinct eigenvalue
/// and dual eigenvalue sequences of length d+1 and a nonzero split
/// sequence of length d, all in one field.
#[derive(Clone)]
pub struct SplitFormParams {
    pub field: Field,
    pub eigenvalues: Vec<FieldElement>,
    pub dual_eigenvalues: Vec<FieldElement>,
    pub split_sequence: Vec<FieldElement>,
}

impl SplitFormParams {
    pub fn new(
        field: Field,
        eigenvalues: Vec<FieldElement>,
        dual_eigenvalues: Vec<FieldElement>,
        split_sequence: Vec<FieldElement>,
    ) -> Result<SplitFormParams, GenerateError> {
        if eigenvalues.is_empty()
            || eigenvalues.len() != dual_eigenvalues.len()
            || split_sequence.len() + 1 != eigenvalues.len()
        {
            return Err(GenerateError::LengthMismatch(
                eigenvalues.len(),
                dual_eigenvalues.len(),
                split_sequence.len(),
            ));
        }
        if eigenvalues
            .iter()
            .chain(dual_eigenvalues.iter())
            .chain(split_sequence.iter())
            .any(|x| x.field() != &field)
        {
            return Err(GenerateError::FieldMismatch);
        }
        if has_repeat(&eigenvalues) {
            return Err(GenerateError::RepeatedEigenvalue);
        }
        if has_repeat(&dual_eigenvalues) {
            return Err(GenerateError::RepeatedDualEigenvalue);
        }
        if split_sequence.iter().any(|x| x.is_zero()) {
            return Err(GenerateError::ZeroSplitEntry);
        }
        Ok(SplitFormParams {
            field,
            eigenvalues,
            dual_eigenvalues,
            split_sequence,
        })
    }

    pub fn d(&self) -> usize {
        self.eigenvalues.len() - 1
    }
}

fn has_repeat(values: &[FieldElement]) -> bool {
    for (i, x) in values.iter().enumerate() {
        if values[i + 1..].contains(x) {
            return true;
        }
    }
    false
}

/// The split-form candidate: the first operator is lower bidiagonal with
/// the eigenvalue sequence on the diagonal and ones below it; the second
/// is upper bidiagonal with the dual sequence on the diagonal and the
/// split sequence above it. Returned unverified.
pub fn split_form_pair(params: &SplitFormParams) -> (ExactMatrix, ExactMatrix) {
    let n = params.eigenvalues.len();
    let mut a = ExactMatrix::zero(&params.field, n, n);
    let mut a_star = ExactMatrix::zero(&params.field, n, n);
    for i in 0..n {
        a.set(i, i, params.eigenvalues[i].clone());
        a_star.set(i, i, params.dual_eigenvalues[i].clone());
        if i > 0 {
            a.set(i, i - 1, params.field.el_one());
            a_star.set(i - 1, i, params.split_sequence[i - 1].clone());
        }
    }
    (a, a_star)
}

/// Multiplication-by-`entry` written in the power basis of the extension:
/// column j holds the base-field coordinates of `entry * g^j` where `g`
/// is the residue of the generator.
fn regular_representation(entry: &FieldElement, base: &Field) -> ExactMatrix {
    let ext = entry.field();
    let k = ext.degree();
    let mut m = ExactMatrix::zero(base, k, k);
    let generator = ext.el_generator();
    let mut power = entry.clone();
    for j in 0..k {
        for (r, coeff) in power.coefficients().into_iter().enumerate() {
            m.set(r, j, base.el_from_coefficients(vec![coeff]).expect("base coefficient"));
        }
        power = &power * &generator;
    }
    m
}

/// Rewrite a matrix over an extension field as a block matrix over the
/// base field, replacing each entry by its multiplication matrix.
pub fn restrict_matrix(m: &ExactMatrix) -> ExactMatrix {
    let ext = m.field();
    let base = ext.base();
    let k = ext.degree();
    if k == 1 {
        return m.clone();
    }
    let mut out = ExactMatrix::zero(&base, m.rows() * k, m.cols() * k);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let block = regular_representation(&m.get(r, c), &base);
            for i in 0..k {
                for j in 0..k {
                    out.set(r * k + i, c * k + j, block.get(i, j));
                }
            }
        }
    }
    out
}

/// Scalar restriction of an accepted record over an extension field: both
/// operators rewritten over the base field with dimension multiplied by
/// the extension degree. Requires every eigenvalue and dual eigenvalue to
/// lie in the base-field image — otherwise the restricted operators could
/// not be diagonalizable over the base. The output is unverified: the
/// restriction of a perfectly good pair can be reducible (for instance
/// when all its entries already lie in the base-field image).
pub fn restrict_scalars(
    record: &TdSystemRecord,
) -> Result<(ExactMatrix, ExactMatrix), GenerateError> {
    if record.field.degree() == 1 {
        return Ok((record.a.clone(), record.a_star.clone()));
    }
    for (i, theta) in record.eigenvalues.iter().enumerate() {
        if !theta.is_in_base() {
            return Err(GenerateError::EigenvalueOutsideBase(i));
        }
    }
    for (i, theta) in record.dual_eigenvalues.iter().enumerate() {
        if !theta.is_in_base() {
            return Err(GenerateError::DualEigenvalueOutsideBase(i));
        }
    }
    Ok((restrict_matrix(&record.a), restrict_matrix(&record.a_star)))
}

/// Kronecker-sum composite of two candidate pairs acting on the tensor
/// product space: the operators add across the factors. Useful for
/// assembling higher-diameter candidates from diameter-1 ones; returned
/// unverified like everything else here.
pub fn kronecker_sum_pair(
    first: &(ExactMatrix, ExactMatrix),
    second: &(ExactMatrix, ExactMatrix),
) -> (ExactMatrix, ExactMatrix) {
    let left_id = ExactMatrix::identity(first.0.field(), first.0.rows());
    let right_id = ExactMatrix::identity(second.0.field(), second.0.rows());
    let a = first.0.kronecker(&right_id).add(&left_id.kronecker(&second.0));
    let a_star = first
        .1
        .kronecker(&right_id)
        .add(&left_id.kronecker(&second.1));
    (a, a_star)
}

/// Parameters of the twisted diameter-1 construction over the quadratic
/// extension of GF(p) with its default modulus.
#[derive(Clone)]
pub struct TwistedParams {
    /// The quadratic extension GF(p^2).
    pub field: Field,
    /// Base-field eigenvalues of the seed, embedded.
    pub theta: [FieldElement; 2],
    pub theta_star: [FieldElement; 2],
    /// The twist: the single off-diagonal entry of the dual operator.
    pub gamma: FieldElement,
}

impl TwistedParams {
    /// Convenience constructor from integer representatives; the twist is
    /// given by its two coordinates in the power basis.
    pub fn from_integers(
        p: u64,
        theta: (i64, i64),
        theta_star: (i64, i64),
        gamma: (i64, i64),
    ) -> Result<TwistedParams, GenerateError> {
        let field = Field::finite(p, 2, None)?;
        let gamma = field.el_from_coefficients(vec![
            field.base().el_from_i64(gamma.0).coefficients().remove(0),
            field.base().el_from_i64(gamma.1).coefficients().remove(0),
        ])?;
        Ok(TwistedParams {
            theta: [field.el_from_i64(theta.0), field.el_from_i64(theta.1)],
            theta_star: [
                field.el_from_i64(theta_star.0),
                field.el_from_i64(theta_star.1),
            ],
            gamma,
            field,
        })
    }
}

/// The twisted construction together with its verified seed.
pub struct TwistedInstance {
    /// Verified 2-dimensional record over the quadratic extension.
    pub seed: TdSystemRecord,
    /// Its scalar restriction: an unverified 4-dimensional candidate over
    /// the prime field, expected to verify nonsharp with a 2-dimensional
    /// center.
    pub a: ExactMatrix,
    pub a_star: ExactMatrix,
}

/// Diameter-1 seed `[[t0,0],[1,t1]]`, `[[s0,g],[0,s1]]` over GF(p^2) with
/// base eigenvalues and a twist g outside the base field, restricted to
/// GF(p). The twist may not equal the product of the eigenvalue
/// differences (the exact condition under which the seed's two operators
/// share an eigenline), must lie outside the base field, and must have
/// its square outside the base field as well.
pub fn twisted_diameter1_nonsharp(
    params: &TwistedParams,
) -> Result<TwistedInstance, GenerateError> {
    let field = &params.field;
    let [theta0, theta1] = &params.theta;
    let [star0, star1] = &params.theta_star;
    for (i, value) in [theta0, theta1].into_iter().enumerate() {
        if !value.is_in_base() {
            return Err(GenerateError::EigenvalueOutsideBase(i));
        }
    }
    for (i, value) in [star0, star1].into_iter().enumerate() {
        if !value.is_in_base() {
            return Err(GenerateError::DualEigenvalueOutsideBase(i));
        }
    }
    if theta0 == theta1 {
        return Err(GenerateError::RepeatedEigenvalue);
    }
    if star0 == star1 {
        return Err(GenerateError::RepeatedDualEigenvalue);
    }
    let shared_eigenline = &(theta0 - theta1) * &(star1 - star0);
    if params.gamma == shared_eigenline {
        return Err(GenerateError::SeedReducible);
    }
    if params.gamma.is_in_base() {
        return Err(GenerateError::TwistInBase);
    }
    if (&params.gamma * &params.gamma).is_in_base() {
        return Err(GenerateError::TwistSquareInBase);
    }

    let zero = field.el_zero();
    let one = field.el_one();
    let b = ExactMatrix::from_elements(
        field,
        vec![
            vec![theta0.clone(), zero.clone()],
            vec![one, theta1.clone()],
        ],
    )
    .expect("seed layout");
    let b_star = ExactMatrix::from_elements(
        field,
        vec![
            vec![star0.clone(), params.gamma.clone()],
            vec![zero, star1.clone()],
        ],
    )
    .expect("seed layout");
    let seed =
        verify_td_system_default(&b, &b_star).map_err(|e| GenerateError::SeedRejected(e.to_string()))?;
    let (a, a_star) = restrict_scalars(&seed)?;
    Ok(TwistedInstance { seed, a, a_star })
}

fn distinct_elements<R: Rng + ?Sized>(
    field: &Field,
    count: usize,
    rng: &mut R,
) -> Result<Vec<FieldElement>, GenerateError> {
    if let Some(order) = field.order() {
        if order < count as u128 {
            return Err(GenerateError::FieldTooSmall { needed: count });
        }
        if order <= 4096 {
            let mut all: Vec<FieldElement> = field.enumerate().expect("finite field").collect();
            all.shuffle(rng);
            all.truncate(count);
            return Ok(all);
        }
    }
    let mut picked: Vec<FieldElement> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while picked.len() < count {
        let candidate = field.el_random(rng);
        if !picked.contains(&candidate) {
            picked.push(candidate);
        }
        attempts += 1;
        assert!(attempts < 10_000, "field sampling failed to find distinct values");
    }
    Ok(picked)
}

fn nonzero_element<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> FieldElement {
    loop {
        let candidate = field.el_random(rng);
        if !candidate.is_zero() {
            return candidate;
        }
    }
}

/// Split-form parameters built from a weight ladder. The eigenvalue and
/// dual sequences are affine images (with slopes `alpha`, `alpha_star`
/// and offsets `beta`, `beta_star`) of the weights d, d-2, ..., -d, and
/// the split sequence carries the ladder coefficients i(d-i+1) times
/// `scale` times the product of the slopes. Free random draws only
/// satisfy the block-tridiagonality conditions up to diameter 1; this
/// family satisfies them at every diameter. Its candidates survive
/// verification whenever the weights stay distinct and the split entries
/// stay nonzero (both can collapse in small characteristic, surfacing as
/// a parameter-validation error) and `scale` avoids the single
/// degenerate value -4: at scale -4 the commutator of the two operators
/// falls back into their span, the pair stops generating the full matrix
/// algebra, and an invariant subspace appears. In characteristic 5 the
/// degenerate value is 1, so the unscaled ladder itself is reducible
/// there. Callers re-verify rather than trusting any of this.
pub fn ladder_split_params(
    field: &Field,
    d: usize,
    alpha: &FieldElement,
    beta: &FieldElement,
    alpha_star: &FieldElement,
    beta_star: &FieldElement,
    scale: &FieldElement,
) -> Result<SplitFormParams, GenerateError> {
    let weight = |i: usize| field.el_from_i64(d as i64 - 2 * i as i64);
    let eigenvalues: Vec<FieldElement> =
        (0..=d).map(|i| beta + &(alpha * &weight(i))).collect();
    let dual_eigenvalues: Vec<FieldElement> = (0..=d)
        .map(|i| beta_star + &(alpha_star * &weight(i)))
        .collect();
    let slope_product = &(alpha * alpha_star) * scale;
    let split_sequence: Vec<FieldElement> = (1..=d)
        .map(|i| &slope_product * &field.el_from_u64((i * (d - i + 1)) as u64))
        .collect();
    SplitFormParams::new(field.clone(), eigenvalues, dual_eigenvalues, split_sequence)
}

/// Reproducible split-form parameters. Diameter 0 and 1 draw free random
/// sequences (every distinct/nonzero choice is a plausible candidate
/// there); diameter 2 and up draw a seeded affine reparameterization of
/// the weight ladder with a random scale avoiding the degenerate value,
/// because free draws essentially never satisfy the block-tridiagonality
/// conditions at higher diameter.
pub fn seeded_split_params(
    field: &Field,
    d: usize,
    seed: u64,
) -> Result<SplitFormParams, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if d >= 2 {
        if let Some(order) = field.order() {
            if order < (d as u128 + 1) {
                return Err(GenerateError::FieldTooSmall { needed: d + 1 });
            }
        }
        let alpha = nonzero_element(field, &mut rng);
        let alpha_star = nonzero_element(field, &mut rng);
        let beta = field.el_random(&mut rng);
        let beta_star = field.el_random(&mut rng);
        let degenerate = field.el_from_i64(-4);
        let scale = loop {
            let candidate = nonzero_element(field, &mut rng);
            if candidate != degenerate {
                break candidate;
            }
        };
        return ladder_split_params(field, d, &alpha, &beta, &alpha_star, &beta_star, &scale);
    }
    let eigenvalues = distinct_elements(field, d + 1, &mut rng)?;
    let dual_eigenvalues = distinct_elements(field, d + 1, &mut rng)?;
    let split_sequence: Vec<FieldElement> = if d == 1 {
        // At diameter 1 exactly one nonzero split value leaves an
        // eigenline invariant: the product of the eigenvalue differences.
        // Skip it in the draw; verification still re-checks. Over GF(2)
        // nothing is left to draw.
        if field.order() == Some(2) {
            return Err(GenerateError::FieldTooSmall { needed: 3 });
        }
        let eigenline = &(&eigenvalues[0] - &eigenvalues[1])
            * &(&dual_eigenvalues[1] - &dual_eigenvalues[0]);
        let split = loop {
            let candidate = nonzero_element(field, &mut rng);
            if candidate != eigenline {
                break candidate;
            }
        };
        vec![split]
    } else {
        Vec::new()
    };
    SplitFormParams::new(field.clone(), eigenvalues, dual_eigenvalues, split_sequence)
}

/// Reproducible split-form parameters over an extension field whose
/// eigenvalue data comes embedded from the base field (a restriction
/// precondition) while at least one split entry is forced outside the
/// base-field image (otherwise the restriction is reducible for sure).
pub fn seeded_restriction_params(
    field: &Field,
    d: usize,
    seed: u64,
) -> Result<SplitFormParams, GenerateError> {
    assert!(field.degree() >= 2, "restriction seeds need a proper extension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = field.base();
    let embed = |values: Vec<FieldElement>| -> Vec<FieldElement> {
        values
            .into_iter()
            .map(|x| embed_base(&x, field).expect("base embeds"))
            .collect()
    };
    let eigenvalues = embed(distinct_elements(&base, d + 1, &mut rng)?);
    let dual_eigenvalues = embed(distinct_elements(&base, d + 1, &mut rng)?);
    let mut split_sequence: Vec<FieldElement> =
        (0..d).map(|_| nonzero_element(field, &mut rng)).collect();
    if split_sequence.iter().all(|x| x.is_in_base()) {
        let twisted = loop {
            let candidate = nonzero_element(field, &mut rng);
            if !candidate.is_in_base() {
                break candidate;
            }
        };
        split_sequence[0] = twisted;
    }
    SplitFormParams::new(field.clone(), eigenvalues, dual_eigenvalues, split_sequence)
}

/// Reproducible candidate pair over an extension field meant for scalar
/// restriction, at any diameter. Diameter 0 and 1 use split-form
/// parameters with base-field eigenvalue data directly. Higher diameters
/// assemble a Kronecker sum of diameter-1 split factors with eigenvalues
/// 0 and 1 (the sums run through 0..=d with binomial multiplicities, so
/// the base field must have more than d elements) and pairwise-distinct
/// split entries, the first forced outside the base-field image — equal
/// entries would leave the factor-swap symmetry intact and all entries in
/// the base image would make the restriction reducible for sure. Returned
/// unverified like everything else here.
pub fn seeded_restriction_pair(
    field: &Field,
    d: usize,
    seed: u64,
) -> Result<(ExactMatrix, ExactMatrix), GenerateError> {
    assert!(field.degree() >= 2, "restriction seeds need a proper extension");
    if d <= 1 {
        let params = seeded_restriction_params(field, d, seed)?;
        return Ok(split_form_pair(&params));
    }
    if let Some(order) = field.base().order() {
        if order < (d + 1) as u128 {
            return Err(GenerateError::FieldTooSmall { needed: d + 1 });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = field.el_zero();
    let one = field.el_one();
    let mut factors: Vec<(ExactMatrix, ExactMatrix)> = Vec::with_capacity(d);
    let mut used: Vec<FieldElement> = Vec::new();
    for j in 0..d {
        let gamma = loop {
            let candidate = nonzero_element(field, &mut rng);
            if used.contains(&candidate) {
                continue;
            }
            if j == 0 && candidate.is_in_base() {
                continue;
            }
            break candidate;
        };
        used.push(gamma.clone());
        let params = SplitFormParams::new(
            field.clone(),
            vec![zero.clone(), one.clone()],
            vec![zero.clone(), one.clone()],
            vec![gamma],
        )?;
        factors.push(split_form_pair(&params));
    }
    let mut pair = factors.pop().expect("at least two factors");
    while let Some(previous) = factors.pop() {
        pair = kronecker_sum_pair(&previous, &pair);
    }
    Ok(pair)
}
