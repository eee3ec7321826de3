//! Exact spectral analysis: minimal polynomials, diagonalizability with
//! certificates, eigenvalues in a canonical order, and the primitive
//! idempotent (eigenprojector) family of a diagonalizable matrix.
//!
//! A matrix is reported diagonalizable only when its minimal polynomial is
//! squarefree *and* splits into linear factors over the coefficient field,
//! both established exactly. The negative answer carries a witness factor;
//! when the root search over a number field cannot account for every
//! factor, the outcome is an explicit "undecided" error rather than a
//! guess in either direction.

use thiserror::Error;

use crate::field::FieldElement;
use crate::matrix::{ExactMatrix, SpanAccumulator};
use crate::poly::{roots_in_field, Polynomial};

#[derive(Debug, Error, Clone)]
pub enum SpectralError {
    #[error(
        "root search could not account for a degree-{degree_left} factor of the minimal polynomial"
    )]
    UndecidedRootSearch { degree_left: usize },
}

/// Everything the eigenstructure of a diagonalizable matrix determines:
/// eigenvalues in canonical order, matching projectors, and dimensions.
#[derive(Clone)]
pub struct SpectralData {
    pub minimal_polynomial: Polynomial,
    pub eigenvalues: Vec<FieldElement>,
    pub projectors: Vec<ExactMatrix>,
    pub dimensions: Vec<usize>,
}

/// Definite reason a matrix is not diagonalizable over its field.
#[derive(Clone, Debug)]
pub enum NonDiagonalizableWitness {
    /// The minimal polynomial has a repeated factor (the gcd with its
    /// derivative is returned; when the derivative vanishes identically the
    /// whole minimal polynomial is returned, itself a perfect power).
    RepeatedFactor(Polynomial),
    /// A squarefree minimal polynomial has this rootless factor, so the
    /// eigenvalues do not all lie in the coefficient field.
    NonSplitFactor(Polynomial),
}

pub enum Eigendecomposition {
    Diagonalizable(SpectralData),
    NotDiagonalizable(NonDiagonalizableWitness),
}

/// Monic minimal polynomial, as the least common multiple of the minimal
/// annihilators of the standard basis vectors (each read off a Krylov
/// span with coordinate tracking).
pub fn minimal_polynomial(m: &ExactMatrix) -> Polynomial {
    assert!(m.is_square(), "minimal polynomial needs a square matrix");
    let n = m.rows();
    assert!(n >= 1, "empty matrix has no minimal polynomial");
    let field = m.field().clone();
    let f = field.spec();
    let mut result = Polynomial::one(&field);
    for i in 0..n {
        if result.degree() == Some(n) {
            break;
        }
        let mut span = SpanAccumulator::new(&field, n, true);
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        let mut power = v.clone();
        while span.insert(power.clone()) {
            power = m.mul_vec(&power);
        }
        // power = M^r v is now dependent on v, Mv, .., M^(r-1)v
        let coords = span
            .coordinates(&power)
            .expect("first dependent Krylov vector lies in the span");
        let r = span.rank();
        let mut coeffs = Vec::with_capacity(r + 1);
        for c in coords.iter().take(r) {
            coeffs.push(f.neg(c));
        }
        coeffs.push(f.one());
        let annihilator = Polynomial::from_scalars(&field, coeffs);
        result = result.lcm(&annihilator);
    }
    result
}

/// Evaluates a polynomial at a square matrix.
pub fn eval_at_matrix(p: &Polynomial, m: &ExactMatrix) -> ExactMatrix {
    assert!(m.is_square(), "polynomial evaluation needs a square matrix");
    assert!(p.field() == m.field(), "polynomial/matrix field mismatch");
    let n = m.rows();
    let field = m.field().clone();
    let mut acc = ExactMatrix::zero(&field, n, n);
    let coeffs = p.coefficients();
    for c in coeffs.iter().rev() {
        acc = m.mul(&acc);
        for i in 0..n {
            let cur = acc.get(i, i);
            acc.set(i, i, &cur + c);
        }
    }
    acc
}

/// Decides diagonalizability over the coefficient field, exactly.
pub fn eigendecompose(m: &ExactMatrix) -> Result<Eigendecomposition, SpectralError> {
    assert!(m.is_square(), "eigendecomposition needs a square matrix");
    let field = m.field().clone();
    let n = m.rows();
    let mp = minimal_polynomial(m);

    // squarefree?
    let deriv = mp.derivative();
    if deriv.is_zero() {
        return Ok(Eigendecomposition::NotDiagonalizable(
            NonDiagonalizableWitness::RepeatedFactor(mp),
        ));
    }
    let g = mp.gcd(&deriv);
    if g.degree() != Some(0) {
        return Ok(Eigendecomposition::NotDiagonalizable(
            NonDiagonalizableWitness::RepeatedFactor(g),
        ));
    }

    // splits?
    let search = roots_in_field(&mp);
    let found: usize = search.roots.iter().map(|(_, mult)| *mult).sum();
    let deg = mp.degree().expect("minimal polynomial is nonzero");
    if found < deg {
        if search.complete {
            let mut rest = mp.clone();
            for (r, mult) in &search.roots {
                let lin = Polynomial::linear_root(r);
                for _ in 0..*mult {
                    let (q, rem) = rest.divrem(&lin).unwrap();
                    assert!(rem.is_zero(), "claimed root must divide");
                    rest = q;
                }
            }
            return Ok(Eigendecomposition::NotDiagonalizable(
                NonDiagonalizableWitness::NonSplitFactor(rest.monic()),
            ));
        }
        return Err(SpectralError::UndecidedRootSearch {
            degree_left: deg - found,
        });
    }
    for (_, mult) in &search.roots {
        assert_eq!(*mult, 1, "squarefree polynomial has simple roots");
    }

    // Lagrange projectors onto the eigenspaces
    let eigenvalues: Vec<FieldElement> = search.roots.into_iter().map(|(r, _)| r).collect();
    let mut projectors = Vec::with_capacity(eigenvalues.len());
    for (i, ti) in eigenvalues.iter().enumerate() {
        let mut e = ExactMatrix::identity(&field, n);
        for (j, tj) in eigenvalues.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = (ti - tj).checked_inv().expect("distinct eigenvalues");
            let mut shifted = m.clone();
            for r in 0..n {
                let cur = shifted.get(r, r);
                shifted.set(r, r, &cur - tj);
            }
            e = e.mul(&shifted).scale(&denom);
        }
        projectors.push(e);
    }

    // structural identities of the projector family
    let mut sum = ExactMatrix::zero(&field, n, n);
    let mut recon = ExactMatrix::zero(&field, n, n);
    for (e, t) in projectors.iter().zip(eigenvalues.iter()) {
        sum = sum.add(e);
        recon = recon.add(&e.scale(t));
    }
    assert!(sum.is_identity(), "projectors must sum to the identity");
    assert!(recon == *m, "weighted projector sum must rebuild the matrix");
    for (i, ei) in projectors.iter().enumerate() {
        for (j, ej) in projectors.iter().enumerate() {
            let prod = ei.mul(ej);
            if i == j {
                assert!(prod == *ei, "projectors must be idempotent");
            } else {
                assert!(prod.is_zero(), "distinct projectors must annihilate");
            }
        }
    }
    assert!(
        eval_at_matrix(&mp, m).is_zero(),
        "minimal polynomial must annihilate the matrix"
    );

    let dimensions: Vec<usize> = projectors.iter().map(|e| e.rank()).collect();
    assert_eq!(
        dimensions.iter().sum::<usize>(),
        n,
        "eigenspace dimensions must fill the space"
    );

    Ok(Eigendecomposition::Diagonalizable(SpectralData {
        minimal_polynomial: mp,
        eigenvalues,
        projectors,
        dimensions,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn poly_u64(field: &Field, coeffs: &[u64]) -> Polynomial {
        Polynomial::new(field, coeffs.iter().map(|c| field.el_from_u64(*c)).collect()).unwrap()
    }

    #[test]
    fn minimal_polynomials_of_simple_matrices() {
        let f5 = gf(5);
        let id = ExactMatrix::identity(&f5, 3);
        assert_eq!(minimal_polynomial(&id), poly_u64(&f5, &[4, 1])); // x - 1
        let zero = ExactMatrix::zero(&f5, 3, 3);
        assert_eq!(minimal_polynomial(&zero), poly_u64(&f5, &[0, 1])); // x

        let f3 = gf(3);
        let d = ExactMatrix::from_u64_rows(&f3, &[vec![0, 0], vec![0, 1]]);
        // x(x-1) = x^2 + 2x over GF(3)
        assert_eq!(minimal_polynomial(&d), poly_u64(&f3, &[0, 2, 1]));

        let nilpotent = ExactMatrix::from_u64_rows(
            &f3,
            &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        );
        assert_eq!(minimal_polynomial(&nilpotent), poly_u64(&f3, &[0, 0, 0, 1]));
    }

    #[test]
    fn minimal_polynomial_is_minimal_by_exhaustion() {
        // over GF(2) and GF(3), check against every lower-degree monic poly
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for p in [2u64, 3] {
            let field = gf(p);
            for _ in 0..20 {
                let m = ExactMatrix::random(&field, 3, 3, &mut rng);
                let mp = minimal_polynomial(&m);
                assert!(eval_at_matrix(&mp, &m).is_zero());
                let d = mp.degree().unwrap();
                for lower in 0..d {
                    let count = p.pow(lower as u32 + 1);
                    for idx in 0..count {
                        let mut rest = idx;
                        let mut coeffs = Vec::new();
                        for _ in 0..=lower {
                            coeffs.push(rest % p);
                            rest /= p;
                        }
                        // monic of degree `lower`... the last pushed digit
                        // may be zero; skip non-monic representatives
                        if coeffs[lower] == 0 {
                            continue;
                        }
                        let cand = poly_u64(&field, &coeffs);
                        assert!(
                            !eval_at_matrix(&cand, &m).is_zero(),
                            "{cand:?} annihilates but is smaller than {mp:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_matrix_splits_only_in_the_extension() {
        // companion matrix of x^2 + 1
        let f3 = gf(3);
        let m = ExactMatrix::from_u64_rows(&f3, &[vec![0, 2], vec![1, 0]]);
        match eigendecompose(&m).unwrap() {
            Eigendecomposition::NotDiagonalizable(NonDiagonalizableWitness::NonSplitFactor(
                w,
            )) => {
                assert_eq!(w, poly_u64(&f3, &[1, 0, 1]));
            }
            _ => panic!("x^2+1 has no roots over GF(3)"),
        }

        let f9 = Field::finite(3, 2, None).unwrap();
        let m9 = m.embed(&f9).unwrap();
        match eigendecompose(&m9).unwrap() {
            Eigendecomposition::Diagonalizable(data) => {
                assert_eq!(data.eigenvalues.len(), 2);
                // the two square roots of -1: x and 2x, in canonical order
                let i = f9.el_generator();
                let minus_i = -&i;
                assert_eq!(data.eigenvalues, vec![i, minus_i]);
                assert_eq!(data.dimensions, vec![1, 1]);
            }
            _ => panic!("x^2+1 splits over GF(9)"),
        }
    }

    #[test]
    fn projectors_match_hand_computed_values() {
        // B = [[0,0],[1,1]] over GF(5): eigenvalues 0 and 1,
        // E0 = [[1,0],[4,0]], E1 = [[0,0],[1,1]]
        let f5 = gf(5);
        let b = ExactMatrix::from_u64_rows(&f5, &[vec![0, 0], vec![1, 1]]);
        match eigendecompose(&b).unwrap() {
            Eigendecomposition::Diagonalizable(data) => {
                assert_eq!(data.eigenvalues, vec![f5.el_zero(), f5.el_one()]);
                let e0 = ExactMatrix::from_u64_rows(&f5, &[vec![1, 0], vec![4, 0]]);
                let e1 = ExactMatrix::from_u64_rows(&f5, &[vec![0, 0], vec![1, 1]]);
                assert_eq!(data.projectors, vec![e0, e1]);
                assert_eq!(data.dimensions, vec![1, 1]);
            }
            _ => panic!("triangular matrix with distinct diagonal is diagonalizable"),
        }
    }

    #[test]
    fn repeated_eigenvalue_dimensions() {
        let q = Field::rationals();
        let m = ExactMatrix::from_i64_rows(
            &q,
            &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 3]],
        );
        match eigendecompose(&m).unwrap() {
            Eigendecomposition::Diagonalizable(data) => {
                assert_eq!(data.eigenvalues, vec![q.el_from_i64(2), q.el_from_i64(3)]);
                assert_eq!(data.dimensions, vec![2, 1]);
            }
            _ => panic!("diagonal matrix is diagonalizable"),
        }
    }

    #[test]
    fn jordan_block_is_rejected_with_repeated_factor() {
        let q = Field::rationals();
        let m = ExactMatrix::from_i64_rows(&q, &[vec![1, 1], vec![0, 1]]);
        match eigendecompose(&m).unwrap() {
            Eigendecomposition::NotDiagonalizable(NonDiagonalizableWitness::RepeatedFactor(
                g,
            )) => {
                // gcd((x-1)^2, 2(x-1)) = x - 1
                assert_eq!(g, Polynomial::linear_root(&q.el_one()));
            }
            _ => panic!("a Jordan block is not diagonalizable"),
        }
    }

    #[test]
    fn conjugation_preserves_the_spectrum() {
        let fields = [gf(7), Field::rationals()];
        let mut rng = ChaCha12Rng::seed_from_u64(404);
        for field in &fields {
            for _ in 0..10 {
                let d = ExactMatrix::from_u64_rows(
                    field,
                    &[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                );
                let s = loop {
                    let c = ExactMatrix::random(field, 3, 3, &mut rng);
                    if c.rank() == 3 {
                        break c;
                    }
                };
                let m = s.mul(&d).mul(&s.inverse().unwrap());
                match eigendecompose(&m).unwrap() {
                    Eigendecomposition::Diagonalizable(data) => {
                        assert_eq!(
                            data.eigenvalues,
                            vec![field.el_zero(), field.el_one()]
                        );
                        assert_eq!(data.dimensions, vec![1, 2]);
                    }
                    _ => panic!("conjugate of a diagonal matrix stays diagonalizable"),
                }
            }
        }
    }
}
