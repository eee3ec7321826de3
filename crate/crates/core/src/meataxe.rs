//! Module irreducibility for the action of a matrix set on column space:
//! a randomized-word test in the Norton/Parker style with *certified*
//! answers, and an exhaustive subspace enumeration over tiny fields that
//! serves as an independent oracle.
//!
//! Soundness contract:
//! - `Reducible` always carries a witness basis that has been re-verified
//!   invariant under every generator before being returned.
//! - `Irreducible` is returned only on a proof: either some algebra word
//!   has an irreducible minimal polynomial of full degree, or a word
//!   passes the minimal-nullity criterion (kernel of an irreducible-factor
//!   image is one-dimensional over its residue field, and both the primal
//!   spin of a kernel vector and the dual spin of a transpose-kernel
//!   vector fill their spaces).
//! - anything else is an explicit `Inconclusive`, never a guess.

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, FieldElement, Scalar};
use crate::matrix::{ExactMatrix, SpanAccumulator};
use crate::poly::{is_irreducible, some_irreducible_factor};
use crate::spectral::{eval_at_matrix, minimal_polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeataxeError {
    #[error("no generators supplied")]
    EmptyGenerators,
    #[error("generators must be square matrices of equal size over one field")]
    MalformedGenerators,
    #[error("exhaustive enumeration needs field order <= {max_order} and dimension <= {max_dim} (got order {order}, dimension {dim})")]
    BoundsExceeded {
        max_order: u128,
        max_dim: usize,
        order: u128,
        dim: usize,
    },
}

/// Basis of a proper nonzero invariant subspace, in canonical reduced
/// row-echelon form (each inner vector is one basis element of `F^n`).
#[derive(Clone, PartialEq, Eq)]
pub struct InvariantSubspace {
    pub basis: Vec<Vec<FieldElement>>,
}

impl InvariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

impl std::fmt::Debug for InvariantSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "subspace dim {}: ", self.basis.len())?;
        for v in &self.basis {
            let entries: Vec<String> = v.iter().map(|e| format!("{e}")).collect();
            write!(f, "({}) ", entries.join(","))?;
        }
        Ok(())
    }
}

pub enum IrreducibilityOutcome {
    Irreducible,
    Reducible(InvariantSubspace),
    Inconclusive { trials: usize },
}

const MAX_BRUTE_ORDER: u128 = 4;
const MAX_BRUTE_DIM: usize = 4;
const MAX_WORD_LEN: usize = 8;

fn validate(gens: &[ExactMatrix]) -> Result<(Field, usize), MeataxeError> {
    let first = gens.first().ok_or(MeataxeError::EmptyGenerators)?;
    let field = first.field().clone();
    let n = first.rows();
    for g in gens {
        if !g.is_square() || g.rows() != n || g.field() != &field {
            return Err(MeataxeError::MalformedGenerators);
        }
    }
    Ok((field, n))
}

/// Smallest invariant subspace containing the seed vectors.
pub(crate) fn spin(
    field: &Field,
    n: usize,
    gens: &[ExactMatrix],
    seeds: &[Vec<Scalar>],
) -> SpanAccumulator {
    let mut span = SpanAccumulator::new(field, n, false);
    let mut queue: Vec<Vec<Scalar>> = Vec::new();
    for s in seeds {
        if span.insert(s.clone()) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.mul_vec(&v);
            if span.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    span
}

/// True when `bruteforce_invariant_subspaces` accepts this field order and
/// dimension, so callers can route between exhaustive and randomized search
/// without duplicating the bounds.
pub fn within_brute_bounds(field: &Field, dim: usize) -> bool {
    matches!(field.order(), Some(order) if order <= MAX_BRUTE_ORDER) && dim <= MAX_BRUTE_DIM
}

/// Checks that a subspace basis is independent, proper, nonzero, and
/// closed under every generator. Used on every witness before it leaves
/// this module, and available to callers as an independent re-check.
pub fn verify_invariant(gens: &[ExactMatrix], witness: &InvariantSubspace) -> bool {
    let Ok((field, n)) = validate(gens) else {
        return false;
    };
    let d = witness.basis.len();
    if d == 0 || d >= n {
        return false;
    }
    let mut span = SpanAccumulator::new(&field, n, false);
    for v in &witness.basis {
        if v.len() != n || v.iter().any(|e| e.field() != &field) {
            return false;
        }
        let raw: Vec<Scalar> = v.iter().map(|e| e.clone().into_value()).collect();
        if !span.insert(raw) {
            return false; // dependent basis
        }
    }
    for v in &witness.basis {
        let raw: Vec<Scalar> = v.iter().map(|e| e.clone().into_value()).collect();
        for g in gens {
            if !span.contains(&g.mul_vec(&raw)) {
                return false;
            }
        }
    }
    true
}

fn subspace_from_span(field: &Field, span: &SpanAccumulator) -> InvariantSubspace {
    // accumulator rows are unit-pivot, mutually reduced, pivot-sorted:
    // exactly the canonical reduced echelon basis
    let basis = span
        .basis_rows()
        .iter()
        .map(|row| row.iter().map(|s| field.el(s.clone())).collect())
        .collect();
    InvariantSubspace { basis }
}

/// Randomized-word irreducibility test with certified outcomes.
pub fn norton_irreducible<R: Rng + ?Sized>(
    gens: &[ExactMatrix],
    rng: &mut R,
    budget: usize,
) -> Result<IrreducibilityOutcome, MeataxeError> {
    let (field, n) = validate(gens)?;
    if n == 1 {
        return Ok(IrreducibilityOutcome::Irreducible);
    }
    let transposed: Vec<ExactMatrix> = gens.iter().map(|g| g.transpose()).collect();
    let mut trials = 0usize;

    let mut words = WordStream::new(gens);
    while trials < budget {
        let Some(word) = words.next_word(&field, rng) else {
            break;
        };
        trials += 1;
        if word.is_zero() {
            continue;
        }
        let mp = minimal_polynomial(&word);
        let deg = mp.degree().expect("nonzero matrix minimal polynomial");

        // instant certificate: irreducible annihilator of full degree
        if deg == n {
            if let Ok(true) = is_irreducible(&mp) {
                return Ok(IrreducibilityOutcome::Irreducible);
            }
        }

        let Some(g) = some_irreducible_factor(&mp, rng, 40) else {
            continue; // cannot split this word's annihilator; try another
        };
        if let Ok(flag) = is_irreducible(&g) {
            assert!(flag, "extracted factor must be irreducible");
        }
        let image = eval_at_matrix(&g, &word);
        let kernel = image.kernel();
        assert!(
            !kernel.is_empty(),
            "a factor of the minimal polynomial has a nontrivial kernel"
        );

        // primal spins: any proper spin is a verified reducibility witness
        for kv in &kernel {
            let raw: Vec<Scalar> = kv.iter().map(|e| e.clone().into_value()).collect();
            let span = spin(&field, n, gens, &[raw]);
            if span.rank() < n {
                let witness = subspace_from_span(&field, &span);
                assert!(
                    verify_invariant(gens, &witness),
                    "spin output must be invariant"
                );
                return Ok(IrreducibilityOutcome::Reducible(witness));
            }
        }

        // minimal nullity: kernel is one-dimensional over the residue
        // field of g, so one primal spin plus one dual spin decide
        let g_deg = g.degree().expect("factor is nonzero");
        if kernel.len() == g_deg {
            let dual_kernel = image.transpose().kernel();
            assert_eq!(
                dual_kernel.len(),
                kernel.len(),
                "row and column nullity agree"
            );
            let raw: Vec<Scalar> = dual_kernel[0]
                .iter()
                .map(|e| e.clone().into_value())
                .collect();
            let dual_span = spin(&field, n, &transposed, &[raw]);
            if dual_span.rank() == n {
                return Ok(IrreducibilityOutcome::Irreducible);
            }
            // proper dual spin: its orthogonal complement is invariant
            // under the original generators
            let rows: Vec<Vec<Scalar>> = dual_span.basis_rows().to_vec();
            let system = ExactMatrix::from_scalar_rows(&field, rows);
            let ortho = system.kernel();
            assert!(
                !ortho.is_empty() && ortho.len() < n,
                "orthogonal complement of a proper nonzero subspace is proper nonzero"
            );
            let mut span = SpanAccumulator::new(&field, n, false);
            for v in &ortho {
                let raw: Vec<Scalar> = v.iter().map(|e| e.clone().into_value()).collect();
                span.insert(raw);
            }
            let witness = subspace_from_span(&field, &span);
            assert!(
                verify_invariant(gens, &witness),
                "orthogonal complement of a dual-invariant subspace must be invariant"
            );
            return Ok(IrreducibilityOutcome::Reducible(witness));
        }
    }
    Ok(IrreducibilityOutcome::Inconclusive { trials })
}

/// Deterministic word candidates first (generators, pairwise sums and
/// products, shifted generators), then seeded pseudorandom words.
struct WordStream<'a> {
    gens: &'a [ExactMatrix],
    fixed: Vec<ExactMatrix>,
    next_fixed: usize,
}

impl<'a> WordStream<'a> {
    fn new(gens: &'a [ExactMatrix]) -> WordStream<'a> {
        let mut fixed = Vec::new();
        fixed.extend(gens.iter().cloned());
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate() {
                if i < j {
                    fixed.push(a.add(b));
                }
                if i != j {
                    fixed.push(a.mul(b));
                }
            }
        }
        for a in gens {
            for b in gens {
                for c in gens {
                    fixed.push(a.mul(b).add(c));
                }
            }
        }
        WordStream {
            gens,
            fixed,
            next_fixed: 0,
        }
    }

    fn next_word<R: Rng + ?Sized>(&mut self, field: &Field, rng: &mut R) -> Option<ExactMatrix> {
        if self.next_fixed < self.fixed.len() {
            let w = self.fixed[self.next_fixed].clone();
            self.next_fixed += 1;
            return Some(w);
        }
        if self.gens.is_empty() {
            return None;
        }
        // random word: a sum of one or two random products
        let make_product = |rng: &mut R| {
            let len = rng.gen_range(1..=MAX_WORD_LEN.min(4));
            let mut acc = self.gens[rng.gen_range(0..self.gens.len())].clone();
            for _ in 1..len {
                acc = acc.mul(&self.gens[rng.gen_range(0..self.gens.len())]);
            }
            acc
        };
        let mut w = make_product(rng);
        if rng.gen_bool(0.5) {
            w = w.add(&make_product(rng));
        }
        if rng.gen_bool(0.25) {
            let c = field.random(rng);
            let shift = ExactMatrix::identity(field, w.rows()).scale_raw(&c);
            w = w.add(&shift);
        }
        Some(w)
    }
}

/// Every proper nonzero invariant subspace, by exhaustive enumeration of
/// canonical echelon bases. Only available over tiny fields and small
/// dimensions; the bound is part of the contract, not a heuristic.
pub fn bruteforce_invariant_subspaces(
    gens: &[ExactMatrix],
) -> Result<Vec<InvariantSubspace>, MeataxeError> {
    let (field, n) = validate(gens)?;
    let order = field.order().unwrap_or(u128::MAX);
    if order > MAX_BRUTE_ORDER || n > MAX_BRUTE_DIM {
        return Err(MeataxeError::BoundsExceeded {
            max_order: MAX_BRUTE_ORDER,
            max_dim: MAX_BRUTE_DIM,
            order,
            dim: n,
        });
    }
    let elements: Vec<FieldElement> = field.enumerate().expect("tiny field").collect();
    let f = field.spec();
    let mut found = Vec::new();

    for d in 1..n {
        for pivots in combinations(n, d) {
            // free positions of the canonical echelon form
            let mut free_pos = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for c in (p + 1)..n {
                    if !pivots.contains(&c) {
                        free_pos.push((i, c));
                    }
                }
            }
            let mut assignment = vec![0usize; free_pos.len()];
            loop {
                // build the basis rows for this assignment
                let mut rows = vec![vec![f.zero(); n]; d];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = f.one();
                }
                for (slot, &(i, c)) in free_pos.iter().enumerate() {
                    rows[i][c] = elements[assignment[slot]].clone().into_value();
                }
                // invariance under every generator
                let mut span = SpanAccumulator::new(&field, n, false);
                for r in &rows {
                    span.insert(r.clone());
                }
                let invariant = rows.iter().all(|r| {
                    gens.iter().all(|g| span.contains(&g.mul_vec(r)))
                });
                if invariant {
                    let basis = rows
                        .iter()
                        .map(|r| r.iter().map(|s| field.el(s.clone())).collect())
                        .collect();
                    let w = InvariantSubspace { basis };
                    debug_assert!(verify_invariant(gens, &w));
                    found.push(w);
                }
                // next assignment (odometer)
                let mut slot = 0;
                loop {
                    if slot == assignment.len() {
                        break;
                    }
                    assignment[slot] += 1;
                    if assignment[slot] < elements.len() {
                        break;
                    }
                    assignment[slot] = 0;
                    slot += 1;
                }
                if slot == assignment.len() {
                    break;
                }
            }
        }
    }
    Ok(found)
}

/// All strictly increasing index tuples of length `d` from `0..n`.
fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = (0..d).collect::<Vec<usize>>();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (d - i) {
                cur[i] += 1;
                for j in (i + 1)..d {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
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

    fn flagship(field: &Field) -> Vec<ExactMatrix> {
        vec![
            ExactMatrix::from_u64_rows(
                field,
                &[
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 0],
                    vec![1, 0, 1, 0],
                    vec![0, 1, 0, 1],
                ],
            ),
            ExactMatrix::from_u64_rows(
                field,
                &[
                    vec![0, 0, 1, 2],
                    vec![0, 0, 1, 1],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
            ),
        ]
    }

    #[test]
    fn one_dimensional_modules_are_irreducible() {
        let f7 = gf(7);
        let gens = vec![ExactMatrix::from_u64_rows(&f7, &[vec![3]])];
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert!(matches!(
            norton_irreducible(&gens, &mut rng, 10).unwrap(),
            IrreducibilityOutcome::Irreducible
        ));
    }

    #[test]
    fn split_diagonal_action_is_reducible_with_verified_witness() {
        let f3 = gf(3);
        let gens = vec![
            ExactMatrix::identity(&f3, 2),
            ExactMatrix::from_u64_rows(&f3, &[vec![0, 0], vec![0, 1]]),
        ];
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        match norton_irreducible(&gens, &mut rng, 100).unwrap() {
            IrreducibilityOutcome::Reducible(w) => {
                assert!(verify_invariant(&gens, &w));
                assert_eq!(w.dim(), 1);
            }
            _ => panic!("diagonal action with two eigenlines is reducible"),
        }
        let all = bruteforce_invariant_subspaces(&gens).unwrap();
        assert_eq!(all.len(), 2, "exactly the two eigenlines");
    }

    #[test]
    fn identity_only_action_has_every_line_invariant() {
        let f2 = gf(2);
        let gens = vec![ExactMatrix::identity(&f2, 2)];
        let all = bruteforce_invariant_subspaces(&gens).unwrap();
        assert_eq!(all.len(), 3, "GF(2)^2 has three lines");
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        assert!(matches!(
            norton_irreducible(&gens, &mut rng, 100).unwrap(),
            IrreducibilityOutcome::Reducible(_)
        ));
    }

    #[test]
    fn flagship_module_is_irreducible_by_both_routes() {
        let f3 = gf(3);
        let gens = flagship(&f3);
        let all = bruteforce_invariant_subspaces(&gens).unwrap();
        assert!(all.is_empty(), "no proper invariant subspaces");
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        assert!(matches!(
            norton_irreducible(&gens, &mut rng, 200).unwrap(),
            IrreducibilityOutcome::Irreducible
        ));
    }

    #[test]
    fn irreducible_rotation_splits_after_field_extension() {
        let f3 = gf(3);
        let c = ExactMatrix::from_u64_rows(&f3, &[vec![0, 2], vec![1, 0]]);
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        assert!(matches!(
            norton_irreducible(std::slice::from_ref(&c), &mut rng, 50).unwrap(),
            IrreducibilityOutcome::Irreducible
        ));

        let f9 = Field::finite(3, 2, None).unwrap();
        let c9 = c.embed(&f9).unwrap();
        match norton_irreducible(std::slice::from_ref(&c9), &mut rng, 50).unwrap() {
            IrreducibilityOutcome::Reducible(w) => {
                assert!(verify_invariant(&[c9], &w));
                assert_eq!(w.dim(), 1, "an eigenline appears over GF(9)");
            }
            _ => panic!("the rotation splits over GF(9)"),
        }
    }

    #[test]
    fn conjugated_block_triangular_actions_are_detected() {
        let f5 = gf(5);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..10 {
            // random block upper-triangular pair, conjugated
            let mut g1 = ExactMatrix::random(&f5, 3, 3, &mut rng);
            let mut g2 = ExactMatrix::random(&f5, 3, 3, &mut rng);
            g1.set(2, 0, f5.el_zero());
            g1.set(2, 1, f5.el_zero());
            g2.set(2, 0, f5.el_zero());
            g2.set(2, 1, f5.el_zero());
            let s = loop {
                let c = ExactMatrix::random(&f5, 3, 3, &mut rng);
                if c.rank() == 3 {
                    break c;
                }
            };
            let si = s.inverse().unwrap();
            let gens = vec![s.mul(&g1).mul(&si), s.mul(&g2).mul(&si)];
            match norton_irreducible(&gens, &mut rng, 200).unwrap() {
                IrreducibilityOutcome::Reducible(w) => {
                    assert!(verify_invariant(&gens, &w));
                }
                IrreducibilityOutcome::Irreducible => {
                    panic!("a common invariant 2-space exists by construction")
                }
                IrreducibilityOutcome::Inconclusive { .. } => {
                    panic!("budget should decide a 3x3 over GF(5)")
                }
            }
        }
    }

    #[test]
    fn randomized_and_exhaustive_routes_agree_on_tiny_instances() {
        let fields = [gf(2), gf(3), Field::finite(2, 2, None).unwrap()];
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let mut checked = 0;
        for field in &fields {
            for n in 2..=4usize {
                for _ in 0..6 {
                    let gens = vec![
                        ExactMatrix::random(field, n, n, &mut rng),
                        ExactMatrix::random(field, n, n, &mut rng),
                    ];
                    let all = bruteforce_invariant_subspaces(&gens).unwrap();
                    match norton_irreducible(&gens, &mut rng, 300).unwrap() {
                        IrreducibilityOutcome::Irreducible => {
                            assert!(all.is_empty(), "oracle found {all:?}")
                        }
                        IrreducibilityOutcome::Reducible(w) => {
                            assert!(!all.is_empty());
                            assert!(verify_invariant(&gens, &w));
                        }
                        IrreducibilityOutcome::Inconclusive { .. } => {
                            panic!("tiny instances must be decided")
                        }
                    }
                    checked += 1;
                }
            }
        }
        assert!(checked >= 50, "agreement sweep covers at least 50 instances");
    }

    #[test]
    fn bounds_are_enforced() {
        let f5 = gf(5);
        let gens = vec![ExactMatrix::identity(&f5, 2)];
        assert!(matches!(
            bruteforce_invariant_subspaces(&gens),
            Err(MeataxeError::BoundsExceeded { .. })
        ));
        let f2 = gf(2);
        let gens = vec![ExactMatrix::identity(&f2, 5)];
        assert!(matches!(
            bruteforce_invariant_subspaces(&gens),
            Err(MeataxeError::BoundsExceeded { .. })
        ));
    }

    #[test]
    fn rational_reducible_actions_yield_witnesses() {
        let q = Field::rationals();
        let gens = vec![
            ExactMatrix::from_i64_rows(&q, &[vec![1, 1], vec![0, 2]]),
            ExactMatrix::from_i64_rows(&q, &[vec![3, 0], vec![0, 3]]),
        ];
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        match norton_irreducible(&gens, &mut rng, 100).unwrap() {
            IrreducibilityOutcome::Reducible(w) => {
                assert!(verify_invariant(&gens, &w));
            }
            _ => panic!("triangular rational action has an invariant line"),
        }
    }
}
