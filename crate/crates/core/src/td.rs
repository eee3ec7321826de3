//! Certification of tridiagonal pairs.
//!
//! A candidate pair of square matrices is accepted when four conditions
//! hold: each operator is diagonalizable, each operator's eigenspace
//! projectors admit a block-tridiagonal ordering relative to the other
//! operator, and the pair generates an irreducible matrix algebra. On
//! acceptance the verifier picks a canonical ordering, reads off the
//! diameter, the two eigenvalue sequences, and the shape (the eigenspace
//! dimension profile), and re-checks every identity the accepted record
//! promises.

use std::cmp::Ordering;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::matrix::ExactMatrix;
use crate::meataxe::{
    bruteforce_invariant_subspaces, norton_irreducible, verify_invariant, within_brute_bounds,
    InvariantSubspace, IrreducibilityOutcome,
};
use crate::spectral::{
    eigendecompose, Eigendecomposition, NonDiagonalizableWitness, SpectralData, SpectralError,
};

/// Randomized-search budget used when the caller does not supply one.
pub const DEFAULT_TRIAL_BUDGET: usize = 2000;

/// An accepted pair together with everything the acceptance certifies:
/// the canonically ordered projectors, both eigenvalue sequences, the
/// shape, and the sharpness flag.
#[derive(Clone)]
pub struct TdSystemRecord {
    pub field: Field,
    pub a: ExactMatrix,
    pub a_star: ExactMatrix,
    /// Diameter: one less than the number of eigenspaces of either operator.
    pub d: usize,
    /// Projectors onto the eigenspaces of `a`, in canonical order.
    pub idempotents: Vec<ExactMatrix>,
    /// Projectors onto the eigenspaces of `a_star`, in canonical order.
    pub dual_idempotents: Vec<ExactMatrix>,
    /// Eigenvalue of `a` on the i-th eigenspace.
    pub eigenvalues: Vec<FieldElement>,
    /// Eigenvalue of `a_star` on the i-th dual eigenspace.
    pub dual_eigenvalues: Vec<FieldElement>,
    /// Common dimension of the i-th eigenspace and i-th dual eigenspace.
    pub shape: Vec<usize>,
    /// True exactly when the first shape entry is 1.
    pub sharp: bool,
    /// Number of valid orderings of the primal projectors (2 when d >= 1).
    pub ordering_count: usize,
    /// Number of valid orderings of the dual projectors.
    pub dual_ordering_count: usize,
}

impl std::fmt::Debug for TdSystemRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "record(n={}, d={}, shape={:?}, sharp={})",
            self.n(),
            self.d,
            self.shape,
            self.sharp
        )
    }
}

impl TdSystemRecord {
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Number of (primal, dual) ordering combinations that satisfy the
    /// block-tridiagonal conditions: 4 when d >= 1, 1 when d = 0.
    pub fn ordering_pairs(&self) -> usize {
        self.ordering_count * self.dual_ordering_count
    }
}

/// Definite reason a pair fails one of the four defining conditions.
/// Every variant carries a witness that can be re-checked in isolation.
#[derive(Clone, Debug)]
pub enum VerificationFailure {
    NotDiagonalizableA(NonDiagonalizableWitness),
    NotDiagonalizableAStar(NonDiagonalizableWitness),
    /// The eigenspace adjacency graph of the first operator (edge set
    /// included) is not a simple path.
    NoStandardOrderingA { edges: Vec<(usize, usize)> },
    NoStandardOrderingAStar { edges: Vec<(usize, usize)> },
    /// The pair leaves a proper nonzero subspace invariant.
    Reducible(InvariantSubspace),
}

impl VerificationFailure {
    pub fn tag(&self) -> &'static str {
        match self {
            VerificationFailure::NotDiagonalizableA(_) => "not-diagonalizable-A",
            VerificationFailure::NotDiagonalizableAStar(_) => "not-diagonalizable-A*",
            VerificationFailure::NoStandardOrderingA { .. } => "no-standard-ordering-A",
            VerificationFailure::NoStandardOrderingAStar { .. } => "no-standard-ordering-A*",
            VerificationFailure::Reducible(_) => "reducible",
        }
    }
}

impl std::fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerificationFailure::NotDiagonalizableA(w)
            | VerificationFailure::NotDiagonalizableAStar(w) => {
                write!(f, "{}: {:?}", self.tag(), w)
            }
            VerificationFailure::NoStandardOrderingA { edges }
            | VerificationFailure::NoStandardOrderingAStar { edges } => {
                write!(f, "{}: adjacency edges {:?}", self.tag(), edges)
            }
            VerificationFailure::Reducible(w) => write!(f, "{}: {:?}", self.tag(), w),
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    /// The pair definitively fails a defining condition.
    #[error("rejected ({})", .0)]
    Rejected(VerificationFailure),
    /// No decision procedure could settle a condition either way; the
    /// instance is neither accepted nor certified bad.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// A consequence that is supposed to follow from the accepted
    /// conditions failed to hold; this indicates a broken record or an
    /// internal bug, never a merely bad input.
    #[error("corrupted: {0}")]
    Corrupted(String),
}

/// All orderings of the given eigenspace projectors that make the middle
/// operator block-tridiagonal. Builds the graph on projector indices with
/// an edge (i, j), i != j, exactly when `Ei * b * Ej` or `Ej * b * Ei` is
/// nonzero; orderings exist precisely when that graph is a simple path
/// through every vertex, and then the path read from either end gives all
/// of them: two when there are at least two projectors, one otherwise.
pub fn find_standard_orderings(idempotents: &[ExactMatrix], b: &ExactMatrix) -> Vec<Vec<usize>> {
    let m = idempotents.len();
    assert!(m >= 1, "need at least one projector");
    if m == 1 {
        return vec![vec![0]];
    }
    path_orderings(m, &adjacency_edges(idempotents, b))
}

/// Edge list of the block-tridiagonality graph: (i, j) with i < j is an
/// edge exactly when `Ei * b * Ej` or `Ej * b * Ei` is nonzero.
pub fn adjacency_edges(idempotents: &[ExactMatrix], b: &ExactMatrix) -> Vec<(usize, usize)> {
    let m = idempotents.len();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let forward = idempotents[i].mul(b).mul(&idempotents[j]);
            let backward = idempotents[j].mul(b).mul(&idempotents[i]);
            if !forward.is_zero() || !backward.is_zero() {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// The two traversals of the edge set when it forms a simple path through
/// all `m` vertices; empty otherwise.
fn path_orderings(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    if edges.len() + 1 != m {
        return Vec::new();
    }
    let mut adj = vec![Vec::new(); m];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let endpoints: Vec<usize> = (0..m).filter(|&v| adj[v].len() == 1).collect();
    if endpoints.len() != 2 || adj.iter().any(|nb| nb.len() > 2) {
        return Vec::new();
    }
    // Walk from one endpoint without backtracking. Degrees are at most 2,
    // so this either traces the whole path or stops early inside a smaller
    // component (the edge count then hides a cycle elsewhere).
    let mut walk = vec![endpoints[0]];
    let mut prev = usize::MAX;
    let mut cur = endpoints[0];
    while walk.len() < m {
        match adj[cur].iter().copied().find(|&v| v != prev) {
            Some(next) => {
                walk.push(next);
                prev = cur;
                cur = next;
            }
            None => return Vec::new(),
        }
    }
    let mut reversed = walk.clone();
    reversed.reverse();
    vec![walk, reversed]
}

fn decompose(m: &ExactMatrix, primal: bool) -> Result<SpectralData, VerifyError> {
    match eigendecompose(m) {
        Ok(Eigendecomposition::Diagonalizable(data)) => Ok(data),
        Ok(Eigendecomposition::NotDiagonalizable(w)) => {
            Err(VerifyError::Rejected(if primal {
                VerificationFailure::NotDiagonalizableA(w)
            } else {
                VerificationFailure::NotDiagonalizableAStar(w)
            }))
        }
        Err(SpectralError::UndecidedRootSearch { degree_left }) => {
            Err(VerifyError::Inconclusive(format!(
                "root search for the {} operator left a degree-{degree_left} factor undecided",
                if primal { "first" } else { "second" }
            )))
        }
    }
}

fn seq_cmp(a: &[FieldElement], b: &[FieldElement]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.canonical_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Verify the four conditions on `(a, a_star)` and assemble the canonical
/// record. Exhaustive invariant-subspace enumeration decides
/// irreducibility whenever the field and dimension are inside its bounds;
/// outside them the randomized search runs with `trial_budget` trials, and
/// an undecided search surfaces as `Inconclusive` rather than a guess.
pub fn verify_td_system<R: Rng + ?Sized>(
    a: &ExactMatrix,
    a_star: &ExactMatrix,
    rng: &mut R,
    trial_budget: usize,
) -> Result<TdSystemRecord, VerifyError> {
    assert!(
        a.is_square() && a_star.is_square(),
        "operators must be square"
    );
    assert_eq!(a.rows(), a_star.rows(), "operators must match in size");
    assert_eq!(a.field(), a_star.field(), "operators must share a field");
    let n = a.rows();
    assert!(n >= 1, "the underlying space must be nonzero");
    let field = a.field().clone();

    // Diagonalizability of each operator.
    let primal = decompose(a, true)?;
    let dual = decompose(a_star, false)?;

    // Irreducibility of the pair. A definite invariant subspace rejects
    // immediately; an undecided randomized search is remembered and only
    // reported if no other condition rejects first.
    let gens = [a.clone(), a_star.clone()];
    let mut undecided: Option<String> = None;
    if within_brute_bounds(&field, n) {
        let subspaces = bruteforce_invariant_subspaces(&gens).map_err(|e| {
            VerifyError::Corrupted(format!("exhaustive subspace enumeration failed: {e}"))
        })?;
        if let Some(witness) = subspaces.into_iter().next() {
            debug_assert!(verify_invariant(&gens, &witness));
            return Err(VerifyError::Rejected(VerificationFailure::Reducible(
                witness,
            )));
        }
    } else {
        let outcome = norton_irreducible(&gens, rng, trial_budget)
            .map_err(|e| VerifyError::Corrupted(format!("irreducibility search failed: {e}")))?;
        match outcome {
            IrreducibilityOutcome::Irreducible => {}
            IrreducibilityOutcome::Reducible(witness) => {
                debug_assert!(verify_invariant(&gens, &witness));
                return Err(VerifyError::Rejected(VerificationFailure::Reducible(
                    witness,
                )));
            }
            IrreducibilityOutcome::Inconclusive { trials } => {
                undecided = Some(format!(
                    "randomized irreducibility search used {trials} trials without a decision"
                ));
            }
        }
    }

    // Block-tridiagonal orderings on both sides.
    let orderings_primal = find_standard_orderings(&primal.projectors, a_star);
    if orderings_primal.is_empty() {
        return Err(VerifyError::Rejected(
            VerificationFailure::NoStandardOrderingA {
                edges: adjacency_edges(&primal.projectors, a_star),
            },
        ));
    }
    let orderings_dual = find_standard_orderings(&dual.projectors, a);
    if orderings_dual.is_empty() {
        return Err(VerifyError::Rejected(
            VerificationFailure::NoStandardOrderingAStar {
                edges: adjacency_edges(&dual.projectors, a),
            },
        ));
    }

    // Every decidable condition passed; an unsettled irreducibility search
    // is now the only obstacle and must be reported, not papered over.
    if let Some(message) = undecided {
        return Err(VerifyError::Inconclusive(message));
    }

    // Both operators must expose the same number of eigenspaces. For pairs
    // that pass the four conditions this is a theorem, so a mismatch here
    // is corruption rather than a fifth rejection reason.
    let d = orderings_primal[0].len() - 1;
    let d_dual = orderings_dual[0].len() - 1;
    if d != d_dual {
        return Err(VerifyError::Corrupted(format!(
            "eigenspace counts disagree: {} versus {}",
            d + 1,
            d_dual + 1
        )));
    }

    // Canonical ordering: smallest eigenvalue sequence in the canonical
    // element order, tie-broken by the dual sequence.
    let mut best: Option<(Vec<FieldElement>, Vec<FieldElement>, usize, usize)> = None;
    for (pi, po) in orderings_primal.iter().enumerate() {
        let theta: Vec<FieldElement> = po.iter().map(|&i| primal.eigenvalues[i].clone()).collect();
        for (di, dord) in orderings_dual.iter().enumerate() {
            let theta_star: Vec<FieldElement> =
                dord.iter().map(|&i| dual.eigenvalues[i].clone()).collect();
            let better = match &best {
                None => true,
                Some((bt, bts, _, _)) => match seq_cmp(&theta, bt) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => seq_cmp(&theta_star, bts) == Ordering::Less,
                },
            };
            if better {
                best = Some((theta.clone(), theta_star, pi, di));
            }
        }
    }
    let (eigenvalues, dual_eigenvalues, pi, di) = best.expect("nonempty ordering lists");
    let idempotents: Vec<ExactMatrix> = orderings_primal[pi]
        .iter()
        .map(|&i| primal.projectors[i].clone())
        .collect();
    let dual_idempotents: Vec<ExactMatrix> = orderings_dual[di]
        .iter()
        .map(|&i| dual.projectors[i].clone())
        .collect();

    // Shape: matching eigenspace dimensions position by position, with the
    // symmetry and unimodality every accepted pair is known to satisfy.
    let mut shape = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let r = idempotents[i].rank();
        let r_dual = dual_idempotents[i].rank();
        if r != r_dual {
            return Err(VerifyError::Corrupted(format!(
                "eigenspace dimensions disagree at position {i}: {r} versus {r_dual}"
            )));
        }
        shape.push(r);
    }
    for i in 0..=d {
        if shape[i] != shape[d - i] {
            return Err(VerifyError::Corrupted(format!(
                "shape is not symmetric: {shape:?}"
            )));
        }
    }
    for i in 1..=d / 2 {
        if shape[i - 1] > shape[i] {
            return Err(VerifyError::Corrupted(format!(
                "shape is not unimodal: {shape:?}"
            )));
        }
    }
    let sharp = shape[0] == 1;

    let record = TdSystemRecord {
        field,
        a: a.clone(),
        a_star: a_star.clone(),
        d,
        idempotents,
        dual_idempotents,
        eigenvalues,
        dual_eigenvalues,
        shape,
        sharp,
        ordering_count: orderings_primal.len(),
        dual_ordering_count: orderings_dual.len(),
    };
    assert_record_identities(&record)?;
    Ok(record)
}

/// `verify_td_system` with a fixed seed and the default trial budget.
pub fn verify_td_system_default(
    a: &ExactMatrix,
    a_star: &ExactMatrix,
) -> Result<TdSystemRecord, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7d5e_ed00);
    verify_td_system(a, a_star, &mut rng, DEFAULT_TRIAL_BUDGET)
}

/// Exact matrix identities every accepted record satisfies: the projector
/// families each sum to the identity, are orthogonal idempotents,
/// reconstruct their operator against the eigenvalue sequences, and are
/// block-tridiagonal relative to the opposite operator.
pub fn assert_record_identities(record: &TdSystemRecord) -> Result<(), VerifyError> {
    let n = record.a.rows();
    let field = record.a.field();
    let identity = ExactMatrix::identity(field, n);
    let zero = ExactMatrix::zero(field, n, n);
    let sides = [
        (
            &record.idempotents,
            &record.eigenvalues,
            &record.a,
            &record.a_star,
            "primal",
        ),
        (
            &record.dual_idempotents,
            &record.dual_eigenvalues,
            &record.a_star,
            &record.a,
            "dual",
        ),
    ];
    for (projectors, values, operator, opposite, side) in sides {
        if projectors.len() != record.d + 1 || values.len() != record.d + 1 {
            return Err(VerifyError::Corrupted(format!(
                "{side} record length disagrees with the diameter"
            )));
        }
        let mut sum = zero.clone();
        let mut reconstruction = zero.clone();
        for (e, theta) in projectors.iter().zip(values.iter()) {
            sum = sum.add(e);
            reconstruction = reconstruction.add(&e.scale(theta));
        }
        if sum != identity {
            return Err(VerifyError::Corrupted(format!(
                "{side} projectors do not sum to the identity"
            )));
        }
        if &reconstruction != operator {
            return Err(VerifyError::Corrupted(format!(
                "{side} eigenvalue reconstruction disagrees with the operator"
            )));
        }
        for (i, ei) in projectors.iter().enumerate() {
            for (j, ej) in projectors.iter().enumerate() {
                let product = ei.mul(ej);
                let expected = if i == j { ei.clone() } else { zero.clone() };
                if product != expected {
                    return Err(VerifyError::Corrupted(format!(
                        "{side} projectors {i}, {j} are not orthogonal idempotents"
                    )));
                }
                if i.abs_diff(j) > 1 && !ei.mul(opposite).mul(ej).is_zero() {
                    return Err(VerifyError::Corrupted(format!(
                        "{side} projectors {i}, {j} violate block tridiagonality"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Recompute the shape from the record's projector ranks, enforcing that
/// primal and dual eigenspace dimensions agree at every position, and
/// report the sharpness flag and diameter alongside it.
pub fn shape_profile(record: &TdSystemRecord) -> Result<(Vec<usize>, bool, usize), VerifyError> {
    let mut shape = Vec::with_capacity(record.d + 1);
    for i in 0..=record.d {
        let r = record.idempotents[i].rank();
        let r_dual = record.dual_idempotents[i].rank();
        if r != r_dual {
            return Err(VerifyError::Corrupted(format!(
                "eigenspace dimensions disagree at position {i}: {r} versus {r_dual}"
            )));
        }
        shape.push(r);
    }
    let sharp = shape[0] == 1;
    Ok((shape, sharp, record.d))
}
