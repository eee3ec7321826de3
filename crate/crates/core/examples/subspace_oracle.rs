//! Cross-check the randomized irreducibility test against exhaustive
//! invariant-subspace enumeration on tiny instances, including a crafted
//! reducible pair whose witness is verified invariant.
//!
//! Run with: cargo run --example subspace_oracle

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tdsharp::cli::flagship_instance;
use tdsharp::field::Field;
use tdsharp::matrix::ExactMatrix;
use tdsharp::meataxe::{
    bruteforce_invariant_subspaces, norton_irreducible, verify_invariant, IrreducibilityOutcome,
};

fn cross_check(label: &str, gens: &[ExactMatrix]) {
    let subspaces = bruteforce_invariant_subspaces(gens).expect("within bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let fast = norton_irreducible(gens, &mut rng, 2000).expect("well-formed generators");
    match (&fast, subspaces.is_empty()) {
        (IrreducibilityOutcome::Irreducible, true) => {
            println!("{label}: irreducible — exhaustive and randomized tests agree");
        }
        (IrreducibilityOutcome::Reducible(w), false) => {
            assert!(verify_invariant(gens, w), "witness must be invariant");
            println!(
                "{label}: reducible — {} proper invariant subspace(s); randomized witness \
                 (dim {}) re-verified invariant",
                subspaces.len(),
                w.dim()
            );
        }
        _ => panic!("{label}: the two tests disagree"),
    }
}

fn main() {
    let flagship = flagship_instance().expect("flagship");
    cross_check("flagship 4x4/GF(3)", &[flagship.a, flagship.a_star]);

    // A visibly reducible pair: both operators fix the first coordinate
    // axis.
    let f = Field::prime(3).expect("GF(3)");
    let upper_a = ExactMatrix::from_u64_rows(&f, &[vec![1, 1], vec![0, 2]]);
    let upper_b = ExactMatrix::from_u64_rows(&f, &[vec![2, 0], vec![0, 1]]);
    cross_check("upper-triangular 2x2/GF(3)", &[upper_a, upper_b]);

    // GF(4): the largest field order the exhaustive search accepts.
    let gf4 = Field::finite(2, 2, None).expect("GF(4)");
    let g = gf4.el_generator();
    let zero = gf4.el_zero();
    let one = gf4.el_one();
    let a = ExactMatrix::from_elements(
        &gf4,
        vec![vec![zero.clone(), g.clone()], vec![one.clone(), zero.clone()]],
    )
    .expect("matrix");
    let b = ExactMatrix::from_elements(
        &gf4,
        vec![vec![one.clone(), zero.clone()], vec![zero, g]],
    )
    .expect("matrix");
    cross_check("2x2/GF(4)", &[a, b]);
}
