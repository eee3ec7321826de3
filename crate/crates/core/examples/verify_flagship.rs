//! Verify the flagship non-sharp pair and walk through what the record
//! certifies: diameter, eigenvalue sequences, shape, and the exact
//! idempotent identities.
//!
//! Run with: cargo run --example verify_flagship

use tdsharp::cli::flagship_instance;
use tdsharp::td::{assert_record_identities, verify_td_system_default};

fn main() {
    let instance = flagship_instance().expect("flagship construction");
    println!("operators over GF(3), dimension {}:", instance.a.rows());
    println!("A      = {:?}", instance.a);
    println!("A*     = {:?}", instance.a_star);

    let record = verify_td_system_default(&instance.a, &instance.a_star)
        .expect("the flagship pair verifies");

    println!("\naccepted:");
    println!("  diameter      d  = {}", record.d);
    println!("  eigenvalues   th = {:?}", record.eigenvalues);
    println!("  dual eigens   th*= {:?}", record.dual_eigenvalues);
    println!("  shape            = {:?}", record.shape);
    println!("  sharp            = {}", record.sharp);
    println!(
        "  standard orderings: {} primal, {} dual",
        record.ordering_count, record.dual_ordering_count
    );

    assert_record_identities(&record).expect("idempotent identities");
    println!("\nidentities re-checked exactly:");
    println!("  sum E_i = I; E_i E_j = delta E_i; A = sum th_i E_i;");
    println!("  E_i A* E_j = 0 and E*_i A E*_j = 0 whenever |i-j| > 1");

    assert_eq!(record.shape, vec![2, 2]);
    assert!(!record.sharp);
    println!("\nthe pair is NOT sharp: the 0-eigenspaces have dimension 2.");
}
