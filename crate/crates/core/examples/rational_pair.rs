//! Everything works over the rationals too: exact fraction arithmetic,
//! verification, and sharpening of a pair with fractional entries.
//!
//! Run with: cargo run --example rational_pair

use tdsharp::field::{BaseScalar, Field};
use tdsharp::generate::{ladder_split_params, split_form_pair};
use tdsharp::sharpen::sharpen_pipeline_default;
use tdsharp::td::verify_td_system_default;

fn main() {
    let q = Field::rationals();
    let el = |num: i64, den: i64| {
        q.el_from_coefficients(vec![BaseScalar::rational_from_i64(num, den).expect("fraction")])
            .expect("element")
    };

    // A diameter-3 split-form pair with fractional eigenvalue sequences
    // (affine images of the weights 3, 1, -1, -3) and fractional split
    // entries.
    let params = ladder_split_params(
        &q,
        3,
        &el(1, 2),  // eigenvalue slope
        &el(-3, 1), // eigenvalue offset
        &el(2, 3),  // dual slope
        &el(1, 6),  // dual offset
        &el(5, 7),  // split scale
    )
    .expect("ladder parameters");
    let (a, a_star) = split_form_pair(&params);
    println!("A  = {a:?}");
    println!("A* = {a_star:?}");

    let record = verify_td_system_default(&a, &a_star).expect("verifies over Q");
    println!(
        "accepted over Q: d={}, shape {:?}, sharp={}",
        record.d, record.shape, record.sharp
    );
    println!("eigenvalues      {:?}", record.eigenvalues);
    println!("dual eigenvalues {:?}", record.dual_eigenvalues);
    assert_eq!(record.d, 3);
    assert_eq!(record.shape, vec![1, 1, 1, 1]);
    assert!(record.sharp);

    let cert = sharpen_pipeline_default(&a, &a_star).expect("sharpens over Q");
    println!(
        "center dimension rho = {}, dim T = {}, identity rebase = {}",
        cert.rho,
        cert.t_dim,
        cert.sharpened.a == a
    );
    assert_eq!(cert.rho, 1);
    assert_eq!(cert.t_dim, 16);
    assert_eq!(cert.sharpened.a, a);
    assert!(cert.sharpened.sharp);
}
