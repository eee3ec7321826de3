//! Scalar restriction and its constructive inverse.
//!
//! Build a sharp diameter-2 pair over GF(27) as a Kronecker sum of two
//! diameter-1 split pairs, rewrite it over GF(3) (12x12, non-sharp, shape
//! (3,6,3)), sharpen it back, and exhibit an explicit invertible matrix
//! conjugating the expanded sharpened pair onto the input.
//!
//! Run with: cargo run --example restrict_roundtrip

use tdsharp::field::Field;
use tdsharp::generate::{
    kronecker_sum_pair, restrict_matrix, restrict_scalars, split_form_pair, SplitFormParams,
};
use tdsharp::sharpen::{sharpen_pipeline_default, simultaneous_conjugacy};
use tdsharp::td::verify_td_system_default;

fn main() {
    let gf27 = Field::finite(3, 3, None).expect("GF(27)");
    let diameter1 = |phi| {
        let params = SplitFormParams::new(
            gf27.clone(),
            vec![gf27.el_zero(), gf27.el_one()],
            vec![gf27.el_zero(), gf27.el_one()],
            vec![phi],
        )
        .expect("parameters");
        split_form_pair(&params)
    };
    let (sa, sa_star) =
        kronecker_sum_pair(&diameter1(gf27.el_one()), &diameter1(gf27.el_generator()));
    let seed = verify_td_system_default(&sa, &sa_star).expect("seed verifies");
    println!(
        "seed over GF(27): {}x{}, d={}, shape {:?}, sharp={}",
        seed.n(),
        seed.n(),
        seed.d,
        seed.shape,
        seed.sharp
    );

    let (a, a_star) = restrict_scalars(&seed).expect("restriction");
    let record = verify_td_system_default(&a, &a_star).expect("restriction verifies");
    println!(
        "restricted over GF(3): {}x{}, d={}, shape {:?}, sharp={}",
        record.n(),
        record.n(),
        record.d,
        record.shape,
        record.sharp
    );

    let started = std::time::Instant::now();
    let cert = sharpen_pipeline_default(&a, &a_star).expect("sharpens");
    println!(
        "sharpened back: {}x{} over GF(3^{}), shape {:?}, rho={} ({} ms)",
        cert.sharpened.n(),
        cert.sharpened.n(),
        cert.sharpened.field.degree(),
        cert.sharpened.shape,
        cert.rho,
        started.elapsed().as_millis()
    );
    assert_eq!(cert.sharpened.shape, seed.shape);

    // Expand the sharpened pair entrywise over GF(3) and find the explicit
    // change of basis back to the input.
    let expanded_a = restrict_matrix(&cert.sharpened.a);
    let expanded_a_star = restrict_matrix(&cert.sharpened.a_star);
    let x = simultaneous_conjugacy(&a, &a_star, &expanded_a, &expanded_a_star)
        .expect("conjugating matrix exists");
    assert_eq!(x.mul(&a), expanded_a.mul(&x));
    assert_eq!(x.mul(&a_star), expanded_a_star.mul(&x));
    println!(
        "round trip: found invertible X with XA = A'X and XA* = A*'X ({}x{})",
        x.rows(),
        x.cols()
    );
}
