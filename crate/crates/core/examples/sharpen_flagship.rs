//! The full sharpening pipeline on the flagship non-sharp pair: certify
//! the generated algebra's center as a field, check the four corner
//! isomorphisms and the dual-basis pairing, then rebase the 4-dimensional
//! GF(3) pair into a 2-dimensional sharp pair over GF(9).
//!
//! Run with: cargo run --example sharpen_flagship

use tdsharp::cli::flagship_instance;
use tdsharp::instance::{certificate_json, instance_digest};
use tdsharp::sharpen::sharpen_pipeline_default;

fn main() {
    let instance = flagship_instance().expect("flagship construction");
    println!(
        "input: {}x{} pair over GF(3), digest {}",
        instance.a.rows(),
        instance.a.rows(),
        &instance_digest(&instance)[..16]
    );

    let cert = sharpen_pipeline_default(&instance.a, &instance.a_star)
        .expect("the flagship pair sharpens");

    println!("\ncertificate:");
    println!("  dim T                  = {}", cert.t_dim);
    println!("  center dimension rho   = {}", cert.rho);
    println!(
        "  center minimal poly    = {:?}",
        cert.center_certificate.minimal_polynomial
    );
    for (label, corner) in ["E0", "Ed", "E*0", "E*d"].iter().zip(&cert.corners) {
        println!(
            "  corner {label:<3} dim {} — isomorphic image of the center",
            corner.corner_dim
        );
    }
    println!(
        "  dual basis: n = {} pairs with x'_i x_j = delta_ij E*0",
        cert.dual_basis.n
    );
    for (stage, ok) in &cert.stage_passes {
        println!("  stage {stage:<12} {}", if *ok { "pass" } else { "FAIL" });
    }

    let s = &cert.sharpened;
    println!("\nsharpened system:");
    println!(
        "  {}x{} over GF({}^{}), shape {:?}, sharp = {}",
        s.n(),
        s.n(),
        s.field.characteristic(),
        s.field.degree(),
        s.shape,
        s.sharp
    );
    println!("  A'  = {:?}", s.a);
    println!("  A*' = {:?}", s.a_star);

    assert_eq!(cert.rho, 2);
    assert_eq!(s.shape, vec![1, 1]);
    assert!(s.sharp);

    let json = certificate_json(&cert, &instance_digest(&instance));
    println!(
        "\nJSON certificate has {} stage verdicts, all true.",
        json["lemma_passes"].as_object().unwrap().len()
    );
}
