//! The twisted diameter-1 family: how non-sharp pairs are built, and the
//! named preconditions that reject degenerate parameter choices.
//!
//! A 2x2 seed pair over GF(p^2) (with i^2 = -1) is rewritten over GF(p);
//! the twist gamma must lie outside GF(p), avoid the one value that makes
//! the seed reducible, and have its square outside GF(p) too.
//!
//! Run with: cargo run --example twisted_family

use tdsharp::generate::{twisted_diameter1_nonsharp, GenerateError, TwistedParams};
use tdsharp::td::verify_td_system_default;

fn attempt(p: u64, theta: (i64, i64), theta_star: (i64, i64), gamma: (i64, i64)) {
    let label = format!(
        "p={p}, theta=({},{}), theta*=({},{}), gamma={}+{}i",
        theta.0, theta.1, theta_star.0, theta_star.1, gamma.0, gamma.1
    );
    let params = match TwistedParams::from_integers(p, theta, theta_star, gamma) {
        Ok(t) => t,
        Err(e) => {
            println!("{label}\n  -> rejected while building parameters: {e}");
            return;
        }
    };
    match twisted_diameter1_nonsharp(&params) {
        Ok(built) => {
            let record = verify_td_system_default(&built.a, &built.a_star)
                .expect("emitted instances re-verify");
            println!(
                "{label}\n  -> accepted: {}x{} over GF({p}), shape {:?}, sharp={}",
                record.n(),
                record.n(),
                record.shape,
                record.sharp
            );
        }
        Err(e) => {
            let name = match &e {
                GenerateError::SeedReducible => "seed reducible",
                GenerateError::TwistInBase => "twist in base field",
                GenerateError::TwistSquareInBase => "twist square in base field",
                _ => "other",
            };
            println!("{label}\n  -> rejected ({name}): {e}");
        }
    }
}

fn main() {
    // The flagship choice.
    attempt(3, (0, 1), (0, 1), (1, 1));
    // gamma equal to (theta0-theta1)(theta*1-theta*0): the seed's two
    // operators share an eigenline, so the seed is reducible.
    attempt(3, (0, 1), (0, 1), (2, 0));
    // gamma in the base field (and different from the reducible value).
    attempt(3, (0, 1), (0, 2), (2, 0));
    // gamma = i: gamma^2 = -1 stays in the base field.
    attempt(3, (0, 1), (0, 1), (0, 1));
    // Another working choice over GF(7).
    attempt(7, (0, 1), (2, 5), (3, 2));
}
