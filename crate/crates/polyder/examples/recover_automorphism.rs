//! The central algorithm: given n commuting locally nilpotent derivations
//! whose common kernel is the constants, construct dual coordinates and the
//! automorphism conjugating the partial frame onto them.
//!
//! ```bash
//! cargo run -p polyder --example recover_automorphism
//! ```

use polyder::parse::parse_derivation;
use polyder::recover::{construct_coordinates, recover_automorphism, RecoverError};

fn main() {
    let n = 2;
    // the frame of x1 -> x1 + x2^2, x2 -> x2, presented as raw derivations
    let ds = vec![
        parse_derivation("d1", n).unwrap(),
        parse_derivation("-2*x2*d1 + d2", n).unwrap(),
    ];
    println!("inputs: {} and {}", ds[0], ds[1]);

    let coords = construct_coordinates(&ds, 8, 32).unwrap();
    println!("coordinates dual to the inputs:");
    for (j, c) in coords.coords.iter().enumerate() {
        println!("  x{}' = {c}", j + 1);
    }
    for record in &coords.trace {
        println!("  {record}");
    }

    let report = recover_automorphism(&ds, 8, 32).unwrap();
    println!("recovered automorphism: {}", report.sigma);

    // a skewed frame: corrections live in the unitriangular matrix
    let ds = vec![
        parse_derivation("d1 + d2", n).unwrap(),
        parse_derivation("d2", n).unwrap(),
    ];
    let report = recover_automorphism(&ds, 8, 32).unwrap();
    println!("\nskewed frame ({}, {}) recovers: {}", ds[0], ds[1], report.sigma);

    // hypothesis violations are named precisely
    println!("\nrejections:");
    for (a, b) in [("d1", "d1"), ("d1", "x1*d2"), ("x1*d1", "d2")] {
        let ds = vec![
            parse_derivation(a, n).unwrap(),
            parse_derivation(b, n).unwrap(),
        ];
        match recover_automorphism(&ds, 8, 32) {
            Err(e) => println!("  ({a}, {b}): {e}"),
            Ok(_) => unreachable!("these inputs violate a hypothesis"),
        }
    }

    // when the degree bound starves the kernel computations the failure is
    // explicit and retryable, and the stage trace shows what happened;
    // this frame's coordinates x_i ± (x1+x2)^2 all have degree 2, invisible
    // at bound 1
    let n = 3;
    let s = polyder::parse::parse_endo(
        "x1 -> x1 + (x1+x2)^2; x2 -> x2 - (x1+x2)^2; x3 -> x3 + (x1+x2)^2",
        n,
    )
    .unwrap();
    let ds: Vec<_> = (0..n)
        .map(|i| {
            polyder::endomorph::conjugate_derivation(&s, &polyder::liederiv::Derivation::partial(n, i))
                .unwrap()
        })
        .collect();
    match construct_coordinates(&ds, 1, 32) {
        Err(RecoverError::DegreeBoundExceeded { stage, trace, .. }) => {
            println!("\nat degree bound 1: {stage}");
            for r in trace {
                println!("  partial progress: {r}");
            }
        }
        other => println!("unexpected: {other:?}"),
    }
    let report = recover_automorphism(&ds, 2, 32).unwrap();
    println!("at degree bound 2 the recovery closes: {}", report.sigma);
}
