//! The Lie algebra of derivations: brackets and the weight grading.
//!
//! ```bash
//! cargo run -p polyder --example bracket_and_grading
//! ```

use polyder::liederiv::{graded_component, Derivation};
use polyder::parse::parse_derivation;

fn main() {
    let n = 2;

    // basic brackets; H_i = x_i*d_i is the Euler-type derivation
    let d1 = parse_derivation("d1", n).unwrap();
    let x1d2 = parse_derivation("x1*d2", n).unwrap();
    let h1 = parse_derivation("x1*d1", n).unwrap();
    println!("[d1, x1*d2]      = {}", d1.bracket(&x1d2));
    println!("[x1*d1, x1*d2]   = {}", h1.bracket(&x1d2));
    println!("[x2*d1, x1*d2]   = {}", {
        let a = parse_derivation("x2*d1", n).unwrap();
        a.bracket(&x1d2)
    });

    // every derivation splits into homogeneous parts: x^a d_i has weight
    // a - e_i, and brackets add weights
    let mixed = parse_derivation("d1 + x1*d1 + x1^2*x2*d2", n).unwrap();
    println!("\ngraded parts of {mixed}:");
    for (w, part) in mixed.graded_parts() {
        println!("  weight {w:?}: {part}");
    }

    let a = parse_derivation("x1^2*d2", n).unwrap(); // weight (2, -1)
    let b = parse_derivation("x2^2*d1", n).unwrap(); // weight (-1, 2)
    let bracket = a.bracket(&b);
    println!("\n[{a}, {b}] = {bracket}");
    println!("weights {:?} + {:?} -> {:?}", a.weight().unwrap(), b.weight().unwrap(), bracket.weight().unwrap());

    // weight spaces have dimension n on the positive cone, 1 on the
    // boundary rays, 0 elsewhere
    println!("\nweight-space dimensions in {n} variables:");
    for w in [[0i64, 0], [1, 0], [1, -1], [-1, 0], [-1, -1], [2, 3]] {
        let comp = graded_component(n, &w);
        let basis: Vec<String> = comp.basis.iter().map(Derivation::to_string).collect();
        println!("  {w:?}: dim {} {{{}}}", comp.dim(), basis.join(", "));
    }
}
