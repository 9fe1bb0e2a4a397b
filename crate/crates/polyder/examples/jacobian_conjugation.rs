//! Automorphisms acting on derivations: Jacobians, exact inversion, and the
//! conjugation action computed through the adjugate (no inverse needed).
//!
//! ```bash
//! cargo run -p polyder --example jacobian_conjugation
//! ```

use polyder::endomorph::conjugate_derivation;
use polyder::liederiv::Derivation;
use polyder::parse::{parse_derivation, parse_endo, parse_polynomial};

fn main() {
    let n = 2;
    let s = parse_endo("x1 -> x1 + x2^2; x2 -> x2", n).unwrap();
    println!("sigma: {s}");

    let j = s.jacobian();
    println!("Jacobian rows: [{}, {}] / [{}, {}]", j.get(0, 0), j.get(0, 1), j.get(1, 0), j.get(1, 1));
    println!("Jacobian determinant: {}", s.jacobian_det());

    let inv = s.invert_bounded(4).unwrap();
    println!("inverse: {inv}");
    println!("sigma . inverse is the identity: {}", s.compose(&inv).is_identity());

    // conjugating the partial frame produces the partials with respect to
    // the new coordinates
    for i in 0..n {
        let conj = conjugate_derivation(&s, &Derivation::partial(n, i)).unwrap();
        println!("sigma d{} sigma^-1 = {conj}", i + 1);
        for k in 0..n {
            println!("  applied to {} gives {}", s.image(k), conj.apply(s.image(k)));
        }
    }

    // the conjugation identity needs no inverse at all:
    // (sigma d sigma^-1)(sigma p) = sigma (d p)
    let d = parse_derivation("x2*d1 + d2", n).unwrap();
    let p = parse_polynomial("x1^2 - x2", n).unwrap();
    let lhs = conjugate_derivation(&s, &d).unwrap().apply(&s.apply(&p));
    let rhs = s.apply(&d.apply(&p));
    println!("no-inverse conjugation identity holds: {}", lhs == rhs);

    // only shifts fix every partial derivative; only the identity fixes the
    // partials and the Euler frame together
    let shift = parse_endo("x1 -> x1 + 3; x2 -> x2 - 1/2", n).unwrap();
    println!(
        "shift {shift}: fixes partials {}, fixes Euler frame too {}",
        shift.fixes_partials(),
        shift.fixes_euler_frame().unwrap()
    );
    println!(
        "sigma: fixes partials {} (it is not a shift)",
        s.fixes_partials()
    );
}
