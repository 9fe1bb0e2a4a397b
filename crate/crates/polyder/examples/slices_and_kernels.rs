//! Locally nilpotent derivations: nilpotency indices, bounded kernels, and
//! slice extraction.
//!
//! ```bash
//! cargo run -p polyder --example slices_and_kernels
//! ```

use polyder::lndkit::{
    common_kernel_bounded, generator_indices, is_lnd_bounded, kernel_basis_bounded, local_slice,
    nilpotency_index,
};
use polyder::parse::{parse_derivation, parse_polynomial};

fn main() {
    let n = 2;
    let d = parse_derivation("d1 + x1*d2", n).unwrap();
    println!("d = {d}");

    // iterating d kills every generator after finitely many steps
    println!(
        "locally nilpotent within cap 32: {} (generator indices {:?})",
        is_lnd_bounded(&d, 32),
        generator_indices(&d, 32).unwrap()
    );
    let h = parse_derivation("x1*d1", n).unwrap();
    println!("x1*d1 locally nilpotent: {} (x1 is an eigenvector)", is_lnd_bounded(&h, 32));

    let p = parse_polynomial("x2^2", n).unwrap();
    println!("nilpotency index of {d} on {p}: {:?}", nilpotency_index(&d, &p, 32));

    // the bounded kernel is computed exactly by a nullspace computation
    let k = kernel_basis_bounded(&d, 4);
    println!("\nkernel of {d} at degree <= 4:");
    for b in &k.basis {
        println!("  {b}");
    }

    // two conjugated partials meet only in the constants
    let e = parse_derivation("-2*x2*d1 + d2", n).unwrap();
    let common = common_kernel_bounded(&[parse_derivation("d1", n).unwrap(), e], 4);
    println!("\ncommon kernel of the conjugated frame: {:?}", common.basis);

    // slice extraction: iterate d on a seed until a nonzero constant shows
    // up; one step back (scaled) is an element d maps to exactly 1
    let seed = parse_polynomial("x2", n).unwrap();
    let cert = local_slice(&d, &seed, 32).unwrap();
    println!("\n{cert}");
    println!("check d * slice = {}", d.apply(&cert.slice));

    // bad seeds are reported, not papered over
    let bad = parse_polynomial("x2", n).unwrap();
    let d1 = parse_derivation("d1", n).unwrap();
    println!("slice of d1 from seed x2: {:?}", local_slice(&d1, &bad, 32));
}
