//! Bounded-degree structure of the derivation algebra: distinguished
//! maximal abelian frames, the trivial center, and simplicity, all verified
//! by exact linear algebra on coefficient vectors.
//!
//! ```bash
//! cargo run -p polyder --example structure_checks
//! ```

use polyder::liederiv::{
    centralizer_bounded, ideal_closure_bounded, module_orbit_bounded, normalizer_bounded,
    Derivation, DerivationSubspace,
};
use polyder::lndkit::common_kernel_bounded;
use polyder::sample::{self, SampleRng};

fn main() {
    let n = 2;
    let deg = 5;
    let partials: Vec<Derivation> = (0..n).map(|i| Derivation::partial(n, i)).collect();
    let eulers: Vec<Derivation> = (0..n).map(|i| Derivation::euler(n, i)).collect();

    // the span of the partials is its own centralizer, hence maximal abelian
    let c = centralizer_bounded(&partials, deg);
    println!(
        "centralizer of {{d1, d2}} at degree <= {deg}: dim {} (equals the frame: {})",
        c.dim(),
        c.equals_span(&partials)
    );

    // the Euler frame is a Cartan subalgebra: abelian, self-centralizing,
    // self-normalizing
    let c = centralizer_bounded(&eulers, deg);
    let nn = normalizer_bounded(&eulers, deg);
    println!(
        "Euler frame {{x1*d1, x2*d2}}: centralizer dim {}, normalizer dim {} (both equal the frame: {})",
        c.dim(),
        nn.dim(),
        c.equals_span(&eulers) && nn.equals_span(&eulers)
    );

    // the center vanishes
    let z = centralizer_bounded(&DerivationSubspace::full(n, 2).basis, deg);
    println!("center truncation at degree <= {deg}: dim {}", z.dim());

    // the common kernel of the partials is just the constants
    let k = common_kernel_bounded(&partials, deg);
    println!("common kernel of the partials: dim {} (constants only: {})", k.dim(), k.is_constants_only());

    // simplicity at desk scale: any nonzero element generates everything
    let mut rng = SampleRng::new(7);
    let full = DerivationSubspace::full(n, 3).dim();
    for _ in 0..3 {
        let seed = sample::nonzero_derivation(&mut rng, n, 3);
        let closure = ideal_closure_bounded(&seed, 3).unwrap();
        println!(
            "ideal closure of {seed}: dim {} of {full} (full: {})",
            closure.dim(),
            closure.dim() == full
        );
    }

    // ... and the module P_n / K is simple as well
    let p = sample::non_constant_polynomial(&mut rng, n, 3, 3);
    let orbit = module_orbit_bounded(&p, 3).unwrap();
    println!(
        "module orbit of {p}: dim {} of {} in the quotient by constants",
        orbit.len(),
        polyder::polyalg::dim_up_to(n, 3) - 1
    );
}
