//! Randomized end-to-end demonstration: conjugate the partial frame by a
//! random tame automorphism, recover it from the conjugates alone, and
//! check that input and output agree up to a shift.
//!
//! ```bash
//! cargo run -p polyder --example roundtrip_random --release
//! ```

use polyder::recover::{main_theorem_roundtrip, RecoverError};
use polyder::sample::{self, SampleRng};

fn main() {
    let mut rng = SampleRng::new(0xD1CE);
    let runs = 20;
    let mut closed = 0;
    for k in 0..runs {
        let n = k % 3 + 1;
        let tame = sample::tame(&mut rng, n, 4, 3, if n == 3 { 5 } else { 8 });
        let sigma = tame.endo();
        let mut bound = 8u32.max(sigma.degree());
        let report = loop {
            match main_theorem_roundtrip(&sigma, bound, 32) {
                Ok(report) => break report,
                Err(RecoverError::DegreeBoundExceeded { .. }) => bound *= 2,
                Err(e) => panic!("hypotheses violated unexpectedly: {e}"),
            }
        };
        assert!(report.closed);
        closed += 1;
        println!(
            "#{k:2} n={n} degree {:>2}, {} factor(s), recovered with bound {bound} ({} stages)",
            sigma.degree(),
            tame.factors.len(),
            report.recovery.trace.len(),
        );
    }
    println!("\n{closed}/{runs} roundtrips closed up to shifts");
}
