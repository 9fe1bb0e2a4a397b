//! Deterministic random generators for tests and examples.
//!
//! Everything is driven by a tiny splitmix generator so that sampled data is
//! reproducible from a seed across runs and platforms, which keeps the
//! acceptance suite byte-stable.

use crate::endomorph::{Elementary, TameAutomorphism};
use crate::liederiv::Derivation;
use crate::polyalg::{ratio, Monomial, Polynomial, Rational};

/// Splitmix64: deterministic, seedable, good enough for sampling test data.
#[derive(Clone, Debug)]
pub struct SampleRng {
    state: u64,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Uniform value in `-bound..=bound`.
    pub fn int(&mut self, bound: i64) -> i64 {
        (self.next_u64() % (2 * bound as u64 + 1)) as i64 - bound
    }

    /// Uniform nonzero value in `-bound..=bound`.
    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.int(bound);
            if v != 0 {
                return v;
            }
        }
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % u64::from(den)) < u64::from(num)
    }
}

/// A small rational: integer numerator in `-bound..=bound`, denominator
/// mostly 1, occasionally 2.
pub fn rational(rng: &mut SampleRng, bound: i64) -> Rational {
    let num = rng.int(bound);
    let den = if rng.chance(1, 4) { 2 } else { 1 };
    ratio(num, den)
}

pub fn monomial(rng: &mut SampleRng, nvars: usize, max_deg: u32) -> Monomial {
    let deg = rng.below(max_deg as usize + 1) as u32;
    let mut exps = vec![0u32; nvars];
    for _ in 0..deg {
        exps[rng.below(nvars)] += 1;
    }
    Monomial::from_exponents(exps)
}

/// A sparse polynomial with up to `max_terms` terms of degree <= `max_deg`
/// and small rational coefficients (possibly zero).
pub fn polynomial(rng: &mut SampleRng, nvars: usize, max_deg: u32, max_terms: usize) -> Polynomial {
    let terms = rng.below(max_terms) + 1;
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        p.add_term(monomial(rng, nvars, max_deg), rational(rng, 3));
    }
    p
}

pub fn nonzero_polynomial(
    rng: &mut SampleRng,
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    loop {
        let p = polynomial(rng, nvars, max_deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn non_constant_polynomial(
    rng: &mut SampleRng,
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    loop {
        let p = polynomial(rng, nvars, max_deg, max_terms);
        if !p.is_constant() {
            return p;
        }
    }
}

/// A derivation with sparse random coefficients of degree <= `max_deg`.
pub fn derivation(rng: &mut SampleRng, nvars: usize, max_deg: u32) -> Derivation {
    Derivation::new(
        (0..nvars)
            .map(|_| {
                if rng.chance(1, 4) {
                    Polynomial::zero(nvars)
                } else {
                    polynomial(rng, nvars, max_deg, 3)
                }
            })
            .collect(),
    )
}

pub fn nonzero_derivation(rng: &mut SampleRng, nvars: usize, max_deg: u32) -> Derivation {
    loop {
        let d = derivation(rng, nvars, max_deg);
        if !d.is_zero() {
            return d;
        }
    }
}

/// One elementary automorphism: mostly triangular additions, with scalings
/// and swaps mixed in. Additive parts are non-constant when other variables
/// exist (shifts are well covered elsewhere) and lean toward the degree cap.
pub fn elementary(rng: &mut SampleRng, nvars: usize, max_part_deg: u32) -> Elementary {
    if nvars == 1 {
        // only affine maps exist in one variable
        return if rng.chance(1, 2) {
            Elementary::Add {
                target: 0,
                f: Polynomial::constant(1, ratio(rng.nonzero_int(3), 1)),
            }
        } else {
            Elementary::Scale {
                target: 0,
                c: ratio(rng.nonzero_int(3), if rng.chance(1, 3) { 2 } else { 1 }),
            }
        };
    }
    let kind = rng.below(6);
    match kind {
        0..=3 => {
            let target = rng.below(nvars);
            let mut f = Polynomial::zero(nvars);
            for _ in 0..=rng.below(2) {
                let deg = 1 + rng.below(max_part_deg as usize) as u32;
                let mut exps = vec![0u32; nvars];
                for _ in 0..deg {
                    let v = loop {
                        let v = rng.below(nvars);
                        if v != target {
                            break v;
                        }
                    };
                    exps[v] += 1;
                }
                f.add_term(Monomial::from_exponents(exps), rational(rng, 3));
            }
            if f.is_zero() {
                // unlucky zero coefficients: fall back to a single variable
                let v = if target == 0 { 1 } else { 0 };
                f = Polynomial::variable(nvars, v);
            }
            Elementary::Add { target, f }
        }
        4 => Elementary::Scale {
            target: rng.below(nvars),
            c: ratio(rng.nonzero_int(3), if rng.chance(1, 3) { 2 } else { 1 }),
        },
        _ => {
            let i = rng.below(nvars);
            let j = loop {
                let j = rng.below(nvars);
                if j != i {
                    break j;
                }
            };
            Elementary::Swap { i, j }
        }
    }
}

/// A tame automorphism built from at most `max_factors` elementary maps with
/// additive parts of degree <= `max_part_deg`, resampled until the composed
/// images have degree <= `max_total_deg` (keeping bounded-degree recovery
/// and inverse computations feasible).
pub fn tame(
    rng: &mut SampleRng,
    nvars: usize,
    max_factors: usize,
    max_part_deg: u32,
    max_total_deg: u32,
) -> TameAutomorphism {
    loop {
        let count = rng.below(max_factors) + 1;
        let factors = (0..count).map(|_| elementary(rng, nvars, max_part_deg)).collect();
        let candidate = TameAutomorphism::new(nvars, factors);
        if candidate.endo().degree() <= max_total_deg {
            return candidate;
        }
    }
}

/// A shift automorphism with small rational offsets.
pub fn shift(rng: &mut SampleRng, nvars: usize) -> crate::endomorph::PolyEndo {
    let lambda: Vec<Rational> = (0..nvars).map(|_| rational(rng, 3)).collect();
    crate::endomorph::PolyEndo::shift(&lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_from_seed() {
        let mut a = SampleRng::new(42);
        let mut b = SampleRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut a = SampleRng::new(7);
        let mut b = SampleRng::new(7);
        assert_eq!(polynomial(&mut a, 3, 4, 4), polynomial(&mut b, 3, 4, 4));
    }

    #[test]
    fn tame_is_invertible_and_bounded() {
        let mut rng = SampleRng::new(1);
        for _ in 0..25 {
            let nvars = rng.below(3) + 1;
            let t = tame(&mut rng, nvars, 4, 3, 8);
            let s = t.endo();
            assert!(s.degree() <= 8);
            assert!(s.jacobian_unit().is_ok());
            assert!(s.compose(&t.inverse_endo()).is_identity());
        }
    }

    #[test]
    fn sampled_values_respect_bounds() {
        let mut rng = SampleRng::new(9);
        for _ in 0..50 {
            let p = polynomial(&mut rng, 2, 3, 4);
            assert!(p.degree() <= 3);
            let d = derivation(&mut rng, 3, 4);
            assert!(d.coeff_degree() <= 4);
            let v = rng.int(5);
            assert!((-5..=5).contains(&v));
            assert_ne!(rng.nonzero_int(2), 0);
        }
    }
}
