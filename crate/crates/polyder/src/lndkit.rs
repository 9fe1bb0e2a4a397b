//! Locally nilpotent derivation machinery.
//!
//! Local nilpotence is an infinitary notion; everything here is a semi-
//! decision with an explicit iteration cap or an explicit degree bound, and
//! a negative answer always names the bound that was exhausted. The slice
//! extraction realizes the constructive content of the statement that a
//! locally nilpotent derivation with a slice makes its algebra a polynomial
//! ring over the kernel.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::liederiv::Derivation;
use crate::polyalg::{Echelon, PolyChart, Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SliceError {
    #[error("seed lies in the kernel of the derivation")]
    SeedInKernel,
    #[error("terminal kernel element {terminal} is not a constant; choose another seed")]
    TerminalNotConstant { terminal: Polynomial },
    #[error("no constant reached within {cap} applications of the derivation")]
    CapExceeded { cap: u32 },
}

/// Witness that `slice` satisfies `d * slice = 1`: iterating `d` on
/// `witness` reaches the nonzero constant `constant` after `steps`
/// applications, and `slice` is the previous iterate divided by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCertificate {
    pub slice: Polynomial,
    pub witness: Polynomial,
    pub steps: u32,
    pub constant: Rational,
}

impl fmt::Display for SliceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "slice {} (witness {}, steps {}, constant {})",
            self.slice, self.witness, self.steps, self.constant
        )
    }
}

/// An exact basis of the bounded-degree kernel of a derivation (or of a
/// common kernel). Always contains the constants, so `dim >= 1`.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub degree_bound: u32,
    pub basis: Vec<Polynomial>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True iff the kernel truncation is exactly the constants.
    pub fn is_constants_only(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }
}

/// Least `k` with `d^k * p = 0`, or `None` if no such `k <= cap` exists.
pub fn nilpotency_index(d: &Derivation, p: &Polynomial, cap: u32) -> Option<u32> {
    let mut current = p.clone();
    for k in 0..=cap {
        if current.is_zero() {
            return Some(k);
        }
        current = d.apply(&current);
    }
    None
}

/// Semi-decides local nilpotence: every generator `x_i` must be annihilated
/// by some power `<= cap` of the derivation. Since the nilpotent elements of
/// a derivation form a subalgebra, nilpotence on generators is equivalent to
/// local nilpotence on the whole algebra.
pub fn is_lnd_bounded(d: &Derivation, cap: u32) -> bool {
    (0..d.nvars()).all(|i| {
        nilpotency_index(d, &Polynomial::variable(d.nvars(), i), cap).is_some()
    })
}

/// Per-generator nilpotency indices, when all exist within the cap.
pub fn generator_indices(d: &Derivation, cap: u32) -> Option<Vec<u32>> {
    (0..d.nvars())
        .map(|i| nilpotency_index(d, &Polynomial::variable(d.nvars(), i), cap))
        .collect()
}

/// Exact basis of `{p : deg p <= max_deg, d * p = 0}`, by a nullspace
/// computation on the coefficient matrix of `p -> d * p`.
pub fn kernel_basis_bounded(d: &Derivation, max_deg: u32) -> KernelBasis {
    common_kernel_bounded(std::slice::from_ref(d), max_deg)
}

/// Exact basis of the intersection of the bounded-degree kernels, as one
/// stacked nullspace computation.
///
/// Constraint rows are consumed lowest output degree first, and whenever the
/// rank stops moving the current candidate nullspace is checked by applying
/// every derivation to every candidate exactly; candidates built from a
/// subset of the constraints span a superset of the kernel, so an all-zero
/// check certifies the answer without touching the remaining rows.
pub fn common_kernel_bounded(ds: &[Derivation], max_deg: u32) -> KernelBasis {
    assert!(!ds.is_empty(), "need at least one derivation");
    let nvars = ds[0].nvars();
    assert!(ds.iter().all(|d| d.nvars() == nvars), "variable count mismatch");
    let chart = PolyChart::new(nvars, max_deg);
    let out_deg = max_deg + ds.iter().map(Derivation::coeff_degree).max().unwrap_or(0);
    let out_chart = PolyChart::new(nvars, out_deg);

    // keyed (output monomial, derivation): low-degree constraints first
    let mut rows: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
    for (di, d) in ds.iter().enumerate() {
        for (col, m) in chart.monomials().iter().enumerate() {
            let image = d.apply(&Polynomial::term(m.clone(), Rational::one()));
            for (om, c) in image.terms() {
                let row = out_chart.index_of(om).expect("image exceeds output chart");
                rows.entry((row, di)).or_default().push((col, c.clone()));
            }
        }
    }

    let verified = |candidate: &[Vec<Rational>]| {
        candidate.iter().all(|v| {
            let p = chart.devectorize(v);
            ds.iter().all(|d| d.apply(&p).is_zero())
        })
    };

    let mut ech = Echelon::new(chart.dim());
    let check_every = chart.dim() / 2 + 16;
    let mut since_check = 0usize;
    let mut basis_vectors: Option<Vec<Vec<Rational>>> = None;
    let mut rank_at_check = usize::MAX;
    for (_, entries) in rows {
        let mut row = vec![Rational::zero(); chart.dim()];
        for (col, c) in entries {
            row[col] += c;
        }
        ech.insert_rational(&row);
        since_check += 1;
        if since_check >= check_every {
            since_check = 0;
            if ech.rank() == rank_at_check {
                let candidate = ech.nullspace();
                if verified(&candidate) {
                    basis_vectors = Some(candidate);
                    break;
                }
            }
            rank_at_check = ech.rank();
        }
    }
    let basis_vectors = basis_vectors.unwrap_or_else(|| {
        let candidate = ech.nullspace();
        debug_assert!(verified(&candidate));
        candidate
    });
    KernelBasis {
        degree_bound: max_deg,
        basis: basis_vectors.iter().map(|v| chart.devectorize(v)).collect(),
    }
}

/// Iterates `d` on `seed` until a nonzero constant `c` appears (after `k`
/// applications) and returns the slice `d^(k-1)(seed) / c`, which satisfies
/// `d * slice = 1` exactly.
pub fn local_slice(
    d: &Derivation,
    seed: &Polynomial,
    cap: u32,
) -> Result<SliceCertificate, SliceError> {
    assert_eq!(d.nvars(), seed.nvars(), "variable count mismatch");
    if d.apply(seed).is_zero() {
        return Err(SliceError::SeedInKernel);
    }
    let mut current = seed.clone();
    for k in 1..=cap {
        let next = d.apply(&current);
        if let Some(c) = next.as_constant() {
            if c.is_zero() {
                // d kills `current`, which is not a constant (a constant
                // would have been caught one step earlier)
                return Err(SliceError::TerminalNotConstant { terminal: current });
            }
            let inv = Rational::one() / c.clone();
            let slice = current.scale(&inv);
            debug_assert_eq!(d.apply(&slice), Polynomial::one(d.nvars()));
            return Ok(SliceCertificate {
                slice,
                witness: seed.clone(),
                steps: k,
                constant: c,
            });
        }
        current = next;
    }
    Err(SliceError::CapExceeded { cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{dim_up_to, rat, ratio, Subspace};

    fn x(nvars: usize, i: usize) -> Polynomial {
        Polynomial::variable(nvars, i)
    }

    /// d1 + x1 d2, the running triangular example.
    fn triangular() -> Derivation {
        Derivation::partial(2, 0).add(&Derivation::new(vec![
            Polynomial::zero(2),
            x(2, 0),
        ]))
    }

    #[test]
    fn nilpotency_examples() {
        let d1 = Derivation::partial(1, 0);
        assert_eq!(nilpotency_index(&d1, &x(1, 0).pow(3), 10), Some(4));
        let x1d2 = Derivation::new(vec![Polynomial::zero(2), x(2, 0)]);
        assert_eq!(nilpotency_index(&x1d2, &x(2, 1), 10), Some(2));
        let h1 = Derivation::euler(1, 0);
        assert_eq!(nilpotency_index(&h1, &x(1, 0), 10), None);
        assert_eq!(nilpotency_index(&d1, &Polynomial::zero(1), 10), Some(0));
    }

    #[test]
    fn lnd_check_examples() {
        assert!(is_lnd_bounded(&triangular(), 10));
        assert_eq!(generator_indices(&triangular(), 10), Some(vec![2, 3]));
        assert!(!is_lnd_bounded(&Derivation::euler(1, 0), 32));
        // rotation: the orbit of x1 cycles with period 4, never reaching 0
        let rot = Derivation::new(vec![x(2, 1), x(2, 0).neg()]);
        assert!(!is_lnd_bounded(&rot, 32));
    }

    #[test]
    fn kernel_basis_examples() {
        // ker d1 in two variables up to degree 2: {1, x2, x2^2}
        let k = kernel_basis_bounded(&Derivation::partial(2, 0), 2);
        assert_eq!(k.dim(), 3);
        for b in &k.basis {
            assert!(Derivation::partial(2, 0).apply(b).is_zero());
        }
        // ker (d1 + x1 d2) up to degree 2: {1, x2 - x1^2/2}
        let k = kernel_basis_bounded(&triangular(), 2);
        assert_eq!(k.dim(), 2);
        let expect = &x(2, 1) - &x(2, 0).pow(2).scale(&ratio(1, 2));
        let mut span = Subspace::new(dim_up_to(2, 2));
        let chart = PolyChart::new(2, 2);
        for b in &k.basis {
            assert!(triangular().apply(b).is_zero());
            span.insert(&chart.vectorize(b));
        }
        assert!(span.contains(&chart.vectorize(&expect)));
        // one variable: only the constants
        let k = kernel_basis_bounded(&Derivation::partial(1, 0), 3);
        assert_eq!(k.dim(), 1);
        assert!(k.is_constants_only());
    }

    #[test]
    fn common_kernel_examples() {
        let d1 = Derivation::partial(2, 0);
        let d2 = Derivation::partial(2, 1);
        let k = common_kernel_bounded(&[d1.clone(), d2], 4);
        assert!(k.is_constants_only());
        let k = common_kernel_bounded(std::slice::from_ref(&d1), 2);
        assert_eq!(k.dim(), 3);
        // conjugated frame: d1 and -2 x2 d1 + d2 still meet only in K
        let e2 = Derivation::new(vec![x(2, 1).scale(&rat(-2)), Polynomial::one(2)]);
        let k = common_kernel_bounded(&[d1, e2], 4);
        assert!(k.is_constants_only());
    }

    #[test]
    fn local_slice_examples() {
        // d = d1 + x1 d2, seed x2: x2 -> x1 -> 1, so two steps and slice x1
        let cert = local_slice(&triangular(), &x(2, 1), 10).unwrap();
        assert_eq!(cert.steps, 2);
        assert_eq!(cert.constant, rat(1));
        assert_eq!(cert.slice, x(2, 0));
        assert_eq!(triangular().apply(&cert.slice), Polynomial::one(2));
        // d = d1, seed x1: one step
        let cert = local_slice(&Derivation::partial(1, 0), &x(1, 0), 10).unwrap();
        assert_eq!((cert.steps, cert.slice), (1, x(1, 0)));
        // seed in kernel
        assert_eq!(
            local_slice(&Derivation::partial(2, 0), &x(2, 1), 10),
            Err(SliceError::SeedInKernel)
        );
        // scaled partial: slice picks up the constant
        let cert = local_slice(&Derivation::partial(1, 0).scale(&rat(2)), &x(1, 0), 10).unwrap();
        assert_eq!(cert.constant, rat(2));
        assert_eq!(cert.slice, x(1, 0).scale(&ratio(1, 2)));
        // cap exhaustion on a non-nilpotent derivation
        assert_eq!(
            local_slice(&Derivation::euler(1, 0), &x(1, 0), 5),
            Err(SliceError::CapExceeded { cap: 5 })
        );
    }

    #[test]
    fn terminal_not_constant_is_reported() {
        // d = x2 d1 on the seed x1: d(x1) = x2, d(x2) = 0, so the orbit
        // terminates at the non-constant kernel element x2
        let d = Derivation::new(vec![x(2, 1), Polynomial::zero(2)]);
        match local_slice(&d, &x(2, 0), 10) {
            Err(SliceError::TerminalNotConstant { terminal }) => assert_eq!(terminal, x(2, 1)),
            other => panic!("expected terminal-not-constant, got {other:?}"),
        }
    }

    #[test]
    fn kernel_dimension_formula_for_partials() {
        // dim ker(d_i) at degree d in n variables = C(d + n - 1, n - 1)
        for n in 1..=3usize {
            for d in 0..=5u32 {
                let k = kernel_basis_bounded(&Derivation::partial(n, 0), d);
                assert_eq!(k.dim(), dim_up_to(n - 1, d));
            }
        }
    }

    #[test]
    fn lnd_closed_under_commuting_combinations() {
        let d = triangular();
        let e = Derivation::partial(2, 1);
        assert!(d.bracket(&e).is_zero());
        let combo = d.scale(&rat(3)).add(&e.scale(&ratio(-5, 2)));
        assert!(is_lnd_bounded(&combo, 16));
    }

    #[test]
    fn kernel_conjugation_invariance_degree_one() {
        // for an affine automorphism, the kernel of the conjugate equals the
        // image of the kernel, degree for degree
        use crate::endomorph::{conjugate_derivation, PolyEndo};
        let s = PolyEndo::new(vec![
            &(&x(2, 0) + &x(2, 1)) + &Polynomial::constant(2, rat(1)),
            x(2, 1).scale(&rat(3)),
        ]);
        let d1 = Derivation::partial(2, 0);
        let conj = conjugate_derivation(&s, &d1).unwrap();
        let max_deg = 3;
        let k_conj = kernel_basis_bounded(&conj, max_deg);
        let k_orig = kernel_basis_bounded(&d1, max_deg);
        let chart = PolyChart::new(2, max_deg);
        let mut span = Subspace::new(chart.dim());
        for b in &k_conj.basis {
            span.insert(&chart.vectorize(b));
        }
        assert_eq!(span.dim(), k_orig.dim());
        for b in &k_orig.basis {
            assert!(span.contains(&chart.vectorize(&s.apply(b))));
        }
        // for higher-degree automorphisms the image of a bounded kernel is
        // still contained in a kernel of adjusted degree
        let t = PolyEndo::new(vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)]);
        let conj = conjugate_derivation(&t, &d1).unwrap();
        let wide = kernel_basis_bounded(&conj, 2 * max_deg);
        let chart = PolyChart::new(2, 2 * max_deg);
        let mut span = Subspace::new(chart.dim());
        for b in &wide.basis {
            span.insert(&chart.vectorize(b));
        }
        for b in &k_orig.basis {
            assert!(span.contains(&chart.vectorize(&t.apply(b))));
        }
    }

    #[test]
    fn slice_decomposition_at_bounded_degree() {
        // with slice x = x1 for d = d1 + x1 d2, every polynomial of degree
        // <= 3 is a combination of kernel elements times powers of the slice
        let d = triangular();
        let max_deg = 3;
        let working = 2 * max_deg;
        let cert = local_slice(&d, &x(2, 1), 10).unwrap();
        let kernel = kernel_basis_bounded(&d, working);
        let chart = PolyChart::new(2, working);
        let mut span = Subspace::new(chart.dim());
        for b in &kernel.basis {
            let mut power = Polynomial::one(2);
            loop {
                let product = b.mul(&power);
                if product.degree() > working {
                    break;
                }
                span.insert(&chart.vectorize(&product));
                power = power.mul(&cert.slice);
                if power.degree() + b.degree() > working {
                    break;
                }
            }
        }
        for m in crate::polyalg::monomials_up_to(2, max_deg) {
            let p = Polynomial::term(m, rat(1));
            assert!(span.contains(&chart.vectorize(&p)), "{p} not covered");
        }
    }
}
