//! Reconstruction of a polynomial automorphism from `n` commuting locally
//! nilpotent derivations whose common kernel is the constants.
//!
//! Given such derivations `d_1', ..., d_n'`, [`construct_coordinates`] finds
//! polynomials `x_1', ..., x_n'` with `d_i' * x_j' = delta_ij` by induction:
//! locate a maximal proper subset of the remaining derivations whose bounded
//! common kernel is larger than the constants, extract a slice for one of
//! the leftover derivations inside that kernel, absorb any constant
//! cross-terms into a unitriangular correction matrix, and recurse inside
//! the kernel of the completed derivation. [`recover_automorphism`] wraps
//! the coordinates into the automorphism `x_i -> x_i'`, verifies it exactly,
//! and [`main_theorem_roundtrip`] closes the loop: conjugate the coordinate
//! frame by an automorphism, recover it back, and check that the two differ
//! by nothing more than a shift.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::endomorph::{conjugate_derivation, EndoError, PolyEndo};
use crate::liederiv::Derivation;
use crate::lndkit::{common_kernel_bounded, is_lnd_bounded, local_slice, SliceError};
use crate::polyalg::{Echelon, PolyChart, Polynomial, Rational, RationalMatrix, Subspace};

#[derive(Debug, Error)]
pub enum RecoverError {
    #[error("derivations {} and {} do not commute; recovery requires pairwise commuting derivations", i + 1, j + 1)]
    NotCommuting { i: usize, j: usize },
    #[error("derivation {} is not locally nilpotent within cap {cap}", index + 1)]
    NotLocallyNilpotent { index: usize, cap: u32 },
    #[error("common kernel too large: expected only constants at degree <= {degree_bound}, found dimension {}", basis.len())]
    CommonKernelTooLarge {
        degree_bound: u32,
        basis: Vec<Polynomial>,
    },
    #[error("degree bound {bound} exceeded at {stage}; retry with a larger bound")]
    DegreeBoundExceeded {
        stage: String,
        bound: u32,
        trace: Vec<StageRecord>,
    },
    #[error("internal verification failed: {detail}")]
    VerificationFailed { detail: String },
    #[error(transparent)]
    Endo(#[from] EndoError),
}

/// What happened at one induction stage of the coordinate construction.
#[derive(Clone, Debug)]
pub struct StageRecord {
    /// 1-based stage counter.
    pub stage: usize,
    /// Derivation indices still lacking a coordinate when the stage began.
    pub remaining: Vec<usize>,
    /// The subset whose common kernel supplied the slice seed.
    pub subset: Vec<usize>,
    /// The derivation index that received its coordinate.
    pub completed: usize,
    /// Seed the slice iteration started from.
    pub seed: Polynomial,
    /// Applications of the derivation needed to reach a constant.
    pub slice_steps: u32,
    /// Constant cross-terms `(j, d_j * slice)` absorbed into the correction
    /// matrix; empty exactly when the subset covered all but one remaining
    /// derivation.
    pub corrections: Vec<(usize, Rational)>,
}

impl StageRecord {
    /// `"direct"` when the subset covered all remaining derivations but one,
    /// `"scalar-corrected"` when leftover derivations had to be adjusted.
    pub fn branch(&self) -> &'static str {
        if self.corrections.is_empty() {
            "direct"
        } else {
            "scalar-corrected"
        }
    }
}

impl fmt::Display for StageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {}: completed d{} from subset {{{}}} ({}; seed {}, {} steps)",
            self.stage,
            self.completed + 1,
            self.subset
                .iter()
                .map(|i| format!("d{}", i + 1))
                .collect::<Vec<_>>()
                .join(", "),
            self.branch(),
            self.seed,
            self.slice_steps
        )
    }
}

/// Coordinates dual to a family of derivations: `duals[i] * coords[j]` is
/// the Kronecker delta, with `lambda` the upper unitriangular matrix of
/// scalar corrections applied along the way.
#[derive(Clone, Debug)]
pub struct CoordinateSystem {
    pub coords: Vec<Polynomial>,
    pub duals: Vec<Derivation>,
    pub lambda: RationalMatrix,
    pub trace: Vec<StageRecord>,
}

/// A verified recovery: `sigma` maps `x_i` to the recovered coordinates,
/// conjugates the partial-derivative frame onto the input derivations, and
/// has every image free of constant term.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub sigma: PolyEndo,
    pub coords: CoordinateSystem,
    pub shift_normalized: bool,
    pub degree_bound_used: u32,
    pub trace: Vec<StageRecord>,
}

/// Outcome of the full conjugate-then-recover roundtrip.
#[derive(Clone, Debug)]
pub struct RoundtripReport {
    /// True iff the input differs from the recovered automorphism by a shift.
    pub closed: bool,
    /// The shift vector when the roundtrip closed.
    pub shift: Option<Vec<Rational>>,
    pub recovery: RecoveryReport,
}

/// Order in which slice seeds are tried; exists so that independence of the
/// result (up to shifts) from seed choices can be tested.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeedOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RecoverOptions {
    pub seed_order: SeedOrder,
}

/// Constructs coordinates `x_j'` with `ds[i] * x_j' = delta_ij` exactly.
///
/// Preconditions checked up front: the derivations commute pairwise, each is
/// locally nilpotent within `cap`, and their common kernel at degree
/// `max_deg` is exactly the constants. All coordinates are returned with
/// zero constant term.
pub fn construct_coordinates(
    ds: &[Derivation],
    max_deg: u32,
    cap: u32,
) -> Result<CoordinateSystem, RecoverError> {
    construct_coordinates_with(ds, max_deg, cap, RecoverOptions::default())
}

pub fn construct_coordinates_with(
    ds: &[Derivation],
    max_deg: u32,
    cap: u32,
    opts: RecoverOptions,
) -> Result<CoordinateSystem, RecoverError> {
    let n = ds.len();
    assert!(n >= 1, "need at least one derivation");
    assert!(
        ds.iter().all(|d| d.nvars() == n),
        "need exactly one derivation per variable"
    );

    for i in 0..n {
        for j in i + 1..n {
            if !ds[i].bracket(&ds[j]).is_zero() {
                return Err(RecoverError::NotCommuting { i, j });
            }
        }
    }
    for (i, d) in ds.iter().enumerate() {
        if !is_lnd_bounded(d, cap) {
            return Err(RecoverError::NotLocallyNilpotent { index: i, cap });
        }
    }
    let ck = common_kernel_bounded(ds, max_deg);
    if !ck.is_constants_only() {
        return Err(RecoverError::CommonKernelTooLarge {
            degree_bound: max_deg,
            basis: ck.basis,
        });
    }

    let chart = PolyChart::new(n, max_deg);
    let mut delta: Vec<Derivation> = ds.to_vec();
    let mut lambda = RationalMatrix::identity(n);
    let mut coords: Vec<Option<Polynomial>> = vec![None; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    // bounded common kernel of the completed derivations; `None` while empty
    let mut ambient: Option<Vec<Polynomial>> = None;
    let mut trace: Vec<StageRecord> = Vec::new();

    while !remaining.is_empty() {
        let stage = trace.len() + 1;
        let (subset, pool) = if remaining.len() == 1 {
            let pool = match &ambient {
                Some(basis) => basis.clone(),
                None => chart
                    .monomials()
                    .iter()
                    .map(|m| Polynomial::term(m.clone(), crate::polyalg::rat(1)))
                    .collect(),
            };
            (Vec::new(), pool)
        } else {
            match maximal_subset(&chart, &delta, &remaining, ambient.as_deref(), max_deg) {
                Some(found) => found,
                None => {
                    return Err(RecoverError::DegreeBoundExceeded {
                        stage: format!(
                            "stage {stage}: no proper subset of the remaining derivations has a \
                             bounded common kernel beyond the constants"
                        ),
                        bound: max_deg,
                        trace,
                    });
                }
            }
        };

        // the derivation to receive its coordinate: the largest remaining
        // index outside the subset
        let completed = *remaining
            .iter()
            .filter(|i| !subset.contains(i))
            .max()
            .expect("subset is proper");

        let mut seeds: Vec<Polynomial> = pool.into_iter().filter(|p| !p.is_constant()).collect();
        seeds.sort_by(seed_cmp);
        if opts.seed_order == SeedOrder::Descending {
            seeds.reverse();
        }
        let cert = match slice_from_seeds(&delta[completed], &seeds, cap) {
            Some(cert) => cert,
            None => {
                return Err(RecoverError::DegreeBoundExceeded {
                    stage: format!(
                        "stage {stage}: no slice for d{} among {} kernel seeds (cap {cap})",
                        completed + 1,
                        seeds.len()
                    ),
                    bound: max_deg,
                    trace,
                });
            }
        };
        // normalize away the constant term; still a slice, still in the pool's span
        let coordinate = {
            let c = cert.slice.constant_term();
            cert.slice.sub(&Polynomial::constant(n, c))
        };

        // leftover derivations outside the subset see the new coordinate
        // through a constant, which is absorbed into the correction matrix
        let mut corrections = Vec::new();
        for &j in remaining.iter() {
            if j == completed || subset.contains(&j) {
                continue;
            }
            let cross = delta[j].apply(&coordinate);
            match cross.as_constant() {
                Some(c) => {
                    if !c.is_zero() {
                        delta[j] = delta[j].sub(&delta[completed].scale(&c));
                        lambda.sub_scaled_row(j, completed, &c);
                    }
                    corrections.push((j, c));
                }
                None => {
                    return Err(RecoverError::DegreeBoundExceeded {
                        stage: format!(
                            "stage {stage}: cross-term d{} * {} is not constant; the subset \
                             search was starved by the degree bound",
                            j + 1,
                            coordinate
                        ),
                        bound: max_deg,
                        trace,
                    });
                }
            }
        }

        trace.push(StageRecord {
            stage,
            remaining: remaining.clone(),
            subset: subset.clone(),
            completed,
            seed: cert.witness.clone(),
            slice_steps: cert.steps,
            corrections,
        });
        coords[completed] = Some(coordinate);
        remaining.retain(|&i| i != completed);

        if !remaining.is_empty() {
            let kernel = bounded_kernel(&delta[completed], max_deg);
            ambient = Some(match ambient {
                None => kernel,
                Some(basis) => intersect(&chart, &basis, &kernel),
            });
        }
    }

    debug_assert!(lambda.is_upper_unitriangular());
    let partials: Vec<Polynomial> = coords.into_iter().map(Option::unwrap).collect();
    let final_coords = assemble_coords(&partials, &lambda);

    for (i, d) in ds.iter().enumerate() {
        for (j, x) in final_coords.iter().enumerate() {
            let expect = Polynomial::constant(n, crate::polyalg::rat(i64::from(i == j)));
            if d.apply(x) != expect {
                return Err(RecoverError::VerificationFailed {
                    detail: format!(
                        "d{} applied to coordinate {} gave {}, expected {}",
                        i + 1,
                        j + 1,
                        d.apply(x),
                        expect
                    ),
                });
            }
        }
    }

    Ok(CoordinateSystem {
        coords: final_coords,
        duals: ds.to_vec(),
        lambda,
        trace,
    })
}

/// `x_j = sum_k y_k * lambda[k][j]`: undoes the scalar corrections so the
/// coordinates become dual to the original derivations.
fn assemble_coords(partials: &[Polynomial], lambda: &RationalMatrix) -> Vec<Polynomial> {
    let n = partials.len();
    (0..n)
        .map(|j| {
            let mut acc = Polynomial::zero(n);
            for (k, y) in partials.iter().enumerate() {
                let c = lambda.get(k, j);
                if !c.is_zero() {
                    acc = acc.add(&y.scale(c));
                }
            }
            acc
        })
        .collect()
}

// Largest proper nonempty subset of `remaining` whose kernels (within the
// ambient space) intersect beyond the constants; ties break toward the
// lexicographically smallest subset. Returns the subset and the non-constant
// part of the intersection basis.
fn maximal_subset(
    chart: &PolyChart,
    delta: &[Derivation],
    remaining: &[usize],
    ambient: Option<&[Polynomial]>,
    max_deg: u32,
) -> Option<(Vec<usize>, Vec<Polynomial>)> {
    let kernels: Vec<(usize, Vec<Polynomial>)> = remaining
        .iter()
        .map(|&i| {
            let k = bounded_kernel(&delta[i], max_deg);
            let k = match ambient {
                Some(basis) => intersect(chart, basis, &k),
                None => k,
            };
            (i, k)
        })
        .collect();
    for size in (1..remaining.len()).rev() {
        for combo in combinations(remaining.len(), size) {
            let mut inter: Option<Vec<Polynomial>> = None;
            for &pos in &combo {
                let k = &kernels[pos].1;
                inter = Some(match inter {
                    None => k.clone(),
                    Some(basis) => intersect(chart, &basis, k),
                });
                if inter.as_ref().is_some_and(|b| b.len() <= 1) {
                    break;
                }
            }
            let basis = inter.unwrap();
            if basis.iter().any(|p| !p.is_constant()) {
                let subset = combo.iter().map(|&pos| kernels[pos].0).collect();
                return Some((subset, basis));
            }
        }
    }
    None
}

// Index combinations of `{0..n}` of the given size in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

fn bounded_kernel(d: &Derivation, max_deg: u32) -> Vec<Polynomial> {
    crate::lndkit::kernel_basis_bounded(d, max_deg).basis
}

// Intersection of two subspaces given by bases of polynomials, within the
// chart's degree bound.
fn intersect(chart: &PolyChart, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let av: Vec<Vec<Rational>> = a.iter().map(|p| chart.vectorize(p)).collect();
    let bv: Vec<Vec<Rational>> = b.iter().map(|p| chart.vectorize(p)).collect();
    let cols = av.len() + bv.len();
    let mut ech = Echelon::new(cols);
    for coord in 0..chart.dim() {
        let mut row = Vec::with_capacity(cols);
        for v in &av {
            row.push(v[coord].clone());
        }
        for v in &bv {
            row.push(-v[coord].clone());
        }
        ech.insert_rational(&row);
    }
    let mut span = Subspace::new(chart.dim());
    let mut out = Vec::new();
    for sol in ech.nullspace() {
        let mut vec = vec![Rational::zero(); chart.dim()];
        for (u, coeffs) in av.iter().zip(&sol) {
            if !coeffs.is_zero() {
                for (x, y) in vec.iter_mut().zip(u) {
                    *x += coeffs * y;
                }
            }
        }
        if span.insert(&vec) {
            out.push(chart.devectorize(&vec));
        }
    }
    out
}

// Deterministic seed preference: lower degree first, then fewer terms, then
// the term list itself.
fn seed_cmp(a: &Polynomial, b: &Polynomial) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.num_terms().cmp(&b.num_terms()))
        .then_with(|| {
            let ta: Vec<_> = a.terms().collect();
            let tb: Vec<_> = b.terms().collect();
            ta.cmp(&tb)
        })
}

fn slice_from_seeds(
    d: &Derivation,
    seeds: &[Polynomial],
    cap: u32,
) -> Option<crate::lndkit::SliceCertificate> {
    for seed in seeds {
        match local_slice(d, seed, cap) {
            Ok(cert) => return Some(cert),
            Err(SliceError::SeedInKernel)
            | Err(SliceError::TerminalNotConstant { .. })
            | Err(SliceError::CapExceeded { .. }) => continue,
        }
    }
    None
}

/// Recovers the automorphism `sigma: x_i -> x_i'` from the derivations and
/// verifies it exactly: the Jacobian determinant is a nonzero constant and
/// conjugating each partial derivative by `sigma` returns `ds[i]`.
pub fn recover_automorphism(
    ds: &[Derivation],
    max_deg: u32,
    cap: u32,
) -> Result<RecoveryReport, RecoverError> {
    let coords = construct_coordinates(ds, max_deg, cap)?;
    let sigma = PolyEndo::new(coords.coords.clone());
    if let Err(e) = sigma.jacobian_unit() {
        return Err(RecoverError::VerificationFailed {
            detail: format!("recovered map is not invertible: {e}"),
        });
    }
    for (i, d) in ds.iter().enumerate() {
        let frame = conjugate_derivation(&sigma, &Derivation::partial(ds.len(), i))?;
        if &frame != d {
            return Err(RecoverError::VerificationFailed {
                detail: format!(
                    "conjugate of d{} by the recovered map is {frame}, expected {d}",
                    i + 1
                ),
            });
        }
    }
    Ok(RecoveryReport {
        sigma,
        trace: coords.trace.clone(),
        coords,
        shift_normalized: true,
        degree_bound_used: max_deg,
    })
}

/// Splits an endomorphism into its constant-free part and the shift vector
/// of constant terms.
pub fn normalize_by_shift(s: &PolyEndo) -> (PolyEndo, Vec<Rational>) {
    let n = s.nvars();
    let mut images = Vec::with_capacity(n);
    let mut shift = Vec::with_capacity(n);
    for im in s.images() {
        let c = im.constant_term();
        images.push(im.sub(&Polynomial::constant(n, c.clone())));
        shift.push(c);
    }
    (PolyEndo::new(images), shift)
}

/// Conjugates the partial-derivative frame by `sigma`, recovers an
/// automorphism `tau` from the conjugates, and reports whether `sigma` and
/// `tau` differ by a shift (i.e. `tau^{-1} sigma` is a shift) — which, for
/// honest inputs, they must.
pub fn main_theorem_roundtrip(
    sigma: &PolyEndo,
    max_deg: u32,
    cap: u32,
) -> Result<RoundtripReport, RecoverError> {
    let n = sigma.nvars();
    sigma.jacobian_unit()?;
    let duals: Result<Vec<Derivation>, EndoError> = (0..n)
        .map(|i| conjugate_derivation(sigma, &Derivation::partial(n, i)))
        .collect();
    let recovery = recover_automorphism(&duals?, max_deg, cap)?;
    // sigma = tau . shift exactly when the images differ by constants
    let mut shift = Vec::with_capacity(n);
    let mut closed = true;
    for j in 0..n {
        match sigma.image(j).sub(recovery.sigma.image(j)).as_constant() {
            Some(c) => shift.push(c),
            None => {
                closed = false;
                break;
            }
        }
    }
    Ok(RoundtripReport {
        closed,
        shift: closed.then_some(shift),
        recovery,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, ratio};

    fn x(nvars: usize, i: usize) -> Polynomial {
        Polynomial::variable(nvars, i)
    }

    fn delta_matrix_holds(ds: &[Derivation], coords: &[Polynomial]) -> bool {
        let n = ds.len();
        ds.iter().enumerate().all(|(i, d)| {
            coords.iter().enumerate().all(|(j, c)| {
                d.apply(c) == Polynomial::constant(n, rat(i64::from(i == j)))
            })
        })
    }

    #[test]
    fn identity_frame() {
        let ds = [Derivation::partial(2, 0), Derivation::partial(2, 1)];
        let cs = construct_coordinates(&ds, 4, 16).unwrap();
        assert_eq!(cs.coords, vec![x(2, 0), x(2, 1)]);
        assert!(cs.lambda == RationalMatrix::identity(2));
        assert!(delta_matrix_holds(&ds, &cs.coords));
    }

    #[test]
    fn conjugated_frame() {
        // d1' = d1, d2' = -2 x2 d1 + d2: the frame of x1 -> x1 + x2^2
        let ds = [
            Derivation::partial(2, 0),
            Derivation::new(vec![x(2, 1).scale(&rat(-2)), Polynomial::one(2)]),
        ];
        let cs = construct_coordinates(&ds, 4, 16).unwrap();
        assert_eq!(cs.coords, vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)]);
        assert!(delta_matrix_holds(&ds, &cs.coords));
        let report = recover_automorphism(&ds, 4, 16).unwrap();
        assert_eq!(
            report.sigma,
            PolyEndo::new(vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)])
        );
    }

    #[test]
    fn skewed_frame() {
        // (d1 + d2, d2) is dual to (x1, x2 - x1)
        let ds = [
            Derivation::partial(2, 0).add(&Derivation::partial(2, 1)),
            Derivation::partial(2, 1),
        ];
        let cs = construct_coordinates(&ds, 4, 16).unwrap();
        assert_eq!(cs.coords, vec![x(2, 0), &x(2, 1) - &x(2, 0)]);
        assert!(delta_matrix_holds(&ds, &cs.coords));
    }

    #[test]
    fn scaled_single_derivation() {
        let ds = [Derivation::partial(1, 0).scale(&rat(2))];
        let report = recover_automorphism(&ds, 4, 16).unwrap();
        assert_eq!(report.sigma, PolyEndo::new(vec![x(1, 0).scale(&ratio(1, 2))]));
    }

    #[test]
    fn rejects_non_commuting() {
        let x1d2 = Derivation::new(vec![Polynomial::zero(2), x(2, 0)]);
        let err = construct_coordinates(&[Derivation::partial(2, 0), x1d2], 4, 16).unwrap_err();
        assert!(matches!(err, RecoverError::NotCommuting { i: 0, j: 1 }));
    }

    #[test]
    fn rejects_non_lnd() {
        let ds = [Derivation::euler(2, 0), Derivation::partial(2, 1)];
        let err = construct_coordinates(&ds, 4, 16).unwrap_err();
        assert!(matches!(
            err,
            RecoverError::NotLocallyNilpotent { index: 0, cap: 16 }
        ));
    }

    #[test]
    fn rejects_oversized_common_kernel() {
        let ds = [Derivation::partial(2, 0), Derivation::partial(2, 0)];
        let err = construct_coordinates(&ds, 4, 16).unwrap_err();
        match err {
            RecoverError::CommonKernelTooLarge { basis, .. } => {
                assert!(basis.len() > 1);
            }
            other => panic!("expected common-kernel rejection, got {other:?}"),
        }
    }

    #[test]
    fn assemble_undoes_corrections() {
        // delta = (d1, d2 - d3, d3) with partial coordinates (x1, x2, x2+x3)
        // reassembles to the plain coordinates (x1, x2, x3)
        let mut lambda = RationalMatrix::identity(3);
        lambda.sub_scaled_row(1, 2, &rat(1));
        let partials = vec![x(3, 0), x(3, 1), &x(3, 1) + &x(3, 2)];
        let coords = assemble_coords(&partials, &lambda);
        assert_eq!(coords, vec![x(3, 0), x(3, 1), x(3, 2)]);
    }

    // x1 -> x1 + u^2, x2 -> x2 - u^2, x3 -> x3 + u^2 for u = x1 + x2: an
    // automorphism whose coordinates all have degree 2, while linear
    // combinations of them drop to degree 1.
    fn cancelling_sigma() -> PolyEndo {
        let u2 = (&x(3, 0) + &x(3, 1)).pow(2);
        PolyEndo::new(vec![&x(3, 0) + &u2, &x(3, 1) - &u2, &x(3, 2) + &u2])
    }

    #[test]
    fn starved_degree_bound_fires_scalar_correction() {
        let s = cancelling_sigma();
        let ds: Vec<Derivation> = (0..3)
            .map(|i| conjugate_derivation(&s, &Derivation::partial(3, i)).unwrap())
            .collect();
        // at degree bound 1 the pairwise kernels look trivial, so the stage
        // falls back to a single-kernel subset and must correct a cross-term
        // of 1 before starving at the next stage
        let err = construct_coordinates(&ds, 1, 32).unwrap_err();
        match err {
            RecoverError::DegreeBoundExceeded { trace, .. } => {
                assert_eq!(trace.len(), 1);
                assert_eq!(trace[0].branch(), "scalar-corrected");
                assert_eq!(trace[0].corrections, vec![(1, rat(1))]);
            }
            other => panic!("expected degree-bound failure, got {other:?}"),
        }
        // doubling the bound recovers the automorphism exactly
        let report = recover_automorphism(&ds, 2, 32).unwrap();
        assert_eq!(report.sigma, s);
        assert!(report.trace.iter().all(|r| r.branch() == "direct"));
    }

    #[test]
    fn seed_order_changes_nothing_up_to_shift() {
        let ds = [
            Derivation::partial(2, 0),
            Derivation::new(vec![x(2, 1).scale(&rat(-2)), Polynomial::one(2)]),
        ];
        let a = construct_coordinates_with(&ds, 4, 16, RecoverOptions { seed_order: SeedOrder::Ascending })
            .unwrap();
        let b = construct_coordinates_with(&ds, 4, 16, RecoverOptions { seed_order: SeedOrder::Descending })
            .unwrap();
        // coordinates are constant-free, so agreement up to shift is equality
        let (na, _) = normalize_by_shift(&PolyEndo::new(a.coords));
        let (nb, _) = normalize_by_shift(&PolyEndo::new(b.coords));
        assert_eq!(na, nb);
    }

    #[test]
    fn normalize_by_shift_examples() {
        let s = PolyEndo::new(vec![&x(1, 0) + &Polynomial::constant(1, rat(3))]);
        let (norm, shift) = normalize_by_shift(&s);
        assert_eq!(norm, PolyEndo::identity(1));
        assert_eq!(shift, vec![rat(3)]);
        let id = PolyEndo::identity(2);
        assert_eq!(normalize_by_shift(&id), (id.clone(), vec![rat(0), rat(0)]));
        let t = PolyEndo::new(vec![
            &(&x(2, 0) + &x(2, 1).pow(2)) + &Polynomial::constant(2, rat(1)),
            &x(2, 1) - &Polynomial::constant(2, rat(2)),
        ]);
        let (norm, shift) = normalize_by_shift(&t);
        assert_eq!(norm, PolyEndo::new(vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)]));
        assert_eq!(shift, vec![rat(1), rat(-2)]);
    }

    #[test]
    fn roundtrip_identity_and_worked_example() {
        let report = main_theorem_roundtrip(&PolyEndo::identity(2), 4, 16).unwrap();
        assert!(report.closed);
        assert_eq!(report.recovery.sigma, PolyEndo::identity(2));

        let s = PolyEndo::new(vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)]);
        let report = main_theorem_roundtrip(&s, 4, 16).unwrap();
        assert!(report.closed);
        assert_eq!(report.shift, Some(vec![rat(0), rat(0)]));
        assert_eq!(report.recovery.sigma, s);
    }

    #[test]
    fn roundtrip_with_shift_and_scaling() {
        // sigma = scaling + shift: recovery normalizes the shift away
        let s = PolyEndo::new(vec![
            &x(2, 0).scale(&rat(3)) + &Polynomial::constant(2, rat(5)),
            &(&x(2, 1) + &x(2, 0).pow(2)) - &Polynomial::constant(2, ratio(1, 2)),
        ]);
        let report = main_theorem_roundtrip(&s, 4, 16).unwrap();
        assert!(report.closed);
        assert_eq!(report.shift, Some(vec![rat(5), ratio(-1, 2)]));
    }

    #[test]
    fn roundtrip_three_variables() {
        use crate::endomorph::{Elementary, TameAutomorphism};
        let tame = TameAutomorphism::new(
            3,
            vec![
                Elementary::Add {
                    target: 2,
                    f: &x(3, 0) * &x(3, 1),
                },
                Elementary::Swap { i: 0, j: 1 },
                Elementary::Add {
                    target: 0,
                    f: x(3, 2).pow(2),
                },
                Elementary::Scale {
                    target: 1,
                    c: rat(-2),
                },
            ],
        );
        let s = tame.endo();
        let report = main_theorem_roundtrip(&s, 8, 32).unwrap();
        assert!(report.closed);
    }
}
