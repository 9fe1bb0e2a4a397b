//! Polynomial endomorphisms and automorphisms.
//!
//! A [`PolyEndo`] is determined by the images of the variables. Around it:
//! composition, Jacobian matrices and determinants, exact bounded-degree
//! inversion by linear ansatz, the conjugation action on derivations via the
//! adjugate of the Jacobian (no explicit inverse needed), and the shift and
//! fixator predicates.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::liederiv::Derivation;
use crate::polyalg::{monomials_up_to, Monomial, Polynomial, Rational, RationalMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EndoError {
    #[error("not invertible: the Jacobian determinant {det} is not a nonzero constant")]
    NotInvertible { det: String },
    #[error("degree bound exceeded: no inverse with images of degree <= {bound}")]
    DegreeBoundExceeded { bound: u32 },
}

/// An algebra endomorphism of the polynomial algebra, given by the images
/// `x_i -> images[i]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyEndo {
    nvars: usize,
    images: Vec<Polynomial>,
}

impl PolyEndo {
    pub fn new(images: Vec<Polynomial>) -> Self {
        let nvars = images.len();
        assert!(
            images.iter().all(|p| p.nvars() == nvars),
            "images must live in as many variables as there are images"
        );
        PolyEndo { nvars, images }
    }

    pub fn identity(nvars: usize) -> Self {
        PolyEndo::new((0..nvars).map(|i| Polynomial::variable(nvars, i)).collect())
    }

    /// The shift `x_i -> x_i + lambda_i`.
    pub fn shift(lambda: &[Rational]) -> Self {
        let nvars = lambda.len();
        PolyEndo::new(
            lambda
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    Polynomial::variable(nvars, i).add(&Polynomial::constant(nvars, l.clone()))
                })
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self == &PolyEndo::identity(self.nvars)
    }

    /// Largest total degree among the images.
    pub fn degree(&self) -> u32 {
        self.images.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Applies the endomorphism as an algebra map: `p(x) -> p(images)`.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.nvars(), self.nvars, "variable count mismatch");
        p.substitute(&self.images)
    }

    /// Composition with the convention
    /// `compose(s, t).apply(p) = s.apply(t.apply(p))`.
    pub fn compose(&self, inner: &PolyEndo) -> PolyEndo {
        assert_eq!(self.nvars, inner.nvars, "variable count mismatch");
        PolyEndo::new(inner.images.iter().map(|im| self.apply(im)).collect())
    }

    /// Jacobian matrix: entry `(i, j)` is `d images[j] / d x_{i+1}`, so
    /// column `j` is the gradient of the `j`-th image.
    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.nvars;
        PolyMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.images[j].partial_derivative(i)).collect())
                .collect(),
        )
    }

    /// Determinant of the Jacobian matrix.
    pub fn jacobian_det(&self) -> Polynomial {
        self.jacobian().det()
    }

    /// The Jacobian determinant when it is a nonzero constant.
    pub fn jacobian_unit(&self) -> Result<Rational, EndoError> {
        let det = self.jacobian_det();
        match det.as_constant() {
            Some(c) if !c.is_zero() => Ok(c),
            _ => Err(EndoError::NotInvertible {
                det: det.to_string(),
            }),
        }
    }

    /// Exact inverse with images of degree at most `max_deg`, found by
    /// solving the linear system `tau_j(images) = x_j` over the unknown
    /// coefficients of `tau_j`. Fails with [`EndoError::NotInvertible`] when
    /// the Jacobian determinant is not a nonzero constant and with
    /// [`EndoError::DegreeBoundExceeded`] when no solution of that degree
    /// exists (the caller may retry with a larger bound).
    pub fn invert_bounded(&self, max_deg: u32) -> Result<PolyEndo, EndoError> {
        self.jacobian_unit()?;
        let n = self.nvars;
        // column alpha is the product images^alpha; build by one multiply per
        // monomial, reusing the smaller product
        let cols = monomials_up_to(n, max_deg);
        let mut products: Vec<Polynomial> = Vec::with_capacity(cols.len());
        let mut index: std::collections::HashMap<Monomial, usize> = std::collections::HashMap::new();
        for (k, m) in cols.iter().enumerate() {
            let p = match (0..n).find_map(|i| m.div_var(i).map(|d| (i, d))) {
                None => Polynomial::one(n),
                Some((i, smaller)) => products[index[&smaller]].mul(&self.images[i]),
            };
            index.insert(m.clone(), k);
            products.push(p);
        }
        let out_deg = products.iter().map(Polynomial::degree).max().unwrap_or(0);
        let rows = monomials_up_to(n, out_deg);
        let row_index: std::collections::HashMap<&Monomial, usize> =
            rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = RationalMatrix::zero(rows.len(), cols.len());
        for (k, p) in products.iter().enumerate() {
            for (m, c) in p.terms() {
                mat.set(row_index[m], k, c.clone());
            }
        }
        let rhs: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let mut b = vec![Rational::zero(); rows.len()];
                b[row_index[&Monomial::variable(n, j)]] = Rational::one();
                b
            })
            .collect();
        let sols = mat
            .solve_many(&rhs)
            .ok_or(EndoError::DegreeBoundExceeded { bound: max_deg })?;
        let inv = PolyEndo::new(
            sols.into_iter()
                .map(|coeffs| {
                    Polynomial::from_terms(
                        n,
                        cols.iter().cloned().zip(coeffs).filter(|(_, c)| !c.is_zero()),
                    )
                })
                .collect(),
        );
        debug_assert!(self.compose(&inv).is_identity());
        debug_assert!(inv.compose(self).is_identity());
        Ok(inv)
    }

    /// The shift vector when every image is `x_i + lambda_i`.
    pub fn shift_vector(&self) -> Option<Vec<Rational>> {
        let mut lambda = Vec::with_capacity(self.nvars);
        for (i, im) in self.images.iter().enumerate() {
            let delta = im.sub(&Polynomial::variable(self.nvars, i));
            lambda.push(delta.as_constant()?);
        }
        Some(lambda)
    }

    pub fn is_shift(&self) -> bool {
        self.shift_vector().is_some()
    }

    /// True iff conjugation fixes every partial derivative; equivalently the
    /// Jacobian matrix is the identity.
    pub fn fixes_partials(&self) -> bool {
        self.jacobian() == PolyMatrix::identity(self.nvars)
    }

    /// True iff conjugation fixes every `d_i` and every `H_i = x_i d_i`;
    /// this forces the identity automorphism.
    pub fn fixes_euler_frame(&self) -> Result<bool, EndoError> {
        for i in 0..self.nvars {
            let di = Derivation::partial(self.nvars, i);
            if conjugate_derivation(self, &di)? != di {
                return Ok(false);
            }
            let hi = Derivation::euler(self.nvars, i);
            if conjugate_derivation(self, &hi)? != hi {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for PolyEndo {
    /// `x1 -> x1 + x2^2; x2 -> x2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, im) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "x{} -> {}", i + 1, im)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A square matrix of polynomials (Jacobian matrices and their adjugates).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(entries: Vec<Vec<Polynomial>>) -> Self {
        let n = entries.len();
        assert!(entries.iter().all(|r| r.len() == n), "matrix must be square");
        PolyMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                Polynomial::one(n)
                            } else {
                                Polynomial::zero(n)
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n);
        PolyMatrix::new(
            (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| {
                            (0..self.n).fold(Polynomial::zero(self.nvars()), |acc, k| {
                                acc.add(&self.entries[i][k].mul(&other.entries[k][j]))
                            })
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Applies an endomorphism entrywise.
    pub fn map_entries(&self, s: &PolyEndo) -> PolyMatrix {
        PolyMatrix::new(
            self.entries
                .iter()
                .map(|row| row.iter().map(|p| s.apply(p)).collect())
                .collect(),
        )
    }

    fn nvars(&self) -> usize {
        self.entries
            .first()
            .and_then(|r| r.first())
            .map_or(self.n, Polynomial::nvars)
    }

    /// Exact determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Polynomial {
        let nvars = self.nvars();
        match self.n {
            0 => Polynomial::one(nvars),
            1 => self.entries[0][0].clone(),
            _ => {
                let mut acc = Polynomial::zero(nvars);
                for j in 0..self.n {
                    if self.entries[0][j].is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, j).det();
                    let term = self.entries[0][j].mul(&minor);
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> PolyMatrix {
        PolyMatrix::new(
            self.entries
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != row)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect(),
        )
    }

    /// Adjugate matrix: `adj(A)[i][j] = (-1)^(i+j) det(minor(j, i))`, so that
    /// `A * adj(A) = det(A) * I` exactly.
    pub fn adjugate(&self) -> PolyMatrix {
        let nvars = self.nvars();
        if self.n == 0 {
            return self.clone();
        }
        if self.n == 1 {
            return PolyMatrix::new(vec![vec![Polynomial::one(nvars)]]);
        }
        PolyMatrix::new(
            (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| {
                            let d = self.minor(j, i).det();
                            if (i + j) % 2 == 0 {
                                d
                            } else {
                                d.neg()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

/// Conjugation of a derivation by an endomorphism with constant nonzero
/// Jacobian determinant: for `d = sum a_i d_i`,
/// `s d s^{-1} = sum_i s(a_i) * d_i'` where the primed frame is read off the
/// inverse Jacobian, computed exactly as `adjugate(J) / det(J)`.
pub fn conjugate_derivation(s: &PolyEndo, d: &Derivation) -> Result<Derivation, EndoError> {
    assert_eq!(s.nvars(), d.nvars(), "variable count mismatch");
    let n = s.nvars();
    let c = s.jacobian_unit()?;
    let adj = s.jacobian().adjugate();
    let inv_c = Rational::one() / c;
    let coeffs = (0..n)
        .map(|j| {
            let mut acc = Polynomial::zero(n);
            for i in 0..n {
                if d.coeff(i).is_zero() {
                    continue;
                }
                acc = acc.add(&s.apply(d.coeff(i)).mul(adj.get(i, j)));
            }
            acc.scale(&inv_c)
        })
        .collect();
    Ok(Derivation::new(coeffs))
}

/// An elementary automorphism: one triangular addition, one scaling, or one
/// transposition of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elementary {
    /// `x_target -> x_target + f` where `f` does not involve `x_target`.
    Add { target: usize, f: Polynomial },
    /// `x_target -> c * x_target` with `c != 0`.
    Scale { target: usize, c: Rational },
    /// Swap `x_i` and `x_j`.
    Swap { i: usize, j: usize },
}

impl Elementary {
    pub fn to_endo(&self, nvars: usize) -> PolyEndo {
        match self {
            Elementary::Add { target, f } => {
                assert!(
                    f.terms().all(|(m, _)| m.exponent(*target) == 0),
                    "additive part must not involve the target variable"
                );
                let mut images: Vec<Polynomial> =
                    (0..nvars).map(|i| Polynomial::variable(nvars, i)).collect();
                images[*target] = images[*target].add(f);
                PolyEndo::new(images)
            }
            Elementary::Scale { target, c } => {
                assert!(!c.is_zero(), "scaling must be by a nonzero constant");
                let mut images: Vec<Polynomial> =
                    (0..nvars).map(|i| Polynomial::variable(nvars, i)).collect();
                images[*target] = images[*target].scale(c);
                PolyEndo::new(images)
            }
            Elementary::Swap { i, j } => {
                let mut images: Vec<Polynomial> =
                    (0..nvars).map(|k| Polynomial::variable(nvars, k)).collect();
                images.swap(*i, *j);
                PolyEndo::new(images)
            }
        }
    }

    fn inverse(&self) -> Elementary {
        match self {
            Elementary::Add { target, f } => Elementary::Add {
                target: *target,
                f: f.neg(),
            },
            Elementary::Scale { target, c } => Elementary::Scale {
                target: *target,
                c: Rational::one() / c.clone(),
            },
            Elementary::Swap { i, j } => Elementary::Swap { i: *i, j: *j },
        }
    }
}

/// A tame automorphism kept in factored form, so its exact inverse comes for
/// free by inverting the factors in reverse order.
#[derive(Clone, Debug)]
pub struct TameAutomorphism {
    pub nvars: usize,
    pub factors: Vec<Elementary>,
}

impl TameAutomorphism {
    pub fn new(nvars: usize, factors: Vec<Elementary>) -> Self {
        TameAutomorphism { nvars, factors }
    }

    pub fn endo(&self) -> PolyEndo {
        self.factors
            .iter()
            .fold(PolyEndo::identity(self.nvars), |acc, e| {
                acc.compose(&e.to_endo(self.nvars))
            })
    }

    pub fn inverse_endo(&self) -> PolyEndo {
        self.factors
            .iter()
            .rev()
            .fold(PolyEndo::identity(self.nvars), |acc, e| {
                acc.compose(&e.inverse().to_endo(self.nvars))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, ratio};

    fn x(nvars: usize, i: usize) -> Polynomial {
        Polynomial::variable(nvars, i)
    }

    /// x1 -> x1 + x2^2, x2 -> x2 — the running example.
    fn sigma() -> PolyEndo {
        PolyEndo::new(vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)])
    }

    #[test]
    fn apply_examples() {
        let id = PolyEndo::identity(2);
        let p = &x(2, 0).pow(2) * &x(2, 1);
        assert_eq!(id.apply(&p), p);
        // n = 1 shift by 1 on x1^2
        let s = PolyEndo::shift(&[rat(1)]);
        let expect = Polynomial::from_terms(
            1,
            vec![
                (Monomial::from_exponents(vec![2]), rat(1)),
                (Monomial::from_exponents(vec![1]), rat(2)),
                (Monomial::unit(1), rat(1)),
            ],
        );
        assert_eq!(s.apply(&x(1, 0).pow(2)), expect);
        assert_eq!(sigma().apply(&x(2, 0)), &x(2, 0) + &x(2, 1).pow(2));
    }

    #[test]
    fn compose_convention() {
        let s = sigma();
        let id = PolyEndo::identity(2);
        assert_eq!(s.compose(&id), s);
        assert_eq!(id.compose(&s), s);
        // shifts add
        let a = PolyEndo::shift(&[rat(1), rat(2)]);
        let b = PolyEndo::shift(&[rat(3), ratio(-1, 2)]);
        assert_eq!(a.compose(&b), PolyEndo::shift(&[rat(4), ratio(3, 2)]));
        // compose(s, t).apply(p) = s.apply(t.apply(p))
        let t = PolyEndo::new(vec![x(2, 1), &x(2, 0) + &x(2, 1)]);
        let p = &(&x(2, 0) * &x(2, 1)) + &x(2, 0).pow(3);
        assert_eq!(s.compose(&t).apply(&p), s.apply(&t.apply(&p)));
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(PolyEndo::identity(2).jacobian(), PolyMatrix::identity(2));
        let j = sigma().jacobian();
        assert_eq!(j.get(0, 0), &Polynomial::one(2));
        assert_eq!(j.get(0, 1), &Polynomial::zero(2));
        assert_eq!(j.get(1, 0), &x(2, 1).scale(&rat(2)));
        assert_eq!(j.get(1, 1), &Polynomial::one(2));
        assert_eq!(
            PolyEndo::shift(&[rat(5), rat(-1)]).jacobian(),
            PolyMatrix::identity(2)
        );
    }

    #[test]
    fn jacobian_det_examples() {
        assert_eq!(PolyEndo::identity(2).jacobian_det(), Polynomial::one(2));
        assert_eq!(sigma().jacobian_det(), Polynomial::one(2));
        let sq = PolyEndo::new(vec![x(1, 0).pow(2)]);
        assert_eq!(sq.jacobian_det(), x(1, 0).scale(&rat(2)));
    }

    #[test]
    fn adjugate_identity() {
        // A * adj(A) = det(A) * I, exactly
        let check = |j: &PolyMatrix| {
            let n = j.size();
            let d = j.det();
            let prod = j.mul(&j.adjugate());
            for i in 0..n {
                for k in 0..n {
                    let expect = if i == k { d.clone() } else { Polynomial::zero(d.nvars()) };
                    assert_eq!(prod.get(i, k), &expect);
                }
            }
        };
        check(&sigma().jacobian());
        let t = PolyEndo::new(vec![
            &x(3, 0) + &(&x(3, 1) * &x(3, 2)),
            &x(3, 1) + &x(3, 0).pow(2),
            &x(3, 2).scale(&rat(2)) - &x(3, 0),
        ]);
        check(&t.jacobian());
    }

    #[test]
    fn invert_bounded_examples() {
        let s = sigma();
        let inv = s.invert_bounded(2).unwrap();
        assert_eq!(inv, PolyEndo::new(vec![&x(2, 0) - &x(2, 1).pow(2), x(2, 1)]));
        assert!(s.compose(&inv).is_identity());
        assert!(inv.compose(&s).is_identity());
        let id = PolyEndo::identity(2);
        assert_eq!(id.invert_bounded(1).unwrap(), id);
        let sq = PolyEndo::new(vec![x(1, 0).pow(2)]);
        assert!(matches!(
            sq.invert_bounded(4),
            Err(EndoError::NotInvertible { .. })
        ));
        // invertible but not at this degree bound: x1 -> 2 x1 + x2^3 needs
        // degree 3 for the inverse
        let t = PolyEndo::new(vec![&x(2, 0).scale(&rat(2)) + &x(2, 1).pow(3), x(2, 1)]);
        assert!(matches!(
            t.invert_bounded(2),
            Err(EndoError::DegreeBoundExceeded { bound: 2 })
        ));
        assert!(t.invert_bounded(3).is_ok());
    }

    #[test]
    fn conjugation_examples() {
        let s = sigma();
        let d2 = Derivation::partial(2, 1);
        let conj = conjugate_derivation(&s, &d2).unwrap();
        let expect = Derivation::new(vec![x(2, 1).scale(&rat(-2)), Polynomial::one(2)]);
        assert_eq!(conj, expect);
        // the conjugate is the partial derivative in the primed coordinates:
        // it kills x1' = x1 + x2^2 and sends x2' = x2 to 1
        assert!(conj.apply(s.image(0)).is_zero());
        assert_eq!(conj.apply(s.image(1)), Polynomial::one(2));
        // identity fixes everything
        let id = PolyEndo::identity(2);
        assert_eq!(conjugate_derivation(&id, &d2).unwrap(), d2);
        // shifts fix the partials
        let sh = PolyEndo::shift(&[rat(3), ratio(-1, 2)]);
        for i in 0..2 {
            let di = Derivation::partial(2, i);
            assert_eq!(conjugate_derivation(&sh, &di).unwrap(), di);
        }
    }

    #[test]
    fn conjugation_without_inversion_identity() {
        // apply(s(d), s(p)) = s(apply(d, p))
        let s = sigma();
        let d = Derivation::new(vec![&x(2, 0) * &x(2, 1), x(2, 1).pow(2)]);
        let p = &x(2, 0).pow(2) + &(&x(2, 1) * &x(2, 0));
        let lhs = conjugate_derivation(&s, &d).unwrap().apply(&s.apply(&p));
        let rhs = s.apply(&d.apply(&p));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule() {
        let s = sigma();
        let t = PolyEndo::new(vec![x(2, 1), &x(2, 0) + &x(2, 1).pow(2)]);
        let st = s.compose(&t);
        let expect = s.jacobian().mul(&t.jacobian().map_entries(&s));
        assert_eq!(st.jacobian(), expect);
        // multiplicativity of the determinant follows
        assert_eq!(st.jacobian_det(), s.jacobian_det().mul(&s.apply(&t.jacobian_det())));
    }

    #[test]
    fn conjugation_is_a_lie_homomorphism() {
        let s = sigma();
        let d = Derivation::new(vec![x(2, 1).pow(2), Polynomial::one(2)]);
        let e = Derivation::new(vec![Polynomial::zero(2), &x(2, 0) * &x(2, 1)]);
        let lhs = conjugate_derivation(&s, &d.bracket(&e)).unwrap();
        let rhs = conjugate_derivation(&s, &d)
            .unwrap()
            .bracket(&conjugate_derivation(&s, &e).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_predicates() {
        let sh = PolyEndo::new(vec![
            &x(2, 0) + &Polynomial::constant(2, rat(3)),
            &x(2, 1) - &Polynomial::constant(2, ratio(1, 2)),
        ]);
        assert_eq!(sh.shift_vector(), Some(vec![rat(3), ratio(-1, 2)]));
        let scale = PolyEndo::new(vec![x(1, 0).scale(&rat(2))]);
        assert!(!scale.is_shift());
        assert_eq!(PolyEndo::identity(2).shift_vector(), Some(vec![rat(0), rat(0)]));
    }

    #[test]
    fn fixes_partials_iff_shift() {
        assert!(PolyEndo::shift(&[rat(1), rat(2)]).fixes_partials());
        assert!(!sigma().fixes_partials());
        let tri = PolyEndo::new(vec![x(2, 0), &x(2, 0) + &x(2, 1)]);
        assert!(!tri.fixes_partials());
    }

    #[test]
    fn fixes_euler_frame_iff_identity() {
        assert!(PolyEndo::identity(2).fixes_euler_frame().unwrap());
        // a nonzero shift moves H_i to (x_i + l_i) d_i
        assert!(!PolyEndo::shift(&[rat(1), rat(0)]).fixes_euler_frame().unwrap());
        // a scaling moves d_1 to (1/2) d_1
        let scale = PolyEndo::new(vec![x(1, 0).scale(&rat(2))]);
        assert!(!scale.fixes_euler_frame().unwrap());
    }

    #[test]
    fn frame_property() {
        // s(d_i) applied to the j-th image gives the Kronecker delta
        let s = sigma();
        for i in 0..2 {
            let di = conjugate_derivation(&s, &Derivation::partial(2, i)).unwrap();
            for j in 0..2 {
                let expect = Polynomial::constant(2, rat(i64::from(i == j)));
                assert_eq!(di.apply(s.image(j)), expect);
            }
        }
    }

    #[test]
    #[should_panic(expected = "variable count mismatch")]
    fn apply_arity_mismatch_panics() {
        let _ = PolyEndo::identity(2).apply(&Polynomial::variable(3, 0));
    }

    #[test]
    #[should_panic(expected = "variable count mismatch")]
    fn compose_arity_mismatch_panics() {
        let _ = PolyEndo::identity(2).compose(&PolyEndo::identity(3));
    }

    #[test]
    fn tame_factors_compose_and_invert() {
        let tame = TameAutomorphism::new(
            3,
            vec![
                Elementary::Add {
                    target: 0,
                    f: &x(3, 1).pow(2) + &x(3, 2),
                },
                Elementary::Swap { i: 1, j: 2 },
                Elementary::Scale {
                    target: 2,
                    c: ratio(-3, 2),
                },
                Elementary::Add {
                    target: 2,
                    f: &x(3, 0) * &x(3, 1),
                },
            ],
        );
        let s = tame.endo();
        let inv = tame.inverse_endo();
        assert!(s.compose(&inv).is_identity());
        assert!(inv.compose(&s).is_identity());
        // the swap contributes -1, the scaling -3/2
        assert_eq!(s.jacobian_unit().unwrap(), ratio(3, 2));
    }
}
