//! Derivations of the polynomial algebra as a Lie algebra.
//!
//! A derivation is `a_1*d1 + ... + an*dn` with polynomial coefficients, where
//! `di` is the partial derivative in `x_i`. The module provides the action on
//! polynomials, the bracket, the `Z^n`-grading by `weight(x^a di) = a - e_i`,
//! and bounded-degree structure computations: centralizers, normalizers,
//! ideal closures and module orbits. The latter two are desk-scale
//! truncations of infinite-dimensional statements: produced elements whose
//! coefficient degree exceeds the bound are discarded.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::polyalg::{monomials_up_to, nullspace_of_sparse_rows, Monomial, Polynomial, Rational, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("ideal closure needs a nonzero derivation")]
    ZeroElement,
    #[error("module orbit needs a non-constant polynomial")]
    ConstantInput,
}

/// A derivation `sum_i coeffs[i] * d_{i+1}` of the polynomial algebra in
/// `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    nvars: usize,
    coeffs: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        let nvars = coeffs.len();
        assert!(
            coeffs.iter().all(|c| c.nvars() == nvars),
            "coefficient variable counts must equal the number of coefficients"
        );
        Derivation { nvars, coeffs }
    }

    pub fn zero(nvars: usize) -> Self {
        Derivation::new(vec![Polynomial::zero(nvars); nvars])
    }

    /// The partial derivative `d_{var+1}`.
    pub fn partial(nvars: usize, var: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(nvars); nvars];
        coeffs[var] = Polynomial::one(nvars);
        Derivation::new(coeffs)
    }

    /// The Euler-type derivation `H_{var+1} = x_{var+1} d_{var+1}`.
    pub fn euler(nvars: usize, var: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(nvars); nvars];
        coeffs[var] = Polynomial::variable(nvars, var);
        Derivation::new(coeffs)
    }

    /// The basis derivation `x^m * d_{var+1}`.
    pub fn basis_element(m: Monomial, var: usize) -> Self {
        let nvars = m.nvars();
        let mut coeffs = vec![Polynomial::zero(nvars); nvars];
        coeffs[var] = Polynomial::term(m, crate::polyalg::rat(1));
        Derivation::new(coeffs)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Polynomial {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree among the coefficient polynomials (0 if zero).
    pub fn coeff_degree(&self) -> u32 {
        self.coeffs.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// The module action `d * p = sum_i a_i dp/dx_i`.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, p.nvars(), "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&a.mul(&p.partial_derivative(i)));
            }
        }
        out
    }

    /// Lie bracket `[d, e] = de - ed`; coefficient `j` of the result is
    /// `d * e_j - e * d_j`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        Derivation::new(
            (0..self.nvars)
                .map(|j| self.apply(&other.coeffs[j]).sub(&other.apply(&self.coeffs[j])))
                .collect(),
        )
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        Derivation::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Derivation {
        Derivation::new(self.coeffs.iter().map(Polynomial::neg).collect())
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// Splits into homogeneous components: the basis term `x^a d_{i+1}` has
    /// weight `a - e_i`. The components sum back to the derivation.
    pub fn graded_parts(&self) -> BTreeMap<Vec<i64>, Derivation> {
        let mut parts: BTreeMap<Vec<i64>, Derivation> = BTreeMap::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (m, c) in a.terms() {
                let w = term_weight(m, i);
                parts
                    .entry(w)
                    .or_insert_with(|| Derivation::zero(self.nvars))
                    .coeffs[i]
                    .add_term(m.clone(), c.clone());
            }
        }
        parts
    }

    /// The common weight if homogeneous (zero counts as homogeneous of no
    /// weight and returns `None`).
    pub fn weight(&self) -> Option<Vec<i64>> {
        let parts = self.graded_parts();
        if parts.len() == 1 {
            parts.into_keys().next()
        } else {
            None
        }
    }
}

fn term_weight(m: &Monomial, var: usize) -> Vec<i64> {
    let mut w: Vec<i64> = m.exponents().iter().map(|&e| e as i64).collect();
    w[var] -= 1;
    w
}

impl fmt::Display for Derivation {
    /// `d1 + x1*d2`, `-2*x2*d1 + d2`, `(x1 + x2)*d1`; zero prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // single-term coefficients inline their sign; sums get parens
            let (negative, body) = if a.num_terms() == 1 {
                let (m, c) = a.terms().next().unwrap();
                let mag = c.abs();
                let body = if m.is_unit() {
                    if mag.is_one() {
                        format!("d{}", i + 1)
                    } else {
                        format!("{}*d{}", mag, i + 1)
                    }
                } else if mag.is_one() {
                    format!("{}*d{}", m, i + 1)
                } else {
                    format!("{}*{}*d{}", mag, m, i + 1)
                };
                (c.is_negative(), body)
            } else {
                (false, format!("({})*d{}", a, i + 1))
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A single weight space of the grading with its monomial basis.
#[derive(Clone, Debug)]
pub struct GradedComponent {
    pub weight: Vec<i64>,
    pub basis: Vec<Derivation>,
}

impl GradedComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The weight space at `weight`: all `x^a d_{i+1}` with `a - e_i = weight`
/// and `a` a genuine exponent vector. The dimension is `nvars` when every
/// weight entry is nonnegative, `1` when exactly one entry equals `-1`
/// (that coordinate of `a` being zero), and `0` otherwise.
pub fn graded_component(nvars: usize, weight: &[i64]) -> GradedComponent {
    assert_eq!(weight.len(), nvars);
    let mut basis = Vec::new();
    for i in 0..nvars {
        let mut alpha = Vec::with_capacity(nvars);
        let mut ok = true;
        for (j, &w) in weight.iter().enumerate() {
            let e = w + i64::from(j == i);
            if e < 0 {
                ok = false;
                break;
            }
            alpha.push(e as u32);
        }
        if ok {
            basis.push(Derivation::basis_element(Monomial::from_exponents(alpha), i));
        }
    }
    GradedComponent {
        weight: weight.to_vec(),
        basis,
    }
}

/// Coordinate chart for derivations with coefficient degree at most
/// `max_deg`: one block of monomial coordinates per coefficient.
pub(crate) struct DerivChart {
    nvars: usize,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DerivChart {
    pub fn new(nvars: usize, max_deg: u32) -> Self {
        let monomials = monomials_up_to(nvars, max_deg);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        DerivChart {
            nvars,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.nvars * self.monomials.len()
    }

    pub fn vectorize(&self, d: &Derivation) -> Vec<Rational> {
        let block = self.monomials.len();
        let mut v = vec![Rational::zero(); self.dim()];
        for (i, a) in d.coeffs().iter().enumerate() {
            for (m, c) in a.terms() {
                let idx = *self
                    .index
                    .get(m)
                    .unwrap_or_else(|| panic!("monomial {m} outside chart"));
                v[i * block + idx] = c.clone();
            }
        }
        v
    }

    pub fn devectorize(&self, v: &[Rational]) -> Derivation {
        let block = self.monomials.len();
        let coeffs = (0..self.nvars)
            .map(|i| {
                Polynomial::from_terms(
                    self.nvars,
                    self.monomials
                        .iter()
                        .zip(&v[i * block..(i + 1) * block])
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(m, c)| (m.clone(), c.clone())),
                )
            })
            .collect();
        Derivation::new(coeffs)
    }
}

/// A finite-dimensional space of derivations with an independent basis.
#[derive(Clone, Debug)]
pub struct DerivationSubspace {
    pub nvars: usize,
    pub degree_bound: u32,
    pub basis: Vec<Derivation>,
}

impl DerivationSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn span(&self) -> (DerivChart, Subspace) {
        let chart = DerivChart::new(self.nvars, self.degree_bound);
        let mut span = Subspace::new(chart.dim());
        for b in &self.basis {
            span.insert(&chart.vectorize(b));
        }
        (chart, span)
    }

    pub fn contains(&self, d: &Derivation) -> bool {
        if d.coeff_degree() > self.degree_bound {
            return false;
        }
        let (chart, span) = self.span();
        span.contains(&chart.vectorize(d))
    }

    /// True iff this space equals the span of `others` (all of whose
    /// coefficient degrees must fit under the degree bound).
    pub fn equals_span(&self, others: &[Derivation]) -> bool {
        let (chart, mut span) = self.span();
        let dim = span.dim();
        for d in others {
            if d.coeff_degree() > self.degree_bound || span.insert(&chart.vectorize(d)) {
                return false;
            }
        }
        let mut other_span = Subspace::new(chart.dim());
        for d in others {
            other_span.insert(&chart.vectorize(d));
        }
        other_span.dim() == dim
    }

    /// Every derivation with coefficient degree <= the bound.
    pub fn full(nvars: usize, degree_bound: u32) -> Self {
        let basis = monomials_up_to(nvars, degree_bound)
            .into_iter()
            .flat_map(|m| (0..nvars).map(move |i| Derivation::basis_element(m.clone(), i)))
            .collect();
        DerivationSubspace {
            nvars,
            degree_bound,
            basis,
        }
    }
}

/// Exact basis of `{e : coeff degree <= max_deg, [e, s] = 0 for all s}`.
pub fn centralizer_bounded(gens: &[Derivation], max_deg: u32) -> DerivationSubspace {
    let nvars = gens.first().map_or(1, Derivation::nvars);
    assert!(gens.iter().all(|s| s.nvars() == nvars), "variable count mismatch");
    let chart = DerivChart::new(nvars, max_deg);
    let out_deg = max_deg + gens.iter().map(Derivation::coeff_degree).max().unwrap_or(0);
    let out_chart = DerivChart::new(nvars, out_deg);

    // rows of the constraint matrix, collected sparsely: entry (row, col)
    // is the `row` output coordinate of [unit_col, s]
    let mut rows: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    let block = chart.monomials.len();
    for (gen_idx, s) in gens.iter().enumerate() {
        let offset = gen_idx * out_chart.dim();
        for i in 0..nvars {
            for (mi, m) in chart.monomials.iter().enumerate() {
                let col = i * block + mi;
                let b = Derivation::basis_element(m.clone(), i).bracket(s);
                if b.is_zero() {
                    continue;
                }
                for (out_idx, c) in sparse_coords(&out_chart, &b) {
                    rows.entry(offset + out_idx).or_default().push((col, c));
                }
            }
        }
    }
    let basis = nullspace_of_sparse_rows(chart.dim(), rows)
        .iter()
        .map(|v| chart.devectorize(v))
        .collect();
    DerivationSubspace {
        nvars,
        degree_bound: max_deg,
        basis,
    }
}

/// Exact basis of `{e : coeff degree <= max_deg, [e, s] in span(sub) for all
/// s in sub}`, the bounded-degree normalizer of the span of `sub`.
pub fn normalizer_bounded(sub: &[Derivation], max_deg: u32) -> DerivationSubspace {
    let nvars = sub.first().map_or(1, Derivation::nvars);
    assert!(sub.iter().all(|s| s.nvars() == nvars), "variable count mismatch");
    let chart = DerivChart::new(nvars, max_deg);
    let out_deg = max_deg + sub.iter().map(Derivation::coeff_degree).max().unwrap_or(0);
    let out_chart = DerivChart::new(nvars, out_deg);
    let block = chart.monomials.len();

    // unknowns: the e-coordinates, then one multiplier per (generator, basis
    // element of sub) for the membership part of the condition
    let e_dim = chart.dim();
    let total = e_dim + sub.len() * sub.len();
    let mut rows: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for (si, s) in sub.iter().enumerate() {
        for i in 0..nvars {
            for (mi, m) in chart.monomials.iter().enumerate() {
                let col = i * block + mi;
                let b = Derivation::basis_element(m.clone(), i).bracket(s);
                for (out_idx, c) in sparse_coords(&out_chart, &b) {
                    rows.entry(si * out_chart.dim() + out_idx)
                        .or_default()
                        .push((col, c));
                }
            }
        }
        for (ki, k) in sub.iter().enumerate() {
            let col = e_dim + si * sub.len() + ki;
            for (out_idx, c) in sparse_coords(&out_chart, k) {
                rows.entry(si * out_chart.dim() + out_idx)
                    .or_default()
                    .push((col, -c));
            }
        }
    }
    let mut seen = Subspace::new(e_dim);
    let mut basis = Vec::new();
    for v in nullspace_of_sparse_rows(total, rows) {
        let e_part = &v[..e_dim];
        if seen.insert(e_part) {
            basis.push(chart.devectorize(e_part));
        }
    }
    DerivationSubspace {
        nvars,
        degree_bound: max_deg,
        basis,
    }
}

fn sparse_coords(chart: &DerivChart, d: &Derivation) -> Vec<(usize, Rational)> {
    let block = chart.monomials.len();
    let mut out = Vec::new();
    for (i, a) in d.coeffs().iter().enumerate() {
        for (m, c) in a.terms() {
            let idx = chart.index[m];
            out.push((i * block + idx, c.clone()));
        }
    }
    out
}

/// Closure of the span of `seed` under bracketing with every basis
/// derivation of coefficient degree <= `max_deg + 1`, discarding produced
/// elements whose coefficient degree exceeds `max_deg`, iterated to a fixed
/// point.
pub fn ideal_closure_bounded(
    seed: &Derivation,
    max_deg: u32,
) -> Result<DerivationSubspace, LieError> {
    if seed.is_zero() {
        return Err(LieError::ZeroElement);
    }
    assert!(seed.coeff_degree() <= max_deg, "seed degree exceeds the bound");
    let nvars = seed.nvars();
    let chart = DerivChart::new(nvars, max_deg);
    let gens: Vec<Derivation> = monomials_up_to(nvars, max_deg + 1)
        .into_iter()
        .flat_map(|m| (0..nvars).map(move |i| Derivation::basis_element(m.clone(), i)))
        .collect();

    let mut span = Subspace::new(chart.dim());
    let mut basis = Vec::new();
    let mut queue = VecDeque::new();
    span.insert(&chart.vectorize(seed));
    basis.push(seed.clone());
    queue.push_back(seed.clone());
    'outer: while let Some(d) = queue.pop_front() {
        for g in &gens {
            if span.is_full() {
                break 'outer;
            }
            let b = g.bracket(&d);
            if b.is_zero() || b.coeff_degree() > max_deg {
                continue;
            }
            if span.insert(&chart.vectorize(&b)) {
                basis.push(b.clone());
                queue.push_back(b);
            }
        }
    }
    Ok(DerivationSubspace {
        nvars,
        degree_bound: max_deg,
        basis,
    })
}

/// Closure of `span{p + K}` in the quotient module `P_n / K` under the
/// action of every basis derivation of coefficient degree <= `max_deg + 1`,
/// discarding produced elements of degree greater than `max_deg`. The basis
/// consists of constant-free representatives.
pub fn module_orbit_bounded(p: &Polynomial, max_deg: u32) -> Result<Vec<Polynomial>, LieError> {
    if p.is_constant() {
        return Err(LieError::ConstantInput);
    }
    assert!(p.degree() <= max_deg, "input degree exceeds the bound");
    let nvars = p.nvars();
    let monomials: Vec<Monomial> = monomials_up_to(nvars, max_deg)
        .into_iter()
        .filter(|m| !m.is_unit())
        .collect();
    let index: HashMap<Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let vectorize = |q: &Polynomial| {
        let mut v = vec![Rational::zero(); monomials.len()];
        for (m, c) in q.terms() {
            if !m.is_unit() {
                v[index[m]] = c.clone();
            }
        }
        v
    };
    let strip = |q: &Polynomial| q.sub(&Polynomial::constant(nvars, q.constant_term()));

    let gens: Vec<Derivation> = monomials_up_to(nvars, max_deg + 1)
        .into_iter()
        .flat_map(|m| (0..nvars).map(move |i| Derivation::basis_element(m.clone(), i)))
        .collect();

    let start = strip(p);
    let mut span = Subspace::new(monomials.len());
    let mut basis = Vec::new();
    let mut queue = VecDeque::new();
    span.insert(&vectorize(&start));
    basis.push(start.clone());
    queue.push_back(start);
    'outer: while let Some(q) = queue.pop_front() {
        for g in &gens {
            if span.is_full() {
                break 'outer;
            }
            let r = strip(&g.apply(&q));
            if r.is_zero() || r.degree() > max_deg {
                continue;
            }
            if span.insert(&vectorize(&r)) {
                basis.push(r.clone());
                queue.push_back(r);
            }
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, ratio};

    fn x(nvars: usize, i: usize) -> Polynomial {
        Polynomial::variable(nvars, i)
    }

    #[test]
    fn apply_examples() {
        let d1 = Derivation::partial(2, 0);
        assert_eq!(d1.apply(&x(2, 0).pow(2)), x(2, 0).scale(&rat(2)));
        // (x1 d2) * x2 = x1
        let x1d2 = Derivation::new(vec![Polynomial::zero(2), x(2, 0)]);
        assert_eq!(x1d2.apply(&x(2, 1)), x(2, 0));
        // H1 * (x1^3 x2) = 3 x1^3 x2, from x1 * d/dx1(x1^3 x2) = x1 * 3 x1^2 x2
        let h1 = Derivation::euler(2, 0);
        let p = &x(2, 0).pow(3) * &x(2, 1);
        assert_eq!(h1.apply(&p), p.scale(&rat(3)));
    }

    #[test]
    fn bracket_basis_relations() {
        let d1 = Derivation::partial(2, 0);
        let d2 = Derivation::partial(2, 1);
        let x1d2 = Derivation::new(vec![Polynomial::zero(2), x(2, 0)]);
        // [d1, x1 d2] = d2
        assert_eq!(d1.bracket(&x1d2), d2);
        // [H1, x1 d1] = 0
        let h1 = Derivation::euler(2, 0);
        let x1d1 = Derivation::new(vec![x(2, 0), Polynomial::zero(2)]);
        assert!(h1.bracket(&x1d1).is_zero());
        // [x2 d1, x1 d2] = x2 d2 - x1 d1
        let x2d1 = Derivation::new(vec![x(2, 1), Polynomial::zero(2)]);
        let expect = Derivation::new(vec![x(2, 0).neg(), x(2, 1)]);
        assert_eq!(x2d1.bracket(&x1d2), expect);
        // [H1, x1 x2 d2] = x1 x2 d2
        let x1x2d2 = Derivation::new(vec![Polynomial::zero(2), &x(2, 0) * &x(2, 1)]);
        assert_eq!(h1.bracket(&x1x2d2), x1x2d2);
    }

    #[test]
    fn graded_parts_examples() {
        // x1^2 d2 sits at weight (2, -1)
        let d = Derivation::new(vec![Polynomial::zero(2), x(2, 0).pow(2)]);
        let parts = d.graded_parts();
        assert_eq!(parts.len(), 1);
        assert!(parts.contains_key(&vec![2, -1]));
        // d1 sits at (-1, 0)
        let parts = Derivation::partial(2, 0).graded_parts();
        assert_eq!(parts.into_keys().collect::<Vec<_>>(), vec![vec![-1, 0]]);
        // H1 + x1^2 d1 splits at (0,0) and (1,0), and the parts sum back
        let mix = Derivation::euler(2, 0).add(&Derivation::new(vec![
            x(2, 0).pow(2),
            Polynomial::zero(2),
        ]));
        let parts = mix.graded_parts();
        assert_eq!(parts.keys().cloned().collect::<Vec<_>>(), vec![vec![0, 0], vec![1, 0]]);
        let sum = parts
            .values()
            .fold(Derivation::zero(2), |acc, d| acc.add(d));
        assert_eq!(sum, mix);
    }

    #[test]
    fn graded_component_dimensions() {
        // weight (0,0): {H1, H2}
        let c = graded_component(2, &[0, 0]);
        assert_eq!(c.dim(), 2);
        assert!(c.basis.contains(&Derivation::euler(2, 0)));
        assert!(c.basis.contains(&Derivation::euler(2, 1)));
        // weight (1,-1): the unique x1 d2
        let c = graded_component(2, &[1, -1]);
        assert_eq!(c.dim(), 1);
        assert_eq!(
            c.basis[0],
            Derivation::new(vec![Polynomial::zero(2), x(2, 0)])
        );
        // weight (-1,-1): empty
        assert_eq!(graded_component(2, &[-1, -1]).dim(), 0);
        // every basis element is homogeneous of the requested weight
        for w in [[2i64, 0], [0, 3], [-1, 2]] {
            for b in graded_component(2, &w).basis {
                assert_eq!(b.weight().unwrap(), w.to_vec());
            }
        }
    }

    #[test]
    fn centralizer_of_partials_is_partials() {
        let gens = [Derivation::partial(2, 0), Derivation::partial(2, 1)];
        let c = centralizer_bounded(&gens, 3);
        assert_eq!(c.dim(), 2);
        assert!(c.equals_span(&gens));
    }

    #[test]
    fn centralizer_of_euler_frame_is_itself() {
        let gens = [Derivation::euler(2, 0), Derivation::euler(2, 1)];
        let c = centralizer_bounded(&gens, 3);
        assert_eq!(c.dim(), 2);
        assert!(c.equals_span(&gens));
    }

    #[test]
    fn center_truncation_is_zero() {
        let all = DerivationSubspace::full(2, 2);
        let c = centralizer_bounded(&all.basis, 2);
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn normalizer_of_euler_frame_is_itself() {
        let gens = [Derivation::euler(2, 0), Derivation::euler(2, 1)];
        let n = normalizer_bounded(&gens, 3);
        assert_eq!(n.dim(), 2);
        assert!(n.equals_span(&gens));
    }

    #[test]
    fn ideal_closure_is_full() {
        // simplicity at desk scale: every nonzero element generates everything
        let full = DerivationSubspace::full(2, 2).dim();
        let c = ideal_closure_bounded(&Derivation::partial(2, 0), 2).unwrap();
        assert_eq!(c.dim(), full);
        let a = Derivation::new(vec![Polynomial::zero(2), x(2, 0).pow(2)]);
        assert_eq!(ideal_closure_bounded(&a, 2).unwrap().dim(), full);
        // one variable, degree 1: {d1, H1}
        let c = ideal_closure_bounded(&Derivation::euler(1, 0), 1).unwrap();
        assert_eq!(c.dim(), DerivationSubspace::full(1, 1).dim());
        assert!(matches!(
            ideal_closure_bounded(&Derivation::zero(2), 2),
            Err(LieError::ZeroElement)
        ));
    }

    #[test]
    fn module_orbit_examples() {
        // x1^2 reaches all five non-constant monomials of degree <= 2
        let orbit = module_orbit_bounded(&x(2, 0).pow(2), 2).unwrap();
        assert_eq!(orbit.len(), 5);
        // x1 in one variable up to degree 3: {x1, x1^2, x1^3}
        let orbit = module_orbit_bounded(&x(1, 0), 3).unwrap();
        assert_eq!(orbit.len(), 3);
        // x1 + x2 up to degree 1: both x1 and x2 are reachable
        let p = &x(2, 0) + &x(2, 1);
        let orbit = module_orbit_bounded(&p, 1).unwrap();
        assert_eq!(orbit.len(), 2);
        assert!(matches!(
            module_orbit_bounded(&Polynomial::constant(2, rat(7)), 2),
            Err(LieError::ConstantInput)
        ));
    }

    #[test]
    #[should_panic(expected = "variable count mismatch")]
    fn apply_arity_mismatch_panics() {
        let _ = Derivation::partial(2, 0).apply(&Polynomial::variable(3, 0));
    }

    #[test]
    #[should_panic(expected = "variable count mismatch")]
    fn bracket_arity_mismatch_panics() {
        let _ = Derivation::partial(2, 0).bracket(&Derivation::partial(3, 0));
    }

    #[test]
    fn display_forms() {
        let d = Derivation::partial(2, 0).add(&Derivation::new(vec![
            Polynomial::zero(2),
            x(2, 0),
        ]));
        assert_eq!(d.to_string(), "d1 + x1*d2");
        let e = Derivation::new(vec![x(2, 1).scale(&rat(-2)), Polynomial::one(2)]);
        assert_eq!(e.to_string(), "-2*x2*d1 + d2");
        let s = Derivation::new(vec![&x(2, 0) + &x(2, 1), Polynomial::zero(2)]);
        assert_eq!(s.to_string(), "(x1 + x2)*d1");
        assert_eq!(Derivation::zero(2).to_string(), "0");
        let neg = Derivation::partial(2, 1).neg();
        assert_eq!(neg.to_string(), "-d2");
        let half = Derivation::partial(1, 0).scale(&ratio(1, 2));
        assert_eq!(half.to_string(), "1/2*d1");
    }

    #[test]
    fn decomposition_into_kernel_and_euler_summands() {
        // the algebra splits as a direct sum: terms x^a d_i with a_i = 0
        // (coefficient in the kernel of d_i) on one side, the multiples
        // x^a H_i of the Euler frame on the other; at bounded degree the two
        // spans are disjoint and together exhaust everything
        for nvars in 1..=3usize {
            let max_deg = 4;
            let chart = DerivChart::new(nvars, max_deg);
            let mut kernel_side = Subspace::new(chart.dim());
            let mut euler_side = Subspace::new(chart.dim());
            let mut union = Subspace::new(chart.dim());
            let mut kernel_dim = 0;
            let mut euler_dim = 0;
            for m in monomials_up_to(nvars, max_deg) {
                for i in 0..nvars {
                    if m.exponent(i) == 0 {
                        let d = Derivation::basis_element(m.clone(), i);
                        assert!(kernel_side.insert(&chart.vectorize(&d)));
                        union.insert(&chart.vectorize(&d));
                        kernel_dim += 1;
                    }
                }
            }
            for m in monomials_up_to(nvars, max_deg - 1) {
                for i in 0..nvars {
                    // x^m H_i = x^(m + e_i) d_i
                    let d = Derivation::basis_element(m.mul_var(i), i);
                    assert!(euler_side.insert(&chart.vectorize(&d)));
                    assert!(!kernel_side.contains(&chart.vectorize(&d)));
                    union.insert(&chart.vectorize(&d));
                    euler_dim += 1;
                }
            }
            // direct sum: dimensions add up to the whole space
            assert_eq!(kernel_dim + euler_dim, chart.dim());
            assert!(union.is_full());
        }
    }
}
