//! Monomials `x^alpha` as exponent vectors, ordered graded-lexicographically.

use std::cmp::Ordering;
use std::fmt;

/// A monomial `x1^a1 * ... * xn^an` in a fixed number of variables.
///
/// The [`Ord`] implementation is graded lexicographic: lower total degree
/// first, ties broken by the exponent vector with `x1` weighing heaviest.
/// This is the canonical term order everywhere in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    /// The unit monomial (all exponents zero) in `nvars` variables.
    pub fn unit(nvars: usize) -> Self {
        Monomial {
            exponents: vec![0; nvars],
        }
    }

    /// The single variable `x_{var+1}`, i.e. exponent vector `e_var`.
    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let mut exponents = vec![0; nvars];
        exponents[var] = 1;
        Monomial { exponents }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exponents[var]
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Product of monomials: exponent vectors add.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Divides by `x_var`, or returns `None` when the exponent is zero.
    pub fn div_var(&self, var: usize) -> Option<Monomial> {
        if self.exponents[var] == 0 {
            return None;
        }
        let mut exponents = self.exponents.clone();
        exponents[var] -= 1;
        Some(Monomial { exponents })
    }

    /// Multiplies by `x_var`.
    pub fn mul_var(&self, var: usize) -> Monomial {
        let mut exponents = self.exponents.clone();
        exponents[var] += 1;
        Monomial { exponents }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All monomials in `nvars` variables of total degree at most `max_deg`,
/// in ascending graded-lex order. This is the fixed coordinate basis for
/// every bounded-degree linear-algebra computation in the crate.
pub fn monomials_up_to(nvars: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(dim_up_to(nvars, max_deg));
    let mut current = vec![0u32; nvars];
    for deg in 0..=max_deg {
        emit_of_degree(nvars, 0, deg, &mut current, &mut out);
    }
    out
}

// Emits the monomials of one exact total degree in lex-ascending order
// (x1 heaviest last), matching the Ord above within one degree block.
fn emit_of_degree(
    nvars: usize,
    pos: usize,
    remaining: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == nvars {
        if remaining == 0 {
            out.push(Monomial::from_exponents(current.clone()));
        }
        return;
    }
    if pos + 1 == nvars {
        current[pos] = remaining;
        out.push(Monomial::from_exponents(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        emit_of_degree(nvars, pos + 1, remaining - e, current, out);
        current[pos] = 0;
    }
}

/// Dimension of the space of polynomials of degree <= `max_deg` in `nvars`
/// variables: `C(max_deg + nvars, nvars)`.
pub fn dim_up_to(nvars: usize, max_deg: u32) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 1..=nvars as u128 {
        num *= max_deg as u128 + k;
        den *= k;
    }
    (num / den) as usize
}
