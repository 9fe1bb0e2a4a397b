//! Sparse multivariate polynomials over `Q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::{rat, Rational};

/// A polynomial in `nvars` variables with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration is
/// always in ascending graded-lex order and no zero coefficient is ever
/// stored; equality is structural. Arithmetic between polynomials with
/// different variable counts is a programming error and panics.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat(1))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(nvars), c);
        }
        p
    }

    /// The variable `x_{var+1}` as a polynomial.
    pub fn variable(nvars: usize, var: usize) -> Self {
        Self::term(Monomial::variable(nvars, var), rat(1))
    }

    /// The single term `c * m` (canonicalized if `c = 0`).
    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    /// The coefficient of the unit monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::unit(self.nvars))
    }

    /// The constant value if the polynomial lies in `K`, else `None`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Adds `c * m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars, "variable count mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Partial derivative with respect to `x_{var+1}`: termwise
    /// `alpha_var * x^(alpha - e_var)`, terms with zero exponent vanish.
    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        assert!(var < self.nvars, "variable index {var} out of range");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(reduced) = m.div_var(var) {
                out.add_term(reduced, c * rat(m.exponent(var) as i64));
            }
        }
        out
    }

    /// Substitutes `images[i]` for `x_{i+1}`. All images must share one
    /// variable count, which becomes the variable count of the result.
    /// This is the unique algebra homomorphism with `x_i -> images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "arity mismatch: {} images for {} variables", images.len(), self.nvars);
        let out_vars = images.first().map_or(self.nvars, Polynomial::nvars);
        assert!(
            images.iter().all(|q| q.nvars() == out_vars),
            "images have inconsistent variable counts"
        );
        // cache powers of each image up to the largest exponent used
        let mut max_exp = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (i, me) in max_exp.iter_mut().enumerate() {
                *me = (*me).max(m.exponent(i));
            }
        }
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, &top)| {
                let mut ps = Vec::with_capacity(top as usize + 1);
                ps.push(Polynomial::one(out_vars));
                for _ in 0..top {
                    ps.push(ps.last().unwrap().mul(img));
                }
                ps
            })
            .collect();
        let mut out = Polynomial::zero(out_vars);
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(out_vars, c.clone());
            for (i, var_powers) in powers.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    prod = prod.mul(&var_powers[e as usize]);
                }
            }
            out = out.add(&prod);
        }
        out
    }

    /// Drops every term of total degree greater than `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl fmt::Display for Polynomial {
    /// Renders in descending graded-lex term order with explicit `*` and `^`,
    /// e.g. `x1^2*x2 - 1/2`. The output reparses to an equal polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
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
            let mag = c.abs();
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
