//! Coordinate charts identifying bounded-degree polynomial spaces with `Q^N`.

use std::collections::HashMap;

use num_traits::Zero;

use super::monomial::{monomials_up_to, Monomial};
use super::polynomial::Polynomial;
use super::rational::Rational;

/// The monomial basis of polynomials of degree at most `max_deg` in `nvars`
/// variables, with constant-time index lookup. Vector coordinates follow the
/// ascending graded-lex enumeration.
pub struct PolyChart {
    nvars: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl PolyChart {
    pub fn new(nvars: usize, max_deg: u32) -> Self {
        let monomials = monomials_up_to(nvars, max_deg);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        PolyChart {
            nvars,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn vectorize(&self, p: &Polynomial) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (m, c) in p.terms() {
            let idx = self
                .index_of(m)
                .unwrap_or_else(|| panic!("monomial {m} exceeds the chart degree bound"));
            v[idx] = c.clone();
        }
        v
    }

    pub fn devectorize(&self, v: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            self.nvars,
            self.monomials
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}
