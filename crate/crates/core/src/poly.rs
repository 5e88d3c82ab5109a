//! Sparse multivariate polynomials with complex coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::MultiIndex;

/// Relative magnitude below which coefficients are dropped after an operator
/// application.
pub const PRUNE_REL: f64 = 1e-14;

/// Sparse polynomial `Σ c_α z^α` in `n` variables. Stored coefficients are
/// never exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyC {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl PolyC {
    pub fn zero(n: usize) -> Self {
        PolyC { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// Builds from `(α, c)` pairs, summing repeated indices.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Self {
        let mut p = Self::zero(n);
        for (a, c) in terms {
            assert_eq!(a.dim(), n, "multi-index dimension");
            p.add_term(a, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    /// Maximum `|α|` over stored terms (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        use std::collections::btree_map::Entry;
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops terms whose magnitude is below `rel * scale`.
    pub fn prune(&mut self, rel: f64, scale: f64) {
        let cut = rel * scale;
        self.terms.retain(|_, c| c.norm() >= cut && c.norm() > 0.0);
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(a, c)| (a.clone(), c * s)))
    }

    pub fn add(&self, other: &PolyC) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &PolyC) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &PolyC) -> Self {
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    /// `∂P/∂z_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            if let Some(b) = a.minus_unit(k) {
                out.add_term(b, c * f64::from(a.get(k)));
            }
        }
        out
    }

    /// `z_k · P`.
    pub fn mul_var(&self, k: usize) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(a, c)| (a.plus_unit(k), *c)))
    }

    /// `max_α |p_α - q_α|`.
    pub fn max_coeff_distance(&self, other: &PolyC) -> f64 {
        let mut d: f64 = 0.0;
        for (a, c) in &self.terms {
            d = d.max((c - other.coeff(a)).norm());
        }
        for (a, c) in &other.terms {
            if !self.terms.contains_key(a) {
                d = d.max(c.norm());
            }
        }
        d
    }

    /// Evaluates at `z` using per-variable power tables.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "evaluation point dimension");
        let deg = self.degree();
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .map(|&zi| {
                let mut row = Vec::with_capacity(deg + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=deg {
                    row.push(acc);
                    acc *= zi;
                }
                row
            })
            .collect();
        self.terms
            .iter()
            .map(|(a, c)| {
                a.components()
                    .iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &e)| acc * powers[i][e as usize])
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let mut p = PolyC::zero(1);
        p.add_term(MultiIndex::new(vec![1]), c(2.0, 0.0));
        p.add_term(MultiIndex::new(vec![1]), c(-2.0, 0.0));
        assert!(p.is_empty());
        p.add_term(MultiIndex::new(vec![2]), c(0.0, 0.0));
        assert!(p.is_empty());
    }

    #[test]
    fn calculus_on_monomials() {
        let p = PolyC::monomial(MultiIndex::new(vec![3, 1]), c(2.0, 1.0));
        let d = p.derivative(0);
        assert_eq!(d.coeff(&MultiIndex::new(vec![2, 1])), c(6.0, 3.0));
        assert!(p.derivative(1).derivative(1).is_empty());
        assert_eq!(p.mul_var(1).degree(), 5);
    }

    #[test]
    fn evaluate_square_at_imaginary_point() {
        let p = PolyC::monomial(MultiIndex::new(vec![2]), c(1.0, 0.0));
        assert_eq!(p.evaluate(&[c(0.0, 2.0)]), c(-4.0, 0.0));
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(a in proptest::collection::vec(-2.0f64..2.0, 6),
                                       b in proptest::collection::vec(-2.0f64..2.0, 6),
                                       x in -1.5f64..1.5, y in -1.5f64..1.5) {
            let p = PolyC::from_terms(2, MultiIndex::all_up_to(2, 1).into_iter().zip(a.chunks(2).map(|w| c(w[0], w[1]))));
            let q = PolyC::from_terms(2, MultiIndex::all_up_to(2, 1).into_iter().zip(b.chunks(2).map(|w| c(w[0], w[1]))));
            let z = [c(x, y), c(y, -x)];
            let lhs = p.mul(&q).evaluate(&z);
            let rhs = p.evaluate(&z) * q.evaluate(&z);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
