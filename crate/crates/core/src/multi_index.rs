use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Multi-index `α = (α_1, ..., α_n)` of nonnegative integers.
///
/// Ordering is graded lexicographic: first by total degree `|α|`, then
/// lexicographically by components.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|α|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `α!`. Exact integer arithmetic while `|α| <= 20`.
    pub fn factorial(&self) -> f64 {
        if self.degree() <= 20 {
            self.0
                .iter()
                .map(|&a| (1..=a as u64).product::<u64>())
                .product::<u64>() as f64
        } else {
            self.0.iter().map(|&a| (1..=a).map(f64::from).product::<f64>()).product()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(MultiIndex(v))
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// First nonzero component, if any.
    pub fn leading_index(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0)
    }

    /// All multi-indices in `n` variables with `|α| <= max_degree`, graded
    /// lexicographic order.
    pub fn all_up_to(n: usize, max_degree: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            out.extend(Self::of_degree(n, d));
        }
        out
    }

    /// All multi-indices in `n` variables with `|α| = degree`, lexicographic.
    pub fn of_degree(n: usize, degree: usize) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in 0..=left {
                prefix.push(a);
                rec(n, left - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, degree as u32, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_factorial() {
        let a = MultiIndex::new(vec![3, 0, 2]);
        assert_eq!(a.degree(), 5);
        assert_eq!(a.factorial(), 12.0);
        assert_eq!(MultiIndex::new(vec![20]).factorial(), 2_432_902_008_176_640_000.0);
        assert_eq!(MultiIndex::new(vec![21, 1]).factorial(), 51_090_942_171_709_440_000.0);
    }

    #[test]
    fn graded_enumeration() {
        let all = MultiIndex::all_up_to(2, 2);
        let comps: Vec<Vec<u32>> = all.iter().map(|a| a.components().to_vec()).collect();
        assert_eq!(comps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(MultiIndex::all_up_to(3, 3).len(), 20);
    }

    #[test]
    fn unit_steps() {
        let a = MultiIndex::new(vec![0, 2]);
        assert_eq!(a.leading_index(), Some(1));
        assert_eq!(a.minus_unit(0), None);
        assert_eq!(a.minus_unit(1).unwrap().components(), &[0, 1]);
        assert_eq!(a.plus_unit(0).components(), &[1, 2]);
    }
}
