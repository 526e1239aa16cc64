//! Admissible permutations: orderings `sigma` with
//! `x_sigma(1) <= ... <= x_sigma(n)` under an admissible order.
//!
//! Permutations are zero-based here; user-facing output adds one.

use std::cmp::Ordering;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::order::AdmissibleOrder;
use crate::scalar::Scalar;

/// Refuse to list more admissible permutations than this.
pub const MATERIALIZE_LIMIT: usize = 10_000;

/// Stable sort of the input plus the runs of equal elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieGroups {
    pub base: Vec<usize>,
    pub groups: Vec<Range<usize>>,
}

impl TieGroups {
    pub fn new<T: Scalar>(xs: &[Element<T>], ord: &AdmissibleOrder<T>) -> Self {
        let mut base: Vec<usize> = (0..xs.len()).collect();
        base.sort_by(|&a, &b| ord.compare_unchecked(&xs[a], &xs[b]).then(a.cmp(&b)));
        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=base.len() {
            if i == base.len() || ord.compare_unchecked(&xs[base[start]], &xs[base[i]]) != Ordering::Equal {
                groups.push(start..i);
                start = i;
            }
        }
        TieGroups { base, groups }
    }

    /// `|Pi_X|`, the product of the factorials of the group sizes (saturating).
    pub fn count(&self) -> u128 {
        self.groups
            .iter()
            .map(|g| (1..=g.len() as u128).fold(1u128, |a, b| a.saturating_mul(b)))
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// The lexicographically first admissible permutation.
    pub fn first(&self) -> Vec<usize> {
        self.base.clone()
    }

    /// Iterates admissible permutations in lexicographic order.
    pub fn iter(&self) -> PermutationIter<'_> {
        PermutationIter {
            groups: &self.groups,
            current: Some(self.base.clone()),
        }
    }
}

pub struct PermutationIter<'a> {
    groups: &'a [Range<usize>],
    current: Option<Vec<usize>>,
}

impl Iterator for PermutationIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // Odometer: the last group changes fastest; a group that wraps around
        // is reset to ascending order and carries into the previous one.
        for g in self.groups.iter().rev() {
            if next_permutation(&mut next[g.clone()]) {
                self.current = Some(next);
                return Some(out);
            }
            next[g.clone()].sort_unstable();
        }
        Some(out)
    }
}

/// Advances `v` to its lexicographic successor; returns false (leaving `v`
/// unchanged) at the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap_or(i + 1);
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All admissible permutations in lexicographic order.
///
/// Fails with [`Error::TooManyTies`] when there are more than
/// [`MATERIALIZE_LIMIT`]; use [`sample_admissible`] then.
pub fn admissible_permutations<T: Scalar>(
    xs: &[Element<T>],
    ord: &AdmissibleOrder<T>,
) -> Result<Vec<Vec<usize>>> {
    let groups = TieGroups::new(xs, ord);
    let count = groups.count();
    if count > MATERIALIZE_LIMIT as u128 {
        return Err(Error::TooManyTies {
            count,
            limit: MATERIALIZE_LIMIT,
        });
    }
    Ok(groups.iter().collect())
}

/// Whether `sigma` is a permutation sorting `xs` non-decreasingly.
pub fn is_admissible<T: Scalar>(xs: &[Element<T>], ord: &AdmissibleOrder<T>, sigma: &[usize]) -> bool {
    if sigma.len() != xs.len() {
        return false;
    }
    let mut seen = vec![false; xs.len()];
    for &s in sigma {
        if s >= xs.len() || std::mem::replace(&mut seen[s], true) {
            return false;
        }
    }
    sigma.windows(2).all(|w| ord.leq(&xs[w[0]], &xs[w[1]]))
}

/// `count` admissible permutations: the lexicographically first one, then
/// seeded random shuffles within tie groups.
pub fn sample_admissible<T: Scalar>(
    xs: &[Element<T>],
    ord: &AdmissibleOrder<T>,
    count: usize,
    seed: u64,
) -> Vec<Vec<usize>> {
    let groups = TieGroups::new(xs, ord);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(groups.first());
    }
    while out.len() < count {
        let mut p = groups.base.clone();
        for g in &groups.groups {
            p[g.clone()].shuffle(&mut rng);
        }
        out.push(p);
    }
    out
}
