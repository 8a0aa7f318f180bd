//! Weight vectors with infinitesimal refinements.
//!
//! A weight is a list of levels `w_0 + ε w_1 + ε² w_2 + …` with `ε > 0`
//! infinitesimally small. Pairings with a vector are compared
//! lexicographically level by level, which turns every "for ε small enough"
//! argument into an exact sign test.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{GkzError, Result};
use crate::rational::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    levels: Vec<Vec<Q>>,
}

/// The value `<w, u>` of a leveled weight, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexValue(pub Vec<Q>);

impl LexValue {
    pub fn zero() -> Self {
        LexValue(Vec::new())
    }

    fn level(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn signum(&self) -> Ordering {
        self.0.iter().find(|x| !x.is_zero()).map_or(Ordering::Equal, |x| {
            if x.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn add(&self, other: &LexValue) -> LexValue {
        let len = self.0.len().max(other.0.len());
        LexValue((0..len).map(|i| self.level(i) + other.level(i)).collect())
    }

    pub fn scale(&self, c: &Q) -> LexValue {
        LexValue(self.0.iter().map(|x| x * c).collect())
    }

    /// Leading (non-infinitesimal) part.
    pub fn base(&self) -> Q {
        self.level(0)
    }
}

impl Ord for LexValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.0.len().max(other.0.len());
        for i in 0..len {
            match self.level(i).cmp(&other.level(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for LexValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl WeightVector {
    pub fn new(base: Vec<Q>) -> Self {
        Self { levels: vec![base] }
    }

    pub fn with_eps(base: Vec<Q>, eps: Vec<Q>) -> Self {
        assert_eq!(base.len(), eps.len(), "eps length");
        Self { levels: vec![base, eps] }
    }

    pub fn from_levels(levels: Vec<Vec<Q>>) -> Self {
        assert!(!levels.is_empty());
        let n = levels[0].len();
        assert!(levels.iter().all(|l| l.len() == n), "level lengths");
        Self { levels }
    }

    pub fn from_ints(base: &[i64]) -> Self {
        Self::new(base.iter().map(|&x| rational::q(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn base(&self) -> &[Q] {
        &self.levels[0]
    }

    /// The first infinitesimal level, if any.
    pub fn eps(&self) -> Option<&[Q]> {
        self.levels.get(1).map(|v| v.as_slice())
    }

    pub fn levels(&self) -> &[Vec<Q>] {
        &self.levels
    }

    pub fn is_concrete(&self) -> bool {
        self.levels.len() == 1
    }

    /// The base vector when there are no infinitesimal levels.
    pub fn concrete(&self) -> Result<&[Q]> {
        if self.is_concrete() {
            Ok(&self.levels[0])
        } else {
            Err(GkzError::WeightNotConcrete)
        }
    }

    pub fn pair(&self, u: &[Q]) -> LexValue {
        LexValue(self.levels.iter().map(|l| rational::dot(l, u)).collect())
    }

    /// Every coordinate lexicographically positive.
    pub fn is_strictly_positive(&self) -> bool {
        (0..self.len()).all(|j| LexValue(self.levels.iter().map(|l| l[j].clone()).collect()).is_positive())
    }

    /// Restriction to the coordinates in `cols`.
    pub fn restrict(&self, cols: &[usize]) -> WeightVector {
        WeightVector { levels: self.levels.iter().map(|l| cols.iter().map(|&j| l[j].clone()).collect()).collect() }
    }

    /// Prepends a zero coordinate, as for `(0, w)` on `rho(A)`.
    pub fn prepend_zero(&self) -> WeightVector {
        WeightVector {
            levels: self
                .levels
                .iter()
                .map(|l| std::iter::once(Q::zero()).chain(l.iter().cloned()).collect())
                .collect(),
        }
    }

    /// A concrete weight `w_0 + ε_1 w_1 + …` agreeing in sign with the
    /// lexicographic pairing on every probe vector. Each `ε` is a power of 1/2.
    pub fn realize(&self, probes: &[Vec<Q>]) -> Vec<Q> {
        let mut acc = self.levels.last().unwrap().clone();
        for level in self.levels.iter().rev().skip(1) {
            // choose eps so that sign(level·b + eps acc·b) = lex sign
            let mut eps = Q::one();
            for b in probes {
                let head = rational::dot(level, b);
                let tail = rational::dot(&acc, b);
                if head.is_zero() || tail.is_zero() || head.is_positive() == tail.is_positive() {
                    continue;
                }
                let limit = (&head / &tail).abs();
                while eps >= limit {
                    eps /= Q::from_integer(2.into());
                }
            }
            acc = level.iter().zip(&acc).map(|(x, y)| x + &eps * y).collect();
        }
        acc
    }
}
