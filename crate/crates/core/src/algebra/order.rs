use std::cmp::Ordering;

use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Lexicographic monomial order given by a variable priority list.
///
/// `priority[0]` is the largest variable. Two monomials are compared on the
/// exponent of `priority[0]`, then `priority[1]`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexOrder {
    priority: Vec<usize>,
    // rank[v] = position of v in `priority`
    rank: Vec<usize>,
}

impl LexOrder {
    /// `y1 > y2 > ... > yn`.
    pub fn identity(num_vars: usize) -> Self {
        LexOrder {
            priority: (0..num_vars).collect(),
            rank: (0..num_vars).collect(),
        }
    }

    pub fn from_priority(priority: Vec<usize>) -> Result<Self> {
        let n = priority.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in priority.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "variable priority {priority:?} is not a permutation"
                )));
            }
            rank[v] = pos;
        }
        Ok(LexOrder { priority, rank })
    }

    pub fn num_vars(&self) -> usize {
        self.priority.len()
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn is_identity(&self) -> bool {
        self.priority.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.priority {
            match a.exponent(v).cmp(&b.exponent(v)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Permutation sending each variable to its position in the priority
    /// list; under it this order becomes the identity order.
    pub(crate) fn to_identity(&self) -> &[usize] {
        &self.rank
    }

    /// Inverse of [`LexOrder::to_identity`].
    pub(crate) fn from_identity(&self) -> &[usize] {
        &self.priority
    }
}
