use std::fmt;

/// A power product `y_0^e_0 * ... * y_{n-1}^e_{n-1}` over a fixed number of
/// ring variables.
///
/// Exponents are stored densely. The derived `Ord` compares exponent vectors
/// entry by entry, which is the lexicographic order with `y_0` largest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial {
            exps: vec![0; num_vars],
        }
    }

    pub fn var(num_vars: usize, var: usize) -> Self {
        Self::var_pow(num_vars, var, 1)
    }

    pub fn var_pow(num_vars: usize, var: usize, exp: u16) -> Self {
        let mut m = Self::one(num_vars);
        m.exps[var] = exp;
        m
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Monomial { exps }
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    /// Nonzero `(variable, exponent)` pairs in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| (v, e))
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(b)?);
        }
        Some(Monomial { exps })
    }

    /// Copy with variable `v` renamed to `perm[v]`.
    pub(crate) fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut exps = vec![0; self.exps.len()];
        for (v, &e) in self.exps.iter().enumerate() {
            exps[perm[v]] = e;
        }
        Monomial { exps }
    }

    /// Copy with the exponent of `var` cleared.
    pub(crate) fn without(&self, var: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[var] = 0;
        m
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "y{}", v + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn divisibility_and_lcm() {
        assert!(m(&[1, 0]).divides(&m(&[2, 1])));
        assert!(!m(&[0, 2]).divides(&m(&[2, 1])));
        assert_eq!(m(&[2, 0]).lcm(&m(&[1, 3])), m(&[2, 3]));
        assert_eq!(m(&[2, 1]).div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert_eq!(m(&[0, 1]).div(&m(&[1, 0])), None);
        assert!(m(&[2, 0]).is_coprime(&m(&[0, 5])));
    }

    #[test]
    fn derived_order_is_lex() {
        assert!(m(&[1, 0]) > m(&[0, 7]));
        assert!(m(&[1, 1]) > m(&[1, 0]));
        assert!(m(&[0, 0]) < m(&[0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(m(&[2, 0, 1]).to_string(), "y1^2*y3");
        assert_eq!(m(&[0, 0]).to_string(), "1");
        assert_eq!(m(&[2, 1]).total_degree(), 3);
    }
}
