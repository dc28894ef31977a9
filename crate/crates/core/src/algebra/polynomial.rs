use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::monomial::Monomial;
use super::order::LexOrder;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over `F` in a fixed number of variables.
///
/// Terms are kept sorted by descending monomial in the identity lex order
/// (`y1 > y2 > ...`) with no zero coefficients, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    num_vars: usize,
    terms: Vec<(Monomial, F)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(num_vars: usize, c: F) -> Self {
        Self::term(Monomial::one(num_vars), c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, F::one())
    }

    pub fn from_i64(num_vars: usize, c: i64) -> Self {
        Self::constant(num_vars, F::from_i64(c))
    }

    /// The variable `y_{var+1}`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        Self::term(Monomial::var(num_vars, var), F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let num_vars = m.num_vars();
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Polynomial { num_vars, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.num_vars(), num_vars, "monomial arity mismatch");
            let slot = acc.entry(m).or_insert_with(F::zero);
            *slot = *slot + c;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial { num_vars, terms }
    }

    /// Wraps terms already in canonical order. Caller guarantees the invariant.
    fn from_sorted(num_vars: usize, terms: Vec<(Monomial, F)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial { num_vars, terms }
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Terms in descending identity-lex order.
    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for nonzero constants.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Variables occurring with nonzero exponent, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_vars];
        for (m, _) in &self.terms {
            for (v, _) in m.iter() {
                seen[v] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(v, &s)| s.then_some(v))
            .collect()
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.num_vars == other.num_vars {
            Ok(())
        } else {
            Err(Error::Arity(format!(
                "{} variables vs {} variables",
                self.num_vars, other.num_vars
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        Ok(self.merge(other, F::one()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        Ok(self.merge(other, -F::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut acc = Polynomial::zero(self.num_vars);
        // Multiply the shorter operand term-wise into the longer one.
        let (short, long) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, c) in &short.terms {
            acc = acc.merge(&long.mul_term(m, *c), F::one());
        }
        Ok(acc)
    }

    /// `self + scale * other`, by merging the sorted term lists.
    fn merge(&self, other: &Self, scale: F) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = b[j].1 * scale;
                    if !c.is_zero() {
                        out.push((b[j].0.clone(), c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1 + b[j].1 * scale;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            let c = *c * scale;
            if !c.is_zero() {
                out.push((m.clone(), c));
            }
        }
        Polynomial::from_sorted(self.num_vars, out)
    }

    /// `c * m * self`. Lex order is multiplicative, so sorting is preserved.
    pub fn mul_term(&self, m: &Monomial, c: F) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(tm, tc)| (tm.mul(m), *tc * c))
            .collect();
        Polynomial::from_sorted(self.num_vars, terms)
    }

    pub fn scale(&self, c: F) -> Self {
        self.mul_term(&Monomial::one(self.num_vars), c)
    }

    /// Greatest monomial under `ord` and its coefficient.
    pub fn leading_term(&self, ord: &LexOrder) -> Result<(Monomial, F)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if ord.is_identity() {
            return Ok(self.terms[0].clone());
        }
        let best = self
            .terms
            .iter()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
            .expect("nonempty");
        Ok(best.clone())
    }

    /// Leading term in the identity order.
    pub(crate) fn lead(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    /// `self - c * m * g`.
    pub(crate) fn sub_multiple(&self, g: &Self, m: &Monomial, c: F) -> Self {
        self.merge(&g.mul_term(m, c), -F::one())
    }

    /// Removes and returns the leading term in the identity order.
    pub(crate) fn pop_lead(&mut self) -> Option<(Monomial, F)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Appends a term smaller than every present term.
    pub(crate) fn push_trailing(&mut self, m: Monomial, c: F) {
        debug_assert!(self.terms.last().map_or(true, |(last, _)| *last > m));
        if !c.is_zero() {
            self.terms.push((m, c));
        }
    }

    /// Scaled so the leading coefficient under the identity order is one.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(c.inv()),
        }
    }

    /// Value at a boolean point. Variables absent from `point` are an error
    /// only if they occur in `self`.
    pub fn evaluate(&self, point: &BTreeMap<usize, bool>) -> Result<F> {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut vanishes = false;
            for (v, _) in m.iter() {
                match point.get(&v) {
                    Some(true) => {}
                    Some(false) => vanishes = true,
                    None => return Err(Error::UnassignedVariable(v)),
                }
            }
            if !vanishes {
                acc = acc + *c;
            }
        }
        Ok(acc)
    }

    /// Value at the boolean point whose bit `v` holds variable `v`.
    pub fn evaluate_bits(&self, bits: u64) -> F {
        let mut acc = F::zero();
        'terms: for (m, c) in &self.terms {
            for (v, _) in m.iter() {
                if bits >> v & 1 == 0 {
                    continue 'terms;
                }
            }
            acc = acc + *c;
        }
        acc
    }

    /// Substitutes `var := value`.
    pub fn substitute(&self, var: usize, value: F) -> Self {
        Polynomial::from_terms(
            self.num_vars,
            self.terms.iter().map(|(m, c)| {
                let e = m.exponent(var) as u64;
                let factor = if e == 0 { F::one() } else { pow(value, e) };
                (m.without(var), *c * factor)
            }),
        )
    }

    /// Renames variable `v` to `perm[v]`.
    pub(crate) fn relabel(&self, perm: &[usize]) -> Self {
        Polynomial::from_terms(
            self.num_vars,
            self.terms.iter().map(|(m, c)| (m.permuted(perm), *c)),
        )
    }
}

fn pow<F: Field>(mut base: F, mut exp: u64) -> F {
    let mut acc = F::one();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        exp >>= 1;
    }
    acc
}

impl<'a, F: Field> Add for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a, F: Field> Sub for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a, F: Field> Mul for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a, F: Field> Neg for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(-F::one())
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    /// Terms in descending lex order joined by ` + `, coefficients as
    /// residues in `[0, p)`, coefficient 1 omitted on non-constant terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", c.canonical())?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", c.canonical())?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
