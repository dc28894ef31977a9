//! Buchberger's algorithm for reduced lexicographic Groebner bases.

use std::collections::BTreeSet;

use crate::algebra::division::reduce_identity;
use crate::algebra::{normal_form, Field, LexOrder, Monomial, Polynomial};
use crate::error::{Error, Result};

/// A reduced Groebner basis together with the order it was computed for.
///
/// Generators are monic, inter-reduced and sorted by descending leading
/// monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    generators: Vec<Polynomial<F>>,
    ord: LexOrder,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<Polynomial<F>> {
        self.generators
    }

    pub fn order(&self) -> &LexOrder {
        &self.ord
    }

    pub fn num_vars(&self) -> usize {
        self.ord.num_vars()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// False iff the basis contains a nonzero constant, i.e. the ideal is
    /// the whole ring.
    pub fn is_consistent(&self) -> bool {
        !self.generators.iter().any(Polynomial::is_nonzero_constant)
    }

    pub fn ideal_member(&self, f: &Polynomial<F>) -> Result<bool> {
        if self.generators.is_empty() {
            return Ok(f.is_zero());
        }
        Ok(normal_form(f, &self.generators, &self.ord)?.is_zero())
    }

    /// Checks that every S-polynomial of the generators reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> Result<bool> {
        for (i, f) in self.generators.iter().enumerate() {
            for g in &self.generators[i + 1..] {
                let s = s_polynomial(f, g, &self.ord)?;
                if !normal_form(&s, &self.generators, &self.ord)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Monic generators, no monomial of one divisible by the leading
    /// monomial of another.
    pub fn is_reduced(&self) -> Result<bool> {
        let leads = self
            .generators
            .iter()
            .map(|g| g.leading_term(&self.ord))
            .collect::<Result<Vec<_>>>()?;
        for (i, g) in self.generators.iter().enumerate() {
            if !leads[i].1.is_one() {
                return Ok(false);
            }
            for (j, (lm, _)) in leads.iter().enumerate() {
                if i != j && g.terms().iter().any(|(m, _)| lm.divides(m)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `(L / lt(f)) f - (L / lt(g)) g` where `L` is the lcm of the leading
/// monomials; the leading terms cancel.
pub fn s_polynomial<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    ord: &LexOrder,
) -> Result<Polynomial<F>> {
    let (fm, fc) = f.leading_term(ord)?;
    let (gm, gc) = g.leading_term(ord)?;
    let lcm = fm.lcm(&gm);
    let a = f.mul_term(&lcm.div(&fm).expect("lcm"), fc.inv());
    let b = g.mul_term(&lcm.div(&gm).expect("lcm"), gc.inv());
    a.try_sub(&b)
}

/// Reduced Groebner basis of the ideal generated by `polys` under `ord`.
///
/// Zero inputs are dropped. Critical pairs are processed smallest lcm
/// first (normal strategy) and pairs with coprime leading monomials are
/// skipped. The result is `{1}` exactly when the ideal is the whole ring.
pub fn buchberger<F: Field>(polys: &[Polynomial<F>], ord: &LexOrder) -> Result<GroebnerBasis<F>> {
    let n = ord.num_vars();
    if let Some(p) = polys.iter().find(|p| p.num_vars() != n) {
        return Err(Error::Arity(format!(
            "order over {n} variables, generator over {}",
            p.num_vars()
        )));
    }
    let identity = ord.is_identity();
    let input: Vec<Polynomial<F>> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            if identity {
                p.clone()
            } else {
                p.relabel(ord.to_identity())
            }
        })
        .collect();
    let mut generators = buchberger_identity(input);
    if !identity {
        generators = generators
            .iter()
            .map(|g| g.relabel(ord.from_identity()))
            .collect();
    }
    Ok(GroebnerBasis {
        generators,
        ord: ord.clone(),
    })
}

fn lead_monomial<F: Field>(p: &Polynomial<F>) -> &Monomial {
    &p.lead().expect("nonzero generator").0
}

/// Buchberger in the identity order; inputs nonzero.
fn buchberger_identity<F: Field>(input: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let Some(num_vars) = input.first().map(Polynomial::num_vars) else {
        return Vec::new();
    };
    let unit = || vec![Polynomial::one(num_vars)];
    let mut basis: Vec<Polynomial<F>> = Vec::with_capacity(input.len());
    for p in input {
        if p.is_nonzero_constant() {
            return unit();
        }
        basis.push(p.monic());
    }

    // (lcm, i, j) ordered by lcm first, then indices for determinism
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&mut pairs, &basis, i, j);
        }
    }
    while let Some((_, i, j)) = pairs.pop_first() {
        let s = s_poly_identity(&basis[i], &basis[j]);
        let r = reduce_identity(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_nonzero_constant() {
            return unit();
        }
        basis.push(r.monic());
        let k = basis.len() - 1;
        for i in 0..k {
            push_pair(&mut pairs, &basis, i, k);
        }
    }
    interreduce(basis)
}

fn push_pair<F: Field>(
    pairs: &mut BTreeSet<(Monomial, usize, usize)>,
    basis: &[Polynomial<F>],
    i: usize,
    j: usize,
) {
    let (a, b) = (lead_monomial(&basis[i]), lead_monomial(&basis[j]));
    if !a.is_coprime(b) {
        pairs.insert((a.lcm(b), i, j));
    }
}

fn s_poly_identity<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    let (fm, fc) = f.lead().expect("nonzero");
    let (gm, gc) = g.lead().expect("nonzero");
    let lcm = fm.lcm(gm);
    let a = f.mul_term(&lcm.div(fm).expect("lcm"), fc.inv());
    a.sub_multiple(g, &lcm.div(gm).expect("lcm"), gc.inv())
}

/// Minimalises, then reduces every generator against the rest until nothing
/// changes. Output is monic and sorted by descending leading monomial.
fn interreduce<F: Field>(mut basis: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    basis.sort_by(|a, b| lead_monomial(a).cmp(lead_monomial(b)));
    let mut minimal: Vec<Polynomial<F>> = Vec::with_capacity(basis.len());
    for p in basis {
        if !minimal
            .iter()
            .any(|q| lead_monomial(q).divides(lead_monomial(&p)))
        {
            minimal.push(p);
        }
    }
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<Polynomial<F>> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            let reduced = reduce_identity(&minimal[i], &others).monic();
            if reduced != minimal[i] {
                minimal[i] = reduced;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    minimal.reverse();
    minimal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Const, Fp};
    use crate::algebra::text::parse_polynomial;

    type F = Fp<Const<32003>>;
    type P = Polynomial<F>;

    fn p(src: &str, n: usize) -> P {
        parse_polynomial(src, n, 1).unwrap()
    }

    #[test]
    fn s_polynomial_examples() {
        let ord = LexOrder::identity(2);
        let f = p("y1^2 - y1", 2);
        assert!(s_polynomial(&f, &f, &ord).unwrap().is_zero());
        // (y1^2 - y1) - y1 (y1 + y2 - 1) = -y1*y2
        let g = p("y1 + y2 - 1", 2);
        assert_eq!(s_polynomial(&f, &g, &ord).unwrap(), p("-y1*y2", 2));
        // coprime leading monomials: S reduces to zero modulo the pair
        let h = p("y2^2 - y2", 2);
        let s = s_polynomial(&f, &h, &ord).unwrap();
        assert!(normal_form(&s, &[f, h], &ord).unwrap().is_zero());
        assert_eq!(
            s_polynomial(&P::zero(2), &g, &ord),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn buchberger_examples() {
        let ord = LexOrder::identity(2);
        let single = buchberger(&[p("y1^2 - y1", 2)], &ord).unwrap();
        assert_eq!(single.generators(), &[p("y1^2 - y1", 2)]);

        let f = [p("y1^2 - y1", 2), p("y2^2 - y2", 2), p("y1 + y2 - 1", 2)];
        let gb = buchberger(&f, &ord).unwrap();
        assert_eq!(gb.generators(), &[p("y1 + y2 - 1", 2), p("y2^2 - y2", 2)]);
        assert!(gb.is_consistent());
        for g in &f {
            assert!(gb.ideal_member(g).unwrap());
        }

        let unit = buchberger(&[p("y1", 1), p("y1 - 1", 1)], &LexOrder::identity(1)).unwrap();
        assert_eq!(unit.generators(), &[P::one(1)]);
        assert!(!unit.is_consistent());

        let empty = buchberger::<F>(&[], &ord).unwrap();
        assert!(empty.is_empty());
        assert!(empty.is_consistent());
    }

    #[test]
    fn membership() {
        let ord = LexOrder::identity(2);
        let gb = buchberger(&[p("y1", 2)], &ord).unwrap();
        assert!(gb.ideal_member(&p("y1*y2", 2)).unwrap());
        assert!(!gb.ideal_member(&p("y2", 2)).unwrap());
    }

    #[test]
    fn other_orders_give_valid_bases() {
        let f = [p("y1^2 - y1", 2), p("y2^2 - y2", 2), p("y1 + y2 - 1", 2)];
        let ord = LexOrder::from_priority(vec![1, 0]).unwrap();
        let gb = buchberger(&f, &ord).unwrap();
        assert_eq!(gb.generators(), &[p("y1 + y2 - 1", 2), p("y1^2 - y1", 2)]);
        assert!(gb.satisfies_buchberger_criterion().unwrap());
        assert!(gb.is_reduced().unwrap());
    }

    #[test]
    fn zero_inputs_dropped() {
        let ord = LexOrder::identity(1);
        let gb = buchberger(&[P::zero(1), p("y1^2 - y1", 1)], &ord).unwrap();
        assert_eq!(gb.len(), 1);
    }
}
