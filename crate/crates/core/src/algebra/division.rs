use super::field::Field;
use super::order::LexOrder;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Remainder of `f` on multivariate division by `divisors` under `ord`.
///
/// The current leading term is always reduced by the first divisor (in list
/// order) whose leading monomial divides it; irreducible leading terms move
/// to the remainder. No monomial of the result is divisible by any divisor's
/// leading monomial, and `f - remainder` lies in the ideal of `divisors`.
pub fn normal_form<F: Field>(
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
    ord: &LexOrder,
) -> Result<Polynomial<F>> {
    for g in divisors {
        if g.num_vars() != f.num_vars() {
            return Err(Error::Arity(format!(
                "divisor has {} variables, dividend {}",
                g.num_vars(),
                f.num_vars()
            )));
        }
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    if ord.num_vars() != f.num_vars() {
        return Err(Error::Arity(format!(
            "order over {} variables, polynomial over {}",
            ord.num_vars(),
            f.num_vars()
        )));
    }
    if ord.is_identity() {
        return Ok(reduce_identity(f, divisors));
    }
    let fwd = ord.to_identity();
    let f2 = f.relabel(fwd);
    let g2: Vec<_> = divisors.iter().map(|g| g.relabel(fwd)).collect();
    Ok(reduce_identity(&f2, &g2).relabel(ord.from_identity()))
}

/// Division under the identity order; all divisors nonzero.
pub(crate) fn reduce_identity<F: Field>(
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
) -> Polynomial<F> {
    let mut p = f.clone();
    let mut rem = Polynomial::zero(f.num_vars());
    while let Some((m, c)) = p.lead().cloned() {
        let divisor = divisors.iter().find_map(|g| {
            let (gm, gc) = g.lead().expect("nonzero divisor");
            m.div(gm).map(|q| (g, q, *gc))
        });
        match divisor {
            Some((g, q, gc)) => p = p.sub_multiple(g, &q, c / gc),
            None => {
                p.pop_lead();
                rem.push_trailing(m, c);
            }
        }
    }
    rem
}
