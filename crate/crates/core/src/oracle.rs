//! Exhaustive ground truth for small instances and systems.

use std::collections::BTreeSet;

use crate::algebra::{Field, Polynomial};
use crate::encode::PolynomialSystem;
use crate::error::{Error, Result};
use crate::instance::{Assignment, Predicate, PredicateInstance};
use crate::Rational;

/// Largest number of boolean variables the oracle will enumerate.
pub const ENUMERATION_CAP: usize = 20;

fn guard(count: usize) -> Result<()> {
    if count > ENUMERATION_CAP {
        Err(Error::TooLargeToEnumerate {
            count,
            cap: ENUMERATION_CAP,
        })
    } else {
        Ok(())
    }
}

/// Assignment whose literal `l` is bit `l` of `bits`.
pub fn assignment_from_bits(bits: u64, num_literals: usize) -> Assignment {
    (0..num_literals).map(|l| (l, bits >> l & 1 == 1)).collect()
}

/// Best satisfied fraction over all assignments, with the witness of
/// smallest binary encoding (literal 1 in the lowest bit).
pub fn brute_max_fraction(inst: &PredicateInstance) -> Result<(Rational, Assignment)> {
    guard(inst.num_literals())?;
    if inst.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let m = inst.len();
    let mut best = (0usize, 0u64);
    for bits in 0..(1u64 << inst.num_literals()) {
        let sat = inst
            .entries()
            .iter()
            .filter(|e| e.predicate.evaluate_bits(bits))
            .count();
        if sat > best.0 {
            best = (sat, bits);
            if sat == m {
                break;
            }
        }
    }
    // all-zero bits is the first candidate, so a zero score keeps it
    Ok((
        Rational::new(best.0 as i64, m as i64),
        assignment_from_bits(best.1, inst.num_literals()),
    ))
}

/// First assignment (in binary order) satisfying every predicate.
pub fn brute_satisfying(inst: &PredicateInstance) -> Result<Option<Assignment>> {
    guard(inst.num_literals())?;
    for bits in 0..(1u64 << inst.num_literals()) {
        if inst
            .entries()
            .iter()
            .all(|e| e.predicate.evaluate_bits(bits))
        {
            return Ok(Some(assignment_from_bits(bits, inst.num_literals())));
        }
    }
    Ok(None)
}

/// Every assignment to `literals` (others unassigned) satisfying all
/// predicates, encoded with bit `i` holding `literals[i]`.
pub fn satisfying_set(inst: &PredicateInstance, literals: &[usize]) -> Result<BTreeSet<u64>> {
    guard(literals.len())?;
    let mut out = BTreeSet::new();
    for bits in 0..(1u64 << literals.len()) {
        let lookup = |l: usize| {
            literals
                .iter()
                .position(|&x| x == l)
                .map(|i| bits >> i & 1 == 1)
        };
        let mut all = true;
        for e in inst.entries() {
            if !e.predicate.eval_with(lookup)? {
                all = false;
                break;
            }
        }
        if all {
            out.insert(bits);
        }
    }
    Ok(out)
}

/// Boolean points of `{0,1}^num_vars` at which every polynomial vanishes.
pub fn boolean_zeros<F: Field>(polys: &[Polynomial<F>], num_vars: usize) -> Result<BTreeSet<u64>> {
    guard(num_vars)?;
    Ok((0..(1u64 << num_vars))
        .filter(|&bits| polys.iter().all(|p| p.evaluate_bits(bits).is_zero()))
        .collect())
}

/// Boolean variety of an encoded system.
pub fn brute_variety<F: Field>(sys: &PolynomialSystem<F>) -> Result<BTreeSet<u64>> {
    boolean_zeros(&sys.all_polynomials(), sys.num_vars())
}

/// Fraction of the `2^u` settings of `undecided` under which `p` holds,
/// with the remaining literals read from `values`.
pub fn brute_probability(
    p: &Predicate,
    values: &Assignment,
    undecided: &BTreeSet<usize>,
) -> Result<Rational> {
    let free: Vec<usize> = undecided
        .iter()
        .copied()
        .filter(|&l| p.mentions(l))
        .collect();
    guard(free.len())?;
    let mut hits = 0i64;
    for bits in 0..1u64 << free.len() {
        let holds = p.eval_with(|l| match free.iter().position(|&f| f == l) {
            Some(i) => Some(bits >> i & 1 == 1),
            None => values.get(&l).copied(),
        })?;
        hits += holds as i64;
    }
    Ok(Rational::new(hits, 1i64 << free.len()))
}
