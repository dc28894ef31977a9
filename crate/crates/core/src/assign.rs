//! Fair-coin assignment of undecided literals, its exact per-predicate
//! success probabilities, and derandomization by conditional expectations.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::{Assignment, Predicate, Slot};
use crate::Rational;

/// Decided literal values plus the literals still left to a coin flip.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    pub values: Assignment,
    pub undecided: BTreeSet<usize>,
}

impl PartialAssignment {
    pub fn new(values: Assignment, undecided: BTreeSet<usize>) -> Result<Self> {
        if let Some(l) = undecided.iter().find(|l| values.contains_key(l)) {
            return Err(Error::InvalidParameter(format!(
                "literal l{} is both decided and undecided",
                l + 1
            )));
        }
        Ok(PartialAssignment { values, undecided })
    }

    pub fn is_total(&self) -> bool {
        self.undecided.is_empty()
    }

    /// `Some(Some(v))` decided, `Some(None)` undecided, `None` unknown.
    fn state(&self, literal: usize) -> Option<Option<bool>> {
        match self.values.get(&literal) {
            Some(v) => Some(Some(*v)),
            None => self.undecided.contains(&literal).then_some(None),
        }
    }

    fn decide(&mut self, literal: usize, value: bool) {
        self.undecided.remove(&literal);
        self.values.insert(literal, value);
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

fn check_known(p: &Predicate, partial: &PartialAssignment) -> Result<()> {
    match p
        .literals()
        .into_iter()
        .find(|&l| partial.state(l).is_none())
    {
        Some(l) => Err(Error::UnassignedVariable(l)),
        None => Ok(()),
    }
}

/// Not-2 only: settled true terms, and the distribution of the number of
/// further true terms once the undecided literals are flipped
/// (index = margin).
pub fn margin_distribution(
    p: &Predicate,
    partial: &PartialAssignment,
) -> Result<(usize, Vec<Rational>)> {
    let Predicate::Not2(n) = p else {
        return Err(Error::InvalidParameter(
            "margins are defined for not-2 predicates".into(),
        ));
    };
    check_known(p, partial)?;
    let mut base = 0;
    // per undecided literal: true terms it contributes when 0 and when 1
    let mut contrib: BTreeMap<usize, [usize; 2]> = BTreeMap::new();
    for slot in n.slots() {
        match slot {
            Slot::Fixed(v) => base += *v as usize,
            Slot::Literal(l) => match partial.state(l.literal).flatten() {
                Some(x) => base += l.truth(x) as usize,
                None => {
                    let c = contrib.entry(l.literal).or_default();
                    c[0] += l.truth(false) as usize;
                    c[1] += l.truth(true) as usize;
                }
            },
        }
    }
    let mut dist = vec![Rational::from_integer(1)];
    for [c0, c1] in contrib.into_values() {
        let mut next = vec![Rational::from_integer(0); dist.len() + c0.max(c1)];
        for (m, pr) in dist.iter().enumerate() {
            next[m + c0] += pr * half();
            next[m + c1] += pr * half();
        }
        dist = next;
    }
    Ok((base, dist))
}

/// Probability that the predicate holds when every undecided literal is an
/// independent fair coin.
pub fn satisfaction_probability(p: &Predicate, partial: &PartialAssignment) -> Result<Rational> {
    check_known(p, partial)?;
    match p {
        Predicate::Not2(_) => {
            let (base, dist) = margin_distribution(p, partial)?;
            let forbidden = 2usize
                .checked_sub(base)
                .and_then(|m| dist.get(m).copied())
                .unwrap_or_default();
            Ok(Rational::from_integer(1) - forbidden)
        }
        Predicate::Oxr(o) => {
            let special = match o.special {
                Slot::Fixed(v) => Some(v),
                Slot::Literal(l) => partial.state(l.literal).flatten().map(|x| l.truth(x)),
            };
            match (special, o.special) {
                (Some(true), _) => Ok(Rational::from_integer(1)),
                (Some(false), _) => Ok(xor_probability(&o.sym, partial)),
                (None, Slot::Literal(l)) => {
                    // condition on the special literal's coin
                    let mut total = Rational::from_integer(0);
                    for x in [false, true] {
                        let pr = if l.truth(x) {
                            Rational::from_integer(1)
                        } else {
                            let mut cond = partial.clone();
                            cond.decide(l.literal, x);
                            xor_probability(&o.sym, &cond)
                        };
                        total += pr * half();
                    }
                    Ok(total)
                }
                (None, Slot::Fixed(_)) => unreachable!("settled slots are decided"),
            }
        }
    }
}

fn xor_probability(sym: &[Slot; 2], partial: &PartialAssignment) -> Rational {
    let truth = |s: &Slot| match s {
        Slot::Fixed(v) => Some(*v),
        Slot::Literal(l) => partial.state(l.literal).flatten().map(|x| l.truth(x)),
    };
    match (truth(&sym[0]), truth(&sym[1])) {
        (Some(a), Some(b)) => Rational::from_integer((a != b) as i64),
        (None, Some(_)) | (Some(_), None) => half(),
        (None, None) => match (sym[0], sym[1]) {
            (Slot::Literal(a), Slot::Literal(b)) if a.literal == b.literal => {
                Rational::from_integer((a.negated != b.negated) as i64)
            }
            _ => half(),
        },
    }
}

/// Sum of the satisfaction probabilities.
pub fn expected_satisfied<'a>(
    preds: impl IntoIterator<Item = &'a Predicate>,
    partial: &PartialAssignment,
) -> Result<Rational> {
    let mut total = Rational::from_integer(0);
    for p in preds {
        total += satisfaction_probability(p, partial)?;
    }
    Ok(total)
}

/// Fixes undecided literals in ascending order, each to the value with the
/// larger conditional expectation (0 on ties). Returns the total
/// assignment and the expectation before each step and after the last.
pub fn derandomize(
    preds: &[&Predicate],
    partial: &PartialAssignment,
) -> Result<(PartialAssignment, Vec<Rational>)> {
    let mut current = partial.clone();
    let mut trace = vec![expected_satisfied(preds.iter().copied(), &current)?];
    let order: Vec<usize> = current.undecided.iter().copied().collect();
    for l in order {
        let mut best: Option<(Rational, PartialAssignment)> = None;
        for v in [false, true] {
            let mut trial = current.clone();
            trial.decide(l, v);
            let e = expected_satisfied(preds.iter().copied(), &trial)?;
            if best.as_ref().map_or(true, |(b, _)| e > *b) {
                best = Some((e, trial));
            }
        }
        let (e, next) = best.expect("two candidates");
        trace.push(e);
        current = next;
    }
    Ok((current, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::SignedLiteral;
    use crate::oracle::brute_probability;
    use proptest::prelude::*;

    fn undecided(lits: &[usize]) -> PartialAssignment {
        PartialAssignment::new(Assignment::new(), lits.iter().copied().collect()).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn three_free_literals() {
        let p = Predicate::not2_literals(&[
            SignedLiteral::pos(0),
            SignedLiteral::neg(1),
            SignedLiteral::pos(2),
        ])
        .unwrap();
        let part = undecided(&[0, 1, 2]);
        let (base, dist) = margin_distribution(&p, &part).unwrap();
        assert_eq!(base, 0);
        assert_eq!(dist, vec![r(1, 8), r(3, 8), r(3, 8), r(1, 8)]);
        assert_eq!(satisfaction_probability(&p, &part).unwrap(), r(5, 8));
    }

    #[test]
    fn free_pair_and_single() {
        let p = Predicate::not2_literals(&[
            SignedLiteral::pos(0),
            SignedLiteral::pos(0),
            SignedLiteral::pos(1),
        ])
        .unwrap();
        let (_, dist) = margin_distribution(&p, &undecided(&[0, 1])).unwrap();
        assert_eq!(dist, vec![r(1, 4); 4]);
        assert_eq!(
            satisfaction_probability(&p, &undecided(&[0, 1])).unwrap(),
            r(3, 4)
        );
    }

    #[test]
    fn two_free_literals_with_settled_third() {
        let p = Predicate::not2(vec![
            Slot::Literal(SignedLiteral::pos(0)),
            Slot::Fixed(true),
            Slot::Literal(SignedLiteral::neg(1)),
        ])
        .unwrap();
        let (base, dist) = margin_distribution(&p, &undecided(&[0, 1])).unwrap();
        assert_eq!(base, 1);
        assert_eq!(dist, vec![r(1, 4), r(1, 2), r(1, 4)]);
        assert_eq!(
            satisfaction_probability(&p, &undecided(&[0, 1])).unwrap(),
            r(1, 2)
        );
    }

    #[test]
    fn oxr_free_special() {
        let p = Predicate::oxr_literals(
            SignedLiteral::pos(0),
            SignedLiteral::pos(1),
            SignedLiteral::pos(2),
        );
        let part = PartialAssignment::new(
            Assignment::from([(1, true), (2, true)]),
            BTreeSet::from([0]),
        )
        .unwrap();
        assert_eq!(satisfaction_probability(&p, &part).unwrap(), r(1, 2));
        assert_eq!(
            satisfaction_probability(&p, &undecided(&[0, 1, 2])).unwrap(),
            r(3, 4)
        );
    }

    #[test]
    fn unknown_literal_is_an_error() {
        let p = Predicate::not2_literals(&[SignedLiteral::pos(4)]).unwrap();
        assert_eq!(
            satisfaction_probability(&p, &undecided(&[0])),
            Err(Error::UnassignedVariable(4))
        );
        assert!(
            PartialAssignment::new(Assignment::from([(0, true)]), BTreeSet::from([0])).is_err()
        );
    }

    #[test]
    fn expectation_edge_cases() {
        assert_eq!(expected_satisfied([], &undecided(&[])).unwrap(), r(0, 1));
        let p = Predicate::not2_literals(&[SignedLiteral::pos(0), SignedLiteral::pos(1)]).unwrap();
        let decided =
            PartialAssignment::new(Assignment::from([(0, true), (1, true)]), BTreeSet::new())
                .unwrap();
        assert_eq!(expected_satisfied([&p], &decided).unwrap(), r(0, 1));
    }

    #[test]
    fn derandomize_prefers_satisfying_value() {
        // (l1, l2) with x2 = 1 needs x1 = 0; (~l1, 1) needs ~l1 false, i.e. x1 = 1
        let a = Predicate::not2_literals(&[SignedLiteral::pos(0), SignedLiteral::pos(1)]).unwrap();
        let b = Predicate::not2(vec![
            Slot::Literal(SignedLiteral::neg(0)),
            Slot::Fixed(true),
        ])
        .unwrap();
        let part =
            PartialAssignment::new(Assignment::from([(1, true)]), BTreeSet::from([0])).unwrap();
        let (out, trace) = derandomize(&[&a], &part).unwrap();
        assert_eq!(out.values[&0], false);
        assert_eq!(trace, vec![r(1, 2), r(1, 1)]);
        let (out, _) = derandomize(&[&b], &part).unwrap();
        assert_eq!(out.values[&0], true);
        // tie: both values satisfy one of the two
        let (out, _) = derandomize(&[&a, &b], &part).unwrap();
        assert_eq!(out.values[&0], false);
        assert!(out.is_total());
    }

    fn arb_slot() -> impl Strategy<Value = Slot> {
        prop_oneof![
            4 => (0usize..4, any::<bool>()).prop_map(|(l, n)| Slot::Literal(SignedLiteral { literal: l, negated: n })),
            1 => any::<bool>().prop_map(Slot::Fixed),
        ]
    }

    fn arb_predicate() -> impl Strategy<Value = Predicate> {
        prop_oneof![
            proptest::collection::vec(arb_slot(), 1..=3).prop_map(|s| Predicate::not2(s).unwrap()),
            (arb_slot(), arb_slot(), arb_slot()).prop_map(|(a, b, c)| Predicate::oxr(a, b, c)),
        ]
    }

    fn arb_partial() -> impl Strategy<Value = PartialAssignment> {
        proptest::collection::vec(prop_oneof![Just(None), any::<bool>().prop_map(Some)], 4)
            .prop_map(|v| {
                let mut part = PartialAssignment::default();
                for (l, s) in v.into_iter().enumerate() {
                    match s {
                        Some(x) => {
                            part.values.insert(l, x);
                        }
                        None => {
                            part.undecided.insert(l);
                        }
                    }
                }
                part
            })
    }

    proptest! {
        #[test]
        fn probability_matches_enumeration(p in arb_predicate(), part in arb_partial()) {
            prop_assert_eq!(
                satisfaction_probability(&p, &part).unwrap(),
                brute_probability(&p, &part.values, &part.undecided).unwrap()
            );
        }

        #[test]
        fn derandomization_never_loses_expectation(
            preds in proptest::collection::vec(arb_predicate(), 0..8),
            part in arb_partial(),
        ) {
            let refs: Vec<&Predicate> = preds.iter().collect();
            let (out, trace) = derandomize(&refs, &part).unwrap();
            prop_assert!(out.is_total());
            prop_assert!(trace.windows(2).all(|w| w[0] <= w[1]));
            let count = preds.iter().filter(|p| p.evaluate(&out.values).unwrap()).count();
            prop_assert_eq!(Rational::from_integer(count as i64), *trace.last().unwrap());
            prop_assert!(trace[0] <= *trace.last().unwrap());
        }
    }
}
