//! Polynomial encoding of tailored instances.
//!
//! Each remaining literal becomes a ring variable `y` with the literal
//! polynomial `y (1 - y)`; each predicate becomes one polynomial whose
//! boolean zeros are exactly the assignments satisfying it.

use std::collections::BTreeMap;

use crate::algebra::{Field, Polynomial};
use crate::error::{Error, Result};
use crate::instance::{Kind, Predicate, PredicateInstance, Slot};
use crate::oracle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem<F: Field> {
    kind: Kind,
    num_vars: usize,
    literal_polys: Vec<Polynomial<F>>,
    predicate_polys: Vec<(Polynomial<F>, usize)>,
    /// Ring variable of each tailored literal.
    var_of_literal: BTreeMap<usize, usize>,
    /// Inverse of `var_of_literal`, indexed by ring variable.
    literal_of_var: Vec<usize>,
}

impl<F: Field> PolynomialSystem<F> {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn literal_polys(&self) -> &[Polynomial<F>] {
        &self.literal_polys
    }

    /// Predicate polynomials with the id of the predicate they encode.
    pub fn predicate_polys(&self) -> &[(Polynomial<F>, usize)] {
        &self.predicate_polys
    }

    pub fn var_of_literal(&self, literal: usize) -> Option<usize> {
        self.var_of_literal.get(&literal).copied()
    }

    pub fn literal_of_var(&self, var: usize) -> usize {
        self.literal_of_var[var]
    }

    /// Tailored literals in ring-variable order.
    pub fn literals(&self) -> &[usize] {
        &self.literal_of_var
    }

    /// Literal polynomials first, then predicate polynomials.
    pub fn all_polynomials(&self) -> Vec<Polynomial<F>> {
        self.literal_polys
            .iter()
            .cloned()
            .chain(self.predicate_polys.iter().map(|(p, _)| p.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.literal_polys.len() + self.predicate_polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_degree(&self) -> u32 {
        self.all_polynomials()
            .iter()
            .map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn max_vars_per_polynomial(&self) -> usize {
        self.all_polynomials()
            .iter()
            .map(|p| p.support().len())
            .max()
            .unwrap_or(0)
    }

    /// One polynomial per line, literal polynomials first.
    pub fn to_text(&self) -> String {
        crate::algebra::text::format_system(&self.all_polynomials())
    }
}

/// Encodes a tailored Not-2 instance.
pub fn encode_not2<F: Field>(inst: &PredicateInstance) -> Result<PolynomialSystem<F>> {
    expect_kind(inst, Kind::Not2)?;
    encode(inst)
}

/// Encodes a tailored OXR instance.
pub fn encode_oxr<F: Field>(inst: &PredicateInstance) -> Result<PolynomialSystem<F>> {
    expect_kind(inst, Kind::Oxr)?;
    encode(inst)
}

/// Dispatches on the instance kind.
pub fn encode<F: Field>(inst: &PredicateInstance) -> Result<PolynomialSystem<F>> {
    let literal_of_var: Vec<usize> = inst.active_literals().into_iter().collect();
    let var_of_literal: BTreeMap<usize, usize> = literal_of_var
        .iter()
        .enumerate()
        .map(|(v, &l)| (l, v))
        .collect();
    let n = literal_of_var.len();
    let literal_polys = (0..n)
        .map(|v| {
            let y = Polynomial::var(n, v);
            &y - &(&y * &y)
        })
        .collect();
    let ctx = Ctx {
        n,
        var_of_literal: &var_of_literal,
    };
    let predicate_polys = inst
        .entries()
        .iter()
        .map(|e| {
            let p = match &e.predicate {
                Predicate::Not2(_) => ctx.not2_poly(&e.predicate, e.id)?,
                Predicate::Oxr(o) => ctx.oxr_poly(&o.special, &o.sym),
            };
            Ok((p, e.id))
        })
        .collect::<Result<_>>()?;
    Ok(PolynomialSystem {
        kind: inst.kind(),
        num_vars: n,
        literal_polys,
        predicate_polys,
        var_of_literal,
        literal_of_var,
    })
}

fn expect_kind(inst: &PredicateInstance, kind: Kind) -> Result<()> {
    if inst.kind() != kind {
        return Err(Error::InvalidParameter(format!(
            "expected a {kind} instance, got {}",
            inst.kind()
        )));
    }
    Ok(())
}

struct Ctx<'a> {
    n: usize,
    var_of_literal: &'a BTreeMap<usize, usize>,
}

impl Ctx<'_> {
    /// `y`, `1 - y` or a settled constant: 1 exactly where the term is true.
    fn term<F: Field>(&self, slot: &Slot) -> Polynomial<F> {
        match slot {
            Slot::Fixed(v) => Polynomial::from_i64(self.n, *v as i64),
            Slot::Literal(l) => {
                let y = Polynomial::var(self.n, self.var_of_literal[&l.literal]);
                if l.negated {
                    &Polynomial::one(self.n) - &y
                } else {
                    y
                }
            }
        }
    }

    /// Product of `(S - t)` over the acceptable totals `t` in `{0, 1, 3}`
    /// not exceeding the slot count, where `S` is the sum of the slot terms.
    /// Fails when no achievable total is acceptable.
    fn not2_poly<F: Field>(&self, p: &Predicate, id: usize) -> Result<Polynomial<F>> {
        let slots = p.slots();
        let sum = slots
            .iter()
            .fold(Polynomial::zero(self.n), |acc, s| &acc + &self.term(s));
        let lits: Vec<usize> = p.literals().into_iter().collect();
        let satisfiable = (0..1u32 << lits.len()).any(|bits| {
            let total: usize = slots
                .iter()
                .map(|s| match s {
                    Slot::Fixed(v) => *v as usize,
                    Slot::Literal(l) => {
                        let i = lits.iter().position(|&x| x == l.literal).unwrap();
                        l.truth(bits >> i & 1 == 1) as usize
                    }
                })
                .sum();
            total != 2
        });
        if !satisfiable {
            return Err(Error::EmptyAcceptableSet(id));
        }
        Ok([0, 1, 3]
            .into_iter()
            .filter(|&t| t <= slots.len() as i64)
            .fold(Polynomial::one(self.n), |acc, t| {
                &acc * &(&sum - &Polynomial::from_i64(self.n, t))
            }))
    }

    /// Special term times xor term; the special term vanishes where the
    /// special slot is true, the xor term where exactly one symmetric slot is.
    fn oxr_poly<F: Field>(&self, special: &Slot, sym: &[Slot; 2]) -> Polynomial<F> {
        let one = Polynomial::one(self.n);
        let first = match special {
            Slot::Fixed(v) => Polynomial::from_i64(self.n, !*v as i64),
            Slot::Literal(l) => {
                let y = Polynomial::var(self.n, self.var_of_literal[&l.literal]);
                if l.negated {
                    y
                } else {
                    &y - &one
                }
            }
        };
        let second = &(&self.term(&sym[0]) + &self.term(&sym[1])) - &one;
        &first * &second
    }
}

/// Whether the boolean zeros of `sys` are exactly the assignments
/// satisfying every predicate of `inst`.
pub fn check_variety_equivalence<F: Field>(
    sys: &PolynomialSystem<F>,
    inst: &PredicateInstance,
) -> Result<bool> {
    let variety = oracle::brute_variety(sys)?;
    let mut literals = sys.literals().to_vec();
    // literals outside the system would make the two sides incomparable
    if inst
        .active_literals()
        .iter()
        .any(|l| sys.var_of_literal(*l).is_none())
    {
        return Ok(false);
    }
    literals.truncate(sys.num_vars());
    Ok(variety == oracle::satisfying_set(inst, &literals)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_polynomial;
    use crate::instance::{generate_satisfiable, SignedLiteral};
    use crate::tailor::tailor_instance;
    use crate::Gf32003;
    use proptest::prelude::*;

    type P = Polynomial<Gf32003>;

    fn p(src: &str, n: usize) -> P {
        parse_polynomial(src, n, 1).unwrap()
    }

    fn sys(text: &str) -> PolynomialSystem<Gf32003> {
        encode(&PredicateInstance::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn not2_three_literals() {
        let s = sys("p not2 3 1\n1 2 -3\n");
        let sum = p("y1 + y2 + 1 - y3", 3);
        let expected = [0, 1, 3]
            .iter()
            .fold(P::one(3), |acc, &t| &acc * &(&sum - &P::from_i64(3, t)));
        assert_eq!(s.predicate_polys(), &[(expected, 1)]);
        assert_eq!(s.literal_polys()[0], p("y1 - y1^2", 3));
    }

    #[test]
    fn not2_with_settled_third() {
        // x3 fixed to 0 makes ~l3 a settled true term
        let pred = Predicate::not2(vec![
            Slot::Literal(SignedLiteral::pos(0)),
            Slot::Literal(SignedLiteral::pos(1)),
            Slot::Fixed(true),
        ])
        .unwrap();
        let inst = PredicateInstance::from_predicates(Kind::Not2, 3, vec![pred]).unwrap();
        let s: PolynomialSystem<Gf32003> = encode_not2(&inst).unwrap();
        let expected = &(&p("y1 + y2 + 1", 2) * &p("y1 + y2", 2)) * &p("y1 + y2 - 2", 2);
        assert_eq!(s.predicate_polys()[0].0, expected);
        assert_eq!(s.num_vars(), 2);
    }

    #[test]
    fn pair_predicate_totals() {
        // pair contributes 0 or 2, so the reachable totals are 0..=3
        let s = sys("p not2 2 1\n1 1 2\n");
        let sum = p("2*y1 + y2", 2);
        let expected = [0, 1, 3]
            .iter()
            .fold(P::one(2), |acc, &t| &acc * &(&sum - &P::from_i64(2, t)));
        assert_eq!(s.predicate_polys()[0].0, expected);
        assert_eq!(s.max_degree(), 3);
        let two = sys("p not2 2 1\n1 2\n");
        assert_eq!(
            two.predicate_polys()[0].0,
            &p("y1 + y2", 2) * &p("y1 + y2 - 1", 2)
        );
    }

    #[test]
    fn unsatisfiable_predicate_has_no_acceptable_total() {
        let pred = Predicate::not2(vec![Slot::Fixed(true), Slot::Fixed(true)]).unwrap();
        let inst = PredicateInstance::from_predicates(Kind::Not2, 1, vec![pred]).unwrap();
        assert_eq!(
            encode::<Gf32003>(&inst).unwrap_err(),
            Error::EmptyAcceptableSet(1)
        );
    }

    #[test]
    fn oxr_examples() {
        let s = sys("p oxr 3 1\n-1 2 -3\n");
        assert_eq!(s.predicate_polys()[0].0, p("y1*y2 - y1*y3", 3));

        let pred = Predicate::oxr(
            Slot::Fixed(false),
            Slot::Literal(SignedLiteral::pos(1)),
            Slot::Literal(SignedLiteral::neg(2)),
        );
        let inst = PredicateInstance::from_predicates(Kind::Oxr, 3, vec![pred]).unwrap();
        let s: PolynomialSystem<Gf32003> = encode_oxr(&inst).unwrap();
        assert_eq!(s.predicate_polys()[0].0, p("y1 - y2", 2));

        let s = sys("p oxr 3 1\n1 2 3\n");
        assert_eq!(
            s.predicate_polys()[0].0,
            &p("y1 - 1", 3) * &p("y2 + y3 - 1", 3)
        );
        let zeros = oracle::boolean_zeros(&[s.predicate_polys()[0].0.clone()], 3).unwrap();
        assert_eq!(zeros.len(), 6);
    }

    #[test]
    fn renaming_is_consecutive() {
        let s = sys("p not2 6 2\n2 4 6\n-2 -4 -6\n");
        assert_eq!(s.literals(), &[1, 3, 5]);
        assert_eq!(s.var_of_literal(3), Some(1));
        assert_eq!(s.var_of_literal(0), None);
        assert_eq!(s.len(), 5);
        assert!(s.to_text().starts_with("32002*y1^2 + y1\n"));
    }

    #[test]
    fn empty_instance_has_full_variety() {
        let inst = PredicateInstance::from_predicates(Kind::Not2, 3, vec![]).unwrap();
        let s: PolynomialSystem<Gf32003> = encode(&inst).unwrap();
        assert!(s.is_empty());
        assert!(check_variety_equivalence(&s, &inst).unwrap());
    }

    #[test]
    fn deleting_a_polynomial_breaks_equivalence() {
        let inst = PredicateInstance::parse("p not2 3 2\n1 2 3\n-1 -2 -3\n").unwrap();
        let mut s: PolynomialSystem<Gf32003> = encode(&inst).unwrap();
        assert!(check_variety_equivalence(&s, &inst).unwrap());
        s.predicate_polys.pop();
        assert!(!check_variety_equivalence(&s, &inst).unwrap());
    }

    proptest! {
        #[test]
        fn tailored_systems_match_their_instances(
            kind in prop_oneof![Just(Kind::Not2), Just(Kind::Oxr)],
            n in 3usize..=12,
            m in 1usize..40,
            seed in any::<u64>(),
        ) {
            let (inst, _) = generate_satisfiable(kind, n, m, seed).unwrap();
            let (t, _) = tailor_instance(&inst).unwrap();
            let s: PolynomialSystem<Gf32003> = encode(&t).unwrap();
            let bound = match kind { Kind::Not2 => 3, Kind::Oxr => 2 };
            prop_assert!(s.max_degree() <= bound);
            prop_assert!(s.max_vars_per_polynomial() <= 3);
            prop_assert_eq!(s.len(), t.len() + t.active_literals().len());
            prop_assert!(check_variety_equivalence(&s, &t).unwrap());
        }
    }
}
