//! The q-fractional Groebner basis solver: pick a set of ignored variables
//! within budget, compute a basis of what survives, and read off a point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, LexOrder, Polynomial};
use crate::encode::PolynomialSystem;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::instance::Kind;
use crate::Rational;

/// How the ignored variable set is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Ignore nothing.
    Empty,
    /// Repeatedly ignore the variable that costs the fewest extra
    /// polynomials, lowest index on ties.
    Greedy,
    /// Walk a seeded random permutation, keeping each variable that fits.
    Random(u64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Empty => f.write_str("empty"),
            Strategy::Greedy => f.write_str("greedy"),
            Strategy::Random(seed) => write!(f, "random({seed})"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// `empty`, `greedy`, `random` (seed 0) or `random:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empty" => Ok(Strategy::Empty),
            "greedy" => Ok(Strategy::Greedy),
            "random" => Ok(Strategy::Random(0)),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(Strategy::Random)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown strategy `{s}`"))),
        }
    }
}

/// Checks `0 <= q <= 1`.
pub fn validate_q(q: Rational) -> Result<()> {
    if q < Rational::from_integer(0) || q > Rational::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// `ignored * den <= (den - num) * total`, i.e. `ignored <= (1 - q) total`.
fn within_budget(ignored: usize, total: usize, q: Rational) -> bool {
    let (num, den) = (*q.numer() as i128, *q.denom() as i128);
    ignored as i128 * den <= (den - num) * total as i128
}

/// Indices of the polynomials mentioning at least one variable of `vars`.
fn touched<F: Field>(polys: &[Polynomial<F>], vars: &BTreeSet<usize>) -> BTreeSet<usize> {
    polys
        .iter()
        .enumerate()
        .filter(|(_, p)| vars.iter().any(|&v| p.mentions(v)))
        .map(|(i, _)| i)
        .collect()
}

/// Chooses an ignored variable set whose polynomials fit the budget
/// `(1 - q) |F|`.
pub fn select_ignore_set<F: Field>(
    sys: &PolynomialSystem<F>,
    q: Rational,
    strategy: Strategy,
) -> Result<BTreeSet<usize>> {
    validate_q(q)?;
    let polys = sys.all_polynomials();
    let total = polys.len();
    let incidence: Vec<BTreeSet<usize>> = (0..sys.num_vars())
        .map(|v| touched(&polys, &BTreeSet::from([v])))
        .collect();
    let mut chosen = BTreeSet::new();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    match strategy {
        Strategy::Empty => {}
        Strategy::Greedy => loop {
            let best = (0..sys.num_vars())
                .filter(|v| !chosen.contains(v))
                .map(|v| (incidence[v].difference(&covered).count(), v))
                .min();
            let Some((extra, v)) = best else { break };
            if !within_budget(covered.len() + extra, total, q) {
                break;
            }
            chosen.insert(v);
            covered.extend(incidence[v].iter().copied());
        },
        Strategy::Random(seed) => {
            let mut order: Vec<usize> = (0..sys.num_vars()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for v in order {
                let extra = incidence[v].difference(&covered).count();
                if within_budget(covered.len() + extra, total, q) {
                    chosen.insert(v);
                    covered.extend(incidence[v].iter().copied());
                }
            }
        }
    }
    Ok(chosen)
}

/// Result of solving the q-fractional problem on an encoded system.
#[derive(Clone, Debug)]
pub struct FractionalSolution<F: Field> {
    pub q: Rational,
    pub strategy: Strategy,
    /// Ignored ring variables.
    pub ignored: BTreeSet<usize>,
    /// Number of polynomials mentioning an ignored variable.
    pub ignored_polys: usize,
    pub total_polys: usize,
    /// Polynomials mentioning no ignored variable, in system order.
    pub surviving: Vec<Polynomial<F>>,
    /// Predicate ids whose polynomial survives.
    pub kept_ids: Vec<usize>,
    /// Predicate ids whose polynomial was dropped.
    pub dropped_ids: Vec<usize>,
    pub basis: GroebnerBasis<F>,
}

impl<F: Field> FractionalSolution<F> {
    pub fn within_budget(&self) -> bool {
        within_budget(self.ignored_polys, self.total_polys, self.q)
    }

    pub fn num_vars(&self) -> usize {
        self.basis.num_vars()
    }
}

/// Selects the ignored set and computes the Groebner basis of the
/// surviving polynomials.
pub fn solve_fractional<F: Field>(
    sys: &PolynomialSystem<F>,
    q: Rational,
    strategy: Strategy,
    ord: &LexOrder,
) -> Result<FractionalSolution<F>> {
    if ord.num_vars() != sys.num_vars() {
        return Err(Error::Arity(format!(
            "order over {} variables, system over {}",
            ord.num_vars(),
            sys.num_vars()
        )));
    }
    let ignored = select_ignore_set(sys, q, strategy)?;
    let polys = sys.all_polynomials();
    let dropped = touched(&polys, &ignored);
    let surviving: Vec<Polynomial<F>> = polys
        .iter()
        .enumerate()
        .filter(|(i, _)| !dropped.contains(i))
        .map(|(_, p)| p.clone())
        .collect();
    let (mut kept_ids, mut dropped_ids) = (Vec::new(), Vec::new());
    let offset = sys.literal_polys().len();
    for (k, (_, id)) in sys.predicate_polys().iter().enumerate() {
        if dropped.contains(&(offset + k)) {
            dropped_ids.push(*id);
        } else {
            kept_ids.push(*id);
        }
    }
    let basis = buchberger(&surviving, ord)?;
    Ok(FractionalSolution {
        q,
        strategy,
        ignored,
        ignored_polys: dropped.len(),
        total_polys: polys.len(),
        surviving,
        kept_ids,
        dropped_ids,
        basis,
    })
}

/// A common boolean zero of the surviving polynomials, by successive
/// elimination from the lex-smallest variable up, trying 0 before 1.
pub fn extract_point<F: Field>(
    sol: &FractionalSolution<F>,
    ord: &LexOrder,
) -> Result<BTreeMap<usize, bool>> {
    if !sol.basis.is_consistent() {
        return Err(Error::InconsistentSystem(
            "the surviving system has no common zero".into(),
        ));
    }
    let mut current = sol.basis.generators().to_vec();
    let mut point = BTreeMap::new();
    for &v in ord.priority().iter().rev() {
        if sol.ignored.contains(&v) {
            continue;
        }
        let mut next = None;
        for value in [false, true] {
            let c = if value { F::one() } else { F::zero() };
            let substituted: Vec<Polynomial<F>> =
                current.iter().map(|g| g.substitute(v, c)).collect();
            let gb = buchberger(&substituted, ord)?;
            if gb.is_consistent() {
                next = Some((value, gb));
                break;
            }
        }
        let Some((value, gb)) = next else {
            return Err(Error::InconsistentSystem(format!(
                "no value of y{} extends the partial point",
                v + 1
            )));
        };
        point.insert(v, value);
        current = gb.into_generators();
    }
    Ok(point)
}

/// The kind's threshold `q - eps`: 7/10 for Not-2, 4/5 for OXR.
pub fn threshold(kind: Kind) -> Rational {
    match kind {
        Kind::Not2 => Rational::new(7, 10),
        Kind::Oxr => Rational::new(4, 5),
    }
}

/// `|P_R| >= (base + 5/2 eps) |P|` with base 1/4 (Not-2) or 1/2 (OXR).
/// `None` when `eps < 0`, where the bound says nothing.
pub fn check_budget_inequality<F: Field>(sol: &FractionalSolution<F>, kind: Kind) -> Option<bool> {
    let eps = sol.q - threshold(kind);
    if eps < Rational::from_integer(0) {
        return None;
    }
    let base = match kind {
        Kind::Not2 => Rational::new(1, 4),
        Kind::Oxr => Rational::new(1, 2),
    };
    let p = (sol.kept_ids.len() + sol.dropped_ids.len()) as i64;
    let kept = Rational::from_integer(sol.kept_ids.len() as i64);
    Some(kept >= (base + Rational::new(5, 2) * eps) * p)
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::algebra::text::parse_polynomial;
    use crate::encode::encode;
    use crate::instance::{generate_satisfiable, PredicateInstance};
    use crate::oracle;
    use crate::tailor::tailor_instance;
    use crate::Gf32003;
    use proptest::prelude::*;
    use proptest::strategy::Strategy as _;

    type P = Polynomial<Gf32003>;

    fn sys(text: &str) -> PolynomialSystem<Gf32003> {
        encode(&PredicateInstance::parse(text).unwrap()).unwrap()
    }

    fn solution_from_basis(polys: Vec<P>, ord: &LexOrder) -> FractionalSolution<Gf32003> {
        let basis = buchberger(&polys, ord).unwrap();
        FractionalSolution {
            q: Rational::from_integer(1),
            strategy: Strategy::Empty,
            ignored: BTreeSet::new(),
            ignored_polys: 0,
            total_polys: polys.len(),
            surviving: polys,
            kept_ids: vec![],
            dropped_ids: vec![],
            basis,
        }
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("greedy".parse::<Strategy>().unwrap(), Strategy::Greedy);
        assert_eq!("random:7".parse::<Strategy>().unwrap(), Strategy::Random(7));
        assert!("best".parse::<Strategy>().is_err());
    }

    #[test]
    fn q_one_allows_nothing() {
        let s = sys("p not2 3 2\n1 2 3\n-1 -2 -3\n");
        for strategy in [Strategy::Empty, Strategy::Greedy, Strategy::Random(3)] {
            assert!(select_ignore_set(&s, Rational::from_integer(1), strategy)
                .unwrap()
                .is_empty());
        }
        assert!(select_ignore_set(&s, Rational::new(3, 2), Strategy::Greedy).is_err());
    }

    #[test]
    fn q_zero_lets_greedy_ignore_everything() {
        let s = sys("p not2 3 2\n1 2 3\n-1 -2 -3\n");
        let set = select_ignore_set(&s, Rational::from_integer(0), Strategy::Greedy).unwrap();
        assert_eq!(set, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn greedy_picks_cheapest_variable() {
        // y3 sits in its literal polynomial and one predicate; y1, y2 in three
        let s = sys("p not2 3 2\n1 2 3\n1 -2\n");
        assert_eq!(s.len(), 5);
        // budget (3/10) * 5 = 1.5 polynomials: nothing fits with two each
        let set = select_ignore_set(&s, Rational::new(7, 10), Strategy::Greedy).unwrap();
        assert!(set.is_empty());
        // budget 2.5: y3 costs 2
        let set = select_ignore_set(&s, Rational::new(1, 2), Strategy::Greedy).unwrap();
        assert_eq!(set, BTreeSet::from([2]));
    }

    #[test]
    fn extraction_examples() {
        let ord = LexOrder::identity(2);
        let polys = vec![
            parse_polynomial("y1 + y2 - 1", 2, 1).unwrap(),
            parse_polynomial("y2^2 - y2", 2, 1).unwrap(),
        ];
        let sol = solution_from_basis(polys, &ord);
        assert_eq!(
            extract_point(&sol, &ord).unwrap(),
            BTreeMap::from([(0, true), (1, false)])
        );

        let ord = LexOrder::identity(1);
        let sol = solution_from_basis(vec![parse_polynomial("y1^2 - y1", 1, 1).unwrap()], &ord);
        assert_eq!(
            extract_point(&sol, &ord).unwrap(),
            BTreeMap::from([(0, false)])
        );

        let sol = solution_from_basis(vec![P::one(1)], &ord);
        assert!(matches!(
            extract_point(&sol, &ord),
            Err(Error::InconsistentSystem(_))
        ));
    }

    #[test]
    fn budget_inequality_exact_case() {
        let ord = LexOrder::identity(1);
        let mut sol = solution_from_basis(vec![], &ord);
        sol.q = Rational::new(3, 4);
        sol.kept_ids = (1..=15).collect();
        sol.dropped_ids = (16..=40).collect();
        assert_eq!(check_budget_inequality(&sol, Kind::Not2), Some(true));
        sol.kept_ids.pop();
        sol.dropped_ids.push(41);
        assert_eq!(check_budget_inequality(&sol, Kind::Not2), Some(false));
        sol.q = Rational::new(1, 2);
        assert_eq!(check_budget_inequality(&sol, Kind::Not2), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn solutions_respect_budget_and_extract(
            kind in prop_oneof![Just(Kind::Not2), Just(Kind::Oxr)],
            n in 6usize..=10,
            m in 5usize..30,
            seed in any::<u64>(),
            q_num in 0i64..=20,
            strategy in prop_oneof![
                Just(Strategy::Empty),
                Just(Strategy::Greedy),
                (0u64..1000).prop_map(Strategy::Random)
            ],
        ) {
            let (inst, _) = generate_satisfiable(kind, n, m, seed).unwrap();
            let (t, _) = tailor_instance(&inst).unwrap();
            let s: PolynomialSystem<Gf32003> = encode(&t).unwrap();
            let q = Rational::new(q_num, 20);
            let ord = LexOrder::identity(s.num_vars());
            let sol = solve_fractional(&s, q, strategy, &ord).unwrap();
            prop_assert!(sol.within_budget());
            prop_assert_eq!(sol.kept_ids.len() + sol.dropped_ids.len(), t.len());
            prop_assert!(sol.basis.is_consistent());
            if let Some(ok) = check_budget_inequality(&sol, kind) {
                prop_assert!(ok);
            }
            let point = extract_point(&sol, &ord).unwrap();
            let zeros = oracle::boolean_zeros(&sol.surviving, s.num_vars()).unwrap();
            // ignored variables are free; any completion of the point is a zero
            let bits: u64 = point.iter().filter(|(_, &b)| b).map(|(&v, _)| 1u64 << v).sum();
            prop_assert!(zeros.contains(&bits));
        }
    }
}
