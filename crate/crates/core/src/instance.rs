//! Max Not-2 and Max OXR instances: data model, file format, evaluation and
//! a planted-satisfiable generator.
//!
//! Literal indices are 0-based in memory and 1-based in files. Predicate ids
//! are the 1-based position of the predicate in its source file and survive
//! tailoring unchanged.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Rational;

/// Truth values keyed by 0-based literal index.
pub type Assignment = BTreeMap<usize, bool>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Not2,
    Oxr,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Not2 => "not2",
            Kind::Oxr => "oxr",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "not2" => Ok(Kind::Not2),
            "oxr" => Ok(Kind::Oxr),
            other => Err(Error::InvalidParameter(format!("unknown kind `{other}`"))),
        }
    }
}

/// A literal in positive or negated form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLiteral {
    pub literal: usize,
    pub negated: bool,
}

impl SignedLiteral {
    pub fn pos(literal: usize) -> Self {
        SignedLiteral {
            literal,
            negated: false,
        }
    }

    pub fn neg(literal: usize) -> Self {
        SignedLiteral {
            literal,
            negated: true,
        }
    }

    /// Truth value of the signed literal when its literal is `x`.
    #[inline]
    pub fn truth(self, x: bool) -> bool {
        x != self.negated
    }

    /// Literal value that makes the signed literal take `truth`.
    #[inline]
    pub fn literal_value_for(self, truth: bool) -> bool {
        truth != self.negated
    }

    pub fn complement(self) -> Self {
        SignedLiteral {
            literal: self.literal,
            negated: !self.negated,
        }
    }

    /// 1-based signed file token.
    pub fn token(self) -> i64 {
        let v = self.literal as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for SignedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~l{}", self.literal + 1)
        } else {
            write!(f, "l{}", self.literal + 1)
        }
    }
}

/// One position of a predicate: a signed literal, or a term whose truth
/// value was settled by an earlier forced assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Literal(SignedLiteral),
    Fixed(bool),
}

impl Slot {
    pub fn literal(&self) -> Option<SignedLiteral> {
        match self {
            Slot::Literal(l) => Some(*l),
            Slot::Fixed(_) => None,
        }
    }

    /// Truth value under a lookup, `Ok(None)` when the literal is undecided.
    fn truth_with(&self, lookup: &impl Fn(usize) -> Option<bool>) -> Option<bool> {
        match self {
            Slot::Fixed(v) => Some(*v),
            Slot::Literal(l) => lookup(l.literal).map(|x| l.truth(x)),
        }
    }

    /// Replaces a literal by its settled truth value.
    pub fn substitute(&self, literal: usize, value: bool) -> Slot {
        match self {
            Slot::Literal(l) if l.literal == literal => Slot::Fixed(l.truth(value)),
            other => *other,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Literal(l) => write!(f, "{l}"),
            Slot::Fixed(v) => write!(f, "{}", *v as u8),
        }
    }
}

/// Satisfied unless exactly two of its one to three slots are true.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Not2Predicate {
    slots: Vec<Slot>,
}

impl Not2Predicate {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        if slots.is_empty() || slots.len() > 3 {
            return Err(Error::Arity(format!(
                "not-2 predicates take 1 to 3 slots, got {}",
                slots.len()
            )));
        }
        Ok(Not2Predicate { slots })
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }
}

/// `special OR (sym[0] XOR sym[1])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OxrPredicate {
    pub special: Slot,
    pub sym: [Slot; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    Not2(Not2Predicate),
    Oxr(OxrPredicate),
}

impl Predicate {
    pub fn not2(slots: Vec<Slot>) -> Result<Self> {
        Not2Predicate::new(slots).map(Predicate::Not2)
    }

    pub fn not2_literals(lits: &[SignedLiteral]) -> Result<Self> {
        Self::not2(lits.iter().map(|l| Slot::Literal(*l)).collect())
    }

    pub fn oxr(special: Slot, sym1: Slot, sym2: Slot) -> Self {
        Predicate::Oxr(OxrPredicate {
            special,
            sym: [sym1, sym2],
        })
    }

    pub fn oxr_literals(special: SignedLiteral, sym1: SignedLiteral, sym2: SignedLiteral) -> Self {
        Self::oxr(
            Slot::Literal(special),
            Slot::Literal(sym1),
            Slot::Literal(sym2),
        )
    }

    pub fn kind(&self) -> Kind {
        match self {
            Predicate::Not2(_) => Kind::Not2,
            Predicate::Oxr(_) => Kind::Oxr,
        }
    }

    /// Slots in file order (special position first for OXR).
    pub fn slots(&self) -> Vec<Slot> {
        match self {
            Predicate::Not2(p) => p.slots.clone(),
            Predicate::Oxr(p) => vec![p.special, p.sym[0], p.sym[1]],
        }
    }

    /// Same shape with every slot mapped through `f`.
    pub fn map_slots(&self, f: impl Fn(&Slot) -> Slot) -> Predicate {
        match self {
            Predicate::Not2(p) => Predicate::Not2(Not2Predicate {
                slots: p.slots.iter().map(&f).collect(),
            }),
            Predicate::Oxr(p) => Predicate::Oxr(OxrPredicate {
                special: f(&p.special),
                sym: [f(&p.sym[0]), f(&p.sym[1])],
            }),
        }
    }

    /// Distinct literals referenced, ascending.
    pub fn literals(&self) -> BTreeSet<usize> {
        self.slots()
            .iter()
            .filter_map(|s| s.literal().map(|l| l.literal))
            .collect()
    }

    pub fn mentions(&self, literal: usize) -> bool {
        self.slots()
            .iter()
            .any(|s| s.literal().is_some_and(|l| l.literal == literal))
    }

    /// Evaluates the predicate when every referenced literal is decided.
    pub fn eval_with(&self, lookup: impl Fn(usize) -> Option<bool>) -> Result<bool> {
        let truth = |s: &Slot| {
            s.truth_with(&lookup)
                .ok_or_else(|| Error::UnassignedVariable(s.literal().expect("literal").literal))
        };
        Ok(match self {
            Predicate::Not2(p) => {
                let mut total = 0;
                for s in &p.slots {
                    total += truth(s)? as u8;
                }
                total != 2
            }
            Predicate::Oxr(p) => truth(&p.special)? || (truth(&p.sym[0])? != truth(&p.sym[1])?),
        })
    }

    /// Satisfaction under a (possibly partial) assignment.
    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        self.eval_with(|l| x.get(&l).copied())
    }

    /// Satisfaction when literal `v` is bit `v` of `bits`.
    pub fn evaluate_bits(&self, bits: u64) -> bool {
        self.eval_with(|l| Some(bits >> l & 1 == 1))
            .expect("total assignment")
    }

    /// File tokens, or `None` if a slot holds a settled value.
    pub fn tokens(&self) -> Option<Vec<i64>> {
        self.slots()
            .iter()
            .map(|s| s.literal().map(SignedLiteral::token))
            .collect()
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Not2(p) => {
                write!(f, "(")?;
                for (i, s) in p.slots.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
            Predicate::Oxr(p) => write!(f, "{} | ({} ^ {})", p.special, p.sym[0], p.sym[1]),
        }
    }
}

/// A predicate with its stable identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub id: usize,
    pub predicate: Predicate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateInstance {
    kind: Kind,
    num_literals: usize,
    entries: Vec<Entry>,
}

impl PredicateInstance {
    /// Builds an instance, checking kind homogeneity, literal ranges and id
    /// uniqueness.
    pub fn new(kind: Kind, num_literals: usize, entries: Vec<Entry>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for e in &entries {
            if e.predicate.kind() != kind {
                return Err(Error::InvalidParameter(format!(
                    "predicate {} is not of kind {kind}",
                    e.id
                )));
            }
            if !ids.insert(e.id) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate predicate id {}",
                    e.id
                )));
            }
            if let Some(&l) = e.predicate.literals().iter().next_back() {
                if l >= num_literals {
                    return Err(Error::InvalidParameter(format!(
                        "predicate {} references literal {} of {num_literals}",
                        e.id,
                        l + 1
                    )));
                }
            }
        }
        Ok(PredicateInstance {
            kind,
            num_literals,
            entries,
        })
    }

    /// Numbers the predicates 1, 2, ... in order.
    pub fn from_predicates(kind: Kind, num_literals: usize, preds: Vec<Predicate>) -> Result<Self> {
        let entries = preds
            .into_iter()
            .enumerate()
            .map(|(i, predicate)| Entry {
                id: i + 1,
                predicate,
            })
            .collect();
        Self::new(kind, num_literals, entries)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn num_literals(&self) -> usize {
        self.num_literals
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Literals referenced by at least one predicate.
    pub fn active_literals(&self) -> BTreeSet<usize> {
        self.entries
            .iter()
            .flat_map(|e| e.predicate.literals())
            .collect()
    }

    pub fn count_satisfied(&self, x: &Assignment) -> Result<usize> {
        let mut n = 0;
        for e in &self.entries {
            n += e.predicate.evaluate(x)? as usize;
        }
        Ok(n)
    }

    /// Exact fraction of predicates satisfied by a total assignment.
    pub fn satisfied_fraction(&self, x: &Assignment) -> Result<Rational> {
        if self.entries.is_empty() {
            return Err(Error::EmptyInstance);
        }
        Ok(Rational::new(
            self.count_satisfied(x)? as i64,
            self.entries.len() as i64,
        ))
    }

    /// Bit-exact file serialization. Fails if a slot holds a settled value.
    pub fn serialize(&self) -> Result<String> {
        let mut out = format!(
            "p {} {} {}\n",
            self.kind,
            self.num_literals,
            self.entries.len()
        );
        for e in &self.entries {
            let tokens = e.predicate.tokens().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "predicate {} contains settled slots and has no file form",
                    e.id
                ))
            })?;
            let line: Vec<String> = tokens.iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    /// Parses the line-based instance format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(Kind, usize, usize)> = None;
        let mut preds = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let Some((kind, n, m)) = header else {
                header = Some(parse_header(line, line_no)?);
                continue;
            };
            if line.starts_with('p') {
                return Err(Error::parse(line_no, "duplicate header"));
            }
            if preds.len() == m {
                return Err(Error::parse(line_no, format!("more than {m} predicates")));
            }
            let lits = line
                .split_whitespace()
                .map(|tok| parse_token(tok, n, line_no))
                .collect::<Result<Vec<_>>>()?;
            let pred = match kind {
                Kind::Not2 => Predicate::not2_literals(&lits)
                    .map_err(|_| Error::parse(line_no, "not2 predicates take 1 to 3 literals"))?,
                Kind::Oxr => {
                    let [a, b, c] = lits[..] else {
                        return Err(Error::parse(
                            line_no,
                            "oxr predicates take exactly 3 literals",
                        ));
                    };
                    Predicate::oxr_literals(a, b, c)
                }
            };
            preds.push(pred);
        }
        let Some((kind, n, m)) = header else {
            return Err(Error::parse(text.lines().count().max(1), "missing header"));
        };
        if preds.len() != m {
            return Err(Error::parse(
                text.lines().count().max(1),
                format!("header promises {m} predicates, found {}", preds.len()),
            ));
        }
        Self::from_predicates(kind, n, preds)
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<(Kind, usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let ["p", kind, n, m] = parts[..] else {
        return Err(Error::parse(
            line_no,
            "expected `p <not2|oxr> <literals> <predicates>`",
        ));
    };
    let kind = kind
        .parse()
        .map_err(|_| Error::parse(line_no, format!("unknown kind `{kind}`")))?;
    let n = n
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad literal count `{n}`")))?;
    let m = m
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad predicate count `{m}`")))?;
    Ok((kind, n, m))
}

fn parse_token(tok: &str, n: usize, line_no: usize) -> Result<SignedLiteral> {
    let v: i64 = tok
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
    let idx = v.unsigned_abs() as usize;
    if v == 0 || idx > n {
        return Err(Error::parse(
            line_no,
            format!("literal `{tok}` outside 1..={n}"),
        ));
    }
    Ok(SignedLiteral {
        literal: idx - 1,
        negated: v < 0,
    })
}

fn random_signed<R: Rng>(rng: &mut R, n: usize) -> SignedLiteral {
    SignedLiteral {
        literal: rng.gen_range(0..n),
        negated: rng.gen(),
    }
}

/// Draws a uniformly random predicate shape of the given kind.
fn random_predicate<R: Rng>(rng: &mut R, kind: Kind, n: usize) -> Predicate {
    match kind {
        Kind::Not2 => {
            // Uniform over all 1-, 2- and 3-slot tuples: weight (2n)^k.
            let w = 2 * n as u64;
            let total = w + w * w + w * w * w;
            let pick = rng.gen_range(0..total);
            let arity = if pick < w {
                1
            } else if pick < w + w * w {
                2
            } else {
                3
            };
            let lits: Vec<_> = (0..arity).map(|_| random_signed(rng, n)).collect();
            Predicate::not2_literals(&lits).expect("arity in range")
        }
        Kind::Oxr => Predicate::oxr_literals(
            random_signed(rng, n),
            random_signed(rng, n),
            random_signed(rng, n),
        ),
    }
}

/// Random instance satisfied in full by a hidden planted assignment.
///
/// Each predicate is drawn uniformly over the kind's shapes and redrawn
/// until the planted assignment satisfies it.
pub fn generate_satisfiable(
    kind: Kind,
    num_literals: usize,
    num_predicates: usize,
    seed: u64,
) -> Result<(PredicateInstance, Assignment)> {
    if num_literals < 3 || num_predicates < 1 {
        return Err(Error::InvalidParameter(
            "generator needs at least 3 literals and 1 predicate".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planted: Assignment = (0..num_literals).map(|l| (l, rng.gen())).collect();
    let mut preds = Vec::with_capacity(num_predicates);
    while preds.len() < num_predicates {
        let p = random_predicate(&mut rng, kind, num_literals);
        if p.evaluate(&planted)? {
            preds.push(p);
        }
    }
    Ok((
        PredicateInstance::from_predicates(kind, num_literals, preds)?,
        planted,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assign(vals: &[bool]) -> Assignment {
        vals.iter().copied().enumerate().collect()
    }

    #[test]
    fn parse_not2() {
        let inst = PredicateInstance::parse("c demo\np not2 3 1\n1 2 -3\n").unwrap();
        assert_eq!(inst.kind(), Kind::Not2);
        let expected = Predicate::not2_literals(&[
            SignedLiteral::pos(0),
            SignedLiteral::pos(1),
            SignedLiteral::neg(2),
        ])
        .unwrap();
        assert_eq!(inst.entries()[0].predicate, expected);
        assert_eq!(inst.entries()[0].id, 1);
    }

    #[test]
    fn parse_oxr() {
        let inst = PredicateInstance::parse("p oxr 3 1\n-1 2 -3\n").unwrap();
        let expected = Predicate::oxr_literals(
            SignedLiteral::neg(0),
            SignedLiteral::pos(1),
            SignedLiteral::neg(2),
        );
        assert_eq!(inst.entries()[0].predicate, expected);
    }

    #[test]
    fn parse_errors() {
        let four = PredicateInstance::parse("p not2 4 1\n1 2 3 4\n").unwrap_err();
        assert!(matches!(four, Error::Parse { line: 2, .. }));
        assert!(matches!(
            PredicateInstance::parse("p not2 3 1\n1 2 4\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(PredicateInstance::parse("p oxr 3 1\n1 2\n").is_err());
        assert!(PredicateInstance::parse("p not2 3 1\n1 0 2\n").is_err());
        assert!(PredicateInstance::parse("p not2 3 2\n1 2 3\n").is_err());
        assert!(PredicateInstance::parse("1 2 3\n").is_err());
        assert!(PredicateInstance::parse("p xor 3 1\n1 2 3\n").is_err());
    }

    #[test]
    fn not2_evaluation() {
        let p = Predicate::not2_literals(&[
            SignedLiteral::pos(0),
            SignedLiteral::pos(1),
            SignedLiteral::neg(2),
        ])
        .unwrap();
        assert!(p.evaluate(&assign(&[true, true, false])).unwrap());
        assert!(!p.evaluate(&assign(&[true, true, true])).unwrap());
        assert_eq!(
            p.evaluate(&assign(&[true, true])),
            Err(Error::UnassignedVariable(2))
        );
    }

    #[test]
    fn oxr_evaluation() {
        let p = Predicate::oxr_literals(
            SignedLiteral::neg(0),
            SignedLiteral::pos(1),
            SignedLiteral::neg(2),
        );
        // special false; l2 = T, ~l3 = F, so the xor holds
        assert!(p.evaluate(&assign(&[true, true, true])).unwrap());
        assert!(!p.evaluate(&assign(&[true, true, false])).unwrap());
    }

    #[test]
    fn single_predicate_truth_table_counts() {
        let not2 = Predicate::not2_literals(&[
            SignedLiteral::pos(0),
            SignedLiteral::neg(1),
            SignedLiteral::pos(2),
        ])
        .unwrap();
        let oxr = Predicate::oxr_literals(
            SignedLiteral::pos(0),
            SignedLiteral::neg(1),
            SignedLiteral::pos(2),
        );
        // exactly two true terms in 3 of 8 rows; the xor and special both false in 2
        for (p, want) in [(not2, 5), (oxr, 6)] {
            let count = (0..8u64).filter(|&b| p.evaluate_bits(b)).count();
            assert_eq!(count, want);
        }
    }

    #[test]
    fn satisfied_fraction_cases() {
        let inst = PredicateInstance::parse("p not2 3 1\n1 2 3\n").unwrap();
        assert_eq!(
            inst.satisfied_fraction(&assign(&[false, false, false]))
                .unwrap(),
            Rational::from_integer(1)
        );
        let empty = PredicateInstance::from_predicates(Kind::Not2, 3, vec![]).unwrap();
        assert_eq!(
            empty.satisfied_fraction(&assign(&[false; 3])),
            Err(Error::EmptyInstance)
        );
    }

    #[test]
    fn generator_is_planted_and_deterministic() {
        for kind in [Kind::Not2, Kind::Oxr] {
            let (inst, planted) = generate_satisfiable(kind, 7, 40, 11).unwrap();
            assert_eq!(inst.count_satisfied(&planted).unwrap(), 40);
            assert_eq!(
                inst.satisfied_fraction(&planted).unwrap(),
                Rational::from_integer(1)
            );
            let (again, planted2) = generate_satisfiable(kind, 7, 40, 11).unwrap();
            assert_eq!(inst, again);
            assert_eq!(planted, planted2);
        }
        assert!(generate_satisfiable(Kind::Not2, 2, 5, 0).is_err());
    }

    #[test]
    fn serialization_rejects_settled_slots() {
        let p = Predicate::not2(vec![
            Slot::Fixed(true),
            Slot::Literal(SignedLiteral::pos(0)),
        ])
        .unwrap();
        let inst = PredicateInstance::from_predicates(Kind::Not2, 1, vec![p]).unwrap();
        assert!(inst.serialize().is_err());
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(
            kind in prop_oneof![Just(Kind::Not2), Just(Kind::Oxr)],
            n in 3usize..9,
            m in 1usize..20,
            seed in any::<u64>(),
        ) {
            let (inst, _) = generate_satisfiable(kind, n, m, seed).unwrap();
            let text = inst.serialize().unwrap();
            prop_assert_eq!(PredicateInstance::parse(&text).unwrap(), inst);
        }
    }
}
