//! Instance tailoring: forced-value propagation through the per-kind case
//! machines, then rounds of loner-literal removal.
//!
//! Every removal is recorded so that a satisfying assignment of the
//! tailored instance can later be extended to the removed predicates.

mod not2;
mod oxr;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::instance::{Assignment, Entry, Kind, Predicate, PredicateInstance, Slot};

pub use not2::classify as classify_not2;
pub use oxr::classify as classify_oxr;

/// Which rule of the case machine fired on a predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseCode {
    C1,
    C2a,
    C2b,
    C2c,
    C2d,
    C3a,
    C3b,
    C3c,
    C3d,
    Oxr1,
    Oxr2,
}

impl CaseCode {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseCode::C1 => "1",
            CaseCode::C2a => "2a",
            CaseCode::C2b => "2b",
            CaseCode::C2c => "2c",
            CaseCode::C2d => "2d",
            CaseCode::C3a => "3a",
            CaseCode::C3b => "3b",
            CaseCode::C3c => "3c",
            CaseCode::C3d => "3d",
            CaseCode::Oxr1 => "OXR-1",
            CaseCode::Oxr2 => "OXR-2",
        }
    }
}

impl fmt::Display for CaseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a predicate left the instance before the loner rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RemovalReason {
    Case(CaseCode),
    /// Satisfied by already-settled slots alone.
    Settled,
}

impl fmt::Display for RemovalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RemovalReason::Case(c) => write!(f, "case-{c}"),
            RemovalReason::Settled => f.write_str("settled"),
        }
    }
}

/// What the case machine decided for one predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// No case applies.
    Pass,
    /// Keep the predicate unchanged.
    Keep(CaseCode),
    /// Remove the predicate; it holds under every extension.
    Remove(CaseCode),
    /// Force `literal := value`, then remove the predicate.
    FixAndRemove {
        code: CaseCode,
        literal: usize,
        value: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LonerRound {
    /// Loner literals removed in this round, ascending.
    pub literals: Vec<usize>,
    /// Ids of the predicates removed with them, ascending.
    pub predicates: Vec<usize>,
}

/// Replayable audit trail of tailoring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailoringRecord {
    pub kind: Kind,
    /// Permanently fixed literals and their forced values.
    pub fixed_literals: BTreeMap<usize, bool>,
    pub removed_trivial: Vec<(usize, RemovalReason)>,
    pub loner_rounds: Vec<LonerRound>,
    /// Case codes in firing order; a predicate is logged again only when
    /// its code changes between passes.
    pub case_log: Vec<(usize, CaseCode)>,
    /// Literals still present in the tailored instance.
    pub remaining_literals: BTreeSet<usize>,
}

impl TailoringRecord {
    pub fn loner_predicate_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.loner_rounds
            .iter()
            .flat_map(|r| r.predicates.iter().copied())
    }

    pub fn loner_literals(&self) -> impl Iterator<Item = usize> + '_ {
        self.loner_rounds
            .iter()
            .flat_map(|r| r.literals.iter().copied())
    }

    /// Number of predicates removed in any way.
    pub fn removed_count(&self) -> usize {
        self.removed_trivial.len() + self.loner_predicate_ids().count()
    }

    /// Human-readable report; the case log uses `id=<k> case=<code>` lines.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind = {}", self.kind);
        let fixed: Vec<String> = self
            .fixed_literals
            .iter()
            .map(|(l, v)| format!("l{}={}", l + 1, *v as u8))
            .collect();
        let _ = writeln!(out, "fixed = [{}]", fixed.join(" "));
        for (id, reason) in &self.removed_trivial {
            let _ = writeln!(out, "removed id={id} reason={reason}");
        }
        for (i, round) in self.loner_rounds.iter().enumerate() {
            let lits: Vec<String> = round
                .literals
                .iter()
                .map(|l| format!("l{}", l + 1))
                .collect();
            let ids: Vec<String> = round.predicates.iter().map(usize::to_string).collect();
            let _ = writeln!(
                out,
                "loner round={} literals=[{}] predicates=[{}]",
                i + 1,
                lits.join(" "),
                ids.join(" ")
            );
        }
        for (id, code) in &self.case_log {
            let _ = writeln!(out, "id={id} case={code}");
        }
        out
    }
}

/// Runs the Not-2 case machine and loner rounds.
pub fn tailor_not2(inst: &PredicateInstance) -> Result<(PredicateInstance, TailoringRecord)> {
    expect_kind(inst, Kind::Not2)?;
    tailor(inst, not2::classify)
}

/// Runs the OXR case machine and loner rounds.
pub fn tailor_oxr(inst: &PredicateInstance) -> Result<(PredicateInstance, TailoringRecord)> {
    expect_kind(inst, Kind::Oxr)?;
    tailor(inst, oxr::classify)
}

/// Dispatches on the instance kind.
pub fn tailor_instance(inst: &PredicateInstance) -> Result<(PredicateInstance, TailoringRecord)> {
    match inst.kind() {
        Kind::Not2 => tailor_not2(inst),
        Kind::Oxr => tailor_oxr(inst),
    }
}

fn expect_kind(inst: &PredicateInstance, kind: Kind) -> Result<()> {
    if inst.kind() == kind {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "expected a {kind} instance, got {}",
            inst.kind()
        )))
    }
}

/// Outcome of the settled-slot check that precedes the case machine.
enum Settled {
    Open,
    Satisfied,
    Violated,
}

fn settled_state(p: &Predicate) -> Settled {
    let slots = p.slots();
    if slots.iter().all(|s| matches!(s, Slot::Fixed(_))) {
        return match p.eval_with(|_| None) {
            Ok(true) => Settled::Satisfied,
            _ => Settled::Violated,
        };
    }
    if let Predicate::Oxr(o) = p {
        // Settled slots alone already make the predicate true.
        let special = matches!(o.special, Slot::Fixed(true));
        let xor = matches!(o.sym, [Slot::Fixed(a), Slot::Fixed(b)] if a != b);
        if special || xor {
            return Settled::Satisfied;
        }
    }
    Settled::Open
}

fn tailor(
    inst: &PredicateInstance,
    classify: fn(&Predicate, usize) -> Result<Action>,
) -> Result<(PredicateInstance, TailoringRecord)> {
    let mut kept: Vec<Entry> = inst.entries().to_vec();
    kept.sort_by_key(|e| e.id);
    let mut fixed = BTreeMap::new();
    let mut removed_trivial = Vec::new();
    let mut case_log: Vec<(usize, CaseCode)> = Vec::new();
    let mut last_code: BTreeMap<usize, CaseCode> = BTreeMap::new();
    let mut log = |id: usize, code: CaseCode, log: &mut Vec<(usize, CaseCode)>| {
        if last_code.insert(id, code) != Some(code) {
            log.push((id, code));
        }
    };

    // Passes in ascending id order until nothing changes.
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < kept.len() {
            let id = kept[i].id;
            match settled_state(&kept[i].predicate) {
                Settled::Satisfied => {
                    removed_trivial.push((id, RemovalReason::Settled));
                    kept.remove(i);
                    changed = true;
                    continue;
                }
                Settled::Violated => {
                    return Err(Error::Contradiction {
                        id,
                        message: "every slot is settled and the predicate is false".into(),
                    })
                }
                Settled::Open => {}
            }
            match classify(&kept[i].predicate, id)? {
                Action::Pass => i += 1,
                Action::Keep(code) => {
                    log(id, code, &mut case_log);
                    i += 1;
                }
                Action::Remove(code) => {
                    log(id, code, &mut case_log);
                    removed_trivial.push((id, RemovalReason::Case(code)));
                    kept.remove(i);
                    changed = true;
                }
                Action::FixAndRemove {
                    code,
                    literal,
                    value,
                } => {
                    log(id, code, &mut case_log);
                    removed_trivial.push((id, RemovalReason::Case(code)));
                    kept.remove(i);
                    fixed.insert(literal, value);
                    for e in kept.iter_mut() {
                        e.predicate = e.predicate.map_slots(|s| s.substitute(literal, value));
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Loner rounds.
    let mut remaining: BTreeSet<usize> = (0..inst.num_literals())
        .filter(|l| !fixed.contains_key(l))
        .collect();
    let mut loner_rounds = Vec::new();
    loop {
        let mut occurrences: BTreeMap<usize, usize> = remaining.iter().map(|&l| (l, 0)).collect();
        for e in &kept {
            for l in e.predicate.literals() {
                *occurrences
                    .get_mut(&l)
                    .expect("kept predicates use remaining literals") += 1;
            }
        }
        let loners: BTreeSet<usize> = occurrences
            .into_iter()
            .filter_map(|(l, c)| (c <= 1).then_some(l))
            .collect();
        if loners.is_empty() {
            break;
        }
        let mut ids = Vec::new();
        kept.retain(|e| {
            let hit = e.predicate.literals().iter().any(|l| loners.contains(l));
            if hit {
                ids.push(e.id);
            }
            !hit
        });
        for l in &loners {
            remaining.remove(l);
        }
        loner_rounds.push(LonerRound {
            literals: loners.into_iter().collect(),
            predicates: ids,
        });
    }

    let tailored = PredicateInstance::new(inst.kind(), inst.num_literals(), kept)?;
    let record = TailoringRecord {
        kind: inst.kind(),
        fixed_literals: fixed,
        removed_trivial,
        loner_rounds,
        case_log,
        remaining_literals: remaining,
    };
    Ok((tailored, record))
}

/// Extends an assignment of the tailored literals to the loner literals,
/// round by round in reverse removal order, then merges the fixed values.
///
/// Each loner takes the smallest value that still lets its predicate be
/// satisfied by some choice of the loners not yet placed.
pub fn reinsert_loners(
    partial: &Assignment,
    rec: &TailoringRecord,
    original: &PredicateInstance,
) -> Result<Assignment> {
    let mut x = partial.clone();
    for (&l, &v) in &rec.fixed_literals {
        x.insert(l, v);
    }
    let by_id: BTreeMap<usize, &Predicate> = original
        .entries()
        .iter()
        .map(|e| (e.id, &e.predicate))
        .collect();
    for round in rec.loner_rounds.iter().rev() {
        let preds: Vec<&Predicate> = round
            .predicates
            .iter()
            .map(|id| {
                by_id
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::Internal(format!("unknown predicate id {id}")))
            })
            .collect::<Result<_>>()?;
        for &lit in &round.literals {
            let owner = preds.iter().find(|p| p.mentions(lit));
            let value = match owner {
                None => false,
                Some(p) => [false, true]
                    .into_iter()
                    .find(|&v| {
                        let mut trial = x.clone();
                        trial.insert(lit, v);
                        completable(p, &trial)
                    })
                    .ok_or_else(|| {
                        Error::Internal(format!("no value of loner l{} satisfies {p}", lit + 1))
                    })?,
            };
            x.insert(lit, value);
        }
    }
    for l in 0..original.num_literals() {
        if !x.contains_key(&l) {
            return Err(Error::UnassignedVariable(l));
        }
    }
    Ok(x)
}

/// Whether some completion of the predicate's unassigned literals
/// satisfies it.
fn completable(p: &Predicate, x: &Assignment) -> bool {
    let open: Vec<usize> = p
        .literals()
        .into_iter()
        .filter(|l| !x.contains_key(l))
        .collect();
    (0..1u32 << open.len()).any(|bits| {
        p.eval_with(|l| {
            x.get(&l).copied().or_else(|| {
                open.iter()
                    .position(|&o| o == l)
                    .map(|i| bits >> i & 1 == 1)
            })
        })
        .unwrap_or(false)
    })
}

/// `5 |P| >= 2 (|P| + |L|)` with `L` the literals the instance references.
pub fn check_two_fifths(inst: &PredicateInstance) -> bool {
    let p = inst.len();
    let l = inst.active_literals().len();
    5 * p >= 2 * (p + l)
}

/// Not-2: a predicate repeating a literal is an identical pair plus either
/// a slot on another literal or a settled slot. OXR: the symmetric slots
/// do not share a literal.
pub fn check_property1(inst: &PredicateInstance) -> bool {
    inst.entries().iter().all(|e| match &e.predicate {
        Predicate::Not2(p) => not2::has_admissible_form(p.slots()),
        Predicate::Oxr(p) => match (p.sym[0], p.sym[1]) {
            (Slot::Literal(a), Slot::Literal(b)) => a.literal != b.literal,
            _ => true,
        },
    })
}

/// Every referenced literal occurs in at least two predicates.
pub fn check_property2(inst: &PredicateInstance) -> bool {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for e in inst.entries() {
        for l in e.predicate.literals() {
            *counts.entry(l).or_default() += 1;
        }
    }
    counts.values().all(|&c| c >= 2)
}
