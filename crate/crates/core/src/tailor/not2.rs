use super::{Action, CaseCode};
use crate::error::{Error, Result};
use crate::instance::{Predicate, SignedLiteral, Slot};

/// Finds two slots on the same literal, preferring an identical pair.
/// Returns their positions.
fn repeated_pair(slots: &[Slot]) -> Option<(usize, usize)> {
    let pairs = || (0..slots.len()).flat_map(|i| (i + 1..slots.len()).map(move |j| (i, j)));
    let same = |(i, j): (usize, usize), identical: bool| match (slots[i], slots[j]) {
        (Slot::Literal(a), Slot::Literal(b)) => {
            a.literal == b.literal && (!identical || a.negated == b.negated)
        }
        _ => false,
    };
    pairs()
        .find(|&ij| same(ij, true))
        .or_else(|| pairs().find(|&ij| same(ij, false)))
}

/// Case machine for one Not-2 predicate.
pub fn classify(p: &Predicate, id: usize) -> Result<Action> {
    let slots = p.slots();
    let Some((i, j)) = repeated_pair(&slots) else {
        return Ok(Action::Pass);
    };
    let (a, b) = (slots[i].literal().unwrap(), slots[j].literal().unwrap());
    let third = (0..slots.len())
        .find(|&k| k != i && k != j)
        .map(|k| slots[k]);

    if a == b {
        // identical pair
        let fix_pair_false = |code| Action::FixAndRemove {
            code,
            literal: a.literal,
            value: a.literal_value_for(false),
        };
        return Ok(match third {
            None => fix_pair_false(CaseCode::C2b),
            Some(Slot::Literal(c)) if c == a => Action::Remove(CaseCode::C1),
            // third is the complement: pair false leaves exactly one true
            Some(Slot::Literal(c)) if c.literal == a.literal => fix_pair_false(CaseCode::C2a),
            Some(Slot::Literal(_)) => Action::Keep(CaseCode::C2c),
            Some(Slot::Fixed(_)) => Action::Keep(CaseCode::C2d),
        });
    }

    // opposing pair contributes exactly one true term
    Ok(match third {
        None => Action::Remove(CaseCode::C3d),
        Some(Slot::Literal(c)) => {
            debug_assert_ne!(c.literal, a.literal, "handled as an identical pair");
            Action::FixAndRemove {
                code: CaseCode::C3b,
                literal: c.literal,
                value: c.literal_value_for(false),
            }
        }
        Some(Slot::Fixed(false)) => Action::Remove(CaseCode::C3c),
        Some(Slot::Fixed(true)) => {
            return Err(Error::Contradiction {
                id,
                message: "opposing pair with a settled true third always has two true terms".into(),
            })
        }
    })
}

/// Property 1 shape check: a repeated literal only as an identical pair
/// whose third slot is another literal or settled.
pub(super) fn has_admissible_form(slots: &[Slot]) -> bool {
    let Some((i, j)) = repeated_pair(slots) else {
        return true;
    };
    let a: SignedLiteral = slots[i].literal().unwrap();
    if Some(a) != slots[j].literal() {
        return false;
    }
    match (0..slots.len())
        .find(|&k| k != i && k != j)
        .map(|k| slots[k])
    {
        Some(Slot::Literal(c)) => c.literal != a.literal,
        Some(Slot::Fixed(_)) => true,
        None => false,
    }
}
