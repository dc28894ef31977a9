use super::{Action, CaseCode};
use crate::error::{Error, Result};
use crate::instance::{Predicate, Slot};

/// Case machine for one OXR predicate.
pub fn classify(p: &Predicate, id: usize) -> Result<Action> {
    let Predicate::Oxr(o) = p else {
        return Err(Error::Internal(format!(
            "predicate {id} is not an OXR predicate"
        )));
    };
    let (Slot::Literal(a), Slot::Literal(b)) = (o.sym[0], o.sym[1]) else {
        return Ok(Action::Pass);
    };
    if a.literal != b.literal {
        return Ok(Action::Pass);
    }
    if a != b {
        return Ok(Action::Remove(CaseCode::Oxr2));
    }
    // xor of identical terms is false, so the special term must hold
    Ok(match o.special {
        Slot::Literal(s) => Action::FixAndRemove {
            code: CaseCode::Oxr1,
            literal: s.literal,
            value: s.literal_value_for(true),
        },
        Slot::Fixed(true) => Action::Remove(CaseCode::Oxr1),
        Slot::Fixed(false) => {
            return Err(Error::Contradiction {
                id,
                message: "identical symmetric terms with a settled false special term".into(),
            })
        }
    })
}
