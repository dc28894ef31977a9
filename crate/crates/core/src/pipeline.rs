//! End-to-end run: tailor, encode, solve, extract, derandomize, reinsert,
//! and score the final assignment against the original instance.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::{Field, LexOrder};
use crate::assign::{derandomize, expected_satisfied, PartialAssignment};
use crate::encode::encode;
use crate::error::{Error, Result};
use crate::instance::{Assignment, Kind, Predicate, PredicateInstance};
use crate::oracle::{brute_satisfying, ENUMERATION_CAP};
use crate::solver::{
    check_budget_inequality, extract_point, solve_fractional, threshold, validate_q, Strategy,
};
use crate::tailor::{check_two_fifths, reinsert_loners, tailor_instance};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub q: Rational,
    pub strategy: Strategy,
}

impl PipelineConfig {
    /// The kind's threshold plus 1/20.
    pub fn default_for(kind: Kind) -> Self {
        PipelineConfig {
            q: threshold(kind) + Rational::new(1, 20),
            strategy: Strategy::Greedy,
        }
    }
}

/// Guarantee flags; `None` when the flag's premise does not hold (q below
/// the kind's threshold).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub two_fifths: bool,
    pub budget: bool,
    pub inequality: Option<bool>,
    pub pr_all: bool,
    pub pd_half: bool,
    pub removed_all: bool,
    /// Satisfied count at least `|P_R| + ceil(|P_D| / 2) + removed`.
    pub final_count: bool,
    /// Tailored and original fractions at least the closing bound.
    pub final_bound: Option<bool>,
}

impl Flags {
    pub fn all_pass(&self) -> bool {
        self.two_fifths
            && self.budget
            && self.inequality != Some(false)
            && self.pr_all
            && self.pd_half
            && self.removed_all
            && self.final_count
            && self.final_bound != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    pub kind: Kind,
    pub prime: u64,
    pub num_literals: usize,
    pub original_predicates: usize,
    pub tailored_predicates: usize,
    pub tailored_literals: usize,
    pub fixed_literals: usize,
    pub removed_trivial: usize,
    pub loner_rounds: usize,
    pub loner_predicates: usize,
    pub q: Rational,
    pub eps: Rational,
    pub strategy: Strategy,
    pub total_polys: usize,
    pub max_degree: u32,
    pub ignored_vars: usize,
    pub ignored_polys: usize,
    pub basis_size: usize,
    pub p_r: usize,
    pub p_d: usize,
    pub expected_pd: Rational,
    pub satisfied_pr: usize,
    pub satisfied_pd: usize,
    pub satisfied_removed: usize,
    pub satisfied_total: usize,
    /// `5/8 + 5/4 eps` (Not-2) or `6/8 + 5/4 eps` (OXR).
    pub bound: Rational,
    pub fraction_tailored: Rational,
    pub fraction_original: Rational,
    pub assignment: Assignment,
    pub flags: Flags,
}

impl PipelineReport {
    /// 0 when every flag holds, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.flags.all_pass() {
            0
        } else {
            2
        }
    }

    /// Stable `key = value` text.
    pub fn render(&self) -> String {
        fn flag(b: bool) -> &'static str {
            if b {
                "true"
            } else {
                "false"
            }
        }
        fn opt(b: Option<bool>) -> &'static str {
            b.map_or("n/a", flag)
        }
        let bits: String = self
            .assignment
            .values()
            .map(|&v| if v { '1' } else { '0' })
            .collect();
        let f = &self.flags;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("kind", self.kind.to_string());
        kv("prime", self.prime.to_string());
        kv("literals", self.num_literals.to_string());
        kv("predicates", self.original_predicates.to_string());
        kv("tailored_predicates", self.tailored_predicates.to_string());
        kv("tailored_literals", self.tailored_literals.to_string());
        kv("fixed_literals", self.fixed_literals.to_string());
        kv("removed_trivial", self.removed_trivial.to_string());
        kv("loner_rounds", self.loner_rounds.to_string());
        kv("loner_predicates", self.loner_predicates.to_string());
        kv("q", ratio(self.q));
        kv("eps", ratio(self.eps));
        kv("strategy", self.strategy.to_string());
        kv("system_size", self.total_polys.to_string());
        kv("max_degree", self.max_degree.to_string());
        kv("ignored_vars", self.ignored_vars.to_string());
        kv("ignored_polys", self.ignored_polys.to_string());
        kv("basis_size", self.basis_size.to_string());
        kv("p_r", self.p_r.to_string());
        kv("p_d", self.p_d.to_string());
        kv("expected_p_d", ratio(self.expected_pd));
        kv("satisfied_p_r", self.satisfied_pr.to_string());
        kv("satisfied_p_d", self.satisfied_pd.to_string());
        kv("satisfied_removed", self.satisfied_removed.to_string());
        kv("satisfied_total", self.satisfied_total.to_string());
        kv("bound", ratio(self.bound));
        kv("fraction_tailored", ratio(self.fraction_tailored));
        kv("fraction_original", ratio(self.fraction_original));
        kv("assignment", bits);
        kv("flag_two_fifths", flag(f.two_fifths).into());
        kv("flag_budget", flag(f.budget).into());
        kv("flag_inequality", opt(f.inequality).into());
        kv("flag_p_r_all", flag(f.pr_all).into());
        kv("flag_p_d_half", flag(f.pd_half).into());
        kv("flag_removed_all", flag(f.removed_all).into());
        kv("flag_final_count", flag(f.final_count).into());
        kv("flag_final_bound", opt(f.final_bound).into());
        kv(
            "status",
            if f.all_pass() { "ok" } else { "violated" }.into(),
        );
        out
    }
}

/// `a/b`, always with a denominator.
pub fn ratio(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b` or an integer.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("`{s}` is not a rational a/b"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Runs every stage on `inst` with coefficients in `F`.
///
/// Instances with at most [`ENUMERATION_CAP`] literals are checked for
/// satisfiability first; larger ones are taken on trust.
pub fn run_pipeline<F: Field>(
    inst: &PredicateInstance,
    cfg: &PipelineConfig,
) -> Result<PipelineReport> {
    validate_q(cfg.q)?;
    if inst.is_empty() {
        return Err(Error::EmptyInstance);
    }
    if inst.num_literals() <= ENUMERATION_CAP && brute_satisfying(inst)?.is_none() {
        return Err(Error::NotSatisfiable);
    }
    let kind = inst.kind();

    let (tailored, rec) = tailor_instance(inst).map_err(|e| e.in_stage("tailor"))?;
    let sys = encode::<F>(&tailored).map_err(|e| e.in_stage("encode"))?;
    let ord = LexOrder::identity(sys.num_vars());
    let sol = solve_fractional(&sys, cfg.q, cfg.strategy, &ord).map_err(|e| e.in_stage("solve"))?;
    let point = extract_point(&sol, &ord).map_err(|e| e.in_stage("extract"))?;

    let values: Assignment = point
        .iter()
        .map(|(&v, &b)| (sys.literal_of_var(v), b))
        .collect();
    let undecided: BTreeSet<usize> = sol.ignored.iter().map(|&v| sys.literal_of_var(v)).collect();
    let partial =
        PartialAssignment::new(values, undecided).map_err(|e| e.in_stage("derandomize"))?;
    let by_id = |ids: &[usize]| -> Vec<&Predicate> {
        tailored
            .entries()
            .iter()
            .filter(|e| ids.contains(&e.id))
            .map(|e| &e.predicate)
            .collect()
    };
    let kept = by_id(&sol.kept_ids);
    let dropped = by_id(&sol.dropped_ids);
    if kept
        .iter()
        .any(|p| p.literals().iter().any(|l| partial.undecided.contains(l)))
    {
        return Err(
            Error::Internal("a surviving predicate has an ignored literal".into())
                .in_stage("derandomize"),
        );
    }
    let expected_pd = expected_satisfied(dropped.iter().copied(), &partial)
        .map_err(|e| e.in_stage("derandomize"))?;
    let (full, _) = derandomize(&dropped, &partial).map_err(|e| e.in_stage("derandomize"))?;
    let assignment =
        reinsert_loners(&full.values, &rec, inst).map_err(|e| e.in_stage("reinsert"))?;

    let count = |preds: &[&Predicate]| -> Result<usize> {
        let mut n = 0;
        for p in preds {
            n += p.evaluate(&assignment)? as usize;
        }
        Ok(n)
    };
    let satisfied_pr = count(&kept).map_err(|e| e.in_stage("evaluate"))?;
    let satisfied_pd = count(&dropped).map_err(|e| e.in_stage("evaluate"))?;
    let removed_ids: BTreeSet<usize> = rec
        .removed_trivial
        .iter()
        .map(|(id, _)| *id)
        .chain(rec.loner_predicate_ids())
        .collect();
    let removed: Vec<&Predicate> = inst
        .entries()
        .iter()
        .filter(|e| removed_ids.contains(&e.id))
        .map(|e| &e.predicate)
        .collect();
    let satisfied_removed = count(&removed).map_err(|e| e.in_stage("evaluate"))?;
    let satisfied_total = inst
        .count_satisfied(&assignment)
        .map_err(|e| e.in_stage("evaluate"))?;

    let eps = cfg.q - threshold(kind);
    let bound = match kind {
        Kind::Not2 => Rational::new(5, 8),
        Kind::Oxr => Rational::new(6, 8),
    } + Rational::new(5, 4) * eps;
    let fraction_tailored = if tailored.is_empty() {
        Rational::from_integer(1)
    } else {
        Rational::new((satisfied_pr + satisfied_pd) as i64, tailored.len() as i64)
    };
    let fraction_original = Rational::new(satisfied_total as i64, inst.len() as i64);
    let non_negative = eps >= Rational::from_integer(0);

    let flags = Flags {
        two_fifths: check_two_fifths(&tailored),
        budget: sol.within_budget(),
        inequality: check_budget_inequality(&sol, kind),
        pr_all: satisfied_pr == kept.len(),
        pd_half: satisfied_pd >= ceil_half(dropped.len()),
        removed_all: satisfied_removed == removed.len(),
        final_count: satisfied_total >= kept.len() + ceil_half(dropped.len()) + removed.len(),
        final_bound: non_negative.then(|| fraction_tailored >= bound && fraction_original >= bound),
    };

    Ok(PipelineReport {
        kind,
        prime: F::characteristic(),
        num_literals: inst.num_literals(),
        original_predicates: inst.len(),
        tailored_predicates: tailored.len(),
        tailored_literals: rec.remaining_literals.len(),
        fixed_literals: rec.fixed_literals.len(),
        removed_trivial: rec.removed_trivial.len(),
        loner_rounds: rec.loner_rounds.len(),
        loner_predicates: rec.loner_predicate_ids().count(),
        q: cfg.q,
        eps,
        strategy: cfg.strategy,
        total_polys: sys.len(),
        max_degree: sys.max_degree(),
        ignored_vars: sol.ignored.len(),
        ignored_polys: sol.ignored_polys,
        basis_size: sol.basis.len(),
        p_r: kept.len(),
        p_d: dropped.len(),
        expected_pd,
        satisfied_pr,
        satisfied_pd,
        satisfied_removed,
        satisfied_total,
        bound,
        fraction_tailored,
        fraction_original,
        assignment,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_satisfiable;
    use crate::Gf32003;

    #[test]
    fn ratio_round_trip() {
        assert_eq!(parse_ratio("3/4").unwrap(), Rational::new(3, 4));
        assert_eq!(parse_ratio("1").unwrap(), Rational::from_integer(1));
        assert_eq!(ratio(Rational::from_integer(1)), "1/1");
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn not2_greedy_run_passes() {
        let (inst, _) = generate_satisfiable(Kind::Not2, 10, 30, 5).unwrap();
        let cfg = PipelineConfig::default_for(Kind::Not2);
        assert_eq!(cfg.q, Rational::new(3, 4));
        let report = run_pipeline::<Gf32003>(&inst, &cfg).unwrap();
        assert!(report.flags.all_pass(), "{}", report.render());
        assert_eq!(report.exit_code(), 0);
        assert_eq!(report.assignment.len(), 10);
        assert_eq!(report.p_r + report.p_d, report.tailored_predicates);
    }

    #[test]
    fn oxr_run_passes_with_degree_two() {
        let (inst, _) = generate_satisfiable(Kind::Oxr, 10, 30, 9).unwrap();
        let report =
            run_pipeline::<Gf32003>(&inst, &PipelineConfig::default_for(Kind::Oxr)).unwrap();
        assert!(report.flags.all_pass(), "{}", report.render());
        assert!(report.max_degree <= 2);
    }

    #[test]
    fn empty_strategy_satisfies_everything() {
        let (inst, _) = generate_satisfiable(Kind::Not2, 9, 25, 2).unwrap();
        let cfg = PipelineConfig {
            q: Rational::new(3, 4),
            strategy: Strategy::Empty,
        };
        let report = run_pipeline::<Gf32003>(&inst, &cfg).unwrap();
        assert_eq!(report.fraction_tailored, Rational::from_integer(1));
        assert_eq!(report.fraction_original, Rational::from_integer(1));
    }

    #[test]
    fn unsatisfiable_input_is_rejected() {
        let inst = PredicateInstance::parse("p not2 1 2\n1 1 -1\n-1 -1 1\n").unwrap();
        let cfg = PipelineConfig::default_for(Kind::Not2);
        assert_eq!(
            run_pipeline::<Gf32003>(&inst, &cfg).unwrap_err(),
            Error::NotSatisfiable
        );
        let bad_q = PipelineConfig {
            q: Rational::new(5, 4),
            strategy: Strategy::Empty,
        };
        assert!(matches!(
            run_pipeline::<Gf32003>(&inst, &bad_q),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn low_q_disables_bound_flags() {
        let (inst, _) = generate_satisfiable(Kind::Oxr, 8, 20, 1).unwrap();
        let cfg = PipelineConfig {
            q: Rational::new(1, 2),
            strategy: Strategy::Greedy,
        };
        let report = run_pipeline::<Gf32003>(&inst, &cfg).unwrap();
        assert_eq!(report.flags.inequality, None);
        assert_eq!(report.flags.final_bound, None);
        assert!(report.render().contains("flag_final_bound = n/a\n"));
    }

    #[test]
    fn report_is_deterministic() {
        let (inst, _) = generate_satisfiable(Kind::Not2, 8, 20, 4).unwrap();
        let cfg = PipelineConfig {
            q: Rational::new(3, 4),
            strategy: Strategy::Random(17),
        };
        let a = run_pipeline::<Gf32003>(&inst, &cfg).unwrap().render();
        let b = run_pipeline::<Gf32003>(&inst, &cfg).unwrap().render();
        assert_eq!(a, b);
        assert!(a.starts_with("kind = not2\nprime = 32003\n"));
    }
}
