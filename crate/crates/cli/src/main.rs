use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fracgb::algebra::text::{format_system, parse_system};
use fracgb::algebra::{LexOrder, RunPrime, DEFAULT_PRIME};
use fracgb::encode::{check_variety_equivalence, encode};
use fracgb::groebner::buchberger;
use fracgb::instance::{generate_satisfiable, Kind, PredicateInstance};
use fracgb::oracle::{brute_max_fraction, ENUMERATION_CAP};
use fracgb::pipeline::{parse_ratio, ratio, run_pipeline, PipelineConfig};
use fracgb::solver::Strategy;
use fracgb::tailor::{check_property1, check_property2, check_two_fifths, tailor_instance};
use fracgb::{Error, GfRun};

#[derive(Parser)]
#[command(
    name = "fracgb",
    version,
    about = "Fractional Groebner basis reductions for Max Not-2 and Max OXR"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance satisfied by a planted assignment.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tailor an instance and print its polynomial system.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the tailoring record here.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Print the reduced lexicographic Groebner basis of a polynomial file.
    Gb {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exhaustive checks on a small instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Run the whole reduction and write a report.
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        /// Expected instance kind; checked against the file header.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Fraction `a/b`; defaults to the kind's threshold plus 1/20.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Coefficient field modulus.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
}

impl FieldArgs {
    fn install(&self) -> anyhow::Result<()> {
        RunPrime::install(self.prime)?;
        Ok(())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Not2,
    Oxr,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Not2 => Kind::Not2,
            KindArg::Oxr => Kind::Oxr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Empty,
    Greedy,
    Random,
}

/// Failure after a successful run: some guarantee did not hold.
#[derive(Debug)]
struct Violated;

impl std::fmt::Display for Violated {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("a guarantee check failed")
    }
}

impl std::error::Error for Violated {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Violated>() => {
            eprintln!("fracgb: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("fracgb: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Gen {
            kind,
            n,
            m,
            seed,
            out,
        } => {
            let (inst, _) = generate_satisfiable(kind.into(), n, m, seed)?;
            emit(out.as_deref(), &inst.serialize()?)
        }
        Command::Encode {
            input,
            field,
            out,
            record,
        } => {
            field.install()?;
            let inst = PredicateInstance::parse(&read(&input)?)?;
            let (tailored, rec) = tailor_instance(&inst)?;
            let sys = encode::<GfRun>(&tailored)?;
            if let Some(path) = record {
                emit(Some(&path), &rec.report())?;
            }
            emit(out.as_deref(), &sys.to_text())
        }
        Command::Gb { input, field, out } => {
            field.install()?;
            let (n, polys) = parse_system::<GfRun>(&read(&input)?)?;
            let gb = buchberger(&polys, &LexOrder::identity(n))?;
            emit(out.as_deref(), &format_system(gb.generators()))
        }
        Command::Verify { input, field } => {
            field.install()?;
            verify(&PredicateInstance::parse(&read(&input)?)?)
        }
        Command::Run {
            input,
            kind,
            q,
            strategy,
            seed,
            field,
            report,
        } => {
            field.install()?;
            let inst = PredicateInstance::parse(&read(&input)?)?;
            if let Some(k) = kind {
                let k: Kind = k.into();
                if k != inst.kind() {
                    bail!(
                        "--kind {k} does not match the {} instance in {}",
                        inst.kind(),
                        input.display()
                    );
                }
            }
            let mut cfg = PipelineConfig::default_for(inst.kind());
            if let Some(q) = q {
                cfg.q = parse_ratio(&q)?;
            }
            cfg.strategy = match strategy {
                StrategyArg::Empty => Strategy::Empty,
                StrategyArg::Greedy => Strategy::Greedy,
                StrategyArg::Random => Strategy::Random(seed),
            };
            let rep = run_pipeline::<GfRun>(&inst, &cfg)?;
            emit(report.as_deref(), &rep.render())?;
            if rep.exit_code() != 0 {
                return Err(Violated.into());
            }
            Ok(())
        }
    }
}

fn verify(inst: &PredicateInstance) -> anyhow::Result<()> {
    if inst.num_literals() > ENUMERATION_CAP {
        return Err(Error::TooLargeToEnumerate {
            count: inst.num_literals(),
            cap: ENUMERATION_CAP,
        }
        .into());
    }
    let (best, _) = brute_max_fraction(inst)?;
    println!("max_fraction = {}", ratio(best));
    if best != 1.into() {
        return Err(Error::NotSatisfiable.into());
    }
    let (tailored, rec) = tailor_instance(inst)?;
    let sys = encode::<GfRun>(&tailored)?;
    let checks = [
        ("property1", check_property1(&tailored)),
        ("property2", check_property2(&tailored)),
        ("two_fifths", check_two_fifths(&tailored)),
        ("variety", check_variety_equivalence(&sys, &tailored)?),
        (
            "accounted",
            tailored.len() + rec.removed_count() == inst.len(),
        ),
    ];
    let mut ok = true;
    for (name, pass) in checks {
        println!("{name} = {pass}");
        ok &= pass;
    }
    if ok {
        Ok(())
    } else {
        Err(Violated.into())
    }
}
