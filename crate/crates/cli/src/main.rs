//! `fmsys`: batch front end for proof checking, model evaluation,
//! submodel extraction and hereditarily finite sets.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 when an input
//! cannot be read or parsed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fmsys::henkin::FmrReport;
use fmsys::settheory::{membership_signature, write_collapse, SetTheoryError, VSET_CAP};
use fmsys::sexp::quote;
use fmsys::{
    build_vset, check_equivalence, check_proof, extract_submodel, mostowski_collapse, rst_audit, soundness_suite,
    Bounds, MembershipDigraph, Model, Proof, SampleProperty, SoundnessConfig, SystemSpec,
};

#[derive(Parser)]
#[command(name = "fmsys", version, about = "Formal systems over finite structures")]
struct Cli {
    /// Print extra statistics to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BoundArgs {
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    #[arg(long, default_value_t = 2)]
    max_degree: usize,
    #[arg(long, default_value_t = 1)]
    max_depth: usize,
}

impl From<BoundArgs> for Bounds {
    fn from(b: BoundArgs) -> Bounds {
        Bounds {
            max_rank: b.max_rank,
            max_degree: b.max_degree,
            max_depth: b.max_depth,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof against a system.
    CheckProof { system: PathBuf, proof: PathBuf },
    /// Print the truth value of the universal closure of a formula.
    Eval {
        system: PathBuf,
        model: PathBuf,
        formula: String,
    },
    /// Check that a model satisfies the basis axioms of a system.
    ValidateModel { system: PathBuf, model: PathBuf },
    /// Extract a bounded Henkin submodel and audit it against the host.
    Submodel {
        system: PathBuf,
        model: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Write `<out>.fmm` and `<out>.fmr` instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two models on every closed formula within the bounds.
    Equiv {
        system: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 1)]
        max_depth: usize,
    },
    /// Transitive collapse of a membership digraph.
    Collapse { digraph: PathBuf },
    /// Write the model of V_n over `in/2`.
    Vset {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the set-theoretic principles on a model over `in/2`.
    RstAudit {
        model: PathBuf,
        /// Extra subset-scheme property in `?y`; may be repeated.
        #[arg(long = "sample")]
        samples: Vec<String>,
    },
    /// Check random proofs for soundness in models of their systems.
    FuzzSoundness {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        proofs: usize,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 30)]
        max_steps: usize,
    },
}

/// Outcome of a command whose inputs were valid.
enum Status {
    Ok,
    Failed,
}

/// Input errors; everything wrapped here exits with status 2.
fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_system(path: &Path) -> Result<SystemSpec> {
    SystemSpec::parse(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_model(path: &Path, sys: &SystemSpec) -> Result<Model> {
    Model::parse(&read(path)?, &sys.symbols).with_context(|| format!("{}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::CheckProof { system, proof } => {
            let sys = load_system(&system)?;
            let proof = Proof::parse(&read(&proof)?, &sys.symbols).with_context(|| format!("{}", proof.display()))?;
            match check_proof(&sys, &proof) {
                Ok(()) => {
                    println!("(proof-ok (steps {}))", proof.len());
                    Ok(Status::Ok)
                }
                Err(v) => {
                    println!("(proof-rejected (step {}) (reason {}))", v.index + 1, quote(&v.error.to_string()));
                    Ok(Status::Failed)
                }
            }
        }
        Command::Eval { system, model, formula } => {
            let sys = load_system(&system)?;
            let m = load_model(&model, &sys)?;
            let f = sys.symbols.parse_formula(&formula).context("formula")?;
            let failures = m.validate(&sys)?;
            if !failures.is_empty() {
                print_failures(&failures);
                return Ok(Status::Failed);
            }
            println!("{}", m.is_valid(&f)?);
            Ok(Status::Ok)
        }
        Command::ValidateModel { system, model } => {
            let sys = load_system(&system)?;
            let m = load_model(&model, &sys)?;
            let failures = m.validate(&sys)?;
            print_failures(&failures);
            Ok(status(failures.is_empty()))
        }
        Command::Submodel {
            system,
            model,
            bounds,
            out,
        } => {
            let sys = load_system(&system)?;
            let m = load_model(&model, &sys)?;
            let res = extract_submodel(&m, &sys, bounds.into())?;
            if cli.verbose {
                eprintln!("{:?}", res.audit.stats);
            }
            let report = FmrReport(&res).to_string();
            match out {
                Some(stem) => {
                    write(&stem.with_extension("fmm"), &res.submodel.to_string())?;
                    write(&stem.with_extension("fmr"), &format!("{report}\n"))?;
                }
                None => println!("{}{report}", res.submodel),
            }
            Ok(status(res.audit.agrees() && res.validation.is_empty()))
        }
        Command::Equiv {
            system,
            a,
            b,
            max_degree,
            max_depth,
        } => {
            let sys = load_system(&system)?;
            let ma = load_model(&a, &sys)?;
            let mb = load_model(&b, &sys)?;
            let r = check_equivalence(&ma, &mb, &sys.symbols, max_degree, max_depth)?;
            let mut s = String::new();
            writeln!(s, "(equiv (max-degree {max_degree}) (max-depth {max_depth})")?;
            writeln!(s, "  (classes-checked {})", r.checked.len())?;
            write!(s, "  (disagreements {})", r.disagreements.len())?;
            for line in &r.disagreements {
                write!(
                    s,
                    "\n  (formula {} (a {}) (b {}))",
                    quote(&line.formula.to_string()),
                    line.left,
                    line.right
                )?;
            }
            println!("{s})");
            Ok(status(r.agrees()))
        }
        Command::Collapse { digraph } => {
            let g = MembershipDigraph::parse(&read(&digraph)?).with_context(|| format!("{}", digraph.display()))?;
            match mostowski_collapse(&g) {
                Ok(map) => {
                    println!("{}", write_collapse(&map));
                    Ok(Status::Ok)
                }
                Err(e @ (SetTheoryError::Cycle(_) | SetTheoryError::NotExtensional { .. })) => {
                    println!("(no-collapse {})", quote(&e.to_string()));
                    Ok(Status::Failed)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Vset { n, out } => {
            if n == 0 || n > VSET_CAP {
                bail!("n must be between 1 and {VSET_CAP}");
            }
            let m = build_vset(n)?;
            match out {
                Some(path) => write(&path, &m.to_string())?,
                None => print!("{m}"),
            }
            Ok(Status::Ok)
        }
        Command::RstAudit { model, samples } => {
            let symbols = membership_signature();
            let m = Model::parse(&read(&model)?, &symbols).with_context(|| format!("{}", model.display()))?;
            let mut props = SampleProperty::defaults();
            for s in &samples {
                props.push(SampleProperty::Formula(symbols.parse_formula(s).context("sample property")?));
            }
            let verdicts = match rst_audit(&m, &props) {
                Ok(v) => v,
                Err(e @ SetTheoryError::Disagreement { .. }) => {
                    println!("(rst-audit-error {})", quote(&e.to_string()));
                    return Ok(Status::Failed);
                }
                Err(e) => return Err(e.into()),
            };
            let mut s = String::from("(rst-audit");
            for v in &verdicts {
                write!(s, "\n  ({} (principle P{}) (holds {})", v.axiom.label, v.axiom.principle, v.holds)?;
                if !v.witnesses.is_empty() {
                    let ws: Vec<String> = v.witnesses.iter().map(|w| quote(w)).collect();
                    write!(s, " (witnesses {})", ws.join(" "))?;
                }
                s.push(')');
            }
            s.push_str("\n  (principles");
            for p in 1..=6 {
                let holds = verdicts.iter().filter(|v| v.axiom.principle == p).all(|v| v.holds);
                write!(s, " (P{p} {holds})")?;
            }
            println!("{s}))");
            Ok(Status::Ok)
        }
        Command::FuzzSoundness {
            seed,
            proofs,
            pairs,
            max_steps,
        } => {
            let cfg = SoundnessConfig {
                seed,
                pairs,
                proofs,
                max_steps,
                ..SoundnessConfig::default()
            };
            let r = soundness_suite(&cfg);
            print!(
                "(soundness (seed {seed}) (pairs {}) (proofs {}) (steps {}) (failures {})",
                r.pairs,
                r.proofs,
                r.steps,
                r.failures.len()
            );
            for f in &r.failures {
                print!("\n  (failure {})", quote(&format!("{f:?}")));
            }
            println!(")");
            Ok(status(r.failures.is_empty()))
        }
    }
}

fn print_failures(failures: &[fmsys::model::AxiomFailure]) {
    if failures.is_empty() {
        println!("(model-ok)");
        return;
    }
    print!("(model-invalid");
    for f in failures {
        print!("\n  {f}");
    }
    println!(")");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
