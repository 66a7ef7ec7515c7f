use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use supcone::formulas::{Mode, SGrid};
use supcone::gen::Gen;
use supcone::io::{parse_instance, print_instance, render, Format, InstanceFile, MemberSpec, Record, Summary};
use supcone::num::{parse_rational, Rational};
use supcone::optimality::auto_mode;
use supcone::parallel::Execution;
use supcone::suite::{self, default_eps, try_run_case, Case};
use supcone::verify::Mutation;
use supcone::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "supcone", version, about = "Exact normal cones of sublevel sets of supremum functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Human, global = true)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Evaluate work items one at a time.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args, Debug, Clone)]
struct Knobs {
    /// Comma-separated ε list, overriding the file.
    #[arg(long, value_delimiter = ',')]
    epsilon: Vec<String>,
    /// `BASE:MIN:MAX` for a geometric grid or `v1,v2,...` for explicit values.
    #[arg(long)]
    s_grid: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    ExactAffine,
    Sampled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MutationArg {
    None,
    SpuriousRay,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Affine,
    MaxAffine,
    Dom,
    Qc,
    Program,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal cone to [sup f_t ≤ 0] by the formula, compared with the oracle.
    NormalCone {
        file: PathBuf,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// Normal cone to the domain of the supremum.
    DomCone {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        epsilon: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Normal cone to a quasi-convex sublevel set; needs closure evidence in the file.
    Qc {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        epsilon: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Optimality of the candidate point of a convex or quasi-convex program.
    CheckOptimal {
        file: PathBuf,
        #[command(flatten)]
        knobs: Knobs,
        /// Directions per member for the quasi-convex outer cone (file value, else 5).
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Optimality in a linear semi-infinite program with a residual table.
    CheckSip {
        file: PathBuf,
        #[arg(long)]
        epsilon: Option<String>,
        /// Comma-separated refinement levels, overriding the file.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Runs the curated or a seeded random suite.
    Suite {
        #[command(subcommand)]
        which: SuiteCmd,
        #[arg(long, value_enum, default_value_t = MutationArg::None, hide = true, global = true)]
        mutate: MutationArg,
        #[command(flatten)]
        output: Output,
    },
    /// Emits a seeded random instance file with a feasible query point.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        members: usize,
        #[arg(long, value_enum, default_value_t = GenKind::Affine)]
        kind: GenKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    Curated,
    Random {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
    },
}

/// Failures that end the run before a report exists.
enum Abort {
    Input(anyhow::Error),
    Refused(anyhow::Error),
}

impl From<anyhow::Error> for Abort {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Refused(_)) => Abort::Refused(e),
            _ => Abort::Input(e),
        }
    }
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        Abort::from(anyhow::Error::new(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Abort::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Abort::Refused(e)) => {
            eprintln!("inconclusive: {e:#}");
            ExitCode::from(EXIT_REFUSED)
        }
    }
}

fn run(command: Command) -> Result<u8, Abort> {
    match command {
        Command::NormalCone { file, knobs, output } => {
            let f = load(&file)?;
            let family = f.sup_family()?;
            let mode = match knobs.mode {
                Some(ModeArg::ExactAffine) => Mode::ExactAffine,
                Some(ModeArg::Sampled) => Mode::Sampled,
                None => f.mode().unwrap_or_else(|| auto_mode(&family)),
            };
            let grid = match &knobs.s_grid {
                Some(s) => parse_grid(s)?,
                None => f.grid()?,
            };
            let case = Case::Sublevel {
                id: f.id.clone(),
                x: f.point()?,
                eps: eps_list(&knobs.epsilon, &f)?,
                family,
                grid,
                mode,
                require_equal: mode == Mode::ExactAffine,
            };
            emit(&output, &run_one(&case, &output)?)
        }
        Command::DomCone { file, epsilon, output } => {
            let f = load(&file)?;
            let case = Case::Dom {
                id: f.id.clone(),
                family: f.sup_family()?,
                x: f.point()?,
                eps: eps_list(&epsilon, &f)?,
                policy: f.alpha_policy(),
            };
            emit(&output, &run_one(&case, &output)?)
        }
        Command::Qc { file, epsilon, output } => {
            let f = load(&file)?;
            let case = Case::Qc {
                id: f.id.clone(),
                family: f.qc_family()?,
                x: f.point()?,
                eps: eps_list(&epsilon, &f)?,
                evidence: f.evidence()?,
            };
            emit(&output, &run_one(&case, &output)?)
        }
        Command::CheckOptimal {
            file,
            knobs,
            samples,
            output,
        } => {
            let f = load(&file)?;
            let eps = single_eps(knobs.epsilon.first(), &f)?;
            let qc = f.members.iter().any(|m| matches!(m, MemberSpec::QcSublevel { .. } | MemberSpec::SmoothQc { .. }));
            let case = if qc {
                Case::QcOptimal {
                    id: f.id.clone(),
                    program: f.qc_program()?,
                    eps,
                    samples: samples.or(f.samples).unwrap_or(5),
                    expected: None,
                }
            } else {
                Case::Optimal {
                    id: f.id.clone(),
                    program: f.program()?,
                    eps,
                    grid: match &knobs.s_grid {
                        Some(s) => parse_grid(s)?,
                        None => f.grid()?,
                    },
                    expected: None,
                }
            };
            emit(&output, &run_one(&case, &output)?)
        }
        Command::CheckSip {
            file,
            epsilon,
            levels,
            output,
        } => {
            let f = load(&file)?;
            let (instance, file_levels) = f.sip()?;
            let case = Case::Sip {
                id: f.id.clone(),
                instance,
                eps: single_eps(epsilon.as_ref(), &f)?,
                levels: if levels.is_empty() { file_levels } else { levels },
                expected: None,
            };
            emit(&output, &run_one(&case, &output)?)
        }
        Command::Suite { which, mutate, output } => {
            let cases = match which {
                SuiteCmd::Curated => suite::curated(),
                SuiteCmd::Random { seed, count, dims } => {
                    if dims.is_empty() || dims.contains(&0) {
                        return Err(Abort::Input(anyhow::anyhow!("--dims must list positive dimensions")));
                    }
                    suite::random(seed, count, &dims)
                }
            };
            let mutation = match mutate {
                MutationArg::None => Mutation::None,
                MutationArg::SpuriousRay => Mutation::SpuriousRay,
            };
            emit(&output, &suite::run_cases(&cases, mutation, execution(&output)))
        }
        Command::Gen {
            seed,
            dim,
            members,
            kind,
            out,
        } => {
            if dim == 0 || members == 0 {
                return Err(Abort::Input(anyhow::anyhow!("--dim and --members must be positive")));
            }
            let text = print_instance(&generate(seed, dim, members, kind));
            write_out(out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn generate(seed: u64, dim: usize, members: usize, kind: GenKind) -> InstanceFile {
    let mut g = Gen::new(seed);
    let id = format!("gen/{}/seed-{seed}", kind.to_possible_value().expect("named").get_name());
    let eps = default_eps();
    match kind {
        GenKind::Affine | GenKind::MaxAffine | GenKind::Dom => {
            let inst = match kind {
                GenKind::Affine => g.affine_instance(&id, dim, members, false),
                GenKind::MaxAffine => g.max_affine_instance(&id, dim, members),
                _ => g.restricted_domain_instance(&id, dim, members),
            };
            InstanceFile::from_family(inst.id, &inst.family)
                .with_point(&inst.x)
                .with_epsilon(&eps)
        }
        GenKind::Qc => {
            let inst = g.qc_instance(&id, dim, members);
            InstanceFile::from_qc_family(inst.id, &inst.family)
                .with_point(&inst.x)
                .with_epsilon(&eps)
        }
        GenKind::Program => {
            let prog = g.program_instance(dim, members);
            InstanceFile::from_program(id, &prog).with_epsilon(&eps[..1])
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Abort> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Abort::Input)?;
    parse_instance(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Abort::Input)
}

fn parse_q(s: &str, what: &str) -> Result<Rational, Abort> {
    parse_rational(s.trim())
        .with_context(|| format!("at {what}: {s:?}"))
        .map_err(Abort::Input)
}

fn eps_list(cli: &[String], f: &InstanceFile) -> Result<Vec<Rational>, Abort> {
    let list = if cli.is_empty() {
        f.epsilons(&default_eps())
    } else {
        cli.iter().map(|s| parse_q(s, "--epsilon")).collect::<Result<_, _>>()?
    };
    if list.iter().any(|e| *e <= Rational::from_integer(0.into())) {
        return Err(Abort::Input(anyhow::anyhow!("at epsilon: every ε must be positive")));
    }
    Ok(list)
}

fn single_eps(cli: Option<&String>, f: &InstanceFile) -> Result<Rational, Abort> {
    let cli: Vec<String> = cli.into_iter().cloned().collect();
    let list = eps_list(&cli, f)?;
    Ok(list.into_iter().next().expect("nonempty"))
}

fn parse_grid(s: &str) -> Result<SGrid, Abort> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = if parts.len() == 3 {
        let base = parse_q(parts[0], "--s-grid base")?;
        let exp = |p: &str| {
            p.trim()
                .parse::<i32>()
                .with_context(|| format!("at --s-grid exponent: {p:?}"))
                .map_err(Abort::Input)
        };
        SGrid::geometric(base, exp(parts[1])?, exp(parts[2])?)
    } else {
        let values = s.split(',').map(|v| parse_q(v, "--s-grid")).collect::<Result<_, _>>()?;
        SGrid::from_values(values)
    };
    Ok(grid?)
}

fn execution(output: &Output) -> Execution {
    if output.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run_one(case: &Case, output: &Output) -> Result<Vec<Record>, Abort> {
    Ok(try_run_case(case, Mutation::None, execution(output))?)
}

fn emit(output: &Output, records: &[Record]) -> Result<u8, Abort> {
    let format = match output.format {
        FormatArg::Human => Format::Human,
        FormatArg::Machine => Format::Machine,
        FormatArg::Csv => Format::Csv,
    };
    write_out(output.out.as_deref(), &render(records, format))?;
    Ok(Summary::of(records).status().exit_code() as u8)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Abort> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Abort::Input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
