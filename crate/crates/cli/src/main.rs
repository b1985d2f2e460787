use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cimlab::census::{self, Subject, Summary};
use cimlab::classify::{self, Caps, Mode};
use cimlab::construct::{self, ConstructArgs, Target};
use cimlab::{CliError, GroupFile};
use cimlab_core::section4;

#[derive(Parser)]
#[command(name = "cimlab", version, about = "Intersections of maximal subgroups in finite groups")]
struct Cli {
    /// Largest group that is enumerated element by element.
    #[arg(long, global = true, default_value_t = cimlab_core::group::DEFAULT_ELEMENT_CAP)]
    cap_elements: usize,
    /// Largest subgroup lattice that is built.
    #[arg(long, global = true, default_value_t = cimlab_core::lattice::DEFAULT_SUBGROUP_CAP)]
    cap_subgroups: usize,
    /// Largest structured group whose subgroup lattice is built when a
    /// closed-form engine is also available.
    #[arg(long, global = true, default_value_t = classify::DEFAULT_LATTICE_ORDER)]
    cap_lattice_order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    StructuredGrid,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a group file and print a JSON report.
    Classify {
        file: PathBuf,
        /// Default: both for structured files, brute otherwise.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Accept structured files that fail validation (brute mode only).
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Closure of a cyclic subgroup under intersections of maximal subgroups.
    Closure {
        file: PathBuf,
        /// `(0 1 2)` for permutations, `a,b` for abelian tuples,
        /// `v;...;v;h` for structured groups.
        element: String,
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Print a structured group file.
    Construct {
        #[arg(value_enum)]
        target: Target,
        /// Cyclic factor orders of the quotient, for `qab`.
        #[arg(long, value_delimiter = ',')]
        abelian: Option<Vec<u32>>,
        #[arg(long, default_value_t = 2)]
        d1: usize,
        #[arg(long, default_value_t = 2)]
        d2: usize,
        #[arg(long, default_value_t = cimlab_core::structured::DEFAULT_PRIME_CEILING)]
        prime_ceiling: u64,
    },
    /// Classify many groups and write CSV to stdout.
    Census {
        /// Group files to include.
        files: Vec<PathBuf>,
        /// The structured grid plus the fixed control groups; the default
        /// when no files are given.
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, default_value_t = 2000)]
        max_order: u128,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check the Alt(5) example with its two modules over GF(11).
    VerifySection4 {
        /// Corrupt one matrix entry first; the run must then fail.
        #[arg(long)]
        negative_control: bool,
    },
}

fn read_file(path: &Path) -> Result<(String, GroupFile), CliError> {
    let text = std::fs::read_to_string(path)?;
    let id = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((id, GroupFile::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Engine(e.to_string()))
}

fn print(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    Ok(out.flush()?)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let caps = Caps { elements: cli.cap_elements, subgroups: cli.cap_subgroups, lattice_order: cli.cap_lattice_order };
    match cli.command {
        Command::Classify { file, mode, allow_invalid } => {
            let (id, group) = read_file(&file)?;
            let out = classify::classify(&group, &id, mode, caps, allow_invalid)?;
            print(&(to_json(&out)? + "\n"))?;
            if out.fast_vs_brute_agree == Some(false) {
                return Err(CliError::Disagreement(out.disagreements.join("; ")));
            }
        }
        Command::Closure { file, element, allow_invalid } => {
            let (_, group) = read_file(&file)?;
            let out = classify::closure(&group, &element, caps, allow_invalid)?;
            print(&(to_json(&out)? + "\n"))?;
            if !out.engines_agree {
                return Err(CliError::Disagreement(format!("closure of <{}>", out.element)));
            }
        }
        Command::Construct { target, abelian, d1, d2, prime_ceiling } => {
            let args = ConstructArgs { abelian, d1, d2, prime_ceiling };
            print(&construct::construct(target, &args)?)?;
        }
        Command::Census { files, family, max_order, jobs } => {
            let mut subjects = Vec::new();
            if family.is_some() || files.is_empty() {
                subjects.extend(census::structured_grid(max_order).into_iter().map(Subject::Structured));
                subjects.extend(census::control_groups().into_iter().map(|(id, g)| Subject::Named(id, g)));
            }
            for path in &files {
                let (id, group) = read_file(path)?;
                subjects.push(Subject::File(id, group));
            }
            let results = census::run(&subjects, caps, jobs.max(1))?;
            census::write_csv(std::io::stdout().lock(), &results)?;
            let summary = Summary::of(&results);
            eprintln!("{summary}");
            for r in &results {
                for line in r.violations.iter().chain(&r.disagreements) {
                    eprintln!("{}: {line}", r.row.group_id);
                }
            }
            if summary.violations > 0 || summary.disagreements > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Command::VerifySection4 { negative_control } => {
            let report = section4::verify_all(negative_control);
            print(&(to_json(&report)? + "\n"))?;
            if !report.passed() {
                for c in report.failures() {
                    eprintln!("FAILED {}: {}", c.name, c.detail);
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
