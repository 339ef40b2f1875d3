//! Command-line surface. Reports go to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success or pass, 1 verification failure, 2 usage or input
//! error, 3 size-guard refusal.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::arith::is_odd_prime;
use crate::classify::{self, Bounds, CensusEntry, Claim, Execution, Family};
use crate::error::Error;
use crate::groups::FiniteGroup;
use crate::maps::CayleyMap;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

const CSV_HEADER: [&str; 10] = [
    "group", "n", "p", "xs", "regular", "balance", "kappa", "mon_order", "genus", "class_id",
];

#[derive(Parser, Debug)]
#[command(name = "cayley-maps", version, about = "Census and verification of prime-valent regular Cayley maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One row per isomorphism class of regular maps over a group family.
    Census {
        #[arg(long, value_enum)]
        group: GroupFamily,
        #[arg(long)]
        p: u64,
        /// Largest family parameter: n for D_n and Dic_n, the order for
        /// abelian groups, the rank for Z_2^r.
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Checks a classification claim by exhaustive search.
    Verify {
        /// One of 1.1, 1.2, 1.3, 2.6, 2.7-consequence, 3.4, L3.2.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Formula count against enumerated multipliers for one n.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Formula count against enumerated multipliers for n = 1..=n-max.
    Triples {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// Full diagnostic row for a single map.
    Checkmap {
        /// Z6, Z2^3, Z2xZ4, D7, Dic3, ...
        #[arg(long)]
        group: String,
        /// Comma-separated elements in cyclic order, e.g. b,a^1*b,a^3*b.
        #[arg(long)]
        xs: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GroupFamily {
    Dihedral,
    Dicyclic,
    Abelian,
    Elem2,
}

impl From<GroupFamily> for Family {
    fn from(g: GroupFamily) -> Self {
        match g {
            GroupFamily::Dihedral => Family::Dihedral,
            GroupFamily::Dicyclic => Family::Dicyclic,
            GroupFamily::Abelian => Family::Abelian,
            GroupFamily::Elem2 => Family::Elem2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusParams {
    pub group: String,
    pub p: u64,
    pub n_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub params: CensusParams,
    pub entries: Vec<CensusEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub theorem: String,
    pub p: u64,
    pub n_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub params: VerifyParams,
    pub report: classify::Report,
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeGuard { .. } => EXIT_GUARD,
            Error::Invariant(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_FAIL,
        message: format!("write failed: {e}"),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn require_odd_prime(p: u64) -> Result<(), Failure> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(usage(format!("--p must be an odd prime, got {p}")))
    }
}

fn require_positive(name: &str, v: u64) -> Result<(), Failure> {
    if v == 0 {
        Err(usage(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// Runs `f` with the requested worker count. One job, or a build without
/// the `parallel` feature, runs sequentially.
fn with_jobs<R: Send>(
    jobs: Option<usize>,
    f: impl FnOnce(Execution) -> R + Send,
) -> Result<R, Failure> {
    match jobs {
        Some(0) => Err(usage("--jobs must be positive")),
        Some(1) => Ok(f(Execution::Sequential)),
        None => Ok(f(Execution::Parallel)),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(|| f(Execution::Parallel)))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f(Execution::Sequential)),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(io_failure)?;
    writeln!(out, "{text}").map_err(io_failure)
}

fn write_csv(out: &mut dyn Write, entries: &[CensusEntry]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_failure)?;
    for e in entries {
        w.write_record([
            e.group.clone(),
            e.n.to_string(),
            e.p.to_string(),
            e.xs.join(" "),
            e.regular.to_string(),
            e.balance.to_string(),
            e.kappa.clone(),
            e.mon_order.map_or_else(String::new, |m| m.to_string()),
            e.genus.to_string(),
            e.class_id.to_string(),
        ])
        .map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Census {
            group,
            p,
            n_max,
            format,
            jobs,
        } => {
            require_odd_prime(p)?;
            require_positive("--n-max", n_max as u64)?;
            let family = Family::from(group);
            let entries = with_jobs(jobs, |exec| classify::census(family, p as usize, n_max, exec))??;
            match format {
                Format::Json => write_json(
                    out,
                    &CensusReport {
                        schema_version: SCHEMA_VERSION,
                        params: CensusParams {
                            group: group.to_possible_value().expect("named").get_name().into(),
                            p,
                            n_max,
                        },
                        entries,
                    },
                )?,
                Format::Csv => write_csv(out, &entries)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            p,
            n_max,
            jobs,
        } => {
            let claim: Claim = theorem.parse().map_err(|e: Error| usage(e.to_string()))?;
            require_odd_prime(p)?;
            require_positive("--n-max", n_max as u64)?;
            let bounds = Bounds {
                primes: vec![p],
                n_max,
            };
            classify::check_claim_bounds(claim, &bounds)?;
            let report = with_jobs(jobs, |exec| classify::verify_claim(claim, &bounds, exec))??;
            let passed = report.passed;
            write_json(
                out,
                &VerifyReport {
                    schema_version: SCHEMA_VERSION,
                    params: VerifyParams { theorem, p, n_max },
                    report,
                },
            )?;
            Ok(if passed { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Count { p, n } => {
            require_odd_prime(p)?;
            require_positive("--n", n)?;
            write_count_table(out, p, n..=n)?;
            Ok(EXIT_OK)
        }
        Command::Triples { p, n_max } => {
            require_odd_prime(p)?;
            require_positive("--n-max", n_max)?;
            write_count_table(out, p, 1..=n_max)?;
            Ok(EXIT_OK)
        }
        Command::Checkmap { group, xs } => {
            let group: FiniteGroup = group.parse()?;
            let xs = xs
                .split(',')
                .map(|s| group.parse_element(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let map = CayleyMap::new(group, xs)?;
            write_json(out, &CensusEntry::of(&map, 0)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// One line per `n`: formula count, enumerated multipliers, and whether the
/// formula, the enumeration and the CRT lift agree.
fn write_count_table(
    out: &mut dyn Write,
    p: u64,
    ns: impl Iterator<Item = u64>,
) -> Result<(), Failure> {
    writeln!(out, "n\tcount\tl\tstatus").map_err(io_failure)?;
    for n in ns {
        let count = classify::formula_count(n, p);
        let triples = classify::triples_for(n, p);
        let lifted = classify::crt_lift_multipliers(n, p);
        let agree = count == triples.len() as u64 && lifted == triples;
        let list = triples.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        writeln!(
            out,
            "{n}\t{count}\t[{list}]\t{}",
            if agree { "AGREE" } else { "DISAGREE" }
        )
        .map_err(io_failure)?;
    }
    Ok(())
}
