//! Job specifications: what the command line asks for, with a textual form
//! that parses back to the same value.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nondegen_core::{fermat_cm_type, make_group, validate_cm_type, CmType, Result as CoreResult};

/// Where the CM-type comes from: `fermat:a0,a1,a2` or `list:t1,...,tk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CmSource {
    Fermat([u64; 3]),
    List(Vec<u64>),
}

fn parse_residues(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad residue {t:?}: {e}"))
        })
        .collect()
}

impl FromStr for CmSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| format!("expected fermat:a0,a1,a2 or list:t1,..., got {s:?}"))?;
        match kind {
            "fermat" => {
                let a = parse_residues(body)?;
                let a: [u64; 3] = a
                    .try_into()
                    .map_err(|_| "fermat needs exactly three exponents".to_string())?;
                Ok(CmSource::Fermat(a))
            }
            "list" if body.is_empty() => Ok(CmSource::List(Vec::new())),
            "list" => Ok(CmSource::List(parse_residues(body)?)),
            other => Err(format!("unknown CM-type source {other:?}")),
        }
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CmSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmSource::Fermat(a) => write!(f, "fermat:{}", join(a)),
            CmSource::List(t) => write!(f, "list:{}", join(t)),
        }
    }
}

impl CmSource {
    pub fn build(&self, modulus: u64, kernel: &[u64]) -> CoreResult<CmType> {
        match self {
            CmSource::Fermat(a) if kernel.iter().all(|&h| h % modulus == 1) => {
                fermat_cm_type(modulus, *a)
            }
            CmSource::Fermat(_) => Err(nondegen_core::Error::InvalidInput(
                "Fermat CM-types live on the full group; drop --kernel".into(),
            )),
            CmSource::List(t) => validate_cm_type(&make_group(modulus, kernel)?, t),
        }
    }
}

/// `LO..HI`, inclusive at both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for PrimeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
        let lo = lo
            .trim()
            .parse()
            .map_err(|e| format!("bad lower bound: {e}"))?;
        let hi = hi
            .trim()
            .parse()
            .map_err(|e| format!("bad upper bound: {e}"))?;
        Ok(PrimeRange { lo, hi })
    }
}

impl fmt::Display for PrimeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "nondegen",
    version,
    about = "Nondegeneracy of CM abelian varieties and their reductions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct FieldArgs {
    /// Conductor m; the CM field lies in Q(zeta_m).
    #[arg(short = 'm', long = "modulus")]
    pub modulus: u64,
    /// Subgroup H of (Z/m)^x whose fixed field is the CM field.
    #[arg(long, value_delimiter = ',')]
    pub kernel: Vec<u64>,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct OutputArgs {
    #[arg(long)]
    pub json: bool,
    /// Explicit format; `--json` is shorthand for `--format json`.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide nondegeneracy of all powers of A over Q^alg.
    Analyze {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        phi: CmSource,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decide nondegeneracy of the reduction at the given primes.
    Reduce {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        phi: CmSource,
        #[arg(short = 'p', long = "prime", value_delimiter = ',')]
        prime: Vec<u64>,
        #[arg(long)]
        primes: Option<PrimeRange>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One CSV row per unramified prime in a range.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        phi: CmSource,
        #[arg(long)]
        primes: PrimeRange,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every CM-type of a small field with its verdict.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        up_to_translation: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Analyze,
    Reduce,
    Scan,
    Enumerate,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::Reduce => "reduce",
            CommandKind::Scan => "scan",
            CommandKind::Enumerate => "enumerate",
        }
    }
}

/// Which primes a job covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSelection {
    List(Vec<u64>),
    Range(PrimeRange),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: CommandKind,
    pub modulus: u64,
    /// Sorted, without duplicates; `[1]` when not given.
    pub kernel: Vec<u64>,
    pub cm_type: Option<CmSource>,
    pub primes: Vec<PrimeSelection>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub up_to_translation: bool,
}

fn normalize_kernel(modulus: u64, kernel: &[u64]) -> Vec<u64> {
    let mut k: Vec<u64> = kernel.iter().map(|&h| h % modulus.max(1)).collect();
    k.push(1);
    k.sort_unstable();
    k.dedup();
    k
}

impl JobSpec {
    pub fn from_command(cmd: Command) -> JobSpec {
        let base = |command, field: FieldArgs, output: OutputArgs, default: OutputFormat| JobSpec {
            command,
            kernel: normalize_kernel(field.modulus, &field.kernel),
            modulus: field.modulus,
            cm_type: None,
            primes: Vec::new(),
            format: output.format.unwrap_or(if output.json {
                OutputFormat::Json
            } else {
                default
            }),
            out: output.out,
            threads: output.threads,
            up_to_translation: false,
        };
        match cmd {
            Command::Analyze { field, phi, output } => JobSpec {
                cm_type: Some(phi),
                ..base(CommandKind::Analyze, field, output, OutputFormat::Human)
            },
            Command::Reduce {
                field,
                phi,
                prime,
                primes,
                output,
            } => {
                let mut sel = Vec::new();
                if !prime.is_empty() {
                    sel.push(PrimeSelection::List(prime));
                }
                if let Some(r) = primes {
                    sel.push(PrimeSelection::Range(r));
                }
                JobSpec {
                    cm_type: Some(phi),
                    primes: sel,
                    ..base(CommandKind::Reduce, field, output, OutputFormat::Human)
                }
            }
            Command::Scan {
                field,
                phi,
                primes,
                output,
            } => JobSpec {
                cm_type: Some(phi),
                primes: vec![PrimeSelection::Range(primes)],
                ..base(CommandKind::Scan, field, output, OutputFormat::Csv)
            },
            Command::Enumerate {
                field,
                up_to_translation,
                output,
            } => JobSpec {
                up_to_translation,
                ..base(CommandKind::Enumerate, field, output, OutputFormat::Human)
            },
        }
    }

    /// The primes selected, ascending and deduplicated.
    pub fn prime_list(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for sel in &self.primes {
            match sel {
                PrimeSelection::List(ps) => out.extend(ps),
                PrimeSelection::Range(r) => {
                    out.extend(nondegen_core::arith::modular::primes_in(r.lo, r.hi))
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn phi_text(&self) -> Option<String> {
        self.cm_type.as_ref().map(ToString::to_string)
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -m {}", self.command.name(), self.modulus)?;
        write!(f, " --kernel {}", join(&self.kernel))?;
        if let Some(phi) = &self.cm_type {
            write!(f, " --phi {phi}")?;
        }
        for sel in &self.primes {
            match sel {
                PrimeSelection::List(ps) => write!(f, " -p {}", join(ps))?,
                PrimeSelection::Range(r) => write!(f, " --primes {r}")?,
            }
        }
        if self.up_to_translation {
            f.write_str(" --up-to-translation")?;
        }
        let format = match self.format {
            OutputFormat::Human => "human",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        };
        write!(f, " --format {format}")?;
        if let Some(out) = &self.out {
            write!(f, " --out {}", out.display())?;
        }
        if let Some(t) = self.threads {
            write!(f, " --threads {t}")?;
        }
        Ok(())
    }
}

impl FromStr for JobSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let args = std::iter::once("nondegen").chain(s.split_whitespace());
        let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
        Ok(JobSpec::from_command(cli.command))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cm_source_syntax() {
        assert_eq!("fermat:1,9,17".parse(), Ok(CmSource::Fermat([1, 9, 17])));
        assert_eq!("list:1,3".parse(), Ok(CmSource::List(vec![1, 3])));
        assert!("fermat:1,2".parse::<CmSource>().is_err());
        assert!("phi:1".parse::<CmSource>().is_err());
        assert!("list:1,x".parse::<CmSource>().is_err());
    }

    #[test]
    fn prime_range_syntax() {
        assert_eq!("2..200".parse(), Ok(PrimeRange { lo: 2, hi: 200 }));
        assert_eq!("10..4".parse(), Ok(PrimeRange { lo: 10, hi: 4 }));
        assert!("2-200".parse::<PrimeRange>().is_err());
    }

    #[test]
    fn job_from_arguments() {
        let job: JobSpec = "reduce -m 27 --phi fermat:1,9,17 -p 31 -p 109,31 --json"
            .parse()
            .unwrap();
        assert_eq!(job.command, CommandKind::Reduce);
        assert_eq!(job.kernel, vec![1]);
        assert_eq!(job.prime_list(), vec![31, 109]);
        assert_eq!(job.format, OutputFormat::Json);
        let scan: JobSpec = "scan -m 4 --phi list:1 --primes 2..50".parse().unwrap();
        assert_eq!(scan.format, OutputFormat::Csv);
        assert_eq!(scan.prime_list().len(), 15);
    }

    fn job() -> impl Strategy<Value = JobSpec> {
        let source = prop_oneof![
            prop::array::uniform3(1u64..60).prop_map(CmSource::Fermat),
            prop::collection::vec(1u64..60, 1..6).prop_map(CmSource::List),
        ];
        // clap merges repeated -p flags, so at most one list then one range
        let selection = (
            prop::option::of(prop::collection::vec(2u64..500, 1..4)),
            prop::option::of((2u64..500, 2u64..500)),
        )
            .prop_map(|(list, range)| {
                let mut sel: Vec<PrimeSelection> =
                    list.into_iter().map(PrimeSelection::List).collect();
                sel.extend(range.map(|(lo, hi)| PrimeSelection::Range(PrimeRange { lo, hi })));
                sel
            });
        (
            3u64..100,
            prop::collection::vec(1u64..100, 0..3),
            source,
            selection,
            prop_oneof![
                Just(OutputFormat::Human),
                Just(OutputFormat::Json),
                Just(OutputFormat::Csv)
            ],
            prop::option::of(1usize..16),
        )
            .prop_map(|(m, kernel, phi, primes, format, threads)| JobSpec {
                command: CommandKind::Reduce,
                kernel: normalize_kernel(m, &kernel),
                modulus: m,
                cm_type: Some(phi),
                primes,
                format,
                out: None,
                threads,
                up_to_translation: false,
            })
    }

    proptest! {
        #[test]
        fn textual_form_round_trips(job in job()) {
            let text = job.to_string();
            let parsed: JobSpec = text.parse().unwrap();
            prop_assert_eq!(parsed, job);
        }
    }
}
