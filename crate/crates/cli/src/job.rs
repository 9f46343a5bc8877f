use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gw_core::cohmodel::make_model;
use gw_core::{BasisClass, CurveClass, FamilyKind, ModelKind, Partition, QuotientFamily, RingModel};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "gwcalc", version, about = "Exact genus-zero Gromov-Witten invariants and quotient comparisons")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Fill in timing_ms (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// One invariant GW_{0,A}(γ1,...,γk).
    Compute {
        /// P<N>, P<m>xP<n> or Gr(k,m)
        #[arg(long)]
        model: String,
        /// `d`, or `d1,d2` on a product
        #[arg(long)]
        degree: String,
        /// Comma separated classes, `cls*k` repeats a class.
        #[arg(long = "insert")]
        insert: Vec<String>,
    },
    /// Quotient invariant against the ambient invariant.
    Compare {
        /// torus:m,n or grass:m,n
        #[arg(long)]
        family: String,
        #[arg(long)]
        degree: u32,
        #[arg(long = "insert")]
        insert: Vec<String>,
        /// Insertion receiving the slice class (0-based).
        #[arg(long, default_value_t = 0)]
        slot: usize,
    },
    /// Degree d(λ) of the degeneracy locus.
    Dlambda {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
    },
    /// Every dimensionally valid comparison up to the given degree.
    Table {
        #[arg(long)]
        family: String,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, default_value_t = 6)]
        max_points: u32,
    },
    /// Dimension bookkeeping for a family.
    Ledger {
        #[arg(long)]
        family: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        points: u32,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Job {
    Compute { model: ModelKind, degree: CurveClass, insertions: Vec<BasisClass> },
    Compare { family: FamilyKind, degree: u32, insertions: Vec<BasisClass>, slot: usize },
    Dlambda { lambda: Partition, m: u32, n: u32 },
    Table { family: FamilyKind, max_degree: u32, max_points: u32 },
    Ledger { family: FamilyKind, genus: u32, points: u32, degree: u32 },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Compute { .. } => "compute",
            Job::Compare { .. } => "compare",
            Job::Dlambda { .. } => "dlambda",
            Job::Table { .. } => "table",
            Job::Ledger { .. } => "ledger",
        }
    }

    /// Canonical `(flag, value)` pairs in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        match self {
            Job::Compute { model, degree, insertions } => {
                let mut v = vec![("model", model.to_string()), ("degree", degree.to_string())];
                if !insertions.is_empty() {
                    v.push(("insert", insertion_list(insertions)));
                }
                v
            }
            Job::Compare { family, degree, insertions, slot } => vec![
                ("family", family.to_string()),
                ("degree", degree.to_string()),
                ("insert", insertion_list(insertions)),
                ("slot", slot.to_string()),
            ],
            Job::Dlambda { lambda, m, n } => {
                vec![("m", m.to_string()), ("n", n.to_string()), ("lambda", lambda.to_string())]
            }
            Job::Table { family, max_degree, max_points } => vec![
                ("family", family.to_string()),
                ("max-degree", max_degree.to_string()),
                ("max-points", max_points.to_string()),
            ],
            Job::Ledger { family, genus, points, degree } => vec![
                ("family", family.to_string()),
                ("degree", degree.to_string()),
                ("points", points.to_string()),
                ("genus", genus.to_string()),
            ],
        }
    }
}

/// A fully validated command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub job: Job,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub timing: bool,
}

/// What clap decided when the command line is not a job.
pub enum Parsed {
    Job(JobSpec),
    /// `--help` / `--version` text.
    Info(String),
}

impl JobSpec {
    pub fn parse<I, T>(argv: I) -> Result<Parsed, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let args = match Args::try_parse_from(argv) {
            Ok(a) => a,
            Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
                return Ok(Parsed::Info(e.to_string()));
            }
            Err(e) => {
                let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
                return Err(CliError::Usage(first));
            }
        };
        let job = match args.command {
            Cmd::Compute { model, degree, insert } => {
                let model: ModelKind = model.parse()?;
                let ring = make_model(model)?;
                let degree: CurveClass = degree.parse()?;
                ring.check_curve(&degree)?;
                let mut insertions = parse_insertions(&ring, &insert)?;
                insertions.sort();
                Job::Compute { model, degree, insertions }
            }
            Cmd::Compare { family, degree, insert, slot } => {
                let family: FamilyKind = family.parse()?;
                let fam = QuotientFamily::new(family)?;
                let insertions = parse_insertions(&fam.downstairs, &insert)?;
                Job::Compare { family, degree, insertions, slot }
            }
            Cmd::Dlambda { m, n, lambda } => Job::Dlambda { lambda: lambda.parse()?, m, n },
            Cmd::Table { family, max_degree, max_points } => {
                let family: FamilyKind = family.parse()?;
                QuotientFamily::new(family)?;
                Job::Table { family, max_degree, max_points }
            }
            Cmd::Ledger { family, degree, points, genus } => {
                let family: FamilyKind = family.parse()?;
                QuotientFamily::new(family)?;
                Job::Ledger { family, genus, points, degree }
            }
        };
        Ok(Parsed::Job(JobSpec { job, format: args.format, output: args.output, timing: args.timing }))
    }

    /// Canonical argument vector (without the program name).
    pub fn canonical_args(&self) -> Vec<String> {
        let mut out = vec![self.job.name().to_string()];
        for (flag, value) in self.job.fields() {
            out.push(format!("--{flag}"));
            out.push(value);
        }
        out.push("--format".into());
        out.push(self.format.to_string());
        if let Some(p) = &self.output {
            out.push("--output".into());
            out.push(p.display().to_string());
        }
        if self.timing {
            out.push("--timing".into());
        }
        out
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_args().join(" "))
    }
}

/// Splits on commas outside brackets, so `s[2,1],pt` is two tokens.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub fn parse_insertions(ring: &RingModel, lists: &[String]) -> Result<Vec<BasisClass>, CliError> {
    let mut out = Vec::new();
    for list in lists {
        for token in split_top_level(list) {
            let token = token.trim();
            if token.is_empty() {
                return Err(CliError::Usage(format!("empty class in insertion list {list:?}")));
            }
            // A trailing all-digit factor is a multiplicity.
            let (class, count) = match token.rsplit_once('*') {
                Some((c, k)) if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => {
                    let k: usize = k.parse().map_err(|_| CliError::Usage(format!("bad multiplicity in {token:?}")))?;
                    (c, k)
                }
                _ => (token, 1),
            };
            if count == 0 {
                return Err(CliError::Usage(format!("zero multiplicity in {token:?}")));
            }
            let class = BasisClass::parse(ring, class)?;
            out.extend(std::iter::repeat_n(class, count));
        }
    }
    Ok(out)
}

/// Run-length form, e.g. `H^2*8` or `H1^1*H2^1,H1^1*H2^2*2`.
pub fn insertion_list(insertions: &[BasisClass]) -> String {
    let mut tokens: Vec<String> = Vec::new();
    let mut i = 0;
    while i < insertions.len() {
        let j = (i..insertions.len()).find(|&j| insertions[j] != insertions[i]).unwrap_or(insertions.len());
        tokens.push(if j - i > 1 { format!("{}*{}", insertions[i], j - i) } else { insertions[i].to_string() });
        i = j;
    }
    tokens.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(args: &[&str]) -> JobSpec {
        match JobSpec::parse(std::iter::once("gwcalc").chain(args.iter().copied())).unwrap() {
            Parsed::Job(j) => j,
            Parsed::Info(_) => panic!("unexpected info"),
        }
    }

    #[test]
    fn multiplicity_and_brackets() {
        let j = job(&["compute", "--model", "Gr(2,4)", "--degree", "1", "--insert", "s[2,1],s[1]*2"]);
        let Job::Compute { insertions, .. } = &j.job else { panic!() };
        assert_eq!(insertions.len(), 3);
        assert_eq!(insertion_list(insertions), "s[1]*2,s[2,1]");
    }

    #[test]
    fn monomial_with_multiplicity() {
        let j = job(&["compare", "--family", "torus:1,1", "--degree", "1", "--insert", "H1*H2*3"]);
        assert_eq!(
            j.canonical_args(),
            ["compare", "--family", "torus:1,1", "--degree", "1", "--insert", "H1^1*H2^1*3", "--slot", "0", "--format", "json"]
        );
    }

    #[test]
    fn compute_sorts_insertions() {
        let a = job(&["compute", "--model", "P3", "--degree", "1", "--insert", "pt,H^2", "--format", "csv"]);
        let b = job(&["compute", "--model", "P3", "--degree", "1", "--insert", "H^2", "--insert", "H^3", "--format", "csv"]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "compute --model P3 --degree 1 --insert H^2,H^3 --format csv");
    }
}
