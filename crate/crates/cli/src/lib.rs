//! Argument parsing, command dispatch and output rendering for the
//! `shallowperm` binary.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use shallowperm_core::enumerate::{count, profile, CountQuery, CountTable, Method, ProfilePair, Statistic};
use shallowperm_core::series::{
    as_string, catalog_capped, CatalogEntry, GfName, VariableRoles, DEFAULT_ORDER, MAX_ORDER,
};
use shallowperm_core::{
    certify_shallow, run_suite, PatternSpec, Permutation, ShallowCertificate, Suite, SuiteReport, SymmetryClass,
};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "shallowperm", version, about = "Count, certify and verify shallow permutations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count shallow permutations, optionally pattern-avoiding, symmetric or refined by a statistic.
    Count(CountArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Trace the R-operator reduction of a permutation.
    Certify(CertifyArgs),
    /// Expand a catalog generating function.
    Gf(GfArgs),
    /// Compare (cyc, des+1) on 132-avoiders with (cyc, lrmax) on 321-avoiders.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Size or inclusive range such as `1..8`.
    #[arg(long = "n", value_parser = parse_sizes)]
    pub sizes: RangeInclusive<usize>,
    /// Patterns to avoid: digits (`132`), `3n12` or `u3412`. Repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    pub avoid: Vec<PatternSpec>,
    #[arg(long, value_parser = parse_with::<SymmetryClass>)]
    pub symmetry: Option<SymmetryClass>,
    #[arg(long = "by", value_parser = parse_with::<Statistic>)]
    pub refine_by: Option<Statistic>,
    #[arg(long, default_value = "constructive", value_parser = parse_with::<Method>)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_with::<Suite>)]
    pub suite: Suite,
    #[arg(long = "max-n")]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Permutation such as `4,2,1,6,3,5`.
    #[arg(value_parser = parse_with::<Permutation>)]
    pub permutation: Permutation,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GfArgs {
    #[arg(long, value_parser = parse_with::<GfName>)]
    pub name: GfName,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn parse_with<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

/// `5`, `1..8` or `1..=8`, both ends inclusive.
pub fn parse_sizes(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid size {t:?}"));
    match s.split_once("..") {
        None => num(s).map(|n| n..=n),
        Some((a, b)) => {
            let (lo, hi) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(lo..=hi)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub n: usize,
    pub k: Option<usize>,
    #[serde(with = "as_string")]
    pub coefficient: num_rational::BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPayload {
    pub name: GfName,
    pub order: usize,
    pub roles: VariableRoles,
    pub bivariate: bool,
    pub rows: Vec<SeriesRow>,
}

impl SeriesPayload {
    fn from_entry(entry: &CatalogEntry, order: usize) -> Self {
        let rows = match entry {
            CatalogEntry::Univariate { series, .. } => series
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| SeriesRow { n, k: None, coefficient: c.clone() })
                .collect(),
            CatalogEntry::Bivariate { table, .. } => table
                .rows
                .iter()
                .enumerate()
                .flat_map(|(n, row)| {
                    row.iter().enumerate().map(move |(k, c)| SeriesRow { n, k: Some(k), coefficient: c.clone() })
                })
                .collect(),
        };
        Self { name: entry.name(), order, roles: entry.roles().clone(), bivariate: entry.bivariate().is_some(), rows }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    CountTable(CountTable),
    Verification(SuiteReport),
    Certificate(ShallowCertificate),
    Series(SeriesPayload),
    Profile(ProfilePair),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub payload: Payload,
    pub elapsed_ms: u64,
}

impl OutputDocument {
    /// Header and rows shared by the CSV and markdown renderings.
    pub fn rows(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        match &self.payload {
            Payload::CountTable(t) => (
                vec!["n", "k", "count", "elapsed_ms"],
                t.rows
                    .iter()
                    .map(|r| vec![r.n.to_string(), opt(r.k), r.count.to_string(), r.elapsed_ms.to_string()])
                    .collect(),
            ),
            Payload::Verification(r) => (
                vec!["check", "passed", "detail"],
                r.checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]).collect(),
            ),
            Payload::Certificate(c) => (
                vec!["step", "size", "position_of_max", "moved_value", "classification"],
                c.steps
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        vec![
                            (i + 1).to_string(),
                            s.size.to_string(),
                            s.position_of_max.to_string(),
                            s.moved_value.map(|v| v.to_string()).unwrap_or_default(),
                            format!("{:?}", s.classification),
                        ]
                    })
                    .collect(),
            ),
            Payload::Series(s) => (
                vec!["n", "k", "coefficient"],
                s.rows.iter().map(|r| vec![r.n.to_string(), opt(r.k), r.coefficient.to_string()]).collect(),
            ),
            Payload::Profile(p) => (
                vec!["class", "first", "second", "multiplicity"],
                [&p.left, &p.right]
                    .into_iter()
                    .flat_map(|side| {
                        side.entries.iter().map(move |e| {
                            vec![
                                side.class_descriptor.clone(),
                                e.first.to_string(),
                                e.second.to_string(),
                                e.multiplicity.to_string(),
                            ]
                        })
                    })
                    .collect(),
            ),
        }
    }

    /// One-line summary printed above markdown tables.
    pub fn summary(&self) -> String {
        match &self.payload {
            Payload::CountTable(t) => format!("{} rows ({})", t.rows.len(), t.provenance),
            Payload::Verification(r) => {
                format!("suite {} at max n {}: {}", r.suite, r.max_n, if r.overall { "pass" } else { "FAIL" })
            }
            Payload::Certificate(c) => {
                format!("{}: {}, {} steps", c.subject, if c.verdict { "shallow" } else { "not shallow" }, c.steps.len())
            }
            Payload::Series(s) => format!("{} to order {}", s.name, s.order),
            Payload::Profile(p) => format!("exploratory evidence: {}", p.verdict),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("documents serialize") + "\n",
            Format::Csv => {
                let (header, rows) = self.rows();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&header).expect("in-memory write");
                for r in rows {
                    w.write_record(&r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
            }
            Format::Md => {
                let (header, rows) = self.rows();
                let cell = |s: &str| s.replace('|', "\\|");
                let mut out = format!("**{}**: {}\n\n", self.command, self.summary());
                out.push_str(&format!("| {} |\n", header.join(" | ")));
                out.push_str(&format!("|{}\n", " --- |".repeat(header.len())));
                for r in rows {
                    let cells: Vec<String> = r.iter().map(|c| cell(c)).collect();
                    out.push_str(&format!("| {} |\n", cells.join(" | ")));
                }
                out
            }
        }
    }
}

/// Result of running one command: the document (if any) and the exit code.
pub struct Outcome {
    pub document: Option<OutputDocument>,
    pub format: Format,
    pub error: Option<String>,
    pub exit_code: u8,
}

impl Outcome {
    fn done(document: OutputDocument, format: Format, ok: bool) -> Self {
        Self { document: Some(document), format, error: None, exit_code: if ok { EXIT_OK } else { EXIT_DOMAIN } }
    }

    fn failed(format: Format, error: impl ToString) -> Self {
        Self { document: None, format, error: Some(error.to_string()), exit_code: EXIT_DOMAIN }
    }

    /// Writes the document to `out` and any error to `err`.
    pub fn emit(&self, out: &mut impl Write, err: &mut impl Write) -> std::io::Result<()> {
        if let Some(doc) = &self.document {
            out.write_all(doc.render(self.format).as_bytes())?;
        }
        if let Some(e) = &self.error {
            writeln!(err, "error: {e}")?;
        }
        Ok(())
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let doc = |command: &str, parameters, payload| OutputDocument {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        parameters,
        payload,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    match cli.command {
        Command::Count(a) => {
            let mut q = CountQuery::new(a.sizes.clone()).using(a.method);
            q.avoid = a.avoid.clone();
            q.symmetry = a.symmetry;
            q.refine_by = a.refine_by;
            let parameters = params(&[
                ("n", format!("{}..{}", a.sizes.start(), a.sizes.end())),
                ("avoid", a.avoid.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")),
                ("symmetry", a.symmetry.map(|s| s.short_name().to_string()).unwrap_or_default()),
                ("by", a.refine_by.map(|s| s.to_string()).unwrap_or_default()),
                ("method", a.method.to_string()),
            ]);
            match count(&q) {
                Ok(t) => Outcome::done(doc("count", parameters, Payload::CountTable(t)), a.format, true),
                Err(e) => Outcome::failed(a.format, e),
            }
        }
        Command::Verify(a) => {
            let report = run_suite(a.suite, a.max_n);
            let ok = report.overall;
            let parameters = params(&[("suite", a.suite.to_string()), ("max_n", a.max_n.to_string())]);
            Outcome::done(doc("verify", parameters, Payload::Verification(report)), a.format, ok)
        }
        Command::Certify(a) => {
            let cert = certify_shallow(&a.permutation);
            let ok = cert.verdict;
            let parameters = params(&[("permutation", a.permutation.to_string())]);
            Outcome::done(doc("certify", parameters, Payload::Certificate(cert)), a.format, ok)
        }
        Command::Gf(a) => match catalog_capped(a.name, a.order, MAX_ORDER) {
            Ok(entry) => {
                let payload = Payload::Series(SeriesPayload::from_entry(&entry, a.order));
                let parameters = params(&[("name", a.name.to_string()), ("order", a.order.to_string())]);
                Outcome::done(doc("gf", parameters, payload), a.format, true)
            }
            Err(e) => Outcome::failed(a.format, e),
        },
        Command::Profile(a) => match profile(a.n) {
            Ok(pair) => {
                Outcome::done(doc("profile", params(&[("n", a.n.to_string())]), Payload::Profile(pair)), a.format, true)
            }
            Err(e) => Outcome::failed(a.format, e),
        },
    }
}
