//! Command-line front end. [`run`] does all the work and returns buffered
//! output, so the binary only prints it and exits.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog;
use crate::harmonics::report_for;
use crate::report;
use crate::specfile::{self, SpecTemplate};
use crate::suite::OperatorSuite;
use crate::verify::{self, CheckResult, CheckStatus};
use crate::Rational;

#[derive(Parser, Debug)]
#[command(name = "ahforms", version, about = "Harmonic-form dimensions of invariant almost Hermitian structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Suite {
    Structural,
    AlmostHermitian,
    AlmostKahler,
}

#[derive(Args, Debug)]
struct Common {
    /// Catalog id or path to a spec file
    spec: String,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the output to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a spec describes a Lie algebra with a compatible (J, g)
    Validate {
        #[command(flatten)]
        common: Common,
        /// Parameter substitution, NAME=VALUE
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Compute every harmonic number of a spec
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Run the check suites that apply to a spec
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Restrict to the given suites (repeatable)
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        /// Treat not-applicable checks of requested suites as failures
        #[arg(long)]
        strict: bool,
    },
    /// Recompute reports along a parameter and compare them
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary
        #[arg(long = "param", value_name = "NAME")]
        param: String,
        /// Comma-separated rational sample values, e.g. 1,2,5/2
        #[arg(long, value_name = "CSV")]
        values: String,
    },
    /// List or export the built-in specs
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// Print the ids of the built-in specs
    List,
    /// Write every built-in spec into a directory
    Export { dir: PathBuf },
}

/// Exit code and buffered output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn load_template(spec: &str) -> Result<SpecTemplate, String> {
    let path = Path::new(spec);
    if path.is_file() {
        return specfile::read_template(path).map_err(|e| format!("{}: {e}", path.display()));
    }
    if catalog::entry(spec).is_some() {
        return catalog::template(spec).map_err(|e| e.to_string());
    }
    Err(format!("'{spec}' is neither a readable file nor a catalog id (see `ahforms catalog list`)"))
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, Rational>, String> {
    raw.iter()
        .map(|p| {
            let (name, value) = p.split_once('=').ok_or_else(|| format!("--param expects NAME=VALUE, got '{p}'"))?;
            let v = specfile::parse_rational(value.trim()).map_err(|e| format!("--param {name}: {e}"))?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

fn emit(out: &Option<PathBuf>, text: String, code: i32) -> Outcome {
    match out {
        None => Outcome::with_code(code, text),
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => Outcome::with_code(code, format!("wrote {}\n", path.display())),
            Err(e) => Outcome::error(EXIT_USAGE, format!("cannot write {}: {e}", path.display())),
        },
    }
}

fn suite_of(id: &str) -> Suite {
    if id.starts_with("structural.") {
        Suite::Structural
    } else if id.starts_with("almost-hermitian.") {
        Suite::AlmostHermitian
    } else {
        Suite::AlmostKahler
    }
}

/// Runs one command line (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match cli.command {
        Command::Catalog { action } => match action.unwrap_or(CatalogAction::List) {
            CatalogAction::List => {
                let mut s = String::new();
                for e in catalog::ENTRIES {
                    let desc = SpecTemplate::parse(e.text).ok().and_then(|t| t.description).unwrap_or_default();
                    s.push_str(&format!("{:<22} {desc}\n", e.id));
                }
                Outcome::ok(s)
            }
            CatalogAction::Export { dir } => match catalog::export(&dir) {
                Ok(paths) => Outcome::ok(paths.iter().map(|p| format!("{}\n", p.display())).collect()),
                Err(e) => Outcome::error(EXIT_USAGE, e),
            },
        },
        Command::Validate { common, params } => {
            let spec = match load(&common.spec, &params) {
                Ok(s) => s,
                Err(e) => return Outcome::error(EXIT_USAGE, e),
            };
            let v = spec.validate();
            let text = match common.format {
                Format::Table => report::validation_table(&v),
                Format::Json => report::validation_json(&v),
            };
            emit(&common.out, text, if v.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Report { common, params } => {
            let spec = match load(&common.spec, &params) {
                Ok(s) => s,
                Err(e) => return Outcome::error(EXIT_USAGE, e),
            };
            let suite = match OperatorSuite::assemble(&spec) {
                Ok(s) => s,
                Err(e) => return Outcome::error(EXIT_CHECK_FAILED, e),
            };
            let r = match report_for(&suite) {
                Ok(r) => r,
                Err(e) => return Outcome::error(EXIT_CHECK_FAILED, e),
            };
            let text = match common.format {
                Format::Table => report::report_table(&r),
                Format::Json => report::report_json(&r, None),
            };
            emit(&common.out, text, EXIT_OK)
        }
        Command::Verify {
            common,
            params,
            suites,
            strict,
        } => {
            let spec = match load(&common.spec, &params) {
                Ok(s) => s,
                Err(e) => return Outcome::error(EXIT_USAGE, e),
            };
            let suite = match OperatorSuite::assemble(&spec) {
                Ok(s) => s,
                Err(e) => return Outcome::error(EXIT_CHECK_FAILED, e),
            };
            let r = match report_for(&suite) {
                Ok(r) => r,
                Err(e) => return Outcome::error(EXIT_CHECK_FAILED, e),
            };
            let all = match verify::verify_all(&suite, &r) {
                Ok(c) => c,
                Err(e) => return Outcome::error(EXIT_CHECK_FAILED, e),
            };
            let checks: Vec<CheckResult> = all
                .into_iter()
                .filter(|c| suites.is_empty() || suites.contains(&suite_of(&c.id)))
                .collect();
            let failed = checks
                .iter()
                .any(|c| c.failed() || (strict && !suites.is_empty() && c.status == CheckStatus::NotApplicable));
            let text = match common.format {
                Format::Table => format!("{}\n{}", r.name, report::checks_table(&checks)),
                Format::Json => report::checks_json(&r, &checks),
            };
            emit(&common.out, text, if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
        Command::Sweep { common, param, values } => {
            let template = match load_template(&common.spec) {
                Ok(t) => t,
                Err(e) => return Outcome::error(EXIT_USAGE, e),
            };
            let values = match specfile::parse_rational_list(&values) {
                Ok(v) => v,
                Err(e) => return Outcome::error(EXIT_USAGE, format!("--values: {e}")),
            };
            let result = match verify::sweep(&template, &param, &values) {
                Ok(r) => r,
                Err(e) => return Outcome::error(EXIT_USAGE, e),
            };
            let text = match common.format {
                Format::Table => report::sweep_table(&result),
                Format::Json => report::sweep_json(&result),
            };
            emit(&common.out, text, if result.failed() { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
    }
}

fn load(spec: &str, params: &[String]) -> Result<crate::ManifoldSpec, String> {
    let template = load_template(spec)?;
    let overrides = parse_params(params)?;
    template.instantiate(&overrides).map_err(|e| e.to_string())
}
