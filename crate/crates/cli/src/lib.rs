//! Command implementations behind the `modcat` binary. Every command returns
//! an [`Outcome`] so tests can drive the tool without spawning processes.

mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use modcat_core::catalog;
use modcat_core::condense::{self, CocycleOverride, CondenseOptions};
use modcat_core::exchange::{CocycleJson, ExchangeDocument, GroupJson, TannakianHints};
use modcat_core::fusion::RingCheckOptions;
use modcat_core::ribbon::{self, CategorySpec};
use modcat_core::tannakian::{self, Cocycle, FiniteGroup, GroupData, TannakianSubcat};
use modcat_core::Error;

pub use report::AnalyzeReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGENERACY: i32 = 3;
pub const EXIT_NEEDS_COCYCLE: i32 = 4;
pub const EXIT_AMBIGUOUS: i32 = 5;

/// What a command produced: an exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "modcat", version, about = "Modularity diagnosis and condensation of skeletal ribbon categories")]
pub struct Cli {
    /// Report format for validate, analyze, h2, catalog list and errors.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the primary output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check fusion-ring axioms, twists and exact dims.
    Validate {
        path: PathBuf,
        /// Report Frobenius-symmetry failures as warnings.
        #[arg(long)]
        frobenius_warn: bool,
    },
    /// Dims, centre, S-matrix, modularity and the Tannakian part.
    Analyze {
        path: PathBuf,
        /// Include the unnormalized S-matrix.
        #[arg(long)]
        show_s: bool,
        /// Allow a non-certified floating-point verdict without exact dims.
        #[arg(long)]
        numeric_fallback: bool,
        /// Group data file for a non-pointed Tannakian subcategory.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Condense a Tannakian subcategory and emit the condensed document.
    Condense {
        path: PathBuf,
        /// `auto`, `pointed` (alias `1-dims`) or a comma-separated label list.
        #[arg(long, default_value = "auto")]
        subcat: String,
        /// Group data file: group table, character table, label_to_irrep.
        #[arg(long)]
        group: Option<PathBuf>,
        /// Stabilizer cocycles: `rep=class_id,...` or a JSON file.
        #[arg(long)]
        cocycle: Option<String>,
    },
    /// Built-in categories.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Schur multiplier H²(G, 𝕋) of a group file or a group name like Z2xZ2.
    H2 { group: String },
    /// Deligne product of two documents.
    Product { left: PathBuf, right: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Dump {
        name: String,
        /// Include the group and character table of symmetric entries.
        #[arg(long)]
        with_hints: bool,
    },
}

/// Maps a library error onto the exit-code contract.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::DegeneracyViolation { .. } => EXIT_DEGENERACY,
        Error::NeedsCocycle { .. } => EXIT_NEEDS_COCYCLE,
        Error::Ambiguous { .. } | Error::NeedsGroup(_) => EXIT_AMBIGUOUS,
        _ => EXIT_INVALID,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::UnknownLabel(_) => "unknown_label",
        Error::Structural(_) => "structural",
        Error::InvalidData(_) => "invalid_data",
        Error::ExactDimsRequired(_) => "exact_dims_required",
        Error::ChannelAbsent { .. } => "channel_absent",
        Error::DataInconsistency(_) => "data_inconsistency",
        Error::Precondition(_) => "precondition",
        Error::ResourceLimit(_) => "resource_limit",
        Error::Unsupported(_) => "unsupported",
        Error::InvalidSubcategory(_) => "invalid_subcategory",
        Error::GroupMismatch { .. } => "group_mismatch",
        Error::NeedsGroup(_) => "needs_group",
        Error::DegeneracyViolation { .. } => "degeneracy_violation",
        Error::NeedsCocycle { .. } => "needs_cocycle",
        Error::Ambiguous { .. } => "ambiguous",
        Error::Inconsistent(_) => "inconsistent",
        Error::Parse(_) => "parse",
    }
}

fn error_json(e: &Error) -> serde_json::Value {
    let mut v = serde_json::json!({ "kind": error_kind(e), "message": e.to_string() });
    match e {
        Error::DegeneracyViolation {
            label,
            partner,
            channel,
            phase,
        } => {
            v["witness"] = serde_json::json!({
                "label": label, "partner": partner, "channel": channel, "phase": phase
            });
        }
        Error::GroupMismatch { triple: Some((a, b, c)), .. } => {
            v["triple"] = serde_json::json!([a, b, c]);
        }
        Error::NeedsCocycle { orbits, candidates } => {
            v["orbits"] = serde_json::json!(orbits);
            v["candidates"] = serde_json::json!(candidates);
        }
        Error::Ambiguous { count, .. } => {
            v["count"] = serde_json::json!(count);
        }
        _ => {}
    }
    serde_json::json!({ "error": v })
}

fn fail(e: Error, format: Format) -> Outcome {
    let code = exit_code(&e);
    let stdout = match format {
        Format::Json => pretty(&error_json(&e)),
        Format::Text => String::new(),
    };
    Outcome {
        code,
        stdout,
        stderr: format!("error: {e}\n"),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Reads a document and builds its category; any failure here is a parse
/// failure, since the data never reached the checks.
fn load(path: &Path) -> Result<(ExchangeDocument, CategorySpec), Error> {
    let doc = ExchangeDocument::parse(&read(path)?)?;
    let spec = doc.spec().map_err(|e| match e {
        Error::Parse(_) => e,
        other => Error::Parse(other.to_string()),
    })?;
    Ok((doc, spec))
}

fn load_group_file(path: &Path) -> Result<GroupData, Error> {
    let hints: TannakianHints =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc = ExchangeDocument {
        tannakian: Some(hints),
        ..ExchangeDocument::from_spec(&catalog::load_named("trivial")?, None)
    };
    doc.group_data()?
        .ok_or_else(|| Error::Parse(format!("{}: no group in the group file", path.display())))
}

fn group_source(doc: &ExchangeDocument, file: Option<&Path>) -> Result<Option<GroupData>, Error> {
    match file {
        Some(p) => load_group_file(p).map(Some),
        None => doc.group_data(),
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let out = execute(&cli);
    match (&cli.out, out.code) {
        (Some(path), EXIT_OK) => match std::fs::write(path, &out.stdout) {
            Ok(()) => Outcome {
                stdout: String::new(),
                ..out
            },
            Err(e) => Outcome {
                code: EXIT_INVALID,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        _ => out,
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let format = cli.format;
    let res = match &cli.command {
        Command::Validate { path, frobenius_warn } => cmd_validate(path, *frobenius_warn, format),
        Command::Analyze {
            path,
            show_s,
            numeric_fallback,
            group,
        } => cmd_analyze(path, *show_s, *numeric_fallback, group.as_deref(), format),
        Command::Condense {
            path,
            subcat,
            group,
            cocycle,
        } => cmd_condense(path, subcat, group.as_deref(), cocycle.as_deref()),
        Command::Catalog { action } => cmd_catalog(action, format),
        Command::H2 { group } => cmd_h2(group, format),
        Command::Product { left, right } => cmd_product(left, right),
    };
    res.unwrap_or_else(|e| fail(e, format))
}

pub fn cmd_validate(path: &Path, frobenius_warn: bool, format: Format) -> Result<Outcome, Error> {
    let (_, spec) = load(path)?;
    let report = ribbon::validate_spec(
        &spec,
        RingCheckOptions {
            frobenius_as_warning: frobenius_warn,
        },
    );
    let stdout = match format {
        Format::Json => pretty(&serde_json::json!({
            "passed": report.passed(),
            "violations": report.violations,
            "warnings": report.warnings,
        })),
        Format::Text => {
            let mut s = String::new();
            for v in &report.violations {
                let _ = writeln!(
                    s,
                    "violation {:?}: witness ({}) : {} [{} failing]",
                    v.kind,
                    v.witness.join(", "),
                    v.detail,
                    v.count
                );
            }
            for v in &report.warnings {
                let _ = writeln!(s, "warning {:?}: witness ({}) : {}", v.kind, v.witness.join(", "), v.detail);
            }
            let _ = writeln!(s, "{}", if report.passed() { "valid" } else { "invalid" });
            s
        }
    };
    Ok(Outcome {
        code: if report.passed() { EXIT_OK } else { EXIT_INVALID },
        stdout,
        stderr: String::new(),
    })
}

fn ensure_valid(spec: &CategorySpec) -> Result<(), Error> {
    let report = ribbon::validate_spec(spec, RingCheckOptions::default());
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidData(format!(
            "the category fails validation: {:?} at ({})",
            v.kind,
            v.witness.join(", ")
        ))),
    }
}

pub fn cmd_analyze(
    path: &Path,
    show_s: bool,
    numeric_fallback: bool,
    group: Option<&Path>,
    format: Format,
) -> Result<Outcome, Error> {
    let (doc, spec) = load(path)?;
    ensure_valid(&spec)?;
    let data = group_source(&doc, group)?;
    let report = report::analyze(&spec, show_s, numeric_fallback, data.as_ref())?;
    let stdout = match format {
        Format::Json => pretty(&report),
        Format::Text => report.to_text(),
    };
    Ok(Outcome::ok(stdout))
}

/// Resolves `--subcat`.
pub fn select_subcategory(spec: &CategorySpec, doc: &ExchangeDocument, subcat: &str) -> Result<TannakianSubcat, Error> {
    match subcat {
        "auto" => match doc.subcategory_hint() {
            Some(labels) => tannakian::subcategory_from_labels(spec, labels),
            None => tannakian::maximal_tannakian(spec),
        },
        "pointed" | "1-dims" => {
            let full = tannakian::maximal_tannakian(spec)?;
            tannakian::pointed_part(spec, &full)
        }
        list => {
            let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            tannakian::subcategory_from_labels(spec, &names)
        }
    }
}

fn parse_cocycles(arg: Option<&str>) -> Result<BTreeMap<String, CocycleOverride>, Error> {
    let Some(arg) = arg else { return Ok(BTreeMap::new()) };
    let path = Path::new(arg);
    if path.exists() {
        let map: BTreeMap<String, CocycleJson> =
            serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        let mut out = BTreeMap::new();
        for (k, v) in map {
            let o = match v {
                CocycleJson::ClassId { class_id } => CocycleOverride::ClassId(class_id),
                CocycleJson::Values { values } => CocycleOverride::Values(Cocycle::from_values(&values)?),
            };
            out.insert(k, o);
        }
        return Ok(out);
    }
    let mut out = BTreeMap::new();
    for item in arg.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("cocycle override `{item}` is not `label=class_id`")))?;
        let id = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("class id `{v}` is not a number")))?;
        out.insert(k.trim().to_string(), CocycleOverride::ClassId(id));
    }
    Ok(out)
}

pub fn cmd_condense(path: &Path, subcat: &str, group: Option<&Path>, cocycle: Option<&str>) -> Result<Outcome, Error> {
    let (doc, spec) = load(path)?;
    ensure_valid(&spec)?;
    let mut cocycles = doc.cocycle_overrides()?;
    cocycles.extend(parse_cocycles(cocycle)?);
    let t = select_subcategory(&spec, &doc, subcat)?;
    let opts = CondenseOptions {
        group: group_source(&doc, group)?,
        cocycles,
    };
    let result = condense::condense(&spec, &t, &opts)?;
    let out = ExchangeDocument::from_condensation(&result, &spec, &t);
    Ok(Outcome::ok(out.to_json()))
}

pub fn cmd_catalog(action: &CatalogAction, format: Format) -> Result<Outcome, Error> {
    match action {
        CatalogAction::List => {
            let entries = catalog::entries();
            let stdout = match format {
                Format::Json => pretty(
                    &entries
                        .iter()
                        .map(|e| {
                            serde_json::json!({
                                "name": e.name,
                                "rank": e.spec.rank(),
                                "provenance": e.provenance,
                            })
                        })
                        .collect::<Vec<_>>(),
                ),
                Format::Text => entries
                    .iter()
                    .map(|e| format!("{:<11} rank {:<2} {}\n", e.name, e.spec.rank(), e.provenance))
                    .collect(),
            };
            Ok(Outcome::ok(stdout))
        }
        CatalogAction::Dump { name, with_hints } => {
            let e = catalog::entry(name)?;
            let mut doc = ExchangeDocument::from_spec(&e.spec, Some(e.name));
            if *with_hints {
                if let Some(g) = catalog::group_hint(name) {
                    doc = doc.with_group(None, &g);
                }
            }
            Ok(Outcome::ok(doc.to_json()))
        }
    }
}

pub fn cmd_h2(group: &str, format: Format) -> Result<Outcome, Error> {
    let path = Path::new(group);
    let g = if path.exists() {
        let gj: GroupJson = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{group}: {e}")))?;
        gj.to_group()?
    } else {
        FiniteGroup::named(group).map_err(|_| Error::Parse(format!("`{group}` is neither a group file nor a group name")))?
    };
    let h = tannakian::h2(&g)?;
    let gens: Vec<serde_json::Value> = h
        .generators()
        .iter()
        .map(|c| {
            let exps: Vec<Vec<u32>> = g
                .elements()
                .map(|a| g.elements().map(|b| c.exponent(a, b)).collect())
                .collect();
            serde_json::json!({ "base": c.base(), "exponents": exps })
        })
        .collect();
    let stdout = match format {
        Format::Json => pretty(&serde_json::json!({
            "group_order": g.order(),
            "invariants": h.invariants(),
            "order": h.order(),
            "generators": gens,
        })),
        Format::Text => {
            let desc = if h.is_trivial() {
                "trivial".to_string()
            } else {
                h.invariants().iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" × ")
            };
            format!("H²(G, T) for |G| = {}: {desc}\n", g.order())
        }
    };
    Ok(Outcome::ok(stdout))
}

pub fn cmd_product(left: &Path, right: &Path) -> Result<Outcome, Error> {
    let (da, a) = load(left)?;
    let (db, b) = load(right)?;
    let p = catalog::deligne_product(&a, &b);
    let name = match (&da.name, &db.name) {
        (Some(x), Some(y)) => Some(format!("{x}⊠{y}")),
        _ => None,
    };
    Ok(Outcome::ok(ExchangeDocument::from_spec(&p, name.as_deref()).to_json()))
}
