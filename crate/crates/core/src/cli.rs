//! Command-line surface. Exit codes: 0 when every verdict passes, 1 when a
//! verdict fails, 2 on malformed input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::casebook::{dim_bound, nilpotent_type, run_casebook_1111, CasebookOptions, DimBoundInput};
use crate::docs::{self, DimBoundDoc, FormDoc, NilpotentDoc, OrbitDoc, SubspaceDoc};
use crate::fans::{
    build_sigma_s, check_gamma_compatibility, reduce_binary_form, validate_fan, Compatibility,
    FanViolation,
};
use crate::hodge::{
    breve_lift, check_nilpotent_orbit, classify_cone, HodgeError,
};
use crate::linalg::format_rational;
use crate::symplectic::{IsotropicSubspace, SymplecticSpace};

#[derive(Parser, Debug)]
#[command(name = "hodge-fans", version, about = "Nilpotent cones, fans and degenerating Hodge filtrations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type and even/odd classification of a nilpotent or cone.
    Classify { file: PathBuf },
    /// Build and validate a truncation of the fan Σ(S).
    Fan {
        file: PathBuf,
        #[arg(long)]
        word_bound: Option<usize>,
    },
    /// Reduce a positive definite binary form into σ₀.
    Reduce { file: PathBuf },
    /// Check the nilpotent-orbit conditions.
    CheckOrbit { file: PathBuf },
    /// Lift a Siegel-side boundary point to the target Hodge numbers.
    Lift { file: PathBuf },
    /// Evaluate the dimension bound for a boundary component.
    DimBound { file: PathBuf },
    /// Run the (1,1,1,1) casebook.
    Casebook {
        /// Override h^(0,-1).
        #[arg(long)]
        h01: Option<usize>,
        /// Add the type-III nilpotent to the fan input.
        #[arg(long)]
        inject_type_three: bool,
    },
}

/// Output of one command: the rendered text, the JSON value and whether all
/// verdicts passed.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn parse_file<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let text = read(path)?;
    docs::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn with_path<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, InputError> {
    r.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn classify(path: &Path) -> Result<Outcome, InputError> {
    let doc: NilpotentDoc = parse_file(path)?;
    let cone = with_path(path, doc.cone())?;
    if cone.is_zero() {
        return Err(InputError(format!("{}: {}", path.display(), HodgeError::ZeroNilpotent)));
    }
    let mut text = String::new();
    let mut gens = Vec::new();
    for (i, g) in cone.generators().iter().enumerate() {
        let ty = if cone.space().n() == 2 {
            nilpotent_type(g).to_string()
        } else {
            "n/a".to_string()
        };
        let _ = writeln!(
            text,
            "generator {i}: rank {}, nilpotency index {}, N^2 = 0: {}, type {ty}",
            g.rank(),
            g.nilpotency_index(),
            g.is_square_zero()
        );
        gens.push(json!({
            "rank": g.rank(),
            "nilpotency_index": g.nilpotency_index(),
            "square_zero": g.is_square_zero(),
            "type": ty,
        }));
    }
    let (cone_type, pass) = match classify_cone(&cone, &[]) {
        Ok(t) => (t.to_string(), t != crate::hodge::ConeType::Neither),
        Err(HodgeError::NotSquareZero) | Err(HodgeError::TypeThree) => ("not square-zero".to_string(), false),
        Err(e) => return Err(InputError(format!("{}: {e}", path.display()))),
    };
    let _ = writeln!(text, "cone: {cone_type}");
    Ok(Outcome {
        text,
        json: json!({"generators": gens, "cone_type": cone_type}),
        pass,
    })
}

fn fan(path: &Path, word_bound: Option<usize>) -> Result<Outcome, InputError> {
    let doc: SubspaceDoc = parse_file(path)?;
    let sp = SymplecticSpace::new(doc.n);
    let basis = with_path(path, docs::rat_matrix_from_doc("basis", &doc.basis))?;
    if basis.cols() != sp.dim() {
        return Err(InputError(format!(
            "{}: field `basis`: expected rows of length {}",
            path.display(),
            sp.dim()
        )));
    }
    let s = with_path(path, IsotropicSubspace::span(sp, &basis.row_vectors()))?;
    let bound = word_bound.or(doc.word_bound).unwrap_or(2);
    let fan = with_path(path, build_sigma_s(&s, bound))?;
    let validation = validate_fan(&fan);
    let mut by_dim = std::collections::BTreeMap::new();
    for c in fan.cones() {
        *by_dim.entry(c.dim()).or_insert(0usize) += 1;
    }
    let violation = match &validation.violation {
        None => None,
        Some(FanViolation::MissingFace { cone, .. }) => Some(format!("cone {cone} has an unlisted face")),
        Some(FanViolation::BadIntersection { first, second }) => {
            Some(format!("cones {first} and {second} meet outside a common face"))
        }
    };
    let mut compat = Vec::new();
    let mut conflict = false;
    for g in fan.group_gens() {
        let v = with_path(path, check_gamma_compatibility(&fan, g))?;
        conflict |= matches!(v, Compatibility::Incompatible { .. });
        compat.push(v.label());
    }
    let mut text = String::new();
    let _ = writeln!(text, "dim S = {}, word bound {bound}, {} cones", s.dim(), fan.len());
    for (d, c) in &by_dim {
        let _ = writeln!(text, "  dim {d}: {c}");
    }
    let _ = writeln!(text, "fan valid: {}", validation.is_valid());
    if let Some(v) = &violation {
        let _ = writeln!(text, "violation: {v}");
    }
    let _ = writeln!(text, "generator compatibility: {}", compat.join(", "));
    let counts: std::collections::BTreeMap<String, usize> = by_dim.iter().map(|(d, c)| (d.to_string(), *c)).collect();
    Ok(Outcome {
        text,
        json: json!({
            "dim_s": s.dim(),
            "word_bound": bound,
            "cones": fan.len(),
            "cones_by_dim": counts,
            "valid": validation.is_valid(),
            "violation": violation,
            "compatibility": compat,
        }),
        pass: validation.is_valid() && !conflict,
    })
}

fn reduce(path: &Path) -> Result<Outcome, InputError> {
    let doc: FormDoc = parse_file(path)?;
    let x = with_path(path, docs::rat_matrix_from_doc("form", &doc.form))?;
    let r = with_path(path, reduce_binary_form(&x))?;
    let check = r.gamma.mul(&x).and_then(|y| y.mul(&r.gamma.transpose()))? == r.reduced;
    let fmt_m = |m: &crate::linalg::RatMatrix| {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(format_rational).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let (a, b, c) = &r.coords;
    let text = format!(
        "gamma = [{}]\nreduced = [{}]\nsigma_0 coordinates = ({}, {}, {})\ncertificate holds: {check}\n",
        fmt_m(&r.gamma),
        fmt_m(&r.reduced),
        format_rational(a),
        format_rational(b),
        format_rational(c)
    );
    Ok(Outcome {
        text,
        json: json!({
            "gamma": docs::rat_matrix_to_doc(&r.gamma),
            "reduced": docs::rat_matrix_to_doc(&r.reduced),
            "coordinates": [format_rational(a), format_rational(b), format_rational(c)],
            "steps": r.steps,
            "certificate": check,
        }),
        pass: check,
    })
}

fn check_orbit(path: &Path) -> Result<Outcome, InputError> {
    let doc: OrbitDoc = parse_file(path)?;
    let (cone, f, h) = with_path(path, doc.parts())?;
    let rep = with_path(path, check_nilpotent_orbit(&cone, &f, &h))?;
    let flags = [
        ("dimensions", rep.dimensions),
        ("compact_dual", rep.compact_dual),
        ("horizontal", rep.horizontal),
        ("mixed_hodge", rep.mixed_hodge),
        ("polarized", rep.polarized),
        ("sampled", rep.sampled),
    ];
    let mut text = String::new();
    for (name, ok) in flags {
        let _ = writeln!(text, "{name}: {}", if ok { "pass" } else { "fail" });
    }
    let _ = writeln!(text, "nilpotent orbit: {}", rep.passes());
    let mut obj = serde_json::Map::new();
    for (name, ok) in flags {
        obj.insert(name.to_string(), Value::Bool(ok));
    }
    obj.insert("nilpotent_orbit".into(), Value::Bool(rep.passes()));
    Ok(Outcome {
        text,
        json: Value::Object(obj),
        pass: rep.passes(),
    })
}

fn lift(path: &Path) -> Result<Outcome, InputError> {
    let doc: OrbitDoc = parse_file(path)?;
    let (cone, f, _) = with_path(path, doc.parts())?;
    let target = doc
        .target_hodge
        .as_ref()
        .ok_or_else(|| InputError(format!("{}: field `target_hodge` is required", path.display())))?;
    let target = with_path(path, docs::hodge_from_doc("target_hodge", target))?;
    match breve_lift(&cone, &f, &target) {
        Ok(pt) => {
            let out = OrbitDoc::from_parts(&pt.cone, &pt.filtration, &pt.hodge_numbers);
            let value = serde_json::to_value(&out)?;
            Ok(Outcome {
                text: format!("lift:\n{}\n", serde_json::to_string_pretty(&value)?),
                json: json!({"lifted": true, "orbit": value}),
                pass: true,
            })
        }
        Err(HodgeError::Obstruction { m, h01 }) => Ok(Outcome {
            text: format!("obstructed: dim Im N = {m} > h^(0,-1) = {h01}\n"),
            json: json!({"lifted": false, "obstruction": {"m": m, "h01": h01}}),
            pass: false,
        }),
        Err(e) => Err(InputError(format!("{}: {e}", path.display()))),
    }
}

fn dim_bound_cmd(path: &Path) -> Result<Outcome, InputError> {
    let doc: DimBoundDoc = parse_file(path)?;
    let h_prime = with_path(path, docs::hodge_from_doc("h_prime", &doc.h_prime))?;
    let hodge = match &doc.hodge {
        Some(h) => Some(with_path(path, docs::hodge_from_doc("hodge", h))?),
        None => None,
    };
    let input = DimBoundInput {
        n: doc.n,
        m: doc.m,
        dim_sigma: doc.dim_sigma,
        h_prime,
        hodge,
    };
    let b = with_path(path, dim_bound(&input))?;
    Ok(Outcome {
        text: format!(
            "bound = {}\nequality case: {}\n",
            format_rational(&b.bound),
            b.is_equality_case
        ),
        json: serde_json::to_value(&b)?,
        pass: true,
    })
}

fn casebook(h01: Option<usize>, inject_type_three: bool) -> Result<Outcome, InputError> {
    let r = run_casebook_1111(&CasebookOptions { h01, inject_type_three })?;
    Ok(Outcome {
        text: r.to_text(),
        json: serde_json::to_value(&r)?,
        pass: r.passes(),
    })
}

/// Runs the CLI on `args` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Classify { file } => classify(file),
        Command::Fan { file, word_bound } => fan(file, *word_bound),
        Command::Reduce { file } => reduce(file),
        Command::CheckOrbit { file } => check_orbit(file),
        Command::Lift { file } => lift(file),
        Command::DimBound { file } => dim_bound_cmd(file),
        Command::Casebook { h01, inject_type_three } => casebook(*h01, *inject_type_three),
    };
    match result {
        Ok(o) => {
            let _ = match cli.format {
                Format::Text => write!(out, "{}", o.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
            };
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(args, &mut stdout.lock(), &mut stderr.lock())
}
