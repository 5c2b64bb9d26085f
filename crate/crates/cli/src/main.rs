use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use closurium::algebra::DEFAULT_ENUMERATION_CAP;
use closurium::doctrine::{check_closure_laws, CheckMode, Law};
use closurium::logic::{self, parse_formula, Context, EvalOptions};
use closurium::sequent::{check_derivation, load_derivation, soundness_check};
use closurium::spaces::pgm::GrayImage;
use closurium::spaces::{atom_value, load_model, PointBackend, Space, SpaceModel, Value};
use closurium::Error;

const VERSION: &str = env!("CARGO_PKG_VERSION");
const CAP_ENV: &str = "CLOSURIUM_CAP";

#[derive(Parser, Debug)]
#[command(name = "closurium", version, about = "Spatial model checking over finite closure spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Pgm,
    Table,
}

#[derive(clap::Args, Debug, Clone)]
struct Caps {
    /// Enumeration cap for oracles and exhaustive law checks
    /// [default: $CLOSURIUM_CAP, else 65536 for evaluation and 2^20 for laws].
    #[arg(long)]
    cap: Option<u64>,
    /// Path-count cap for path enumeration.
    #[arg(long, default_value_t = logic::ops::PATH_CAP)]
    path_cap: u64,
    /// Seed recorded in reports and used by sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on a model.
    Check {
        /// Model descriptor (JSON)
        #[arg(short, long)]
        model: PathBuf,
        /// Formula to evaluate
        #[arg(short, long)]
        formula: String,
        /// Context such as `x:X, y:X`; empty for propositional evaluation.
        #[arg(long, default_value = "")]
        ctx: String,
        /// Extra atom valuation `name=file.json`, e.g. a previous `check` result.
        #[arg(long = "atom", value_name = "NAME=FILE")]
        atoms: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Check closure-operator laws of a model's space.
    Laws {
        /// Model descriptor (JSON)
        #[arg(short, long)]
        model: PathBuf,
        /// Comma-separated law names; all laws by default.
        #[arg(long, value_delimiter = ',')]
        laws: Vec<String>,
        /// Sample this many elements instead of enumerating the algebra.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Check a derivation, optionally evaluating it on models.
    Prove {
        /// Derivation tree (JSON)
        #[arg(short, long)]
        derivation: PathBuf,
        /// Model to evaluate the derivation on; repeatable
        #[arg(short, long = "model")]
        models: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Unsound(Json),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Unsupported(_) | Error::TooLarge { .. }) => 3,
            Failure::Core(Error::RuleViolation { .. }) | Failure::Unsound(_) => 4,
            Failure::Core(_) | Failure::Usage(_) => 2,
        }
    }
}

type Outcome = Result<Vec<u8>, Failure>;

impl Caps {
    fn enumeration(&self, default: u64) -> Result<u64, Failure> {
        let cap = match self.cap {
            Some(c) => c,
            None => match std::env::var(CAP_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("{CAP_ENV} must be a positive integer, got `{v}`")))?,
                Err(_) => default,
            },
        };
        if cap == 0 || self.path_cap == 0 {
            return Err(Failure::Usage("caps must be positive".into()));
        }
        Ok(cap)
    }

    fn header(&self, cap: u64) -> Json {
        json!({
            "tool": "closurium",
            "version": VERSION,
            "seed": self.seed,
            "caps": {"enumeration": cap, "path": self.path_cap},
        })
    }
}

fn merge(mut header: Json, body: Json) -> Json {
    if let (Some(h), Json::Object(b)) = (header.as_object_mut(), body) {
        h.extend(b);
    }
    header
}

fn json_bytes(v: &Json) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("json values serialize");
    out.push(b'\n');
    out
}

fn load_atom(model: &mut SpaceModel, spec: &str) -> Result<(), Failure> {
    let (name, file) = spec
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("--atom expects NAME=FILE, got `{spec}`")))?;
    let path = Path::new(file);
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let doc: Json = serde_json::from_str(&text).map_err(Error::from)?;
    // accept a whole `check` report as well as a bare valuation
    let v = doc.get("result").unwrap_or(&doc);
    let value = atom_value(model.space(), v, path.parent())?;
    model.set_atom(name, value)?;
    Ok(())
}

fn dot(space: &Space, value: &Value, formula: &str) -> Result<Vec<u8>, Failure> {
    let p = space
        .as_points()
        .ok_or_else(|| Error::Unsupported("dot output for fuzzy spaces".into()))?;
    let set = value.points().ok_or(Error::AlgebraMismatch)?;
    let mut s = String::from("digraph closurium {\n");
    s.push_str(&format!("  label={:?};\n  node [style=filled];\n", formula));
    for x in 0..p.len() {
        let color = if set.contains(x) { "gold" } else { "white" };
        s.push_str(&format!("  n{x} [label={:?}, fillcolor={color}];\n", p.carrier().name(x)));
    }
    for x in 0..p.len() {
        for y in p.steps().successors(x) {
            s.push_str(&format!("  n{x} -> n{y};\n"));
        }
    }
    s.push_str("}\n");
    Ok(s.into_bytes())
}

fn pgm(space: &Space, value: &Value) -> Result<Vec<u8>, Failure> {
    let grid = match space.as_points().map(|p| p.backend()) {
        Some(PointBackend::Grid(g)) => g,
        _ => return Err(Error::Unsupported("pgm output needs a grid model".into()).into()),
    };
    let set = value.points().ok_or(Error::AlgebraMismatch)?;
    Ok(GrayImage::from_set(grid.width(), grid.height(), set).to_p5())
}

fn table(space: &Space, value: &Value) -> Vec<u8> {
    let mut s = String::new();
    match value {
        Value::Set(_) => {
            let set = value.points().expect("set value");
            for x in 0..space.len() {
                s.push_str(&format!("{}\t{}\n", space.carrier().name(x), u8::from(set.contains(x))));
            }
        }
        Value::Fuzzy(_) => {
            if let Json::Object(m) = space.describe(value) {
                for (k, v) in m {
                    s.push_str(&format!("{k}\t{}\n", v.as_str().unwrap_or_default()));
                }
            }
        }
    }
    s.into_bytes()
}

fn cmd_check(
    model_path: &Path,
    formula: &str,
    ctx: &str,
    atoms: &[String],
    format: Format,
    caps: &Caps,
) -> Outcome {
    let mut model = load_model(model_path)?;
    for a in atoms {
        load_atom(&mut model, a)?;
    }
    let f = parse_formula(formula)?;
    let ctx = Context::parse(ctx)?;
    let cap = caps.enumeration(logic::ops::UNTIL_ORACLE_CAP)?;
    let opts = EvalOptions {
        until_cap: cap,
        path_cap: caps.path_cap,
        ..EvalOptions::default()
    };
    let value = logic::eval_with(&model, &ctx, &f, &opts)?;
    let space = logic::context_space(&model, &ctx)?;
    match format {
        Format::Json => {
            let body = json!({
                "model": model_path.display().to_string(),
                "space": model.space().kind(),
                "formula": f.to_string(),
                "ctx": ctx.to_string(),
                "result": space.describe(&value),
            });
            Ok(json_bytes(&merge(caps.header(cap), body)))
        }
        Format::Dot => dot(&space, &value, &f.to_string()),
        Format::Pgm => pgm(&space, &value),
        Format::Table => Ok(table(&space, &value)),
    }
}

fn cmd_laws(model_path: &Path, names: &[String], samples: Option<usize>, format: Format, caps: &Caps) -> Outcome {
    let model = load_model(model_path)?;
    let laws = if names.is_empty() {
        Law::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|n| Law::from_name(n.trim()).ok_or_else(|| Failure::Usage(format!("unknown law `{n}`"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    let cap = caps.enumeration(DEFAULT_ENUMERATION_CAP)?;
    let mode = match samples {
        Some(samples) => CheckMode::Sampled {
            samples,
            seed: caps.seed,
        },
        None => CheckMode::Exhaustive { cap },
    };
    let report = match model.space() {
        Space::Points(p) => check_closure_laws(p, mode, &laws)?.to_json(p.algebra()),
        Space::Fuzzy(f) => check_closure_laws(f, mode, &laws)?.to_json(f.algebra()),
    };
    match format {
        Format::Json => {
            let body = json!({
                "model": model_path.display().to_string(),
                "space": model.space().kind(),
                "report": report,
            });
            Ok(json_bytes(&merge(caps.header(cap), body)))
        }
        Format::Table => {
            let mut s = String::new();
            if let Some(m) = report["laws"].as_object() {
                for (law, v) in m {
                    s.push_str(&format!("{law}\t{}", v["status"].as_str().unwrap_or_default()));
                    if let Some(w) = v.get("witness") {
                        s.push_str(&format!("\t{w}"));
                    }
                    s.push('\n');
                }
            }
            Ok(s.into_bytes())
        }
        Format::Dot | Format::Pgm => Err(Failure::Usage("laws supports json and table output".into())),
    }
}

fn cmd_prove(path: &Path, model_paths: &[PathBuf], format: Format, caps: &Caps) -> Outcome {
    let d = load_derivation(path)?;
    let header = caps.header(caps.enumeration(logic::ops::UNTIL_ORACLE_CAP)?);
    check_derivation(&d)?;
    let models = model_paths
        .iter()
        .map(|p| load_model(p))
        .collect::<closurium::Result<Vec<_>>>()?;
    let report = soundness_check(&d, &models)?;
    let rows: Vec<Json> = report
        .verdicts
        .iter()
        .map(|v| json!({"model": model_paths[v.model].display().to_string(), "satisfied": v.satisfied}))
        .collect();
    let body = json!({
        "derivation": path.display().to_string(),
        "conclusion": d.conclusion.to_string(),
        "valid": true,
        "nodes": d.size(),
        "models": rows,
        "unsound": report.unsound.as_ref().map(|u| json!({
            "path": u.path, "rule": u.rule, "sequent": u.sequent,
            "model": model_paths[u.model].display().to_string(),
        })),
    });
    let doc = merge(header, body);
    if !report.all_satisfied() {
        return Err(Failure::Unsound(doc));
    }
    Ok(match format {
        Format::Table => {
            let mut s = format!("valid\t{}\n", d.conclusion);
            for r in &rows {
                s.push_str(&format!("{}\t{}\n", r["model"].as_str().unwrap_or_default(), r["satisfied"]));
            }
            s.into_bytes()
        }
        _ => json_bytes(&doc),
    })
}

fn emit(bytes: &[u8], output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Check {
            model,
            formula,
            ctx,
            atoms,
            format,
            output,
            caps,
        } => (cmd_check(model, formula, ctx, atoms, *format, caps), output),
        Command::Laws {
            model,
            laws,
            samples,
            format,
            output,
            caps,
        } => (cmd_laws(model, laws, *samples, *format, caps), output),
        Command::Prove {
            derivation,
            models,
            format,
            output,
            caps,
        } => (cmd_prove(derivation, models, *format, caps), output),
    };
    match result {
        Ok(bytes) => match emit(&bytes, output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("closurium: {e}");
                ExitCode::from(2)
            }
        },
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("closurium: {e}"),
                Failure::Usage(m) => eprintln!("closurium: {m}"),
                Failure::Unsound(doc) => {
                    eprintln!("closurium: derivation is not satisfied by every model");
                    let _ = emit(&json_bytes(doc), output.as_deref());
                }
            }
            ExitCode::from(f.code())
        }
    }
}
