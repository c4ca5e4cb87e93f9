//! Argument parsing and command dispatch.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wpl_core::concrete::ConcreteTilting;
use wpl_core::k0::K0;
use wpl_core::tilting::{standard_tilting_data, StandardKind};
use wpl_core::WeightDescriptor;

use crate::session::{class_wire, step_wire, Store};
use crate::suite::{run_suite, CheckReport, SuiteInput, CATALOG};
use crate::wire::{parse_type, poly_wire, type_label, DescriptorWire, LVectorWire, TiltingDatumWire};
use crate::AppError;

#[derive(Parser, Debug)]
#[command(name = "wpltilt", version, about = "Tilting bundles on weighted projective lines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants of a weight type such as `2,3,7` or `2,2,2,3;1,2`
    Describe {
        #[arg(value_name = "TYPE")]
        weight_type: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// The canonical tilting bundle with its quiver
    Canonical {
        #[arg(value_name = "TYPE")]
        weight_type: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Apply reflections to the canonical configuration, in the given order
    Reflect {
        #[arg(long = "type", value_name = "TYPE")]
        weight_type: String,
        #[arg(long, value_delimiter = ',', value_name = "V1,V2,...")]
        seq: Vec<i64>,
        /// Track summands as modules over this twist of the canonical configuration, `arm;c`
        #[arg(long, value_name = "ARM;C")]
        reference: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run a verification suite (`all` runs the whole catalog)
    Check {
        #[arg(long)]
        suite: String,
        /// File holding JSON, a type string or a figure id; inline text is accepted when no such file exists
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Serve the HTTP API
    Serve {
        #[arg(long, env = "WPLTILT_PORT", default_value_t = 8080)]
        port: u16,
        /// File used to persist sessions across restarts
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Tilting datum after a reflection sequence, as JSON or a table
    Export {
        #[arg(long = "type", value_name = "TYPE")]
        weight_type: String,
        #[arg(long, value_delimiter = ',', value_name = "V1,V2,...")]
        seq: Vec<i64>,
        #[arg(long, value_enum)]
        format: Format,
    },
}

/// Result of one invocation: exit code and the two output streams.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match run(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("{}\n", json!({ "error": error_kind(&e), "message": e.to_string() })),
        },
    }
}

fn error_kind(e: &AppError) -> &'static str {
    match e {
        AppError::Input(_) | AppError::Json(_) => "invalid-input",
        AppError::Engine(_) => "engine",
        AppError::UnknownSuite(_) => "unknown-suite",
        AppError::Io(_) => "io",
    }
}

fn ok(stdout: String) -> Result<Outcome, AppError> {
    Ok(Outcome { code: 0, stdout, stderr: String::new() })
}

fn run(cmd: Command) -> Result<Outcome, AppError> {
    match cmd {
        Command::Describe { weight_type, format } => ok(describe(&parse_type(&weight_type)?, format)),
        Command::Canonical { weight_type, format } => {
            let d = parse_type(&weight_type)?;
            let t = ConcreteTilting::canonical(&d)?;
            ok(tilting_output(&t, format, &[]))
        }
        Command::Reflect { weight_type, seq, reference, format } => {
            let d = parse_type(&weight_type)?;
            let mut t = ConcreteTilting::canonical(&d)?;
            if let Some(r) = reference {
                t.retilt_reference(parse_reference(&d, &r)?)?;
            }
            let steps = t.reflect_sequence(&seq)?;
            let k0 = t.k0().clone();
            let steps: Vec<_> = steps.iter().map(|s| step_wire(&k0, s)).collect();
            ok(tilting_output(&t, format, &steps))
        }
        Command::Export { weight_type, seq, format } => {
            let d = parse_type(&weight_type)?;
            let mut t = ConcreteTilting::canonical(&d)?;
            t.reflect_sequence(&seq)?;
            match format {
                Format::Json => {
                    let body = json!({
                        "descriptor": DescriptorWire::from_descriptor(&d),
                        "datum": TiltingDatumWire::from_datum(&t.datum()),
                    });
                    ok(format!("{}\n", serde_json::to_string_pretty(&body)?))
                }
                Format::Table => ok(tilting_output(&t, Format::Table, &[])),
            }
        }
        Command::Check { suite, input, format } => check(&suite, input, format),
        Command::Serve { port, snapshot } => {
            let store = match snapshot {
                Some(p) => Store::load(p)?,
                None => Store::new(None),
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::api::serve(Arc::new(store), port))?;
            ok(String::new())
        }
    }
}

fn parse_reference(d: &WeightDescriptor, s: &str) -> Result<wpl_core::LVector, AppError> {
    let (arm, c) = s.split_once(';').ok_or_else(|| AppError::Input(format!("reference {s:?} is not of the form arm;c")))?;
    let arm = arm
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| AppError::Input(format!("bad arm entry {x:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let c = c.trim().parse::<i64>().map_err(|_| AppError::Input(format!("bad central entry {c:?}")))?;
    LVectorWire { arm, c }.to_lvector(d)
}

fn describe(d: &WeightDescriptor, format: Format) -> String {
    let k0 = K0::new(d);
    let omega = d.omega();
    let psi = k0.coxeter_polynomial();
    match format {
        Format::Json => {
            let body = json!({
                "type": type_label(d),
                "descriptor": DescriptorWire::from_descriptor(d),
                "t": d.t(),
                "n": d.rank(),
                "pbar": d.pbar(),
                "delta_omega": d.delta_omega(),
                "curvature": d.curvature().as_str(),
                "omega": LVectorWire::from(&omega),
                "gorenstein_index": d.gorenstein_index(),
                "coxeter_polynomial": poly_wire(&psi),
                "cartan": k0.cartan().to_rows(),
            });
            format!("{}\n", serde_json::to_string_pretty(&body).expect("plain JSON"))
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{}: n={}, pbar={}, delta(omega)={}, {}",
                type_label(d),
                d.rank(),
                d.pbar(),
                d.delta_omega(),
                d.curvature().as_str()
            );
            let _ = writeln!(out, "weights         {:?}", d.weights());
            let _ = writeln!(out, "omega           {omega}");
            let _ = writeln!(out, "gorenstein      {}", d.gorenstein_index());
            let _ = writeln!(out, "coxeter poly    {psi}");
            out
        }
    }
}

fn tilting_output(t: &ConcreteTilting, format: Format, steps: &[crate::session::StepWire]) -> String {
    let k0 = t.k0();
    let d = t.descriptor();
    let quiver = t.endo_quiver().ok();
    match format {
        Format::Json => {
            let summands: Vec<_> = t
                .labels()
                .iter()
                .zip(t.classes())
                .map(|(&l, c)| json!({ "label": l, "class": class_wire(k0, c), "polarity": t.formal_polarity(l).ok().map(|p| p.as_str()) }))
                .collect();
            let body = json!({
                "type": type_label(d),
                "history": t.history(),
                "steps": steps,
                "summands": summands,
                "datum": TiltingDatumWire::from_datum(&t.datum()),
            });
            format!("{}\n", serde_json::to_string_pretty(&body).expect("plain JSON"))
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{} after {:?}", type_label(d), t.history());
            for s in steps {
                let _ = writeln!(
                    out,
                    "  step at {} ({}): {}/{} -> {}/{}",
                    s.label, s.polarity, s.old.deg, s.old.rk, s.new.deg, s.new.rk
                );
            }
            let _ = writeln!(out, "{:>6}  {:>10}  {:>8}  {:<7}  class", "label", "deg/rk", "slope", "pole");
            for (&l, c) in t.labels().iter().zip(t.classes()) {
                let w = class_wire(k0, c);
                let pole = t.formal_polarity(l).map(|p| p.as_str()).unwrap_or("?");
                let _ = writeln!(out, "{l:>6}  {:>10}  {:>8}  {pole:<7}  {:?}", format!("{}/{}", w.deg, w.rk), w.slope, c);
            }
            if let Some(q) = quiver {
                let arrows: Vec<String> = q.arrows.iter().map(|e| format!("{}->{}x{}", e.from, e.to, e.count)).collect();
                let rels: Vec<String> = q.relations.iter().map(|e| format!("{}->{}x{}", e.from, e.to, e.count)).collect();
                let _ = writeln!(out, "arrows     {}", arrows.join(" "));
                let _ = writeln!(out, "relations  {}", rels.join(" "));
            }
            out
        }
    }
}

fn check(suite: &str, input: Option<PathBuf>, format: Format) -> Result<Outcome, AppError> {
    let input = match input {
        None => SuiteInput::Default,
        Some(p) => {
            let text = if p.exists() { std::fs::read_to_string(&p)? } else { p.to_string_lossy().into_owned() };
            let value = serde_json::from_str(&text).unwrap_or_else(|_| serde_json::Value::String(text.trim().to_string()));
            SuiteInput::from_json(&value)?
        }
    };
    let names: Vec<&str> = if suite == "all" { CATALOG.to_vec() } else { vec![suite] };
    let reports = names.iter().map(|n| run_suite(n, &input)).collect::<Result<Vec<CheckReport>, _>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let stdout = match format {
        Format::Json if reports.len() == 1 => format!("{}\n", serde_json::to_string_pretty(&reports[0])?),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&reports)?),
        Format::Table => reports.iter().map(|r| r.to_table()).collect::<Vec<_>>().join("\n"),
    };
    Ok(Outcome { code: if pass { 0 } else { 1 }, stdout, stderr: String::new() })
}

/// Standard data of the given kind, for library users of the CLI layer.
pub fn standard(d: &WeightDescriptor, kind: StandardKind) -> Result<TiltingDatumWire, AppError> {
    let k0 = K0::new(d);
    Ok(TiltingDatumWire::from_datum(&standard_tilting_data(&k0, kind)?))
}
