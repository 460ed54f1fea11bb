//! `fallout`: runs scenario files and inspects braid words.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fallout_core::braid::{BraidWord, slice_bennequin, syntactic_qp_bands};
use fallout_core::ingest::{rational_list, real_list};
use fallout_core::scenario::{Settings, load_scenario, report_json, run_scenario, write_braid_svg};
use fallout_core::{FalloutError, Result};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "fallout", version, about = "Branch-point curvature fallout: scenarios, braids and invariants")]
struct Cli {
    /// Scenario file to run.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Samples per boundary circle.
    #[arg(long)]
    samples: Option<usize>,
    /// Sphere radii, e.g. "0.02,0.01".
    #[arg(long)]
    epsilon_sweep: Option<String>,
    /// Family parameters, exact decimals or fractions, e.g. "1/100,1/200".
    #[arg(long)]
    t_sweep: Option<String>,
    /// Report path; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Braid diagram path.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Directory for CSV, link and SVG diagnostics.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponent sum, closure components, slice-Bennequin bound and
    /// syntactic quasipositive form of a braid word.
    Braid {
        /// Word such as "s1 s1 -s2" or "s1^3".
        word: String,
        #[arg(long)]
        strands: u32,
    },
}

fn settings(cli: &Cli) -> Result<Settings> {
    let mut s = Settings { seed: cli.seed, report: cli.report.clone(), svg: cli.svg.clone(), diagnostics: cli.diagnostics.clone(), ..Settings::default() };
    s.samples = cli.samples;
    if let Some(t) = cli.tolerance {
        s.tolerance = t;
    }
    if let Some(e) = &cli.epsilon_sweep {
        s.epsilon_sweep = Some(real_list(e)?);
    }
    if let Some(t) = &cli.t_sweep {
        s.t_sweep = Some(rational_list(t)?);
    }
    Ok(s)
}

fn braid_command(cli: &Cli, word: &str, strands: u32) -> Result<()> {
    let w = BraidWord::parse(strands, word)?;
    let bands = syntactic_qp_bands(&w).map(|b| b.iter().map(|x| json!({"conjugator": x.conjugator.to_string(), "generator": x.generator})).collect::<Vec<_>>());
    let v = json!({
        "word": w.to_string(),
        "strands": w.strands,
        "exponent_sum": w.exponent_sum(),
        "components": w.components(),
        "slice_bennequin": slice_bennequin(&w),
        "quasipositive_bands": bands,
    });
    println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
    if let Some(p) = &cli.svg {
        write_braid_svg(&w, p)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> std::result::Result<i32, FalloutError> {
    if let Some(Command::Braid { word, strands }) = &cli.command {
        braid_command(cli, word, *strands)?;
        return Ok(0);
    }
    let Some(path) = &cli.scenario else {
        return Err(FalloutError::Input("nothing to do: pass --scenario PATH or a subcommand".into()));
    };
    let set = settings(cli)?;
    let sc = load_scenario(path)?;
    let out = run_scenario(&sc, &set)?;
    let wrote_report = out.artifacts.iter().any(|a| Some(a) == sc.report.as_ref().or(set.report.as_ref()));
    if !wrote_report && !sc.tasks.is_empty() {
        print!("{}", report_json(&out.report));
    }
    for t in out.report.tasks.iter().filter(|t| t.error.is_some()) {
        eprintln!("task {} ({}): {}", t.index, t.kind.as_str(), t.error.as_deref().unwrap_or(""));
    }
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
