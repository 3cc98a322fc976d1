// SPDX-License-Identifier: Apache-2.0

//! `revseq`: synthesize, optimize, cost and verify reversible circuits.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use revseq::circuit::{simulate_permutation_with, Circuit, GateKind};
use revseq::equivalence::{compare_designs, expand_to_nct, Design, Registry};
use revseq::format::{emit_circuit_file, parse_circuit_file, parse_truth_table, CircuitFile};
use revseq::optimizer::{optimize_with, standard_library, TemplateLibrary};
use revseq::qcost::{cost_report_with, Catalog, CostReport};
use revseq::sequential::{self, run_sequence, verify_latch, FeedbackCircuit, LatchSpec};
use revseq::synthesis::{synth_pipeline, Bijectivity, PipelineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// Human-readable report
    Text,
    /// One `key: value` pair per line
    Kv,
}

#[derive(Parser)]
#[command(
    name = "revseq",
    version,
    about = "Reversible circuit synthesis, optimization and verification"
)]
struct Cli {
    /// Report format
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: OutputFormat,

    /// Extra NCV realizations for the quantum-cost minimum
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    /// Extra identity templates for the optimizer
    #[arg(long, global = true)]
    templates: Option<PathBuf>,

    /// Extra registry gates with NCT expansions
    #[arg(long, global = true)]
    registry: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the permutation of a circuit, or the trace of a feedback circuit
    Sim {
        /// Circuit file, `-` for stdin
        file: PathBuf,
        /// Comma-separated binary input words for a feedback circuit
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
    },
    /// Synthesize a circuit from a truth table
    Synth {
        /// Truth table, one `input -> output` row per line; `-` for stdin
        table: PathBuf,
    },
    /// Optimize a circuit and print the rewrites applied
    Opt {
        file: PathBuf,
        /// Overwrite the input file with the optimized circuit
        #[arg(long)]
        in_place: bool,
    },
    /// Print the cost report of a circuit
    Qcost { file: PathBuf },
    /// Check a feedback circuit against a latch or flip-flop specification
    VerifySeq {
        file: PathBuf,
        /// `sr`, `d`, `jk` or `t`, optionally `gated-` prefixed or `-ff` suffixed
        #[arg(long)]
        spec: String,
        /// Length of every checked input sequence
        #[arg(long, default_value_t = 4)]
        horizon: usize,
    },
    /// Expand, optimize and cost several designs side by side
    Compare {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print a built-in design
    Lib {
        /// Design name; omit to list the available names
        name: Option<String>,
    },
}

struct Env {
    format: OutputFormat,
    catalog: Catalog,
    templates: TemplateLibrary,
    registry: Registry,
}

/// Verification failed; the report has already been printed.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for Failed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) if e.is::<Failed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_env(cli: &Cli) -> Result<Env> {
    let mut catalog = Catalog::builtin().clone();
    if let Some(p) = &cli.catalog {
        catalog.extend(
            &Catalog::from_text(&read_input(p)?)
                .with_context(|| format!("loading {}", p.display()))?,
        );
    }
    let mut templates = standard_library();
    if let Some(p) = &cli.templates {
        templates.extend(
            &TemplateLibrary::from_text(&read_input(p)?)
                .with_context(|| format!("loading {}", p.display()))?,
        );
    }
    let mut registry = Registry::builtin().clone();
    if let Some(p) = &cli.registry {
        let extra = Registry::from_text(&read_input(p)?)
            .with_context(|| format!("loading {}", p.display()))?;
        for name in extra.names() {
            registry.register(extra.get(name).unwrap().clone())?;
        }
    }
    Ok(Env {
        format: cli.format,
        catalog,
        templates,
        registry,
    })
}

fn label(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "stdin".into()
    } else {
        path.display().to_string()
    }
}

fn load_file(path: &Path) -> Result<CircuitFile> {
    parse_circuit_file(&read_input(path)?).with_context(|| format!("parsing {}", label(path)))
}

fn design_of(file: &CircuitFile) -> Result<Design> {
    Ok(if file.feedback.is_empty() {
        Design::Combinational(file.circuit.clone())
    } else {
        Design::Sequential(FeedbackCircuit::from_file(file)?)
    })
}

fn run(cli: Cli) -> Result<String> {
    let env = load_env(&cli)?;
    match &cli.command {
        Command::Sim { file, inputs } => sim(&env, &load_file(file)?, inputs),
        Command::Synth { table } => synth(&env, &read_input(table)?),
        Command::Opt { file, in_place } => {
            let (out, text) = opt(&load_file(file)?, &env)?;
            if *in_place {
                fs::write(file, text).with_context(|| format!("writing {}", file.display()))?;
            }
            Ok(out)
        }
        Command::Qcost { file } => qcost(&env, &load_file(file)?),
        Command::VerifySeq {
            file,
            spec,
            horizon,
        } => verify(&env, &load_file(file)?, spec, *horizon),
        Command::Compare { files } => compare(&env, files),
        Command::Lib { name } => lib(name.as_deref()),
    }
}

fn bits(x: usize, w: usize) -> String {
    if w == 0 {
        String::new()
    } else {
        format!("{x:0w$b}")
    }
}

fn sim(env: &Env, file: &CircuitFile, inputs: &[String]) -> Result<String> {
    let mut out = String::new();
    if file.feedback.is_empty() {
        if !inputs.is_empty() {
            bail!("--inputs applies to circuits with `.f` feedback");
        }
        let c = &file.circuit;
        let p = simulate_permutation_with(c, &env.registry)?;
        let w = c.width();
        for x in 0..1usize << w {
            let _ = writeln!(out, "{} -> {}", bits(x, w), bits(p.apply(x), w));
        }
        return Ok(out);
    }
    let mut f = FeedbackCircuit::from_file(file)?;
    if f.core().gates().iter().any(|g| !g.is_nct()) {
        let mut expanded = file.clone();
        expanded.circuit = expand_to_nct(f.core(), &env.registry)?;
        f = FeedbackCircuit::from_file(&expanded)?;
    }
    let words = inputs
        .iter()
        .map(|s| {
            usize::from_str_radix(s, 2).with_context(|| format!("input word `{s}` is not binary"))
        })
        .collect::<Result<Vec<_>>>()?;
    let trace = run_sequence(&f, &words)?;
    let free = f.free_inputs().len();
    let w = f.core().width();
    for (t, s) in trace.steps.iter().enumerate() {
        match env.format {
            OutputFormat::Text => {
                let _ = writeln!(
                    out,
                    "step {t}: in {} core {} -> {} out {}",
                    bits(s.inputs, free),
                    bits(s.before, w),
                    bits(s.after, w),
                    u8::from(s.observed)
                );
            }
            OutputFormat::Kv => {
                let _ = writeln!(out, "step{t}.out: {}", u8::from(s.observed));
            }
        }
    }
    Ok(out)
}

fn report_text(r: &CostReport, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Kv => {
            for (k, v) in r.pairs() {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        OutputFormat::Text => {
            let labels = [
                "Gates (NCT)",
                "NCV",
                "Garbage",
                "QC",
                "TC",
                "Feedback loops",
            ];
            for (label, (_, v)) in labels.iter().zip(r.pairs()) {
                let _ = writeln!(out, "{label}: {v}");
            }
        }
    }
    out
}

fn commented(text: &str) -> String {
    text.lines().map(|l| format!("# {l}\n")).collect()
}

fn synth(env: &Env, table_text: &str) -> Result<String> {
    let table = parse_truth_table(table_text)?;
    let r = synth_pipeline(&table, &PipelineConfig::default())?;
    let (circuit, _) = optimize_with(&r.circuit, &env.templates);
    let report = if circuit == r.circuit {
        r.report
    } else {
        cost_report_with(&circuit, &env.catalog, 0)?
    };
    let mut out = commented(&report_text(&report, env.format));
    out.push_str(&emit_circuit_file(&CircuitFile::new(circuit)));
    Ok(out)
}

fn opt(file: &CircuitFile, env: &Env) -> Result<(String, String)> {
    let (circuit, trace) = optimize_with(&file.circuit, &env.templates);
    let mut optimized = file.clone();
    optimized.circuit = circuit;
    let text = emit_circuit_file(&optimized);
    let mut out = String::new();
    match env.format {
        OutputFormat::Text => {
            out.push_str(&commented(&trace.to_string()));
            let _ = writeln!(
                out,
                "# {} -> {} gates",
                file.circuit.len(),
                optimized.circuit.len()
            );
        }
        OutputFormat::Kv => {
            let _ = writeln!(out, "# gates_before: {}", file.circuit.len());
            let _ = writeln!(out, "# gates_after: {}", optimized.circuit.len());
            let _ = writeln!(out, "# rewrites: {}", trace.steps.len());
        }
    }
    out.push_str(&text);
    Ok((out, text))
}

fn qcost(env: &Env, file: &CircuitFile) -> Result<String> {
    let design = design_of(file)?;
    let loops = match &design {
        Design::Sequential(f) => sequential::feedback_count(f),
        Design::Combinational(_) => 0,
    };
    let c: Circuit = if design
        .core()
        .gates()
        .iter()
        .any(|g| matches!(g.kind(), GateKind::Catalog(_)))
    {
        expand_to_nct(design.core(), &env.registry)?
    } else {
        design.core().clone()
    };
    let r = cost_report_with(&c, &env.catalog, loops)?;
    Ok(report_text(&r, env.format))
}

fn verify(env: &Env, file: &CircuitFile, spec: &str, horizon: usize) -> Result<String> {
    let spec = LatchSpec::parse(spec).with_context(|| format!("unknown specification `{spec}`"))?;
    let mut file = file.clone();
    file.circuit = expand_to_nct(&file.circuit, &env.registry)?;
    let f = FeedbackCircuit::from_file(&file)?;
    let v = verify_latch(&f, &spec, horizon);
    let mut out = String::new();
    match env.format {
        OutputFormat::Text => {
            let _ = writeln!(out, "spec: {spec}");
            let _ = writeln!(out, "bijectivity: {:?}", v.bijectivity);
            let _ = writeln!(out, "sequences checked: {}", v.sequences_checked);
            if let Some(c) = &v.counterexample {
                let _ = writeln!(out, "counterexample: {c}");
            }
            if let Some(e) = &v.error {
                let _ = writeln!(out, "error: {e}");
            }
            let _ = writeln!(out, "{}", if v.passed() { "PASS" } else { "FAIL" });
        }
        OutputFormat::Kv => {
            let _ = writeln!(
                out,
                "bijective: {}",
                u8::from(v.bijectivity == Bijectivity::Bijective)
            );
            let _ = writeln!(out, "sequences_checked: {}", v.sequences_checked);
            let _ = writeln!(out, "passed: {}", u8::from(v.passed()));
        }
    }
    if v.passed() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failed.into())
    }
}

fn compare(env: &Env, files: &[PathBuf]) -> Result<String> {
    let mut designs = Vec::new();
    for p in files {
        let file = load_file(p)?;
        let name = file.name.clone().unwrap_or_else(|| {
            p.file_stem()
                .map_or_else(|| "stdin".into(), |s| s.to_string_lossy().into_owned())
        });
        designs.push((name, design_of(&file)?));
    }
    let report = compare_designs(&designs, &env.registry, &env.catalog)?;
    Ok(match env.format {
        OutputFormat::Text => report.to_string(),
        OutputFormat::Kv => {
            let mut out = String::new();
            for row in &report.rows {
                for (k, v) in row.report.pairs() {
                    let _ = writeln!(out, "{}.{k}: {v}", row.name);
                }
            }
            for (k, v) in report.minima() {
                let _ = writeln!(out, "min.{k}: {v}");
            }
            out
        }
    })
}

fn lib(name: Option<&str>) -> Result<String> {
    let Some(name) = name else {
        return Ok(sequential::builtin_names().join("\n") + "\n");
    };
    let f = sequential::builtin(name)?;
    Ok(emit_circuit_file(&f.to_file(Some(name))))
}
