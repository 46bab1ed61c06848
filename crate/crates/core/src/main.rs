//! Command-line entry point: load quiver specs, run pipelines, emit reports.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hochschild::algebra::{compile_algebra, split_from_marked, SplitExtension};
use hochschild::config::{Budget, RunConfig};
use hochschild::pipeline::{run_pipeline, PipelineCommand, PipelineError};
use hochschild::quiver::{Arrow, QuiverSpec};
use hochschild::report::{
    machine_json, render_surgery, Envelope, ExtensionSummary, SurgeryReport,
};
use hochschild::resolution::bounded_certificate;
use hochschild::scalar::Field;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hochschild",
    version,
    about = "Exact Hochschild homology workbench for bound quiver algebras and split extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Quiver spec file (TOML)
    input: PathBuf,
    /// Truncation degree N; homology is exact for k <= N-1
    #[arg(long, default_value_t = 6)]
    degree: usize,
    /// Cap for tensor-nilpotency search
    #[arg(long, default_value_t = 8)]
    cap_nilpotency: usize,
    /// Cap for projective-dimension search
    #[arg(long, default_value_t = 8)]
    cap_pd: usize,
    /// Override the field declared in the spec ("Q" or "GF(p)")
    #[arg(long)]
    field: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Chain-dimension budget
    #[arg(long, default_value_t = 2_000_000)]
    budget: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild homology dimensions of the compiled algebra
    Hh(Common),
    /// Relative homology and cohomology of the marked split extension
    Relative(Common),
    /// Boundedness certificate of the marked ideal
    Certificate(Common),
    /// Long-exact-sequence verification report
    Jz(Common),
    /// Homology-vanishing and global-dimension transfer report
    Han(Common),
    /// Global dimension of the algebra (and the marked subalgebra)
    Gldim(Common),
    /// Re-mark or edit arrows and compare the extensions before and after
    Surgery(SurgeryArgs),
}

#[derive(Args)]
struct SurgeryArgs {
    #[command(flatten)]
    common: Common,
    /// Mark an existing arrow (repeatable)
    #[arg(long = "mark")]
    mark: Vec<String>,
    /// Unmark an existing arrow (repeatable)
    #[arg(long = "unmark")]
    unmark: Vec<String>,
    /// Add a new marked arrow as name:source:target (repeatable)
    #[arg(long = "add-arrow")]
    add: Vec<String>,
    /// Remove an arrow; relations touching it are dropped (repeatable)
    #[arg(long = "remove-arrow")]
    remove: Vec<String>,
    /// Also write the edited spec to this path
    #[arg(long = "spec-out")]
    spec_out: Option<PathBuf>,
}

const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VERIFY: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Hh(c) => run(&c, PipelineCommand::Hh),
        Command::Relative(c) => run(&c, PipelineCommand::Relative),
        Command::Certificate(c) => run(&c, PipelineCommand::Certificate),
        Command::Jz(c) => run(&c, PipelineCommand::Jz),
        Command::Han(c) => run(&c, PipelineCommand::Han),
        Command::Gldim(c) => run(&c, PipelineCommand::Gldim),
        Command::Surgery(a) => run_surgery(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CmdError {
    code: u8,
    message: String,
}

fn parse_err(message: impl Into<String>) -> CmdError {
    CmdError {
        code: EXIT_PARSE,
        message: message.into(),
    }
}

fn internal_err(e: impl std::fmt::Display) -> CmdError {
    CmdError {
        code: 1,
        message: e.to_string(),
    }
}

fn config_of(c: &Common) -> Result<RunConfig, CmdError> {
    let field_override = match &c.field {
        Some(f) => Some(Field::parse(f).map_err(parse_err)?),
        None => None,
    };
    let config = RunConfig {
        degree: c.degree,
        cap_nilpotency: c.cap_nilpotency,
        cap_pd: c.cap_pd,
        field_override,
        budget: Budget {
            max_chain_dim: c.budget,
        },
        ..RunConfig::default()
    };
    config.validate().map_err(parse_err)?;
    Ok(config)
}

fn write_out(c: &Common, body: &str) -> Result<(), CmdError> {
    match &c.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| internal_err(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(c: &Common, command: PipelineCommand) -> Result<ExitCode, CmdError> {
    let config = config_of(c)?;
    let text = std::fs::read_to_string(&c.input)
        .map_err(|e| parse_err(format!("cannot read {}: {e}", c.input.display())))?;
    let out = run_pipeline(&text, &c.input.display().to_string(), command, &config).map_err(
        |e| match e {
            PipelineError::Parse(m) => parse_err(m),
            PipelineError::Budget(m) => CmdError {
                code: EXIT_BUDGET,
                message: m,
            },
            PipelineError::Internal(m) => internal_err(m),
        },
    )?;
    let body = match c.format {
        Format::Machine => &out.json,
        Format::Text => &out.text,
    };
    write_out(c, body)?;
    Ok(if out.verification_failed {
        ExitCode::from(EXIT_VERIFY)
    } else {
        ExitCode::SUCCESS
    })
}

fn summarize(se: &SplitExtension, config: &RunConfig) -> Result<ExtensionSummary, CmdError> {
    let cert =
        bounded_certificate(se, config.cap_nilpotency, config.cap_pd).map_err(internal_err)?;
    Ok(ExtensionSummary {
        dim_algebra: se.algebra.dim,
        dim_base: se.b_indices.len(),
        dim_ideal: se.m_indices.len(),
        certificate: cert,
    })
}

fn run_surgery(a: &SurgeryArgs) -> Result<ExitCode, CmdError> {
    let c = &a.common;
    let config = config_of(c)?;
    let spec0 = QuiverSpec::parse_file(&c.input).map_err(|e| parse_err(e.to_string()))?;
    let compiled0 = compile_algebra(&spec0).map_err(|e| parse_err(e.to_string()))?;
    let split0 = split_from_marked(&compiled0).map_err(|e| parse_err(e.to_string()))?;
    let before = summarize(&split0, &config)?;

    let mut spec = spec0.clone();
    // remove arrows; relations touching them are dropped with a note
    let mut dropped_relations = 0usize;
    for name in &a.remove {
        let idx = spec
            .quiver
            .arrow_index(name)
            .ok_or_else(|| parse_err(format!("unknown arrow `{name}`")))?;
        let keep: Vec<usize> = (0..spec.quiver.arrows.len()).filter(|&k| k != idx).collect();
        let remap = |k: usize| keep.iter().position(|&x| x == k);
        let old_len = spec.relations.len();
        spec.relations
            .retain(|r| r.terms.iter().all(|t| t.path.arrows.iter().all(|&k| k != idx)));
        dropped_relations += old_len - spec.relations.len();
        for r in &mut spec.relations {
            for t in &mut r.terms {
                for k in &mut t.path.arrows {
                    *k = remap(*k).expect("surviving arrow");
                }
            }
        }
        spec.marked = spec.marked.iter().filter_map(|&k| remap(k)).collect();
        spec.quiver.arrows.remove(idx);
    }
    // add new arrows, marked by default
    for decl in &a.add {
        let parts: Vec<&str> = decl.split(':').collect();
        if parts.len() != 3 {
            return Err(parse_err(format!(
                "--add-arrow expects name:source:target, got `{decl}`"
            )));
        }
        let (name, s, t) = (parts[0], parts[1], parts[2]);
        if spec.quiver.arrow_index(name).is_some() {
            return Err(parse_err(format!("arrow `{name}` already exists")));
        }
        let source = spec
            .quiver
            .vertex_index(s)
            .ok_or_else(|| parse_err(format!("unknown vertex `{s}`")))?;
        let target = spec
            .quiver
            .vertex_index(t)
            .ok_or_else(|| parse_err(format!("unknown vertex `{t}`")))?;
        spec.quiver.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        spec.marked.push(spec.quiver.arrows.len() - 1);
    }
    for name in &a.mark {
        let idx = spec
            .quiver
            .arrow_index(name)
            .ok_or_else(|| parse_err(format!("unknown arrow `{name}`")))?;
        if !spec.marked.contains(&idx) {
            spec.marked.push(idx);
        }
    }
    for name in &a.unmark {
        let idx = spec
            .quiver
            .arrow_index(name)
            .ok_or_else(|| parse_err(format!("unknown arrow `{name}`")))?;
        spec.marked.retain(|&k| k != idx);
    }
    spec.marked.sort_unstable();

    let new_text = spec.to_toml_string();
    // round-trip through the parser to revalidate everything
    let spec2 = QuiverSpec::parse(&new_text).map_err(|e| parse_err(e.to_string()))?;
    let compiled2 = compile_algebra(&spec2).map_err(|e| parse_err(e.to_string()))?;
    let split2 = split_from_marked(&compiled2).map_err(|e| parse_err(e.to_string()))?;
    let after = summarize(&split2, &config)?;
    if let Some(path) = &a.spec_out {
        std::fs::write(path, &new_text)
            .map_err(|e| internal_err(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = SurgeryReport {
        before,
        after,
        dropped_relations,
        new_spec: new_text,
    };
    let env = Envelope {
        command: "surgery".to_string(),
        input: c.input.display().to_string(),
        field: spec2.field.to_string(),
        degree: c.degree,
        cap_nilpotency: c.cap_nilpotency,
        cap_pd: c.cap_pd,
        report,
    };
    let body = match c.format {
        Format::Machine => machine_json(&env),
        Format::Text => {
            format!(
                "command: surgery\ninput: {}\nfield: {}  degree: {}\n\n{}",
                env.input,
                env.field,
                env.degree,
                render_surgery(&env.report)
            )
        }
    };
    write_out(c, &body)?;
    Ok(ExitCode::SUCCESS)
}
