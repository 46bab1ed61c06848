//! One-call pipeline entry points shared by the command-line binary and the
//! C interface: parse, compile, run, and render a report in both formats.

use crate::algebra::{compile_algebra, split_from_marked, CompiledAlgebra, SplitExtension};
use crate::bar::{bar_complex, relative_cochain, relative_complex};
use crate::bimodule::{m_bimodule, Bimodule};
use crate::config::{chain_dim, RunConfig};
use crate::jz::{han_transfer_report, jz_verify, HanVerdict};
use crate::quiver::QuiverSpec;
use crate::report::*;
use crate::resolution::{bounded_certificate, global_dimension, tor_over_env};
use crate::tensor::nilpotency_index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PipelineCommand {
    Hh,
    Relative,
    Certificate,
    Jz,
    Han,
    Gldim,
}

impl PipelineCommand {
    pub fn name(&self) -> &'static str {
        match self {
            PipelineCommand::Hh => "hh",
            PipelineCommand::Relative => "relative",
            PipelineCommand::Certificate => "certificate",
            PipelineCommand::Jz => "jz",
            PipelineCommand::Han => "han",
            PipelineCommand::Gldim => "gldim",
        }
    }
}

#[derive(Debug)]
pub enum PipelineError {
    Parse(String),
    Budget(String),
    Internal(String),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Parse(m) => write!(f, "{m}"),
            PipelineError::Budget(m) => write!(f, "{m}"),
            PipelineError::Internal(m) => write!(f, "{m}"),
        }
    }
}

pub struct PipelineOutput {
    pub json: String,
    pub text: String,
    /// a theorem-level assertion failed (exit code 4 at the CLI)
    pub verification_failed: bool,
}

fn bar_err(e: crate::bar::BarError) -> PipelineError {
    match e {
        crate::bar::BarError::Budget(b) => PipelineError::Budget(b.to_string()),
        other => PipelineError::Internal(other.to_string()),
    }
}

fn jz_err(e: crate::jz::JzError) -> PipelineError {
    match e {
        crate::jz::JzError::Bar(b) => bar_err(b),
        crate::jz::JzError::WindowTooSmall { .. } => PipelineError::Parse(e.to_string()),
        other => PipelineError::Internal(other.to_string()),
    }
}

/// Parses and compiles a spec, optionally overriding the field.
pub fn load_spec(
    text: &str,
    config: &RunConfig,
) -> Result<(QuiverSpec, CompiledAlgebra, SplitExtension), PipelineError> {
    let mut spec = QuiverSpec::parse(text).map_err(|e| PipelineError::Parse(e.to_string()))?;
    if let Some(f) = config.field_override {
        spec.field = f;
        // round-trip so relation coefficients land in the override field
        spec = QuiverSpec::parse(&spec.to_toml_string())
            .map_err(|e| PipelineError::Parse(e.to_string()))?;
    }
    config.validate().map_err(PipelineError::Parse)?;
    let compiled = compile_algebra(&spec).map_err(|e| PipelineError::Parse(e.to_string()))?;
    let split = split_from_marked(&compiled).map_err(|e| PipelineError::Parse(e.to_string()))?;
    Ok((spec, compiled, split))
}

/// Runs one command against a parsed spec and renders the report.
pub fn run_pipeline(
    spec_text: &str,
    input_name: &str,
    command: PipelineCommand,
    config: &RunConfig,
) -> Result<PipelineOutput, PipelineError> {
    let (spec, compiled, split) = load_spec(spec_text, config)?;
    let envelope = |report_json: serde_json::Value, text: String, failed: bool| {
        let env = serde_json::json!({
            "command": command.name(),
            "input": input_name,
            "field": spec.field.to_string(),
            "degree": config.degree,
            "cap_nilpotency": config.cap_nilpotency,
            "cap_pd": config.cap_pd,
            "report": report_json,
        });
        let mut json = serde_json::to_string_pretty(&env).expect("serializable");
        json.push('\n');
        let header = format!(
            "command: {}\ninput: {}\nfield: {}  degree: {}\n\n",
            command.name(),
            input_name,
            spec.field,
            config.degree
        );
        PipelineOutput {
            json,
            text: header + &text,
            verification_failed: failed,
        }
    };
    let internal = |e: crate::resolution::ResolutionError| PipelineError::Internal(e.to_string());

    match command {
        PipelineCommand::Hh => {
            let alg = &compiled.algebra;
            let x = Bimodule::regular(alg.clone());
            let max_k = config.degree - 1;
            let via_resolution = tor_over_env(&x, &x, max_k).map_err(internal)?.dims;
            let bar_size = chain_dim(alg.dim, alg.dim, config.degree);
            let (via_bar, routes_agree) = match bar_size {
                Some(sz) if sz <= config.budget.max_chain_dim => {
                    let cc = bar_complex(alg, &x, config.degree, &config.budget).map_err(bar_err)?;
                    let dims = cc.homology_dims();
                    let agree = (0..=max_k).all(|k| dims[k].value() == via_resolution[k]);
                    (Some(dims), Some(agree))
                }
                _ => (None, None),
            };
            let report = HhReport {
                via_resolution,
                via_bar,
                routes_agree,
            };
            let failed = routes_agree == Some(false);
            let text = render_hh(&report);
            Ok(envelope(serde_json::to_value(&report).unwrap(), text, failed))
        }
        PipelineCommand::Relative => {
            let x = Bimodule::regular(compiled.algebra.clone());
            let rel =
                relative_complex(&split, &x, config.degree, &config.budget).map_err(bar_err)?;
            let co =
                relative_cochain(&split, &x, config.degree, &config.budget).map_err(bar_err)?;
            let m = m_bimodule(&split);
            let nil = nilpotency_index(&m, config.cap_nilpotency);
            let vanishes = nil
                .finite()
                .map(|n| (n..=config.degree).all(|k| rel.complex.dim(k) == 0));
            let report = RelativeReport {
                homology: rel.complex.homology_dims(),
                cohomology: co.cohomology_dims(),
                nilpotency: nil,
                vanishes_from_index: vanishes,
            };
            let text = render_relative(&report);
            Ok(envelope(serde_json::to_value(&report).unwrap(), text, false))
        }
        PipelineCommand::Certificate => {
            let cert = bounded_certificate(&split, config.cap_nilpotency, config.cap_pd)
                .map_err(internal)?;
            let text = render_certificate(&cert);
            Ok(envelope(serde_json::to_value(&cert).unwrap(), text, false))
        }
        PipelineCommand::Jz => {
            let x = Bimodule::regular(compiled.algebra.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(0x6a7a);
            let report = jz_verify(
                &split,
                &x,
                config.degree,
                config.cap_nilpotency,
                config.cap_pd,
                &config.budget,
                &mut rng,
            )
            .map_err(jz_err)?;
            let failed = report.claimed && !report.window_pass;
            let text = render_jz(&report);
            Ok(envelope(serde_json::to_value(&report).unwrap(), text, failed))
        }
        PipelineCommand::Han => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6a7a);
            let report = han_transfer_report(
                &split,
                config.degree,
                config.cap_nilpotency,
                config.cap_pd,
                &config.budget,
                config.jz_bar_limit,
                &mut rng,
            )
            .map_err(jz_err)?;
            let failed = report.verdict == HanVerdict::AssertionFailed;
            let text = render_han(&report);
            Ok(envelope(serde_json::to_value(&report).unwrap(), text, failed))
        }
        PipelineCommand::Gldim => {
            let algebra = global_dimension(&compiled.algebra, config.cap_pd).map_err(internal)?;
            let base = if split.m_indices.is_empty() {
                None
            } else {
                Some(global_dimension(&split.b_algebra, config.cap_pd).map_err(internal)?)
            };
            let report = GldimReport { algebra, base };
            let text = render_gldim(&report);
            Ok(envelope(serde_json::to_value(&report).unwrap(), text, false))
        }
    }
}
