//! Command report envelopes with machine-readable (JSON) and human-readable
//! renderings. Machine output is deterministic: identical inputs produce
//! byte-identical documents.

use crate::complex::{HomologyDim, NodeStatus};
use crate::jz::{HanReport, HanVerdict, JzReport};
use crate::resolution::{BoundedCertificate, PdResult};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: String,
    pub input: String,
    pub field: String,
    pub degree: usize,
    pub cap_nilpotency: usize,
    pub cap_pd: usize,
    pub report: T,
}

pub fn machine_json<T: Serialize>(env: &Envelope<T>) -> String {
    let mut s = serde_json::to_string_pretty(env).expect("reports serialize");
    s.push('\n');
    s
}

fn dims_line(dims: &[HomologyDim]) -> String {
    dims.iter()
        .enumerate()
        .map(|(k, d)| format!("H_{k} = {d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn usize_line(dims: &[usize]) -> String {
    dims.iter()
        .enumerate()
        .map(|(k, d)| format!("H_{k} = {d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Serialize)]
pub struct HhReport {
    /// dimensions through a minimal resolution over the enveloping algebra
    pub via_resolution: Vec<usize>,
    /// dimensions through the bar complex, when within the chain budget
    pub via_bar: Option<Vec<HomologyDim>>,
    pub routes_agree: Option<bool>,
}

#[derive(Serialize)]
pub struct RelativeReport {
    pub homology: Vec<HomologyDim>,
    pub cohomology: Vec<HomologyDim>,
    pub nilpotency: crate::tensor::NilpotencyIndex,
    /// chain and cochain spaces vanish from the nilpotency index on
    pub vanishes_from_index: Option<bool>,
}

#[derive(Serialize)]
pub struct GldimReport {
    pub algebra: PdResult,
    /// global dimension of the marked subalgebra, when a split is presented
    pub base: Option<PdResult>,
}

#[derive(Serialize)]
pub struct ExtensionSummary {
    pub dim_algebra: usize,
    pub dim_base: usize,
    pub dim_ideal: usize,
    pub certificate: BoundedCertificate,
}

#[derive(Serialize)]
pub struct SurgeryReport {
    pub before: ExtensionSummary,
    pub after: ExtensionSummary,
    pub dropped_relations: usize,
    pub new_spec: String,
}

pub fn render_certificate(c: &BoundedCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "  tensor nilpotency index n: {}", c.nilpotency);
    let _ = writeln!(s, "  projective dimension over enveloping algebra u: {}", c.pd_env);
    let _ = writeln!(
        s,
        "  projective as left module: {}   as right module: {}",
        yn(c.left_projective),
        yn(c.right_projective)
    );
    let _ = writeln!(
        s,
        "  bounded: {}{}",
        yn(c.bounded),
        if c.capped { "  (a cap was reached)" } else { "" }
    );
    s
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_hh(r: &HhReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Hochschild homology dimensions");
    let _ = writeln!(s, "  via minimal resolution: {}", usize_line(&r.via_resolution));
    match &r.via_bar {
        Some(bar) => {
            let _ = writeln!(s, "  via bar complex:        {}", dims_line(bar));
            let _ = writeln!(s, "  routes agree: {}", yn(r.routes_agree == Some(true)));
        }
        None => {
            let _ = writeln!(s, "  via bar complex:        skipped (chain budget)");
        }
    }
    s
}

pub fn render_relative(r: &RelativeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "relative homology:   {}", dims_line(&r.homology));
    let _ = writeln!(s, "relative cohomology: {}", dims_line(&r.cohomology));
    let _ = writeln!(s, "nilpotency index: {}", r.nilpotency);
    if let Some(v) = r.vanishes_from_index {
        let _ = writeln!(s, "chain spaces vanish from the index on: {}", yn(v));
    }
    s
}

pub fn render_gldim(r: &GldimReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "global dimension: {}", r.algebra);
    if let Some(b) = &r.base {
        let _ = writeln!(s, "global dimension of the marked subalgebra: {b}");
    }
    s
}

pub fn render_jz(r: &JzReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "certificate:");
    s.push_str(&render_certificate(&r.certificate));
    match r.nu {
        Some(nu) => {
            let _ = writeln!(s, "window bound n*u = {nu}");
        }
        None => {
            let _ = writeln!(s, "window bound: not claimed (certificate not established)");
        }
    }
    let _ = writeln!(s, "measured nearly-exact degree: {}", r.m_obs);
    let _ = writeln!(s, "homology of the base-coefficients complex: {}", dims_line(&r.h_b));
    let _ = writeln!(s, "homology of the full complex:              {}", dims_line(&r.h_a));
    let _ = writeln!(s, "relative homology:                         {}", dims_line(&r.h_rel));
    let _ = writeln!(s, "long-sequence nodes (from degree {}):", r.nodes.from_degree);
    for n in &r.nodes.nodes {
        let status = match &n.status {
            NodeStatus::Pass => "pass".to_string(),
            NodeStatus::Fail => "FAIL".to_string(),
            NodeStatus::Info(m) => format!("info: {m}"),
        };
        let _ = writeln!(
            s,
            "  degree {:>2} node {}: dim {}  im(in) {}  ker(out) {}  {}",
            n.degree, n.node, n.dim_homology, n.dim_image_in, n.dim_kernel_out, status
        );
    }
    let _ = writeln!(s, "all nodes pass: {}", yn(r.nodes.all_pass));
    for d in &r.deltas {
        let _ = writeln!(
            s,
            "connecting map at degree {}: {} x {}, {} entries",
            d.degree,
            d.rows,
            d.cols,
            d.entries.len()
        );
    }
    s
}

pub fn render_han(r: &HanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "certificate:");
    s.push_str(&render_certificate(&r.certificate));
    let _ = writeln!(s, "homology tables (via minimal resolutions):");
    let _ = writeln!(s, "  full algebra:  {}", usize_line(&r.h_aa));
    let _ = writeln!(s, "  base algebra:  {}", usize_line(&r.h_bb));
    let _ = writeln!(s, "  mixed (base, ideal): {}", usize_line(&r.h_bm));
    match (r.nu, r.window_equal) {
        (Some(nu), Some(eq)) => {
            let _ = writeln!(s, "tables agree in degrees >= {}: {}", nu + 1, yn(eq));
        }
        _ => {
            let _ = writeln!(s, "table agreement: not claimed");
        }
    }
    match r.h_bm_vanishes_from_u {
        Some(v) => {
            let _ = writeln!(s, "mixed table vanishes from u on: {}", yn(v));
        }
        None => {
            let _ = writeln!(s, "mixed-table vanishing: not claimed");
        }
    }
    let _ = writeln!(s, "base-summand inequality holds degreewise: {}", yn(r.summand_inequality));
    let _ = writeln!(
        s,
        "global dimensions: full {}  base {}  (finiteness agrees: {})",
        r.smoothness.gldim_a,
        r.smoothness.gldim_b,
        match r.smoothness.finiteness_agrees {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "undecided",
        }
    );
    let _ = writeln!(
        s,
        "induced vertex-simple resolutions exact: {}",
        yn(r.smoothness.induced_resolutions_exact)
    );
    match (&r.jz, &r.jz_skipped_reason) {
        (Some(jz), _) => {
            let _ = writeln!(s, "sequence verification: ran, window pass = {}", yn(jz.window_pass));
        }
        (None, Some(reason)) => {
            let _ = writeln!(s, "sequence verification: skipped ({reason})");
        }
        (None, None) => {}
    }
    let verdict = match r.verdict {
        HanVerdict::TransferVerified => "transfer verified",
        HanVerdict::AssertionFailed => "ASSERTION FAILED",
        HanVerdict::HypothesesNotMet => "hypotheses not met; nothing asserted",
    };
    let _ = writeln!(s, "verdict: {verdict}");
    s
}

pub fn render_surgery(r: &SurgeryReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "before: dim A = {}, dim B = {}, dim M = {}", r.before.dim_algebra, r.before.dim_base, r.before.dim_ideal);
    s.push_str(&render_certificate(&r.before.certificate));
    let _ = writeln!(s, "after:  dim A = {}, dim B = {}, dim M = {}", r.after.dim_algebra, r.after.dim_base, r.after.dim_ideal);
    s.push_str(&render_certificate(&r.after.certificate));
    if r.dropped_relations > 0 {
        let _ = writeln!(s, "dropped {} relation(s) touching removed arrows", r.dropped_relations);
    }
    let _ = writeln!(s, "new spec:\n{}", r.new_spec);
    s
}
