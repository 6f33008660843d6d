//! One function per subcommand; each returns a serializable report.

use cclt_core::constants::{
    bound_report, derive_constants, sampling_bound, BoundReport, ConstantsReport, PipelineInputs,
};
use cclt_core::dist::{kolmogorov_distance, monte_carlo_delta, Atom, DeltaReport};
use cclt_core::identity::{
    beta_pair, beta_quadruple, identity_check, pointwise_residual, swap_identity_check, IdentityCheck,
};
use cclt_core::permanent::{CfContext, CfEvaluation};
use cclt_core::stats::from_sampling;
use cclt_core::{Complex64, ComplexScoreMatrix, ScoreMatrix};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::parallel::{enumerate, map_points};

/// Exact distance when `n <= enum_cap`, Monte Carlo otherwise.
fn delta_for(m: &ScoreMatrix, cfg: &RunConfig) -> CliResult<DeltaReport> {
    if m.n() <= cfg.enum_cap {
        Ok(kolmogorov_distance(&enumerate(m, cfg.enum_cap, cfg.threads)?)?)
    } else {
        Ok(monte_carlo_delta(m, cfg.mc_samples, cfg.seed)?)
    }
}

#[derive(Debug, Serialize)]
pub struct BoundOutput {
    pub report: BoundReport,
    pub delta: DeltaReport,
}

pub fn bound(m: &ScoreMatrix, c1: f64, c2: f64, cfg: &RunConfig) -> CliResult<BoundOutput> {
    let report = bound_report(m, c1, c2)?;
    let delta = delta_for(m, cfg)?;
    let report = if delta.std_error.is_none() { report.with_delta_exact(delta.delta) } else { report };
    Ok(BoundOutput { report, delta })
}

#[derive(Debug, Serialize)]
pub struct ExactOutput {
    pub delta: DeltaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<Atom>>,
}

pub fn exact(m: &ScoreMatrix, monte_carlo: bool, with_atoms: bool, cfg: &RunConfig) -> CliResult<ExactOutput> {
    if monte_carlo {
        return Ok(ExactOutput { delta: monte_carlo_delta(m, cfg.mc_samples, cfg.seed)?, atoms: None });
    }
    let d = enumerate(m, cfg.enum_cap, cfg.threads)?;
    Ok(ExactOutput { delta: kolmogorov_distance(&d)?, atoms: with_atoms.then_some(d.atoms) })
}

#[derive(Debug, Serialize)]
pub struct CharfnOutput {
    pub n: usize,
    pub mu: f64,
    pub sigma2: f64,
    pub evaluations: Vec<CfEvaluation>,
}

pub fn charfn(m: &ScoreMatrix, grid: &[f64], cfg: &RunConfig) -> CliResult<CharfnOutput> {
    let ctx = CfContext::new(m).with_perm_cap(cfg.perm_cap);
    ctx.stats().require_positive_variance()?;
    let evaluations =
        map_points(grid, cfg.threads, |t| ctx.evaluate(t, cfg.quad_tol)).into_iter().collect::<Result<Vec<_>, _>>()?;
    let s = ctx.stats();
    Ok(CharfnOutput { n: m.n(), mu: s.mu, sigma2: s.sigma2, evaluations })
}

#[derive(Debug, Serialize)]
pub struct SampleOutput {
    pub values: Vec<f64>,
    pub m_draw: usize,
    pub mu: f64,
    pub sigma2: f64,
    /// Bound written directly in terms of the population values.
    pub sampling_bound: f64,
    /// Generic bound on the induced score matrix; equals `sampling_bound`.
    pub report: BoundReport,
    pub delta: DeltaReport,
}

pub fn sample(values: &[f64], m_draw: usize, c1: f64, c2: f64, cfg: &RunConfig) -> CliResult<SampleOutput> {
    let s = from_sampling(values, m_draw)?;
    let special = sampling_bound(&s, c1, c2)?;
    let report = bound_report(&s.matrix, c1, c2)?;
    if (special - report.bound).abs() > 1e-10 * report.bound.abs().max(1.0) {
        return Err(CliError::Inconsistent(format!(
            "sampling bound {special} differs from the generic bound {}",
            report.bound
        )));
    }
    let delta = delta_for(&s.matrix, cfg)?;
    let report = if delta.std_error.is_none() { report.with_delta_exact(delta.delta) } else { report };
    Ok(SampleOutput { values: s.values, m_draw, mu: s.mu, sigma2: s.sigma2, sampling_bound: special, report, delta })
}

pub fn constants(inputs: PipelineInputs) -> CliResult<ConstantsReport> {
    Ok(derive_constants(inputs)?)
}

#[derive(Debug, Serialize)]
pub struct PointwisePoint {
    pub u: f64,
    pub residual: f64,
    pub scale: f64,
}

#[derive(Debug, Serialize)]
pub struct SwapPoint {
    pub j: usize,
    pub k: usize,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct IdentityOutput {
    pub n: usize,
    pub alpha: Complex64,
    pub beta_pair: Complex64,
    pub beta_quadruple: Complex64,
    pub identity: IdentityCheck,
    pub pointwise: Vec<PointwisePoint>,
    pub swap: Vec<SwapPoint>,
}

pub fn identity(y: &ComplexScoreMatrix, cfg: &RunConfig) -> CliResult<IdentityOutput> {
    let cap = cfg.enum_cap.min(cclt_core::identity::DEFAULT_IDENTITY_CAP);
    let pointwise = [0.0, 0.25, 0.5, 0.75, 1.0]
        .into_iter()
        .map(|u| pointwise_residual(y, u, cap).map(|r| PointwisePoint { u, residual: r.residual, scale: r.scale }))
        .collect::<Result<Vec<_>, _>>()?;
    let n = y.n();
    let mut swap = Vec::new();
    for j in 1..=n {
        for k in (j + 1)..=n {
            swap.push(SwapPoint { j, k, residual: swap_identity_check(y, j, k, cap)? });
        }
    }
    Ok(IdentityOutput {
        n,
        alpha: cclt_core::identity::alpha(y),
        beta_pair: beta_pair(y),
        beta_quadruple: beta_quadruple(y),
        identity: identity_check(y, cfg.quad_tol, cap)?,
        pointwise,
        swap,
    })
}
