//! Seeded batteries behind `cclt verify`. Every check records its worst case:
//! the largest residual, or the smallest slack of an inequality.

use cclt_core::constants::{
    bound_report, derive_constants, double_integrals, kappa, lyapunov_bound, sampling_bound, smoothing_bound,
    taylor_remainder_check, v_of_w, PipelineInputs, ROUNDED_C1, ROUNDED_C2,
};
use cclt_core::dist::kolmogorov_distance;
use cclt_core::identity::{beta_pair, beta_quadruple, identity_check, pointwise_residual, swap_identity_check};
use cclt_core::permanent::CfContext;
use cclt_core::stats::{center, from_sampling, gamma, gamma_tilde, variance_quadruple};
use cclt_core::{Complex64, ComplexScoreMatrix, ScoreMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::parallel::enumerate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Passes when the largest residual is at most `threshold`.
    MaxResidual,
    /// Passes when the smallest slack is at least `threshold`.
    MinSlack,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub kind: CheckKind,
    pub cases: usize,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn residual(name: &'static str, threshold: f64) -> Self {
        Self { name, kind: CheckKind::MaxResidual, cases: 0, worst: 0.0, threshold, passed: true }
    }

    fn slack(name: &'static str) -> Self {
        Self { name, kind: CheckKind::MinSlack, cases: 0, worst: f64::INFINITY, threshold: 0.0, passed: true }
    }

    fn record(&mut self, value: f64) {
        self.cases += 1;
        match self.kind {
            CheckKind::MaxResidual => {
                self.worst = if value.is_nan() { f64::NAN } else { self.worst.max(value) };
                self.passed &= value <= self.threshold;
            }
            CheckKind::MinSlack => {
                self.worst = if value.is_nan() { f64::NAN } else { self.worst.min(value) };
                self.passed &= value >= self.threshold;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub const SUITES: [&str; 4] = ["identity", "bounds", "constants", "cf"];

pub fn run(suite: &str, cfg: &RunConfig) -> CliResult<Summary> {
    let checks = match suite {
        "identity" => identity_suite(cfg)?,
        "bounds" => bounds_suite(cfg)?,
        "constants" => constants_suite()?,
        "cf" => cf_suite(cfg)?,
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(run(s, cfg)?.checks);
            }
            all
        }
        other => return Err(CliError::UnknownSuite(other.to_string())),
    };
    Ok(Summary { suite: suite.to_string(), seed: cfg.seed, passed: checks.iter().all(|c| c.passed), checks })
}

fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn random_matrix(r: &mut ChaCha8Rng, n: usize, scale: f64) -> ScoreMatrix {
    loop {
        let m = ScoreMatrix::from_fn(n, |_, _| scale * r.gen_range(-1.0..=1.0)).expect("finite entries");
        if center(&m).sigma2 > 1e-6 * scale * scale {
            return m;
        }
    }
}

fn random_complex(r: &mut ChaCha8Rng, n: usize) -> ComplexScoreMatrix {
    let entries = (0..n * n)
        .map(|_| Complex64::from_polar(r.gen::<f64>().sqrt(), r.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    ComplexScoreMatrix::new(n, entries).expect("finite entries")
}

fn identity_suite(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut r = rng(cfg, 1);
    let mut ident = Check::residual("permanent identity |lhs - rhs|", 10.0 * cfg.quad_tol.max(1e-10));
    let mut pointwise = Check::residual("pointwise identity, relative residual", 1e-9);
    let mut beta = Check::residual("beta pair vs quadruple form", 1e-10);
    let mut swap = Check::residual("swap identity", 1e-10);
    let mut special = Check::residual("Y = itA gives phi - gauss", 1e-10);
    for n in 2..=5 {
        for _ in 0..5 {
            let y = random_complex(&mut r, n);
            ident.record(identity_check(&y, cfg.quad_tol, 8)?.residual);
            for u in [0.0, 0.25, 0.5, 0.75, 1.0] {
                pointwise.record(pointwise_residual(&y, u, 8)?.relative());
            }
            let (bp, bq) = (beta_pair(&y), beta_quadruple(&y));
            beta.record((bp - bq).norm() / bp.norm().max(1.0));
            swap.record(swap_identity_check(&y, 1, n, 8)?);

            let m = random_matrix(&mut r, n, 1.0);
            let t = r.gen_range(0.1..1.5);
            let yt = ComplexScoreMatrix::scaled_real(&m, Complex64::new(0.0, t))?;
            let ctx = CfContext::new(&m);
            let lhs = identity_check(&yt, cfg.quad_tol, 8)?.lhs;
            special.record((lhs - (ctx.phi(t)? - ctx.gauss(t))).norm());
        }
    }
    Ok(vec![ident, pointwise, beta, swap, special])
}

fn bounds_suite(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut r = rng(cfg, 2);
    let mut main = Check::slack("main bound minus exact distance");
    let mut lyap = Check::slack("Lyapunov bound minus exact distance");
    let mut var = Check::residual("variance two ways, relative", 1e-10);
    let mut sandwich = Check::slack("gamma sandwich chains");
    let mut sampling = Check::residual("sampling bound vs generic bound, relative", 1e-10);
    let mut smoothing = Check::slack("smoothing bound minus exact distance");
    for n in 3..=7 {
        for scale in [0.1, 1.0, 10.0] {
            for _ in 0..10 {
                let m = random_matrix(&mut r, n, scale);
                let c = center(&m);
                let delta = kolmogorov_distance(&enumerate(&m, cfg.enum_cap.max(7), cfg.threads)?)?.delta;
                let report = bound_report(&m, ROUNDED_C1, ROUNDED_C2)?;
                main.record(report.bound - delta + 1e-12);
                lyap.record(lyapunov_bound(&c) - delta + 1e-12);
                var.record((c.sigma2 - variance_quadruple(&m)).abs() / c.sigma2);
                let nf = n as f64;
                for xs in [0.1, 1.0, 10.0] {
                    let x = xs / c.sigma();
                    let g = gamma(&m, x);
                    let gt = gamma_tilde(&m, x);
                    let eps = 1e-12 * (1.0 + 16.0 * gt);
                    let mut worst = (16.0 * gt - g)
                        .min(g - 4.0 * (c.sigma2 - (nf - 1.0) / (27.0 * x * x)))
                        .min((4.0 * c.sigma2).min(x * c.delta) - g);
                    for y in [0.25, 0.5, 0.75] {
                        let f = (nf - 1.0) / nf;
                        worst = worst.min(g - (1.0 - y * y * f * f) * gamma_tilde(&m, x * y));
                    }
                    sandwich.record(worst + eps);
                }
            }
        }
        let values: Vec<f64> = (0..n).map(|_| r.gen_range(-5.0..5.0)).collect();
        let s = from_sampling(&values, r.gen_range(1..n))?;
        let generic = bound_report(&s.matrix, ROUNDED_C1, ROUNDED_C2)?.bound;
        sampling.record((sampling_bound(&s, ROUNDED_C1, ROUNDED_C2)? - generic).abs() / generic);
    }
    for n in 2..=5 {
        let m = random_matrix(&mut r, n, 1.0);
        let sigma = center(&m).sigma();
        let delta = kolmogorov_distance(&enumerate(&m, cfg.enum_cap.max(5), cfg.threads)?)?.delta;
        for ts in [2.0, 10.0] {
            let b = smoothing_bound(&m, 0.89, ts / sigma, 1e-8, cfg.perm_cap)?;
            smoothing.record(b.value - delta + 1e-8);
        }
    }
    Ok(vec![main, lyap, var, sandwich, sampling, smoothing])
}

fn constants_suite() -> CliResult<Vec<Check>> {
    let k = kappa();
    let v = v_of_w(0.89)?;
    let c = derive_constants(PipelineInputs::default())?;
    let mut kap = Check::residual("kappa vs 0.09916191", 1e-7);
    kap.record((k.kappa - 0.09916191).abs());
    let mut x0 = Check::residual("x0 vs 3.99589", 1e-4);
    x0.record((k.x0 - 3.99589).abs());
    let mut vw = Check::residual("v(0.89) vs 5.329260", 1e-5);
    vw.record((v - 5.329260).abs());
    let mut c3 = Check::residual("C3 vs 1.2992", 1e-3);
    c3.record((c.c3 - 1.2992).abs());
    let mut c1 = Check::slack("15.84 - C1");
    c1.record(15.84 - c.c1);
    let mut c2 = Check::slack("0.65 - C2");
    c2.record(0.65 - c.c2);
    let mut prod = Check::slack("10.3 - C1 C2");
    prod.record(10.3 - c.c1 * c.c2);
    let mut l5 = Check::residual("double integrals, closed vs numeric", 1e-6);
    for cc in [0.01, 0.1, 0.25, 0.4, 0.49] {
        let l = double_integrals(cc)?;
        l5.record(l.residuals.0.max(l.residuals.1));
    }
    let mut taylor = Check::slack("Taylor remainder inequality");
    for i in 0..=400 {
        let x = -20.0 + 0.1 * i as f64;
        for kk in 0..=6 {
            let (lhs, rhs) = taylor_remainder_check(x, kk);
            taylor.record(rhs - lhs + 1e-12);
        }
    }
    Ok(vec![kap, x0, vw, c3, c1, c2, prod, l5, taylor])
}

fn cf_suite(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut r = rng(cfg, 4);
    let mut l4 = Check::slack("modulus bound minus |phi|");
    let mut integral = Check::slack("integral bound minus |phi - gauss|");
    let mut closed = Check::slack("closed bound minus |phi - gauss|");
    let mut simplified = Check::slack("simplified bound (n >= 6) minus |phi - gauss|");
    let mut enumerated = Check::residual("permanent vs enumerated phi", 1e-10);
    let mut restricted = Check::slack("restricted sum bound");
    for n in 3..=7 {
        for i in 0..5 {
            let m = random_matrix(&mut r, n, [0.1, 1.0, 10.0][i % 3]);
            let ctx = CfContext::new(&m).with_perm_cap(cfg.perm_cap);
            let sigma = ctx.stats().sigma();
            let d = enumerate(&m, cfg.enum_cap.max(7), cfg.threads)?;
            for k in 0..25 {
                let t = (-10.0 + 20.0 * k as f64 / 24.0) / sigma;
                let e = ctx.evaluate(t, cfg.quad_tol)?;
                let diff = (e.phi - e.gauss).norm();
                l4.record(e.modulus_bound + 1e-12 - e.phi.norm());
                integral.record(e.diff_bound_integral + cfg.quad_tol - diff);
                closed.record(e.diff_bound_closed + 1e-12 - diff);
                if let Some(s) = e.diff_bound_simplified {
                    simplified.record(s + 1e-12 - diff);
                }
                enumerated.record((e.phi - d.char_fn(t)).norm());
            }
            if n == 6 {
                for ell in 0..=4 {
                    let pick = |r: &mut ChaCha8Rng| {
                        let mut all: Vec<usize> = (1..=n).collect();
                        for i in 0..ell {
                            let j = r.gen_range(i..n);
                            all.swap(i, j);
                        }
                        all.truncate(ell);
                        all
                    };
                    let (ls, ms) = (pick(&mut r), pick(&mut r));
                    for k in 0..10 {
                        let t = (-10.0 + 20.0 * k as f64 / 9.0) / sigma;
                        let (lhs, rhs) = ctx.restricted_sum_check(&ls, &ms, t, cfg.enum_cap.max(6))?;
                        restricted.record(rhs + 1e-12 - lhs);
                    }
                }
            }
        }
    }
    Ok(vec![l4, integral, closed, simplified, enumerated, restricted])
}
