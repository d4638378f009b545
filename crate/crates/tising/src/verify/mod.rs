//! Executable checks for the finite-volume identities and inequalities.
//!
//! Identity and inequality checks run over randomized instances and must
//! report zero violations; measurement checks (ratio mixing, field boost,
//! covariance-to-pivotality constants) report fitted values instead of
//! asserting paper constants, which are existential. Every violation dump
//! carries the full instance serialization for replay.

pub mod instances;

use crate::error::{Error, Result};
use crate::events::{
    is_pivotal, lr_crossing, modify, occurs_on, tb_minus_crossing_complement_check,
    IncreasingEvent,
};
use crate::exact::{Boundary, BoundEvent, Conditional, GibbsEngine, MeasureSpec, SpinConfig};
use crate::hybrid::{gamma_ratio_grid, GammaGrid, HybridEngine, HybridSpec};
use crate::lattice::{full_ball_boundary_size, LatticeKind, Region, Site};
use crate::stats::linear_fit;
use instances::InstanceGen;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::sync::Arc;

/// Absolute tolerance for identity checks.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Slack tolerance for inequality checks.
pub const INEQUALITY_TOL: f64 = 1e-12;
/// Relative tolerance for the derivative-formula check.
pub const DERIVATIVE_REL_TOL: f64 = 1e-6;
/// Finite-difference step for the derivative-formula check.
pub const FD_STEP: f64 = 1e-4;
/// Scale floor for the relative derivative comparison: derivatives live on
/// the O(1) scale of mu over a unit parameter range, and the FD oracle's
/// own truncation is what the floor absorbs for very flat instances.
pub const DERIV_SCALE: f64 = 0.1;
/// Per-step tolerance for the path monotonicity check.
pub const PATH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    Identity,
    Inequality,
    Measurement,
}

/// Outcome of one check run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub kind: CheckKind,
    pub instances: u64,
    pub violations: u64,
    /// Identities: largest |lhs - rhs| seen. Inequalities: smallest slack
    /// seen (negative means violated).
    pub worst_margin: f64,
    pub details: Vec<Value>,
    pub measurements: Value,
}

const MAX_DUMPS: usize = 10;

impl CheckReport {
    fn new(name: &str, kind: CheckKind) -> Self {
        CheckReport {
            check_name: name.to_string(),
            kind,
            instances: 0,
            violations: 0,
            worst_margin: match kind {
                CheckKind::Inequality => f64::INFINITY,
                _ => 0.0,
            },
            details: Vec::new(),
            measurements: Value::Null,
        }
    }

    fn record_identity(&mut self, diff: f64, tol: f64, dump: impl FnOnce() -> Value) {
        self.instances += 1;
        self.worst_margin = self.worst_margin.max(diff);
        if diff > tol {
            self.violations += 1;
            if self.details.len() < MAX_DUMPS {
                self.details.push(dump());
            }
        }
    }

    fn record_slack(&mut self, slack: f64, tol: f64, dump: impl FnOnce() -> Value) {
        self.instances += 1;
        self.worst_margin = self.worst_margin.min(slack);
        if slack < -tol {
            self.violations += 1;
            if self.details.len() < MAX_DUMPS {
                self.details.push(dump());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Seed and workload for one check run.
#[derive(Clone, Copy, Debug)]
pub struct CheckCtx {
    pub seed: u64,
    /// Requested instance count; 0 means the check's default.
    pub instances: u64,
}

impl CheckCtx {
    pub fn new(seed: u64, instances: u64) -> Self {
        CheckCtx { seed, instances }
    }

    fn count(&self, default: u64) -> u64 {
        if self.instances == 0 {
            default
        } else {
            self.instances
        }
    }
}

fn indicator(event: &IncreasingEvent) -> impl Fn(&SpinConfig) -> f64 + Sync + '_ {
    move |c| if event.eval(c) { 1.0 } else { 0.0 }
}

fn spin_at(x: Site) -> impl Fn(&SpinConfig) -> f64 + Sync {
    move |c| c.get(x).expect("site in region") as f64
}

// ---------------------------------------------------------------------------
// Covariance inequality |<sigma_y sigma_z; I_A>| <= <sigma_y; I_A> + <sigma_z; I_A>
// ---------------------------------------------------------------------------

pub fn check_cov_inequality(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("cov_inequality", CheckKind::Inequality);
    let mut gen = InstanceGen::new(ctx.seed, 0x01);
    for _ in 0..ctx.count(1000) {
        let desc = gen.gibbs(12, 2.0, 2.0);
        let spec = desc.build();
        let region = spec.region().clone();
        let engine = GibbsEngine::build(spec)?;
        let y = gen.pick_site(&region);
        let z = gen.pick_site(&region); // y == z allowed: degenerate case
        let edesc = gen.cylinder_event(region.sites(), None, None);
        let event = edesc.build("cov_ineq");
        let ind = indicator(&event);
        let lhs = engine
            .covariance(|c| (c.get(y).unwrap() * c.get(z).unwrap()) as f64, &ind)
            .abs();
        let rhs = engine.covariance(spin_at(y), &ind) + engine.covariance(spin_at(z), &ind);
        report.record_slack(rhs - lhs, INEQUALITY_TOL, || {
            json!({"instance": desc, "event": edesc, "y": y, "z": z, "lhs": lhs, "rhs": rhs})
        });
    }

    // Negativity witness: A = {sigma_y = +1} with both one-point
    // expectations in (-1, 0) makes the covariance on the left strictly
    // negative while the inequality still holds.
    let mut witness = None;
    'search: for beta in [0.3, 0.5, 0.8] {
        for h in [-0.2, -0.4, -0.8] {
            let region = Region::from_sites(
                LatticeKind::tri_times_z(),
                vec![Site::new(0, 0, 0), Site::new(1, 0, 0)],
            )?;
            let y = Site::new(0, 0, 0);
            let z = Site::new(1, 0, 0);
            let engine = GibbsEngine::build(MeasureSpec::homogeneous(
                region, beta, h, Boundary::Free,
            ))?;
            let event = IncreasingEvent::single_site_plus(y);
            let ind = indicator(&event);
            let cov =
                engine.covariance(|c| (c.get(y).unwrap() * c.get(z).unwrap()) as f64, &ind);
            let my = engine.expectation(spin_at(y));
            let rhs =
                engine.covariance(spin_at(y), &ind) + engine.covariance(spin_at(z), &ind);
            if cov < -1e-6 && my > -1.0 && my < 0.0 {
                let slack = rhs - cov.abs();
                report.record_slack(slack, INEQUALITY_TOL, || {
                    json!({"witness": {"beta": beta, "h": h}, "cov": cov})
                });
                witness = Some(json!({
                    "beta": beta, "h": h, "cov": cov, "one_point": my, "slack": slack
                }));
                break 'search;
            }
        }
    }
    if witness.is_none() {
        report.violations += 1;
        report
            .details
            .push(json!({"error": "no negative-covariance witness found"}));
    }
    report.measurements = json!({ "negativity_witness": witness });
    Ok(report)
}

// ---------------------------------------------------------------------------
// Field-perturbation sandwich (Gronwall bound)
// ---------------------------------------------------------------------------

/// Strip region `[0, len) x [-1, 1] x {0}` used by the ball-perturbation
/// checks: the ball around x = (0,0,0) occupies the left end, the event
/// support the right end.
fn strip_region(len: i32) -> Arc<Region> {
    let sites: Vec<Site> = (0..len)
        .flat_map(|a| (-1..=1).map(move |b| Site::new(a, b, 0)))
        .collect();
    Region::from_sites(LatticeKind::tri_times_z(), sites).expect("strip region")
}

/// Sites of the region at Chebyshev distance exactly m from x (the inner
/// vertex boundary of the full-lattice ball intersected with the region).
fn ring_sites(region: &Region, x: Site, m: i32) -> Vec<Site> {
    region
        .sites()
        .iter()
        .copied()
        .filter(|s| s.linf_dist(&x) == m)
        .collect()
}

fn ball_sum_of_covs(
    base: &MeasureSpec,
    ring: &[Site],
    t: f64,
    event: &IncreasingEvent,
) -> Result<f64> {
    let mut field = base.field().to_vec();
    for s in ring {
        field[base.region().id_of(*s).unwrap()] += t;
    }
    let engine = GibbsEngine::build(base.replace_field(field)?)?;
    let ind = indicator(event);
    Ok(ring
        .iter()
        .map(|y| engine.covariance(spin_at(*y), &ind))
        .sum())
}

pub fn check_gronwall(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("gronwall", CheckKind::Inequality);
    let mut gen = InstanceGen::new(ctx.seed, 0x02);
    let kind = LatticeKind::tri_times_z();
    let t_grid = [-0.5, -0.3, -0.1, 0.1, 0.3, 0.5];
    for i in 0..ctx.count(250) {
        let m = 1 + (gen.rng().below(2) as i32);
        let region = strip_region(m + 4);
        let x = Site::new(0, 0, 0);
        let ring = ring_sites(&region, x, m);
        let pool: Vec<Site> = region
            .sites()
            .iter()
            .copied()
            .filter(|s| s.linf_dist(&x) > m)
            .collect();
        let edesc = gen.cylinder_event(&pool, None, None);
        let event = if i % 50 == 0 {
            IncreasingEvent::full_space() // degenerate: all covariances zero
        } else {
            edesc.build("gronwall")
        };
        let beta = gen.beta(0.0, 1.0);
        let h = gen.rng().range_f64(-0.5, 0.5);
        let base = MeasureSpec::homogeneous(region.clone(), beta, h, Boundary::Free);
        let boundary_size = full_ball_boundary_size(&kind, m) as f64;
        let f0 = ball_sum_of_covs(&base, &ring, 0.0, &event)?;
        // FKG: the reference sum itself is nonnegative.
        report.record_slack(f0, INEQUALITY_TOL, || {
            json!({"beta": beta, "h": h, "m": m, "f0": f0, "event": edesc})
        });
        for &t in &t_grid {
            let ft = ball_sum_of_covs(&base, &ring, t, &event)?;
            let lower = (-4.0 * boundary_size * t.abs()).exp() * f0;
            let upper = (4.0 * boundary_size * t.abs()).exp() * f0;
            let slack = (ft - lower).min(upper - ft);
            report.record_slack(slack, INEQUALITY_TOL, || {
                json!({
                    "beta": beta, "h": h, "m": m, "t": t, "f0": f0, "ft": ft,
                    "lower": lower, "upper": upper, "event": edesc
                })
            });
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Ratio mixing measurement
// ---------------------------------------------------------------------------

/// Empirical decay of the ratio-mixing deviation on a 1 x 1 x len column.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixingFit {
    pub beta: f64,
    pub h: f64,
    pub distances: Vec<i32>,
    pub deviations: Vec<f64>,
    pub lambda_hat: f64,
    pub k_hat: f64,
    pub residual_rms: f64,
    pub monotone: bool,
}

pub fn measure_ratio_mixing(beta: f64, h: f64, column_len: usize) -> Result<MixingFit> {
    if column_len < 4 {
        return Err(Error::InsufficientFitData {
            need: 3,
            got: column_len.saturating_sub(1),
        });
    }
    let sites: Vec<Site> = (0..column_len as i32).map(|c| Site::new(0, 0, c)).collect();
    let region = Region::from_sites(LatticeKind::tri_times_z(), sites)?;
    let engine = GibbsEngine::build(MeasureSpec::homogeneous(
        region.clone(),
        beta,
        h,
        Boundary::Free,
    ))?;
    let u = Site::new(0, 0, 0);
    let pa = engine.event_prob(|c| c.get(u).unwrap() == 1);
    let mut distances = Vec::new();
    let mut deviations = Vec::new();
    for d in 1..column_len as i32 {
        let v = Site::new(0, 0, d);
        let pb = engine.event_prob(|c| c.get(v).unwrap() == 1);
        let pab = engine.event_prob(|c| c.get(u).unwrap() == 1 && c.get(v).unwrap() == 1);
        distances.push(d);
        deviations.push((pab / (pa * pb) - 1.0).abs());
    }
    let monotone = deviations.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let positive: Vec<(f64, f64)> = distances
        .iter()
        .zip(&deviations)
        .filter(|(_, &dev)| dev > 1e-14)
        .map(|(&d, &dev)| (d as f64, dev.ln()))
        .collect();
    let (lambda_hat, k_hat, residual_rms) = if positive.len() >= 3 {
        let xs: Vec<f64> = positive.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = positive.iter().map(|p| p.1).collect();
        let (a, b, rms) = linear_fit(&xs, &ys);
        (-b, a.exp(), rms)
    } else {
        (f64::INFINITY, 0.0, 0.0)
    };
    Ok(MixingFit {
        beta,
        h,
        distances,
        deviations,
        lambda_hat,
        k_hat,
        residual_rms,
        monotone,
    })
}

pub fn check_mixing(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("mixing", CheckKind::Measurement);
    let _ = ctx;
    let mut fits = Vec::new();
    // beta = 0: independence, all deviations vanish.
    let zero = measure_ratio_mixing(0.0, 0.4, 10)?;
    let max_dev = zero.deviations.iter().cloned().fold(0.0, f64::max);
    report.record_slack(1e-12 - max_dev, 0.0, || {
        json!({"beta": 0.0, "max_deviation": max_dev})
    });
    fits.push(zero);
    for (beta, h) in [(0.2, 0.0), (0.3, 0.0), (0.2, 0.3), (0.35, -0.2)] {
        let fit = measure_ratio_mixing(beta, h, 12)?;
        // Decay trend is asserted; the constants are only reported.
        report.record_slack(
            if fit.monotone { 1.0 } else { -1.0 },
            0.0,
            || json!({"beta": beta, "h": h, "deviations": fit.deviations}),
        );
        // Adjacent sites must show a strictly positive deviation.
        report.record_slack(fit.deviations[0] - 1e-12, 0.0, || {
            json!({"beta": beta, "h": h, "first_deviation": fit.deviations[0]})
        });
        fits.push(fit);
    }
    report.measurements = serde_json::to_value(&fits)?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Minimal field boost (stochastic comparison mechanism)
// ---------------------------------------------------------------------------

/// Result of the minimal-boost bisection: the smallest ring field increment
/// whose measure dominates the conditioned one on the given event.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldBoostResult {
    pub x: Site,
    pub m: i32,
    pub t_star: f64,
    pub monotone_in_t: bool,
    pub target: f64,
    pub achieved: f64,
    pub probes: Vec<(f64, f64)>,
}

/// Bisection on t >= 0 for the ring field `h + t` on the Chebyshev shell
/// of radius m around x, until `P_{g(t)}(A) >= P(A | sigma_x = +1)`.
pub fn min_field_boost(
    base: &MeasureSpec,
    x: Site,
    m: i32,
    event: &IncreasingEvent,
) -> Result<FieldBoostResult> {
    for s in event.support() {
        assert!(
            s.linf_dist(&x) > m,
            "event support must avoid the ball around x"
        );
    }
    let ring = ring_sites(base.region(), x, m);
    assert!(!ring.is_empty(), "ring does not intersect the region");
    let engine = GibbsEngine::build(base.clone())?;
    let target = match engine.conditional(&[(x, 1)])? {
        Conditional::Engine(cond) => cond.event_prob(|c| event.eval(c)),
        Conditional::PointMass(c) => {
            if event.eval(&c) {
                1.0
            } else {
                0.0
            }
        }
    };
    let mut probes: Vec<(f64, f64)> = Vec::new();
    let mut eval = |t: f64| -> Result<f64> {
        let p = ball_sum_prob(base, &ring, t, event)?;
        probes.push((t, p));
        Ok(p)
    };
    let p0 = eval(0.0)?;
    let mut t_star = 0.0;
    let mut achieved = p0;
    if p0 < target - INEQUALITY_TOL {
        let mut hi = 0.25;
        let mut p_hi = eval(hi)?;
        while p_hi < target - INEQUALITY_TOL {
            hi *= 2.0;
            assert!(hi < 1e6, "boost bisection failed to bracket");
            p_hi = eval(hi)?;
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let p_mid = eval(mid)?;
            if p_mid >= target - INEQUALITY_TOL {
                hi = mid;
                p_hi = p_mid;
            } else {
                lo = mid;
            }
        }
        t_star = hi;
        achieved = p_hi;
    }
    // The probe trace, sorted by t, must be nondecreasing in P (FKG).
    probes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone_in_t = probes.windows(2).all(|w| w[1].1 >= w[0].1 - INEQUALITY_TOL);
    Ok(FieldBoostResult {
        x,
        m,
        t_star,
        monotone_in_t,
        target,
        achieved,
        probes,
    })
}

fn ball_sum_prob(
    base: &MeasureSpec,
    ring: &[Site],
    t: f64,
    event: &IncreasingEvent,
) -> Result<f64> {
    let mut field = base.field().to_vec();
    for s in ring {
        field[base.region().id_of(*s).unwrap()] += t;
    }
    let engine = GibbsEngine::build(base.replace_field(field)?)?;
    Ok(engine.event_prob(|c| event.eval(c)))
}

pub fn check_field_boost(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("field_boost", CheckKind::Measurement);
    let mut gen = InstanceGen::new(ctx.seed, 0x04);
    let mut t_stars = Vec::new();
    for i in 0..ctx.count(120) {
        let m = 1 + (gen.rng().below(2) as i32);
        let region = strip_region(m + 4);
        let x = Site::new(0, 0, 0);
        let pool: Vec<Site> = region
            .sites()
            .iter()
            .copied()
            .filter(|s| s.linf_dist(&x) > m)
            .collect();
        let (event, beta) = if i % 40 == 0 {
            (IncreasingEvent::full_space(), gen.beta(0.0, 0.6))
        } else if i % 40 == 1 {
            (gen.cylinder_event(&pool, None, None).build("boost"), 0.0)
        } else {
            (
                gen.cylinder_event(&pool, None, None).build("boost"),
                gen.beta(0.0, 0.6),
            )
        };
        let h = gen.rng().range_f64(-0.5, 0.5);
        let base = MeasureSpec::homogeneous(region, beta, h, Boundary::Free);
        let result = min_field_boost(&base, x, m, &event)?;
        // Feasibility: domination reached, finite t, monotone trace.
        let ok = result.achieved >= result.target - 1e-9
            && result.t_star.is_finite()
            && result.monotone_in_t;
        report.record_slack(if ok { 1.0 } else { -1.0 }, 0.0, || {
            serde_json::to_value(&result).unwrap_or(Value::Null)
        });
        // Degenerate cases pin t* = 0: the full event, or independence.
        if i % 40 == 0 || i % 40 == 1 {
            report.record_identity(result.t_star.abs(), 1e-9, || {
                json!({"case": "t_star should be 0", "t_star": result.t_star})
            });
        }
        t_stars.push(json!({"m": m, "beta": beta, "h": h, "t_star": result.t_star}));
    }
    report.measurements = json!({ "t_stars": t_stars });
    Ok(report)
}

// ---------------------------------------------------------------------------
// Appendix identities
// ---------------------------------------------------------------------------

fn eval_on_modified(event: &IncreasingEvent, sigma: &SpinConfig, x: Site, sign: i8) -> bool {
    event.eval(&modify(sigma, &[x], sign).expect("x in region"))
}

pub fn check_appendix(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("appendix", CheckKind::Identity);
    let mut gen = InstanceGen::new(ctx.seed, 0x05);
    let mut branch_empty = 0u64;
    let mut branch_nonempty = 0u64;
    for i in 0..ctx.count(1000) {
        let desc = gen.gibbs(10, 1.5, 1.5);
        let spec = desc.build();
        let region = spec.region().clone();
        let engine = GibbsEngine::build(spec)?;
        let x = gen.pick_site(&region);
        let empty_branch = i % 2 == 0;
        let edesc = if empty_branch {
            gen.cylinder_event(region.sites(), Some(x), None)
        } else {
            gen.cylinder_event(region.sites(), None, Some(x))
        };
        let event = edesc.build("appendix");

        // Both orientations summed directly: `1 - P(+)` would lose every
        // significant digit exactly when the identities divide by it.
        let p_plus = engine.event_prob(|c| c.get(x).unwrap() == 1);
        let p_minus = engine.event_prob(|c| c.get(x).unwrap() == -1);
        let cov_a = engine.site_event_cov(x, |c| event.eval(c));
        let p_piv = engine.event_prob(|c| is_pivotal(&[x], &event, c));

        if empty_branch {
            branch_empty += 1;
            // A_x^- must be empty by construction: sigma^{x-} never in A.
            debug_assert!(!engine
                .region()
                .sites()
                .iter()
                .any(|_| eval_on_modified(&event, &SpinConfig::all_plus(region.clone()), x, -1)));
            if p_piv < 1e-300 {
                continue; // precondition of the first identity
            }
            let p_piv_plus =
                engine.event_prob(|c| c.get(x).unwrap() == 1 && is_pivotal(&[x], &event, c));
            let cond = p_piv_plus / p_piv;
            let rhs = cov_a / (2.0 * p_minus) / cond;
            report.record_identity((p_piv - rhs).abs(), IDENTITY_TOL, || {
                json!({"instance": desc, "event": edesc, "x": x, "branch": "empty",
                       "lhs": p_piv, "rhs": rhs})
            });
        } else {
            branch_nonempty += 1;
            let p_a = engine.event_prob(|c| event.eval(c));
            let p_ax_plus = engine.event_prob(|c| eval_on_modified(&event, c, x, 1));
            let p_ax_minus = engine.event_prob(|c| eval_on_modified(&event, c, x, -1));
            assert!(p_ax_minus > 0.0, "generator must produce A_x^- nonempty");
            let cov_ax_plus = engine.site_event_cov(x, |c| eval_on_modified(&event, c, x, 1));
            let cov_ax_minus = engine.site_event_cov(x, |c| eval_on_modified(&event, c, x, -1));
            let p_plus_given_ax_plus = engine
                .event_prob(|c| c.get(x).unwrap() == 1 && eval_on_modified(&event, c, x, 1))
                / p_ax_plus;
            let p_minus_given_ax_minus = engine
                .event_prob(|c| c.get(x).unwrap() == -1 && eval_on_modified(&event, c, x, -1))
                / p_ax_minus;
            let p_plus_given_a =
                engine.event_prob(|c| c.get(x).unwrap() == 1 && event.eval(c)) / p_a;
            let p_minus_given_a =
                engine.event_prob(|c| c.get(x).unwrap() == -1 && event.eval(c)) / p_a;
            assert!(p_plus_given_ax_plus > 0.0 && p_minus_given_ax_minus > 0.0);
            assert!(p_plus_given_a > 0.0 && p_minus_given_a > 0.0);
            let rhs = cov_a / (2.0 * p_plus_given_ax_plus)
                + cov_a / (2.0 * p_minus_given_ax_minus)
                - cov_ax_plus / (2.0 * p_plus_given_a)
                - cov_ax_minus / (2.0 * p_minus_given_a);
            report.record_identity((p_piv - rhs).abs(), IDENTITY_TOL, || {
                json!({"instance": desc, "event": edesc, "x": x, "branch": "nonempty",
                       "lhs": p_piv, "rhs": rhs})
            });
        }

        // Specialization A = {sigma_x = +1}: the covariance collapses to
        // 2 P(+) P(-).
        let cov_single = engine.site_event_cov(x, |c| c.get(x).unwrap() == 1);
        report.record_identity(
            (cov_single - 2.0 * p_plus * p_minus).abs(),
            IDENTITY_TOL,
            || json!({"instance": desc, "x": x, "case": "single-site specialization"}),
        );
    }
    report.measurements = json!({
        "branch_empty": branch_empty,
        "branch_nonempty": branch_nonempty,
    });
    if branch_empty == 0 || branch_nonempty == 0 {
        return Err(Error::GeneratorExhausted(
            "appendix check needs both A_x^- branches".into(),
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Pivotal-complement identity (through the measure, exhaustively in sigma)
// ---------------------------------------------------------------------------

pub fn check_pivotal_complement(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("pivotal_complement", CheckKind::Identity);
    let mut gen = InstanceGen::new(ctx.seed, 0x06);
    for _ in 0..ctx.count(1000) {
        let region = gen.region(12);
        let edesc = gen.cylinder_event(region.sites(), None, None);
        let event = edesc.build("pivcom");
        let delta = gen.site_subset(&region, 0.4);
        let complement: Vec<Site> = region
            .sites()
            .iter()
            .copied()
            .filter(|s| !delta.contains(s))
            .collect();
        let mut mismatches = 0u64;
        for id in 0..(1u64 << region.len()) {
            let sigma = SpinConfig::from_id(region.clone(), id);
            let lhs = event.eval(&sigma) && !is_pivotal(&delta, &event, &sigma);
            let rhs = occurs_on(&event, &complement, &sigma);
            if lhs != rhs {
                mismatches += 1;
            }
        }
        report.record_identity(mismatches as f64, 0.0, || {
            json!({"event": edesc, "delta": delta, "mismatches": mismatches})
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Derivative formulas against finite differences
// ---------------------------------------------------------------------------

pub fn check_derivative_formulas(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("derivative_formulas", CheckKind::Identity);
    let mut gen = InstanceGen::new(ctx.seed, 0x07);
    let mut degenerate_rejected = 0u64;
    let target = ctx.count(150);
    let mut done = 0u64;
    let mut attempts = 0u64;
    while done < target && attempts < target * 20 {
        attempts += 1;
        let region = gen.two_layer_region(16, 6);
        let slab: Vec<Site> = region.layer_range_sites(0, 1);
        let edesc = gen.cylinder_event(&slab, None, None);
        let event = edesc.build("deriv");
        let beta = gen.beta(0.0, 1.0);
        let h = gen.rng().range_f64(-1.0, 1.0);
        let p = match gen.rng().below(10) {
            0 => 0.0,
            1 => 1.0,
            _ => gen.rng().range_f64(0.1, 0.9),
        };
        let measure = MeasureSpec::homogeneous(region.clone(), beta, h, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone())?;
        let spec = HybridSpec::new(measure.clone(), p, event.clone(), None)?;
        let heng = HybridEngine::new(&engine, &spec)?;
        let (_, pair) = heng.derivatives(p);

        // Degenerate derivatives make the relative comparison meaningless;
        // resample (the rejection count is reported).
        if pair.d_dp.abs() < 1e-5 || pair.d_dh.abs() < 1e-5 {
            degenerate_rejected += 1;
            continue;
        }
        done += 1;

        let mu_at_p = |pv: f64| -> Result<f64> {
            let s = HybridSpec::new(measure.clone(), pv, event.clone(), None)?;
            Ok(HybridEngine::new(&engine, &s)?.mu(pv))
        };
        let fd_p = if p - FD_STEP < 0.0 {
            // Second-order one-sided stencil keeps the endpoint truncation
            // comparable to the interior central difference.
            (-3.0 * mu_at_p(p)? + 4.0 * mu_at_p(p + FD_STEP)? - mu_at_p(p + 2.0 * FD_STEP)?)
                / (2.0 * FD_STEP)
        } else if p + FD_STEP > 1.0 {
            (3.0 * mu_at_p(p)? - 4.0 * mu_at_p(p - FD_STEP)? + mu_at_p(p - 2.0 * FD_STEP)?)
                / (2.0 * FD_STEP)
        } else {
            (mu_at_p(p + FD_STEP)? - mu_at_p(p - FD_STEP)?) / (2.0 * FD_STEP)
        };
        let rel_p = (pair.d_dp - fd_p).abs() / pair.d_dp.abs().max(fd_p.abs()).max(DERIV_SCALE);
        report.record_identity(rel_p, DERIVATIVE_REL_TOL, || {
            json!({"event": edesc, "beta": beta, "h": h, "p": p,
                   "formula": pair.d_dp, "fd": fd_p, "which": "dp"})
        });

        let mu_at_h = |hv: f64| -> Result<f64> {
            let m = MeasureSpec::homogeneous(region.clone(), beta, hv, Boundary::Free);
            let e = GibbsEngine::build(m.clone())?;
            let s = HybridSpec::new(m, p, event.clone(), None)?;
            Ok(HybridEngine::new(&e, &s)?.mu(p))
        };
        let fd_h = (mu_at_h(h + FD_STEP)? - mu_at_h(h - FD_STEP)?) / (2.0 * FD_STEP);
        let rel_h = (pair.d_dh - fd_h).abs() / pair.d_dh.abs().max(fd_h.abs()).max(DERIV_SCALE);
        report.record_identity(rel_h, DERIVATIVE_REL_TOL, || {
            json!({"event": edesc, "beta": beta, "h": h, "p": p,
                   "formula": pair.d_dh, "fd": fd_h, "which": "dh"})
        });
    }
    report.measurements = json!({
        "instances_compared": done,
        "degenerate_rejected": degenerate_rejected,
    });
    if done < target {
        return Err(Error::GeneratorExhausted(
            "could not find enough non-degenerate derivative instances".into(),
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Mask-exchange inequalities
// ---------------------------------------------------------------------------

pub fn check_omega_exchange(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("omega_exchange", CheckKind::Inequality);
    let mut gen = InstanceGen::new(ctx.seed, 0x08);
    for _ in 0..ctx.count(60) {
        // Bottom strip 6..8 long, top layer up to 4 sites: B_{3m}(y) with
        // m = 1 then covers only part of the strip, keeping the local
        // opening nontrivial.
        let len = 6 + gen.rng().below(3) as i32;
        let mut sites: Vec<Site> = (0..len).map(|a| Site::new(a, 0, 0)).collect();
        let mut top: Vec<Site> = (0..len)
            .map(|a| Site::new(a, 0, 1))
            .filter(|_| gen.rng().bool_with(0.5))
            .collect();
        while top.len() > 4 {
            let k = gen.rng().below(top.len());
            top.remove(k);
        }
        if top.is_empty() {
            top.push(Site::new(0, 0, 1));
        }
        sites.extend(top);
        let region = Region::from_sites(LatticeKind::tri_times_z(), sites)?;
        let slab = region.layer_range_sites(0, 1);
        let edesc = gen.cylinder_event(&slab, None, None);
        let event = edesc.build("exchange");
        let beta = gen.beta(0.0, 1.0);
        let h = gen.rng().range_f64(-0.8, 0.8);
        let p = *gen.rng().pick(&[0.1f64, 0.25, 0.5, 0.75, 0.9]);
        let m = 1;
        let engine = GibbsEngine::build(MeasureSpec::homogeneous(
            region.clone(),
            beta,
            h,
            Boundary::Free,
        ))?;
        let bev = BoundEvent::bind(&event, &region)?;
        let lam1 = region.layer_sites(1);
        let s0 = region.layer_sites(0);

        // Support-bit index of each top-layer site (None if off support).
        let bit_of = |s: Site| -> Option<u32> {
            event
                .support()
                .iter()
                .position(|t| *t == s)
                .map(|k| 1u32 << k)
        };
        let s0_bits: u32 = s0.iter().filter_map(|s| bit_of(*s)).fold(0, |a, b| a | b);
        let avail_of = |mask: u64, extra: Option<Site>| -> u32 {
            let mut bits = s0_bits;
            for (k, s) in lam1.iter().enumerate() {
                if (mask >> k) & 1 == 1 {
                    if let Some(b) = bit_of(*s) {
                        bits |= b;
                    }
                }
            }
            if let Some(s) = extra {
                if let Some(b) = bit_of(s) {
                    bits |= b;
                }
            }
            bits
        };

        // cov(sigma_y, I[occurs on D]) for all y, cached per distinct D.
        let mut cov_cache: std::collections::HashMap<u32, Vec<f64>> = Default::default();
        let mut cov_for = |avail: u32| -> Vec<f64> {
            cov_cache
                .entry(avail)
                .or_insert_with(|| {
                    let table = bev.table.as_slice();
                    let w: Vec<f64> = (0..(1usize << bev.support_len()))
                        .map(|g| if table[g & avail as usize] { 1.0 } else { 0.0 })
                        .collect();
                    engine.weighted_cov_all_sites(&bev, &w).1
                })
                .clone()
        };
        let mut piv_cache: std::collections::HashMap<(u32, u32), f64> = Default::default();
        let mut piv_for = |avail: u32, ybit: u32| -> f64 {
            *piv_cache
                .entry((avail, ybit))
                .or_insert_with(|| engine.pivotal_prob(&bev, avail, ybit))
        };

        let l = lam1.len();
        let masks_excluding = |skip: Option<usize>| -> Vec<u64> {
            (0..(1u64 << l))
                .filter(|m| skip.map_or(true, |k| (m >> k) & 1 == 0))
                .collect()
        };

        // First display: covariance sums.
        for (xi, _x) in region.sites().iter().enumerate() {
            for y in region.sites() {
                let x_in_lam1 = lam1.iter().position(|s| region.site(xi) == *s);
                let lhs: f64 = masks_excluding(x_in_lam1)
                    .iter()
                    .map(|&mask| {
                        let ones = mask.count_ones() as i32;
                        let slots = if x_in_lam1.is_some() { l - 1 } else { l } as i32;
                        let w = p.powi(ones) * (1.0 - p).powi(slots - ones);
                        let yid = region.id_of(*y).unwrap();
                        w * cov_for(avail_of(mask, Some(*y)))[yid]
                    })
                    .sum();
                let y_in_lam1 = lam1.iter().position(|s| s == y);
                let rhs_sum: f64 = masks_excluding(y_in_lam1)
                    .iter()
                    .map(|&mask| {
                        let ones = mask.count_ones() as i32;
                        let slots = if y_in_lam1.is_some() { l - 1 } else { l } as i32;
                        let w = p.powi(ones) * (1.0 - p).powi(slots - ones);
                        let yid = region.id_of(*y).unwrap();
                        w * cov_for(avail_of(mask, Some(*y)))[yid]
                    })
                    .sum();
                let rhs = rhs_sum / (1.0 - p);
                report.record_slack(rhs - lhs, INEQUALITY_TOL, || {
                    json!({"event": edesc, "beta": beta, "h": h, "p": p,
                           "x": region.site(xi), "y": y, "lhs": lhs, "rhs": rhs,
                           "display": "covariance"})
                });
            }
        }

        // Second display: pivotal sums, with the local opening of
        // B_{3m}(y) in the top layer.
        for (xi, _x) in region.sites().iter().enumerate() {
            for y in &lam1 {
                let ybit = match bit_of(*y) {
                    Some(b) => b,
                    None => continue, // event ignores y: both sides vanish
                };
                let open_mask: u64 = lam1
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.linf_dist(y) <= 3 * m)
                    .map(|(k, _)| 1u64 << k)
                    .sum();
                let x_in_lam1 = lam1.iter().position(|s| region.site(xi) == *s);
                let lhs: f64 = masks_excluding(x_in_lam1)
                    .iter()
                    .map(|&mask| {
                        let ones = mask.count_ones() as i32;
                        let slots = if x_in_lam1.is_some() { l - 1 } else { l } as i32;
                        let w = p.powi(ones) * (1.0 - p).powi(slots - ones);
                        w * piv_for(avail_of(mask | open_mask, Some(*y)), ybit)
                    })
                    .sum();
                let y_in_lam1 = lam1.iter().position(|s| s == y);
                let rhs_sum: f64 = masks_excluding(y_in_lam1)
                    .iter()
                    .map(|&mask| {
                        let ones = mask.count_ones() as i32;
                        let slots = if y_in_lam1.is_some() { l - 1 } else { l } as i32;
                        let w = p.powi(ones) * (1.0 - p).powi(slots - ones);
                        w * piv_for(avail_of(mask | open_mask, Some(*y)), ybit)
                    })
                    .sum();
                let rhs = rhs_sum / (1.0 - p);
                report.record_slack(rhs - lhs, INEQUALITY_TOL, || {
                    json!({"event": edesc, "beta": beta, "h": h, "p": p,
                           "x": region.site(xi), "y": y, "lhs": lhs, "rhs": rhs,
                           "display": "pivotal"})
                });
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// FKG, GKS, boundary monotonicity
// ---------------------------------------------------------------------------

pub fn check_fkg(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("fkg", CheckKind::Inequality);
    let mut gen = InstanceGen::new(ctx.seed, 0x09);
    for i in 0..ctx.count(1000) {
        let desc = gen.gibbs(12, 2.0, 2.0);
        let spec = desc.build();
        let region = spec.region().clone();
        let engine = GibbsEngine::build(spec)?;
        let a = gen.cylinder_event(region.sites(), None, None);
        let ea = a.build("fkg_a");
        let cov = if i % 3 == 0 {
            let x = gen.pick_site(&region);
            engine.covariance(spin_at(x), indicator(&ea))
        } else {
            let b = gen.cylinder_event(region.sites(), None, None);
            let eb = b.build("fkg_b");
            engine.covariance(indicator(&ea), indicator(&eb))
        };
        report.record_slack(cov, INEQUALITY_TOL, || {
            json!({"instance": desc, "event_a": a, "cov": cov})
        });
    }
    Ok(report)
}

pub fn check_gks(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("gks", CheckKind::Inequality);
    let mut gen = InstanceGen::new(ctx.seed, 0x0a);
    for _ in 0..ctx.count(400) {
        let region = gen.region(10);
        let beta = gen.beta(0.0, 2.0);
        let field: Vec<f64> = (0..region.len())
            .map(|_| gen.rng().range_f64(0.0, 2.0))
            .collect();
        let boundary = if gen.rng().bool_with(0.5) {
            Boundary::Free
        } else {
            Boundary::Plus
        };
        let engine = GibbsEngine::build(MeasureSpec::with_field(
            region.clone(),
            beta,
            field.clone(),
            boundary.clone(),
        )?)?;
        let x = gen.pick_site(&region);
        let y = gen.pick_site(&region);
        let one = engine.expectation(spin_at(x));
        let two = engine.expectation(|c| (c.get(x).unwrap() * c.get(y).unwrap()) as f64);
        let worst = one.min(two);
        report.record_slack(worst, INEQUALITY_TOL, || {
            json!({"sites": region.sites(), "beta": beta, "field": field,
                   "boundary": boundary, "x": x, "y": y, "one": one, "two": two})
        });
    }
    Ok(report)
}

pub fn check_boundary_monotonicity(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("boundary_monotonicity", CheckKind::Inequality);
    let mut gen = InstanceGen::new(ctx.seed, 0x0b);
    for _ in 0..ctx.count(400) {
        let region = gen.region(10);
        let beta = gen.beta(0.0, 1.5);
        let field = gen.field_vec(region.len(), 1.5);
        let edesc = gen.cylinder_event(region.sites(), None, None);
        let event = edesc.build("bc_mono");
        let eta = gen.boundary(&region);
        let prob_under = |b: Boundary| -> Result<f64> {
            let engine = GibbsEngine::build(MeasureSpec::with_field(
                region.clone(),
                beta,
                field.clone(),
                b,
            )?)?;
            Ok(engine.event_prob(|c| event.eval(c)))
        };
        let p_plus = prob_under(Boundary::Plus)?;
        let p_eta = prob_under(eta.clone())?;
        let p_minus = prob_under(Boundary::Minus)?;
        let slack = (p_plus - p_eta).min(p_eta - p_minus);
        report.record_slack(slack, INEQUALITY_TOL, || {
            json!({"sites": region.sites(), "beta": beta, "field": field,
                   "eta": eta, "event": edesc,
                   "p_plus": p_plus, "p_eta": p_eta, "p_minus": p_minus})
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Path monotonicity
// ---------------------------------------------------------------------------

/// Result of integrating mu along the slanted path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathCheckResult {
    pub gamma: f64,
    pub theta: f64,
    pub delta: f64,
    pub points: Vec<(f64, f64)>,
    pub mus: Vec<f64>,
    pub worst_step: f64,
    pub grid: GammaGrid,
}

/// Measure the ratio supremum on the rectangle, then walk the path
/// `(p0, h0) + t * delta * (cos theta, -sin theta)` with `tan theta =
/// 1 / Gamma` and verify mu never decreases by more than the tolerance.
#[allow(clippy::too_many_arguments)]
pub fn check_path_monotonicity_on(
    base: &MeasureSpec,
    event: &IncreasingEvent,
    p0: f64,
    h0: f64,
    p_range: (f64, f64),
    h_range: (f64, f64),
    grid_steps: (usize, usize),
    path_steps: usize,
    mask_cap: usize,
) -> Result<PathCheckResult> {
    let p_grid: Vec<f64> = (0..grid_steps.0)
        .map(|i| p_range.0 + (p_range.1 - p_range.0) * i as f64 / (grid_steps.0 - 1) as f64)
        .collect();
    let h_grid: Vec<f64> = (0..grid_steps.1)
        .map(|i| h_range.0 + (h_range.1 - h_range.0) * i as f64 / (grid_steps.1 - 1) as f64)
        .collect();
    let grid = gamma_ratio_grid(base, event, &p_grid, &h_grid, mask_cap)?;
    let gamma = grid.sup_ratio.ok_or_else(|| {
        Error::GeneratorExhausted("every grid ratio was flagged; no Gamma available".into())
    })?;
    let theta = (1.0 / gamma).atan();
    let delta = 0.95
        * ((p_range.1 - p0) / theta.cos())
            .min((h0 - h_range.0) / theta.sin())
            .min(0.25 / theta.cos().max(1e-12));
    let mut points = Vec::with_capacity(path_steps);
    let mut mus = Vec::with_capacity(path_steps);
    for k in 0..path_steps {
        let t = k as f64 / (path_steps - 1) as f64;
        let p = p0 + t * delta * theta.cos();
        let h = h0 - t * delta * theta.sin();
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::PathLeavesUnitInterval);
        }
        let spec_h = MeasureSpec::homogeneous(
            base.region().clone(),
            base.beta(),
            h,
            base.boundary().clone(),
        );
        let engine = GibbsEngine::build(spec_h.clone())?;
        let hspec = HybridSpec::new(spec_h, p, event.clone(), None)?;
        let heng = HybridEngine::with_mask_cap(&engine, &hspec, mask_cap)?;
        points.push((p, h));
        mus.push(heng.mu(p));
    }
    let worst_step = mus
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    Ok(PathCheckResult {
        gamma,
        theta,
        delta,
        points,
        mus,
        worst_step,
        grid,
    })
}

pub fn check_path_monotonicity(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("path_monotonicity", CheckKind::Inequality);
    let _ = ctx;
    // Small two-layer instance: crossing of B_1 restricted to a 12-site
    // region; the acceptance suite runs the full-size variant.
    let mut sites: Vec<Site> = Vec::new();
    for a in -2..=2 {
        for b in -1..=1 {
            sites.push(Site::new(a, b, 0));
        }
    }
    for a in -1..=1 {
        sites.push(Site::new(a, 0, 1));
    }
    let region = Region::from_sites(LatticeKind::tri_times_z(), sites)?;
    let event = crate::events::availability_restriction(
        &lr_crossing(&LatticeKind::tri_times_z(), 1, &[0, 1]),
        region.sites(),
    );
    let base = MeasureSpec::homogeneous(region, 0.1, 0.0, Boundary::Free);
    let result = check_path_monotonicity_on(
        &base,
        &event,
        0.5,
        0.0,
        (0.2, 0.8),
        (-0.5, 0.5),
        (7, 11),
        50,
        9,
    )?;
    for w in result.mus.windows(2) {
        report.record_slack(w[1] - w[0], PATH_TOL, || {
            json!({"mus": result.mus, "gamma": result.gamma})
        });
    }
    report.measurements = json!({
        "gamma": result.gamma,
        "theta": result.theta,
        "delta": result.delta,
        "worst_step": result.worst_step,
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// Crossing duality partition
// ---------------------------------------------------------------------------

pub fn check_duality(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("duality", CheckKind::Identity);
    let kind = LatticeKind::tri_times_z();
    for n in [1, 2, 3] {
        let ok = tb_minus_crossing_complement_check(&kind, n, ctx.seed);
        report.record_identity(if ok { 0.0 } else { 1.0 }, 0.0, || {
            json!({"n": n, "mode": if n <= 1 { "exhaustive" } else { "sampled" }})
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Covariance-to-pivotality constants (measurement)
// ---------------------------------------------------------------------------

/// Implied constants for one instance and radius: the smallest C (at eps=0)
/// and smallest eps (at C=0) with `lhs <= C * piv_sum + eps * ring_sum`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovToPivRow {
    pub m: i32,
    pub x: Site,
    pub lhs: f64,
    pub piv_sum: f64,
    pub ring_sum: f64,
    pub c_implied: Option<f64>,
    pub eps_implied: Option<f64>,
}

pub fn check_covtopiv(ctx: &CheckCtx) -> Result<CheckReport> {
    let mut report = CheckReport::new("covtopiv", CheckKind::Measurement);
    let mut gen = InstanceGen::new(ctx.seed, 0x0c);
    let mut rows = Vec::new();
    for i in 0..ctx.count(40) {
        let len = 6 + gen.rng().below(3) as i32;
        let mut sites: Vec<Site> = (0..len).map(|a| Site::new(a, 0, 0)).collect();
        let top: Vec<Site> = (0..len)
            .map(|a| Site::new(a, 0, 1))
            .filter(|_| gen.rng().bool_with(0.5))
            .take(4)
            .collect();
        sites.extend(if top.is_empty() {
            vec![Site::new(0, 0, 1)]
        } else {
            top
        });
        let region = Region::from_sites(LatticeKind::tri_times_z(), sites)?;
        let slab = region.layer_range_sites(0, 1);
        let event = if i % 20 == 0 {
            IncreasingEvent::full_space()
        } else {
            gen.cylinder_event(&slab, None, None).build("covtopiv")
        };
        let beta = gen.beta(0.0, 0.8);
        let h = gen.rng().range_f64(-0.5, 0.5);
        let engine = GibbsEngine::build(MeasureSpec::homogeneous(
            region.clone(),
            beta,
            h,
            Boundary::Free,
        ))?;
        let bev = BoundEvent::bind(&event, &region)?;
        let lam1 = region.layer_sites(1);
        let s0 = region.layer_sites(0);
        let omega: Vec<Site> = lam1
            .iter()
            .copied()
            .filter(|_| gen.rng().bool_with(0.5))
            .collect();
        let x = gen.pick_site(&region);
        let m = 1 + (gen.rng().below(2) as i32);

        let bit_of = |s: Site| -> Option<u32> {
            event
                .support()
                .iter()
                .position(|t| *t == s)
                .map(|k| 1u32 << k)
        };
        let bits_of = |sites: &[Site]| -> u32 {
            sites.iter().filter_map(|s| bit_of(*s)).fold(0, |a, b| a | b)
        };
        let base_avail = bits_of(&s0) | bits_of(&omega);

        // lhs: cov(sigma_x, I[H occurs on S0 + omega + {x}]).
        let avail_x = base_avail | bit_of(x).unwrap_or(0);
        let xid = region.id_of(x).unwrap();
        let lhs = engine.occurs_cov_site(&bev, avail_x, xid);

        // Pivotal sum over the top layer near x, with the local opening.
        let mut piv_sum = 0.0;
        for y in &lam1 {
            if y.linf_dist(&x) > m + 1 {
                continue;
            }
            let ybit = match bit_of(*y) {
                Some(b) => b,
                None => continue,
            };
            let opened: Vec<Site> = lam1
                .iter()
                .copied()
                .filter(|s| s.linf_dist(y) <= 3 * m)
                .collect();
            let avail = base_avail | bits_of(&opened) | ybit;
            piv_sum += engine.pivotal_prob(&bev, avail, ybit);
        }

        // Ring covariance sum.
        let mut ring_sum = 0.0;
        for y in ring_sites(&region, x, m) {
            let avail = base_avail | bit_of(y).unwrap_or(0);
            ring_sum += engine.occurs_cov_site(&bev, avail, region.id_of(y).unwrap());
        }

        let c_implied = if piv_sum > 1e-14 {
            Some((lhs / piv_sum).max(0.0))
        } else {
            None
        };
        let eps_implied = if ring_sum > 1e-14 {
            Some((lhs / ring_sum).max(0.0))
        } else {
            None
        };
        if event.support().is_empty() {
            // Full space: all three quantities must vanish.
            report.record_identity(lhs.abs().max(piv_sum).max(ring_sum), 1e-12, || {
                json!({"case": "full event"})
            });
        } else {
            report.instances += 1;
        }
        rows.push(CovToPivRow {
            m,
            x,
            lhs,
            piv_sum,
            ring_sum,
            c_implied,
            eps_implied,
        });
    }
    report.measurements = serde_json::to_value(&rows)?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

pub struct CheckDef {
    pub name: &'static str,
    pub kind: CheckKind,
    pub run: fn(&CheckCtx) -> Result<CheckReport>,
}

/// Every named check, in the order `verify all` executes them.
pub fn registry() -> Vec<CheckDef> {
    vec![
        CheckDef {
            name: "cov_inequality",
            kind: CheckKind::Inequality,
            run: check_cov_inequality,
        },
        CheckDef {
            name: "gronwall",
            kind: CheckKind::Inequality,
            run: check_gronwall,
        },
        CheckDef {
            name: "mixing",
            kind: CheckKind::Measurement,
            run: check_mixing,
        },
        CheckDef {
            name: "field_boost",
            kind: CheckKind::Measurement,
            run: check_field_boost,
        },
        CheckDef {
            name: "appendix",
            kind: CheckKind::Identity,
            run: check_appendix,
        },
        CheckDef {
            name: "pivotal_complement",
            kind: CheckKind::Identity,
            run: check_pivotal_complement,
        },
        CheckDef {
            name: "derivative_formulas",
            kind: CheckKind::Identity,
            run: check_derivative_formulas,
        },
        CheckDef {
            name: "omega_exchange",
            kind: CheckKind::Inequality,
            run: check_omega_exchange,
        },
        CheckDef {
            name: "fkg",
            kind: CheckKind::Inequality,
            run: check_fkg,
        },
        CheckDef {
            name: "gks",
            kind: CheckKind::Inequality,
            run: check_gks,
        },
        CheckDef {
            name: "boundary_monotonicity",
            kind: CheckKind::Inequality,
            run: check_boundary_monotonicity,
        },
        CheckDef {
            name: "path_monotonicity",
            kind: CheckKind::Inequality,
            run: check_path_monotonicity,
        },
        CheckDef {
            name: "duality",
            kind: CheckKind::Identity,
            run: check_duality,
        },
        CheckDef {
            name: "covtopiv",
            kind: CheckKind::Measurement,
            run: check_covtopiv,
        },
    ]
}

pub fn run_check(name: &str, ctx: &CheckCtx) -> Result<CheckReport> {
    for def in registry() {
        if def.name == name {
            return (def.run)(ctx);
        }
    }
    Err(Error::Config(format!("unknown check: {name}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(instances: u64) -> CheckCtx {
        CheckCtx::new(7, instances)
    }

    #[test]
    fn cov_inequality_clean() {
        let r = check_cov_inequality(&quick(120)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
        assert!(r.measurements["negativity_witness"].is_object());
    }

    #[test]
    fn gronwall_clean() {
        let r = check_gronwall(&quick(40)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
    }

    #[test]
    fn mixing_zero_beta_and_decay() {
        let r = check_mixing(&quick(0)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
        let fit = measure_ratio_mixing(0.25, 0.0, 10).unwrap();
        assert!(fit.monotone);
        assert!(fit.lambda_hat > 0.0);
        // Free 1D chain at h = 0: deviation(d) = tanh(beta)^d exactly.
        for (d, dev) in fit.distances.iter().zip(&fit.deviations) {
            let expect = 0.25f64.tanh().powi(*d);
            assert!((dev - expect).abs() < 1e-10, "d={d}: {dev} vs {expect}");
        }
        assert!(matches!(
            measure_ratio_mixing(0.2, 0.0, 3),
            Err(Error::InsufficientFitData { .. })
        ));
    }

    #[test]
    fn field_boost_feasible() {
        let r = check_field_boost(&quick(20)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
    }

    #[test]
    fn appendix_identities_clean() {
        let r = check_appendix(&quick(150)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
        assert!(r.worst_margin <= IDENTITY_TOL);
        assert!(r.measurements["branch_empty"].as_u64().unwrap() > 0);
        assert!(r.measurements["branch_nonempty"].as_u64().unwrap() > 0);
    }

    #[test]
    fn pivotal_complement_clean() {
        let r = check_pivotal_complement(&quick(60)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
    }

    #[test]
    fn derivative_formulas_clean() {
        let r = check_derivative_formulas(&quick(25)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
    }

    #[test]
    fn omega_exchange_clean() {
        let r = check_omega_exchange(&quick(10)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.details);
    }

    #[test]
    fn fkg_gks_boundary_clean() {
        assert_eq!(check_fkg(&quick(150)).unwrap().violations, 0);
        assert_eq!(check_gks(&quick(100)).unwrap().violations, 0);
        assert_eq!(check_boundary_monotonicity(&quick(60)).unwrap().violations, 0);
    }

    #[test]
    fn path_monotonicity_small_instance() {
        let r = check_path_monotonicity(&quick(0)).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.measurements);
        assert!(r.measurements["gamma"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn duality_clean() {
        let r = check_duality(&quick(0)).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn covtopiv_reports_constants() {
        let r = check_covtopiv(&quick(10)).unwrap();
        assert_eq!(r.violations, 0);
        let rows: Vec<CovToPivRow> = serde_json::from_value(r.measurements).unwrap();
        assert!(!rows.is_empty());
    }

    #[test]
    fn registry_names_unique_and_runnable() {
        let defs = registry();
        let mut names: Vec<&str> = defs.iter().map(|d| d.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), defs.len());
        assert!(run_check("nope", &quick(1)).is_err());
    }
}
