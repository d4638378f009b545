//! Monte Carlo sampling of the Gibbs measure beyond enumeration caps.
//!
//! Two samplers share one reproducibility contract: every random draw is a
//! pure function of `(seed, stream, sweep, substream)`, so identical
//! `(seed, stream, spec, sweep count)` reproduce identical configurations
//! bit for bit under any call pattern.
//!
//! * [`Chain::heat_bath_sweep`] resamples each site from its exact
//!   conditional in a fixed order; valid for arbitrary per-site fields.
//! * [`Chain::ghost_cluster_update`] is a Swendsen-Wang style move that
//!   stays valid at `h != 0` by attaching aligned spins to a pinned ghost
//!   (coupling `|h|`); boundary spins act as further pinned sites.

use crate::cluster::{cluster_stats, ClusterStats, UnionFind};
use crate::error::{Error, Result};
use crate::events::{connection_event, lr_crossing, IncreasingEvent};
use crate::exact::{Boundary, MeasureSpec, SpinConfig};
use crate::lattice::{Box3, LatticeKind, Region, Site};
use crate::rng::CounterRng;
use crate::stats::{batch_estimate, Estimate};
use serde::{Deserialize, Serialize};

/// Which update rule a pipeline runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampler {
    HeatBath,
    Cluster,
}

/// Default thermalization sweeps per unit of box radius.
pub const THERM_SWEEPS_PER_N: u64 = 100;
/// Default spacing between retained samples, in sweeps.
pub const SAMPLE_SPACING: u64 = 10;

/// One Markov chain: spec, current configuration and its counter RNG.
pub struct Chain {
    spec: MeasureSpec,
    config: SpinConfig,
    rng: CounterRng,
    sweeps_done: u64,
    equilibrated: bool,
    /// h_x + beta * b_x per site (boundary absorbed).
    coeff: Vec<f64>,
    edges: Vec<(u32, u32)>,
    /// Outside pinned neighbors per site: (count of +1, count of -1).
    frozen: Vec<(u32, u32)>,
}

impl Chain {
    pub fn new(spec: MeasureSpec, seed: u64, stream: u64) -> Chain {
        let region = spec.region().clone();
        let n = region.len();
        let beta = spec.beta();
        let bsums = spec.boundary_sums();
        let coeff: Vec<f64> = (0..n).map(|i| spec.field()[i] + beta * bsums[i]).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for &j in region.neighbor_ids(i) {
                if (j as usize) > i {
                    edges.push((i as u32, j));
                }
            }
        }
        let frozen: Vec<(u32, u32)> = region
            .sites()
            .iter()
            .map(|s| {
                let mut plus = 0;
                let mut minus = 0;
                for y in region.outside_neighbors(*s) {
                    match spec.boundary() {
                        Boundary::Free => {}
                        Boundary::Plus => plus += 1,
                        Boundary::Minus => minus += 1,
                        Boundary::Custom(map) => match map.get(&y).copied().unwrap_or(0) {
                            1 => plus += 1,
                            -1 => minus += 1,
                            _ => {}
                        },
                    }
                }
                (plus, minus)
            })
            .collect();

        // Initial configuration: i.i.d. fair spins from a salted stream.
        let init = CounterRng::new(seed, stream ^ 0x5eed_1217);
        let mut config = SpinConfig::all_minus(region);
        for i in 0..n {
            if init.bernoulli(0, i as u64, 0.5) {
                config.spins_mut()[i] = 1;
            }
        }

        Chain {
            spec,
            config,
            rng: CounterRng::new(seed, stream),
            sweeps_done: 0,
            equilibrated: false,
            coeff,
            edges,
            frozen,
        }
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn config(&self) -> &SpinConfig {
        &self.config
    }

    pub fn sweeps_done(&self) -> u64 {
        self.sweeps_done
    }

    pub fn equilibrated(&self) -> bool {
        self.equilibrated
    }

    pub fn mark_equilibrated(&mut self) {
        self.equilibrated = true;
    }

    /// One full heat-bath sweep in fixed site order: each site is resampled
    /// from `P(sigma_x = +1 | rest) = 1 / (1 + exp(-2 (beta * S_x + c_x)))`
    /// with `S_x` the neighbor spin sum and `c_x` the absorbed field.
    pub fn heat_bath_sweep(&mut self) {
        let region = self.spec.region().clone();
        let beta = self.spec.beta();
        let sweep = self.sweeps_done;
        let n = region.len();
        for i in 0..n {
            let mut s = 0i32;
            for &j in region.neighbor_ids(i) {
                s += self.config.spins()[j as usize] as i32;
            }
            let local = beta * s as f64 + self.coeff[i];
            let p_plus = 1.0 / (1.0 + (-2.0 * local).exp());
            let u = self.rng.uniform(sweep, i as u64);
            self.config.spins_mut()[i] = if u < p_plus { 1 } else { -1 };
        }
        self.sweeps_done += 1;
    }

    /// One ghost-spin cluster update (requires homogeneous field): bonds
    /// open with `1 - exp(-2 beta)` between aligned neighbors, ghost bonds
    /// with `1 - exp(-2 |h|)` to spins aligned with `sign(h)`, pinned
    /// boundary spins likewise; clusters not touching a pinned vertex flip
    /// with probability 1/2.
    pub fn ghost_cluster_update(&mut self) -> Result<()> {
        let h = self.spec.field()[0];
        if self.spec.field().iter().any(|&v| v != h) {
            return Err(Error::InhomogeneousField);
        }
        let region = self.spec.region().clone();
        let n = region.len();
        let beta = self.spec.beta();
        let sweep = self.sweeps_done;
        let p_bond = 1.0 - (-2.0 * beta).exp();
        let h_sign: i8 = if h > 0.0 {
            1
        } else if h < 0.0 {
            -1
        } else {
            0
        };

        // Virtual vertices n (pinned +1) and n+1 (pinned -1).
        let pin_plus = n as u32;
        let pin_minus = n as u32 + 1;
        let mut uf = UnionFind::new(n + 2);

        let spins = self.config.spins().to_vec();
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            if spins[i as usize] == spins[j as usize]
                && self.rng.bernoulli(sweep, e as u64, p_bond)
            {
                uf.union(i, j);
            }
        }
        let base = self.edges.len() as u64;
        for i in 0..n {
            let s = spins[i];
            let pin = if s == 1 { pin_plus } else { pin_minus };
            // Parallel pinned bonds aggregate: k bonds of coupling beta plus
            // (for the field ghost) one of coupling |h| stay all closed with
            // probability exp(-2 (beta k + |h|)).
            let k = if s == 1 {
                self.frozen[i].0
            } else {
                self.frozen[i].1
            };
            let mut coupling = beta * k as f64;
            if s == h_sign {
                coupling += h.abs();
            }
            if coupling > 0.0 {
                let p = 1.0 - (-2.0 * coupling).exp();
                if self.rng.bernoulli(sweep, base + i as u64, p) {
                    uf.union(i as u32, pin);
                }
            }
        }
        let flip_base = base + n as u64;
        let root_plus = uf.find(pin_plus);
        let root_minus = uf.find(pin_minus);
        for i in 0..n {
            let r = uf.find(i as u32);
            if r == root_plus || r == root_minus {
                continue;
            }
            if self.rng.bernoulli(sweep, flip_base + r as u64, 0.5) {
                self.config.spins_mut()[i] = -spins[i];
            }
        }
        self.sweeps_done += 1;
        Ok(())
    }

    pub fn sweep(&mut self, sampler: Sampler) -> Result<()> {
        match sampler {
            Sampler::HeatBath => {
                self.heat_bath_sweep();
                Ok(())
            }
            Sampler::Cluster => self.ghost_cluster_update(),
        }
    }

    /// Discard `sweeps` thermalization sweeps and mark the chain equilibrated.
    pub fn thermalize(&mut self, sweeps: u64, sampler: Sampler) -> Result<()> {
        for _ in 0..sweeps {
            self.sweep(sampler)?;
        }
        self.equilibrated = true;
        Ok(())
    }
}

/// Scalar measurement stream from one chain: run `spacing` sweeps between
/// retained samples, map the configuration to a value.
pub fn sample_series<F>(
    chain: &mut Chain,
    sampler: Sampler,
    samples: u64,
    spacing: u64,
    mut f: F,
) -> Result<Vec<f64>>
where
    F: FnMut(&SpinConfig) -> f64,
{
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    let mut out = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        for _ in 0..spacing {
            chain.sweep(sampler)?;
        }
        out.push(f(chain.config()));
    }
    Ok(out)
}

/// Estimate of the left-right +crossing probability of `B_n` within the
/// named layers, with batched standard error.
pub fn estimate_crossing(
    spec: &MeasureSpec,
    n: i32,
    layers: &[i32],
    therm_sweeps: u64,
    samples: u64,
    seed: u64,
    stream: u64,
    sampler: Sampler,
) -> Result<Estimate> {
    let event = lr_crossing(spec.region().kind(), n, layers);
    estimate_event(spec, &event, therm_sweeps, samples, seed, stream, sampler)
}

/// Estimate the probability of an arbitrary increasing event under MC.
pub fn estimate_event(
    spec: &MeasureSpec,
    event: &IncreasingEvent,
    therm_sweeps: u64,
    samples: u64,
    seed: u64,
    stream: u64,
    sampler: Sampler,
) -> Result<Estimate> {
    let mut chain = Chain::new(spec.clone(), seed, stream);
    chain.thermalize(therm_sweeps, sampler)?;
    let series = sample_series(&mut chain, sampler, samples, SAMPLE_SPACING, |c| {
        if event.eval(c) {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(batch_estimate(&series, 32))
}

/// One row of the coexistence scan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoexistenceRow {
    pub n: i32,
    pub both_span_frac: f64,
    pub both_span_se: f64,
    pub plus_span_frac: f64,
    pub minus_span_frac: f64,
    /// Mean second-largest / largest cluster size, per sign (uniqueness
    /// proxy; small means one dominant cluster).
    pub ratio_plus: f64,
    pub ratio_minus: f64,
    pub samples: u64,
}

/// Spanning coexistence of both signs on full boxes `B_n`, per box size.
pub fn coexistence_scan(
    kind: &LatticeKind,
    beta: f64,
    h: f64,
    n_list: &[i32],
    samples: u64,
    seed: u64,
    sampler: Sampler,
) -> Result<Vec<CoexistenceRow>> {
    let mut rows = Vec::new();
    for (k, &n) in n_list.iter().enumerate() {
        let region = Region::build(kind.clone(), Box3::at_origin(n))?;
        let spec = MeasureSpec::homogeneous(region, beta, h, Boundary::Free);
        let mut chain = Chain::new(spec, seed, k as u64);
        chain.thermalize(THERM_SWEEPS_PER_N * n.max(1) as u64, sampler)?;
        let mut both = Vec::new();
        let mut plus = 0u64;
        let mut minus = 0u64;
        let mut ratio_plus = 0.0;
        let mut ratio_minus = 0.0;
        for _ in 0..samples {
            for _ in 0..SAMPLE_SPACING {
                chain.sweep(sampler)?;
            }
            let s = cluster_stats(chain.config());
            // The census of the negated configuration reads off the same
            // quantities for the minus sign.
            let neg = cluster_stats(&chain.config().negated());
            both.push(if s.plus_spanning && s.minus_spanning {
                1.0
            } else {
                0.0
            });
            plus += s.plus_spanning as u64;
            minus += s.minus_spanning as u64;
            if s.largest_plus > 0 {
                ratio_plus += s.second_largest_plus as f64 / s.largest_plus as f64;
            }
            if neg.largest_plus > 0 {
                ratio_minus += neg.second_largest_plus as f64 / neg.largest_plus as f64;
            }
        }
        let est = batch_estimate(&both, 32);
        rows.push(CoexistenceRow {
            n,
            both_span_frac: est.mean,
            both_span_se: est.se,
            plus_span_frac: plus as f64 / samples as f64,
            minus_span_frac: minus as f64 / samples as f64,
            ratio_plus: ratio_plus / samples as f64,
            ratio_minus: ratio_minus / samples as f64,
            samples,
        });
    }
    Ok(rows)
}

/// Connection probabilities over an h-grid at one box size.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HcRow {
    pub n: i32,
    pub h_values: Vec<f64>,
    pub probs: Vec<f64>,
    pub ses: Vec<f64>,
    /// Last grid h with P below the threshold and first with P at or above.
    pub bracket: (f64, f64),
    /// Linear interpolation of the threshold crossing inside the bracket.
    pub h_star: f64,
}

/// Result of the h_c localization: the per-size crossing sequence plus the
/// overall bracket from the largest box.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HcBracket {
    pub rows: Vec<HcRow>,
    pub threshold: f64,
    pub bracket: (f64, f64),
}

/// Default drop threshold for the connection probability.
pub const HC_THRESHOLD: f64 = 0.2;

/// Localize the field at which the +connection probability from the origin
/// to the box boundary (within the slab z in {0,1}) crosses `threshold`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_hc(
    kind: &LatticeKind,
    beta: f64,
    n_list: &[i32],
    h_grid: &[f64],
    samples: u64,
    threshold: f64,
    seed: u64,
    sampler: Sampler,
) -> Result<HcBracket> {
    assert!(h_grid.windows(2).all(|w| w[0] < w[1]), "h grid must ascend");
    let mut rows = Vec::new();
    for (k, &n) in n_list.iter().enumerate() {
        let sites: Vec<Site> = Box3::at_origin(n)
            .sites(kind)
            .into_iter()
            .filter(|s| s.z() == 0 || s.z() == 1)
            .collect();
        let region = Region::from_sites(kind.clone(), sites)?;
        let event = connection_event(kind, Site::new(0, 0, 0), n, &[0, 1]);
        let mut probs = Vec::new();
        let mut ses = Vec::new();
        for (j, &h) in h_grid.iter().enumerate() {
            let spec = MeasureSpec::homogeneous(region.clone(), beta, h, Boundary::Free);
            let est = estimate_event(
                &spec,
                &event,
                THERM_SWEEPS_PER_N * n.max(1) as u64,
                samples,
                seed,
                (k * h_grid.len() + j) as u64,
                sampler,
            )?;
            probs.push(est.mean);
            ses.push(est.se);
        }
        // P is nondecreasing in h; find the threshold crossing.
        let first_above = probs.iter().position(|&p| p >= threshold);
        let row = match first_above {
            None => {
                return Err(Error::WidenHGrid(format!(
                    "connection probability stays below {threshold} on the grid at n={n}"
                )))
            }
            Some(0) => {
                return Err(Error::WidenHGrid(format!(
                    "connection probability already above {threshold} at the grid start at n={n}"
                )))
            }
            Some(j) => {
                let (h0, h1) = (h_grid[j - 1], h_grid[j]);
                let (p0, p1) = (probs[j - 1], probs[j]);
                let t = if (p1 - p0).abs() < 1e-12 {
                    0.5
                } else {
                    (threshold - p0) / (p1 - p0)
                };
                HcRow {
                    n,
                    h_values: h_grid.to_vec(),
                    probs,
                    ses,
                    bracket: (h0, h1),
                    h_star: h0 + t * (h1 - h0),
                }
            }
        };
        rows.push(row);
    }
    let bracket = rows.last().map(|r| r.bracket).unwrap();
    Ok(HcBracket {
        rows,
        threshold,
        bracket,
    })
}

/// Binder-cumulant table entry for the pseudo-critical bracket.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinderRow {
    pub beta: f64,
    pub u_small: f64,
    pub u_large: f64,
}

/// Bracket of the pseudo-critical inverse temperature from the crossing of
/// Binder cumulants `U = 1 - <m^4> / (3 <m^2>^2)` at two box sizes. The
/// bracket is the first beta interval where `U_small - U_large` changes
/// sign.
pub fn binder_beta_bracket(
    kind: &LatticeKind,
    n_small: i32,
    n_large: i32,
    beta_grid: &[f64],
    samples: u64,
    seed: u64,
) -> Result<(Vec<BinderRow>, Option<(f64, f64)>)> {
    let mut rows = Vec::new();
    for (j, &beta) in beta_grid.iter().enumerate() {
        let mut us = Vec::new();
        for (k, &n) in [n_small, n_large].iter().enumerate() {
            let region = Region::build(kind.clone(), Box3::at_origin(n))?;
            let spec = MeasureSpec::homogeneous(region, beta, 0.0, Boundary::Free);
            let mut chain = Chain::new(spec, seed, (j * 2 + k) as u64);
            chain.thermalize(THERM_SWEEPS_PER_N * n.max(1) as u64, Sampler::HeatBath)?;
            let series = sample_series(
                &mut chain,
                Sampler::HeatBath,
                samples,
                SAMPLE_SPACING,
                |c| c.magnetization(),
            )?;
            let m2 = series.iter().map(|m| m * m).sum::<f64>() / series.len() as f64;
            let m4 = series.iter().map(|m| m.powi(4)).sum::<f64>() / series.len() as f64;
            us.push(1.0 - m4 / (3.0 * m2 * m2));
        }
        rows.push(BinderRow {
            beta,
            u_small: us[0],
            u_large: us[1],
        });
    }
    let mut bracket = None;
    for w in rows.windows(2) {
        let d0 = w[0].u_small - w[0].u_large;
        let d1 = w[1].u_small - w[1].u_large;
        if d0.signum() != d1.signum() {
            bracket = Some((w[0].beta, w[1].beta));
            break;
        }
    }
    Ok((rows, bracket))
}

/// Per-sample record for streamed CSV output.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_id: u64,
    pub magnetization: f64,
    pub plus_span: bool,
    pub minus_span: bool,
    pub largest_plus: usize,
    pub largest_minus: usize,
}

/// Run a chain and collect per-sample cluster records.
pub fn run_sampling(
    spec: &MeasureSpec,
    therm_sweeps: u64,
    samples: u64,
    seed: u64,
    stream: u64,
    sampler: Sampler,
) -> Result<(Vec<SampleRecord>, ClusterStats)> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    let mut chain = Chain::new(spec.clone(), seed, stream);
    chain.thermalize(therm_sweeps, sampler)?;
    let mut records = Vec::with_capacity(samples as usize);
    let mut last = ClusterStats::default();
    for sid in 0..samples {
        for _ in 0..SAMPLE_SPACING {
            chain.sweep(sampler)?;
        }
        let s = cluster_stats(chain.config());
        last = s;
        records.push(SampleRecord {
            sample_id: sid,
            magnetization: chain.config().magnetization(),
            plus_span: s.plus_spanning,
            minus_span: s.minus_spanning,
            largest_plus: s.largest_plus,
            largest_minus: s.largest_minus,
        });
    }
    Ok((records, last))
}

/// Two-sided KS-style statistic between the empirical magnetization
/// distribution and its mirror image; small values mean +/- symmetry.
pub fn symmetry_statistic(samples: &[f64]) -> f64 {
    let mut a: Vec<f64> = samples.to_vec();
    let mut b: Vec<f64> = samples.iter().map(|m| -m).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let n = a.len();
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < n {
        // Advance both arrays through the current smallest value so ties
        // move the two empirical CDFs together.
        let t = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < n && a[i] == t {
            i += 1;
        }
        while j < n && b[j] == t {
            j += 1;
        }
        d = d.max((i as f64 - j as f64).abs() / n as f64);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GibbsEngine;
    use std::sync::Arc;

    fn tz() -> LatticeKind {
        LatticeKind::tri_times_z()
    }

    fn single_site() -> Arc<Region> {
        Region::from_sites(tz(), vec![Site::new(0, 0, 0)]).unwrap()
    }

    fn small_patch() -> Arc<Region> {
        Region::from_sites(
            tz(),
            vec![
                Site::new(0, 0, 0),
                Site::new(1, 0, 0),
                Site::new(0, 1, 0),
                Site::new(1, 1, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn chain_is_deterministic() {
        let spec = MeasureSpec::homogeneous(small_patch(), 0.3, 0.0, Boundary::Free);
        let mut a = Chain::new(spec.clone(), 42, 1);
        let mut b = Chain::new(spec.clone(), 42, 1);
        let mut c = Chain::new(spec, 42, 2);
        let mut traj = [Vec::new(), Vec::new(), Vec::new()];
        for _ in 0..50 {
            a.heat_bath_sweep();
            b.heat_bath_sweep();
            c.heat_bath_sweep();
            traj[0].push(a.config().to_id());
            traj[1].push(b.config().to_id());
            traj[2].push(c.config().to_id());
        }
        assert_eq!(traj[0], traj[1], "same (seed, stream) must replay");
        assert_ne!(traj[0], traj[2], "streams must differ");
    }

    #[test]
    fn single_site_heat_bath_matches_tanh() {
        let h = 0.4;
        let spec = MeasureSpec::homogeneous(single_site(), 0.0, h, Boundary::Free);
        let mut chain = Chain::new(spec, 7, 0);
        let sweeps = 200_000u64;
        let mut plus = 0u64;
        for _ in 0..sweeps {
            chain.heat_bath_sweep();
            plus += (chain.config().spins()[0] == 1) as u64;
        }
        let freq = plus as f64 / sweeps as f64;
        let exact = h.exp() / (h.exp() + (-h).exp());
        let se = (exact * (1.0 - exact) / sweeps as f64).sqrt();
        assert!(
            (freq - exact).abs() < 4.0 * se,
            "freq {freq} vs exact {exact} (4se = {})",
            4.0 * se
        );
    }

    #[test]
    fn heat_bath_histogram_matches_exact_engine() {
        // Detailed-balance spot check on a 4-site region.
        let region = small_patch();
        let spec = MeasureSpec::homogeneous(region.clone(), 0.35, -0.15, Boundary::Free);
        let engine = GibbsEngine::build(spec.clone()).unwrap();
        let mut chain = Chain::new(spec, 11, 0);
        chain.thermalize(500, Sampler::HeatBath).unwrap();
        let samples = 60_000u64;
        let mut series_per_id: Vec<Vec<f64>> = vec![Vec::new(); 16];
        for _ in 0..samples {
            for _ in 0..4 {
                chain.heat_bath_sweep();
            }
            let id = chain.config().to_id() as usize;
            for (k, s) in series_per_id.iter_mut().enumerate() {
                s.push(if k == id { 1.0 } else { 0.0 });
            }
        }
        for id in 0..16 {
            let est = batch_estimate(&series_per_id[id], 32);
            let exact = engine.prob_of_id(id as u64);
            assert!(
                (est.mean - exact).abs() <= 5.0 * est.se.max(1e-4),
                "config {id}: mc {} vs exact {exact} (se {})",
                est.mean,
                est.se
            );
        }
    }

    #[test]
    fn ghost_update_beta0_h0_is_iid_resampling() {
        // Every site is its own cluster and flips fairly.
        let spec = MeasureSpec::homogeneous(small_patch(), 0.0, 0.0, Boundary::Free);
        let mut chain = Chain::new(spec, 3, 0);
        let mut plus = 0u64;
        let rounds = 40_000u64;
        for _ in 0..rounds {
            chain.ghost_cluster_update().unwrap();
            plus += (chain.config().spins()[0] == 1) as u64;
        }
        let freq = plus as f64 / rounds as f64;
        let se = (0.25 / rounds as f64).sqrt();
        assert!((freq - 0.5).abs() < 4.0 * se, "freq {freq}");
    }

    #[test]
    fn ghost_update_rejects_inhomogeneous_field() {
        let region = small_patch();
        let spec = MeasureSpec::with_field(
            region,
            0.2,
            vec![0.1, 0.2, 0.1, 0.1],
            Boundary::Free,
        )
        .unwrap();
        let mut chain = Chain::new(spec, 1, 0);
        assert!(matches!(
            chain.ghost_cluster_update(),
            Err(Error::InhomogeneousField)
        ));
    }

    #[test]
    fn strong_field_never_flips_aligned_clusters() {
        let spec = MeasureSpec::homogeneous(small_patch(), 0.2, 30.0, Boundary::Free);
        let mut chain = Chain::new(spec, 9, 4);
        for _ in 0..20 {
            let before: Vec<i8> = chain.config().spins().to_vec();
            chain.ghost_cluster_update().unwrap();
            for (b, a) in before.iter().zip(chain.config().spins()) {
                if *b == 1 {
                    assert_eq!(*a, 1, "+ spin flipped against a huge field");
                }
            }
        }
    }

    #[test]
    fn ghost_histogram_matches_exact_engine() {
        let region = small_patch();
        let spec = MeasureSpec::homogeneous(region.clone(), 0.3, 0.1, Boundary::Plus);
        let engine = GibbsEngine::build(spec.clone()).unwrap();
        let mut chain = Chain::new(spec, 21, 0);
        chain.thermalize(500, Sampler::Cluster).unwrap();
        let samples = 40_000u64;
        let mut mags = Vec::new();
        let mut all_plus = Vec::new();
        for _ in 0..samples {
            for _ in 0..3 {
                chain.ghost_cluster_update().unwrap();
            }
            mags.push(chain.config().magnetization());
            all_plus.push(if chain.config().to_id() == 15 { 1.0 } else { 0.0 });
        }
        let est = batch_estimate(&mags, 32);
        let exact_mag = engine.expectation(|c| c.magnetization());
        assert!(
            (est.mean - exact_mag).abs() <= 4.0 * est.se,
            "magnetization {} vs {exact_mag} (se {})",
            est.mean,
            est.se
        );
        let estp = batch_estimate(&all_plus, 32);
        let exactp = engine.prob_of_id(15);
        assert!(
            (estp.mean - exactp).abs() <= 4.0 * estp.se.max(1e-4),
            "all-plus prob {} vs {exactp}",
            estp.mean
        );
    }

    #[test]
    fn crossing_estimate_agrees_with_exact_small() {
        // B_1 ∩ S_0 at beta 0.2, h 0.1: MC within 4 SE of enumeration.
        let sites = Box3::at_origin(1)
            .sites(&tz())
            .into_iter()
            .filter(|s| s.z() == 0)
            .collect();
        let region = Region::from_sites(tz(), sites).unwrap();
        let spec = MeasureSpec::homogeneous(region, 0.2, 0.1, Boundary::Free);
        let engine = GibbsEngine::build(spec.clone()).unwrap();
        let event = lr_crossing(&tz(), 1, &[0]);
        let exact = engine.event_prob(|c| event.eval(c));
        let est = estimate_crossing(&spec, 1, &[0], 300, 4000, 5, 0, Sampler::HeatBath).unwrap();
        assert!(
            est.matches_value(exact, 4.0),
            "mc {} +- {} vs exact {exact}",
            est.mean,
            est.se
        );
    }

    #[test]
    fn magnetization_symmetric_at_zero_field() {
        let sites = Box3::at_origin(3)
            .sites(&tz())
            .into_iter()
            .filter(|s| s.z() == 0 || s.z() == 1)
            .collect();
        let region = Region::from_sites(tz(), sites).unwrap();
        let spec = MeasureSpec::homogeneous(region, 0.1, 0.0, Boundary::Free);
        let mut chain = Chain::new(spec, 17, 0);
        chain.thermalize(300, Sampler::HeatBath).unwrap();
        let series = sample_series(&mut chain, Sampler::HeatBath, 4000, 5, |c| {
            c.magnetization()
        })
        .unwrap();
        let d = symmetry_statistic(&series);
        // 1.36 sqrt(2/n) is the 5% KS level for i.i.d. samples; allow 2x for
        // residual autocorrelation.
        let threshold = 2.0 * 1.36 * (2.0 / series.len() as f64).sqrt();
        assert!(d < threshold, "KS statistic {d} above {threshold}");
    }

    #[test]
    fn zero_samples_is_error() {
        let spec = MeasureSpec::homogeneous(single_site(), 0.0, 0.0, Boundary::Free);
        let mut chain = Chain::new(spec, 1, 0);
        assert!(matches!(
            sample_series(&mut chain, Sampler::HeatBath, 0, 1, |_| 0.0),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn hc_estimate_beta0_matches_iid_percolation_oracle() {
        // At beta = 0 the Gibbs layer is i.i.d. with density
        // e^h / (e^h + e^-h); compare against a direct i.i.d. sampler that
        // never touches the chain machinery.
        let n = 4;
        let beta = 0.0;
        let h = -0.35;
        let kind = tz();
        let sites: Vec<Site> = Box3::at_origin(n)
            .sites(&kind)
            .into_iter()
            .filter(|s| s.z() == 0 || s.z() == 1)
            .collect();
        let region = Region::from_sites(kind.clone(), sites).unwrap();
        let event = connection_event(&kind, Site::new(0, 0, 0), n, &[0, 1]);
        let spec = MeasureSpec::homogeneous(region.clone(), beta, h, Boundary::Free);
        let est =
            estimate_event(&spec, &event, 100, 4000, 3, 0, Sampler::HeatBath).unwrap();

        let density = h.exp() / (h.exp() + (-h).exp());
        let rng = CounterRng::new(999, 0);
        let trials = 20_000u64;
        let mut hits = 0u64;
        for t in 0..trials {
            let mut c = SpinConfig::all_minus(region.clone());
            for i in 0..region.len() {
                if rng.bernoulli(t, i as u64, density) {
                    c.spins_mut()[i] = 1;
                }
            }
            hits += event.eval(&c) as u64;
        }
        let oracle = hits as f64 / trials as f64;
        let oracle_se = (oracle * (1.0 - oracle) / trials as f64).sqrt();
        let se = (est.se * est.se + oracle_se * oracle_se).sqrt();
        assert!(
            (est.mean - oracle).abs() <= 4.0 * se,
            "mc {} vs iid oracle {oracle} (combined se {se})",
            est.mean
        );
    }

    #[test]
    fn symmetry_statistic_detects_asymmetry() {
        let sym: Vec<f64> = (0..2000).map(|i| ((i % 21) as f64 - 10.0) / 10.0).collect();
        assert!(symmetry_statistic(&sym) < 0.01);
        let skewed: Vec<f64> = (0..2000).map(|i| (i % 21) as f64 / 20.0).collect();
        assert!(symmetry_statistic(&skewed) > 0.4);
    }
}
