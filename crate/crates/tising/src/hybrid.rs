//! The hybrid measure: a Bernoulli availability mask on the top layer of a
//! slab, averaged over the Gibbs layer.
//!
//! For an increasing event A determined on the slab `z in {0,1}`,
//!
//! ```text
//! mu(A) = sum over masks w of  p^{|w=1|} (1-p)^{|w=0|}
//!         * P(A occurs on {z=0} union {w=1 sites})
//! ```
//!
//! Both partial derivatives have exact expressions: the p-derivative is a
//! weighted sum of +pivotality probabilities over top-layer sites, the
//! h-derivative a weighted sum of spin/indicator covariances over all
//! sites. The ratio of the two, tabulated over a (p,h) grid, drives the
//! slanted-path monotonicity argument.
//!
//! Exact evaluation enumerates masks over the top layer (capped at
//! [`DEFAULT_MASK_CAP`] sites) on top of the exact engine; beyond the caps,
//! [`mu_mc`] estimates the same quantity from Monte Carlo samples.

use crate::error::{Error, Result};
use crate::events::{occurs_on, IncreasingEvent};
use crate::exact::{BoundEvent, GibbsEngine, MeasureSpec, DEFAULT_ENUM_CAP};
use crate::lattice::Site;
use crate::mc::{Chain, Sampler};
use crate::rng::CounterRng;
use crate::stats::{batch_estimate, Estimate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default cap on the top-layer size in exact mask sums (256 masks).
pub const DEFAULT_MASK_CAP: usize = 8;

/// Ratios with a p-derivative below this are flagged instead of divided.
pub const RATIO_FLOOR: f64 = 1e-14;

/// Availability mask on the top layer `Lambda_(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    layer: Vec<Site>,
    bits: u64,
}

impl Mask {
    pub fn new(layer: Vec<Site>, bits: u64) -> Self {
        assert!(layer.len() <= 63);
        Mask { layer, bits }
    }

    pub fn open_sites(&self) -> Vec<Site> {
        self.layer
            .iter()
            .enumerate()
            .filter(|(k, _)| (self.bits >> k) & 1 == 1)
            .map(|(_, s)| *s)
            .collect()
    }

    pub fn open_count(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn closed_count(&self) -> u32 {
        self.layer.len() as u32 - self.open_count()
    }
}

/// A hybrid-measure instance: Gibbs layer, availability probability and the
/// target increasing event (supported in the slab `z in {0,1}`).
#[derive(Clone)]
pub struct HybridSpec {
    pub measure: MeasureSpec,
    pub p: f64,
    pub event: IncreasingEvent,
    /// Box radius of a crossing event, when the instance carries one.
    pub crossing_n: Option<i32>,
}

impl HybridSpec {
    pub fn new(
        measure: MeasureSpec,
        p: f64,
        event: IncreasingEvent,
        crossing_n: Option<i32>,
    ) -> Result<Self> {
        assert!((0.0..=1.0).contains(&p), "p must lie in [0,1]");
        for s in event.support() {
            if !measure.region().contains(*s) || !(s.z() == 0 || s.z() == 1) {
                return Err(Error::SupportOutsideRegion);
            }
        }
        Ok(HybridSpec {
            measure,
            p,
            event,
            crossing_n,
        })
    }

    /// The top layer `Lambda_(1)` of the region.
    pub fn top_layer(&self) -> Vec<Site> {
        self.measure.region().layer_sites(1)
    }
}

/// Both partial derivatives at one parameter point, plus their ratio. The
/// ratio is flagged (None) rather than clipped when the p-derivative
/// vanishes: for events measurable on the bottom layer alone the inequality
/// machinery genuinely degenerates and the artifact must surface that.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DerivativePair {
    pub d_dh: f64,
    pub d_dp: f64,
    pub ratio: Option<f64>,
}

impl DerivativePair {
    fn from_parts(d_dh: f64, d_dp: f64) -> Self {
        let ratio = if d_dp.abs() < RATIO_FLOOR {
            None
        } else {
            Some(d_dh / d_dp)
        };
        DerivativePair { d_dh, d_dp, ratio }
    }
}

/// Exact hybrid evaluator bound to one engine and one event.
///
/// Precomputes the support marginal of the Gibbs measure and the
/// availability-restricted occurrence probabilities for every mask over
/// `Lambda_(1) ∩ support`; masks over top-layer sites outside the support
/// marginalize out exactly.
pub struct HybridEngine<'a> {
    engine: &'a GibbsEngine,
    bev: BoundEvent,
    /// Support bits always available (bottom layer z=0).
    s0_bits: u32,
    /// Support-bit position of each top-layer support site.
    var_bits: Vec<u32>,
    /// P(event occurs on S0 + mask) for every mask over `var_bits`.
    p_occ: Vec<f64>,
}

impl<'a> HybridEngine<'a> {
    pub fn new(engine: &'a GibbsEngine, spec: &HybridSpec) -> Result<Self> {
        HybridEngine::with_mask_cap(engine, spec, DEFAULT_MASK_CAP)
    }

    pub fn with_mask_cap(
        engine: &'a GibbsEngine,
        spec: &HybridSpec,
        mask_cap: usize,
    ) -> Result<Self> {
        let region = engine.region();
        if region.len() > DEFAULT_ENUM_CAP + 4 {
            return Err(Error::EnumerationTooLarge {
                sites: region.len(),
                cap: DEFAULT_ENUM_CAP + 4,
            });
        }
        let lam1 = region.layer_sites(1);
        if lam1.len() > mask_cap {
            return Err(Error::MaskTooLarge {
                sites: lam1.len(),
                cap: mask_cap,
            });
        }
        let event = &spec.event;
        let bev = BoundEvent::bind(event, region)?;
        let mut s0_bits = 0u32;
        let mut var_bits = Vec::new();
        for (k, s) in event.support().iter().enumerate() {
            if s.z() == 0 {
                s0_bits |= 1 << k;
            } else {
                var_bits.push(k as u32);
            }
        }
        let q = engine.support_marginal(&bev.positions);
        let table = bev.table.clone();
        let nvar = var_bits.len();
        let p_occ: Vec<f64> = (0..(1usize << nvar))
            .into_par_iter()
            .map(|mask| {
                let mut sel = s0_bits;
                for (k, &b) in var_bits.iter().enumerate() {
                    if (mask >> k) & 1 == 1 {
                        sel |= 1 << b;
                    }
                }
                q.iter()
                    .enumerate()
                    .map(|(g, &qg)| {
                        if table[(g as u32 & sel) as usize] {
                            qg
                        } else {
                            0.0
                        }
                    })
                    .sum()
            })
            .collect();
        Ok(HybridEngine {
            engine,
            bev,
            s0_bits,
            var_bits,
            p_occ,
        })
    }

    fn nvar(&self) -> usize {
        self.var_bits.len()
    }

    fn weight(&self, p: f64, mask: usize) -> f64 {
        let ones = (mask as u64).count_ones() as i32;
        let zeros = self.nvar() as i32 - ones;
        p.powi(ones) * (1.0 - p).powi(zeros)
    }

    /// Exact `mu` at availability probability `p`.
    pub fn mu(&self, p: f64) -> f64 {
        (0..self.p_occ.len())
            .map(|m| self.weight(p, m) * self.p_occ[m])
            .sum()
    }

    /// Exact p-derivative: weighted +pivotality sum over top-layer sites.
    /// Sites outside the event support contribute nothing.
    pub fn dmu_dp(&self, p: f64) -> f64 {
        let nvar = self.nvar();
        let mut total = 0.0;
        for k in 0..nvar {
            let bit = 1usize << k;
            // Masks over the other variable sites; weight has one fewer site.
            for m in 0..self.p_occ.len() {
                if m & bit != 0 {
                    continue;
                }
                let ones = (m as u64).count_ones() as i32;
                let zeros = (nvar - 1) as i32 - ones;
                let w = p.powi(ones) * (1.0 - p).powi(zeros);
                total += w * (self.p_occ[m | bit] - self.p_occ[m]);
            }
        }
        total
    }

    /// Exact h-derivative (homogeneous directional derivative, summing
    /// d/dh_x over all sites): weighted covariance sum.
    pub fn dmu_dh(&self, p: f64) -> f64 {
        let w = self.occurrence_weight_table(p);
        let (_, covs) = self.engine.weighted_cov_all_sites(&self.bev, &w);
        covs.iter().sum()
    }

    /// Both derivatives and mu, sharing the heavy passes.
    pub fn derivatives(&self, p: f64) -> (f64, DerivativePair) {
        let w = self.occurrence_weight_table(p);
        let (mu, covs) = self.engine.weighted_cov_all_sites(&self.bev, &w);
        let d_dh = covs.iter().sum();
        let d_dp = self.dmu_dp(p);
        (mu, DerivativePair::from_parts(d_dh, d_dp))
    }

    /// Per-support-configuration availability-averaged occurrence weight:
    /// `W[g] = sum over masks of weight(p, mask) * table[g & sel(mask)]`.
    fn occurrence_weight_table(&self, p: f64) -> Vec<f64> {
        let nvar = self.nvar();
        let table = self.bev.table.as_slice();
        let sels: Vec<u32> = (0..(1usize << nvar))
            .map(|mask| {
                let mut sel = self.s0_bits;
                for (k, &b) in self.var_bits.iter().enumerate() {
                    if (mask >> k) & 1 == 1 {
                        sel |= 1 << b;
                    }
                }
                sel
            })
            .collect();
        let weights: Vec<f64> = (0..sels.len()).map(|m| self.weight(p, m)).collect();
        (0..(1usize << self.bev.support_len()))
            .into_par_iter()
            .map(|g| {
                let mut acc = 0.0;
                for (sel, w) in sels.iter().zip(&weights) {
                    if table[(g as u32 & sel) as usize] {
                        acc += w;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Exact `mu` for a spec (builds a transient engine).
pub fn mu(spec: &HybridSpec) -> Result<f64> {
    let engine = GibbsEngine::build(spec.measure.clone())?;
    Ok(HybridEngine::new(&engine, spec)?.mu(spec.p))
}

/// Exact p-derivative for a spec.
pub fn dmu_dp(spec: &HybridSpec) -> Result<f64> {
    let engine = GibbsEngine::build(spec.measure.clone())?;
    Ok(HybridEngine::new(&engine, spec)?.dmu_dp(spec.p))
}

/// Exact h-derivative for a spec.
pub fn dmu_dh(spec: &HybridSpec) -> Result<f64> {
    let engine = GibbsEngine::build(spec.measure.clone())?;
    Ok(HybridEngine::new(&engine, spec)?.dmu_dh(spec.p))
}

/// One grid entry of the derivative-ratio table.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridRow {
    pub p: f64,
    pub h: f64,
    pub mu: f64,
    pub d_dh: f64,
    pub d_dp: f64,
    pub ratio: Option<f64>,
}

/// Ratio table over a (p,h) grid plus the finite-ratio supremum, the
/// empirical stand-in for the uniform bound used by the path argument.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaGrid {
    pub rows: Vec<GridRow>,
    pub sup_ratio: Option<f64>,
    pub flagged: usize,
}

/// Tabulate mu and both derivatives over the product grid. The engine is
/// rebuilt per h (the Gibbs layer changes), reused across p values.
pub fn gamma_ratio_grid(
    base: &MeasureSpec,
    event: &IncreasingEvent,
    p_grid: &[f64],
    h_grid: &[f64],
    mask_cap: usize,
) -> Result<GammaGrid> {
    let mut rows = Vec::with_capacity(p_grid.len() * h_grid.len());
    for &h in h_grid {
        let spec_h = MeasureSpec::homogeneous(
            base.region().clone(),
            base.beta(),
            h,
            base.boundary().clone(),
        );
        let engine = GibbsEngine::build(spec_h.clone())?;
        let hspec = HybridSpec::new(spec_h, 0.5, event.clone(), None)?;
        let heng = HybridEngine::with_mask_cap(&engine, &hspec, mask_cap)?;
        for &p in p_grid {
            let (mu, pair) = heng.derivatives(p);
            rows.push(GridRow {
                p,
                h,
                mu,
                d_dh: pair.d_dh,
                d_dp: pair.d_dp,
                ratio: pair.ratio,
            });
        }
    }
    let sup_ratio = rows
        .iter()
        .filter_map(|r| r.ratio)
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        });
    let flagged = rows.iter().filter(|r| r.ratio.is_none()).count();
    Ok(GammaGrid {
        rows,
        sup_ratio,
        flagged,
    })
}

/// Monte Carlo estimate of mu with standard error.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MuEstimate {
    pub estimate: Estimate,
    /// Propagated from the sampling chain.
    pub equilibrated: bool,
}

/// Estimate mu by sampling: sigma from the chain, the mask i.i.d.
/// Bernoulli(p) per top-layer site, then evaluate the occurrence.
pub fn mu_mc(
    spec: &HybridSpec,
    chain: &mut Chain,
    sampler: Sampler,
    samples: u64,
    spacing: u64,
    seed: u64,
) -> Result<MuEstimate> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    let lam1 = spec.top_layer();
    let s0 = spec.measure.region().layer_sites(0);
    let mask_rng = CounterRng::new(seed, 0x3a5c);
    let mut series = Vec::with_capacity(samples as usize);
    for t in 0..samples {
        for _ in 0..spacing {
            chain.sweep(sampler)?;
        }
        let mut avail = s0.clone();
        for (k, site) in lam1.iter().enumerate() {
            if mask_rng.bernoulli(t, k as u64, spec.p) {
                avail.push(*site);
            }
        }
        let hit = occurs_on(&spec.event, &avail, chain.config());
        series.push(if hit { 1.0 } else { 0.0 });
    }
    Ok(MuEstimate {
        estimate: batch_estimate(&series, 32),
        equilibrated: chain.equilibrated(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{availability_restriction, lr_crossing};
    use crate::exact::Boundary;
    use crate::lattice::{LatticeKind, Region};
    use std::sync::Arc;

    fn tz() -> LatticeKind {
        LatticeKind::tri_times_z()
    }

    /// Two-layer region: bottom rectangle z=0, top subset z=1.
    fn two_layer(bottom: &[(i32, i32)], top: &[(i32, i32)]) -> Arc<Region> {
        let mut sites: Vec<Site> = bottom.iter().map(|&(a, b)| Site::new(a, b, 0)).collect();
        sites.extend(top.iter().map(|&(a, b)| Site::new(a, b, 1)));
        Region::from_sites(tz(), sites).unwrap()
    }

    fn crossing_on(region: &Arc<Region>, n: i32) -> IncreasingEvent {
        availability_restriction(&lr_crossing(&tz(), n, &[0, 1]), region.sites())
    }

    #[test]
    fn endpoints_match_plain_gibbs_probabilities() {
        let region = two_layer(
            &[(-1, 0), (0, 0), (1, 0), (0, 1)],
            &[(-1, 0), (0, 0), (1, 0)],
        );
        let event = crossing_on(&region, 1);
        let measure = MeasureSpec::homogeneous(region.clone(), 0.25, 0.1, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone()).unwrap();

        let spec1 = HybridSpec::new(measure.clone(), 1.0, event.clone(), Some(1)).unwrap();
        let h1 = HybridEngine::new(&engine, &spec1).unwrap();
        let all_avail: Vec<Site> = region.layer_range_sites(0, 1);
        let p_full = engine.event_prob(|c| occurs_on(&event, &all_avail, c));
        assert!((h1.mu(1.0) - p_full).abs() < 1e-12);

        let s0 = region.layer_sites(0);
        let p_bottom = engine.event_prob(|c| occurs_on(&event, &s0, c));
        assert!((h1.mu(0.0) - p_bottom).abs() < 1e-12);
    }

    #[test]
    fn mu_matches_double_enumeration_oracle() {
        // Direct sum over (sigma, mask) pairs, using only public evaluation
        // paths: no marginals, no bit tables.
        let region = two_layer(
            &[(-1, 0), (0, 0), (1, 0)],
            &[(-1, 0), (0, 0), (1, 0)],
        );
        let event = crossing_on(&region, 1);
        for (beta, h, p) in [(0.0, 0.0, 0.5), (0.3, -0.2, 0.25), (0.6, 0.15, 0.8)] {
            let measure = MeasureSpec::homogeneous(region.clone(), beta, h, Boundary::Free);
            let engine = GibbsEngine::build(measure.clone()).unwrap();
            let spec = HybridSpec::new(measure, p, event.clone(), Some(1)).unwrap();
            let heng = HybridEngine::new(&engine, &spec).unwrap();

            let lam1 = region.layer_sites(1);
            let s0 = region.layer_sites(0);
            let mut oracle = 0.0;
            for wmask in 0..(1u64 << lam1.len()) {
                let open: Vec<Site> = lam1
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (wmask >> k) & 1 == 1)
                    .map(|(_, s)| *s)
                    .collect();
                let weight = p.powi(open.len() as i32)
                    * (1.0 - p).powi((lam1.len() - open.len()) as i32);
                let avail: Vec<Site> = s0.iter().chain(&open).copied().collect();
                let mut inner = 0.0;
                for id in 0..(1u64 << region.len()) {
                    let sigma = crate::exact::SpinConfig::from_id(region.clone(), id);
                    if occurs_on(&event, &avail, &sigma) {
                        inner += engine.prob_of_id(id);
                    }
                }
                oracle += weight * inner;
            }
            let got = heng.mu(p);
            assert!(
                (got - oracle).abs() < 1e-12,
                "mu {got} vs oracle {oracle} at beta={beta}, h={h}, p={p}"
            );
        }
    }

    #[test]
    fn full_space_event_has_zero_derivatives() {
        let region = two_layer(&[(0, 0), (1, 0)], &[(0, 0)]);
        let measure = MeasureSpec::homogeneous(region, 0.2, 0.1, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone()).unwrap();
        let spec =
            HybridSpec::new(measure, 0.4, IncreasingEvent::full_space(), None).unwrap();
        let heng = HybridEngine::new(&engine, &spec).unwrap();
        assert!((heng.mu(0.4) - 1.0).abs() < 1e-12);
        assert!(heng.dmu_dp(0.4).abs() < 1e-14);
        assert!(heng.dmu_dh(0.4).abs() < 1e-14);
        let (_, pair) = heng.derivatives(0.4);
        assert!(pair.ratio.is_none(), "0/0 must be flagged");
    }

    fn fd_mu_in_p(
        measure: &MeasureSpec,
        event: &IncreasingEvent,
        p: f64,
        step: f64,
    ) -> f64 {
        let engine = GibbsEngine::build(measure.clone()).unwrap();
        let spec = HybridSpec::new(measure.clone(), p, event.clone(), None).unwrap();
        let heng = HybridEngine::new(&engine, &spec).unwrap();
        if p - step < 0.0 {
            (heng.mu(p + step) - heng.mu(p)) / step
        } else if p + step > 1.0 {
            (heng.mu(p) - heng.mu(p - step)) / step
        } else {
            (heng.mu(p + step) - heng.mu(p - step)) / (2.0 * step)
        }
    }

    fn fd_mu_in_h(
        region: &Arc<Region>,
        beta: f64,
        h: f64,
        event: &IncreasingEvent,
        p: f64,
        step: f64,
    ) -> f64 {
        let at = |hv: f64| {
            let m = MeasureSpec::homogeneous(region.clone(), beta, hv, Boundary::Free);
            let engine = GibbsEngine::build(m.clone()).unwrap();
            let spec = HybridSpec::new(m, p, event.clone(), None).unwrap();
            HybridEngine::new(&engine, &spec).unwrap().mu(p)
        };
        (at(h + step) - at(h - step)) / (2.0 * step)
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let region = two_layer(
            &[(-1, 0), (0, 0), (1, 0), (0, -1)],
            &[(-1, 0), (0, 0), (1, 0)],
        );
        let event = crossing_on(&region, 1);
        let beta = 0.3;
        let h = -0.1;
        let p = 0.45;
        let measure = MeasureSpec::homogeneous(region.clone(), beta, h, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone()).unwrap();
        let spec = HybridSpec::new(measure.clone(), p, event.clone(), None).unwrap();
        let heng = HybridEngine::new(&engine, &spec).unwrap();

        let dp = heng.dmu_dp(p);
        let fd_p = fd_mu_in_p(&measure, &event, p, 1e-4);
        assert!(
            (dp - fd_p).abs() <= 1e-6 * dp.abs().max(1e-3),
            "dp {dp} vs fd {fd_p}"
        );

        let dh = heng.dmu_dh(p);
        let fd_h = fd_mu_in_h(&region, beta, h, &event, p, 1e-4);
        assert!(
            (dh - fd_h).abs() <= 1e-6 * dh.abs().max(1e-3),
            "dh {dh} vs fd {fd_h}"
        );
    }

    #[test]
    fn derivatives_match_one_sided_differences_at_endpoints() {
        let region = two_layer(&[(-1, 0), (0, 0), (1, 0)], &[(0, 0), (1, 0)]);
        let event = crossing_on(&region, 1);
        let measure = MeasureSpec::homogeneous(region.clone(), 0.2, 0.05, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone()).unwrap();
        for p in [0.0, 1.0] {
            let spec = HybridSpec::new(measure.clone(), p, event.clone(), None).unwrap();
            let heng = HybridEngine::new(&engine, &spec).unwrap();
            let dp = heng.dmu_dp(p);
            let fd = fd_mu_in_p(&measure, &event, p, 1e-5);
            assert!(
                (dp - fd).abs() <= 1e-4 * dp.abs().max(1e-2),
                "endpoint p={p}: {dp} vs {fd}"
            );
        }
    }

    #[test]
    fn derivative_signs_for_increasing_events() {
        let region = two_layer(
            &[(-1, 0), (0, 0), (1, 0), (1, 1)],
            &[(-1, 0), (0, 0)],
        );
        let event = crossing_on(&region, 1);
        for h in [-0.4, 0.0, 0.3] {
            let measure = MeasureSpec::homogeneous(region.clone(), 0.35, h, Boundary::Free);
            let engine = GibbsEngine::build(measure.clone()).unwrap();
            let spec = HybridSpec::new(measure, 0.5, event.clone(), None).unwrap();
            let heng = HybridEngine::new(&engine, &spec).unwrap();
            let (_, pair) = heng.derivatives(0.5);
            assert!(pair.d_dp >= -1e-10, "d/dp negative: {}", pair.d_dp);
            assert!(pair.d_dh >= -1e-10, "d/dh negative: {}", pair.d_dh);
        }
    }

    #[test]
    fn mu_monotone_in_p_and_h() {
        let region = two_layer(&[(-1, 0), (0, 0), (1, 0)], &[(-1, 0), (0, 0), (1, 0)]);
        let event = crossing_on(&region, 1);
        let mut last = -1.0;
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let m = MeasureSpec::homogeneous(region.clone(), 0.3, 0.0, Boundary::Free);
            let engine = GibbsEngine::build(m.clone()).unwrap();
            let spec = HybridSpec::new(m, p, event.clone(), None).unwrap();
            let v = HybridEngine::new(&engine, &spec).unwrap().mu(p);
            assert!(v >= last - 1e-12, "mu not monotone in p");
            last = v;
        }
        last = -1.0;
        for h in [-0.6, -0.2, 0.0, 0.2, 0.6] {
            let m = MeasureSpec::homogeneous(region.clone(), 0.3, h, Boundary::Free);
            let engine = GibbsEngine::build(m.clone()).unwrap();
            let spec = HybridSpec::new(m, 0.5, event.clone(), None).unwrap();
            let v = HybridEngine::new(&engine, &spec).unwrap().mu(0.5);
            assert!(v >= last - 1e-12, "mu not monotone in h");
            last = v;
        }
    }

    #[test]
    fn ratio_invariant_under_translation() {
        // Relabeling sites by translating the whole instance permutes ids
        // but leaves every aggregate unchanged.
        let region_a = two_layer(&[(-1, 0), (0, 0), (1, 0)], &[(0, 0), (1, 0)]);
        let sites_b: Vec<Site> = region_a
            .sites()
            .iter()
            .map(|s| Site::new(s.x() + 2, s.y() + 1, s.z()))
            .collect();
        let region_b = Region::from_sites(tz(), sites_b).unwrap();
        let event_a = crossing_on(&region_a, 1);
        let event_b = availability_restriction(
            &IncreasingEvent::from_pred(
                "shifted crossing",
                event_a
                    .support()
                    .iter()
                    .map(|s| Site::new(s.x() + 2, s.y() + 1, s.z()))
                    .collect(),
                {
                    let inner = event_a.clone();
                    move |spins: &[i8]| inner.eval_support(spins)
                },
            ),
            region_b.sites(),
        );
        let pair_of = |region: &Arc<Region>, event: &IncreasingEvent| {
            let m = MeasureSpec::homogeneous(region.clone(), 0.25, 0.1, Boundary::Free);
            let engine = GibbsEngine::build(m.clone()).unwrap();
            let spec = HybridSpec::new(m, 0.4, event.clone(), None).unwrap();
            let heng = HybridEngine::new(&engine, &spec).unwrap();
            heng.derivatives(0.4)
        };
        let (mu_a, pa) = pair_of(&region_a, &event_a);
        let (mu_b, pb) = pair_of(&region_b, &event_b);
        assert!((mu_a - mu_b).abs() < 1e-12);
        assert!((pa.d_dh - pb.d_dh).abs() < 1e-12);
        assert!((pa.d_dp - pb.d_dp).abs() < 1e-12);
    }

    #[test]
    fn mask_cap_is_enforced() {
        let top: Vec<(i32, i32)> = (0..9).map(|k| (k % 3, k / 3)).collect();
        let region = two_layer(&[(0, 0)], &top);
        let measure = MeasureSpec::homogeneous(region, 0.1, 0.0, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone()).unwrap();
        let spec =
            HybridSpec::new(measure, 0.5, IncreasingEvent::full_space(), None).unwrap();
        assert!(matches!(
            HybridEngine::new(&engine, &spec),
            Err(Error::MaskTooLarge { .. })
        ));
        assert!(HybridEngine::with_mask_cap(&engine, &spec, 9).is_ok());
    }

    #[test]
    fn mu_mc_agrees_with_exact() {
        let region = two_layer(
            &[(-1, 0), (0, 0), (1, 0), (0, 1)],
            &[(-1, 0), (0, 0), (1, 0)],
        );
        let event = crossing_on(&region, 1);
        let measure = MeasureSpec::homogeneous(region.clone(), 0.25, 0.05, Boundary::Free);
        let engine = GibbsEngine::build(measure.clone()).unwrap();
        let spec = HybridSpec::new(measure.clone(), 0.6, event, Some(1)).unwrap();
        let exact = HybridEngine::new(&engine, &spec).unwrap().mu(0.6);

        let mut chain = Chain::new(measure, 31, 0);
        chain.thermalize(500, Sampler::HeatBath).unwrap();
        let est = mu_mc(&spec, &mut chain, Sampler::HeatBath, 6000, 4, 99).unwrap();
        assert!(est.equilibrated);
        assert!(
            est.estimate.matches_value(exact, 4.0),
            "mc {} +- {} vs exact {exact}",
            est.estimate.mean,
            est.estimate.se
        );
    }

    #[test]
    fn mu_mc_zero_samples_is_error() {
        let region = two_layer(&[(0, 0)], &[(0, 0)]);
        let measure = MeasureSpec::homogeneous(region, 0.0, 0.0, Boundary::Free);
        let spec =
            HybridSpec::new(measure.clone(), 0.5, IncreasingEvent::full_space(), None).unwrap();
        let mut chain = Chain::new(measure, 1, 0);
        assert!(matches!(
            mu_mc(&spec, &mut chain, Sampler::HeatBath, 0, 1, 0),
            Err(Error::EmptySample)
        ));
    }
}
