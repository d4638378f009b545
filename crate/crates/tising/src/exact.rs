//! Exact finite-volume Gibbs measures by full enumeration.
//!
//! For a region with `N` sites the engine walks all `2^N` spin
//! configurations, caching the log of every unnormalized weight and the log
//! partition function. All accumulation happens in the log domain
//! (log-sum-exp), so fields up to |h| = 5 and beta up to 3 on 20 sites stay
//! overflow-free. Configuration ids enumerate sites in region index order
//! with bit `i = (1 + sigma_i) / 2`.
//!
//! Enumeration refuses regions above [`DEFAULT_ENUM_CAP`] sites; larger
//! volumes belong to the Monte Carlo layer.

use crate::error::{Error, Result};
use crate::events::IncreasingEvent;
use crate::lattice::{Region, Site};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// Default cap on exactly enumerated sites (about 1.05M configurations).
pub const DEFAULT_ENUM_CAP: usize = 20;

/// Boundary condition on the outer vertex boundary of a region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    /// No coupling outside the region.
    Free,
    /// Every outside vertex carries spin +1.
    Plus,
    /// Every outside vertex carries spin -1.
    Minus,
    /// Explicit spins on selected outside neighbors; absent entries mean 0.
    /// Serialized as a pair list so the dump stays plain JSON.
    Custom(#[serde(with = "site_pairs")] BTreeMap<Site, i8>),
}

mod site_pairs {
    use crate::lattice::Site;
    use serde::{Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<Site, i8>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&map.iter().collect::<Vec<_>>(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<Site, i8>, D::Error> {
        let pairs: Vec<(Site, i8)> = serde::Deserialize::deserialize(d)?;
        Ok(pairs.into_iter().collect())
    }
}

impl Boundary {
    fn eta(&self, s: Site) -> i8 {
        match self {
            Boundary::Free => 0,
            Boundary::Plus => 1,
            Boundary::Minus => -1,
            Boundary::Custom(map) => map.get(&s).copied().unwrap_or(0),
        }
    }
}

/// The measure of a finite-volume Ising model: region, inverse temperature,
/// per-site external field and boundary condition.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    region: Arc<Region>,
    beta: f64,
    field: Vec<f64>,
    boundary: Boundary,
}

impl MeasureSpec {
    /// Homogeneous field `h` on every site.
    pub fn homogeneous(region: Arc<Region>, beta: f64, h: f64, boundary: Boundary) -> Self {
        let n = region.len();
        MeasureSpec::with_field(region, beta, vec![h; n], boundary).expect("field length matches")
    }

    /// Per-site field indexed by region site id.
    pub fn with_field(
        region: Arc<Region>,
        beta: f64,
        field: Vec<f64>,
        boundary: Boundary,
    ) -> Result<Self> {
        assert!(beta >= 0.0, "beta must be nonnegative");
        if field.len() != region.len() {
            return Err(Error::FieldMismatch);
        }
        if let Boundary::Custom(map) = &boundary {
            for s in map.keys() {
                if region.contains(*s) {
                    return Err(Error::BadBoundaryKey(*s));
                }
                let touches = region.kind().offsets().iter().any(|o| {
                    let t = s.offset(*o);
                    region.contains(t)
                });
                if !touches || !region.kind().is_vertex(*s) {
                    return Err(Error::BadBoundaryKey(*s));
                }
            }
        }
        Ok(MeasureSpec {
            region,
            beta,
            field,
            boundary,
        })
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn field_at(&self, s: Site) -> Option<f64> {
        self.region.id_of(s).map(|i| self.field[i])
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    /// Replace the field, keeping everything else.
    pub fn replace_field(&self, field: Vec<f64>) -> Result<Self> {
        MeasureSpec::with_field(self.region.clone(), self.beta, field, self.boundary.clone())
    }

    /// Aggregate boundary spin seen by each region site:
    /// `b_x = sum of eta(y)` over outside lattice neighbors `y` of `x`.
    pub fn boundary_sums(&self) -> Vec<f64> {
        self.region
            .sites()
            .iter()
            .map(|s| {
                self.region
                    .outside_neighbors(*s)
                    .into_iter()
                    .map(|y| self.boundary.eta(y) as f64)
                    .sum()
            })
            .collect()
    }
}

/// A spin assignment on a region; values are -1 or +1.
#[derive(Clone, Debug)]
pub struct SpinConfig {
    region: Arc<Region>,
    spins: Vec<i8>,
}

impl PartialEq for SpinConfig {
    fn eq(&self, other: &Self) -> bool {
        self.spins == other.spins
            && (Arc::ptr_eq(&self.region, &other.region)
                || self.region.sites() == other.region.sites())
    }
}

impl SpinConfig {
    pub fn constant(region: Arc<Region>, value: i8) -> Self {
        assert!(value == 1 || value == -1);
        let n = region.len();
        SpinConfig {
            region,
            spins: vec![value; n],
        }
    }

    pub fn all_plus(region: Arc<Region>) -> Self {
        SpinConfig::constant(region, 1)
    }

    pub fn all_minus(region: Arc<Region>) -> Self {
        SpinConfig::constant(region, -1)
    }

    /// Decode a configuration id: bit `i` set means spin +1 at site id `i`.
    pub fn from_id(region: Arc<Region>, id: u64) -> Self {
        let n = region.len();
        let spins = (0..n)
            .map(|i| if (id >> i) & 1 == 1 { 1 } else { -1 })
            .collect();
        SpinConfig { region, spins }
    }

    pub fn to_id(&self) -> u64 {
        let mut id = 0u64;
        for (i, &s) in self.spins.iter().enumerate() {
            if s == 1 {
                id |= 1 << i;
            }
        }
        id
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn spins_mut(&mut self) -> &mut [i8] {
        &mut self.spins
    }

    pub fn get(&self, s: Site) -> Option<i8> {
        self.region.id_of(s).map(|i| self.spins[i])
    }

    pub fn set(&mut self, s: Site, value: i8) -> Result<()> {
        assert!(value == 1 || value == -1);
        let i = self.region.id_of(s).ok_or(Error::SiteNotInRegion(s))?;
        self.spins[i] = value;
        Ok(())
    }

    pub fn negated(&self) -> SpinConfig {
        SpinConfig {
            region: self.region.clone(),
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }

    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as f64).sum::<f64>() / self.spins.len() as f64
    }
}

/// An increasing event bound to a region: support positions resolved to
/// site ids and a truth table indexed by support bits.
#[derive(Clone)]
pub struct BoundEvent {
    /// Region site id of each support site, in event support order.
    pub positions: Vec<u32>,
    /// Truth table over support masks (bit k = support[k] is +1).
    pub table: Arc<Vec<bool>>,
}

impl BoundEvent {
    pub fn bind(event: &IncreasingEvent, region: &Region) -> Result<BoundEvent> {
        let mut positions = Vec::with_capacity(event.support().len());
        for s in event.support() {
            let id = region.id_of(*s).ok_or(Error::SupportOutsideRegion)?;
            positions.push(id as u32);
        }
        Ok(BoundEvent {
            positions,
            table: event.truth_table(),
        })
    }

    #[inline]
    pub fn gather(&self, id: u64) -> u32 {
        let mut g = 0u32;
        for (k, &pos) in self.positions.iter().enumerate() {
            g |= (((id >> pos) & 1) as u32) << k;
        }
        g
    }

    pub fn support_len(&self) -> usize {
        self.positions.len()
    }

    /// Mask over support bits of the support sites present in `sites`.
    pub fn support_mask_of(&self, event: &IncreasingEvent, sites: &[Site]) -> u32 {
        let mut m = 0u32;
        for (k, s) in event.support().iter().enumerate() {
            if sites.contains(s) {
                m |= 1 << k;
            }
        }
        m
    }
}

/// Result of conditioning: either a proper engine on the free sites or a
/// point mass when every site was pinned.
pub enum Conditional {
    Engine(GibbsEngine),
    PointMass(SpinConfig),
}

impl Conditional {
    pub fn engine(self) -> GibbsEngine {
        match self {
            Conditional::Engine(e) => e,
            Conditional::PointMass(_) => panic!("conditioning pinned every site"),
        }
    }
}

/// Exact Gibbs measure over all configurations of a small region.
pub struct GibbsEngine {
    spec: MeasureSpec,
    log_weights: Vec<f64>,
    log_z: f64,
    probs: Vec<f64>,
    magnetizations: OnceLock<Vec<f64>>,
}

const CHUNK: usize = 1 << 14;

impl GibbsEngine {
    pub fn build(spec: MeasureSpec) -> Result<GibbsEngine> {
        GibbsEngine::build_with_cap(spec, DEFAULT_ENUM_CAP)
    }

    pub fn build_with_cap(spec: MeasureSpec, cap: usize) -> Result<GibbsEngine> {
        let n = spec.region().len();
        if n > cap {
            return Err(Error::EnumerationTooLarge { sites: n, cap });
        }
        let region = spec.region();
        let mut edges = Vec::new();
        for i in 0..n {
            for &j in region.neighbor_ids(i) {
                if (j as usize) > i {
                    edges.push((i as u32, j));
                }
            }
        }
        let beta = spec.beta();
        let bsums = spec.boundary_sums();
        let site_coeff: Vec<f64> = (0..n)
            .map(|i| spec.field()[i] + beta * bsums[i])
            .collect();
        let edge_total = edges.len() as f64;

        let total = 1usize << n;
        let mut log_weights = vec![0.0f64; total];
        log_weights
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(ci, chunk)| {
                let base = (ci * CHUNK) as u64;
                for (k, lw) in chunk.iter_mut().enumerate() {
                    let id = base + k as u64;
                    // sum over edges of sigma_i sigma_j = E - 2 * disagreements
                    let mut dis = 0u32;
                    for &(i, j) in &edges {
                        dis += (((id >> i) ^ (id >> j)) & 1) as u32;
                    }
                    // Field term accumulated site by site with explicit
                    // signs, so the global flip (h, eta, sigma) -> (-h,
                    // -eta, -sigma) reproduces identical addends and the
                    // weights agree bit for bit.
                    let mut acc = 0.0f64;
                    for (i, c) in site_coeff.iter().enumerate() {
                        acc += if (id >> i) & 1 == 1 { *c } else { -*c };
                    }
                    *lw = beta * (edge_total - 2.0 * dis as f64) + acc;
                }
            });

        // Deterministic log-sum-exp: parallel per-chunk extrema/sums merged
        // in fixed chunk order.
        let max = log_weights
            .par_chunks(CHUNK)
            .map(|c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = log_weights
            .par_chunks(CHUNK)
            .map(|c| c.iter().map(|&w| (w - max).exp()).sum::<f64>())
            .collect::<Vec<_>>()
            .into_iter()
            .sum();
        let log_z = max + sum.ln();

        let mut probs = vec![0.0f64; total];
        probs
            .par_chunks_mut(CHUNK)
            .zip(log_weights.par_chunks(CHUNK))
            .for_each(|(p, w)| {
                for (pi, wi) in p.iter_mut().zip(w) {
                    *pi = (wi - log_z).exp();
                }
            });

        Ok(GibbsEngine {
            spec,
            log_weights,
            log_z,
            probs,
            magnetizations: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn region(&self) -> &Arc<Region> {
        self.spec.region()
    }

    pub fn n_sites(&self) -> usize {
        self.spec.region().len()
    }

    pub fn n_configs(&self) -> usize {
        self.probs.len()
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    pub fn log_weight(&self, id: u64) -> f64 {
        self.log_weights[id as usize]
    }

    /// Probability of one configuration.
    pub fn prob(&self, sigma: &SpinConfig) -> f64 {
        assert!(
            Arc::ptr_eq(sigma.region(), self.spec.region())
                || sigma.region().sites() == self.spec.region().sites(),
            "configuration lives on a different region"
        );
        self.probs[sigma.to_id() as usize]
    }

    pub fn prob_of_id(&self, id: u64) -> f64 {
        self.probs[id as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Parallel fold over all configurations, accumulating `width` sums.
    /// Chunks are merged in fixed order so results are bit-reproducible
    /// across thread counts.
    pub fn fold_ids<F>(&self, width: usize, f: F) -> Vec<f64>
    where
        F: Fn(&mut [f64], u64, f64) + Sync,
    {
        let partials: Vec<Vec<f64>> = self
            .probs
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let mut acc = vec![0.0f64; width];
                let base = (ci * CHUNK) as u64;
                for (k, &p) in chunk.iter().enumerate() {
                    f(&mut acc, base + k as u64, p);
                }
                acc
            })
            .collect();
        let mut out = vec![0.0f64; width];
        for part in partials {
            for (o, v) in out.iter_mut().zip(part) {
                *o += v;
            }
        }
        out
    }

    /// Expectation of an arbitrary configuration functional.
    pub fn expectation<F>(&self, f: F) -> f64
    where
        F: Fn(&SpinConfig) -> f64 + Sync,
    {
        let region = self.spec.region().clone();
        let n = region.len();
        let partials: Vec<f64> = self
            .probs
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let mut scratch = SpinConfig::all_minus(region.clone());
                let base = (ci * CHUNK) as u64;
                let mut acc = 0.0;
                for (k, &p) in chunk.iter().enumerate() {
                    let id = base + k as u64;
                    for i in 0..n {
                        scratch.spins[i] = if (id >> i) & 1 == 1 { 1 } else { -1 };
                    }
                    acc += p * f(&scratch);
                }
                acc
            })
            .collect();
        partials.into_iter().sum()
    }

    /// Probability of an event given as a predicate.
    pub fn event_prob<F>(&self, pred: F) -> f64
    where
        F: Fn(&SpinConfig) -> bool + Sync,
    {
        self.expectation(|c| if pred(c) { 1.0 } else { 0.0 })
    }

    /// Covariance `E[fg] - E[f]E[g]`.
    pub fn covariance<F, G>(&self, f: F, g: G) -> f64
    where
        F: Fn(&SpinConfig) -> f64 + Sync,
        G: Fn(&SpinConfig) -> f64 + Sync,
    {
        let region = self.spec.region().clone();
        let n = region.len();
        let partials: Vec<[f64; 3]> = self
            .probs
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let mut scratch = SpinConfig::all_minus(region.clone());
                let base = (ci * CHUNK) as u64;
                let mut acc = [0.0f64; 3];
                for (k, &p) in chunk.iter().enumerate() {
                    let id = base + k as u64;
                    for i in 0..n {
                        scratch.spins[i] = if (id >> i) & 1 == 1 { 1 } else { -1 };
                    }
                    let fv = f(&scratch);
                    let gv = g(&scratch);
                    acc[0] += p * fv;
                    acc[1] += p * gv;
                    acc[2] += p * fv * gv;
                }
                acc
            })
            .collect();
        let mut t = [0.0f64; 3];
        for part in partials {
            for (o, v) in t.iter_mut().zip(part) {
                *o += v;
            }
        }
        t[2] - t[0] * t[1]
    }

    /// `cov(sigma_x, I_B)` in the cancellation-free form
    /// `2 [P(B, sigma_x=+1) P(sigma_x=-1) - P(B, sigma_x=-1) P(sigma_x=+1)]`.
    /// The textbook `E[sigma I] - E[sigma] E[I]` loses all precision when
    /// one spin orientation carries almost no mass; this form keeps the
    /// covariance accurate relative to its own (possibly tiny) size, which
    /// the pivotality identities divide by.
    pub fn site_event_cov<F>(&self, x: Site, pred: F) -> f64
    where
        F: Fn(&SpinConfig) -> bool + Sync,
    {
        let xid = self
            .spec
            .region()
            .id_of(x)
            .expect("site in region");
        let region = self.spec.region().clone();
        let n = region.len();
        let partials: Vec<[f64; 4]> = self
            .probs
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let mut scratch = SpinConfig::all_minus(region.clone());
                let base = (ci * CHUNK) as u64;
                let mut acc = [0.0f64; 4]; // P(B,+), P(B,-), P(+), P(-)
                for (k, &p) in chunk.iter().enumerate() {
                    let id = base + k as u64;
                    for i in 0..n {
                        scratch.spins[i] = if (id >> i) & 1 == 1 { 1 } else { -1 };
                    }
                    let plus = (id >> xid) & 1 == 1;
                    if plus {
                        acc[2] += p;
                    } else {
                        acc[3] += p;
                    }
                    if pred(&scratch) {
                        if plus {
                            acc[0] += p;
                        } else {
                            acc[1] += p;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut t = [0.0f64; 4];
        for part in partials {
            for (o, v) in t.iter_mut().zip(part) {
                *o += v;
            }
        }
        2.0 * (t[0] * t[3] - t[1] * t[2])
    }

    /// Per-site magnetizations `E[sigma_i]`, cached.
    pub fn magnetizations(&self) -> &[f64] {
        self.magnetizations.get_or_init(|| {
            let n = self.n_sites();
            self.fold_ids(n, |acc, id, p| {
                for (i, a) in acc.iter_mut().enumerate() {
                    let s = if (id >> i) & 1 == 1 { 1.0 } else { -1.0 };
                    *a += p * s;
                }
            })
        })
    }

    /// `P(event occurs on the sites marked in avail_bits)` for a bound event:
    /// support sites outside the availability mask are forced to -1.
    pub fn occurs_prob(&self, bev: &BoundEvent, avail_bits: u32) -> f64 {
        let table = bev.table.as_slice();
        let out = self.fold_ids(1, |acc, id, p| {
            if table[(bev.gather(id) & avail_bits) as usize] {
                acc[0] += p;
            }
        });
        out[0]
    }

    /// Joint distribution of the spins at `positions`:
    /// `q[mask]` = probability that exactly the marked positions are +1.
    pub fn support_marginal(&self, positions: &[u32]) -> Vec<f64> {
        let m = positions.len();
        assert!(m <= 26, "marginal table too large");
        self.fold_ids(1 << m, |acc, id, p| {
            let mut g = 0usize;
            for (k, &pos) in positions.iter().enumerate() {
                g |= (((id >> pos) & 1) as usize) << k;
            }
            acc[g] += p;
        })
    }

    /// For a scalar weight table `w` indexed by gathered support bits:
    /// returns `(E[w], cov(sigma_i, w) for every site i)`.
    pub fn weighted_cov_all_sites(&self, bev: &BoundEvent, w: &[f64]) -> (f64, Vec<f64>) {
        let n = self.n_sites();
        let out = self.fold_ids(n + 1, |acc, id, p| {
            let wv = w[bev.gather(id) as usize];
            if wv != 0.0 {
                let pw = p * wv;
                acc[n] += pw;
                for (i, a) in acc.iter_mut().take(n).enumerate() {
                    let s = if (id >> i) & 1 == 1 { 1.0 } else { -1.0 };
                    *a += pw * s;
                }
            }
        });
        let mean_w = out[n];
        let mags = self.magnetizations();
        let covs = (0..n).map(|i| out[i] - mags[i] * mean_w).collect();
        (mean_w, covs)
    }

    /// `cov(sigma_x, I[event occurs on avail])` for a single site.
    pub fn occurs_cov_site(&self, bev: &BoundEvent, avail_bits: u32, site_id: usize) -> f64 {
        let table = bev.table.as_slice();
        let out = self.fold_ids(2, |acc, id, p| {
            if table[(bev.gather(id) & avail_bits) as usize] {
                acc[0] += p;
                let s = if (id >> site_id) & 1 == 1 { 1.0 } else { -1.0 };
                acc[1] += p * s;
            }
        });
        out[1] - self.magnetizations()[site_id] * out[0]
    }

    /// `P(delta is pivotal for the availability-restricted event)`:
    /// the event holds with delta forced +1 and fails with delta forced -1.
    pub fn pivotal_prob(&self, bev: &BoundEvent, avail_bits: u32, delta_bits: u32) -> f64 {
        let table = bev.table.as_slice();
        let out = self.fold_ids(1, |acc, id, p| {
            let g = bev.gather(id);
            if table[((g | delta_bits) & avail_bits) as usize]
                && !table[((g & !delta_bits) & avail_bits) as usize]
            {
                acc[0] += p;
            }
        });
        out[0]
    }

    /// `P(x is +pivotal for "event occurs on avail ∪ {x}")`, with `x` given
    /// as a support bit. Uses the difference form: occurs on avail ∪ {x}
    /// minus occurs on avail (the +1 constraint at x is implied).
    pub fn plus_pivotal_prob(&self, bev: &BoundEvent, avail_bits: u32, x_bit: u32) -> f64 {
        let table = bev.table.as_slice();
        let with_x = avail_bits | x_bit;
        let out = self.fold_ids(1, |acc, id, p| {
            let g = bev.gather(id);
            if table[(g & with_x) as usize] && !table[(g & avail_bits & !x_bit) as usize] {
                acc[0] += p;
            }
        });
        out[0]
    }

    /// Condition on a partial spin assignment. Constrained spins are
    /// absorbed into boundary terms of a new engine over the free sites;
    /// conditioning every site yields the pinned configuration itself.
    pub fn conditional(&self, constraints: &[(Site, i8)]) -> Result<Conditional> {
        let region = self.spec.region();
        let mut pinned: BTreeMap<Site, i8> = BTreeMap::new();
        for (s, v) in constraints {
            assert!(*v == 1 || *v == -1, "constraint value must be +1 or -1");
            if region.id_of(*s).is_none() {
                return Err(Error::SiteNotInRegion(*s));
            }
            if let Some(prev) = pinned.insert(*s, *v) {
                if prev != *v {
                    return Err(Error::ContradictoryConstraints(*s));
                }
            }
        }
        let free: Vec<Site> = region
            .sites()
            .iter()
            .copied()
            .filter(|s| !pinned.contains_key(s))
            .collect();
        if free.is_empty() {
            let mut config = SpinConfig::all_minus(region.clone());
            for (s, v) in &pinned {
                config.set(*s, *v)?;
            }
            return Ok(Conditional::PointMass(config));
        }
        let sub = Region::from_sites(region.kind().clone(), free)?;
        let field: Vec<f64> = sub
            .sites()
            .iter()
            .map(|s| self.spec.field()[region.id_of(*s).unwrap()])
            .collect();
        // Outside neighbors of the sub-region are either pinned sites (use
        // the constraint) or outside the parent region (use the parent
        // boundary).
        let mut eta: BTreeMap<Site, i8> = BTreeMap::new();
        for s in sub.sites() {
            for y in sub.outside_neighbors(*s) {
                let value = if let Some(v) = pinned.get(&y) {
                    *v
                } else {
                    self.spec.boundary().eta(y)
                };
                if value != 0 {
                    eta.insert(y, value);
                }
            }
        }
        let spec = MeasureSpec::with_field(sub, self.spec.beta(), field, Boundary::Custom(eta))?;
        Ok(Conditional::Engine(GibbsEngine::build_with_cap(
            spec,
            DEFAULT_ENUM_CAP,
        )?))
    }
}
