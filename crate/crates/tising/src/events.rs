//! Increasing events and the pivotality calculus.
//!
//! An [`IncreasingEvent`] is a monotone predicate on spin configurations
//! with a declared finite support. Besides direct evaluation it exposes a
//! truth table over support masks, which is what the exact engine's bit
//! paths consume. The module also builds the two concrete event families
//! used throughout: left-right crossings of a box by +spins and +connections
//! from a site to the box boundary, plus the top-to-bottom duality check
//! that pins the crossing probability at 1/2.

use crate::error::Result;
use crate::exact::SpinConfig;
use crate::lattice::{Box3, LatticeKind, Region, Site};
use crate::rng::CounterRng;
use rayon::prelude::*;
use std::sync::{Arc, OnceLock};

type Pred = Arc<dyn Fn(&[i8]) -> bool + Send + Sync>;

/// Monotone event on spin configurations, supported on a finite site set.
#[derive(Clone)]
pub struct IncreasingEvent {
    label: String,
    support: Vec<Site>,
    pred: Pred,
    table: Arc<OnceLock<Arc<Vec<bool>>>>,
}

impl std::fmt::Debug for IncreasingEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IncreasingEvent")
            .field("label", &self.label)
            .field("support", &self.support.len())
            .finish()
    }
}

impl IncreasingEvent {
    /// Event from an explicit predicate over support spins. The slice passed
    /// to the predicate is aligned with the (sorted) support order.
    pub fn from_pred<F>(label: impl Into<String>, mut support: Vec<Site>, pred: F) -> Self
    where
        F: Fn(&[i8]) -> bool + Send + Sync + 'static,
    {
        support.sort();
        support.dedup();
        IncreasingEvent {
            label: label.into(),
            support,
            pred: Arc::new(pred),
            table: Arc::new(OnceLock::new()),
        }
    }

    /// The whole space: no support, always true.
    pub fn full_space() -> Self {
        IncreasingEvent::from_pred("full", Vec::new(), |_| true)
    }

    /// The empty event: no support, always false.
    pub fn empty_event() -> Self {
        IncreasingEvent::from_pred("empty", Vec::new(), |_| false)
    }

    /// `{sigma_x = +1}`.
    pub fn single_site_plus(x: Site) -> Self {
        IncreasingEvent::from_pred(format!("plus@{x}"), vec![x], |s| s[0] == 1)
    }

    /// Union of all-plus cylinders: true iff some listed set is entirely +1.
    /// Monotone by construction; an empty list gives the empty event and an
    /// empty set inside the list gives the full space.
    pub fn cylinder_union(label: impl Into<String>, sets: Vec<Vec<Site>>) -> Self {
        let mut support: Vec<Site> = sets.iter().flatten().copied().collect();
        support.sort();
        support.dedup();
        let index: Vec<Vec<usize>> = sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|s| support.binary_search(s).expect("site in support"))
                    .collect()
            })
            .collect();
        IncreasingEvent::from_pred(label, support.clone(), move |spins| {
            index
                .iter()
                .any(|set| set.iter().all(|&k| spins[k] == 1))
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> &[Site] {
        &self.support
    }

    /// Evaluate directly on a slice aligned with the support order.
    pub fn eval_support(&self, spins: &[i8]) -> bool {
        debug_assert_eq!(spins.len(), self.support.len());
        (self.pred)(spins)
    }

    /// Evaluate on a configuration whose region contains the support.
    pub fn eval(&self, config: &SpinConfig) -> bool {
        let spins: Vec<i8> = self
            .support
            .iter()
            .map(|s| {
                config
                    .get(*s)
                    .unwrap_or_else(|| panic!("event support site {s} outside region"))
            })
            .collect();
        self.eval_support(&spins)
    }

    /// Truth table over support masks (bit `k` set = support site `k` is
    /// +1). Cached; refuses supports beyond 24 sites.
    pub fn truth_table(&self) -> Arc<Vec<bool>> {
        self.table
            .get_or_init(|| {
                let m = self.support.len();
                assert!(m <= 24, "truth table support too large: {m}");
                let total = 1usize << m;
                let pred = &self.pred;
                let table: Vec<bool> = (0..total)
                    .into_par_iter()
                    .map(|mask| {
                        let spins: Vec<i8> = (0..m)
                            .map(|k| if (mask >> k) & 1 == 1 { 1 } else { -1 })
                            .collect();
                        pred(&spins)
                    })
                    .collect();
                Arc::new(table)
            })
            .clone()
    }

    /// Exhaustive monotonicity check via the truth table; use only for
    /// supports of ~14 sites or fewer.
    pub fn is_monotone_exhaustive(&self) -> bool {
        let table = self.truth_table();
        let m = self.support.len();
        for mask in 0..table.len() {
            if table[mask] {
                continue;
            }
            // mask is false; every submask must be false as well. Checking
            // single-bit ancestors is enough.
            for k in 0..m {
                if (mask >> k) & 1 == 1 && table[mask & !(1 << k)] {
                    return false;
                }
            }
        }
        true
    }

    /// Randomized monotonicity probe: flipping a spin from -1 to +1 never
    /// turns the event off. Returns the number of violations found.
    pub fn monotone_probe(&self, rng: &CounterRng, tries: u64) -> u64 {
        let m = self.support.len();
        if m == 0 {
            return 0;
        }
        let mut violations = 0;
        for t in 0..tries {
            let mut spins: Vec<i8> = (0..m)
                .map(|k| if rng.bernoulli(t, k as u64, 0.5) { 1 } else { -1 })
                .collect();
            let before = self.eval_support(&spins);
            let k = rng.below(t, m as u64 + 1, m as u64) as usize;
            if spins[k] == -1 {
                spins[k] = 1;
                let after = self.eval_support(&spins);
                if before && !after {
                    violations += 1;
                }
            }
        }
        violations
    }
}

/// Spins on `delta` set to `sign`; everything else unchanged.
pub fn modify(sigma: &SpinConfig, delta: &[Site], sign: i8) -> Result<SpinConfig> {
    assert!(sign == 1 || sign == -1);
    let mut out = sigma.clone();
    for s in delta {
        out.set(*s, sign)?;
    }
    Ok(out)
}

/// `A occurs on delta`: A holds no matter how spins outside `delta` are
/// set. For increasing A this reduces to one evaluation with the support
/// outside `delta` forced to -1 (the monotone shortcut; its equivalence
/// with the quantified definition is property-tested).
pub fn occurs_on(event: &IncreasingEvent, delta: &[Site], sigma: &SpinConfig) -> bool {
    let spins: Vec<i8> = event
        .support()
        .iter()
        .map(|s| {
            if delta.contains(s) {
                sigma
                    .get(*s)
                    .unwrap_or_else(|| panic!("event support site {s} outside region"))
            } else {
                -1
            }
        })
        .collect();
    event.eval_support(&spins)
}

/// `delta is pivotal for (A, sigma)`: all-plus on delta realizes A and
/// all-minus on delta realizes its complement.
pub fn is_pivotal(delta: &[Site], event: &IncreasingEvent, sigma: &SpinConfig) -> bool {
    let spins_with = |sign: i8| -> Vec<i8> {
        event
            .support()
            .iter()
            .map(|s| {
                if delta.contains(s) {
                    sign
                } else {
                    sigma
                        .get(*s)
                        .unwrap_or_else(|| panic!("event support site {s} outside region"))
                }
            })
            .collect()
    };
    event.eval_support(&spins_with(1)) && !event.eval_support(&spins_with(-1))
}

/// `x is +pivotal for (A, sigma)`: x is pivotal and sigma_x = +1.
pub fn is_plus_pivotal(x: Site, event: &IncreasingEvent, sigma: &SpinConfig) -> bool {
    sigma.get(x) == Some(1) && is_pivotal(&[x], event, sigma)
}

/// The event `A occurs on avail`, packaged as an increasing event in its own
/// right (support shrinks to `support ∩ avail`).
pub fn availability_restriction(event: &IncreasingEvent, avail: &[Site]) -> IncreasingEvent {
    let inner = event.clone();
    let kept: Vec<Site> = event
        .support()
        .iter()
        .copied()
        .filter(|s| avail.contains(s))
        .collect();
    let positions: Vec<Option<usize>> = inner
        .support()
        .iter()
        .map(|s| kept.binary_search(s).ok())
        .collect();
    IncreasingEvent::from_pred(
        format!("{} on subset", event.label()),
        kept,
        move |spins| {
            let full: Vec<i8> = positions
                .iter()
                .map(|p| p.map(|k| spins[k]).unwrap_or(-1))
                .collect();
            inner.eval_support(&full)
        },
    )
}

fn adjacency(sites: &[Site], kind: &LatticeKind) -> Vec<Vec<u32>> {
    sites
        .iter()
        .map(|s| {
            kind.offsets()
                .iter()
                .filter_map(|o| {
                    let t = s.offset(*o);
                    sites.binary_search(&t).ok().map(|j| j as u32)
                })
                .collect()
        })
        .collect()
}

fn bfs_connects(
    adj: &[Vec<u32>],
    spins: &[i8],
    sign: i8,
    sources: &[u32],
    targets: &[bool],
) -> bool {
    let mut seen = vec![false; spins.len()];
    let mut stack: Vec<u32> = Vec::new();
    for &s in sources {
        if spins[s as usize] == sign && !seen[s as usize] {
            if targets[s as usize] {
                return true;
            }
            seen[s as usize] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v as usize] {
            let wi = w as usize;
            if !seen[wi] && spins[wi] == sign {
                if targets[wi] {
                    return true;
                }
                seen[wi] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// Sites of the origin-centered box `B_n` whose third coordinate lies in
/// `layers`, sorted.
pub fn box_layer_sites(kind: &LatticeKind, n: i32, layers: &[i32]) -> Vec<Site> {
    let mut sites: Vec<Site> = Box3::at_origin(n)
        .sites(kind)
        .into_iter()
        .filter(|s| layers.contains(&s.z()))
        .collect();
    sites.sort();
    sites
}

/// Left-right +crossing of `B_n` within the named layers: a path of +spins
/// touching both faces `x(1) = -n` and `x(1) = +n`.
pub fn lr_crossing(kind: &LatticeKind, n: i32, layers: &[i32]) -> IncreasingEvent {
    directional_crossing(kind, n, layers, 0, 1, format!("lr+ B{n} z{layers:?}"))
}

fn directional_crossing(
    kind: &LatticeKind,
    n: i32,
    layers: &[i32],
    axis: usize,
    sign: i8,
    label: String,
) -> IncreasingEvent {
    let sites = box_layer_sites(kind, n, layers);
    assert!(!sites.is_empty(), "box/layer selection is empty");
    let adj = adjacency(&sites, kind);
    let sources: Vec<u32> = sites
        .iter()
        .enumerate()
        .filter(|(_, s)| s.0[axis] == -n)
        .map(|(i, _)| i as u32)
        .collect();
    let targets: Vec<bool> = sites.iter().map(|s| s.0[axis] == n).collect();
    IncreasingEvent::from_pred(label, sites, move |spins| {
        bfs_connects(&adj, spins, sign, &sources, &targets)
    })
}

/// Top-to-bottom -crossing of `B_n ∩ {z = 0}`: a path of -spins touching
/// both faces `x(2) = ±n`. Decreasing, so exposed as a plain predicate.
pub fn tb_minus_crossing_holds(kind: &LatticeKind, n: i32, sigma: &SpinConfig) -> bool {
    let sites = box_layer_sites(kind, n, &[0]);
    let adj = adjacency(&sites, kind);
    let sources: Vec<u32> = sites
        .iter()
        .enumerate()
        .filter(|(_, s)| s.y() == -n)
        .map(|(i, _)| i as u32)
        .collect();
    let targets: Vec<bool> = sites.iter().map(|s| s.y() == n).collect();
    let spins: Vec<i8> = sites
        .iter()
        .map(|s| sigma.get(*s).expect("site in region"))
        .collect();
    bfs_connects(&adj, &spins, -1, &sources, &targets)
}

/// Checks the triangular duality partition on `B_n ∩ {z=0}`: for every
/// configuration, exactly one of {LR +crossing, TB -crossing} holds.
/// Exhaustive for n <= 1, sampled with at least 10^5 configurations for
/// n <= 8.
pub fn tb_minus_crossing_complement_check(kind: &LatticeKind, n: i32, seed: u64) -> bool {
    assert!(n <= 8, "duality check capped at n = 8");
    let sites = box_layer_sites(kind, n, &[0]);
    let region = Region::from_sites(kind.clone(), sites).expect("patch region");
    let event = lr_crossing(kind, n, &[0]);
    let m = region.len();
    let consistent = |sigma: &SpinConfig| -> bool {
        let lr = event.eval(sigma);
        let tb = tb_minus_crossing_holds(kind, n, sigma);
        lr != tb
    };
    if n <= 1 {
        (0..(1u64 << m)).all(|id| consistent(&SpinConfig::from_id(region.clone(), id)))
    } else {
        let rng = CounterRng::new(seed, 0xD0A1);
        (0..100_000u64).all(|t| {
            let mut sigma = SpinConfig::all_minus(region.clone());
            for i in 0..m {
                if rng.bernoulli(t, i as u64, 0.5) {
                    sigma.spins_mut()[i] = 1;
                }
            }
            consistent(&sigma)
        })
    }
}

/// +connection from `origin` to the inner vertex boundary of `B_n`, with
/// paths confined to the named layers.
pub fn connection_event(
    kind: &LatticeKind,
    origin: Site,
    n: i32,
    layers: &[i32],
) -> IncreasingEvent {
    let sites = box_layer_sites(kind, n, layers);
    assert!(
        sites.binary_search(&origin).is_ok(),
        "origin must lie in the box/layer selection"
    );
    let boundary: Vec<Site> = Region::build(kind.clone(), Box3::at_origin(n))
        .expect("box region")
        .vertex_boundary();
    let adj = adjacency(&sites, kind);
    let src = sites.binary_search(&origin).unwrap() as u32;
    let targets: Vec<bool> = sites
        .iter()
        .map(|s| boundary.binary_search(s).is_ok())
        .collect();
    IncreasingEvent::from_pred(
        format!("0<->dB{n} from {origin}"),
        sites,
        move |spins| bfs_connects(&adj, spins, 1, &[src], &targets),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeKind;
    use std::sync::Arc;

    fn tz() -> LatticeKind {
        LatticeKind::tri_times_z()
    }

    fn patch_region(n: i32, layers: &[i32]) -> Arc<Region> {
        Region::from_sites(tz(), box_layer_sites(&tz(), n, layers)).unwrap()
    }

    #[test]
    fn modify_semantics() {
        let r = patch_region(1, &[0]);
        let sigma = SpinConfig::all_minus(r.clone());
        let unchanged = modify(&sigma, &[], 1).unwrap();
        assert_eq!(unchanged, sigma);

        let all = modify(&sigma, r.sites(), 1).unwrap();
        assert_eq!(all, SpinConfig::all_plus(r.clone()));

        let delta = vec![Site::new(0, 0, 0), Site::new(1, 1, 0)];
        let a = modify(&modify(&sigma, &delta, 1).unwrap(), &delta, -1).unwrap();
        let b = modify(&sigma, &delta, -1).unwrap();
        assert_eq!(a, b, "overwrite semantics");

        assert!(modify(&sigma, &[Site::new(9, 9, 9)], 1).is_err());
    }

    #[test]
    fn occurs_on_basics() {
        let r = patch_region(1, &[0]);
        let x = Site::new(0, 0, 0);
        let a = IncreasingEvent::single_site_plus(x);

        let mut sigma = SpinConfig::all_minus(r.clone());
        sigma.set(x, 1).unwrap();
        // delta covering the support pins the evaluation to sigma itself.
        assert!(occurs_on(&a, r.sites(), &sigma));
        assert!(occurs_on(&a, &[x], &sigma));
        sigma.set(x, -1).unwrap();
        assert!(!occurs_on(&a, &[x], &sigma));

        // delta = empty: true iff all-minus is in A.
        assert!(!occurs_on(&a, &[], &SpinConfig::all_plus(r.clone())));
        assert!(occurs_on(
            &IncreasingEvent::full_space(),
            &[],
            &SpinConfig::all_minus(r)
        ));
    }

    /// The quantified definition of "A occurs on delta": every tau agreeing
    /// with sigma on delta lies in A.
    fn occurs_on_definition(event: &IncreasingEvent, delta: &[Site], sigma: &SpinConfig) -> bool {
        let free: Vec<usize> = event
            .support()
            .iter()
            .enumerate()
            .filter(|(_, s)| !delta.contains(s))
            .map(|(k, _)| k)
            .collect();
        let base: Vec<i8> = event
            .support()
            .iter()
            .map(|s| sigma.get(*s).unwrap())
            .collect();
        for assign in 0..(1u64 << free.len()) {
            let mut tau = base.clone();
            for (bit, &k) in free.iter().enumerate() {
                tau[k] = if (assign >> bit) & 1 == 1 { 1 } else { -1 };
            }
            if !event.eval_support(&tau) {
                return false;
            }
        }
        true
    }

    #[test]
    fn occurs_on_shortcut_matches_definition() {
        use crate::rng::SeqRng;
        let r = patch_region(1, &[0, 1]); // 18 sites
        let mut rng = SeqRng::new(42, 0);
        for case in 0..60 {
            // Random increasing event on at most 10 support sites.
            let support = rng.subset(r.sites(), 0.4);
            let support = &support[..support.len().min(10)];
            let n_cyl = 1 + rng.below(3);
            let sets: Vec<Vec<Site>> = (0..n_cyl)
                .map(|_| rng.subset(support, 0.5))
                .collect();
            let a = IncreasingEvent::cylinder_union(format!("case{case}"), sets);
            let delta = rng.subset(r.sites(), 0.5);
            for _ in 0..8 {
                let mut sigma = SpinConfig::all_minus(r.clone());
                for i in 0..r.len() {
                    if rng.bool_with(0.5) {
                        sigma.spins_mut()[i] = 1;
                    }
                }
                assert_eq!(
                    occurs_on(&a, &delta, &sigma),
                    occurs_on_definition(&a, &delta, &sigma),
                    "shortcut/definition mismatch"
                );
            }
        }
    }

    #[test]
    fn pivotal_basics() {
        let r = patch_region(1, &[0]);
        let x = Site::new(0, 0, 0);
        let y = Site::new(1, 0, 0);
        let a = IncreasingEvent::single_site_plus(x);
        let sigma = SpinConfig::all_minus(r.clone());

        assert!(is_pivotal(&[x], &a, &sigma), "A_x^- empty, A_x^+ full");
        assert!(!is_pivotal(&[y], &a, &sigma));
        assert!(!is_pivotal(&[x], &IncreasingEvent::full_space(), &sigma));

        let mut plus_at_x = sigma.clone();
        plus_at_x.set(x, 1).unwrap();
        assert!(is_plus_pivotal(x, &a, &plus_at_x));
        assert!(!is_plus_pivotal(x, &a, &sigma));
        assert!(!is_plus_pivotal(x, &IncreasingEvent::full_space(), &plus_at_x));
    }

    #[test]
    fn pivotal_complement_identity_exhaustive() {
        use crate::rng::SeqRng;
        // For every sigma: sigma in A and delta not pivotal <=> A occurs on
        // the complement of delta.
        let r = patch_region(1, &[0]); // 9 sites
        let mut rng = SeqRng::new(7, 3);
        for case in 0..30 {
            let sets: Vec<Vec<Site>> = (0..1 + rng.below(3))
                .map(|_| rng.subset(r.sites(), 0.35))
                .collect();
            let a = IncreasingEvent::cylinder_union(format!("pc{case}"), sets);
            let delta = rng.subset(r.sites(), 0.4);
            let complement: Vec<Site> = r
                .sites()
                .iter()
                .copied()
                .filter(|s| !delta.contains(s))
                .collect();
            for id in 0..(1u64 << r.len()) {
                let sigma = SpinConfig::from_id(r.clone(), id);
                let lhs = a.eval(&sigma) && !is_pivotal(&delta, &a, &sigma);
                let rhs = occurs_on(&a, &complement, &sigma);
                assert_eq!(lhs, rhs, "pivotal-complement identity failed");
            }
        }
    }

    #[test]
    fn plus_pivotal_identity_exhaustive() {
        // x is +pivotal for H(x, omega) <=> H occurs on S0+omega+{x} but
        // not on S0+omega, for every sigma and omega.
        let r = patch_region(1, &[0, 1]);
        let h = lr_crossing(&tz(), 1, &[0, 1]);
        // Keep the exhaustive loop small: restrict to a 10-site subregion.
        let sub: Vec<Site> = r
            .sites()
            .iter()
            .copied()
            .filter(|s| s.y() >= 0)
            .collect();
        let rsub = Region::from_sites(tz(), sub).unwrap();
        let hsub = availability_restriction(&h, rsub.sites());
        let s0 = rsub.layer_sites(0);
        let lam1 = rsub.layer_sites(1);
        for xi in 0..lam1.len() {
            let x = lam1[xi];
            let others: Vec<Site> = lam1
                .iter()
                .copied()
                .filter(|s| *s != x)
                .collect();
            for wmask in 0..(1u32 << others.len()) {
                let omega: Vec<Site> = others
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (wmask >> k) & 1 == 1)
                    .map(|(_, s)| *s)
                    .collect();
                let mut with_x: Vec<Site> = s0.iter().chain(&omega).copied().collect();
                with_x.push(x);
                let without: Vec<Site> = s0.iter().chain(&omega).copied().collect();
                let hxo = availability_restriction(&hsub, &with_x);
                for id in 0..(1u64 << rsub.len()) {
                    let sigma = SpinConfig::from_id(rsub.clone(), id);
                    let lhs = is_plus_pivotal(x, &hxo, &sigma);
                    let rhs = occurs_on(&hsub, &with_x, &sigma)
                        && !occurs_on(&hsub, &without, &sigma);
                    assert_eq!(lhs, rhs, "+pivotal identity failed");
                }
            }
        }
    }

    #[test]
    fn crossing_extremes_and_degenerate_box() {
        let e = lr_crossing(&tz(), 1, &[0]);
        let r = patch_region(1, &[0]);
        assert!(e.eval(&SpinConfig::all_plus(r.clone())));
        assert!(!e.eval(&SpinConfig::all_minus(r)));

        // n = 0: single site; crossing iff that site is +.
        let e0 = lr_crossing(&tz(), 0, &[0]);
        let r0 = patch_region(0, &[0]);
        assert!(e0.eval(&SpinConfig::all_plus(r0.clone())));
        assert!(!e0.eval(&SpinConfig::all_minus(r0)));
    }

    /// Exhaustive simple-path search, independent of the BFS implementation.
    fn crossing_path_oracle(kind: &LatticeKind, n: i32, sigma: &SpinConfig) -> bool {
        let sites = box_layer_sites(kind, n, &[0]);
        fn extend(
            kind: &LatticeKind,
            sites: &[Site],
            sigma: &SpinConfig,
            path: &mut Vec<Site>,
            n: i32,
        ) -> bool {
            let last = *path.last().unwrap();
            if last.x() == n {
                return true;
            }
            for t in sites {
                if sigma.get(*t) == Some(1)
                    && !path.contains(t)
                    && kind.are_adjacent(last, *t)
                {
                    path.push(*t);
                    if extend(kind, sites, sigma, path, n) {
                        return true;
                    }
                    path.pop();
                }
            }
            false
        }
        for s in &sites {
            if s.x() == -n && sigma.get(*s) == Some(1) {
                let mut path = vec![*s];
                if extend(kind, &sites, sigma, &mut path, n) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn crossing_matches_path_enumeration_oracle() {
        let r = patch_region(1, &[0]);
        let e = lr_crossing(&tz(), 1, &[0]);
        for id in 0..(1u64 << 9) {
            let sigma = SpinConfig::from_id(r.clone(), id);
            assert_eq!(
                e.eval(&sigma),
                crossing_path_oracle(&tz(), 1, &sigma),
                "BFS and path-enumeration disagree at id {id}"
            );
        }
    }

    #[test]
    fn duality_partition_exhaustive_n1() {
        assert!(tb_minus_crossing_complement_check(&tz(), 1, 0));
    }

    #[test]
    fn duality_partition_sampled_n3() {
        assert!(tb_minus_crossing_complement_check(&tz(), 3, 12345));
    }

    #[test]
    fn duality_extremes_consistent() {
        let r = patch_region(2, &[0]);
        let e = lr_crossing(&tz(), 2, &[0]);
        let plus = SpinConfig::all_plus(r.clone());
        let minus = SpinConfig::all_minus(r);
        assert!(e.eval(&plus) && !tb_minus_crossing_holds(&tz(), 2, &plus));
        assert!(!e.eval(&minus) && tb_minus_crossing_holds(&tz(), 2, &minus));
    }

    #[test]
    fn connection_event_cases() {
        let origin = Site::new(0, 0, 0);
        // Origin on the box boundary: its own +spin connects.
        let e0 = connection_event(&tz(), Site::new(1, 1, 0), 1, &[0]);
        let r = patch_region(1, &[0]);
        let mut sigma = SpinConfig::all_minus(r.clone());
        sigma.set(Site::new(1, 1, 0), 1).unwrap();
        assert!(e0.eval(&sigma));

        let e = connection_event(&tz(), origin, 1, &[0]);
        assert!(!e.eval(&SpinConfig::all_minus(r.clone())));

        // + only on origin and the diagonal neighbor (1,1,0), which lies on
        // the boundary: connected through the diagonal edge.
        let mut sigma2 = SpinConfig::all_minus(r);
        sigma2.set(origin, 1).unwrap();
        sigma2.set(Site::new(1, 1, 0), 1).unwrap();
        assert!(e.eval(&sigma2));
    }

    #[test]
    fn crossing_and_connection_are_monotone() {
        let rng = CounterRng::new(99, 1);
        for event in [
            lr_crossing(&tz(), 2, &[0]),
            lr_crossing(&tz(), 1, &[0, 1]),
            connection_event(&tz(), Site::new(0, 0, 0), 2, &[0, 1]),
        ] {
            assert_eq!(event.monotone_probe(&rng, 4000), 0);
        }
        let small = lr_crossing(&tz(), 1, &[0]);
        assert!(small.is_monotone_exhaustive());
    }

    #[test]
    fn occurs_on_is_increasing() {
        // The availability restriction of an increasing event is increasing.
        let h = lr_crossing(&tz(), 1, &[0, 1]);
        let avail: Vec<Site> = h
            .support()
            .iter()
            .copied()
            .filter(|s| s.z() == 0 || s.x() <= 0)
            .collect();
        let restricted = availability_restriction(&h, &avail);
        assert!(restricted.is_monotone_exhaustive());
    }
}
