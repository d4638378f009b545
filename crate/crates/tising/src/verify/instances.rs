//! Randomized instance generation for the verifier.
//!
//! Instances are built from the run seed and carry a full structural
//! description (region sites, parameters, event cylinders), so any
//! violation dump can be replayed verbatim.

use crate::events::IncreasingEvent;
use crate::exact::{Boundary, MeasureSpec};
use crate::lattice::{LatticeKind, Region, Site};
use crate::rng::SeqRng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Structural description of a Gibbs instance, serializable for replay.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GibbsDesc {
    pub kind: LatticeKind,
    pub sites: Vec<Site>,
    pub beta: f64,
    pub field: Vec<f64>,
    pub boundary: Boundary,
}

impl GibbsDesc {
    pub fn build(&self) -> MeasureSpec {
        let region = Region::from_sites(self.kind.clone(), self.sites.clone())
            .expect("instance region");
        MeasureSpec::with_field(region, self.beta, self.field.clone(), self.boundary.clone())
            .expect("instance measure")
    }
}

/// All-plus cylinder union, described by its site sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EventDesc {
    pub cylinders: Vec<Vec<Site>>,
}

impl EventDesc {
    pub fn build(&self, label: &str) -> IncreasingEvent {
        IncreasingEvent::cylinder_union(label, self.cylinders.clone())
    }
}

/// Seeded generator for regions, measures and increasing events.
pub struct InstanceGen {
    rng: SeqRng,
}

impl InstanceGen {
    pub fn new(seed: u64, stream: u64) -> Self {
        InstanceGen {
            rng: SeqRng::new(seed, stream),
        }
    }

    pub fn rng(&mut self) -> &mut SeqRng {
        &mut self.rng
    }

    /// Random region of at most `max_sites` sites: columns, single-layer
    /// patches, two-layer slabs and diluted variants of each.
    pub fn region(&mut self, max_sites: usize) -> Arc<Region> {
        let kind = LatticeKind::tri_times_z();
        loop {
            let shape = self.rng.below(4);
            let mut sites: Vec<Site> = match shape {
                0 => {
                    let k = 2 + self.rng.below(7) as i32;
                    (0..k).map(|c| Site::new(0, 0, c)).collect()
                }
                1 => {
                    let a = 2 + self.rng.below(3) as i32;
                    let b = 1 + self.rng.below(3) as i32;
                    (0..a)
                        .flat_map(|x| (0..b).map(move |y| Site::new(x, y, 0)))
                        .collect()
                }
                _ => {
                    let a = 2 + self.rng.below(2) as i32;
                    let b = 1 + self.rng.below(2) as i32;
                    (0..a)
                        .flat_map(|x| {
                            (0..b).flat_map(move |y| {
                                [Site::new(x, y, 0), Site::new(x, y, 1)]
                            })
                        })
                        .collect()
                }
            };
            // Randomly dilute without emptying.
            if self.rng.bool_with(0.5) {
                let keep: Vec<Site> = sites
                    .iter()
                    .copied()
                    .filter(|_| self.rng.bool_with(0.8))
                    .collect();
                if keep.len() >= 2 {
                    sites = keep;
                }
            }
            while sites.len() > max_sites {
                let k = self.rng.below(sites.len());
                sites.remove(k);
            }
            if sites.len() >= 2 {
                return Region::from_sites(kind, sites).expect("generated region");
            }
        }
    }

    /// Two-layer region with bounded layer sizes: full bottom rectangle,
    /// random top subset.
    pub fn two_layer_region(&mut self, max_total: usize, max_top: usize) -> Arc<Region> {
        let kind = LatticeKind::tri_times_z();
        loop {
            let a = 2 + self.rng.below(3) as i32;
            let b = 1 + self.rng.below(3) as i32;
            let bottom: Vec<Site> = (0..a)
                .flat_map(|x| (0..b).map(move |y| Site::new(x, y, 0)))
                .collect();
            let mut top: Vec<Site> = bottom
                .iter()
                .map(|s| Site::new(s.x(), s.y(), 1))
                .filter(|_| self.rng.bool_with(0.6))
                .collect();
            while top.len() > max_top {
                let k = self.rng.below(top.len());
                top.remove(k);
            }
            let mut sites = bottom;
            sites.extend(top.iter().copied());
            while sites.len() > max_total {
                // Trim bottom sites only if the top survives; keep at least
                // one site per layer populated.
                let k = self.rng.below(sites.len());
                if sites[k].z() == 0 && sites.iter().filter(|s| s.z() == 0).count() <= 1 {
                    continue;
                }
                sites.remove(k);
            }
            if sites.len() >= 2 && sites.iter().any(|s| s.z() == 1) {
                return Region::from_sites(kind, sites).expect("two-layer region");
            }
        }
    }

    pub fn beta(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.range_f64(lo, hi)
    }

    pub fn field_vec(&mut self, n: usize, amp: f64) -> Vec<f64> {
        (0..n).map(|_| self.rng.range_f64(-amp, amp)).collect()
    }

    /// Random boundary condition: free, all-plus, all-minus or a custom
    /// sprinkling of +/-1 on outside neighbors.
    pub fn boundary(&mut self, region: &Region) -> Boundary {
        match self.rng.below(4) {
            0 => Boundary::Free,
            1 => Boundary::Plus,
            2 => Boundary::Minus,
            _ => {
                let mut map = BTreeMap::new();
                for s in region.sites() {
                    for y in region.outside_neighbors(*s) {
                        if self.rng.bool_with(0.3) {
                            let v = if self.rng.bool_with(0.5) { 1 } else { -1 };
                            map.insert(y, v);
                        }
                    }
                }
                Boundary::Custom(map)
            }
        }
    }

    /// Full random Gibbs instance on at most `max_sites` sites.
    pub fn gibbs(&mut self, max_sites: usize, beta_max: f64, field_amp: f64) -> GibbsDesc {
        let region = self.region(max_sites);
        let beta = self.beta(0.0, beta_max);
        let field = self.field_vec(region.len(), field_amp);
        let boundary = self.boundary(&region);
        GibbsDesc {
            kind: region.kind().clone(),
            sites: region.sites().to_vec(),
            beta,
            field,
            boundary,
        }
    }

    /// Random increasing event as a union of all-plus cylinders over the
    /// pool. `force_contains`: every cylinder includes this site (makes
    /// `A_x^- = {}`); `force_avoids`: at least one cylinder omits it.
    pub fn cylinder_event(
        &mut self,
        pool: &[Site],
        force_contains: Option<Site>,
        force_avoids: Option<Site>,
    ) -> EventDesc {
        let n_cyl = 1 + self.rng.below(3);
        let mut cylinders = Vec::new();
        for _ in 0..n_cyl {
            let mut set: Vec<Site> = pool
                .iter()
                .copied()
                .filter(|_| self.rng.bool_with(0.4))
                .collect();
            if let Some(x) = force_contains {
                if !set.contains(&x) {
                    set.push(x);
                }
            }
            if set.is_empty() {
                set.push(*self.rng.pick(pool));
                if let Some(x) = force_contains {
                    set = vec![x];
                }
            }
            set.sort();
            set.dedup();
            cylinders.push(set);
        }
        if let Some(x) = force_avoids {
            let mut set: Vec<Site> = pool
                .iter()
                .copied()
                .filter(|s| *s != x && self.rng.bool_with(0.4))
                .collect();
            if set.is_empty() {
                let others: Vec<Site> =
                    pool.iter().copied().filter(|s| *s != x).collect();
                set.push(*self.rng.pick(&others));
            }
            set.sort();
            cylinders.push(set);
        }
        EventDesc { cylinders }
    }

    pub fn pick_site(&mut self, region: &Region) -> Site {
        *self.rng.pick(region.sites())
    }

    pub fn site_subset(&mut self, region: &Region, p: f64) -> Vec<Site> {
        self.rng.subset(region.sites(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_regions_respect_caps() {
        let mut g = InstanceGen::new(1, 0);
        for _ in 0..50 {
            let r = g.region(12);
            assert!(r.len() >= 2 && r.len() <= 12);
            let t = g.two_layer_region(16, 6);
            assert!(t.len() <= 16);
            assert!(t.layer_sites(1).len() <= 6);
            assert!(!t.layer_sites(1).is_empty());
        }
    }

    #[test]
    fn generated_events_are_monotone_and_serializable() {
        let mut g = InstanceGen::new(2, 0);
        let r = g.region(10);
        for i in 0..20 {
            let x = g.pick_site(&r);
            let desc = g.cylinder_event(r.sites(), Some(x), None);
            let event = desc.build(&format!("gen{i}"));
            assert!(event.is_monotone_exhaustive());
            let json = serde_json::to_string(&desc).unwrap();
            let back: EventDesc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.cylinders, desc.cylinders);
        }
    }

    #[test]
    fn gibbs_desc_round_trips_through_json() {
        let mut g = InstanceGen::new(3, 1);
        let desc = g.gibbs(10, 1.5, 1.5);
        let spec = desc.build();
        assert_eq!(spec.region().len(), desc.sites.len());
        let json = serde_json::to_string(&desc).unwrap();
        let back: GibbsDesc = serde_json::from_str(&json).unwrap();
        let spec2 = back.build();
        assert_eq!(spec.region().sites(), spec2.region().sites());
        assert_eq!(spec.field(), spec2.field());
    }
}
