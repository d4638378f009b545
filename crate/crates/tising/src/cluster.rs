//! Union-find cluster labeling of spin configurations.

use crate::exact::SpinConfig;
use crate::lattice::Region;
use serde::{Deserialize, Serialize};

/// Disjoint-set forest with path halving and union by size.
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}

/// Cluster census of one configuration: counts, largest sizes and spanning
/// flags per sign. Spanning is between the `x(1) = lo` and `x(1) = hi`
/// faces of the region's bounding range in the first coordinate.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ClusterStats {
    pub plus_clusters: usize,
    pub minus_clusters: usize,
    pub largest_plus: usize,
    pub largest_minus: usize,
    pub second_largest_plus: usize,
    pub plus_spanning: bool,
    pub minus_spanning: bool,
}

/// Label same-sign clusters with union-find under the region's adjacency.
pub fn cluster_stats(config: &SpinConfig) -> ClusterStats {
    let region: &Region = config.region();
    let n = region.len();
    let spins = config.spins();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for &j in region.neighbor_ids(i) {
            if (j as usize) > i && spins[i] == spins[j as usize] {
                uf.union(i as u32, j as u32);
            }
        }
    }

    let lo = region.sites().iter().map(|s| s.x()).min().unwrap();
    let hi = region.sites().iter().map(|s| s.x()).max().unwrap();

    // Per-root aggregates: size, touches-lo, touches-hi.
    let mut size = vec![0usize; n];
    let mut at_lo = vec![false; n];
    let mut at_hi = vec![false; n];
    let mut roots: Vec<u32> = Vec::new();
    for i in 0..n {
        let r = uf.find(i as u32) as usize;
        if size[r] == 0 {
            roots.push(r as u32);
        }
        size[r] += 1;
        let x = region.site(i).x();
        at_lo[r] |= x == lo;
        at_hi[r] |= x == hi;
    }

    let mut stats = ClusterStats::default();
    let mut plus_sizes: Vec<usize> = Vec::new();
    let mut minus_sizes: Vec<usize> = Vec::new();
    for &r in &roots {
        let ri = r as usize;
        let spanning = at_lo[ri] && at_hi[ri];
        if spins[ri] == 1 {
            plus_sizes.push(size[ri]);
            stats.plus_spanning |= spanning;
        } else {
            minus_sizes.push(size[ri]);
            stats.minus_spanning |= spanning;
        }
    }
    plus_sizes.sort_unstable_by(|a, b| b.cmp(a));
    minus_sizes.sort_unstable_by(|a, b| b.cmp(a));
    stats.plus_clusters = plus_sizes.len();
    stats.minus_clusters = minus_sizes.len();
    stats.largest_plus = plus_sizes.first().copied().unwrap_or(0);
    stats.second_largest_plus = plus_sizes.get(1).copied().unwrap_or(0);
    stats.largest_minus = minus_sizes.first().copied().unwrap_or(0);
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Box3, LatticeKind, Region, Site};
    use crate::rng::CounterRng;
    use std::collections::VecDeque;
    use std::sync::Arc;

    fn tz() -> LatticeKind {
        LatticeKind::tri_times_z()
    }

    fn patch(n: i32) -> Arc<Region> {
        let sites = Box3::at_origin(n)
            .sites(&tz())
            .into_iter()
            .filter(|s| s.z() == 0)
            .collect();
        Region::from_sites(tz(), sites).unwrap()
    }

    /// Independent BFS labeling oracle.
    fn bfs_labels(config: &SpinConfig) -> Vec<u32> {
        let region = config.region();
        let n = region.len();
        let spins = config.spins();
        let mut label = vec![u32::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in region.neighbor_ids(v) {
                    let wi = w as usize;
                    if label[wi] == u32::MAX && spins[wi] == spins[v] {
                        label[wi] = next;
                        queue.push_back(wi);
                    }
                }
            }
            next += 1;
        }
        label
    }

    #[test]
    fn all_plus_is_one_spanning_cluster() {
        let r = patch(3);
        let stats = cluster_stats(&SpinConfig::all_plus(r.clone()));
        assert_eq!(stats.plus_clusters, 1);
        assert_eq!(stats.largest_plus, r.len());
        assert!(stats.plus_spanning);
        assert_eq!(stats.minus_clusters, 0);
        assert!(!stats.minus_spanning);
    }

    #[test]
    fn cluster_sizes_bounded_by_sign_counts() {
        let r = patch(4);
        let rng = CounterRng::new(5, 0);
        for t in 0..50u64 {
            let mut c = SpinConfig::all_minus(r.clone());
            for i in 0..r.len() {
                if rng.bernoulli(t, i as u64, 0.5) {
                    c.spins_mut()[i] = 1;
                }
            }
            let s = cluster_stats(&c);
            let plus = c.spins().iter().filter(|&&v| v == 1).count();
            assert!(s.largest_plus <= plus);
            assert!(s.largest_minus <= r.len() - plus);
            assert!(s.second_largest_plus <= s.largest_plus);
        }
    }

    #[test]
    fn alternating_columns_do_not_span() {
        // Stripes of width 1 along x(2): columns alternate sign along x(1),
        // and with the +(1,1,0) diagonal a sign never hops two columns, so
        // neither sign spans in the x(1) direction.
        let sites: Vec<Site> = (0..6)
            .flat_map(|a| (0..6).map(move |b| Site::new(a, b, 0)))
            .collect();
        let r = Region::from_sites(tz(), sites).unwrap();
        let mut c = SpinConfig::all_minus(r.clone());
        for i in 0..r.len() {
            if r.site(i).x() % 2 == 0 {
                c.spins_mut()[i] = 1;
            }
        }
        let s = cluster_stats(&c);
        assert!(!s.plus_spanning);
        assert!(!s.minus_spanning);
    }

    #[test]
    fn union_find_matches_bfs_oracle() {
        let r = patch(8); // 17 x 17 patch
        let rng = CounterRng::new(31, 7);
        for t in 0..200u64 {
            let mut c = SpinConfig::all_minus(r.clone());
            for i in 0..r.len() {
                if rng.bernoulli(t, i as u64, 0.5) {
                    c.spins_mut()[i] = 1;
                }
            }
            let labels = bfs_labels(&c);
            let mut uf = UnionFind::new(r.len());
            for i in 0..r.len() {
                for &j in r.neighbor_ids(i) {
                    if (j as usize) > i && c.spins()[i] == c.spins()[j as usize] {
                        uf.union(i as u32, j as u32);
                    }
                }
            }
            // Same partition: two sites share a BFS label iff they share a
            // union-find root. Compare via canonical per-site fingerprints.
            let mut first_bfs = std::collections::HashMap::new();
            let mut first_uf = std::collections::HashMap::new();
            for i in 0..r.len() {
                let b = *first_bfs.entry(labels[i]).or_insert(i);
                let u = *first_uf.entry(uf.find(i as u32)).or_insert(i);
                assert_eq!(b, u, "partition mismatch at site {i}");
            }
        }
    }
}
