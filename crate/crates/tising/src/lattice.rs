//! Finite regions of triangular-type 3D lattices.
//!
//! The default graph is the Cartesian product of the two-dimensional
//! triangular lattice (square lattice plus the +(1,1) diagonal) with the
//! integer line: vertex set Z^3, degree 8. Variants restrict the third
//! coordinate (`TriTimesK2`, `ZStar2D`) or add more diagonals (`Tri3D`).
//!
//! A [`Region`] is a finite induced subgraph: an ordered set of sites with a
//! dense id per site. Site ids are assigned in lexicographic coordinate
//! order so that every downstream table (configuration ids, CSV rows) is
//! bit-reproducible.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Integer displacement between two sites.
pub type Offset = [i32; 3];

/// A lattice point in Z^3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site(pub [i32; 3]);

impl Site {
    pub fn new(a: i32, b: i32, c: i32) -> Self {
        Site([a, b, c])
    }

    pub fn x(&self) -> i32 {
        self.0[0]
    }

    pub fn y(&self) -> i32 {
        self.0[1]
    }

    pub fn z(&self) -> i32 {
        self.0[2]
    }

    pub fn offset(&self, o: Offset) -> Site {
        Site([self.0[0] + o[0], self.0[1] + o[1], self.0[2] + o[2]])
    }

    /// Chebyshev (max-coordinate) distance, the metric of box balls.
    pub fn linf_dist(&self, other: &Site) -> i32 {
        (0..3)
            .map(|i| (self.0[i] - other.0[i]).abs())
            .max()
            .unwrap()
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Which infinite lattice a region is cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KindName {
    /// Triangular lattice times the integer line; vertex set Z^3, degree 8.
    TriTimesZ,
    /// Triangular lattice times a single edge; third coordinate in {0,1}.
    TriTimesK2,
    /// Three-dimensional triangular lattice: Z^3 nearest neighbors plus the
    /// (1,1,0), (0,1,1), (1,0,1) and (1,1,1) diagonals; degree 14. The
    /// offset set is a configuration parameter (see `LatticeKind::tri3d_with_offsets`).
    Tri3D,
    /// Square lattice plus both diagonals, third coordinate fixed to 0.
    ZStar2D,
}

/// Offsets in a fixed canonical order: +x,-x,+y,-y,+diag,-diag,+z,-z.
/// The +(1,1,0) diagonal is the one that makes the coordinate swap
/// (a,b,c) -> (b,a,c) a graph automorphism, which the crossing duality
/// check relies on.
const TRI_Z_OFFSETS: [Offset; 8] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [1, 1, 0],
    [-1, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

const Z_STAR_OFFSETS: [Offset; 8] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [1, 1, 0],
    [-1, -1, 0],
    [1, -1, 0],
    [-1, 1, 0],
];

const TRI3D_OFFSETS: [Offset; 14] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
    [1, 1, 0],
    [-1, -1, 0],
    [0, 1, 1],
    [0, -1, -1],
    [1, 0, 1],
    [-1, 0, -1],
    [1, 1, 1],
    [-1, -1, -1],
];

/// An infinite lattice: a vertex predicate plus a symmetric offset set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeKind {
    name: KindName,
    offsets: Vec<Offset>,
}

impl LatticeKind {
    pub fn tri_times_z() -> Self {
        LatticeKind {
            name: KindName::TriTimesZ,
            offsets: TRI_Z_OFFSETS.to_vec(),
        }
    }

    pub fn tri_times_k2() -> Self {
        LatticeKind {
            name: KindName::TriTimesK2,
            offsets: TRI_Z_OFFSETS.to_vec(),
        }
    }

    pub fn z_star_2d() -> Self {
        LatticeKind {
            name: KindName::ZStar2D,
            offsets: Z_STAR_OFFSETS.to_vec(),
        }
    }

    pub fn tri3d() -> Self {
        LatticeKind {
            name: KindName::Tri3D,
            offsets: TRI3D_OFFSETS.to_vec(),
        }
    }

    /// Tri3D with a custom offset set. The set must be symmetric under
    /// negation.
    pub fn tri3d_with_offsets(offsets: Vec<Offset>) -> Result<Self> {
        for o in &offsets {
            let neg = [-o[0], -o[1], -o[2]];
            if !offsets.contains(&neg) {
                return Err(Error::AsymmetricOffsets);
            }
        }
        Ok(LatticeKind {
            name: KindName::Tri3D,
            offsets,
        })
    }

    pub fn name(&self) -> KindName {
        self.name
    }

    pub fn offsets(&self) -> &[Offset] {
        &self.offsets
    }

    pub fn degree(&self) -> usize {
        self.offsets.len()
    }

    /// Whether `s` is a vertex of the infinite lattice.
    pub fn is_vertex(&self, s: Site) -> bool {
        match self.name {
            KindName::TriTimesZ | KindName::Tri3D => true,
            KindName::TriTimesK2 => s.z() == 0 || s.z() == 1,
            KindName::ZStar2D => s.z() == 0,
        }
    }

    pub fn are_adjacent(&self, a: Site, b: Site) -> bool {
        if !self.is_vertex(a) || !self.is_vertex(b) {
            return false;
        }
        let d = [b.x() - a.x(), b.y() - a.y(), b.z() - a.z()];
        self.offsets.contains(&d)
    }
}

/// Axis-aligned box: `{y : |y(i) - x(i)| <= n}` around a center site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Box3 {
    pub center: Site,
    pub radius: i32,
}

impl Box3 {
    pub fn new(center: Site, radius: i32) -> Self {
        assert!(radius >= 0, "box radius must be nonnegative");
        Box3 { center, radius }
    }

    pub fn at_origin(radius: i32) -> Self {
        Box3::new(Site::new(0, 0, 0), radius)
    }

    pub fn contains(&self, s: Site) -> bool {
        s.linf_dist(&self.center) <= self.radius
    }

    /// All lattice vertices inside the box, in lexicographic order.
    pub fn sites(&self, kind: &LatticeKind) -> Vec<Site> {
        let n = self.radius;
        let c = self.center;
        let mut out = Vec::new();
        for a in -n..=n {
            for b in -n..=n {
                for d in -n..=n {
                    let s = Site::new(c.x() + a, c.y() + b, c.z() + d);
                    if kind.is_vertex(s) {
                        out.push(s);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// A finite induced subgraph of a lattice, with a dense site <-> id bijection.
#[derive(Clone, Debug)]
pub struct Region {
    kind: LatticeKind,
    sites: Vec<Site>,
    index: HashMap<Site, u32>,
    // CSR adjacency in offset-list order per site.
    adj_start: Vec<u32>,
    adj: Vec<u32>,
}

impl Region {
    /// Region cut from a box.
    pub fn build(kind: LatticeKind, bx: Box3) -> Result<Arc<Region>> {
        let sites = bx.sites(&kind);
        Region::from_sites(kind, sites)
    }

    /// Region from an explicit site list. Sites are sorted lexicographically
    /// and deduplicated; ids follow the sorted order.
    pub fn from_sites(kind: LatticeKind, mut sites: Vec<Site>) -> Result<Arc<Region>> {
        sites.sort();
        sites.dedup();
        if sites.is_empty() {
            return Err(Error::EmptyRegion);
        }
        for s in &sites {
            if !kind.is_vertex(*s) {
                return Err(Error::SiteNotInRegion(*s));
            }
        }
        let index: HashMap<Site, u32> = sites
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();
        let mut adj_start = Vec::with_capacity(sites.len() + 1);
        let mut adj = Vec::new();
        adj_start.push(0);
        for s in &sites {
            for o in kind.offsets() {
                let t = s.offset(*o);
                if let Some(&j) = index.get(&t) {
                    adj.push(j);
                }
            }
            adj_start.push(adj.len() as u32);
        }
        Ok(Arc::new(Region {
            kind,
            sites,
            index,
            adj_start,
            adj,
        }))
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, id: usize) -> Site {
        self.sites[id]
    }

    pub fn id_of(&self, s: Site) -> Option<usize> {
        self.index.get(&s).map(|&i| i as usize)
    }

    pub fn contains(&self, s: Site) -> bool {
        self.index.contains_key(&s)
    }

    /// Neighbors of `site` inside the region, in offset-list order.
    pub fn neighbors(&self, site: Site) -> Result<Vec<Site>> {
        let id = self.id_of(site).ok_or(Error::SiteNotInRegion(site))?;
        Ok(self.neighbor_ids(id).iter().map(|&j| self.sites[j as usize]).collect())
    }

    pub fn neighbor_ids(&self, id: usize) -> &[u32] {
        let lo = self.adj_start[id] as usize;
        let hi = self.adj_start[id + 1] as usize;
        &self.adj[lo..hi]
    }

    /// Lattice neighbors of a region site that fall outside the region
    /// (but are vertices of the infinite lattice).
    pub fn outside_neighbors(&self, site: Site) -> Vec<Site> {
        self.kind
            .offsets()
            .iter()
            .map(|o| site.offset(*o))
            .filter(|t| self.kind.is_vertex(*t) && !self.contains(*t))
            .collect()
    }

    /// Inner vertex boundary: sites with at least one lattice neighbor
    /// outside the region.
    pub fn vertex_boundary(&self) -> Vec<Site> {
        self.sites
            .iter()
            .copied()
            .filter(|s| !self.outside_neighbors(*s).is_empty())
            .collect()
    }

    /// Sites with third coordinate equal to `k`.
    pub fn layer_sites(&self, k: i32) -> Vec<Site> {
        self.sites.iter().copied().filter(|s| s.z() == k).collect()
    }

    /// Sites with third coordinate in `[lo, hi]` (the slab intersection).
    pub fn layer_range_sites(&self, lo: i32, hi: i32) -> Vec<Site> {
        self.sites
            .iter()
            .copied()
            .filter(|s| s.z() >= lo && s.z() <= hi)
            .collect()
    }

    /// Total number of edges of the induced subgraph.
    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }
}

/// `|∂B_m|`: size of the inner vertex boundary of the full-lattice box of
/// radius `m`, a function of `m` and the lattice kind only. This is the
/// lattice-independent prefactor used by the field-perturbation sandwich.
pub fn full_ball_boundary_size(kind: &LatticeKind, m: i32) -> usize {
    let region = Region::build(kind.clone(), Box3::at_origin(m)).expect("box region");
    region.vertex_boundary().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tz() -> LatticeKind {
        LatticeKind::tri_times_z()
    }

    #[test]
    fn offsets_symmetric_under_negation() {
        for kind in [
            LatticeKind::tri_times_z(),
            LatticeKind::tri_times_k2(),
            LatticeKind::tri3d(),
            LatticeKind::z_star_2d(),
        ] {
            for o in kind.offsets() {
                let neg = [-o[0], -o[1], -o[2]];
                assert!(kind.offsets().contains(&neg), "missing -{o:?}");
            }
        }
        assert_eq!(tz().degree(), 8);
        assert_eq!(LatticeKind::z_star_2d().degree(), 8);
        assert_eq!(LatticeKind::tri3d().degree(), 14);
    }

    #[test]
    fn box_site_counts() {
        let b0 = Region::build(tz(), Box3::at_origin(0)).unwrap();
        assert_eq!(b0.len(), 1);
        let b1 = Region::build(tz(), Box3::at_origin(1)).unwrap();
        assert_eq!(b1.len(), 27);
        let k2 = Region::build(LatticeKind::tri_times_k2(), Box3::at_origin(1)).unwrap();
        assert_eq!(k2.len(), 18, "3*3*2 points with z in {{0,1}}");
        let zs = Region::build(LatticeKind::z_star_2d(), Box3::at_origin(1)).unwrap();
        assert_eq!(zs.len(), 9);
    }

    #[test]
    fn interior_degree_is_eight() {
        let b2 = Region::build(tz(), Box3::at_origin(2)).unwrap();
        assert_eq!(b2.neighbors(Site::new(0, 0, 0)).unwrap().len(), 8);
    }

    /// Oracle: filter the offset list through box membership by hand.
    fn offset_filter_oracle(kind: &LatticeKind, bx: Box3, s: Site) -> Vec<Site> {
        kind.offsets()
            .iter()
            .map(|o| s.offset(*o))
            .filter(|t| bx.contains(*t) && kind.is_vertex(*t))
            .collect()
    }

    #[test]
    fn corner_neighbors_match_offset_filter_oracle() {
        let bx = Box3::at_origin(1);
        let b1 = Region::build(tz(), bx).unwrap();
        let corner = Site::new(1, 1, 1);
        let got = b1.neighbors(corner).unwrap();
        let expect = offset_filter_oracle(&tz(), bx, corner);
        assert_eq!(got, expect);
        // Frozen from the oracle: -x, -y, -diag and -z all stay inside the
        // box; note (1,1,1)-(1,1,0) = (0,0,1) is still in B_1.
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(
            sorted,
            vec![
                Site::new(0, 0, 1),
                Site::new(0, 1, 1),
                Site::new(1, 0, 1),
                Site::new(1, 1, 0),
            ]
        );
    }

    #[test]
    fn single_site_region_has_no_neighbors() {
        let r = Region::build(tz(), Box3::at_origin(0)).unwrap();
        assert!(r.neighbors(Site::new(0, 0, 0)).unwrap().is_empty());
        assert_eq!(r.vertex_boundary(), vec![Site::new(0, 0, 0)]);
    }

    #[test]
    fn neighbors_outside_region_is_error() {
        let r = Region::build(tz(), Box3::at_origin(1)).unwrap();
        assert!(matches!(
            r.neighbors(Site::new(5, 5, 5)),
            Err(Error::SiteNotInRegion(_))
        ));
    }

    #[test]
    fn b1_boundary_is_everything_but_center() {
        // Brute force over 27 sites and 8 offsets.
        let b1 = Region::build(tz(), Box3::at_origin(1)).unwrap();
        let boundary = b1.vertex_boundary();
        assert_eq!(boundary.len(), 26);
        assert!(!boundary.contains(&Site::new(0, 0, 0)));
    }

    #[test]
    fn layer_site_counts() {
        let b1 = Region::build(tz(), Box3::at_origin(1)).unwrap();
        assert_eq!(b1.layer_sites(1).len(), 9);
        assert!(b1.layer_sites(5).is_empty());
        let b2 = Region::build(tz(), Box3::at_origin(2)).unwrap();
        assert_eq!(b2.layer_range_sites(0, 1).len(), 50, "5*5*2 count");
    }

    #[test]
    fn tri_k2_equals_tri_z_restricted() {
        let k2 = Region::build(LatticeKind::tri_times_k2(), Box3::at_origin(2)).unwrap();
        let tzr = Region::build(tz(), Box3::at_origin(2)).unwrap();
        let restricted: Vec<Site> = tzr
            .sites()
            .iter()
            .copied()
            .filter(|s| s.z() == 0 || s.z() == 1)
            .collect();
        assert_eq!(k2.sites(), &restricted[..]);
        for s in k2.sites() {
            let mut a = k2.neighbors(*s).unwrap();
            let mut b: Vec<Site> = tzr
                .neighbors(*s)
                .unwrap()
                .into_iter()
                .filter(|t| t.z() == 0 || t.z() == 1)
                .collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn boundary_sites_in_region_and_interior_full_degree() {
        let r = Region::build(tz(), Box3::at_origin(2)).unwrap();
        let boundary = r.vertex_boundary();
        for s in &boundary {
            assert!(r.contains(*s));
        }
        for s in r.sites() {
            if !boundary.contains(s) {
                assert_eq!(r.neighbors(*s).unwrap().len(), tz().degree());
            }
        }
    }

    #[test]
    fn full_ball_boundary_sizes() {
        assert_eq!(full_ball_boundary_size(&tz(), 1), 26);
        assert_eq!(full_ball_boundary_size(&tz(), 2), 125 - 27);
    }

    #[test]
    fn swap_reflection_is_automorphism() {
        // (a,b,c) -> (b,a,c) preserves the offset set of T x Z, so it is a
        // graph automorphism of every box.
        let r = Region::build(tz(), Box3::at_origin(2)).unwrap();
        let swap = |s: Site| Site::new(s.y(), s.x(), s.z());
        for s in r.sites() {
            let mut img: Vec<Site> = r.neighbors(*s).unwrap().into_iter().map(swap).collect();
            let mut nbr_of_img = r.neighbors(swap(*s)).unwrap();
            img.sort();
            nbr_of_img.sort();
            assert_eq!(img, nbr_of_img);
        }
    }

    proptest! {
        #[test]
        fn adjacency_is_symmetric(seed in 0u64..200) {
            let n = 1 + (seed % 2) as i32;
            let r = Region::build(tz(), Box3::at_origin(n)).unwrap();
            for s in r.sites() {
                for t in r.neighbors(*s).unwrap() {
                    prop_assert!(r.neighbors(t).unwrap().contains(s));
                }
            }
        }

        #[test]
        fn translation_invariance(a in -3i32..3, b in -3i32..3, c in -3i32..3) {
            let x = Site::new(a, b, c);
            let n = 2;
            let at_zero = Region::build(tz(), Box3::at_origin(n)).unwrap();
            let at_x = Region::build(tz(), Box3::new(x, n)).unwrap();
            for s in at_zero.sites() {
                let shifted = Site::new(s.x() + a, s.y() + b, s.z() + c);
                let mut n0: Vec<Site> = at_zero
                    .neighbors(*s)
                    .unwrap()
                    .iter()
                    .map(|t| Site::new(t.x() + a, t.y() + b, t.z() + c))
                    .collect();
                let mut nx = at_x.neighbors(shifted).unwrap();
                n0.sort();
                nx.sort();
                prop_assert_eq!(n0, nx);
            }
        }
    }
}
