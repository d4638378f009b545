//! The minimal ring-field boost: how much extra field on the Chebyshev
//! shell of radius m around x makes the unconditioned measure dominate the
//! sigma_x = +1 conditioned one on a distant increasing event.

use tising::exact::{Boundary, MeasureSpec};
use tising::lattice::{LatticeKind, Region, Site};
use tising::verify::min_field_boost;
use tising::events::IncreasingEvent;

fn main() -> tising::Result<()> {
    let kind = LatticeKind::tri_times_z();
    // Strip [0,6) x [-1,1] x {0}; x sits at the left end.
    let sites: Vec<Site> = (0..6)
        .flat_map(|a| (-1..=1).map(move |b| Site::new(a, b, 0)))
        .collect();
    let region = Region::from_sites(kind, sites)?;
    let x = Site::new(0, 0, 0);
    // Increasing event far from x: all-plus on a right-end pair.
    let event = IncreasingEvent::cylinder_union(
        "right pair",
        vec![vec![Site::new(4, 0, 0), Site::new(5, 0, 0)], vec![Site::new(5, 1, 0)]],
    );

    for m in [1, 2] {
        let base = MeasureSpec::homogeneous(region.clone(), 0.3, 0.0, Boundary::Free);
        let result = min_field_boost(&base, x, m, &event)?;
        println!(
            "m = {m}: t* = {:.8}  (target {:.8}, achieved {:.8}, monotone trace: {})",
            result.t_star, result.target, result.achieved, result.monotone_in_t
        );
    }

    // Independence: conditioning has no effect, so no boost is needed.
    let base = MeasureSpec::homogeneous(region.clone(), 0.0, 0.2, Boundary::Free);
    let result = min_field_boost(&base, x, 1, &event)?;
    println!("beta = 0: t* = {} (conditioning is invisible)", result.t_star);
    Ok(())
}
