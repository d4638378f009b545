//! Tabulate the derivative ratio over a (p,h) grid, take its supremum as
//! Gamma, and walk the slanted path with slope -1/Gamma checking that the
//! hybrid measure never decreases along it.

use tising::events::availability_restriction;
use tising::events::lr_crossing;
use tising::exact::{Boundary, MeasureSpec};
use tising::lattice::{LatticeKind, Region, Site};
use tising::verify::check_path_monotonicity_on;

fn main() -> tising::Result<()> {
    let kind = LatticeKind::tri_times_z();
    // A 12-site two-layer instance keeps this example fast; the acceptance
    // suite runs the full 20-site crossing slab.
    let mut sites: Vec<Site> = (-2..=2)
        .flat_map(|a| (-1..=1).map(move |b| Site::new(a, b, 0)))
        .collect();
    sites.extend((-1..=1).map(|a| Site::new(a, 0, 1)));
    let region = Region::from_sites(kind.clone(), sites)?;
    let event = availability_restriction(&lr_crossing(&kind, 1, &[0, 1]), region.sites());
    let base = MeasureSpec::homogeneous(region, 0.1, 0.0, Boundary::Free);

    let result = check_path_monotonicity_on(
        &base,
        &event,
        0.5,
        0.0,
        (0.2, 0.8),
        (-0.5, 0.5),
        (7, 11),
        25,
        9,
    )?;
    println!(
        "grid: {} points, {} flagged; Gamma = {:.6}",
        result.grid.rows.len(),
        result.grid.flagged,
        result.gamma
    );
    println!(
        "path: theta = {:.6} rad, delta = {:.6}",
        result.theta, result.delta
    );
    for (k, ((p, h), mu)) in result.points.iter().zip(&result.mus).enumerate() {
        if k % 6 == 0 || k == result.points.len() - 1 {
            println!("  t{k:>2}: (p, h) = ({p:.4}, {h:+.4})  mu = {mu:.10}");
        }
    }
    println!(
        "smallest step increment of mu along the path: {:+.3e}",
        result.worst_step
    );
    Ok(())
}
