//! Exact finite-volume Gibbs measures on a small patch: partition function,
//! configuration probabilities, expectations and conditioning.

use std::sync::Arc;
use tising::exact::{Boundary, GibbsEngine, MeasureSpec, SpinConfig};
use tising::lattice::{LatticeKind, Region, Site};

fn main() -> tising::Result<()> {
    let kind = LatticeKind::tri_times_z();
    // A 2 x 2 x 2 cube of the triangular-slab lattice: 8 sites.
    let sites: Vec<Site> = (0..2)
        .flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| Site::new(a, b, c))))
        .collect();
    let region: Arc<Region> = Region::from_sites(kind, sites)?;
    println!("region: {} sites, {} edges", region.len(), region.edge_count());

    let spec = MeasureSpec::homogeneous(region.clone(), 0.4, 0.1, Boundary::Free);
    let engine = GibbsEngine::build(spec)?;
    println!("log Z = {:.12}", engine.log_partition());

    let all_plus = SpinConfig::all_plus(region.clone());
    println!("P(all plus) = {:.6e}", engine.prob(&all_plus));
    let total: f64 = engine.probs().iter().sum();
    println!("sum over all {} configurations = {:.15}", engine.n_configs(), total);

    let x = Site::new(0, 0, 0);
    let y = Site::new(1, 1, 0);
    let m = engine.expectation(|c| c.get(x).unwrap() as f64);
    let corr = engine.expectation(|c| (c.get(x).unwrap() * c.get(y).unwrap()) as f64);
    println!("<sigma_x> = {m:.6}, <sigma_x sigma_y> = {corr:.6} (both >= 0 at h >= 0)");

    // Conditioning pins spins and re-expresses the rest exactly.
    let cond = engine.conditional(&[(y, 1)])?.engine();
    let p_cond = cond.event_prob(|c| c.get(x).unwrap() == 1);
    let p_ratio = engine.event_prob(|c| c.get(x).unwrap() == 1 && c.get(y).unwrap() == 1)
        / engine.event_prob(|c| c.get(y).unwrap() == 1);
    println!("P(sigma_x = + | sigma_y = +): conditional engine {p_cond:.12}, direct ratio {p_ratio:.12}");
    Ok(())
}
