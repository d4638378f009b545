//! The triangular crossing duality: on the z = 0 patch of B_n exactly one
//! of {left-right + crossing, top-bottom - crossing} holds, so at h = 0 the
//! crossing probability is exactly 1/2 for every beta.

use tising::events::{box_layer_sites, lr_crossing, tb_minus_crossing_complement_check};
use tising::exact::{Boundary, GibbsEngine, MeasureSpec};
use tising::lattice::{LatticeKind, Region};

fn main() -> tising::Result<()> {
    let kind = LatticeKind::tri_times_z();

    for n in [1, 2, 3] {
        let ok = tb_minus_crossing_complement_check(&kind, n, 42);
        println!(
            "duality partition on B_{n} ∩ {{z=0}}: {} ({})",
            if ok { "holds" } else { "VIOLATED" },
            if n <= 1 { "exhaustive" } else { "100000 sampled configurations" }
        );
    }

    let region = Region::from_sites(kind.clone(), box_layer_sites(&kind, 1, &[0]))?;
    let event = lr_crossing(&kind, 1, &[0]);
    for beta in [0.0, 0.2, 0.5] {
        let engine = GibbsEngine::build(MeasureSpec::homogeneous(
            region.clone(),
            beta,
            0.0,
            Boundary::Free,
        ))?;
        let p = engine.event_prob(|c| event.eval(c));
        println!("beta = {beta:.1}: exact P(LR + crossing in B_1 ∩ S_0) = {p:.15}");
    }
    Ok(())
}
