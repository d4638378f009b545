//! The pivotality calculus: sigma modifications, "occurs on", pivotal and
//! +pivotal events, and the two exhaustively checkable identities that tie
//! them together.

use tising::events::{
    availability_restriction, is_pivotal, is_plus_pivotal, lr_crossing, modify, occurs_on,
};
use tising::exact::SpinConfig;
use tising::lattice::{LatticeKind, Region, Site};

fn main() -> tising::Result<()> {
    let kind = LatticeKind::tri_times_z();
    let event = lr_crossing(&kind, 1, &[0]);
    let region = Region::from_sites(kind, event.support().to_vec())?;

    let sigma = {
        let mut c = SpinConfig::all_minus(region.clone());
        // A diagonal chain of + spins crossing left to right.
        for s in [Site::new(-1, -1, 0), Site::new(0, 0, 0), Site::new(1, 1, 0)] {
            c.set(s, 1)?;
        }
        c
    };
    println!("crossing holds: {}", event.eval(&sigma));

    let mid = Site::new(0, 0, 0);
    println!("mid site pivotal: {}", is_pivotal(&[mid], &event, &sigma));
    println!("mid site +pivotal: {}", is_plus_pivotal(mid, &event, &sigma));

    let wiped = modify(&sigma, &[mid], -1)?;
    println!("after forcing mid to -1, crossing holds: {}", event.eval(&wiped));

    // Pivotal-complement identity, checked over every configuration.
    let delta = vec![mid, Site::new(1, 0, 0)];
    let complement: Vec<Site> = region
        .sites()
        .iter()
        .copied()
        .filter(|s| !delta.contains(s))
        .collect();
    let mut mismatches = 0;
    for id in 0..(1u64 << region.len()) {
        let c = SpinConfig::from_id(region.clone(), id);
        let lhs = event.eval(&c) && !is_pivotal(&delta, &event, &c);
        let rhs = occurs_on(&event, &complement, &c);
        mismatches += (lhs != rhs) as u64;
    }
    println!(
        "pivotal-complement identity over {} configurations: {} mismatches",
        1u64 << region.len(),
        mismatches
    );

    // "A occurs on D" is itself an increasing event.
    let avail: Vec<Site> = region.sites().iter().copied().filter(|s| s.y() <= 0).collect();
    let restricted = availability_restriction(&event, &avail);
    println!(
        "availability restriction monotone: {}",
        restricted.is_monotone_exhaustive()
    );
    Ok(())
}
