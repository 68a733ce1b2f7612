//! A certified local Lipschitz constant: the bundled reference run,
//! refined until the enclosure collapses to a point.

use lipcert::cli::{EXP1_CENTER, EXP1_NETWORK_JSON, EXP1_RADIUS};
use lipcert::lipschitz::lipschitz_enclosure;
use lipcert::maximize::MaxParams;
use lipcert::network::{load_network, InputRegion};

fn main() {
    let net = load_network(EXP1_NETWORK_JSON.as_bytes()).unwrap();
    let region = InputRegion::ball(EXP1_CENTER.to_vec(), EXP1_RADIUS);

    let rep = lipschitz_enclosure(&net, &region, 0, &MaxParams::default()).unwrap();

    println!("network digest: {}", rep.network_sha256);
    println!("certified local Lipschitz constant of output 0:");
    println!("  {}", rep.result.value);
    println!(
        "  ({:?} after {} iterations, {} boxes in the maximum set, {} ms)",
        rep.result.stop_reason,
        rep.result.iterations,
        rep.result.boxes.len(),
        rep.wall_ms
    );

    println!("\nrefinement trace:");
    for row in &rep.result.trace {
        println!(
            "  iter {:>2}  boxes {:>2}  value {}",
            row.iter, row.boxes_retained, row.value
        );
    }
}
