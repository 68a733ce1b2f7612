//! Guaranteed output enclosures of a network over a box of inputs,
//! using the bundled two-neuron reference network.

use lipcert::cli::{EXP1_CENTER, EXP1_NETWORK_JSON, EXP1_RADIUS};
use lipcert::network::{load_network, InputRegion};

fn main() {
    let net = load_network(EXP1_NETWORK_JSON.as_bytes()).unwrap();
    println!(
        "network: {} inputs, {} outputs, {} layers",
        net.input_dim(),
        net.output_count(),
        net.layers().len()
    );

    // point evaluation in ordinary round-to-nearest arithmetic
    let outputs = net.eval_real(&EXP1_CENTER).unwrap();
    println!("\nat the center point:");
    for (i, v) in outputs.iter().enumerate() {
        println!("  output {i}: {v:?}");
    }

    // interval evaluation over the whole ball encloses every reachable
    // output, floating-point rounding included
    let region = InputRegion::ball(EXP1_CENTER.to_vec(), EXP1_RADIUS);
    let enclosures = net.eval_interval(&region.to_box()).unwrap();
    println!("\nover the radius-{EXP1_RADIUS:e} ball:");
    for (i, o) in enclosures.iter().enumerate() {
        println!("  output {i}: {o}");
    }
}
