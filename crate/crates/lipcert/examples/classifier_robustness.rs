//! Certified classifier robustness: a radius around an input within
//! which the predicted class provably cannot change.

use lipcert::cli::{EXP1_CENTER, EXP1_NETWORK_JSON};
use lipcert::lipschitz::{certified_radius, possible_classes};
use lipcert::maximize::MaxParams;
use lipcert::network::{load_network, InputRegion};

fn main() {
    // the bundled two-output network doubles as a tiny classifier
    let net = load_network(EXP1_NETWORK_JSON.as_bytes()).unwrap();

    let params = MaxParams {
        max_iterations: 12,
        ..MaxParams::default()
    };

    // the reference center sits on the decision boundary: radius 0
    let rep = certified_radius(&net, &EXP1_CENTER, 0.5, &params).unwrap();
    println!("on the decision boundary:");
    println!("  input:            {:?}", rep.input);
    println!("  predicted class:  {}", rep.predicted_class);
    println!("  certified radius: {:?}", rep.certified_radius);

    // a point away from the boundary earns a positive certified ball
    let x = [EXP1_CENTER[0] - 0.5, EXP1_CENTER[1]];
    let rep = certified_radius(&net, &x, 0.5, &params).unwrap();
    println!("\naway from the boundary:");
    println!("  input:            {:?}", rep.input);
    println!("  predicted class:  {}", rep.predicted_class);
    for c in &rep.competitors {
        println!(
            "  vs class {}: margin {}  lipschitz {}  radius {:?}",
            c.class, c.margin, c.lipschitz, c.radius
        );
    }
    println!("  certified radius: {:?}", rep.certified_radius);
    println!(
        "  classes reachable in the search ball: {:?}",
        rep.possible_classes
    );

    // the certificate is much stronger than a plain interval forward
    // pass, which only separates the two outputs on far smaller balls
    for r in [rep.certified_radius, 0.02] {
        let ball = InputRegion::ball(x.to_vec(), r);
        let classes = possible_classes(&net, &ball.to_box()).unwrap();
        println!("  forward-pass class enclosure at radius {r}: {classes:?}");
    }
}
