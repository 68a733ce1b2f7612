//! Branch-and-bound maximization of an interval objective: enclosing
//! both the maximum value and the set of maximizing points.

use lipcert::interval::{HyperBox, Interval};
use lipcert::maximize::{maximize, MaxParams};

fn main() {
    // natural interval extension of x -> 1 - |x - 0.3|, maximized at 0.3
    let f = |b: &HyperBox| -> Result<Interval, String> {
        let shifted = b.coord(0).sub(&Interval::point(0.3));
        Ok(shifted.abs().neg().add(&Interval::ONE))
    };

    let domain = [HyperBox::new(vec![Interval::new(-1.0, 1.0)])];
    let params = MaxParams {
        max_iterations: 30,
        max_boxes: 10_000,
        target_width: 1e-9,
    };
    let r = maximize(f, &domain, &params).unwrap();

    println!("maximizing 1 - |x - 0.3| over [-1, 1]");
    println!("value enclosure: {}", r.value);
    println!("stop reason:     {:?} after {} iterations", r.stop_reason, r.iterations);
    let lo = r.boxes.iter().map(|b| b.coord(0).lo()).fold(f64::INFINITY, f64::min);
    let hi = r.boxes.iter().map(|b| b.coord(0).hi()).fold(f64::NEG_INFINITY, f64::max);
    println!("maximum set within: [{lo}, {hi}] ({} boxes)", r.boxes.len());

    println!("\nrefinement trace (each row nested in the previous):");
    for row in r.trace.iter().take(10) {
        println!(
            "  iter {:>2}  boxes {:>3}  value {}",
            row.iter, row.boxes_retained, row.value
        );
    }
}
