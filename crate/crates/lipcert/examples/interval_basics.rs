//! Outward-rounded interval arithmetic: enclosures survive rounding,
//! and the dependency problem shows why enclosures can be loose.

use lipcert::interval::Interval;

fn main() {
    // 0.1 is not representable in binary64; interval endpoints round
    // outward so the true real result always stays inside
    let tenth = Interval::new(0.1, 0.1);
    let mut sum = Interval::ZERO;
    for _ in 0..10 {
        sum = sum.add(&tenth);
    }
    println!("ten times [0.1, 0.1]   = {sum}");
    println!("contains exactly 1.0?    {}", sum.contains(1.0));
    println!("width                  = {:e}", sum.width());

    // the dependency problem: x - x over x in [0, 1] is really 0, but
    // interval arithmetic forgets the two operands are the same variable
    let x = Interval::new(0.0, 1.0);
    println!("\n[0,1] - [0,1]          = {}", x.sub(&x));

    // multiplication takes the min/max over the four endpoint products
    let a = Interval::new(-1.0, 2.0);
    let b = Interval::new(-3.0, 1.0);
    println!("[-1,2] * [-3,1]        = {}", a.mul(&b));
}
