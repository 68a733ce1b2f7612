//! Correctly rounded directed arithmetic on binary64.
//!
//! Every operation first computes the round-to-nearest result and then
//! decides, from the error-free residual, whether the exact value lies
//! above or below it. The returned endpoint is the correctly rounded
//! value in the requested direction, with no rounding-mode switching.

/// Residual of `s = fl(a + b)` via Knuth's branch-free TwoSum.
/// Exact for all finite inputs: `a + b = s + err` as reals.
#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bv = s - a;
    let av = s - bv;
    (a - av) + (b - bv)
}

/// Residual of `p = fl(a * b)`, exact via fused multiply-add.
#[inline]
fn two_prod_err(a: f64, b: f64, p: f64) -> f64 {
    a.mul_add(b, -p)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_finite() && two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else if s == f64::INFINITY {
        f64::MAX
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_finite() && two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else if s == f64::NEG_INFINITY {
        f64::MIN
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_finite() && two_prod_err(a, b, p) < 0.0 {
        p.next_down()
    } else if p == f64::INFINITY {
        f64::MAX
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_finite() && two_prod_err(a, b, p) > 0.0 {
        p.next_up()
    } else if p == f64::NEG_INFINITY {
        f64::MIN
    } else {
        p
    }
}

/// Division rounded toward -inf. Only used where a conservative
/// (smaller) quotient is the safe direction, e.g. certified radii.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    // residual of the division: a - q*b, exact via fma
    let r = q.mul_add(-b, a);
    if (b > 0.0 && r < 0.0) || (b < 0.0 && r > 0.0) {
        q.next_down()
    } else {
        q
    }
}
