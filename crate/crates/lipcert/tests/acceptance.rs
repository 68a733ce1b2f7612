//! Acceptance suite: one test per shipping criterion. Each test prints
//! a single `criterion N (...): pass` line when it succeeds (visible
//! with `cargo test --test acceptance -- --nocapture`).

use lipcert::cli::{check_exp1_trace, repro_exp1};
use lipcert::gradient::{activation_grad_interval, interval_jacobian};
use lipcert::interval::{HyperBox, Interval};
use lipcert::lipschitz::lipschitz_enclosure;
use lipcert::maximize::{maximize, MaxParams, TraceRow};
use lipcert::network::{ActivationKind, InputRegion, Layer, Network};
use num::{BigRational, FromPrimitive, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn pass(n: usize, name: &str) {
    println!("criterion {n} ({name}): pass");
}

fn assert_nested(trace: &[TraceRow]) {
    for w in trace.windows(2) {
        assert!(
            w[1].value.subset_of(&w[0].value),
            "trace not nested: iter {} {:?} not within iter {} {:?}",
            w[1].iter,
            w[1].value,
            w[0].iter,
            w[0].value
        );
    }
}

/// Random single-output network with the given hidden widths; weights
/// and biases uniform in `[-scale, scale]`.
fn random_net(
    rng: &mut ChaCha8Rng,
    input: usize,
    hidden: &[usize],
    act: ActivationKind,
    scale: f64,
) -> Network {
    let mut layers = Vec::new();
    let mut prev = input;
    for &w in hidden {
        layers.push(Layer {
            weights: (0..w)
                .map(|_| (0..prev).map(|_| rng.gen_range(-scale..=scale)).collect())
                .collect(),
            biases: (0..w).map(|_| rng.gen_range(-scale..=scale)).collect(),
            activation: act,
        });
        prev = w;
    }
    layers.push(Layer {
        weights: vec![(0..prev).map(|_| rng.gen_range(-scale..=scale)).collect()],
        biases: vec![0.0],
        activation: ActivationKind::Identity,
    });
    Network::new(input, layers).unwrap()
}

fn sample_in(box_: &HyperBox, rng: &mut ChaCha8Rng) -> Vec<f64> {
    box_.coords()
        .iter()
        .map(|c| rng.gen_range(c.lo()..=c.hi()))
        .collect()
}

/// Largest sampled slope quotient `|N0(x) - N0(y)| / ||x - y||_inf`
/// over `samples` random pairs with separation at least `min_dist`
/// (tiny separations would measure evaluation rounding, not slope).
fn max_slope_quotient(
    net: &Network,
    box_: &HyperBox,
    rng: &mut ChaCha8Rng,
    samples: usize,
    min_dist: f64,
) -> f64 {
    let mut best: f64 = 0.0;
    let mut taken = 0;
    while taken < samples {
        let x = sample_in(box_, rng);
        let y = sample_in(box_, rng);
        let dist = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if dist < min_dist {
            continue;
        }
        let fx = net.eval_real(&x).unwrap()[0];
        let fy = net.eval_real(&y).unwrap()[0];
        best = best.max((fx - fy).abs() / dist);
        taken += 1;
    }
    best
}

/// Checks that the 1-d boxes jointly cover `[lo, hi]` without gaps.
fn covers_1d(boxes: &[HyperBox], lo: f64, hi: f64) -> bool {
    let mut spans: Vec<(f64, f64)> = boxes.iter().map(|b| (b.coord(0).lo(), b.coord(0).hi())).collect();
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = lo;
    for (l, h) in spans {
        if l > reach {
            return false;
        }
        reach = reach.max(h);
        if reach >= hi {
            return true;
        }
    }
    reach >= hi
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn criterion_1_reference_trace_reproduction() {
    let t = Instant::now();
    let rep = repro_exp1(&MaxParams::default()).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let failures = check_exp1_trace(&rep);
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    // final compared row: a point enclosure around the reference value
    let last = rep.result.trace[6].value;
    assert!(last.width() <= 1e-9);
    assert!((last.hi() - 0.32270569085905976).abs() <= 1e-9);
    assert_nested(&rep.result.trace);
    assert!(elapsed < 1.0, "took {elapsed:.3}s");
    pass(1, "reference two-neuron trace, both endpoints within 1e-9");
}

// --- criterion 2 -----------------------------------------------------------

#[test]
fn criterion_2_relu_subgradient_textbook_cases() {
    let f = |b: &HyperBox| {
        Ok(activation_grad_interval(ActivationKind::ReLU, b.coord(0)))
    };

    // domain straddling the kink: value [1,1], maximum set [0,1]
    let params = MaxParams {
        max_iterations: 25,
        // the maximum set is full-dimensional, so retained boxes double
        // every iteration; the budget must cover 2^24 boxes
        max_boxes: 1 << 25,
        // negative target: keep refining after the value reaches a point
        target_width: -1.0,
    };
    let domain = [HyperBox::new(vec![Interval::new(-1.0, 1.0)])];
    let r = maximize(f, &domain, &params).unwrap();
    assert_eq!(r.value, Interval::ONE);
    assert!(covers_1d(&r.boxes, 0.0, 1.0));
    let min_lo = r.boxes.iter().map(|b| b.coord(0).lo()).fold(f64::INFINITY, f64::min);
    let max_hi = r.boxes.iter().map(|b| b.coord(0).hi()).fold(f64::NEG_INFINITY, f64::max);
    assert!(min_lo >= -(2f64).powi(-20), "epsilon {min_lo:e}");
    assert_eq!(max_hi, 1.0);
    assert_nested(&r.trace);

    // nonpositive domain: value stays [0,1], nothing can be discarded
    let params = MaxParams {
        max_iterations: 10,
        max_boxes: 1 << 12,
        target_width: -1.0,
    };
    let domain = [HyperBox::new(vec![Interval::new(-1.0, 0.0)])];
    let r = maximize(f, &domain, &params).unwrap();
    assert_eq!(r.value, Interval::new(0.0, 1.0));
    assert!(covers_1d(&r.boxes, -1.0, 0.0));
    let min_lo = r.boxes.iter().map(|b| b.coord(0).lo()).fold(f64::INFINITY, f64::min);
    let max_hi = r.boxes.iter().map(|b| b.coord(0).hi()).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!((min_lo, max_hi), (-1.0, 0.0));

    pass(2, "maxV/maxS of the ReLU subgradient on [-1,1] and [-1,0]");
}

// --- criterion 3 -----------------------------------------------------------

fn zero_net() -> Network {
    // ReLU(x) - ReLU(x): the constant zero function
    Network::new(
        1,
        vec![
            Layer {
                weights: vec![vec![1.0], vec![1.0]],
                biases: vec![0.0, 0.0],
                activation: ActivationKind::ReLU,
            },
            Layer {
                weights: vec![vec![1.0, -1.0]],
                biases: vec![0.0],
                activation: ActivationKind::Identity,
            },
        ],
    )
    .unwrap()
}

#[test]
fn criterion_3_dependency_zero_network() {
    let net = zero_net();
    for x in [-2.0, -0.5, 0.0, 0.25, 3.0] {
        assert_eq!(net.eval_real(&[x]).unwrap(), vec![0.0]);
    }
    // every box containing 0 gets the exact dependency overestimate [-1,1]
    for (lo, hi) in [(-1.0, 1.0), (-0.5, 2.0), (0.0, 0.125), (-4.0, 0.0)] {
        let b = HyperBox::new(vec![Interval::new(lo, hi)]);
        let g = interval_jacobian(&net, &b).unwrap();
        assert_eq!(*g.jacobian.get(0, 0), Interval::new(-1.0, 1.0));
    }
    // the certified constant stays pinned at 1 although the truth is 0
    let params = MaxParams {
        max_iterations: 8,
        ..MaxParams::default()
    };
    let rep = lipschitz_enclosure(&net, &InputRegion::ball(vec![0.0], 1.0), 0, &params).unwrap();
    assert_eq!(rep.result.value.hi(), 1.0);
    assert!(rep.result.value.lo() >= 0.0);
    pass(3, "zero-network dependency overestimate is exactly [-1,1]");
}

// --- criterion 4 -----------------------------------------------------------

#[test]
fn criterion_4_soundness_random_nets() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    for k in 0..100 {
        let n = rng.gen_range(1..=4);
        let depth = rng.gen_range(1..=3);
        let hidden: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=8)).collect();
        let act = if k % 2 == 0 {
            ActivationKind::ReLU
        } else {
            ActivationKind::Tanh
        };
        let net = random_net(&mut rng, n, &hidden, act, 1.0);
        let center: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let region = InputRegion::ball(center, 0.5);
        let params = MaxParams {
            max_iterations: 3,
            max_boxes: 4096,
            target_width: 0.0,
        };
        let rep = lipschitz_enclosure(&net, &region, 0, &params).unwrap();
        let hi = rep.result.value.hi();
        assert!(hi.is_finite());
        let q = max_slope_quotient(&net, &region.to_box(), &mut rng, 1000, 1e-3);
        assert!(q <= hi + 1e-9, "net {k}: sampled slope {q} exceeds bound {hi}");
        assert_nested(&rep.result.trace);
    }
    let elapsed = t.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.1}s");
    pass(4, "100 random nets, 1000 sampled slopes each, zero violations");
}

// --- criterion 5 -----------------------------------------------------------

/// Exact gradient-norm maximum of a one-hidden-layer ReLU net over a
/// box via its activation patterns on a dense grid; at differentiable
/// points the pattern determines the gradient exactly.
fn pattern_grid_max(net: &Network, b: &HyperBox, grid: usize) -> f64 {
    let l1 = &net.layers()[0];
    let l2 = &net.layers()[1];
    let at = |c: &Interval, i: usize| c.lo() + (c.hi() - c.lo()) * i as f64 / (grid - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..grid {
        for j in 0..grid {
            let x = [at(b.coord(0), i), at(b.coord(1), j)];
            let mut g = [0.0f64; 2];
            for (h, (row, &bias)) in l1.weights.iter().zip(&l1.biases).enumerate() {
                let z = row[0] * x[0] + row[1] * x[1] + bias;
                if z > 0.0 {
                    g[0] += l2.weights[0][h] * row[0];
                    g[1] += l2.weights[0][h] * row[1];
                }
            }
            best = best.max(g[0].abs() + g[1].abs());
        }
    }
    best
}

#[test]
fn criterion_5_general_position_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    for k in 0..20 {
        let width = 3 + (k % 2);
        let net = random_net(&mut rng, 2, &[width], ActivationKind::ReLU, 1.0);
        let center = vec![rng.gen_range(-0.5..=0.5), rng.gen_range(-0.5..=0.5)];
        let region = InputRegion::ball(center, 5e-2);
        let params = MaxParams {
            max_iterations: 40,
            max_boxes: 1_000_000,
            target_width: 1e-8,
        };
        let rep = lipschitz_enclosure(&net, &region, 0, &params).unwrap();
        let v = rep.result.value;
        assert!(
            v.width() <= 1e-6,
            "net {k}: width {:e} (stop: {:?})",
            v.width(),
            rep.result.stop_reason
        );
        let oracle = pattern_grid_max(&net, &region.to_box(), 257);
        assert!(
            v.lo() - 1e-9 <= oracle && oracle <= v.hi() + 1e-9,
            "net {k}: pattern brute force {oracle} outside {v:?}"
        );
        assert_nested(&rep.result.trace);
    }
    let elapsed = t.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "took {elapsed:.1}s");
    pass(5, "20 ReLU nets: pattern brute force inside enclosure, width <= 1e-6");
}

// --- criterion 6 -----------------------------------------------------------

/// Maximum finite-difference gradient 1-norm over a dense grid.
fn fd_grid_max(net: &Network, b: &HyperBox, grid: usize) -> f64 {
    let h = 1e-5;
    let at = |c: &Interval, i: usize| c.lo() + (c.hi() - c.lo()) * i as f64 / (grid - 1) as f64;
    let eval = |x: &[f64]| net.eval_real(x).unwrap()[0];
    let mut best = f64::NEG_INFINITY;
    for i in 0..grid {
        for j in 0..grid {
            let x = [at(b.coord(0), i), at(b.coord(1), j)];
            let gx = (eval(&[x[0] + h, x[1]]) - eval(&[x[0] - h, x[1]])) / (2.0 * h);
            let gy = (eval(&[x[0], x[1] + h]) - eval(&[x[0], x[1] - h])) / (2.0 * h);
            best = best.max(gx.abs() + gy.abs());
        }
    }
    best
}

#[test]
fn criterion_6_differentiable_nets_grid_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    for k in 0..10 {
        let hidden = vec![rng.gen_range(2..=5)];
        let net = random_net(&mut rng, 2, &hidden, ActivationKind::Tanh, 1.0);
        let region = InputRegion::ball(vec![0.0, 0.0], 0.5);
        let params = MaxParams {
            max_iterations: 60,
            max_boxes: 200_000,
            target_width: 1e-3,
        };
        let rep = lipschitz_enclosure(&net, &region, 0, &params).unwrap();
        let v = rep.result.value;
        assert!(
            v.width() <= 1e-3,
            "net {k}: width {:e} (stop: {:?})",
            v.width(),
            rep.result.stop_reason
        );
        let fd = fd_grid_max(&net, &region.to_box(), 1000);
        assert!(fd <= v.hi() + 1e-6, "net {k}: fd max {fd} above {}", v.hi());
        assert!(fd >= v.lo() - 1e-3, "net {k}: fd max {fd} below {}", v.lo());
        assert_nested(&rep.result.trace);
    }
    pass(6, "10 tanh nets: grid finite differences inside refined enclosure");
}

// --- criterion 7 -----------------------------------------------------------

fn rational(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite value")
}

/// Largest binary64 `<= r` (directed rounding of an exact rational).
fn round_down(r: &BigRational) -> f64 {
    let mut x = r.to_f64().expect("in f64 range");
    for _ in 0..4 {
        if &rational(x) > r {
            x = x.next_down();
        }
    }
    for _ in 0..4 {
        if &rational(x.next_up()) <= r {
            x = x.next_up();
        }
    }
    x
}

fn round_up(r: &BigRational) -> f64 {
    -round_down(&-r.clone())
}

fn rand_endpoint(rng: &mut ChaCha8Rng) -> f64 {
    let scale = 10f64.powi(rng.gen_range(-12..=12));
    rng.gen_range(-1.0..=1.0) * scale
}

fn rand_interval(rng: &mut ChaCha8Rng) -> Interval {
    let a = rand_endpoint(rng);
    let b = rand_endpoint(rng);
    Interval::new(a.min(b), a.max(b))
}

#[test]
fn criterion_7_interval_ops_vs_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    for i in 0..100_000 {
        let a = rand_interval(&mut rng);
        let b = rand_interval(&mut rng);
        let (alo, ahi) = (rational(a.lo()), rational(a.hi()));
        let (blo, bhi) = (rational(b.lo()), rational(b.hi()));
        let (res, exact_lo, exact_hi) = match i % 3 {
            0 => (a.add(&b), alo + blo, ahi + bhi),
            1 => (a.sub(&b), alo - bhi, ahi - blo),
            _ => {
                let products = [&alo * &blo, &alo * &bhi, &ahi * &blo, &ahi * &bhi];
                let lo = products.iter().min().unwrap().clone();
                let hi = products.iter().max().unwrap().clone();
                (a.mul(&b), lo, hi)
            }
        };
        // containment of the exact result
        assert!(rational(res.lo()) <= exact_lo, "op {i}: lo above exact");
        assert!(exact_hi <= rational(res.hi()), "op {i}: hi below exact");
        // at most 1 ulp beyond the correctly rounded endpoint
        let cr_lo = round_down(&exact_lo);
        let cr_hi = round_up(&exact_hi);
        assert!(
            res.lo() == cr_lo || res.lo() == cr_lo.next_down(),
            "op {i}: lo {:e} more than 1 ulp below correctly rounded {cr_lo:e}",
            res.lo()
        );
        assert!(
            res.hi() == cr_hi || res.hi() == cr_hi.next_up(),
            "op {i}: hi {:e} more than 1 ulp above correctly rounded {cr_hi:e}",
            res.hi()
        );
    }
    pass(7, "100000 ops vs exact rationals: contained, within 1 ulp");
}

// --- criterion 8 -----------------------------------------------------------

#[test]
fn criterion_8_nested_refinement() {
    // nesting is also asserted inline by criteria 1-6; this re-checks a
    // representative mix in one place
    let rep = repro_exp1(&MaxParams::default()).unwrap();
    assert_nested(&rep.result.trace);

    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    for k in 0..10 {
        let act = if k % 2 == 0 {
            ActivationKind::ReLU
        } else {
            ActivationKind::Tanh
        };
        let net = random_net(&mut rng, 2, &[4], act, 1.0);
        let region = InputRegion::ball(vec![0.0, 0.0], 0.25);
        let params = MaxParams {
            max_iterations: 12,
            max_boxes: 100_000,
            target_width: -1.0,
        };
        let rep = lipschitz_enclosure(&net, &region, 0, &params).unwrap();
        assert!(rep.result.trace.len() >= 2);
        assert_nested(&rep.result.trace);
    }
    pass(8, "every refinement trace is a nested chain of enclosures");
}

// --- criterion 9 -----------------------------------------------------------

#[test]
fn criterion_9_image_scale_smoke() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    let dims = [784usize, 10, 10, 2];
    let mut layers = Vec::new();
    for w in 0..3 {
        let (fan_in, fan_out) = (dims[w], dims[w + 1]);
        let scale = (fan_in as f64).sqrt().recip();
        layers.push(Layer {
            weights: (0..fan_out)
                .map(|_| (0..fan_in).map(|_| rng.gen_range(-scale..=scale)).collect())
                .collect(),
            biases: vec![0.0; fan_out],
            activation: if w == 2 {
                ActivationKind::Identity
            } else {
                ActivationKind::ReLU
            },
        });
    }
    let net = Network::new(784, layers).unwrap();
    let center: Vec<f64> = (0..784).map(|_| rng.gen_range(0.0..=1.0)).collect();
    let region = InputRegion::ball(center, 1e-3);

    let t = Instant::now();
    let params = MaxParams {
        max_iterations: 1,
        ..MaxParams::default()
    };
    let rep = lipschitz_enclosure(&net, &region, 0, &params).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "took {elapsed:.2}s");
    assert_eq!(rep.result.iterations, 1);
    let hi = rep.result.value.hi();
    assert!(hi.is_finite() && hi > 0.0);
    let q = max_slope_quotient(&net, &region.to_box(), &mut rng, 1000, 1e-5);
    assert!(q <= hi + 1e-9, "sampled slope {q} exceeds bound {hi}");
    pass(9, "784-input smoke run: one iteration, finite sound enclosure, < 5s");
}
