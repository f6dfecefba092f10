//! Adaptive Gauss–Kronrod (10/21 point) quadrature for complex integrands.

use crate::{Error, Result, C64};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525778201,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals before giving up.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub intervals: usize,
}

/// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
pub fn gk21<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = C64::new(0.0, 0.0);
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Integrate over the partition given by `breakpoints` (sorted, at least two),
/// bisecting the panel with the largest error until the total error estimate
/// meets `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: Fn(f64) -> C64>(f: F, breakpoints: &[f64], opts: &QuadOptions) -> Result<QuadResult> {
    if breakpoints.len() < 2 {
        return Err(Error::Precondition("quadrature needs at least two breakpoints".into()));
    }
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (C64::new(0.0, 0.0), 0.0);
    for w in breakpoints.windows(2) {
        let (v, e) = gk21(&f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature".into(),
                iterations: heap.len(),
                estimate: err,
            });
        }
        let p = heap.pop().expect("nonempty heap");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // Panel below floating-point resolution: accept what we have.
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(&f, p.a, m);
        let (v2, e2) = gk21(&f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
    }
    // Resum to shed the drift of the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        intervals: heap.len(),
    })
}

/// Breakpoints on `[a, b]` graded geometrically towards `b`, down to `b - (b-a)·floor`.
pub fn graded_towards_end(a: f64, b: f64, floor: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut d = 0.5;
    while d > floor {
        pts.push(b - (b - a) * d);
        d *= 0.25;
    }
    pts.push(b);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| C64::new(x.powi(7), x * x), &[0.0, 1.0], &QuadOptions::default()).unwrap();
        assert!((r.value - C64::new(0.125, 1.0 / 3.0)).norm() < 1e-15);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(
            |x| C64::new(1.0 / x.sqrt(), 0.0),
            &graded_towards_end(1.0, 0.0, 1e-12).iter().rev().copied().collect::<Vec<_>>(),
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9, "{:?}", r);
    }

    #[test]
    fn oscillatory() {
        let opts = QuadOptions::default();
        let r = integrate(|x| C64::new((50.0 * x).cos(), 0.0), &[0.0, 3.0], &opts).unwrap();
        assert!((r.value.re - (150f64).sin() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports() {
        let opts = QuadOptions {
            max_intervals: 3,
            ..Default::default()
        };
        let e = integrate(|x| C64::new((1.0 / (x + 1e-9)).sin(), 0.0), &[0.0, 1.0], &opts);
        assert!(matches!(e, Err(Error::NoConvergence { .. })));
    }
}
