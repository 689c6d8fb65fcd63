//! Real cubic `a x³ + b x² + c x + d` root finding.
//!
//! Three distinct real roots go through the trigonometric form; otherwise one
//! real root is taken from a cancellation-free Cardano expression and the rest
//! come from the deflated quadratic. Real roots are polished with guarded
//! Newton steps on the original polynomial.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicRoots {
    /// Ascending.
    ThreeReal([f64; 3]),
    /// One real root plus the conjugate pair `re ± i·im` (`im >= 0`).
    OneReal { real: f64, re: f64, im: f64 },
}

impl CubicRoots {
    pub fn real_roots(&self) -> Vec<f64> {
        match *self {
            CubicRoots::ThreeReal(r) => r.to_vec(),
            CubicRoots::OneReal { real, .. } => vec![real],
        }
    }

    pub fn count_positive(&self) -> usize {
        self.real_roots().iter().filter(|&&r| r > 0.0).count()
    }
}

pub fn eval(coeffs: [f64; 4], x: f64) -> f64 {
    let [a, b, c, d] = coeffs;
    ((a * x + b) * x + c) * x + d
}

pub fn eval_derivative(coeffs: [f64; 4], x: f64) -> f64 {
    let [a, b, c, _] = coeffs;
    (3.0 * a * x + 2.0 * b) * x + c
}

fn polish(coeffs: [f64; 4], mut x: f64) -> f64 {
    let mut fx = eval(coeffs, x).abs();
    for _ in 0..4 {
        let d = eval_derivative(coeffs, x);
        if d == 0.0 || fx == 0.0 {
            break;
        }
        let next = x - eval(coeffs, x) / d;
        let fn_ = eval(coeffs, next).abs();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

/// Roots of `a x³ + b x² + c x + d`; `None` when `a == 0` or inputs are not finite.
pub fn solve(a: f64, b: f64, c: f64, d: f64) -> Option<CubicRoots> {
    if a == 0.0 || ![a, b, c, d].iter().all(|v| v.is_finite()) {
        return None;
    }
    let coeffs = [a, b, c, d];
    let (b1, c1, d1) = (b / a, c / a, d / a);
    let shift = b1 / 3.0;
    // x = t − shift:  t³ + p t + q = 0
    let p = c1 - b1 * b1 / 3.0;
    let q = 2.0 * b1 * b1 * b1 / 27.0 - b1 * c1 / 3.0 + d1;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = [0.0; 3];
        for (k, slot) in r.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * PI * k as f64 / 3.0).cos();
            *slot = polish(coeffs, t - shift);
        }
        r.sort_by(f64::total_cmp);
        return Some(CubicRoots::ThreeReal(r));
    }

    let sq = disc.sqrt();
    let u = (-q / 2.0 - sq.copysign(q)).cbrt();
    let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
    let real = polish(coeffs, t - shift);

    // deflate: a x³ + b x² + c x + d = (x − real)(a x² + e x + f)
    let e = b + a * real;
    let f = c + e * real;
    let qd = e * e - 4.0 * a * f;
    if qd >= 0.0 {
        let s = qd.sqrt();
        let r1 = -(e + s.copysign(e)) / (2.0 * a);
        let r2 = if r1 != 0.0 { f / (a * r1) } else { -e / a - r1 };
        let mut r = [real, polish(coeffs, r1), polish(coeffs, r2)];
        r.sort_by(f64::total_cmp);
        Some(CubicRoots::ThreeReal(r))
    } else {
        Some(CubicRoots::OneReal { real, re: -e / (2.0 * a), im: (-qd).sqrt() / (2.0 * a.abs()) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(a: f64, r: [f64; 3]) -> [f64; 4] {
        let [x, y, z] = r;
        [a, -a * (x + y + z), a * (x * y + y * z + z * x), -a * x * y * z]
    }

    #[test]
    fn distinct_real_roots() {
        let c = from_roots(2.0, [-1.0, 0.5, 3.0]);
        let CubicRoots::ThreeReal(r) = solve(c[0], c[1], c[2], c[3]).unwrap() else { panic!() };
        for (x, e) in r.iter().zip([-1.0, 0.5, 3.0]) {
            assert!((x - e).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_pair() {
        // (x − 2)(x² + 2x + 5): roots 2, −1 ± 2i
        let roots = solve(1.0, 0.0, 1.0, -10.0).unwrap();
        let CubicRoots::OneReal { real, re, im } = roots else { panic!("{roots:?}") };
        assert!((real - 2.0).abs() < 1e-14);
        assert!((re + 1.0).abs() < 1e-14);
        assert!((im - 2.0).abs() < 1e-14);
        assert_eq!(roots.count_positive(), 1);
    }

    #[test]
    fn double_root() {
        // −(x − 1)²(x + 0.5)
        let c = from_roots(-1.0, [1.0, 1.0, -0.5]);
        let roots = solve(c[0], c[1], c[2], c[3]).unwrap();
        match roots {
            CubicRoots::ThreeReal(r) => {
                assert!((r[0] + 0.5).abs() < 1e-12);
                assert!((r[1] - 1.0).abs() < 1e-7 && (r[2] - 1.0).abs() < 1e-7);
            }
            CubicRoots::OneReal { real, re, im } => {
                assert!((real + 0.5).abs() < 1e-12);
                assert!((re - 1.0).abs() < 1e-7 && im < 1e-7);
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(solve(0.0, 1.0, 2.0, 3.0).is_none());
        assert!(solve(1.0, f64::NAN, 2.0, 3.0).is_none());
        assert_eq!(solve(1.0, 0.0, 0.0, 0.0).unwrap().real_roots()[0], 0.0);
    }

    proptest! {
        #[test]
        fn real_roots_are_roots(
            a in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64],
            b in -5.0..5.0f64, c in -5.0..5.0f64, d in -5.0..5.0f64,
        ) {
            let roots = solve(a, b, c, d).unwrap();
            let scale = a.abs() + b.abs() + c.abs() + d.abs();
            for r in roots.real_roots() {
                let s = scale * (1.0 + r.abs()).powi(3);
                prop_assert!(eval([a, b, c, d], r).abs() <= 1e-10 * s);
            }
            // Vieta: sum of all roots = −b/a
            let sum = match roots {
                CubicRoots::ThreeReal(r) => r.iter().sum::<f64>(),
                CubicRoots::OneReal { real, re, .. } => real + 2.0 * re,
            };
            prop_assert!((sum + b / a).abs() <= 1e-7 * (1.0 + (b / a).abs() + scale / a.abs()));
        }

        #[test]
        fn recovers_constructed_roots(
            x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64, a in 0.5..2.0f64,
        ) {
            prop_assume!((x - y).abs() > 0.05 && (y - z).abs() > 0.05 && (x - z).abs() > 0.05);
            let c = from_roots(a, [x, y, z]);
            let CubicRoots::ThreeReal(r) = solve(c[0], c[1], c[2], c[3]).unwrap() else {
                return Err(TestCaseError::fail("expected three real roots"));
            };
            let mut e = [x, y, z];
            e.sort_by(f64::total_cmp);
            for (ri, ei) in r.iter().zip(e) {
                prop_assert!((ri - ei).abs() < 1e-9);
            }
        }
    }
}
