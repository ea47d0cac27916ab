//! Gauss–Legendre rules and geometrically graded composite quadrature.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const ORDER: usize = 20;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (c, r) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        s += wi * f(c + r * xi);
    }
    s * r
}

/// `∫_lo^hi f` on panels whose widths grow geometrically (factor `ratio`)
/// with the distance from `anchor ≤ lo`, where `f` may vary rapidly.
///
/// If `anchor == lo`, panels start at distance `1e-15·(hi − lo)`.
pub fn integrate_graded(f: impl Fn(f64) -> f64, lo: f64, hi: f64, anchor: f64, ratio: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let far = hi - anchor;
    let mut near = lo - anchor;
    let mut total = 0.0;
    if near <= 0.0 {
        near = 1e-15 * (hi - lo);
        total += panel(&f, lo, anchor + near);
    }
    let mut d = near;
    while d < far {
        let next = (d * ratio).min(far);
        total += panel(&f, anchor + d, anchor + next);
        d = next;
    }
    total
}
