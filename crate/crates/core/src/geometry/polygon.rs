//! Planar convex polygon utilities in local 2D coordinates.

pub type P2 = [f64; 2];

/// Signed area (positive for counter-clockwise loops).
pub fn signed_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

pub fn area(poly: &[P2]) -> f64 {
    signed_area(poly).abs()
}

/// Keeps the part of `poly` where `a·p + b >= 0`.
pub fn clip_half_plane(poly: &[P2], a: P2, b: f64) -> Vec<P2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let val = |p: &P2| a[0] * p[0] + a[1] * p[1] + b;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let vp = val(&p);
        let vq = val(&q);
        if vp >= 0.0 {
            out.push(p);
        }
        if (vp >= 0.0) != (vq >= 0.0) {
            let t = vp / (vp - vq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Intersection of two convex polygons (`clip` must be counter-clockwise).
pub fn intersect_convex(subject: &[P2], clip: &[P2]) -> Vec<P2> {
    let mut out = subject.to_vec();
    for (a, b) in edge_half_planes(clip) {
        if out.is_empty() {
            break;
        }
        out = clip_half_plane(&out, a, b);
    }
    out
}

/// Inward half-planes `a·p + b >= 0` of a counter-clockwise convex polygon.
pub fn edge_half_planes(poly: &[P2]) -> Vec<(P2, f64)> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let p = poly[i];
            let q = poly[(i + 1) % n];
            let a = [-(q[1] - p[1]), q[0] - p[0]];
            let b = -(a[0] * p[0] + a[1] * p[1]);
            (a, b)
        })
        .collect()
}

/// Decomposes `subject \ clip` into convex pieces.
pub fn subtract_convex(subject: &[P2], clip: &[P2]) -> Vec<Vec<P2>> {
    let mut pieces = Vec::new();
    let mut rest = subject.to_vec();
    for (a, b) in edge_half_planes(clip) {
        if rest.is_empty() {
            break;
        }
        let outside = clip_half_plane(&rest, [-a[0], -a[1]], -b);
        if area(&outside) > 0.0 {
            pieces.push(outside);
        }
        rest = clip_half_plane(&rest, a, b);
    }
    pieces
}

/// Reorders a loop counter-clockwise.
pub fn make_ccw(mut poly: Vec<P2>) -> Vec<P2> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

/// Whether the loop is convex (collinear vertices allowed).
pub fn is_convex(poly: &[P2], tol: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut sign = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        let cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cr.abs() <= tol {
            continue;
        }
        if sign == 0.0 {
            sign = cr.signum();
        } else if cr.signum() != sign {
            return false;
        }
    }
    true
}

/// Whether `p` lies in the closed counter-clockwise convex polygon.
pub fn contains(poly: &[P2], p: P2, tol: f64) -> bool {
    edge_half_planes(poly).iter().all(|(a, b)| {
        let len = (a[0] * a[0] + a[1] * a[1]).sqrt();
        (a[0] * p[0] + a[1] * p[1] + b) >= -tol * len
    })
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * d[0] - p[0], a[1] + t * d[1] - p[1]];
    (q[0] * q[0] + q[1] * q[1]).sqrt()
}

/// Distance from `p` to the closed convex polygon (zero inside).
pub fn distance(poly: &[P2], p: P2) -> f64 {
    if contains(poly, p, 0.0) {
        return 0.0;
    }
    let n = poly.len();
    (0..n)
        .map(|i| segment_distance(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

pub fn centroid(poly: &[P2]) -> P2 {
    let n = poly.len() as f64;
    let mut c = [0.0, 0.0];
    for p in poly {
        c[0] += p[0] / n;
        c[1] += p[1] / n;
    }
    c
}
