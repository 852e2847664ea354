//! Closed-form geodesic formulas for the hyperboloid model
//! `{x : -x0^2 + |x_s|^2 = -1, x0 > 0}` of real hyperbolic space.
//!
//! Distances go through the Minkowski norm of the chord `x - y`, which is
//! exact for coincident points and keeps full relative precision for nearby
//! ones (the `arccosh(-<x,y>)` route loses half the digits there).

pub(crate) fn minkowski(x: &[f64], y: &[f64]) -> f64 {
    let spatial: f64 = x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum();
    spatial - x[0] * y[0]
}

/// `<x - y, x - y>_M = 2 (cosh d - 1)`, clamped at zero.
fn chord_sq(x: &[f64], y: &[f64]) -> f64 {
    let dt = x[0] - y[0];
    let spatial: f64 = x[1..]
        .iter()
        .zip(&y[1..])
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    (spatial - dt * dt).max(0.0)
}

pub(crate) fn distance(x: &[f64], y: &[f64]) -> f64 {
    2.0 * (chord_sq(x, y).sqrt() / 2.0).asinh()
}

/// Restores the time coordinate from the spatial ones.
pub(crate) fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v[1..].iter().map(|c| c * c).sum();
    v[0] = (1.0 + s).sqrt();
    v
}

pub(crate) fn lift(spatial: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(spatial.len() + 1);
    v.push(0.0);
    v.extend_from_slice(spatial);
    renormalize(v)
}

pub(crate) fn combine(x: &[f64], y: &[f64], t: f64) -> Vec<f64> {
    let d = distance(x, y);
    if d == 0.0 {
        return x.to_vec();
    }
    let s = d.sinh();
    let wx = ((1.0 - t) * d).sinh() / s;
    let wy = (t * d).sinh() / s;
    let z = x.iter().zip(y).map(|(a, b)| wx * a + wy * b).collect();
    renormalize(z)
}

pub(crate) fn orthogonalize(base: &[f64], v: &[f64]) -> Vec<f64> {
    let c = minkowski(base, v);
    v.iter().zip(base).map(|(vi, bi)| vi + c * bi).collect()
}

pub(crate) fn tangent_norm(base: &[f64], v: &[f64]) -> f64 {
    let w = orthogonalize(base, v);
    minkowski(&w, &w).max(0.0).sqrt()
}

pub(crate) fn log(base: &[f64], target: &[f64]) -> Vec<f64> {
    let q = chord_sq(base, target);
    if q == 0.0 {
        return vec![0.0; base.len()];
    }
    let d = 2.0 * (q.sqrt() / 2.0).asinh();
    // target - (1 + q/2) base, written to avoid cancellation near base
    let half_q = 0.5 * q;
    let u: Vec<f64> = target
        .iter()
        .zip(base)
        .map(|(t, b)| (t - b) - half_q * b)
        .collect();
    let scale = d / d.sinh();
    let v: Vec<f64> = u.iter().map(|c| c * scale).collect();
    orthogonalize(base, &v)
}

pub(crate) fn exp(base: &[f64], v: &[f64]) -> Vec<f64> {
    let w = orthogonalize(base, v);
    let n = minkowski(&w, &w).max(0.0).sqrt();
    if n == 0.0 {
        return base.to_vec();
    }
    let (c, s) = (n.cosh(), n.sinh() / n);
    let z = base.iter().zip(&w).map(|(b, wi)| c * b + s * wi).collect();
    renormalize(z)
}

/// Parameter `s in [0, len]` of the point of the unit-speed geodesic
/// `a cosh s + w sinh s` closest to `x`.
pub(crate) fn closest_on_geodesic(x: &[f64], a: &[f64], w: &[f64], len: f64) -> f64 {
    let big_a = -minkowski(x, a);
    let big_b = -minkowski(x, w);
    let ratio = (-big_b / big_a).clamp(-1.0, 1.0);
    let s = if ratio.abs() >= 1.0 {
        ratio.signum() * f64::INFINITY
    } else {
        ratio.atanh()
    };
    s.clamp(0.0, len)
}
