//! A spider: `legs` copies of `[0, inf)` glued at their origin (the hub).
//! Geodesics either stay on one leg or pass through the hub.

pub(crate) type TreePos = (usize, f64);

fn shares_leg(x: TreePos, y: TreePos) -> bool {
    x.0 == y.0 || x.1 == 0.0 || y.1 == 0.0
}

pub(crate) fn distance(x: TreePos, y: TreePos) -> f64 {
    if shares_leg(x, y) {
        (x.1 - y.1).abs()
    } else {
        x.1 + y.1
    }
}

pub(crate) fn combine(x: TreePos, y: TreePos, t: f64) -> TreePos {
    if shares_leg(x, y) {
        let leg = if x.1 == 0.0 { y.0 } else { x.0 };
        (leg, x.1 + (y.1 - x.1) * t)
    } else {
        let s = t * (x.1 + y.1);
        if s <= x.1 {
            (x.0, x.1 - s)
        } else {
            (y.0, s - x.1)
        }
    }
}

/// Metric projection onto the geodesic segment `[a, b]`.
pub(crate) fn project_segment(x: TreePos, a: TreePos, b: TreePos) -> TreePos {
    let clamp_leg = |leg: usize, hi: f64, lo: f64| -> Option<TreePos> {
        if x.1 > 0.0 && x.0 == leg {
            Some((leg, x.1.clamp(lo, hi)))
        } else {
            None
        }
    };
    if shares_leg(a, b) {
        let leg = if a.1 == 0.0 { b.0 } else { a.0 };
        let (lo, hi) = if a.1 <= b.1 { (a.1, b.1) } else { (b.1, a.1) };
        // off the leg, the closest segment point is the one nearest the hub
        clamp_leg(leg, hi, lo).unwrap_or((leg, lo))
    } else {
        clamp_leg(a.0, a.1, 0.0)
            .or_else(|| clamp_leg(b.0, b.1, 0.0))
            .unwrap_or((0, 0.0))
    }
}
