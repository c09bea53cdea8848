//! Time-sharing convexification of a downward-closed rate region.

/// Upper-right boundary of the convex hull of `points`, the origin and the
/// axis projections of the extreme points. Runs from `(0, max r2)` to
/// `(max r1, 0)` with `r1` nondecreasing.
pub fn upper_right_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let max1 = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let max2 = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut all: Vec<(f64, f64)> = points.to_vec();
    all.extend([(0.0, 0.0), (0.0, max2), (max1, 0.0)]);
    // x ascending, y descending within equal x
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    all.dedup();

    let mut chain: Vec<(f64, f64)> = Vec::new();
    for p in all {
        while chain.len() >= 2 {
            let o = chain[chain.len() - 2];
            let a = chain[chain.len() - 1];
            if cross(o, a, p) >= 0.0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// True when `p` lies on or below the hull polyline (within `tol`).
pub fn dominated_by_hull(hull: &[(f64, f64)], p: (f64, f64), tol: f64) -> bool {
    if p.0 < -tol || p.1 < -tol {
        return true;
    }
    let Some(last) = hull.last() else {
        return p.0 <= tol && p.1 <= tol;
    };
    if p.0 > last.0 + tol {
        return false;
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        if p.0 < a.0 - tol || p.0 > b.0 + tol {
            continue;
        }
        let y = if b.0 - a.0 > 0.0 {
            let t = ((p.0 - a.0) / (b.0 - a.0)).clamp(0.0, 1.0);
            a.1 + t * (b.1 - a.1)
        } else {
            a.1.max(b.1)
        };
        if p.1 <= y + tol {
            return true;
        }
    }
    hull.len() == 1 && p.0 <= hull[0].0 + tol && p.1 <= hull[0].1 + tol
}
