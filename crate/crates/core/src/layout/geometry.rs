//! Segment predicates in plain `f64`. Integer coordinates below 2^26 are
//! handled exactly.

use super::{LayoutBox, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn length(&self) -> f64 {
        (self.b.x - self.a.x).hypot(self.b.y - self.a.y)
    }
}

fn orient(p: Point, q: Point, r: Point) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Whether two segments cross in the sense used for crossing counts: they
/// share a point that is interior to at least one of them, or they overlap
/// collinearly along a positive length. Meeting only at a common endpoint
/// does not count. Degenerate segments never cross.
pub fn segments_cross(s: &Segment, t: &Segment) -> bool {
    if s.is_degenerate() || t.is_degenerate() {
        return false;
    }
    let o1 = sign(orient(s.a, s.b, t.a));
    let o2 = sign(orient(s.a, s.b, t.b));
    let o3 = sign(orient(t.a, t.b, s.a));
    let o4 = sign(orient(t.a, t.b, s.b));

    if o1 == 0 && o2 == 0 {
        return collinear_overlap(s, t);
    }
    let straddle_t = o1 * o2 <= 0;
    let straddle_s = o3 * o4 <= 0;
    if !(straddle_t && straddle_s) {
        return false;
    }
    // the common point is an endpoint of s when s.a or s.b lies on t's line
    let endpoint_of_s = o3 == 0 || o4 == 0;
    let endpoint_of_t = o1 == 0 || o2 == 0;
    !(endpoint_of_s && endpoint_of_t)
}

fn collinear_overlap(s: &Segment, t: &Segment) -> bool {
    let dx = (s.b.x - s.a.x).abs();
    let dy = (s.b.y - s.a.y).abs();
    let key = |p: Point| if dx >= dy { p.x } else { p.y };
    let (s0, s1) = minmax(key(s.a), key(s.b));
    let (t0, t1) = minmax(key(t.a), key(t.b));
    s1.min(t1) > s0.max(t0)
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Angle in degrees between two rays from a common origin, in `[0, 180]`.
pub fn ray_angle_deg(origin: Point, p: Point, q: Point) -> f64 {
    let (ux, uy) = (p.x - origin.x, p.y - origin.y);
    let (vx, vy) = (q.x - origin.x, q.y - origin.y);
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    cross.abs().atan2(dot).to_degrees()
}

/// Folds an angle in `[0, 180]` into `[0, 90]`.
pub fn fold_angle(deg: f64) -> f64 {
    if deg > 90.0 {
        180.0 - deg
    } else {
        deg
    }
}

/// Positive-area overlap of two boxes.
pub fn boxes_overlap(a: &LayoutBox, b: &LayoutBox) -> bool {
    let w = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
    let h = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
    w > 0.0 && h > 0.0
}

/// Whether a segment passes through the open interior of a box
/// (Liang-Barsky clipping against the closed box, then a midpoint test).
pub fn segment_enters_box(s: &Segment, r: &LayoutBox) -> bool {
    let (x0, y0) = (s.a.x, s.a.y);
    let (dx, dy) = (s.b.x - x0, s.b.y - y0);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    let checks = [
        (-dx, x0 - r.x),
        (dx, r.x + r.w - x0),
        (-dy, y0 - r.y),
        (dy, r.y + r.h - y0),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 > t1 {
        return false;
    }
    let tm = (t0 + t1) / 2.0;
    let (mx, my) = (x0 + tm * dx, y0 + tm * dy);
    mx > r.x && mx < r.x + r.w && my > r.y && my < r.y + r.h
}
