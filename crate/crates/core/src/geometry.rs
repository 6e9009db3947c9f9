//! Oriented grasp rectangles: the 5D representation, exact
//! intersection-over-union via convex polygon clipping, and the
//! IOU-plus-angle success criterion used for evaluation.

use serde::{Deserialize, Serialize};

/// A planar point. Kept as a bare pair; geometry here is small enough that a
/// full vector type would be noise.
pub type Point = [f64; 2];

/// The 5D grasp representation plus its graspable probability.
///
/// `theta` is degrees in `[0, 180)` — a parallel-plate gripper cannot tell a
/// grasp from its 180° rotation. The plate edges (length `h`) run along the
/// `theta` direction; the opening `w` spans perpendicular to them, so the
/// plates close along the `w` axis. Ground-truth grasps that carry no
/// probability use `z = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grasp {
    pub x: f64,
    pub y: f64,
    /// Degrees in `[0, 180)`.
    pub theta: f64,
    /// Gripper opening (perpendicular extent).
    pub w: f64,
    /// Plate size (extent along `theta`).
    pub h: f64,
    /// Graspable probability in `[0, 1]`.
    pub z: f64,
}

impl Grasp {
    /// Build a grasp with `z = 1`, normalizing `theta` into `[0, 180)`.
    ///
    /// Panics on non-finite values or non-positive extents; those violate the
    /// type's invariants and every consumer below relies on them.
    pub fn new(x: f64, y: f64, theta: f64, w: f64, h: f64) -> Self {
        assert!(
            x.is_finite() && y.is_finite() && theta.is_finite(),
            "grasp coordinates must be finite"
        );
        assert!(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite(), "grasp extents must be positive");
        Grasp { x, y, theta: normalize_angle(theta), w, h, z: 1.0 }
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    /// Uniform scale of both position and extents (grid units ↔ pixels).
    pub fn scaled(&self, s: f64) -> Self {
        Grasp { x: self.x * s, y: self.y * s, theta: self.theta, w: self.w * s, h: self.h * s, z: self.z }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// True iff the point lies inside (or on) the rectangle.
    pub fn contains(&self, p: Point) -> bool {
        let (sin, cos) = self.theta.to_radians().sin_cos();
        let dx = p[0] - self.x;
        let dy = p[1] - self.y;
        let along = dx * cos + dy * sin;
        let perp = -dx * sin + dy * cos;
        along.abs() <= self.h / 2.0 && perp.abs() <= self.w / 2.0
    }
}

/// Map an angle in degrees into `[0, 180)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(180.0);
    if t == 180.0 {
        0.0
    } else {
        t
    }
}

/// Angular distance in degrees modulo the gripper's 180° symmetry; always in
/// `[0, 90]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

/// Counter-clockwise corner points of the grasp rectangle. The first edge
/// (`v0 → v1`) is an opening edge of length `w`, perpendicular to `theta`;
/// the plate edges of length `h` run along `theta`.
pub fn rect_vertices(g: &Grasp) -> [Point; 4] {
    let (sin, cos) = g.theta.to_radians().sin_cos();
    let hh = g.h / 2.0;
    let hw = g.w / 2.0;
    // Local corners (along, perp), counter-clockwise.
    let local = [[hh, -hw], [hh, hw], [-hh, hw], [-hh, -hw]];
    local.map(|[a, p]| [g.x + a * cos - p * sin, g.y + a * sin + p * cos])
}

/// Signed shoelace area; positive for counter-clockwise vertex order.
fn polygon_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        acc += poly[i][0] * poly[j][1] - poly[j][0] * poly[i][1];
    }
    acc / 2.0
}

/// Sutherland–Hodgman clip of `subject` against one half-plane: keep the side
/// to the left of the directed edge `a → b`.
fn clip_against_edge(subject: &[Point], a: Point, b: Point) -> Vec<Point> {
    let side = |p: Point| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    let mut out = Vec::with_capacity(subject.len() + 1);
    for i in 0..subject.len() {
        let cur = subject[i];
        let prev = subject[(i + subject.len() - 1) % subject.len()];
        let cur_in = side(cur) >= 0.0;
        let prev_in = side(prev) >= 0.0;
        if cur_in {
            if !prev_in {
                out.push(line_intersection(prev, cur, a, b));
            }
            out.push(cur);
        } else if prev_in {
            out.push(line_intersection(prev, cur, a, b));
        }
    }
    out
}

fn line_intersection(p1: Point, p2: Point, a: Point, b: Point) -> Point {
    let r = [p2[0] - p1[0], p2[1] - p1[1]];
    let s = [b[0] - a[0], b[1] - a[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    // Caller only asks for an intersection when the segment genuinely crosses
    // the edge line, so denom is nonzero up to roundoff.
    let t = ((a[0] - p1[0]) * s[1] - (a[1] - p1[1]) * s[0]) / denom;
    [p1[0] + t * r[0], p1[1] + t * r[1]]
}

/// Area of the intersection of two convex counter-clockwise polygons.
pub fn convex_intersection_area(p: &[Point], q: &[Point]) -> f64 {
    let mut poly: Vec<Point> = p.to_vec();
    for i in 0..q.len() {
        if poly.is_empty() {
            return 0.0;
        }
        poly = clip_against_edge(&poly, q[i], q[(i + 1) % q.len()]);
    }
    polygon_area(&poly).abs()
}

/// Exact intersection-over-union of two grasp rectangles, by convex-convex
/// clipping and the shoelace formula. Bitwise symmetric in its arguments
/// (the clip order is canonicalized); rectangles that merely touch along an
/// edge score 0.
pub fn rotated_iou(a: &Grasp, b: &Grasp) -> f64 {
    assert!(a.area() > 0.0 && b.area() > 0.0, "degenerate zero-area rectangle");
    let key = |g: &Grasp| [g.x, g.y, g.theta, g.w, g.h];
    let (p, q) = if key(a) <= key(b) { (a, b) } else { (b, a) };
    let inter = convex_intersection_area(&rect_vertices(p), &rect_vertices(q));
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

/// The Jaccard success rule: IOU at or above the threshold and angular
/// distance (mod 180°) strictly below 30°.
pub fn grasp_success(pred: &Grasp, truth: &Grasp, iou_threshold: f64) -> bool {
    angle_distance(pred.theta, truth.theta) < 30.0 && rotated_iou(pred, truth) >= iou_threshold
}
