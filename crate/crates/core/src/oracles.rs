//! Independent reference computations used only for verification: Monte
//! Carlo area estimates, closed-form axis-aligned IOU, an index-permutation
//! 90° rotation, and central finite differences. Nothing in the production
//! path calls these; they exist so the self-test command and the test suites
//! can check the real implementations against a second route.

use crate::geometry::{rect_vertices, Grasp};
use crate::tensor::Tensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monte Carlo IOU: uniform samples over the joint bounding box, counting
/// membership in each rectangle via the analytic point-in-rectangle test.
pub fn monte_carlo_iou(a: &Grasp, b: &Grasp, samples: usize, seed: u64) -> f64 {
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for v in rect_vertices(a).iter().chain(rect_vertices(b).iter()) {
        for d in 0..2 {
            min[d] = min[d].min(v[d]);
            max[d] = max[d].max(v[d]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut in_a, mut in_b, mut in_both) = (0u64, 0u64, 0u64);
    for _ in 0..samples {
        let p = [rng.gen_range(min[0]..max[0]), rng.gen_range(min[1]..max[1])];
        let pa = a.contains(p);
        let pb = b.contains(p);
        in_a += pa as u64;
        in_b += pb as u64;
        in_both += (pa && pb) as u64;
    }
    let union = in_a + in_b - in_both;
    if union == 0 {
        0.0
    } else {
        in_both as f64 / union as f64
    }
}

/// Closed-form IOU for two axis-aligned rectangles (`theta = 0` or `90`).
pub fn aligned_iou(a: &Grasp, b: &Grasp) -> f64 {
    let extents = |g: &Grasp| -> (f64, f64) {
        // Extent along x is h when theta = 0 and w when theta = 90.
        if g.theta == 0.0 {
            (g.h, g.w)
        } else {
            assert_eq!(g.theta, 90.0, "aligned_iou expects theta 0 or 90");
            (g.w, g.h)
        }
    };
    let (aw, ah) = extents(a);
    let (bw, bh) = extents(b);
    let ox = (a.x + aw / 2.0).min(b.x + bw / 2.0) - (a.x - aw / 2.0).max(b.x - bw / 2.0);
    let oy = (a.y + ah / 2.0).min(b.y + bh / 2.0) - (a.y - ah / 2.0).max(b.y - bh / 2.0);
    if ox <= 0.0 || oy <= 0.0 {
        return 0.0;
    }
    let inter = ox * oy;
    inter / (aw * ah + bw * bh - inter)
}

/// Exact 90° counter-clockwise rotation of a kernel by pure index remapping,
/// about the central element of an odd square kernel. No interpolation, so it
/// is an elementwise-exact reference for the bilinear rotation at r = 2.
pub fn rot90_permutation(kernel: &Tensor) -> Tensor {
    let k = kernel.height();
    assert_eq!(k, kernel.width(), "kernel must be square");
    assert_eq!(k % 2, 1, "kernel size must be odd");
    let c = (k - 1) as i64 / 2;
    let mut out = Tensor::zeros(k, k, kernel.channels());
    for y in 0..k as i64 {
        for x in 0..k as i64 {
            // Destination (dx, dy) relative to center pulls from source
            // rotated by -90°: (sx, sy) = (dy, -dx).
            let sx = c + (y - c);
            let sy = c - (x - c);
            for ch in 0..kernel.channels() {
                out.set(y as usize, x as usize, ch, kernel.at(sy as usize, sx as usize, ch));
            }
        }
    }
    out
}

/// Central finite difference of a scalar function at `x` with step `eps`.
pub fn central_difference(mut f: impl FnMut(f64) -> f64, x: f64, eps: f64) -> f64 {
    (f(x + eps) - f(x - eps)) / (2.0 * eps)
}

/// Relative error between an analytic and a numeric gradient entry, with an
/// absolute floor so near-zero pairs compare sanely.
pub fn gradient_rel_error(analytic: f64, numeric: f64) -> f64 {
    let scale = analytic.abs().max(numeric.abs());
    if scale < 1e-7 {
        // Both effectively zero for a loss of order one.
        return 0.0;
    }
    (analytic - numeric).abs() / scale
}
