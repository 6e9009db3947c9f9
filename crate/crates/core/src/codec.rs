//! Grasp ⇄ network-output codec: anchor boxes, the sigmoid/exp
//! reparametrization of (x, y, w, h), three angle prediction modes, and the
//! per-cell target grid the loss trains against.
//!
//! Raw head layout: the head tensor is S×S×(A·D) with one D-channel block
//! per anchor. Within a block:
//!
//! | channels | meaning                                  |
//! |----------|------------------------------------------|
//! | 0..4     | t^x, t^y, t^w, t^h                       |
//! | 4        | t^z (graspable logit)                    |
//! | 5..      | angle channels, mode dependent           |
//!
//! Angle channels: regression uses one channel (θ = 180°·σ(t)); classification
//! uses 18 logits over {0°,10°,…,170°}; rotation anchors use three residual
//! channels followed by three anchor logits (θ = θ_a + 30°·t_r).

use crate::geometry::{normalize_angle, Grasp};
use crate::tensor::{logit, sigmoid, softmax, Tensor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("grasp center ({x:.2}, {y:.2}) lies outside the {s}x{s} grid")]
    CenterOutsideGrid { x: f64, y: f64, s: usize },
    #[error("head tensor is {h}x{w}x{c}, expected square spatial size and {expected} channels")]
    HeadShape { h: usize, w: usize, c: usize, expected: usize },
    #[error("anchor set must be nonempty with positive extents")]
    BadAnchorSet,
}

/// Predefined (p_w, p_h) anchor priors in grid-cell units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorSet {
    boxes: Vec<(f64, f64)>,
}

impl AnchorSet {
    pub fn new(boxes: Vec<(f64, f64)>) -> Result<Self, CodecError> {
        if boxes.is_empty() || boxes.iter().any(|&(w, h)| w <= 0.0 || h <= 0.0) {
            return Err(CodecError::BadAnchorSet);
        }
        Ok(AnchorSet { boxes })
    }

    /// The seven-ratio anchor preset.
    pub fn multi() -> Self {
        AnchorSet {
            boxes: vec![
                (0.76, 1.99),
                (0.76, 3.2),
                (1.99, 0.76),
                (1.99, 1.99),
                (1.99, 3.2),
                (3.2, 3.2),
                (3.2, 0.76),
            ],
        }
    }

    /// The single 1:1 anchor preset.
    pub fn single() -> Self {
        AnchorSet { boxes: vec![(1.99, 1.99)] }
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> &[(f64, f64)] {
        &self.boxes
    }

    /// Index of the anchor maximizing axis-aligned IOU with a centered
    /// (w, h) box; ties resolve to the lowest index.
    pub fn responsible_anchor(&self, w: f64, h: f64) -> usize {
        let mut best = 0;
        let mut best_iou = -1.0;
        for (i, &(pw, ph)) in self.boxes.iter().enumerate() {
            let inter = w.min(pw) * h.min(ph);
            let iou = inter / (w * h + pw * ph - inter);
            if iou > best_iou {
                best_iou = iou;
                best = i;
            }
        }
        best
    }
}

/// How the head predicts the grasp angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleMode {
    /// One channel, θ = 180°·σ(t).
    Regression,
    /// 18 logits over 10° bins.
    Classification,
    /// Three rotation anchors {30°, 90°, 150°} with regressed residuals.
    RotationAnchor,
}

pub const CLS_BINS: usize = 18;
pub const CLS_BIN_DEG: f64 = 10.0;
pub const ROT_ANCHORS_DEG: [f64; 3] = [30.0, 90.0, 150.0];
/// Residuals are expressed in units of this half-range: θ_r = 30°·t.
pub const ROT_RESIDUAL_DEG: f64 = 30.0;
/// Intermediate-head coarse angle bins, matching the four kernel rotations.
pub const COARSE_BINS_DEG: [f64; 4] = [0.0, 45.0, 90.0, 135.0];

impl AngleMode {
    /// Angle channels per anchor block.
    pub fn angle_channels(self) -> usize {
        match self {
            AngleMode::Regression => 1,
            AngleMode::Classification => CLS_BINS,
            AngleMode::RotationAnchor => 2 * ROT_ANCHORS_DEG.len(),
        }
    }

    /// Total channels per anchor block: t^x, t^y, t^w, t^h, t^z + angle.
    pub fn channels_per_anchor(self) -> usize {
        5 + self.angle_channels()
    }
}

/// Head channel count for a full configuration.
pub fn head_channels(anchors: &AnchorSet, mode: AngleMode) -> usize {
    anchors.len() * mode.channels_per_anchor()
}

/// Nearest 10° classification bin, wrapping mod 180°.
pub fn cls_bin_for(theta: f64) -> usize {
    (normalize_angle(theta) / CLS_BIN_DEG).round() as usize % CLS_BINS
}

/// Nearest 45° coarse bin, wrapping mod 180°.
pub fn coarse_bin_for(theta: f64) -> usize {
    (normalize_angle(theta) / 45.0).round() as usize % COARSE_BINS_DEG.len()
}

/// Signed angular difference `theta - anchor` wrapped into [-90°, 90°).
fn wrapped_residual(theta: f64, anchor: f64) -> f64 {
    (theta - anchor + 90.0).rem_euclid(180.0) - 90.0
}

/// Nearest rotation anchor and its residual; the residual of the nearest
/// anchor always lies in [-30°, 30°].
pub fn rot_anchor_for(theta: f64) -> (usize, f64) {
    let mut best = 0;
    let mut best_abs = f64::INFINITY;
    for (i, &a) in ROT_ANCHORS_DEG.iter().enumerate() {
        let r = wrapped_residual(theta, a);
        if r.abs() < best_abs {
            best_abs = r.abs();
            best = i;
        }
    }
    (best, wrapped_residual(theta, ROT_ANCHORS_DEG[best]))
}

/// Per-mode angle target for one assigned grasp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleTarget {
    Regression { t_theta: f64 },
    Classification { bin: usize },
    Rotation { anchor: usize, t_residual: f64 },
}

impl AngleTarget {
    pub fn for_theta(mode: AngleMode, theta: f64) -> Self {
        match mode {
            AngleMode::Regression => {
                AngleTarget::Regression { t_theta: logit(normalize_angle(theta) / 180.0) }
            }
            AngleMode::Classification => AngleTarget::Classification { bin: cls_bin_for(theta) },
            AngleMode::RotationAnchor => {
                let (anchor, residual) = rot_anchor_for(theta);
                AngleTarget::Rotation { anchor, t_residual: residual / ROT_RESIDUAL_DEG }
            }
        }
    }

    /// The angle this target decodes back to (the nearest representable value).
    pub fn decoded_theta(&self) -> f64 {
        match *self {
            AngleTarget::Regression { t_theta } => 180.0 * sigmoid(t_theta),
            AngleTarget::Classification { bin } => bin as f64 * CLS_BIN_DEG,
            AngleTarget::Rotation { anchor, t_residual } => {
                normalize_angle(ROT_ANCHORS_DEG[anchor] + ROT_RESIDUAL_DEG * t_residual)
            }
        }
    }
}

/// Training target for one (cell, anchor) slot that owns a ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveTarget {
    pub tx: f64,
    pub ty: f64,
    pub tw: f64,
    pub th: f64,
    pub angle: AngleTarget,
    /// Detection-probability target; starts at 1 and is replaced each step by
    /// the IOU of the current prediction (see the loss module).
    pub z: f64,
    /// The assigned ground truth in grid units, kept exact for the loss.
    pub truth: Grasp,
}

/// Per-cell, per-anchor encoded training targets. A slot is `Some` exactly
/// where the mask m is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetGrid {
    grid_size: usize,
    anchors: AnchorSet,
    mode: AngleMode,
    slots: Vec<Option<ActiveTarget>>,
}

impl TargetGrid {
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn anchors(&self) -> &AnchorSet {
        &self.anchors
    }

    pub fn mode(&self) -> AngleMode {
        self.mode
    }

    fn slot_index(&self, cx: usize, cy: usize, anchor: usize) -> usize {
        (cy * self.grid_size + cx) * self.anchors.len() + anchor
    }

    pub fn slot(&self, cx: usize, cy: usize, anchor: usize) -> Option<&ActiveTarget> {
        self.slots[self.slot_index(cx, cy, anchor)].as_ref()
    }

    /// Iterate active slots as `(cx, cy, anchor, target)`.
    pub fn active(&self) -> impl Iterator<Item = (usize, usize, usize, &ActiveTarget)> {
        let s = self.grid_size;
        let a = self.anchors.len();
        self.slots.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref().map(|t| {
                let cell = i / a;
                (cell % s, cell / s, i % a, t)
            })
        })
    }

    pub fn active_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Assemble a raw head tensor that decodes back to the encoded truths:
    /// target values in active slots (angle targets become one-hot logits),
    /// zeros elsewhere.
    pub fn to_raw_head(&self) -> Tensor {
        let d = self.mode.channels_per_anchor();
        let mut raw = Tensor::zeros(self.grid_size, self.grid_size, self.anchors.len() * d);
        for (cx, cy, anchor, t) in self.active() {
            let base = anchor * d;
            let px = raw.pixel_mut(cy, cx);
            px[base] = t.tx;
            px[base + 1] = t.ty;
            px[base + 2] = t.tw;
            px[base + 3] = t.th;
            px[base + 4] = logit(t.z);
            match t.angle {
                AngleTarget::Regression { t_theta } => px[base + 5] = t_theta,
                AngleTarget::Classification { bin } => px[base + 5 + bin] = 1.0,
                AngleTarget::Rotation { anchor: ra, t_residual } => {
                    px[base + 5 + ra] = t_residual;
                    px[base + 5 + ROT_ANCHORS_DEG.len() + ra] = 1.0;
                }
            }
        }
        raw
    }
}

/// Encode ground-truth grasps (image units) into per-slot targets. The
/// responsible cell contains the center; the responsible anchor maximizes
/// axis-aligned IOU with the truth's extents. When two truths collide on the
/// same slot the larger rectangle wins and the loser is dropped with a
/// warning.
pub fn encode(
    truths: &[Grasp],
    grid_size: usize,
    anchors: &AnchorSet,
    mode: AngleMode,
    cell_pixels: f64,
) -> Result<TargetGrid, CodecError> {
    assert!(grid_size >= 1 && cell_pixels > 0.0);
    let mut grid = TargetGrid {
        grid_size,
        anchors: anchors.clone(),
        mode,
        slots: vec![None; grid_size * grid_size * anchors.len()],
    };
    for truth in truths {
        let g = truth.scaled(1.0 / cell_pixels);
        if !(0.0..grid_size as f64).contains(&g.x) || !(0.0..grid_size as f64).contains(&g.y) {
            return Err(CodecError::CenterOutsideGrid { x: g.x, y: g.y, s: grid_size });
        }
        let cx = g.x.floor() as usize;
        let cy = g.y.floor() as usize;
        let anchor = anchors.responsible_anchor(g.w, g.h);
        let (pw, ph) = anchors.boxes()[anchor];
        let target = ActiveTarget {
            tx: logit(g.x - cx as f64),
            ty: logit(g.y - cy as f64),
            tw: (g.w / pw).ln(),
            th: (g.h / ph).ln(),
            angle: AngleTarget::for_theta(mode, g.theta),
            z: 1.0,
            truth: g,
        };
        let idx = grid.slot_index(cx, cy, anchor);
        match &grid.slots[idx] {
            Some(existing) if existing.truth.area() >= g.area() => {
                log::warn!(
                    "dropping grasp at ({:.1}, {:.1}): slot ({cx}, {cy}, {anchor}) already owned by a larger truth",
                    truth.x,
                    truth.y
                );
            }
            Some(_) => {
                log::warn!(
                    "slot ({cx}, {cy}, {anchor}) reassigned to the larger truth at ({:.1}, {:.1})",
                    truth.x,
                    truth.y
                );
                grid.slots[idx] = Some(target);
            }
            None => grid.slots[idx] = Some(target),
        }
    }
    Ok(grid)
}

/// One decoded slot in grid units, before scaling to image units.
#[derive(Debug, Clone, Copy)]
pub struct DecodedSlot {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub theta: f64,
    pub z: f64,
}

/// Decode one anchor block (`values[base..base+D]`) at a given cell. This is
/// the single place the reparametrization formulas live; the loss reuses it.
pub fn decode_slot(
    values: &[f64],
    base: usize,
    cell: (usize, usize),
    anchor: (f64, f64),
    mode: AngleMode,
) -> DecodedSlot {
    let theta = match mode {
        AngleMode::Regression => 180.0 * sigmoid(values[base + 5]),
        AngleMode::Classification => {
            let logits = &values[base + 5..base + 5 + CLS_BINS];
            argmax(logits) as f64 * CLS_BIN_DEG
        }
        AngleMode::RotationAnchor => {
            let n = ROT_ANCHORS_DEG.len();
            let residuals = &values[base + 5..base + 5 + n];
            let logits = &values[base + 5 + n..base + 5 + 2 * n];
            let a = argmax(logits);
            normalize_angle(ROT_ANCHORS_DEG[a] + ROT_RESIDUAL_DEG * residuals[a])
        }
    };
    DecodedSlot {
        x: cell.0 as f64 + sigmoid(values[base]),
        y: cell.1 as f64 + sigmoid(values[base + 1]),
        w: anchor.0 * values[base + 2].exp(),
        h: anchor.1 * values[base + 3].exp(),
        theta: normalize_angle(theta),
        z: sigmoid(values[base + 4]),
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Decode a raw head tensor into one grasp per (cell, anchor), scaled from
/// grid units to image units by `cell_pixels`.
pub fn decode(
    raw: &Tensor,
    anchors: &AnchorSet,
    mode: AngleMode,
    cell_pixels: f64,
) -> Result<Vec<Grasp>, CodecError> {
    let (h, w, c) = raw.shape();
    let expected = head_channels(anchors, mode);
    if h != w || c != expected {
        return Err(CodecError::HeadShape { h, w, c, expected });
    }
    let d = mode.channels_per_anchor();
    let mut out = Vec::with_capacity(h * w * anchors.len());
    for cy in 0..h {
        for cx in 0..w {
            let values = raw.pixel(cy, cx);
            for (a, &anchor) in anchors.boxes().iter().enumerate() {
                let s = decode_slot(values, a * d, (cx, cy), anchor, mode);
                out.push(
                    Grasp::new(s.x, s.y, s.theta, s.w, s.h).with_z(s.z).scaled(cell_pixels),
                );
            }
        }
    }
    Ok(out)
}

/// All grasps with `z >= threshold`, sorted by descending probability.
/// Ties keep their original order, so the result is deterministic.
pub fn select_grasps(detections: &[Grasp], threshold: f64) -> Vec<Grasp> {
    let mut picked: Vec<Grasp> =
        detections.iter().filter(|g| g.z >= threshold).copied().collect();
    picked.sort_by(|a, b| b.z.partial_cmp(&a.z).expect("probabilities are finite"));
    picked
}

/// The single most probable grasp; first occurrence wins ties.
pub fn best_grasp(detections: &[Grasp]) -> Option<Grasp> {
    detections.iter().fold(None, |best: Option<Grasp>, g| match best {
        Some(b) if b.z >= g.z => Some(b),
        _ => Some(*g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn anchor_presets_match_published_sets() {
        assert_eq!(AnchorSet::multi().len(), 7);
        assert_eq!(AnchorSet::single().boxes(), &[(1.99, 1.99)]);
    }

    #[test]
    fn zero_offsets_decode_to_cell_center() {
        let values = vec![0.0; 6];
        let s = decode_slot(&values, 0, (2, 3), (1.99, 1.99), AngleMode::Regression);
        assert_eq!((s.x, s.y), (2.5, 3.5));
    }

    #[test]
    fn zero_log_scale_decodes_to_anchor_size() {
        let values = vec![0.0; 6];
        let s = decode_slot(&values, 0, (0, 0), (1.99, 1.99), AngleMode::Regression);
        assert_eq!((s.w, s.h), (1.99, 1.99));
    }

    #[test]
    fn cls_argmax_at_index_three_is_thirty_degrees() {
        let mut values = vec![0.0; 23];
        values[5 + 3] = 2.0;
        let s = decode_slot(&values, 0, (0, 0), (1.0, 1.0), AngleMode::Classification);
        assert_eq!(s.theta, 30.0);
    }

    #[test]
    fn cls_decode_ignores_constant_logit_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let mut values = vec![0.0; 23];
            for v in values.iter_mut().skip(5) {
                *v = rng.gen_range(-3.0..3.0);
            }
            let before = decode_slot(&values, 0, (0, 0), (1.0, 1.0), AngleMode::Classification);
            for v in values.iter_mut().skip(5) {
                *v += 17.25;
            }
            let after = decode_slot(&values, 0, (0, 0), (1.0, 1.0), AngleMode::Classification);
            assert_eq!(before.theta, after.theta);
        }
    }

    #[test]
    fn rot_decode_adds_residual_to_chosen_anchor() {
        // Anchor 1 (90°) chosen, residual -10°.
        let mut values = vec![0.0; 11];
        values[5 + 1] = -10.0 / ROT_RESIDUAL_DEG;
        values[5 + 3 + 1] = 3.0;
        let s = decode_slot(&values, 0, (0, 0), (1.0, 1.0), AngleMode::RotationAnchor);
        assert!((s.theta - 80.0).abs() < 1e-12);
    }

    #[test]
    fn encode_round_trip_of_the_identity_case() {
        let anchors = AnchorSet::single();
        let g = Grasp::new(2.5, 3.5, 0.0, 1.99, 1.99);
        let grid = encode(&[g], 12, &anchors, AngleMode::Regression, 1.0).unwrap();
        let t = grid.slot(2, 3, 0).expect("slot (2,3) must be active");
        assert!(t.tx.abs() < 1e-9 && t.ty.abs() < 1e-9);
        assert!(t.tw.abs() < 1e-12 && t.th.abs() < 1e-12);
        assert_eq!(grid.active_count(), 1);
    }

    #[test]
    fn cls_target_picks_nearest_bin() {
        assert_eq!(cls_bin_for(33.0), 3);
        assert_eq!(cls_bin_for(177.0), 0);
        assert_eq!(cls_bin_for(4.9), 0);
    }

    #[test]
    fn rot_target_decomposes_angle() {
        let (anchor, residual) = rot_anchor_for(33.0);
        assert_eq!(ROT_ANCHORS_DEG[anchor], 30.0);
        assert!((residual - 3.0).abs() < 1e-12);
        // Wrap-around case: 175° is 25° past the 150° anchor.
        let (anchor, residual) = rot_anchor_for(175.0);
        assert_eq!(ROT_ANCHORS_DEG[anchor], 150.0);
        assert!((residual - 25.0).abs() < 1e-12);
        // And 5° wraps to the 30° anchor from below.
        let (anchor, residual) = rot_anchor_for(5.0);
        assert_eq!(ROT_ANCHORS_DEG[anchor], 30.0);
        assert!((residual + 25.0).abs() < 1e-12);
    }

    #[test]
    fn encode_rejects_center_outside_grid() {
        let anchors = AnchorSet::single();
        let g = Grasp::new(200.0, 3.0, 0.0, 2.0, 2.0);
        let err = encode(&[g], 12, &anchors, AngleMode::Classification, 1.0).unwrap_err();
        assert!(matches!(err, CodecError::CenterOutsideGrid { .. }));
    }

    #[test]
    fn colliding_truths_keep_the_larger_rectangle() {
        let anchors = AnchorSet::single();
        let small = Grasp::new(2.2, 3.2, 10.0, 1.5, 1.5);
        let large = Grasp::new(2.7, 3.7, 20.0, 2.5, 2.5);
        for order in [[small, large], [large, small]] {
            let grid = encode(&order, 12, &anchors, AngleMode::Classification, 1.0).unwrap();
            assert_eq!(grid.active_count(), 1);
            let t = grid.slot(2, 3, 0).unwrap();
            assert_eq!(t.truth.w, 2.5);
        }
    }

    fn representable_theta(rng: &mut ChaCha8Rng, mode: AngleMode) -> f64 {
        match mode {
            AngleMode::Classification => rng.gen_range(0..CLS_BINS) as f64 * CLS_BIN_DEG,
            _ => rng.gen_range(0.01..179.99),
        }
    }

    #[test]
    fn decode_encode_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cell_pixels = 8.0;
        for mode in [AngleMode::Regression, AngleMode::Classification, AngleMode::RotationAnchor] {
            for (anchors, s) in [(AnchorSet::single(), 12), (AnchorSet::multi(), 12)] {
                for _ in 0..200 {
                    let g = Grasp::new(
                        rng.gen_range(0.05..(s as f64 - 0.05)) * cell_pixels,
                        rng.gen_range(0.05..(s as f64 - 0.05)) * cell_pixels,
                        representable_theta(&mut rng, mode),
                        rng.gen_range(0.8..3.4) * cell_pixels,
                        rng.gen_range(0.8..3.4) * cell_pixels,
                    );
                    let grid = encode(&[g], s, &anchors, mode, cell_pixels).unwrap();
                    let raw = grid.to_raw_head();
                    let decoded = decode(&raw, &anchors, mode, cell_pixels).unwrap();
                    let best = decoded
                        .iter()
                        .min_by(|a, b| {
                            let da = (a.x - g.x).abs() + (a.y - g.y).abs();
                            let db = (b.x - g.x).abs() + (b.y - g.y).abs();
                            da.partial_cmp(&db).unwrap()
                        })
                        .unwrap();
                    assert!((best.x - g.x).abs() < 1e-9, "{mode:?} x");
                    assert!((best.y - g.y).abs() < 1e-9, "{mode:?} y");
                    assert!((best.w - g.w).abs() < 1e-9, "{mode:?} w");
                    assert!((best.h - g.h).abs() < 1e-9, "{mode:?} h");
                    let expected_theta = match mode {
                        AngleMode::Classification => cls_bin_for(g.theta) as f64 * CLS_BIN_DEG,
                        _ => g.theta,
                    };
                    assert!(
                        (best.theta - expected_theta).abs() < 1e-9,
                        "{mode:?} theta {} vs {}",
                        best.theta,
                        expected_theta
                    );
                }
            }
        }
    }

    #[test]
    fn decoded_values_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let anchors = AnchorSet::multi();
        let mode = AngleMode::Classification;
        let c = head_channels(&anchors, mode);
        let data: Vec<f64> = (0..4 * 4 * c).map(|_| rng.gen_range(-6.0..6.0)).collect();
        let raw = Tensor::from_vec(4, 4, c, data).unwrap();
        let grasps = decode(&raw, &anchors, mode, 1.0).unwrap();
        assert_eq!(grasps.len(), 4 * 4 * anchors.len());
        for (i, g) in grasps.iter().enumerate() {
            let cell = i / anchors.len();
            let (cx, cy) = ((cell % 4) as f64, (cell / 4) as f64);
            assert!(g.x > cx && g.x < cx + 1.0, "x strictly inside its cell");
            assert!(g.y > cy && g.y < cy + 1.0);
            assert!(g.w > 0.0 && g.h > 0.0);
            assert!((0.0..180.0).contains(&g.theta));
            assert!((0.0..=1.0).contains(&g.z));
        }
    }

    #[test]
    fn decode_rejects_wrong_channel_count() {
        let anchors = AnchorSet::single();
        let raw = Tensor::zeros(4, 4, 7);
        assert!(matches!(
            decode(&raw, &anchors, AngleMode::Regression, 1.0),
            Err(CodecError::HeadShape { .. })
        ));
    }

    #[test]
    fn select_grasps_filters_and_sorts() {
        let mk = |z: f64| Grasp::new(1.0, 1.0, 0.0, 1.0, 1.0).with_z(z);
        let detections = vec![mk(0.3), mk(0.9), mk(0.1)];
        let picked = select_grasps(&detections, 0.25);
        assert_eq!(picked.iter().map(|g| g.z).collect::<Vec<_>>(), vec![0.9, 0.3]);
        assert!(select_grasps(&[mk(0.0), mk(0.0)], 0.25).is_empty());
        assert_eq!(select_grasps(&detections, 0.0).len(), 3);
        assert_eq!(best_grasp(&detections).unwrap().z, 0.9);
        assert!(best_grasp(&[]).is_none());
    }
}
