//! remgrasp — oriented-rectangle grasp detection with a rotation ensemble
//! module, built as a self-contained f64 stack: tensor primitives, rotated
//! kernel banks, anchor-box grasp encoding, a composite detection loss with
//! hand-written backpropagation, Cornell-format data handling and an
//! evaluation harness.

pub mod codec;
pub mod geometry;
pub mod oracles;
pub mod tensor;

pub use codec::{AngleMode, AnchorSet, TargetGrid};
pub use geometry::{grasp_success, rect_vertices, rotated_iou, Grasp};
pub use tensor::{Padding, Tensor, TensorError};
