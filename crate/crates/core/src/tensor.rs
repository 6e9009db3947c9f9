//! Dense row-major tensors and the small set of numeric primitives the
//! detector is built from: 2D cross-correlation, sigmoid/softmax,
//! cross-entropy and bilinear sampling. Everything is `f64`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("data length {got} does not match shape {h}x{w}x{c}")]
    DataLength { h: usize, w: usize, c: usize, got: usize },
    #[error("kernel channel count {kernel} does not match input channel count {input}")]
    ChannelMismatch { input: usize, kernel: usize },
    #[error("kernel must be square and odd-sized, got {h}x{w}")]
    BadKernelSize { h: usize, w: usize },
    #[error("kernels in one convolution must share a shape")]
    MixedKernelShapes,
    #[error("stride must be >= 1")]
    ZeroStride,
    #[error("valid convolution needs input at least as large as the kernel ({ih}x{iw} vs {k}x{k})")]
    InputTooSmall { ih: usize, iw: usize, k: usize },
    #[error("expected shape {eh}x{ew}x{ec}, got {h}x{w}x{c}")]
    ShapeMismatch { eh: usize, ew: usize, ec: usize, h: usize, w: usize, c: usize },
}

/// Zero-padding behaviour of [`conv2d`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Padding {
    /// Zero-pad so that stride-1 output has the input's spatial size.
    Same,
    /// No padding; output shrinks by `kernel - 1`.
    Valid,
}

/// Dense H×W×C array, row-major with channels innermost:
/// `data[(y*width + x)*channels + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Tensor { height, width, channels, data: vec![0.0; height * width * channels] }
    }

    pub fn from_vec(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Result<Self, TensorError> {
        if data.len() != height * width * channels {
            return Err(TensorError::DataLength { h: height, w: width, c: channels, got: data.len() });
        }
        Ok(Tensor { height, width, channels, data })
    }

    /// Single-channel tensor from nested rows; rows must be equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == width), "ragged rows");
        let data = rows.iter().flatten().copied().collect();
        Tensor { height, width, channels: 1, data }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn index(&self, y: usize, x: usize, c: usize) -> usize {
        debug_assert!(y < self.height && x < self.width && c < self.channels);
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[self.index(y, x, c)]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, c: usize, v: f64) {
        let i = self.index(y, x, c);
        self.data[i] = v;
    }

    /// Contiguous channel slice at one pixel.
    #[inline]
    pub fn pixel(&self, y: usize, x: usize) -> &[f64] {
        let base = (y * self.width + x) * self.channels;
        &self.data[base..base + self.channels]
    }

    #[inline]
    pub fn pixel_mut(&mut self, y: usize, x: usize) -> &mut [f64] {
        let base = (y * self.width + x) * self.channels;
        &mut self.data[base..base + self.channels]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor {
        Tensor {
            height: self.height,
            width: self.width,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add_assign");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn same_shape(&self, other: &Tensor) -> Result<(), TensorError> {
        if self.shape() != other.shape() {
            let (eh, ew, ec) = self.shape();
            let (h, w, c) = other.shape();
            return Err(TensorError::ShapeMismatch { eh, ew, ec, h, w, c });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Concatenate along the channel axis.
    pub fn concat_channels(a: &Tensor, b: &Tensor) -> Tensor {
        assert_eq!((a.height, a.width), (b.height, b.width), "spatial mismatch in concat");
        let channels = a.channels + b.channels;
        let mut out = Tensor::zeros(a.height, a.width, channels);
        for y in 0..a.height {
            for x in 0..a.width {
                let dst = out.pixel_mut(y, x);
                dst[..a.channels].copy_from_slice(a.pixel(y, x));
                dst[a.channels..].copy_from_slice(b.pixel(y, x));
            }
        }
        out
    }

    /// 90° counter-clockwise rotation of a square tensor about its center:
    /// `out[y][x] = in[N-1-x][y]`. Matches the kernel-rotation convention at
    /// r = 2 so equivariance statements can be written in one vocabulary.
    pub fn rot90(&self) -> Tensor {
        assert_eq!(self.height, self.width, "rot90 requires a square tensor");
        let n = self.height;
        let mut out = Tensor::zeros(n, n, self.channels);
        for y in 0..n {
            for x in 0..n {
                let src = self.pixel(n - 1 - x, y);
                out.pixel_mut(y, x).copy_from_slice(src);
            }
        }
        out
    }
}

/// Logistic sigmoid.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Derivative of the sigmoid expressed through its output value.
#[inline]
pub fn sigmoid_prime_from_output(s: f64) -> f64 {
    s * (1.0 - s)
}

/// Inverse sigmoid. Inputs are clamped away from {0, 1} so the result is
/// always finite; the clamp is far below every tolerance used downstream.
#[inline]
pub fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    (p / (1.0 - p)).ln()
}

/// Numerically stable softmax.
pub fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = v.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

const CROSS_ENTROPY_FLOOR: f64 = 1e-12;

/// `−Σ target_k · ln predicted_k`, with predictions clamped to
/// `[1e-12, 1]` before the log so a confident miss stays finite.
pub fn cross_entropy(target: &[f64], predicted: &[f64]) -> f64 {
    assert_eq!(target.len(), predicted.len(), "cross_entropy length mismatch");
    target
        .iter()
        .zip(predicted)
        .map(|(&t, &p)| {
            if t == 0.0 {
                0.0
            } else {
                -t * p.clamp(CROSS_ENTROPY_FLOOR, 1.0).ln()
            }
        })
        .sum()
}

/// Bilinear sample of one channel at continuous coordinates `(x, y)`;
/// integer coordinates land on grid nodes, everything outside reads 0.
pub fn bilinear_sample(grid: &Tensor, x: f64, y: f64, channel: usize) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let x0 = x0 as i64;
    let y0 = y0 as i64;

    let fetch = |yy: i64, xx: i64| -> f64 {
        if yy < 0 || xx < 0 || yy >= grid.height as i64 || xx >= grid.width as i64 {
            0.0
        } else {
            grid.at(yy as usize, xx as usize, channel)
        }
    };

    fetch(y0, x0) * (1.0 - fx) * (1.0 - fy)
        + fetch(y0, x0 + 1) * fx * (1.0 - fy)
        + fetch(y0 + 1, x0) * (1.0 - fx) * fy
        + fetch(y0 + 1, x0 + 1) * fx * fy
}

fn check_kernels(input: &Tensor, kernels: &[Tensor]) -> Result<usize, TensorError> {
    let first = kernels.first().expect("conv2d needs at least one kernel");
    let k = first.height;
    if first.height != first.width || k % 2 == 0 {
        return Err(TensorError::BadKernelSize { h: first.height, w: first.width });
    }
    if kernels.iter().any(|kr| kr.shape() != first.shape()) {
        return Err(TensorError::MixedKernelShapes);
    }
    if first.channels != input.channels {
        return Err(TensorError::ChannelMismatch { input: input.channels, kernel: first.channels });
    }
    Ok(k)
}

/// Output spatial size of a convolution.
pub fn conv_output_size(
    input: usize,
    kernel: usize,
    padding: Padding,
    stride: usize,
) -> usize {
    let padded = match padding {
        Padding::Same => input + kernel - 1,
        Padding::Valid => input,
    };
    (padded - kernel) / stride + 1
}

/// 2D cross-correlation of `input` (H×W×C) with one K×K×C kernel per output
/// channel. `Same` keeps the spatial size at stride 1 via zero padding.
pub fn conv2d(
    input: &Tensor,
    kernels: &[Tensor],
    padding: Padding,
    stride: usize,
) -> Result<Tensor, TensorError> {
    if stride == 0 {
        return Err(TensorError::ZeroStride);
    }
    let k = check_kernels(input, kernels)?;
    if padding == Padding::Valid && (input.height < k || input.width < k) {
        return Err(TensorError::InputTooSmall { ih: input.height, iw: input.width, k });
    }
    let pad = match padding {
        Padding::Same => (k - 1) / 2,
        Padding::Valid => 0,
    } as i64;

    let out_h = conv_output_size(input.height, k, padding, stride);
    let out_w = conv_output_size(input.width, k, padding, stride);
    let out_c = kernels.len();
    let c = input.channels;
    let mut out = Tensor::zeros(out_h, out_w, out_c);

    for oy in 0..out_h {
        let iy0 = (oy * stride) as i64 - pad;
        for ox in 0..out_w {
            let ix0 = (ox * stride) as i64 - pad;
            let acc = out.pixel_mut(oy, ox);
            for ky in 0..k {
                let iy = iy0 + ky as i64;
                if iy < 0 || iy >= input.height as i64 {
                    continue;
                }
                for kx in 0..k {
                    let ix = ix0 + kx as i64;
                    if ix < 0 || ix >= input.width as i64 {
                        continue;
                    }
                    let in_px = input.pixel(iy as usize, ix as usize);
                    for (o, kernel) in kernels.iter().enumerate() {
                        let k_px = kernel.pixel(ky, kx);
                        let mut sum = 0.0;
                        for ci in 0..c {
                            sum += in_px[ci] * k_px[ci];
                        }
                        acc[o] += sum;
                    }
                }
            }
        }
    }
    Ok(out)
}
