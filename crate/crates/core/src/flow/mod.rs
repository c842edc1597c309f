//! Dense optical flow: the field type, a built-in pyramidal Horn–Schunck
//! estimator, and the Middlebury `.flo` codec for externally computed flow.

mod flo;
mod horn_schunck;

pub use flo::{decode_flo, encode_flo, read_flo, write_flo, FLO_MAGIC};
pub use horn_schunck::{estimate_flow, FlowParams};

use crate::error::{Error, Result};

/// Per-pixel displacement field, row-major with the top row first.
///
/// For a field estimated from `source` to `target`, pixel `(x, y)` of the
/// source is found at `(x + u, y + v)` in the target.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowField {
    width: u32,
    height: u32,
    u: Vec<f32>,
    v: Vec<f32>,
}

impl FlowField {
    pub fn new(width: u32, height: u32, u: Vec<f32>, v: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions {
                width: width as i64,
                height: height as i64,
            });
        }
        let n = width as usize * height as usize;
        if u.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} flow needs {n} components, got u={} v={}",
                u.len(),
                v.len()
            )));
        }
        Ok(Self {
            width,
            height,
            u,
            v,
        })
    }

    pub fn zeros(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        Self {
            width,
            height,
            u: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn constant(width: u32, height: u32, u: f32, v: f32) -> Self {
        let n = width as usize * height as usize;
        Self {
            width,
            height,
            u: vec![u; n],
            v: vec![v; n],
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn u(&self) -> &[f32] {
        &self.u
    }

    pub fn v(&self) -> &[f32] {
        &self.v
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> (f32, f32) {
        let i = y as usize * self.width as usize + x as usize;
        (self.u[i], self.v[i])
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|c| c.is_finite())
    }

    pub fn mean_magnitude(&self) -> f64 {
        let total: f64 = self
            .u
            .iter()
            .zip(&self.v)
            .map(|(&u, &v)| (u as f64).hypot(v as f64))
            .sum();
        total / self.u.len() as f64
    }
}
