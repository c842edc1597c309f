//! Coarse-to-fine Horn–Schunck estimator.
//!
//! Each pyramid level warps the target by the current flow estimate,
//! linearises the brightness constancy term around it and runs a fixed
//! number of Jacobi sweeps on the total flow. Sampling clamps to the edge.

use super::FlowField;
use crate::error::{Error, Result};
use crate::raster::LumaImage;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowParams {
    /// Size ratio between consecutive pyramid levels.
    pub scale_factor: f64,
    /// Smallest allowed side length of any level.
    pub min_level_size: u32,
    pub max_levels: usize,
    /// Jacobi sweeps per level.
    pub iterations: usize,
    /// Weight of the brightness-constancy term relative to the smoothness
    /// term, for intensities in [0, 1]. The classic Horn–Schunck `α²` is
    /// its reciprocal.
    pub data_weight: f32,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            scale_factor: 0.5,
            min_level_size: 16,
            max_levels: 5,
            iterations: 100,
            data_weight: 15.0,
        }
    }
}

#[derive(Clone)]
struct Grid {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl Grid {
    fn from_luma(img: &LumaImage) -> Self {
        Self {
            width: img.width() as usize,
            height: img.height() as usize,
            data: img.data().to_vec(),
        }
    }

    fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    #[inline]
    fn at(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    #[inline]
    fn at_clamped(&self, x: isize, y: isize) -> f32 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.at(x, y)
    }

    fn sample(&self, x: f32, y: f32) -> f32 {
        let x = x.clamp(0.0, (self.width - 1) as f32);
        let y = y.clamp(0.0, (self.height - 1) as f32);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f32;
        let fy = y - y0 as f32;
        let top = self.at(x0, y0) * (1.0 - fx) + self.at(x1, y0) * fx;
        let bottom = self.at(x0, y1) * (1.0 - fx) + self.at(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Separable [1 2 1]/4 smoothing.
    fn smooth(&self) -> Grid {
        let (w, h) = (self.width as isize, self.height as isize);
        let mut tmp = Grid::zeros(self.width, self.height);
        for y in 0..h {
            for x in 0..w {
                tmp.data[(y * w + x) as usize] = 0.25 * self.at_clamped(x - 1, y)
                    + 0.5 * self.at_clamped(x, y)
                    + 0.25 * self.at_clamped(x + 1, y);
            }
        }
        let mut out = Grid::zeros(self.width, self.height);
        for y in 0..h {
            for x in 0..w {
                out.data[(y * w + x) as usize] = 0.25 * tmp.at_clamped(x, y - 1)
                    + 0.5 * tmp.at_clamped(x, y)
                    + 0.25 * tmp.at_clamped(x, y + 1);
            }
        }
        out
    }

    /// Bilinear resample with pixel-centre alignment.
    fn resize(&self, width: usize, height: usize) -> Grid {
        let sx = self.width as f32 / width as f32;
        let sy = self.height as f32 / height as f32;
        let mut out = Grid::zeros(width, height);
        for y in 0..height {
            let src_y = (y as f32 + 0.5) * sy - 0.5;
            for x in 0..width {
                let src_x = (x as f32 + 0.5) * sx - 0.5;
                out.data[y * width + x] = self.sample(src_x, src_y);
            }
        }
        out
    }
}

fn level_dims(width: usize, height: usize, params: &FlowParams) -> Vec<(usize, usize)> {
    let mut dims = vec![(width, height)];
    while dims.len() < params.max_levels.max(1) {
        let &(w, h) = dims.last().unwrap();
        let nw = (w as f64 * params.scale_factor).round() as usize;
        let nh = (h as f64 * params.scale_factor).round() as usize;
        if nw.min(nh) < params.min_level_size as usize || (nw, nh) == (w, h) {
            break;
        }
        dims.push((nw, nh));
    }
    dims
}

fn pyramid(base: Grid, dims: &[(usize, usize)]) -> Vec<Grid> {
    let mut levels = vec![base];
    for &(w, h) in &dims[1..] {
        let next = levels.last().unwrap().smooth().resize(w, h);
        levels.push(next);
    }
    levels
}

/// Estimate the flow that carries `source` onto `target`.
pub fn estimate_flow(
    source: &LumaImage,
    target: &LumaImage,
    params: &FlowParams,
) -> Result<FlowField> {
    if source.dims() != target.dims() {
        return Err(Error::DimensionMismatch(format!(
            "flow inputs differ: {:?} vs {:?}",
            source.dims(),
            target.dims()
        )));
    }
    if !(params.data_weight > 0.0 && params.data_weight.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "data weight must be positive, got {}",
            params.data_weight
        )));
    }
    let (width, height) = source.dims();
    if width.min(height) < params.min_level_size {
        return Err(Error::ImageTooSmall {
            width,
            height,
            min: params.min_level_size,
        });
    }

    let dims = level_dims(width as usize, height as usize, params);
    let src_pyr = pyramid(Grid::from_luma(source), &dims);
    let dst_pyr = pyramid(Grid::from_luma(target), &dims);

    let (cw, ch) = *dims.last().unwrap();
    let mut u = Grid::zeros(cw, ch);
    let mut v = Grid::zeros(cw, ch);
    for level in (0..dims.len()).rev() {
        let (w, h) = dims[level];
        if (u.width, u.height) != (w, h) {
            let rx = w as f32 / u.width as f32;
            let ry = h as f32 / u.height as f32;
            u = u.resize(w, h);
            v = v.resize(w, h);
            u.data.iter_mut().for_each(|c| *c *= rx);
            v.data.iter_mut().for_each(|c| *c *= ry);
        }
        refine_level(&src_pyr[level], &dst_pyr[level], &mut u, &mut v, params);
    }

    FlowField::new(width, height, u.data, v.data)
}

fn refine_level(source: &Grid, target: &Grid, u: &mut Grid, v: &mut Grid, params: &FlowParams) {
    let (w, h) = (source.width, source.height);
    let n = w * h;

    let mut warped = Grid::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            warped.data[i] = target.sample(x as f32 + u.data[i], y as f32 + v.data[i]);
        }
    }

    let mut ix = vec![0.0f32; n];
    let mut iy = vec![0.0f32; n];
    let mut it = vec![0.0f32; n];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            let dx = |g: &Grid| 0.5 * (g.at_clamped(x + 1, y) - g.at_clamped(x - 1, y));
            let dy = |g: &Grid| 0.5 * (g.at_clamped(x, y + 1) - g.at_clamped(x, y - 1));
            ix[i] = 0.5 * (dx(source) + dx(&warped));
            iy[i] = 0.5 * (dy(source) + dy(&warped));
            it[i] = warped.data[i] - source.data[i];
        }
    }

    let u0 = u.data.clone();
    let v0 = v.data.clone();
    let alpha_sq = 1.0 / params.data_weight;
    let mut next_u = u.clone();
    let mut next_v = v.clone();
    for _ in 0..params.iterations {
        for y in 0..h as isize {
            for x in 0..w as isize {
                let i = y as usize * w + x as usize;
                let ub = neighbourhood_mean(u, x, y);
                let vb = neighbourhood_mean(v, x, y);
                let residual = ix[i] * (ub - u0[i]) + iy[i] * (vb - v0[i]) + it[i];
                let denom = alpha_sq + ix[i] * ix[i] + iy[i] * iy[i];
                next_u.data[i] = ub - ix[i] * residual / denom;
                next_v.data[i] = vb - iy[i] * residual / denom;
            }
        }
        std::mem::swap(u, &mut next_u);
        std::mem::swap(v, &mut next_v);
    }
}

/// Horn–Schunck weighted mean: 1/6 for edge neighbours, 1/12 for corners.
#[inline]
fn neighbourhood_mean(g: &Grid, x: isize, y: isize) -> f32 {
    let edges = g.at_clamped(x - 1, y)
        + g.at_clamped(x + 1, y)
        + g.at_clamped(x, y - 1)
        + g.at_clamped(x, y + 1);
    let corners = g.at_clamped(x - 1, y - 1)
        + g.at_clamped(x + 1, y - 1)
        + g.at_clamped(x - 1, y + 1)
        + g.at_clamped(x + 1, y + 1);
    edges / 6.0 + corners / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pyramid_respects_limits() {
        let p = FlowParams::default();
        assert_eq!(
            level_dims(256, 256, &p),
            vec![(256, 256), (128, 128), (64, 64), (32, 32), (16, 16)]
        );
        assert_eq!(level_dims(512, 256, &p).len(), 5);
        assert_eq!(level_dims(40, 20, &p), vec![(40, 20)]);
        assert_eq!(level_dims(64, 33, &p), vec![(64, 33), (32, 17)]);
    }

    #[test]
    fn rejects_tiny_and_mismatched() {
        let p = FlowParams::default();
        let small = LumaImage::from_fn(8, 8, |_, _| 0.5);
        assert!(matches!(
            estimate_flow(&small, &small, &p),
            Err(Error::ImageTooSmall { .. })
        ));
        let a = LumaImage::from_fn(32, 32, |_, _| 0.5);
        let b = LumaImage::from_fn(32, 33, |_, _| 0.5);
        assert!(matches!(
            estimate_flow(&a, &b, &p),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn constant_images_give_finite_zero_flow() {
        let img = LumaImage::from_fn(48, 40, |_, _| 0.3);
        let other = LumaImage::from_fn(48, 40, |_, _| 0.7);
        let f = estimate_flow(&img, &other, &FlowParams::default()).unwrap();
        assert!(f.is_finite());
        assert!(f.mean_magnitude() < 1e-6);
    }
}
