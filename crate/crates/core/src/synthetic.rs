//! Deterministic procedural test scenes.
//!
//! Textures are sums of random plane waves, so they can be sampled at any
//! real position. That makes exact sub-pixel shifts and rectified stereo
//! pairs with known disparity cheap to build.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::morph::ViewSequence;
use crate::raster::{concat_horizontal, quantize, RasterImage, StereoFrame};

#[derive(Clone, Copy, Debug)]
struct Wave {
    kx: f64,
    ky: f64,
    phase: f64,
    tint: [f64; 3],
}

/// Band-limited random colour texture defined on the whole plane.
#[derive(Clone, Debug)]
pub struct Texture {
    waves: Vec<Wave>,
}

impl Texture {
    pub fn new(seed: u64) -> Self {
        Self::with_wavelengths(seed, 10.0, 48.0)
    }

    pub fn with_wavelengths(seed: u64, min_wavelength: f64, max_wavelength: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let waves = (0..24)
            .map(|_| {
                let wavelength = rng.random_range(min_wavelength..max_wavelength);
                let angle = rng.random_range(0.0..std::f64::consts::PI);
                let k = std::f64::consts::TAU / wavelength;
                Wave {
                    kx: k * angle.cos(),
                    ky: k * angle.sin(),
                    phase: rng.random_range(0.0..std::f64::consts::TAU),
                    tint: [
                        rng.random_range(0.4..1.0),
                        rng.random_range(0.4..1.0),
                        rng.random_range(0.4..1.0),
                    ],
                }
            })
            .collect();
        Self { waves }
    }

    /// RGB in [0, 255] at a continuous position.
    pub fn eval(&self, x: f64, y: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for w in &self.waves {
            let s = (w.kx * x + w.ky * y + w.phase).sin();
            for (a, t) in acc.iter_mut().zip(w.tint) {
                *a += s * t;
            }
        }
        let norm = 0.45 / (self.waves.len() as f64).sqrt();
        acc.map(|a| 255.0 * (0.5 + norm * a).clamp(0.0, 1.0))
    }

    pub fn render(&self, width: u32, height: u32, offset_x: f64, offset_y: f64) -> RasterImage {
        RasterImage::from_fn(width, height, |x, y| {
            self.eval(x as f64 + offset_x, y as f64 + offset_y)
                .map(quantize)
        })
    }
}

/// A textured image and the same texture translated by `(dx, dy)`, so that
/// `second(x + dx, y + dy) == first(x, y)`.
pub fn shifted_pair(
    width: u32,
    height: u32,
    dx: f64,
    dy: f64,
    seed: u64,
) -> (RasterImage, RasterImage) {
    let tex = Texture::new(seed);
    (
        tex.render(width, height, 0.0, 0.0),
        tex.render(width, height, -dx, -dy),
    )
}

/// Rectified stereo pair: a textured background at `background_disparity`
/// and a textured disc at `foreground_disparity`. A scene point at column
/// `x` in the left view appears at `x - disparity` in the right view.
pub fn stereo_scene(
    width: u32,
    height: u32,
    background_disparity: f64,
    foreground_disparity: f64,
    seed: u64,
) -> StereoFrame {
    let background = Texture::new(seed);
    let foreground = Texture::with_wavelengths(seed ^ 0x5eed, 6.0, 24.0);
    let cx = width as f64 * 0.5;
    let cy = height as f64 * 0.5;
    let radius = width.min(height) as f64 * 0.3;

    let view = |shift: f64| {
        RasterImage::from_fn(width, height, |x, y| {
            let (x, y) = (x as f64, y as f64);
            let fx = x + foreground_disparity * shift;
            if (fx - cx).hypot(y - cy) < radius {
                foreground.eval(fx, y).map(quantize)
            } else {
                background
                    .eval(x + background_disparity * shift, y)
                    .map(quantize)
            }
        })
    };
    StereoFrame::new(view(0.0), view(1.0)).expect("both views share dimensions")
}

/// Side-by-side capture of [`stereo_scene`], as a stereo webcam delivers it.
pub fn side_by_side_capture(width: u32, height: u32, seed: u64) -> RasterImage {
    let half = width / 2;
    let disparity = half as f64 / 80.0;
    let pair = stereo_scene(half, height, disparity, 2.5 * disparity, seed);
    concat_horizontal(pair.left(), pair.right()).expect("equal heights")
}

/// `count` views where view `k` is flat grey at level `k * step`.
pub fn graded_views(count: usize, width: u32, height: u32, step: u8) -> ViewSequence {
    let views = (0..count)
        .map(|k| {
            let level = (k as u32 * step as u32).min(255) as u8;
            RasterImage::filled(width, height, [level; 3])
        })
        .collect();
    ViewSequence::new(views).expect("uniform view dimensions")
}

/// Views with a distinct hue per index and a sliding bar, handy for seeing
/// which view a lenticular mapping picked.
pub fn hue_views(count: usize, width: u32, height: u32) -> ViewSequence {
    let views = (0..count)
        .map(|k| {
            let hue = k as f64 / count as f64;
            let base = hue_to_rgb(hue);
            let bar = (k as f64 + 0.5) / count as f64 * width as f64;
            RasterImage::from_fn(width, height, |x, _| {
                if (x as f64 - bar).abs() < width as f64 / 24.0 {
                    [255, 255, 255]
                } else {
                    base
                }
            })
        })
        .collect();
    ViewSequence::new(views).expect("uniform view dimensions")
}

fn hue_to_rgb(h: f64) -> [u8; 3] {
    let channel = |offset: f64| {
        let k = (h * 6.0 + offset) % 6.0;
        let v = 1.0 - (k.min(4.0 - k).clamp(0.0, 1.0));
        quantize(255.0 * v)
    };
    [channel(5.0), channel(3.0), channel(1.0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(
            Texture::new(3).render(16, 8, 0.0, 0.0),
            Texture::new(3).render(16, 8, 0.0, 0.0)
        );
        assert_ne!(
            Texture::new(3).render(16, 8, 0.0, 0.0),
            Texture::new(4).render(16, 8, 0.0, 0.0)
        );
    }

    #[test]
    fn integer_shift_matches_columns() {
        let (a, b) = shifted_pair(32, 8, 3.0, 0.0, 1);
        for y in 0..8 {
            for x in 0..29 {
                assert_eq!(a.pixel(x, y), b.pixel(x + 3, y));
            }
        }
    }

    #[test]
    fn textured_enough() {
        let img = Texture::new(9).render(64, 64, 0.0, 0.0);
        let min = *img.data().iter().min().unwrap();
        let max = *img.data().iter().max().unwrap();
        assert!(max - min > 100, "contrast {min}..{max}");
    }

    #[test]
    fn hue_primaries() {
        assert_eq!(hue_to_rgb(0.0), [255, 0, 0]);
        assert_eq!(hue_to_rgb(1.0 / 3.0), [0, 255, 0]);
        assert_eq!(hue_to_rgb(2.0 / 3.0), [0, 0, 255]);
    }
}
