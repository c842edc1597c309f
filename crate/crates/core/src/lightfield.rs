//! Direct native-image rendering for slanted lenticular panels.
//!
//! Every RGB subpixel of the panel sees one view through the lens array.
//! For subpixel column `i = 3x + c` on panel row `j` the fractional view is
//!
//! ```text
//! N(i, j) = n_views · mod(i − i_off − 3·j·tan α, pitch) / pitch
//! ```
//!
//! with a non-negative modulo. The integer view `floor(N)` selects a quilt
//! tile, and the panel position is scaled (nearest, by flooring) into that
//! tile. No blending between views or within tiles is done, so a lookup
//! table of quilt coordinates reproduces this renderer exactly.

use crate::calib::Calibration;
use crate::error::{Error, Result};
use crate::quilt::{Quilt, QuiltLayout};
use crate::raster::{RasterImage, CHANNELS};

/// Panel-resolution output image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NativeImage(RasterImage);

impl NativeImage {
    pub(crate) fn from_raster(image: RasterImage) -> Self {
        Self(image)
    }

    pub fn raster(&self) -> &RasterImage {
        &self.0
    }

    pub fn into_raster(self) -> RasterImage {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubpixelAddress {
    /// Panel pixel column.
    pub x: u32,
    /// Panel pixel row.
    pub y: u32,
    /// Colour channel, 0..3.
    pub c: u32,
}

impl SubpixelAddress {
    pub fn new(x: u32, y: u32, c: u32) -> Self {
        debug_assert!(c < 3);
        Self { x, y, c }
    }

    /// Subpixel column index `3x + c`.
    #[inline]
    pub fn column(&self) -> u64 {
        3 * self.x as u64 + self.c as u64
    }
}

/// Fractional view number at subpixel column `i`, panel row `j`. Accepts
/// real coordinates; the result always lies in `[0, n_views)`.
#[inline]
pub fn view_number_at(i: f64, j: f64, cal: &Calibration) -> f64 {
    let pitch = cal.pitch_x;
    let phase = i - cal.i_off - 3.0 * j * cal.slope_tan;
    let mut r = phase.rem_euclid(pitch);
    // rem_euclid rounds tiny negative phases up to exactly `pitch`.
    if r >= pitch {
        r = 0.0;
    }
    let n = cal.n_views as f64;
    let view = n * r / pitch;
    if view >= n {
        n.next_down()
    } else {
        view
    }
}

#[inline]
pub fn view_number(addr: SubpixelAddress, cal: &Calibration) -> f64 {
    view_number_at(addr.column() as f64, addr.y as f64, cal)
}

/// Panel-to-quilt mapping for one calibration and quilt layout, checked for
/// consistency once up front.
#[derive(Clone, Debug)]
pub struct SubpixelMapper {
    cal: Calibration,
    layout: QuiltLayout,
}

impl SubpixelMapper {
    pub fn new(cal: &Calibration, layout: QuiltLayout) -> Result<Self> {
        cal.validate()?;
        if layout.view_count() != cal.n_views as usize {
            return Err(Error::Layout(format!(
                "{}x{} quilt holds {} views but the calibration expects {}",
                layout.cols,
                layout.rows,
                layout.view_count(),
                cal.n_views
            )));
        }
        Ok(Self {
            cal: cal.clone(),
            layout,
        })
    }

    pub fn calibration(&self) -> &Calibration {
        &self.cal
    }

    pub fn layout(&self) -> &QuiltLayout {
        &self.layout
    }

    /// Integer view seen by a subpixel.
    #[inline]
    pub fn view_index(&self, x: u32, y: u32, c: u32) -> usize {
        let n = view_number(SubpixelAddress { x, y, c }, &self.cal);
        (n.floor() as usize).min(self.cal.n_views as usize - 1)
    }

    /// Absolute quilt coordinates `(qx, qy)` sampled by a subpixel.
    #[inline]
    pub fn map(&self, x: u32, y: u32, c: u32) -> (u32, u32) {
        let view = self.view_index(x, y, c);
        let (ox, oy) = self.layout.tile_origin(view);
        let local_x =
            (x as u64 * self.layout.tile_width as u64 / self.cal.panel_width as u64) as u32;
        let local_y =
            (y as u64 * self.layout.tile_height as u64 / self.cal.panel_height as u64) as u32;
        (ox + local_x, oy + local_y)
    }
}

/// Quilt coordinates for one subpixel.
pub fn map_subpixel(
    addr: SubpixelAddress,
    cal: &Calibration,
    layout: QuiltLayout,
) -> Result<(u32, u32)> {
    if addr.x >= cal.panel_width || addr.y >= cal.panel_height || addr.c >= 3 {
        return Err(Error::InvalidCalibration(format!(
            "subpixel {addr:?} outside the {}x{} panel",
            cal.panel_width, cal.panel_height
        )));
    }
    Ok(SubpixelMapper::new(cal, layout)?.map(addr.x, addr.y, addr.c))
}

/// Render the native image by evaluating the view formula for every
/// subpixel of every frame.
pub fn render_native_direct(quilt: &Quilt, cal: &Calibration) -> Result<NativeImage> {
    let mapper = SubpixelMapper::new(cal, *quilt.layout())?;
    let (pw, ph) = (cal.panel_width, cal.panel_height);
    let qw = quilt.image().width() as usize;
    let src = quilt.image().data();
    let mut data = vec![0u8; pw as usize * ph as usize * CHANNELS];
    for y in 0..ph {
        let row = &mut data[y as usize * pw as usize * CHANNELS..][..pw as usize * CHANNELS];
        for x in 0..pw {
            for c in 0..3u32 {
                let (qx, qy) = mapper.map(x, y, c);
                row[x as usize * CHANNELS + c as usize] =
                    src[(qy as usize * qw + qx as usize) * CHANNELS + c as usize];
            }
        }
    }
    Ok(NativeImage(RasterImage::new(pw, ph, data)?))
}
