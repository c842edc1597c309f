//! Quilts: all views of a lightfield tiled into one raster.
//!
//! View 0 (leftmost) sits in the bottom-left tile and indices advance left
//! to right, then upwards, so the last view lands in the top-right tile. The
//! raster itself stays top-row-first; only tile indexing counts from the
//! bottom.

use crate::error::{Error, Result};
use crate::morph::ViewSequence;
use crate::raster::{RasterImage, CHANNELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuiltLayout {
    pub cols: u32,
    pub rows: u32,
    pub tile_width: u32,
    pub tile_height: u32,
}

impl QuiltLayout {
    pub fn new(cols: u32, rows: u32, tile_width: u32, tile_height: u32) -> Result<Self> {
        if cols == 0 || rows == 0 || tile_width == 0 || tile_height == 0 {
            return Err(Error::Layout(format!(
                "{cols}x{rows} tiles of {tile_width}x{tile_height} has a zero extent"
            )));
        }
        Ok(Self {
            cols,
            rows,
            tile_width,
            tile_height,
        })
    }

    /// Layout whose tiles exactly divide a quilt image.
    pub fn from_quilt_dims(cols: u32, rows: u32, width: u32, height: u32) -> Result<Self> {
        if cols == 0 || rows == 0 || !width.is_multiple_of(cols) || !height.is_multiple_of(rows) {
            return Err(Error::Layout(format!(
                "{width}x{height} quilt cannot be split into {cols}x{rows} equal tiles"
            )));
        }
        Self::new(cols, rows, width / cols, height / rows)
    }

    /// Tile grid conventionally used for a view count: 4x8 for 32 views,
    /// 5x9 for 45.
    pub fn standard_grid(views: u32) -> Option<(u32, u32)> {
        match views {
            32 => Some((4, 8)),
            45 => Some((5, 9)),
            _ => None,
        }
    }

    pub fn view_count(&self) -> usize {
        self.cols as usize * self.rows as usize
    }

    pub fn quilt_width(&self) -> u32 {
        self.cols * self.tile_width
    }

    pub fn quilt_height(&self) -> u32 {
        self.rows * self.tile_height
    }

    /// Pixel coordinates of the top-left corner of view `k`'s tile.
    #[inline]
    pub fn tile_origin(&self, k: usize) -> (u32, u32) {
        let col = (k % self.cols as usize) as u32;
        let row_from_bottom = (k / self.cols as usize) as u32;
        (
            self.tile_width * col,
            self.quilt_height() - self.tile_height * (1 + row_from_bottom),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quilt {
    image: RasterImage,
    layout: QuiltLayout,
}

impl Quilt {
    pub fn new(image: RasterImage, layout: QuiltLayout) -> Result<Self> {
        if image.dims() != (layout.quilt_width(), layout.quilt_height()) {
            return Err(Error::Layout(format!(
                "image {:?} does not match {}x{} tiles of {}x{}",
                image.dims(),
                layout.cols,
                layout.rows,
                layout.tile_width,
                layout.tile_height
            )));
        }
        Ok(Self { image, layout })
    }

    /// Interpret a raster as a `cols`×`rows` quilt.
    pub fn from_image(image: RasterImage, cols: u32, rows: u32) -> Result<Self> {
        let layout = QuiltLayout::from_quilt_dims(cols, rows, image.width(), image.height())?;
        Self::new(image, layout)
    }

    pub fn image(&self) -> &RasterImage {
        &self.image
    }

    pub fn layout(&self) -> &QuiltLayout {
        &self.layout
    }

    pub fn into_image(self) -> RasterImage {
        self.image
    }
}

pub fn assemble_quilt(views: &ViewSequence, layout: QuiltLayout) -> Result<Quilt> {
    if views.count() != layout.view_count() {
        return Err(Error::Layout(format!(
            "{} views cannot fill {}x{} tiles",
            views.count(),
            layout.cols,
            layout.rows
        )));
    }
    if views.view_dims() != (layout.tile_width, layout.tile_height) {
        return Err(Error::DimensionMismatch(format!(
            "views are {:?}, tiles are {}x{}",
            views.view_dims(),
            layout.tile_width,
            layout.tile_height
        )));
    }

    let qw = layout.quilt_width() as usize;
    let mut data = vec![0u8; qw * layout.quilt_height() as usize * CHANNELS];
    let span = layout.tile_width as usize * CHANNELS;
    for (k, view) in views.views().iter().enumerate() {
        let (ox, oy) = layout.tile_origin(k);
        for ty in 0..layout.tile_height {
            let start = ((oy + ty) as usize * qw + ox as usize) * CHANNELS;
            data[start..start + span].copy_from_slice(view.row(ty));
        }
    }
    Quilt::new(
        RasterImage::new(layout.quilt_width(), layout.quilt_height(), data)?,
        layout,
    )
}

pub fn extract_views(quilt: &Quilt) -> ViewSequence {
    let layout = quilt.layout;
    let qw = layout.quilt_width() as usize;
    let span = layout.tile_width as usize * CHANNELS;
    let src = quilt.image.data();
    let views = (0..layout.view_count())
        .map(|k| {
            let (ox, oy) = layout.tile_origin(k);
            let mut data = Vec::with_capacity(span * layout.tile_height as usize);
            for ty in 0..layout.tile_height {
                let start = ((oy + ty) as usize * qw + ox as usize) * CHANNELS;
                data.extend_from_slice(&src[start..start + span]);
            }
            RasterImage::new(layout.tile_width, layout.tile_height, data)
                .expect("tile buffer matches tile dimensions")
        })
        .collect();
    ViewSequence::new(views).expect("tiles share dimensions")
}
