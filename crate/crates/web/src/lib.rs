//! Browser demo: lenticular rendering, view maps and flow morphing on
//! synthetic inputs. Every image comes back as RGBA bytes ready for
//! `ImageData`.

use stereoquilt::pipeline::estimate_stereo_flow;
use stereoquilt::synthetic::{hue_views, stereo_scene};
use stereoquilt::{
    apply_lut, assemble_quilt, build_lut, morph_frame, view_number, Calibration, FlowField,
    FlowParams, Quilt, QuiltLayout, RasterImage, StereoFrame, SubpixelAddress,
};
use wasm_bindgen::prelude::*;

const VIEWS: u32 = 32;
const COLS: u32 = 4;
const ROWS: u32 = 8;

fn to_js(err: stereoquilt::Error) -> JsError {
    JsError::new(&err.to_string())
}

fn rgba(image: &RasterImage) -> Vec<u8> {
    image
        .data()
        .chunks_exact(3)
        .flat_map(|p| [p[0], p[1], p[2], 255])
        .collect()
}

#[wasm_bindgen]
pub struct Demo {
    panel_width: u32,
    panel_height: u32,
    quilt: Quilt,
    pair: StereoFrame,
    forward: FlowField,
    backward: FlowField,
}

#[wasm_bindgen]
impl Demo {
    /// Hue quilt of 32 views of `tile_width`×`tile_height`, a panel of
    /// `panel_width`×`panel_height`, and a stereo pair of
    /// `pair_width`×`pair_height` with its flow already estimated.
    #[wasm_bindgen(constructor)]
    pub fn new(
        panel_width: u32,
        panel_height: u32,
        tile_width: u32,
        tile_height: u32,
        pair_width: u32,
        pair_height: u32,
    ) -> Result<Demo, JsError> {
        let layout = QuiltLayout::new(COLS, ROWS, tile_width, tile_height).map_err(to_js)?;
        let quilt = assemble_quilt(&hue_views(VIEWS as usize, tile_width, tile_height), layout)
            .map_err(to_js)?;
        let disparity = pair_width as f64 / 64.0;
        let pair = stereo_scene(pair_width, pair_height, disparity, 2.5 * disparity, 7);
        let (forward, backward) =
            estimate_stereo_flow(&pair, &FlowParams::default()).map_err(to_js)?;
        Ok(Demo {
            panel_width,
            panel_height,
            quilt,
            pair,
            forward,
            backward,
        })
    }

    #[wasm_bindgen(getter)]
    pub fn panel_width(&self) -> u32 {
        self.panel_width
    }

    #[wasm_bindgen(getter)]
    pub fn panel_height(&self) -> u32 {
        self.panel_height
    }

    #[wasm_bindgen(getter)]
    pub fn pair_width(&self) -> u32 {
        self.pair.left().width()
    }

    #[wasm_bindgen(getter)]
    pub fn pair_height(&self) -> u32 {
        self.pair.left().height()
    }

    #[wasm_bindgen(getter)]
    pub fn quilt_width(&self) -> u32 {
        self.quilt.image().width()
    }

    #[wasm_bindgen(getter)]
    pub fn quilt_height(&self) -> u32 {
        self.quilt.image().height()
    }

    fn calibration(&self, pitch: f64, slope: f64, center: f64) -> Result<Calibration, JsError> {
        Calibration::new(
            pitch,
            slope,
            center,
            VIEWS,
            self.panel_width,
            self.panel_height,
        )
        .map_err(to_js)
    }

    pub fn quilt(&self) -> Vec<u8> {
        rgba(self.quilt.image())
    }

    /// Native image for the given lenticular calibration.
    pub fn native(&self, pitch: f64, slope: f64, center: f64) -> Result<Vec<u8>, JsError> {
        let cal = self.calibration(pitch, slope, center)?;
        let lut = build_lut(&cal, *self.quilt.layout()).map_err(to_js)?;
        let native = apply_lut(&lut, &self.quilt).map_err(to_js)?;
        Ok(rgba(native.raster()))
    }

    /// Each subpixel channel lit in proportion to its view number.
    pub fn view_map(&self, pitch: f64, slope: f64, center: f64) -> Result<Vec<u8>, JsError> {
        let cal = self.calibration(pitch, slope, center)?;
        let scale = 255.0 / (VIEWS - 1) as f64;
        let mut out = Vec::with_capacity((self.panel_width * self.panel_height * 4) as usize);
        for y in 0..self.panel_height {
            for x in 0..self.panel_width {
                for c in 0..3 {
                    let n = view_number(SubpixelAddress::new(x, y, c), &cal).floor();
                    out.push((n * scale).round() as u8);
                }
                out.push(255);
            }
        }
        Ok(out)
    }

    /// Intermediate view at `t` in [0, 1] between the stereo halves.
    pub fn morph(&self, t: f64) -> Result<Vec<u8>, JsError> {
        let frame = morph_frame(
            self.pair.left(),
            self.pair.right(),
            &self.forward,
            &self.backward,
            t,
        )
        .map_err(to_js)?;
        Ok(rgba(&frame))
    }
}
