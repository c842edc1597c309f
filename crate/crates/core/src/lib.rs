//! Convert a side-by-side stereo photograph into a native image for a
//! slanted-lenticular multiview display.
//!
//! The stages, each usable on its own:
//!
//! 1. [`raster`]: split the capture into left and right views and resize them.
//! 2. [`flow`]: dense optical flow between the views (or `.flo` import).
//! 3. [`morph`]: flow-guided interpolation of intermediate views.
//! 4. [`quilt`]: tile the views into a quilt.
//! 5. [`lightfield`] / [`lut`]: map every panel subpixel to a quilt sample,
//!    either directly or through a precomputed lookup table.
//!
//! [`pipeline`] chains them together.

pub mod calib;
pub mod error;
pub mod flow;
pub mod lightfield;
pub mod lut;
pub mod morph;
pub mod pipeline;
pub mod quilt;
pub mod raster;
pub mod synthetic;

pub use calib::{load_calibration, save_calibration, Calibration};
pub use error::{Error, Result};
pub use flow::{estimate_flow, read_flo, write_flo, FlowField, FlowParams};
pub use lightfield::{
    map_subpixel, render_native_direct, view_number, view_number_at, NativeImage, SubpixelAddress,
    SubpixelMapper,
};
pub use lut::{
    apply_lut, apply_lut_parallel, benchmark, build_lut, load_lut, save_lut, BenchReport,
    LookupTable,
};
pub use morph::{generate_views, morph_frame, warp_image, ViewSequence};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineError};
pub use quilt::{assemble_quilt, extract_views, Quilt, QuiltLayout};
pub use raster::{
    load_png, prepare_view, save_png, split_stereo, to_grayscale, LumaImage, RasterImage,
    StereoFrame,
};
