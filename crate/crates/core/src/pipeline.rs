//! End-to-end conversion: stereo capture → views → quilt → native image.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::calib::{load_calibration, Calibration};
use crate::error::{Error, Result};
use crate::flow::{estimate_flow, read_flo, write_flo, FlowField, FlowParams};
use crate::lightfield::render_native_direct;
use crate::lut::{apply_lut_parallel, build_lut, save_lut};
use crate::morph::{generate_views, save_gif, ViewSequence};
use crate::quilt::{assemble_quilt, Quilt, QuiltLayout};
use crate::raster::{
    load_png, prepare_view, save_png, split_stereo, to_grayscale, RasterImage, StereoFrame,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Config,
    Calibration,
    Load,
    Split,
    Prepare,
    Flow,
    Morph,
    Quilt,
    Render,
    Write,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Config => "config",
            Stage::Calibration => "calibration",
            Stage::Load => "load",
            Stage::Split => "split",
            Stage::Prepare => "prepare",
            Stage::Flow => "flow",
            Stage::Morph => "morph",
            Stage::Quilt => "quilt",
            Stage::Render => "render",
            Stage::Write => "write",
            Stage::Verify => "verify",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, PipelineError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowSource {
    Builtin(FlowParams),
    /// Precomputed `.flo` files: left→right and right→left.
    Files {
        forward: PathBuf,
        backward: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Renderer {
    Lut { bands: usize },
    Direct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub calibration: PathBuf,
    pub out_dir: PathBuf,
    pub views: usize,
    pub view_width: u32,
    pub view_height: u32,
    pub crop_top: u32,
    pub cols: u32,
    pub rows: u32,
    pub flow: FlowSource,
    pub renderer: Renderer,
    pub keep_intermediates: bool,
}

impl PipelineConfig {
    /// 32 views of 512×256 in a 4×8 quilt, cropped from row 0.
    pub fn new(
        input: impl Into<PathBuf>,
        calibration: impl Into<PathBuf>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        Self {
            input: input.into(),
            calibration: calibration.into(),
            out_dir: out_dir.into(),
            views: 32,
            view_width: 512,
            view_height: 256,
            crop_top: 0,
            cols: 4,
            rows: 8,
            flow: FlowSource::Builtin(FlowParams::default()),
            renderer: Renderer::Lut { bands: 4 },
            keep_intermediates: false,
        }
    }

    pub fn validate(&self) -> Result<QuiltLayout> {
        if self.views != self.cols as usize * self.rows as usize {
            return Err(Error::Layout(format!(
                "{} views do not fill a {}x{} quilt",
                self.views, self.cols, self.rows
            )));
        }
        if let Renderer::Lut { bands: 0 } = self.renderer {
            return Err(Error::InvalidArgument(
                "band count must be at least 1".into(),
            ));
        }
        QuiltLayout::new(self.cols, self.rows, self.view_width, self.view_height)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOutput {
    pub quilt: PathBuf,
    pub native: PathBuf,
    /// Everything written besides the quilt and native image.
    pub intermediates: Vec<PathBuf>,
}

pub const QUILT_FILE: &str = "quilt.png";
pub const NATIVE_FILE: &str = "native.png";

/// File name of view `k` inside a views directory.
pub fn view_file_name(k: usize) -> String {
    format!("view_{k:03}.png")
}

pub fn save_views(views: &ViewSequence, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    views
        .views()
        .iter()
        .enumerate()
        .map(|(k, view)| {
            let path = dir.join(view_file_name(k));
            save_png(view, &path)?;
            Ok(path)
        })
        .collect()
}

/// Read `view_000.png`, `view_001.png`, … until the first gap.
pub fn load_views(dir: impl AsRef<Path>) -> Result<ViewSequence> {
    let dir = dir.as_ref();
    let mut views = Vec::new();
    loop {
        let path = dir.join(view_file_name(views.len()));
        if !path.exists() {
            break;
        }
        views.push(load_png(&path)?);
    }
    if views.is_empty() {
        return Err(Error::io(
            dir.join(view_file_name(0)),
            std::io::Error::new(std::io::ErrorKind::NotFound, "no views found"),
        ));
    }
    ViewSequence::new(views)
}

/// Forward (left→right) and backward (right→left) flow with the built-in
/// estimator.
pub fn estimate_stereo_flow(
    frame: &StereoFrame,
    params: &FlowParams,
) -> Result<(FlowField, FlowField)> {
    let left = to_grayscale(frame.left());
    let right = to_grayscale(frame.right());
    let forward = estimate_flow(&left, &right, params)?;
    let backward = estimate_flow(&right, &left, params)?;
    Ok((forward, backward))
}

/// Split a side-by-side capture and bring both halves to view size.
pub fn ingest_stereo(
    capture: &RasterImage,
    width: u32,
    height: u32,
    crop_top: u32,
) -> Result<StereoFrame> {
    let halves = split_stereo(capture)?;
    StereoFrame::new(
        prepare_view(halves.left(), width, height, crop_top)?,
        prepare_view(halves.right(), width, height, crop_top)?,
    )
}

pub fn run_pipeline(config: &PipelineConfig) -> std::result::Result<PipelineOutput, PipelineError> {
    let layout = config.validate().at(Stage::Config)?;
    let cal: Calibration = load_calibration(&config.calibration).at(Stage::Calibration)?;
    if cal.n_views as usize != config.views {
        return Err(Error::Layout(format!(
            "calibration expects {} views, pipeline generates {}",
            cal.n_views, config.views
        )))
        .at(Stage::Calibration);
    }

    let out = &config.out_dir;
    std::fs::create_dir_all(out)
        .map_err(|e| Error::io(out, e))
        .at(Stage::Write)?;
    let mut intermediates = Vec::new();
    let keep = config.keep_intermediates;

    let capture = load_png(&config.input).at(Stage::Load)?;
    let halves = split_stereo(&capture).at(Stage::Split)?;
    if keep {
        for (name, img) in [("left.png", halves.left()), ("right.png", halves.right())] {
            let path = out.join(name);
            save_png(img, &path).at(Stage::Write)?;
            intermediates.push(path);
        }
    }
    let frame = StereoFrame::new(
        prepare_view(
            halves.left(),
            config.view_width,
            config.view_height,
            config.crop_top,
        )
        .at(Stage::Prepare)?,
        prepare_view(
            halves.right(),
            config.view_width,
            config.view_height,
            config.crop_top,
        )
        .at(Stage::Prepare)?,
    )
    .at(Stage::Prepare)?;

    let (forward, backward) = match &config.flow {
        FlowSource::Builtin(params) => estimate_stereo_flow(&frame, params).at(Stage::Flow)?,
        FlowSource::Files { forward, backward } => (
            read_flo(forward).at(Stage::Flow)?,
            read_flo(backward).at(Stage::Flow)?,
        ),
    };
    if keep {
        for (name, f) in [("forward.flo", &forward), ("backward.flo", &backward)] {
            let path = out.join(name);
            write_flo(f, &path).at(Stage::Write)?;
            intermediates.push(path);
        }
    }

    let views = generate_views(&frame, &forward, &backward, config.views).at(Stage::Morph)?;
    if keep {
        intermediates.extend(save_views(&views, out.join("views")).at(Stage::Write)?);
        let gif = out.join("views.gif");
        save_gif(&views, &gif, 6).at(Stage::Write)?;
        intermediates.push(gif);
    }

    let quilt = assemble_quilt(&views, layout).at(Stage::Quilt)?;
    let quilt_path = out.join(QUILT_FILE);
    save_png(quilt.image(), &quilt_path).at(Stage::Write)?;

    let native = match config.renderer {
        Renderer::Direct => render_native_direct(&quilt, &cal).at(Stage::Render)?,
        Renderer::Lut { bands } => {
            let lut = build_lut(&cal, layout).at(Stage::Render)?;
            if keep {
                let path = out.join("table.lut");
                save_lut(&lut, &path).at(Stage::Write)?;
                intermediates.push(path);
            }
            apply_lut_parallel(&lut, &quilt, bands).at(Stage::Render)?
        }
    };
    let native_path = out.join(NATIVE_FILE);
    save_png(native.raster(), &native_path).at(Stage::Write)?;

    verify_output(&quilt_path, (layout.quilt_width(), layout.quilt_height())).at(Stage::Verify)?;
    verify_output(&native_path, (cal.panel_width, cal.panel_height)).at(Stage::Verify)?;

    Ok(PipelineOutput {
        quilt: quilt_path,
        native: native_path,
        intermediates,
    })
}

fn verify_output(path: &Path, dims: (u32, u32)) -> Result<()> {
    let written = load_png(path)?;
    if written.dims() != dims {
        return Err(Error::DimensionMismatch(format!(
            "{} is {:?}, expected {dims:?}",
            path.display(),
            written.dims()
        )));
    }
    Ok(())
}

/// Quilt from a PNG, using the conventional grid for the calibration's
/// view count unless one is given.
pub fn load_quilt(path: impl AsRef<Path>, grid: Option<(u32, u32)>, views: u32) -> Result<Quilt> {
    let (cols, rows) = grid
        .or_else(|| QuiltLayout::standard_grid(views))
        .ok_or_else(|| {
            Error::Layout(format!(
                "no standard grid for {views} views; pass the column and row count"
            ))
        })?;
    Quilt::from_image(load_png(path)?, cols, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut cfg = PipelineConfig::new("in.png", "cal.json", "out");
        assert_eq!(
            cfg.validate().unwrap(),
            QuiltLayout::new(4, 8, 512, 256).unwrap()
        );
        cfg.views = 45;
        assert!(cfg.validate().is_err());
        cfg.cols = 5;
        cfg.rows = 9;
        assert!(cfg.validate().is_ok());
        cfg.renderer = Renderer::Lut { bands: 0 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn missing_calibration_names_stage_and_path() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = PipelineConfig::new("in.png", dir.path().join("absent.json"), dir.path());
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(err.stage, Stage::Calibration);
        let msg = err.to_string();
        assert!(
            msg.contains("absent.json") && msg.contains("calibration"),
            "{msg}"
        );
    }

    #[test]
    fn views_directory_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let views = crate::synthetic::hue_views(5, 8, 4);
        let paths = save_views(&views, dir.path()).unwrap();
        assert_eq!(paths.last().unwrap().file_name().unwrap(), "view_004.png");
        assert_eq!(load_views(dir.path()).unwrap(), views);
        assert!(load_views(dir.path().join("empty")).is_err());
    }
}
