use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use stereoquilt::pipeline::{
    estimate_stereo_flow, load_quilt, load_views, save_views, FlowSource, Renderer,
};
use stereoquilt::*;

#[derive(Parser)]
#[command(
    name = "stereoquilt",
    version,
    about = "Side-by-side stereo photo to lenticular native image"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a side-by-side capture into left and right halves.
    Split {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Resize to the view width and crop a window of the view height.
    Prepare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        width: u32,
        #[arg(long, default_value_t = 256)]
        height: u32,
        /// First row of the crop window, after resizing.
        #[arg(long, default_value_t = 0)]
        crop_top: u32,
    },
    /// Estimate dense flow from one image to another.
    Flow {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Interpolate a sequence of views between a stereo pair.
    Morph {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Left-to-right flow; estimated when omitted.
        #[arg(long, requires = "bwd")]
        fwd: Option<PathBuf>,
        /// Right-to-left flow; estimated when omitted.
        #[arg(long, requires = "fwd")]
        bwd: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write the sequence as an animated GIF.
        #[arg(long)]
        gif: Option<PathBuf>,
    },
    /// Tile a views directory into a quilt.
    Quilt {
        #[arg(long)]
        views_dir: PathBuf,
        #[arg(long, default_value_t = 4)]
        cols: u32,
        #[arg(long, default_value_t = 8)]
        rows: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render the native image by evaluating every subpixel directly.
    Native {
        #[arg(long)]
        quilt: PathBuf,
        #[arg(long)]
        calibration: PathBuf,
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build or apply a lookup table.
    #[command(subcommand)]
    Lut(LutCommand),
    /// Time direct rendering against table lookup.
    Bench {
        #[arg(long)]
        calibration: PathBuf,
        #[arg(long)]
        quilt: PathBuf,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 10)]
        reps: usize,
    },
    /// Run every stage from a side-by-side capture to the native image.
    Pipeline(PipelineArgs),
    /// Write a synthetic side-by-side capture for trying the tool out.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1280)]
        width: u32,
        #[arg(long, default_value_t = 960)]
        height: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum LutCommand {
    Build {
        #[arg(long)]
        calibration: PathBuf,
        #[arg(long, default_value_t = 4)]
        cols: u32,
        #[arg(long, default_value_t = 8)]
        rows: u32,
        #[arg(long, default_value_t = 512)]
        tile_width: u32,
        #[arg(long, default_value_t = 256)]
        tile_height: u32,
        #[arg(long)]
        out: PathBuf,
    },
    Apply {
        #[arg(long)]
        lut: PathBuf,
        #[arg(long)]
        quilt: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        bands: usize,
    },
}

/// Quilt grid; the standard grid for the view count when omitted.
#[derive(Args)]
struct Grid {
    #[arg(long, requires = "rows")]
    cols: Option<u32>,
    #[arg(long, requires = "cols")]
    rows: Option<u32>,
}

impl Grid {
    fn get(&self) -> Option<(u32, u32)> {
        self.cols.zip(self.rows)
    }
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    calibration: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 32)]
    views: usize,
    #[arg(long, default_value_t = 512)]
    width: u32,
    #[arg(long, default_value_t = 256)]
    height: u32,
    #[arg(long, default_value_t = 0)]
    crop_top: u32,
    #[arg(long, default_value_t = 4)]
    cols: u32,
    #[arg(long, default_value_t = 8)]
    rows: u32,
    #[arg(long, requires = "bwd")]
    fwd: Option<PathBuf>,
    #[arg(long, requires = "fwd")]
    bwd: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    bands: usize,
    /// Evaluate every subpixel instead of building a lookup table.
    #[arg(long, conflicts_with = "bands")]
    direct: bool,
    #[arg(long)]
    keep_intermediates: bool,
}

fn load_pair(left: &Path, right: &Path) -> Result<StereoFrame> {
    Ok(StereoFrame::new(load_png(left)?, load_png(right)?)?)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Split { input, left, right } => {
            let frame = split_stereo(&load_png(&input)?)?;
            save_png(frame.left(), &left)?;
            save_png(frame.right(), &right)?;
        }
        Command::Prepare {
            input,
            out,
            width,
            height,
            crop_top,
        } => {
            let view = prepare_view(&load_png(&input)?, width, height, crop_top)?;
            save_png(&view, &out)?;
        }
        Command::Flow { from, to, out } => {
            let field = estimate_flow(
                &to_grayscale(&load_png(&from)?),
                &to_grayscale(&load_png(&to)?),
                &FlowParams::default(),
            )?;
            write_flo(&field, &out)?;
            println!("mean flow magnitude {:.3} px", field.mean_magnitude());
        }
        Command::Morph {
            left,
            right,
            fwd,
            bwd,
            count,
            out_dir,
            gif,
        } => {
            let frame = load_pair(&left, &right)?;
            let (fwd, bwd) = match (fwd, bwd) {
                (Some(f), Some(b)) => (read_flo(f)?, read_flo(b)?),
                _ => estimate_stereo_flow(&frame, &FlowParams::default())?,
            };
            let views = generate_views(&frame, &fwd, &bwd, count)?;
            save_views(&views, &out_dir)?;
            if let Some(gif) = gif {
                stereoquilt::morph::save_gif(&views, gif, 6)?;
            }
            println!("wrote {count} views to {}", out_dir.display());
        }
        Command::Quilt {
            views_dir,
            cols,
            rows,
            out,
        } => {
            let views = load_views(&views_dir)?;
            let (w, h) = views.view_dims();
            let quilt = assemble_quilt(&views, QuiltLayout::new(cols, rows, w, h)?)?;
            save_png(quilt.image(), &out)?;
        }
        Command::Native {
            quilt,
            calibration,
            grid,
            out,
        } => {
            let cal = load_calibration(&calibration)?;
            let quilt = load_quilt(&quilt, grid.get(), cal.n_views)?;
            save_png(render_native_direct(&quilt, &cal)?.raster(), &out)?;
        }
        Command::Lut(LutCommand::Build {
            calibration,
            cols,
            rows,
            tile_width,
            tile_height,
            out,
        }) => {
            let cal = load_calibration(&calibration)?;
            let layout = QuiltLayout::new(cols, rows, tile_width, tile_height)?;
            let lut = build_lut(&cal, layout)?;
            save_lut(&lut, &out)?;
            println!("wrote {} bytes to {}", lut.encoded_len(), out.display());
        }
        Command::Lut(LutCommand::Apply {
            lut,
            quilt,
            out,
            bands,
        }) => {
            let lut = load_lut(&lut)?;
            let image = load_png(&quilt)?;
            let (qw, qh) = lut.quilt_dims();
            if image.dims() != (qw, qh) {
                bail!(
                    "{} is {:?} but the table was built for a {qw}x{qh} quilt",
                    quilt.display(),
                    image.dims()
                );
            }
            // Only the quilt dimensions matter for lookup.
            let quilt = Quilt::new(image, QuiltLayout::new(1, 1, qw, qh)?)?;
            save_png(apply_lut_parallel(&lut, &quilt, bands)?.raster(), &out)?;
        }
        Command::Bench {
            calibration,
            quilt,
            grid,
            reps,
        } => {
            let cal = load_calibration(&calibration)?;
            let quilt = load_quilt(&quilt, grid.get(), cal.n_views)?;
            print!("{}", benchmark(&cal, *quilt.layout(), &quilt, reps)?);
        }
        Command::Pipeline(args) => {
            let mut config = PipelineConfig::new(args.input, args.calibration, args.out_dir);
            config.views = args.views;
            config.view_width = args.width;
            config.view_height = args.height;
            config.crop_top = args.crop_top;
            config.cols = args.cols;
            config.rows = args.rows;
            config.keep_intermediates = args.keep_intermediates;
            if let (Some(forward), Some(backward)) = (args.fwd, args.bwd) {
                config.flow = FlowSource::Files { forward, backward };
            }
            config.renderer = if args.direct {
                Renderer::Direct
            } else {
                Renderer::Lut { bands: args.bands }
            };
            let output = run_pipeline(&config)?;
            println!("quilt  {}", output.quilt.display());
            println!("native {}", output.native.display());
            for path in &output.intermediates {
                println!("kept   {}", path.display());
            }
        }
        Command::Synth {
            out,
            width,
            height,
            seed,
        } => {
            let capture = stereoquilt::synthetic::side_by_side_capture(width, height, seed);
            save_png(&capture, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
