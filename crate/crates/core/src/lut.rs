//! Precomputed panel-to-quilt lookup tables.
//!
//! A table holds one matrix per colour channel. Each entry is the pair of
//! quilt coordinates `(qx, qy)` the corresponding subpixel samples, stored
//! as `u16`. Building it evaluates the lenticular mapping once; afterwards
//! every frame is a pure gather.
//!
//! On-disk layout, all little-endian:
//!
//! ```text
//! 0   8 bytes  magic "SQLUT\0\0\x01"
//! 8   u32      panel width
//! 12  u32      panel height
//! 16  u32      quilt width
//! 20  u32      quilt height
//! 24  R, G, B matrices, row-major, each entry qx:u16 then qy:u16
//! ```

use std::fmt;
use std::path::Path;
use std::time::Instant;

use crate::calib::Calibration;
use crate::error::{Error, Result};
use crate::lightfield::{render_native_direct, NativeImage, SubpixelMapper};
use crate::quilt::{Quilt, QuiltLayout};
use crate::raster::{RasterImage, CHANNELS};

pub const LUT_MAGIC: [u8; 8] = *b"SQLUT\0\0\x01";
pub const LUT_HEADER_LEN: usize = 24;

#[derive(Clone, PartialEq, Eq)]
pub struct LookupTable {
    panel_width: u32,
    panel_height: u32,
    quilt_width: u32,
    quilt_height: u32,
    /// Per channel, interleaved `qx, qy` for every panel pixel.
    maps: [Vec<u16>; 3],
}

impl fmt::Debug for LookupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LookupTable")
            .field("panel", &(self.panel_width, self.panel_height))
            .field("quilt", &(self.quilt_width, self.quilt_height))
            .finish_non_exhaustive()
    }
}

impl LookupTable {
    pub fn panel_dims(&self) -> (u32, u32) {
        (self.panel_width, self.panel_height)
    }

    pub fn quilt_dims(&self) -> (u32, u32) {
        (self.quilt_width, self.quilt_height)
    }

    /// Quilt coordinates stored for subpixel `(x, y, c)`.
    #[inline]
    pub fn entry(&self, x: u32, y: u32, c: usize) -> (u16, u16) {
        let i = 2 * (y as usize * self.panel_width as usize + x as usize);
        (self.maps[c][i], self.maps[c][i + 1])
    }

    /// Size in bytes of the three coordinate matrices.
    pub fn payload_len(&self) -> usize {
        3 * self.panel_width as usize * self.panel_height as usize * 4
    }

    pub fn encoded_len(&self) -> usize {
        LUT_HEADER_LEN + self.payload_len()
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&LUT_MAGIC);
        for dim in [
            self.panel_width,
            self.panel_height,
            self.quilt_width,
            self.quilt_height,
        ] {
            out.extend_from_slice(&dim.to_le_bytes());
        }
        for map in &self.maps {
            for &coord in map {
                out.extend_from_slice(&coord.to_le_bytes());
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < LUT_HEADER_LEN {
            return Err(Error::Truncated {
                what: "LUT header",
                expected: LUT_HEADER_LEN as u64,
                found: bytes.len() as u64,
            });
        }
        if bytes[..8] != LUT_MAGIC {
            return Err(Error::LutMagic);
        }
        let dim = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let (panel_width, panel_height) = (dim(8), dim(12));
        let (quilt_width, quilt_height) = (dim(16), dim(20));
        if panel_width == 0 || panel_height == 0 || quilt_width == 0 || quilt_height == 0 {
            return Err(Error::InvalidDimensions {
                width: panel_width as i64,
                height: panel_height as i64,
            });
        }
        let pixels = panel_width as u64 * panel_height as u64;
        let expected = LUT_HEADER_LEN as u64 + 3 * pixels * 4;
        if bytes.len() as u64 != expected {
            return Err(Error::Truncated {
                what: "LUT payload",
                expected,
                found: bytes.len() as u64,
            });
        }

        let per_channel = pixels as usize * 4;
        let mut maps: [Vec<u16>; 3] = Default::default();
        for (c, map) in maps.iter_mut().enumerate() {
            let start = LUT_HEADER_LEN + c * per_channel;
            *map = bytes[start..start + per_channel]
                .chunks_exact(2)
                .map(|b| u16::from_le_bytes([b[0], b[1]]))
                .collect();
            for pair in map.chunks_exact(2) {
                if pair[0] as u32 >= quilt_width || pair[1] as u32 >= quilt_height {
                    return Err(Error::LutOutOfBounds {
                        qx: pair[0],
                        qy: pair[1],
                        width: quilt_width,
                        height: quilt_height,
                    });
                }
            }
        }
        Ok(Self {
            panel_width,
            panel_height,
            quilt_width,
            quilt_height,
            maps,
        })
    }
}

/// Evaluate the lenticular mapping for every subpixel of the panel.
pub fn build_lut(cal: &Calibration, layout: QuiltLayout) -> Result<LookupTable> {
    let (quilt_width, quilt_height) = (layout.quilt_width(), layout.quilt_height());
    if quilt_width > u16::MAX as u32 || quilt_height > u16::MAX as u32 {
        return Err(Error::QuiltTooLarge {
            width: quilt_width,
            height: quilt_height,
        });
    }
    let mapper = SubpixelMapper::new(cal, layout)?;
    let (pw, ph) = (cal.panel_width, cal.panel_height);
    let len = 2 * pw as usize * ph as usize;
    let mut maps: [Vec<u16>; 3] = [
        Vec::with_capacity(len),
        Vec::with_capacity(len),
        Vec::with_capacity(len),
    ];
    for y in 0..ph {
        for x in 0..pw {
            for (c, map) in maps.iter_mut().enumerate() {
                let (qx, qy) = mapper.map(x, y, c as u32);
                map.push(qx as u16);
                map.push(qy as u16);
            }
        }
    }
    Ok(LookupTable {
        panel_width: pw,
        panel_height: ph,
        quilt_width,
        quilt_height,
        maps,
    })
}

pub fn save_lut(lut: &LookupTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, lut.encode()).map_err(|e| Error::io(path, e))
}

pub fn load_lut(path: impl AsRef<Path>) -> Result<LookupTable> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    LookupTable::decode(&bytes)
}

fn check_quilt(lut: &LookupTable, quilt: &Quilt) -> Result<()> {
    if quilt.image().dims() != lut.quilt_dims() {
        return Err(Error::DimensionMismatch(format!(
            "LUT was built for a {:?} quilt, got {:?}",
            lut.quilt_dims(),
            quilt.image().dims()
        )));
    }
    Ok(())
}

/// Fill `out` with panel rows starting at `first_row`.
fn gather_rows(lut: &LookupTable, src: &[u8], first_row: usize, out: &mut [u8]) {
    let qw = lut.quilt_width as usize;
    let start = 2 * first_row * lut.panel_width as usize;
    let pixels = out.len() / CHANNELS;
    let [r, g, b] = &lut.maps;
    let maps = [
        &r[start..start + 2 * pixels],
        &g[start..start + 2 * pixels],
        &b[start..start + 2 * pixels],
    ];
    for (p, px) in out.chunks_exact_mut(CHANNELS).enumerate() {
        for (c, map) in maps.iter().enumerate() {
            let qx = map[2 * p] as usize;
            let qy = map[2 * p + 1] as usize;
            px[c] = src[(qy * qw + qx) * CHANNELS + c];
        }
    }
}

/// Render the native image by table lookup alone.
pub fn apply_lut(lut: &LookupTable, quilt: &Quilt) -> Result<NativeImage> {
    check_quilt(lut, quilt)?;
    let mut data = vec![0u8; lut.panel_width as usize * lut.panel_height as usize * CHANNELS];
    gather_rows(lut, quilt.image().data(), 0, &mut data);
    Ok(NativeImage::from_raster(RasterImage::new(
        lut.panel_width,
        lut.panel_height,
        data,
    )?))
}

/// [`apply_lut`] with the panel split into `bands` horizontal row bands,
/// each filled by its own thread. Output does not depend on `bands`.
pub fn apply_lut_parallel(lut: &LookupTable, quilt: &Quilt, bands: usize) -> Result<NativeImage> {
    if bands == 0 {
        return Err(Error::InvalidArgument(
            "band count must be at least 1".into(),
        ));
    }
    check_quilt(lut, quilt)?;
    let (pw, ph) = (lut.panel_width as usize, lut.panel_height as usize);
    let stride = pw * CHANNELS;
    let rows_per_band = ph.div_ceil(bands);
    let src = quilt.image().data();
    let mut data = vec![0u8; pw * ph * CHANNELS];
    std::thread::scope(|scope| {
        for (band, chunk) in data.chunks_mut(rows_per_band * stride).enumerate() {
            scope.spawn(move || gather_rows(lut, src, band * rows_per_band, chunk));
        }
    });
    Ok(NativeImage::from_raster(RasterImage::new(
        lut.panel_width,
        lut.panel_height,
        data,
    )?))
}

/// Timings of the direct and table-driven renderers, in seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub repetitions: usize,
    pub lut_build_secs: f64,
    pub direct_median_secs: f64,
    pub lut_median_secs: f64,
    /// `direct / lut`.
    pub speedup: f64,
    /// `(bands, median seconds)` for the parallel renderer.
    pub parallel: Vec<(usize, f64)>,
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "repetitions      {}", self.repetitions)?;
        writeln!(f, "lut build        {:.4} s (one-off)", self.lut_build_secs)?;
        writeln!(f, "direct median    {:.4} s", self.direct_median_secs)?;
        writeln!(f, "lut median       {:.4} s", self.lut_median_secs)?;
        writeln!(f, "speedup          {:.2}x", self.speedup)?;
        for (bands, secs) in &self.parallel {
            writeln!(f, "lut {bands} band(s)    {secs:.4} s")?;
        }
        Ok(())
    }
}

pub fn median(samples: &mut [f64]) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

/// Median wall time of `f` over `repetitions` runs after one discarded
/// warm-up run.
pub fn time_median<T>(repetitions: usize, mut f: impl FnMut() -> T) -> f64 {
    std::hint::black_box(f());
    let mut samples: Vec<f64> = (0..repetitions)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_secs_f64()
        })
        .collect();
    median(&mut samples)
}

/// Like [`time_median`] for several workloads, run round-robin so drift in
/// machine speed affects all of them alike.
pub fn time_medians_interleaved<const N: usize>(
    repetitions: usize,
    mut workloads: [&mut dyn FnMut(); N],
) -> [f64; N] {
    workloads.iter_mut().for_each(|f| f());
    let mut samples = vec![Vec::with_capacity(repetitions); N];
    for _ in 0..repetitions {
        for (f, s) in workloads.iter_mut().zip(&mut samples) {
            let start = Instant::now();
            f();
            s.push(start.elapsed().as_secs_f64());
        }
    }
    let mut out = [0.0; N];
    for (o, s) in out.iter_mut().zip(&mut samples) {
        *o = median(s);
    }
    out
}

pub const BENCH_BANDS: [usize; 3] = [1, 2, 4];

/// Compare per-frame cost of direct evaluation against table lookup. The
/// table build is timed once and excluded from the per-frame medians.
pub fn benchmark(
    cal: &Calibration,
    layout: QuiltLayout,
    quilt: &Quilt,
    repetitions: usize,
) -> Result<BenchReport> {
    if repetitions < 3 {
        return Err(Error::InvalidArgument(format!(
            "benchmark needs at least 3 repetitions, got {repetitions}"
        )));
    }
    if *quilt.layout() != layout {
        return Err(Error::Layout(format!(
            "quilt layout {:?} differs from requested {layout:?}",
            quilt.layout()
        )));
    }
    let start = Instant::now();
    let lut = build_lut(cal, layout)?;
    let lut_build_secs = start.elapsed().as_secs_f64();

    // Surface errors before timing.
    render_native_direct(quilt, cal)?;
    apply_lut(&lut, quilt)?;

    let [direct, table] = time_medians_interleaved(
        repetitions,
        [&mut || drop(render_native_direct(quilt, cal)), &mut || {
            drop(apply_lut(&lut, quilt))
        }],
    );
    let parallel = BENCH_BANDS
        .iter()
        .map(|&bands| {
            (
                bands,
                time_median(repetitions, || apply_lut_parallel(&lut, quilt, bands)),
            )
        })
        .collect();
    Ok(BenchReport {
        repetitions,
        lut_build_secs,
        direct_median_secs: direct,
        lut_median_secs: table,
        speedup: direct / table,
        parallel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lightfield::SubpixelMapper;
    use crate::quilt::assemble_quilt;
    use crate::synthetic::{graded_views, hue_views};
    use proptest::prelude::*;

    fn small_cal() -> Calibration {
        Calibration::new(11.3, 0.23, -2.5, 32, 64, 40).unwrap()
    }

    fn small_layout() -> QuiltLayout {
        QuiltLayout::new(4, 8, 16, 8).unwrap()
    }

    #[test]
    fn entries_match_mapper_exhaustively() {
        let cal = small_cal();
        let lut = build_lut(&cal, small_layout()).unwrap();
        let mapper = SubpixelMapper::new(&cal, small_layout()).unwrap();
        for y in 0..40 {
            for x in 0..64 {
                for c in 0..3 {
                    let (qx, qy) = mapper.map(x, y, c as u32);
                    assert_eq!(lut.entry(x, y, c), (qx as u16, qy as u16));
                }
            }
        }
    }

    #[test]
    fn minimal_layout_stays_in_bounds() {
        let cal = Calibration::new(5.0, 0.1, 0.0, 2, 30, 20).unwrap();
        let layout = QuiltLayout::new(2, 1, 7, 5).unwrap();
        let lut = build_lut(&cal, layout).unwrap();
        for y in 0..20 {
            for x in 0..30 {
                for c in 0..3 {
                    let (qx, qy) = lut.entry(x, y, c);
                    assert!(qx < 14 && qy < 5);
                }
            }
        }
    }

    #[test]
    fn file_size_and_roundtrip() {
        let lut = build_lut(&small_cal(), small_layout()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.lut");
        save_lut(&lut, &path).unwrap();
        assert_eq!(
            std::fs::metadata(&path).unwrap().len(),
            24 + 3 * 64 * 40 * 4
        );
        assert_eq!(load_lut(&path).unwrap(), lut);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let bytes = build_lut(&small_cal(), small_layout()).unwrap().encode();
        assert!(matches!(
            LookupTable::decode(&bytes[..bytes.len() - 2]),
            Err(Error::Truncated { .. })
        ));
        assert!(matches!(
            LookupTable::decode(&bytes[..10]),
            Err(Error::Truncated { .. })
        ));

        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'X';
        assert!(matches!(
            LookupTable::decode(&bad_magic),
            Err(Error::LutMagic)
        ));

        let mut oob = bytes.clone();
        oob[24..26].copy_from_slice(&999u16.to_le_bytes());
        assert!(matches!(
            LookupTable::decode(&oob),
            Err(Error::LutOutOfBounds { qx: 999, .. })
        ));
    }

    #[test]
    fn oversized_quilt_is_rejected() {
        let cal = Calibration::new(10.0, 0.0, 0.0, 2, 4, 4).unwrap();
        let layout = QuiltLayout::new(2, 1, 40_000, 4).unwrap();
        assert!(matches!(
            build_lut(&cal, layout),
            Err(Error::QuiltTooLarge { .. })
        ));
    }

    #[test]
    fn uniform_quilt_and_quilt_mismatch() {
        let lut = build_lut(&small_cal(), small_layout()).unwrap();
        let quilt = Quilt::new(RasterImage::filled(64, 64, [3, 4, 5]), small_layout()).unwrap();
        assert_eq!(
            apply_lut(&lut, &quilt).unwrap().raster(),
            &RasterImage::filled(64, 40, [3, 4, 5])
        );
        let other = Quilt::new(
            RasterImage::filled(32, 64, [0; 3]),
            QuiltLayout::new(4, 8, 8, 8).unwrap(),
        )
        .unwrap();
        assert!(apply_lut(&lut, &other).is_err());
        assert!(apply_lut_parallel(&lut, &quilt, 0).is_err());
    }

    #[test]
    fn bands_do_not_change_output() {
        let cal = small_cal();
        let lut = build_lut(&cal, small_layout()).unwrap();
        let quilt = assemble_quilt(&hue_views(32, 16, 8), small_layout()).unwrap();
        let serial = apply_lut(&lut, &quilt).unwrap();
        for bands in [1, 2, 3, 4, 7, 40, 100] {
            assert_eq!(
                apply_lut_parallel(&lut, &quilt, bands).unwrap(),
                serial,
                "{bands}"
            );
        }
    }

    #[test]
    fn median_of_samples() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn benchmark_smoke() {
        let cal = small_cal();
        let quilt = assemble_quilt(&graded_views(32, 16, 8, 8), small_layout()).unwrap();
        let report = benchmark(&cal, small_layout(), &quilt, 3).unwrap();
        assert_eq!(report.repetitions, 3);
        assert_eq!(report.parallel.len(), BENCH_BANDS.len());
        assert!(report.speedup > 0.0 && report.speedup.is_finite());
        let text = report.to_string();
        for field in [
            "lut build",
            "direct median",
            "lut median",
            "speedup",
            "4 band",
        ] {
            assert!(text.contains(field), "{text}");
        }
        assert!(benchmark(&cal, small_layout(), &quilt, 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn lut_equals_direct(
            pitch in 3.0f64..64.0,
            slope in -0.5f64..0.5,
            off_frac in -1.0f64..1.0,
            seed in any::<u64>(),
        ) {
            let cal = Calibration::new(pitch, slope, off_frac * pitch, 32, 64, 40).unwrap();
            let layout = small_layout();
            let views = crate::synthetic::Texture::new(seed).render(64, 64, 0.0, 0.0);
            let quilt = Quilt::new(views, layout).unwrap();
            let lut = build_lut(&cal, layout).unwrap();
            let direct = render_native_direct(&quilt, &cal).unwrap();
            prop_assert_eq!(&apply_lut(&lut, &quilt).unwrap(), &direct);
            let reloaded = LookupTable::decode(&lut.encode()).unwrap();
            prop_assert_eq!(&apply_lut(&reloaded, &quilt).unwrap(), &direct);
        }
    }
}
