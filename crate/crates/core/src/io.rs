//! File formats: QGRID text grids, PPM colour images, PGM/CSV heatmaps and
//! per-slice WVD export.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, ImageReader};

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, SampledSignal};
use crate::quaternion::Quaternion;
use crate::wvd::WvdGrid;

/// Header tag: `QGRID` for signals, `QGRID-FREQ` for spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Time,
    Frequency,
}

impl GridKind {
    fn tag(self) -> &'static str {
        match self {
            Self::Time => "QGRID",
            Self::Frequency => "QGRID-FREQ",
        }
    }
}

/// Writes `TAG n1 n2 delta1 delta2 origin1 origin2` and one `q0 q1 q2 q3` line
/// per sample, row-major, in shortest round-trip decimal form.
pub fn write_qgrid<W: Write>(mut w: W, signal: &SampledSignal, kind: GridKind) -> Result<()> {
    let g = signal.geometry();
    writeln!(w, "{} {} {} {:?} {:?} {:?} {:?}", kind.tag(), g.n1, g.n2, g.delta1, g.delta2, g.origin1, g.origin2)?;
    for q in signal.values() {
        writeln!(w, "{:?} {:?} {:?} {:?}", q.q0, q.q1, q.q2, q.q3)?;
    }
    Ok(())
}

pub fn read_qgrid<R: Read>(r: R) -> Result<(GridKind, SampledSignal)> {
    let mut lines = BufReader::new(r).lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let kind = match parts.first() {
        Some(&"QGRID") => GridKind::Time,
        Some(&"QGRID-FREQ") => GridKind::Frequency,
        _ => return Err(Error::Parse(format!("bad grid header `{header}`"))),
    };
    if parts.len() != 7 {
        return Err(Error::Parse(format!("grid header needs 6 fields, got {}", parts.len() - 1)));
    }
    let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    let geometry = GridGeometry::new(int(parts[1])?, int(parts[2])?, num(parts[3])?, num(parts[4])?, num(parts[5])?, num(parts[6])?)?;
    let mut values = Vec::with_capacity(geometry.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let c: Vec<f64> = line.split_whitespace().map(num).collect::<Result<_>>()?;
        if c.len() != 4 {
            return Err(Error::Parse(format!("expected 4 components, got `{line}`")));
        }
        values.push(Quaternion::new(c[0], c[1], c[2], c[3]));
    }
    Ok((kind, SampledSignal::new(geometry, values)?))
}

pub fn save_qgrid(path: impl AsRef<Path>, signal: &SampledSignal, kind: GridKind) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_qgrid(&mut w, signal, kind)?;
    w.flush()?;
    Ok(())
}

pub fn load_qgrid(path: impl AsRef<Path>) -> Result<(GridKind, SampledSignal)> {
    read_qgrid(File::open(path)?)
}

/// Reads an 8-bit RGB portable pixmap as `i·r + j·g + k·b` with channels in
/// `[0, 1]`; row `y` becomes axis-1 index, column `x` axis-2 index, unit spacing.
pub fn ingest_image(path: impl AsRef<Path>) -> Result<SampledSignal> {
    let reader = ImageReader::open(path)?.with_guessed_format()?;
    if reader.format() != Some(image::ImageFormat::Pnm) {
        return Err(Error::Image("not a portable pixmap".into()));
    }
    let img = reader.decode().map_err(|e| Error::Image(e.to_string()))?;
    let rgb = match img {
        image::DynamicImage::ImageRgb8(rgb) => rgb,
        other => return Err(Error::Image(format!("expected 8-bit RGB, found {:?}", other.color()))),
    };
    let (w, h) = rgb.dimensions();
    let geometry = GridGeometry::new(h as usize, w as usize, 1.0, 1.0, 0.0, 0.0)?;
    let values = rgb
        .rows()
        .flat_map(|row| row.map(|p| Quaternion::new(0.0, p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0)))
        .collect();
    SampledSignal::new(geometry, values)
}

/// Inverse of [`ingest_image`]: vector part clamped to `[0, 1]` and quantised.
pub fn export_image(signal: &SampledSignal, path: impl AsRef<Path>) -> Result<()> {
    let g = signal.geometry();
    let q = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
    let bytes: Vec<u8> = signal.values().iter().flat_map(|v| [q(v.q1), q(v.q2), q(v.q3)]).collect();
    let file = BufWriter::new(File::create(path)?);
    PnmEncoder::new(file)
        .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
        .write_image(&bytes, g.n2 as u32, g.n1 as u32, ExtendedColorType::Rgb8)
        .map_err(|e| Error::Image(e.to_string()))
}

/// Scalar shown in a heatmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapMode {
    Modulus,
    Component(usize),
}

impl HeatmapMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "modulus" => Ok(Self::Modulus),
            "0" | "1" | "2" | "3" => Ok(Self::Component(s.parse().expect("digit"))),
            other => Err(Error::Parse(format!("heatmap mode must be `modulus` or 0..3, got `{other}`"))),
        }
    }

    fn apply(self, q: Quaternion) -> f64 {
        match self {
            Self::Modulus => q.modulus(),
            Self::Component(m) => q.component(m),
        }
    }

    fn label(self) -> String {
        match self {
            Self::Modulus => "modulus".into(),
            Self::Component(m) => m.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapFormat {
    Pgm,
    Csv,
}

/// Heatmap scaling data written next to a PGM as `<path>.meta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapMeta {
    pub min: f64,
    pub max: f64,
}

impl HeatmapMeta {
    /// Value represented by graymap level `level`.
    pub fn value_of(&self, level: u8) -> f64 {
        self.min + (self.max - self.min) * level as f64 / 255.0
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// PGM with linear min-max scaling plus a `<path>.meta` sidecar, or a CSV of
/// `k1,k2,x1,x2,value`. A constant grid maps to level 0 when zero, 255 otherwise.
pub fn export_heatmap(grid: &SampledSignal, path: impl AsRef<Path>, mode: HeatmapMode, format: HeatmapFormat) -> Result<Option<HeatmapMeta>> {
    let path = path.as_ref();
    let g = grid.geometry();
    let values: Vec<f64> = grid.values().iter().map(|q| mode.apply(*q)).collect();
    match format {
        HeatmapFormat::Csv => {
            let mut w = BufWriter::new(File::create(path)?);
            writeln!(w, "k1,k2,x1,x2,value")?;
            for k1 in 0..g.n1 {
                for k2 in 0..g.n2 {
                    let (x1, x2) = g.coord(k1, k2);
                    writeln!(w, "{k1},{k2},{x1:?},{x2:?},{:?}", values[g.index(k1, k2)])?;
                }
            }
            w.flush()?;
            Ok(None)
        }
        HeatmapFormat::Pgm => {
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let levels: Vec<u8> = values
                .iter()
                .map(|&v| {
                    if max > min {
                        (255.0 * (v - min) / (max - min)).round() as u8
                    } else if v != 0.0 {
                        255
                    } else {
                        0
                    }
                })
                .collect();
            let file = BufWriter::new(File::create(path)?);
            PnmEncoder::new(file)
                .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
                .write_image(&levels, g.n2 as u32, g.n1 as u32, ExtendedColorType::L8)
                .map_err(|e| Error::Image(e.to_string()))?;
            let mut side = BufWriter::new(File::create(sidecar_path(path))?);
            writeln!(side, "mode = {}", mode.label())?;
            writeln!(side, "n1 = {}", g.n1)?;
            writeln!(side, "n2 = {}", g.n2)?;
            writeln!(side, "min = {min:?}")?;
            writeln!(side, "max = {max:?}")?;
            side.flush()?;
            Ok(Some(HeatmapMeta { min, max }))
        }
    }
}

/// Reads a heatmap sidecar.
pub fn read_heatmap_meta(path: impl AsRef<Path>) -> Result<HeatmapMeta> {
    let text = std::fs::read_to_string(sidecar_path(path.as_ref()))?;
    let mut min = None;
    let mut max = None;
    for line in text.lines() {
        if let Some((k, v)) = line.split_once('=') {
            let v = v.trim();
            match k.trim() {
                "min" => min = Some(v.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?),
                "max" => max = Some(v.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?),
                _ => {}
            }
        }
    }
    match (min, max) {
        (Some(min), Some(max)) => Ok(HeatmapMeta { min, max }),
        _ => Err(Error::Parse("sidecar lacks min/max".into())),
    }
}

/// One `QGRID-FREQ` file per time slice plus `manifest.txt` with lines
/// `k1 k2 t1 t2 file`.
pub fn export_wvd_slices(w: &WvdGrid, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let t = w.time();
    let mut manifest = BufWriter::new(File::create(dir.join("manifest.txt"))?);
    writeln!(manifest, "# k1 k2 t1 t2 file")?;
    for k1 in 0..t.n1 {
        for k2 in 0..t.n2 {
            let name = format!("slice_{k1:04}_{k2:04}.qgrid");
            save_qgrid(dir.join(&name), w.slice(k1, k2).as_signal(), GridKind::Frequency)?;
            let (t1, t2) = t.coord(k1, k2);
            writeln!(manifest, "{k1} {k2} {t1:?} {t2:?} {name}")?;
        }
    }
    manifest.flush()?;
    Ok(dir.join("manifest.txt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::random_quaternion_grid;

    #[test]
    fn qgrid_round_trip_is_exact() {
        let geom = GridGeometry::new(5, 3, 0.1, 0.7, -0.25, 1.0 / 3.0).unwrap();
        let f = random_quaternion_grid(geom, 5);
        let mut buf = Vec::new();
        write_qgrid(&mut buf, &f, GridKind::Frequency).unwrap();
        let (kind, g) = read_qgrid(buf.as_slice()).unwrap();
        assert_eq!(kind, GridKind::Frequency);
        assert_eq!(g, f);
    }

    #[test]
    fn qgrid_rejects_malformed() {
        assert!(read_qgrid("".as_bytes()).is_err());
        assert!(read_qgrid("GRID 2 2 1 1 0 0\n".as_bytes()).is_err());
        assert!(read_qgrid("QGRID 2 2 1 1 0 0\n1 2 3 4\n".as_bytes()).is_err());
        assert!(read_qgrid("QGRID 2 1 1 1 0 0\n1 2 3\n1 2 3 4\n".as_bytes()).is_err());
    }

    #[test]
    fn heatmap_modes() {
        assert_eq!(HeatmapMode::parse("modulus").unwrap(), HeatmapMode::Modulus);
        assert_eq!(HeatmapMode::parse("2").unwrap(), HeatmapMode::Component(2));
        assert!(HeatmapMode::parse("4").is_err());
    }
}
