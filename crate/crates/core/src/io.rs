//! File formats: sinogram and dataset JSON, coefficient JSON, phantom
//! specs, 16-bit PGM and raw float64 images, and volume stacks.
//!
//! Reals in JSON are written with 17 significant digits, which round-trips
//! every finite `f64` exactly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{OpedError, Result};
use crate::phantoms::Phantom;
use crate::radon2d::{Scheme, SinogramGrid};
use crate::recon2d::{CoefficientImage, RasterGrid, RasterSpec};
use crate::sphere3d::{Measure, SphereDataset};
use crate::volume3d::{BallDataset, CylinderDataset};

pub const SINO_FORMAT: &str = "oped-sino/1";
pub const COEF_FORMAT: &str = "oped-coef/1";
pub const VOLUME_FORMAT: &str = "oped-volume/1";

/// JSON formatter writing floats as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PreciseFloats;

impl Formatter for PreciseFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes `value` with [`PreciseFloats`]. Non-finite reals are
/// rejected rather than silently turned into `null`.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFloats);
    value.serialize(&mut ser)?;
    let s = String::from_utf8(buf).map_err(|e| OpedError::Format(e.to_string()))?;
    if s.contains("null") {
        return Err(OpedError::Format("non-finite value cannot be written to JSON".into()));
    }
    Ok(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| OpedError::Format(format!("{}: {e}", path.display())))
}

fn check_format(found: &str, expect: &str) -> Result<()> {
    if found != expect {
        return Err(OpedError::Format(format!("expected format {expect:?}, found {found:?}")));
    }
    Ok(())
}

fn f64s_to_le(values: impl IntoIterator<Item = f64>) -> Vec<u8> {
    values.into_iter().flat_map(f64::to_le_bytes).collect()
}

fn le_to_f64s(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(OpedError::Format(format!("raw block of {} bytes is not a float64 array", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

fn sidecar_path(json: &Path) -> PathBuf {
    json.with_extension("f64")
}

fn resolve(json: &Path, rel: &str) -> PathBuf {
    json.parent().map_or_else(|| PathBuf::from(rel), |d| d.join(rel))
}

/// Projection data: rank 2 for disk and sphere, rank 3 for volumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataArray {
    Rank2(Vec<Vec<f64>>),
    Rank3(Vec<Vec<Vec<f64>>>),
}

impl DataArray {
    fn flat(&self) -> Vec<f64> {
        match self {
            DataArray::Rank2(d) => d.iter().flatten().copied().collect(),
            DataArray::Rank3(d) => d.iter().flatten().flatten().copied().collect(),
        }
    }
}

/// On-disk layout shared by every projection dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format: String,
    pub mu: f64,
    pub scheme: String,
    pub order: usize,
    pub angles: Vec<f64>,
    pub nodes: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataArray>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_ref: Option<String>,
}

impl DatasetFile {
    /// Writes the JSON document; with `sidecar` the data go to a `.f64`
    /// file next to it and are referenced by `data_ref`.
    pub fn write(&self, path: &Path, sidecar: bool) -> Result<()> {
        let mut doc = self.clone();
        if sidecar {
            let data = doc.data.take().ok_or_else(|| OpedError::Format("dataset has no data".into()))?;
            let raw = sidecar_path(path);
            fs::write(&raw, f64s_to_le(data.flat()))?;
            doc.data_ref = Some(raw.file_name().expect("file name").to_string_lossy().into_owned());
        }
        write_json(path, &doc)
    }

    /// Reads the JSON document and inlines a referenced sidecar, using the
    /// given per-axis extents to reshape it.
    pub fn read(path: &Path, shape: impl Fn(&DatasetFile) -> Vec<usize>) -> Result<Self> {
        let mut doc: DatasetFile = read_json(path)?;
        check_format(&doc.format, SINO_FORMAT)?;
        if let Some(rel) = doc.data_ref.take() {
            let values = le_to_f64s(&fs::read(resolve(path, &rel))?)?;
            let dims = shape(&doc);
            if dims.iter().product::<usize>() != values.len() {
                return Err(OpedError::Format(format!("sidecar holds {} values, expected {dims:?}", values.len())));
            }
            doc.data = Some(match dims.as_slice() {
                [_, c] => DataArray::Rank2(values.chunks(*c).map(<[f64]>::to_vec).collect()),
                [_, b, c] => DataArray::Rank3(
                    values
                        .chunks(b * c)
                        .map(|blk| blk.chunks(*c).map(<[f64]>::to_vec).collect())
                        .collect(),
                ),
                _ => return Err(OpedError::Format("unsupported data rank".into())),
            });
        }
        Ok(doc)
    }
}

fn rank2(doc: &DatasetFile) -> Result<Vec<Vec<f64>>> {
    match &doc.data {
        Some(DataArray::Rank2(d)) => Ok(d.clone()),
        _ => Err(OpedError::Format("expected a two-dimensional data array".into())),
    }
}

fn rank3(doc: &DatasetFile) -> Result<Vec<Vec<Vec<f64>>>> {
    match &doc.data {
        Some(DataArray::Rank3(d)) => Ok(d.clone()),
        Some(DataArray::Rank2(d)) if d.is_empty() => Ok(Vec::new()),
        _ => Err(OpedError::Format("expected a three-dimensional data array".into())),
    }
}

pub fn write_sinogram(path: &Path, sino: &SinogramGrid, sidecar: bool) -> Result<()> {
    DatasetFile {
        format: SINO_FORMAT.into(),
        mu: sino.mu,
        scheme: sino.scheme.name().into(),
        order: sino.scheme.order(),
        angles: sino.angles.clone(),
        nodes: sino.nodes.clone(),
        measure: None,
        length: None,
        axis_nodes: None,
        w_nodes: None,
        data: Some(DataArray::Rank2(sino.data.clone())),
        data_ref: None,
    }
    .write(path, sidecar)
}

pub fn read_sinogram(path: &Path) -> Result<SinogramGrid> {
    let doc = DatasetFile::read(path, |d| vec![d.angles.len(), d.nodes.len()])?;
    let sino = SinogramGrid {
        mu: doc.mu,
        scheme: Scheme::from_name(&doc.scheme, doc.order)?,
        angles: doc.angles.clone(),
        nodes: doc.nodes.clone(),
        data: rank2(&doc)?,
    };
    sino.validate().map_err(|e| OpedError::Format(e.to_string()))?;
    Ok(sino)
}

pub fn write_sphere(path: &Path, ds: &SphereDataset, sidecar: bool) -> Result<()> {
    DatasetFile {
        format: SINO_FORMAT.into(),
        mu: ds.mu,
        scheme: "sphere-gauss".into(),
        order: ds.n,
        angles: ds.angles.clone(),
        nodes: ds.nodes.clone(),
        measure: Some(ds.measure.name().into()),
        length: None,
        axis_nodes: None,
        w_nodes: None,
        data: Some(DataArray::Rank2(ds.data.clone())),
        data_ref: None,
    }
    .write(path, sidecar)
}

pub fn read_sphere(path: &Path) -> Result<SphereDataset> {
    let doc = DatasetFile::read(path, |d| vec![d.angles.len(), d.nodes.len()])?;
    check_format(&doc.scheme, "sphere-gauss")?;
    let measure = Measure::from_name(doc.measure.as_deref().unwrap_or("paper-q"))?;
    Ok(SphereDataset {
        mu: doc.mu,
        n: doc.order,
        angles: doc.angles.clone(),
        nodes: doc.nodes.clone(),
        data: rank2(&doc)?,
        measure,
    })
}

/// Moves the last index of `data[a][b][c]` to the front.
fn last_to_front(data: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
    let (na, nb) = (data.len(), data.first().map_or(0, Vec::len));
    let nc = data.first().and_then(|v| v.first()).map_or(0, Vec::len);
    (0..nc)
        .map(|c| (0..na).map(|a| (0..nb).map(|b| data[a][b][c]).collect()).collect())
        .collect()
}

/// Moves the first index of `data[c][a][b]` to the back.
fn front_to_last(data: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
    let nc = data.len();
    let na = data.first().map_or(0, Vec::len);
    let nb = data.first().and_then(|v| v.first()).map_or(0, Vec::len);
    (0..na)
        .map(|a| (0..nb).map(|b| (0..nc).map(|c| data[c][a][b]).collect()).collect())
        .collect()
}

/// Cylinder data are stored slice-outermost: `data[i][ν][j]`.
pub fn write_cylinder(path: &Path, ds: &CylinderDataset, sidecar: bool) -> Result<()> {
    DatasetFile {
        format: SINO_FORMAT.into(),
        mu: ds.mu,
        scheme: "cylinder".into(),
        order: ds.n,
        angles: ds.angles.clone(),
        nodes: ds.nodes.clone(),
        measure: None,
        length: Some(ds.length),
        axis_nodes: Some(ds.axis_nodes.clone()),
        w_nodes: None,
        data: Some(DataArray::Rank3(last_to_front(&ds.data))),
        data_ref: None,
    }
    .write(path, sidecar)
}

pub fn read_cylinder(path: &Path) -> Result<CylinderDataset> {
    let doc = DatasetFile::read(path, |d| {
        vec![d.axis_nodes.as_ref().map_or(0, Vec::len), d.angles.len(), d.nodes.len()]
    })?;
    check_format(&doc.scheme, "cylinder")?;
    let ds = CylinderDataset {
        mu: doc.mu,
        length: doc.length.ok_or_else(|| OpedError::Format("cylinder dataset needs \"L\"".into()))?,
        n: doc.order,
        angles: doc.angles.clone(),
        nodes: doc.nodes.clone(),
        axis_nodes: doc.axis_nodes.clone().unwrap_or_default(),
        data: front_to_last(&rank3(&doc)?),
    };
    ds.validate().map_err(|e| OpedError::Format(e.to_string()))?;
    Ok(ds)
}

/// Ball data are stored plane-outermost: `data[k][ν][j]`.
pub fn write_ball(path: &Path, ds: &BallDataset, sidecar: bool) -> Result<()> {
    DatasetFile {
        format: SINO_FORMAT.into(),
        mu: ds.mu,
        scheme: "ball".into(),
        order: ds.n,
        angles: ds.angles.clone(),
        nodes: ds.t_nodes.clone(),
        measure: None,
        length: None,
        axis_nodes: None,
        w_nodes: Some(ds.w_nodes.clone()),
        data: Some(DataArray::Rank3(last_to_front(&ds.data))),
        data_ref: None,
    }
    .write(path, sidecar)
}

pub fn read_ball(path: &Path) -> Result<BallDataset> {
    let doc = DatasetFile::read(path, |d| {
        vec![d.w_nodes.as_ref().map_or(0, Vec::len), d.angles.len(), d.nodes.len()]
    })?;
    check_format(&doc.scheme, "ball")?;
    let ds = BallDataset {
        mu: doc.mu,
        n: doc.order,
        angles: doc.angles.clone(),
        t_nodes: doc.nodes.clone(),
        w_nodes: doc.w_nodes.clone().unwrap_or_default(),
        data: front_to_last(&rank3(&doc)?),
    };
    ds.validate().map_err(|e| OpedError::Format(e.to_string()))?;
    Ok(ds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CoefFile {
    format: String,
    mu: f64,
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scheme: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    coeffs: Vec<Vec<Vec<f64>>>,
}

pub fn coefficients_to_json(img: &CoefficientImage) -> Result<String> {
    to_json_string(&CoefFile {
        format: COEF_FORMAT.into(),
        mu: img.mu,
        degree: img.degree,
        scheme: img.scheme.map(|s| s.name().to_string()),
        order: img.scheme.map(|s| s.order()),
        coeffs: img.nested(),
    })
}

pub fn write_coefficients(path: &Path, img: &CoefficientImage) -> Result<()> {
    fs::write(path, coefficients_to_json(img)?)?;
    Ok(())
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientImage> {
    let doc: CoefFile = read_json(path)?;
    check_format(&doc.format, COEF_FORMAT)?;
    if doc.coeffs.len() != doc.degree + 1 {
        return Err(OpedError::Format(format!("degree {} needs {} coefficient rows", doc.degree, doc.degree + 1)));
    }
    let mut img = CoefficientImage::from_nested(doc.mu, &doc.coeffs)?;
    img.scheme = match (doc.scheme, doc.order) {
        (Some(s), Some(o)) => Some(Scheme::from_name(&s, o)?),
        _ => None,
    };
    Ok(img)
}

pub fn write_phantom(path: &Path, phantom: &Phantom) -> Result<()> {
    write_json(path, phantom)
}

pub fn read_phantom(path: &Path) -> Result<Phantom> {
    let p: Phantom = read_json(path)?;
    p.validate().map_err(|e| OpedError::Format(e.to_string()))?;
    Ok(p)
}

/// Raster image encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    /// Binary 16-bit big-endian PGM with a `.json` scaling sidecar.
    Pgm16,
    /// Little-endian row-major float64 with a `.json` header.
    F64Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageHeader {
    pub format: String,
    pub width: usize,
    pub height: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    /// How pixels outside the disk are encoded.
    pub masked: String,
}

fn unmasked_nan(grid: &RasterGrid) -> Result<()> {
    let bad: Vec<usize> = (0..grid.values.len())
        .filter(|&i| grid.mask[i] && !grid.values[i].is_finite())
        .collect();
    if !bad.is_empty() {
        let shown: Vec<String> = bad.iter().take(16).map(|i| format!("({}, {})", i % grid.spec.width, i / grid.spec.width)).collect();
        return Err(OpedError::Format(format!(
            "{} non-finite pixels (col, row): {}{}",
            bad.len(),
            shown.join(", "),
            if bad.len() > 16 { ", ..." } else { "" }
        )));
    }
    Ok(())
}

/// 16-bit samples of a grid under the linear map `[min, max] → [0, 65535]`;
/// a zero span maps every pixel to mid-gray. Masked pixels become 0.
pub fn pgm_samples(grid: &RasterGrid) -> Result<(Vec<u16>, f64, f64)> {
    unmasked_nan(grid)?;
    let inside = || (0..grid.values.len()).filter(|&i| grid.mask[i]).map(|i| grid.values[i]);
    let min = inside().fold(f64::INFINITY, f64::min);
    let max = inside().fold(f64::NEG_INFINITY, f64::max);
    let (min, max) = if min.is_finite() { (min, max) } else { (0.0, 0.0) };
    let span = max - min;
    let samples = (0..grid.values.len())
        .map(|i| {
            if !grid.mask[i] {
                0
            } else if span == 0.0 {
                32768
            } else {
                ((grid.values[i] - min) / span * 65535.0).round().clamp(0.0, 65535.0) as u16
            }
        })
        .collect();
    Ok((samples, min, max))
}

/// Writes `path` and a header/sidecar at `path.json`.
pub fn write_image(grid: &RasterGrid, path: &Path, format: ImageFormat) -> Result<()> {
    let header_path = path.with_extension(match format {
        ImageFormat::Pgm16 => "pgm.json",
        ImageFormat::F64Raw => "f64.json",
    });
    let (w, h) = (grid.spec.width, grid.spec.height);
    match format {
        ImageFormat::Pgm16 => {
            let (samples, min, max) = pgm_samples(grid)?;
            let mut bytes = format!("P5\n{w} {h}\n65535\n").into_bytes();
            bytes.extend(samples.iter().flat_map(|s| s.to_be_bytes()));
            fs::write(path, bytes)?;
            write_json(
                &header_path,
                &ImageHeader { format: "oped-pgm16/1".into(), width: w, height: h, min: Some(min), max: Some(max), masked: "zero".into() },
            )
        }
        ImageFormat::F64Raw => {
            unmasked_nan(grid)?;
            fs::write(path, f64s_to_le(grid.values.iter().copied()))?;
            write_json(
                &header_path,
                &ImageHeader { format: "oped-f64raw/1".into(), width: w, height: h, min: None, max: None, masked: "nan".into() },
            )
        }
    }
}

/// Reads an `F64Raw` image; NaN pixels are the masked ones.
pub fn read_f64raw(path: &Path) -> Result<RasterGrid> {
    let header: ImageHeader = read_json(&path.with_extension("f64.json"))?;
    check_format(&header.format, "oped-f64raw/1")?;
    let values = le_to_f64s(&fs::read(path)?)?;
    if values.len() != header.width * header.height {
        return Err(OpedError::Format("raw image size does not match its header".into()));
    }
    let mask = values.iter().map(|v| !v.is_nan()).collect();
    let n = values.len();
    Ok(RasterGrid {
        spec: RasterSpec::new(header.width, header.height),
        values,
        mask,
        excluded: vec![false; n],
    })
}

/// Reads a 16-bit PGM written by [`write_image`] back as raw samples.
pub fn read_pgm16(path: &Path) -> Result<(usize, usize, Vec<u16>)> {
    let bytes = fs::read(path)?;
    let bad = || OpedError::Format(format!("{} is not a 16-bit binary PGM", path.display()));
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad());
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    pos += 1;
    if fields[0] != "P5" || fields[3] != "65535" {
        return Err(bad());
    }
    let w: usize = fields[1].parse().map_err(|_| bad())?;
    let h: usize = fields[2].parse().map_err(|_| bad())?;
    let body = bytes.get(pos..pos + 2 * w * h).ok_or_else(bad)?;
    Ok((w, h, body.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeManifest {
    pub format: String,
    pub kind: String,
    /// `[nx, ny, nz]`.
    pub dims: [usize; 3],
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    pub mu: f64,
    pub degree: usize,
    /// Height of each slice.
    pub z: Vec<f64>,
    /// One little-endian float64 file per slice, row-major, NaN outside
    /// the domain.
    pub slices: Vec<String>,
}

/// Samples `eval(x, y, z)` on an `nx × ny` pixel-centre grid over
/// `[-1, 1]²` at each height in `z`, writing one raw file per slice and a
/// manifest `volume.json` into `dir`. `inside` decides the domain.
#[allow(clippy::too_many_arguments)]
pub fn export_volume(
    dir: &Path,
    kind: &str,
    dims: [usize; 2],
    z: &[f64],
    length: Option<f64>,
    mu: f64,
    degree: usize,
    inside: impl Fn(f64, f64, f64) -> bool + Sync,
    eval: impl Fn(f64, f64, f64) -> Result<f64> + Sync,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let spec = RasterSpec::new(dims[0], dims[1]);
    let mut slices = Vec::with_capacity(z.len());
    for (i, &zi) in z.iter().enumerate() {
        let values: Vec<f64> = {
            use rayon::prelude::*;
            (0..spec.len())
                .into_par_iter()
                .map(|idx| {
                    let (x, y) = spec.pixel_center(idx % spec.width, idx / spec.width);
                    if inside(x, y, zi) {
                        eval(x, y, zi)
                    } else {
                        Ok(f64::NAN)
                    }
                })
                .collect::<Result<_>>()?
        };
        let name = format!("slice_{i:04}.f64");
        fs::write(dir.join(&name), f64s_to_le(values))?;
        slices.push(name);
    }
    let manifest = VolumeManifest {
        format: VOLUME_FORMAT.into(),
        kind: kind.into(),
        dims: [dims[0], dims[1], z.len()],
        length,
        mu,
        degree,
        z: z.to_vec(),
        slices,
    };
    let path = dir.join("volume.json");
    write_json(&path, &manifest)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = to_json_string(&vec![0.1f64, 1.0 / 3.0, -2.5e-300]).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,3.3333333333333331e-1,-2.5000000000000000e-300]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -2.5e-300]);
        assert!(to_json_string(&vec![f64::NAN]).is_err());
    }

    #[test]
    fn pgm_linear_map() {
        let mut g = RasterGrid::from_fn(RasterSpec::new(2, 2), |_, _| 0.0);
        g.mask = vec![true; 4];
        g.values = vec![0.0, 1.0, 1.0, 0.0];
        assert_eq!(pgm_samples(&g).unwrap().0, vec![0, 65535, 65535, 0]);
        g.values = vec![3.0; 4];
        let (s, min, max) = pgm_samples(&g).unwrap();
        assert_eq!((s, min, max), (vec![32768; 4], 3.0, 3.0));
        g.values[2] = f64::NAN;
        let err = pgm_samples(&g).unwrap_err().to_string();
        assert!(err.contains("(0, 1)"), "{err}");
    }

    #[test]
    fn axis_permutations_invert() {
        let d: Vec<Vec<Vec<f64>>> = (0..2)
            .map(|a| (0..3).map(|b| (0..4).map(|c| (100 * a + 10 * b + c) as f64).collect()).collect())
            .collect();
        let moved = last_to_front(&d);
        assert_eq!(moved.len(), 4);
        assert_eq!(moved[3][1][2], 123.0);
        assert_eq!(front_to_last(&moved), d);
    }
}
