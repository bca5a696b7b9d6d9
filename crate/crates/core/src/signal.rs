// SPDX-License-Identifier: MIT OR Apache-2.0

//! Core data types shared by every stage of the pipeline, plus the CSV and
//! JSON file formats they are exchanged in.
//!
//! Change points use 0-based half-open segments: a change point `k` is the
//! first index of a new segment, so change points `[k1, k2]` over a signal
//! of length `n` describe segments `[0, k1)`, `[k1, k2)` and `[k2, n)`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `T x p` matrix of per-frame feature vectors, one row per time step.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    data: DMatrix<f64>,
    frame_ids: Option<Vec<i64>>,
}

impl FeatureMatrix {
    pub fn new(data: DMatrix<f64>, frame_ids: Option<Vec<i64>>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::EmptyInput(format!(
                "feature matrix must be at least 1x1, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        for row in 0..data.nrows() {
            for column in 0..data.ncols() {
                if !data[(row, column)].is_finite() {
                    return Err(Error::NonFinite { row, column });
                }
            }
        }
        if let Some(ids) = &frame_ids {
            if ids.len() != data.nrows() {
                return Err(Error::LengthMismatch {
                    expected: data.nrows(),
                    found: ids.len(),
                });
            }
            if let Some(i) = ids.windows(2).position(|w| w[0] >= w[1]) {
                return Err(Error::Schema {
                    line: i + 2,
                    message: format!(
                        "frame ids must be strictly increasing ({} follows {})",
                        ids[i + 1],
                        ids[i]
                    ),
                });
            }
        }
        Ok(Self { data, frame_ids })
    }

    /// Builds a matrix from row vectors, all of which must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
            return Err(Error::Schema {
                line: i + 1,
                message: format!("expected {ncols} values, found {}", rows[i].len()),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(rows.len(), ncols, &flat), None)
    }

    /// Number of frames `T`.
    pub fn len(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.data.nrows() == 0
    }

    /// Feature width `p`.
    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn frame_ids(&self) -> Option<&[i64]> {
        self.frame_ids.as_deref()
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }
}

/// One value per frame: the projection that change-point search runs on.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding1D {
    values: Vec<f64>,
    source: String,
    degenerate: bool,
}

impl Embedding1D {
    pub fn new(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("embedding has no values".into()));
        }
        if let Some(row) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column: 0 });
        }
        Ok(Self {
            values,
            source: source.into(),
            degenerate: false,
        })
    }

    pub(crate) fn mark_degenerate(mut self) -> Self {
        self.degenerate = true;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Descriptor of the method that produced the values, e.g. `pca`.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// True when the projection collapsed to all zeros.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

/// Result of a change-point search.
#[derive(Clone, Debug, PartialEq)]
pub struct Segmentation {
    /// Strictly increasing interior indices in `1..len`.
    pub changepoints: Vec<usize>,
    /// Sum of segment costs plus `changepoints.len() * beta`.
    pub total_cost: f64,
    pub beta: f64,
    pub algorithm: String,
    /// Length of the segmented signal.
    pub len: usize,
}

impl Segmentation {
    pub fn num_segments(&self) -> usize {
        self.changepoints.len() + 1
    }

    /// Half-open `(start, end)` bounds of every segment, in order.
    pub fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let starts = std::iter::once(0).chain(self.changepoints.iter().copied());
        let ends = self
            .changepoints
            .iter()
            .copied()
            .chain(std::iter::once(self.len));
        starts.zip(ends)
    }

    /// Checks ordering, bounds and minimum segment length.
    pub fn validate(&self, min_len: usize) -> Result<()> {
        for (start, end) in self.segments() {
            if end <= start {
                return Err(Error::Interval { start, end });
            }
            if !self.changepoints.is_empty() && end - start < min_len {
                return Err(Error::Infeasible(format!(
                    "segment [{start}, {end}) is shorter than min_len {min_len}"
                )));
            }
        }
        Ok(())
    }

    pub fn to_record(&self, embedding: &str) -> SegmentationRecord {
        SegmentationRecord {
            changepoints: self.changepoints.clone(),
            beta: round_sig(self.beta),
            num_segments: self.num_segments(),
            total_cost: round_sig(self.total_cost),
            algorithm: self.algorithm.clone(),
            embedding: embedding.to_owned(),
            created_unix: None,
        }
    }
}

/// On-disk JSON form of a [`Segmentation`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentationRecord {
    pub changepoints: Vec<usize>,
    pub beta: f64,
    pub num_segments: usize,
    pub total_cost: f64,
    pub algorithm: String,
    pub embedding: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
}

impl SegmentationRecord {
    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = open(path)?;
        let record: Self = serde_json::from_reader(BufReader::new(file))?;
        if record.changepoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Schema {
                line: 1,
                message: "changepoints must be strictly increasing".into(),
            });
        }
        if record.num_segments != record.changepoints.len() + 1 {
            return Err(Error::Schema {
                line: 1,
                message: format!(
                    "num_segments is {} but there are {} changepoints",
                    record.num_segments,
                    record.changepoints.len()
                ),
            });
        }
        Ok(record)
    }
}

/// Per-frame class ids; 0 is normal, anything else an abnormality class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSequence {
    pub classes: Vec<u32>,
}

impl LabelSequence {
    pub fn new(classes: Vec<u32>) -> Self {
        Self { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Rounds to the 12 significant digits used in every report file.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n").map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Loads a headerless feature CSV. With `has_frame_ids` the first column is
/// read as an integer frame id rather than a feature.
pub fn load_feature_matrix(path: &Path, has_frame_ids: bool) -> Result<FeatureMatrix> {
    read_feature_matrix(open(path)?, has_frame_ids)
}

pub fn read_feature_matrix<R: Read>(reader: R, has_frame_ids: bool) -> Result<FeatureMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut width = None;
    let mut nrows = 0;
    let mut flat = Vec::new();
    let mut ids = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(nrows + 1, |p| p.line() as usize);
        if width.is_none() {
            width = Some(record.len());
        }
        let expected = width.unwrap_or_default();
        if record.len() != expected {
            return Err(Error::Schema {
                line,
                message: format!("expected {expected} columns, found {}", record.len()),
            });
        }
        let mut cells = record.iter().enumerate();
        if has_frame_ids {
            let (_, cell) = cells.next().ok_or_else(|| Error::Schema {
                line,
                message: "missing frame id column".into(),
            })?;
            let id = cell.parse::<i64>().map_err(|_| Error::Parse {
                line,
                column: 1,
                cell: cell.to_owned(),
            })?;
            ids.push(id);
        }
        for (i, cell) in cells {
            let value = cell.parse::<f64>().map_err(|_| Error::Parse {
                line,
                column: i + 1,
                cell: cell.to_owned(),
            })?;
            flat.push(value);
        }
        nrows += 1;
    }

    let ncols = width.unwrap_or(0).saturating_sub(usize::from(has_frame_ids));
    if nrows == 0 {
        return Err(Error::EmptyInput("feature file has no rows".into()));
    }
    if ncols == 0 {
        return Err(Error::Schema {
            line: 1,
            message: "rows carry no feature values".into(),
        });
    }
    let data = DMatrix::from_row_slice(nrows, ncols, &flat);
    FeatureMatrix::new(data, has_frame_ids.then_some(ids))
}

/// Writes a feature CSV with values in shortest round-trip form, so that
/// loading the file back reproduces every entry exactly.
pub fn write_feature_matrix(path: &Path, matrix: &FeatureMatrix) -> Result<()> {
    let mut out = create(path)?;
    write_feature_rows(&mut out, matrix).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

fn write_feature_rows<W: Write>(out: &mut W, matrix: &FeatureMatrix) -> std::io::Result<()> {
    let data = matrix.data();
    for row in 0..data.nrows() {
        if let Some(ids) = matrix.frame_ids() {
            write!(out, "{},", ids[row])?;
        }
        for col in 0..data.ncols() {
            if col > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{:?}", data[(row, col)])?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Loads a label file and checks it covers exactly `expected_len` frames.
pub fn load_labels(path: &Path, expected_len: usize) -> Result<LabelSequence> {
    let labels = read_labels(BufReader::new(open(path)?))?;
    if labels.len() != expected_len {
        return Err(Error::LengthMismatch {
            expected: expected_len,
            found: labels.len(),
        });
    }
    Ok(labels)
}

/// Reads labels given either on one comma-separated line or one per line.
pub fn read_labels<R: BufRead>(reader: R) -> Result<LabelSequence> {
    let mut classes = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: "<labels>".into(),
            source,
        })?;
        for (column, cell) in line.split(',').map(str::trim).enumerate() {
            if cell.is_empty() {
                continue;
            }
            let value = cell.parse::<i64>().map_err(|_| Error::Parse {
                line: i + 1,
                column: column + 1,
                cell: cell.to_owned(),
            })?;
            let class = u32::try_from(value).map_err(|_| Error::Schema {
                line: i + 1,
                message: format!("class ids must be nonnegative, found {value}"),
            })?;
            classes.push(class);
        }
    }
    if classes.is_empty() {
        return Err(Error::EmptyInput("label file has no values".into()));
    }
    Ok(LabelSequence::new(classes))
}

pub fn write_labels(path: &Path, labels: &LabelSequence) -> Result<()> {
    let mut out = create(path)?;
    for class in &labels.classes {
        writeln!(out, "{class}").map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}

/// Reads a single-column embedding CSV.
pub fn load_embedding(path: &Path) -> Result<Embedding1D> {
    let matrix = load_feature_matrix(path, false)?;
    if matrix.dim() != 1 {
        return Err(Error::Schema {
            line: 1,
            message: format!("embedding file must have one column, found {}", matrix.dim()),
        });
    }
    Embedding1D::new(matrix.into_inner().as_slice().to_vec(), "file")
}

/// Writes an embedding as a single-column CSV in shortest round-trip form.
pub fn write_embedding(path: &Path, embedding: &Embedding1D) -> Result<()> {
    let mut out = create(path)?;
    for v in embedding.values() {
        writeln!(out, "{v:?}").map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}
