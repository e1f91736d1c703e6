//! Tabular point data with optional ground-truth outlier labels.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// A dense table of points. Point ids are the row indices `0..n`, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Array2<f64>,
}

impl Dataset {
    /// Wraps an n x d matrix. Requires n >= 2, d >= 1 and finite values.
    pub fn new(points: Array2<f64>) -> Result<Self> {
        if points.nrows() < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: points.nrows(),
            });
        }
        if points.ncols() == 0 {
            return Err(Error::NoFeatures);
        }
        for ((row, column), v) in points.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFiniteCell {
                    row: row + 1,
                    column: column + 1,
                });
            }
        }
        Ok(Self { points })
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn d(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn row(&self, i: usize) -> ndarray::ArrayView1<'_, f64> {
        self.points.row(i)
    }
}

/// Binary inlier/outlier labels aligned with a dataset's rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<bool>,
    outlier_count: usize,
}

impl GroundTruth {
    /// `true` marks an outlier.
    pub fn new(labels: Vec<bool>) -> Self {
        let outlier_count = labels.iter().filter(|&&l| l).count();
        Self {
            labels,
            outlier_count,
        }
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn is_outlier(&self, i: usize) -> bool {
        self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn outlier_count(&self) -> usize {
        self.outlier_count
    }
}

/// Selects a column by header name or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl ColumnSelector {
    /// Parses a CLI-style selector: digits mean an index, anything else a name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        }
    }

    fn resolve(&self, header: Option<&csv::StringRecord>, width: usize) -> Result<usize> {
        match self {
            ColumnSelector::Index(i) => {
                if *i < width {
                    Ok(*i)
                } else {
                    Err(Error::ColumnOutOfRange { index: *i, width })
                }
            }
            ColumnSelector::Name(name) => header
                .and_then(|h| h.iter().position(|f| f == name))
                .ok_or_else(|| Error::MissingColumn { name: name.clone() }),
        }
    }
}

/// Options for [`load_csv`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub label_column: Option<ColumnSelector>,
    pub has_header: bool,
    /// Columns dropped before parsing (e.g. a `kind` tag emitted by the generator).
    pub ignore_columns: Vec<ColumnSelector>,
}

/// Loads a comma-separated file of real-valued features, optionally splitting off
/// a binary label column (`1` = outlier, `0` = inlier; anything else is rejected).
///
/// Row order is preserved in point ids. Errors name the offending data row and
/// column, both 1-based.
pub fn load_csv<P: AsRef<Path>>(
    path: P,
    options: &LoadOptions,
) -> Result<(Dataset, Option<GroundTruth>)> {
    let path_str = path.as_ref().display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(|e| map_csv_error(e, &path_str))?;

    let header = if options.has_header {
        Some(
            reader
                .headers()
                .map_err(|e| map_csv_error(e, &path_str))?
                .clone(),
        )
    } else {
        None
    };

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for record in reader.records() {
        rows.push(record.map_err(|e| map_csv_error(e, &path_str))?);
    }
    if rows.is_empty() {
        return Err(Error::NoRows { path: path_str });
    }

    let width = header.as_ref().map_or(rows[0].len(), |h| h.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::RaggedRow {
                row: i + 1,
                expected: width,
                found: row.len(),
            });
        }
    }

    let label_idx = options
        .label_column
        .as_ref()
        .map(|sel| sel.resolve(header.as_ref(), width))
        .transpose()?;
    let mut skip = vec![false; width];
    if let Some(idx) = label_idx {
        skip[idx] = true;
    }
    for sel in &options.ignore_columns {
        skip[sel.resolve(header.as_ref(), width)?] = true;
    }

    let d = skip.iter().filter(|&&s| !s).count();
    if d == 0 {
        return Err(Error::NoFeatures);
    }
    let n = rows.len();

    let mut points = Array2::<f64>::zeros((n, d));
    let mut labels = label_idx.map(|_| Vec::with_capacity(n));
    for (i, row) in rows.iter().enumerate() {
        let mut feature = 0;
        for (j, cell) in row.iter().enumerate() {
            if Some(j) == label_idx {
                let value: f64 = cell.parse().map_err(|_| Error::NonBinaryLabel {
                    row: i + 1,
                    column: j + 1,
                    value: cell.to_string(),
                })?;
                let outlier = if value == 1.0 {
                    true
                } else if value == 0.0 {
                    false
                } else {
                    return Err(Error::NonBinaryLabel {
                        row: i + 1,
                        column: j + 1,
                        value: cell.to_string(),
                    });
                };
                labels.as_mut().expect("label column present").push(outlier);
                continue;
            }
            if skip[j] {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::NonNumericCell {
                row: i + 1,
                column: j + 1,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteCell {
                    row: i + 1,
                    column: j + 1,
                });
            }
            points[[i, feature]] = value;
            feature += 1;
        }
    }

    let dataset = Dataset::new(points)?;
    Ok((dataset, labels.map(GroundTruth::new)))
}

fn map_csv_error(e: csv::Error, path: &str) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io {
                path: path.to_string(),
                source,
            },
            _ => unreachable!("is_io_error guarantees an io kind"),
        }
    } else {
        Error::Csv {
            path: path.to_string(),
            source: e,
        }
    }
}

/// Maps every feature affinely onto [0, 1]; constant features map to 0.
pub fn min_max_scale(data: &Dataset) -> Dataset {
    let mut points = data.points().clone();
    for mut column in points.columns_mut() {
        let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        if span > 0.0 {
            column.mapv_inplace(|v| (v - lo) / span);
        } else {
            column.fill(0.0);
        }
    }
    Dataset { points }
}
