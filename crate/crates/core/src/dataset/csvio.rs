use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::Array2;

use super::Dataset;
use crate::{Error, Result};

/// Which column of a labelled CSV holds the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
    Last,
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// Digits select by 0-based index, `last` the final column, anything else a header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(if s == "last" {
            LabelColumn::Last
        } else if let Ok(i) = s.parse::<usize>() {
            LabelColumn::Index(i)
        } else {
            LabelColumn::Name(s.to_string())
        })
    }
}

/// Load a comma-separated table. A first row containing any non-numeric cell
/// is treated as a header.
pub fn load_dataset(path: impl AsRef<Path>, has_labels: bool, label_column: &LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(file);

    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        // skip blank lines
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        records.push((line, rec));
    }
    let Some((_, first)) = records.first() else {
        return Err(Error::Empty(format!("{} contains no rows", path.display())));
    };

    let header: Option<Vec<String>> = if first.iter().any(|c| c.parse::<f64>().is_err()) {
        Some(first.iter().map(str::to_string).collect())
    } else {
        None
    };
    let body = &records[usize::from(header.is_some())..];
    if body.is_empty() {
        return Err(Error::Empty(format!("{} contains a header but no data", path.display())));
    }
    let width = first.len();

    let label_idx = if has_labels {
        let idx = match label_column {
            LabelColumn::Index(i) => *i,
            LabelColumn::Last => width - 1,
            LabelColumn::Name(name) => header
                .as_ref()
                .and_then(|h| h.iter().position(|c| c == name))
                .ok_or_else(|| Error::InvalidArgument(format!("no label column named {name:?}")))?,
        };
        if idx >= width {
            return Err(Error::InvalidArgument(format!("label column {idx} out of range for {width} columns")));
        }
        if width < 2 {
            return Err(Error::Empty("no feature columns besides the label".into()));
        }
        Some(idx)
    } else {
        None
    };

    let d = width - usize::from(label_idx.is_some());
    let mut features = Vec::with_capacity(body.len() * d);
    let mut labels = Vec::with_capacity(body.len());
    for (line, rec) in body {
        if rec.len() != width {
            return Err(Error::Parse {
                row: *line,
                column: rec.len().min(width) + 1,
                message: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        for (j, cell) in rec.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                row: *line,
                column: j + 1,
                message: format!("not a number: {cell:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse { row: *line, column: j + 1, message: format!("non-finite value {cell:?}") });
            }
            if Some(j) == label_idx {
                labels.push(value);
            } else {
                features.push(value);
            }
        }
    }

    let n = body.len();
    let features = Array2::from_shape_vec((n, d), features).expect("row arity checked");
    let names = header
        .map(|h| h.into_iter().enumerate().filter(|(j, _)| Some(*j) != label_idx).map(|(_, name)| name).collect());
    Dataset::new(features, label_idx.map(|_| labels), names, path.display().to_string())
}

/// Write a dataset as CSV with a header row; the label, if any, is the last
/// column and named `y`. Values are written in shortest round-trip form.
pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_dataset(ds, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

fn write_dataset(ds: &Dataset, out: &mut impl Write) -> std::io::Result<()> {
    let names: Vec<String> = match ds.feature_names() {
        Some(names) => names.to_vec(),
        None => (0..ds.d()).map(|j| format!("x{j}")).collect(),
    };
    write!(out, "{}", names.join(","))?;
    if ds.labels().is_some() {
        write!(out, ",y")?;
    }
    writeln!(out)?;
    let features = ds.features();
    for (i, row) in features.rows().into_iter().enumerate() {
        let mut first = true;
        for v in row {
            if !first {
                write!(out, ",")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        if let Some(y) = ds.labels() {
            write!(out, ",{}", y[i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}
