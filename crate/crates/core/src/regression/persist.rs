//! Model file format: one line of JSON `{"gamma", "lambda", "b", "d"}`
//! terminated by `\n`, followed by `b * d + b` little-endian f64 values: the
//! training features row-major, then the weights.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::KernelModel;
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    gamma: f64,
    lambda: f64,
    b: usize,
    d: usize,
}

pub fn write_model(model: &KernelModel, out: &mut impl Write) -> std::io::Result<()> {
    let header = Header { gamma: model.gamma(), lambda: model.lambda(), b: model.b(), d: model.d() };
    serde_json::to_writer(&mut *out, &header)?;
    out.write_all(b"\n")?;
    for v in model.train_features().iter().chain(model.weights()) {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_model(input: &mut impl BufRead) -> Result<KernelModel> {
    let mut line = String::new();
    input.read_line(&mut line).map_err(|e| Error::InvalidArgument(format!("model header: {e}")))?;
    let header: Header = serde_json::from_str(line.trim_end())?;
    let count = header
        .b
        .checked_mul(header.d)
        .and_then(|n| n.checked_add(header.b))
        .ok_or_else(|| Error::InvalidArgument("model header sizes overflow".into()))?;
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|e| Error::InvalidArgument(format!("model payload: {e}")))?;
    if bytes.len() != count * 8 {
        return Err(Error::InvalidArgument(format!("model payload has {} bytes, expected {}", bytes.len(), count * 8)));
    }
    let values: Vec<f64> =
        bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    let (features, weights) = values.split_at(header.b * header.d);
    let features = Array2::from_shape_vec((header.b, header.d), features.to_vec())
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    KernelModel::new(features, weights.to_vec(), header.gamma, header.lambda)
}

pub fn save_model(model: &KernelModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_model(model, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<KernelModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(&mut BufReader::new(file))
}
