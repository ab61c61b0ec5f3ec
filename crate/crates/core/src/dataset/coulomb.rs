//! Coulomb-matrix descriptors for molecules.
//!
//! Atoms are kept in input order; no sorted-row-norm canonicalization is
//! applied, so callers wanting permutation invariance must pre-sort.

use ndarray::Array2;

use super::Dataset;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    charges: Vec<u32>,
    positions: Vec<[f64; 3]>,
}

impl Molecule {
    pub fn new(charges: Vec<u32>, positions: Vec<[f64; 3]>) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::Empty("molecule has no atoms".into()));
        }
        if charges.len() != positions.len() {
            return Err(Error::DimensionMismatch { expected: charges.len(), actual: positions.len() });
        }
        if charges.contains(&0) {
            return Err(Error::InvalidArgument("nuclear charge must be positive".into()));
        }
        if positions.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite atom position".into()));
        }
        for i in 0..positions.len() {
            for j in 0..i {
                if distance(&positions[i], &positions[j]) == 0.0 {
                    return Err(Error::Degenerate(format!("atoms {j} and {i} coincide")));
                }
            }
        }
        Ok(Molecule { charges, positions })
    }

    pub fn atom_count(&self) -> usize {
        self.charges.len()
    }

    pub fn charges(&self) -> &[u32] {
        &self.charges
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    crate::distance::euclidean(a, b)
}

/// Nuclear charge for the element symbols found in small organic molecules.
pub fn nuclear_charge(symbol: &str) -> Option<u32> {
    Some(match symbol {
        "H" => 1,
        "C" => 6,
        "N" => 7,
        "O" => 8,
        "F" => 9,
        "S" => 16,
        _ => return None,
    })
}

/// Flattened (row-major) `max_atoms x max_atoms` Coulomb matrix, zero-padded.
pub fn coulomb_matrix(mol: &Molecule, max_atoms: usize) -> Result<Vec<f64>> {
    let m = mol.atom_count();
    if m > max_atoms {
        return Err(Error::InvalidArgument(format!("molecule has {m} atoms, more than max_atoms = {max_atoms}")));
    }
    let mut out = vec![0.0; max_atoms * max_atoms];
    for i in 0..m {
        let zi = mol.charges[i] as f64;
        out[i * max_atoms + i] = 0.5 * zi.powf(2.4);
        for j in 0..i {
            let zj = mol.charges[j] as f64;
            let r = distance(&mol.positions[i], &mol.positions[j]);
            if r == 0.0 {
                return Err(Error::Degenerate(format!("atoms {j} and {i} coincide")));
            }
            let v = zi * zj / r;
            out[i * max_atoms + j] = v;
            out[j * max_atoms + i] = v;
        }
    }
    Ok(out)
}

/// One molecule read from an XYZ block, with its comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct XyzRecord {
    pub molecule: Molecule,
    pub comment: String,
}

/// Parse concatenated XYZ blocks: an atom-count line, a comment line, then
/// `symbol x y z` rows.
pub fn parse_xyz(text: &str) -> Result<Vec<XyzRecord>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut records = Vec::new();
    let mut at = 0;
    let parse_err = |line: usize, column: usize, message: String| Error::Parse { row: line + 1, column, message };
    while at < lines.len() {
        if lines[at].trim().is_empty() {
            at += 1;
            continue;
        }
        let count: usize = lines[at]
            .trim()
            .parse()
            .map_err(|_| parse_err(at, 1, format!("expected atom count, found {:?}", lines[at])))?;
        if at + 2 + count > lines.len() {
            return Err(parse_err(at, 1, format!("truncated block: {count} atoms declared")));
        }
        let comment = lines[at + 1].trim().to_string();
        let mut charges = Vec::with_capacity(count);
        let mut positions = Vec::with_capacity(count);
        for k in 0..count {
            let ln = at + 2 + k;
            let mut fields = lines[ln].split_whitespace();
            let symbol = fields.next().unwrap_or("");
            let z = nuclear_charge(symbol).ok_or_else(|| parse_err(ln, 1, format!("unknown element {symbol:?}")))?;
            let mut xyz = [0.0; 3];
            for (c, slot) in xyz.iter_mut().enumerate() {
                let cell = fields.next().ok_or_else(|| parse_err(ln, c + 2, "missing coordinate".into()))?;
                *slot = cell.parse().map_err(|_| parse_err(ln, c + 2, format!("not a number: {cell:?}")))?;
            }
            charges.push(z);
            positions.push(xyz);
        }
        records.push(XyzRecord { molecule: Molecule::new(charges, positions)?, comment });
        at += 2 + count;
    }
    if records.is_empty() {
        return Err(Error::Empty("no molecules found".into()));
    }
    Ok(records)
}

/// Featurize molecules into a dataset of flattened Coulomb matrices.
pub fn coulomb_dataset(molecules: &[Molecule], max_atoms: usize, labels: Option<Vec<f64>>) -> Result<Dataset> {
    let mut data = Vec::with_capacity(molecules.len() * max_atoms * max_atoms);
    for mol in molecules {
        data.extend(coulomb_matrix(mol, max_atoms)?);
    }
    let features = Array2::from_shape_vec((molecules.len(), max_atoms * max_atoms), data)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let names = (0..max_atoms).flat_map(|i| (0..max_atoms).map(move |j| format!("cm_{i}_{j}"))).collect();
    Dataset::new(features, labels, Some(names), "coulomb")
}
