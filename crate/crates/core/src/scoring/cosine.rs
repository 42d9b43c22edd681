//! Cosine similarity for dense and sparse vectors.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// `u·v / (‖u‖‖v‖)`; 0 when either vector is zero.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, DimensionMismatch> {
    if u.len() != v.len() {
        return Err(DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok(ratio(dot, norm(u.iter().copied()), norm(v.iter().copied())))
}

/// Cosine over sparse vectors sorted by index.
pub fn sparse_cosine(u: &[(usize, f64)], v: &[(usize, f64)]) -> f64 {
    let (mut i, mut j, mut dot) = (0, 0, 0.0);
    while i < u.len() && j < v.len() {
        match u[i].0.cmp(&v[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += u[i].1 * v[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    ratio(dot, norm(u.iter().map(|e| e.1)), norm(v.iter().map(|e| e.1)))
}

fn norm(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|x| x * x).sum::<f64>().sqrt()
}

fn ratio(dot: f64, nu: f64, nv: f64) -> f64 {
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (dot / (nu * nv)).clamp(-1.0, 1.0)
}
