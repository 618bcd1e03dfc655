//! Thin wrappers around dense complex linear algebra: SVD-based rank, null
//! spaces, least squares, and LU solves. Everything here is desk-scale.

use crate::error::{Error, Result};
use crate::poly::C64;
use nalgebra::{DMatrix, DVector};

pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Right-singular vectors spanning the numerical null space: the `dim`
/// smallest singular directions. Wide matrices are padded with zero rows so
/// the thin SVD still exposes the full kernel.
pub fn null_space(m: &DMatrix<C64>, dim: usize) -> Result<Vec<DVector<C64>>> {
    let work = if m.nrows() < m.ncols() {
        let mut padded = DMatrix::from_element(m.ncols(), m.ncols(), C64::new(0.0, 0.0));
        padded.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not produce V^T".into()))?;
    let mut pairs: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if pairs.len() < dim {
        return Err(Error::Numerical("requested null space too large".into()));
    }
    let mut out = Vec::with_capacity(dim);
    for &(_, i) in pairs.iter().take(dim) {
        out.push(vt.row(i).transpose().map(|z| z.conj()));
    }
    Ok(out)
}

/// Minimum-norm least squares via SVD.
pub fn lstsq(a: &DMatrix<C64>, b: &DVector<C64>) -> Result<DVector<C64>> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-13)
        .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))
}

/// LU solve with an explicit singularity report based on singular values.
pub fn solve(a: &DMatrix<C64>, b: &DVector<C64>, cond_tol: f64) -> Result<DVector<C64>> {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin < cond_tol * smax {
        return Err(Error::CollisionSingular { sigma_min: smin });
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or(Error::CollisionSingular { sigma_min: smin })
}

pub fn determinant(a: &DMatrix<C64>) -> C64 {
    a.clone().lu().determinant()
}
