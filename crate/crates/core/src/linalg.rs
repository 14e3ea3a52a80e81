//! Small dense linear-algebra helpers shared by the catalog and holography code.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, Schur};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GrtError, Result};
use crate::tensor::C64;

pub fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c64(0.0), c64(1.0), c64(1.0), c64(0.0)])
}

pub fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[c64(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c64(0.0)],
    )
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c64(1.0), c64(0.0), c64(0.0), c64(-1.0)])
}

pub fn identity(d: usize) -> DMatrix<C64> {
    DMatrix::identity(d, d)
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `max |U^dagger U - I|`.
pub fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn ensure_unitary(u: &DMatrix<C64>, tol: f64) -> Result<()> {
    let dev = unitarity_deviation(u);
    if dev > tol {
        return Err(GrtError::NotUnitary(dev));
    }
    Ok(())
}

/// Haar-distributed unitary: complex Ginibre matrix, QR, then the phases of
/// `diag(R)` are moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c64(1.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Orders by descending modulus, then descending real part, then descending
/// imaginary part.
pub fn spectrum_order(a: &C64, b: &C64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

/// Eigenvalues of a general complex matrix, sorted by `spectrum_order`.
pub fn sorted_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000).ok_or(GrtError::Eigen)?;
    let ev = schur.eigenvalues().ok_or(GrtError::Eigen)?;
    let mut v: Vec<C64> = ev.iter().copied().collect();
    v.sort_by(spectrum_order);
    Ok(v)
}

/// Unit vector spanning (approximately) the kernel of `m - lambda I`.
pub fn eigenvector_for(m: &DMatrix<C64>, lambda: C64) -> Result<DVector<C64>> {
    let d = m.nrows();
    let shifted = m - identity(d) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.ok_or(GrtError::Eigen)?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(GrtError::Eigen)?;
    Ok(v_t.row(imin).adjoint())
}

/// `|<a, b>| / (|a| |b|)`.
pub fn overlap(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.dotc(b).norm() / (a.norm() * b.norm())
}
