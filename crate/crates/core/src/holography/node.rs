//! Transfer nodes: a tile contracted with its conjugate on every leg but two.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::tiling::TilingSpec;
use crate::error::{GrtError, Result};
use crate::linalg::{eigenvector_for, overlap, sorted_eigenvalues};
use crate::symmetry::apply_local_rotation;
use crate::tensor::{DenseTensor, C64};

/// `rho[(k), (k')] = sum T[k, r] O[b', b] conj(T[k', r'])` with rows and
/// columns indexed by `legs` in the given order (first slowest) and every
/// other leg traced. An operator, when given, sits on one traced leg with
/// its first index on the conjugate side.
pub fn doubled_reduction(t: &DenseTensor, legs: &[usize], op: Option<(usize, &DMatrix<C64>)>) -> Result<DMatrix<C64>> {
    let n = t.order();
    let mut seen = vec![false; n];
    for &l in legs {
        if l >= n {
            return Err(GrtError::IndexOutOfRange { index: l, order: n });
        }
        if seen[l] {
            return Err(GrtError::DuplicateIndex(l));
        }
        seen[l] = true;
    }
    let mut perm: Vec<usize> = legs.to_vec();
    perm.extend((0..n).filter(|l| !seen[*l]));
    let rows: usize = legs.iter().map(|&l| t.dims()[l]).product();
    let cols = t.len() / rows;
    let base = t.permute(&perm)?;
    let v = DMatrix::from_row_slice(rows, cols, base.coeffs());
    let ket = match op {
        None => v.clone(),
        Some((leg, o)) => {
            if seen[leg] {
                return Err(GrtError::Invalid(format!("operator leg {leg} is not traced")));
            }
            let pos = perm.iter().position(|&p| p == leg).expect("leg present");
            let shifted = base.apply_on_leg(pos, o)?;
            DMatrix::from_row_slice(rows, cols, shifted.coeffs())
        }
    };
    Ok(&ket * v.adjoint())
}

/// `N[(x,x'),(e,e')]` for entry leg `e` and exit leg `x`, unnormalized.
pub fn raw_node(t: &DenseTensor, entry: usize, exit: usize, op: Option<(usize, &DMatrix<C64>)>) -> Result<DMatrix<C64>> {
    if entry == exit {
        return Err(GrtError::DuplicateIndex(entry));
    }
    let rho = doubled_reduction(t, &[entry, exit], op)?;
    let d = t.dims()[entry];
    if t.dims()[exit] != d {
        return Err(GrtError::DimensionMismatch {
            index: exit,
            expected: d,
            found: t.dims()[exit],
        });
    }
    Ok(DMatrix::from_fn(d * d, d * d, |r, c| {
        let (x, xp) = (r / d, r % d);
        let (e, ep) = (c / d, c % d);
        rho[(e * d + x, ep * d + xp)]
    }))
}

/// Node matrix normalized to unit leading eigenvalue, with its spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct TransferNode {
    pub legs: (usize, usize),
    #[serde(skip)]
    pub matrix: DMatrix<C64>,
    /// Leading eigenvalue of the unnormalized node.
    #[serde(skip)]
    pub scale: C64,
    /// Eigenvalues of the normalized node, by descending modulus.
    #[serde(skip)]
    pub spectrum: Vec<C64>,
    #[serde(skip)]
    pub leading_vector: DVector<C64>,
    /// `|<v, sum_i |ii>>|` for the normalized leading eigenvector.
    pub identity_overlap: f64,
    pub moduli: Vec<f64>,
}

impl TransferNode {
    pub fn lambda(&self, k: usize) -> C64 {
        self.spectrum.get(k).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// `|lambda_2|` of the normalized node.
    pub fn lambda2(&self) -> f64 {
        self.lambda(1).norm()
    }
}

pub fn node_matrix(t: &DenseTensor, i: usize, j: usize) -> Result<TransferNode> {
    let raw = raw_node(t, i, j, None)?;
    let eig = sorted_eigenvalues(&raw)?;
    let scale = eig[0];
    if scale.norm() == 0.0 {
        return Err(GrtError::DegenerateTensor);
    }
    let matrix = raw.map(|z| z / scale);
    let spectrum: Vec<C64> = eig.iter().map(|z| z / scale).collect();
    let leading_vector = eigenvector_for(&matrix, C64::new(1.0, 0.0))?;
    let d = t.dims()[i];
    let id = DVector::from_fn(d * d, |k, _| if k / d == k % d { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    let identity_overlap = overlap(&leading_vector, &id);
    Ok(TransferNode {
        legs: (i, j),
        moduli: spectrum.iter().map(|z| z.norm()).collect(),
        matrix,
        scale,
        spectrum,
        leading_vector,
        identity_overlap,
    })
}

/// `-ln|lambda_2| / ln mu`; infinite for a vanishing `lambda_2`.
pub fn scaling_dimension(lambda2: f64, tiling: &TilingSpec) -> Result<f64> {
    let l = lambda2.abs();
    if l.is_nan() || l > 1.0 + 1e-12 {
        return Err(GrtError::ParameterOutOfRange {
            name: "lambda2",
            value: lambda2,
            range: "|lambda2| <= 1",
        });
    }
    if l == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-l.ln() / tiling.mu.ln())
}

/// Moduli of the three leading eigenvalues of nodes (1,3) and (1,4) at one angle.
#[derive(Clone, Debug, Serialize)]
pub struct RotationRow {
    pub phi: f64,
    pub node13: [f64; 3],
    pub node14: [f64; 3],
}

pub const ROTATION_HEADER: &str = "phi,l1_13,l2_13,l3_13,l1_14,l2_14,l3_14";

/// Applies the real local rotation at each angle and records node spectra
/// on legs (1,3) and (1,4).
pub fn rotation_spectrum_scan(t: &DenseTensor, grid: &[f64]) -> Result<Vec<RotationRow>> {
    grid.par_iter()
        .map(|&phi| {
            let r = apply_local_rotation(t, phi)?;
            let m = |i, j| -> Result<[f64; 3]> {
                let n = node_matrix(&r, i, j)?;
                Ok([n.moduli[0], n.moduli[1], n.moduli[2]])
            };
            Ok(RotationRow {
                phi,
                node13: m(1, 3)?,
                node14: m(1, 4)?,
            })
        })
        .collect()
}

pub fn rotation_csv(rows: &[RotationRow]) -> String {
    use crate::format::num;
    let mut out = format!("{ROTATION_HEADER}\n");
    for r in rows {
        let cells: Vec<String> = std::iter::once(r.phi)
            .chain(r.node13)
            .chain(r.node14)
            .map(num)
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ghz, pentagonal_isolated};
    use crate::linalg::pauli_z;

    #[test]
    fn ghz_node_is_classical_copy() {
        let n = node_matrix(&ghz(4, 2), 0, 1).unwrap();
        // only |00> and |11> doubled states survive
        assert!((n.moduli[0] - 1.0).abs() < 1e-12);
        assert!((n.moduli[1] - 1.0).abs() < 1e-12);
        assert!(n.moduli[2] < 1e-12);
    }

    #[test]
    fn pentagon_lambda2() {
        let t = pentagonal_isolated().tensor;
        let n = node_matrix(&t, 0, 2).unwrap();
        assert!((n.lambda2() - (5f64.sqrt() - 1.0) / 4.0).abs() < 1e-12);
        assert!((n.identity_overlap - 1.0).abs() < 1e-10);
    }

    #[test]
    fn operator_on_kept_leg_rejected() {
        let t = ghz(3, 2);
        assert!(raw_node(&t, 0, 1, Some((1, &pauli_z()))).is_err());
        assert!(raw_node(&t, 0, 0, None).is_err());
    }

    #[test]
    fn dimensions() {
        let hex = TilingSpec::hexagonal();
        assert!((scaling_dimension(0.25, &hex).unwrap() - 4f64.ln() / hex.mu.ln()).abs() < 1e-15);
        assert_eq!(scaling_dimension(0.0, &hex).unwrap(), f64::INFINITY);
        assert!(scaling_dimension(1.5, &hex).is_err());
    }
}
