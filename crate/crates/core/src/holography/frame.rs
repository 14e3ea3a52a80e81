//! Isometry checks for frame tensors on `n` four-dimensional legs.

use serde::Serialize;

use crate::constraints::SubsetCheck;
use crate::error::{GrtError, Result};
use crate::tensor::{proportional_to_identity, reduce_to, DenseTensor};

#[derive(Clone, Debug, Serialize)]
pub struct FrameReport {
    pub n: usize,
    pub neighbor: Vec<SubsetCheck>,
    pub non_neighbor: Vec<SubsetCheck>,
    pub neighbors_pass: bool,
    pub non_neighbor_failures: usize,
}

fn check(t: &DenseTensor, pair: [usize; 2], tol: f64) -> Result<SubsetCheck> {
    let rho = reduce_to(t, &pair)?;
    let id = proportional_to_identity(&rho.entries, tol)?;
    Ok(SubsetCheck {
        subset: pair.to_vec(),
        proportional: id.proportional,
        constant: id.constant,
        deviation: id.deviation,
    })
}

/// Checks every neighbouring pair `(j, j+1 mod n)` and every other pair.
pub fn verify_frame(f: &DenseTensor, n: usize, tol: f64) -> Result<FrameReport> {
    if f.order() != n {
        return Err(GrtError::OrderMismatch {
            vertices: n,
            order: f.order(),
        });
    }
    if n < 4 {
        return Err(GrtError::ParameterOutOfRange {
            name: "n",
            value: n as f64,
            range: "n >= 4",
        });
    }
    let mut neighbor = Vec::new();
    let mut non_neighbor = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = check(f, [i, j], tol)?;
            if j == i + 1 || (i == 0 && j == n - 1) {
                neighbor.push(c);
            } else {
                non_neighbor.push(c);
            }
        }
    }
    Ok(FrameReport {
        n,
        neighbors_pass: neighbor.iter().all(|c| c.proportional),
        non_neighbor_failures: non_neighbor.iter().filter(|c| !c.proportional).count(),
        neighbor,
        non_neighbor,
    })
}
