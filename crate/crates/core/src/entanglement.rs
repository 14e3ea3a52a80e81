//! Rényi-2 purity deltas of three-site marginals of seven-qubit tensors.

use serde::Serialize;

use crate::error::{GrtError, Result};
use crate::tensor::{reduce_to, DenseTensor};

/// The five bipartitions that, up to rotation, cover all three-site
/// marginals containing the bulk index.
pub const PROFILE_SETS: [[usize; 3]; 5] = [[0, 1, 3], [0, 1, 4], [1, 2, 3], [1, 2, 4], [1, 3, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub s013: f64,
    pub s014: f64,
    pub s123: f64,
    pub s124: f64,
    pub s135: f64,
    /// Squared norm of the tensor the profile was computed from.
    pub norm_sqr: f64,
}

impl EntropyProfile {
    pub fn values(&self) -> [f64; 5] {
        [self.s013, self.s014, self.s123, self.s124, self.s135]
    }
}

fn check_shape(t: &DenseTensor) -> Result<()> {
    if t.order() != 7 {
        return Err(GrtError::OrderMismatch {
            vertices: 7,
            order: t.order(),
        });
    }
    if let Some(leg) = t.dims().iter().position(|&d| d != 2) {
        return Err(GrtError::NonQubitLeg(leg));
    }
    Ok(())
}

/// `Tr rho^2 - 1/8` for the trace-normalized marginal on three legs.
pub fn purity_delta(t: &DenseTensor, kept: [usize; 3]) -> Result<f64> {
    check_shape(t)?;
    let rho = reduce_to(t, &kept)?.trace_normalized()?;
    Ok(rho.purity() - 0.125)
}

/// All five deltas. A rotated copy of the first bipartition is evaluated
/// as well and must agree, since the profile presumes bond rotation symmetry.
pub fn entropy_profile(t: &DenseTensor) -> Result<EntropyProfile> {
    check_shape(t)?;
    let v: Vec<f64> = PROFILE_SETS
        .iter()
        .map(|&s| purity_delta(t, s))
        .collect::<Result<_>>()?;
    let rotated = purity_delta(t, [0, 2, 4])?;
    if (rotated - v[0]).abs() > 1e-12 {
        return Err(GrtError::Invalid(format!(
            "tensor is not rotation symmetric: delta_013 = {}, delta_024 = {rotated}",
            v[0]
        )));
    }
    Ok(EntropyProfile {
        s013: v[0],
        s014: v[1],
        s123: v[2],
        s124: v[3],
        s135: v[4],
        norm_sqr: t.norm_sqr(),
    })
}
