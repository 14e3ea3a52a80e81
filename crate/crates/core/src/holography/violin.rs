//! Haar sampling of the pentagon tensor glued to a perfect tensor.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::node::{node_matrix, scaling_dimension};
use super::tiling::TilingSpec;
use crate::catalog::{ame_6_2, combined_pentagon_perfect, pentagonal_isolated, LegUnitaries};
use crate::error::Result;
use crate::format::num;
use crate::linalg::haar_unitary;
use crate::tensor::DenseTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnitaryMode {
    /// An independent Haar unitary on each of the five legs.
    PerLeg,
    /// One Haar unitary shared by all legs.
    Shared,
}

impl UnitaryMode {
    pub fn label(self) -> &'static str {
        match self {
            UnitaryMode::PerLeg => "per-leg",
            UnitaryMode::Shared => "shared",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ViolinRow {
    pub sample: usize,
    pub lambda2: f64,
    pub lambda3: f64,
    pub delta2: f64,
    pub delta3: f64,
}

pub const VIOLIN_HEADER: &str = "sample,lambda2,lambda3,delta2,delta3";

/// Largest sample count accepted.
pub const MAX_SAMPLES: usize = 100_000;

/// Leg unitaries of one sample, drawn from ChaCha8 stream `sample` of `seed`.
pub fn sample_unitaries(seed: u64, sample: usize, mode: UnitaryMode) -> LegUnitaries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample as u64);
    match mode {
        UnitaryMode::PerLeg => LegUnitaries::PerLeg((0..5).map(|_| haar_unitary(4, &mut rng)).collect()),
        UnitaryMode::Shared => LegUnitaries::Shared(haar_unitary(4, &mut rng)),
    }
}

/// Node (1,3) of the combined tensor and its two subleading dimensions.
pub fn combined_row(pentagon: &DenseTensor, perfect: &DenseTensor, legs: &LegUnitaries, sample: usize) -> Result<ViolinRow> {
    let tiling = TilingSpec::pentagonal();
    let t = combined_pentagon_perfect(pentagon, perfect, legs)?;
    let n = node_matrix(&t, 1, 3)?;
    let (l2, l3) = (n.moduli[1], n.moduli[2]);
    Ok(ViolinRow {
        sample,
        lambda2: l2,
        lambda3: l3,
        delta2: scaling_dimension(l2, &tiling)?,
        delta3: scaling_dimension(l3, &tiling)?,
    })
}

pub fn violin_sample(count: usize, seed: u64, mode: UnitaryMode) -> Result<Vec<ViolinRow>> {
    if count > MAX_SAMPLES {
        return Err(crate::error::GrtError::ParameterOutOfRange {
            name: "count",
            value: count as f64,
            range: "0..=100000",
        });
    }
    let pentagon = pentagonal_isolated().tensor;
    let perfect = ame_6_2();
    (0..count)
        .into_par_iter()
        .map(|s| combined_row(&pentagon, &perfect, &sample_unitaries(seed, s, mode), s))
        .collect()
}

pub fn violin_csv(rows: &[ViolinRow]) -> String {
    let mut out = format!("{VIOLIN_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.sample,
            num(r.lambda2),
            num(r.lambda3),
            num(r.delta2),
            num(r.delta3)
        ));
    }
    out
}
