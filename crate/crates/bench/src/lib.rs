//! Fixtures shared by the criterion benchmarks in `benches/`.

use grt_core::catalog::{ame_6_2, hexagonal_p2, hexagonal_type1, pentagonal_isolated, P2Variant, SignBranch};
use grt_core::holography::{TileNetwork, TileTensor, TilingSpec};
use grt_core::linalg::{pauli_x, pauli_z};
use grt_core::{DenseTensor, C64};
use nalgebra::DMatrix;

pub fn type1() -> DenseTensor {
    hexagonal_type1(0.05, 0, 0, SignBranch::Minus)
        .expect("a = 0.05 is in range")
        .tensor
}

pub fn pentagon() -> DenseTensor {
    pentagonal_isolated().tensor
}

pub fn perfect() -> DenseTensor {
    ame_6_2()
}

/// Depth-1 `{6,4}` patch with P2B tiles.
pub fn hex_network() -> (TileNetwork, TileTensor) {
    let net = TileNetwork::vertex_inflation(TilingSpec::hexagonal(), 1).expect("depth 1 is supported");
    let tile = TileTensor::new(hexagonal_p2(P2Variant::B).expect("catalog point").tensor, true);
    (net, tile)
}

pub fn hex_network_depth2() -> TileNetwork {
    TileNetwork::vertex_inflation(TilingSpec::hexagonal(), 2).expect("depth 2 is supported")
}

/// Two traceless probes on boundary legs `a` and `b`.
pub fn probes(a: usize, b: usize) -> Vec<(usize, DMatrix<C64>)> {
    vec![(a, pauli_z()), (b, pauli_x())]
}
