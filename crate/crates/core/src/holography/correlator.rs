//! Boundary correlators on tile networks: transfer products along paths,
//! and a brute-force contraction of the doubled network as an oracle.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::node::{doubled_reduction, raw_node};
use super::tiling::{PathSpec, Slot, TileNetwork};
use crate::error::{GrtError, Result};
use crate::linalg::identity;
use crate::network::{contract_network, LabelPool, LabeledTensor};
use crate::tensor::{contract, DenseTensor, C64};

/// Largest network the brute-force contraction accepts.
pub const BRUTE_FORCE_BUDGET: usize = 16;

/// Tensor placed on every tile. With `bulk`, leg 0 is the bulk leg and
/// edge `s` of the tile is leg `s + 1`; otherwise edge `s` is leg `s`.
#[derive(Clone, Debug)]
pub struct TileTensor {
    pub tensor: DenseTensor,
    pub bulk: bool,
}

impl TileTensor {
    pub fn new(tensor: DenseTensor, bulk: bool) -> Self {
        Self { tensor, bulk }
    }

    pub fn edges(&self) -> usize {
        self.tensor.order() - usize::from(self.bulk)
    }

    pub fn leg(&self, edge: usize) -> usize {
        edge + usize::from(self.bulk)
    }

    fn bond_dim(&self) -> usize {
        self.tensor.dims()[self.leg(0)]
    }

    fn op_leg<'a>(&self, op: Option<&'a BulkOperator>, tile: usize) -> Result<Option<(usize, &'a DMatrix<C64>)>> {
        match op {
            Some(o) if o.tile == tile => {
                if !self.bulk {
                    return Err(GrtError::Invalid("bulk operator on a tile without a bulk leg".into()));
                }
                Ok(Some((0, &o.matrix)))
            }
            _ => Ok(None),
        }
    }
}

/// Operator inserted on the bulk leg of one tile.
#[derive(Clone, Debug)]
pub struct BulkOperator {
    pub tile: usize,
    pub matrix: DMatrix<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Path,
    Brute,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelatorResult {
    #[serde(serialize_with = "ser_c64")]
    pub value: C64,
    pub method: Method,
    /// Tiles per path segment (empty for brute force).
    pub path_lengths: Vec<usize>,
}

fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    [z.re, z.im].serialize(s)
}

fn require_traceless(v: &DMatrix<C64>) -> Result<()> {
    let tr = v.trace().norm();
    if tr > 1e-12 * v.norm().max(1.0) {
        return Err(GrtError::ProbeNotTraceless(tr));
    }
    Ok(())
}

fn check_probe(v: &DMatrix<C64>, d: usize) -> Result<()> {
    if v.nrows() != d || v.ncols() != d {
        return Err(GrtError::DimensionMismatch {
            index: 0,
            expected: d,
            found: v.nrows(),
        });
    }
    Ok(())
}

/// `w[(e,e')] = v[e',e]`.
fn probe_vector(v: &DMatrix<C64>) -> DVector<C64> {
    let d = v.nrows();
    DVector::from_fn(d * d, |k, _| v[(k % d, k / d)])
}

fn close_with(w: &DVector<C64>, v: &DMatrix<C64>) -> C64 {
    let d = v.nrows();
    (0..d * d).map(|k| w[k] * v[(k % d, k / d)]).sum()
}

/// `Tr(O)/d` when the operator sits on a tile outside every path.
fn off_path_factor(tile: &TileTensor, op: Option<&BulkOperator>, on_path: &[usize]) -> C64 {
    match op {
        Some(o) if !on_path.contains(&o.tile) => o.matrix.trace() / C64::new(tile.tensor.dims()[0] as f64, 0.0),
        _ => C64::new(1.0, 0.0),
    }
}

fn propagate(tile: &TileTensor, path: &PathSpec, op: Option<&BulkOperator>, mut w: DVector<C64>) -> Result<DVector<C64>> {
    for s in &path.steps {
        let n = raw_node(&tile.tensor, tile.leg(s.entry), tile.leg(s.exit), tile.op_leg(op, s.tile)?)?;
        w = n * w;
    }
    Ok(w)
}

fn two_point_raw(
    tile: &TileTensor,
    path: &PathSpec,
    op: Option<&BulkOperator>,
    v1: &DMatrix<C64>,
    v2: &DMatrix<C64>,
) -> Result<C64> {
    let w = propagate(tile, path, op, probe_vector(v1))?;
    Ok(close_with(&w, v2) * off_path_factor(tile, op, &path.tiles()))
}

/// Two-point function from the transfer product along `path`, normalized
/// by the same product with identity probes and no operator.
pub fn two_point_path(
    tile: &TileTensor,
    path: &PathSpec,
    op: Option<&BulkOperator>,
    v1: &DMatrix<C64>,
    v2: &DMatrix<C64>,
) -> Result<CorrelatorResult> {
    path.validate(tile.edges())?;
    if path.is_empty() {
        return Err(GrtError::InvalidPath("empty path".into()));
    }
    let d = tile.bond_dim();
    check_probe(v1, d)?;
    check_probe(v2, d)?;
    require_traceless(v1)?;
    require_traceless(v2)?;
    let id = identity(d);
    let norm = two_point_raw(tile, path, None, &id, &id)?;
    let value = two_point_raw(tile, path, op, v1, v2)? / norm;
    Ok(CorrelatorResult {
        value,
        method: Method::Path,
        path_lengths: vec![path.len()],
    })
}

/// Where a branch meets the trunk: step index on the trunk and the edge of
/// that tile the branch enters through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub trunk_step: usize,
    pub edge: usize,
}

#[allow(clippy::too_many_arguments)]
fn three_point_raw(
    tile: &TileTensor,
    trunk: &PathSpec,
    branch: &PathSpec,
    at: Attachment,
    op: Option<&BulkOperator>,
    v1: &DMatrix<C64>,
    v2: &DMatrix<C64>,
    v3: &DMatrix<C64>,
) -> Result<C64> {
    let d = tile.bond_dim();
    let before = PathSpec::new(trunk.steps[..at.trunk_step].to_vec());
    let after = PathSpec::new(trunk.steps[at.trunk_step + 1..].to_vec());
    let w1 = propagate(tile, &before, op, probe_vector(v1))?;
    let w3 = propagate(tile, branch, op, probe_vector(v3))?;
    let j = trunk.steps[at.trunk_step];
    let legs = [tile.leg(j.entry), tile.leg(at.edge), tile.leg(j.exit)];
    let rho = doubled_reduction(&tile.tensor, &legs, tile.op_leg(op, j.tile)?)?;
    let mut w = DVector::<C64>::zeros(d * d);
    let dd = d * d * d;
    for r in 0..dd {
        let (e, b, x) = (r / (d * d), (r / d) % d, r % d);
        for c in 0..dd {
            let (ep, bp, xp) = (c / (d * d), (c / d) % d, c % d);
            w[x * d + xp] += rho[(r, c)] * w1[e * d + ep] * w3[b * d + bp];
        }
    }
    let w = propagate(tile, &after, op, w)?;
    let mut on_path = trunk.tiles();
    on_path.extend(branch.tiles());
    Ok(close_with(&w, v2) * off_path_factor(tile, op, &on_path))
}

/// Three-point function: `v1 -> trunk -> v2` with a branch from `v3`
/// joining the trunk tile at `at`. Normalized like [`two_point_path`].
#[allow(clippy::too_many_arguments)]
pub fn three_point_path(
    tile: &TileTensor,
    trunk: &PathSpec,
    branch: &PathSpec,
    at: Attachment,
    op: Option<&BulkOperator>,
    v1: &DMatrix<C64>,
    v2: &DMatrix<C64>,
    v3: &DMatrix<C64>,
) -> Result<CorrelatorResult> {
    let p = tile.edges();
    trunk.validate(p)?;
    branch.validate(p)?;
    let j = trunk
        .steps
        .get(at.trunk_step)
        .ok_or_else(|| GrtError::InvalidPath(format!("trunk has no step {}", at.trunk_step)))?;
    if at.edge >= p || at.edge == j.entry || at.edge == j.exit {
        return Err(GrtError::InvalidPath(format!(
            "branch edge {} collides with trunk edges {} -> {}",
            at.edge, j.entry, j.exit
        )));
    }
    let d = tile.bond_dim();
    for v in [v1, v2, v3] {
        check_probe(v, d)?;
    }
    require_traceless(v1)?;
    require_traceless(v2)?;
    let id = identity(d);
    let norm = three_point_raw(tile, trunk, branch, at, None, &id, &id, &id)?;
    let value = three_point_raw(tile, trunk, branch, at, op, v1, v2, v3)? / norm;
    Ok(CorrelatorResult {
        value,
        method: Method::Path,
        path_lengths: vec![at.trunk_step, trunk.len() - at.trunk_step - 1, branch.len()],
    })
}

/// Doubled tile with ket/bra of each edge fused (`k * d + b`) and its open
/// edges closed by probes.
fn closed_tile(
    net: &TileNetwork,
    tile: &TileTensor,
    t: usize,
    op: Option<&BulkOperator>,
    probes: &[(usize, DMatrix<C64>)],
) -> Result<(DenseTensor, Vec<usize>)> {
    let p = tile.edges();
    let d = tile.bond_dim();
    let legs: Vec<usize> = (0..p).map(|s| tile.leg(s)).collect();
    let rho = doubled_reduction(&tile.tensor, &legs, tile.op_leg(op, t)?)?;
    let rows = rho.nrows();
    let flat: Vec<C64> = (0..rows * rows).map(|k| rho[(k / rows, k % rows)]).collect();
    let dbl = DenseTensor::new(vec![d; 2 * p], flat)?;
    let mut perm = Vec::with_capacity(2 * p);
    for s in 0..p {
        perm.push(s);
        perm.push(p + s);
    }
    let mut cur = DenseTensor::new(vec![d * d; p], dbl.permute(&perm)?.into_coeffs())?;
    let mut remaining: Vec<usize> = (0..p).collect();
    let index = net.boundary_index();
    for s in (0..p).rev() {
        if net.tiles[t][s].is_some() {
            continue;
        }
        let leg = index[&(t, s)];
        let v = probes
            .iter()
            .find(|(l, _)| *l == leg)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| identity(d));
        let vec = DenseTensor::new(vec![d * d], probe_vector(&v).iter().copied().collect())?;
        cur = contract(&cur, &vec, &[(s, 0)])?;
        remaining.remove(s);
    }
    Ok((cur, remaining))
}

fn brute_raw(
    net: &TileNetwork,
    tile: &TileTensor,
    op: Option<&BulkOperator>,
    probes: &[(usize, DMatrix<C64>)],
) -> Result<C64> {
    let mut pool: LabelPool<(Slot, Slot)> = LabelPool::default();
    let mut items = Vec::with_capacity(net.n_tiles());
    for t in 0..net.n_tiles() {
        let (tensor, edges) = closed_tile(net, tile, t, op, probes)?;
        let labels = edges
            .iter()
            .map(|&s| {
                let other = net.tiles[t][s].expect("internal edge");
                let key = if (t, s) < other { ((t, s), other) } else { (other, (t, s)) };
                pool.get(key)
            })
            .collect();
        items.push(LabeledTensor::new(tensor, labels)?);
    }
    let scalar = contract_network(items, &[])?;
    Ok(scalar.coeffs()[0])
}

/// Contracts the full doubled network with the given boundary probes
/// (identity elsewhere), normalized by the all-identity network.
pub fn brute_force_correlator(
    net: &TileNetwork,
    tile: &TileTensor,
    op: Option<&BulkOperator>,
    probes: &[(usize, DMatrix<C64>)],
) -> Result<CorrelatorResult> {
    if net.n_tiles() > BRUTE_FORCE_BUDGET {
        return Err(GrtError::BudgetExceeded {
            tiles: net.n_tiles(),
            budget: BRUTE_FORCE_BUDGET,
        });
    }
    if tile.edges() != net.spec.p {
        return Err(GrtError::Wiring(format!(
            "tile tensor has {} edges, tiling needs {}",
            tile.edges(),
            net.spec.p
        )));
    }
    let d = tile.bond_dim();
    for (leg, v) in probes {
        if *leg >= net.boundary.len() {
            return Err(GrtError::IndexOutOfRange {
                index: *leg,
                order: net.boundary.len(),
            });
        }
        check_probe(v, d)?;
    }
    if let Some(o) = op {
        if o.tile >= net.n_tiles() {
            return Err(GrtError::IndexOutOfRange {
                index: o.tile,
                order: net.n_tiles(),
            });
        }
    }
    let norm = brute_raw(net, tile, None, &[])?;
    let value = brute_raw(net, tile, op, probes)? / norm;
    Ok(CorrelatorResult {
        value,
        method: Method::Brute,
        path_lengths: vec![],
    })
}

fn oriented_path(paths: &BTreeMap<(usize, usize), Vec<PathSpec>>, a: usize, b: usize) -> Option<PathSpec> {
    let key = (a.min(b), a.max(b));
    let p = paths.get(&key)?.first()?;
    Some(if a < b { p.clone() } else { p.reversed() })
}

fn zero_path_result() -> CorrelatorResult {
    CorrelatorResult {
        value: C64::new(0.0, 0.0),
        method: Method::Path,
        path_lengths: vec![],
    }
}

/// Finds a trunk between two probes and a disjoint branch from the third.
fn find_y(net: &TileNetwork, paths: &BTreeMap<(usize, usize), Vec<PathSpec>>, a: usize, b: usize, c: usize) -> Option<(PathSpec, PathSpec, Attachment)> {
    let trunk = oriented_path(paths, a, b)?;
    let p = net.spec.p;
    for (k, st) in trunk.steps.iter().enumerate() {
        for edge in (0..p).filter(|&e| e != st.entry && e != st.exit) {
            for (leg, branch) in net.branches_into((st.tile, edge)) {
                let overlaps = branch.tiles().iter().any(|t| trunk.tiles().contains(t));
                if leg == c && !overlaps {
                    return Some((trunk, branch, Attachment { trunk_step: k, edge }));
                }
            }
        }
    }
    None
}

/// Correlator of boundary probes on a whole network. The path method uses
/// the connecting path (two probes) or a Y configuration (three probes) and
/// returns zero when no such structure exists; one traceless probe gives zero.
pub fn network_correlator(
    net: &TileNetwork,
    tile: &TileTensor,
    op: Option<&BulkOperator>,
    probes: &[(usize, DMatrix<C64>)],
    method: Method,
) -> Result<CorrelatorResult> {
    if method == Method::Brute {
        return brute_force_correlator(net, tile, op, probes);
    }
    for (leg, v) in probes {
        if *leg >= net.boundary.len() {
            return Err(GrtError::IndexOutOfRange {
                index: *leg,
                order: net.boundary.len(),
            });
        }
        check_probe(v, tile.bond_dim())?;
        require_traceless(v)?;
    }
    let paths = net.enumerate_paths();
    match probes {
        [_] => Ok(zero_path_result()),
        [(a, v1), (b, v2)] => match oriented_path(&paths, *a, *b) {
            Some(path) => two_point_path(tile, &path, op, v1, v2),
            None => Ok(zero_path_result()),
        },
        [x, y, z] => {
            for (p1, p2, p3) in [(x, y, z), (x, z, y), (y, z, x)] {
                if let Some((trunk, branch, at)) = find_y(net, &paths, p1.0, p2.0, p3.0) {
                    return three_point_path(tile, &trunk, &branch, at, op, &p1.1, &p2.1, &p3.1);
                }
            }
            Ok(zero_path_result())
        }
        _ => Err(GrtError::Invalid(format!(
            "path method handles one to three probes, got {}",
            probes.len()
        ))),
    }
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(GrtError::Invalid("power-law fit needs two or more matched points".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Boundary separation assigned to a path of `tiles` tiles: `mu^(tiles/2)`.
pub fn boundary_length(tiles: usize, mu: f64) -> f64 {
    mu.powf(tiles as f64 / 2.0)
}
