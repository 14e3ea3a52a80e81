//! Finite patches of regular hyperbolic tilings grown by vertex inflation,
//! and the non-sharp-turn paths through them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{GrtError, Result};

/// Largest inflation depth supported.
pub const MAX_DEPTH: usize = 2;

/// `{p, q}` tiling: `p`-gons, `q` of them around each vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TilingSpec {
    pub p: usize,
    pub q: usize,
    /// Per-layer boundary growth factor.
    pub mu: f64,
}

impl TilingSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let mu = match (p, q) {
            (6, 4) => 3.0 + 2.0 * 2f64.sqrt(),
            (5, 4) => 2.0 + 3f64.sqrt(),
            _ => return Err(GrtError::UnsupportedTiling { p, q }),
        };
        Ok(Self { p, q, mu })
    }

    pub fn hexagonal() -> Self {
        Self::new(6, 4).expect("{6,4} is tabulated")
    }

    pub fn pentagonal() -> Self {
        Self::new(5, 4).expect("{5,4} is tabulated")
    }

    /// Parses `"6,4"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || GrtError::Invalid(format!("tiling must look like `6,4`, got `{text}`"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let p = parts[0].parse().map_err(|_| bad())?;
        let q = parts[1].parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

/// A slot of a tile: `(tile, edge)`, edges numbered counterclockwise.
pub type Slot = (usize, usize);

/// One tile visit of a path: entered through edge `entry`, left through `exit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PathStep {
    pub tile: usize,
    pub entry: usize,
    pub exit: usize,
}

/// Ordered tile visits from one boundary leg to another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PathSpec {
    pub steps: Vec<PathStep>,
}

/// `true` when leaving through `exit` after entering through `entry` is not
/// a sharp turn on a `p`-gon (the two edges are distinct and not adjacent).
pub fn allowed_turn(p: usize, entry: usize, exit: usize) -> bool {
    let d = (exit + p - entry) % p;
    d != 0 && d != 1 && d != p - 1
}

impl PathSpec {
    pub fn new(steps: Vec<PathStep>) -> Self {
        Self { steps }
    }

    /// `len` abstract tiles (ids `0..len`) all turning `entry -> exit`.
    pub fn chain(len: usize, entry: usize, exit: usize) -> Self {
        Self {
            steps: (0..len).map(|tile| PathStep { tile, entry, exit }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn tiles(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.tile).collect()
    }

    /// Same path walked backwards.
    pub fn reversed(&self) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| PathStep {
                    tile: s.tile,
                    entry: s.exit,
                    exit: s.entry,
                })
                .collect(),
        }
    }

    /// Slots in range and every turn non-sharp.
    pub fn validate(&self, p: usize) -> Result<()> {
        for (k, s) in self.steps.iter().enumerate() {
            if s.entry >= p || s.exit >= p {
                return Err(GrtError::InvalidPath(format!("step {k}: edge outside 0..{p}")));
            }
            if !allowed_turn(p, s.entry, s.exit) {
                return Err(GrtError::InvalidPath(format!(
                    "step {k}: turn {} -> {} uses adjacent or equal edges",
                    s.entry, s.exit
                )));
            }
        }
        Ok(())
    }
}

/// Tiles with their edge pairings and the ordered boundary.
#[derive(Clone, Debug, Serialize)]
pub struct TileNetwork {
    pub spec: TilingSpec,
    pub depth: usize,
    /// `tiles[t][s]` is the slot glued to edge `s` of tile `t`, if any.
    pub tiles: Vec<Vec<Option<Slot>>>,
    /// Open edges, counterclockwise.
    pub boundary: Vec<Slot>,
}

impl TileNetwork {
    /// One tile, all edges open.
    pub fn single(spec: TilingSpec) -> Self {
        Self {
            spec,
            depth: 0,
            tiles: vec![vec![None; spec.p]],
            boundary: (0..spec.p).map(|s| (0, s)).collect(),
        }
    }

    /// Grows `depth` layers around a central tile. Each layer puts one tile
    /// on every run of boundary edges ending at a vertex with room for at
    /// least two more tiles, and fills the remaining room at such vertices
    /// with vertex tiles; consecutive new tiles share an edge.
    pub fn vertex_inflation(spec: TilingSpec, depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(GrtError::ParameterOutOfRange {
                name: "depth",
                value: depth as f64,
                range: "0..=2",
            });
        }
        let (p, q) = (spec.p, spec.q);
        let mut tiles: Vec<Vec<Option<Slot>>> = vec![vec![None; p]];
        let mut bnd: Vec<Slot> = (0..p).map(|s| (0, s)).collect();
        // tiles already meeting at the vertex preceding boundary edge i
        let mut cnt = vec![1usize; p];
        for _ in 0..depth {
            let m = bnd.len();
            let room: Vec<usize> = cnt.iter().map(|c| q - c).collect();
            if room.iter().any(|&g| g < 1) {
                return Err(GrtError::Invalid("inflation reached a saturated vertex".into()));
            }
            let i0 = (0..m).find(|&i| room[i] >= 2).ok_or_else(|| GrtError::Invalid("no open vertex".into()))?;
            let mut runs: Vec<Vec<usize>> = Vec::new();
            let mut cur: Vec<usize> = Vec::new();
            for t in 0..m {
                let i = (i0 + t) % m;
                if room[i] >= 2 && !cur.is_empty() {
                    runs.push(std::mem::take(&mut cur));
                }
                cur.push(i);
            }
            runs.push(cur);
            // (edges glued to the previous layer) per new tile
            let mut seq: Vec<Vec<usize>> = Vec::new();
            for r in runs {
                for _ in 0..room[r[0]] - 2 {
                    seq.push(Vec::new());
                }
                seq.push(r);
            }
            let mut ids = Vec::with_capacity(seq.len());
            for r in &seq {
                let t = tiles.len();
                tiles.push(vec![None; p]);
                ids.push(t);
                for (slot, &ei) in r.iter().rev().enumerate() {
                    let (ot, os) = bnd[ei];
                    tiles[t][slot] = Some((ot, os));
                    tiles[ot][os] = Some((t, slot));
                }
            }
            let l = seq.len();
            for idx in 0..l {
                let a = ids[idx];
                let b = ids[(idx + 1) % l];
                let mb = seq[(idx + 1) % l].len();
                tiles[a][p - 1] = Some((b, mb));
                tiles[b][mb] = Some((a, p - 1));
            }
            let mut nb = Vec::new();
            let mut nc = Vec::new();
            for idx in 0..l {
                let a = ids[idx];
                for (k, s) in (seq[idx].len() + 1..p - 1).enumerate() {
                    nb.push((a, s));
                    nc.push(if k == 0 { 2 } else { 1 });
                }
            }
            bnd = nb;
            cnt = nc;
        }
        let net = Self {
            spec,
            depth,
            tiles,
            boundary: bnd,
        };
        net.check_consistency()?;
        Ok(net)
    }

    pub fn n_tiles(&self) -> usize {
        self.tiles.len()
    }

    /// Every gluing is symmetric and every open edge is listed once in the boundary.
    pub fn check_consistency(&self) -> Result<()> {
        let mut open = BTreeSet::new();
        for (t, slots) in self.tiles.iter().enumerate() {
            for (s, partner) in slots.iter().enumerate() {
                match partner {
                    Some((u, v)) => {
                        if self.tiles[*u][*v] != Some((t, s)) || *u == t {
                            return Err(GrtError::Wiring(format!("edge ({t},{s}) is glued inconsistently")));
                        }
                    }
                    None => {
                        open.insert((t, s));
                    }
                }
            }
        }
        let listed: BTreeSet<Slot> = self.boundary.iter().copied().collect();
        if listed != open || listed.len() != self.boundary.len() {
            return Err(GrtError::Wiring("boundary list does not match open edges".into()));
        }
        Ok(())
    }

    /// Number of tiles around every vertex whose tiles close up into a
    /// full cycle. Vertex `s` of a tile lies between its edges `s` and `s+1`.
    pub fn closed_vertex_degrees(&self) -> Vec<usize> {
        let p = self.spec.p;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in 0..self.tiles.len() {
            for s in 0..p {
                if seen.contains(&(t, s)) {
                    continue;
                }
                let mut cycle = vec![(t, s)];
                let (mut ct, mut cs) = (t, s);
                let closed = loop {
                    match self.tiles[ct][(cs + 1) % p] {
                        None => break false,
                        Some((u, r)) => {
                            if (u, r) == (t, s) {
                                break true;
                            }
                            cycle.push((u, r));
                            (ct, cs) = (u, r);
                        }
                    }
                };
                if closed {
                    out.push(cycle.len());
                    seen.extend(cycle);
                }
            }
        }
        out
    }

    pub fn boundary_index(&self) -> HashMap<Slot, usize> {
        self.boundary.iter().enumerate().map(|(i, &s)| (s, i)).collect()
    }

    /// Non-sharp, non-revisiting paths from boundary leg `from` to any
    /// other boundary leg, keyed by the target's boundary index.
    pub fn paths_from(&self, from: usize) -> Vec<(usize, PathSpec)> {
        let index = self.boundary_index();
        let start = self.boundary[from];
        let mut out = Vec::new();
        let mut visited = vec![false; self.tiles.len()];
        visited[start.0] = true;
        let mut trail = Vec::new();
        self.dfs(start.0, start.1, start, &index, &mut visited, &mut trail, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        tile: usize,
        entry: usize,
        start: Slot,
        index: &HashMap<Slot, usize>,
        visited: &mut [bool],
        trail: &mut Vec<PathStep>,
        out: &mut Vec<(usize, PathSpec)>,
    ) {
        let p = self.spec.p;
        for exit in 0..p {
            if !allowed_turn(p, entry, exit) {
                continue;
            }
            trail.push(PathStep { tile, entry, exit });
            match self.tiles[tile][exit] {
                None => {
                    if (tile, exit) != start {
                        out.push((index[&(tile, exit)], PathSpec::new(trail.clone())));
                    }
                }
                Some((nt, ns)) => {
                    if !visited[nt] {
                        visited[nt] = true;
                        self.dfs(nt, ns, start, index, visited, trail, out);
                        visited[nt] = false;
                    }
                }
            }
            trail.pop();
        }
    }

    /// All paths between boundary pairs `a < b`, oriented from `a` to `b`.
    pub fn enumerate_paths(&self) -> BTreeMap<(usize, usize), Vec<PathSpec>> {
        let mut map: BTreeMap<(usize, usize), Vec<PathSpec>> = BTreeMap::new();
        for a in 0..self.boundary.len() {
            for (b, path) in self.paths_from(a) {
                if a < b {
                    map.entry((a, b)).or_default().push(path);
                }
            }
        }
        map
    }

    /// Paths from a boundary leg into `slot` of a tile, ending with the
    /// step that exits through the edge glued to that slot. An open `slot`
    /// yields one empty path.
    pub fn branches_into(&self, slot: Slot) -> Vec<(usize, PathSpec)> {
        let index = self.boundary_index();
        match self.tiles[slot.0][slot.1] {
            None => vec![(index[&slot], PathSpec::new(vec![]))],
            Some((nt, ns)) => {
                let mut out = Vec::new();
                let mut visited = vec![false; self.tiles.len()];
                visited[slot.0] = true;
                visited[nt] = true;
                let mut trail = Vec::new();
                self.dfs(nt, ns, (nt, ns), &index, &mut visited, &mut trail, &mut out);
                out.into_iter().map(|(leg, p)| (leg, p.reversed())).collect()
            }
        }
    }
}

/// Summary of path multiplicities on a network.
#[derive(Clone, Debug, Serialize)]
pub struct PathCensus {
    pub boundary_legs: usize,
    pub connected_pairs: usize,
    pub max_paths_per_pair: usize,
    pub connected_triples: usize,
}

/// Counts connected boundary pairs, the largest number of distinct paths
/// joining one pair, and triples whose three pairs are all connected.
pub fn path_census(net: &TileNetwork) -> PathCensus {
    let paths = net.enumerate_paths();
    let n = net.boundary.len();
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in paths.keys() {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut triples = 0;
    for &(a, b) in paths.keys() {
        triples += adj[a].range(b + 1..).filter(|c| adj[b].contains(c)).count();
    }
    PathCensus {
        boundary_legs: n,
        connected_pairs: paths.len(),
        max_paths_per_pair: paths.values().map(Vec::len).max().unwrap_or(0),
        connected_triples: triples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagonal_sizes() {
        let d1 = TileNetwork::vertex_inflation(TilingSpec::hexagonal(), 1).unwrap();
        assert_eq!((d1.n_tiles(), d1.boundary.len()), (13, 42));
        let d2 = TileNetwork::vertex_inflation(TilingSpec::hexagonal(), 2).unwrap();
        assert_eq!((d2.n_tiles(), d2.boundary.len()), (85, 246));
    }

    #[test]
    fn closed_vertices_have_q_tiles() {
        for spec in [TilingSpec::hexagonal(), TilingSpec::pentagonal()] {
            let net = TileNetwork::vertex_inflation(spec, 2).unwrap();
            let degrees = net.closed_vertex_degrees();
            assert!(!degrees.is_empty());
            assert!(degrees.iter().all(|&d| d == spec.q), "{degrees:?}");
        }
        // central tile vertices are closed after one layer
        let d1 = TileNetwork::vertex_inflation(TilingSpec::hexagonal(), 1).unwrap();
        assert_eq!(d1.closed_vertex_degrees().len(), 6);
    }

    #[test]
    fn pentagonal_depth_one() {
        let d1 = TileNetwork::vertex_inflation(TilingSpec::pentagonal(), 1).unwrap();
        assert_eq!(d1.n_tiles(), 11);
        d1.check_consistency().unwrap();
    }

    #[test]
    fn depth_guard_and_unknown_tiling() {
        assert!(TileNetwork::vertex_inflation(TilingSpec::hexagonal(), 3).is_err());
        assert!(matches!(TilingSpec::new(7, 3), Err(GrtError::UnsupportedTiling { .. })));
        assert_eq!(TilingSpec::parse("6,4").unwrap().p, 6);
        assert!(TilingSpec::parse("6;4").is_err());
    }

    #[test]
    fn turns() {
        assert!(allowed_turn(6, 0, 2) && allowed_turn(6, 0, 3) && allowed_turn(6, 0, 4));
        assert!(!allowed_turn(6, 0, 1) && !allowed_turn(6, 0, 5) && !allowed_turn(6, 2, 2));
        assert!(PathSpec::chain(3, 0, 1).validate(6).is_err());
    }

    #[test]
    fn single_tile_paths() {
        let net = TileNetwork::single(TilingSpec::hexagonal());
        // leg 0 reaches legs 2, 3, 4
        let targets: Vec<usize> = net.paths_from(0).into_iter().map(|(b, _)| b).collect();
        assert_eq!(targets, vec![2, 3, 4]);
    }
}
