//! Resolution of `--tensor`, `--graph` and `--net` arguments. A value is read
//! as a file when it exists; otherwise it is looked up among the built-in
//! names (with or without a `.json` suffix).

use std::fs;
use std::path::Path;

use grt_core::catalog::{
    ame_6_2, ghz, hexagonal_p2, hexagonal_type1, hexagonal_type3, pentagonal_ame, pentagonal_isolated, wheel_graph_state,
    P2Variant, SignBranch,
};
use grt_core::constraints::{Constraint, ConstraintGraph, ConstraintHypergraph};
use grt_core::holography::{TileNetwork, TilingSpec};
use grt_core::linalg::{identity, pauli_x, pauli_y, pauli_z};
use grt_core::{DenseTensor, C64};
use nalgebra::DMatrix;

use crate::CliError;

pub const TENSOR_BUILTINS: &[&str] = &[
    "penta_ame",
    "penta_isolated",
    "hex_type1",
    "hex_type3",
    "hex_p2a",
    "hex_p2b",
    "ame_6_2",
    "ghz3",
    "wheel6",
];

pub const GRAPH_BUILTINS: &[&str] = &["k5", "c5", "k6", "wheel6", "hex_triangles"];

pub const NET_BUILTINS: &[&str] = &["depth1-6-4", "depth2-6-4", "depth1-5-4", "depth2-5-4"];

fn builtin_key(arg: &str) -> &str {
    arg.strip_suffix(".json").unwrap_or(arg)
}

fn read_file(arg: &str) -> Result<Option<String>, CliError> {
    let p = Path::new(arg);
    if p.is_file() {
        return fs::read_to_string(p).map(Some).map_err(|e| CliError::Usage(format!("{arg}: {e}")));
    }
    Ok(None)
}

pub fn builtin_tensor(name: &str) -> Option<DenseTensor> {
    let t = match name {
        "penta_ame" => pentagonal_ame(0.3).tensor,
        "penta_isolated" => pentagonal_isolated().tensor,
        "hex_type1" => hexagonal_type1(0.05, 0, 0, SignBranch::Minus).ok()?.tensor,
        "hex_type3" => hexagonal_type3(0.0).ok()?.tensor,
        "hex_p2a" => hexagonal_p2(P2Variant::A).ok()?.tensor,
        "hex_p2b" => hexagonal_p2(P2Variant::B).ok()?.tensor,
        "ame_6_2" => ame_6_2(),
        "ghz3" => ghz(3, 2),
        "wheel6" => wheel_graph_state(6),
        _ => return None,
    };
    Some(t)
}

pub fn load_tensor(arg: &str) -> Result<DenseTensor, CliError> {
    if let Some(text) = read_file(arg)? {
        return Ok(DenseTensor::from_json(&text)?);
    }
    builtin_tensor(builtin_key(arg)).ok_or_else(|| {
        CliError::Usage(format!(
            "{arg}: no such file or built-in tensor (built-ins: {})",
            TENSOR_BUILTINS.join(", ")
        ))
    })
}

pub fn builtin_constraint(name: &str) -> Option<Constraint> {
    let c = match name {
        "k5" => Constraint::Graph(ConstraintGraph::complete(5)),
        "c5" => Constraint::Graph(ConstraintGraph::cycle(5)),
        "k6" => Constraint::Graph(ConstraintGraph::complete(6)),
        "wheel6" => Constraint::Graph(ConstraintGraph::wheel(6)),
        "hex_triangles" => {
            let edges: Vec<Vec<usize>> = (1..=6).map(|i| vec![0, i, i % 6 + 1]).collect();
            Constraint::Hypergraph(ConstraintHypergraph::new(7, &edges).ok()?)
        }
        _ => return None,
    };
    Some(c)
}

pub fn load_constraint(arg: &str) -> Result<Constraint, CliError> {
    if let Some(text) = read_file(arg)? {
        return Ok(Constraint::from_json(&text)?);
    }
    builtin_constraint(builtin_key(arg)).ok_or_else(|| {
        CliError::Usage(format!(
            "{arg}: no such file or built-in graph (built-ins: {})",
            GRAPH_BUILTINS.join(", ")
        ))
    })
}

/// `depth<k>-<p>-<q>`.
pub fn load_network(arg: &str) -> Result<TileNetwork, CliError> {
    let bad = || CliError::Usage(format!("{arg}: expected a network name ({})", NET_BUILTINS.join(", ")));
    let rest = arg.strip_prefix("depth").ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split('-').collect();
    let [depth, p, q] = parts.as_slice() else {
        return Err(bad());
    };
    let depth: usize = depth.parse().map_err(|_| bad())?;
    let spec = TilingSpec::parse(&format!("{p},{q}"))?;
    Ok(TileNetwork::vertex_inflation(spec, depth)?)
}

pub fn pauli(name: &str) -> Result<DMatrix<C64>, CliError> {
    match name {
        "X" | "x" => Ok(pauli_x()),
        "Y" | "y" => Ok(pauli_y()),
        "Z" | "z" => Ok(pauli_z()),
        "I" | "i" => Ok(identity(2)),
        _ => Err(CliError::Usage(format!("unknown operator {name:?}; use X, Y, Z or I"))),
    }
}

/// `OP@index`, e.g. `Z@3`.
pub fn parse_placement(text: &str) -> Result<(DMatrix<C64>, usize), CliError> {
    let (op, at) = text
        .split_once('@')
        .ok_or_else(|| CliError::Usage(format!("{text:?}: expected OP@index")))?;
    let index = at
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{text:?}: bad index")))?;
    Ok((pauli(op.trim())?, index))
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{s:?} is not a number")))
        })
        .collect()
}
