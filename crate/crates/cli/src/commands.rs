use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use grt_core::catalog::{
    ame_6_2, dual_unitary, frame_gate_count, frame_tensor, ghz, hexagonal_p2, hexagonal_type1, hexagonal_type3,
    is_two_unitary, pentagonal_ame, pentagonal_isolated, swap_gate, wheel_graph_state, Family, P2Variant, SignBranch,
    TYPE1_A_MAX, TYPE3_A_MAX, TYPE3_A_MIN,
};
use grt_core::constraints::{faithful_hypergraph, is_faithful, Constraint, ConstraintHypergraph};
use grt_core::holography::{
    network_correlator, node_matrix, scaling_dimension, verify_frame, violin_csv, violin_sample, BulkOperator, Method,
    TileTensor, TilingSpec, UnitaryMode,
};
use grt_core::linalg::haar_unitary;
use grt_core::solver::{fig3_csv, solve_hexagonal, CostKind, SolveOptions};
use grt_core::symmetry::{orbits, SymmetrySpec};
use grt_core::{check_graph_constrained, check_hypergraph_constrained, entropy_profile, DenseTensor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::inputs::{load_constraint, load_network, load_tensor, parse_list, parse_placement, TENSOR_BUILTINS};
use crate::manifest::{sha256_hex, write_csv_with_manifest};
use crate::{
    BranchArg, CatalogArgs, CliError, CorrelateArgs, CostArg, DimensionArgs, ExpandArgs, FrameArgs, MethodArg, NodeArgs,
    SolveArgs, Status, TensorArg, VerifyArgs, ViolinArgs,
};

/// Writes to stdout; a closed pipe ends output silently.
fn emit(text: &str) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Usage(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(grt_core::GrtError::from)?;
    emit(&(text + "\n"))
}

fn emit_tensor(t: &DenseTensor, out: Option<&Path>) -> Result<(), CliError> {
    let text = t.to_json()?;
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => emit(&(text + "\n")),
    }
}

fn require<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("family {family} needs --{flag}")))
}

const FAMILIES: &[(&str, &str)] = &[
    ("penta-ame", "--theta in radians, any real"),
    ("penta-isolated", "no parameters"),
    ("hex-type1", "--a in (0, sqrt(2)/16], --j 0|1, --k 0|1, --branch minus|plus"),
    ("hex-type3", "--a in [-3 sqrt(2)/16, sqrt(2)/16]"),
    ("hex-p2", "--variant A|B"),
    ("ghz", "--n legs >= 2, --d local dimension >= 2"),
    ("wheel", "--n rim vertices >= 3 (hub is leg 0)"),
    ("ame-6-2", "no parameters"),
];

pub fn catalog(a: CatalogArgs) -> Result<Status, CliError> {
    if a.list {
        let mut text = String::new();
        for (name, params) in FAMILIES {
            text += &format!("{name:<15} {params}\n");
        }
        text += &format!("type1 a_max = {TYPE1_A_MAX:.17e}; type3 a in [{TYPE3_A_MIN:.17e}, {TYPE3_A_MAX:.17e}]\n");
        text += &format!("built-in tensor names: {}\n", TENSOR_BUILTINS.join(", "));
        emit(&text)?;
        return Ok(Status::Ok);
    }
    let family = a.family.unwrap_or_default();
    let branch = match a.branch {
        BranchArg::Minus => SignBranch::Minus,
        BranchArg::Plus => SignBranch::Plus,
    };
    let t = match family.as_str() {
        "penta-ame" => pentagonal_ame(require(a.theta, "theta", &family)?).tensor,
        "penta-isolated" => pentagonal_isolated().tensor,
        "hex-type1" => hexagonal_type1(require(a.a, "a", &family)?, a.j, a.k, branch)?.tensor,
        "hex-type3" => hexagonal_type3(require(a.a, "a", &family)?)?.tensor,
        "hex-p2" => {
            let v = match require(a.variant, "variant", &family)?.as_str() {
                "A" | "a" => P2Variant::A,
                "B" | "b" => P2Variant::B,
                other => return Err(CliError::Usage(format!("unknown P2 variant {other:?}"))),
            };
            hexagonal_p2(v)?.tensor
        }
        "ghz" => {
            let n = require(a.n, "n", &family)?;
            if n < 2 || a.d < 2 {
                return Err(CliError::Usage("ghz needs n >= 2 and d >= 2".into()));
            }
            ghz(n, a.d)
        }
        "wheel" => {
            let n = require(a.n, "n", &family)?;
            if n < 3 {
                return Err(CliError::Usage("wheel needs n >= 3".into()));
            }
            wheel_graph_state(n)
        }
        "ame-6-2" => ame_6_2(),
        other => return Err(CliError::Usage(format!("unknown family {other:?}; see grt catalog --list"))),
    };
    emit_tensor(&t, a.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn expand(a: ExpandArgs) -> Result<Status, CliError> {
    let spec = match a.family.as_str() {
        "pentagon" => SymmetrySpec::pentagon(),
        "hexagon" => SymmetrySpec::hexagon_full(),
        "hexagon-rotation" => SymmetrySpec::hexagon_rotation(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown family {other:?}; use pentagon, hexagon or hexagon-rotation"
            )))
        }
    };
    let table = orbits(&spec, 2)?;
    let values = parse_list(&a.params)?;
    if values.len() != table.len() {
        return Err(CliError::Usage(format!(
            "{} needs {} orbit values, got {}",
            a.family,
            table.len(),
            values.len()
        )));
    }
    emit_tensor(&table.expand(&values)?, a.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn verify(a: VerifyArgs) -> Result<Status, CliError> {
    let t = load_tensor(&a.tensor)?;
    let c = load_constraint(&a.graph)?;
    let (mut report, h) = match &c {
        Constraint::Graph(g) => (check_graph_constrained(&t, g, a.tol)?, ConstraintHypergraph::from_cliques(g)),
        Constraint::Hypergraph(h) => (check_hypergraph_constrained(&t, h, a.tol)?, h.clone()),
    };
    let mut extra = None;
    if a.faithful {
        report.faithful = Some(is_faithful(&t, &h, a.tol)?);
        let found = faithful_hypergraph(&t, a.tol)?;
        extra = Some(found.hyperedges().cloned().collect::<Vec<_>>());
    }
    let pass = report.pass && report.faithful.unwrap_or(true);
    print_json(&json!({
        "pass": pass,
        "report": report,
        "maximally_mixed_subsets": extra,
    }))?;
    Ok(if pass { Status::Ok } else { Status::Fail })
}

pub fn entropy(a: TensorArg) -> Result<Status, CliError> {
    let t = load_tensor(&a.tensor)?;
    print_json(&entropy_profile(&t)?)?;
    Ok(Status::Ok)
}

fn family_counts<'a>(fams: impl Iterator<Item = &'a Family>) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for f in fams {
        *m.entry(f.label()).or_insert(0) += 1;
    }
    m
}

pub fn solve(a: SolveArgs) -> Result<Status, CliError> {
    let opts = SolveOptions {
        seed: a.seed,
        restarts: a.restarts,
        max_iterations: a.max_iter,
        polish: !a.no_polish,
        cost: match a.cost {
            CostArg::Purity => CostKind::Purity,
            CostArg::Residual => CostKind::Residual,
        },
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let report = solve_hexagonal(&opts)?;
    let secs = start.elapsed().as_secs_f64();
    let csv = fig3_csv(a.seed, &report);
    let summary = json!({
        "seed": a.seed,
        "restarts": report.restarts,
        "failed": report.failed,
        "duplicates": report.duplicates,
        "distinct": report.solutions.len(),
        "families": family_counts(report.solutions.iter().map(|s| &s.record.family)),
    });
    match &a.out {
        Some(p) => {
            write_csv_with_manifest(p, &csv, Some(a.seed), BTreeMap::new(), secs)?;
            print_json(&summary)?;
        }
        None => emit(&csv)?,
    }
    if report.solutions.is_empty() {
        return Err(CliError::NonConvergence(format!(
            "no restart reached the cost threshold ({} restarts)",
            report.restarts
        )));
    }
    Ok(Status::Ok)
}

fn legs_pair(legs: &[usize]) -> Result<(usize, usize), CliError> {
    match legs {
        [i, j] => Ok((*i, *j)),
        _ => Err(CliError::Usage("--legs takes exactly two leg positions".into())),
    }
}

pub fn node(a: NodeArgs) -> Result<Status, CliError> {
    let t = load_tensor(&a.tensor)?;
    let (i, j) = legs_pair(&a.legs)?;
    let n = node_matrix(&t, i, j)?;
    let spectrum: Vec<[f64; 2]> = n.spectrum.iter().map(|z| [z.re, z.im]).collect();
    print_json(&json!({
        "legs": [i, j],
        "lambda2": n.lambda2(),
        "moduli": n.moduli,
        "spectrum": spectrum,
        "identity_overlap": n.identity_overlap,
    }))?;
    Ok(Status::Ok)
}

pub fn dimension(a: DimensionArgs) -> Result<Status, CliError> {
    let tiling = TilingSpec::parse(&a.tiling)?;
    let lambda2 = match (a.lambda2, &a.tensor) {
        (Some(l), _) => l,
        (None, Some(path)) => {
            let t = load_tensor(path)?;
            let (i, j) = legs_pair(&a.legs)?;
            node_matrix(&t, i, j)?.lambda2()
        }
        (None, None) => return Err(CliError::Usage("give --lambda2 or --tensor with --legs".into())),
    };
    emit(&format!("{:.15}\n", scaling_dimension(lambda2, &tiling)?))?;
    Ok(Status::Ok)
}

pub fn correlate(a: CorrelateArgs) -> Result<Status, CliError> {
    let net = load_network(&a.net)?;
    let t = load_tensor(&a.tensor)?;
    let p = net.spec.p;
    let bulk = match t.order() {
        o if o == p + 1 => true,
        o if o == p => false,
        o => {
            return Err(CliError::Usage(format!(
                "tensor of order {o} does not fit {p}-gon tiles (need {p} or {})",
                p + 1
            )))
        }
    };
    let tile = TileTensor::new(t, bulk);
    let probes = a
        .probes
        .split(',')
        .map(|s| parse_placement(s).map(|(m, leg)| (leg, m)))
        .collect::<Result<Vec<_>, _>>()?;
    let op = match &a.bulk {
        Some(s) => {
            let (matrix, tile) = parse_placement(s)?;
            Some(BulkOperator { tile, matrix })
        }
        None => None,
    };
    let method = match a.method {
        MethodArg::Path => Method::Path,
        MethodArg::Brute => Method::Brute,
    };
    let r = network_correlator(&net, &tile, op.as_ref(), &probes, method)?;
    print_json(&r)?;
    Ok(Status::Ok)
}

pub fn violin(a: ViolinArgs) -> Result<Status, CliError> {
    let mode = if a.shared_unitary {
        UnitaryMode::Shared
    } else {
        UnitaryMode::PerLeg
    };
    let start = Instant::now();
    let rows = violin_sample(a.samples, a.seed, mode)?;
    let secs = start.elapsed().as_secs_f64();
    let csv = violin_csv(&rows);
    match &a.out {
        Some(p) => {
            let mut inputs = BTreeMap::new();
            inputs.insert("pentagon".to_string(), sha256_hex(pentagonal_isolated().tensor.to_json()?.as_bytes()));
            inputs.insert("perfect".to_string(), sha256_hex(ame_6_2().to_json()?.as_bytes()));
            inputs.insert("unitary_mode".to_string(), mode.label().to_string());
            write_csv_with_manifest(p, &csv, Some(a.seed), inputs, secs)?;
            let min_d2 = rows.iter().map(|r| r.delta2).fold(f64::INFINITY, f64::min);
            print_json(&json!({
                "samples": rows.len(),
                "seed": a.seed,
                "unitary_mode": mode.label(),
                "min_delta2": min_d2,
            }))?;
        }
        None => emit(&csv)?,
    }
    Ok(Status::Ok)
}

pub fn frame(a: FrameArgs) -> Result<Status, CliError> {
    let count = frame_gate_count(a.n);
    let gates = if a.swap {
        vec![swap_gate(); count]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        (0..count)
            .map(|_| {
                let locals = std::array::from_fn(|_| haar_unitary(2, &mut rng));
                dual_unitary(a.j, &locals)
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let two_unitary = gates.iter().filter(|g| is_two_unitary(g, 1e-10)).count();
    let f = frame_tensor(a.n, &gates)?;
    let report = verify_frame(&f, a.n, a.tol)?;
    print_json(&json!({
        "gates": count,
        "two_unitary_gates": two_unitary,
        "report": report,
    }))?;
    Ok(if report.neighbors_pass { Status::Ok } else { Status::Fail })
}
