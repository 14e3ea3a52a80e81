//! Explicit tensors: the pentagonal AME family and isolated point, the
//! hexagonal solution families, GHZ and graph states, dual-unitary gates,
//! the frame tensor and the glued frame + wheel construction.
//!
//! Hexagonal components follow the usual `a_1..a_13` naming; the index
//! tuples they sit at (bulk index first) are listed in [`HEX_COMPONENTS`].
//! All families are stored with their raw coefficients, unnormalized.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::entanglement::{entropy_profile, EntropyProfile};
use crate::error::{GrtError, Result};
use crate::linalg::{c64, ensure_unitary, identity, kron, max_abs};
use crate::network::{contract_network, LabelPool, LabeledTensor};
use crate::symmetry::{orbits, OrbitTable, SymmetrySpec};
use crate::tensor::{contract, DenseTensor, C64};

/// Index tuples of the pentagon's independent components, in the order
/// `T00000, T11111, T00001, T01111, T00011, T00111, T00101, T01011`.
pub const PENTA_COMPONENTS: [&str; 8] = [
    "00000", "11111", "00001", "01111", "00011", "00111", "00101", "01011",
];

/// Index tuples `(s_0, s_1..s_6)` of `a_1..a_13`.
pub const HEX_COMPONENTS: [&str; 13] = [
    "0000000", "1000000", "0000001", "1000001", "0000011", "1000011", "0000101", "1000101",
    "0001001", "1001001", "0000111", "0001011", "0010101",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    PentaAme,
    PentaIsolated,
    HexTypeI,
    HexTypeII,
    HexTypeIII,
    HexP2A,
    HexP2B,
    /// Solver output matching none of the known families.
    Isolated,
    Custom,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::PentaAme => "penta-ame",
            Family::PentaIsolated => "penta-isolated",
            Family::HexTypeI => "I",
            Family::HexTypeII => "II",
            Family::HexTypeIII => "III",
            Family::HexP2A => "P2A",
            Family::HexP2B => "P2B",
            Family::Isolated => "isolated",
            Family::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub family: Family,
    pub params: Vec<(&'static str, f64)>,
    /// Orbit-representative values in the family's documented order.
    pub components: Vec<f64>,
    pub tensor: DenseTensor,
    /// Present for seven-leg hexagonal tensors.
    pub entropy_profile: Option<EntropyProfile>,
}

pub fn pentagon_table() -> &'static OrbitTable {
    static T: OnceLock<OrbitTable> = OnceLock::new();
    T.get_or_init(|| orbits(&SymmetrySpec::pentagon(), 2).expect("pentagon orbits"))
}

pub fn hexagon_table() -> &'static OrbitTable {
    static T: OnceLock<OrbitTable> = OnceLock::new();
    T.get_or_init(|| orbits(&SymmetrySpec::hexagon_full(), 2).expect("hexagon orbits"))
}

/// Orbit id of each of `a_1..a_13`.
pub fn hex_component_orbits() -> [usize; 13] {
    let t = hexagon_table();
    let mut out = [0; 13];
    for (k, s) in HEX_COMPONENTS.iter().enumerate() {
        out[k] = t.orbit_of_str(s).expect("valid component string");
    }
    out
}

fn expand_by_strings(table: &OrbitTable, names: &[&str], values: &[f64]) -> Result<DenseTensor> {
    let mut per_orbit = vec![None; table.len()];
    for (s, &v) in names.iter().zip(values) {
        per_orbit[table.orbit_of_str(s)?] = Some(v);
    }
    let mut flat = Vec::with_capacity(table.len());
    for (o, v) in per_orbit.iter().enumerate() {
        flat.push(v.ok_or_else(|| GrtError::MissingRepresentative(table.representatives()[o].clone()))?);
    }
    table.expand(&flat)
}

pub fn pentagon_from_components(values: &[f64; 8]) -> Result<DenseTensor> {
    expand_by_strings(pentagon_table(), &PENTA_COMPONENTS, values)
}

pub fn hexagon_from_components(values: &[f64; 13]) -> Result<DenseTensor> {
    expand_by_strings(hexagon_table(), &HEX_COMPONENTS, values)
}

/// Reads `a_1..a_13` back off a symmetric seven-leg tensor.
pub fn hexagon_components(t: &DenseTensor) -> [f64; 13] {
    let mut out = [0.0; 13];
    for (k, s) in HEX_COMPONENTS.iter().enumerate() {
        let idx: Vec<usize> = s.bytes().map(|b| (b - b'0') as usize).collect();
        out[k] = t.get(&idx).re;
    }
    out
}

fn hex_record(family: Family, params: Vec<(&'static str, f64)>, a: [f64; 13]) -> Result<SolutionRecord> {
    let tensor = hexagon_from_components(&a)?;
    let profile = entropy_profile(&tensor)?;
    Ok(SolutionRecord {
        family,
        params,
        components: a.to_vec(),
        tensor,
        entropy_profile: Some(profile),
    })
}

/// One-parameter AME(5,2) family.
pub fn pentagonal_ame(theta: f64) -> SolutionRecord {
    let (s, c) = theta.sin_cos();
    // order of PENTA_COMPONENTS
    let v = [s, c, -c, -s, -s, -c, s, c];
    SolutionRecord {
        family: Family::PentaAme,
        params: vec![("theta", theta)],
        components: v.to_vec(),
        tensor: pentagon_from_components(&v).expect("complete assignment"),
        entropy_profile: None,
    }
}

/// The isolated pentagonal solution, `B = sqrt(5) - 2`.
pub fn pentagonal_isolated() -> SolutionRecord {
    let s5 = 5f64.sqrt();
    let b = s5 - 2.0;
    let t00000 = ((10.0 * s5 - 22.0).sqrt() + 3.0) / 4.0;
    let t00001 = -b / 4.0;
    let t00011 = (-b + 2.0 * b.sqrt()) / 4.0;
    let t00101 = (1.0 - (2.0 * (s5 - 1.0)).sqrt()) / 4.0;
    let v = [
        t00000,
        t00000 - 1.5,
        t00001,
        -t00001,
        t00011,
        t00011 + b / 2.0,
        t00101,
        t00101 - 0.5,
    ];
    SolutionRecord {
        family: Family::PentaIsolated,
        params: vec![],
        components: v.to_vec(),
        tensor: pentagon_from_components(&v).expect("complete assignment"),
        entropy_profile: None,
    }
}

/// Which of the paired signs in the Type I formulas is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignBranch {
    /// The upper signs (`a_1 = (-sqrt2 + 24a - 4D)/8`, ...).
    Minus,
    /// The lower signs.
    Plus,
}

impl SignBranch {
    fn u(self) -> f64 {
        match self {
            SignBranch::Minus => 1.0,
            SignBranch::Plus => -1.0,
        }
    }
}

pub const TYPE1_A_MAX: f64 = SQRT_2 / 16.0;

/// Fills `a_2, a_4, a_6, a_8` from the Type I difference relations.
fn apply_differences(a: &mut [f64; 13], j: u8, k: u8) {
    let sj = if j == 0 { 1.0 } else { -1.0 };
    let sk = if k == 0 { 1.0 } else { -1.0 };
    a[1] = a[0] + sj / (8.0 * SQRT_2);
    a[3] = a[2] + sk / (4.0 * SQRT_2);
    a[5] = a[4] - sj / (8.0 * SQRT_2);
    a[7] = a[6] - sj / (8.0 * SQRT_2);
}

/// Global sign and bond parity `Z^{⊗6}` taking the `j = k = 0` branch to
/// `(j, k)`. Negation flips both relations, bond parity flips only the
/// `a_4 - a_3` one.
fn branch_transform(a: &mut [f64; 13], j: u8, k: u8) {
    let negate = j == 1;
    let parity = (j ^ k) == 1;
    for (i, v) in a.iter_mut().enumerate() {
        if negate {
            *v = -*v;
        }
        // components with an odd number of raised bond indices
        if parity && matches!(i, 2 | 3 | 10 | 11 | 12) {
            *v = -*v;
        }
    }
}

/// One-parameter Type I family, `0 < a < sqrt2/16`.
pub fn hexagonal_type1(a: f64, j: u8, k: u8, branch: SignBranch) -> Result<SolutionRecord> {
    if !(a > 0.0 && a < TYPE1_A_MAX) {
        return Err(GrtError::ParameterOutOfRange {
            name: "a",
            value: a,
            range: "(0, sqrt2/16)",
        });
    }
    if j > 1 || k > 1 {
        return Err(GrtError::Invalid("j and k must be 0 or 1".into()));
    }
    let d = (a * (SQRT_2 - 16.0 * a)).sqrt();
    let u = branch.u();
    let mut c = [0.0; 13];
    c[0] = (-SQRT_2 + 24.0 * a - u * 4.0 * d) / 8.0;
    c[2] = (-SQRT_2 - u * 4.0 * d) / 16.0;
    c[4] = (SQRT_2 - 16.0 * a - u * 8.0 * d) / 16.0;
    c[6] = a;
    c[8] = (-SQRT_2 - 16.0 * a + u * 8.0 * d) / 16.0;
    c[9] = (SQRT_2 - 8.0 * a + u * 4.0 * d) / 8.0;
    c[10] = (SQRT_2 - 32.0 * a + u * 4.0 * d) / 16.0;
    c[11] = (-SQRT_2 + 32.0 * a + u * 4.0 * d) / 16.0;
    c[12] = (-SQRT_2 + 32.0 * a - u * 12.0 * d) / 16.0;
    apply_differences(&mut c, 0, 0);
    branch_transform(&mut c, j, k);
    hex_record(
        Family::HexTypeI,
        vec![("a", a), ("j", j as f64), ("k", k as f64), ("u", u)],
        c,
    )
}

pub const TYPE3_A_MIN: f64 = -3.0 * SQRT_2 / 16.0;
pub const TYPE3_A_MAX: f64 = SQRT_2 / 16.0;

/// One-parameter Type III family, `-3 sqrt2/16 < a < sqrt2/16`.
pub fn hexagonal_type3(a: f64) -> Result<SolutionRecord> {
    if !(a > TYPE3_A_MIN && a < TYPE3_A_MAX) {
        return Err(GrtError::ParameterOutOfRange {
            name: "a",
            value: a,
            range: "(-3 sqrt2/16, sqrt2/16)",
        });
    }
    let a3 = (3.0 - 16.0 * SQRT_2 * a - 128.0 * a * a).sqrt() / (16.0 * SQRT_2);
    let h = SQRT_2 / 16.0;
    let c = [
        a,
        a + SQRT_2 / 8.0,
        a3,
        a3,
        -h,
        h,
        -h,
        h,
        a + SQRT_2 / 8.0,
        a,
        a3,
        -a3,
        a3,
    ];
    hex_record(Family::HexTypeIII, vec![("a", a)], c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum P2Variant {
    A,
    B,
}

/// Odd components `a_1, a_3, ..., a_13` of the two exact isolated-point
/// solutions, before the difference relations fill in the even ones.
fn p2_base(variant: P2Variant) -> [f64; 13] {
    let s2 = SQRT_2;
    let mut c = [0.0; 13];
    match variant {
        P2Variant::A => {
            c[0] = ((445.0 * s2 + 650.0).sqrt() + 10.0) / (160.0 * s2);
            c[2] = -((50.0 - 5.0 * s2).sqrt() + 20.0) / (160.0 * s2);
            c[4] = ((5.0 * (50.0 - 31.0 * s2)).sqrt() - 10.0) / (160.0 * s2);
            c[6] = (((10.0 + s2) / 10.0).sqrt() - s2) / 32.0;
            c[8] = -((5.0 * (s2 + 2.0)).sqrt() - 6.0) / (32.0 * s2);
            c[9] = -((5.0 * (s2 + 2.0)).sqrt() + 6.0) / (32.0 * s2);
            c[10] = (5.0 + 31.0 / (5.0 * s2)).sqrt() / 32.0;
            c[11] = -(5.0 - 5.0 / s2).sqrt() / 32.0;
            c[12] = -(13.0 + 79.0 / (5.0 * s2)).sqrt() / 32.0;
        }
        P2Variant::B => {
            c[0] = -((890.0 - 205.0 * s2).sqrt() - 10.0) / (160.0 * s2);
            c[2] = -((85.0 * s2 + 130.0).sqrt() + 20.0) / (160.0 * s2);
            c[4] = ((10.0 - 5.0 * s2).sqrt() - 10.0) / (160.0 * s2);
            c[6] = (((10.0 - s2) / 10.0).sqrt() - s2) / 32.0;
            c[8] = -((115.0 * s2 + 650.0).sqrt() - 30.0) / (160.0 * s2);
            c[9] = -((115.0 * s2 + 650.0).sqrt() + 30.0) / (160.0 * s2);
            c[10] = -((82.0 - 31.0 * s2) / 10.0).sqrt() / 32.0;
            c[11] = 3.0 / 32.0 * ((s2 + 2.0) / 10.0).sqrt();
            c[12] = (13.0 - 79.0 / (5.0 * s2)).sqrt() / 32.0;
        }
    }
    c
}

/// The exact isolated-point solutions, both on the `j = 1, k = 0` branch of
/// the Type I difference relations.
pub fn hexagonal_p2(variant: P2Variant) -> Result<SolutionRecord> {
    hexagonal_p2_branch(variant, 1, 0)
}

/// Same odd components with an explicit choice of difference-relation signs.
pub fn hexagonal_p2_branch(variant: P2Variant, j: u8, k: u8) -> Result<SolutionRecord> {
    if j > 1 || k > 1 {
        return Err(GrtError::Invalid("j and k must be 0 or 1".into()));
    }
    let mut c = p2_base(variant);
    apply_differences(&mut c, j, k);
    let family = match variant {
        P2Variant::A => Family::HexP2A,
        P2Variant::B => Family::HexP2B,
    };
    hex_record(family, vec![("j", j as f64), ("k", k as f64)], c)
}

/// `sum_i |i...i>` on `n` legs of dimension `d`.
pub fn ghz(n: usize, d: usize) -> DenseTensor {
    DenseTensor::from_fn(vec![d; n], |idx| {
        c64(if idx.iter().all(|&s| s == idx[0]) { 1.0 } else { 0.0 })
    })
}

/// Graph state `prod CZ |+>^n` with unnormalized `±1` coefficients.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> DenseTensor {
    DenseTensor::from_fn(vec![2; n], |s| {
        let parity: usize = edges.iter().map(|&(a, b)| s[a] * s[b]).sum();
        c64(if parity.is_multiple_of(2) { 1.0 } else { -1.0 })
    })
}

/// Graph state on the wheel: hub `0`, rim `1..=n`.
pub fn wheel_graph_state(n: usize) -> DenseTensor {
    let mut edges = Vec::new();
    for i in 1..=n {
        edges.push((0, i));
        edges.push((i, i % n + 1));
    }
    graph_state(n + 1, &edges)
}

/// Six-qubit perfect tensor: the graph state of the five-spoke wheel, whose
/// 1-, 2- and 3-site marginals are all maximally mixed.
pub fn ame_6_2() -> DenseTensor {
    wheel_graph_state(5)
}

/// `(u1⊗u2) exp(-i[π/4 XX + π/4 YY + J ZZ]) (u3⊗u4)`.
pub fn dual_unitary(j: f64, locals: &[DMatrix<C64>; 4]) -> Result<DMatrix<C64>> {
    for u in locals {
        if u.nrows() != 2 || u.ncols() != 2 {
            return Err(GrtError::Invalid("local gates must be 2x2".into()));
        }
        ensure_unitary(u, 1e-10)?;
    }
    Ok(kron(&locals[0], &locals[1]) * dual_unitary_core(j) * kron(&locals[2], &locals[3]))
}

/// `exp(-i[π/4 XX + π/4 YY + J ZZ])` in closed form: the `{01, 10}` block
/// is a phased swap, `00` and `11` pick up `e^{-iJ}`.
pub fn dual_unitary_core(j: f64) -> DMatrix<C64> {
    let d = C64::from_polar(1.0, -j);
    let off = C64::new(0.0, -1.0) * C64::from_polar(1.0, j);
    let z = c64(0.0);
    DMatrix::from_row_slice(4, 4, &[d, z, z, z, z, z, off, z, z, off, z, z, z, z, z, d])
}

/// `M[(r1, c1), (r2, c2)] = U[(a, b), (c, d)]` for a chosen regrouping of
/// the four gate indices `[o1, o2, i1, i2]`.
fn regroup(u: &DMatrix<C64>, rows: [usize; 2], cols: [usize; 2]) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    for o1 in 0..2 {
        for o2 in 0..2 {
            for i1 in 0..2 {
                for i2 in 0..2 {
                    let idx = [o1, o2, i1, i2];
                    let r = idx[rows[0]] * 2 + idx[rows[1]];
                    let c = idx[cols[0]] * 2 + idx[cols[1]];
                    m[(r, c)] = u[(o1 * 2 + o2, i1 * 2 + i2)];
                }
            }
        }
    }
    m
}

/// Unitarity deviations of the gate and of its space-direction regrouping
/// `(i1, o1) -> (i2, o2)`.
pub fn dual_unitarity_deviation(u: &DMatrix<C64>) -> (f64, f64) {
    let dual = regroup(u, [2, 0], [3, 1]);
    (
        crate::linalg::unitarity_deviation(u),
        crate::linalg::unitarity_deviation(&dual),
    )
}

/// Unitarity deviation of the remaining balanced regrouping `(o1, i2) -> (o2, i1)`;
/// zero together with the dual check means the gate is 2-unitary.
pub fn reshuffle_deviation(u: &DMatrix<C64>) -> f64 {
    crate::linalg::unitarity_deviation(&regroup(u, [0, 3], [1, 2]))
}

pub fn is_two_unitary(u: &DMatrix<C64>, tol: f64) -> bool {
    let (a, b) = dual_unitarity_deviation(u);
    a <= tol && b <= tol && reshuffle_deviation(u) <= tol
}

/// Number of distinct gates a frame on `n` legs needs.
pub fn frame_gate_count(n: usize) -> usize {
    (n.saturating_sub(3)).div_ceil(2)
}

/// Gate placements of the frame: `(a, b, offset)` joins wire `a` to the
/// non-adjacent wire `b = a + 1 + offset`, with each unordered pair listed once.
pub fn frame_placements(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for i in 1..n.saturating_sub(2) {
            let b = (a + 1 + i) % n;
            let mirror = n - 2 - i;
            if i < mirror || (i == mirror && a < b) {
                out.push((a, b, i));
            }
        }
    }
    out
}

/// Frame tensor on `n` ququart legs. Wire `c_j` runs from leg `j` to leg
/// `j+1`; leg `j` holds the right end of wire `j-1` and the left end of wire
/// `j` (in that order). Every pair of non-adjacent wires meets in one gate,
/// the gate for offset `i` being `gates[min(i, n-2-i) - 1]`. Along each wire
/// gates are applied in descending order of the partner's offset.
pub fn frame_tensor(n: usize, gates: &[DMatrix<C64>]) -> Result<DenseTensor> {
    if n < 4 {
        return Err(GrtError::Invalid(format!("frame needs n >= 4, got {n}")));
    }
    let need = frame_gate_count(n);
    if gates.len() != need {
        return Err(GrtError::Wiring(format!("{} gates supplied, {need} required", gates.len())));
    }
    for g in gates {
        if g.nrows() != 4 || g.ncols() != 4 {
            return Err(GrtError::Invalid("gates must be 4x4".into()));
        }
        let (u, d) = dual_unitarity_deviation(g);
        if u.max(d) > 1e-10 {
            return Err(GrtError::NotDualUnitary(u.max(d)));
        }
    }
    let placements = frame_placements(n);
    if placements.len() != n * (n - 3) / 2 {
        return Err(GrtError::Wiring("placement count mismatch".into()));
    }
    let mut on_wire: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (g, &(a, b, _)) in placements.iter().enumerate() {
        on_wire[a].push((g, (b + n - a) % n));
        on_wire[b].push((g, (a + n - b) % n));
    }
    for w in &mut on_wire {
        w.sort_by_key(|x| std::cmp::Reverse(x.1));
    }
    let pos = |w: usize, g: usize| on_wire[w].iter().position(|e| e.0 == g).expect("gate on wire");

    let mut labels: LabelPool<(usize, usize)> = LabelPool::default();
    let mut items = Vec::with_capacity(placements.len());
    for (g, &(a, b, i)) in placements.iter().enumerate() {
        let u = &gates[i.min(n - 2 - i) - 1];
        let t = DenseTensor::new(vec![2; 4], u.transpose().iter().copied().collect())?;
        let (pa, pb) = (pos(a, g), pos(b, g));
        let a_l = labels.get((a, pa));
        let a_r = labels.get((a, pa + 1));
        let b_l = labels.get((b, pb));
        let b_r = labels.get((b, pb + 1));
        // tensor legs [o1, o2, i1, i2]
        items.push(LabeledTensor::new(t, vec![b_r, b_l, a_l, a_r])?);
    }
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        let w = (j + n - 1) % n;
        out.push(labels.get((w, on_wire[w].len())));
        out.push(labels.get((j, 0)));
    }
    let t = contract_network(items, &out)?;
    DenseTensor::new(vec![4; n], t.into_coeffs())
}

/// Per-leg unitaries for glued constructions.
#[derive(Clone, Debug)]
pub enum LegUnitaries {
    Identity,
    Shared(DMatrix<C64>),
    PerLeg(Vec<DMatrix<C64>>),
}

impl LegUnitaries {
    fn get(&self, leg: usize, d: usize) -> DMatrix<C64> {
        match self {
            LegUnitaries::Identity => identity(d),
            LegUnitaries::Shared(u) => u.clone(),
            LegUnitaries::PerLeg(us) => us[leg].clone(),
        }
    }

    fn validate(&self, legs: usize, d: usize) -> Result<()> {
        let check = |u: &DMatrix<C64>| -> Result<()> {
            if u.nrows() != d || u.ncols() != d {
                return Err(GrtError::Invalid(format!("leg unitaries must be {d}x{d}")));
            }
            ensure_unitary(u, 1e-10)
        };
        match self {
            LegUnitaries::Identity => Ok(()),
            LegUnitaries::Shared(u) => check(u),
            LegUnitaries::PerLeg(us) => {
                if us.len() != legs {
                    return Err(GrtError::Invalid(format!("{} leg unitaries for {legs} legs", us.len())));
                }
                us.iter().try_for_each(check)
            }
        }
    }
}

/// Outer product of `a` (legs `0..=n`, leg 0 bulk) and `b` (legs `0..n`),
/// with leg `j >= 1` of the result fusing `a_j` (slow) and `b_{j-1}` (fast),
/// followed by the per-leg unitaries.
fn fuse_legs(a: &DenseTensor, b: &DenseTensor, unitaries: &LegUnitaries) -> Result<DenseTensor> {
    let n = b.order();
    if a.order() != n + 1 {
        return Err(GrtError::Wiring("bulk tensor must have one more leg".into()));
    }
    let prod = contract(a, b, &[])?;
    let mut perm = vec![0];
    let mut dims = vec![a.dims()[0]];
    for j in 1..=n {
        perm.push(j);
        perm.push(n + j);
        dims.push(a.dims()[j] * b.dims()[j - 1]);
    }
    let fused = DenseTensor::new(dims.clone(), prod.permute(&perm)?.into_coeffs())?;
    unitaries.validate(n, dims[1])?;
    let mut out = fused;
    for j in 1..=n {
        if dims[j] != dims[1] {
            return Err(GrtError::DimensionMismatch {
                index: j,
                expected: dims[1],
                found: dims[j],
            });
        }
        if !matches!(unitaries, LegUnitaries::Identity) {
            out = out.apply_on_leg(j, &unitaries.get(j - 1, dims[j]))?;
        }
    }
    Ok(out)
}

/// Wheel graph state glued to a frame: leg `j` (1..=n) fuses frame leg
/// `j-1` with rim qubit `j` into an 8-dimensional leg, then applies the
/// leg's unitary. Leg 0 is the hub qubit.
pub fn appendix_c_tensor(n: usize, gates: &[DMatrix<C64>], legs: &LegUnitaries) -> Result<DenseTensor> {
    let f = frame_tensor(n, gates)?;
    let g = wheel_graph_state(n);
    // frame first in each fused leg: index = f * 2 + g
    let prod = contract(&g, &f, &[])?;
    let mut perm = vec![0];
    for j in 1..=n {
        perm.push(n + j);
        perm.push(j);
    }
    let mut dims = vec![2];
    dims.extend(std::iter::repeat_n(8, n));
    let fused = DenseTensor::new(dims, prod.permute(&perm)?.into_coeffs())?;
    legs.validate(n, 8)?;
    let mut out = fused;
    if !matches!(legs, LegUnitaries::Identity) {
        for j in 1..=n {
            out = out.apply_on_leg(j, &legs.get(j - 1, 8))?;
        }
    }
    Ok(out)
}

/// Perfect tensor (bulk leg 0, five boundary legs) joined leg by leg with
/// a five-leg pentagonal tensor: one bulk qubit and five 4-dimensional legs.
pub fn combined_pentagon_perfect(
    pentagon: &DenseTensor,
    perfect: &DenseTensor,
    legs: &LegUnitaries,
) -> Result<DenseTensor> {
    if pentagon.order() != 5 || perfect.order() != 6 {
        return Err(GrtError::Invalid("expected a 5-leg pentagon and a 6-leg perfect tensor".into()));
    }
    fuse_legs(perfect, pentagon, legs)
}

/// Rough equality for component arrays.
pub fn components_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// `max |U - V|` helper for gate tests.
pub fn gate_distance(u: &DMatrix<C64>, v: &DMatrix<C64>) -> f64 {
    max_abs(&(u - v))
}

/// SWAP up to the `e^{-iπ/4}` phase produced by the core at `J = π/4`.
pub fn swap_gate() -> DMatrix<C64> {
    dual_unitary_core(FRAC_PI_4) * C64::from_polar(1.0, FRAC_PI_4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{check_graph_constrained, ConstraintGraph};
    use crate::linalg::{haar_unitary, pauli_x, pauli_y, pauli_z};
    use crate::tensor::reduce_to;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn expm_hermitian(h: &DMatrix<C64>) -> DMatrix<C64> {
        let eig = h.clone().symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l)));
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }

    #[test]
    fn core_matches_matrix_exponential() {
        for j in [0.0, 0.3, FRAC_PI_4, -1.1] {
            let h = (kron(&pauli_x(), &pauli_x()) + kron(&pauli_y(), &pauli_y())) * c64(FRAC_PI_4)
                + kron(&pauli_z(), &pauli_z()) * c64(j);
            assert!(gate_distance(&dual_unitary_core(j), &expm_hermitian(&h)) < 1e-13);
        }
    }

    #[test]
    fn swap_point() {
        let id = identity(2);
        let u = dual_unitary(FRAC_PI_4, &[id.clone(), id.clone(), id.clone(), id]).unwrap();
        let phased = u * C64::from_polar(1.0, FRAC_PI_4);
        let mut swap = DMatrix::zeros(4, 4);
        for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(r, c)] = c64(1.0);
        }
        assert!(gate_distance(&phased, &swap) < 1e-15);
        let (a, b) = dual_unitarity_deviation(&swap);
        assert!(a < 1e-15 && b < 1e-15);
        assert!(!is_two_unitary(&swap, 1e-8));
    }

    #[test]
    fn j_zero_is_dual_but_not_two_unitary() {
        let id = identity(2);
        let u = dual_unitary(0.0, &[id.clone(), id.clone(), id.clone(), id]).unwrap();
        let (a, b) = dual_unitarity_deviation(&u);
        assert!(a < 1e-14 && b < 1e-14);
        assert!(reshuffle_deviation(&u) > 1e-3);
    }

    #[test]
    fn non_unitary_local_rejected() {
        let bad = DMatrix::from_element(2, 2, c64(1.0));
        let id = identity(2);
        assert!(matches!(
            dual_unitary(0.3, &[bad, id.clone(), id.clone(), id]),
            Err(GrtError::NotUnitary(_))
        ));
    }

    #[test]
    fn placement_counts() {
        for n in 4..9 {
            assert_eq!(frame_placements(n).len(), n * (n - 3) / 2);
        }
        assert_eq!(frame_gate_count(4), 1);
        assert_eq!(frame_gate_count(5), 1);
        assert_eq!(frame_gate_count(6), 2);
    }

    #[test]
    fn frame_neighbor_isometry_n4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let locals = [0; 4].map(|_| haar_unitary(2, &mut rng));
        let g = dual_unitary(0.3, &locals).unwrap();
        let f = frame_tensor(4, &[g]).unwrap();
        for j in 0..4 {
            let rho = reduce_to(&f, &[j, (j + 1) % 4]).unwrap();
            let c = crate::tensor::proportional_to_identity(&rho.entries, 1e-10).unwrap();
            assert!(c.proportional, "leg pair {j}: {}", c.deviation);
        }
    }

    #[test]
    fn frame_rejects_wrong_gate_count() {
        let id = identity(4);
        assert!(matches!(frame_tensor(6, &[id]), Err(GrtError::Wiring(_))));
    }

    #[test]
    fn ame62_passes_k6() {
        let r = check_graph_constrained(&ame_6_2(), &ConstraintGraph::complete(6), 1e-12).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn ghz_helpers() {
        let g = ghz(3, 3);
        assert_eq!(g.norm_sqr(), 3.0);
        assert_eq!(g.get(&[2, 2, 2]), c64(1.0));
    }

    #[test]
    fn type1_out_of_range() {
        assert!(hexagonal_type1(0.0, 0, 0, SignBranch::Minus).is_err());
        assert!(hexagonal_type1(TYPE1_A_MAX, 0, 0, SignBranch::Minus).is_err());
        assert!(hexagonal_type3(TYPE3_A_MAX + 1e-9).is_err());
    }

    #[test]
    fn type1_difference_relations_all_branches() {
        for j in 0..2u8 {
            for k in 0..2u8 {
                let r = hexagonal_type1(0.05, j, k, SignBranch::Plus).unwrap();
                let a = &r.components;
                let sj = if j == 0 { 1.0 } else { -1.0 } / (8.0 * SQRT_2);
                let sk = if k == 0 { 1.0 } else { -1.0 } / (4.0 * SQRT_2);
                assert!((a[1] - a[0] - sj).abs() < 1e-15);
                assert!((a[4] - a[5] - sj).abs() < 1e-15);
                assert!((a[6] - a[7] - sj).abs() < 1e-15);
                assert!((a[3] - a[2] - sk).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn components_round_trip() {
        let r = hexagonal_type3(-0.1).unwrap();
        assert!(components_close(&hexagon_components(&r.tensor), &r.components, 0.0));
    }
}
