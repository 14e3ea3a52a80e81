//! Index-permutation and spin-flip symmetries, orbit tables, expansion of
//! independent components into full tensors, and the isometry equations
//! written in terms of those components.

use std::collections::{BTreeMap, HashSet, VecDeque};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GrtError, Result};
use crate::tensor::{increment, DenseTensor, C64};

/// Guard on the size of generated groups.
pub const MAX_GROUP_ORDER: usize = 10_000;

/// One group element acting on index tuples: `(g t)[k] = t[perm[k]]`,
/// followed by `s -> d-1-s` on every index when `flip` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetryElement {
    pub perm: Vec<usize>,
    pub flip: bool,
}

impl SymmetryElement {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            flip: false,
        }
    }

    pub fn act(&self, t: &[usize], d: usize) -> Vec<usize> {
        self.perm
            .iter()
            .map(|&p| if self.flip { d - 1 - t[p] } else { t[p] })
            .collect()
    }

    /// `self` applied after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            perm: self.perm.iter().map(|&k| other.perm[k]).collect(),
            flip: self.flip ^ other.flip,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrySpec {
    n: usize,
    generators: Vec<SymmetryElement>,
}

impl SymmetrySpec {
    pub fn new(n: usize, generators: Vec<SymmetryElement>) -> Result<Self> {
        for g in &generators {
            let mut seen = vec![false; n];
            if g.perm.len() != n {
                return Err(GrtError::InvalidGenerator(format!(
                    "permutation of length {} for {n} indices",
                    g.perm.len()
                )));
            }
            for &p in &g.perm {
                if p >= n || seen[p] {
                    return Err(GrtError::InvalidGenerator(format!("{:?} is not a permutation", g.perm)));
                }
                seen[p] = true;
            }
        }
        Ok(Self { n, generators })
    }

    /// Cyclic shift of five indices.
    pub fn pentagon() -> Self {
        Self {
            n: 5,
            generators: vec![SymmetryElement {
                perm: vec![1, 2, 3, 4, 0],
                flip: false,
            }],
        }
    }

    /// Rotation of the six bond indices, bulk index 0 fixed.
    pub fn hexagon_rotation() -> Self {
        Self {
            n: 7,
            generators: vec![hex_rotation()],
        }
    }

    /// Bond rotation, global spin flip, and reflection fixing bond 1.
    pub fn hexagon_full() -> Self {
        Self {
            n: 7,
            generators: vec![
                hex_rotation(),
                SymmetryElement {
                    perm: (0..7).collect(),
                    flip: true,
                },
                SymmetryElement {
                    perm: vec![0, 1, 6, 5, 4, 3, 2],
                    flip: false,
                },
            ],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SymmetryElement] {
        &self.generators
    }

    /// Every element of the generated group.
    pub fn group_elements(&self) -> Result<Vec<SymmetryElement>> {
        let id = SymmetryElement::identity(self.n);
        let mut seen: HashSet<SymmetryElement> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        let mut out = Vec::new();
        while let Some(e) = queue.pop_front() {
            for g in &self.generators {
                let next = g.compose(&e);
                if seen.insert(next.clone()) {
                    if seen.len() > MAX_GROUP_ORDER {
                        return Err(GrtError::GroupTooLarge(MAX_GROUP_ORDER));
                    }
                    queue.push_back(next);
                }
            }
            out.push(e);
        }
        Ok(out)
    }
}

fn hex_rotation() -> SymmetryElement {
    SymmetryElement {
        perm: vec![0, 2, 3, 4, 5, 6, 1],
        flip: false,
    }
}

/// Orbit decomposition of all `d^n` index tuples.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    n: usize,
    d: usize,
    representatives: Vec<Vec<usize>>,
    membership: Vec<usize>,
    sizes: Vec<usize>,
}

pub fn orbits(spec: &SymmetrySpec, d: usize) -> Result<OrbitTable> {
    // the guard applies even though orbits are grown from generators alone
    spec.group_elements()?;
    let n = spec.n;
    let dims = vec![d; n];
    let total = d.pow(n as u32);
    let mut membership = vec![usize::MAX; total];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut idx = vec![0usize; n];
    for flat in 0..total {
        if membership[flat] == usize::MAX {
            let id = members.len();
            let mut orbit = vec![flat];
            membership[flat] = id;
            let mut queue = VecDeque::from([idx.clone()]);
            while let Some(t) = queue.pop_front() {
                for g in &spec.generators {
                    let u = g.act(&t, d);
                    let f = flat_of(&u, d);
                    if membership[f] == usize::MAX {
                        membership[f] = id;
                        orbit.push(f);
                        queue.push_back(u);
                    }
                }
            }
            members.push(orbit);
        }
        increment(&mut idx, &dims);
    }
    // flat order equals lexicographic order, so the scan visits each orbit
    // first at its smallest member
    let representatives = members.iter().map(|m| tuple_of(m[0], n, d)).collect();
    let sizes = members.iter().map(Vec::len).collect();
    Ok(OrbitTable {
        n,
        d,
        representatives,
        membership,
        sizes,
    })
}

impl OrbitTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn representatives(&self) -> &[Vec<usize>] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Orbit id of every flat index.
    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn orbit_of(&self, tuple: &[usize]) -> usize {
        self.membership[flat_of(tuple, self.d)]
    }

    /// Parses a bit string such as `"0010101"` into the orbit id of that tuple.
    pub fn orbit_of_str(&self, bits: &str) -> Result<usize> {
        let t: Vec<usize> = bits
            .chars()
            .map(|c| c.to_digit(10).map(|v| v as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| GrtError::Invalid(format!("bad index string {bits}")))?;
        if t.len() != self.n || t.iter().any(|&v| v >= self.d) {
            return Err(GrtError::Invalid(format!("bad index string {bits}")));
        }
        Ok(self.orbit_of(&t))
    }

    /// Full tensor from one value per orbit (indexed by orbit id).
    pub fn expand(&self, values: &[f64]) -> Result<DenseTensor> {
        if values.len() != self.len() {
            let missing = self.representatives.get(values.len()).cloned().unwrap_or_default();
            return Err(GrtError::MissingRepresentative(missing));
        }
        let coeffs = self.membership.iter().map(|&o| C64::new(values[o], 0.0)).collect();
        DenseTensor::new(vec![self.d; self.n], coeffs)
    }

    /// Full tensor from values keyed by any member of each orbit.
    pub fn expand_map(&self, values: &BTreeMap<Vec<usize>, f64>) -> Result<DenseTensor> {
        let mut per_orbit: Vec<Option<f64>> = vec![None; self.len()];
        for (t, &v) in values {
            if t.len() != self.n || t.iter().any(|&s| s >= self.d) {
                return Err(GrtError::Invalid(format!("index tuple {t:?} has wrong shape")));
            }
            let o = self.orbit_of(t);
            match per_orbit[o] {
                Some(prev) if prev != v => {
                    return Err(GrtError::Invalid(format!(
                        "conflicting values for orbit of {:?}",
                        self.representatives[o]
                    )))
                }
                _ => per_orbit[o] = Some(v),
            }
        }
        let mut flat = Vec::with_capacity(self.len());
        for (o, v) in per_orbit.iter().enumerate() {
            flat.push(v.ok_or_else(|| GrtError::MissingRepresentative(self.representatives[o].clone()))?);
        }
        self.expand(&flat)
    }

    /// Values of `t` at the representatives (real parts).
    pub fn restrict(&self, t: &DenseTensor) -> Vec<f64> {
        self.representatives.iter().map(|r| t.get(r).re).collect()
    }

    /// Largest spread of coefficients within an orbit.
    pub fn invariance_deviation(&self, t: &DenseTensor) -> f64 {
        let mut dev = 0.0f64;
        for (flat, &o) in self.membership.iter().enumerate() {
            let rep = t.get(&self.representatives[o]);
            dev = dev.max((t.coeffs()[flat] - rep).norm());
        }
        dev
    }
}

fn flat_of(t: &[usize], d: usize) -> usize {
    t.iter().fold(0, |acc, &s| acc * d + s)
}

fn tuple_of(mut flat: usize, n: usize, d: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for k in (0..n).rev() {
        t[k] = flat % d;
        flat /= d;
    }
    t
}

/// Applies `S^{⊗n}` with `S = [[cos φ, sin φ], [-sin φ, cos φ]]` to every leg.
pub fn apply_local_rotation(t: &DenseTensor, phi: f64) -> Result<DenseTensor> {
    if let Some(leg) = t.dims().iter().position(|&d| d != 2) {
        return Err(GrtError::NonQubitLeg(leg));
    }
    let (s, c) = phi.sin_cos();
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(c, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(c, 0.0)],
    );
    let mut out = t.clone();
    for leg in 0..t.order() {
        out = out.apply_on_leg(leg, &m)?;
    }
    Ok(out)
}

/// Quadratic form `sum_{p<=q} c_pq x_p x_q + constant` in the orbit values.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticResidual {
    pub terms: BTreeMap<(usize, usize), f64>,
    pub constant: f64,
}

impl QuadraticResidual {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(&(p, q), &c)| c * x[p] * x[q]).sum::<f64>() + self.constant
    }

    pub fn gradient_into(&self, x: &[f64], row: &mut [f64]) {
        for (&(p, q), &c) in &self.terms {
            row[p] += c * x[q];
            row[q] += c * x[p];
        }
    }
}

/// The distinct scalar equations `rho_C(x) = 1` for a kept set `C`.
#[derive(Clone, Debug)]
pub struct ConstraintEquations {
    pub count: usize,
    pub residuals: Vec<QuadraticResidual>,
    pub table: OrbitTable,
}

impl ConstraintEquations {
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.residuals.iter().map(|r| r.eval(x)).collect()
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.table.len();
        let mut j = DMatrix::zeros(self.residuals.len(), m);
        let mut row = vec![0.0; m];
        for (i, r) in self.residuals.iter().enumerate() {
            row.iter_mut().for_each(|v| *v = 0.0);
            r.gradient_into(x, &mut row);
            for (k, v) in row.iter().enumerate() {
                j[(i, k)] = *v;
            }
        }
        j
    }
}

/// Seed of the fingerprint points used to deduplicate equations.
const FINGERPRINT_SEED: u64 = 0x6772_7466_7031;
const FINGERPRINT_POINTS: usize = 8;
const FINGERPRINT_TOL: f64 = 1e-9;

/// Entries `i <= j` of `rho_C - I` as quadratics in the orbit values of a
/// real qubit tensor, with identical polynomials merged by random-point
/// fingerprints and identically-zero entries dropped.
pub fn constraint_equations(spec: &SymmetrySpec, clique: &[usize]) -> Result<ConstraintEquations> {
    let d = 2;
    let table = orbits(spec, d)?;
    let n = spec.n;
    let mut kept = clique.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.iter().any(|&k| k >= n) {
        return Err(GrtError::Invalid(format!("clique {clique:?} invalid for {n} indices")));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();
    let rows = d.pow(kept.len() as u32);
    let cols = d.pow(traced.len() as u32);
    let orbit_at = |r: usize, c: usize| -> usize {
        let kr = tuple_of(r, kept.len(), d);
        let tc = tuple_of(c, traced.len(), d);
        let mut t = vec![0; n];
        for (k, &leg) in kept.iter().enumerate() {
            t[leg] = kr[k];
        }
        for (k, &leg) in traced.iter().enumerate() {
            t[leg] = tc[k];
        }
        table.orbit_of(&t)
    };
    let mut all = Vec::new();
    for i in 0..rows {
        for j in i..rows {
            let mut terms: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            for c in 0..cols {
                let (p, q) = (orbit_at(i, c), orbit_at(j, c));
                *terms.entry((p.min(q), p.max(q))).or_default() += 1.0;
            }
            all.push(QuadraticResidual {
                terms,
                constant: if i == j { -1.0 } else { 0.0 },
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(FINGERPRINT_SEED);
    let points: Vec<Vec<f64>> = (0..FINGERPRINT_POINTS)
        .map(|_| (0..table.len()).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let mut prints: Vec<Vec<f64>> = Vec::new();
    let mut residuals = Vec::new();
    for r in all {
        let fp: Vec<f64> = points.iter().map(|x| r.eval(x)).collect();
        if fp.iter().all(|v| v.abs() <= FINGERPRINT_TOL) {
            continue;
        }
        let dup = prints
            .iter()
            .any(|q| q.iter().zip(&fp).all(|(a, b)| (a - b).abs() <= FINGERPRINT_TOL));
        if !dup {
            prints.push(fp);
            residuals.push(r);
        }
    }
    Ok(ConstraintEquations {
        count: residuals.len(),
        residuals,
        table,
    })
}
