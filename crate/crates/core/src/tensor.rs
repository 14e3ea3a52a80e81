//! Dense tensors and their three views: a coefficient list (state), a
//! matrix between two groups of legs (operator), and a reduced density
//! matrix over a kept subset of legs.
//!
//! Storage is row-major with the first leg slowest. Leg positions are
//! 0-based throughout; for seven-leg hexagonal tensors position 0 is the
//! bulk leg, so positions coincide with the usual `s_0..s_6` labels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GrtError, Result};

pub type C64 = Complex64;

/// Dense complex tensor with arbitrary local dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    coeffs: Vec<C64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, coeffs: Vec<C64>) -> Result<Self> {
        for (index, &d) in dims.iter().enumerate() {
            if d == 0 {
                return Err(GrtError::DimensionMismatch {
                    index,
                    expected: 1,
                    found: 0,
                });
            }
        }
        let expected: usize = dims.iter().product();
        if coeffs.len() != expected {
            return Err(GrtError::CoeffCount {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { dims, coeffs })
    }

    pub fn from_real(dims: Vec<usize>, values: &[f64]) -> Result<Self> {
        Self::new(dims, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        Self {
            dims,
            coeffs: vec![C64::new(0.0, 0.0); len],
        }
    }

    /// Builds a tensor by evaluating `f` at every index tuple in storage order.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> C64) -> Self {
        let len: usize = dims.iter().product();
        let mut coeffs = Vec::with_capacity(len);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..len {
            coeffs.push(f(&idx));
            increment(&mut idx, &dims);
        }
        Self { dims, coeffs }
    }

    pub fn qubits(n: usize) -> Self {
        Self::zeros(vec![2; n])
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.coeffs[self.flat_index(idx)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Unit 2-norm copy.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !n.is_finite() || n <= 0.0 {
            return Err(GrtError::DegenerateTensor);
        }
        Ok(self.scale(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Reorders legs: leg `k` of the result is leg `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        check_permutation(perm, n)?;
        if perm.iter().enumerate().all(|(k, &p)| k == p) {
            return Ok(self.clone());
        }
        let old_strides = self.strides();
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let step: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; n];
        let mut offset = 0usize;
        for _ in 0..self.len() {
            out.push(self.coeffs[offset]);
            // odometer over the new index, tracking the old flat offset
            for k in (0..n).rev() {
                idx[k] += 1;
                offset += step[k];
                if idx[k] < new_dims[k] {
                    break;
                }
                offset -= step[k] * new_dims[k];
                idx[k] = 0;
            }
        }
        Ok(Self {
            dims: new_dims,
            coeffs: out,
        })
    }

    /// Applies a `d x d` matrix to one leg: `T'[..a..] = sum_b m[a,b] T[..b..]`.
    pub fn apply_on_leg(&self, leg: usize, m: &DMatrix<C64>) -> Result<Self> {
        let n = self.order();
        if leg >= n {
            return Err(GrtError::IndexOutOfRange {
                index: leg,
                order: n,
            });
        }
        let d = self.dims[leg];
        if m.nrows() != d || m.ncols() != d {
            return Err(GrtError::DimensionMismatch {
                index: leg,
                expected: d,
                found: m.nrows(),
            });
        }
        let inner: usize = self.dims[leg + 1..].iter().product();
        let outer: usize = self.dims[..leg].iter().product();
        let mut out = vec![C64::new(0.0, 0.0); self.len()];
        for o in 0..outer {
            let base = o * d * inner;
            for a in 0..d {
                for b in 0..d {
                    let w = m[(a, b)];
                    if w == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let src = base + b * inner;
                    let dst = base + a * inner;
                    for r in 0..inner {
                        out[dst + r] += w * self.coeffs[src + r];
                    }
                }
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            coeffs: out,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&TensorJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TensorJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// On-disk tensor format: `{"order": n, "dims": [...], "coeffs": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorJson {
    pub order: usize,
    pub dims: Vec<usize>,
    pub coeffs: Vec<[f64; 2]>,
}

impl From<&DenseTensor> for TensorJson {
    fn from(t: &DenseTensor) -> Self {
        Self {
            order: t.order(),
            dims: t.dims.clone(),
            coeffs: t.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<TensorJson> for DenseTensor {
    type Error = GrtError;

    fn try_from(raw: TensorJson) -> Result<Self> {
        if raw.order != raw.dims.len() {
            return Err(GrtError::Invalid(format!(
                "order {} but {} dims",
                raw.order,
                raw.dims.len()
            )));
        }
        DenseTensor::new(
            raw.dims,
            raw.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect(),
        )
    }
}

/// Split of the legs `0..n` into a kept side and a traced side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n: usize,
    kept: Vec<usize>,
    traced: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, kept: &[usize]) -> Result<Self> {
        let mut k = kept.to_vec();
        k.sort_unstable();
        for w in k.windows(2) {
            if w[0] == w[1] {
                return Err(GrtError::DuplicateIndex(w[0]));
            }
        }
        if let Some(&bad) = k.iter().find(|&&i| i >= n) {
            return Err(GrtError::IndexOutOfRange {
                index: bad,
                order: n,
            });
        }
        let traced = (0..n).filter(|i| k.binary_search(i).is_err()).collect();
        Ok(Self { n, kept: k, traced })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn traced(&self) -> &[usize] {
        &self.traced
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            kept: self.traced.clone(),
            traced: self.kept.clone(),
        }
    }
}

/// Reduced density matrix over the kept legs of a bipartition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub kept: Vec<usize>,
    pub entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let h = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Copy divided by its trace.
    pub fn trace_normalized(&self) -> Result<Self> {
        let t = self.trace();
        if t == 0.0 || !t.is_finite() {
            return Err(GrtError::DegenerateTensor);
        }
        Ok(Self {
            kept: self.kept.clone(),
            entries: &self.entries / C64::new(t, 0.0),
        })
    }

    /// `Tr rho^2` without forming the product.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }
}

fn check_order(t: &DenseTensor, b: &Bipartition) -> Result<()> {
    if b.n != t.order() {
        return Err(GrtError::DimensionMismatch {
            index: b.n.min(t.order()),
            expected: t.order(),
            found: b.n,
        });
    }
    Ok(())
}

/// Matrix of `V_T` from the traced legs to the kept legs; rows follow the
/// kept legs in ascending order.
pub fn as_operator(t: &DenseTensor, b: &Bipartition) -> Result<DMatrix<C64>> {
    check_order(t, b)?;
    let perm: Vec<usize> = b.kept.iter().chain(&b.traced).copied().collect();
    let p = t.permute(&perm)?;
    let rows: usize = b.kept.iter().map(|&i| t.dims[i]).product();
    let cols = t.len() / rows;
    Ok(DMatrix::from_row_slice(rows, cols, &p.coeffs))
}

/// `rho = V V^dagger`: contracts `T` with its conjugate over the traced legs.
pub fn reduce(t: &DenseTensor, b: &Bipartition) -> Result<DensityMatrix> {
    let v = as_operator(t, b)?;
    let entries = &v * v.adjoint();
    Ok(DensityMatrix {
        kept: b.kept.clone(),
        entries,
    })
}

/// Shorthand for `reduce` with a kept list.
pub fn reduce_to(t: &DenseTensor, kept: &[usize]) -> Result<DensityMatrix> {
    reduce(t, &Bipartition::new(t.order(), kept)?)
}

/// Contracts `pairs` of legs; remaining legs of `t1` come first, then those
/// of `t2`, each in original order.
pub fn contract(t1: &DenseTensor, t2: &DenseTensor, pairs: &[(usize, usize)]) -> Result<DenseTensor> {
    let mut used1 = vec![false; t1.order()];
    let mut used2 = vec![false; t2.order()];
    for &(a, b) in pairs {
        if a >= t1.order() {
            return Err(GrtError::IndexOutOfRange {
                index: a,
                order: t1.order(),
            });
        }
        if b >= t2.order() {
            return Err(GrtError::IndexOutOfRange {
                index: b,
                order: t2.order(),
            });
        }
        if used1[a] {
            return Err(GrtError::DuplicateIndex(a));
        }
        if used2[b] {
            return Err(GrtError::DuplicateIndex(b));
        }
        if t1.dims[a] != t2.dims[b] {
            return Err(GrtError::DimensionMismatch {
                index: a,
                expected: t1.dims[a],
                found: t2.dims[b],
            });
        }
        used1[a] = true;
        used2[b] = true;
    }
    let rem1: Vec<usize> = (0..t1.order()).filter(|&i| !used1[i]).collect();
    let rem2: Vec<usize> = (0..t2.order()).filter(|&i| !used2[i]).collect();
    let perm1: Vec<usize> = rem1.iter().copied().chain(pairs.iter().map(|p| p.0)).collect();
    let perm2: Vec<usize> = pairs.iter().map(|p| p.1).chain(rem2.iter().copied()).collect();
    let a = t1.permute(&perm1)?;
    let b = t2.permute(&perm2)?;
    let r1: usize = rem1.iter().map(|&i| t1.dims[i]).product();
    let r2: usize = rem2.iter().map(|&i| t2.dims[i]).product();
    let k: usize = pairs.iter().map(|p| t1.dims[p.0]).product();
    let ma = DMatrix::from_row_slice(r1, k, &a.coeffs);
    let mb = DMatrix::from_row_slice(k, r2, &b.coeffs);
    let prod = ma * mb;
    let mut coeffs = Vec::with_capacity(r1 * r2);
    for i in 0..r1 {
        for j in 0..r2 {
            coeffs.push(prod[(i, j)]);
        }
    }
    let dims = rem1
        .iter()
        .map(|&i| t1.dims[i])
        .chain(rem2.iter().map(|&i| t2.dims[i]))
        .collect();
    DenseTensor::new(dims, coeffs)
}

/// Outcome of an identity-proportionality test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub proportional: bool,
    pub constant: f64,
    /// `max |M - c I| / c`.
    pub deviation: f64,
}

pub fn proportional_to_identity(m: &DMatrix<C64>, tol: f64) -> Result<IdentityCheck> {
    if m.nrows() != m.ncols() {
        return Err(GrtError::DimensionMismatch {
            index: 1,
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let d = m.nrows();
    let constant = m.trace().re / d as f64;
    if constant == 0.0 || !constant.is_finite() {
        return Err(GrtError::DegenerateTensor);
    }
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { constant } else { 0.0 };
            dev = dev.max((m[(i, j)] - target).norm());
        }
    }
    let deviation = dev / constant.abs();
    Ok(IdentityCheck {
        proportional: deviation <= tol,
        constant,
        deviation,
    })
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

pub(crate) fn increment(idx: &mut [usize], dims: &[usize]) {
    for k in (0..dims.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return;
        }
        idx[k] = 0;
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(GrtError::DimensionMismatch {
            index: 0,
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(GrtError::IndexOutOfRange { index: p, order: n });
        }
        if seen[p] {
            return Err(GrtError::DuplicateIndex(p));
        }
        seen[p] = true;
    }
    Ok(())
}
