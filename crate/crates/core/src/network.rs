//! Contraction of small labeled tensor networks.
//!
//! Every leg carries an integer label. A label that occurs on two legs is
//! summed over; a label that occurs once is open and must be listed in the
//! requested output order. Pairs are contracted greedily, always choosing
//! the pair whose result has the fewest entries.

use std::collections::HashMap;

use crate::error::{GrtError, Result};
use crate::tensor::{contract, DenseTensor};

pub type Label = usize;

#[derive(Clone, Debug)]
pub struct LabeledTensor {
    pub tensor: DenseTensor,
    pub labels: Vec<Label>,
}

impl LabeledTensor {
    pub fn new(tensor: DenseTensor, labels: Vec<Label>) -> Result<Self> {
        if tensor.order() != labels.len() {
            return Err(GrtError::DimensionMismatch {
                index: 0,
                expected: tensor.order(),
                found: labels.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(GrtError::Wiring(format!("label {l} repeated on one tensor")));
            }
        }
        Ok(Self { tensor, labels })
    }
}

/// Allocates fresh labels for keyed wires.
#[derive(Debug)]
pub struct LabelPool<K> {
    map: HashMap<K, Label>,
}

impl<K: std::hash::Hash + Eq> Default for LabelPool<K> {
    fn default() -> Self {
        Self { map: HashMap::new() }
    }
}

impl<K: std::hash::Hash + Eq> LabelPool<K> {
    pub fn get(&mut self, key: K) -> Label {
        let next = self.map.len();
        *self.map.entry(key).or_insert(next)
    }
}

fn pair_contract(a: &LabeledTensor, b: &LabeledTensor) -> Result<LabeledTensor> {
    let mut pairs = Vec::new();
    for (i, l) in a.labels.iter().enumerate() {
        if let Some(j) = b.labels.iter().position(|m| m == l) {
            pairs.push((i, j));
        }
    }
    let tensor = contract(&a.tensor, &b.tensor, &pairs)?;
    let labels = a
        .labels
        .iter()
        .enumerate()
        .filter(|(i, _)| !pairs.iter().any(|p| p.0 == *i))
        .map(|(_, &l)| l)
        .chain(
            b.labels
                .iter()
                .enumerate()
                .filter(|(j, _)| !pairs.iter().any(|p| p.1 == *j))
                .map(|(_, &l)| l),
        )
        .collect();
    Ok(LabeledTensor { tensor, labels })
}

fn result_size(a: &LabeledTensor, b: &LabeledTensor) -> (bool, usize) {
    let mut size = 1usize;
    let mut shared = false;
    for (i, l) in a.labels.iter().enumerate() {
        if b.labels.contains(l) {
            shared = true;
        } else {
            size = size.saturating_mul(a.tensor.dims()[i]);
        }
    }
    for (j, l) in b.labels.iter().enumerate() {
        if !a.labels.contains(l) {
            size = size.saturating_mul(b.tensor.dims()[j]);
        }
    }
    (shared, size)
}

/// Contracts the whole network and returns the open legs in `output` order.
pub fn contract_network(items: Vec<LabeledTensor>, output: &[Label]) -> Result<DenseTensor> {
    let mut counts: HashMap<Label, usize> = HashMap::new();
    for t in &items {
        for &l in &t.labels {
            *counts.entry(l).or_default() += 1;
        }
    }
    for (&l, &c) in &counts {
        if c > 2 {
            return Err(GrtError::Wiring(format!("label {l} occurs {c} times")));
        }
        if c == 1 && !output.contains(&l) {
            return Err(GrtError::Wiring(format!("open label {l} missing from output")));
        }
    }
    for &l in output {
        if counts.get(&l) != Some(&1) {
            return Err(GrtError::Wiring(format!("output label {l} is not a single open leg")));
        }
    }
    if items.is_empty() {
        return Err(GrtError::Wiring("empty network".into()));
    }

    let mut live = items;
    while live.len() > 1 {
        let mut best: Option<(bool, usize, usize, usize)> = None;
        for i in 0..live.len() {
            for j in i + 1..live.len() {
                let (shared, size) = result_size(&live[i], &live[j]);
                let better = match best {
                    None => true,
                    Some((bs, bsize, _, _)) => (shared && !bs) || (shared == bs && size < bsize),
                };
                if better {
                    best = Some((shared, size, i, j));
                }
            }
        }
        let (_, _, i, j) = best.expect("at least two tensors");
        let b = live.swap_remove(j);
        let a = live.swap_remove(i);
        live.push(pair_contract(&a, &b)?);
    }
    let last = live.pop().expect("one tensor left");
    let perm: Vec<usize> = output
        .iter()
        .map(|l| last.labels.iter().position(|m| m == l).expect("checked above"))
        .collect();
    last.tensor.permute(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::C64;

    #[test]
    fn matrix_chain() {
        let m = |s: f64| DenseTensor::from_fn(vec![2, 2], |i| C64::new(s * (i[0] + 2 * i[1]) as f64 + 1.0, 0.0));
        let (a, b, c) = (m(1.0), m(2.0), m(3.0));
        let net = vec![
            LabeledTensor::new(a.clone(), vec![0, 1]).unwrap(),
            LabeledTensor::new(b.clone(), vec![1, 2]).unwrap(),
            LabeledTensor::new(c.clone(), vec![2, 3]).unwrap(),
        ];
        let r = contract_network(net, &[0, 3]).unwrap();
        let ab = contract(&a, &b, &[(1, 0)]).unwrap();
        let abc = contract(&ab, &c, &[(1, 0)]).unwrap();
        assert!(r.max_abs_diff(&abc) < 1e-13);
    }

    #[test]
    fn rejects_triple_labels() {
        let t = DenseTensor::qubits(1);
        let net = vec![
            LabeledTensor::new(t.clone(), vec![0]).unwrap(),
            LabeledTensor::new(t.clone(), vec![0]).unwrap(),
            LabeledTensor::new(t, vec![0]).unwrap(),
        ];
        assert!(contract_network(net, &[]).is_err());
    }

    #[test]
    fn output_order_respected() {
        let t = DenseTensor::from_fn(vec![2, 3], |i| C64::new((i[0] * 3 + i[1]) as f64, 0.0));
        let r = contract_network(vec![LabeledTensor::new(t.clone(), vec![5, 7]).unwrap()], &[7, 5]).unwrap();
        assert_eq!(r, t.permute(&[1, 0]).unwrap());
    }
}
