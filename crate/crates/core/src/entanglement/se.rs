use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::apf::Apf;
use crate::error::{Error, Result};
use crate::gf2::{low_mask, LinearCode};
use crate::graph::Graph;
use crate::real::Real;
use crate::state::{StateVector, MAX_FACTORIZE_QUBITS};
use crate::transforms::apply_hadamards;

use super::{par_l_exact_lp, subcode_dimension};

/// Largest qubit count for [`se_search`].
pub const MAX_SE_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepAction {
    Start,
    Measure,
    Free,
}

/// One row of a trajectory table. Qubit labels refer to the original state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryStep {
    /// Qubits still carrying `H`.
    pub q: Vec<usize>,
    /// `H` on `Q`, `I` on fixed qubits, `-` on measured ones.
    pub gates: String,
    pub action: StepAction,
    pub qubit: Option<usize>,
    pub outcome: Option<u8>,
    pub par_after: Real,
    pub m_q: usize,
    pub codewords: usize,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementTrajectory {
    pub n: usize,
    pub steps: Vec<TrajectoryStep>,
    /// Entanglement orders along the chain, `beta[j]` with `j`
    /// measurements still to go.
    pub beta: Vec<usize>,
}

/// Result of [`se_search`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeResult {
    /// `β_0 ..= β_{k′}`, smallest orders along minimal disentangling Z/X
    /// measurement patterns.
    pub beta: Vec<usize>,
    pub k_prime: usize,
    /// For each `β_j`, a pattern attaining it: `Z`, `X` or `-` per qubit.
    pub patterns: Vec<String>,
    /// Most-destructive chain of computational-basis measurements on the
    /// maximum-PAR form of the state.
    pub trajectory: MeasurementTrajectory,
}

/// Row-reduced basis with distinct leading bits, in descending order.
fn echelon(mut rows: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    rows.sort_unstable_by(|a, b| b.cmp(a));
    for mut r in rows {
        for &b in &out {
            let hb = 1usize << (usize::BITS - 1 - b.leading_zeros());
            if r & hb != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            out.push(r);
            out.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    out
}

/// Entanglement order of a state. Flat real states on an affine subspace
/// with an affine sign pattern are local-unitary images of a code
/// indicator, so their blocks come from the code; anything else goes
/// through the numeric factorizer.
pub fn state_order(s: &StateVector) -> Result<usize> {
    if let Some(v) = s.integer_amps() {
        let vals: Vec<(usize, i64)> = v
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, x)| x != 0)
            .collect();
        if vals.is_empty() {
            return Err(Error::ZeroVector);
        }
        let mag = vals[0].1.abs();
        if vals.iter().all(|&(_, x)| x.abs() == mag) {
            let x0 = vals[0].0;
            let diffs: Vec<usize> = vals.iter().map(|&(x, _)| x ^ x0).collect();
            let basis = echelon(diffs);
            if 1usize << basis.len() == vals.len() && signs_affine(&vals, &basis) {
                let rows: Vec<u64> = basis.iter().map(|&b| b as u64).collect();
                return Ok(LinearCode::new(s.n(), rows)?.entanglement_order());
            }
        }
    }
    s.entanglement_order()
}

/// Whether the sign pattern of a flat real vector is affine on its support.
/// `basis` spans the support differences, with distinct leading bits in
/// descending order.
fn signs_affine(vals: &[(usize, i64)], basis: &[usize]) -> bool {
    let (x0, v0) = vals[0];
    let lookup: HashMap<usize, bool> = vals
        .iter()
        .map(|&(x, v)| (x ^ x0, (v < 0) ^ (v0 < 0)))
        .collect();
    let basis_signs: Vec<bool> = basis
        .iter()
        .map(|b| lookup.get(b).copied().unwrap_or(false))
        .collect();
    lookup.iter().all(|(&d, &sign)| {
        let mut r = d;
        let mut pred = false;
        for (&b, &sb) in basis.iter().zip(&basis_signs) {
            let lead = 1usize << (usize::BITS - 1 - b.leading_zeros());
            if r & lead != 0 {
                r ^= b;
                pred ^= sb;
            }
        }
        r == 0 && pred == sign
    })
}

/// Trajectories are defined for flat states (code indicators up to signs):
/// equal nonzero magnitudes on the support.
fn require_flat(b: &StateVector) -> Result<()> {
    let flat = b.integer_amps().is_some_and(|v| {
        let support = b.support();
        support
            .first()
            .is_some_and(|&i| support.iter().all(|&j| v[j].abs() == v[i].abs()))
    });
    if flat {
        Ok(())
    } else {
        Err(Error::Precondition(
            "measurement frame is not flat (magnitudes differ on the support)".into(),
        ))
    }
}

struct Walker {
    n: usize,
    labels: Vec<usize>,
    state: StateVector,
    /// Original labels that still carry `H`.
    q: u64,
    measured: u64,
}

impl Walker {
    fn new(b: &StateVector) -> Self {
        let n = b.n();
        Walker {
            n,
            labels: (0..n).collect(),
            state: b.clone(),
            q: low_mask(n),
            measured: 0,
        }
    }

    fn local(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Original labels of qubits constant on the support.
    fn fixed(&self) -> u64 {
        let support = self.state.support();
        let (mut and, mut or) = (usize::MAX, 0usize);
        for &x in &support {
            and &= x;
            or |= x;
        }
        let constant = !(and ^ or);
        self.labels
            .iter()
            .enumerate()
            .filter(|(i, _)| constant >> i & 1 == 1)
            .fold(0u64, |acc, (_, &l)| acc | 1 << l)
    }

    fn local_q(&self) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| self.q >> l & 1 == 1)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    fn step(
        &self,
        action: StepAction,
        qubit: Option<usize>,
        outcome: Option<u8>,
    ) -> Result<TrajectoryStep> {
        let n_cur = self.state.n();
        let par_b = self.state.par()?;
        let e = par_b.exact_log2().ok_or_else(|| {
            Error::Precondition(format!(
                "PAR {par_b} is not a power of two; not an indicator form"
            ))
        })?;
        let k_cur = n_cur as i64 - e;
        if k_cur < 0 {
            return Err(Error::CrossCheck(format!("negative dimension {k_cur}")));
        }
        let mu = apply_hadamards(&self.state, self.local_q())?.par()?;
        let q_size = self.q.count_ones() as usize;
        let m_q = subcode_dimension(q_size, &mu, n_cur, k_cur as usize)?;
        let gates = (0..self.n)
            .map(|l| {
                if self.measured >> l & 1 == 1 {
                    '-'
                } else if self.q >> l & 1 == 1 {
                    'H'
                } else {
                    'I'
                }
            })
            .collect();
        Ok(TrajectoryStep {
            q: (0..self.n).filter(|l| self.q >> l & 1 == 1).collect(),
            gates,
            action,
            qubit,
            outcome,
            par_after: mu,
            m_q,
            codewords: self.state.support().len(),
            order: state_order(&self.state)?,
        })
    }

    /// Frees newly fixed qubits in ascending order, one step each.
    fn free_fixed(&mut self, steps: &mut Vec<TrajectoryStep>) -> Result<()> {
        let newly = self.fixed() & self.q;
        for l in 0..self.n {
            if newly >> l & 1 == 1 {
                self.q &= !(1u64 << l);
                steps.push(self.step(StepAction::Free, Some(l), None)?);
            }
        }
        Ok(())
    }

    fn measure(&mut self, label: usize, outcome: Option<u8>) -> Result<u8> {
        if label >= self.n {
            return Err(Error::QubitOutOfRange {
                qubit: label,
                n: self.n,
            });
        }
        if self.measured >> label & 1 == 1 {
            return Err(Error::Precondition(format!(
                "qubit {label} is already measured"
            )));
        }
        let local = self
            .local(label)
            .expect("unmeasured qubits keep a local index");
        if self.q >> label & 1 == 0 {
            return Err(Error::Precondition(format!(
                "qubit {label} is already fixed; measuring it is redundant"
            )));
        }
        let (state, o) = match outcome {
            Some(o) => (self.state.measure(local, o)?.0, o),
            None => match self.state.measure(local, 0) {
                Ok((s, _)) => (s, 0),
                Err(Error::ZeroProbability { .. }) => (self.state.measure(local, 1)?.0, 1),
                Err(e) => return Err(e),
            },
        };
        self.state = state;
        self.labels.remove(local);
        self.q &= !(1u64 << label);
        self.measured |= 1 << label;
        Ok(o)
    }
}

impl MeasurementTrajectory {
    /// Measures `order` in the computational basis of `b`, freeing fixed
    /// qubits after each measurement. Outcomes default to 0, or 1 when 0 is
    /// impossible.
    pub fn follow(b: &StateVector, order: &[usize], outcomes: Option<&[u8]>) -> Result<Self> {
        Error::guard("qubit count", b.n(), MAX_FACTORIZE_QUBITS)?;
        if let Some(o) = outcomes {
            if o.len() != order.len() {
                return Err(Error::Precondition(format!(
                    "{} outcomes for {} measurements",
                    o.len(),
                    order.len()
                )));
            }
        }
        require_flat(b)?;
        let mut w = Walker::new(b);
        let mut steps = vec![w.step(StepAction::Start, None, None)?];
        w.free_fixed(&mut steps)?;
        let mut orders = vec![steps[0].order];
        for (i, &q) in order.iter().enumerate() {
            let o = w.measure(q, outcomes.map(|o| o[i]))?;
            steps.push(w.step(StepAction::Measure, Some(q), Some(o))?);
            orders.push(steps.last().expect("just pushed").order);
            w.free_fixed(&mut steps)?;
        }
        orders.reverse();
        Ok(MeasurementTrajectory {
            n: b.n(),
            steps,
            beta: orders,
        })
    }

    /// Chain of destructive measurements whose sequence of residual orders
    /// is lexicographically smallest; ties go to the lowest qubit.
    pub fn most_destructive(b: &StateVector) -> Result<Self> {
        Error::guard("qubit count", b.n(), MAX_SE_QUBITS)?;
        require_flat(b)?;
        let mut memo: HashMap<u64, (Vec<usize>, Vec<usize>)> = HashMap::new();
        let (_, chain) = best_chain(b, 0, &mut memo)?;
        Self::follow(b, &chain, None)
    }

    pub fn par_column(&self) -> Vec<Real> {
        self.steps.iter().map(|s| s.par_after).collect()
    }

    pub fn m_q_column(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.m_q).collect()
    }
}

/// Residual after measuring every qubit of `measured` with outcome 0.
fn residual(b: &StateVector, measured: u64) -> Result<StateVector> {
    let mut s = b.clone();
    for q in (0..b.n()).rev() {
        if measured >> q & 1 == 1 {
            s = s.measure(q, 0)?.0;
        }
    }
    Ok(s)
}

/// Returns (orders after each further measurement, qubits to measure).
fn best_chain(
    b: &StateVector,
    measured: u64,
    memo: &mut HashMap<u64, (Vec<usize>, Vec<usize>)>,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if let Some(v) = memo.get(&measured) {
        return Ok(v.clone());
    }
    let cur = residual(b, measured)?;
    let labels: Vec<usize> = (0..b.n()).filter(|q| measured >> q & 1 == 0).collect();
    let support = cur.support();
    let (mut and, mut or) = (usize::MAX, 0usize);
    for &x in &support {
        and &= x;
        or |= x;
    }
    let varying = and ^ or;
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for (i, &l) in labels.iter().enumerate() {
        if varying >> i & 1 == 0 {
            continue;
        }
        let next = measured | 1 << l;
        let order = state_order(&residual(b, next)?)?;
        let (rest_orders, rest_chain) = best_chain(b, next, memo)?;
        let mut orders = vec![order];
        orders.extend(rest_orders);
        if best.as_ref().is_none_or(|(o, _)| orders < *o) {
            let mut chain = vec![l];
            chain.extend(rest_chain);
            best = Some((orders, chain));
        }
    }
    let out = best.unwrap_or_default();
    memo.insert(measured, out.clone());
    Ok(out)
}

fn decode(code: usize, n: usize) -> String {
    let mut c = code;
    (0..n)
        .map(|_| {
            let ch = ['-', 'Z', 'X'][c % 3];
            c /= 3;
            ch
        })
        .collect()
}

/// Entanglement order after every Z/X measurement pattern, indexed by the
/// base-3 code (digit `v` is 0 unmeasured, 1 Z, 2 X).
pub fn pattern_orders(adj: &[u64]) -> Result<Vec<usize>> {
    let n = adj.len();
    Error::guard("qubit count", n, MAX_SE_QUBITS)?;
    let base = Graph::from_adjacency(adj.to_vec());
    Ok((0..3usize.pow(n as u32))
        .into_par_iter()
        .map(|code| {
            let mut g = base.clone();
            let mut c = code;
            for v in 0..n {
                match c % 3 {
                    1 => g.measure_z(v),
                    2 => g.measure_x(v),
                    _ => {}
                }
                c /= 3;
            }
            g.entanglement_order()
        })
        .collect())
}

fn measured_count(code: usize, n: usize) -> usize {
    let mut c = code;
    (0..n)
        .filter(|_| {
            let d = c % 3;
            c /= 3;
            d != 0
        })
        .count()
}

/// Smallest order reachable with exactly `m` measurements, for every `m`,
/// with the first pattern (in base-3 order) attaining it.
pub fn graph_beta(adj: &[u64]) -> Result<Vec<(usize, String)>> {
    let n = adj.len();
    let orders = pattern_orders(adj)?;
    let mut best = vec![(usize::MAX, usize::MAX); n + 1];
    for (code, &o) in orders.iter().enumerate() {
        let m = measured_count(code, n);
        best[m] = best[m].min((o, code));
    }
    Ok(best.into_iter().map(|(o, c)| (o, decode(c, n))).collect())
}

/// `β_0 ..= β_{k′}` along minimal disentangling sets: `k′` is the fewest
/// Z/X measurements leaving no entanglement, and `β_j` is the smallest
/// order after `k′ − j` of the measurements of some such set.
pub fn chain_beta(adj: &[u64]) -> Result<(usize, Vec<(usize, String)>)> {
    let n = adj.len();
    let orders = pattern_orders(adj)?;
    let k_prime = (0..orders.len())
        .filter(|&c| orders[c] == 0)
        .map(|c| measured_count(c, n))
        .min()
        .expect("measuring every qubit leaves nothing entangled");
    let mut best = vec![(usize::MAX, usize::MAX); k_prime + 1];
    let mut digits = vec![0usize; n];
    for code in (0..orders.len()).filter(|&c| orders[c] == 0 && measured_count(c, n) == k_prime) {
        let mut c = code;
        for d in digits.iter_mut() {
            *d = c % 3;
            c /= 3;
        }
        let active: Vec<usize> = (0..n).filter(|&v| digits[v] != 0).collect();
        for keep in 0..1usize << active.len() {
            let mut sub = 0usize;
            for (i, &v) in active.iter().enumerate() {
                if keep >> i & 1 == 1 {
                    sub += digits[v] * 3usize.pow(v as u32);
                }
            }
            let j = k_prime - (keep.count_ones() as usize);
            best[j] = best[j].min((orders[sub], sub));
        }
    }
    Ok((
        k_prime,
        best.into_iter().map(|(o, c)| (o, decode(c, n))).collect(),
    ))
}

/// Stubbornness of entanglement of an ℓ_p state. The β list comes from an
/// exhaustive search over Z/X measurement patterns in the graph-state
/// picture; the trajectory is the most-destructive chain on the
/// maximum-PAR (code indicator) form.
pub fn se_search(a: &Apf) -> Result<SeResult> {
    let n = a.n();
    Error::guard("qubit count", n, MAX_SE_QUBITS)?;
    if a.is_lp().is_none() {
        return Err(Error::NotBipartiteQuadratic(a.to_string()));
    }
    let (k_prime, per_j) = chain_beta(&a.adjacency())?;
    let beta = per_j.iter().map(|p| p.0).collect();
    let patterns = per_j.into_iter().map(|p| p.1).collect();
    let witness = par_l_exact_lp(a)?
        .witness_mask()
        .expect("exact path returns a subset");
    let b = apply_hadamards(&a.expand()?, witness)?;
    let trajectory = MeasurementTrajectory::most_destructive(&b)?;
    Ok(SeResult {
        beta,
        k_prime,
        patterns,
        trajectory,
    })
}
