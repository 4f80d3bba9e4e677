use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::apf::{fast_par_with, Apf};
use crate::error::{Error, Result};
use crate::gf2::low_mask;
use crate::real::Real;
use crate::state::StateVector;
use crate::transforms::hi_string;

/// Largest qubit count for [`par_l_optimize`].
pub const MAX_OPTIMIZE_QUBITS: usize = 6;
/// Largest qubit count for [`par_l_exact_lp`].
pub const MAX_EXACT_LP_QUBITS: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParlMethod {
    Optimizer,
    MultispectraExact,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Hadamards on the masked qubits, relative to the input.
    HiSubset { mask: u64, gates: String },
    /// Per-qubit row vectors `(cos θ, sin θ e^{iw})` as `[θ, w]`.
    Angles(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParlResult {
    pub par_l: Real,
    pub le: Real,
    pub method: ParlMethod,
    pub witness: Witness,
}

fn le_of(n: usize, par_l: &Real) -> Real {
    match par_l.exact_log2() {
        Some(e) => Real::int(n as i128 - e as i128),
        None => Real::Float(n as f64 - par_l.to_f64().log2()),
    }
}

/// Settings for [`par_l_optimize`].
#[derive(Clone, Debug)]
pub struct ParlConfig {
    /// Points per axis of the per-qubit `(θ, w)` seeding grid.
    pub grid: usize,
    /// Number of grid seeds drawn per run, in addition to the Pauli seeds.
    pub random_seeds: usize,
    /// Pauli-eigenstate products are all tried when there are at most this many.
    pub max_pauli_seeds: usize,
    pub seed: u64,
    /// Stop refining once a sweep gains less than this (relative).
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ParlConfig {
    fn default() -> Self {
        ParlConfig {
            grid: 16,
            random_seeds: 512,
            max_pauli_seeds: 50_000,
            seed: 0,
            tol: 1e-13,
            max_sweeps: 500,
        }
    }
}

const PAULI_ANGLES: [(f64, f64); 6] = [
    (0.0, 0.0),
    (FRAC_PI_2, 0.0),
    (FRAC_PI_4, 0.0),
    (FRAC_PI_4, PI),
    (FRAC_PI_4, FRAC_PI_2),
    (FRAC_PI_4, -FRAC_PI_2),
];

fn row(theta: f64, w: f64) -> [Complex64; 2] {
    [
        Complex64::new(theta.cos(), 0.0),
        Complex64::from_polar(theta.sin(), w),
    ]
}

/// `Σ_x ∏_j u_j[x_j] s_x` split by the value of bit `j`.
fn partial(s: &[Complex64], rows: &[[Complex64; 2]], j: usize) -> [Complex64; 2] {
    let n = rows.len();
    let mut weight = vec![Complex64::new(1.0, 0.0); 1];
    for (q, r) in rows.iter().enumerate() {
        let mut next = Vec::with_capacity(weight.len() * 2);
        next.extend_from_slice(&weight);
        next.extend_from_slice(&weight);
        if q != j {
            let half = weight.len();
            for w in &mut next[..half] {
                *w *= r[0];
            }
            for w in &mut next[half..] {
                *w *= r[1];
            }
        }
        weight = next;
    }
    let bit = 1usize << j;
    let mut v = [Complex64::new(0.0, 0.0); 2];
    for x in 0..1usize << n {
        v[usize::from(x & bit != 0)] += weight[x] * s[x];
    }
    v
}

/// Coordinate ascent on `|⟨u, s⟩|²`; each coordinate has the closed-form
/// optimum `u_j ∝ conj(v)`.
fn ascend(s: &[Complex64], angles: &mut [(f64, f64)], cfg: &ParlConfig) -> f64 {
    let n = angles.len();
    let mut rows: Vec<_> = angles.iter().map(|&(t, w)| row(t, w)).collect();
    let mut value = 0.0;
    for _ in 0..cfg.max_sweeps {
        let before = value;
        for j in 0..n {
            let v = partial(s, &rows, j);
            let (a0, a1) = (v[0].norm(), v[1].norm());
            let theta = a1.atan2(a0);
            let w = if a0 > 0.0 && a1 > 0.0 {
                v[0].arg() - v[1].arg()
            } else {
                0.0
            };
            angles[j] = (theta, w);
            rows[j] = row(theta, w);
            value = a0 * a0 + a1 * a1;
        }
        if value - before <= cfg.tol * value.max(1e-300) {
            break;
        }
    }
    value
}

/// Numerical lower bound on PAR_l: Pauli-eigenstate products and random
/// grid points as seeds, each refined by coordinate ascent.
pub fn par_l_optimize(s: &StateVector, cfg: &ParlConfig) -> Result<ParlResult> {
    let n = s.n();
    Error::guard("qubit count", n, MAX_OPTIMIZE_QUBITS)?;
    if cfg.grid < 2 {
        return Err(Error::Precondition(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    let amps = s.normalized();
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ZeroVector);
    }

    let mut seeds: Vec<Vec<(f64, f64)>> = Vec::new();
    let pauli_count = 6usize.pow(n as u32);
    if pauli_count <= cfg.max_pauli_seeds {
        for mut code in 0..pauli_count {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(PAULI_ANGLES[code % 6]);
                code /= 6;
            }
            seeds.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = cfg.grid;
    for _ in 0..cfg.random_seeds {
        seeds.push(
            (0..n)
                .map(|_| {
                    let a = rng.gen_range(0..g) as f64;
                    let b = rng.gen_range(0..g) as f64;
                    (a * FRAC_PI_2 / (g - 1) as f64, b * 2.0 * PI / g as f64)
                })
                .collect(),
        );
    }

    let (value, angles) = seeds
        .into_par_iter()
        .enumerate()
        .map(|(i, mut a)| {
            let v = ascend(&amps, &mut a, cfg);
            (v, i, a)
        })
        .reduce_with(|x, y| {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                y
            } else {
                x
            }
        })
        .map(|(v, _, a)| (v, a))
        .expect("at least one seed");

    let par_l = Real::Float(value * (1u64 << n) as f64);
    Ok(ParlResult {
        le: le_of(n, &par_l),
        par_l,
        method: ParlMethod::Optimizer,
        witness: Witness::Angles(angles.into_iter().map(|(t, w)| [t, w]).collect()),
    })
}

/// Exact PAR_l of an ℓ_p state: the maximum of its HI multispectra, found
/// with the rank formula. Ties go to the smallest subset mask.
pub fn par_l_exact_lp(a: &Apf) -> Result<ParlResult> {
    let n = a.n();
    Error::guard("qubit count", n, MAX_EXACT_LP_QUBITS)?;
    let split = a
        .is_lp()
        .ok_or_else(|| Error::NotBipartiteQuadratic(a.to_string()))?;
    let cm = a.connection_matrix(&split)?;
    let (mask, par_l) = (0..1u64 << n)
        .into_par_iter()
        .map(|m| {
            let v = fast_par_with(&cm, &split, m & split.t_cperp, m & split.t_c)
                .expect("subsets lie on their sides");
            (m, v)
        })
        .reduce_with(|x, y| {
            if y.1 > x.1 || (y.1 == x.1 && y.0 < x.0) {
                y
            } else {
                x
            }
        })
        .expect("nonempty");
    debug_assert!(mask <= low_mask(n));
    Ok(ParlResult {
        le: le_of(n, &par_l),
        par_l,
        method: ParlMethod::MultispectraExact,
        witness: Witness::HiSubset {
            mask,
            gates: hi_string(mask, n),
        },
    })
}

impl ParlResult {
    /// Subset mask of an exact witness.
    pub fn witness_mask(&self) -> Option<u64> {
        match self.witness {
            Witness::HiSubset { mask, .. } => Some(mask),
            Witness::Angles(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::hi_multispectra;

    fn line(n: usize) -> Apf {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Apf::from_edges(n, &edges).unwrap()
    }

    fn quick() -> ParlConfig {
        ParlConfig {
            random_seeds: 32,
            ..ParlConfig::default()
        }
    }

    #[test]
    fn product_state_is_maximal() {
        for n in 1..5 {
            let s = StateVector::basis(n, 0).unwrap();
            let r = par_l_optimize(&s, &quick()).unwrap();
            assert!((r.par_l.to_f64() - (1u64 << n) as f64).abs() < 1e-9);
            assert!(r.le.to_f64().abs() < 1e-9);
        }
    }

    #[test]
    fn line_graph_four() {
        let a = line(4);
        let r = par_l_optimize(&a.expand().unwrap(), &quick()).unwrap();
        assert!((r.par_l.to_f64() - 4.0).abs() < 1e-6, "{:?}", r.par_l);
        let e = par_l_exact_lp(&a).unwrap();
        assert_eq!(e.par_l, Real::int(4));
        assert_eq!(e.le, Real::int(2));
    }

    #[test]
    fn exact_lp_examples() {
        let a = Apf::parse("x3*x0+x0*x2+x2*x1+x1*x4+x4*x0", Some(5)).unwrap();
        let r = par_l_exact_lp(&a).unwrap();
        assert_eq!(r.par_l, Real::int(8));
        // The maximum sits on the C side, qubits {2,3,4}.
        assert_eq!(r.witness_mask(), Some(0b11100));
        let a = Apf::parse(
            "x0*x1+x0*x3+x0*x5+x1*x2+x1*x4+x2*x3+x2*x5+x3*x4+x4*x5",
            Some(6),
        )
        .unwrap();
        let r = par_l_exact_lp(&a).unwrap();
        assert_eq!(r.par_l, Real::int(16));
        assert_eq!(r.witness_mask(), Some(0b111111));
        let table = hi_multispectra(&a.expand().unwrap()).unwrap();
        assert_eq!(table.max().1, r.par_l);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let s = line(3).expand().unwrap();
        let a = par_l_optimize(&s, &quick()).unwrap();
        let b = par_l_optimize(&s, &quick()).unwrap();
        assert_eq!(a, b);
    }
}
