//! Linear entanglement (PAR_l / LE), the spectral weight hierarchy,
//! measurement trajectories and the cryptographic measures.

mod crypto;
mod parl;
mod se;

pub use crypto::{
    correlation_immunity, crypto_profile, nonlinear_order, parl_bounds, parl_bounds_plain,
    CryptoProfile,
};
pub use parl::{
    par_l_exact_lp, par_l_optimize, ParlConfig, ParlMethod, ParlResult, Witness,
    MAX_EXACT_LP_QUBITS, MAX_OPTIMIZE_QUBITS,
};
pub use se::{
    chain_beta, graph_beta, pattern_orders, se_search, state_order, MeasurementTrajectory,
    SeResult, StepAction, TrajectoryStep, MAX_SE_QUBITS,
};

use crate::apf::Apf;
use crate::error::{Error, Result};
use crate::gf2::{LinearCode, WeightHierarchy};
use crate::real::Real;
use crate::state::StateVector;
use crate::transforms::{hi_multispectra, MAX_MULTISPECTRA_QUBITS};

/// Upper bound on the number of destructive measurements needed:
/// `min(k, n − k)`.
pub fn schmidt_bound(code: &LinearCode) -> usize {
    code.k().min(code.n() - code.k())
}

/// `m_Q = (|Q| + log2 μ − n + k) / 2`, the dimension of the subcode
/// supported on `Q`, from the PAR `μ` of the code indicator after `H` on `Q`.
pub fn subcode_dimension(q_size: usize, mu: &Real, n: usize, k: usize) -> Result<usize> {
    let e = mu.exact_log2().ok_or_else(|| {
        Error::Precondition(format!(
            "PAR {mu} is not an exact power of two; input is not an indicator"
        ))
    })?;
    let twice = q_size as i64 + e - n as i64 + k as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Precondition(format!(
            "m_Q = {twice}/2 is not a nonnegative integer; input is not an indicator"
        )));
    }
    Ok((twice / 2) as usize)
}

/// Weight hierarchy read off the HI multispectra of the code indicator,
/// with the smallest subset attaining each `d_j`.
pub fn weight_hierarchy_spectral_with_witnesses(
    code: &LinearCode,
) -> Result<(WeightHierarchy, Vec<u64>)> {
    Error::guard("code length", code.n(), MAX_MULTISPECTRA_QUBITS)?;
    let (n, k) = (code.n(), code.k());
    let table = hi_multispectra(&StateVector::indicator_from_code(code)?)?;
    let mut best: Vec<Option<(usize, u64)>> = vec![None; k + 1];
    for (mask, mu) in table.entries().iter().enumerate() {
        let size = (mask as u64).count_ones() as usize;
        let m = subcode_dimension(size, mu, n, k)?;
        if m > k {
            return Err(Error::CrossCheck(format!("m_Q = {m} exceeds k = {k}")));
        }
        let cand = (size, mask as u64);
        if best[m].is_none_or(|b| cand < b) {
            best[m] = Some(cand);
        }
    }
    let mut d = Vec::with_capacity(k + 1);
    let mut witnesses = Vec::with_capacity(k + 1);
    for (j, b) in best.into_iter().enumerate() {
        let (size, mask) =
            b.ok_or_else(|| Error::CrossCheck(format!("no subset with m_Q = {j}")))?;
        d.push(size);
        witnesses.push(mask);
    }
    Ok((WeightHierarchy::new(d)?, witnesses))
}

pub fn weight_hierarchy_spectral(code: &LinearCode) -> Result<WeightHierarchy> {
    Ok(weight_hierarchy_spectral_with_witnesses(code)?.0)
}

/// `LE = n − log2 PAR_l` for an ℓ_p state, checked against `min(k, n − k)`.
pub fn min_disentangling_measurements(a: &Apf) -> Result<usize> {
    let split = a
        .is_lp()
        .ok_or_else(|| Error::NotBipartiteQuadratic(a.to_string()))?;
    let r = par_l_exact_lp(a)?;
    let e = r
        .par_l
        .exact_log2()
        .ok_or_else(|| Error::CrossCheck(format!("PAR_l {} is not a power of two", r.par_l)))?;
    let le = a.n() as i64 - e;
    let bound = split.t_c.count_ones().min(split.t_cperp.count_ones()) as i64;
    if le < 0 || le > bound {
        return Err(Error::CrossCheck(format!("LE = {le} outside [0, {bound}]")));
    }
    Ok(le as usize)
}
