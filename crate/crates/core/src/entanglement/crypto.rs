use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{Rational, Real};
use crate::state::StateVector;
use crate::transforms::wht;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CryptoProfile {
    pub nonlinear_order: Real,
    pub ci_order: usize,
    /// Bounds on `log2 PAR_l`.
    pub parl_log2_bounds: [Real; 2],
    /// `[n − N, n − N/2]`, without the correlation-immunity refinement.
    pub parl_log2_bounds_plain: [Real; 2],
}

fn require_bipolar(s: &StateVector) -> Result<()> {
    let ok = s
        .integer_amps()
        .map(|v| {
            let m = v[0].abs();
            m != 0 && v.iter().all(|x| x.abs() == m)
        })
        .unwrap_or(false);
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition("expected a ±1 vector".into()))
    }
}

/// `N = n − log2 PAR(wht(s))`; exact when the spectral peak is a power of two.
pub fn nonlinear_order(s: &StateVector) -> Result<Real> {
    require_bipolar(s)?;
    let par = wht(s).par()?;
    Ok(match par.exact_log2() {
        Some(e) => Real::int(s.n() as i128 - e as i128),
        None => Real::Float(s.n() as f64 - par.log2()),
    })
}

/// Largest `t` with the Walsh spectrum zero at every index of weight `1..=t`.
pub fn correlation_immunity(s: &StateVector) -> Result<usize> {
    require_bipolar(s)?;
    let min_weight = wht(s)
        .support()
        .into_iter()
        .map(|i| i.count_ones() as usize)
        .filter(|&w| w > 0)
        .min();
    Ok(match min_weight {
        Some(w) => w - 1,
        None => s.n(),
    })
}

fn half(r: &Real) -> Real {
    match r {
        Real::Exact(v) => Real::Exact(v / Rational::from_integer(2)),
        Real::Float(v) => Real::Float(v / 2.0),
    }
}

fn sub(a: &Real, b: &Real) -> Real {
    match (a, b) {
        (Real::Exact(x), Real::Exact(y)) => Real::Exact(x - y),
        _ => Real::Float(a.to_f64() - b.to_f64()),
    }
}

/// `[n − N, n − N/2]` on `log2 PAR_l`.
pub fn parl_bounds_plain(s: &StateVector) -> Result<[Real; 2]> {
    let nn = nonlinear_order(s)?;
    let n = Real::int(s.n() as i128);
    Ok([sub(&n, &nn), sub(&n, &half(&nn))])
}

/// Bounds on `log2 PAR_l` with the correlation-immunity refinement: the
/// upper bound is `max(n − t − 1 − N/2, n − N)` when `t + 1 ≤ n − N`, and
/// `n − N/2` otherwise.
///
/// The refined upper bound does not hold for every bipartite state: the
/// 3-qubit star (`N = 2`, `t = 0`) and the 6-cycle (`N = 4`, `t = 1`) both
/// have `log2 PAR_l` one above it. [`parl_bounds_plain`] has no such cases.
pub fn parl_bounds(s: &StateVector) -> Result<[Real; 2]> {
    let [lower, plain] = parl_bounds_plain(s)?;
    let nn = nonlinear_order(s)?;
    let t = correlation_immunity(s)?;
    let n = Real::int(s.n() as i128);
    let upper = if Real::int(t as i128 + 1) <= lower {
        let ci = sub(&sub(&n, &Real::int(t as i128 + 1)), &half(&nn));
        if ci > lower {
            ci
        } else {
            lower
        }
    } else {
        plain
    };
    Ok([lower, upper])
}

pub fn crypto_profile(s: &StateVector) -> Result<CryptoProfile> {
    Ok(CryptoProfile {
        nonlinear_order: nonlinear_order(s)?,
        ci_order: correlation_immunity(s)?,
        parl_log2_bounds: parl_bounds(s)?,
        parl_log2_bounds_plain: parl_bounds_plain(s)?,
    })
}
