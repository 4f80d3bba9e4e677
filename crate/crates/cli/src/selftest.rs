//! Seeded randomized cross-checks between independent code paths.

use entangle_core::entanglement::{par_l_exact_lp, weight_hierarchy_spectral};
use entangle_core::random::{random_code, random_lp, random_rewritable_apf};
use entangle_core::transforms::{apply_gate, hi_multispectra, Gate2x2};
use entangle_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::input::Failure;

fn mismatch(what: &str, detail: String) -> Failure {
    Error::CrossCheck(format!("{what}: {detail}")).into()
}

/// Runs every check `rounds` times and returns one summary line per check.
pub fn run(seed: u64, rounds: usize) -> Result<Vec<String>, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();

    for _ in 0..rounds {
        let n = rng.gen_range(1..=6);
        let (a, q) = random_rewritable_apf(n, &mut rng);
        let sym = a.apply_h_symbolic(q)?.expand()?;
        let num = apply_gate(&a.expand()?, q, Gate2x2::H)?;
        if !sym.proportional_to(&num) {
            return Err(mismatch("symbolic Hadamard", format!("{a} on qubit {q}")));
        }
    }
    lines.push(format!(
        "symbolic vs numeric Hadamard: {rounds} forms agree"
    ));

    for _ in 0..rounds {
        let n = rng.gen_range(2..=8);
        let a = random_lp(n, 0.45, &mut rng);
        let split = a.is_lp().expect("generator returns bipartite forms");
        let table = hi_multispectra(&a.expand()?)?;
        for m in 0..1u64 << n {
            let fast = a.fast_par_by_rank(&split, m & split.t_cperp, m & split.t_c)?;
            if fast != table.get(m) {
                return Err(mismatch("rank formula", format!("{a} at subset {m}")));
            }
        }
        if par_l_exact_lp(&a)?.par_l != table.max().1 {
            return Err(mismatch("exact PAR_l", a.to_string()));
        }
    }
    lines.push(format!(
        "rank formula vs Gray-code multispectra: {rounds} states agree"
    ));

    for _ in 0..rounds {
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(0..=n.min(4));
        let code = random_code(n, k, &mut rng);
        if weight_hierarchy_spectral(&code)? != code.weight_hierarchy_oracle()? {
            return Err(mismatch("weight hierarchy", format!("{code:?}")));
        }
    }
    lines.push(format!(
        "spectral vs GF(2) weight hierarchy: {rounds} codes agree"
    ));
    Ok(lines)
}
