//! Random instances for property checks: ℓ_p graphs, codes, binary-spectra
//! forms and ℵ members.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::anf::Anf;
use crate::apf::{Apf, BipartiteSplit};
use crate::gf2::{low_mask, LinearCode};

/// Random bipartite graph state on `n ≥ 2` qubits with no isolated vertex.
pub fn random_lp<R: Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Apf {
    assert!(n >= 2, "an ℓ_p state needs two qubits");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cut = rng.gen_range(1..n);
    let (left, right) = order.split_at(cut);
    let mut edges = Vec::new();
    for &a in left {
        for &b in right {
            if rng.gen_bool(edge_prob) {
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    let mut deg = vec![0usize; n];
    for &(a, b) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    for v in 0..n {
        if deg[v] == 0 {
            let other = if left.contains(&v) { right } else { left };
            let u = *other.choose(rng).expect("both sides nonempty");
            edges.push((v.min(u), v.max(u)));
            deg[v] += 1;
            deg[u] += 1;
        }
    }
    Apf::from_edges(n, &edges).expect("edges are in range")
}

/// Random `[n, k]` code with independent generator rows.
pub fn random_code<R: Rng>(n: usize, k: usize, rng: &mut R) -> LinearCode {
    assert!(k <= n && n <= 64);
    loop {
        let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & low_mask(n)).collect();
        if let Ok(c) = LinearCode::new(n, rows) {
            return c;
        }
    }
}

fn random_quadratic<R: Rng>(n: usize, density: f64, rng: &mut R) -> Anf {
    let mut monos = Vec::new();
    for i in 0..n {
        if rng.gen_bool(density) {
            monos.push(1u64 << i);
        }
        for j in i + 1..n {
            if rng.gen_bool(density) {
                monos.push(1 << i | 1 << j);
            }
        }
    }
    if rng.gen_bool(0.5) {
        monos.push(0);
    }
    Anf::from_monomials(n, monos)
}

/// Affine magnitude factors that all equal 1 at a hidden point (so the
/// magnitude is not identically zero) and a phase of degree ≤ 2.
pub fn random_binary_spectra_apf<R: Rng>(n: usize, rng: &mut R) -> Apf {
    let point = rng.gen::<u64>() & low_mask(n);
    let count = rng.gen_range(0..=n / 2 + 1);
    let factors = (0..count)
        .map(|_| {
            let mask = rng.gen_range(1..=low_mask(n));
            let constant = (mask & point).count_ones() % 2 == 0;
            Anf::affine(n, mask, constant)
        })
        .collect();
    Apf::new(n, factors, random_quadratic(n, 0.4, rng)).expect("factors are affine")
}

fn random_anf<R: Rng>(n: usize, max_degree: usize, terms: usize, rng: &mut R) -> Anf {
    let monos: Vec<u64> = (0..terms)
        .map(|_| {
            let d = rng.gen_range(0..=max_degree.min(n));
            let mut vars: Vec<usize> = (0..n).collect();
            vars.shuffle(rng);
            vars[..d].iter().fold(0u64, |m, &v| m | 1 << v)
        })
        .collect();
    Anf::from_monomials(n, monos)
}

/// Random form of low degree, nonzero on at least one input, together with
/// a qubit on which one of the closed-form Hadamard rules applies.
pub fn random_rewritable_apf<R: Rng>(n: usize, rng: &mut R) -> (Apf, usize) {
    loop {
        let count = rng.gen_range(0..=3);
        let factors: Vec<Anf> = (0..count).map(|_| random_anf(n, 2, 3, rng)).collect();
        let phase = random_anf(n, 3, n + 2, rng);
        let Ok(a) = Apf::new(n, factors, phase) else {
            continue;
        };
        if a.factors().iter().any(Anf::is_zero) {
            continue;
        }
        let nonzero = (0..1u64 << n).any(|x| a.factors().iter().all(|h| h.eval(x)));
        if !nonzero {
            continue;
        }
        let i = rng.gen_range(0..n);
        if a.apply_h_with_rule(i).is_ok() {
            return (a, i);
        }
    }
}

/// Random cubic ℵ member for `split`: every monomial has exactly one
/// variable in `T_C` and every qubit occurs.
pub fn random_aleph<R: Rng>(split: &BipartiteSplit, rng: &mut R) -> Apf {
    let n = split.n;
    let c: Vec<usize> = (0..n).filter(|v| split.t_c >> v & 1 == 1).collect();
    let p: Vec<usize> = (0..n).filter(|v| split.t_cperp >> v & 1 == 1).collect();
    assert!(!c.is_empty() && !p.is_empty());
    loop {
        let mut monos = Vec::new();
        for &a in &c {
            for (i, &b) in p.iter().enumerate() {
                if rng.gen_bool(0.4) {
                    monos.push(1u64 << a | 1 << b);
                }
                for &b2 in &p[i + 1..] {
                    if rng.gen_bool(0.2) {
                        monos.push(1u64 << a | 1 << b | 1 << b2);
                    }
                }
            }
        }
        let phase = Anf::from_monomials(n, monos);
        let Ok(a) = Apf::phase_only(n, phase) else {
            continue;
        };
        if a.is_aleph(split) {
            return a;
        }
    }
}
