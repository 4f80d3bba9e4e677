//! Algebraic polar forms `s(x) = ∏_k h_k(x) · (−1)^{p(x)}`, the closed-form
//! Hadamard rewrite rules, bipartite quadratic (ℓ_p) states and their
//! reduction to linear-code indicators.

use std::fmt;

use crate::anf::Anf;
use crate::cyclotomic::ZOmega;
use crate::error::{Error, Result};
use crate::gf2::{low_mask, word_string, BinaryMatrix, LinearCode};
use crate::real::Real;
use crate::state::StateVector;
use crate::transforms::apply_hadamards;

/// Largest qubit count accepted by [`Apf::expand`].
pub const MAX_EXPAND_QUBITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Apf {
    n: usize,
    factors: Vec<Anf>,
    phase: Anf,
}

/// Partition of the qubits into the two colour classes of a bipartite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BipartiteSplit {
    pub n: usize,
    pub t_c: u64,
    pub t_cperp: u64,
}

/// Which colour class receives the Hadamards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    C,
    CPerp,
}

/// Which closed-form rule produced a rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteRule {
    /// `x_i` occurs in no magnitude factor.
    Free,
    /// Every factor containing `x_i` is linear in it.
    AllLinear,
    /// Some, but not all, factors containing `x_i` are linear in it.
    SomeLinear,
}

/// Rows indexed by `T_{C⊥}`, columns by `T_C`; entry 1 iff `x_r x_c ∈ p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMatrix {
    pub m: BinaryMatrix,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl BipartiteSplit {
    pub fn new(n: usize, t_cperp: u64) -> Result<Self> {
        let all = low_mask(n);
        if t_cperp & !all != 0 {
            return Err(Error::Precondition("split mentions qubits beyond n".into()));
        }
        Ok(BipartiteSplit {
            n,
            t_c: all & !t_cperp,
            t_cperp,
        })
    }

    pub fn swapped(&self) -> Self {
        BipartiteSplit {
            n: self.n,
            t_c: self.t_cperp,
            t_cperp: self.t_c,
        }
    }

    pub fn side(&self, side: Side) -> u64 {
        match side {
            Side::C => self.t_c,
            Side::CPerp => self.t_cperp,
        }
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl Apf {
    pub fn new(n: usize, factors: Vec<Anf>, phase: Anf) -> Result<Self> {
        let used = factors.iter().fold(phase.vars(), |acc, f| acc | f.vars());
        if used >> n != 0 {
            return Err(Error::Precondition(format!(
                "form uses variables beyond x{}",
                n.saturating_sub(1)
            )));
        }
        let factors = factors
            .into_iter()
            .filter(|f| !f.is_one())
            .map(|f| f.with_n(n))
            .collect();
        Ok(Apf {
            n,
            factors,
            phase: phase.with_n(n),
        })
    }

    /// `(−1)^{p(x)}` over `n` qubits.
    pub fn phase_only(n: usize, phase: Anf) -> Result<Self> {
        Self::new(n, Vec::new(), phase)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Anf] {
        &self.factors
    }

    pub fn phase(&self) -> &Anf {
        &self.phase
    }

    /// Parses `(h_1)(h_2)...(-1)^(p)`; each part is optional, and a bare
    /// polynomial is read as the phase. `n` defaults to one past the highest
    /// variable index.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut factors = Vec::new();
        let mut phase = Anf::zero(0);
        let bytes = text.as_bytes();
        let mut at = 0;
        let skip_ws = |at: &mut usize| {
            while *at < bytes.len() && (bytes[*at] as char).is_whitespace() {
                *at += 1;
            }
        };
        skip_ws(&mut at);
        if at < bytes.len() && bytes[at] != b'(' {
            phase = Anf::parse(text)?;
            at = bytes.len();
        }
        let mut seen_phase = false;
        while {
            skip_ws(&mut at);
            at < bytes.len()
        } {
            if bytes[at] != b'(' {
                return Err(Error::parse(at, "expected '('"));
            }
            if seen_phase {
                return Err(Error::parse(at, "the phase must come last"));
            }
            let close = find_close(bytes, at)?;
            let inner = &text[at + 1..close];
            if inner.trim() == "-1" {
                // (-1)^(p)
                let mut k = close + 1;
                skip_ws(&mut k);
                if k >= bytes.len() || bytes[k] != b'^' {
                    return Err(Error::parse(k, "expected '^' after (-1)"));
                }
                k += 1;
                skip_ws(&mut k);
                if k >= bytes.len() || bytes[k] != b'(' {
                    return Err(Error::parse(k, "expected '(' after '^'"));
                }
                let pclose = find_close(bytes, k)?;
                phase = Anf::parse(&text[k + 1..pclose]).map_err(|e| offset(e, k + 1))?;
                at = pclose + 1;
                seen_phase = true;
            } else {
                factors.push(Anf::parse(inner).map_err(|e| offset(e, at + 1))?);
                at = close + 1;
            }
        }
        let width = factors.iter().fold(phase.n(), |acc, f| acc.max(f.n()));
        let n = match n {
            Some(n) if n < width => {
                return Err(Error::Precondition(format!(
                    "form uses x{} but n = {n}",
                    width - 1
                )))
            }
            Some(n) => n,
            None => width,
        };
        Apf::new(n, factors, phase)
    }

    /// Evaluates at all `2^n` points.
    pub fn expand(&self) -> Result<StateVector> {
        Error::guard("qubit count", self.n, MAX_EXPAND_QUBITS)?;
        let mut magnitude = vec![1u8; 1 << self.n];
        for f in &self.factors {
            for (m, v) in magnitude.iter_mut().zip(f.truth_table(self.n)?) {
                *m &= v;
            }
        }
        let phase = self.phase.truth_table(self.n)?;
        let amps: Vec<ZOmega> = magnitude
            .iter()
            .zip(&phase)
            .map(|(&m, &p)| ZOmega::int(m as i64 * if p == 1 { -1 } else { 1 }))
            .collect();
        StateVector::exact(self.n, amps, 0)
    }

    /// Closed-form image under `H(qubit)`; `expand` of the result is
    /// proportional (with positive constant) to the numeric image.
    pub fn apply_h_symbolic(&self, qubit: usize) -> Result<Apf> {
        self.apply_h_with_rule(qubit).map(|(a, _)| a)
    }

    pub fn apply_h_with_rule(&self, i: usize) -> Result<(Apf, RewriteRule)> {
        if i >= self.n {
            return Err(Error::QubitOutOfRange {
                qubit: i,
                n: self.n,
            });
        }
        let n = self.n;
        let xi = Anf::var(n, i);
        let p0 = self.phase.restrict(i, false);
        let c = self.phase.derivative(i);
        let (v, r): (Vec<&Anf>, Vec<&Anf>) = self.factors.iter().partition(|f| f.contains_var(i));
        let mut factors: Vec<Anf> = r.into_iter().cloned().collect();

        if v.is_empty() {
            // sum over x_i forces x_i = c
            factors.push(c.add(&xi).complement());
            return Ok((Apf::new(n, factors, p0)?, RewriteRule::Free));
        }

        if v.iter().all(|f| f.is_linear_in(i)) {
            // factor z pins x_i = h_{0,z} + 1; the others must agree with it
            let h0: Vec<Anf> = v.iter().map(|f| f.restrict(i, false)).collect();
            let h1z = h0[0].complement();
            for h0k in &h0[1..] {
                factors.push(h0[0].add(h0k).complement());
            }
            let phase = p0.add(&h1z.mul(&c.add(&xi)));
            return Ok((Apf::new(n, factors, phase)?, RewriteRule::AllLinear));
        }

        if v.iter().any(|f| f.is_linear_in(i)) {
            // v_0 v_1 = 0, so at most one branch of the sum survives
            let prod = |value: bool| {
                v.iter()
                    .fold(Anf::one(n), |acc, f| acc.mul(&f.restrict(i, value)))
            };
            let (v0, v1) = (prod(false), prod(true));
            factors.push(v0.add(&v1));
            let phase = p0.add(&v1.mul(&c.add(&xi)));
            return Ok((Apf::new(n, factors, phase)?, RewriteRule::SomeLinear));
        }

        Err(Error::UnsupportedRewrite { qubit: i })
    }

    /// Bipartition of the quadratic graph when the form is in ℓ_p: phase
    /// only, every monomial quadratic, every qubit present, graph 2-colourable.
    /// The colour class holding the smallest vertex of each component is
    /// `T_{C⊥}`.
    pub fn is_lp(&self) -> Option<BipartiteSplit> {
        if !self.factors.is_empty() || self.n == 0 {
            return None;
        }
        if self.phase.monomials().any(|m| m.count_ones() != 2) {
            return None;
        }
        if self.phase.vars() != low_mask(self.n) {
            return None;
        }
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(true);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = colour[u].expect("coloured");
                for w in bits(adj[u]) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let t_cperp = colour
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Some(true))
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        BipartiteSplit::new(self.n, t_cperp).ok()
    }

    /// Neighbour masks of the quadratic terms of the phase.
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for m in self.phase.monomials().filter(|m| m.count_ones() == 2) {
            let a = m.trailing_zeros() as usize;
            let b = 63 - m.leading_zeros() as usize;
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    fn require_lp_split(&self, split: &BipartiteSplit) -> Result<()> {
        if self.is_lp().is_none() {
            return Err(Error::NotBipartiteQuadratic(self.to_string()));
        }
        if split.n != self.n
            || split.t_c & split.t_cperp != 0
            || split.t_c | split.t_cperp != low_mask(self.n)
        {
            return Err(Error::Precondition(
                "split does not partition the qubits".into(),
            ));
        }
        let adj = self.adjacency();
        for u in 0..self.n {
            let same = if split.t_c >> u & 1 == 1 {
                split.t_c
            } else {
                split.t_cperp
            };
            if adj[u] & same != 0 {
                return Err(Error::Precondition(format!(
                    "qubit {u} has a neighbour on its own side of the split"
                )));
            }
        }
        Ok(())
    }

    pub fn connection_matrix(&self, split: &BipartiteSplit) -> Result<ConnectionMatrix> {
        self.require_lp_split(split)?;
        let rows = bits(split.t_cperp);
        let cols = bits(split.t_c);
        let adj = self.adjacency();
        let m = BinaryMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            adj[rows[r]] >> cols[c] & 1 == 1
        });
        Ok(ConnectionMatrix { m, rows, cols })
    }

    /// PAR after `H` on `t_sub_perp ∪ t_sub`, relative to the bipolar form:
    /// `2^{h + h⊥ − 2 rank(M_t)}`.
    pub fn fast_par_by_rank(
        &self,
        split: &BipartiteSplit,
        t_sub_perp: u64,
        t_sub: u64,
    ) -> Result<Real> {
        let cm = self.connection_matrix(split)?;
        fast_par_with(&cm, split, t_sub_perp, t_sub)
    }

    /// Hadamards over one side of an ℓ_p state, applied symbolically. The
    /// result has an empty phase and one factor `(c_i + x_i + 1)` per qubit.
    pub fn reduce_to_indicator_apf(&self, split: &BipartiteSplit, side: Side) -> Result<Apf> {
        self.require_lp_split(split)?;
        let mut a = self.clone();
        for q in bits(split.side(side)) {
            a = a.apply_h_symbolic(q)?;
        }
        if !a.phase.is_zero() {
            return Err(Error::CrossCheck(format!(
                "residual phase {} after reduction",
                a.phase
            )));
        }
        Ok(a)
    }

    /// The linear code whose indicator is reached from this ℓ_p state by
    /// Hadamards on `side` of the canonical split.
    pub fn reduce_to_indicator(&self, side: Side) -> Result<LinearCode> {
        let split = self
            .is_lp()
            .ok_or_else(|| Error::NotBipartiteQuadratic(self.to_string()))?;
        self.reduce_with_split(&split, side)
    }

    pub fn reduce_with_split(&self, split: &BipartiteSplit, side: Side) -> Result<LinearCode> {
        self.reduce_to_indicator_apf(split, side)?
            .parity_check_code()
    }

    /// Code cut out by affine factors of the form `(L(x) + 1)`.
    pub fn parity_check_code(&self) -> Result<LinearCode> {
        if !self.phase.is_zero() {
            return Err(Error::Precondition("form has a phase".into()));
        }
        let mut checks = Vec::new();
        for f in &self.factors {
            match f.as_affine() {
                Some((mask, true)) => checks.push(mask),
                _ => {
                    return Err(Error::Precondition(format!(
                        "factor ({f}) is not of the form (linear + 1)"
                    )))
                }
            }
        }
        Ok(LinearCode::from_spanning(self.n, &checks)?.dual())
    }

    /// Membership in ℵ for the given split: phase only, every qubit present,
    /// and every monomial has exactly one variable in `T_C`.
    pub fn is_aleph(&self, split: &BipartiteSplit) -> bool {
        self.factors.is_empty()
            && self.phase.vars() == low_mask(self.n)
            && self
                .phase
                .monomials()
                .all(|m| (m & split.t_c).count_ones() == 1)
    }

    /// Numeric Hadamards over `T_C` of an ℵ state, with the conjectured
    /// outcome (a nonnegative indicator) checked rather than assumed.
    pub fn aleph_reduce_numeric(&self, split: &BipartiteSplit) -> Result<AlephReport> {
        if !self.is_aleph(split) {
            return Err(Error::Precondition(
                "not in aleph: every monomial needs exactly one variable in T_C".into(),
            ));
        }
        let state = apply_hadamards(&self.expand()?, split.t_c)?;
        let is_indicator = state
            .integer_amps()
            .map(|v| {
                let peak = v.iter().copied().max().unwrap_or(0);
                peak > 0 && v.iter().all(|&x| x == 0 || x == peak)
            })
            .unwrap_or(false);
        Ok(AlephReport {
            state,
            is_indicator,
        })
    }

    /// Phase-only state of a graph given by its edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Apf> {
        Apf::phase_only(n, Anf::quadratic(n, edges))
    }

    /// The code of [`Apf::reduce_to_indicator`], with one generator row
    /// `e_v + N(v)` per qubit `v` on the side that receives no Hadamards.
    pub fn graph_code(&self, side: Side) -> Result<LinearCode> {
        let split = self
            .is_lp()
            .ok_or_else(|| Error::NotBipartiteQuadratic(self.to_string()))?;
        let reduced = self.reduce_with_split(&split, side)?;
        let info = match side {
            Side::C => split.t_cperp,
            Side::CPerp => split.t_c,
        };
        let adj = self.adjacency();
        let rows: Vec<u64> = bits(info).into_iter().map(|v| 1 << v | adj[v]).collect();
        let code = LinearCode::new(self.n, rows)?;
        if code.k() != reduced.k() || !code.generator_rows().iter().all(|&r| reduced.contains(r)) {
            return Err(Error::CrossCheck(
                "graph generator disagrees with the symbolic reduction".into(),
            ));
        }
        Ok(code)
    }

    /// Bipartite graph state that Hadamards on the non-information
    /// coordinates turn into the indicator of `code`, using the pivots of the
    /// reduced echelon form as information set.
    pub fn from_code(code: &LinearCode) -> Result<Apf> {
        Apf::from_code_with_info(code, &code.systematic().1)
    }

    /// As [`Apf::from_code`] with a chosen information set: the generator is
    /// brought to the identity on `info` and each row `a` joins `info[a]` to
    /// the other coordinates it covers.
    pub fn from_code_with_info(code: &LinearCode, info: &[usize]) -> Result<Apf> {
        let n = code.n();
        if info.len() != code.k() || info.iter().any(|&c| c >= n) {
            return Err(Error::Precondition(format!(
                "information set {info:?} does not fit an [{n}, {}] code",
                code.k()
            )));
        }
        let mut rows = code.generator_rows().to_vec();
        for (i, &c) in info.iter().enumerate() {
            let j = (i..rows.len())
                .find(|&j| rows[j] >> c & 1 == 1)
                .ok_or_else(|| {
                    Error::Precondition(format!("{info:?} is not an information set"))
                })?;
            rows.swap(i, j);
            let pivot = rows[i];
            for (j, r) in rows.iter_mut().enumerate() {
                if j != i && *r >> c & 1 == 1 {
                    *r ^= pivot;
                }
            }
        }
        if code.support() != low_mask(n) {
            return Err(Error::Precondition(
                "code has an all-zero coordinate, which leaves an isolated qubit".into(),
            ));
        }
        let mut edges = Vec::new();
        for (&r, &a) in rows.iter().zip(info) {
            let rest = r & !(1 << a);
            if rest == 0 {
                return Err(Error::Precondition(format!(
                    "codeword {} has weight 1, which leaves an isolated qubit",
                    word_string(r, n)
                )));
            }
            edges.extend(bits(rest).into_iter().map(|b| (a.min(b), a.max(b))));
        }
        let a = Apf::from_edges(n, &edges)?;
        if a.is_lp().is_none() {
            return Err(Error::CrossCheck(format!("{a} is not bipartite")));
        }
        Ok(a)
    }
}

/// Outcome of [`Apf::aleph_reduce_numeric`].
#[derive(Clone, Debug)]
pub struct AlephReport {
    pub state: StateVector,
    pub is_indicator: bool,
}

/// Rank formula with a precomputed connection matrix.
pub fn fast_par_with(
    cm: &ConnectionMatrix,
    split: &BipartiteSplit,
    t_sub_perp: u64,
    t_sub: u64,
) -> Result<Real> {
    if t_sub_perp & !split.t_cperp != 0 || t_sub & !split.t_c != 0 {
        return Err(Error::Precondition(
            "subsets must lie on their own sides".into(),
        ));
    }
    let rows: Vec<usize> = (0..cm.rows.len())
        .filter(|&r| t_sub_perp >> cm.rows[r] & 1 == 1)
        .collect();
    let cols: Vec<usize> = (0..cm.cols.len())
        .filter(|&c| t_sub >> cm.cols[c] & 1 == 1)
        .collect();
    let rank = cm.m.submatrix(&rows, &cols).rank() as i64;
    Ok(Real::pow2(rows.len() as i64 + cols.len() as i64 - 2 * rank))
}

fn find_close(bytes: &[u8], open: usize) -> Result<usize> {
    let mut depth = 0;
    for (k, &b) in bytes.iter().enumerate().skip(open) {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(k);
                }
            }
            _ => {}
        }
    }
    Err(Error::parse(open, "unbalanced parenthesis"))
}

fn offset(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

impl fmt::Display for Apf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.factors {
            write!(f, "({h})")?;
        }
        if !self.phase.is_zero() || self.factors.is_empty() {
            write!(f, "(-1)^({})", self.phase)?;
        }
        Ok(())
    }
}
