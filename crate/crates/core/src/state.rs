//! Amplitude vectors over `n` qubits.
//!
//! Index bit `2^i` holds the value of qubit `i`. Exact states store
//! cyclotomic integers together with a global scale `2^{-q/2}`; every
//! ratio-based quantity divides by the energy, so the scale only matters
//! when comparing raw amplitudes.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cyclotomic::{ZOmega, ZSqrt2};
use crate::error::{Error, Result};
use crate::gf2::LinearCode;
use crate::real::Real;

/// Largest qubit count for which code indicators are built.
pub const MAX_INDICATOR_QUBITS: usize = 24;
/// Largest qubit count accepted by [`StateVector::tensor_factorize`].
pub const MAX_FACTORIZE_QUBITS: usize = 14;
/// Largest qubit count for any state vector.
pub const MAX_QUBITS: usize = 28;

/// Relative tolerance for rank-1 tests on float states.
pub const FACTOR_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Amplitude {
    Exact(ZOmega),
    Float(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Amplitudes {
    /// Values are `amps[i] * 2^{-scale_exp/2}`.
    Exact {
        amps: Vec<ZOmega>,
        scale_exp: i32,
    },
    Float(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Amplitudes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementKind {
    /// The support halves and PAR doubles.
    Destructive,
    /// The qubit is already fixed; nothing changes.
    Redundant,
}

/// Finest tensor-product partition of the qubits.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Factorization {
    pub blocks: Vec<Vec<usize>>,
}

impl Factorization {
    /// Size of the largest block, or 0 when every block is a single qubit.
    pub fn order(&self) -> usize {
        let max = self.blocks.iter().map(Vec::len).max().unwrap_or(0);
        if max <= 1 {
            0
        } else {
            max
        }
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    Error::guard("qubit count", n, MAX_QUBITS)?;
    if len != 1 << n {
        return Err(Error::Precondition(format!(
            "vector of length {len} is not 2^{n}"
        )));
    }
    Ok(())
}

impl StateVector {
    pub fn exact(n: usize, amps: Vec<ZOmega>, scale_exp: i32) -> Result<Self> {
        check_len(n, amps.len())?;
        if amps.iter().all(ZOmega::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(StateVector {
            n,
            amps: Amplitudes::Exact { amps, scale_exp },
        })
    }

    pub fn from_ints(n: usize, values: &[i64]) -> Result<Self> {
        Self::exact(n, values.iter().map(|&v| ZOmega::int(v)).collect(), 0)
    }

    pub fn from_complex(n: usize, values: Vec<Complex64>) -> Result<Self> {
        check_len(n, values.len())?;
        if values.iter().all(|v| v.norm_sqr() == 0.0) {
            return Err(Error::ZeroVector);
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::Precondition("non-finite amplitude".into()));
        }
        Ok(StateVector {
            n,
            amps: Amplitudes::Float(values),
        })
    }

    /// Parses the compact `+`, `-`, `0` alphabet.
    pub fn from_pm(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, ch) in text.trim().chars().enumerate() {
            values.push(match ch {
                '+' => 1,
                '-' => -1,
                '0' => 0,
                c => return Err(Error::parse(i, format!("unexpected character {c:?}"))),
            });
        }
        let len = values.len();
        if !len.is_power_of_two() {
            return Err(Error::parse(
                0,
                format!("length {len} is not a power of two"),
            ));
        }
        Self::from_ints(len.trailing_zeros() as usize, &values)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut v = vec![0i64; 1 << n];
        v[index] = 1;
        Self::from_ints(n, &v)
    }

    /// Indicator of a set of `n`-bit words.
    pub fn indicator_from_words(n: usize, words: &[u64]) -> Result<Self> {
        Error::guard("qubit count", n, MAX_INDICATOR_QUBITS)?;
        let mut v = vec![ZOmega::ZERO; 1 << n];
        for &w in words {
            if w >> n != 0 {
                return Err(Error::Precondition(format!("word {w} exceeds {n} bits")));
            }
            v[w as usize] = ZOmega::ONE;
        }
        Self::exact(n, v, 0)
    }

    /// Binary indicator of a linear code: `s_i = 1` iff `i` is a codeword.
    pub fn indicator_from_code(code: &LinearCode) -> Result<Self> {
        Error::guard("qubit count", code.n(), MAX_INDICATOR_QUBITS)?;
        Self::indicator_from_words(code.n(), &code.codewords()?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.amps, Amplitudes::Exact { .. })
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut Amplitudes {
        &mut self.amps
    }

    pub fn amplitude(&self, i: usize) -> Amplitude {
        match &self.amps {
            Amplitudes::Exact { amps, .. } => Amplitude::Exact(amps[i]),
            Amplitudes::Float(v) => Amplitude::Float(v[i]),
        }
    }

    pub fn exact_amps(&self) -> Option<(&[ZOmega], i32)> {
        match &self.amps {
            Amplitudes::Exact { amps, scale_exp } => Some((amps, *scale_exp)),
            Amplitudes::Float(_) => None,
        }
    }

    /// Integer amplitudes when every entry is a rational integer.
    pub fn integer_amps(&self) -> Option<Vec<i64>> {
        let (amps, _) = self.exact_amps()?;
        amps.iter()
            .map(|z| z.is_integer().then_some(z.0[0]))
            .collect()
    }

    /// Amplitudes as complex numbers with the global scale applied.
    pub fn to_complex(&self) -> Vec<Complex64> {
        match &self.amps {
            Amplitudes::Exact { amps, scale_exp } => {
                let f = 2f64.powf(-(*scale_exp as f64) / 2.0);
                amps.iter().map(|z| z.to_complex() * f).collect()
            }
            Amplitudes::Float(v) => v.clone(),
        }
    }

    /// Unit-norm complex amplitudes.
    pub fn normalized(&self) -> Vec<Complex64> {
        let v = self.to_complex();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    pub fn to_float(&self) -> StateVector {
        StateVector {
            n: self.n,
            amps: Amplitudes::Float(self.to_complex()),
        }
    }

    /// Nonzero positions.
    pub fn support(&self) -> Vec<usize> {
        match &self.amps {
            Amplitudes::Exact { amps, .. } => {
                (0..amps.len()).filter(|&i| !amps[i].is_zero()).collect()
            }
            Amplitudes::Float(v) => (0..v.len()).filter(|&i| v[i].norm_sqr() != 0.0).collect(),
        }
    }

    /// Nonzero positions for float states, ignoring entries below `tol`
    /// relative to the largest magnitude.
    pub fn support_tol(&self, tol: f64) -> Vec<usize> {
        match &self.amps {
            Amplitudes::Exact { .. } => self.support(),
            Amplitudes::Float(v) => {
                let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
                (0..v.len()).filter(|&i| v[i].norm() > tol * max).collect()
            }
        }
    }

    /// Divides out common factors of two (exact states only).
    pub fn content_reduce(&mut self) {
        if let Amplitudes::Exact { amps, scale_exp } = &mut self.amps {
            while amps.iter().all(ZOmega::is_even) {
                for a in amps.iter_mut() {
                    *a = a.half();
                }
                *scale_exp -= 2;
            }
        }
    }

    /// `|s_i|²` as exact values (exact states only, unscaled).
    pub fn exact_norms(&self) -> Option<Vec<ZSqrt2>> {
        self.exact_amps()
            .map(|(amps, _)| amps.iter().map(ZOmega::norm_sq).collect())
    }

    /// Peak-to-average power ratio `2^n max|s_i|² / Σ|s_j|²`.
    pub fn par(&self) -> Result<Real> {
        match &self.amps {
            Amplitudes::Exact { amps, .. } => {
                let mut max = ZSqrt2::ZERO;
                let mut energy = ZSqrt2::ZERO;
                for z in amps {
                    let v = z.norm_sq();
                    if v > max {
                        max = v;
                    }
                    energy += v;
                }
                if energy.is_zero() {
                    return Err(Error::ZeroVector);
                }
                let scaled = ZSqrt2 {
                    a: max.a << self.n,
                    b: max.b << self.n,
                };
                Ok(Real::quotient(scaled, energy))
            }
            Amplitudes::Float(v) => {
                let (max, energy) = v.iter().fold((0.0f64, 0.0f64), |(m, e), z| {
                    let p = z.norm_sqr();
                    (m.max(p), e + p)
                });
                if energy == 0.0 {
                    return Err(Error::ZeroVector);
                }
                Ok(Real::Float((1u64 << self.n) as f64 * max / energy))
            }
        }
    }

    /// True when `self = c · other` for some real `c > 0`.
    pub fn proportional_to(&self, other: &StateVector) -> bool {
        if self.n != other.n {
            return false;
        }
        match (&self.amps, &other.amps) {
            (Amplitudes::Exact { amps: a, .. }, Amplitudes::Exact { amps: b, .. }) => {
                let Some(p) = a.iter().position(|z| !z.is_zero()) else {
                    return false;
                };
                if b[p].is_zero() {
                    return false;
                }
                // a[p] / b[p] must be a positive real
                let ratio = a[p] * b[p].conj();
                let [r0, r1, r2, r3] = ratio.0;
                if r2 != 0
                    || r1 != -r3
                    || (ZSqrt2 {
                        a: r0 as i128,
                        b: r1 as i128,
                    })
                    .signum()
                        <= 0
                {
                    return false;
                }
                a.iter().zip(b).all(|(&x, &y)| x * b[p] == y * a[p])
            }
            _ => {
                let (a, b) = (self.normalized(), other.normalized());
                let Some(p) = (0..a.len()).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
                else {
                    return false;
                };
                if b[p].norm() < 1e-12 {
                    return false;
                }
                let phase = a[p] / b[p];
                if (phase.im).abs() > 1e-9 || phase.re <= 0.0 {
                    return false;
                }
                a.iter().zip(&b).all(|(x, y)| (x - y * phase).norm() < 1e-9)
            }
        }
    }

    /// Tensor product with `self` on qubits `0..n` and `high` on the qubits above.
    pub fn tensor(&self, high: &StateVector) -> StateVector {
        let n = self.n + high.n;
        let lo_len = self.len();
        match (&self.amps, &high.amps) {
            (
                Amplitudes::Exact {
                    amps: a,
                    scale_exp: qa,
                },
                Amplitudes::Exact {
                    amps: b,
                    scale_exp: qb,
                },
            ) => {
                let mut v = Vec::with_capacity(1 << n);
                for &y in b {
                    for &x in a {
                        v.push(x * y);
                    }
                }
                let _ = lo_len;
                StateVector {
                    n,
                    amps: Amplitudes::Exact {
                        amps: v,
                        scale_exp: qa + qb,
                    },
                }
            }
            _ => {
                let (a, b) = (self.to_complex(), high.to_complex());
                let mut v = Vec::with_capacity(1 << n);
                for &y in &b {
                    for &x in &a {
                        v.push(x * y);
                    }
                }
                StateVector {
                    n,
                    amps: Amplitudes::Float(v),
                }
            }
        }
    }

    /// Product state with each block placed on the listed qubits (in order:
    /// block qubit `j` is global qubit `qubits[j]`).
    pub fn from_blocks(n: usize, blocks: &[(Vec<usize>, StateVector)]) -> Result<StateVector> {
        let mut seen = 0u64;
        for (qs, st) in blocks {
            if qs.len() != st.n() {
                return Err(Error::Precondition("block size mismatch".into()));
            }
            for &q in qs {
                if q >= n || seen >> q & 1 == 1 {
                    return Err(Error::Precondition(
                        "blocks must partition the qubits".into(),
                    ));
                }
                seen |= 1 << q;
            }
        }
        if seen != crate::gf2::low_mask(n) {
            return Err(Error::Precondition("blocks must cover every qubit".into()));
        }
        let local = |qs: &[usize], i: usize| {
            qs.iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | ((i >> q & 1) << j))
        };
        if blocks.iter().all(|(_, s)| s.is_exact()) {
            let mut v = vec![ZOmega::ONE; 1 << n];
            let mut scale = 0;
            for (qs, st) in blocks {
                let (amps, q) = st.exact_amps().expect("exact block");
                scale += q;
                for (i, slot) in v.iter_mut().enumerate() {
                    *slot = *slot * amps[local(qs, i)];
                }
            }
            StateVector::exact(n, v, scale)
        } else {
            let mut v = vec![Complex64::new(1.0, 0.0); 1 << n];
            for (qs, st) in blocks {
                let amps = st.to_complex();
                for (i, slot) in v.iter_mut().enumerate() {
                    *slot *= amps[local(qs, i)];
                }
            }
            StateVector::from_complex(n, v)
        }
    }

    /// Projects `qubit` onto `outcome`, returning the residual state on the
    /// remaining `n − 1` qubits (order preserved) and the outcome probability.
    pub fn measure(&self, qubit: usize, outcome: u8) -> Result<(StateVector, Real)> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        let bit = 1usize << qubit;
        let want = if outcome & 1 == 1 { bit } else { 0 };
        let keep: Vec<usize> = (0..self.len()).filter(|i| i & bit == want).collect();
        match &self.amps {
            Amplitudes::Exact { amps, scale_exp } => {
                let sub: Vec<ZOmega> = keep.iter().map(|&i| amps[i]).collect();
                let part = sub.iter().fold(ZSqrt2::ZERO, |acc, z| acc + z.norm_sq());
                let total = amps.iter().fold(ZSqrt2::ZERO, |acc, z| acc + z.norm_sq());
                if part.is_zero() {
                    return Err(Error::ZeroProbability { qubit, outcome });
                }
                let mut out = StateVector {
                    n: self.n - 1,
                    amps: Amplitudes::Exact {
                        amps: sub,
                        scale_exp: *scale_exp,
                    },
                };
                out.content_reduce();
                Ok((out, Real::quotient(part, total)))
            }
            Amplitudes::Float(v) => {
                let sub: Vec<Complex64> = keep.iter().map(|&i| v[i]).collect();
                let part: f64 = sub.iter().map(|z| z.norm_sqr()).sum();
                let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if part == 0.0 {
                    return Err(Error::ZeroProbability { qubit, outcome });
                }
                Ok((
                    StateVector {
                        n: self.n - 1,
                        amps: Amplitudes::Float(sub),
                    },
                    Real::Float(part / total),
                ))
            }
        }
    }

    /// Classifies a computational-basis measurement of `qubit` on a state with
    /// flat support magnitudes.
    pub fn classify_measurement(&self, qubit: usize) -> Result<MeasurementKind> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        let support = self.flat_support()?;
        let ones = support.iter().filter(|&&i| i >> qubit & 1 == 1).count();
        let zeros = support.len() - ones;
        if ones == 0 || zeros == 0 {
            Ok(MeasurementKind::Redundant)
        } else if ones == zeros {
            Ok(MeasurementKind::Destructive)
        } else {
            Err(Error::Precondition(format!(
                "qubit {qubit} splits the support {zeros}:{ones}; not a linear-code indicator"
            )))
        }
    }

    /// Support positions, after checking all nonzero magnitudes are equal.
    pub fn flat_support(&self) -> Result<Vec<usize>> {
        let support = self.support();
        let flat = match &self.amps {
            Amplitudes::Exact { amps, .. } => {
                let first = amps[support[0]].norm_sq();
                support.iter().all(|&i| amps[i].norm_sq() == first)
            }
            Amplitudes::Float(v) => {
                let first = v[support[0]].norm_sqr();
                support
                    .iter()
                    .all(|&i| (v[i].norm_sqr() - first).abs() <= 1e-9 * first)
            }
        };
        if flat {
            Ok(support)
        } else {
            Err(Error::Precondition(
                "support magnitudes are not flat".into(),
            ))
        }
    }

    /// Finest partition of the qubits into tensor factors.
    pub fn tensor_factorize(&self) -> Result<Factorization> {
        Error::guard("qubit count", self.n, MAX_FACTORIZE_QUBITS)?;
        let blocks = match &self.amps {
            Amplitudes::Exact { amps, .. } => factorize(self.n, amps.clone()),
            Amplitudes::Float(v) => {
                let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
                factorize(self.n, v.iter().map(|z| z / max).collect())
            }
        };
        Ok(Factorization { blocks })
    }

    /// Largest entangled block; 0 when fully factored.
    pub fn entanglement_order(&self) -> Result<usize> {
        Ok(self.tensor_factorize()?.order())
    }

    /// Parses the state file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut scale = 0i32;
        let mut exact: Vec<ZOmega> = Vec::new();
        let mut float: Vec<Complex64> = Vec::new();
        let mut compact: Option<StateVector> = None;
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let pos = offset;
            offset += line.len();
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(v) = body.strip_prefix("n=") {
                n = Some(
                    v.trim()
                        .parse()
                        .map_err(|_| Error::parse(pos, "bad qubit count"))?,
                );
                continue;
            }
            if let Some(v) = body.strip_prefix("scale=") {
                scale = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(pos, "bad scale"))?;
                continue;
            }
            if body.chars().all(|c| matches!(c, '+' | '-' | '0')) && body.len() > 1 {
                if compact.is_some() || !exact.is_empty() || !float.is_empty() {
                    return Err(Error::parse(pos, "compact line mixed with other rows"));
                }
                compact = Some(Self::from_pm(body).map_err(|e| shift(e, pos))?);
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            match tokens.len() {
                4 => {
                    let mut c = [0i64; 4];
                    for (slot, t) in c.iter_mut().zip(&tokens) {
                        *slot = t
                            .parse()
                            .map_err(|_| Error::parse(pos, format!("bad integer {t:?}")))?;
                    }
                    exact.push(ZOmega(c));
                }
                2 => {
                    let re: f64 = tokens[0]
                        .parse()
                        .map_err(|_| Error::parse(pos, "bad float"))?;
                    let im: f64 = tokens[1]
                        .parse()
                        .map_err(|_| Error::parse(pos, "bad float"))?;
                    float.push(Complex64::new(re, im));
                }
                k => {
                    return Err(Error::parse(
                        pos,
                        format!("expected 2 or 4 numbers, found {k}"),
                    ))
                }
            }
            if !exact.is_empty() && !float.is_empty() {
                return Err(Error::parse(pos, "mixed exact and float rows"));
            }
        }
        let state = if let Some(s) = compact {
            if !exact.is_empty() || !float.is_empty() {
                return Err(Error::parse(0, "compact line mixed with other rows"));
            }
            s
        } else if !float.is_empty() {
            let m = float.len();
            if !m.is_power_of_two() {
                return Err(Error::parse(
                    0,
                    format!("{m} amplitudes is not a power of two"),
                ));
            }
            Self::from_complex(m.trailing_zeros() as usize, float)?
        } else {
            let m = exact.len();
            if m == 0 || !m.is_power_of_two() {
                return Err(Error::parse(
                    0,
                    format!("{m} amplitudes is not a power of two"),
                ));
            }
            Self::exact(m.trailing_zeros() as usize, exact, scale)?
        };
        if let Some(n) = n {
            if n != state.n {
                return Err(Error::parse(
                    0,
                    format!("header says n={n}, data has n={}", state.n),
                ));
            }
        }
        Ok(state)
    }

    /// Serializes in the state file format; ±1/0 vectors use the compact line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        match &self.amps {
            Amplitudes::Exact { amps, scale_exp } => {
                if let Some(ints) = self
                    .integer_amps()
                    .filter(|v| v.iter().all(|x| x.abs() <= 1))
                {
                    out.extend(ints.iter().map(|&x| match x {
                        1 => '+',
                        -1 => '-',
                        _ => '0',
                    }));
                    out.push('\n');
                } else {
                    if *scale_exp != 0 {
                        let _ = writeln!(out, "scale={scale_exp}");
                    }
                    for z in amps {
                        let _ = writeln!(out, "{z}");
                    }
                }
            }
            Amplitudes::Float(v) => {
                for z in v {
                    let _ = writeln!(out, "{:e} {:e}", z.re, z.im);
                }
            }
        }
        out
    }

    /// `+`/`-`/`0` string for ±1/0 integer vectors.
    pub fn pm_string(&self) -> Option<String> {
        let ints = self.integer_amps()?;
        ints.iter()
            .map(|&x| match x {
                1 => Some('+'),
                -1 => Some('-'),
                0 => Some('0'),
                _ => None,
            })
            .collect()
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

trait Entry: Copy {
    fn magnitude(&self) -> f64;
    /// `a·b == c·d`, exactly or within tolerance.
    fn cross_eq(a: Self, b: Self, c: Self, d: Self) -> bool;
}

impl Entry for ZOmega {
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
    fn cross_eq(a: Self, b: Self, c: Self, d: Self) -> bool {
        a * b == c * d
    }
}

impl Entry for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn cross_eq(a: Self, b: Self, c: Self, d: Self) -> bool {
        (a * b - c * d).norm() <= FACTOR_TOL
    }
}

/// Splits a vector over `m` local qubits into (values indexed by `sub` bits,
/// values indexed by the other bits).
fn split_index(i: usize, sub: &[usize], rest: &[usize]) -> (usize, usize) {
    let gather = |qs: &[usize]| {
        qs.iter()
            .enumerate()
            .fold(0usize, |acc, (j, &q)| acc | ((i >> q & 1) << j))
    };
    (gather(sub), gather(rest))
}

fn is_rank_one<T: Entry>(v: &[T], m: usize, sub: &[usize]) -> Option<Vec<T>> {
    let rest: Vec<usize> = (0..m).filter(|q| !sub.contains(q)).collect();
    let (rows, cols) = (1usize << sub.len(), 1usize << rest.len());
    let mut mat = vec![v[0]; rows * cols];
    for (i, &x) in v.iter().enumerate() {
        let (r, c) = split_index(i, sub, &rest);
        mat[r * cols + c] = x;
    }
    let pivot = (0..mat.len())
        .max_by(|&a, &b| mat[a].magnitude().total_cmp(&mat[b].magnitude()))
        .expect("nonempty");
    let (r0, c0) = (pivot / cols, pivot % cols);
    let p = mat[pivot];
    for r in 0..rows {
        for c in 0..cols {
            if !T::cross_eq(mat[r * cols + c], p, mat[r * cols + c0], mat[r0 * cols + c]) {
                return None;
            }
        }
    }
    Some(mat[r0 * cols..(r0 + 1) * cols].to_vec())
}

fn factorize<T: Entry>(n: usize, values: Vec<T>) -> Vec<Vec<usize>> {
    let mut labels: Vec<usize> = (0..n).collect();
    let mut current = values;
    let mut blocks = Vec::new();
    while !labels.is_empty() {
        let m = labels.len();
        let others: Vec<usize> = (1..m).collect();
        let mut found: Option<(Vec<usize>, Vec<T>)> = None;
        'size: for extra in 0..m {
            if extra == m - 1 {
                found = Some(((0..m).collect(), Vec::new()));
                break;
            }
            let mut combo = Vec::with_capacity(extra);
            let mut hit = None;
            subsets_of_size(&others, extra, &mut combo, &mut |c| {
                if hit.is_some() {
                    return;
                }
                let mut sub = vec![0usize];
                sub.extend_from_slice(c);
                if let Some(rest) = is_rank_one(&current, m, &sub) {
                    hit = Some((sub, rest));
                }
            });
            if let Some(h) = hit {
                found = Some(h);
                break 'size;
            }
        }
        let (sub, rest_vals) = found.expect("the full set always factors");
        blocks.push(sub.iter().map(|&j| labels[j]).collect::<Vec<_>>());
        labels = (0..m)
            .filter(|j| !sub.contains(j))
            .map(|j| labels[j])
            .collect();
        current = rest_vals;
    }
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort();
    blocks
}

fn subsets_of_size(items: &[usize], k: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    let start = acc.last().map_or(0, |&last| {
        items.iter().position(|&x| x == last).unwrap() + 1
    });
    for i in start..items.len() {
        if items.len() - i < k - acc.len() {
            break;
        }
        acc.push(items[i]);
        subsets_of_size(items, k, acc, f);
        acc.pop();
    }
}
