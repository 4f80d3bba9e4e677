//! Single-qubit gates, the Walsh-Hadamard transform and HI multispectra.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::cyclotomic::{ZOmega, ZSqrt2};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::state::{Amplitudes, StateVector};

/// Largest qubit count accepted by [`hi_multispectra`].
pub const MAX_MULTISPECTRA_QUBITS: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate2x2 {
    I,
    /// `[[1, 1], [1, −1]] / √2`.
    H,
    /// NegaHadamard `[[1, i], [1, −i]] / √2`.
    NH,
    /// `diag(ω^{−p}, ω^{p})` with `ω = e^{iπ/4}`; `p = 1` gives `diag(ω⁷, ω)`.
    PhaseW(i64),
    /// `[[cos θ, sin θ e^{iw}], [sin θ e^{−iw}, −cos θ]]`.
    Generic {
        theta: f64,
        w: f64,
    },
}

impl Gate2x2 {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *self {
            Gate2x2::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            Gate2x2::H => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
            Gate2x2::NH => [[c(r, 0.0), c(0.0, r)], [c(r, 0.0), c(0.0, -r)]],
            Gate2x2::PhaseW(p) => [
                [ZOmega::omega_pow(-p).to_complex(), c(0.0, 0.0)],
                [c(0.0, 0.0), ZOmega::omega_pow(p).to_complex()],
            ],
            Gate2x2::Generic { theta, w } => {
                let (s, co) = theta.sin_cos();
                [
                    [c(co, 0.0), Complex64::from_polar(s, w)],
                    [Complex64::from_polar(s, -w), c(-co, 0.0)],
                ]
            }
        }
    }

    /// Gates that keep exact states exact.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Gate2x2::Generic { .. })
    }

    pub fn from_char(c: char) -> Option<Gate2x2> {
        match c {
            'I' => Some(Gate2x2::I),
            'H' => Some(Gate2x2::H),
            'N' => Some(Gate2x2::NH),
            _ => None,
        }
    }
}

/// Applies `g` to `qubit`.
pub fn apply_gate(s: &StateVector, qubit: usize, g: Gate2x2) -> Result<StateVector> {
    let mut out = s.clone();
    apply_gate_in_place(&mut out, qubit, g)?;
    Ok(out)
}

pub fn apply_gate_in_place(s: &mut StateVector, qubit: usize, g: Gate2x2) -> Result<()> {
    let n = s.n();
    if qubit >= n {
        return Err(Error::QubitOutOfRange { qubit, n });
    }
    if g == Gate2x2::I {
        return Ok(());
    }
    if !g.is_exact() && s.is_exact() {
        *s = s.to_float();
    }
    let stride = 1usize << qubit;
    match s.amplitudes_mut() {
        Amplitudes::Exact { amps, scale_exp } => match g {
            Gate2x2::H => {
                butterfly(amps, stride, |a, b| (a + b, a - b));
                *scale_exp += 1;
            }
            Gate2x2::NH => {
                butterfly(amps, stride, |a, b| {
                    let ib = b * ZOmega::I;
                    (a + ib, a - ib)
                });
                *scale_exp += 1;
            }
            Gate2x2::PhaseW(p) => butterfly(amps, stride, |a, b| {
                (a.mul_omega_pow(-p), b.mul_omega_pow(p))
            }),
            Gate2x2::I | Gate2x2::Generic { .. } => unreachable!(),
        },
        Amplitudes::Float(v) => {
            let m = g.matrix();
            butterfly(v, stride, |a, b| {
                (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
            });
        }
    }
    s.content_reduce();
    Ok(())
}

#[inline]
fn butterfly<T: Copy>(v: &mut [T], stride: usize, f: impl Fn(T, T) -> (T, T)) {
    for block in v.chunks_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = f(*a, *b);
            *a = x;
            *b = y;
        }
    }
}

/// Applies `H` to every qubit in `mask`.
pub fn apply_hadamards(s: &StateVector, mask: u64) -> Result<StateVector> {
    let mut out = s.clone();
    for q in 0..s.n() {
        if mask >> q & 1 == 1 {
            apply_gate_in_place(&mut out, q, Gate2x2::H)?;
        }
    }
    Ok(out)
}

/// Applies one gate per qubit, `gates[q]` on qubit `q`.
pub fn apply_product(s: &StateVector, gates: &[Gate2x2]) -> Result<StateVector> {
    if gates.len() != s.n() {
        return Err(Error::Precondition(format!(
            "{} gates for {} qubits",
            gates.len(),
            s.n()
        )));
    }
    let mut out = s.clone();
    for (q, &g) in gates.iter().enumerate() {
        apply_gate_in_place(&mut out, q, g)?;
    }
    Ok(out)
}

/// Walsh-Hadamard transform: `H` on every qubit, as one butterfly network.
pub fn wht(s: &StateVector) -> StateVector {
    let mut out = s.clone();
    let n = s.n();
    match out.amplitudes_mut() {
        Amplitudes::Exact { amps, scale_exp } => {
            for q in 0..n {
                butterfly(amps, 1 << q, |a, b| (a + b, a - b));
            }
            *scale_exp += n as i32;
            out.content_reduce();
        }
        Amplitudes::Float(v) => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            for q in 0..n {
                butterfly(v, 1 << q, |a, b| ((a + b) * r, (a - b) * r));
            }
        }
    }
    out
}

/// Parses an `H`/`I` gate string (character `j` acts on qubit `j`) into a
/// subset mask.
pub fn parse_hi_string(text: &str) -> Result<(usize, u64)> {
    let text = text.trim();
    let mut mask = 0u64;
    let mut n = 0;
    for (i, ch) in text.chars().enumerate() {
        match ch {
            'H' if i < 64 => mask |= 1 << i,
            'I' => {}
            c => return Err(Error::parse(i, format!("expected H or I, found {c:?}"))),
        }
        n += 1;
    }
    Ok((n, mask))
}

/// Gate string for a subset mask over `n` qubits.
pub fn hi_string(mask: u64, n: usize) -> String {
    (0..n)
        .map(|q| if mask >> q & 1 == 1 { 'H' } else { 'I' })
        .collect()
}

/// Parses a gate string over `I`, `H` and `N` (NegaHadamard).
pub fn parse_gate_string(text: &str) -> Result<Vec<Gate2x2>> {
    text.trim()
        .chars()
        .enumerate()
        .map(|(i, c)| {
            Gate2x2::from_char(c).ok_or_else(|| Error::parse(i, format!("unknown gate {c:?}")))
        })
        .collect()
}

/// NegaHadamard on every qubit followed by `PhaseW(1)` on `phase_qubit`.
/// Maps a fully connected quadratic bipolar state to a GHZ indicator.
pub fn nega_hadamard_ghz(s: &StateVector, phase_qubit: usize) -> Result<StateVector> {
    let mut out = s.clone();
    for q in 0..s.n() {
        apply_gate_in_place(&mut out, q, Gate2x2::NH)?;
    }
    apply_gate_in_place(&mut out, phase_qubit, Gate2x2::PhaseW(1))?;
    Ok(out)
}

/// Options for [`hi_multispectra_with`].
#[derive(Clone, Debug, Default)]
pub struct MultispectraOptions {
    /// Keep the full spectrum for every subset of at most this many qubits.
    pub retain_spectra_max_weight: Option<usize>,
}

/// PAR of `(∏_{i∈T} H(i)) s` for every subset `T`.
#[derive(Clone, Debug)]
pub struct MultispectraTable {
    n: usize,
    entries: Vec<Real>,
    spectra: BTreeMap<u64, StateVector>,
}

impl MultispectraTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, mask: u64) -> Real {
        self.entries[mask as usize]
    }

    pub fn entries(&self) -> &[Real] {
        &self.entries
    }

    pub fn spectrum(&self, mask: u64) -> Option<&StateVector> {
        self.spectra.get(&mask)
    }

    /// Largest entry; ties go to the smallest mask.
    pub fn max(&self) -> (u64, Real) {
        let mut best = (0u64, self.entries[0]);
        for (m, &v) in self.entries.iter().enumerate() {
            if v > best.1 {
                best = (m as u64, v);
            }
        }
        best
    }

    /// Smallest entry; ties go to the smallest mask.
    pub fn min(&self) -> (u64, Real) {
        let mut best = (0u64, self.entries[0]);
        for (m, &v) in self.entries.iter().enumerate() {
            if v < best.1 {
                best = (m as u64, v);
            }
        }
        best
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Real::is_exact)
    }
}

/// JSON object keyed by the decimal subset mask.
impl Serialize for MultispectraTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (m, v) in self.entries.iter().enumerate() {
            map.serialize_entry(&m.to_string(), v)?;
        }
        map.end()
    }
}

pub fn hi_multispectra(s: &StateVector) -> Result<MultispectraTable> {
    hi_multispectra_with(s, &MultispectraOptions::default())
}

/// Gray-code enumeration of the HI multispectra. The subset lattice is split
/// on the top qubits into independent sub-walks that run in parallel.
pub fn hi_multispectra_with(
    s: &StateVector,
    opts: &MultispectraOptions,
) -> Result<MultispectraTable> {
    let n = s.n();
    Error::guard("qubit count", n, MAX_MULTISPECTRA_QUBITS)?;
    let fixed = if n >= 8 { 4 } else { 0 };
    let entries = if let Some(ints) = s.integer_amps() {
        run_walk(n, fixed, IntWalk(ints))
    } else if let Some((amps, _)) = s.exact_amps() {
        run_walk(n, fixed, OmegaWalk(amps.to_vec()))
    } else {
        run_walk(n, fixed, FloatWalk(s.to_complex()))
    };
    let mut spectra = BTreeMap::new();
    if let Some(w) = opts.retain_spectra_max_weight {
        for mask in 0..1u64 << n {
            if mask.count_ones() as usize <= w {
                spectra.insert(mask, apply_hadamards(s, mask)?);
            }
        }
    }
    Ok(MultispectraTable {
        n,
        entries,
        spectra,
    })
}

trait Walk: Clone + Send + Sync {
    /// Unnormalized butterfly `(a, b) -> (a + b, a − b)` on one qubit.
    fn hadamard(&mut self, q: usize);
    fn par(&self, n: usize) -> Real;
}

fn run_walk<W: Walk>(n: usize, fixed: usize, start: W) -> Vec<Real> {
    let low = n - fixed;
    let chunks: Vec<Vec<Real>> = (0..1u64 << fixed)
        .into_par_iter()
        .map(|prefix| {
            let mut w = start.clone();
            for j in 0..fixed {
                if prefix >> j & 1 == 1 {
                    w.hadamard(low + j);
                }
            }
            let mut gray = 0u64;
            let mut local = vec![Real::int(0); 1 << low];
            local[0] = w.par(n);
            for i in 1u64..1 << low {
                let q = i.trailing_zeros() as usize;
                w.hadamard(q);
                gray ^= 1 << q;
                local[gray as usize] = w.par(n);
            }
            local
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

#[derive(Clone)]
struct IntWalk(Vec<i64>);

impl Walk for IntWalk {
    fn hadamard(&mut self, q: usize) {
        butterfly(&mut self.0, 1 << q, |a, b| (a + b, a - b));
        while self.0.iter().all(|v| v % 2 == 0) {
            for v in self.0.iter_mut() {
                *v /= 2;
            }
        }
    }

    fn par(&self, n: usize) -> Real {
        let mut max = 0i128;
        let mut energy = 0i128;
        for &v in &self.0 {
            let p = (v as i128) * (v as i128);
            max = max.max(p);
            energy += p;
        }
        Real::Exact(crate::real::Rational::new(max << n, energy))
    }
}

#[derive(Clone)]
struct OmegaWalk(Vec<ZOmega>);

impl Walk for OmegaWalk {
    fn hadamard(&mut self, q: usize) {
        butterfly(&mut self.0, 1 << q, |a, b| (a + b, a - b));
        while self.0.iter().all(ZOmega::is_even) {
            for v in self.0.iter_mut() {
                *v = v.half();
            }
        }
    }

    fn par(&self, n: usize) -> Real {
        let mut max = ZSqrt2::ZERO;
        let mut energy = ZSqrt2::ZERO;
        for z in &self.0 {
            let v = z.norm_sq();
            if v > max {
                max = v;
            }
            energy += v;
        }
        Real::quotient(
            ZSqrt2 {
                a: max.a << n,
                b: max.b << n,
            },
            energy,
        )
    }
}

#[derive(Clone)]
struct FloatWalk(Vec<Complex64>);

impl Walk for FloatWalk {
    fn hadamard(&mut self, q: usize) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        butterfly(&mut self.0, 1 << q, |a, b| ((a + b) * r, (a - b) * r));
    }

    fn par(&self, n: usize) -> Real {
        let (max, energy) = self.0.iter().fold((0.0f64, 0.0f64), |(m, e), z| {
            let p = z.norm_sqr();
            (m.max(p), e + p)
        });
        Real::Float((1u64 << n) as f64 * max / energy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{parse_word, LinearCode};
    use proptest::prelude::*;

    fn ints(s: &StateVector) -> Vec<i64> {
        s.integer_amps().unwrap()
    }

    fn bits(s: &StateVector) -> String {
        ints(s)
            .iter()
            .map(|&v| if v == 0 { '0' } else { '1' })
            .collect()
    }

    fn line4() -> StateVector {
        // (−1)^{x0x1 + x1x2 + x2x3}
        let v: Vec<i64> = (0..16)
            .map(|i: usize| {
                let x = |k: usize| (i >> k) & 1;
                if (x(0) * x(1) + x(1) * x(2) + x(2) * x(3)) % 2 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        StateVector::from_ints(4, &v).unwrap()
    }

    #[test]
    fn hadamards_on_line_graph() {
        let s = line4();
        assert_eq!(
            bits(&apply_hadamards(&s, 0b0101).unwrap()),
            "1000000100011000"
        );
        assert_eq!(
            bits(&apply_hadamards(&s, 0b1010).unwrap()),
            "1001000000000110"
        );
        assert_eq!(apply_gate(&s, 2, Gate2x2::I).unwrap(), s);
    }

    #[test]
    fn wht_duality_of_small_codes() {
        let s = StateVector::from_ints(3, &[1, 0, 0, 1, 0, 1, 1, 0]).unwrap();
        let t = wht(&s);
        assert_eq!(ints(&t), vec![1, 0, 0, 0, 0, 0, 0, 1]);
        let delta = StateVector::basis(3, 0).unwrap();
        assert_eq!(ints(&wht(&delta)), vec![1; 8]);
    }

    #[test]
    fn wht_of_six_qubit_example() {
        let edges = [
            (0, 1),
            (0, 3),
            (0, 5),
            (1, 2),
            (1, 4),
            (2, 3),
            (2, 5),
            (3, 4),
            (4, 5),
        ];
        let v: Vec<i64> = (0..64usize)
            .map(|i| {
                let p: usize = edges
                    .iter()
                    .map(|&(a, b)| (i >> a & 1) * (i >> b & 1))
                    .sum();
                if p % 2 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let t = wht(&StateVector::from_ints(6, &v).unwrap());
        let amps = ints(&t);
        assert_eq!(t.support(), vec![0, 21, 42, 63]);
        assert!(amps[0] > 0 && amps[21] > 0 && amps[42] > 0 && amps[63] < 0);
    }

    #[test]
    fn gate_matrices_are_unitary() {
        let gates = [
            Gate2x2::I,
            Gate2x2::H,
            Gate2x2::NH,
            Gate2x2::PhaseW(3),
            Gate2x2::Generic { theta: 0.3, w: 1.1 },
        ];
        for g in gates {
            let m = g.matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let dot: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - Complex64::new(want, 0.0)).norm() < 1e-12, "{g:?}");
                }
            }
        }
    }

    #[test]
    fn exact_gates_match_float_matrices() {
        let s = StateVector::exact(
            2,
            vec![
                ZOmega([1, 2, 0, -1]),
                ZOmega([0, 1, 3, 0]),
                ZOmega([2, 0, 0, 0]),
                ZOmega([0, 0, 0, 1]),
            ],
            0,
        )
        .unwrap();
        for g in [
            Gate2x2::H,
            Gate2x2::NH,
            Gate2x2::PhaseW(1),
            Gate2x2::PhaseW(-3),
        ] {
            for q in 0..2 {
                let exact = apply_gate(&s, q, g).unwrap();
                assert!(exact.is_exact());
                let float = apply_gate(&s.to_float(), q, g).unwrap().to_complex();
                for (a, b) in exact.to_complex().iter().zip(&float) {
                    assert!((a - b).norm() < 1e-12, "{g:?} on {q}");
                }
            }
        }
        assert!(!apply_gate(&s, 0, Gate2x2::Generic { theta: 0.1, w: 0.0 })
            .unwrap()
            .is_exact());
    }

    #[test]
    fn phase_w_is_diag_omega7_omega() {
        let s = StateVector::from_ints(1, &[1, 1]).unwrap();
        let t = apply_gate(&s, 0, Gate2x2::PhaseW(1)).unwrap();
        let (amps, _) = t.exact_amps().unwrap();
        assert_eq!(amps, &[ZOmega::omega_pow(7), ZOmega::omega_pow(1)]);
    }

    fn fully_connected(n: usize) -> StateVector {
        let v: Vec<i64> = (0..1usize << n)
            .map(|i| {
                let w = i.count_ones() as usize;
                if (w * w.saturating_sub(1) / 2) % 2 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        StateVector::from_ints(n, &v).unwrap()
    }

    #[test]
    fn nega_hadamard_maps_to_ghz() {
        for n in 2..=8 {
            let s = fully_connected(n);
            for f in [0, n - 1] {
                let t = nega_hadamard_ghz(&s, f).unwrap();
                assert!(t.is_exact());
                assert_eq!(t.support(), vec![0, (1 << n) - 1], "n = {n}");
                let (amps, _) = t.exact_amps().unwrap();
                assert_eq!(amps[0], amps[(1 << n) - 1]);
            }
        }
        assert_eq!(
            nega_hadamard_ghz(&fully_connected(4), 0)
                .unwrap()
                .entanglement_order()
                .unwrap(),
            4
        );
    }

    #[test]
    fn gate_strings() {
        assert_eq!(parse_hi_string("IIHHH").unwrap(), (5, 0b11100));
        assert_eq!(hi_string(0b11100, 5), "IIHHH");
        assert!(matches!(
            parse_hi_string("IHX"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert_eq!(
            parse_gate_string("HNI").unwrap(),
            vec![Gate2x2::H, Gate2x2::NH, Gate2x2::I]
        );
    }

    fn c523() -> StateVector {
        let c = LinearCode::new(
            5,
            vec![parse_word("11010").unwrap(), parse_word("01101").unwrap()],
        )
        .unwrap();
        StateVector::indicator_from_code(&c).unwrap()
    }

    #[test]
    fn multispectra_first_row_of_523() {
        let t = hi_multispectra(&c523()).unwrap();
        let row: Vec<String> = (0..8u64).map(|c| t.get(c << 2).to_string()).collect();
        assert_eq!(row, ["8", "4", "4", "2", "4", "2", "2", "1"]);
        assert_eq!(t.get(0), c523().par().unwrap());
        assert_eq!(t.max(), (0, Real::int(8)));
    }

    #[test]
    fn multispectra_of_product_state() {
        let s = StateVector::basis(4, 0).unwrap();
        let t = hi_multispectra(&s).unwrap();
        for m in 0..16u64 {
            assert_eq!(t.get(m), Real::pow2(4 - m.count_ones() as i64));
        }
        assert_eq!(t.max(), (0, Real::int(16)));
    }

    #[test]
    fn multispectra_parallel_split_matches_scratch() {
        let v: Vec<i64> = (0..256)
            .map(|i: i64| if (i * 37 + i / 3) % 5 < 2 { -1 } else { 1 })
            .collect();
        let s = StateVector::from_ints(8, &v).unwrap();
        let t = hi_multispectra_with(
            &s,
            &MultispectraOptions {
                retain_spectra_max_weight: Some(1),
            },
        )
        .unwrap();
        for m in [0u64, 1, 17, 128, 200, 255] {
            assert_eq!(t.get(m), apply_hadamards(&s, m).unwrap().par().unwrap());
        }
        assert!(t.spectrum(4).is_some() && t.spectrum(5).is_none());
    }

    #[test]
    fn multispectra_guard() {
        let s = StateVector::basis(14, 0).unwrap();
        assert!(matches!(hi_multispectra(&s), Err(Error::TooLarge { .. })));
    }

    fn exact_state(n: usize) -> impl Strategy<Value = StateVector> {
        proptest::collection::vec(proptest::array::uniform4(-3i64..=3), 1 << n)
            .prop_filter_map("nonzero", move |v| {
                StateVector::exact(n, v.into_iter().map(ZOmega).collect(), 0).ok()
            })
    }

    proptest! {
        #[test]
        fn hadamard_is_self_inverse(s in (1usize..=5).prop_flat_map(exact_state), q in 0usize..5) {
            let q = q % s.n();
            let twice = apply_gate(&apply_gate(&s, q, Gate2x2::H).unwrap(), q, Gate2x2::H).unwrap();
            prop_assert_eq!(twice.to_complex().len(), s.len());
            prop_assert!(twice.proportional_to(&s));
            for (a, b) in twice.to_complex().iter().zip(s.to_complex()) {
                prop_assert!((a - b).norm() < 1e-9);
            }
        }

        #[test]
        fn gates_conserve_energy(s in (1usize..=5).prop_flat_map(exact_state), q in 0usize..5, theta in 0.0f64..3.2, w in 0.0f64..6.3) {
            let q = q % s.n();
            let e0: f64 = s.to_complex().iter().map(|z| z.norm_sqr()).sum();
            for g in [Gate2x2::H, Gate2x2::NH, Gate2x2::PhaseW(5), Gate2x2::Generic { theta, w }] {
                let e: f64 = apply_gate(&s, q, g).unwrap().to_complex().iter().map(|z| z.norm_sqr()).sum();
                prop_assert!((e - e0).abs() <= 1e-9 * e0);
            }
        }

        #[test]
        fn wht_is_an_involution(s in (1usize..=6).prop_flat_map(exact_state)) {
            let back = wht(&wht(&s));
            for (a, b) in back.to_complex().iter().zip(s.to_complex()) {
                prop_assert!((a - b).norm() < 1e-9);
            }
            prop_assert_eq!(wht(&s), apply_hadamards(&s, (1u64 << s.n()) - 1).unwrap());
        }

        #[test]
        fn gray_walk_matches_recomputation(s in (1usize..=9).prop_flat_map(exact_state), picks in proptest::collection::vec(any::<u64>(), 10)) {
            let t = hi_multispectra(&s).unwrap();
            for p in picks {
                let m = p & ((1 << s.n()) - 1);
                let direct = apply_hadamards(&s, m).unwrap().par().unwrap();
                prop_assert!(t.get(m).approx_eq(&direct, 1e-12), "mask {} : {} vs {}", m, t.get(m), direct);
            }
        }
    }
}
