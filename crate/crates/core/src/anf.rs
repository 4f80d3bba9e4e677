//! Boolean polynomials in algebraic normal form.
//!
//! A monomial is a bit mask of variable indices; the empty mask is the
//! constant 1. Coefficients live in GF(2), so the polynomial is a set.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest variable count for truth-table evaluation.
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

/// Equality compares polynomials only; the variable count is metadata.
#[derive(Clone, Debug, Default)]
pub struct Anf {
    n: usize,
    monomials: BTreeSet<u64>,
}

impl PartialEq for Anf {
    fn eq(&self, other: &Self) -> bool {
        self.monomials == other.monomials
    }
}

impl Eq for Anf {}

impl std::hash::Hash for Anf {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.monomials.hash(state);
    }
}

impl Anf {
    pub fn zero(n: usize) -> Self {
        Anf {
            n,
            monomials: BTreeSet::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_monomials(n, [0])
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::from_monomials(n.max(i + 1), [1u64 << i])
    }

    /// Sum of the given monomials; repeated monomials cancel.
    pub fn from_monomials(n: usize, monomials: impl IntoIterator<Item = u64>) -> Self {
        let mut set = BTreeSet::new();
        let mut width = n;
        for m in monomials {
            width = width.max(64 - m.leading_zeros() as usize);
            if !set.remove(&m) {
                set.insert(m);
            }
        }
        Anf {
            n: width,
            monomials: set,
        }
    }

    /// Sum of the pairwise products `x_a x_b` for the listed edges.
    pub fn quadratic(n: usize, edges: &[(usize, usize)]) -> Self {
        Self::from_monomials(n, edges.iter().map(|&(a, b)| (1u64 << a) | (1u64 << b)))
    }

    /// Affine form `Σ_{i∈mask} x_i + constant`.
    pub fn affine(n: usize, mask: u64, constant: bool) -> Self {
        let mut terms: Vec<u64> = (0..64)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| 1u64 << i)
            .collect();
        if constant {
            terms.push(0);
        }
        Self::from_monomials(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = self.n.max(n);
        self
    }

    pub fn monomials(&self) -> impl Iterator<Item = u64> + '_ {
        self.monomials.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.monomials.len() == 1 && self.monomials.contains(&0)
    }

    pub fn has_constant(&self) -> bool {
        self.monomials.contains(&0)
    }

    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Mask of the variables that occur.
    pub fn vars(&self) -> u64 {
        self.monomials.iter().fold(0, |acc, m| acc | m)
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.monomials.iter().any(|m| m >> i & 1 == 1)
    }

    /// The only monomial containing `x_i` is `x_i` itself.
    pub fn is_linear_in(&self, i: usize) -> bool {
        let bit = 1u64 << i;
        let with: Vec<u64> = self
            .monomials
            .iter()
            .copied()
            .filter(|m| m & bit != 0)
            .collect();
        with == [bit]
    }

    /// Linear part mask when every monomial has degree at most one.
    pub fn as_affine(&self) -> Option<(u64, bool)> {
        if self.degree() > 1 {
            return None;
        }
        Some((self.vars(), self.has_constant()))
    }

    pub fn add(&self, other: &Anf) -> Anf {
        let monomials = self
            .monomials
            .symmetric_difference(&other.monomials)
            .copied()
            .collect();
        Anf {
            n: self.n.max(other.n),
            monomials,
        }
    }

    pub fn mul(&self, other: &Anf) -> Anf {
        let mut out: BTreeSet<u64> = BTreeSet::new();
        for &a in &self.monomials {
            for &b in &other.monomials {
                let m = a | b;
                if !out.remove(&m) {
                    out.insert(m);
                }
            }
        }
        Anf {
            n: self.n.max(other.n),
            monomials: out,
        }
    }

    /// `self + 1`.
    pub fn complement(&self) -> Anf {
        self.add(&Anf::one(self.n))
    }

    /// Substitutes the constant `value` for `x_i`.
    pub fn restrict(&self, i: usize, value: bool) -> Anf {
        let bit = 1u64 << i;
        let terms = self.monomials.iter().filter_map(|&m| {
            if m & bit == 0 {
                Some(m)
            } else if value {
                Some(m & !bit)
            } else {
                None
            }
        });
        Anf::from_monomials(self.n, terms)
    }

    /// `f|_{x_i=0} + f|_{x_i=1}`: the coefficient of `x_i`.
    pub fn derivative(&self, i: usize) -> Anf {
        let bit = 1u64 << i;
        Anf::from_monomials(
            self.n,
            self.monomials
                .iter()
                .filter(|&&m| m & bit != 0)
                .map(|&m| m & !bit),
        )
    }

    /// Substitutes the polynomial `g` for `x_i`.
    pub fn substitute(&self, i: usize, g: &Anf) -> Anf {
        self.restrict(i, false).add(&g.mul(&self.derivative(i)))
    }

    pub fn eval(&self, x: u64) -> bool {
        self.monomials.iter().filter(|&&m| m & !x == 0).count() % 2 == 1
    }

    /// Values at all `2^n` points, by the binary Möbius transform.
    pub fn truth_table(&self, n: usize) -> Result<Vec<u8>> {
        Error::guard("variable count", n, MAX_TRUTH_TABLE_VARS)?;
        if self.vars() >> n != 0 {
            return Err(Error::Precondition(format!(
                "polynomial uses variables beyond x{}",
                n.saturating_sub(1)
            )));
        }
        let mut t = vec![0u8; 1 << n];
        for &m in &self.monomials {
            t[m as usize] = 1;
        }
        mobius(&mut t, n);
        Ok(t)
    }

    /// Inverse of [`Anf::truth_table`].
    pub fn from_truth_table(n: usize, table: &[u8]) -> Result<Anf> {
        Error::guard("variable count", n, MAX_TRUTH_TABLE_VARS)?;
        if table.len() != 1 << n {
            return Err(Error::Precondition("truth table length is not 2^n".into()));
        }
        let mut t: Vec<u8> = table.iter().map(|v| v & 1).collect();
        mobius(&mut t, n);
        Ok(Anf::from_monomials(
            n,
            t.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(m, _)| m as u64),
        ))
    }

    /// Parses the grammar `term ('+' term)*`, where a term is `1`, `0`, or
    /// variables `x<digits>` joined by `*` (juxtaposition is also accepted).
    pub fn parse(text: &str) -> Result<Anf> {
        let mut p = Parser {
            chars: text.char_indices().collect(),
            at: 0,
            end: text.len(),
        };
        let anf = p.sum()?;
        p.skip_ws();
        if p.at < p.chars.len() {
            return Err(Error::parse(
                p.pos(),
                format!("unexpected {:?}", p.chars[p.at].1),
            ));
        }
        Ok(anf)
    }

    fn sorted_terms(&self) -> Vec<u64> {
        let mut terms: Vec<u64> = self.monomials.iter().copied().collect();
        terms.sort_by(|&a, &b| monomial_order(a, b));
        terms
    }
}

/// Lexicographic on the ascending variable lists, with a list sorting
/// before its own prefixes (so the constant comes last).
fn monomial_order(a: u64, b: u64) -> Ordering {
    let (va, vb) = (var_list(a), var_list(b));
    for (x, y) in va.iter().zip(&vb) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    vb.len().cmp(&va.len())
}

fn var_list(m: u64) -> Vec<u32> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

fn mobius(t: &mut [u8], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..t.len() {
            if x & bit != 0 {
                t[x] ^= t[x ^ bit];
            }
        }
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    var_list(m)
                        .iter()
                        .map(|v| format!("x{v}"))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |c| c.0)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.1)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.at += 1;
        }
    }

    fn sum(&mut self) -> Result<Anf> {
        let mut acc = Anf::zero(0);
        loop {
            let term = self.product()?;
            acc = acc.add(&term);
            self.skip_ws();
            if self.peek() == Some('+') {
                self.at += 1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Anf> {
        let mut mask = 0u64;
        let mut zero = false;
        let mut factors = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('x') => {
                    self.at += 1;
                    let start = self.pos();
                    let mut digits = String::new();
                    while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                        digits.push(c);
                        self.at += 1;
                    }
                    if digits.is_empty() {
                        return Err(Error::parse(start, "expected variable index after 'x'"));
                    }
                    let idx: usize = digits
                        .parse()
                        .map_err(|_| Error::parse(start, "bad variable index"))?;
                    if idx >= 64 {
                        return Err(Error::parse(start, "variable index above 63"));
                    }
                    mask |= 1 << idx;
                }
                Some('1') => self.at += 1,
                Some('0') => {
                    self.at += 1;
                    zero = true;
                }
                Some(c) => return Err(Error::parse(self.pos(), format!("unexpected {c:?}"))),
                None => return Err(Error::parse(self.pos(), "unexpected end of input")),
            }
            factors += 1;
            self.skip_ws();
            match self.peek() {
                Some('*') => self.at += 1,
                Some('x') => {}
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        Ok(if zero {
            Anf::zero(0)
        } else {
            Anf::from_monomials(0, [mask])
        })
    }
}
