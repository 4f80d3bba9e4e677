//! Linear algebra over GF(2): packed bit matrices, binary linear codes and
//! their weight hierarchies.
//!
//! Codewords are stored as `u64` words where bit `i` holds coordinate `i`,
//! so a codeword doubles as the index of its amplitude in an indicator
//! state vector.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Largest code dimension accepted by [`LinearCode::codewords`].
pub const MAX_ENUM_DIMENSION: usize = 20;
/// Largest code dimension accepted by [`LinearCode::weight_hierarchy_oracle`].
pub const MAX_ORACLE_DIMENSION: usize = 8;

/// Dense binary matrix with each row packed into machine words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD).max(1);
        BinaryMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows given as bit masks (bit `j` is column `j`).
    /// Requires `cols <= 64`.
    pub fn from_row_masks(cols: usize, rows: &[u64]) -> Self {
        assert!(cols <= WORD, "row masks hold at most 64 columns");
        let mut m = Self::zeros(rows.len(), cols);
        let keep = low_mask(cols);
        for (r, &mask) in rows.iter().enumerate() {
            m.bits[r * m.words_per_row] = mask & keep;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        let w = self.bits[r * self.words_per_row + c / WORD];
        (w >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.words_per_row + c / WORD];
        if value {
            *w |= 1 << (c % WORD);
        } else {
            *w &= !(1 << (c % WORD));
        }
    }

    /// Row `r` as a bit mask. Requires `cols <= 64`.
    pub fn row_mask(&self, r: usize) -> u64 {
        assert!(self.cols <= WORD);
        self.bits[r * self.words_per_row]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Sub-matrix formed by the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words_per_row;
        for i in 0..w {
            let v = self.bits[src * w + i];
            self.bits[dst * w + i] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.bits.swap(a * w + i, b * w + i);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, next);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row_into(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        // forward elimination only; pivots found word by word
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let (wi, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (rank..m.rows).find(|&r| m.row_words(r)[wi] & bit != 0) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in rank + 1..m.rows {
                if m.row_words(r)[wi] & bit != 0 {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Reduces a list of row masks to a basis in reduced echelon form.
/// Returns the basis rows and their pivot bit positions (pivot = lowest set bit).
fn echelon_basis(rows: &[u64]) -> (Vec<u64>, Vec<u32>) {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            if v & (1 << b.trailing_zeros()) != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = v.trailing_zeros();
            for b in basis.iter_mut() {
                if *b & (1 << p) != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    let pivots = basis.iter().map(|b| b.trailing_zeros()).collect();
    (basis, pivots)
}

/// A binary linear `[n, k]` code given by `k` independent generator rows.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    generator: Vec<u64>,
}

impl LinearCode {
    /// Builds a code from independent generator rows (bit `i` = coordinate `i`).
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Self> {
        Error::guard("blocklength", n, 64)?;
        let keep = low_mask(n);
        if rows.iter().any(|r| r & !keep != 0) {
            return Err(Error::Precondition(format!(
                "generator row has bits beyond blocklength {n}"
            )));
        }
        let (basis, _) = echelon_basis(&rows);
        if basis.len() != rows.len() {
            return Err(Error::DependentRows);
        }
        Ok(LinearCode { n, generator: rows })
    }

    /// Builds the code spanned by `rows`, dropping dependent rows.
    pub fn from_spanning(n: usize, rows: &[u64]) -> Result<Self> {
        Error::guard("blocklength", n, 64)?;
        let keep = low_mask(n);
        let masked: Vec<u64> = rows.iter().map(|r| r & keep).collect();
        let (basis, _) = echelon_basis(&masked);
        Ok(LinearCode {
            n,
            generator: basis,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn generator_rows(&self) -> &[u64] {
        &self.generator
    }

    pub fn generator(&self) -> BinaryMatrix {
        BinaryMatrix::from_row_masks(self.n, &self.generator)
    }

    /// Generator in reduced echelon form together with its pivot coordinates.
    pub fn systematic(&self) -> (Vec<u64>, Vec<usize>) {
        let (basis, pivots) = echelon_basis(&self.generator);
        (basis, pivots.into_iter().map(|p| p as usize).collect())
    }

    /// Union of the supports of all codewords.
    pub fn support(&self) -> u64 {
        self.generator.iter().fold(0, |acc, r| acc | r)
    }

    pub fn contains(&self, word: u64) -> bool {
        let (basis, _) = echelon_basis(&self.generator);
        let mut v = word;
        for b in &basis {
            if v & (1 << b.trailing_zeros()) != 0 {
                v ^= b;
            }
        }
        v == 0
    }

    /// Dual code `C⊥` of dimension `n - k`.
    pub fn dual(&self) -> LinearCode {
        let (basis, pivots) = echelon_basis(&self.generator);
        let pivot_mask: u64 = pivots.iter().fold(0, |acc, &p| acc | (1 << p));
        let mut rows = Vec::with_capacity(self.n - basis.len());
        for f in (0..self.n).filter(|f| pivot_mask & (1 << f) == 0) {
            let mut v = 1u64 << f;
            for (b, &p) in basis.iter().zip(&pivots) {
                if b & (1 << f) != 0 {
                    v |= 1 << p;
                }
            }
            rows.push(v);
        }
        LinearCode {
            n: self.n,
            generator: rows,
        }
    }

    /// All `2^k` codewords, in Gray-code order starting from zero.
    pub fn codewords(&self) -> Result<Vec<u64>> {
        Error::guard("code dimension", self.k(), MAX_ENUM_DIMENSION)?;
        let k = self.k();
        let mut words = Vec::with_capacity(1 << k);
        let mut w = 0u64;
        words.push(w);
        for i in 1u64..(1 << k) {
            w ^= self.generator[i.trailing_zeros() as usize];
            words.push(w);
        }
        Ok(words)
    }

    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self
            .codewords()?
            .into_iter()
            .filter(|&w| w != 0)
            .map(|w| w.count_ones() as usize)
            .min())
    }

    /// Generalized Hamming weights by exhaustive enumeration of subcodes.
    ///
    /// Every `j`-dimensional subcode corresponds to exactly one `j x k`
    /// reduced echelon matrix over the message space, so those matrices are
    /// enumerated directly; the support of a subcode is the union of the
    /// supports of its basis codewords.
    pub fn weight_hierarchy_oracle(&self) -> Result<WeightHierarchy> {
        let k = self.k();
        Error::guard("code dimension", k, MAX_ORACLE_DIMENSION)?;
        let mut d = vec![0usize; k + 1];
        for (j, slot) in d.iter_mut().enumerate().skip(1) {
            let mut best = usize::MAX;
            for_each_rref(k, j, &mut |basis: &[u32]| {
                let support = basis
                    .iter()
                    .fold(0u64, |acc, &msg| acc | self.encode(msg as u64));
                best = best.min(support.count_ones() as usize);
            });
            *slot = best;
        }
        WeightHierarchy::new(d)
    }

    /// Coordinate blocks over which the code splits as a direct sum, i.e.
    /// the tensor factors of its indicator. Two coordinates share a block
    /// when they are joined in the fundamental graph of a systematic basis.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let (basis, pivots) = echelon_basis(&self.generator);
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for (row, &p) in basis.iter().zip(&pivots) {
            let others = row & !(1u64 << p);
            for c in (0..self.n).filter(|c| others >> c & 1 == 1) {
                let (a, b) = (find(&mut parent, p as usize), find(&mut parent, c));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n];
        for i in 0..self.n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[r]].push(i);
        }
        blocks
    }

    /// Largest block of [`LinearCode::components`], or 0 if all are singletons.
    pub fn entanglement_order(&self) -> usize {
        let max = self.components().iter().map(Vec::len).max().unwrap_or(0);
        if max <= 1 {
            0
        } else {
            max
        }
    }

    /// Codeword for a message vector (bit `r` selects generator row `r`).
    pub fn encode(&self, message: u64) -> u64 {
        self.generator
            .iter()
            .enumerate()
            .filter(|(r, _)| message >> r & 1 == 1)
            .fold(0, |acc, (_, g)| acc ^ g)
    }

    /// Parses the plain-text generator format: one row per line of `0`/`1`
    /// characters, leftmost character is coordinate 0. Blank lines and `#`
    /// comments are skipped; an optional `n=<int>` line fixes the blocklength
    /// (needed for the zero-dimensional code).
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut rows = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let pos = offset;
            offset += line.len();
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(v) = body.strip_prefix("n=") {
                let parsed = v
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(pos, "bad blocklength header"))?;
                if n.is_some_and(|m| m != parsed) {
                    return Err(Error::parse(pos, "blocklength header disagrees with rows"));
                }
                n = Some(parsed);
                continue;
            }
            let mut mask = 0u64;
            let mut len = 0;
            for (i, ch) in body.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' if i < 64 => mask |= 1 << i,
                    '1' => return Err(Error::parse(pos + i, "row longer than 64 bits")),
                    c if c.is_whitespace() => {
                        return Err(Error::parse(pos + i, "whitespace inside a row"))
                    }
                    c => return Err(Error::parse(pos + i, format!("unexpected character {c:?}"))),
                }
                len += 1;
            }
            match n {
                Some(m) if m != len => {
                    return Err(Error::parse(
                        pos,
                        format!("row has {len} bits, expected {m}"),
                    ))
                }
                _ => n = Some(len),
            }
            rows.push(mask);
        }
        let n = n.ok_or_else(|| Error::parse(0, "no generator rows and no n= header"))?;
        LinearCode::new(n, rows)
    }

    /// Serializes in the format accepted by [`LinearCode::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for &r in &self.generator {
            out.push_str(&word_string(r, self.n));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .generator
            .iter()
            .map(|&r| word_string(r, self.n))
            .collect();
        write!(
            f,
            "LinearCode[{},{}] {{{}}}",
            self.n,
            self.k(),
            rows.join(", ")
        )
    }
}

/// Coordinate-0-first string of an `n`-bit word.
pub fn word_string(word: u64, n: usize) -> String {
    (0..n)
        .map(|i| if word >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a coordinate-0-first bit string into a word.
pub fn parse_word(s: &str) -> Result<u64> {
    let mut w = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' if i < 64 => w |= 1 << i,
            _ => return Err(Error::parse(i, format!("bad bit {ch:?}"))),
        }
    }
    Ok(w)
}

/// Calls `f` with a basis (as message-space masks) of every `j`-dimensional
/// subspace of GF(2)^k, each subspace exactly once.
fn for_each_rref(k: usize, j: usize, f: &mut dyn FnMut(&[u32])) {
    fn free_positions(pivots: &[usize], k: usize) -> Vec<(usize, usize)> {
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..k {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        free
    }
    let mut pivots = Vec::with_capacity(j);
    let mut rows = vec![0u32; j];
    choose(0, k, j, &mut pivots, &mut |pivots: &[usize]| {
        let free = free_positions(pivots, k);
        for assignment in 0u64..(1u64 << free.len()) {
            for (r, &p) in pivots.iter().enumerate() {
                rows[r] = 1 << p;
            }
            for (bit, &(r, c)) in free.iter().enumerate() {
                if assignment >> bit & 1 == 1 {
                    rows[r] |= 1 << c;
                }
            }
            f(&rows);
        }
    });
}

fn choose(start: usize, k: usize, j: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == j {
        f(acc);
        return;
    }
    for c in start..k {
        if k - c < j - acc.len() {
            break;
        }
        acc.push(c);
        choose(c + 1, k, j, acc, f);
        acc.pop();
    }
}

/// Generalized Hamming weights `d_0 < d_1 < ... < d_k`.
///
/// `d_k` is the size of the code's support, which is `n` unless some
/// coordinate is identically zero.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct WeightHierarchy(Vec<usize>);

impl WeightHierarchy {
    pub fn new(d: Vec<usize>) -> Result<Self> {
        if d.first() != Some(&0) {
            return Err(Error::Precondition(
                "weight hierarchy must start at d_0 = 0".into(),
            ));
        }
        if d.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!(
                "weight hierarchy {d:?} is not strictly increasing"
            )));
        }
        Ok(WeightHierarchy(d))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(n: usize, rows: &[&str]) -> LinearCode {
        LinearCode::new(n, rows.iter().map(|r| parse_word(r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(BinaryMatrix::identity(3).rank(), 3);
        assert_eq!(BinaryMatrix::zeros(4, 5).rank(), 0);
    }

    #[test]
    fn rank_of_connection_submatrix() {
        // p = x3x0 + x0x2 + x2x1 + x1x4 + x4x0, rows {0,1}, cols {2,3,4}
        // row 0: x2 x3 x4 -> 1 1 1 ; row 1: x2 x3 x4 -> 1 0 1
        let m = BinaryMatrix::from_fn(2, 3, |r, c| [[true, true, true], [true, false, true]][r][c]);
        assert_eq!(m.rank(), 2);
        // restricted to rows {0}, cols {2}: single 1
        assert_eq!(m.submatrix(&[0], &[0]).rank(), 1);
        // rows {0,1}, cols {2,4}: identical columns give rank 1
        assert_eq!(m.submatrix(&[0, 1], &[0, 2]).rank(), 1);
    }

    #[test]
    fn wide_matrix_rank_spans_words() {
        let m = BinaryMatrix::from_fn(3, 130, |r, c| c == 64 * r + 1 || c == 129);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.transpose().rank(), 3);
    }

    #[test]
    fn dual_of_parity_code_is_repetition() {
        let c = code(3, &["110", "011"]);
        let d = c.dual();
        assert_eq!(d.k(), 1);
        let mut words = d.codewords().unwrap();
        words.sort();
        assert_eq!(words, vec![0b000, 0b111]);
    }

    #[test]
    fn dual_of_full_space_is_trivial() {
        let c = LinearCode::new(4, vec![1, 2, 4, 8]).unwrap();
        let d = c.dual();
        assert_eq!((d.n(), d.k()), (4, 0));
        assert_eq!(d.codewords().unwrap(), vec![0]);
    }

    #[test]
    fn dual_of_523_is_orthogonal() {
        let c = code(5, &["11010", "01101"]);
        let d = c.dual();
        assert_eq!(d.k(), 3);
        for a in c.codewords().unwrap() {
            for b in d.codewords().unwrap() {
                assert_eq!((a & b).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn codewords_of_523() {
        let c = code(5, &["11010", "01101"]);
        let mut words: Vec<String> = c
            .codewords()
            .unwrap()
            .iter()
            .map(|&w| word_string(w, 5))
            .collect();
        words.sort();
        assert_eq!(words, vec!["00000", "01101", "10111", "11010"]);
        assert_eq!(c.min_distance().unwrap(), Some(3));
    }

    #[test]
    fn zero_dimensional_code_has_one_word() {
        let c = LinearCode::new(5, vec![]).unwrap();
        assert_eq!(c.codewords().unwrap(), vec![0]);
        assert_eq!(c.weight_hierarchy_oracle().unwrap().as_slice(), &[0]);
    }

    #[test]
    fn enumeration_guard() {
        let rows: Vec<u64> = (0..21).map(|i| 1 << i).collect();
        let c = LinearCode::new(21, rows).unwrap();
        assert!(matches!(c.codewords(), Err(Error::TooLarge { .. })));
        assert!(matches!(
            c.weight_hierarchy_oracle(),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn dependent_rows_rejected() {
        assert_eq!(
            LinearCode::new(3, vec![0b011, 0b110, 0b101]),
            Err(Error::DependentRows)
        );
        assert_eq!(
            LinearCode::from_spanning(3, &[0b011, 0b110, 0b101])
                .unwrap()
                .k(),
            2
        );
    }

    #[test]
    fn hierarchy_of_523_and_repetition() {
        let c = code(5, &["11010", "01101"]);
        assert_eq!(c.weight_hierarchy_oracle().unwrap().as_slice(), &[0, 3, 5]);
        for n in 1..8 {
            let rep = LinearCode::new(n, vec![low_mask(n)]).unwrap();
            assert_eq!(rep.weight_hierarchy_oracle().unwrap().as_slice(), &[0, n]);
        }
    }

    #[test]
    fn rref_enumeration_counts_subspaces() {
        // Gaussian binomial coefficients [4 choose j]_2 = 1, 15, 35, 15, 1
        let expected = [1, 15, 35, 15, 1];
        for (j, &e) in expected.iter().enumerate() {
            let mut count = 0;
            for_each_rref(4, j, &mut |_| count += 1);
            assert_eq!(count, e, "j = {j}");
        }
    }

    #[test]
    fn parse_and_print_code_file() {
        let text = "# [5,2,3]\n11010\n\n01101  # second row\n";
        let c = LinearCode::parse(text).unwrap();
        assert_eq!((c.n(), c.k()), (5, 2));
        let again = LinearCode::parse(&c.to_text()).unwrap();
        assert_eq!(again, c);
        assert!(matches!(
            LinearCode::parse("110\n01\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            LinearCode::parse("1x0\n"),
            Err(Error::Parse { pos: 1, .. })
        ));
        assert_eq!(LinearCode::parse("n=4\n").unwrap().k(), 0);
    }
}
