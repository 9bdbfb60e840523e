//! The permutation value type, its statistics and symmetries.
//!
//! Positions and values are 1-based everywhere in the public surface: a
//! permutation of size `n` is a word holding each of `1..=n` exactly once.
//! The empty permutation is allowed and is the neutral element for both
//! [`Permutation::direct_sum`] and [`Permutation::skew_sum`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed permutation text {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("duplicate entry {0} in word")]
    DuplicateEntry(i64),
}

/// A permutation in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// Validates that `word` is a rearrangement of `1..=word.len()`.
    pub fn new(word: Vec<u32>) -> Result<Self, PermError> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &v in &word {
            if v == 0 || v as usize > n {
                return Err(PermError::NotAPermutation { n, reason: format!("value {v} out of range") });
            }
            if std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(PermError::NotAPermutation { n, reason: format!("value {v} repeated") });
            }
        }
        Ok(Self { word })
    }

    /// Caller guarantees the invariant.
    pub(crate) fn from_vec_unchecked(word: Vec<u32>) -> Self {
        debug_assert!(Self::new(word.clone()).is_ok(), "{word:?}");
        Self { word }
    }

    pub(crate) fn word_mut(&mut self) -> &mut Vec<u32> {
        &mut self.word
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn identity(n: usize) -> Self {
        Self { word: (1..=n as u32).collect() }
    }

    /// The decreasing permutation `n (n-1) ... 2 1`.
    pub fn decreasing(n: usize) -> Self {
        Self { word: (1..=n as u32).rev().collect() }
    }

    pub fn special(kind: SpecialKind, n: usize) -> Self {
        match kind {
            SpecialKind::Identity => Self::identity(n),
            SpecialKind::Decreasing => Self::decreasing(n),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.word
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.word
    }

    /// Value at a 1-based position.
    pub fn at(&self, position: usize) -> u32 {
        self.word[position - 1]
    }

    /// 1-based position of `value`.
    pub fn position_of(&self, value: u32) -> Option<usize> {
        self.word.iter().position(|&v| v == value).map(|i| i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self { word: inv }
    }

    pub fn reverse_complement(&self) -> Self {
        let n = self.len() as u32;
        Self { word: self.word.iter().rev().map(|&v| n + 1 - v).collect() }
    }

    pub fn apply_symmetry(&self, kind: SymmetryKind) -> Self {
        match kind {
            SymmetryKind::Inverse => self.inverse(),
            SymmetryKind::ReverseComplement => self.reverse_complement(),
            SymmetryKind::ReverseComplementInverse => self.reverse_complement().inverse(),
        }
    }

    pub fn is_in_class(&self, class: SymmetryClass) -> bool {
        match class {
            SymmetryClass::Involution => {
                self.word.iter().enumerate().all(|(i, &v)| self.word[v as usize - 1] as usize == i + 1)
            }
            SymmetryClass::Centrosymmetric => {
                let n = self.len() as u32;
                let w = &self.word;
                (0..w.len()).all(|i| w[i] + w[w.len() - 1 - i] == n + 1)
            }
            SymmetryClass::Persymmetric => *self == self.apply_symmetry(SymmetryKind::ReverseComplementInverse),
        }
    }

    /// `self ⊕ other`: `other` is placed after `self` and shifted above it.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let shift = self.len() as u32;
        let mut word = self.word.clone();
        word.extend(other.word.iter().map(|&v| v + shift));
        Self { word }
    }

    /// `self ⊖ other`: `self` is shifted above `other` and placed first.
    pub fn skew_sum(&self, other: &Self) -> Self {
        let shift = other.len() as u32;
        let mut word: Vec<u32> = self.word.iter().map(|&v| v + shift).collect();
        word.extend_from_slice(&other.word);
        Self { word }
    }

    pub fn statistics(&self) -> StatVector {
        let n = self.len();
        let cycles = self.cycles();
        StatVector {
            displacement: self.displacement(),
            inversions: self.inversions(),
            cycles,
            reflection_length: n - cycles,
            descents: self.descents(),
            lr_maxima: self.lr_maxima(),
            rl_minima: self.rl_minima(),
        }
    }

    pub fn displacement(&self) -> u64 {
        self.word.iter().enumerate().map(|(i, &v)| (v as i64 - (i as i64 + 1)).unsigned_abs()).sum()
    }

    /// Inversion count with a Fenwick tree over values, `O(n log n)`.
    pub fn inversions(&self) -> u64 {
        let n = self.len();
        if n < 2 {
            return 0;
        }
        if n <= 16 {
            // Small words: a bitmask of seen values beats the tree.
            let mut seen = 0u32;
            let mut inv = 0u64;
            for &v in &self.word {
                inv += (seen >> v).count_ones() as u64;
                seen |= 1 << v;
            }
            return inv;
        }
        let mut tree = vec![0u32; n + 1];
        let mut inv = 0u64;
        for (placed, &v) in self.word.iter().enumerate() {
            let mut i = v as usize;
            let mut not_greater = 0u64;
            while i > 0 {
                not_greater += tree[i] as u64;
                i &= i - 1;
            }
            inv += placed as u64 - not_greater;
            let mut i = v as usize;
            while i <= n {
                tree[i] += 1;
                i += i & i.wrapping_neg();
            }
        }
        inv
    }

    pub fn cycles(&self) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.word[i] as usize - 1;
            }
        }
        count
    }

    pub fn reflection_length(&self) -> usize {
        self.len() - self.cycles()
    }

    pub fn descents(&self) -> usize {
        self.word.windows(2).filter(|w| w[0] > w[1]).count()
    }

    pub fn lr_maxima(&self) -> usize {
        let mut best = 0;
        self.word
            .iter()
            .filter(|&&v| {
                let record = v > best;
                best = best.max(v);
                record
            })
            .count()
    }

    pub fn rl_minima(&self) -> usize {
        let mut best = u32::MAX;
        self.word
            .iter()
            .rev()
            .filter(|&&v| {
                let record = v < best;
                best = best.min(v);
                record
            })
            .count()
    }

    /// Whether the entry at 1-based `position` exceeds every entry before it.
    pub fn is_lr_max_at(&self, position: usize) -> bool {
        let v = self.word[position - 1];
        self.word[..position - 1].iter().all(|&u| u < v)
    }

    /// Whether the entry at 1-based `position` is below every entry after it.
    pub fn is_rl_min_at(&self, position: usize) -> bool {
        let v = self.word[position - 1];
        self.word[position..].iter().all(|&u| u > v)
    }

    /// Advances to the lexicographically next permutation of the same size.
    /// Returns `false` (leaving `self` unchanged) at the last one.
    pub fn next_lex(&mut self) -> bool {
        next_lex_slice(&mut self.word)
    }
}

pub(crate) fn next_lex_slice(w: &mut [u32]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// Standardizes a word of distinct integers to the permutation with the same
/// relative order, e.g. `48291 -> 34251`.
pub fn reduce<T: Ord + Copy + Into<i64>>(word: &[T]) -> Result<Permutation, PermError> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by_key(|&i| word[i]);
    for pair in order.windows(2) {
        if word[pair[0]] == word[pair[1]] {
            return Err(PermError::DuplicateEntry(word[pair[0]].into()));
        }
    }
    let mut out = vec![0u32; word.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Ok(Permutation { word: out })
}

/// Parses a permutation from comma/whitespace-separated integers, or from a
/// bare digit string when every value is a single digit.
pub fn parse_permutation(text: &str) -> Result<Permutation, PermError> {
    let trimmed = text.trim();
    let parse_err = |reason: String| PermError::Parse { text: text.to_string(), reason };
    if trimmed.is_empty() {
        return Ok(Permutation::empty());
    }
    let delimited = trimmed.contains(|c: char| c == ',' || c.is_whitespace());
    let values: Vec<u32> = if delimited {
        trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| parse_err(format!("token {t:?}: {e}"))))
            .collect::<Result<_, _>>()?
    } else {
        if !trimmed.chars().all(|c| c.is_ascii_digit()) {
            return Err(parse_err("expected digits".into()));
        }
        if trimmed.len() > 9 {
            return Err(parse_err("digit strings are limited to 9 entries; separate larger values with commas".into()));
        }
        trimmed.bytes().map(|b| (b - b'0') as u32).collect()
    };
    Permutation::new(values)
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_permutation(s)
    }
}

/// Canonical text form: comma separated, no whitespace.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_permutation(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatVector {
    pub displacement: u64,
    pub inversions: u64,
    pub cycles: usize,
    pub reflection_length: usize,
    pub descents: usize,
    pub lr_maxima: usize,
    pub rl_minima: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryKind {
    Inverse,
    ReverseComplement,
    ReverseComplementInverse,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 3] = [Self::Inverse, Self::ReverseComplement, Self::ReverseComplementInverse];
}

/// Permutations fixed by one of the three symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryClass {
    Involution,
    Centrosymmetric,
    Persymmetric,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 3] = [Self::Involution, Self::Centrosymmetric, Self::Persymmetric];

    pub fn kind(self) -> SymmetryKind {
        match self {
            Self::Involution => SymmetryKind::Inverse,
            Self::Centrosymmetric => SymmetryKind::ReverseComplement,
            Self::Persymmetric => SymmetryKind::ReverseComplementInverse,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Self::Involution => "inv",
            Self::Centrosymmetric => "centro",
            Self::Persymmetric => "persym",
        }
    }
}

impl FromStr for SymmetryClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "inv" | "involution" => Ok(Self::Involution),
            "centro" | "centrosymmetric" => Ok(Self::Centrosymmetric),
            "persym" | "persymmetric" => Ok(Self::Persymmetric),
            other => Err(format!("unknown symmetry class {other:?} (expected inv|centro|persym)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    Identity,
    Decreasing,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut cur = Some(Permutation::identity(n));
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            cur = next.next_lex().then_some(next);
            Some(out)
        })
    }

    fn brute_inversions(w: &[u32]) -> u64 {
        let mut c = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                c += (w[i] > w[j]) as u64;
            }
        }
        c
    }

    #[test]
    fn parses_digit_and_delimited_forms() {
        assert_eq!(p("421635").as_slice(), &[4, 2, 1, 6, 3, 5]);
        assert_eq!(p("4, 2 1,6,3,5"), p("421635"));
        assert_eq!(p("1").as_slice(), &[1]);
        assert_eq!(p("").len(), 0);
        assert_eq!(p("10,9,8,7,6,5,4,3,2,1"), Permutation::decreasing(10));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_permutation("4,2,13,1,4"), Err(PermError::NotAPermutation { .. })));
        assert!(matches!(parse_permutation("4,2,2,1"), Err(PermError::NotAPermutation { .. })));
        assert!(matches!(parse_permutation("0"), Err(PermError::NotAPermutation { .. })));
        assert!(matches!(parse_permutation("1,x"), Err(PermError::Parse { .. })));
        assert!(matches!(parse_permutation("12a"), Err(PermError::Parse { .. })));
        // ten digits would need a two-digit value
        assert!(matches!(parse_permutation("1234567891"), Err(PermError::Parse { .. })));
    }

    #[test]
    fn canonical_text_round_trips() {
        let q = p("421635");
        assert_eq!(q.to_string(), "4,2,1,6,3,5");
        assert_eq!(p(&q.to_string()), q);
    }

    #[test]
    fn statistics_of_small_examples() {
        let s = p("321").statistics();
        assert_eq!((s.displacement, s.inversions, s.cycles, s.reflection_length), (4, 3, 2, 1));
        assert_eq!((s.descents, s.lr_maxima, s.rl_minima), (2, 1, 1));

        let s = Permutation::identity(6).statistics();
        assert_eq!((s.displacement, s.inversions, s.reflection_length, s.descents, s.lr_maxima), (0, 0, 0, 0, 6));

        let s = p("3412").statistics();
        assert_eq!((s.displacement, s.inversions, s.reflection_length), (8, 4, 2));

        let s = Permutation::empty().statistics();
        assert_eq!((s.displacement, s.inversions, s.reflection_length, s.descents, s.lr_maxima), (0, 0, 0, 0, 0));
    }

    #[test]
    fn only_3412_has_slack_among_size_four() {
        let slack: Vec<_> = all(4)
            .filter(|q| {
                let s = q.statistics();
                s.inversions + s.reflection_length as u64 != s.displacement
            })
            .collect();
        assert_eq!(slack, vec![p("3412")]);
    }

    #[test]
    fn symmetry_examples() {
        let q = p("421635");
        let inv = q.inverse();
        assert_eq!(inv, p("325164"));
        let w = q.as_slice();
        for i in 1..=6 {
            assert_eq!(inv.at(w[i - 1] as usize) as usize, i);
        }
        let id = Permutation::identity(5);
        assert_eq!(id.apply_symmetry(SymmetryKind::ReverseComplement), id);
        for q in all(5) {
            assert_eq!(q.apply_symmetry(SymmetryKind::ReverseComplementInverse), q.reverse_complement().inverse());
        }
    }

    #[test]
    fn sums_and_reduction() {
        assert_eq!(p("4312").direct_sum(&p("53142")), p("431297586"));
        assert_eq!(Permutation::empty().direct_sum(&p("2413")), p("2413"));
        assert_eq!(p("1").direct_sum(&p("1")), p("12"));
        assert_eq!(p("312").direct_sum(&p("1")).skew_sum(&p("21")), p("534621"));
        assert_eq!(p("2413").skew_sum(&Permutation::empty()), p("2413"));
        assert_eq!(p("1").skew_sum(&p("1")), p("21"));
        assert_eq!(reduce(&[4, 8, 2, 9, 1]).unwrap(), p("34251"));
        assert_eq!(reduce(&[9, 4, 8, 2]).unwrap(), p("4231"));
        assert_eq!(reduce(&[3, 1, 3]), Err(PermError::DuplicateEntry(3)));
        assert_eq!(reduce::<u32>(&[]).unwrap(), Permutation::empty());
    }

    #[test]
    fn special_permutations() {
        assert_eq!(Permutation::special(SpecialKind::Decreasing, 4), p("4321"));
        assert_eq!(Permutation::special(SpecialKind::Identity, 3), p("123"));
        assert!(Permutation::special(SpecialKind::Decreasing, 0).is_empty());
    }

    #[test]
    fn class_membership() {
        assert!(p("4321").is_in_class(SymmetryClass::Involution));
        // 23451 is fixed by rci but not by rc
        assert!(p("23451").is_in_class(SymmetryClass::Persymmetric));
        assert!(!p("23451").is_in_class(SymmetryClass::Centrosymmetric));
        assert!(!p("23451").is_in_class(SymmetryClass::Involution));
        for c in SymmetryClass::ALL {
            assert!(p("21").is_in_class(c));
        }
        for n in 0..=6 {
            for q in all(n) {
                for c in SymmetryClass::ALL {
                    assert_eq!(q.is_in_class(c), q == q.apply_symmetry(c.kind()), "{q} {c:?}");
                }
            }
        }
    }

    #[test]
    fn lex_iteration_covers_symmetric_group() {
        assert_eq!(all(0).count(), 1);
        assert_eq!(all(5).count(), 120);
        let v: Vec<_> = all(3).map(|q| q.to_string()).collect();
        assert_eq!(v, ["1,2,3", "1,3,2", "2,1,3", "2,3,1", "3,1,2", "3,2,1"]);
    }

    #[test]
    fn exhaustive_invariants_up_to_seven() {
        for n in 0..=7 {
            for q in all(n) {
                let s = q.statistics();
                for k in SymmetryKind::ALL {
                    let image = q.apply_symmetry(k);
                    assert_eq!(image.apply_symmetry(k), q);
                    let t = image.statistics();
                    assert_eq!((t.displacement, t.inversions, t.cycles), (s.displacement, s.inversions, s.cycles));
                }
                assert_eq!(q.reverse_complement().inverse(), q.inverse().reverse_complement());
            }
        }
    }

    #[test]
    fn diaconis_graham_bounds_up_to_eight() {
        for n in 0..=8 {
            for q in all(n) {
                let s = q.statistics();
                assert_eq!(s.reflection_length, n - s.cycles);
                assert!(s.inversions + s.reflection_length as u64 <= s.displacement);
                assert!(s.displacement <= 2 * s.inversions);
                assert_eq!(s.displacement % 2, 0);
            }
        }
    }

    #[test]
    fn direct_sum_is_additive() {
        for a in 0..=4 {
            for b in 0..=(8 - a).min(4) {
                for x in all(a) {
                    for y in all(b) {
                        let (sx, sy, ss) = (x.statistics(), y.statistics(), x.direct_sum(&y).statistics());
                        assert_eq!(ss.displacement, sx.displacement + sy.displacement);
                        assert_eq!(ss.inversions, sx.inversions + sy.inversions);
                        assert_eq!(ss.cycles, sx.cycles + sy.cycles);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn fenwick_matches_quadratic_count(v in proptest::collection::vec(any::<u16>(), 0..64)) {
            let mut v = v;
            v.sort_unstable();
            v.dedup();
            // shuffle deterministically by the values themselves
            let mut w: Vec<u32> = v.iter().map(|&x| x as u32).collect();
            w.sort_by_key(|&x| x.wrapping_mul(2654435761));
            let q = reduce(&w).unwrap();
            prop_assert_eq!(q.inversions(), brute_inversions(q.as_slice()));
        }

        #[test]
        fn reduce_is_order_preserving_and_idempotent(v in proptest::collection::hash_set(-1000i32..1000, 0..20)) {
            let w: Vec<i32> = v.into_iter().collect();
            let r = reduce(&w).unwrap();
            for i in 0..w.len() {
                for j in 0..w.len() {
                    prop_assert_eq!(w[i] < w[j], r.as_slice()[i] < r.as_slice()[j]);
                }
            }
            prop_assert_eq!(reduce(r.as_slice()).unwrap(), r);
        }
    }
}
