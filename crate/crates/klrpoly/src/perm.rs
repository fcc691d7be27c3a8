//! Permutations of S_n in one-line notation and words in the simple
//! transpositions s_1, ..., s_{n-1}.
//!
//! Convention: words act by right multiplication on positions. Multiplying a
//! permutation by s_i on the right swaps the entries at positions i and i+1
//! of its one-line form, so the right descent set of p is {i : p(i) > p(i+1)}
//! and `evaluate([i1, ..., ik]) = s_{i1} ... s_{ik}` applied left to right.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One-line entries are stored as `u8`, so ranks beyond this are rejected.
pub const MAX_RANK: usize = 255;

/// A permutation of {1, ..., n} in one-line notation.
///
/// The derived `Ord` is lexicographic on the one-line form, which is the
/// order used whenever intervals or reports are sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(Self {
            entries: (1..=n as u8).collect(),
        })
    }

    /// Builds a permutation from its one-line form, validating that the
    /// entries are a bijection on {1, ..., n}.
    pub fn from_one_line(entries: Vec<u8>) -> Result<Self> {
        check_rank(entries.len())?;
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for (pos, &value) in entries.iter().enumerate() {
            if value == 0 || value as usize > n {
                return Err(Error::Parse(format!(
                    "value {} at position {} out of range 1..={}",
                    value,
                    pos + 1,
                    n
                )));
            }
            if seen[value as usize] {
                return Err(Error::Parse(format!(
                    "duplicate value {} at position {}",
                    value,
                    pos + 1
                )));
            }
            seen[value as usize] = true;
        }
        Ok(Self { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// The image of position `i` (1-based).
    pub fn apply(&self, i: usize) -> u8 {
        self.entries[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, &v)| v as usize == k + 1)
    }

    /// Coxeter length: the number of inversions of the one-line form.
    pub fn length(&self) -> usize {
        let mut inversions = 0;
        for i in 0..self.entries.len() {
            for j in i + 1..self.entries.len() {
                if self.entries[i] > self.entries[j] {
                    inversions += 1;
                }
            }
        }
        inversions
    }

    /// Right descent set {i : p(i) > p(i+1)}, in increasing order.
    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.rank())
            .filter(|&i| self.entries[i - 1] > self.entries[i])
            .collect()
    }

    pub fn has_right_descent(&self, i: usize) -> bool {
        i >= 1 && i < self.rank() && self.entries[i - 1] > self.entries[i]
    }

    pub fn first_right_descent(&self) -> Option<usize> {
        (1..self.rank()).find(|&i| self.entries[i - 1] > self.entries[i])
    }

    /// Right multiplication by s_i: swaps the entries at positions i and i+1.
    pub fn mul_right_s(&self, i: usize) -> Result<Self> {
        if i == 0 || i >= self.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: i,
                max: self.rank().saturating_sub(1),
            });
        }
        Ok(self.mul_s_unchecked(i))
    }

    pub(crate) fn mul_s_unchecked(&self, i: usize) -> Self {
        debug_assert!(i >= 1 && i < self.rank());
        let mut entries = self.entries.clone();
        entries.swap(i - 1, i);
        Self { entries }
    }

    /// Function composition: `(p.compose(q))(i) = p(q(i))`, so
    /// `evaluate(w1 ++ w2) = evaluate(w1).compose(evaluate(w2))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_rank(self.rank(), other.rank())?;
        let entries = other
            .entries
            .iter()
            .map(|&v| self.entries[v as usize - 1])
            .collect();
        Ok(Self { entries })
    }
}

impl fmt::Display for Permutation {
    /// Compact digit form for n <= 9 ("3412"), comma-separated for larger n.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() <= 9 {
            for &v in &self.entries {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        if s.contains(',') {
            let mut entries = Vec::new();
            for (idx, token) in s.split(',').enumerate() {
                let token = token.trim();
                let value: u8 = token.parse().map_err(|_| {
                    Error::Parse(format!("invalid entry '{}' at position {}", token, idx + 1))
                })?;
                entries.push(value);
            }
            Self::from_one_line(entries)
        } else {
            let mut entries = Vec::new();
            for (idx, ch) in s.chars().enumerate() {
                match ch.to_digit(10) {
                    Some(d) if d >= 1 => entries.push(d as u8),
                    _ => {
                        return Err(Error::Parse(format!(
                            "invalid character '{}' at position {}",
                            ch,
                            idx + 1
                        )))
                    }
                }
            }
            Self::from_one_line(entries)
        }
    }
}

/// A word in the generators s_1, ..., s_{rank-1}. The ambient rank is carried
/// explicitly so that the empty word still knows which group it lives in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<u8>,
    rank: usize,
}

impl Word {
    pub fn new(letters: Vec<u8>, rank: usize) -> Result<Self> {
        check_rank(rank)?;
        for (pos, &letter) in letters.iter().enumerate() {
            if letter == 0 || letter as usize >= rank {
                return Err(Error::Parse(format!(
                    "letter {} at position {} out of range 1..={}",
                    letter,
                    pos + 1,
                    rank - 1
                )));
            }
        }
        Ok(Self { letters, rank })
    }

    pub fn empty(rank: usize) -> Result<Self> {
        Self::new(Vec::new(), rank)
    }

    /// Parses a space-separated list of generator indices; an empty or
    /// all-whitespace string is the empty word.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for (idx, token) in s.split_whitespace().enumerate() {
            let letter: u8 = token.parse().map_err(|_| {
                Error::Parse(format!(
                    "invalid letter '{}' at position {}",
                    token,
                    idx + 1
                ))
            })?;
            letters.push(letter);
        }
        Self::new(letters, rank)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The product s_{i1} ... s_{ik} as a permutation.
    pub fn evaluate(&self) -> Permutation {
        let mut entries: Vec<u8> = (1..=self.rank as u8).collect();
        for &letter in &self.letters {
            entries.swap(letter as usize - 1, letter as usize);
        }
        Permutation { entries }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        check_same_rank(self.rank, other.rank)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            letters,
            rank: self.rank,
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.evaluate().length() == self.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word([{}], n={})", self, self.rank)
    }
}

/// All reduced words for `p`, enumerated by peeling right descents: every
/// reduced word for `p` ends with some i in the right descent set, preceded
/// by a reduced word for p*s_i. Exponential in length; intended for small n.
pub fn reduced_words(p: &Permutation) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    if p.is_identity() {
        out.insert(Word {
            letters: Vec::new(),
            rank: p.rank(),
        });
        return out;
    }
    for i in p.right_descents() {
        let shorter = p.mul_s_unchecked(i);
        for prefix in reduced_words(&shorter) {
            let mut letters = prefix.letters;
            letters.push(i as u8);
            out.insert(Word {
                letters,
                rank: p.rank(),
            });
        }
    }
    out
}

/// Words one braid move away from `w`: either a commutation swap of adjacent
/// letters i, j with |i - j| > 1, or a replacement [a, b, a] -> [b, a, b]
/// with |a - b| = 1. Every neighbor is reduced and evaluates to the same
/// permutation.
pub fn braid_neighbors(w: &Word) -> Result<BTreeSet<Word>> {
    if !w.is_reduced() {
        return Err(Error::NotReduced);
    }
    let mut out = BTreeSet::new();
    let ls = &w.letters;
    for t in 0..ls.len().saturating_sub(1) {
        if ls[t].abs_diff(ls[t + 1]) > 1 {
            let mut letters = ls.clone();
            letters.swap(t, t + 1);
            out.insert(Word {
                letters,
                rank: w.rank,
            });
        }
    }
    for t in 0..ls.len().saturating_sub(2) {
        let (a, b, c) = (ls[t], ls[t + 1], ls[t + 2]);
        if a == c && a.abs_diff(b) == 1 {
            let mut letters = ls.clone();
            letters[t] = b;
            letters[t + 1] = a;
            letters[t + 2] = b;
            out.insert(Word {
                letters,
                rank: w.rank,
            });
        }
    }
    Ok(out)
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::RankTooSmall { min: 1, got: 0 });
    }
    if n > MAX_RANK {
        return Err(Error::Capacity {
            what: "one-line permutations",
            max: MAX_RANK,
            got: n,
        });
    }
    Ok(())
}

pub(crate) fn check_same_rank(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::RankMismatch { left, right });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn w(letters: &[u8], rank: usize) -> Word {
        Word::new(letters.to_vec(), rank).unwrap()
    }

    #[test]
    fn identity_basics() {
        assert_eq!(Permutation::identity(4).unwrap().to_string(), "1234");
        assert!(matches!(
            Permutation::identity(0),
            Err(Error::RankTooSmall { .. })
        ));
    }

    #[test]
    fn evaluate_matches_hand_computation() {
        // s_2 s_1 s_3 s_2 applied to 1234: 1324, 3124, 3142, 3412.
        assert_eq!(w(&[2, 1, 3, 2], 4).evaluate(), p("3412"));
        assert_eq!(w(&[], 3).evaluate(), p("123"));
        assert_eq!(w(&[1], 2).evaluate(), p("21"));
    }

    #[test]
    fn length_counts_inversions() {
        assert_eq!(p("1234").length(), 0);
        assert_eq!(p("3412").length(), 4);
        assert_eq!(p("34512").length(), 6);
        assert_eq!(p("4321").length(), 6);
    }

    #[test]
    fn right_descents_by_position() {
        assert_eq!(p("3412").right_descents(), vec![2]);
        assert_eq!(p("4321").right_descents(), vec![1, 2, 3]);
        assert_eq!(p("1234").right_descents(), Vec::<usize>::new());
        assert_eq!(p("3142").first_right_descent(), Some(1));
    }

    #[test]
    fn mul_right_s_swaps_positions() {
        assert_eq!(p("3412").mul_right_s(2).unwrap(), p("3142"));
        assert!(matches!(
            p("3412").mul_right_s(4),
            Err(Error::GeneratorOutOfRange { .. })
        ));
        // One right multiplication changes the length by exactly one.
        let q = p("3142");
        assert_eq!(q.length(), 3);
        assert_eq!(q.mul_right_s(1).unwrap().length(), 2);
        assert_eq!(q.mul_right_s(2).unwrap().length(), 4);
    }

    #[test]
    fn compose_is_function_composition() {
        // s_1 s_2 = 231: (s_1 compose s_2)(i) = s_1(s_2(i)).
        let s1 = p("213");
        let s2 = p("132");
        assert_eq!(s1.compose(&s2).unwrap(), p("231"));
        assert_eq!(w(&[1, 2], 3).evaluate(), p("231"));
        assert!(matches!(
            s1.compose(&p("1234")),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn is_reduced_detects_cancellation() {
        assert!(w(&[2, 1, 3, 2], 4).is_reduced());
        assert!(!w(&[1, 1], 3).is_reduced());
        assert!(w(&[], 5).is_reduced());
    }

    #[test]
    fn reduced_words_of_longest_element_s3() {
        let words = reduced_words(&p("321"));
        let expected: BTreeSet<Word> = [w(&[1, 2, 1], 3), w(&[2, 1, 2], 3)].into();
        assert_eq!(words, expected);
    }

    #[test]
    fn reduced_words_of_3412() {
        let words = reduced_words(&p("3412"));
        let expected: BTreeSet<Word> = [w(&[2, 1, 3, 2], 4), w(&[2, 3, 1, 2], 4)].into();
        assert_eq!(words, expected);
    }

    #[test]
    fn reduced_words_of_identity_is_empty_word() {
        let words = reduced_words(&p("12345"));
        assert_eq!(words.len(), 1);
        assert!(words.iter().next().unwrap().is_empty());
    }

    #[test]
    fn braid_neighbors_commutation_and_braid() {
        let neighbors = braid_neighbors(&w(&[1, 3], 4)).unwrap();
        assert_eq!(neighbors, [w(&[3, 1], 4)].into());

        let neighbors = braid_neighbors(&w(&[1, 2, 1], 3)).unwrap();
        assert_eq!(neighbors, [w(&[2, 1, 2], 3)].into());

        assert!(braid_neighbors(&w(&[], 3)).unwrap().is_empty());
        assert!(matches!(
            braid_neighbors(&w(&[1, 1], 3)),
            Err(Error::NotReduced)
        ));
    }

    #[test]
    fn braid_neighbors_preserve_element_and_length() {
        for word in reduced_words(&p("35142")) {
            for neighbor in braid_neighbors(&word).unwrap() {
                assert!(neighbor.is_reduced());
                assert_eq!(neighbor.evaluate(), p("35142"));
            }
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        assert_eq!(p("3412").to_string(), "3412");
        let big: Permutation = "10,3,4,5,6,7,8,9,1,2".parse().unwrap();
        assert_eq!(big.rank(), 10);
        assert_eq!(big.to_string(), "10,3,4,5,6,7,8,9,1,2");
        assert_eq!(big.to_string().parse::<Permutation>().unwrap(), big);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = "34x2".parse::<Permutation>().unwrap_err();
        assert!(err.to_string().contains("position 3"), "{err}");
        let err = "3,4,x,2".parse::<Permutation>().unwrap_err();
        assert!(err.to_string().contains("position 3"), "{err}");
        let err = "3432".parse::<Permutation>().unwrap_err();
        assert!(err.to_string().contains("duplicate value 3"), "{err}");
        let err = "125".parse::<Permutation>().unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        let err = Word::parse("2 1 z", 4).unwrap_err();
        assert!(err.to_string().contains("position 3"), "{err}");
        let err = Word::new(vec![3], 3).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }
}
