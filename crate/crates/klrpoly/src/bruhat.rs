//! Bruhat order on S_n.
//!
//! Two independent comparison routes are kept deliberately: an O(n^2)
//! sorted-prefix dominance test used everywhere, and a subword search over a
//! reduced word of v used as a cross-check oracle in tests (u <= v iff some
//! subword of any reduced word of v is a reduced word of u).

use crate::error::{Error, Result};
use crate::perm::{check_same_rank, Permutation, Word};
use itertools::Itertools;

/// Exhaustive interval enumeration filters all of S_n; ranks beyond this are
/// refused unless the caller explicitly opts out via the unbounded variant.
pub const MAX_EXHAUSTIVE_RANK: usize = 8;

/// Dominance test: u <= v iff for every prefix length k, the sorted first k
/// entries of u are entrywise <= the sorted first k entries of v.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> Result<bool> {
    check_same_rank(u.rank(), v.rank())?;
    let n = u.rank();
    let mut su: Vec<u8> = Vec::with_capacity(n);
    let mut sv: Vec<u8> = Vec::with_capacity(n);
    // The k = n prefix is the full set {1..n} on both sides, so skip it.
    for k in 0..n.saturating_sub(1) {
        let eu = u.entries()[k];
        let ev = v.entries()[k];
        let iu = su.partition_point(|&x| x < eu);
        su.insert(iu, eu);
        let iv = sv.partition_point(|&x| x < ev);
        sv.insert(iv, ev);
        for j in 0..=k {
            if su[j] > sv[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Subword-based comparison: searches one reduced word of v for a subword
/// that is a reduced expression for u. Exponential; intended for small n.
pub fn bruhat_leq_subword(u: &Permutation, v: &Permutation) -> Result<bool> {
    check_same_rank(u.rank(), v.rank())?;
    let lu = u.length();
    if lu > v.length() {
        return Ok(false);
    }
    let word = canonical_reduced_word(v);
    let start = Permutation::identity(u.rank()).expect("valid rank");
    Ok(subword_search(word.letters(), 0, &start, lu, u))
}

/// Picks one reduced word for `p` by repeatedly peeling the smallest right
/// descent.
pub fn canonical_reduced_word(p: &Permutation) -> Word {
    let mut letters: Vec<u8> = Vec::with_capacity(p.length());
    let mut q = p.clone();
    while let Some(i) = q.first_right_descent() {
        letters.push(i as u8);
        q = q.mul_s_unchecked(i);
    }
    letters.reverse();
    Word::new(letters, p.rank()).expect("descent indices are valid letters")
}

fn subword_search(
    letters: &[u8],
    t: usize,
    current: &Permutation,
    remaining: usize,
    target: &Permutation,
) -> bool {
    if remaining == 0 {
        return current == target;
    }
    if letters.len() - t < remaining {
        return false;
    }
    // Taking a letter must lengthen the product, so that the chosen subword
    // stays reduced; every reduced expression arises this way.
    let letter = letters[t] as usize;
    if !current.has_right_descent(letter) {
        let next = current.mul_s_unchecked(letter);
        if subword_search(letters, t + 1, &next, remaining - 1, target) {
            return true;
        }
    }
    subword_search(letters, t + 1, current, remaining, target)
}

/// The full lower interval {u : u <= v}, sorted lexicographically by one-line
/// form.
#[derive(Clone, Debug)]
pub struct BruhatInterval {
    top: Permutation,
    elements: Vec<Permutation>,
}

impl BruhatInterval {
    pub fn top(&self) -> &Permutation {
        &self.top
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Enumerates {u : u <= v} by filtering all of S_n. Refuses n beyond
/// [`MAX_EXHAUSTIVE_RANK`].
pub fn interval_below(v: &Permutation) -> Result<BruhatInterval> {
    if v.rank() > MAX_EXHAUSTIVE_RANK {
        return Err(Error::Capacity {
            what: "exhaustive interval enumeration",
            max: MAX_EXHAUSTIVE_RANK,
            got: v.rank(),
        });
    }
    interval_below_unbounded(v)
}

/// [`interval_below`] without the rank ceiling. The caller accepts the n!
/// enumeration cost.
pub fn interval_below_unbounded(v: &Permutation) -> Result<BruhatInterval> {
    let n = v.rank();
    let mut elements = Vec::new();
    // Lexicographic generation keeps the result sorted without a final sort.
    for entries in (1..=n as u8).permutations(n) {
        let candidate = Permutation::from_one_line(entries).expect("valid one-line form");
        if bruhat_leq(&candidate, v)? {
            elements.push(candidate);
        }
    }
    Ok(BruhatInterval {
        top: v.clone(),
        elements,
    })
}

/// Lifting check for a pair u < v: for every i that is a right descent of v
/// but not of u, both u <= v*s_i and u*s_i <= v must hold.
pub fn check_lifting(u: &Permutation, v: &Permutation) -> Result<bool> {
    check_same_rank(u.rank(), v.rank())?;
    if u == v || !bruhat_leq(u, v)? {
        return Err(Error::Precondition(format!(
            "check_lifting requires u < v, got u = {u}, v = {v}"
        )));
    }
    for i in v.right_descents() {
        if u.has_right_descent(i) {
            continue;
        }
        let vs = v.mul_s_unchecked(i);
        let us = u.mul_s_unchecked(i);
        if !bruhat_leq(u, &vs)? || !bruhat_leq(&us, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}
