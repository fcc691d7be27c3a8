//! The distinguished permutations v_n = 34...n12, their reduced word
//! Omega_n = s_2 s_1 s_3 s_2 ... s_{n-1} s_{n-2}, and the reduced-subword
//! statistics d, h, g.
//!
//! For a word w = (i_1, ..., i_k): d(w) counts positions t with
//! i_t - i_{t+1} = 1, h(n, w) = n - k + d(w), and g(w) = k - 2 d(w). For a
//! reduced subword of Omega_n expressing sigma these statistics determine
//! R~_{sigma, v_n} (see the closed_forms module).

use std::collections::BTreeMap;

use crate::bruhat::bruhat_leq;
use crate::error::{Error, Result};
use crate::perm::{Permutation, Word};

/// The permutation v_n = 34...n12 (entries i+2 mod n), defined for n >= 3.
pub fn vn_perm(n: usize) -> Result<Permutation> {
    if n < 3 {
        return Err(Error::RankTooSmall { min: 3, got: n });
    }
    let mut entries: Vec<u8> = (3..=n as u8).collect();
    entries.push(1);
    entries.push(2);
    Permutation::from_one_line(entries)
}

/// The word Omega_n = [2, 1, 3, 2, 4, 3, ..., n-1, n-2], a reduced
/// expression of v_n with length 2(n-2).
pub fn omega_word(n: usize) -> Result<Word> {
    if n < 3 {
        return Err(Error::RankTooSmall { min: 3, got: n });
    }
    let mut letters = Vec::with_capacity(2 * (n - 2));
    for k in 2..n {
        letters.push(k as u8);
        letters.push(k as u8 - 1);
    }
    Word::new(letters, n)
}

/// A subword of Omega_n that is reduced: strictly increasing 0-based
/// positions into the letters of Omega_n together with the induced word.
/// All CLI and JSON output renders the positions 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct OmegaSubword {
    positions: Vec<usize>,
    word: Word,
}

impl OmegaSubword {
    /// Validates that `positions` is strictly increasing, in range for
    /// Omega_n, and induces a reduced word.
    pub fn new(n: usize, positions: Vec<usize>) -> Result<Self> {
        let omega = omega_word(n)?;
        if !positions.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "positions {positions:?} are not strictly increasing"
            )));
        }
        if let Some(&last) = positions.last() {
            if last >= omega.len() {
                return Err(Error::Precondition(format!(
                    "position {last} out of range for Omega_{n} (length {})",
                    omega.len()
                )));
            }
        }
        let letters: Vec<u8> = positions.iter().map(|&t| omega.letters()[t]).collect();
        let word = Word::new(letters, n)?;
        if !word.is_reduced() {
            return Err(Error::NotReduced);
        }
        Ok(Self { positions, word })
    }

    fn from_parts(positions: Vec<usize>, word: Word) -> Self {
        Self { positions, word }
    }

    /// 0-based indices into the letters of Omega_n.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn rank(&self) -> usize {
        self.word.rank()
    }

    /// The permutation the subword expresses.
    pub fn sigma(&self) -> Permutation {
        self.word.evaluate()
    }
}

/// Number of positions t with i_t - i_{t+1} = 1.
pub fn d_stat(w: &Word) -> usize {
    w.letters()
        .windows(2)
        .filter(|pair| pair[0] == pair[1] + 1)
        .count()
}

/// h(n, w) = n - len(w) + d(w). Can be any integer for arbitrary words; for
/// reduced subwords of Omega_n it lands in 2..=n.
pub fn h_stat(n: usize, w: &Word) -> i64 {
    n as i64 - w.len() as i64 + d_stat(w) as i64
}

/// g(w) = len(w) - 2 d(w).
pub fn g_stat(w: &Word) -> i64 {
    w.len() as i64 - 2 * d_stat(w) as i64
}

/// Every reduced subword of Omega_n, grouped by the permutation it
/// expresses. One dynamic-programming pass over the letters of Omega_n:
/// a state is a partial product together with the position sets reaching it,
/// and a letter extends a state only when it lengthens the product, which is
/// exactly the reducedness condition.
pub fn all_reduced_subwords(n: usize) -> Result<BTreeMap<Permutation, Vec<OmegaSubword>>> {
    let omega = omega_word(n)?;
    let identity = Permutation::identity(n)?;
    let mut states: BTreeMap<Permutation, Vec<Vec<usize>>> = BTreeMap::new();
    states.insert(identity, vec![Vec::new()]);
    for (t, &letter) in omega.letters().iter().enumerate() {
        let mut additions: Vec<(Permutation, Vec<usize>)> = Vec::new();
        for (perm, position_sets) in &states {
            if perm.has_right_descent(letter as usize) {
                continue;
            }
            let next = perm.mul_s_unchecked(letter as usize);
            for set in position_sets {
                let mut extended = set.clone();
                extended.push(t);
                additions.push((next.clone(), extended));
            }
        }
        for (perm, set) in additions {
            states.entry(perm).or_default().push(set);
        }
    }
    let mut out = BTreeMap::new();
    for (perm, mut position_sets) in states {
        position_sets.sort();
        let subwords = position_sets
            .into_iter()
            .map(|positions| {
                let letters: Vec<u8> = positions.iter().map(|&t| omega.letters()[t]).collect();
                let word = Word::new(letters, n).expect("letters of Omega_n are valid");
                OmegaSubword::from_parts(positions, word)
            })
            .collect();
        out.insert(perm, subwords);
    }
    Ok(out)
}

/// The reduced subwords of Omega_n expressing `sigma`, sorted by position
/// set. Empty exactly when sigma is not below v_n.
pub fn reduced_subwords_for(n: usize, sigma: &Permutation) -> Result<Vec<OmegaSubword>> {
    if sigma.rank() != n {
        return Err(Error::RankMismatch {
            left: sigma.rank(),
            right: n,
        });
    }
    Ok(all_reduced_subwords(n)?.remove(sigma).unwrap_or_default())
}

/// Descent-extension check for a reduced subword w expressing sigma, in the
/// case sigma * s_{n-1} <= v_n (a precondition): some reduced subword of
/// Omega_n expressing sigma * s_{n-1} must have the same d statistic as w.
pub fn check_lemma_descent(n: usize, w: &OmegaSubword) -> Result<bool> {
    let sigma_s = extension_target(n, w)?;
    if !bruhat_leq(&sigma_s, &vn_perm(n)?)? {
        return Err(Error::Precondition(format!(
            "sigma * s_{} = {sigma_s} is not below v_{n}",
            n - 1
        )));
    }
    let d = d_stat(w.word());
    Ok(reduced_subwords_for(n, &sigma_s)?
        .iter()
        .any(|candidate| d_stat(candidate.word()) == d))
}

/// Escape check for the complementary case sigma * s_{n-1} not below v_n
/// (a precondition): the h statistic of w must be exactly 2.
pub fn check_lemma_h2(n: usize, w: &OmegaSubword) -> Result<bool> {
    let sigma_s = extension_target(n, w)?;
    if bruhat_leq(&sigma_s, &vn_perm(n)?)? {
        return Err(Error::Precondition(format!(
            "sigma * s_{} = {sigma_s} is below v_{n}; use check_lemma_descent",
            n - 1
        )));
    }
    Ok(h_stat(n, w.word()) == 2)
}

fn extension_target(n: usize, w: &OmegaSubword) -> Result<Permutation> {
    if w.rank() != n {
        return Err(Error::RankMismatch {
            left: w.rank(),
            right: n,
        });
    }
    w.sigma().mul_right_s(n - 1)
}
