//! Closed-form identities for R~-polynomials at the permutations v_n and
//! v_{n,i}, and the verification drivers that sweep them against the
//! recurrence engine.
//!
//! The backbone is the family T_n(q) := R~_{e, v_n}(q) = q^(2n-4) *
//! F_{n-2}(q^-2), with T_2 := 1 so that T_n = q^2 T_{n-2} + q^2 T_{n-1}
//! holds from n = 4 on. For any reduced subword w of Omega_n expressing
//! sigma, the statistics of the omega module give
//!
//!   R~_{sigma, v_n}(q) = q^g(w) * T_h(n,w)(q)
//!                      = q^(2n - l(sigma) - 4) * F_{h(n,w)-2}(q^-2),
//!
//! and at the permutations v_{n,i} (v_n with the letter n displaced to
//! position i) the polynomial R~_{e, v_{n,i}} expands as a binomial-weighted
//! sum of reversed q-Fibonacci terms. Each identity is evaluated by two
//! independent routes wherever the algebra allows it, and the drivers sweep
//! whole Bruhat intervals comparing closed forms against the recurrence.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bruhat::bruhat_leq;
use crate::error::{Error, Result};
use crate::omega::{
    all_reduced_subwords, check_lemma_descent, check_lemma_h2, g_stat, h_stat, omega_word, vn_perm,
    OmegaSubword,
};
use crate::perm::{Permutation, Word};
use crate::poly::{fib_in_qinv2, IntPoly};
use crate::rpoly::RPolyEngine;

/// Verification sweeps refuse ranks beyond this unless the caller opts out
/// through the unbounded variant.
pub const MAX_SWEEP_RANK: usize = 8;

/// Exact binomial coefficient by the Pascal recurrence.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for j in 1..row.len() {
            next.push(&row[j - 1] + &row[j]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row[k].clone()
}

/// T_n(q) = q^(2n-4) * F_{n-2}(q^-2) for n >= 2; T_2 = 1.
pub fn t_poly(n: usize) -> Result<IntPoly> {
    if n < 2 {
        return Err(Error::RankTooSmall { min: 2, got: n });
    }
    fib_in_qinv2(n - 2, 2 * n as i64 - 4)
}

/// Checks T_n = q^2 T_{n-2} + q^2 T_{n-1} for a single n >= 4.
pub fn check_t_recurrence(n: usize) -> Result<bool> {
    if n < 4 {
        return Err(Error::RankTooSmall { min: 4, got: n });
    }
    let lhs = t_poly(n)?;
    let rhs = t_poly(n - 2)?.shift(2).add(&t_poly(n - 1)?.shift(2));
    Ok(lhs == rhs)
}

/// The subword form q^g(w) * T_h(n,w) of R~_{sigma, v_n}. A statistic
/// outside its lawful range (h < 2 or g < 0) is reported as an error, never
/// silently clamped.
pub fn theorem_main_rhs(n: usize, w: &OmegaSubword) -> Result<IntPoly> {
    if w.rank() != n {
        return Err(Error::RankMismatch {
            left: w.rank(),
            right: n,
        });
    }
    let h = h_stat(n, w.word());
    let g = g_stat(w.word());
    if h < 2 {
        return Err(Error::ExponentOutOfRange(format!(
            "h = {h} < 2 for subword {:?}",
            w.positions()
        )));
    }
    if g < 0 {
        return Err(Error::ExponentOutOfRange(format!(
            "g = {g} < 0 for subword {:?}",
            w.positions()
        )));
    }
    Ok(t_poly(h as usize)?.shift(g as usize))
}

/// The length form q^(2n - l(sigma) - 4) * F_{h(n,w)-2}(q^-2) of
/// R~_{sigma, v_n}, where w must be a reduced subword expressing sigma.
pub fn corollary_rhs(n: usize, sigma: &Permutation, w: &OmegaSubword) -> Result<IntPoly> {
    if sigma.rank() != n || w.rank() != n {
        return Err(Error::RankMismatch {
            left: sigma.rank().min(w.rank()),
            right: n,
        });
    }
    if &w.sigma() != sigma {
        return Err(Error::Precondition(format!(
            "subword {:?} expresses {}, not {sigma}",
            w.positions(),
            w.sigma()
        )));
    }
    let h = h_stat(n, w.word());
    if h < 2 {
        return Err(Error::ExponentOutOfRange(format!(
            "h = {h} < 2 for subword {:?}",
            w.positions()
        )));
    }
    let lead = 2 * n as i64 - sigma.length() as i64 - 4;
    fib_in_qinv2(h as usize - 2, lead)
}

/// v_{n,i}: the letter n displaced to position i inside v_n, for
/// 2 <= i <= n-1 (so v_{n,n-1} = v_n).
pub fn v_ni_perm(n: usize, i: usize) -> Result<Permutation> {
    if n < 3 {
        return Err(Error::RankTooSmall { min: 3, got: n });
    }
    if i < 2 || i > n - 1 {
        return Err(Error::Precondition(format!(
            "i = {i} out of range 2..={} for v_{{{n},i}}",
            n - 1
        )));
    }
    let mut entries: Vec<u8> = Vec::with_capacity(n);
    if i == 2 {
        entries.push(n as u8);
        entries.extend(3..=n as u8 - 1);
    } else {
        entries.extend(3..=i as u8);
        entries.push(n as u8);
        entries.extend(i as u8 + 1..=n as u8 - 1);
    }
    entries.push(1);
    entries.push(2);
    Permutation::from_one_line(entries)
}

/// The reduced word Omega_n followed by s_{n-3} s_{n-4} ... s_{i-1}; it
/// must evaluate to v_{n,i}, and a failure of that self-check is an engine
/// bug surfaced as an internal error.
pub fn v_ni_word(n: usize, i: usize) -> Result<Word> {
    let target = v_ni_perm(n, i)?;
    let mut letters = omega_word(n)?.letters().to_vec();
    let mut k = n as i64 - 3;
    while k >= i as i64 - 1 {
        letters.push(k as u8);
        k -= 1;
    }
    let word = Word::new(letters, n)?;
    if !word.is_reduced() || word.evaluate() != target {
        return Err(Error::Internal(format!(
            "v_ni_word({n}, {i}) = [{word}] does not reduce to {target}"
        )));
    }
    Ok(word)
}

/// Closed form for R~_{e, v_{n,i}}: the binomial-weighted sum
/// sum_k C(n-i-1, k) q^(3n-i-2k-5) F_{n-k-2}(q^-2), evaluated through two
/// independent routes (directly, and as shifted T polynomials) that must
/// agree.
pub fn theorem_vni_rhs(n: usize, i: usize) -> Result<IntPoly> {
    v_ni_perm(n, i)?; // range validation
    let terms = n - i - 1;
    let mut direct = IntPoly::zero();
    let mut via_t = IntPoly::zero();
    for k in 0..=terms {
        let weight = binomial(terms, k);
        let lead = 3 * n as i64 - i as i64 - 2 * k as i64 - 5;
        direct = direct.add(&fib_in_qinv2(n - k - 2, lead)?.scale(&weight));
        via_t = via_t.add(&t_poly(n - k)?.shift(n - i - 1).scale(&weight));
    }
    if direct != via_t {
        return Err(Error::Internal(format!(
            "the two expansions of R~_(e, v_{{{n},{i}}}) disagree: {direct} vs {via_t}"
        )));
    }
    Ok(direct)
}

/// One outcome in a verification sweep that failed to match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

/// Identities and properties the `verify` driver can sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// R~_{sigma, v_n} = q^g T_h over every sigma <= v_n and every subword.
    Main,
    /// The length form of the same sweep.
    Corollary,
    /// R~_{e, v_{n,i}} against its binomial expansion, all i.
    Vni,
    /// R~ at increasing subword prefixes: q^k T_{n-k} for every increasing
    /// sequence in the admissible range.
    IncreasingSeq,
    /// The T-polynomial recurrence for 4..=n.
    TRecurrence,
    /// Change-of-variable route equals the direct R recurrence on all of
    /// S_n x S_n.
    Bridge,
    /// Descent-extension and escape checks over every subword.
    Lemmas,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::Main,
        Claim::Corollary,
        Claim::Vni,
        Claim::IncreasingSeq,
        Claim::TRecurrence,
        Claim::Bridge,
        Claim::Lemmas,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Claim::Main => "main",
            Claim::Corollary => "corollary",
            Claim::Vni => "vni",
            Claim::IncreasingSeq => "ll",
            Claim::TRecurrence => "trec",
            Claim::Bridge => "relation",
            Claim::Lemmas => "lemmas",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Claim::ALL.iter().map(|c| c.name()).collect();
                Error::Parse(format!(
                    "unknown claim '{s}', expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

/// Outcome of one verification sweep. `subjects` counts the outer sweep
/// dimension (sigma values, i values, or u values); `cases` the individual
/// comparisons.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claim: Claim,
    pub n: usize,
    pub subjects: usize,
    pub cases: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn passing(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Sweeps `claim` at rank `n`, comparing closed forms against the recurrence
/// engine. Refuses n beyond [`MAX_SWEEP_RANK`].
pub fn verify_theorem(engine: &RPolyEngine, claim: Claim, n: usize) -> Result<VerificationReport> {
    if n > MAX_SWEEP_RANK {
        return Err(Error::Capacity {
            what: "verification sweeps",
            max: MAX_SWEEP_RANK,
            got: n,
        });
    }
    verify_theorem_unbounded(engine, claim, n)
}

/// [`verify_theorem`] without the rank ceiling.
pub fn verify_theorem_unbounded(
    engine: &RPolyEngine,
    claim: Claim,
    n: usize,
) -> Result<VerificationReport> {
    match claim {
        Claim::Main => sweep_subwords(engine, claim, n, |_sigma, w| theorem_main_rhs(n, w)),
        Claim::Corollary => sweep_subwords(engine, claim, n, |sigma, w| corollary_rhs(n, sigma, w)),
        Claim::Vni => sweep_vni(engine, n),
        Claim::IncreasingSeq => check_eq_ll(engine, n, 2),
        Claim::TRecurrence => sweep_trec(n),
        Claim::Bridge => sweep_bridge(engine, n),
        Claim::Lemmas => sweep_lemmas(n),
    }
}

fn sweep_subwords<F>(
    engine: &RPolyEngine,
    claim: Claim,
    n: usize,
    rhs: F,
) -> Result<VerificationReport>
where
    F: Fn(&Permutation, &OmegaSubword) -> Result<IntPoly> + Sync,
{
    let grouped = all_reduced_subwords(n)?;
    let top = vn_perm(n)?;
    let entries: Vec<(&Permutation, &Vec<OmegaSubword>)> = grouped.iter().collect();
    let per_sigma: Vec<Vec<Mismatch>> = entries
        .par_iter()
        .map(|&(sigma, subwords)| -> Result<Vec<Mismatch>> {
            let actual = engine.rtilde(sigma, &top)?;
            let mut found = Vec::new();
            for w in subwords.iter() {
                let inputs = || {
                    format!(
                        "sigma={sigma} positions={:?} word=[{}]",
                        w.positions(),
                        w.word()
                    )
                };
                match rhs(sigma, w) {
                    Ok(expected) if expected == actual => {}
                    Ok(expected) => found.push(Mismatch {
                        inputs: inputs(),
                        expected: expected.to_string(),
                        actual: actual.to_string(),
                    }),
                    Err(e) => found.push(Mismatch {
                        inputs: inputs(),
                        expected: format!("error: {e}"),
                        actual: actual.to_string(),
                    }),
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport {
        claim,
        n,
        subjects: entries.len(),
        cases: entries.iter().map(|(_, subs)| subs.len()).sum(),
        mismatches: per_sigma.into_iter().flatten().collect(),
    })
}

fn sweep_vni(engine: &RPolyEngine, n: usize) -> Result<VerificationReport> {
    if n < 3 {
        return Err(Error::RankTooSmall { min: 3, got: n });
    }
    let e = Permutation::identity(n)?;
    let mut mismatches = Vec::new();
    for i in 2..=n - 1 {
        let top = v_ni_perm(n, i)?;
        v_ni_word(n, i)?; // the word self-check is part of the sweep
        let actual = engine.rtilde(&e, &top)?;
        match theorem_vni_rhs(n, i) {
            Ok(expected) if expected == actual => {}
            Ok(expected) => mismatches.push(Mismatch {
                inputs: format!("n={n} i={i} v_ni={top}"),
                expected: expected.to_string(),
                actual: actual.to_string(),
            }),
            Err(err) => mismatches.push(Mismatch {
                inputs: format!("n={n} i={i} v_ni={top}"),
                expected: format!("error: {err}"),
                actual: actual.to_string(),
            }),
        }
    }
    Ok(VerificationReport {
        claim: Claim::Vni,
        n,
        subjects: n - 2,
        cases: n - 2,
        mismatches,
    })
}

/// Sweeps R~ at the permutations of increasing words: for every strictly
/// increasing sequence i-1 <= i_1 < ... < i_k <= n-3,
/// R~_{s_{i_1} ... s_{i_k}, v_n} = q^k T_{n-k}. Sweeping i = 2 covers the
/// admissible sequences of every larger i, since their index ranges nest.
pub fn check_eq_ll(engine: &RPolyEngine, n: usize, i: usize) -> Result<VerificationReport> {
    if n < 3 {
        return Err(Error::RankTooSmall { min: 3, got: n });
    }
    if i < 2 || i > n - 1 {
        return Err(Error::Precondition(format!(
            "i = {i} out of range 2..={}",
            n - 1
        )));
    }
    let top = vn_perm(n)?;
    let indices: Vec<u8> = (i as u8 - 1..=n as u8 - 3).collect();
    let mut mismatches = Vec::new();
    let mut cases = 0usize;
    for mask in 0u32..(1 << indices.len()) {
        let letters: Vec<u8> = indices
            .iter()
            .enumerate()
            .filter(|(t, _)| mask >> t & 1 == 1)
            .map(|(_, &idx)| idx)
            .collect();
        let k = letters.len();
        let word = Word::new(letters, n)?;
        let sigma = word.evaluate();
        cases += 1;
        let expected = t_poly(n - k)?.shift(k);
        let actual = engine.rtilde(&sigma, &top)?;
        if expected != actual {
            mismatches.push(Mismatch {
                inputs: format!("n={n} i={i} word=[{word}] sigma={sigma}"),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(VerificationReport {
        claim: Claim::IncreasingSeq,
        n,
        subjects: cases,
        cases,
        mismatches,
    })
}

fn sweep_trec(n: usize) -> Result<VerificationReport> {
    if n < 4 {
        return Err(Error::RankTooSmall { min: 4, got: n });
    }
    let mut mismatches = Vec::new();
    for m in 4..=n {
        if !check_t_recurrence(m)? {
            mismatches.push(Mismatch {
                inputs: format!("m={m}"),
                expected: format!("{}", t_poly(m - 2)?.shift(2).add(&t_poly(m - 1)?.shift(2))),
                actual: t_poly(m)?.to_string(),
            });
        }
    }
    Ok(VerificationReport {
        claim: Claim::TRecurrence,
        n,
        subjects: n - 3,
        cases: n - 3,
        mismatches,
    })
}

fn sweep_bridge(engine: &RPolyEngine, n: usize) -> Result<VerificationReport> {
    let perms = all_perms(n)?;
    let per_u: Vec<Vec<Mismatch>> = perms
        .par_iter()
        .map(|u| -> Result<Vec<Mismatch>> {
            let mut found = Vec::new();
            for v in &perms {
                let via_change = engine.rtilde_to_r(u, v)?;
                let direct = engine.rpoly(u, v)?;
                if via_change != direct {
                    found.push(Mismatch {
                        inputs: format!("u={u} v={v}"),
                        expected: direct.to_string(),
                        actual: via_change.to_string(),
                    });
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport {
        claim: Claim::Bridge,
        n,
        subjects: perms.len(),
        cases: perms.len() * perms.len(),
        mismatches: per_u.into_iter().flatten().collect(),
    })
}

fn sweep_lemmas(n: usize) -> Result<VerificationReport> {
    let grouped = all_reduced_subwords(n)?;
    let top = vn_perm(n)?;
    let entries: Vec<(&Permutation, &Vec<OmegaSubword>)> = grouped.iter().collect();
    let per_sigma: Vec<Vec<Mismatch>> = entries
        .par_iter()
        .map(|&(sigma, subwords)| -> Result<Vec<Mismatch>> {
            let mut found = Vec::new();
            let sigma_s = sigma.mul_right_s(n - 1)?;
            let extended_below = bruhat_leq(&sigma_s, &top)?;
            for w in subwords.iter() {
                let (label, outcome) = if extended_below {
                    ("descent-extension", check_lemma_descent(n, w))
                } else {
                    ("escape", check_lemma_h2(n, w))
                };
                match outcome {
                    Ok(true) => {}
                    Ok(false) => found.push(Mismatch {
                        inputs: format!(
                            "sigma={sigma} positions={:?} check={label}",
                            w.positions()
                        ),
                        expected: "true".into(),
                        actual: "false".into(),
                    }),
                    Err(e) => found.push(Mismatch {
                        inputs: format!(
                            "sigma={sigma} positions={:?} check={label}",
                            w.positions()
                        ),
                        expected: "true".into(),
                        actual: format!("error: {e}"),
                    }),
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport {
        claim: Claim::Lemmas,
        n,
        subjects: entries.len(),
        cases: entries.iter().map(|(_, subs)| subs.len()).sum(),
        mismatches: per_sigma.into_iter().flatten().collect(),
    })
}

/// All of S_n in lexicographic order.
pub(crate) fn all_perms(n: usize) -> Result<Vec<Permutation>> {
    use itertools::Itertools;
    if n == 0 {
        return Err(Error::RankTooSmall { min: 1, got: 0 });
    }
    Ok((1..=n as u8)
        .permutations(n)
        .map(|entries| Permutation::from_one_line(entries).expect("valid one-line form"))
        .collect())
}
