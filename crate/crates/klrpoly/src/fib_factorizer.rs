//! Factorization of R~-polynomials into reversed q-Fibonacci pieces, and the
//! sweep that hunts for such a certificate on every comparable pair of a
//! Bruhat interval.
//!
//! The target shape is p(q) = q^g * prod_i F_{h_i}(q^-2) with every h_i >= 2
//! (the degenerate F_0 = F_1 = 1 factors are excluded so certificates are
//! finite and canonical). Writing rev2(h) := q^(2*floor(h/2)) F_h(q^-2),
//! the shape is equivalent to: p divided by its lowest power of q is a
//! product of rev2 factors. rev2 polynomials are monic with positive
//! constant term and even-exponent support, which gives cheap rejection
//! filters before the backtracking search runs.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bruhat::{bruhat_leq, interval_below, interval_below_unbounded, BruhatInterval};
use crate::error::{Error, Result};
use crate::omega::vn_perm;
use crate::perm::Permutation;
use crate::poly::{fib_in_qinv2, IntPoly};
use crate::rpoly::RPolyEngine;

/// A certificate p(q) = q^g * prod F_{h_i}(q^-2), with `hs` sorted
/// descending. Among all certificates for a given polynomial this is the
/// one whose factor list is lexicographically greatest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibFactorization {
    g: usize,
    hs: Vec<u32>,
}

impl FibFactorization {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn hs(&self) -> &[u32] {
        &self.hs
    }

    /// Multiplies the certificate back out.
    pub fn reconstruct(&self) -> Result<IntPoly> {
        let drop: usize = self.hs.iter().map(|&h| (h as usize / 2) * 2).sum();
        if drop > self.g {
            return Err(Error::ExponentOutOfRange(format!(
                "factorization q^{} * {:?} has negative lowest exponent",
                self.g, self.hs
            )));
        }
        let mut product = IntPoly::one();
        for &h in &self.hs {
            product = product.mul(&fib_reversed(h)?);
        }
        Ok(product.shift(self.g - drop))
    }
}

impl fmt::Display for FibFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.g {
            0 => {}
            1 => parts.push("q".to_string()),
            g => parts.push(format!("q^{g}")),
        }
        for &h in &self.hs {
            parts.push(format!("F_{h}(q^-2)"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// rev2(h) = q^(2*floor(h/2)) * F_h(q^-2): the reversed q-Fibonacci
/// polynomial in q^2, monic of degree 2*floor(h/2).
pub fn fib_reversed(h: u32) -> Result<IntPoly> {
    fib_in_qinv2(h as usize, (h as i64 / 2) * 2)
}

/// Searches for a q-Fibonacci certificate of `p`. `Ok(None)` means no
/// certificate exists; the zero polynomial and polynomials with negative
/// coefficients are outside the domain and rejected as errors.
pub fn factor_fibonacci(p: &IntPoly) -> Result<Option<FibFactorization>> {
    if p.is_zero() {
        return Err(Error::Precondition(
            "cannot factor the zero polynomial".into(),
        ));
    }
    if !p.has_nonnegative_coeffs() {
        return Err(Error::Precondition(format!(
            "{p} has a negative coefficient, outside the factorizable domain"
        )));
    }
    let low = p.min_exp().expect("nonzero polynomial has a lowest term");
    let residue = IntPoly::from_coeffs(p.coeffs()[low..].to_vec());
    let g = p.degree().expect("nonzero polynomial has a degree");
    if !residue.is_monic() || !residue.exponents_have_parity(0) {
        return Ok(None);
    }
    let cap = residue.degree().unwrap_or(0) as u32 + 1;
    let mut memo = HashMap::new();
    let hs = match search(&residue, cap, &mut memo) {
        Some(hs) => hs,
        None => return Ok(None),
    };
    let found = FibFactorization { g, hs };
    // Soundness gate: a certificate that does not multiply back to the
    // input is a bug, not a result.
    if found.reconstruct()? != *p {
        return Err(Error::Internal(format!(
            "factorization {found} of {p} fails to reconstruct"
        )));
    }
    Ok(Some(found))
}

/// Backtracking search for a non-increasing factor list with every h <= cap
/// multiplying to `residue`. Tries larger h first, so the first hit is the
/// canonical certificate.
fn search(
    residue: &IntPoly,
    cap: u32,
    memo: &mut HashMap<(Vec<BigInt>, u32), Option<Vec<u32>>>,
) -> Option<Vec<u32>> {
    if residue.is_one() {
        return Some(Vec::new());
    }
    let degree = residue.degree().unwrap_or(0) as u32;
    let cap = cap.min(degree + 1);
    if cap < 2 {
        return None;
    }
    let key = (residue.coeffs().to_vec(), cap);
    if let Some(cached) = memo.get(&key) {
        return cached.clone();
    }
    let mut answer = None;
    for h in (2..=cap).rev() {
        let factor = fib_reversed(h).expect("rev2 is total for h >= 0");
        if factor.degree() > residue.degree() {
            continue;
        }
        let quotient = match residue.exact_div(&factor) {
            Ok(Some(q)) => q,
            _ => continue,
        };
        if let Some(mut rest) = search(&quotient, h, memo) {
            let mut hs = vec![h];
            hs.append(&mut rest);
            answer = Some(hs);
            break;
        }
    }
    memo.insert(key, answer.clone());
    answer
}

/// One comparable pair whose R~-polynomial resisted factorization.
#[derive(Clone, Debug)]
pub struct ConjectureFailure {
    pub sigma1: Permutation,
    pub sigma2: Permutation,
    pub polynomial: String,
    pub note: String,
}

/// One verified pair, kept only when certificates are requested.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub sigma1: Permutation,
    pub sigma2: Permutation,
    pub factorization: FibFactorization,
}

/// Outcome of a whole-interval factorization sweep.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub n: usize,
    pub pairs: usize,
    pub failures: Vec<ConjectureFailure>,
    pub certificates: Vec<Certificate>,
}

impl ConjectureReport {
    pub fn passing(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn verified(&self) -> usize {
        self.pairs - self.failures.len()
    }
}

/// Factors R~_{sigma_1, sigma_2} for every comparable pair
/// sigma_1 <= sigma_2 below the top element (v_n, or the transposition at
/// n = 2). Failures are collected, not fatal. Refuses ranks beyond the
/// exhaustive-interval ceiling.
pub fn verify_conjecture(
    engine: &RPolyEngine,
    n: usize,
    store_certs: bool,
) -> Result<ConjectureReport> {
    let interval = interval_below(&conjecture_top(n)?)?;
    conjecture_sweep(engine, n, &interval, store_certs)
}

/// [`verify_conjecture`] without the rank ceiling.
pub fn verify_conjecture_unbounded(
    engine: &RPolyEngine,
    n: usize,
    store_certs: bool,
) -> Result<ConjectureReport> {
    let interval = interval_below_unbounded(&conjecture_top(n)?)?;
    conjecture_sweep(engine, n, &interval, store_certs)
}

/// The interval top: v_n for n >= 3; at n = 2 the family degenerates to the
/// transposition, the only element of positive length.
fn conjecture_top(n: usize) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::RankTooSmall { min: 2, got: n });
    }
    if n == 2 {
        Permutation::from_one_line(vec![2, 1])
    } else {
        vn_perm(n)
    }
}

fn conjecture_sweep(
    engine: &RPolyEngine,
    n: usize,
    interval: &BruhatInterval,
    store_certs: bool,
) -> Result<ConjectureReport> {
    let elements = interval.elements();
    struct PerTop {
        pairs: usize,
        failures: Vec<ConjectureFailure>,
        certificates: Vec<Certificate>,
    }
    let per_top: Vec<PerTop> = elements
        .par_iter()
        .map(|sigma2| -> Result<PerTop> {
            let mut out = PerTop {
                pairs: 0,
                failures: Vec::new(),
                certificates: Vec::new(),
            };
            for sigma1 in elements {
                if !bruhat_leq(sigma1, sigma2)? {
                    continue;
                }
                out.pairs += 1;
                let poly = engine.rtilde(sigma1, sigma2)?;
                match factor_fibonacci(&poly) {
                    Ok(Some(factorization)) => {
                        if store_certs {
                            out.certificates.push(Certificate {
                                sigma1: sigma1.clone(),
                                sigma2: sigma2.clone(),
                                factorization,
                            });
                        }
                    }
                    Ok(None) => out.failures.push(ConjectureFailure {
                        sigma1: sigma1.clone(),
                        sigma2: sigma2.clone(),
                        polynomial: poly.to_string(),
                        note: "no certificate exists".into(),
                    }),
                    Err(e) => out.failures.push(ConjectureFailure {
                        sigma1: sigma1.clone(),
                        sigma2: sigma2.clone(),
                        polynomial: poly.to_string(),
                        note: format!("factorizer error: {e}"),
                    }),
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = ConjectureReport {
        n,
        pairs: 0,
        failures: Vec::new(),
        certificates: Vec::new(),
    };
    for part in per_top {
        report.pairs += part.pairs;
        report.failures.extend(part.failures);
        report.certificates.extend(part.certificates);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64_coeffs(coeffs)
    }

    #[test]
    fn rev2_small_values() {
        assert_eq!(fib_reversed(0).unwrap(), IntPoly::one());
        assert_eq!(fib_reversed(1).unwrap(), IntPoly::one());
        assert_eq!(fib_reversed(2).unwrap(), ip(&[1, 0, 1]));
        assert_eq!(fib_reversed(3).unwrap(), ip(&[2, 0, 1]));
        assert_eq!(fib_reversed(4).unwrap(), ip(&[1, 0, 3, 0, 1]));
        assert_eq!(fib_reversed(5).unwrap(), ip(&[3, 0, 4, 0, 1]));
    }

    #[test]
    fn factors_pure_powers_and_constants() {
        let f = factor_fibonacci(&IntPoly::one()).unwrap().unwrap();
        assert_eq!((f.g(), f.hs()), (0, &[][..]));
        assert_eq!(f.to_string(), "1");

        let f = factor_fibonacci(&ip(&[0, 0, 0, 1])).unwrap().unwrap();
        assert_eq!((f.g(), f.hs()), (3, &[][..]));
        assert_eq!(f.to_string(), "q^3");
        assert_eq!(f.reconstruct().unwrap(), ip(&[0, 0, 0, 1]));
    }

    #[test]
    fn factors_single_fibonacci_pieces() {
        // q^5 + 2q^3 = q^5 F_3(q^-2), the polynomial R~_{e, 4312}.
        let f = factor_fibonacci(&ip(&[0, 0, 0, 2, 0, 1])).unwrap().unwrap();
        assert_eq!((f.g(), f.hs()), (5, &[3][..]));
        assert_eq!(f.to_string(), "q^5 * F_3(q^-2)");
        assert_eq!(f.reconstruct().unwrap(), ip(&[0, 0, 0, 2, 0, 1]));

        // q^4 + 3q^2 + 1 = rev2(4), preferred over any smaller split.
        let f = factor_fibonacci(&ip(&[1, 0, 3, 0, 1])).unwrap().unwrap();
        assert_eq!((f.g(), f.hs()), (4, &[4][..]));
    }

    #[test]
    fn factors_products() {
        // q(q^2+1)(q^2+2) = q^5 + 3q^3 + 2q.
        let p = ip(&[0, 2, 0, 3, 0, 1]);
        let f = factor_fibonacci(&p).unwrap().unwrap();
        assert_eq!((f.g(), f.hs()), (5, &[3, 2][..]));
        assert_eq!(f.to_string(), "q^5 * F_3(q^-2) * F_2(q^-2)");
        assert_eq!(f.reconstruct().unwrap(), p);

        // (q^2+1)^2 has only the repeated-factor certificate.
        let p = ip(&[1, 0, 2, 0, 1]);
        let f = factor_fibonacci(&p).unwrap().unwrap();
        assert_eq!((f.g(), f.hs()), (4, &[2, 2][..]));
    }

    #[test]
    fn rejects_unfactorable_polynomials() {
        assert_eq!(factor_fibonacci(&ip(&[3, 0, 1])).unwrap(), None);
        // Odd exponent in the residue.
        assert_eq!(factor_fibonacci(&ip(&[0, 0, 1, 1])).unwrap(), None);
        // Non-monic residue.
        assert_eq!(factor_fibonacci(&ip(&[1, 0, 2])).unwrap(), None);
    }

    #[test]
    fn polynomials_off_the_interval_may_resist() {
        // 456123 is not below v_6 = 345612, and its bottom R~-polynomial
        // q^9 + 4q^7 + 3q^5 + q^3 genuinely has no certificate: the residue
        // q^6 + 4q^4 + 3q^2 + 1 matches no product of reversed pieces.
        let engine = RPolyEngine::new();
        let e: Permutation = "123456".parse().unwrap();
        let v: Permutation = "456123".parse().unwrap();
        let rt = engine.rtilde(&e, &v).unwrap();
        assert_eq!(rt, ip(&[0, 0, 0, 1, 0, 3, 0, 4, 0, 1]));
        assert_eq!(factor_fibonacci(&rt).unwrap(), None);
    }

    #[test]
    fn rejects_out_of_domain_inputs() {
        assert!(matches!(
            factor_fibonacci(&IntPoly::zero()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            factor_fibonacci(&ip(&[-1, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conjecture_sweep_rank_two() {
        let engine = RPolyEngine::new();
        let report = verify_conjecture(&engine, 2, true).unwrap();
        assert_eq!(report.pairs, 3);
        assert!(report.passing());
        assert_eq!(report.certificates.len(), 3);
        let nontrivial = report
            .certificates
            .iter()
            .find(|c| c.sigma1 != c.sigma2)
            .unwrap();
        assert_eq!(nontrivial.factorization.to_string(), "q");
    }

    #[test]
    fn conjecture_sweep_rank_three() {
        let engine = RPolyEngine::new();
        let report = verify_conjecture(&engine, 3, false).unwrap();
        assert_eq!(report.pairs, 9);
        assert!(report.passing(), "{:?}", report.failures);
        assert_eq!(report.verified(), 9);
        assert!(report.certificates.is_empty());
    }

    #[test]
    fn conjecture_guards_rank() {
        let engine = RPolyEngine::new();
        assert!(matches!(
            verify_conjecture(&engine, 1, false),
            Err(Error::RankTooSmall { .. })
        ));
        assert!(matches!(
            verify_conjecture(&engine, 9, false),
            Err(Error::Capacity { .. })
        ));
    }
}
