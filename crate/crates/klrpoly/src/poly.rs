//! Exact polynomial arithmetic over the integers.
//!
//! Two representations are used. [`IntPoly`] is a dense polynomial in q with
//! arbitrary-precision coefficients; all R-polynomial values live here.
//! [`HalfLaurent`] is a sparse Laurent polynomial on the half-integer grid
//! q^(k/2), needed for the change of variable q^(1/2) - q^(-1/2) that links
//! the two R-polynomial families.
//!
//! The q-Fibonacci family is defined by F_0 = F_1 = 1 and
//! F_m(q) = F_{m-1}(q) + q F_{m-2}(q), so deg F_m = floor(m/2) and
//! F_m(1) is the ordinary Fibonacci number. `fib_in_qinv2(m, lead)` evaluates
//! the reversed form q^lead * F_m(q^-2), which is how every closed form in
//! this crate consumes the family.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial in q with `BigInt` coefficients. `coeffs[k]` is the
/// coefficient of q^k; trailing zeros are always trimmed, so the zero
/// polynomial is the empty vector and `degree()` is `None` exactly there.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn monomial(c: impl Into<BigInt>, exp: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Self { coeffs }
    }

    /// Builds from coefficients in increasing exponent order, trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Smallest exponent with a nonzero coefficient; `None` for zero.
    pub fn min_exp(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// `true` when every nonzero term's exponent has the same parity as
    /// `parity` (0 or 1). Vacuously true for the zero polynomial.
    pub fn exponents_have_parity(&self, parity: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| c.is_zero() || k % 2 == parity % 2)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[k] -= c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by q^k. Only nonnegative shifts exist for `IntPoly`;
    /// use [`HalfLaurent`] when negative exponents can occur.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Exact division over the integers: `Ok(Some(t))` with `self = den * t`
    /// when a quotient with integer coefficients exists, `Ok(None)` when it
    /// does not, and an error only for a zero divisor. No partial quotient is
    /// ever returned.
    pub fn exact_div(&self, den: &Self) -> Result<Option<Self>> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(Self::zero()));
        }
        let deg_n = self.degree().expect("nonzero");
        let deg_d = den.degree().expect("nonzero");
        if deg_n < deg_d {
            return Ok(None);
        }
        let den_lead = den.leading_coeff().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); deg_n - deg_d + 1];
        for k in (0..=deg_n - deg_d).rev() {
            let lead = rem[k + deg_d].clone();
            if lead.is_zero() {
                continue;
            }
            if !(&lead % den_lead).is_zero() {
                return Ok(None);
            }
            let q = &lead / den_lead;
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(Self::from_coeffs(quot)))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for IntPoly {
    /// Terms in decreasing exponent with explicit coefficients, e.g.
    /// "q^4 + q^2", "2q^5", "q - 1", "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, &c.abs(), exp as i64, false)?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, abs: &BigInt, exp: i64, half: bool) -> fmt::Result {
    let show_coeff = !abs.is_one() || (exp == 0 && !half);
    if show_coeff {
        write!(f, "{abs}")?;
    }
    if half {
        // exp is in half-units here and odd.
        if exp >= 0 {
            write!(f, "q^({exp}/2)")
        } else {
            write!(f, "q^(-{}/2)", -exp)
        }
    } else if exp == 1 {
        write!(f, "q")
    } else if exp != 0 {
        write!(f, "q^{exp}")
    } else {
        Ok(())
    }
}

/// Sparse Laurent polynomial on the half-integer grid: the map key is the
/// exponent in half-units, so key 3 means q^(3/2) and key -2 means q^-1.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HalfLaurent {
    coeffs: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut out = Self::default();
        out.add_term(0, c.into());
        out
    }

    pub fn from_half_terms(terms: &[(i64, i64)]) -> Self {
        let mut out = Self::default();
        for &(half_exp, c) in terms {
            out.add_term(half_exp, BigInt::from(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// (half-unit exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn min_half_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn add_term(&mut self, half_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(half_exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&half_exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    /// Multiplication by q^(k/2); `k` may be negative.
    pub fn shift_half(&self, k: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// Converts to an [`IntPoly`] when every exponent is a nonnegative
    /// integer; otherwise reports the first offending exponent.
    pub fn to_int_poly(&self) -> Result<IntPoly> {
        let mut coeffs = Vec::new();
        for (&k, c) in &self.coeffs {
            if k < 0 || k % 2 != 0 {
                return Err(Error::ExponentOutOfRange(format!(
                    "half-unit exponent {k} is not a nonnegative integer power of q"
                )));
            }
            let exp = (k / 2) as usize;
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] = c.clone();
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}

impl From<&IntPoly> for HalfLaurent {
    fn from(p: &IntPoly) -> Self {
        let mut out = Self::default();
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(2 * k as i64, c.clone());
        }
        out
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in self.coeffs.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            if k % 2 != 0 {
                write_term(f, &abs, k, true)?;
            } else {
                let exp = k / 2;
                // Negative integer exponents render as q^-1, q^-2, ...
                let show_coeff = !abs.is_one() || exp == 0;
                if show_coeff {
                    write!(f, "{abs}")?;
                }
                if exp == 1 {
                    write!(f, "q")?;
                } else if exp != 0 {
                    write!(f, "q^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HalfLaurent({self})")
    }
}

static FIB_CACHE: Mutex<Vec<IntPoly>> = Mutex::new(Vec::new());

/// The q-Fibonacci polynomial F_m, from F_0 = F_1 = 1 and
/// F_m = F_{m-1} + q F_{m-2}. Values are cached per process after first
/// computation; the cache only ever grows and each index always yields the
/// same polynomial.
pub fn q_fibonacci(m: usize) -> IntPoly {
    let mut cache = FIB_CACHE.lock().expect("fibonacci cache poisoned");
    if cache.is_empty() {
        cache.push(IntPoly::one());
        cache.push(IntPoly::one());
    }
    while cache.len() <= m {
        let next = cache[cache.len() - 1].add(&cache[cache.len() - 2].shift(1));
        cache.push(next);
    }
    cache[m].clone()
}

/// The reversed form q^lead * F_m(q^-2) as a polynomial: the coefficient of
/// q^k in F_m lands on exponent lead - 2k. Requires lead >= 2*deg(F_m) so no
/// exponent goes negative.
pub fn fib_in_qinv2(m: usize, lead: i64) -> Result<IntPoly> {
    let f = q_fibonacci(m);
    let deg = f.degree().expect("q-Fibonacci polynomials are nonzero") as i64;
    if lead < 2 * deg {
        return Err(Error::ExponentOutOfRange(format!(
            "q^{lead} * F_{m}(q^-2) has negative exponents (need lead >= {})",
            2 * deg
        )));
    }
    let mut coeffs = vec![BigInt::zero(); lead as usize + 1];
    for (k, c) in f.coeffs().iter().enumerate() {
        coeffs[(lead - 2 * k as i64) as usize] = c.clone();
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

/// Substitutes x = q^(1/2) - q^(-1/2) into p(x), evaluated by Horner's rule
/// in exact half-grid arithmetic.
pub fn substitute_x(p: &IntPoly) -> HalfLaurent {
    let x = HalfLaurent::from_half_terms(&[(1, 1), (-1, -1)]);
    let mut result = HalfLaurent::zero();
    for c in p.coeffs().iter().rev() {
        result = result.mul(&x);
        let mut constant = HalfLaurent::default();
        constant.add_term(0, c.clone());
        result = result.add(&constant);
    }
    result
}
