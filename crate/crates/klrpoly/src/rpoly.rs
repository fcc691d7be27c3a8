//! Memoized recurrence engine for the two Kazhdan-Lusztig R-polynomial
//! families on S_n.
//!
//! Both families recurse on s = the smallest right descent of v:
//!
//! * R-tilde: R~_{u,v} = R~_{us,vs} when s is a descent of u, and
//!   R~_{us,vs} + q R~_{u,vs} otherwise, with R~_{u,u} = 1 and R~_{u,v} = 0
//!   when u is not below v in Bruhat order.
//! * R: R_{u,v} = R_{us,vs} when s is a descent of u, and
//!   q R_{us,vs} + (q - 1) R_{u,vs} otherwise, same base cases.
//!
//! The recurrences alone do not terminate on incomparable pairs, so every
//! evaluation first settles comparability through the Bruhat module. One
//! engine owns one memo per family, shared by all subcalls in the process;
//! concurrent sweeps may hit the maps from many threads, and duplicated
//! inserts are harmless because a key always maps to the same polynomial.
//!
//! The families are linked by R_{u,v}(q) = q^((l(v)-l(u))/2) *
//! R~_{u,v}(q^(1/2) - q^(-1/2)), implemented in [`RPolyEngine::rtilde_to_r`]
//! over the exact half-exponent grid.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use dashmap::DashMap;
use num_bigint::BigInt;

use crate::bruhat::bruhat_leq;
use crate::error::{Error, Result};
use crate::perm::{check_same_rank, Permutation};
use crate::poly::{substitute_x, IntPoly};

/// Pair keys pack one-line entries into u64 nibbles, so ranks beyond 16
/// cannot be keyed.
pub const MAX_ENGINE_RANK: usize = 16;

/// Canonical memo key for an ordered pair (u, v) of equal rank. The packing
/// stores entry-1 of position i in nibble i, which is injective for every
/// rank up to 16; the rank rides along to make decoding trivial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PairKey {
    rank: u8,
    u: u64,
    v: u64,
}

impl PairKey {
    pub fn new(u: &Permutation, v: &Permutation) -> Result<Self> {
        check_same_rank(u.rank(), v.rank())?;
        if u.rank() > MAX_ENGINE_RANK {
            return Err(Error::Capacity {
                what: "R-polynomial pair keys",
                max: MAX_ENGINE_RANK,
                got: u.rank(),
            });
        }
        Ok(Self {
            rank: u.rank() as u8,
            u: pack(u),
            v: pack(v),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn unpack(&self) -> (Permutation, Permutation) {
        (unpack(self.u, self.rank()), unpack(self.v, self.rank()))
    }
}

fn pack(p: &Permutation) -> u64 {
    let mut packed = 0u64;
    for (i, &v) in p.entries().iter().enumerate() {
        packed |= ((v - 1) as u64) << (4 * i);
    }
    packed
}

fn unpack(packed: u64, rank: usize) -> Permutation {
    let entries: Vec<u8> = (0..rank)
        .map(|i| ((packed >> (4 * i)) & 0xf) as u8 + 1)
        .collect();
    Permutation::from_one_line(entries).expect("packed keys hold valid one-line forms")
}

/// Memoized evaluator for both R-polynomial families, plus the change of
/// variable linking them. Cheap to share by reference across rayon workers.
#[derive(Default)]
pub struct RPolyEngine {
    rtilde: DashMap<PairKey, IntPoly>,
    rpoly: DashMap<PairKey, IntPoly>,
}

impl RPolyEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized R-tilde entries.
    pub fn rtilde_cache_len(&self) -> usize {
        self.rtilde.len()
    }

    /// R~_{u,v}.
    pub fn rtilde(&self, u: &Permutation, v: &Permutation) -> Result<IntPoly> {
        let key = PairKey::new(u, v)?;
        Ok(self.rtilde_inner(u, v, key))
    }

    fn rtilde_inner(&self, u: &Permutation, v: &Permutation, key: PairKey) -> IntPoly {
        if u == v {
            return IntPoly::one();
        }
        if let Some(hit) = self.rtilde.get(&key) {
            return hit.clone();
        }
        let value = if !bruhat_leq(u, v).expect("equal ranks") {
            IntPoly::zero()
        } else {
            let s = v.first_right_descent().expect("u < v forces l(v) >= 1");
            let us = u.mul_s_unchecked(s);
            let vs = v.mul_s_unchecked(s);
            let key_us_vs = PairKey::new(&us, &vs).expect("rank preserved");
            if u.has_right_descent(s) {
                self.rtilde_inner(&us, &vs, key_us_vs)
            } else {
                let key_u_vs = PairKey::new(u, &vs).expect("rank preserved");
                let a = self.rtilde_inner(&us, &vs, key_us_vs);
                let b = self.rtilde_inner(u, &vs, key_u_vs);
                a.add(&b.shift(1))
            }
        };
        self.rtilde.insert(key, value.clone());
        value
    }

    /// R_{u,v}, computed by its own recurrence (not via the change of
    /// variable, which is kept as an independent route for cross-checks).
    pub fn rpoly(&self, u: &Permutation, v: &Permutation) -> Result<IntPoly> {
        let key = PairKey::new(u, v)?;
        Ok(self.rpoly_inner(u, v, key))
    }

    fn rpoly_inner(&self, u: &Permutation, v: &Permutation, key: PairKey) -> IntPoly {
        if u == v {
            return IntPoly::one();
        }
        if let Some(hit) = self.rpoly.get(&key) {
            return hit.clone();
        }
        let value = if !bruhat_leq(u, v).expect("equal ranks") {
            IntPoly::zero()
        } else {
            let s = v.first_right_descent().expect("u < v forces l(v) >= 1");
            let us = u.mul_s_unchecked(s);
            let vs = v.mul_s_unchecked(s);
            let key_us_vs = PairKey::new(&us, &vs).expect("rank preserved");
            if u.has_right_descent(s) {
                self.rpoly_inner(&us, &vs, key_us_vs)
            } else {
                let key_u_vs = PairKey::new(u, &vs).expect("rank preserved");
                let a = self.rpoly_inner(&us, &vs, key_us_vs);
                let b = self.rpoly_inner(u, &vs, key_u_vs);
                // q * R_{us,vs} + (q - 1) * R_{u,vs}
                a.shift(1).add(&b.mul(&IntPoly::from_i64_coeffs(&[-1, 1])))
            }
        };
        self.rpoly.insert(key, value.clone());
        value
    }

    /// R_{u,v} obtained from R~_{u,v} by the change of variable
    /// x = q^(1/2) - q^(-1/2) and the shift q^((l(v)-l(u))/2). Residual half
    /// exponents after the shift signal an engine bug, not a valid outcome.
    pub fn rtilde_to_r(&self, u: &Permutation, v: &Permutation) -> Result<IntPoly> {
        let rt = self.rtilde(u, v)?;
        let substituted = substitute_x(&rt);
        let half_shift = v.length() as i64 - u.length() as i64;
        substituted
            .shift_half(half_shift)
            .to_int_poly()
            .map_err(|e| Error::Internal(format!("change of variable left stray exponents: {e}")))
    }

    /// One unrolling of the R-tilde recurrence with the caller's choice of
    /// descent s of v, used to confirm that the result does not depend on
    /// the choice. Requires u < v and s a right descent of v.
    pub fn rtilde_with_descent(
        &self,
        u: &Permutation,
        v: &Permutation,
        s: usize,
    ) -> Result<IntPoly> {
        check_same_rank(u.rank(), v.rank())?;
        if !v.has_right_descent(s) {
            return Err(Error::Precondition(format!(
                "{s} is not a right descent of v = {v}"
            )));
        }
        if u == v || !bruhat_leq(u, v)? {
            return Err(Error::Precondition(format!(
                "rtilde_with_descent requires u < v, got u = {u}, v = {v}"
            )));
        }
        let us = u.mul_right_s(s)?;
        let vs = v.mul_right_s(s)?;
        if u.has_right_descent(s) {
            self.rtilde(&us, &vs)
        } else {
            let a = self.rtilde(&us, &vs)?;
            let b = self.rtilde(u, &vs)?;
            Ok(a.add(&b.shift(1)))
        }
    }

    /// Loads R-tilde memo entries from a `RPOLYCACHE v1` file, returning how
    /// many records were read. Missing files are not an error here; the
    /// caller decides whether absence matters.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, CACHE_MAGIC)) => {}
            Some((_, other)) => {
                return Err(Error::CacheFormat {
                    line: 1,
                    msg: format!("bad magic line '{other}', expected '{CACHE_MAGIC}'"),
                })
            }
            None => {
                return Err(Error::CacheFormat {
                    line: 1,
                    msg: "empty cache file".into(),
                })
            }
        }
        let mut loaded = 0;
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let rank: usize = parse_field(fields.next(), line_no, "rank")?;
            let u: Permutation = parse_field(fields.next(), line_no, "u")?;
            let v: Permutation = parse_field(fields.next(), line_no, "v")?;
            if u.rank() != rank || v.rank() != rank {
                return Err(Error::CacheFormat {
                    line: line_no,
                    msg: format!("rank field {rank} disagrees with permutations {u}, {v}"),
                });
            }
            let mut coeffs = Vec::new();
            for token in fields {
                let c = BigInt::from_str(token).map_err(|_| Error::CacheFormat {
                    line: line_no,
                    msg: format!("bad coefficient '{token}'"),
                })?;
                coeffs.push(c);
            }
            let key = PairKey::new(&u, &v).map_err(|e| Error::CacheFormat {
                line: line_no,
                msg: e.to_string(),
            })?;
            self.rtilde.insert(key, IntPoly::from_coeffs(coeffs));
            loaded += 1;
        }
        Ok(loaded)
    }

    /// Writes the R-tilde memo as a flat record stream, atomically (write to
    /// a sibling temp file, then rename). Records are sorted so identical
    /// caches serialize identically.
    pub fn save_cache(&self, path: &Path) -> Result<usize> {
        let mut records: Vec<(usize, Permutation, Permutation, IntPoly)> = self
            .rtilde
            .iter()
            .map(|entry| {
                let (u, v) = entry.key().unpack();
                (entry.key().rank(), u, v, entry.value().clone())
            })
            .collect();
        records.sort_by(|a, b| (a.0, &a.1, &a.2).cmp(&(b.0, &b.1, &b.2)));
        let mut out = String::from(CACHE_MAGIC);
        out.push('\n');
        for (rank, u, v, poly) in &records {
            out.push_str(&format!("{rank} {u} {v}"));
            for c in poly.coeffs() {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp_path = Path::new(&tmp);
        fs::write(tmp_path, out)?;
        fs::rename(tmp_path, path)?;
        Ok(records.len())
    }
}

pub const CACHE_MAGIC: &str = "RPOLYCACHE v1";

fn parse_field<T: FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::CacheFormat {
        line,
        msg: format!("missing {what} field"),
    })?;
    token.parse().map_err(|_| Error::CacheFormat {
        line,
        msg: format!("bad {what} field '{token}'"),
    })
}
