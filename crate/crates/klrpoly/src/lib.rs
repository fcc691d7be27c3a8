//! Exact Kazhdan-Lusztig R- and R~-polynomials on symmetric groups.
//!
//! The crate computes both polynomial families by their defining
//! recurrences over arbitrary-precision integers, enumerates Bruhat
//! intervals and reduced subwords of the staircase words Omega_n, evaluates
//! the q-Fibonacci closed forms attached to the permutations v_n = 34...n12
//! and their relatives v_{n,i}, and cross-checks the two sides against each
//! other over complete intervals. A factorizer searches R~-polynomials for
//! q-Fibonacci product certificates pair by pair.
//!
//! Everything is exact: no floats, no truncation, and every closed form is
//! evaluated through at least two independent routes wherever the algebra
//! provides one. The `cli` module exposes the same machinery as the
//! `klrpoly` binary.
//!
//! # Quick start
//!
//! ```
//! use klrpoly::{Permutation, RPolyEngine};
//!
//! let engine = RPolyEngine::new();
//! let e: Permutation = "1234".parse().unwrap();
//! let v4: Permutation = "3412".parse().unwrap();
//! assert_eq!(engine.rtilde(&e, &v4).unwrap().to_string(), "q^4 + q^2");
//! ```

pub mod bruhat;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod fib_factorizer;
pub mod omega;
pub mod perm;
pub mod poly;
pub mod rpoly;

pub use bruhat::{bruhat_leq, interval_below, BruhatInterval};
pub use closed_forms::{t_poly, verify_theorem, Claim, VerificationReport};
pub use error::{Error, Result};
pub use fib_factorizer::{factor_fibonacci, verify_conjecture, FibFactorization};
pub use omega::{omega_word, vn_perm, OmegaSubword};
pub use perm::{Permutation, Word};
pub use poly::{q_fibonacci, HalfLaurent, IntPoly};
pub use rpoly::RPolyEngine;
