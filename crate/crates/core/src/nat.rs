//! Arbitrary-precision naturals, the extended naturals, budgets and b-decompositions.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

/// A natural number or the distinguished infinity. `Inf` exceeds every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(Nat),
    Inf,
}

impl ExtNat {
    pub fn fin(&self) -> Option<&Nat> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    /// Every positive `k` divides infinity.
    pub fn divisible_by(&self, k: &Nat) -> bool {
        match self {
            ExtNat::Fin(n) => !k.is_zero() && n.is_multiple_of(k),
            ExtNat::Inf => !k.is_zero(),
        }
    }

    pub fn from_u64(n: u64) -> Self {
        ExtNat::Fin(Nat::from(n))
    }
}

impl From<Nat> for ExtNat {
    fn from(n: Nat) -> Self {
        ExtNat::Fin(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

/// Budgets shared by every computation that can explode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest admissible natural number, in decimal digits.
    pub digit_cap: u64,
    /// Iteration budget for fundamental-sequence descents and runs.
    pub step_cap: u64,
    /// Candidate budget for the n_* search.
    pub search_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { digit_cap: 1_000_000, step_cap: 1_000_000, search_cap: 1_000_000 }
    }
}

const LOG2_10: f64 = std::f64::consts::LOG2_10;

impl Limits {
    pub fn with_digit_cap(digit_cap: u64) -> Self {
        Limits { digit_cap, ..Limits::default() }
    }

    /// Bit length corresponding to the digit cap.
    pub fn bit_cap(&self) -> u64 {
        (self.digit_cap as f64 * LOG2_10).ceil() as u64
    }

    /// Fails with `NumericBlowup` when `n` has more digits than allowed.
    pub fn check(&self, n: &Nat, what: &str) -> Result<()> {
        if n.bits() > self.bit_cap() {
            Err(self.blowup(what))
        } else {
            Ok(())
        }
    }

    /// Budget for the total bit length of a materialized hierarchy.
    pub fn material_cap(&self) -> u64 {
        self.bit_cap().saturating_mul(64)
    }

    pub fn blowup(&self, what: &str) -> Error {
        Error::NumericBlowup(format!("{what} exceeds {} decimal digits", self.digit_cap))
    }

    /// `c^e`, refusing results beyond the digit cap before computing them.
    pub fn pow(&self, c: &Nat, e: &Nat, what: &str) -> Result<Nat> {
        if e.is_zero() {
            return Ok(Nat::one());
        }
        if c <= &Nat::one() {
            return Ok(c.clone());
        }
        let e64 = e.to_u64().ok_or_else(|| self.blowup(what))?;
        let est = log2(c) * e64 as f64;
        if est > self.bit_cap() as f64 + 1.0 {
            return Err(self.blowup(what));
        }
        let r: Nat = Pow::pow(c, e64);
        self.check(&r, what)?;
        Ok(r)
    }
}

/// Approximate base-2 logarithm of a positive natural.
pub fn log2(n: &Nat) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().map_or(0.0, |v| (v as f64).log2());
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// The b-decomposition `n = b^e·a + r` with `0 < a < b` and `r < b^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub base: Nat,
    pub exponent: Nat,
    pub leading: Nat,
    pub remainder: Nat,
}

/// Decomposes `n > 0` in base `b ≥ 2`.
pub fn decompose(n: &Nat, b: &Nat) -> Result<Decomposition> {
    if n.is_zero() {
        return Err(Error::Invalid("cannot decompose 0".into()));
    }
    if b < &Nat::from(2u32) {
        return Err(Error::Invalid(format!("base {b} is below 2")));
    }
    let (e, p) = floor_log(n, b);
    let (a, r) = n.div_rem(&p);
    Ok(Decomposition { base: b.clone(), exponent: Nat::from(e), leading: a, remainder: r })
}

/// Returns `(e, b^e)` with `b^e ≤ n < b^(e+1)`, for `n ≥ 1`, `b ≥ 2`.
pub fn floor_log(n: &Nat, b: &Nat) -> (u64, Nat) {
    if n < b {
        return (0, Nat::one());
    }
    let mut e = (log2(n) / log2(b)).floor().max(0.0) as u64;
    e = e.saturating_sub(1);
    let mut p: Nat = Pow::pow(b, e);
    while &p > n {
        p /= b;
        e -= 1;
    }
    loop {
        let q = &p * b;
        if &q > n {
            break;
        }
        p = q;
        e += 1;
    }
    (e, p)
}

/// Parses a decimal natural.
pub fn parse_nat(s: &str) -> Result<Nat> {
    s.trim()
        .parse::<Nat>()
        .map_err(|_| Error::Invalid(format!("not a natural number: {s:?}")))
}

pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}
