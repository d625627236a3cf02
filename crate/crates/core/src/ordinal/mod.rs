//! Ordinal terms below ε_{Ω+1} in Ω-normal form, built from 0, ϑ, + and Ω-monomials.
//!
//! Countable additively indecomposable ordinals are always stored as `Theta(x)`;
//! ω^x is computed by [`omega_pow`]. A `Sum` lists its parts in decreasing order:
//! first the Ω-monomials (strictly decreasing exponents), then countable `Theta`
//! parts (non-increasing). Finite `k` is a sum of `k` copies of ϑ(0).

mod fs;
mod syntax;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::nat::Nat;

pub use fs::{big_f, cofinality, fs, is_fix, iter_sq, sq_fs, sq_fs_ext, theta_star, zeta_check};
pub use syntax::{parse, parse_ext, render};

/// Largest finite ordinal accepted as a literal or conversion.
pub const MAX_FINITE: u64 = 1 << 20;

/// An ordinal term in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ordinal {
    Zero,
    /// ϑ(x).
    Theta(Arc<Ordinal>),
    /// At least two parts, each a `Theta` or an `OmegaMono`, in decreasing order.
    Sum(Arc<[Ordinal]>),
    /// Ω^exp · coeff with `exp > 0` and `0 < coeff < Ω`.
    OmegaMono { exp: Arc<Ordinal>, coeff: Arc<Ordinal> },
}

/// An ordinal term or the collapse of ε_{Ω+1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtOrd {
    Ord(Ordinal),
    /// ϑ[ε_{Ω+1}], the supremum of ϑ(Ω_n).
    Top,
}

impl From<Ordinal> for ExtOrd {
    fn from(x: Ordinal) -> Self {
        ExtOrd::Ord(x)
    }
}

impl ExtOrd {
    pub fn compare(&self, other: &ExtOrd) -> Ordering {
        match (self, other) {
            (ExtOrd::Top, ExtOrd::Top) => Ordering::Equal,
            (ExtOrd::Top, _) => Ordering::Greater,
            (_, ExtOrd::Top) => Ordering::Less,
            (ExtOrd::Ord(a), ExtOrd::Ord(b)) => compare(a, b),
        }
    }

    pub fn as_ord(&self) -> Option<&Ordinal> {
        match self {
            ExtOrd::Ord(x) => Some(x),
            ExtOrd::Top => None,
        }
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::Zero
    }

    pub fn one() -> Self {
        Ordinal::theta(Ordinal::Zero)
    }

    /// ω = ϑ(1).
    pub fn omega() -> Self {
        Ordinal::theta(Ordinal::one())
    }

    /// Ω = Ω^1·1.
    pub fn big_omega() -> Self {
        mono(Ordinal::one(), Ordinal::one())
    }

    pub fn theta(x: Ordinal) -> Self {
        Ordinal::Theta(Arc::new(x))
    }

    /// The finite ordinal `k`. Panics above [`MAX_FINITE`].
    pub fn nat(k: u64) -> Self {
        assert!(k <= MAX_FINITE, "finite ordinal {k} too large");
        match k {
            0 => Ordinal::Zero,
            1 => Ordinal::one(),
            _ => Ordinal::Sum(vec![Ordinal::one(); k as usize].into()),
        }
    }

    /// The finite ordinal denoted by a natural number.
    pub fn from_nat(n: &Nat) -> Result<Self> {
        match n.to_u64() {
            Some(k) if k <= MAX_FINITE => Ok(Ordinal::nat(k)),
            _ => Err(Error::Invalid(format!("finite ordinal {n} exceeds {MAX_FINITE}"))),
        }
    }

    /// Builds a term from parts already in decreasing normal order.
    pub fn from_parts(mut parts: Vec<Ordinal>) -> Self {
        match parts.len() {
            0 => Ordinal::Zero,
            1 => parts.pop().unwrap(),
            _ => Ordinal::Sum(parts.into()),
        }
    }

    /// The additive parts: empty for 0, a single part for monomials.
    pub fn parts(&self) -> &[Ordinal] {
        match self {
            Ordinal::Zero => &[],
            Ordinal::Sum(ps) => ps,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ordinal::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Ordinal::Theta(x) if x.is_zero())
    }

    /// True when the term is below Ω.
    pub fn is_countable(&self) -> bool {
        !matches!(self.parts().first(), Some(Ordinal::OmegaMono { .. }))
    }

    /// The value of a finite ordinal.
    pub fn finite_value(&self) -> Option<u64> {
        self.parts().iter().all(Ordinal::is_one).then(|| self.parts().len() as u64)
    }

    pub fn is_finite(&self) -> bool {
        self.finite_value().is_some()
    }

    pub fn is_succ(&self) -> bool {
        self.parts().last().is_some_and(Ordinal::is_one)
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_succ()
    }

    /// True for additively indecomposable nonzero ordinals.
    pub fn is_principal(&self) -> bool {
        matches!(self, Ordinal::Theta(_))
            || matches!(self, Ordinal::OmegaMono { coeff, .. } if coeff.is_principal())
    }

    /// The predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_succ() {
            return None;
        }
        let ps = self.parts();
        Some(Ordinal::from_parts(ps[..ps.len() - 1].to_vec()))
    }

    /// The argument of a `Theta` term.
    pub fn theta_arg(&self) -> Option<&Ordinal> {
        match self {
            Ordinal::Theta(x) => Some(x),
            _ => None,
        }
    }

    /// Ω-normal form `Ω^α·β + γ` with `β < Ω` and `γ < Ω^α`; `None` for 0.
    pub fn lead(&self) -> Option<(Ordinal, Ordinal, Ordinal)> {
        match self.parts().first()? {
            Ordinal::OmegaMono { exp, coeff } => Some((
                (**exp).clone(),
                (**coeff).clone(),
                Ordinal::from_parts(self.parts()[1..].to_vec()),
            )),
            _ => Some((Ordinal::Zero, self.clone(), Ordinal::Zero)),
        }
    }

    /// Splits into the Ω-monomial head and the countable tail.
    pub fn split_countable(&self) -> (Ordinal, Ordinal) {
        let ps = self.parts();
        let k = ps.iter().take_while(|p| matches!(p, Ordinal::OmegaMono { .. })).count();
        (Ordinal::from_parts(ps[..k].to_vec()), Ordinal::from_parts(ps[k..].to_vec()))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for ExtOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtOrd::Ord(x) => f.write_str(&render(x)),
            ExtOrd::Top => f.write_str("BH"),
        }
    }
}

/// Total order on normal forms.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    let (pa, pb) = (a.parts(), b.parts());
    for (x, y) in pa.iter().zip(pb) {
        match cmp_part(x, y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    pa.len().cmp(&pb.len())
}

fn cmp_part(x: &Ordinal, y: &Ordinal) -> Ordering {
    use Ordinal::*;
    match (x, y) {
        (OmegaMono { exp: e1, coeff: c1 }, OmegaMono { exp: e2, coeff: c2 }) => {
            compare(e1, e2).then_with(|| compare(c1, c2))
        }
        (OmegaMono { .. }, _) => Ordering::Greater,
        (_, OmegaMono { .. }) => Ordering::Less,
        (Theta(p), Theta(q)) => cmp_theta(p, q),
        _ => unreachable!("parts are Theta or OmegaMono"),
    }
}

/// ϑ(p) vs ϑ(q): for p < q, ϑ(p) < ϑ(q) iff mco(p) < ϑ(q).
fn cmp_theta(p: &Arc<Ordinal>, q: &Arc<Ordinal>) -> Ordering {
    if Arc::ptr_eq(p, q) {
        return Ordering::Equal;
    }
    match compare(p, q) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less => {
            if compare(&mco(p), &Ordinal::Theta(q.clone())) == Ordering::Less {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        Ordering::Greater => {
            if compare(&mco(q), &Ordinal::Theta(p.clone())) == Ordering::Less {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
    }
}

/// Maximal coefficient: mco 0 = 0, mco(Ω^η α + γ) = max{α, mco η, mco γ}.
pub fn mco(x: &Ordinal) -> Ordinal {
    let (head, tail) = x.split_countable();
    let mut best = tail;
    for p in head.parts() {
        if let Ordinal::OmegaMono { exp, coeff } = p {
            for cand in [(**coeff).clone(), mco(exp)] {
                if cand > best {
                    best = cand;
                }
            }
        }
    }
    best
}

/// Ω^e·c without validation; 0 when `c = 0`, `c` when `e = 0`.
pub(crate) fn mono(e: Ordinal, c: Ordinal) -> Ordinal {
    if c.is_zero() {
        Ordinal::Zero
    } else if e.is_zero() {
        c
    } else {
        debug_assert!(c.is_countable());
        Ordinal::OmegaMono { exp: Arc::new(e), coeff: Arc::new(c) }
    }
}

/// Ω^e·c for a countable nonzero coefficient.
pub fn omega_mono(e: &Ordinal, c: &Ordinal) -> Result<Ordinal> {
    if !c.is_countable() {
        return Err(Error::Invalid(format!("uncountable coefficient {c}")));
    }
    if c.is_zero() {
        return Err(Error::Invalid("zero coefficient".into()));
    }
    Ok(mono(e.clone(), c.clone()))
}

/// Ordinal sum in normal form.
pub fn add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return b.clone();
    }
    let (pa, pb) = (a.parts(), b.parts());
    let lead = &pb[0];
    let mut out: Vec<Ordinal> = Vec::with_capacity(pa.len() + pb.len());
    match lead {
        Ordinal::OmegaMono { exp: eb, coeff: cb } => {
            for p in pa {
                let Ordinal::OmegaMono { exp: ea, coeff: ca } = p else { break };
                match compare(ea, eb) {
                    Ordering::Greater => out.push(p.clone()),
                    Ordering::Equal => {
                        out.push(mono((**ea).clone(), add(ca, cb)));
                        out.extend(pb[1..].iter().cloned());
                        return Ordinal::from_parts(out);
                    }
                    Ordering::Less => break,
                }
            }
            out.extend(pb.iter().cloned());
        }
        _ => {
            for p in pa {
                if matches!(p, Ordinal::OmegaMono { .. }) || cmp_part(p, lead) != Ordering::Less {
                    out.push(p.clone());
                } else {
                    break;
                }
            }
            out.extend(pb.iter().cloned());
        }
    }
    Ordinal::from_parts(out)
}

/// `k`-fold sum `a + ⋯ + a`.
pub fn nat_mul(a: &Ordinal, k: u64) -> Ordinal {
    if k == 0 || a.is_zero() {
        return Ordinal::Zero;
    }
    let (head, tail) = a.split_countable();
    if head.is_zero() {
        // Countable: a·k repeats the parts of `a` after the first copy absorbs nothing.
        let ps = tail.parts();
        let first = &ps[0];
        let keep = ps.iter().take_while(|p| cmp_part(p, first) != Ordering::Less).count();
        let mut out: Vec<Ordinal> = Vec::with_capacity(ps.len() * k as usize);
        for _ in 1..k {
            out.extend(ps[..keep].iter().cloned());
        }
        out.extend(ps.iter().cloned());
        return Ordinal::from_parts(out);
    }
    let mut acc = a.clone();
    for _ in 1..k {
        acc = add(&acc, a);
    }
    acc
}

pub fn max(a: &Ordinal, b: &Ordinal) -> Ordinal {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// ω^x for countable `x`, via ϑ(α) = ω^{α+1} when α = ε + n, else ω^α.
pub fn omega_pow(x: &Ordinal) -> Result<Ordinal> {
    if !x.is_countable() {
        return Err(Error::Invalid(format!("omega_pow of uncountable {x}")));
    }
    let ps = x.parts();
    let n = ps.iter().rev().take_while(|p| p.is_one()).count();
    let head = &ps[..ps.len() - n];
    if let [Ordinal::Theta(y)] = head {
        if !y.is_countable() {
            // ε-number plus n.
            return Ok(if n == 0 {
                x.clone()
            } else {
                Ordinal::theta(x.pred().expect("successor"))
            });
        }
    }
    Ok(Ordinal::theta(x.clone()))
}

/// Ω_0 = 1, Ω_{k+1} = Ω^{Ω_k}.
pub fn omega_n(k: u64) -> Ordinal {
    let mut x = Ordinal::one();
    for _ in 0..k {
        x = mono(x, Ordinal::one());
    }
    x
}

/// ω_k(ℓ): a tower of `k` ω's with ω^ℓ on top; ω_0(ℓ) = ℓ.
pub fn omega_tower(k: u64, top: u64) -> Ordinal {
    let mut x = Ordinal::nat(top);
    for _ in 0..k {
        x = omega_pow(&x).expect("countable");
    }
    x
}

/// ω_k = ω_k(1).
pub fn omega_k(k: u64) -> Ordinal {
    omega_tower(k, 1)
}

/// ε₀ = ϑ(Ω).
pub fn epsilon0() -> Ordinal {
    Ordinal::theta(Ordinal::big_omega())
}

/// Γ₀ = ϑ(Ω²).
pub fn gamma0() -> Ordinal {
    Ordinal::theta(mono(Ordinal::nat(2), Ordinal::one()))
}

/// Largest Ω-monomial head dividing `x` on the left by Ω: returns `α` with `x = Ω·α`.
pub fn omega_left_quotient(x: &Ordinal) -> Result<Ordinal> {
    let mut out = Vec::with_capacity(x.parts().len());
    for p in x.parts() {
        match p {
            Ordinal::OmegaMono { exp, coeff } => {
                let e = match exp.finite_value() {
                    Some(k) => Ordinal::nat(k - 1),
                    None => (**exp).clone(),
                };
                out.push(mono(e, (**coeff).clone()));
            }
            _ => return Err(Error::Invariant(format!("{x} is not a multiple of Ω"))),
        }
    }
    Ok(Ordinal::from_parts(out))
}
