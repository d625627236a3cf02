//! Cofinality, the fundamental sequences ξ[θ] and ξ[[ι]], and the functions F_α.

use super::{add, compare, mco, mono, nat_mul, omega_n, ExtOrd, Ordinal};
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// τ(ξ): 0, 1, a countable limit, or Ω.
pub fn cofinality(x: &Ordinal) -> Ordinal {
    if x.is_zero() {
        return Ordinal::Zero;
    }
    if x.is_succ() {
        return Ordinal::one();
    }
    let (a, b, g) = x.lead().expect("nonzero");
    if !g.is_zero() {
        return cofinality(&g);
    }
    if b.is_limit() {
        return b;
    }
    if a.is_limit() {
        cofinality(&a)
    } else {
        Ordinal::big_omega()
    }
}

/// ξ[θ] for countable θ.
pub fn fs(x: &Ordinal, theta: &Ordinal) -> Ordinal {
    debug_assert!(theta.is_countable());
    if x.is_zero() || x.is_one() {
        return Ordinal::Zero;
    }
    let (a, b, g) = x.lead().expect("nonzero");
    if !g.is_zero() {
        return add(&mono(a, b), &fs(&g, theta));
    }
    if b.is_limit() {
        return mono(a, theta.clone());
    }
    let beta = b.pred().expect("successor coefficient");
    if !beta.is_zero() {
        return add(&mono(a.clone(), beta), &fs(&mono(a, Ordinal::one()), theta));
    }
    // x = Ω^a with a > 0.
    if a.is_limit() {
        mono(fs(&a, theta), Ordinal::one())
    } else {
        mono(a.pred().expect("successor exponent"), theta.clone())
    }
}

/// ξ ∈ Fix: mco(ξ[1]) < mco(ξ) = τ(ξ) = ϑ(γ) with γ > ξ.
pub fn is_fix(x: &Ordinal) -> bool {
    let t = cofinality(x);
    let Ordinal::Theta(g) = &t else { return false };
    if compare(g, x) != Ordering::Greater {
        return false;
    }
    mco(x) == t && mco(&fs(x, &Ordinal::one())) < t
}

/// ϑ*(ξ): ϑ(ζ) for ξ = ζ+1, τ(ξ) for ξ ∈ Fix, else 0.
pub fn theta_star(x: &Ordinal) -> Ordinal {
    if let Some(p) = x.pred() {
        Ordinal::theta(p)
    } else if is_fix(x) {
        cofinality(x)
    } else {
        Ordinal::Zero
    }
}

/// ξ̌: drops the countable tail of ξ = Ωα + β when ϑ*(ξ) > 0.
pub fn zeta_check(x: &Ordinal) -> Ordinal {
    zeta_check_with(x, &theta_star(x))
}

fn zeta_check_with(x: &Ordinal, ts: &Ordinal) -> Ordinal {
    if ts.is_zero() {
        x.clone()
    } else {
        x.split_countable().0
    }
}

/// ξ[[ι]] for countable ξ.
pub fn sq_fs(x: &Ordinal, iota: u64) -> Ordinal {
    let ps = x.parts();
    match ps.len() {
        0 => Ordinal::Zero,
        1 => sq_fs_theta(x, iota),
        k => {
            if let Some(n) = x.finite_value() {
                return Ordinal::nat(n - 1);
            }
            let last = sq_fs_theta(&ps[k - 1], iota);
            let mut out = ps[..k - 1].to_vec();
            out.extend(last.parts().iter().cloned());
            Ordinal::from_parts(out)
        }
    }
}

fn sq_fs_theta(x: &Ordinal, iota: u64) -> Ordinal {
    let Ordinal::Theta(z) = x else {
        panic!("sq_fs is defined on countable ordinals, got {x}");
    };
    let ts = theta_star(z);
    if z.is_countable() && (z.is_zero() || z.is_succ() || !ts.is_zero()) {
        return nat_mul(&ts, iota);
    }
    let zc = zeta_check_with(z, &ts);
    let tau = cofinality(&zc);
    if tau.is_countable() {
        let inner = fs(&zc, &sq_fs(&tau, iota));
        Ordinal::theta(add(&inner, &ts))
    } else {
        let mut v = ts;
        for _ in 0..iota {
            v = Ordinal::theta(fs(&zc, &v));
        }
        v
    }
}

/// ξ[[ι]] with ϑ[ε_{Ω+1}][[n]] = ϑ(Ω_n).
pub fn sq_fs_ext(x: &ExtOrd, iota: u64) -> Ordinal {
    match x {
        ExtOrd::Top => Ordinal::theta(omega_n(iota)),
        ExtOrd::Ord(x) => sq_fs(x, iota),
    }
}

/// {α}(0) = α, {α}(i+1) = {α}(i)[[i+1]].
pub fn iter_sq(alpha: &ExtOrd, i: u64) -> ExtOrd {
    if i == 0 {
        return alpha.clone();
    }
    let mut v = sq_fs_ext(alpha, 1);
    for k in 2..=i {
        v = sq_fs(&v, k);
    }
    ExtOrd::Ord(v)
}

/// F_α(n): the least ℓ with {α[[n]]}(ℓ) = 0, searched within `budget` steps.
pub fn big_f(alpha: &ExtOrd, n: u64, budget: u64) -> Result<u64> {
    let mut v = sq_fs_ext(alpha, n);
    let mut l = 0u64;
    while !v.is_zero() {
        if l >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        l += 1;
        v = sq_fs(&v, l);
    }
    Ok(l)
}
