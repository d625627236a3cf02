//! Shared generators and checkers for the integration tests.
#![allow(dead_code)]

use goodstein_core::hierarchy::{Hierarchy, HierarchySpec, SuccessorRule};
use goodstein_core::nat::{nat, ExtNat, Limits, Nat};
use goodstein_core::ordinal::{omega_mono, Ordinal};
use goodstein_core::upgrade::{good_successor_check, UpgradeSession};
use goodstein_core::{Error, Result};
use num_traits::Zero;
use proptest::prelude::*;

/// Upper end of the ranges checked on generated pairs.
pub const N_MAX: u64 = 300;

/// A source hierarchy and how its target is obtained.
#[derive(Clone, Debug)]
pub enum PairSpec {
    Minimalistic(Vec<u64>),
    Ouroboros(Vec<u64>, u64),
    /// An explicit target, kept only when the bounded good-successor check passes.
    Explicit(Vec<u64>, Vec<u64>),
}

fn chain(min: impl Strategy<Value = u64>, len: usize) -> impl Strategy<Value = Vec<u64>> {
    (min, prop::collection::vec(2u64..=4, 0..=len)).prop_map(|(m, fs)| {
        let mut v = vec![m];
        for f in fs {
            let next = v.last().unwrap() * f;
            if next > N_MAX {
                break;
            }
            v.push(next);
        }
        v
    })
}

pub fn pair_spec() -> impl Strategy<Value = PairSpec> {
    prop_oneof![
        chain(2u64..=6, 4).prop_map(PairSpec::Minimalistic),
        chain(3u64..=6, 2).prop_flat_map(|b| {
            let min = b[0];
            (Just(b), 1..min - 1).prop_map(|(b, i)| PairSpec::Ouroboros(b, i))
        }),
        (chain(2u64..=4, 3), 0u64..=3).prop_flat_map(|(b, extra)| {
            let m = b[0] + extra;
            (Just(b), chain(Just(m), 5)).prop_map(|(b, c)| PairSpec::Explicit(b, c))
        }),
    ]
}

pub fn limits() -> Limits {
    Limits::with_digit_cap(2_000)
}

/// The upgrade session for a pair, or `None` when the explicit target is not a good successor.
pub fn session(p: &PairSpec) -> Result<Option<UpgradeSession>> {
    let closed = |b: &[u64]| Hierarchy::new(&HierarchySpec::explicit(b, false), limits());
    match p {
        PairSpec::Minimalistic(b) => {
            Ok(Some(UpgradeSession::nested(Hierarchy::successor(closed(b)?, SuccessorRule::Minimalistic)?)?))
        }
        PairSpec::Ouroboros(b, i) => {
            Ok(Some(UpgradeSession::nested(Hierarchy::successor(closed(b)?, SuccessorRule::Ouroboros(*i))?)?))
        }
        PairSpec::Explicit(b, c) => {
            let mut s = UpgradeSession::new(closed(b)?, closed(c)?)?;
            Ok(good_successor_check(&mut s, &nat(N_MAX))?.passed.then_some(s))
        }
    }
}

fn fin(v: &ExtNat) -> Result<Nat> {
    v.fin().cloned().ok_or_else(|| Error::Invariant("infinite upgrade on a good successor".into()))
}

/// Checks the upgrade lemmas on `0..=n_max`, returning the violations found.
pub fn upgrade_violations(s: &mut UpgradeSession, n_max: u64) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let mut v = Vec::new();
    let mut w = Vec::new();
    for n in 0..=n_max {
        let u = s.upgrade_alt(&nat(n))?;
        let r = s.upgrade(&nat(n))?;
        if u != r {
            bad.push(format!("reference and alternative disagree at {n}: {r:?} vs {u:?}"));
        }
        v.push(fin(&u.value)?);
        w.push(u.witness);
    }
    let up_max = v[n_max as usize].clone();
    s.pair_mut().source_mut().ensure(&nat(n_max))?;
    s.pair_mut().target_mut().ensure(&up_max)?;
    let bs: Vec<Nat> = s.pair().source().bases().iter().filter(|b| **b <= nat(n_max)).cloned().collect();
    let cs: Vec<Nat> = s.pair().target().bases().iter().filter(|c| **c <= up_max).cloned().collect();
    let min_b = bs[0].clone();
    let up = |k: &Nat| -> &Nat { &v[usize::try_from(k).unwrap()] };
    for n in 1..=n_max as usize {
        let nn = nat(n as u64);
        if v[n - 1] >= v[n] {
            bad.push(format!("not monotone at {n}"));
        }
        if let (Some(a), Some(b)) = (&w[n - 1], &w[n]) {
            if a > b {
                bad.push(format!("witness decreases at {n}"));
            }
        }
        let in_b = bs.contains(&nn);
        if in_b != s.pair_mut().target_mut().contains(&v[n])? {
            bad.push(format!("membership not preserved at {n}"));
        }
        if nn >= min_b {
            let crit_b = s.pair_mut().source_mut().is_critical(&nn)?;
            if crit_b != s.pair_mut().target_mut().is_critical(&v[n])? {
                bad.push(format!("criticality not preserved at {n}"));
            }
            if let Some(c) = &w[n] {
                if c != &s.pair_mut().target_mut().base_of(&v[n])? {
                    bad.push(format!("witness of {n} is not the base of its upgrade"));
                }
            }
        }
        if in_b
            && n > min_b.clone().try_into().unwrap()
            && ExtNat::Fin(v[n].clone()) != s.pair_mut().target_mut().s_next(&v[n - 1])?
        {
            bad.push(format!("upgrade of base {n} is not the next base after the upgrade of {}", n - 1));
        }
        if !(&nn % &min_b).is_zero() && v[n] != &v[n - 1] + 1u32 {
            bad.push(format!("min B does not divide {n} but the upgrade jumps"));
        }
        for b in &bs {
            if b > &nn {
                break;
            }
            let (a, r) = (&nn / b, &nn % b);
            if up(&nn) != &(up(&(b * &a)) + up(&r)) {
                bad.push(format!("additivity fails at {n} = {b}*{a} + {r}"));
            }
            for c in &cs {
                let x = s.chg_base(b, c, &nn)?;
                if c > &x {
                    bad.push(format!("base change of {n} from {b} to {c} falls below {c}"));
                }
                if c >= up(b) {
                    let y = s.chg_base(b, c, &(&nn - 1u32))?;
                    if y >= x {
                        bad.push(format!("base change from {b} to {c} not monotone at {n}"));
                    }
                    if (&nn % b).is_zero() != (&x % c).is_zero() {
                        bad.push(format!("divisibility not preserved: {n} by {b}, {x} by {c}"));
                    }
                }
            }
            for pair in cs.windows(2) {
                if s.chg_base(b, &pair[0], &nn)? > s.chg_base(b, &pair[1], &nn)? {
                    bad.push(format!("base change of {n} from {b} not monotone in the target base"));
                }
            }
        }
    }
    for d in &bs {
        let b = d * 2u32;
        if b <= nat(n_max) && bs.contains(&b) && up(&b) != &(up(d) * 2u32) {
            bad.push(format!("upgrade of {b} is not twice that of {d}"));
        }
    }
    bad.extend(restriction_violations(s, n_max, &v)?);
    Ok(bad)
}

/// Upgrades against the prefixes `B ∩ [0, n]` and `C ∩ [0, ↑n]` agree with the full pair.
fn restriction_violations(s: &mut UpgradeSession, n_max: u64, v: &[Nat]) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for n in [n_max / 3, 2 * n_max / 3, n_max] {
        let bp: Vec<Nat> = s.pair().source().bases().iter().filter(|b| **b <= nat(n)).cloned().collect();
        let cp: Vec<Nat> = s.pair().target().bases().iter().filter(|c| **c <= v[n as usize]).cloned().collect();
        if bp.is_empty() || cp.is_empty() {
            continue;
        }
        let b = Hierarchy::new(&HierarchySpec::Explicit { bases: bp, open: false }, limits())?;
        let c = Hierarchy::new(&HierarchySpec::Explicit { bases: cp, open: false }, limits())?;
        let mut r = UpgradeSession::new(b, c)?;
        for x in 0..=n {
            if fin(&r.upgrade_alt(&nat(x))?.value)? != v[x as usize] {
                bad.push(format!("restriction to [0, {n}] changes the upgrade of {x}"));
                break;
            }
        }
    }
    Ok(bad)
}

/// Random ordinal terms in normal form.
pub fn ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
    let leaf = prop_oneof![Just(Ordinal::Zero), (1u64..=4).prop_map(Ordinal::nat), Just(Ordinal::big_omega())];
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Ordinal::theta),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| goodstein_core::ordinal::add(&a, &b)),
            (inner.clone(), countable(inner.clone())).prop_map(|(e, c)| {
                if c.is_zero() {
                    e
                } else {
                    omega_mono(&e, &c).expect("countable coefficient")
                }
            }),
        ]
    })
    .boxed()
}

fn countable(s: BoxedStrategy<Ordinal>) -> impl Strategy<Value = Ordinal> {
    s.prop_map(|x| if x.is_countable() { x } else { Ordinal::theta(x) })
}

/// Random countable ordinal terms.
pub fn countable_ordinal(depth: u32) -> impl Strategy<Value = Ordinal> {
    countable(ordinal(depth))
}
