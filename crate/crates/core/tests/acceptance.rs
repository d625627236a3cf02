//! Acceptance criteria 1–9: one PASS/FAIL line each, with pinned tolerances.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use goodstein_core::assignment::AssignSession;
use goodstein_core::classify::{below_hi, classify, empirical_floor, theory_for, RegimeTag, TheoryLabel};
use goodstein_core::hierarchy::{Hierarchy, HierarchySpec, SuccessorRule};
use goodstein_core::nat::{nat, ExtNat, Limits, Nat};
use goodstein_core::ordinal::{
    big_f, epsilon0, fs, nat_mul, omega_k, omega_n, omega_pow, parse, render, sq_fs, ExtOrd, Ordinal,
};
use goodstein_core::process::{classic_oracle, run, verify_majorization, CheckLevel, End, OracleEnd, RunConfig};
use goodstein_core::upgrade::{good_successor_check, Upgrade, UpgradeSession};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn explicit(b: &[u64]) -> Hierarchy {
    Hierarchy::explicit(b, false).unwrap()
}

fn c1_worked_example() -> Check {
    let mut s = UpgradeSession::new(explicit(&[3, 6, 42]), explicit(&[5, 10, 110])).map_err(e2s)?;
    let fin = |v: Nat, w: u64| Upgrade { value: ExtNat::Fin(v), witness: Some(nat(w)) };
    let big = nat(42).pow(39u32);
    let cases = [
        (nat(3), fin(nat(5), 5)),
        (nat(39), fin(nat(105), 10)),
        (big.clone(), fin(nat(110).pow(105u32), 110)),
        (nat(5), fin(nat(7), 5)),
        (nat(41), fin(nat(107), 10)),
    ];
    for (n, want) in cases {
        let got = s.upgrade(&n).map_err(e2s)?;
        ensure(got == want, || format!("upgrade of {n}: {got:?}"))?;
    }
    let chg = s.chg_base(&nat(6), &nat(5), &nat(39)).map_err(e2s)?;
    ensure(chg == nat(30), || format!("base change 6 -> 5 of 39 = {chg}"))?;
    let r = good_successor_check(&mut s, &nat(42)).map_err(e2s)?;
    ensure(r.passed, || format!("good successor check: {:?}", r.violations))?;
    Ok("6 upgrade values, base change and good-successor check exact".into())
}

fn c2_upgrade_properties() -> Check {
    let mut runner = TestRunner::deterministic();
    let (mut checked, mut drawn) = (0, 0);
    while checked < 24 && drawn < 200 {
        drawn += 1;
        let p = common::pair_spec().new_tree(&mut runner).map_err(e2s)?.current();
        let mut s = match common::session(&p) {
            Ok(Some(s)) => s,
            Ok(None) | Err(goodstein_core::Error::NumericBlowup(_)) => continue,
            Err(e) => return Err(format!("{p:?}: {e}")),
        };
        match common::upgrade_violations(&mut s, common::N_MAX) {
            Ok(bad) => ensure(bad.is_empty(), || format!("{p:?}: {bad:?}"))?,
            Err(goodstein_core::Error::NumericBlowup(_)) => continue,
            Err(e) => return Err(format!("{p:?}: {e}")),
        }
        checked += 1;
    }
    ensure(checked >= 20, || format!("only {checked} pairs checked"))?;
    Ok(format!("{checked} good-successor pairs, n <= {}, zero violations", common::N_MAX))
}

fn c3_classic_differential() -> Check {
    for m in 0..=20u64 {
        let mut cfg = RunConfig::new(HierarchySpec::Classic { i: 0 }, nat(m));
        cfg.max_steps = 200;
        cfg.limits = Limits::with_digit_cap(10_000);
        cfg.checks = CheckLevel::None;
        let t = run(&cfg).map_err(e2s)?;
        let (v, end) = classic_oracle(&nat(m), 200, 10_000);
        ensure(t.values() == v, || format!("m = {m}: {} vs {} values", t.values().len(), v.len()))?;
        let same_end = matches!(
            (&t.end, end),
            (End::Zero, OracleEnd::Zero) | (End::MaxSteps, OracleEnd::MaxSteps) | (End::Blowup(_), OracleEnd::Blowup)
        );
        ensure(same_end, || format!("m = {m}: ends differ, {:?} vs {end:?}", t.end))?;
    }
    Ok("m = 0..20 equal to the hereditary base-bump oracle".into())
}

fn c4_landmarks() -> Check {
    let o = |h: &mut Hierarchy, n: Nat| AssignSession::new().o(h, &n).map_err(e2s);
    let mut three = explicit(&[3]);
    ensure(o(&mut three, nat(3))? == Ordinal::omega(), || "o({3}, 3)".into())?;
    let mut twos = Hierarchy::new(&HierarchySpec::ratio(2, 2), Limits::default()).map_err(e2s)?;
    for k in 1..=6u32 {
        let got = o(&mut twos, nat(2).pow(k))?;
        let want = nat_mul(&Ordinal::omega(), 1 << (k - 1));
        ensure(got == want, || format!("o(2^{k}) = {}", render(&got)))?;
    }
    let mut nine = explicit(&[3, 9]);
    ensure(o(&mut nine, nat(6))? == parse("th(2)").unwrap(), || "o({3,9}, 6)".into())?;
    let got = o(&mut three, nat(27))?;
    ensure(got == Ordinal::theta(omega_n(2)), || format!("o({{3}}, 27) = {}", render(&got)))?;
    ensure(got == parse("th(O^O)").unwrap(), || "th(O^O) syntax".into())?;
    Ok("o({3},3)=w, o(2^k)=w*2^(k-1) for k<=6, o({3,9},6)=th(2), o({3},3_2)=th(O_2)".into())
}

fn c5_canonical_descent() -> Check {
    let mut summary = Vec::new();
    for m in 4..=12u64 {
        let mut cfg = RunConfig::new(HierarchySpec::Canonical { level: 0 }, nat(m));
        cfg.max_steps = 12;
        cfg.limits = Limits::with_digit_cap(100_000);
        cfg.checks = CheckLevel::Preservation;
        let t = run(&cfg).map_err(e2s)?;
        ensure(t.steps.len() >= 2, || format!("m = {m}: only {} steps", t.steps.len()))?;
        ensure(t.passed(), || format!("m = {m}: {}", t.to_json_lines()))?;
        summary.push(format!("{m}:{}", t.steps.len()));
    }
    Ok(format!("steps per start {}", summary.join(" ")))
}

fn c6_majorization() -> Check {
    let mut total = 0;
    for (b, i, n_max) in [(4u64, 1u64, 16u64), (5, 1, 25), (5, 2, 25)] {
        let r = verify_majorization(explicit(&[b]), i, n_max).map_err(e2s)?;
        ensure(r.passed, || format!("{{{b}}}, i = {i}: {:?}", r.violations))?;
        total += r.checked;
    }
    Ok(format!("{total} instances, strict where min B | n"))
}

fn c7_fundamental_sequences() -> Check {
    let mut runner = TestRunner::deterministic();
    let mut limits = 0;
    while limits < 200 {
        let x = common::countable_ordinal(5).new_tree(&mut runner).map_err(e2s)?.current();
        if !x.is_limit() {
            continue;
        }
        limits += 1;
        let seq: Vec<Ordinal> = (0..=6).map(|i| sq_fs(&x, i)).collect();
        ensure(seq.windows(2).all(|p| p[0] < p[1]), || format!("{} not increasing", render(&x)))?;
        ensure(seq.iter().all(|y| *y < x), || format!("{} not bounded", render(&x)))?;
        let ts: Vec<Ordinal> = (1..=4).map(|k| fs(&x, &Ordinal::nat(k))).collect();
        ensure(ts.windows(2).all(|p| p[0] < p[1]), || format!("{}[k] not increasing", render(&x)))?;
    }
    let e0 = epsilon0();
    let want = [Ordinal::Zero, Ordinal::one(), Ordinal::omega(), omega_k(2)];
    for (i, w) in want.iter().enumerate() {
        ensure(sq_fs(&e0, i as u64) == *w, || format!("e0[[{i}]]"))?;
    }
    let w2 = omega_pow(&Ordinal::nat(2)).map_err(e2s)?;
    for i in 0..=6u64 {
        ensure(sq_fs(&Ordinal::omega(), i) == Ordinal::nat(i), || format!("w[[{i}]]"))?;
        ensure(sq_fs(&w2, i) == nat_mul(&Ordinal::omega(), i), || format!("w^2[[{i}]]"))?;
        let f = big_f(&ExtOrd::Ord(Ordinal::omega()), i, 1_000).map_err(e2s)?;
        ensure(f == i, || format!("F_w({i}) = {f}"))?;
    }
    let f = big_f(&ExtOrd::Ord(w2), 1, 1_000).map_err(e2s)?;
    ensure(f == 2, || format!("F_w^2(1) = {f}"))?;
    Ok("200 random limits, iota <= 6; landmark sequences and F values exact".into())
}

fn c8_classifier() -> Check {
    let cases: [(HierarchySpec, RegimeTag, TheoryLabel); 4] = [
        (HierarchySpec::ratio(2, 2), RegimeTag::ExactlyOmega2, TheoryLabel::Rca0),
        (HierarchySpec::ratio(3, 3), RegimeTag::UpToOmegaOmega { infinitely_many_3b: true }, TheoryLabel::Rca0SigmaInd(2)),
        (HierarchySpec::Power { min: 3, k: 2 }, RegimeTag::Epsilon0ToGamma0, TheoryLabel::Atr0),
        (HierarchySpec::Tower { min: 3, n: 2 }, RegimeTag::BelowThetaOmegaN(2), TheoryLabel::KpMinusOmegaPiInd(2)),
    ];
    for (spec, tag, theory) in cases {
        let r = classify(&spec, &nat(1000)).map_err(e2s)?;
        ensure(r.tag == tag, || format!("{spec:?}: {:?}", r.tag))?;
        ensure(theory_for(&r.tag).0 == Some(theory), || format!("{spec:?}: theory {:?}", theory_for(&r.tag)))?;
        if let RegimeTag::UpToOmegaOmega { .. } = r.tag {
            let ww = ExtOrd::Ord(omega_k(2));
            ensure(r.lo.value == ww && r.hi.value == ww, || "I = w^w bounds".into())?;
        }
        let mut h = Hierarchy::new(&spec, Limits::default()).map_err(e2s)?;
        let floor = empirical_floor(&mut h, 200).map_err(e2s)?;
        ensure(below_hi(&floor, &r.hi), || format!("{spec:?}: floor {} not below {}", render(&floor), r.hi.name))?;
    }
    Ok("4 exact tags and theories; floors up to 200 strictly below the upper bounds".into())
}

/// The upgrade of `n` from a finite closed `b` to a finite closed `c`, straight from the recursive definition.
struct Brute<'a> {
    b: &'a [Nat],
    c: &'a [Nat],
}

impl Brute<'_> {
    fn base_b(&self, n: &Nat) -> Nat {
        self.b.iter().rev().find(|x| *x <= n).unwrap_or(&self.b[0]).clone()
    }

    fn s_c(&self, c: &Nat) -> Option<Nat> {
        self.c.iter().find(|x| *x > c).cloned()
    }

    fn up(&self, n: &Nat) -> Option<Nat> {
        if n < &self.b[0] {
            return Some(n.clone());
        }
        let b = self.base_b(n);
        let prev = if n.is_zero() { None } else { Some(self.up(&(n - 1u32))?) };
        for c in self.c {
            let v = self.chg(&b, c, n)?;
            let above = prev.as_ref().is_none_or(|p| p < &v);
            let below = self.s_c(c).is_none_or(|s| v < s);
            if above && below {
                return Some(v);
            }
        }
        None
    }

    fn chg(&self, b: &Nat, c: &Nat, m: &Nat) -> Option<Nat> {
        if m < b {
            return self.up(m);
        }
        let mut e = 0u32;
        let mut p = Nat::one();
        while &(&p * b) <= m {
            p *= b;
            e += 1;
        }
        let (a, r) = m.div_rem(&p);
        let ce = self.chg(b, c, &nat(e as u64))?;
        Some(c.pow(u32::try_from(&ce).ok()?) * self.up(&a)? + self.chg(b, c, &r)?)
    }
}

/// Stages of `B₊ᵢ` for a finite closed `B`, recording the bases added at each event.
fn brute_ouroboros(b: &[Nat], i: u64, n_max: u64) -> (Vec<Nat>, Vec<(Nat, Vec<Nat>)>) {
    let min = b[0].clone();
    let mut stage = vec![&min + 1u32];
    let mut log = Vec::new();
    let mut n = &min + 1u32;
    while n <= nat(n_max) {
        let base = b.iter().rev().find(|x| *x <= &n).unwrap().clone();
        let c = stage.last().unwrap().clone();
        let critical = (&n % &base).is_zero();
        let mut added = Vec::new();
        if b.contains(&n) {
            let bm = b.iter().rev().find(|x| *x <= &(&n - 1u32)).unwrap().clone();
            let br = Brute { b, c: &stage };
            let v = br.chg(&bm, &c, &(&n - 1u32)).unwrap();
            added.push((v / &c + 1u32) * &c);
        } else if critical {
            let mut d = c;
            for _ in 0..i {
                let mut with: Vec<Nat> = stage.clone();
                with.extend(added.iter().cloned());
                let br = Brute { b, c: &with };
                d = br.chg(&base, &d, &n).unwrap();
                added.push(d.clone());
            }
        }
        if !added.is_empty() {
            stage.extend(added.iter().cloned());
            log.push((n.clone(), added));
        }
        n += 1u32;
    }
    (stage, log)
}

fn c9_ouroboros() -> Check {
    let (stage, log) = brute_ouroboros(&[nat(3)], 2, 9);
    let mut c = Hierarchy::successor(explicit(&[3]), SuccessorRule::Ouroboros(2)).map_err(e2s)?;
    c.process_upto(&nat(9)).map_err(e2s)?;
    let got_log: Vec<(Nat, Vec<Nat>)> = c.log().iter().filter(|(n, _)| n <= &nat(9)).cloned().collect();
    ensure(got_log == log, || format!("log {got_log:?} vs {log:?}"))?;
    let top = stage.last().unwrap();
    let got: Vec<Nat> = c.bases().iter().filter(|x| *x <= top).cloned().collect();
    ensure(got == stage, || format!("bases {got:?} vs {stage:?}"))?;
    let shown: Vec<String> = stage.iter().map(|x| x.to_string()).collect();
    Ok(format!("({{3}})+2 through n = 9: {{{}}}", shown.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("worked upgrade example", c1_worked_example, Duration::from_secs(1)),
        ("upgrade property suite", c2_upgrade_properties, Duration::from_secs(60)),
        ("classic differential", c3_classic_differential, Duration::from_secs(30)),
        ("assignment landmarks", c4_landmarks, Duration::from_secs(10)),
        ("canonical descent and preservation", c5_canonical_descent, Duration::from_secs(300)),
        ("majorization", c6_majorization, Duration::from_secs(300)),
        ("fundamental sequences", c7_fundamental_sequences, Duration::from_secs(30)),
        ("classifier matrix", c8_classifier, Duration::from_secs(120)),
        ("ouroboros construction", c9_ouroboros, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = f();
        let dt = t0.elapsed();
        let outcome = match outcome {
            Ok(m) if dt > *budget => Err(format!("{m}; took {dt:.2?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(m) => println!("criterion {}: PASS {name} ({dt:.2?}): {m}", k + 1),
            Err(m) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({dt:.2?}): {m}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
