//! Goodstein runs over dynamical hierarchies, with descent certificates.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::assignment::AssignSession;
use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchy, HierarchySpec, SuccessorRule};
use crate::nat::{log2, Limits, Nat};
use crate::ordinal::{render, sq_fs, Ordinal};
use crate::upgrade::{HierarchyPair, UpgradeSession};

/// Which properties each step certifies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckLevel {
    None,
    #[default]
    Descent,
    /// Descent and `o_{i+1}(↑n_i) = o_i(n_i)`.
    Preservation,
}

/// A run of the Goodstein process.
///
/// The spec fixes `B_0` and the family: `classic` gives `{i+j+2}`, `canonical` continues
/// the canonical hierarchy, `minimalistic` repeats that successor, `ouroboros` with index
/// `i` continues with `i+1, i+2, …`, and every other spec uses `B_{j+1} = (B_j)₊₍ⱼ₊₁₎`.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub hierarchy: HierarchySpec,
    pub start: Nat,
    pub max_steps: u64,
    pub limits: Limits,
    pub checks: CheckLevel,
}

impl RunConfig {
    pub fn new(hierarchy: HierarchySpec, start: Nat) -> Self {
        RunConfig { hierarchy, start, max_steps: 100, limits: Limits::default(), checks: CheckLevel::Descent }
    }
}

/// One line of a trace: the value `n_i` in `B_i` and the transition to step `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub i: u64,
    pub n: Nat,
    pub base: Nat,
    pub witness: Option<Nat>,
    pub ordinal: Ordinal,
    pub checks: BTreeMap<String, bool>,
}

#[derive(Serialize)]
struct StepLine<'a> {
    i: u64,
    n: String,
    base: String,
    witness: Option<String>,
    ord: String,
    checks: &'a BTreeMap<String, bool>,
}

impl StepRecord {
    pub fn to_json_line(&self) -> String {
        let line = StepLine {
            i: self.i,
            n: self.n.to_string(),
            base: self.base.to_string(),
            witness: self.witness.as_ref().map(|w| w.to_string()),
            ord: render(&self.ordinal),
            checks: &self.checks,
        };
        serde_json::to_string(&line).expect("step serializes")
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

/// Why a run stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum End {
    Zero,
    MaxSteps,
    /// The next value or one of its ordinals exceeds the digit cap.
    Blowup(String),
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub steps: Vec<StepRecord>,
    pub end: End,
}

impl Trace {
    pub fn values(&self) -> Vec<Nat> {
        self.steps.iter().map(|s| s.n.clone()).collect()
    }

    pub fn passed(&self) -> bool {
        self.steps.iter().all(StepRecord::passed)
    }

    pub fn to_json_lines(&self) -> String {
        self.steps.iter().map(|s| s.to_json_line() + "\n").collect()
    }
}

enum Family {
    Classic(u64),
    Ouroboros(u64),
    Minimalistic,
}

impl Family {
    fn start(spec: &HierarchySpec, limits: Limits) -> Result<(Hierarchy, Family)> {
        let family = match spec {
            HierarchySpec::Classic { i } => Family::Classic(i + 1),
            HierarchySpec::Canonical { level } => Family::Ouroboros(level + 2),
            HierarchySpec::Ouroboros { i, .. } => Family::Ouroboros(i + 1),
            HierarchySpec::Minimalistic { .. } => Family::Minimalistic,
            _ => Family::Ouroboros(1),
        };
        Ok((Hierarchy::new(spec, limits)?, family))
    }

    /// The upgrade from `b` to its successor in the family.
    fn step(&mut self, b: Hierarchy) -> Result<UpgradeSession> {
        match self {
            Family::Classic(i) => {
                let c = Hierarchy::classic(*i, b.limits());
                *i += 1;
                UpgradeSession::new(b, c)
            }
            Family::Ouroboros(i) => {
                let c = Hierarchy::successor(b, SuccessorRule::Ouroboros(*i))?;
                *i += 1;
                UpgradeSession::nested(c)
            }
            Family::Minimalistic => UpgradeSession::nested(Hierarchy::successor(b, SuccessorRule::Minimalistic)?),
        }
    }
}

fn into_target(pair: HierarchyPair) -> Hierarchy {
    match pair {
        HierarchyPair::Separate(_, c) | HierarchyPair::Nested(c) => c,
    }
}

/// Turns digit-cap failures into a stop reason.
fn blowup<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::NumericBlowup(m)) => Ok(Err(m)),
        Err(e) => Err(e),
    }
}

/// Runs `G_0(m) = m`, `G_{i+1}(m) = ↑_i G_i(m) − 1` until 0, the step budget or a blow-up.
pub fn run(cfg: &RunConfig) -> Result<Trace> {
    if cfg.max_steps == 0 {
        return Err(Error::Invalid("max_steps must be at least 1".into()));
    }
    let (mut cur, mut family) = Family::start(&cfg.hierarchy, cfg.limits)?;
    let mut n = cfg.start.clone();
    cfg.limits.check(&n, "start value")?;
    let mut ord = match blowup(AssignSession::new().o(&mut cur, &n))? {
        Ok(o) => o,
        Err(m) => return Ok(Trace { steps: Vec::new(), end: End::Blowup(m) }),
    };
    let mut steps = Vec::new();
    for i in 0.. {
        let base = cur.base_of(&n)?;
        let mut rec = StepRecord { i, n: n.clone(), base, witness: None, ordinal: ord.clone(), checks: BTreeMap::new() };
        if n.is_zero() {
            steps.push(rec);
            return Ok(Trace { steps, end: End::Zero });
        }
        if i + 1 >= cfg.max_steps {
            steps.push(rec);
            return Ok(Trace { steps, end: End::MaxSteps });
        }
        let mut session = family.step(cur)?;
        let up = match blowup(session.upgrade_alt(&n))? {
            Ok(u) => u,
            Err(m) => {
                steps.push(rec);
                return Ok(Trace { steps, end: End::Blowup(m) });
            }
        };
        let Some(up_n) = up.value.fin().cloned() else {
            return Err(Error::InfiniteUpgrade(n.to_string()));
        };
        rec.witness = up.witness;
        let next = &up_n - 1u32;
        let mut next_assign = AssignSession::new();
        let c = session.pair_mut().target_mut();
        if cfg.checks >= CheckLevel::Preservation {
            match blowup(next_assign.o(c, &up_n))? {
                Ok(o) => {
                    rec.checks.insert("preserve".into(), o == ord);
                }
                Err(m) => {
                    steps.push(rec);
                    return Ok(Trace { steps, end: End::Blowup(m) });
                }
            }
        }
        let next_ord = match blowup(next_assign.o(c, &next))? {
            Ok(o) => o,
            Err(m) => {
                steps.push(rec);
                return Ok(Trace { steps, end: End::Blowup(m) });
            }
        };
        if cfg.checks >= CheckLevel::Descent {
            rec.checks.insert("descent".into(), next_ord < ord);
        }
        steps.push(rec);
        cur = into_target(session.into_pair());
        n = next;
        ord = next_ord;
    }
    unreachable!("the loop returns")
}

/// Why [`classic_oracle`] stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleEnd {
    Zero,
    MaxSteps,
    Blowup,
}

/// Classic Goodstein sequence from base 2: hereditary base change `b → b+1`, minus one.
///
/// Returns at most `max_steps` values, stopping at 0 or when a value exceeds `digit_cap` digits.
pub fn classic_oracle(m: &Nat, max_steps: u64, digit_cap: u64) -> (Vec<Nat>, OracleEnd) {
    let limit = Nat::from(10u32).pow(digit_cap.min(u32::MAX as u64) as u32);
    let mut values = vec![m.clone()];
    let mut n = m.clone();
    let mut b = Nat::from(2u32);
    loop {
        if n.is_zero() {
            return (values, OracleEnd::Zero);
        }
        if values.len() as u64 >= max_steps {
            return (values, OracleEnd::MaxSteps);
        }
        let c = &b + 1u32;
        match bump(&n, &b, &c, &limit) {
            Some(v) => n = v - 1u32,
            None => return (values, OracleEnd::Blowup),
        }
        values.push(n.clone());
        b = c;
    }
}

/// Rewrites `n` hereditarily from base `b` to base `c`; `None` at or beyond `limit`.
fn bump(n: &Nat, b: &Nat, c: &Nat, limit: &Nat) -> Option<Nat> {
    let mut out = Nat::zero();
    let mut x = n.clone();
    let mut k = Nat::zero();
    while !x.is_zero() {
        let (q, d) = x.div_rem(b);
        if !d.is_zero() {
            let e = bump(&k, b, c, limit)?.to_u32()?;
            if e as f64 * log2(c) > log2(limit) + 1.0 {
                return None;
            }
            let term = c.pow(e) * d;
            if &term >= limit {
                return None;
            }
            out += term;
        }
        x = q;
        k += 1u32;
    }
    (&out < limit).then_some(out)
}

/// Outcome of [`verify_majorization`].
#[derive(Clone, Debug, Serialize)]
pub struct MajorizationReport {
    pub checked: u64,
    pub passed: bool,
    pub violations: Vec<String>,
}

/// Checks `o_C(↑n − 1) ≥ o_B(n)[[i]]` for `0 < n ≤ n_max` and `C = B₊₍ᵢ₊₁₎`, strictly when `min B ∣ n`.
pub fn verify_majorization(b: Hierarchy, i: u64, n_max: u64) -> Result<MajorizationReport> {
    let min = b.min_base().clone();
    if i == 0 || Nat::from(i) + 1u32 >= min {
        return Err(Error::Invalid(format!("need 0 < i < min B − 1, got i = {i}, min B = {min}")));
    }
    let c = Hierarchy::successor(b, SuccessorRule::Ouroboros(i + 1))?;
    let mut session = UpgradeSession::nested(c)?;
    let (mut ob, mut oc) = (AssignSession::new(), AssignSession::new());
    let mut violations = Vec::new();
    for n in 1..=n_max {
        let n = Nat::from(n);
        let up = session.upgrade_alt(&n)?;
        let Some(u) = up.value.fin() else {
            return Err(Error::InfiniteUpgrade(n.to_string()));
        };
        let lhs = oc.o(session.pair_mut().target_mut(), &(u - 1u32))?;
        let rhs = sq_fs(&ob.o(session.pair_mut().source_mut(), &n)?, i);
        let strict = n.is_multiple_of(&min);
        if lhs < rhs || (strict && lhs == rhs) {
            let rel = if strict { ">" } else { "≥" };
            violations.push(format!("n = {n}: o_C(↑n−1) = {lhs} is not {rel} o_B(n)[[{i}]] = {rhs}"));
        }
    }
    Ok(MajorizationReport { checked: n_max, passed: violations.is_empty(), violations })
}

/// The ordinals `o_i(n_i)` of a trace.
pub fn descent_chain(trace: &Trace) -> Vec<Ordinal> {
    trace.steps.iter().map(|s| s.ordinal.clone()).collect()
}

/// Checks `ξ_j[[i0+j+1]] ≤ ξ_{j+1} ≤ ξ_j` along the chain and the conclusion
/// `ξ_j ≥ ξ_0[[i0+1]]⋯[[i0+j]]`.
pub fn check_funmajor(chain: &[Ordinal], i0: u64) -> bool {
    let hypothesis = chain
        .windows(2)
        .enumerate()
        .all(|(j, w)| sq_fs(&w[0], i0 + j as u64 + 1) <= w[1] && w[1] <= w[0]);
    if !hypothesis {
        return false;
    }
    let mut lower = match chain.first() {
        Some(x) => x.clone(),
        None => return true,
    };
    for (j, x) in chain.iter().enumerate() {
        if j > 0 {
            lower = sq_fs(&lower, i0 + j as u64);
        }
        if *x < lower {
            return false;
        }
    }
    true
}
