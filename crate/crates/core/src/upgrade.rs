//! The base change `⌈b→c⌉`, the upgrade `↑_B^C` and good-successor checks.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::{BaseView, Bound, Fault, Hierarchy, Res, Side};
use crate::nat::{decompose, ExtNat, Limits, Nat};

/// An upgrade value with its witness; `witness` is `None` below `min B` and when the value is infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Upgrade {
    pub value: ExtNat,
    pub witness: Option<Nat>,
}

impl Upgrade {
    fn fin(v: Nat, w: Option<Nat>) -> Self {
        Upgrade { value: ExtNat::Fin(v), witness: w }
    }

    fn inf() -> Self {
        Upgrade { value: ExtNat::Inf, witness: None }
    }
}

/// Evaluation strategy for `↑`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The recursive definition: scan `C` for `↑(n−1) < ⌈b→c⌉n < S_C(c)`.
    Reference,
    /// The witness criterion: least `c ≥ ↑b` with `⌈b→c⌉n < S_C(c)`.
    Alt,
}

/// Numbers within this distance of the evaluated prefix are upgraded bottom-up in reference mode.
const REF_WINDOW: u64 = 1 << 16;

/// Memoized evaluator of `↑` and `⌈b→c⌉` for one pair of hierarchies.
pub struct Upgrader {
    mode: Mode,
    limits: Limits,
    up: HashMap<Nat, Upgrade>,
    chg: HashMap<(Nat, Nat, Nat), Nat>,
    /// Reference mode: every `m ≤ frontier` is memoized.
    frontier: Option<Nat>,
    fallback: Option<Box<Upgrader>>,
}

impl Upgrader {
    pub fn new(mode: Mode, limits: Limits) -> Self {
        let fallback = (mode == Mode::Reference).then(|| Box::new(Upgrader::new(Mode::Alt, limits)));
        Upgrader { mode, limits, up: HashMap::new(), chg: HashMap::new(), frontier: None, fallback }
    }

    pub(crate) fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
        if let Some(f) = &mut self.fallback {
            f.set_limits(limits);
        }
    }

    pub(crate) fn up(&mut self, bv: &BaseView, cv: &BaseView, n: &Nat) -> Res<Upgrade> {
        if n < bv.min() {
            return Ok(Upgrade::fin(n.clone(), None));
        }
        if let Some(u) = self.up.get(n) {
            return Ok(u.clone());
        }
        let u = match self.mode {
            Mode::Alt => self.up_alt(bv, cv, n)?,
            Mode::Reference => self.up_ref(bv, cv, n)?,
        };
        self.up.insert(n.clone(), u.clone());
        Ok(u)
    }

    fn up_fin(&mut self, bv: &BaseView, cv: &BaseView, n: &Nat) -> Res<Nat> {
        match self.up(bv, cv, n)?.value {
            ExtNat::Fin(v) => Ok(v),
            ExtNat::Inf => Err(Error::InfiniteUpgrade(n.to_string()).into()),
        }
    }

    fn up_alt(&mut self, bv: &BaseView, cv: &BaseView, n: &Nat) -> Res<Upgrade> {
        if bv.contains(n)? {
            let prev = match self.up(bv, cv, &(n - 1u32))?.value {
                ExtNat::Fin(v) => v,
                ExtNat::Inf => return Ok(Upgrade::inf()),
            };
            return match cv.s_next(&prev)? {
                Bound::Fin(c) => Ok(Upgrade::fin(c.clone(), Some(c))),
                Bound::Inf => Ok(Upgrade::inf()),
                Bound::Huge => Err(self.blowup(n)),
            };
        }
        let b = bv.base_of(n)?.clone();
        let ub = match self.up(bv, cv, &b)?.value {
            ExtNat::Fin(v) => v,
            ExtNat::Inf => return Ok(Upgrade::inf()),
        };
        let mut c = match cv.s_next(&(ub - 1u32))? {
            Bound::Fin(c) => c,
            Bound::Inf => return Ok(Upgrade::inf()),
            Bound::Huge => return Err(self.blowup(n)),
        };
        loop {
            let s = cv.s_next(&c)?;
            match (self.chg(bv, cv, &b, &c, n), s) {
                (Ok(v), Bound::Fin(s)) if v < s => return Ok(Upgrade::fin(v, Some(c))),
                (Ok(v), Bound::Huge | Bound::Inf) => return Ok(Upgrade::fin(v, Some(c))),
                (Ok(_), Bound::Fin(s)) => c = s,
                (Err(Fault::Fail(Error::NumericBlowup(_))), Bound::Fin(s)) => c = s,
                (Err(e), _) => return Err(e),
            }
        }
    }

    fn up_ref(&mut self, bv: &BaseView, cv: &BaseView, n: &Nat) -> Res<Upgrade> {
        let prev_n = n - 1u32;
        let prev = if &prev_n < bv.min() {
            ExtNat::Fin(prev_n)
        } else {
            let near = match &self.frontier {
                Some(f) => &prev_n <= f || &prev_n - f <= Nat::from(REF_WINDOW),
                None => prev_n <= Nat::from(REF_WINDOW),
            };
            if near {
                self.fill_to(bv, cv, &prev_n)?;
                self.up[&prev_n].value.clone()
            } else {
                self.fallback.as_mut().expect("reference mode").up(bv, cv, &prev_n)?.value
            }
        };
        let ExtNat::Fin(prev) = prev else {
            return Ok(Upgrade::inf());
        };
        let b = bv.base_of(n)?.clone();
        let mut c = cv.min().clone();
        loop {
            let s = cv.s_next(&c)?;
            match (self.chg(bv, cv, &b, &c, n), s) {
                (Ok(v), s) if v > prev => match s {
                    Bound::Fin(s) if v >= s => c = s,
                    _ => return Ok(Upgrade::fin(v, Some(c))),
                },
                (Ok(_), Bound::Fin(s)) => c = s,
                (Ok(_), Bound::Inf) => return Ok(Upgrade::inf()),
                (Ok(_), Bound::Huge) => return Err(self.blowup(n)),
                (Err(Fault::Fail(Error::NumericBlowup(_))), Bound::Fin(s)) => c = s,
                (Err(e), _) => return Err(e),
            }
        }
    }

    /// Reference mode: memoizes `↑m` for every `m ≤ n`, bottom-up.
    fn fill_to(&mut self, bv: &BaseView, cv: &BaseView, n: &Nat) -> Res<()> {
        let mut m = match &self.frontier {
            Some(f) if f >= n => return Ok(()),
            Some(f) => f + 1u32,
            None => bv.min().clone(),
        };
        while &m <= n {
            if !self.up.contains_key(&m) {
                let u = self.up_ref(bv, cv, &m)?;
                self.up.insert(m.clone(), u);
            }
            self.frontier = Some(m.clone());
            m += 1u32;
        }
        Ok(())
    }

    /// `⌈b→c⌉m`.
    pub(crate) fn chg(&mut self, bv: &BaseView, cv: &BaseView, b: &Nat, c: &Nat, m: &Nat) -> Res<Nat> {
        if m < b {
            return self.up_fin(bv, cv, m);
        }
        let small = m.bits() <= 128;
        let key = (b.clone(), c.clone(), m.clone());
        if small {
            if let Some(v) = self.chg.get(&key) {
                return Ok(v.clone());
            }
        }
        let mut acc = Nat::zero();
        let mut x = m.clone();
        while &x >= b {
            let d = decompose(&x, b)?;
            let e = self.chg(bv, cv, b, c, &d.exponent)?;
            let p = self.limits.pow(c, &e, "base change")?;
            let a = self.up_fin(bv, cv, &d.leading)?;
            acc += p * a;
            self.limits.check(&acc, "base change")?;
            x = d.remainder;
        }
        acc += self.up_fin(bv, cv, &x)?;
        self.limits.check(&acc, "base change")?;
        if small {
            self.chg.insert(key, acc.clone());
        }
        Ok(acc)
    }

    fn blowup(&self, n: &Nat) -> Fault {
        Fault::Fail(self.limits.blowup(&format!("the upgrade of a {}-bit number", n.bits())))
    }
}

/// Access to the two hierarchies of an upgrade.
pub(crate) trait Pair {
    fn views(&self) -> (BaseView<'_>, BaseView<'_>);
    fn ensure(&mut self, side: Side, x: &Nat) -> Result<()>;
}

/// Runs `f` against the current views, materializing more of either hierarchy on demand.
pub(crate) fn drive<P: Pair + ?Sized, T>(
    pair: &mut P,
    mut f: impl FnMut(&BaseView, &BaseView) -> Res<T>,
) -> Result<T> {
    loop {
        let r = {
            let (b, c) = pair.views();
            f(&b, &c)
        };
        match r {
            Ok(v) => return Ok(v),
            Err(Fault::Fail(e)) => return Err(e),
            Err(Fault::Need(side, x)) => pair.ensure(side, &x)?,
        }
    }
}

/// The source and target of an upgrade.
pub enum HierarchyPair {
    /// Two independent hierarchies.
    Separate(Hierarchy, Hierarchy),
    /// A successor hierarchy, upgraded from its own parent.
    Nested(Hierarchy),
}

impl HierarchyPair {
    pub fn source(&self) -> &Hierarchy {
        match self {
            HierarchyPair::Separate(b, _) => b,
            HierarchyPair::Nested(c) => c.parent().expect("nested pairs hold a successor"),
        }
    }

    pub fn target(&self) -> &Hierarchy {
        match self {
            HierarchyPair::Separate(_, c) | HierarchyPair::Nested(c) => c,
        }
    }

    pub fn source_mut(&mut self) -> &mut Hierarchy {
        match self {
            HierarchyPair::Separate(b, _) => b,
            HierarchyPair::Nested(c) => c.parent_mut().expect("nested pairs hold a successor"),
        }
    }

    pub fn target_mut(&mut self) -> &mut Hierarchy {
        match self {
            HierarchyPair::Separate(_, c) | HierarchyPair::Nested(c) => c,
        }
    }
}

impl Pair for HierarchyPair {
    fn views(&self) -> (BaseView<'_>, BaseView<'_>) {
        (self.source().view(Side::B), self.target().view(Side::C))
    }

    fn ensure(&mut self, side: Side, x: &Nat) -> Result<()> {
        match side {
            Side::B => self.source_mut().ensure(x),
            Side::C => self.target_mut().ensure(x),
        }
    }
}

/// Memoized upgrades between two hierarchies with `min B ≤ min C`.
pub struct UpgradeSession {
    pair: HierarchyPair,
    alt: Upgrader,
    reference: Upgrader,
}

impl UpgradeSession {
    pub fn new(b: Hierarchy, c: Hierarchy) -> Result<Self> {
        UpgradeSession::from_pair(HierarchyPair::Separate(b, c))
    }

    /// Upgrades from the parent of the successor hierarchy `c` to `c`.
    pub fn nested(c: Hierarchy) -> Result<Self> {
        if c.parent().is_none() {
            return Err(Error::Invalid("nested upgrade needs a successor hierarchy".into()));
        }
        UpgradeSession::from_pair(HierarchyPair::Nested(c))
    }

    pub fn from_pair(pair: HierarchyPair) -> Result<Self> {
        if pair.source().min_base() > pair.target().min_base() {
            return Err(Error::Invalid(format!(
                "min B = {} exceeds min C = {}",
                pair.source().min_base(),
                pair.target().min_base()
            )));
        }
        let limits = pair.target().limits();
        Ok(UpgradeSession { pair, alt: Upgrader::new(Mode::Alt, limits), reference: Upgrader::new(Mode::Reference, limits) })
    }

    pub fn pair(&self) -> &HierarchyPair {
        &self.pair
    }

    pub fn pair_mut(&mut self) -> &mut HierarchyPair {
        &mut self.pair
    }

    pub fn into_pair(self) -> HierarchyPair {
        self.pair
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.alt.set_limits(limits);
        self.reference.set_limits(limits);
    }

    /// `↑n` by the recursive definition.
    pub fn upgrade(&mut self, n: &Nat) -> Result<Upgrade> {
        let up = &mut self.reference;
        drive(&mut self.pair, |b, c| up.up(b, c, n))
    }

    /// `↑n` by the witness criterion.
    pub fn upgrade_alt(&mut self, n: &Nat) -> Result<Upgrade> {
        let up = &mut self.alt;
        drive(&mut self.pair, |b, c| up.up(b, c, n))
    }

    /// `⌈b→c⌉m` for `b ∈ B`, `c ∈ C`.
    pub fn chg_base(&mut self, b: &Nat, c: &Nat, m: &Nat) -> Result<Nat> {
        if !self.pair.source_mut().contains(b)? {
            return Err(Error::Invalid(format!("{b} is not a base of the source")));
        }
        if !self.pair.target_mut().contains(c)? {
            return Err(Error::Invalid(format!("{c} is not a base of the target")));
        }
        let up = &mut self.alt;
        drive(&mut self.pair, |bv, cv| up.chg(bv, cv, b, c, m))
    }
}

/// Outcome of a bounded good-successor check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodSuccessorReport {
    pub bound: String,
    pub passed: bool,
    pub violations: Vec<String>,
}

/// Checks the three good-successor conditions for all `n ≤ n_bound`.
pub fn good_successor_check(s: &mut UpgradeSession, n_bound: &Nat) -> Result<GoodSuccessorReport> {
    let mut violations = Vec::new();
    let min_b = s.pair.source().min_base().clone();
    let min_c = s.pair.target().min_base().clone();
    if min_b > min_c {
        violations.push(format!("min B = {min_b} exceeds min C = {min_c}"));
    }
    // ↑ is monotone where finite, so the first infinite value decides condition 2.
    let mut n = Nat::zero();
    let exhaustive = n_bound <= &Nat::from(10_000u32);
    let probe: Vec<Nat> = if exhaustive {
        let mut v = Vec::new();
        while &n <= n_bound {
            v.push(n.clone());
            n += 1u32;
        }
        v
    } else {
        vec![n_bound.clone()]
    };
    for n in &probe {
        if s.upgrade_alt(n)?.value.is_inf() {
            violations.push(format!("the upgrade of {n} is infinite"));
            break;
        }
    }
    if violations.is_empty() {
        s.pair.source_mut().ensure(n_bound)?;
        let bases: Vec<Nat> = s.pair.source().bases().iter().filter(|b| *b > &min_b && *b <= n_bound).cloned().collect();
        for b in bases {
            let u = match s.upgrade_alt(&(&b - 1u32))?.value {
                ExtNat::Fin(u) => u,
                ExtNat::Inf => unreachable!("finiteness checked above"),
            };
            let cb = s.pair.target_mut().base_of(&u)?;
            let next = (&u / &cb + 1u32) * &cb;
            let clear = match s.pair.target_mut().s_next(&u)? {
                ExtNat::Fin(sc) => next >= sc,
                ExtNat::Inf => false,
            };
            if !clear {
                violations.push(format!("a multiple of {cb} lies strictly between the upgrade {u} of {} and the next base", &b - 1u32));
            }
        }
    }
    Ok(GoodSuccessorReport { bound: n_bound.to_string(), passed: violations.is_empty(), violations })
}
