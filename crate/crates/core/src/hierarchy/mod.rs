//! Base hierarchies: explicit sets, rule families and successor constructions.
//!
//! A [`Hierarchy`] materializes its bases lazily. Its [`Horizon`] records how
//! far the materialized list is known to agree with the full set.

mod spec;
mod successor;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nat::{decompose, ExtNat, Limits, Nat};

pub use spec::HierarchySpec;
pub use successor::SuccessorRule;
use successor::Successor;

/// How much of a hierarchy is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Horizon {
    /// Every base `≤ k` is materialized.
    Upto(Nat),
    /// Every base below the digit cap is materialized; the rest exceed it.
    Cap,
    /// The materialized list is the whole set.
    Complete,
}

/// Which hierarchy of an upgrade pair a query concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    B,
    C,
}

/// A query that cannot proceed: either more of a hierarchy is needed, or a real error.
#[derive(Debug)]
pub(crate) enum Fault {
    Need(Side, Nat),
    Fail(Error),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault::Fail(e)
    }
}

pub(crate) type Res<T> = std::result::Result<T, Fault>;

/// The least base above a number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Bound {
    Fin(Nat),
    /// Finite but beyond the digit cap.
    Huge,
    Inf,
}

/// A read-only window on a materialized hierarchy.
#[derive(Clone, Copy)]
pub struct BaseView<'a> {
    bases: &'a [Nat],
    horizon: &'a Horizon,
    side: Side,
}

impl<'a> BaseView<'a> {
    pub(crate) fn new(bases: &'a [Nat], horizon: &'a Horizon, side: Side) -> Self {
        debug_assert!(!bases.is_empty());
        BaseView { bases, horizon, side }
    }

    pub fn bases(&self) -> &'a [Nat] {
        self.bases
    }

    pub fn min(&self) -> &'a Nat {
        &self.bases[0]
    }

    fn covers(&self, n: &Nat) -> bool {
        match self.horizon {
            Horizon::Upto(k) => n <= k,
            Horizon::Cap | Horizon::Complete => true,
        }
    }

    fn need(&self, n: &Nat) -> Res<()> {
        if self.covers(n) {
            Ok(())
        } else {
            Err(Fault::Need(self.side, n.clone()))
        }
    }

    /// Index of the greatest base `≤ n`, if any.
    fn floor_index(&self, n: &Nat) -> Option<usize> {
        match self.bases.binary_search(n) {
            Ok(i) => Some(i),
            Err(0) => None,
            Err(i) => Some(i - 1),
        }
    }

    pub(crate) fn base_of(&self, n: &Nat) -> Res<&'a Nat> {
        if n < self.min() {
            return Ok(self.min());
        }
        self.need(n)?;
        Ok(&self.bases[self.floor_index(n).expect("n ≥ min")])
    }

    pub(crate) fn contains(&self, n: &Nat) -> Res<bool> {
        if n < self.min() {
            return Ok(false);
        }
        self.need(n)?;
        Ok(self.bases.binary_search(n).is_ok())
    }

    pub(crate) fn s_next(&self, n: &Nat) -> Res<Bound> {
        let i = match self.bases.binary_search(n) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        if let Some(b) = self.bases.get(i) {
            return Ok(Bound::Fin(b.clone()));
        }
        match self.horizon {
            Horizon::Complete => Ok(Bound::Inf),
            Horizon::Cap => Ok(Bound::Huge),
            Horizon::Upto(k) => Err(Fault::Need(self.side, n.max(k) + 1u32)),
        }
    }

    /// The predecessor of the base `b` in the hierarchy.
    pub(crate) fn pred_base(&self, b: &Nat) -> Option<&'a Nat> {
        match self.bases.binary_search(b) {
            Ok(i) if i > 0 => Some(&self.bases[i - 1]),
            _ => None,
        }
    }
}

enum Rule {
    Fixed,
    Ratio { head: Vec<u64>, k: u64 },
    Power(u64),
    Tower(u64),
    Successor(Box<Successor>),
}

/// A lazily materialized base hierarchy.
pub struct Hierarchy {
    spec: HierarchySpec,
    bases: Vec<Nat>,
    horizon: Horizon,
    rule: Rule,
    limits: Limits,
    /// Total bit length of `bases`.
    bits: u64,
}

impl fmt::Debug for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hierarchy")
            .field("spec", &self.spec)
            .field("bases", &self.bases.iter().map(|b| b.to_string()).collect::<Vec<_>>())
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl Hierarchy {
    pub fn new(spec: &HierarchySpec, limits: Limits) -> Result<Self> {
        let h = match spec {
            HierarchySpec::Explicit { bases, open } => {
                validate(bases)?;
                let horizon = if *open { Horizon::Upto(bases.last().unwrap().clone()) } else { Horizon::Complete };
                Hierarchy::raw(spec.clone(), bases.clone(), horizon, Rule::Fixed, limits)
            }
            HierarchySpec::Ratio { min, k, head } => {
                check_min(*min)?;
                if *k < 2 || head.iter().any(|&r| r < 2) {
                    return Err(Error::Invalid("ratios must be at least 2".into()));
                }
                Hierarchy::seeded(spec, *min, Rule::Ratio { head: head.clone(), k: *k }, limits)
            }
            HierarchySpec::Power { min, k } => {
                check_min(*min)?;
                if *k < 2 {
                    return Err(Error::Invalid("power exponent must be at least 2".into()));
                }
                Hierarchy::seeded(spec, *min, Rule::Power(*k), limits)
            }
            HierarchySpec::Tower { min, n } => {
                check_min(*min)?;
                if *n < 2 {
                    return Err(Error::Invalid("tower height must be at least 2".into()));
                }
                Hierarchy::seeded(spec, *min, Rule::Tower(*n), limits)
            }
            HierarchySpec::Classic { i } => Hierarchy::classic(*i, limits),
            HierarchySpec::Ouroboros { base, i } => {
                Hierarchy::successor(Hierarchy::new(base, limits)?, SuccessorRule::Ouroboros(*i))?
            }
            HierarchySpec::Minimalistic { base } => {
                Hierarchy::successor(Hierarchy::new(base, limits)?, SuccessorRule::Minimalistic)?
            }
            HierarchySpec::Canonical { level } => Hierarchy::canonical(*level, limits)?,
        };
        Ok(h)
    }

    fn raw(spec: HierarchySpec, bases: Vec<Nat>, horizon: Horizon, rule: Rule, limits: Limits) -> Self {
        let bits = bases.iter().map(|b| b.bits()).sum();
        Hierarchy { spec, bases, horizon, rule, limits, bits }
    }

    fn seeded(spec: &HierarchySpec, min: u64, rule: Rule, limits: Limits) -> Self {
        let b = Nat::from(min);
        Hierarchy::raw(spec.clone(), vec![b.clone()], Horizon::Upto(b), rule, limits)
    }

    /// A finite set; `open` marks it as a prefix.
    pub fn explicit(bases: &[u64], open: bool) -> Result<Self> {
        Hierarchy::new(&HierarchySpec::explicit(bases, open), Limits::default())
    }

    /// The singleton `{i+2}`.
    pub fn classic(i: u64, limits: Limits) -> Self {
        let spec = HierarchySpec::Classic { i };
        Hierarchy::raw(spec, vec![Nat::from(i + 2)], Horizon::Complete, Rule::Fixed, limits)
    }

    /// `C_0 = {3}` and `C_{k+1} = (C_k)₊₍ₖ₊₂₎`.
    pub fn canonical(level: u64, limits: Limits) -> Result<Self> {
        let mut h = Hierarchy::explicit(&[3], false)?;
        h.limits = limits;
        h.spec = HierarchySpec::Canonical { level: 0 };
        for k in 0..level {
            h = Hierarchy::successor(h, SuccessorRule::Ouroboros(k + 2))?;
            h.spec = HierarchySpec::Canonical { level: k + 1 };
        }
        Ok(h)
    }

    /// The ouroboros or minimalistic successor of `parent`.
    pub fn successor(parent: Hierarchy, rule: SuccessorRule) -> Result<Self> {
        if let SuccessorRule::Ouroboros(0) = rule {
            return Err(Error::Invalid("ouroboros index must be positive".into()));
        }
        let spec = match rule {
            SuccessorRule::Ouroboros(i) => HierarchySpec::Ouroboros { base: Box::new(parent.spec.clone()), i },
            SuccessorRule::Minimalistic => HierarchySpec::Minimalistic { base: Box::new(parent.spec.clone()) },
        };
        let limits = parent.limits;
        let s = Successor::new(parent, rule);
        let first = s.stage()[0].clone();
        Ok(Hierarchy::raw(spec, vec![first.clone()], Horizon::Upto(first), Rule::Successor(Box::new(s)), limits))
    }

    pub fn spec(&self) -> &HierarchySpec {
        &self.spec
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Changes the budgets, including those of every ancestor.
    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
        if let Rule::Successor(s) = &mut self.rule {
            s.set_limits(limits);
        }
    }

    pub fn min_base(&self) -> &Nat {
        &self.bases[0]
    }

    /// The bases materialized so far.
    pub fn bases(&self) -> &[Nat] {
        &self.bases
    }

    pub fn horizon(&self) -> &Horizon {
        &self.horizon
    }

    /// True iff the materialized list is the whole hierarchy.
    pub fn is_exhausted(&self) -> bool {
        self.horizon == Horizon::Complete
    }

    pub(crate) fn view(&self, side: Side) -> BaseView<'_> {
        BaseView::new(&self.bases, &self.horizon, side)
    }

    /// The parent of a successor hierarchy.
    pub fn parent(&self) -> Option<&Hierarchy> {
        match &self.rule {
            Rule::Successor(s) => Some(s.parent()),
            _ => None,
        }
    }

    pub fn parent_mut(&mut self) -> Option<&mut Hierarchy> {
        match &mut self.rule {
            Rule::Successor(s) => Some(s.parent_mut()),
            _ => None,
        }
    }

    /// Detaches the parent of a successor hierarchy.
    pub fn into_parent(self) -> Option<Hierarchy> {
        match self.rule {
            Rule::Successor(s) => Some(s.into_parent()),
            _ => None,
        }
    }

    /// Bases added by a successor construction, with the number that introduced them.
    pub fn log(&self) -> &[(Nat, Vec<Nat>)] {
        match &self.rule {
            Rule::Successor(s) => s.log(),
            _ => &[],
        }
    }

    fn covers(&self, x: &Nat) -> bool {
        match &self.horizon {
            Horizon::Upto(k) => x <= k,
            Horizon::Cap | Horizon::Complete => true,
        }
    }

    /// Materializes every base `≤ x`.
    pub fn ensure(&mut self, x: &Nat) -> Result<()> {
        while !self.covers(x) {
            self.grow()?;
        }
        Ok(())
    }

    fn grow(&mut self) -> Result<()> {
        let before = self.bases.len();
        self.grow_once()?;
        self.bits += self.bases[before..].iter().map(|b| b.bits()).sum::<u64>();
        if self.bits > self.limits.material_cap() {
            return Err(Error::NumericBlowup(format!("materialized bases exceed {} bits", self.limits.material_cap())));
        }
        Ok(())
    }

    fn grow_once(&mut self) -> Result<()> {
        let last = self.bases.last().unwrap().clone();
        let next = match &mut self.rule {
            Rule::Fixed => return Err(Error::UnknownBeyondPrefix(format!("explicit prefix ending at {last}"))),
            Rule::Ratio { head, k } => {
                let r = head.get(self.bases.len() - 1).copied().unwrap_or(*k);
                let v = &last * r;
                self.limits.check(&v, "next base").map(|_| v)
            }
            Rule::Power(k) => self.limits.pow(&last, &Nat::from(*k), "next base"),
            Rule::Tower(n) => {
                let mut v = last.clone();
                let mut r = Ok(());
                for _ in 1..*n {
                    match self.limits.pow(&last, &v, "next base") {
                        Ok(x) => v = x,
                        Err(e) => {
                            r = Err(e);
                            break;
                        }
                    }
                }
                r.map(|_| v)
            }
            Rule::Successor(s) => return s.grow(&mut self.bases, &mut self.horizon),
        };
        match next {
            Ok(v) => {
                self.bases.push(v.clone());
                self.horizon = Horizon::Upto(v);
            }
            Err(Error::NumericBlowup(_)) => self.horizon = Horizon::Cap,
            Err(e) => return Err(e),
        }
        Ok(())
    }

    /// `base_B(n)`: the greatest base `≤ n`, or `min B` below it.
    pub fn base_of(&mut self, n: &Nat) -> Result<Nat> {
        self.ensure(n)?;
        resolve(self.view(Side::B).base_of(n)).cloned()
    }

    pub fn contains(&mut self, n: &Nat) -> Result<bool> {
        self.ensure(n)?;
        resolve(self.view(Side::B).contains(n))
    }

    /// `S_B(n)`: the least base above `n`, or `Inf`.
    pub fn s_next(&mut self, n: &Nat) -> Result<ExtNat> {
        loop {
            match self.view(Side::B).s_next(n) {
                Ok(Bound::Fin(b)) => return Ok(ExtNat::Fin(b)),
                Ok(Bound::Inf) => return Ok(ExtNat::Inf),
                Ok(Bound::Huge) => return Err(self.limits.blowup(&format!("the base above {n}"))),
                Err(Fault::Need(_, x)) => self.ensure(&x)?,
                Err(Fault::Fail(e)) => return Err(e),
            }
        }
    }

    /// `n` is critical iff `base_B(n)` divides `n`.
    pub fn is_critical(&mut self, n: &Nat) -> Result<bool> {
        let b = self.base_of(n)?;
        Ok(n.is_multiple_of(&b))
    }

    /// The hereditary `B`-normal form of `n`.
    pub fn hereditary(&mut self, n: &Nat) -> Result<Hered> {
        self.ensure(n)?;
        let mut terms = Vec::new();
        let mut x = n.clone();
        while &x >= self.min_base() {
            let b = self.base_of(&x)?;
            let d = decompose(&x, &b)?;
            let exp = self.hereditary(&d.exponent)?;
            terms.push(HTerm { base: b, exp, coeff: d.leading });
            x = d.remainder;
        }
        Ok(Hered { terms, tail: x })
    }

    /// Materializes a successor construction through every event `≤ n_max`.
    pub fn process_upto(&mut self, n_max: &Nat) -> Result<()> {
        match &mut self.rule {
            Rule::Successor(s) => s.process_upto(n_max, &mut self.bases, &mut self.horizon),
            _ => Ok(()),
        }
    }

    /// An immutable explicit snapshot of the materialized part.
    pub fn freeze(&self) -> Hierarchy {
        let spec = HierarchySpec::Explicit { bases: self.bases.clone(), open: !self.is_exhausted() };
        let horizon = match &self.horizon {
            Horizon::Complete => Horizon::Complete,
            _ => Horizon::Upto(self.bases.last().unwrap().clone()),
        };
        Hierarchy::raw(spec, self.bases.clone(), horizon, Rule::Fixed, self.limits)
    }
}

pub(crate) fn resolve<T>(r: Res<T>) -> Result<T> {
    r.map_err(|f| match f {
        Fault::Fail(e) => e,
        Fault::Need(_, x) => Error::UnknownBeyondPrefix(x.to_string()),
    })
}

fn check_min(min: u64) -> Result<()> {
    if min < 2 {
        Err(Error::Invalid(format!("minimum base {min} is below 2")))
    } else {
        Ok(())
    }
}

/// Checks that `bases` is a nonempty increasing chain of divisors, all at least 2.
pub fn validate(bases: &[Nat]) -> Result<()> {
    let Some(first) = bases.first() else {
        return Err(Error::Invalid("a base hierarchy is nonempty".into()));
    };
    if first < &Nat::from(2u32) {
        return Err(Error::Invalid(format!("base {first} is below 2")));
    }
    for w in bases.windows(2) {
        if w[1] <= w[0] || !w[1].is_multiple_of(&w[0]) {
            return Err(Error::Invalid(format!("{} does not divide the next base {}", w[0], w[1])));
        }
    }
    Ok(())
}

/// One term `base^exp·coeff` of a hereditary normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTerm {
    pub base: Nat,
    pub exp: Hered,
    pub coeff: Nat,
}

/// Hereditary normal form: a sum of terms followed by a tail below `min B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hered {
    pub terms: Vec<HTerm>,
    pub tail: Nat,
}

impl fmt::Display for Hered {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", t.base)?;
            let atom = t.exp.terms.is_empty();
            let single = t.exp.terms.len() + usize::from(!t.exp.tail.is_zero()) <= 1;
            if !(atom && t.exp.tail.is_one()) {
                if single {
                    write!(f, "^{}", t.exp)?;
                } else {
                    write!(f, "^({})", t.exp)?;
                }
            }
            if !t.coeff.is_one() {
                write!(f, "*{}", t.coeff)?;
            }
        }
        if first || !self.tail.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.tail)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::nat;

    fn ex(b: &[u64]) -> Hierarchy {
        Hierarchy::explicit(b, false).unwrap()
    }

    #[test]
    fn queries_on_explicit_sets() {
        let mut b = ex(&[3, 6, 42]);
        assert_eq!(b.base_of(&nat(39)).unwrap(), nat(6));
        assert_eq!(b.base_of(&nat(2)).unwrap(), nat(3));
        assert_eq!(b.base_of(&nat(100)).unwrap(), nat(42));
        let mut c = ex(&[5, 10, 110]);
        assert_eq!(c.s_next(&nat(7)).unwrap(), ExtNat::from_u64(10));
        assert_eq!(c.s_next(&nat(110)).unwrap(), ExtNat::Inf);
        assert_eq!(c.s_next(&nat(105)).unwrap(), ExtNat::from_u64(110));
        assert!(b.is_critical(&nat(12)).unwrap());
        assert!(!b.is_critical(&nat(13)).unwrap());
        assert!(ex(&[3, 9]).is_critical(&nat(6)).unwrap());
    }

    #[test]
    fn open_prefixes_refuse_to_guess() {
        let mut b = Hierarchy::explicit(&[3, 6], true).unwrap();
        assert_eq!(b.s_next(&nat(4)).unwrap(), ExtNat::from_u64(6));
        assert!(matches!(b.s_next(&nat(6)), Err(Error::UnknownBeyondPrefix(_))));
        assert!(matches!(b.base_of(&nat(7)), Err(Error::UnknownBeyondPrefix(_))));
    }

    #[test]
    fn validation() {
        assert!(Hierarchy::explicit(&[3, 7], false).is_err());
        assert!(Hierarchy::explicit(&[], false).is_err());
        assert!(Hierarchy::explicit(&[1], false).is_err());
        assert!(Hierarchy::explicit(&[6, 3], false).is_err());
        assert!(Hierarchy::new(&HierarchySpec::ratio(3, 1), Limits::default()).is_err());
    }

    #[test]
    fn rule_families() {
        let l = Limits::default();
        let mut r = Hierarchy::new(&HierarchySpec::ratio(3, 2), l).unwrap();
        assert_eq!(r.s_next(&nat(40)).unwrap(), ExtNat::from_u64(48));
        let mut p = Hierarchy::new(&HierarchySpec::Power { min: 3, k: 2 }, l).unwrap();
        assert_eq!(p.s_next(&nat(9)).unwrap(), ExtNat::from_u64(81));
        let mut t = Hierarchy::new(&HierarchySpec::Tower { min: 2, n: 2 }, l).unwrap();
        assert_eq!(t.s_next(&nat(4)).unwrap(), ExtNat::from_u64(256));
        let mut t3 = Hierarchy::new(&HierarchySpec::Tower { min: 2, n: 3 }, l).unwrap();
        assert_eq!(t3.s_next(&nat(2)).unwrap(), ExtNat::from_u64(16));
        let mut h = Hierarchy::new(&HierarchySpec::Ratio { min: 2, k: 3, head: vec![2, 5] }, l).unwrap();
        h.ensure(&nat(200)).unwrap();
        assert_eq!(h.bases()[..5], [nat(2), nat(4), nat(20), nat(60), nat(180)]);
    }

    #[test]
    fn blowup_caps_the_horizon() {
        let mut p = Hierarchy::new(&HierarchySpec::Power { min: 10, k: 10 }, Limits::with_digit_cap(50)).unwrap();
        assert_eq!(p.base_of(&nat(u64::MAX)).unwrap(), nat(10_000_000_000));
        assert_eq!(p.horizon(), &Horizon::Cap);
        assert!(matches!(p.s_next(&nat(10_000_000_000)), Err(Error::NumericBlowup(_))));
    }

    #[test]
    fn hereditary_forms() {
        let mut b = ex(&[3, 6, 42]);
        assert_eq!(b.hereditary(&nat(39)).unwrap().to_string(), "6^2 + 3");
        assert_eq!(b.hereditary(&nat(2)).unwrap().to_string(), "2");
        assert_eq!(b.hereditary(&nat(0)).unwrap().to_string(), "0");
        let mut c = ex(&[2]);
        assert_eq!(c.hereditary(&nat(35)).unwrap().to_string(), "2^(2^2 + 1) + 2 + 1");
        assert_eq!(b.hereditary(&(nat(42).pow(39u32))).unwrap().to_string(), "42^(6^2 + 3)");
    }

    #[test]
    fn freeze_keeps_closedness() {
        let h = ex(&[3, 6]);
        assert!(h.freeze().is_exhausted());
        let mut r = Hierarchy::new(&HierarchySpec::ratio(2, 2), Limits::default()).unwrap();
        r.ensure(&nat(16)).unwrap();
        let mut f = r.freeze();
        assert_eq!(f.bases().len(), 4);
        assert!(matches!(f.s_next(&nat(16)), Err(Error::UnknownBeyondPrefix(_))));
    }
}
