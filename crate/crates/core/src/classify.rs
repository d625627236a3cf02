//! Where `I(B) = sup o_B(n)` falls, read off the growth of `S_B`, and the matching theories.

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde_json::json;

use crate::assignment::AssignSession;
use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchy, HierarchySpec, Horizon};
use crate::nat::{ExtNat, Limits, Nat};
use crate::ordinal::{epsilon0, gamma0, omega_k, omega_n, omega_pow, ExtOrd, Ordinal};

/// The band containing `I(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegimeTag {
    /// `I = ω²`.
    ExactlyOmega2,
    /// `ω² < I ≤ ω^ω`, with `I = ω^ω` iff infinitely many `S(b) = 3b`.
    UpToOmegaOmega { infinitely_many_3b: bool },
    /// `ω^ω < I < ω^{ω^ω}`.
    BelowOmegaOmegaOmega,
    /// `ω_{2n+1} < I < ω_{2n+3}`.
    Band(u64),
    /// `I < ε₀`.
    BelowEpsilon0,
    /// `ε₀ ≤ I < Γ₀`.
    Epsilon0ToGamma0,
    /// `I ≤ ϑ(Ω_n)` for the least such `n ≥ 2`.
    BelowThetaOmegaN(u64),
    /// `I = ϑ[ε_{Ω+1}]`.
    BachmannHowardScale,
}

impl RegimeTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeTag::ExactlyOmega2 => "ExactlyOmega2",
            RegimeTag::UpToOmegaOmega { .. } => "UpToOmegaOmega",
            RegimeTag::BelowOmegaOmegaOmega => "BelowOmegaOmegaOmega",
            RegimeTag::Band(_) => "Band",
            RegimeTag::BelowEpsilon0 => "BelowEpsilon0",
            RegimeTag::Epsilon0ToGamma0 => "Epsilon0ToGamma0",
            RegimeTag::BelowThetaOmegaN(_) => "BelowThetaOmegaN",
            RegimeTag::BachmannHowardScale => "BachmannHowardScale",
        }
    }
}

/// A named ordinal bound on `I(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdBound {
    pub name: String,
    pub value: ExtOrd,
    /// The inequality with `I(B)` is strict.
    pub strict: bool,
}

impl OrdBound {
    fn new(name: impl Into<String>, value: Ordinal, strict: bool) -> Self {
        OrdBound { name: name.into(), value: ExtOrd::Ord(value), strict }
    }

    fn top() -> Self {
        OrdBound { name: "BH".into(), value: ExtOrd::Top, strict: false }
    }
}

/// A classification, with the lemma conditions that decided it.
#[derive(Clone, Debug)]
pub struct Regime {
    pub tag: RegimeTag,
    pub lo: OrdBound,
    pub hi: OrdBound,
    /// Decided from a finite prefix of an infinite hierarchy.
    pub conditional: bool,
    pub chain: Vec<Nat>,
    pub conditions: Vec<(String, bool)>,
}

/// A theory of the phase-transition table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoryLabel {
    Rca0,
    /// `RCA₀ + Σ⁰_k-IND`.
    Rca0SigmaInd(u64),
    Aca0,
    Atr0,
    /// `KP⁻ω + Π_n-IND`.
    KpMinusOmegaPiInd(u64),
    Kp,
}

impl fmt::Display for TheoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryLabel::Rca0 => f.write_str("RCA0"),
            TheoryLabel::Rca0SigmaInd(k) => write!(f, "RCA0+Sigma0_{k}-IND"),
            TheoryLabel::Aca0 => f.write_str("ACA0"),
            TheoryLabel::Atr0 => f.write_str("ATR0"),
            TheoryLabel::KpMinusOmegaPiInd(n) => write!(f, "KP-omega+Pi_{n}-IND"),
            TheoryLabel::Kp => f.write_str("KP"),
        }
    }
}

/// The theory proving termination for the family started at a hierarchy in this regime,
/// and a theory that does not.
pub fn theory_for(tag: &RegimeTag) -> (Option<TheoryLabel>, Option<TheoryLabel>) {
    use TheoryLabel::*;
    match tag {
        RegimeTag::ExactlyOmega2 | RegimeTag::UpToOmegaOmega { infinitely_many_3b: false } => (Some(Rca0), None),
        RegimeTag::UpToOmegaOmega { infinitely_many_3b: true } | RegimeTag::BelowOmegaOmegaOmega => {
            (Some(Rca0SigmaInd(2)), Some(Rca0))
        }
        RegimeTag::Band(n) => (Some(Rca0SigmaInd(2 * n + 2)), Some(Rca0SigmaInd(2 * n))),
        RegimeTag::BelowEpsilon0 => (Some(Aca0), None),
        RegimeTag::Epsilon0ToGamma0 => (Some(Atr0), Some(Aca0)),
        RegimeTag::BelowThetaOmegaN(2) => (Some(KpMinusOmegaPiInd(2)), Some(Atr0)),
        RegimeTag::BelowThetaOmegaN(n) => (Some(KpMinusOmegaPiInd(*n)), Some(KpMinusOmegaPiInd(n - 1))),
        RegimeTag::BachmannHowardScale => (None, Some(Kp)),
    }
}

impl Regime {
    /// The report object `{"regime","n","lo","hi","provable","unprovable","conditional","evidence"}`.
    pub fn report(&self) -> serde_json::Value {
        let n = match &self.tag {
            RegimeTag::Band(n) | RegimeTag::BelowThetaOmegaN(n) => Some(*n),
            _ => None,
        };
        let (provable, unprovable) = theory_for(&self.tag);
        let conditions: Vec<_> = self.conditions.iter().map(|(c, ok)| json!({"condition": c, "holds": ok})).collect();
        let mut v = json!({
            "regime": self.tag.name(),
            "n": n,
            "lo": self.lo.name,
            "lo_strict": self.lo.strict,
            "hi": self.hi.name,
            "hi_strict": self.hi.strict,
            "provable": provable.map(|t| t.to_string()),
            "unprovable": unprovable.map(|t| t.to_string()),
            "conditional": self.conditional,
            "evidence": {
                "chain": self.chain.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "conditions": conditions,
            },
        });
        if let RegimeTag::UpToOmegaOmega { infinitely_many_3b } = self.tag {
            v["infinitely_many_3b"] = json!(infinitely_many_3b);
        }
        v
    }
}

/// Growth facts about `S_B` over all bases.
struct Facts {
    min: Nat,
    /// Every `S(b)` is finite.
    all_finite: bool,
    all_double: bool,
    /// `S(b) ≤ 3b ≤ b·min B` for every `b`.
    at_most_triple: bool,
    triples: u64,
    infinitely_many_triples: bool,
    at_most_b_min: bool,
    at_most_square: bool,
    /// `S(b)/b` is bounded.
    ratio_bounded: bool,
    at_most_cube: bool,
    /// `S(b)/b²` is bounded.
    square_ratio_bounded: bool,
    /// Least `n ≥ 2` with `S(b) ≤ b_n` for every `b`, if any up to [`MAX_TOWER`].
    tower: Option<u64>,
    chain: Vec<Nat>,
    /// The greedy chain is known to be maximal.
    chain_complete: bool,
}

const MAX_TOWER: u64 = 8;

/// `b_n ≥ s`, deciding huge towers by the digit cap.
fn tower_at_least(b: &Nat, n: u64, s: &Nat, limits: &Limits) -> bool {
    let mut v = b.clone();
    for _ in 1..n {
        match limits.pow(b, &v, "tower") {
            Ok(x) => v = x,
            Err(_) => return true,
        }
    }
    &v >= s
}

/// The greedy chain `d_0 = min B`, `d_i` least with `S(d_i) > d_i⋯d_0`, over the given pairs.
fn greedy(pairs: &[(Nat, ExtNat)]) -> Vec<Nat> {
    let Some((d0, _)) = pairs.first() else { return Vec::new() };
    let mut chain = vec![d0.clone()];
    let mut prod = d0.clone();
    for (d, s) in &pairs[1..] {
        let bigger = match s {
            ExtNat::Fin(s) => s > &(d * &prod),
            ExtNat::Inf => true,
        };
        if bigger {
            chain.push(d.clone());
            prod *= d;
        }
    }
    chain
}

fn facts_from_pairs(min: &Nat, pairs: &[(Nat, ExtNat)], limits: &Limits) -> Facts {
    let min = min.clone();
    let three = Nat::from(3u32);
    let mut f = Facts {
        min: min.clone(),
        all_finite: true,
        all_double: true,
        at_most_triple: min >= three,
        triples: 0,
        infinitely_many_triples: false,
        at_most_b_min: true,
        at_most_square: true,
        ratio_bounded: true,
        at_most_cube: true,
        square_ratio_bounded: true,
        tower: None,
        chain: if pairs.is_empty() { vec![min.clone()] } else { greedy(pairs) },
        chain_complete: true,
    };
    let mut towers: Vec<u64> = (2..=MAX_TOWER).collect();
    for (b, s) in pairs {
        let ExtNat::Fin(s) = s else {
            f.all_finite = false;
            continue;
        };
        let sq = b * b;
        f.all_double &= s == &(b * 2u32);
        f.at_most_triple &= s <= &(b * 3u32);
        if s == &(b * 3u32) {
            f.triples += 1;
        }
        f.at_most_b_min &= s <= &(b * &min);
        f.at_most_square &= s <= &sq;
        f.at_most_cube &= s <= &(&sq * b);
        towers.retain(|&n| tower_at_least(b, n, s, limits));
    }
    if !f.all_finite {
        f.all_double = false;
        f.at_most_triple = false;
        f.at_most_b_min = false;
        f.at_most_square = false;
        f.at_most_cube = false;
        f.ratio_bounded = false;
        f.square_ratio_bounded = false;
        towers.clear();
    }
    f.tower = towers.first().copied();
    f
}

fn decide(f: &Facts) -> (RegimeTag, Vec<(String, bool)>) {
    let mut conds = vec![
        ("S(b) = 2b for every b".to_string(), f.all_double),
        ("S(b) <= 3b <= b*min B for every b, some S(b) = 3b".to_string(), f.at_most_triple && f.triples > 0),
        ("S(b) <= b*min B for every b".to_string(), f.at_most_b_min),
        ("S(b) <= b^2 for every b".to_string(), f.at_most_square),
        ("greedy chain is maximal".to_string(), f.chain_complete),
        ("S(b)/b bounded".to_string(), f.ratio_bounded),
    ];
    let gamma = if f.min == Nat::from(2u32) {
        f.at_most_square
    } else {
        f.at_most_cube && f.square_ratio_bounded
    };
    conds.push(("S(b) <= b^2 if min B = 2, else S(b) <= min(b^3, b^2 c)".to_string(), gamma));
    let tower = f.tower.map_or_else(|| "none".to_string(), |n| n.to_string());
    conds.push((format!("least n with S(b) <= b_n: {tower}"), f.tower.is_some()));
    let tag = if f.all_double {
        RegimeTag::ExactlyOmega2
    } else if f.at_most_triple && f.triples > 0 {
        RegimeTag::UpToOmegaOmega { infinitely_many_3b: f.infinitely_many_triples }
    } else if f.at_most_b_min {
        RegimeTag::BelowOmegaOmegaOmega
    } else if f.at_most_square && f.chain_complete && f.chain.len() > 1 {
        RegimeTag::Band(f.chain.len() as u64 - 1)
    } else if f.at_most_square && f.ratio_bounded {
        RegimeTag::BelowEpsilon0
    } else if gamma {
        RegimeTag::Epsilon0ToGamma0
    } else if let Some(n) = f.tower {
        RegimeTag::BelowThetaOmegaN(n)
    } else {
        RegimeTag::BachmannHowardScale
    };
    (tag, conds)
}

fn bounds(tag: &RegimeTag) -> (OrdBound, OrdBound) {
    let w2 = omega_pow(&Ordinal::nat(2)).expect("countable");
    let ww = omega_k(2);
    let www = omega_k(3);
    match tag {
        RegimeTag::ExactlyOmega2 => (OrdBound::new("w^2", w2.clone(), false), OrdBound::new("w^2", w2, false)),
        RegimeTag::UpToOmegaOmega { infinitely_many_3b: true } => {
            (OrdBound::new("w^w", ww.clone(), false), OrdBound::new("w^w", ww, false))
        }
        RegimeTag::UpToOmegaOmega { infinitely_many_3b: false } => {
            (OrdBound::new("w^2", w2, true), OrdBound::new("w^w", ww, true))
        }
        RegimeTag::BelowOmegaOmegaOmega => (OrdBound::new("w^w", ww, true), OrdBound::new("w^w^w", www, true)),
        RegimeTag::Band(n) => {
            let (a, b) = (2 * n + 1, 2 * n + 3);
            (OrdBound::new(format!("w_{a}"), omega_k(a), true), OrdBound::new(format!("w_{b}"), omega_k(b), true))
        }
        RegimeTag::BelowEpsilon0 => (OrdBound::new("w^2", w2, true), OrdBound::new("e0", epsilon0(), true)),
        RegimeTag::Epsilon0ToGamma0 => (OrdBound::new("e0", epsilon0(), false), OrdBound::new("G0", gamma0(), true)),
        RegimeTag::BelowThetaOmegaN(n) => {
            let lo = if *n == 2 {
                OrdBound::new("G0", gamma0(), false)
            } else {
                OrdBound::new(format!("th(O_{})", n - 1), Ordinal::theta(omega_n(n - 1)), true)
            };
            (lo, OrdBound::new(format!("th(O_{n})"), Ordinal::theta(omega_n(*n)), false))
        }
        RegimeTag::BachmannHowardScale => (OrdBound::top(), OrdBound::top()),
    }
}

/// Consecutive pairs `(b, S(b))` of the materialized bases; the last is included when known.
fn pairs_of(h: &Hierarchy) -> Vec<(Nat, ExtNat)> {
    let bases = h.bases();
    let mut out: Vec<(Nat, ExtNat)> =
        bases.windows(2).map(|w| (w[0].clone(), ExtNat::Fin(w[1].clone()))).collect();
    if h.is_exhausted() {
        out.push((bases.last().unwrap().clone(), ExtNat::Inf));
    }
    out
}

/// Materializes at least `count` bases, or as many as the digit cap allows.
fn materialize(h: &mut Hierarchy, count: usize) -> Result<()> {
    while h.bases().len() < count && !h.is_exhausted() && *h.horizon() != Horizon::Cap {
        let next = h.bases().last().unwrap() + 1u32;
        match h.s_next(&next) {
            Ok(_) | Err(Error::NumericBlowup(_)) => {}
            Err(e) => return Err(e),
        }
        if h.bases().last().unwrap() < &next {
            break;
        }
    }
    Ok(())
}

/// Classifies `I(B)`. Rule families are decided exactly; explicit prefixes and successor
/// hierarchies are read off the bases up to `probe_bound` and flagged conditional.
pub fn classify(spec: &HierarchySpec, probe_bound: &Nat) -> Result<Regime> {
    let limits = Limits::with_digit_cap(10_000);
    let mut h = Hierarchy::new(spec, limits)?;
    let min = h.min_base().clone();
    let mut conditional = false;
    let facts = match spec {
        HierarchySpec::Ratio { head, k, .. } => {
            materialize(&mut h, head.len() + 70)?;
            let mut f = facts_from_pairs(&min, &pairs_of(&h), &limits);
            f.infinitely_many_triples = *k == 3;
            f
        }
        HierarchySpec::Power { k, .. } => {
            materialize(&mut h, 4)?;
            let mut f = facts_from_pairs(&min, &pairs_of(&h), &limits);
            f.ratio_bounded = false;
            f.square_ratio_bounded = *k <= 2;
            f.chain_complete = false;
            f
        }
        HierarchySpec::Tower { n, .. } => {
            materialize(&mut h, 3)?;
            let mut f = facts_from_pairs(&min, &pairs_of(&h), &limits);
            // b_n ≥ b^b exceeds b³ beyond the first bases.
            f.all_double = false;
            f.at_most_triple = false;
            f.at_most_b_min = false;
            f.at_most_square = false;
            f.at_most_cube = false;
            f.ratio_bounded = false;
            f.square_ratio_bounded = false;
            f.chain_complete = false;
            f.tower = Some(*n);
            f
        }
        _ => {
            match h.ensure(probe_bound) {
                Ok(()) | Err(Error::UnknownBeyondPrefix(_)) => {}
                Err(e) => return Err(e),
            }
            conditional = !h.is_exhausted();
            let pairs = pairs_of(&h);
            if pairs.is_empty() {
                return Err(Error::Inconclusive("the prefix has no consecutive bases".into()));
            }
            let f = facts_from_pairs(&min, &pairs, &limits);
            if conditional && f.at_most_triple && f.triples > 0 && !f.all_double {
                return Err(Error::Inconclusive("whether S(b) = 3b infinitely often is not decided by a prefix".into()));
            }
            f
        }
    };
    let (tag, conditions) = decide(&facts);
    let (lo, hi) = bounds(&tag);
    Ok(Regime { tag, lo, hi, conditional, chain: facts.chain, conditions })
}

/// The greedy chain within the bases `≤ bound`.
pub fn greedy_chain(h: &mut Hierarchy, bound: &Nat) -> Result<Vec<Nat>> {
    match h.ensure(bound) {
        Ok(()) | Err(Error::UnknownBeyondPrefix(_)) => {}
        Err(e) => return Err(e),
    }
    let pairs: Vec<_> = pairs_of(h).into_iter().filter(|(b, _)| b <= bound).collect();
    Ok(greedy(&pairs))
}

/// `max_{n ≤ n_max} o_B(n)`.
pub fn empirical_floor(h: &mut Hierarchy, n_max: u64) -> Result<Ordinal> {
    let mut s = AssignSession::new();
    let mut best = Ordinal::Zero;
    let mut n = Nat::from(0u32);
    while n.to_u64().is_some_and(|k| k <= n_max) {
        let o = s.o(h, &n)?;
        if o > best {
            best = o;
        }
        n += Nat::one();
    }
    Ok(best)
}

/// `x` lies strictly below the upper bound of the regime.
pub fn below_hi(x: &Ordinal, hi: &OrdBound) -> bool {
    match &hi.value {
        ExtOrd::Top => true,
        ExtOrd::Ord(h) => x < h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::nat;
    use crate::ordinal::nat_mul;

    fn tag(spec: HierarchySpec) -> RegimeTag {
        classify(&spec, &nat(1000)).unwrap().tag
    }

    #[test]
    fn rule_families() {
        assert_eq!(tag(HierarchySpec::ratio(2, 2)), RegimeTag::ExactlyOmega2);
        assert_eq!(tag(HierarchySpec::ratio(3, 3)), RegimeTag::UpToOmegaOmega { infinitely_many_3b: true });
        assert_eq!(
            tag(HierarchySpec::Ratio { min: 3, k: 2, head: vec![3, 3] }),
            RegimeTag::UpToOmegaOmega { infinitely_many_3b: false }
        );
        assert_eq!(tag(HierarchySpec::ratio(5, 4)), RegimeTag::BelowOmegaOmegaOmega);
        assert_eq!(tag(HierarchySpec::Ratio { min: 3, k: 2, head: vec![3, 9] }), RegimeTag::Band(1));
        assert_eq!(tag(HierarchySpec::Ratio { min: 3, k: 2, head: vec![3, 9, 81] }), RegimeTag::Band(2));
        assert_eq!(tag(HierarchySpec::ratio(2, 9)), RegimeTag::BelowThetaOmegaN(4));
        assert_eq!(tag(HierarchySpec::Power { min: 3, k: 2 }), RegimeTag::Epsilon0ToGamma0);
        assert_eq!(tag(HierarchySpec::Power { min: 3, k: 3 }), RegimeTag::BelowThetaOmegaN(2));
        assert_eq!(tag(HierarchySpec::Tower { min: 3, n: 2 }), RegimeTag::BelowThetaOmegaN(2));
        assert_eq!(tag(HierarchySpec::Classic { i: 1 }), RegimeTag::BachmannHowardScale);
    }

    #[test]
    fn band_chain() {
        let r = classify(&HierarchySpec::Ratio { min: 3, k: 2, head: vec![3, 9] }, &nat(0)).unwrap();
        assert_eq!(r.chain, [nat(3), nat(9)]);
        assert_eq!((r.lo.name.as_str(), r.hi.name.as_str()), ("w_3", "w_5"));
        assert_eq!(r.report()["provable"], "RCA0+Sigma0_4-IND");
    }

    #[test]
    fn prefixes_are_conditional() {
        let r = classify(&HierarchySpec::explicit(&[3, 9, 81, 6561], true), &nat(6561)).unwrap();
        assert!(r.conditional);
        assert!(classify(&HierarchySpec::explicit(&[3, 9, 27], true), &nat(27)).is_err());
        assert!(classify(&HierarchySpec::explicit(&[3], true), &nat(3)).is_err());
        let r = classify(&HierarchySpec::explicit(&[3, 9], false), &nat(9)).unwrap();
        assert_eq!(r.tag, RegimeTag::BachmannHowardScale);
        assert!(!r.conditional);
    }

    #[test]
    fn greedy_examples() {
        let mut h = Hierarchy::new(&HierarchySpec::ratio(3, 3), Limits::default()).unwrap();
        assert_eq!(greedy_chain(&mut h, &nat(10_000)).unwrap(), [nat(3)]);
        let mut h = Hierarchy::new(&HierarchySpec::ratio(2, 2), Limits::default()).unwrap();
        assert_eq!(greedy_chain(&mut h, &nat(10_000)).unwrap(), [nat(2)]);
        let mut h = Hierarchy::new(&HierarchySpec::Power { min: 3, k: 2 }, Limits::default()).unwrap();
        assert_eq!(greedy_chain(&mut h, &nat(100_000)).unwrap(), [nat(3), nat(9), nat(81), nat(6561)]);
    }

    #[test]
    fn floors() {
        let mut h = Hierarchy::new(&HierarchySpec::ratio(2, 2), Limits::default()).unwrap();
        assert_eq!(empirical_floor(&mut h, 16).unwrap(), nat_mul(&Ordinal::omega(), 8));
        let mut h = Hierarchy::explicit(&[3, 9], false).unwrap();
        assert_eq!(empirical_floor(&mut h, 18).unwrap(), Ordinal::theta(Ordinal::nat(3)));
    }
}
