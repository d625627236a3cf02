//! Ouroboros and minimalistic successors, built stage by stage.
//!
//! The stage `C_n` after processing `n` is a finite hierarchy; upgrades from the
//! parent are taken against it with `S(max C_n) = ∞`. Bases added later all lie
//! above `↑(m−1)`, where `m` is the next event, so the stage is exact up to there.

use num_integer::Integer;

use super::{BaseView, Hierarchy, Horizon, Side};
use crate::error::{Error, Result};
use crate::nat::{ExtNat, Limits, Nat};
use crate::upgrade::{drive, Mode, Pair, Upgrader};

/// Which successor to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessorRule {
    /// `B₊ᵢ`: chains `d_{j+1} = ⌈b→d_j⌉n` at every critical non-base `n`.
    Ouroboros(u64),
    /// At every base `n > min B`, the least multiple of the current maximum above `↑(n−1)`.
    Minimalistic,
}

pub(crate) struct Successor {
    parent: Hierarchy,
    rule: SuccessorRule,
    stage: Vec<Nat>,
    /// The last event processed; the stage equals `C_processed`.
    processed: Nat,
    up: Upgrader,
    log: Vec<(Nat, Vec<Nat>)>,
    done: bool,
}

enum Event {
    At(Nat),
    Never,
    /// Beyond the digit cap.
    Huge,
}

struct StagePair<'a> {
    parent: &'a mut Hierarchy,
    stage: &'a [Nat],
}

const COMPLETE: Horizon = Horizon::Complete;

impl Pair for StagePair<'_> {
    fn views(&self) -> (BaseView<'_>, BaseView<'_>) {
        (self.parent.view(Side::B), BaseView::new(self.stage, &COMPLETE, Side::C))
    }

    fn ensure(&mut self, side: Side, x: &Nat) -> Result<()> {
        match side {
            Side::B => self.parent.ensure(x),
            Side::C => Err(Error::Invariant("a stage is always complete".into())),
        }
    }
}

impl Successor {
    pub(crate) fn new(parent: Hierarchy, rule: SuccessorRule) -> Self {
        let min = parent.min_base().clone();
        let limits = parent.limits();
        Successor {
            stage: vec![&min + 1u32],
            processed: min,
            parent,
            rule,
            up: Upgrader::new(Mode::Alt, limits),
            log: Vec::new(),
            done: false,
        }
    }

    pub(crate) fn stage(&self) -> &[Nat] {
        &self.stage
    }

    pub(crate) fn parent(&self) -> &Hierarchy {
        &self.parent
    }

    pub(crate) fn parent_mut(&mut self) -> &mut Hierarchy {
        &mut self.parent
    }

    pub(crate) fn into_parent(self) -> Hierarchy {
        self.parent
    }

    pub(crate) fn log(&self) -> &[(Nat, Vec<Nat>)] {
        &self.log
    }

    pub(crate) fn set_limits(&mut self, limits: Limits) {
        self.parent.set_limits(limits);
        self.up.set_limits(limits);
    }

    fn limits(&self) -> Limits {
        self.parent.limits()
    }

    /// The next event after `processed`.
    fn next_event(&mut self) -> Result<Event> {
        let above = match self.parent.s_next(&self.processed) {
            Ok(ExtNat::Fin(s)) => Event::At(s),
            Ok(ExtNat::Inf) => Event::Never,
            Err(Error::NumericBlowup(_)) => Event::Huge,
            Err(e) => return Err(e),
        };
        if self.rule == SuccessorRule::Minimalistic {
            return Ok(above);
        }
        let x = &self.processed + 1u32;
        let b = self.parent.base_of(&x)?;
        let multiple = x.div_ceil(&b) * &b;
        Ok(match above {
            Event::At(s) if s < multiple => Event::At(s),
            _ => Event::At(multiple),
        })
    }

    fn upgrade(&mut self, n: &Nat) -> Result<Nat> {
        let Successor { parent, stage, up, .. } = self;
        let mut pair = StagePair { parent, stage };
        let u = drive(&mut pair, |b, c| up.up(b, c, n))?;
        u.value.fin().cloned().ok_or_else(|| Error::Invariant(format!("successor upgrade of {n} is infinite")))
    }

    fn chg(&mut self, b: &Nat, c: &Nat, m: &Nat) -> Result<Nat> {
        let Successor { parent, stage, up, .. } = self;
        let mut pair = StagePair { parent, stage };
        drive(&mut pair, |bv, cv| up.chg(bv, cv, b, c, m))
    }

    /// Extends the known part by one step.
    pub(crate) fn grow(&mut self, bases: &mut Vec<Nat>, horizon: &mut Horizon) -> Result<()> {
        let m = match self.next_event()? {
            Event::At(m) => m,
            Event::Never => {
                self.done = true;
                *horizon = Horizon::Complete;
                return Ok(());
            }
            Event::Huge => {
                *horizon = Horizon::Cap;
                return Ok(());
            }
        };
        let before = match self.upgrade(&(&m - 1u32)) {
            Ok(v) => v,
            Err(Error::NumericBlowup(_)) => {
                *horizon = Horizon::Cap;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        if let Horizon::Upto(k) = horizon {
            if *k < before {
                *horizon = Horizon::Upto(before);
                return Ok(());
            }
        }
        self.process(m, bases, horizon)
    }

    /// Processes every event `≤ n_max`.
    pub(crate) fn process_upto(&mut self, n_max: &Nat, bases: &mut Vec<Nat>, horizon: &mut Horizon) -> Result<()> {
        while !self.done && *horizon != Horizon::Cap {
            match self.next_event()? {
                Event::At(m) if &m <= n_max => self.process(m, bases, horizon)?,
                Event::At(_) => break,
                Event::Never => {
                    self.done = true;
                    *horizon = Horizon::Complete;
                }
                Event::Huge => *horizon = Horizon::Cap,
            }
        }
        Ok(())
    }

    fn process(&mut self, m: Nat, bases: &mut Vec<Nat>, horizon: &mut Horizon) -> Result<()> {
        let c = self.stage.last().unwrap().clone();
        let mut added = Vec::new();
        let mut capped = false;
        if self.parent.contains(&m)? {
            let b = self.parent.base_of(&(&m - 1u32))?;
            let v = match self.rule {
                SuccessorRule::Ouroboros(_) => self.chg(&b, &c, &(&m - 1u32)),
                SuccessorRule::Minimalistic => self.upgrade(&(&m - 1u32)),
            };
            match v {
                Ok(v) => {
                    let k = (v / &c + 1u32) * &c;
                    match self.limits().check(&k, "successor base") {
                        Ok(()) => added.push(k),
                        Err(_) => capped = true,
                    }
                }
                Err(Error::NumericBlowup(_)) => capped = true,
                Err(e) => return Err(e),
            }
        } else if let SuccessorRule::Ouroboros(i) = self.rule {
            let b = self.parent.base_of(&m)?;
            let mut d = c.clone();
            for _ in 0..i {
                match self.chg(&b, &d, &m) {
                    Ok(next) => {
                        if next <= d || !next.is_multiple_of(&d) {
                            return Err(Error::Invariant(format!("ouroboros base {next} is not a proper multiple of {d}")));
                        }
                        d = next;
                        added.push(d.clone());
                    }
                    Err(Error::NumericBlowup(_)) => {
                        capped = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        self.stage.extend(added.iter().cloned());
        bases.extend(added.iter().cloned());
        if !added.is_empty() {
            self.log.push((m.clone(), added));
        }
        self.processed = m;
        *horizon = if capped { Horizon::Cap } else { Horizon::Upto(self.stage.last().unwrap().clone()) };
        Ok(())
    }
}
