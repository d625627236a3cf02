//! The ordinal assignment: `O_f^b`, `o_B`, `O_B`, `α_B`, `β_B`, `ζ_B` and `n_*`.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hierarchy::{resolve, BaseView, Fault, Hierarchy, HierarchySpec, Res, Side};
use crate::nat::{decompose, Nat};
use crate::ordinal::{add, mco, mono, nat_mul, omega_left_quotient, omega_pow, theta_star, Ordinal};

/// `O_f^b(n)`: write `n` in base `b`, turn `b` into Ω and each coefficient `a` into `f(a)`.
///
/// Sums are taken with ordinal addition, so `f` need not be monotone.
pub fn o_generic(f: &dyn Fn(&Nat) -> Result<Ordinal>, b: &Nat, n: &Nat) -> Result<Ordinal> {
    if n < b {
        return f(n);
    }
    let d = decompose(n, b)?;
    let c = f(&d.leading)?;
    if !c.is_countable() {
        return Err(Error::Invalid(format!("coefficient {c} is not countable")));
    }
    let head = mono(o_generic(f, b, &d.exponent)?, c);
    Ok(add(&head, &o_generic(f, b, &d.remainder)?))
}

/// `O_f^b` for monotone `f` with `f(m) = 0` iff `m = 0`: the parts come out in normal order.
fn o_f(f: &mut dyn FnMut(&Nat) -> Res<Ordinal>, b: &Nat, n: &Nat) -> Res<Ordinal> {
    if n < b {
        return f(n);
    }
    let mut parts = Vec::new();
    let mut x = n.clone();
    while &x >= b {
        let d = decompose(&x, b)?;
        let e = o_f(f, b, &d.exponent)?;
        parts.push(mono(e, f(&d.leading)?));
        x = d.remainder;
    }
    parts.extend(f(&x)?.parts().iter().cloned());
    Ok(Ordinal::from_parts(parts))
}

/// The components of `ζ_B(n) = α + β + ω^{o(ṽ)}` at a critical non-base `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaParts {
    pub alpha: Ordinal,
    pub beta: Ordinal,
    pub v_tilde: Nat,
    /// `ω^{o(ṽ)}`, or 0 when `ṽ = 0`.
    pub omega_term: Ordinal,
    pub n_star: Option<Nat>,
}

impl ZetaParts {
    pub fn zeta(&self) -> Ordinal {
        add(&add(&self.alpha, &self.beta), &self.omega_term)
    }
}

/// Memoized assignment values for a single hierarchy.
///
/// The session binds to the spec of the first hierarchy it sees and rejects any other.
#[derive(Default)]
pub struct AssignSession {
    spec: Option<HierarchySpec>,
    o: HashMap<Nat, Ordinal>,
    big_o: HashMap<(Nat, Nat), Ordinal>,
    zeta: HashMap<Nat, ZetaParts>,
}

impl AssignSession {
    pub fn new() -> Self {
        Self::default()
    }

    fn bind(&mut self, h: &Hierarchy) -> Result<()> {
        match &self.spec {
            None => self.spec = Some(h.spec().clone()),
            Some(s) if s == h.spec() => {}
            Some(s) => {
                return Err(Error::Invalid(format!("session bound to {} used with {}", s.to_json(), h.spec().to_json())))
            }
        }
        Ok(())
    }

    /// Runs `q` against `h` after materializing every base `≤ x`, extending on demand.
    fn with<T>(&mut self, h: &mut Hierarchy, x: &Nat, mut q: impl FnMut(&mut Self, &BaseView) -> Res<T>) -> Result<T> {
        self.bind(h)?;
        h.ensure(x)?;
        loop {
            match q(self, &h.view(Side::B)) {
                Ok(v) => return Ok(v),
                Err(Fault::Need(_, y)) => h.ensure(&y)?,
                Err(f) => return resolve(Err(f)),
            }
        }
    }

    /// `o_B(n)`.
    pub fn o(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Ordinal> {
        self.with(h, n, |s, v| s.o_v(v, n))
    }

    /// `O_B(n)`, with `b = base_B(n)`.
    pub fn big_o(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Ordinal> {
        self.with(h, n, |s, v| {
            let b = v.base_of(n)?.clone();
            s.big_o_v(v, &b, n)
        })
    }

    /// `O_B^b(n)` for a base `b`.
    pub fn big_o_b(&mut self, h: &mut Hierarchy, b: &Nat, n: &Nat) -> Result<Ordinal> {
        if !h.contains(b)? {
            return Err(Error::Invalid(format!("{b} is not a base")));
        }
        self.with(h, b, |s, v| s.big_o_v(v, b, n))
    }

    /// `α_B(n)`; 0 at `n = 0`.
    pub fn alpha(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Ordinal> {
        if n.is_zero() {
            return Ok(Ordinal::Zero);
        }
        self.with(h, n, |s, v| {
            let b = v.base_of(n)?.clone();
            s.alpha_v(v, &b, n)
        })
    }

    /// `α_B^b(n)` for a base `b`.
    pub fn alpha_b(&mut self, h: &mut Hierarchy, b: &Nat, n: &Nat) -> Result<Ordinal> {
        if !h.contains(b)? {
            return Err(Error::Invalid(format!("{b} is not a base")));
        }
        self.with(h, b, |s, v| s.alpha_v(v, b, n))
    }

    /// `β_B(n)`: `β_B(m)` for `m = n − (n mod b)` when `m` is a critical non-base, else 0.
    pub fn beta(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Ordinal> {
        if n < h.min_base() {
            return Ok(Ordinal::Zero);
        }
        self.with(h, n, |s, v| {
            let b = v.base_of(n)?.clone();
            let m = n - n.mod_floor(&b);
            if m <= b {
                return Ok(Ordinal::Zero);
            }
            Ok(s.zeta_v(v, &m, &b)?.beta)
        })
    }

    /// The parts of `ζ_B(n)` for a critical non-base `n`.
    pub fn zeta_parts(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<ZetaParts> {
        self.with(h, n, |s, v| {
            let b = critical_non_base(v, n)?;
            s.zeta_v(v, n, &b)
        })
    }

    /// `ζ_B(n)` for a critical non-base `n`.
    pub fn zeta(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Ordinal> {
        Ok(self.zeta_parts(h, n)?.zeta())
    }

    /// `n_*` for a critical non-base `n`, by the segment-top search.
    pub fn n_star(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Option<Nat>> {
        Ok(self.zeta_parts(h, n)?.n_star)
    }

    /// `n_*` by scanning every candidate below `base_B(n)` in descending order.
    pub fn n_star_exhaustive(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Option<Nat>> {
        let cap = h.limits().search_cap;
        self.with(h, n, |s, v| {
            let b = critical_non_base(v, n)?;
            let alpha = s.alpha_v(v, &b, n)?;
            let target = mco(&alpha);
            let mut count = 0u64;
            for w in segments_below(v, &b).rev() {
                let (d, next) = (&w[0], &w[1]);
                let mut k = next / d - 1u32;
                while k >= Nat::from(2u32) {
                    count += 1;
                    if count > cap {
                        return Err(Error::SearchBudgetExceeded(cap).into());
                    }
                    let m = &k * d;
                    if s.o_v(v, &m)? > target && s.alpha_v(v, d, &m)? >= alpha {
                        return Ok(Some(m));
                    }
                    k -= 1u32;
                }
            }
            Ok(None)
        })
    }

    /// `ϑ*(ζ_B(n))` by the five-case classification, cross-checked against [`theta_star`].
    pub fn theta_star_of_zeta(&mut self, h: &mut Hierarchy, n: &Nat) -> Result<Ordinal> {
        let z = self.zeta_parts(h, n)?;
        let by_cases = if !z.omega_term.is_zero() {
            Ordinal::Zero
        } else {
            match &z.n_star {
                None if z.alpha.is_zero() => Ordinal::omega(),
                None => Ordinal::Zero,
                Some(m) => self.o(h, m)?,
            }
        };
        let direct = theta_star(&z.zeta());
        if by_cases != direct {
            return Err(Error::Invariant(format!("ϑ*(ζ({n})): cases give {by_cases}, direct gives {direct}")));
        }
        Ok(by_cases)
    }

    fn o_v(&mut self, v: &BaseView, n: &Nat) -> Res<Ordinal> {
        if let Some(x) = self.o.get(n) {
            return Ok(x.clone());
        }
        let min = v.min();
        let x = if n < min {
            Ordinal::from_nat(n)?
        } else if n == min {
            Ordinal::omega()
        } else {
            let b = v.base_of(n)?.clone();
            let (a, r) = n.div_rem(&b);
            if !r.is_zero() {
                add(&self.o_v(v, &(&b * a))?, &self.o_v(v, &r)?)
            } else if &b == n {
                let d = v.pred_base(&b).expect("a base above the minimum").clone();
                nat_mul(&self.o_v(v, &(n - d))?, 2)
            } else {
                Ordinal::theta(self.zeta_v(v, n, &b)?.zeta())
            }
        };
        self.o.insert(n.clone(), x.clone());
        Ok(x)
    }

    fn big_o_v(&mut self, v: &BaseView, b: &Nat, n: &Nat) -> Res<Ordinal> {
        let key = (b.clone(), n.clone());
        if let Some(x) = self.big_o.get(&key) {
            return Ok(x.clone());
        }
        let x = o_f(&mut |a| self.o_v(v, a), b, n)?;
        self.big_o.insert(key, x.clone());
        Ok(x)
    }

    /// `α^b(n)`: the left quotient of `O^b(b²u)` by Ω, where `n = b²u + bv + w`.
    fn alpha_v(&mut self, v: &BaseView, b: &Nat, n: &Nat) -> Res<Ordinal> {
        let sq = b * b;
        let u = n / &sq;
        if u.is_zero() {
            return Ok(Ordinal::Zero);
        }
        let o = self.big_o_v(v, b, &(sq * u))?;
        Ok(omega_left_quotient(&o)?)
    }

    fn zeta_v(&mut self, v: &BaseView, n: &Nat, b: &Nat) -> Res<ZetaParts> {
        if let Some(z) = self.zeta.get(n) {
            return Ok(z.clone());
        }
        let alpha = self.alpha_v(v, b, n)?;
        let n_star = self.n_star_v(v, b, &alpha)?;
        let beta = match &n_star {
            None if alpha.is_zero() => Ordinal::nat(2),
            None => Ordinal::Zero,
            Some(m) => {
                let d = v.base_of(m)?.clone();
                let am = self.alpha_v(v, &d, m)?;
                let om = self.o_v(v, m)?;
                if am > alpha {
                    om
                } else if am == alpha {
                    let arg = om.theta_arg().expect("critical non-base");
                    add(&arg.split_countable().1, &Ordinal::one())
                } else {
                    return Err(Error::Invariant(format!("n_* = {m} has α below α({n})")).into());
                }
            }
        };
        let sq = b * b;
        let (u, rest) = n.div_rem(&sq);
        let digit = rest / b;
        let min = v.min();
        let v_tilde = if u.is_zero() && digit >= Nat::from(2u32) && &digit < min { digit - 2u32 } else { digit };
        let omega_term = if v_tilde.is_zero() { Ordinal::Zero } else { omega_pow(&self.o_v(v, &v_tilde)?)? };
        let z = ZetaParts { alpha, beta, v_tilde, omega_term, n_star };
        self.zeta.insert(n.clone(), z.clone());
        Ok(z)
    }

    /// The greatest candidate is the top `S(d) − d` of some segment `[d, S(d))` below `b`,
    /// since `o` and same-base `α` are monotone.
    fn n_star_v(&mut self, v: &BaseView, b: &Nat, alpha: &Ordinal) -> Res<Option<Nat>> {
        let target = mco(alpha);
        for w in segments_below(v, b).rev() {
            let (d, next) = (&w[0], &w[1]);
            if next < &(d * 3u32) {
                continue;
            }
            let top = next - d;
            if self.o_v(v, &top)? <= target {
                break;
            }
            if self.alpha_v(v, d, &top)? >= *alpha {
                return Ok(Some(top));
            }
        }
        Ok(None)
    }
}

fn critical_non_base(v: &BaseView, n: &Nat) -> Res<Nat> {
    let b = v.base_of(n)?.clone();
    if n <= &b || !n.is_multiple_of(&b) {
        return Err(Error::Invalid(format!("{n} is not a critical non-base")).into());
    }
    Ok(b)
}

/// Consecutive base pairs `[d, S(d)]` with `S(d) ≤ b`.
fn segments_below<'a>(v: &BaseView<'a>, b: &Nat) -> std::slice::Windows<'a, Nat> {
    let bases = v.bases();
    let k = bases.binary_search(b).expect("b is a base");
    bases[..=k].windows(2)
}
