mod common;

use std::cmp::Ordering;

use common::{countable_ordinal, ordinal};
use goodstein_core::ordinal::{
    add, cofinality, compare, epsilon0, fs, mco, nat_mul, omega_mono, omega_pow, parse, render, sq_fs, Ordinal,
};
use proptest::prelude::*;

/// Ω·α, built part by part.
fn omega_times(a: &Ordinal) -> Ordinal {
    let (head, tail) = a.split_countable();
    let mut out = Ordinal::Zero;
    for p in head.parts() {
        if let Ordinal::OmegaMono { exp, coeff } = p {
            out = add(&out, &omega_mono(&add(&Ordinal::one(), exp), coeff).unwrap());
        }
    }
    if !tail.is_zero() {
        out = add(&out, &omega_mono(&Ordinal::one(), &tail).unwrap());
    }
    out
}

fn countable_limit() -> impl Strategy<Value = Ordinal> {
    countable_ordinal(5).prop_filter("countable limit", |x| x.is_limit())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn compare_is_a_total_order(a in ordinal(5), b in ordinal(5), c in ordinal(5)) {
        let ab = compare(&a, &b);
        prop_assert_eq!(ab, compare(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && compare(&b, &c) != Ordering::Greater {
            prop_assert_ne!(compare(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn render_round_trips(a in ordinal(5)) {
        prop_assert_eq!(parse(&render(&a)).unwrap(), a);
    }

    #[test]
    fn addition_is_associative_and_monotone(a in ordinal(4), b in ordinal(4), c in ordinal(4)) {
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert!(add(&a, &b) >= a);
        prop_assert!(add(&a, &b) >= b);
        if b < c {
            prop_assert!(add(&a, &b) < add(&a, &c));
        }
    }

    #[test]
    fn mco_is_below_the_collapse(a in ordinal(5)) {
        prop_assert!(mco(&a) < Ordinal::theta(a));
    }

    #[test]
    fn collapse_is_monotone_in_the_countable_part(a in ordinal(3), b1 in countable_ordinal(3), b2 in countable_ordinal(3)) {
        prop_assume!(b1 != b2);
        let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
        let w = omega_times(&a);
        prop_assert!(Ordinal::theta(add(&w, &lo)) < Ordinal::theta(add(&w, &hi)));
    }

    #[test]
    fn fundamental_sequences_increase(z in ordinal(5), t1 in countable_ordinal(3), t2 in countable_ordinal(3)) {
        let tau = cofinality(&z);
        prop_assume!(z.is_limit());
        let (eta, theta) = if tau.is_countable() {
            // Finite arguments lie below every countable limit cofinality.
            let k1 = t1.parts().len() as u64 % 5;
            let k2 = k1 + 1 + t2.parts().len() as u64 % 5;
            (Ordinal::nat(k1), Ordinal::nat(k2))
        } else {
            prop_assume!(t1 != t2);
            if t1 < t2 { (t1, t2) } else { (t2, t1) }
        };
        let (a, b) = (fs(&z, &eta), fs(&z, &theta));
        prop_assert!(a < b, "{} [{}] = {} vs [{}] = {}", render(&z), render(&eta), render(&a), render(&theta), render(&b));
        prop_assert!(b < z);
        let bound = if mco(&z) > theta { mco(&z) } else { theta.clone() };
        prop_assert!(mco(&b) <= bound);
        if !z.is_countable() {
            prop_assert!(b == theta || !b.is_countable());
        }
    }

    #[test]
    fn square_sequences_increase_below_their_limit(x in countable_limit(), i in 0u64..6, d in 1u64..=3) {
        let k = (i + d).min(6);
        prop_assume!(i < k);
        let (a, b) = (sq_fs(&x, i), sq_fs(&x, k));
        prop_assert!(a < b, "{} [[{i}]] = {} vs [[{k}]] = {}", render(&x), render(&a), render(&b));
        prop_assert!(b < x);
        if i > 0 && !x.is_finite() {
            prop_assert!(a == Ordinal::nat(i) || !a.is_finite());
        }
    }
}

/// Terms `ω^{k₁}·c₁ + ⋯` with exponents below 4 and coefficients below 3.
fn below_omega_omega() -> Vec<Ordinal> {
    let mut out = vec![Ordinal::Zero];
    for k3 in 0..3u64 {
        for k2 in 0..3u64 {
            for k1 in 0..3u64 {
                for k0 in 0..3u64 {
                    let mut x = Ordinal::Zero;
                    for (e, c) in [(3, k3), (2, k2), (1, k1), (0, k0)] {
                        x = add(&x, &nat_mul(&omega_pow(&Ordinal::nat(e)).unwrap(), c));
                    }
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn omega_powers_below_omega_omega() {
    let xs = below_omega_omega();
    assert_eq!(xs.len(), 81);
    let ws: Vec<Ordinal> = xs.iter().map(|x| omega_pow(x).unwrap()).collect();
    for (x, w) in xs.iter().zip(&ws) {
        assert!(w.is_principal(), "{}", render(x));
        // Below ε₀ the collapse is exactly ω^x.
        assert_eq!(w, &Ordinal::theta(x.clone()));
        let next = omega_pow(&add(x, &Ordinal::one())).unwrap();
        assert!(nat_mul(w, 1000) < next);
    }
    assert!(ws.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn omega_powers_at_epsilon_numbers() {
    let e = epsilon0();
    assert_eq!(omega_pow(&e).unwrap(), e);
    let e1 = add(&e, &Ordinal::one());
    assert_eq!(omega_pow(&e1).unwrap(), Ordinal::theta(e.clone()));
    assert!(omega_pow(&e1).unwrap() > e);
    assert!(omega_pow(&Ordinal::big_omega()).is_err());
}
