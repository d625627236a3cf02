//! ASCII term syntax.
//!
//! ```text
//! expr    := summand ('+' summand)*
//! summand := 'O' ['^' expo] ['*' primary] | primary
//! expo    := 'O' ['^' expo] | primary
//! primary := NUM | 'w' | 'eps0' | 'th' '(' expr ')' | '(' expr ')'
//! ```
//! `O` is Ω, `w` is ϑ(1), `eps0` is ϑ(Ω); `BH` alone denotes ϑ[ε_{Ω+1}].

use super::{add, mono, ExtOrd, Ordinal, MAX_FINITE};
use crate::error::{Error, Result};

/// Parses a term; `BH` is rejected.
pub fn parse(text: &str) -> Result<Ordinal> {
    match parse_ext(text)? {
        ExtOrd::Ord(x) => Ok(x),
        ExtOrd::Top => Err(Error::Parse { pos: 0, msg: "BH is not an ordinal term here".into() }),
    }
}

/// Parses a term or `BH`.
pub fn parse_ext(text: &str) -> Result<ExtOrd> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let compact: String = chars.iter().map(|&(_, c)| c).collect();
    if compact == "BH" {
        return Ok(ExtOrd::Top);
    }
    let mut p = Parser { s: chars, i: 0, len: text.len() };
    let x = p.expr()?;
    if p.i < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(ExtOrd::Ord(x))
}

struct Parser {
    s: Vec<(usize, char)>,
    i: usize,
    len: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.s.get(self.i).map_or(self.len, |&(p, _)| p)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos(), msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.i).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let n = w.chars().count();
        let ok = self.s.len() >= self.i + n && self.s[self.i..self.i + n].iter().map(|&(_, c)| c).eq(w.chars());
        if ok {
            self.i += n;
        }
        ok
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Ordinal> {
        let mut x = self.summand()?;
        while self.eat('+') {
            let y = self.summand()?;
            x = add(&x, &y);
        }
        Ok(x)
    }

    fn summand(&mut self) -> Result<Ordinal> {
        if self.peek() != Some('O') {
            return self.primary();
        }
        let start = self.pos();
        let e = self.omega_power()?;
        if self.eat('*') {
            let c = self.primary()?;
            if !c.is_countable() {
                return Err(Error::Parse { pos: start, msg: "coefficient must be countable".into() });
            }
            if c.is_zero() {
                return Ok(Ordinal::Zero);
            }
            return Ok(mono(e, c));
        }
        Ok(mono(e, Ordinal::one()))
    }

    /// Parses `O ['^' expo]` and returns the exponent.
    fn omega_power(&mut self) -> Result<Ordinal> {
        self.expect('O')?;
        if self.eat('^') {
            self.expo()
        } else {
            Ok(Ordinal::one())
        }
    }

    fn expo(&mut self) -> Result<Ordinal> {
        if self.peek() == Some('O') {
            let e = self.omega_power()?;
            Ok(mono(e, Ordinal::one()))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.number(),
            Some('(') => {
                self.i += 1;
                let x = self.expr()?;
                self.expect(')')?;
                Ok(x)
            }
            Some('w') => {
                self.i += 1;
                Ok(Ordinal::omega())
            }
            Some('e') if self.eat_word("eps0") => Ok(super::epsilon0()),
            Some('t') if self.eat_word("th(") => {
                let x = self.expr()?;
                self.expect(')')?;
                Ok(Ordinal::theta(x))
            }
            Some('B') if self.eat_word("BH") => Err(self.err("BH is only allowed as a whole term")),
            _ => Err(self.err("expected a term")),
        }
    }

    fn number(&mut self) -> Result<Ordinal> {
        let start = self.pos();
        let mut v: u64 = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = v.saturating_mul(10).saturating_add(c as u64 - '0' as u64);
            self.i += 1;
        }
        if v > MAX_FINITE {
            return Err(Error::Parse { pos: start, msg: format!("literal exceeds {MAX_FINITE}") });
        }
        Ok(Ordinal::nat(v))
    }
}

/// Canonical rendering; `parse(render(x)) == x`.
pub fn render(x: &Ordinal) -> String {
    let ps = x.parts();
    if ps.is_empty() {
        return "0".into();
    }
    let ones = ps.iter().rev().take_while(|p| p.is_one()).count();
    let mut items: Vec<String> = ps[..ps.len() - ones].iter().map(render_part).collect();
    if ones > 0 {
        items.push(ones.to_string());
    }
    items.join(" + ")
}

fn render_part(p: &Ordinal) -> String {
    match p {
        Ordinal::Theta(z) => format!("th({})", render(z)),
        Ordinal::OmegaMono { exp, coeff } => {
            let mut s = String::from("O");
            if !exp.is_one() {
                s.push('^');
                s.push_str(&render_atom(exp, true));
            }
            if !coeff.is_one() {
                s.push('*');
                s.push_str(&render_atom(coeff, false));
            }
            s
        }
        _ => unreachable!("parts are Theta or OmegaMono"),
    }
}

fn render_atom(x: &Ordinal, exponent: bool) -> String {
    let simple = x.is_finite()
        || matches!(x, Ordinal::Theta(_))
        || (exponent && matches!(x, Ordinal::OmegaMono { coeff, .. } if coeff.is_one()));
    if simple {
        render(x)
    } else {
        format!("({})", render(x))
    }
}
