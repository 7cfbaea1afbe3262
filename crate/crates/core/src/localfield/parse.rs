//! Text grammar for elements and polynomials.
//!
//! Elements are sums of terms such as `2*t^-1`, `(w+1)*t^3`, `t`, `-w`.
//! Polynomials additionally allow the indeterminate `T`, e.g. `T^2 - t*T + 3`.
//! Products and parentheses nest freely; whitespace is ignored.

use super::element::{FieldTag, LocalElement};
use super::gf::Gf;
use crate::error::{Error, Result};

type PolyVal = Vec<LocalElement>;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    gf: &'static Gf,
    allow_var: bool,
    _src: &'a str,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn trim(mut p: PolyVal) -> PolyVal {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn padd(a: &PolyVal, b: &PolyVal, gf: &'static Gf, negate: bool) -> PolyVal {
    let n = a.len().max(b.len());
    let zero = LocalElement::zero(gf);
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            if negate {
                x - y
            } else {
                x + y
            }
        })
        .collect();
    trim(out)
}

fn pmul(a: &PolyVal, b: &PolyVal, gf: &'static Gf) -> PolyVal {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![LocalElement::zero(gf); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let neg = self.eat('-');
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(perr(format!("expected integer at offset {start}")));
        }
        let s: String = self.chars[digits_start..self.pos].iter().collect();
        let v: i64 = s
            .parse()
            .map_err(|_| perr(format!("integer overflow: {s}")))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<PolyVal> {
        let mut negate_first = false;
        if self.eat('-') {
            negate_first = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = padd(&Vec::new(), &acc, self.gf, true);
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = padd(&acc, &t, self.gf, false);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = padd(&acc, &t, self.gf, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PolyVal> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = pmul(&acc, &f, self.gf);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolyVal> {
        let gf = self.gf;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(perr("unbalanced parenthesis"));
                }
                if !self.eat('^') {
                    return Ok(v);
                }
                let k = self.integer()?;
                if k < 0 {
                    return Err(perr("negative power of a parenthesized expression"));
                }
                Ok((0..k).fold(vec![LocalElement::one(gf)], |acc, _| pmul(&acc, &v, gf)))
            }
            Some('t') => {
                self.pos += 1;
                let k = if self.eat('^') { self.integer()? } else { 1 };
                Ok(vec![LocalElement::t_pow(gf, k)])
            }
            Some('T') if self.allow_var => {
                self.pos += 1;
                let k = if self.eat('^') { self.integer()? } else { 1 };
                if k < 0 {
                    return Err(perr("negative power of T"));
                }
                let mut v = vec![LocalElement::zero(gf); k as usize];
                v.push(LocalElement::one(gf));
                Ok(v)
            }
            Some('w') => {
                if gf.degree() != 2 {
                    return Err(Error::WrongField("`w` is not available over F".into()));
                }
                self.pos += 1;
                let base = LocalElement::constant(gf, gf.w());
                let k = if self.eat('^') { self.integer()? } else { 1 };
                if k < 0 {
                    return Err(perr("negative power of w"));
                }
                Ok(trim(vec![base.pow(k as u32)]))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(trim(vec![LocalElement::from_int(gf, n)]))
            }
            other => Err(perr(format!(
                "unexpected {:?} at offset {}",
                other, self.pos
            ))),
        }
    }
}

fn run(src: &str, gf: &'static Gf, allow_var: bool) -> Result<PolyVal> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(perr("empty input"));
    }
    let mut p = Parser {
        chars,
        pos: 0,
        gf,
        allow_var,
        _src: src,
    };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(perr(format!("trailing input at offset {}", p.pos)));
    }
    Ok(v)
}

/// Parses an element of `F` (`FieldTag::Base`) or `E` (`FieldTag::Quadratic`) over residue characteristic `p`.
pub fn parse_element(src: &str, p: u32, tag: FieldTag) -> Result<LocalElement> {
    let k = match tag {
        FieldTag::Base => 1,
        FieldTag::Quadratic => 2,
    };
    let gf = Gf::get(p, k)?;
    let v = run(src, gf, false)?;
    Ok(v.into_iter()
        .next()
        .unwrap_or_else(|| LocalElement::zero(gf)))
}

/// Parses a polynomial in `T` and returns its coefficients, constant term first.
pub fn parse_polynomial(src: &str, p: u32, tag: FieldTag) -> Result<Vec<LocalElement>> {
    let k = match tag {
        FieldTag::Base => 1,
        FieldTag::Quadratic => 2,
    };
    let gf = Gf::get(p, k)?;
    run(src, gf, true)
}
