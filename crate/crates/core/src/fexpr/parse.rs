use crate::error::{Error, Result};

use super::{Expr, Func};

/// Parses an infix expression in the variable `x`.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.expected("an expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.expected("an operator or end of input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    /// Consumes `c` (after whitespace) if it is next.
    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expected(&self, what: &str) -> Error {
        Error::Syntax { offset: self.pos, expected: what.to_string() }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(match self.factor()? {
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::Mul(Box::new(Expr::Const(-1.0)), Box::new(e)),
            });
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let p = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32> {
        let p = if self.eat(b'(') {
            let p = self.integer()?;
            if !self.eat(b')') {
                return Err(self.expected("`)`"));
            }
            p
        } else {
            self.integer()?
        };
        if self.eat(b'^') {
            let q = self.exponent()?;
            let q = u32::try_from(q).map_err(|_| self.expected("a nonnegative exponent"))?;
            return p.checked_pow(q).ok_or_else(|| self.expected("an exponent that fits in 32 bits"));
        }
        Ok(p)
    }

    fn integer(&mut self) -> Result<i32> {
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.expected("an integer exponent"));
        }
        let digits = &self.src[start..self.pos];
        let v: i32 = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            expected: "an exponent that fits in 32 bits".into(),
        })?;
        Ok(if negative { -v } else { v })
    }

    fn base(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.expected("`)`"));
                }
                Ok(e)
            }
            _ => Err(self.expected("a number, `x`, a function call or `(`")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let digits = |p: &mut usize| {
            let s = *p;
            while bytes.get(*p).is_some_and(u8::is_ascii_digit) {
                *p += 1;
            }
            *p - s
        };
        let mut p = self.pos;
        let mut count = digits(&mut p);
        if bytes.get(p) == Some(&b'.') {
            p += 1;
            count += digits(&mut p);
        }
        if count == 0 {
            return Err(self.expected("a digit"));
        }
        if matches!(bytes.get(p), Some(b'e' | b'E')) {
            let mut q = p + 1;
            if matches!(bytes.get(q), Some(b'+' | b'-')) {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        self.pos = p;
        self.src[start..p]
            .parse()
            .map(Expr::Const)
            .map_err(|_| Error::Syntax { offset: start, expected: "a number".into() })
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        match name {
            "x" => return Ok(Expr::Var),
            "pi" => return Ok(Expr::Const(std::f64::consts::PI)),
            _ => {}
        }
        let func = Func::from_name(name)
            .ok_or_else(|| Error::UnknownIdentifier { name: name.to_string(), offset: start })?;
        if !self.eat(b'(') {
            return Err(self.expected("`(` after function name"));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.expected("`)`"));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}
