//! A small recursive-descent parser and evaluator for complex expressions
//! in one variable `z`, so the command line can accept user functions
//! without recompilation.
//!
//! Grammar (usual precedence, `^` binds tightest and is right-associative,
//! then unary minus, then `* /`, then `+ -`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | number 'i' | 'z' | 'i' | 'pi' | 'e'
//!         | func '(' expr ')' | '(' expr ')'
//! func   := exp | log | sin | cos | tan | sqrt
//! ```
//!
//! `log` and `sqrt` use principal branches with the cut along the negative
//! real axis; `sqrt(-1)` evaluates to `i` (the limit from above the cut).

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, v: Complex64) -> Complex64 {
        match self {
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tan => v.tan(),
            Func::Sqrt => v.sqrt(),
        }
    }
}

/// Abstract syntax tree over complex literals, the variable `z`, the four
/// arithmetic operators, powers, and a fixed set of functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(Complex64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates the expression at `z`. Non-finite intermediate values
    /// propagate; there are no evaluation errors.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        eval_expr(self, z)
    }
}

/// Evaluates `e` at `z` with principal branches for `log` and `sqrt`.
pub fn eval_expr(e: &Expr, z: Complex64) -> Complex64 {
    match e {
        Expr::Literal(v) => *v,
        Expr::Var => z,
        Expr::Neg(a) => -eval_expr(a, z),
        Expr::Add(a, b) => eval_expr(a, z) + eval_expr(b, z),
        Expr::Sub(a, b) => eval_expr(a, z) - eval_expr(b, z),
        Expr::Mul(a, b) => eval_expr(a, z) * eval_expr(b, z),
        Expr::Div(a, b) => eval_expr(a, z) / eval_expr(b, z),
        Expr::Pow(a, b) => {
            let base = eval_expr(a, z);
            // integer exponents avoid the exp/log round trip
            if let Expr::Literal(v) = **b {
                if v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() <= i32::MAX as f64 {
                    return base.powi(v.re as i32);
                }
            }
            if let Expr::Neg(inner) = &**b {
                if let Expr::Literal(v) = **inner {
                    if v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() <= i32::MAX as f64 {
                        return base.powi(-(v.re as i32));
                    }
                }
            }
            base.powc(eval_expr(b, z))
        }
        Expr::Call(f, a) => f.apply(eval_expr(a, z)),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parses an expression; the whole input must be consumed.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(expr)
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
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

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            // right-associative; the exponent may carry its own sign
            let exponent = self.unary()?;
            Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            _ => Err(self.err("expected a number, identifier, or `(`")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent part: e/E followed by optional sign and digits
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mut probe = self.pos + 1;
            if probe < self.src.len() && (self.src[probe] == b'+' || self.src[probe] == b'-') {
                probe += 1;
            }
            if probe < self.src.len() && self.src[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("invalid number `{text}`"),
        })?;
        // a trailing `i` makes the literal imaginary
        if self.pos < self.src.len() && self.src[self.pos] == b'i' {
            let after = self.src.get(self.pos + 1).copied();
            let is_ident = after.is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_');
            if !is_ident {
                self.pos += 1;
                return Ok(Expr::Literal(Complex64::new(0.0, value)));
            }
        }
        Ok(Expr::Literal(Complex64::new(value, 0.0)))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        match name {
            "z" => Ok(Expr::Var),
            "i" => Ok(Expr::Literal(Complex64::new(0.0, 1.0))),
            "pi" => Ok(Expr::Literal(Complex64::new(std::f64::consts::PI, 0.0))),
            "e" => Ok(Expr::Literal(Complex64::new(std::f64::consts::E, 0.0))),
            _ => {
                if let Some(func) = Func::from_name(name) {
                    if !self.eat(b'(') {
                        return Err(self.err("expected `(` after function name"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    Ok(Expr::Call(func, Box::new(arg)))
                } else {
                    Err(ParseError::UnknownIdentifier {
                        name: name.to_string(),
                        offset: start,
                    })
                }
            }
        }
    }
}

/// Canonical fully-parenthesized printer; `parse(print(e)) == e`.
impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Literal(v) => {
                if v.im == 0.0 {
                    write!(f, "{}", v.re)
                } else if v.re == 0.0 {
                    write!(f, "{}i", v.im)
                } else {
                    write!(f, "({}+{}i)", v.re, v.im)
                }
            }
            Expr::Var => write!(f, "z"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
