//! Expressions in one real variable `x`.
//!
//! The grammar is closed on purpose: decimal literals, `x`, `+ - * / ^`,
//! parentheses and the primitives `exp`, `sin`, `cos`. Division is accepted
//! only by an `x`-free, nonzero denominator and `^` only by an `x`-free
//! non-negative integer exponent, so every expression that parses is smooth
//! on `[0, 1]` and can be differentiated exactly.
//!
//! Precedence, tightest first: `^` (right associative), unary `-`, `* /`,
//! `+ -`. A unary minus written directly in front of a numeric literal that
//! is not itself raised to a power folds into a negative constant, which is
//! what lets [`Expr::to_text`] round-trip negative constants.

use std::fmt;

use thiserror::Error;

/// Elementary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Exp,
    Sin,
    Cos,
}

impl Primitive {
    pub fn name(self) -> &'static str {
        match self {
            Primitive::Exp => "exp",
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Primitive::Exp),
            "sin" => Some(Primitive::Sin),
            "cos" => Some(Primitive::Cos),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Primitive::Exp => v.exp(),
            Primitive::Sin => v.sin(),
            Primitive::Cos => v.cos(),
        }
    }
}

/// Abstract syntax tree of a real function of `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Variable,
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, u32),
    Negate(Box<Expr>),
    Apply(Primitive, Box<Expr>),
}

/// Parse failures. Positions are 0-based character offsets into the source.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("division by zero at position {position}")]
    DivisionByZero { position: usize },
    #[error(
        "denominator at position {position} depends on x; only constant denominators are allowed"
    )]
    NonConstantDenominator { position: usize },
    #[error("exponent at position {position} is not a non-negative integer constant")]
    NonIntegerExponent { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownIdentifier { position, .. }
            | ParseError::DivisionByZero { position }
            | ParseError::NonConstantDenominator { position }
            | ParseError::NonIntegerExponent { position } => *position,
        }
    }
}

// Constructors used by both the parser and the differentiator.
impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Constant(c)
    }

    pub fn var() -> Self {
        Expr::Variable
    }

    pub fn sum(a: Expr, b: Expr) -> Self {
        Expr::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Expr, b: Expr) -> Self {
        Expr::Product(Box::new(a), Box::new(b))
    }

    pub fn power(base: Expr, exponent: u32) -> Self {
        Expr::Power(Box::new(base), exponent)
    }

    pub fn negate(a: Expr) -> Self {
        Expr::Negate(Box::new(a))
    }

    pub fn apply(p: Primitive, a: Expr) -> Self {
        Expr::Apply(p, Box::new(a))
    }

    /// True when the tree mentions `x` nowhere.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Constant(_) => true,
            Expr::Variable => false,
            Expr::Sum(a, b) | Expr::Product(a, b) => a.is_constant() && b.is_constant(),
            Expr::Power(a, _) | Expr::Negate(a) | Expr::Apply(_, a) => a.is_constant(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Variable => 1,
            Expr::Sum(a, b) | Expr::Product(a, b) => 1 + a.size() + b.size(),
            Expr::Power(a, _) | Expr::Negate(a) | Expr::Apply(_, a) => 1 + a.size(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Constant(c) => *c,
            Expr::Variable => x,
            Expr::Sum(a, b) => a.eval(x) + b.eval(x),
            Expr::Product(a, b) => a.eval(x) * b.eval(x),
            Expr::Power(a, n) => powu(a.eval(x), *n),
            Expr::Negate(a) => -a.eval(x),
            Expr::Apply(p, a) => p.apply(a.eval(x)),
        }
    }

    /// Exact derivative by the sum, product, power and chain rules.
    ///
    /// Only zero and one factors are folded away; no other simplification
    /// is attempted.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Constant(_) => Expr::Constant(0.0),
            Expr::Variable => Expr::Constant(1.0),
            Expr::Sum(a, b) => add(a.differentiate(), b.differentiate()),
            Expr::Product(a, b) => add(
                mul(a.differentiate(), (**b).clone()),
                mul((**a).clone(), b.differentiate()),
            ),
            Expr::Power(_, 0) => Expr::Constant(0.0),
            Expr::Power(base, n) => {
                let reduced = if *n == 1 {
                    Expr::Constant(1.0)
                } else {
                    Expr::power((**base).clone(), n - 1)
                };
                mul(
                    mul(Expr::Constant(f64::from(*n)), reduced),
                    base.differentiate(),
                )
            }
            Expr::Negate(a) => match a.differentiate() {
                Expr::Constant(0.0) => Expr::Constant(0.0),
                d => Expr::negate(d),
            },
            Expr::Apply(p, a) => {
                let inner = a.differentiate();
                let outer = match p {
                    Primitive::Exp => self.clone(),
                    Primitive::Sin => Expr::apply(Primitive::Cos, (**a).clone()),
                    Primitive::Cos => Expr::negate(Expr::apply(Primitive::Sin, (**a).clone())),
                };
                mul(outer, inner)
            }
        }
    }

    /// Fully parenthesized text that [`parse`] maps back to the same tree.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out);
        out
    }

    fn write_text(&self, out: &mut String) {
        match self {
            Expr::Constant(c) => {
                if c.is_sign_negative() {
                    out.push_str("(-");
                    out.push_str(&format!("{}", c.abs()));
                    out.push(')');
                } else {
                    out.push_str(&format!("{c}"));
                }
            }
            Expr::Variable => out.push('x'),
            Expr::Sum(a, b) | Expr::Product(a, b) => {
                let op = if matches!(self, Expr::Sum(..)) {
                    '+'
                } else {
                    '*'
                };
                out.push('(');
                a.write_text(out);
                out.push(op);
                b.write_text(out);
                out.push(')');
            }
            Expr::Power(a, n) => {
                out.push('(');
                a.write_text(out);
                out.push('^');
                out.push_str(&n.to_string());
                out.push(')');
            }
            Expr::Negate(a) => {
                // A bare literal after `-` would fold into a negative constant.
                if matches!(**a, Expr::Constant(_)) {
                    out.push_str("(-(");
                    a.write_text(out);
                    out.push_str("))");
                } else {
                    out.push_str("(-");
                    a.write_text(out);
                    out.push(')');
                }
            }
            Expr::Apply(p, a) => {
                out.push_str(p.name());
                out.push('(');
                a.write_text(out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

fn powu(base: f64, n: u32) -> f64 {
    match i32::try_from(n) {
        Ok(n) => base.powi(n),
        Err(_) => base.powf(f64::from(n)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Constant(c), _) if *c == 0.0 => b,
        (_, Expr::Constant(c)) if *c == 0.0 => a,
        _ => Expr::sum(a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Constant(c), _) | (_, Expr::Constant(c)) if *c == 0.0 => Expr::Constant(0.0),
        (Expr::Constant(c), _) if *c == 1.0 => b,
        (_, Expr::Constant(c)) if *c == 1.0 => a,
        _ => Expr::product(a, b),
    }
}

/// Parse `source` into an [`Expr`].
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: source.chars().count(),
    };
    let expr = parser.additive()?;
    match parser.peek() {
        None => Ok(expr),
        Some(tok) => Err(ParseError::Syntax {
            position: tok.position,
            message: format!("unexpected {}", tok.kind.describe()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(v) => format!("number {v}"),
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    position: usize,
}

fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                let len = scan_number(&chars[i..]);
                if len == 0 {
                    return Err(ParseError::Syntax {
                        position: start,
                        message: "malformed number".into(),
                    });
                }
                let text: String = chars[i..i + len].iter().collect();
                i += len;
                let value = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    position: start,
                });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let name: String = chars[i..j].iter().collect();
                i = j;
                tokens.push(Token {
                    kind: TokenKind::Ident(name),
                    position: start,
                });
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        tokens.push(Token {
            kind,
            position: start,
        });
        i += 1;
    }
    Ok(tokens)
}

/// Length of the decimal literal at the start of `chars`: digits with an
/// optional fraction and an optional `e`/`E` exponent. Returns 0 if there is
/// no digit in the mantissa.
fn scan_number(chars: &[char]) -> usize {
    let mut i = 0;
    let mut digits = 0;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
        digits += 1;
    }
    if i < chars.len() && chars[i] == '.' {
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
            digits += 1;
        }
    }
    if digits == 0 {
        return 0;
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        let exp_start = j;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    i
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn position(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind(0) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", kind.describe())))
        }
    }

    fn unexpected(&self, message: &str) -> ParseError {
        let found = match self.peek() {
            Some(tok) => tok.kind.describe(),
            None => "end of input".into(),
        };
        ParseError::Syntax {
            position: self.position(),
            message: format!("{message}, found {found}"),
        }
    }

    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.multiplicative()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                let rhs = self.multiplicative()?;
                lhs = Expr::sum(lhs, rhs);
            } else if self.eat(&TokenKind::Minus) {
                let rhs = self.multiplicative()?;
                lhs = Expr::sum(lhs, Expr::negate(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                let rhs = self.unary()?;
                lhs = Expr::product(lhs, rhs);
            } else if self.peek_kind(0) == Some(&TokenKind::Slash) {
                self.pos += 1;
                let position = self.position();
                let denominator = self.unary()?;
                if !denominator.is_constant() {
                    return Err(ParseError::NonConstantDenominator { position });
                }
                let value = denominator.eval(0.0);
                let reciprocal = 1.0 / value;
                if value == 0.0 || !reciprocal.is_finite() {
                    return Err(ParseError::DivisionByZero { position });
                }
                lhs = Expr::product(lhs, Expr::Constant(reciprocal));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_kind(0) == Some(&TokenKind::Minus) {
            if let Some(&TokenKind::Number(v)) = self.peek_kind(1) {
                if self.peek_kind(2) != Some(&TokenKind::Caret) {
                    self.pos += 2;
                    return Ok(Expr::Constant(-v));
                }
            }
            self.pos += 1;
            return Ok(Expr::negate(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let position = self.position();
        // Right associative: the exponent may itself contain `^`.
        let exponent = self.unary()?;
        if !exponent.is_constant() {
            return Err(ParseError::NonIntegerExponent { position });
        }
        let value = exponent.eval(0.0);
        if !(value >= 0.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
            return Err(ParseError::NonIntegerExponent { position });
        }
        Ok(Expr::power(base, value as u32))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected("expected an operand"));
        };
        match tok.kind {
            TokenKind::Number(v) => {
                self.pos += 1;
                Ok(Expr::Constant(v))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.additive()?;
                self.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            TokenKind::Ident(ref name) if name == "x" => {
                self.pos += 1;
                Ok(Expr::Variable)
            }
            TokenKind::Ident(ref name) => {
                let Some(p) = Primitive::from_name(name) else {
                    return Err(ParseError::UnknownIdentifier {
                        position: tok.position,
                        name: name.clone(),
                    });
                };
                self.pos += 1;
                self.expect(&TokenKind::LParen)?;
                let arg = self.additive()?;
                self.expect(&TokenKind::RParen)?;
                Ok(Expr::apply(p, arg))
            }
            _ => Err(self.unexpected("expected an operand")),
        }
    }
}
