//! The relations language: one `name: lhs = rhs` per line.
//!
//! ```text
//! relation := IDENT ":" expr "=" expr
//! expr     := term (("+"|"-") term)*
//! term     := factor ("*" factor)*
//! factor   := "-" factor | base ("^" INT)?
//! base     := IDENT | NUMBER | "(" expr ")" | comm(e,e) | acomm(e,e) | gbr(e,e)
//!           | qnum(e) | qbin(INT,INT) | Qpow(SIGNED_RATIONAL)
//! ```
//!
//! `#` starts a comment. Complex literals are written `a+bi` without spaces.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: i64,
    pub den: u64,
}

impl Rational {
    pub fn integer(num: i64) -> Self {
        Rational { num, den: 1 }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Symbol(String),
    Number(Complex64),
    /// `Q^c`
    Qpow(Rational),
    Qnum(Box<Expr>),
    Qbin(u32, u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Comm(Box<Expr>, Box<Expr>),
    Acomm(Box<Expr>, Box<Expr>),
    Gbr(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn sym(name: impl Into<String>) -> Expr {
        Expr::Symbol(name.into())
    }

    pub fn num(x: f64) -> Expr {
        Expr::Number(Complex64::new(x, 0.0))
    }

    /// Symbols referenced anywhere in the expression, in first-seen order.
    pub fn symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Symbol(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Number(_) | Expr::Qpow(_) | Expr::Qbin(..) => {}
            Expr::Qnum(a) | Expr::Neg(a) | Expr::Pow(a, _) => a.symbols(out),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Comm(a, b)
            | Expr::Acomm(a, b)
            | Expr::Gbr(a, b) => {
                a.symbols(out);
                b.symbols(out);
            }
        }
    }

    /// Number of nodes that depend on the deformation parameter.
    pub fn q_nodes(&self) -> usize {
        match self {
            Expr::Qpow(_) | Expr::Qbin(..) => 1,
            Expr::Qnum(a) => 1 + a.q_nodes(),
            Expr::Symbol(_) | Expr::Number(_) => 0,
            Expr::Neg(a) | Expr::Pow(a, _) => a.q_nodes(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Comm(a, b)
            | Expr::Acomm(a, b)
            | Expr::Gbr(a, b) => a.q_nodes() + b.q_nodes(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Uniform interior margin; `None` derives per-mode margins from the
    /// generators.
    pub margin: Option<usize>,
}

impl Relation {
    pub fn new(name: impl Into<String>, lhs: Expr, rhs: Expr) -> Self {
        Relation {
            name: name.into(),
            lhs,
            rhs,
            margin: None,
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.lhs.symbols(&mut out);
        self.rhs.symbols(&mut out);
        out
    }

    pub fn q_nodes(&self) -> usize {
        self.lhs.q_nodes() + self.rhs.q_nodes()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)
    }
}

// Printing precedence: 0 sum, 1 product, 2 factor, 3 base.
fn write_expr(e: &Expr, ctx: u8, out: &mut String) {
    let (prec, body) = match e {
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let mut s = String::new();
            write_expr(a, 0, &mut s);
            s.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(b, 1, &mut s);
            (0, s)
        }
        Expr::Mul(a, b) => {
            let mut s = String::new();
            write_expr(a, 1, &mut s);
            s.push('*');
            write_expr(b, 2, &mut s);
            (1, s)
        }
        Expr::Neg(a) => {
            let mut s = String::from("-");
            write_expr(a, 2, &mut s);
            (2, s)
        }
        Expr::Pow(a, n) => {
            let mut s = String::new();
            write_expr(a, 3, &mut s);
            s.push_str(&format!("^{n}"));
            (2, s)
        }
        Expr::Number(z) => number_literal(*z),
        Expr::Symbol(s) => (3, s.clone()),
        Expr::Qpow(c) => (3, format!("Qpow({c})")),
        Expr::Qbin(n, t) => (3, format!("qbin({n},{t})")),
        Expr::Qnum(a) => {
            let mut s = String::from("qnum(");
            write_expr(a, 0, &mut s);
            s.push(')');
            (3, s)
        }
        Expr::Comm(a, b) | Expr::Acomm(a, b) | Expr::Gbr(a, b) => {
            let head = match e {
                Expr::Comm(..) => "comm(",
                Expr::Acomm(..) => "acomm(",
                _ => "gbr(",
            };
            let mut s = String::from(head);
            write_expr(a, 0, &mut s);
            s.push_str(", ");
            write_expr(b, 0, &mut s);
            s.push(')');
            (3, s)
        }
    };
    if prec < ctx {
        out.push('(');
        out.push_str(&body);
        out.push(')');
    } else {
        out.push_str(&body);
    }
}

fn number_literal(z: Complex64) -> (u8, String) {
    // adding 0.0 turns -0.0 into 0.0
    let (re, im) = (z.re + 0.0, z.im + 0.0);
    if re < 0.0 {
        // not expressible as a literal; printed as a negation
        let (_, inner) = number_literal(-z);
        return (2, format!("-{inner}"));
    }
    let s = if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 && im > 0.0 {
        format!("{im}i")
    } else if im > 0.0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}-{}i", -im)
    };
    (3, s)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Renders relations one per line.
pub fn print_relations(rels: &[Relation]) -> String {
    rels.iter().map(|r| format!("{r}\n")).collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number { text: String, value: Complex64 },
    LParen,
    RParen,
    Comma,
    Colon,
    Eq,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number { text, .. } => format!("number `{text}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::End => "end of line".into(),
        }
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn peek_char(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn syntax(&self, column: usize, expected: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column,
            expected: expected.into(),
        }
    }

    /// Length of a decimal starting at `start`, or 0.
    fn decimal_len(&self, start: usize) -> usize {
        let c = &self.chars;
        let mut i = start;
        while i < c.len() && c[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return 0;
        }
        if i + 1 < c.len() && c[i] == '.' && c[i + 1].is_ascii_digit() {
            i += 1;
            while i < c.len() && c[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i < c.len() && (c[i] == 'e' || c[i] == 'E') {
            let mut j = i + 1;
            if j < c.len() && (c[j] == '+' || c[j] == '-') {
                j += 1;
            }
            let digits = j;
            while j < c.len() && c[j].is_ascii_digit() {
                j += 1;
            }
            if j > digits && (j >= c.len() || !is_ident_char(c[j])) {
                i = j;
            }
        }
        i - start
    }

    fn imaginary_unit_at(&self, i: usize) -> bool {
        self.chars.get(i) == Some(&'i') && self.chars.get(i + 1).is_none_or(|c| !is_ident_char(*c))
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        loop {
            while self.peek_char(0).is_some_and(char::is_whitespace) {
                self.pos += 1;
            }
            let column = self.pos + 1;
            let Some(c) = self.peek_char(0) else {
                out.push((Tok::End, column));
                return Ok(out);
            };
            let simple = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                '=' => Some(Tok::Eq),
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '/' => Some(Tok::Slash),
                _ => None,
            };
            if let Some(t) = simple {
                self.pos += 1;
                out.push((t, column));
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = self.pos;
                while self.peek_char(0).is_some_and(is_ident_char) {
                    self.pos += 1;
                }
                out.push((Tok::Ident(self.chars[start..self.pos].iter().collect()), column));
                continue;
            }
            if c.is_ascii_digit() {
                out.push((self.number()?, column));
                continue;
            }
            return Err(self.syntax(column, format!("a token, found `{c}`")));
        }
    }

    fn number(&mut self) -> Result<Tok> {
        let start = self.pos;
        let len = self.decimal_len(start);
        let parse = |s: &[char]| -> f64 {
            s.iter()
                .collect::<String>()
                .parse()
                .expect("decimal_len only accepts valid decimals")
        };
        let real = parse(&self.chars[start..start + len]);
        let mut end = start + len;
        let mut value = Complex64::new(real, 0.0);
        if self.imaginary_unit_at(end) {
            value = Complex64::new(0.0, real);
            end += 1;
        } else if matches!(self.chars.get(end), Some('+') | Some('-')) {
            let im_len = self.decimal_len(end + 1);
            if im_len > 0 && self.imaginary_unit_at(end + 1 + im_len) {
                let im = parse(&self.chars[end + 1..end + 1 + im_len]);
                let sign = if self.chars[end] == '-' { -1.0 } else { 1.0 };
                value = Complex64::new(real, sign * im);
                end += 2 + im_len;
            }
        }
        if self.chars.get(end).is_some_and(|c| is_ident_char(*c)) {
            return Err(self.syntax(end + 1, "an operator after the number"));
        }
        self.pos = end;
        Ok(Tok::Number {
            text: self.chars[start..end].iter().collect(),
            value,
        })
    }
}

const FUNCTIONS: [&str; 6] = ["comm", "acomm", "gbr", "qnum", "qbin", "Qpow"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            line: self.line,
            column: self.column(),
            expected: format!("{expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn relation(&mut self) -> Result<Relation> {
        let name = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                s
            }
            _ => return self.fail("a relation name"),
        };
        self.expect(Tok::Colon)?;
        let lhs = self.expr()?;
        self.expect(Tok::Eq)?;
        let rhs = self.expr()?;
        if *self.peek() != Tok::End {
            return self.fail("`+`, `-`, `*` or end of line");
        }
        Ok(Relation::new(name, lhs, rhs))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.unsigned("an integer exponent")?;
            let n = u32::try_from(n).or_else(|_| self.fail("a smaller exponent"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn unsigned(&mut self, what: &str) -> Result<u64> {
        if let Tok::Number { text, .. } = self.peek() {
            if let Ok(v) = text.parse::<u64>() {
                self.bump();
                return Ok(v);
            }
        }
        self.fail(what)
    }

    fn base(&mut self) -> Result<Expr> {
        let column = self.column();
        match self.peek().clone() {
            Tok::Number { value, .. } => {
                self.bump();
                Ok(Expr::Number(value))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::Symbol(name));
                }
                if !FUNCTIONS.contains(&name.as_str()) {
                    return Err(Error::UnknownFunction {
                        name,
                        line: self.line,
                        column,
                    });
                }
                self.bump();
                let out = match name.as_str() {
                    "comm" | "acomm" | "gbr" => {
                        let a = Box::new(self.expr()?);
                        self.expect(Tok::Comma)?;
                        let b = Box::new(self.expr()?);
                        match name.as_str() {
                            "comm" => Expr::Comm(a, b),
                            "acomm" => Expr::Acomm(a, b),
                            _ => Expr::Gbr(a, b),
                        }
                    }
                    "qnum" => Expr::Qnum(Box::new(self.expr()?)),
                    "qbin" => {
                        let n = self.unsigned("an integer")?;
                        self.expect(Tok::Comma)?;
                        let t = self.unsigned("an integer")?;
                        let n = u32::try_from(n).or_else(|_| self.fail("a smaller integer"))?;
                        let t = u32::try_from(t).or_else(|_| self.fail("a smaller integer"))?;
                        Expr::Qbin(n, t)
                    }
                    _ => {
                        let negative = *self.peek() == Tok::Minus;
                        if negative {
                            self.bump();
                        }
                        let num = self.unsigned("a signed rational exponent")?;
                        let den = if *self.peek() == Tok::Slash {
                            self.bump();
                            let d = self.unsigned("a denominator")?;
                            if d == 0 {
                                return self.fail("a nonzero denominator");
                            }
                            d
                        } else {
                            1
                        };
                        let num = i64::try_from(num).or_else(|_| self.fail("a smaller numerator"))?;
                        Expr::Qpow(Rational {
                            num: if negative { -num } else { num },
                            den,
                        })
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(out)
            }
            _ => self.fail("an operand"),
        }
    }
}

/// Parses a single relation written on one line.
pub fn parse_relation(line: &str, line_no: usize) -> Result<Relation> {
    let toks = Lexer::new(line, line_no).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        line: line_no,
    };
    p.relation()
}

/// Parses a relations file. Blank lines and `#` comments are skipped.
pub fn parse_relations(text: &str) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_relation(line, i + 1)?);
    }
    Ok(out)
}

/// Parses a standalone expression (used by tests and tooling).
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = Lexer::new(text, 1).tokens()?;
    let mut p = Parser { toks, pos: 0, line: 1 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("end of expression");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn comm_and_qnum() {
        let r = parse_relation("r1: comm(E1,F1) = qnum(H1)", 1).unwrap();
        assert_eq!(r.name, "r1");
        assert_eq!(r.lhs, Expr::Comm(b(Expr::sym("E1")), b(Expr::sym("F1"))));
        assert_eq!(r.rhs, Expr::Qnum(b(Expr::sym("H1"))));
    }

    #[test]
    fn serre_has_three_terms() {
        let r = parse_relation("s1: E1^2*E2 - qbin(2,1)*E1*E2*E1 + E2*E1^2 = 0", 1).unwrap();
        fn terms(e: &Expr) -> usize {
            match e {
                Expr::Add(a, _) | Expr::Sub(a, _) => terms(a) + 1,
                _ => 1,
            }
        }
        assert_eq!(terms(&r.lhs), 3);
        assert_eq!(r.rhs, Expr::num(0.0));
        assert_eq!(r.symbols(), vec!["E1".to_string(), "E2".to_string()]);
    }

    #[test]
    fn unclosed_paren_is_located() {
        match parse_relation("bad: comm(E1", 3) {
            Err(Error::Syntax { line, column, expected }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 13);
                assert!(expected.contains("`,`"), "{expected}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_relation("x: comm(E1, F1 = 0", 1),
            Err(Error::Syntax { column: 16, .. })
        ));
    }

    #[test]
    fn unknown_function() {
        assert!(matches!(
            parse_relation("x: foo(E1) = 0", 2),
            Err(Error::UnknownFunction { ref name, line: 2, column: 4 }) if name == "foo"
        ));
    }

    #[test]
    fn literals() {
        assert_eq!(parse_expr("1+2i").unwrap(), Expr::Number(Complex64::new(1.0, 2.0)));
        assert_eq!(parse_expr("0.5-0.25i").unwrap(), Expr::Number(Complex64::new(0.5, -0.25)));
        assert_eq!(parse_expr("3i").unwrap(), Expr::Number(Complex64::new(0.0, 3.0)));
        assert_eq!(parse_expr("1e-3").unwrap(), Expr::num(1e-3));
        // `2-3*x` is a subtraction, not a complex literal
        assert_eq!(
            parse_expr("2-3*x").unwrap(),
            Expr::Sub(b(Expr::num(2.0)), b(Expr::Mul(b(Expr::num(3.0)), b(Expr::sym("x")))))
        );
        assert_eq!(
            parse_expr("2 + 3i").unwrap(),
            Expr::Add(b(Expr::num(2.0)), b(Expr::Number(Complex64::new(0.0, 3.0))))
        );
        assert!(parse_expr("2x").is_err());
        assert_eq!(parse_expr("Qpow(-3/2)").unwrap(), Expr::Qpow(Rational { num: -3, den: 2 }));
        assert!(parse_expr("Qpow(1/0)").is_err());
    }

    #[test]
    fn unary_minus_and_powers() {
        assert_eq!(
            parse_expr("-X1^2").unwrap(),
            Expr::Neg(b(Expr::Pow(b(Expr::sym("X1")), 2)))
        );
        assert_eq!(
            parse_expr("a*-2*b").unwrap(),
            Expr::Mul(b(Expr::Mul(b(Expr::sym("a")), b(Expr::Neg(b(Expr::num(2.0)))))), b(Expr::sym("b")))
        );
        assert!(parse_expr("a^2^3").is_err());
        assert!(parse_expr("a^-1").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nr1: K1*Kinv1 = 1 # inverse\n  \nr2: comm(H1,H1) = 0\n";
        let rels = parse_relations(text).unwrap();
        assert_eq!(rels.len(), 2);
        assert!(parse_relations("").unwrap().is_empty());
        match parse_relations("a: x = 1\nb: x = = 1\n") {
            Err(Error::Syntax { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn printing_is_minimal() {
        let r = parse_relation("r: (a + b)*c - (d - e) = -(x^2)*y", 1).unwrap();
        assert_eq!(r.to_string(), "r: (a + b)*c - (d - e) = -x^2*y");
        let r = parse_relation("r: a*(b*c) = (a*b)*c", 1).unwrap();
        assert_eq!(r.to_string(), "r: a*(b*c) = a*b*c");
    }

    fn leaf() -> impl Strategy<Value = Expr> {
        prop_oneof![
            "[A-Za-z][A-Za-z0-9_]{0,3}"
                .prop_filter("function names", |s| !FUNCTIONS.contains(&s.as_str()))
                .prop_map(Expr::Symbol),
            (0u32..1000, 0u32..4).prop_map(|(m, e)| Expr::num(f64::from(m) / 10f64.powi(e as i32))),
            (0u32..50, 1u32..50, 0u32..3).prop_map(|(a, b, kind)| match kind {
                0 => Expr::Number(Complex64::new(f64::from(a) / 4.0, f64::from(b) / 8.0)),
                1 => Expr::Number(Complex64::new(f64::from(a) / 4.0, -f64::from(b) / 8.0)),
                _ => Expr::Number(Complex64::new(0.0, f64::from(b))),
            }),
            (-6i64..7, 1u64..4).prop_map(|(num, den)| Expr::Qpow(Rational { num, den })),
            (0u32..6, 0u32..6).prop_map(|(n, t)| Expr::Qbin(n.max(t), t.min(n))),
        ]
    }

    fn expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(b(a))),
                inner.clone().prop_map(|a| Expr::Qnum(b(a))),
                (inner.clone(), 1u32..4).prop_map(|(a, n)| Expr::Pow(b(a), n)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Add(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Sub(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Mul(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Comm(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Acomm(b(x), b(y))),
                (inner.clone(), inner).prop_map(|(x, y)| Expr::Gbr(b(x), b(y))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(lhs in expr(), rhs in expr(), name in "[a-z][a-z0-9_]{0,6}") {
            let rel = Relation::new(name, lhs, rhs);
            let text = rel.to_string();
            let back = parse_relation(&text, 1).unwrap();
            prop_assert_eq!(&back, &rel, "{}", text);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
