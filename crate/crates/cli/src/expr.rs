//! Initial-data expressions: sums of scalar multiples of `sin(k)`, `cos(k)`
//! and constants, where `sin(k)` stands for `sin(2πkx)` with integer `k`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | atom
//! atom   := number | 'pi' | 'x'-free call | '(' expr ')'
//! call   := ('sin' | 'cos') '(' expr ')' | 'const' '(' expr ')' | 'sqrt' '(' expr ')'
//! ```
//!
//! Products and quotients need a scalar on at least one side, so every
//! expression stays a trigonometric polynomial.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use hs2_core::PeriodicField;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigPoly {
    pub constant: f64,
    /// `k -> (cos coefficient, sin coefficient)` for `k ≥ 1`.
    pub modes: BTreeMap<u64, (f64, f64)>,
}

impl TrigPoly {
    fn scalar(c: f64) -> Self {
        Self { constant: c, modes: BTreeMap::new() }
    }

    fn as_scalar(&self) -> Option<f64> {
        self.modes.values().all(|&(a, b)| a == 0.0 && b == 0.0).then_some(self.constant)
    }

    fn scale(mut self, s: f64) -> Self {
        self.constant *= s;
        for (a, b) in self.modes.values_mut() {
            *a *= s;
            *b *= s;
        }
        self
    }

    fn add(mut self, other: TrigPoly, sign: f64) -> Self {
        self.constant += sign * other.constant;
        for (k, (a, b)) in other.modes {
            let e = self.modes.entry(k).or_insert((0.0, 0.0));
            e.0 += sign * a;
            e.1 += sign * b;
        }
        self
    }

    pub fn max_mode(&self) -> u64 {
        self.modes
            .iter()
            .filter(|(_, &(a, b))| a != 0.0 || b != 0.0)
            .map(|(&k, _)| k)
            .max()
            .unwrap_or(0)
    }

    /// Samples on an `n`-point grid; modes must satisfy `k < n/2`.
    pub fn to_field(&self, n: usize) -> Result<PeriodicField, String> {
        let k = self.max_mode();
        if 2 * k >= n as u64 {
            return Err(format!("mode {k} is not resolved on a grid of {n} points (need k < {})", n / 2));
        }
        PeriodicField::from_fn(n, |x| {
            self.modes.iter().fold(self.constant, |acc, (&k, &(a, b))| {
                let arg = 2.0 * PI * k as f64 * x;
                acc + a * arg.cos() + b * arg.sin()
            })
        })
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().map_err(|_| format!("bad number '{text}'"))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect::<String>().to_ascii_lowercase()));
        } else if "+-*/()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.next() {
            Some(Token::Op(o)) if o == c => Ok(()),
            other => Err(format!("expected '{c}', found {other:?}")),
        }
    }

    fn expr(&mut self) -> Result<TrigPoly, String> {
        let mut acc = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, if c == '+' { 1.0 } else { -1.0 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<TrigPoly, String> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                match (acc.as_scalar(), rhs.as_scalar()) {
                    (Some(a), _) => rhs.scale(a),
                    (_, Some(b)) => acc.scale(b),
                    _ => return Err("products of non-constant terms are not band-limited sums".into()),
                }
            } else {
                match rhs.as_scalar() {
                    Some(b) if b != 0.0 => acc.scale(1.0 / b),
                    Some(_) => return Err("division by zero".into()),
                    None => return Err("can only divide by a constant".into()),
                }
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<TrigPoly, String> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.scale(-1.0))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn scalar_arg(&mut self, name: &str) -> Result<f64, String> {
        self.expect('(')?;
        let v = self.expr()?;
        self.expect(')')?;
        v.as_scalar().ok_or_else(|| format!("argument of {name} must be a constant"))
    }

    fn atom(&mut self) -> Result<TrigPoly, String> {
        match self.next() {
            Some(Token::Num(v)) => Ok(TrigPoly::scalar(v)),
            Some(Token::Op('(')) => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "pi" => Ok(TrigPoly::scalar(PI)),
                "const" => Ok(TrigPoly::scalar(self.scalar_arg("const")?)),
                "sqrt" => {
                    let v = self.scalar_arg("sqrt")?;
                    if v < 0.0 {
                        return Err("sqrt of a negative number".into());
                    }
                    Ok(TrigPoly::scalar(v.sqrt()))
                }
                "sin" | "cos" => {
                    let k = self.scalar_arg(&name)?;
                    if k.fract() != 0.0 {
                        return Err(format!("{name}({k}): frequency must be an integer multiple of 2 pi"));
                    }
                    let mut p = TrigPoly::default();
                    if k == 0.0 {
                        p.constant = if name == "cos" { 1.0 } else { 0.0 };
                        return Ok(p);
                    }
                    let (ka, sign) = (k.abs() as u64, k.signum());
                    let coeff = if name == "cos" { (1.0, 0.0) } else { (0.0, sign) };
                    p.modes.insert(ka, coeff);
                    Ok(p)
                }
                other => Err(format!("unknown name '{other}'")),
            },
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse(src: &str) -> Result<TrigPoly, String> {
    let mut p = Parser { tokens: tokenize(src)?, pos: 0 };
    if p.tokens.is_empty() {
        return Err("empty expression".into());
    }
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after position {}", p.pos));
    }
    Ok(v)
}

/// Parses `src` and samples it on `n` points.
pub fn field(src: &str, n: usize) -> Result<PeriodicField, String> {
    parse(src).and_then(|p| p.to_field(n)).map_err(|e| format!("in expression '{src}': {e}"))
}
