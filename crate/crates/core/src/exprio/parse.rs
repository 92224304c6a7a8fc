//! Polynomial expression grammar.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | ident | '(' expr ')'
//! rational := uint ('/' uint)?
//! ```
//!
//! There is no implicit multiplication and there are no function calls.
//! Whitespace is insignificant. The optional leading sign makes the printed
//! form of every polynomial parseable again.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{Poly, Rat, VarList};
use crate::error::{Error, Result};

/// Expression text together with the variables it may mention.
#[derive(Clone, Debug)]
pub struct ExprSource<'a> {
    pub text: &'a str,
    pub declared_vars: &'a VarList,
}

impl ExprSource<'_> {
    pub fn parse(&self) -> Result<Poly> {
        parse_poly(self.text, self.declared_vars)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: start.0,
                column: start.1,
            });
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let from = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[from..i].iter().collect();
            column += i - from;
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("digits only")),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let from = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - from;
            out.push(Token {
                tok: Tok::Ident(chars[from..i].iter().collect()),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        return Err(Error::Syntax {
            line,
            column,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a VarList,
    depth: usize,
}

const MAX_DEPTH: usize = 256;

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, at: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Poly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let at = self.peek().clone();
            return self.error(&at, "expression nested too deeply");
        }
        let negate = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => {
                let e: u32 = n.try_into().or_else(|_| self.error(&t, "exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => self.error(&t, "expected a non-negative integer exponent"),
        }
    }

    fn base(&mut self) -> Result<Poly> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => {
                let mut value = Rat::from_integer(n.clone());
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let d = self.bump();
                    match d.tok {
                        Tok::Int(den) if !den.is_zero() => value /= Rat::from_integer(den),
                        Tok::Int(_) => return self.error(&d, "zero denominator"),
                        _ => return self.error(&d, "expected an integer denominator"),
                    }
                }
                Ok(Poly::constant(self.vars.clone(), value))
            }
            Tok::Ident(name) => match self.vars.index_of(name) {
                Some(i) => Ok(Poly::var_at(self.vars, i)),
                None => self.error(&t, format!("undeclared identifier `{name}`")),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.error(&close, "expected `)`");
                }
                Ok(inner)
            }
            Tok::End => self.error(&t, "unexpected end of input"),
            other => self.error(&t, format!("unexpected `{}`", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => n.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses `text` as a polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &VarList) -> Result<Poly> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        vars,
        depth: 0,
    };
    let p = parser.expr()?;
    let rest = parser.peek().clone();
    if rest.tok != Tok::End {
        return parser.error(&rest, format!("unexpected `{}`", describe(&rest.tok)));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Monomial};

    fn vars(names: &[&str]) -> VarList {
        VarList::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn reads_the_canonical_form() {
        let v = vars(&["a0", "a1", "w1"]);
        let p = parse_poly("3/2*a0^2*w1 - a1", &v).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![2, 0, 1])), rat(3, 2));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 1, 0])), int(-1));
        assert_eq!(p.to_string(), "3/2*a0^2*w1 - a1");
    }

    #[test]
    fn double_caret_points_at_the_second() {
        let v = vars(&["z1"]);
        match parse_poly("z1^^2", &v) {
            Err(Error::Syntax { line: 1, column: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input_with_positions() {
        let v = vars(&["x", "y"]);
        for (text, col) in [
            ("x y", 3),
            ("x/2", 2),
            ("2*", 3),
            ("(x", 3),
            ("x $ y", 3),
            ("2/0", 3),
            ("x^y", 3),
        ] {
            match parse_poly(text, &v) {
                Err(Error::Syntax { column, .. }) => assert_eq!(column, col, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        match parse_poly("x +\n  q", &v) {
            Err(Error::Syntax {
                line: 2,
                column: 3,
                message,
            }) => assert!(message.contains("undeclared")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn signs_and_parentheses() {
        let v = vars(&["x"]);
        assert!(parse_poly("-(x - 1)^2 + -1", &v).is_err());
        assert_eq!(parse_poly("-(x - 1)^2", &v).unwrap().to_string(), "-x^2 + 2*x - 1");
        assert_eq!(parse_poly("(-x)^3", &v).unwrap().to_string(), "-x^3");
        assert_eq!(parse_poly("2/4", &v).unwrap().to_string(), "1/2");
    }
}
