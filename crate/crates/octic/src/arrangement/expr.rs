//! Coefficient expressions over integers, `/`, `s`, `A`, `B`, `+`, `-`, `*` and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{BinForm, FieldDesc, Scalar};
use crate::Form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based column within the expression text.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Sym(char),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    field: FieldDesc,
    src: &'a str,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((Tok::Int(text.parse().expect("digits parse")), off + 1));
        } else if "+-*/()sAB".contains(c) {
            out.push((Tok::Sym(c), off + 1));
            i += 1;
        } else {
            return Err(ExprError {
                column: off + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len() + 1, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn constant(&self, q: BigRational) -> Form {
        BinForm::constant(
            Scalar::rational(q)
                .embed(self.field)
                .expect("rationals embed"),
        )
    }

    fn add(&self, x: Form, y: Form, col: usize) -> Result<Form, ExprError> {
        x.checked_add(&y).map_err(|e| ExprError {
            column: col,
            message: e.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Form, ExprError> {
        let neg = matches!(self.peek(), Some(Tok::Sym('-')));
        if neg {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        while let Some(Tok::Sym(op @ ('+' | '-'))) = self.peek().cloned() {
            let col = self.column();
            self.pos += 1;
            let t = self.term()?;
            acc = self.add(acc, if op == '+' { t } else { -t }, col)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Form, ExprError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Sym('*')) = self.peek() {
            self.pos += 1;
            acc = acc.mul_form(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Form, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of expression");
        };
        self.pos += 1;
        let template = Scalar::zero(self.field);
        match tok {
            Tok::Int(n) => {
                if let Some(Tok::Sym('/')) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            Ok(self.constant(BigRational::new(n, d)))
                        }
                        _ => self.err("expected a nonzero integer denominator"),
                    }
                } else {
                    Ok(self.constant(BigRational::from_integer(n)))
                }
            }
            Tok::Sym('s') => match Scalar::sqrt_d(self.field) {
                Ok(s) => Ok(BinForm::constant(s)),
                Err(_) => {
                    self.pos -= 1;
                    self.err("`s` needs a quadratic field")
                }
            },
            Tok::Sym('A') => Ok(BinForm::var_a(&template)),
            Tok::Sym('B') => Ok(BinForm::var_b(&template)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, `s`, `A`, `B` or `(`")
            }
        }
    }
}

/// Evaluates an expression to a binary form over `field`.
pub fn parse_expr(src: &str, field: FieldDesc) -> Result<Form, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        src,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
