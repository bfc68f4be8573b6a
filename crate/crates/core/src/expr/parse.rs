use num_bigint::BigInt;
use num_rational::BigRational;

use super::ExprError;

/// Surface syntax tree. Products keep their written order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rational(BigRational),
    /// The parameter `q`.
    Q,
    Symbol(String),
    /// Signed summands: `true` marks subtraction.
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|p| p.1).collect();
                out.push((pos, Tok::Num(s.parse().expect("digits"))));
            }
            c if c.is_alphabetic() || c == '∂' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '∂') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|p| p.1).collect();
                out.push((pos, Tok::Ident(s)));
            }
            _ => {
                let t = match c {
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '·' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => {
                        return Err(ExprError::Syntax {
                            pos,
                            msg: format!("unexpected character {c:?}"),
                        })
                    }
                };
                out.push((pos, t));
                i += 1;
            }
        }
    }
    Ok(out)
}

/// Which symbols may carry negative exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Negatives {
    /// Only `q` and the usual denominators (`beta_i`, `alpha_i`, `detq`,
    /// `detqX`, `detqD`, `d`).
    Denominators,
    /// Any symbol; evaluation decides what a negative power means.
    Any,
}

pub fn is_denominator_name(s: &str) -> bool {
    matches!(s, "detq" | "detqX" | "detqD" | "d") || s.starts_with("beta_") || s.starts_with("alpha_")
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    negatives: Negatives,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = Vec::new();
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            neg = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.bump();
        }
        terms.push((neg, self.term()?));
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push((false, self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    factors.push(self.factor()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.bump();
        }
        let v = match self.bump() {
            Some(Tok::Num(n)) => i64::try_from(n).or_else(|_| self.err("exponent too large"))?,
            _ => {
                self.at -= 1;
                return self.err("expected an integer exponent");
            }
        };
        if paren && self.bump() != Some(Tok::RParen) {
            self.at -= 1;
            return self.err("expected ')'");
        }
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let atom = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(atom);
        }
        self.bump();
        let pos = self.pos();
        let e = self.exponent()?;
        if e < 0 {
            let ok = match &atom {
                Expr::Q => true,
                Expr::Symbol(s) => self.negatives == Negatives::Any || is_denominator_name(s),
                _ => false,
            };
            if !ok {
                return Err(ExprError::Syntax {
                    pos,
                    msg: "negative powers are only allowed on q and registered denominators".into(),
                });
            }
        }
        Ok(Expr::Power(Box::new(atom), e))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => Ok(Expr::Rational(BigRational::new(n, d))),
                        _ => {
                            self.at -= 1;
                            self.err("expected a nonzero denominator")
                        }
                    }
                } else {
                    Ok(Expr::Rational(BigRational::from_integer(n)))
                }
            }
            Some(Tok::Ident(s)) if s == "q" => Ok(Expr::Q),
            Some(Tok::Ident(s)) => Ok(Expr::Symbol(s)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => {
                self.at -= 1;
                self.err("expected a number, symbol or '('")
            }
        }
    }
}

/// Parse with the default rule for negative exponents.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    parse_with(text, Negatives::Denominators)
}

pub fn parse_with(text: &str, negatives: Negatives) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
        negatives,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn juxtaposition_keeps_order() {
        let e = parse("x2 x1").unwrap();
        assert_eq!(e, Expr::Product(vec![Expr::Symbol("x2".into()), Expr::Symbol("x1".into())]));
    }

    #[test]
    fn weyl_relation_parses() {
        let e = parse("d1*x1 - q^2*x1*d1").unwrap();
        match e {
            Expr::Sum(t) => {
                assert_eq!(t.len(), 2);
                assert!(t[1].0);
            }
            _ => panic!("expected a sum"),
        }
    }

    #[test]
    fn negative_power_rules() {
        assert!(matches!(parse("x1^-1"), Err(ExprError::Syntax { .. })));
        assert!(parse("q^-2*beta_1^-1").is_ok());
        assert!(parse_with("x1^-1", Negatives::Any).is_ok());
        assert!(matches!(parse("(x1)^-1"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("x1 + * x2") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse("(x1").is_err());
        assert!(parse("x1 $").is_err());
    }
}
