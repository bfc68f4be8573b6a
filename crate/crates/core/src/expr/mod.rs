//! Expression syntax: parsing, evaluation in an algebra, and canonical
//! printing.

mod eval;
mod parse;
mod print;

use thiserror::Error;

use crate::coefficients::CoeffRing;
use crate::engine::{Algebra, EngineError, NCElement};

pub use eval::{eval, eval_element, GeneratorNegatives};
pub use parse::{is_denominator_name, parse, parse_with, Expr, Negatives};
pub use print::{format_element, format_fraction, format_sum, Style};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("expression has a nontrivial denominator")]
    NotAnElement,
}

/// Parse and evaluate to a plain element.
pub fn parse_element<R: CoeffRing>(alg: &Algebra<R>, text: &str) -> Result<NCElement<R::Elem>, ExprError> {
    eval_element(alg, &parse(text)?)
}

/// Canonical text of an element of `alg`.
pub fn show<R: CoeffRing>(alg: &Algebra<R>, e: &NCElement<R::Elem>) -> String {
    format_element(alg.ring(), alg.presentation().generators(), e, Style::Ascii)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{GenericQ, RootOfUnity};
    use crate::presentations::{dq_cn, oq_gl2};

    #[test]
    fn normal_form_printing() {
        let alg = Algebra::new(dq_cn(2).unwrap(), GenericQ);
        let e = parse_element(&alg, "d2*x2").unwrap();
        assert_eq!(show(&alg, &e), "(q^2 - 1)*x1*d1 + q^2*x2*d2 + (q^2 - 1)");
        let e = parse_element(&alg, "x2 x1").unwrap();
        assert_eq!(show(&alg, &e), "q*x1*x2");
        let e = parse_element(&alg, "3 - 6*q^2*x1").unwrap();
        assert_eq!(show(&alg, &e), "-6*q^2*x1 + 3");
    }

    #[test]
    fn content_is_factored() {
        let alg = Algebra::new(oq_gl2().unwrap(), RootOfUnity::new(5).unwrap());
        let e = parse_element(&alg, "(10*q^3 - 5*q)*a^2*b*c*d - 5*(q^3 + 2*q^2 + q)*b*c*d^3").unwrap();
        assert_eq!(show(&alg, &e), "5*(2*q^3 - q)*a^2*b*c*d - 5*(q^3 + 2*q^2 + q)*b*c*d^3");
    }

    #[test]
    fn unknown_symbols_and_denominators() {
        let alg = Algebra::new(dq_cn(1).unwrap(), GenericQ);
        assert_eq!(parse_element(&alg, "y7"), Err(ExprError::UnknownSymbol("y7".into())));
        let f = eval(&alg, &parse("beta_1^-1*x1").unwrap(), GeneratorNegatives::Reject).unwrap();
        let g = eval(&alg, &parse("q^-2*x1*beta_1^-1").unwrap(), GeneratorNegatives::Reject).unwrap();
        assert!(alg.ore_eq(&f, &g).unwrap());
        assert!(matches!(parse_element(&alg, "beta_1^-1"), Err(ExprError::NotAnElement)));
    }

    #[test]
    fn d_inverse_in_reflection_algebra() {
        let alg = Algebra::new(oq_gl2().unwrap(), GenericQ);
        let f = eval(&alg, &parse("d^-1*b").unwrap(), GeneratorNegatives::Reject).unwrap();
        let g = eval(&alg, &parse("q^-2*b*d^-1").unwrap(), GeneratorNegatives::Reject).unwrap();
        assert!(alg.ore_eq(&f, &g).unwrap());
        // d cancels: (b d) d^-1 = b
        let h = eval(&alg, &parse("b*d*d^-1").unwrap(), GeneratorNegatives::Reject).unwrap();
        assert_eq!(h.as_element(), Some(&parse_element(&alg, "b").unwrap()));
    }
}
