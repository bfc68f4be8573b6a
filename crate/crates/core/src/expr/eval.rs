use crate::coefficients::CoeffRing;
use crate::engine::{Algebra, EngineError, NCElement, OreFraction, OreOp};

use super::{Expr, ExprError};

/// What a negative power of a plain generator means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorNegatives {
    Reject,
    /// The whole product term vanishes (used when instantiating identity
    /// families at small parameters).
    Vanish,
}

/// Evaluate an expression in `alg`, producing an Ore fraction.
pub fn eval<R: CoeffRing>(
    alg: &Algebra<R>,
    e: &Expr,
    negatives: GeneratorNegatives,
) -> Result<OreFraction<R::Elem>, ExprError> {
    Ok(eval_opt(alg, e, negatives)?.unwrap_or_else(|| OreFraction::from_element(NCElement::zero())))
}

/// `None` marks a vanished product.
fn eval_opt<R: CoeffRing>(
    alg: &Algebra<R>,
    e: &Expr,
    negatives: GeneratorNegatives,
) -> Result<Option<OreFraction<R::Elem>>, ExprError> {
    let ring = alg.ring();
    let frac = |x: NCElement<R::Elem>| Some(OreFraction::from_element(x));
    Ok(match e {
        Expr::Rational(r) => frac(alg.scalar(ring.from_rational(r))),
        Expr::Q => frac(alg.scalar(ring.q_pow(1))),
        Expr::Symbol(s) => frac(symbol(alg, s)?),
        Expr::Sum(terms) => {
            let mut acc = OreFraction::from_element(NCElement::zero());
            for (neg, t) in terms {
                let Some(v) = eval_opt(alg, t, negatives)? else {
                    continue;
                };
                let op = if *neg { OreOp::Sub } else { OreOp::Add };
                acc = alg.ore_arith(&acc, &v, op)?;
            }
            Some(acc)
        }
        Expr::Product(fs) => {
            let mut acc = OreFraction::from_element(alg.one());
            for f in fs {
                let Some(v) = eval_opt(alg, f, negatives)? else {
                    return Ok(None);
                };
                acc = alg.ore_mul(&acc, &v)?;
            }
            Some(acc)
        }
        Expr::Power(base, k) if *k >= 0 => {
            let Some(b) = eval_opt(alg, base, negatives)? else {
                return Ok(None);
            };
            if let Some(el) = b.as_element() {
                frac(alg.pow(el, *k as u32))
            } else {
                let mut acc = OreFraction::from_element(alg.one());
                for _ in 0..*k {
                    acc = alg.ore_mul(&acc, &b)?;
                }
                Some(acc)
            }
        }
        Expr::Power(base, k) => match base.as_ref() {
            Expr::Q => frac(alg.scalar(ring.q_pow(*k))),
            Expr::Symbol(s) => {
                let p = alg.presentation();
                let key = canonical_symbol(s);
                let s = &key;
                if p.commuter_index(s).is_some() {
                    Some(alg.commuter_inverse(s, (-k) as u32)?)
                } else if p.generator_index(s).is_some() || p.named_element(s).is_some() {
                    if negatives == GeneratorNegatives::Vanish {
                        None
                    } else {
                        return Err(EngineError::UnregisteredDenominator(s.clone()).into());
                    }
                } else {
                    return Err(ExprError::UnknownSymbol(s.clone()));
                }
            }
            _ => return Err(ExprError::Syntax { pos: 0, msg: "negative power of a compound expression".into() }),
        },
    })
}

/// `∂` spellings and `p11..p22` as aliases of the `d` generators.
fn canonical_symbol(s: &str) -> String {
    let s = s.replace('∂', "d");
    match s.strip_prefix('p') {
        Some(rest) if rest.len() == 2 && rest.chars().all(|c| matches!(c, '1' | '2')) => format!("d{rest}"),
        _ => s,
    }
}

fn symbol<R: CoeffRing>(alg: &Algebra<R>, s: &str) -> Result<NCElement<R::Elem>, ExprError> {
    let key = canonical_symbol(s);
    if let Some(g) = alg.gen(&key) {
        return Ok(g);
    }
    alg.named(&key).ok_or_else(|| ExprError::UnknownSymbol(s.to_string()))
}

/// Evaluate and require a result without denominators.
pub fn eval_element<R: CoeffRing>(alg: &Algebra<R>, e: &Expr) -> Result<NCElement<R::Elem>, ExprError> {
    let f = eval(alg, e, GeneratorNegatives::Reject)?;
    f.as_element().cloned().ok_or(ExprError::NotAnElement)
}
