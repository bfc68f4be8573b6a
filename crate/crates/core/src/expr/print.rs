use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coefficients::{format_q_terms, format_rational, CoeffRing};
use crate::engine::{Monomial, NCElement, OreFraction, Presentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// Parseable ASCII: `q^2*x1*d1`.
    #[default]
    Ascii,
    /// ASCII with `∂` for derivative generators.
    Unicode,
    /// LaTeX fragments.
    Latex,
}

fn generator_name(name: &str, style: Style) -> String {
    let deriv = |rest: &str| rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty();
    match style {
        Style::Ascii => name.to_string(),
        Style::Unicode => match name.split_at(1) {
            ("d", rest) if deriv(rest) => format!("∂{rest}"),
            _ => name.to_string(),
        },
        Style::Latex => match name.split_at(1) {
            ("d", rest) if deriv(rest) => format!("\\partial_{{{rest}}}"),
            ("x", rest) if deriv(rest) => format!("x_{{{rest}}}"),
            _ => name.to_string(),
        },
    }
}

fn monomial_string(m: &Monomial, names: &[String], style: Style) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| {
            let n = generator_name(&names[g], style);
            match (e, style) {
                (1, _) => n,
                (e, Style::Latex) => format!("{n}^{{{e}}}"),
                (e, _) => format!("{n}^{e}"),
            }
        })
        .collect();
    parts.join(if style == Style::Latex { " " } else { "*" })
}

fn latexify_q(s: &str) -> String {
    // q^-2 -> q^{-2}, 3*q -> 3q
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '^' {
            let mut exp = String::new();
            while let Some(&d) = chars.peek() {
                if d == '-' && exp.is_empty() || d.is_ascii_digit() {
                    exp.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push_str(&format!("^{{{exp}}}"));
        } else if c != '*' {
            out.push(c);
        }
    }
    out
}

/// Rational content `g > 0` and primitive part of `sum c_k q^k`, with the
/// sign chosen so the leading coefficient of the primitive part is positive.
fn split_content(terms: &[(i64, BigRational)]) -> (bool, BigRational, Vec<(i64, BigRational)>) {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in terms {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let g = BigRational::new(num, den);
    let neg = terms[0].1.is_negative();
    let prim = terms
        .iter()
        .map(|(k, c)| {
            let v = c / &g;
            (*k, if neg { -v } else { v })
        })
        .collect();
    (neg, g, prim)
}

/// Sign and magnitude text of one coefficient; magnitude is empty for 1.
fn coefficient_text(terms: &[(i64, BigRational)], style: Style) -> (bool, String) {
    let fix = |s: String| if style == Style::Latex { latexify_q(&s) } else { s };
    if terms.len() == 1 {
        let (k, c) = &terms[0];
        let abs = c.abs();
        if *k == 0 && abs.is_one() {
            return (c.is_negative(), String::new());
        }
        return (c.is_negative(), fix(format_q_terms(&[(*k, abs)])));
    }
    let (neg, g, prim) = split_content(terms);
    let inner = format!("({})", fix(format_q_terms(&prim)));
    if g.is_one() {
        (neg, inner)
    } else {
        let sep = if style == Style::Latex { "" } else { "*" };
        (neg, format!("{}{sep}{inner}", format_rational(&g)))
    }
}

/// Signed sum of `coefficient * body` terms; an empty body stands for 1.
pub fn format_sum<'a, R: CoeffRing>(
    ring: &R,
    terms: impl IntoIterator<Item = (String, &'a R::Elem)>,
    style: Style,
) -> String {
    let mut out = String::new();
    for (idx, (mono, c)) in terms.into_iter().enumerate() {
        let (neg, coeff) = match ring.q_terms(c) {
            Some(t) => coefficient_text(&t, style),
            None => (false, format!("({})", ring.format(c))),
        };
        let body = match (coeff.is_empty(), mono.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => mono,
            (false, true) => coeff,
            (false, false) => {
                let sep = if style == Style::Latex { " " } else { "*" };
                format!("{coeff}{sep}{mono}")
            }
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of an element: terms in decreasing PBW order.
pub fn format_element<R: CoeffRing>(ring: &R, names: &[String], e: &NCElement<R::Elem>, style: Style) -> String {
    format_sum(ring, e.terms().rev().map(|(m, c)| (monomial_string(m, names, style), c)), style)
}

/// `numerator * s1^-a1 * ...` with denominators written right to left.
pub fn format_fraction<R: CoeffRing>(
    ring: &R,
    pres: &Presentation,
    f: &OreFraction<R::Elem>,
    style: Style,
) -> String {
    let num = format_element(ring, pres.generators(), &f.numerator, style);
    if f.denominator.is_one() {
        return num;
    }
    let cs = pres.commuters();
    let dens: Vec<String> = f
        .denominator
        .factors()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(i, a)| format!("{}^-{a}", cs[i].name))
        .collect();
    format!("({num})*{}", dens.join("*"))
}
