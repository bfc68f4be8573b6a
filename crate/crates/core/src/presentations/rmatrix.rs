use std::collections::BTreeMap;

use crate::coefficients::{CoeffRing, FunctionField, GenericQ, QLaurent, RatFunc};
use crate::engine::{Monomial, NCElement};
use crate::linalg::{Echelon, SparseRow};

use super::PresentationError;

/// 4x4 matrix of Laurent polynomials acting on `C^2 (x) C^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix(pub [[QLaurent; 4]; 4]);

impl RMatrix {
    fn from_fn(f: impl Fn(usize, usize) -> QLaurent) -> Self {
        RMatrix(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    /// The standard `R`: diagonal `(q, 1, 1, q)` with `q - q^{-1}` at row 3, column 2.
    pub fn standard() -> Self {
        Self::from_fn(|i, j| match (i, j) {
            (0, 0) | (3, 3) => QLaurent::q_pow(1),
            (1, 1) | (2, 2) => QLaurent::one(),
            (2, 1) => QLaurent::from_pairs(&[(1, 1), (-1, -1)]),
            _ => QLaurent::zero(),
        })
    }

    /// `R_21`, the flip-conjugate of `R`.
    pub fn flipped() -> Self {
        let r = Self::standard();
        let flip = |k: usize| (k % 2) * 2 + k / 2;
        Self::from_fn(|i, j| r.0[flip(i)][flip(j)].clone())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { QLaurent::one() } else { QLaurent::zero() })
    }

    /// 1-based entry access.
    pub fn entry(&self, row: usize, col: usize) -> &QLaurent {
        &self.0[row - 1][col - 1]
    }

    pub fn mul(&self, o: &RMatrix) -> RMatrix {
        Self::from_fn(|i, j| {
            (0..4).fold(QLaurent::zero(), |acc, k| &acc + &(&self.0[i][k] * &o.0[k][j]))
        })
    }

    /// Inverse with Laurent entries; fails when the determinant is not a unit.
    pub fn inverse(&self) -> Result<RMatrix, PresentationError> {
        let f = FunctionField;
        let mut a: Vec<Vec<RatFunc>> = (0..4)
            .map(|i| {
                let mut row: Vec<RatFunc> = self.0[i].iter().map(RatFunc::from_laurent).collect();
                row.extend((0..4).map(|j| if i == j { f.one() } else { f.zero() }));
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !a[r][col].is_zero()).ok_or(PresentationError::SingularR)?;
            a.swap(col, piv);
            let inv = a[col][col].inv().ok_or(PresentationError::SingularR)?;
            for v in a[col].iter_mut() {
                *v = v.mul(&inv);
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..8 {
                        let t = factor.mul(&a[col][c]);
                        a[r][c] = a[r][c].sub(&t);
                    }
                }
            }
        }
        let mut out = RMatrix::identity();
        for (i, row) in a.iter().enumerate() {
            for j in 0..4 {
                out.0[i][j] = row[4 + j].to_laurent().ok_or(PresentationError::SingularR)?;
            }
        }
        Ok(out)
    }
}

/// Element of the free algebra: words in generator indices.
pub type FreeElem = BTreeMap<Vec<usize>, QLaurent>;

fn free_add(a: &mut FreeElem, w: Vec<usize>, c: QLaurent) {
    if c.is_zero() {
        return;
    }
    let e = a.entry(w.clone()).or_insert_with(QLaurent::zero);
    *e += &c;
    if e.is_zero() {
        a.remove(&w);
    }
}

type FreeMatrix = Vec<Vec<FreeElem>>;

/// One factor in a matrix-relation template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFactor {
    R,
    R21,
    R21Inv,
    /// `M (x) Id` for the symbol matrix with this name.
    First(String),
    /// `Id (x) M`.
    Second(String),
}

/// Parse a template side such as `R21 L1 R L2` or `X2 R21 D1 R21^-1`.
pub fn parse_template(side: &str) -> Result<Vec<MatrixFactor>, PresentationError> {
    side.split_whitespace()
        .map(|tok| match tok {
            "R" => Ok(MatrixFactor::R),
            "R21" => Ok(MatrixFactor::R21),
            "R21^-1" => Ok(MatrixFactor::R21Inv),
            t if t.ends_with('1') && t.len() > 1 => Ok(MatrixFactor::First(t[..t.len() - 1].to_string())),
            t if t.ends_with('2') && t.len() > 1 => Ok(MatrixFactor::Second(t[..t.len() - 1].to_string())),
            t => Err(PresentationError::BadTemplate(t.to_string())),
        })
        .collect()
}

fn scalar_matrix(r: &RMatrix) -> FreeMatrix {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let mut e = FreeElem::new();
                    free_add(&mut e, vec![], r.0[i][j].clone());
                    e
                })
                .collect()
        })
        .collect()
}

fn symbol_matrix(m: &[[usize; 2]; 2], first: bool) -> FreeMatrix {
    let mut out = vec![vec![FreeElem::new(); 4]; 4];
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let (row, col) = (2 * i + k, 2 * j + l);
                    let g = if first {
                        (k == l).then_some(m[i][j])
                    } else {
                        (i == j).then_some(m[k][l])
                    };
                    if let Some(g) = g {
                        free_add(&mut out[row][col], vec![g], QLaurent::one());
                    }
                }
            }
        }
    }
    out
}

fn matmul(a: &FreeMatrix, b: &FreeMatrix) -> FreeMatrix {
    let mut out = vec![vec![FreeElem::new(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for (wa, ca) in &a[i][k] {
                    for (wb, cb) in &b[k][j] {
                        let mut w = wa.clone();
                        w.extend_from_slice(wb);
                        free_add(&mut out[i][j], w, ca * cb);
                    }
                }
            }
        }
    }
    out
}

fn evaluate(side: &[MatrixFactor], symbols: &BTreeMap<String, [[usize; 2]; 2]>) -> Result<FreeMatrix, PresentationError> {
    let mut acc = scalar_matrix(&RMatrix::identity());
    for f in side {
        let m = match f {
            MatrixFactor::R => scalar_matrix(&RMatrix::standard()),
            MatrixFactor::R21 => scalar_matrix(&RMatrix::flipped()),
            MatrixFactor::R21Inv => scalar_matrix(&RMatrix::flipped().inverse()?),
            MatrixFactor::First(s) | MatrixFactor::Second(s) => {
                let sym = symbols.get(s).ok_or_else(|| PresentationError::BadTemplate(s.clone()))?;
                symbol_matrix(sym, matches!(f, MatrixFactor::First(_)))
            }
        };
        acc = matmul(&acc, &m);
    }
    Ok(acc)
}

/// The 16 entrywise relations `lhs - rhs = 0` of a matrix relation, as
/// free-algebra elements. `symbols` maps a matrix name to the generator
/// indices of its entries.
pub fn expand_matrix_relation(
    template: &str,
    symbols: &BTreeMap<String, [[usize; 2]; 2]>,
) -> Result<Vec<FreeElem>, PresentationError> {
    let (l, r) = template
        .split_once('=')
        .ok_or_else(|| PresentationError::BadTemplate(template.to_string()))?;
    let lhs = evaluate(&parse_template(l)?, symbols)?;
    let rhs = evaluate(&parse_template(r)?, symbols)?;
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = lhs[i][j].clone();
            for (w, c) in &rhs[i][j] {
                free_add(&mut e, w.clone(), -c);
            }
            out.push(e);
        }
    }
    Ok(out)
}

/// Row-reduce quadratic relations so that every out-of-order word `g_j g_i`
/// that occurs is expressed through ordered words, giving one rewrite rule
/// per such pair.
pub fn relations_to_rules(
    relations: &[FreeElem],
    ngens: usize,
) -> Result<BTreeMap<(usize, usize), NCElement<QLaurent>>, PresentationError> {
    let mut words: Vec<Vec<usize>> = relations.iter().flat_map(|r| r.keys().cloned()).collect();
    words.sort();
    words.dedup();
    if let Some(w) = words.iter().find(|w| w.len() != 2) {
        return Err(PresentationError::NotQuadratic(format!("{w:?}")));
    }
    // Out-of-order words take the low column indices so that they become pivots.
    words.sort_by_key(|w| (w[0] <= w[1], w.clone()));
    let col: BTreeMap<&Vec<usize>, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let n_bad = words.iter().filter(|w| w[0] > w[1]).count();
    let f = FunctionField;
    let mut ech = Echelon::new(f);
    for r in relations {
        let row: SparseRow<RatFunc> = r.iter().map(|(w, c)| (col[w], RatFunc::from_laurent(c))).collect();
        ech.insert(row);
    }
    let reduced = ech.reduced_rows();
    let mut rules = BTreeMap::new();
    for (&p, row) in &reduced {
        if p >= n_bad {
            return Err(PresentationError::Degenerate(format!("relation among ordered words {:?}", words[p])));
        }
        let w = &words[p];
        let mut rhs = NCElement::zero();
        for (&c, v) in row {
            if c == p {
                continue;
            }
            if c < n_bad {
                return Err(PresentationError::Degenerate(format!("{w:?} is not determined")));
            }
            let coeff = v.neg().to_laurent().ok_or_else(|| PresentationError::NonLaurent(format!("{w:?}")))?;
            let mut m = Monomial::one(ngens);
            for &g in &words[c] {
                m.set_exp(g, m.exp(g) + 1);
            }
            rhs.add_term(&GenericQ, m, &coeff);
        }
        rules.insert((w[0], w[1]), rhs);
    }
    if rules.len() != n_bad {
        return Err(PresentationError::Degenerate("some out-of-order words are free".into()));
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_matrix_entries() {
        let r = RMatrix::standard();
        assert_eq!(r.entry(3, 2), &QLaurent::from_pairs(&[(1, 1), (-1, -1)]));
        let r21 = RMatrix::flipped();
        assert_eq!(r21.entry(2, 3), &QLaurent::from_pairs(&[(1, 1), (-1, -1)]));
        assert_eq!(r21.mul(&r21.inverse().unwrap()), RMatrix::identity());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut z = RMatrix::identity();
        z.0[3][3] = QLaurent::zero();
        assert!(matches!(z.inverse(), Err(PresentationError::SingularR)));
        let mut h = RMatrix::identity();
        h.0[0][0] = QLaurent::from_pairs(&[(1, 1), (0, 1)]);
        assert!(matches!(h.inverse(), Err(PresentationError::SingularR)));
    }

    #[test]
    fn template_parsing() {
        let t = parse_template("X2 R21 D1 R21^-1").unwrap();
        assert_eq!(
            t,
            vec![
                MatrixFactor::Second("X".into()),
                MatrixFactor::R21,
                MatrixFactor::First("D".into()),
                MatrixFactor::R21Inv
            ]
        );
        assert!(parse_template("Q").is_err());
    }
}
