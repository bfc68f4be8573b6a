use std::collections::{BTreeMap, BTreeSet};

use super::matrix::Mat2;
use super::MomentMapError;
use crate::coefficients::{CoeffRing, FunctionField, GenericQ, QLaurent, RatFunc};
use crate::engine::{Algebra, Denominator, Monomial, NCElement, OreFraction, OreOp};
use crate::linalg::{solve, SparseRow};

pub type FractionMatrix<E> = Mat2<OreFraction<E>>;

pub fn lift_fraction<R: CoeffRing>(ring: &R, f: &OreFraction<QLaurent>) -> OreFraction<R::Elem> {
    OreFraction {
        numerator: f.numerator.map_coeffs(ring, |c| ring.from_laurent(c)),
        denominator: f.denominator.clone(),
    }
}

fn monomials_of_degree(ngens: usize, gens: &[usize], degree: u32) -> Vec<Monomial> {
    if degree == 0 {
        return vec![Monomial::one(ngens)];
    }
    let mut out = BTreeSet::new();
    for m in monomials_of_degree(ngens, gens, degree - 1) {
        for &g in gens {
            out.insert(m.with_bumped(g, 1));
        }
    }
    out.into_iter().collect()
}

type EquationKey = (bool, usize, usize, Monomial);

/// Two-sided inverse of a 2x2 matrix of elements whose determinant is the
/// registered commuter `denominator`. Entries are found as
/// `(combination of degree-k monomials) * det^-1`, solved linearly over
/// `Q(q)`, and verified by multiplying back.
pub fn matrix_inverse_q(
    alg: &Algebra<GenericQ>,
    m: &Mat2<NCElement<QLaurent>>,
    denominator: &str,
) -> Result<FractionMatrix<QLaurent>, MomentMapError> {
    let pres = alg.presentation();
    let idx = pres
        .commuter_index(denominator)
        .ok_or_else(|| crate::engine::EngineError::UnregisteredDenominator(denominator.to_string()))?;
    let det = pres.commuters()[idx]
        .element
        .clone()
        .ok_or_else(|| crate::engine::EngineError::UnregisteredDenominator(denominator.to_string()))?;
    let ngens = alg.ngens();
    let gens: Vec<usize> = m
        .iter()
        .flatten()
        .flat_map(|e| e.monomials().flat_map(|mo| mo.word().collect::<Vec<_>>()).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let inv_det = alg.commuter_inverse(denominator, 1)?;
    let twisted: Vec<Vec<NCElement<QLaurent>>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| Ok(alg.ore_mul(&inv_det, &alg.fraction(e.clone()))?.numerator))
                .collect::<Result<Vec<_>, MomentMapError>>()
        })
        .collect::<Result<_, _>>()?;
    for degree in 1..=2u32 {
        let basis = monomials_of_degree(ngens, &gens, degree);
        let k = basis.len();
        let unknown = |i: usize, j: usize, b: usize| (2 * i + j) * k + b;
        let mut rows: BTreeMap<EquationKey, SparseRow<RatFunc>> = BTreeMap::new();
        let mut add = |key: EquationKey, col: usize, c: &QLaurent| {
            let row = rows.entry(key).or_default();
            let v = row.entry(col).or_insert_with(RatFunc::zero);
            *v = v.add(&RatFunc::from_laurent(c));
        };
        for (b, mono) in basis.iter().enumerate() {
            let me = alg.monomial(mono.clone());
            for i in 0..2 {
                for l in 0..2 {
                    for j in 0..2 {
                        // (M N)_ij gets M_il * N_lj
                        for (mo, c) in alg.mul(&m[i][l], &me).terms() {
                            add((false, i, j, mo.clone()), unknown(l, j, b), c);
                        }
                        // (N M')_ij gets N_il * M'_lj
                        for (mo, c) in alg.mul(&me, &twisted[l][j]).terms() {
                            add((true, i, j, mo.clone()), unknown(i, l, b), c);
                        }
                    }
                }
            }
        }
        let mut rhs_terms: BTreeMap<EquationKey, RatFunc> = BTreeMap::new();
        for side in [false, true] {
            for i in 0..2 {
                for (mo, c) in det.terms() {
                    rhs_terms.insert((side, i, i, mo.clone()), RatFunc::from_laurent(c));
                    rows.entry((side, i, i, mo.clone())).or_default();
                }
            }
        }
        let keys: Vec<EquationKey> = rows.keys().cloned().collect();
        let a: Vec<SparseRow<RatFunc>> = keys.iter().map(|key| rows[key].clone()).collect();
        let b: Vec<RatFunc> = keys
            .iter()
            .map(|key| rhs_terms.get(key).cloned().unwrap_or_else(RatFunc::zero))
            .collect();
        let Some(x) = solve(&FunctionField, &a, &b, 4 * k) else {
            continue;
        };
        let entry = |i: usize, j: usize| -> Result<OreFraction<QLaurent>, MomentMapError> {
            let mut num = NCElement::zero();
            for (bi, mono) in basis.iter().enumerate() {
                let c = x[unknown(i, j, bi)]
                    .to_laurent()
                    .ok_or_else(|| MomentMapError::Mismatch("inverse coefficient is not a Laurent polynomial".into()))?;
                num.add_term(&GenericQ, mono.clone(), &c);
            }
            Ok(alg.ore_normalize(OreFraction {
                numerator: num,
                denominator: Denominator::power(idx, 1),
            })?)
        };
        let inv = [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]];
        let mf = m.clone().map(|row| row.map(|e| alg.fraction(e)));
        if !is_identity(alg, &fraction_mat_mul(alg, &mf, &inv)?)?
            || !is_identity(alg, &fraction_mat_mul(alg, &inv, &mf)?)?
        {
            return Err(MomentMapError::Mismatch("inverse fails the two-sided check".into()));
        }
        return Ok(inv);
    }
    Err(MomentMapError::NoSolution(2))
}

pub(crate) fn fraction_mat_mul<R: CoeffRing>(
    alg: &Algebra<R>,
    a: &FractionMatrix<R::Elem>,
    b: &FractionMatrix<R::Elem>,
) -> Result<FractionMatrix<R::Elem>, MomentMapError> {
    let e = |i: usize, j: usize| -> Result<OreFraction<R::Elem>, MomentMapError> {
        let s = alg.ore_mul(&a[i][0], &b[0][j])?;
        let t = alg.ore_mul(&a[i][1], &b[1][j])?;
        Ok(alg.ore_arith(&s, &t, OreOp::Add)?)
    };
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

fn is_identity<R: CoeffRing>(alg: &Algebra<R>, m: &FractionMatrix<R::Elem>) -> Result<bool, MomentMapError> {
    for i in 0..2 {
        for j in 0..2 {
            let target = alg.fraction(if i == j { alg.one() } else { alg.zero() });
            if !alg.ore_eq(&m[i][j], &target)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{dq_gl2, oq_gl2};

    fn gens(alg: &Algebra<GenericQ>, offset: usize) -> Mat2<NCElement<QLaurent>> {
        [
            [alg.generator(offset), alg.generator(offset + 1)],
            [alg.generator(offset + 2), alg.generator(offset + 3)],
        ]
    }

    #[test]
    fn inverse_of_x_and_d() {
        let alg = Algebra::new(dq_gl2().unwrap(), GenericQ);
        let xi = matrix_inverse_q(&alg, &gens(&alg, 0), "detqX").unwrap();
        assert!(xi.iter().flatten().all(|f| f.numerator.max_degree() == Some(1)));
        matrix_inverse_q(&alg, &gens(&alg, 4), "detqD").unwrap();
    }

    #[test]
    fn inverse_in_reflection_algebra() {
        let alg = Algebra::new(oq_gl2().unwrap(), GenericQ);
        matrix_inverse_q(&alg, &gens(&alg, 0), "detq").unwrap();
    }
}
