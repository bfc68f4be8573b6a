use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::inverse::{fraction_mat_mul, lift_fraction, matrix_inverse_q, FractionMatrix};
use super::matrix::{adjugate, det, inverse, mat_mul, CommPoly, Mat2, PolyRing};
use super::{rule_relations, show_fraction, verify_relations, HomReport, MomentMapError};
use crate::center::compute_v_w;
use crate::coefficients::{CoeffField, CoeffRing, CycNumber, GenericQ, RootOfUnity};
use crate::engine::{Algebra, AlgebraHom, OreFraction};
use crate::presentations::{dq_gl2, oq_gl2_plus};

/// `A B^-1 A^-1 B`.
pub fn classical_phi<F: CoeffField>(f: &F, a: &Mat2<F::Elem>, b: &Mat2<F::Elem>) -> Result<Mat2<F::Elem>, MomentMapError> {
    let ai = inverse(f, a).ok_or(MomentMapError::SingularInput)?;
    let bi = inverse(f, b).ok_or(MomentMapError::SingularInput)?;
    Ok(mat_mul(f, &mat_mul(f, &mat_mul(f, a, &bi), &ai), b))
}

/// The images of `a, b, c, d` in `D_q(GL_2)` over a chosen coefficient ring.
pub struct PhiMap<R: CoeffRing> {
    pub alg: Algebra<R>,
    /// `[[a, b], [c, d]] -> D X^-1 D^-1 X`
    pub matrix: FractionMatrix<R::Elem>,
}

impl<R: CoeffRing> PhiMap<R> {
    pub fn new(ring: R) -> Result<Self, MomentMapError> {
        let generic = Algebra::new(dq_gl2()?, GenericQ);
        let block = |o: usize| [[generic.generator(o), generic.generator(o + 1)], [generic.generator(o + 2), generic.generator(o + 3)]];
        let xi = matrix_inverse_q(&generic, &block(0), "detqX")?;
        let di = matrix_inverse_q(&generic, &block(4), "detqD")?;
        let alg = Algebra::new(generic.shared_presentation(), ring.clone());
        let lift = |m: &FractionMatrix<_>| m.clone().map(|row| row.map(|f| lift_fraction(&ring, &f)));
        let gens = |o: usize| {
            [[0, 1], [2, 3]].map(|row| row.map(|k| alg.fraction(alg.generator(o + k))))
        };
        let (x, d) = (gens(0), gens(4));
        let m = fraction_mat_mul(&alg, &d, &lift(&xi))?;
        let m = fraction_mat_mul(&alg, &m, &lift(&di))?;
        let matrix = fraction_mat_mul(&alg, &m, &x)?;
        Ok(PhiMap { alg, matrix })
    }

    pub fn images(&self) -> Vec<OreFraction<R::Elem>> {
        self.matrix.iter().flatten().cloned().collect()
    }

    pub fn hom(&self) -> Result<AlgebraHom<R::Elem>, MomentMapError> {
        Ok(AlgebraHom::new(["a", "b", "c", "d"].map(String::from).to_vec(), self.images())?)
    }
}

/// `phi(det_q) = q^q_power det_q(X)^x_exponent det_q(D)^d_exponent`, when a
/// match is found among small exponents.
#[derive(Debug, Clone, Serialize)]
pub struct PhiDeterminant {
    pub image: String,
    pub q_power: Option<i64>,
    pub x_exponent: Option<i64>,
    pub d_exponent: Option<i64>,
}

fn commuter_power<R: CoeffRing>(alg: &Algebra<R>, name: &str, e: i64) -> Result<OreFraction<R::Elem>, MomentMapError> {
    Ok(if e >= 0 {
        alg.fraction(alg.pow(&alg.named(name).expect("named determinant"), e as u32))
    } else {
        alg.commuter_inverse(name, (-e) as u32)?
    })
}

fn identify_determinant<R: CoeffRing>(
    alg: &Algebra<R>,
    image: &OreFraction<R::Elem>,
) -> Result<PhiDeterminant, MomentMapError> {
    let mut found = (None, None, None);
    let mut text = show_fraction(alg, image);
    'search: for i in -2..=2 {
        for j in -2..=2 {
            let base = alg.ore_mul(&commuter_power(alg, "detqX", i)?, &commuter_power(alg, "detqD", j)?)?;
            for k in -12..=12 {
                let mut cand = base.clone();
                cand.numerator = cand.numerator.scale(alg.ring(), &alg.ring().q_pow(k));
                if alg.ore_eq(image, &cand)? {
                    found = (Some(k), Some(i), Some(j));
                    text = show_fraction(alg, &alg.ore_normalize(cand)?);
                    break 'search;
                }
            }
        }
    }
    Ok(PhiDeterminant {
        image: text,
        q_power: found.0,
        x_exponent: found.1,
        d_exponent: found.2,
    })
}

/// Verify `phi_q` on the six reflection equation relations and record the
/// image of `det_q`.
pub fn phi_q() -> Result<(HomReport, PhiDeterminant), MomentMapError> {
    let phi = PhiMap::new(GenericQ)?;
    let hom = phi.hom()?;
    let relations = verify_relations(&phi.alg, &hom.source_generators, &hom.images, &rule_relations(&oq_gl2_plus()?))?;
    let source = Algebra::new(oq_gl2_plus()?, GenericQ);
    let det = phi.alg.apply_hom(&hom, &source.named("detq").expect("detq"))?;
    let det = identify_determinant(&phi.alg, &det)?;
    let report = HomReport {
        source: "oq_gl2".into(),
        target: "dq_gl2".into(),
        images: hom
            .source_generators
            .iter()
            .zip(&hom.images)
            .map(|(n, f)| (n.clone(), show_fraction(&phi.alg, f)))
            .collect(),
        relations,
        checks: vec![(format!("detq -> {}", det.image), det.q_power.is_some())],
    };
    Ok((report, det))
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiFrobeniusReport {
    pub level: u32,
    /// `(generator, symbolic equality)` for `b^l, c^l, d^l`.
    pub symbolic: Vec<(String, bool)>,
    pub det_identity: bool,
    pub samples: usize,
    pub samples_passed: usize,
}

impl PhiFrobeniusReport {
    pub fn holds(&self) -> bool {
        self.det_identity && self.symbolic.iter().all(|(_, ok)| *ok) && self.samples_passed == self.samples
    }
}

/// Central coordinates `v, x12^l, x21^l, x22^l, w, d12^l, d21^l, d22^l`.
fn central_matrices(pr: &PolyRing<RootOfUnity>) -> (Mat2<CommPoly<CycNumber>>, Mat2<CommPoly<CycNumber>>) {
    let v = |i: usize| pr.var(i);
    ([[v(0), v(1)], [v(2), v(3)]], [[v(4), v(5)], [v(6), v(7)]])
}

/// Restricted map at `l = 3`: `phi(b)^l, phi(c)^l, phi(d)^l` against the
/// commutative product `D adj(X) adj(D) X / (det X det D)` in the central
/// coordinates, and the `z` entry by exact evaluation at random characters.
pub fn phi_frobenius_check(l: u32, samples: usize, seed: u64) -> Result<PhiFrobeniusReport, MomentMapError> {
    if l != 3 {
        return Err(MomentMapError::ResourceBound(l));
    }
    let ring = RootOfUnity::new(l)?;
    let phi = PhiMap::new(ring.clone())?;
    let alg = &phi.alg;
    let (_, vw) = compute_v_w(l)?;
    let det_identity = vw.v_identity && vw.w_identity;
    let pr = PolyRing::new(ring.clone(), 8);
    let (x, d) = central_matrices(&pr);
    let numer = mat_mul(&pr, &mat_mul(&pr, &mat_mul(&pr, &d, &adjugate(&pr, &x)), &adjugate(&pr, &d)), &x);
    let central = [
        vw.v.clone(),
        alg.pow(&alg.generator(1), l),
        alg.pow(&alg.generator(2), l),
        alg.pow(&alg.generator(3), l),
        vw.w.clone(),
        alg.pow(&alg.generator(5), l),
        alg.pow(&alg.generator(6), l),
        alg.pow(&alg.generator(7), l),
    ];
    let substitute = |p: &CommPoly<CycNumber>| {
        let mut acc = alg.zero();
        for (e, c) in &p.terms {
            let mut t = alg.scalar(c.clone());
            for (g, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = alg.mul(&t, &alg.pow(&central[g], k));
                }
            }
            acc = alg.add(&acc, &t);
        }
        acc
    };
    let dets = alg.ore_mul(&alg.commuter_inverse("detqX", l)?, &alg.commuter_inverse("detqD", l)?)?;
    let power = |f: &OreFraction<CycNumber>| -> Result<OreFraction<CycNumber>, MomentMapError> {
        let mut acc = alg.fraction(alg.one());
        for _ in 0..l {
            acc = alg.ore_mul(&acc, f)?;
        }
        Ok(acc)
    };
    let entries = [("b", 0, 1), ("c", 1, 0), ("d", 1, 1)];
    let symbolic = entries
        .iter()
        .map(|&(name, i, j)| {
            let quantum = power(&phi.matrix[i][j])?;
            let classical = alg.ore_mul(&alg.fraction(substitute(&numer[i][j])), &dets)?;
            Ok((format!("{name}^{l}"), alg.ore_eq(&quantum, &classical)?))
        })
        .collect::<Result<Vec<_>, MomentMapError>>()?;

    // z = (det_q^l + b^l c^l) d^-l, so its image is determined by the
    // images of det_q^l, b^l, c^l, d^l.
    let source = Algebra::new(oq_gl2_plus()?, ring.clone());
    let det_image = alg.apply_hom(&phi.hom()?, &source.named("detq").expect("detq"))?;
    let det_form = identify_determinant(alg, &det_image)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut drawn = 0;
    while drawn < samples {
        let point: Vec<CycNumber> = (0..8)
            .map(|_| {
                let n: i64 = rng.gen_range(-6..=6);
                let den: i64 = rng.gen_range(1..=3);
                ring.from_rational(&BigRational::new(n.into(), den.into()))
            })
            .collect();
        let xm = [[point[0].clone(), point[1].clone()], [point[2].clone(), point[3].clone()]];
        let dm = [[point[4].clone(), point[5].clone()], [point[6].clone(), point[7].clone()]];
        let (dx, dd) = (det(&ring, &xm), det(&ring, &dm));
        if CoeffRing::is_zero(&ring, &dx) || CoeffRing::is_zero(&ring, &dd) {
            continue;
        }
        let classical = classical_phi(&ring, &dm, &xm)?;
        let scale = ring.inv(&ring.mul(&dx, &dd)).expect("nonzero");
        let at = |i: usize, j: usize| ring.mul(&pr.eval(&numer[i][j], &point), &scale);
        let d_val = at(1, 1);
        let Some(d_inv) = ring.inv(&d_val) else {
            continue;
        };
        drawn += 1;
        let (Some(k), Some(i), Some(j)) = (det_form.q_power, det_form.x_exponent, det_form.d_exponent) else {
            continue;
        };
        let pow_signed = |v: &CycNumber, e: i64| {
            let p = ring.pow(v, e.unsigned_abs() as u32);
            if e >= 0 {
                p
            } else {
                ring.inv(&p).expect("nonzero")
            }
        };
        // (q^k detX^i detD^j)^l evaluates to detX-value^i detD-value^j.
        let det_l = ring.mul(
            &ring.mul(&ring.q_pow(k * l as i64), &pow_signed(&dx, i)),
            &pow_signed(&dd, j),
        );
        let z = ring.mul(&ring.add(&det_l, &ring.mul(&at(0, 1), &at(1, 0))), &d_inv);
        if z == classical[0][0] {
            passed += 1;
        }
    }
    Ok(PhiFrobeniusReport {
        level: l,
        symbolic,
        det_identity,
        samples,
        samples_passed: passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Classical;
    use crate::momentmaps::identity;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn classical_commutator() {
        let a = [[r(2), r(1)], [r(1), r(1)]];
        let b = [[r(1), r(3)], [r(0), r(2)]];
        assert_eq!(classical_phi(&Classical, &a, &a).unwrap(), identity(&Classical));
        let m = classical_phi(&Classical, &a, &b).unwrap();
        assert_eq!(det(&Classical, &m), r(1));
        let singular = [[r(1), r(1)], [r(1), r(1)]];
        assert_eq!(classical_phi(&Classical, &a, &singular), Err(MomentMapError::SingularInput));
    }

    #[test]
    fn phi_is_a_homomorphism() {
        let (report, det) = phi_q().unwrap();
        assert!(report.verified(), "{report:#?}");
        assert!(det.q_power.is_some(), "{det:?}");
        assert_eq!((det.q_power, det.x_exponent, det.d_exponent), (Some(8), Some(0), Some(0)));
        assert_eq!(det.image, "q^8");
    }

    #[test]
    fn frobenius_restriction_at_three() {
        let r = phi_frobenius_check(3, 20, 5).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(matches!(phi_frobenius_check(5, 1, 0), Err(MomentMapError::ResourceBound(5))));
    }

    #[test]
    fn classical_limit_is_group_commutator() {
        let phi = PhiMap::new(Classical).unwrap();
        let alg = &phi.alg;
        let g = |k: usize| alg.generator(k);
        let x = [[g(0), g(1)], [g(2), g(3)]];
        let d = [[g(4), g(5)], [g(6), g(7)]];
        let ea = super::super::ElementArith(alg);
        let numer = mat_mul(&ea, &mat_mul(&ea, &mat_mul(&ea, &d, &adjugate(&ea, &x)), &adjugate(&ea, &d)), &x);
        let dets = alg
            .ore_mul(&alg.commuter_inverse("detqX", 1).unwrap(), &alg.commuter_inverse("detqD", 1).unwrap())
            .unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let c = alg.ore_mul(&alg.fraction(numer[i][j].clone()), &dets).unwrap();
                assert!(alg.ore_eq(&phi.matrix[i][j], &c).unwrap());
            }
        }
    }
}
