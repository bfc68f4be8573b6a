use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::{Arith, CommPoly, Mat2, PolyRing};
use super::{rule_relations, show_fraction, verify_relations, HomReport, MomentMapError};
use crate::center::{compute_z, oq_root_algebra};
use crate::coefficients::{CoeffRing, GenericQ, RootOfUnity};
use crate::engine::{Algebra, AlgebraHom, NCElement, OreFraction};
use crate::expr::{parse_element, show};
use crate::presentations::{beta, dq_cn, oq_gl2_plus};

/// Images of `a, b, c, d` in `D_q(C^2)`.
pub const MU_IMAGES: [&str; 4] = ["q^-2*(1 + d2*x2)", "q^-2*d2*x1", "q^-2*d1*x2", "1 + x1*d1"];

/// The same assignment without the `q^-2` on `a, b, c`; it violates three of
/// the six relations with these conventions.
pub const MU_IMAGES_UNSCALED: [&str; 4] = ["1 + d2*x2", "d2*x1", "d1*x2", "1 + x1*d1"];

pub fn mu_images<R: CoeffRing>(alg: &Algebra<R>) -> Result<Vec<OreFraction<R::Elem>>, MomentMapError> {
    images_from(alg, &MU_IMAGES)
}

fn images_from<R: CoeffRing>(alg: &Algebra<R>, texts: &[&str]) -> Result<Vec<OreFraction<R::Elem>>, MomentMapError> {
    texts
        .iter()
        .map(|s| Ok(OreFraction::from_element(parse_element(alg, s)?)))
        .collect()
}

pub fn mu_hom<R: CoeffRing>(alg: &Algebra<R>) -> Result<AlgebraHom<R::Elem>, MomentMapError> {
    let names = ["a", "b", "c", "d"].map(String::from).to_vec();
    Ok(AlgebraHom::new(names, mu_images(alg)?)?)
}

/// Verify `mu_q` on the six reflection equation relations, and that
/// `det_q` goes to `beta_2`.
pub fn mu_q() -> Result<HomReport, MomentMapError> {
    check_assignment(&MU_IMAGES)
}

/// The relation and determinant transcript for arbitrary images of
/// `a, b, c, d` in `D_q(C^2)`.
pub fn check_assignment(texts: &[&str; 4]) -> Result<HomReport, MomentMapError> {
    let alg = Algebra::new(dq_cn(2)?, GenericQ);
    let source = Algebra::new(oq_gl2_plus()?, GenericQ);
    let names = ["a", "b", "c", "d"].map(String::from).to_vec();
    let hom = AlgebraHom::new(names, images_from(&alg, texts)?)?;
    let relations = verify_relations(&alg, &hom.source_generators, &hom.images, &rule_relations(&oq_gl2_plus()?))?;
    let det = alg.apply_hom(&hom, &source.named("detq").expect("detq"))?;
    let beta2 = alg.lift(&beta(2, 2));
    Ok(HomReport {
        source: "oq_gl2".into(),
        target: "dq2".into(),
        images: hom
            .source_generators
            .iter()
            .zip(&hom.images)
            .map(|(n, f)| (n.clone(), show_fraction(&alg, f)))
            .collect(),
        relations,
        checks: vec![(format!("detq -> beta_2 = {}", show_fraction(&alg, &det)), det.as_element() == Some(&beta2))],
    })
}

/// One central generator and its image under the restricted map.
#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusCheck {
    pub generator: String,
    pub image: String,
    pub expected: String,
    pub holds: bool,
}

struct CentralImages {
    target: Algebra<RootOfUnity>,
    /// Images of `z, b^l, c^l, d^l, det_q^l`.
    images: Vec<NCElement<crate::coefficients::CycNumber>>,
}

fn central_images(l: u32) -> Result<CentralImages, MomentMapError> {
    let source = oq_root_algebra(l)?;
    let target = Algebra::new(dq_cn(2)?, RootOfUnity::new(l)?);
    let hom = mu_hom(&target)?;
    let z = compute_z(&source, l)?;
    let det = source.named("detq").expect("detq");
    let src = [
        z,
        source.pow(&source.generator(1), l),
        source.pow(&source.generator(2), l),
        source.pow(&source.generator(3), l),
        source.pow(&det, l),
    ];
    let images = src
        .iter()
        .map(|e| {
            let f = target.apply_hom(&hom, e)?;
            f.as_element()
                .cloned()
                .ok_or_else(|| MomentMapError::Mismatch("central image has a denominator".into()))
        })
        .collect::<Result<Vec<_>, MomentMapError>>()?;
    Ok(CentralImages { target, images })
}

/// `mu_q` on `z, b^l, c^l, d^l, det_q^l` against the expected central
/// elements of `D_q(C^2)`.
pub fn mu_frobenius(l: u32) -> Result<Vec<FrobeniusCheck>, MomentMapError> {
    let ci = central_images(l)?;
    let expected = [
        format!("1 + x2^{l}*d2^{l}"),
        format!("x1^{l}*d2^{l}"),
        format!("x2^{l}*d1^{l}"),
        format!("1 + x1^{l}*d1^{l}"),
        format!("1 + x1^{l}*d1^{l} + x2^{l}*d2^{l}"),
    ];
    let names = ["z".to_string(), format!("b^{l}"), format!("c^{l}"), format!("d^{l}"), format!("detq^{l}")];
    names
        .into_iter()
        .zip(expected)
        .zip(&ci.images)
        .map(|((generator, exp), img)| {
            let e = parse_element(&ci.target, &exp)?;
            Ok(FrobeniusCheck {
                generator,
                image: show(&ci.target, img),
                expected: show(&ci.target, &e),
                holds: &e == img,
            })
        })
        .collect()
}

/// `[1 + a xi, a zeta; b xi, 1 + b zeta]`.
pub fn classical_mu<A: Arith>(r: &A, a: &A::T, b: &A::T, xi: &A::T, zeta: &A::T) -> Mat2<A::T> {
    [
        [r.add(&r.one(), &r.mul(a, xi)), r.mul(a, zeta)],
        [r.mul(b, xi), r.add(&r.one(), &r.mul(b, zeta))],
    ]
}

/// Assignment of the classical coordinates `(a, b, xi, zeta)` to the central
/// coordinates `x1^l, x2^l, d1^l, d2^l`, and whether matrix entries are read
/// transposed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub a: String,
    pub b: String,
    pub xi: String,
    pub zeta: String,
    pub transposed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub level: u32,
    /// All identifications under which the four images match the classical
    /// entries.
    pub identifications: Vec<Identification>,
    pub spot_checks: usize,
    pub spot_checks_passed: usize,
    /// `{mu(d^l), mu(det_q^l)} = {beta_1^l, beta_2^l}`.
    pub inequations_match: bool,
}

impl DiagramReport {
    pub fn commutes(&self) -> bool {
        !self.identifications.is_empty() && self.spot_checks_passed == self.spot_checks && self.inequations_match
    }
}

const CENTRAL_COORDS: [&str; 4] = ["x1", "x2", "d1", "d2"];

/// Rewrite an element whose exponents are multiples of `l` as a polynomial in
/// the `l`-th powers of the generators.
fn to_central_poly(
    ring: &RootOfUnity,
    e: &NCElement<crate::coefficients::CycNumber>,
    l: u32,
) -> Option<CommPoly<crate::coefficients::CycNumber>> {
    let p = PolyRing::new(ring.clone(), 4);
    let mut acc = p.zero();
    for (m, c) in e.terms() {
        if m.exponents().iter().any(|x| x % l != 0) {
            return None;
        }
        let exps: Vec<u32> = m.exponents().iter().map(|x| x / l).collect();
        acc = p.add(
            &acc,
            &CommPoly {
                terms: [(exps, c.clone())].into(),
            },
        );
    }
    Some(acc)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Compare the restricted quantum map with the pullback along the classical
/// moment map, then spot-check at `samples` random points.
pub fn diagram_check_mu(l: u32, samples: usize, seed: u64) -> Result<DiagramReport, MomentMapError> {
    let ci = central_images(l)?;
    let ring = ci.target.ring().clone();
    let pr = PolyRing::new(ring.clone(), 4);
    let polys = ci.images[..4]
        .iter()
        .map(|e| to_central_poly(&ring, e, l))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| MomentMapError::Mismatch("image is not in the central subalgebra".into()))?;
    let as_matrix = |t: bool| -> Mat2<CommPoly<_>> {
        let [z, b, c, d] = [&polys[0], &polys[1], &polys[2], &polys[3]].map(Clone::clone);
        if t {
            [[z, c], [b, d]]
        } else {
            [[z, b], [c, d]]
        }
    };
    let mut identifications = Vec::new();
    for perm in permutations(4) {
        let v: Vec<_> = perm.iter().map(|&k| pr.var(k)).collect();
        let classical = super::classical_mu(&pr, &v[0], &v[1], &v[2], &v[3]);
        for t in [false, true] {
            if as_matrix(t) == classical {
                identifications.push(Identification {
                    a: format!("{}^{l}", CENTRAL_COORDS[perm[0]]),
                    b: format!("{}^{l}", CENTRAL_COORDS[perm[1]]),
                    xi: format!("{}^{l}", CENTRAL_COORDS[perm[2]]),
                    zeta: format!("{}^{l}", CENTRAL_COORDS[perm[3]]),
                    transposed: t,
                });
            }
        }
    }
    let mut passed = 0;
    if let Some(first) = identifications.first() {
        let perm: Vec<usize> = [&first.a, &first.b, &first.xi, &first.zeta]
            .iter()
            .map(|s| CENTRAL_COORDS.iter().position(|c| s.starts_with(c)).expect("coordinate"))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let point: Vec<_> = (0..4)
                .map(|_| {
                    let n: i64 = rng.gen_range(-9..=9);
                    let d: i64 = rng.gen_range(1..=5);
                    ring.from_rational(&BigRational::new(n.into(), d.into()))
                })
                .collect();
            let quantum = as_matrix(first.transposed).map(|row| row.map(|p| pr.eval(&p, &point)));
            let c = super::classical_mu(&ring, &point[perm[0]], &point[perm[1]], &point[perm[2]], &point[perm[3]]);
            if quantum == c {
                passed += 1;
            }
        }
    }
    let beta_l = |i: usize| ci.target.pow(&ci.target.lift(&beta(2, i)), l);
    let inequations_match = ci.images[3] == beta_l(1) && ci.images[4] == beta_l(2);
    Ok(DiagramReport {
        level: l,
        identifications,
        spot_checks: samples,
        spot_checks_passed: passed,
        inequations_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Classical;

    #[test]
    fn mu_is_a_homomorphism() {
        let r = mu_q().unwrap();
        assert_eq!(r.relations.len(), 6);
        assert!(r.verified(), "{r:#?}");
        assert_eq!(r.images[0].1, "(1 - q^-2)*x1*d1 + x2*d2 + 1");
        let unscaled = check_assignment(&MU_IMAGES_UNSCALED).unwrap();
        assert_eq!(unscaled.relations.iter().filter(|c| !c.holds).count(), 3);
    }

    #[test]
    fn frobenius_images_at_three() {
        for c in mu_frobenius(3).unwrap() {
            assert!(c.holds, "{c:?}");
        }
    }

    #[test]
    fn classical_mu_values() {
        let zero = BigRational::from_integer(0.into());
        let m = classical_mu(&Classical, &zero, &zero, &zero, &zero);
        assert_eq!(m, super::super::identity(&Classical));
        let p = PolyRing::new(Classical, 4);
        let v: Vec<_> = (0..4).map(|i| p.var(i)).collect();
        let d = super::super::det(&p, &classical_mu(&p, &v[0], &v[1], &v[2], &v[3]));
        let expected = p.add(&p.add(&p.one(), &p.mul(&v[0], &v[2])), &p.mul(&v[1], &v[3]));
        assert_eq!(d, expected);
    }

    #[test]
    fn diagram_commutes_at_three() {
        let r = diagram_check_mu(3, 10, 1).unwrap();
        assert!(r.commutes(), "{r:#?}");
        // (a, b) are not (x1^l, x2^l): the match swaps positions and momenta.
        assert_eq!(r.identifications.len(), 2);
        assert_eq!(r.identifications[0].a, "d2^3");
        assert_eq!(r.identifications[1].a, "x2^3");
        assert!(r.identifications[1].transposed);
    }
}
