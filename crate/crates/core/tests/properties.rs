//! Property tests over random inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qweyl::center::{compute_v_w, compute_z, oq_root_algebra, products_up_to, span_rank};
use qweyl::coefficients::{specialize, Classical, CoeffRing, GenericQ, QLaurent, RootOfUnity};
use qweyl::engine::{Algebra, Monomial, NCElement};
use qweyl::expr::{format_element, parse_element, Style};
use qweyl::fibers::{locus_sweep, sample_character, FiberAlgebra, FiberStructure, SampleKind};
use qweyl::momentmaps::{classical_phi, inverse, mat_mul, mu_hom, Arith, Mat2};
use qweyl::poisson::{poly_ring, Poly, Semiclassical};
use qweyl::presentations::{by_name, dq_cn, dq_gl2_plus, oq_gl2_plus};

type Words = Vec<(Vec<usize>, i64, i64)>;

/// Up to four terms `c q^k w` with words of length at most `len`.
fn words(ngens: usize, len: usize) -> impl Strategy<Value = Words> {
    prop::collection::vec(
        (prop::collection::vec(0..ngens, 0..=len), -3i64..=3, -2i64..=2),
        1..=4,
    )
}

fn build<R: CoeffRing>(alg: &Algebra<R>, ws: &Words) -> NCElement<R::Elem> {
    let mut e = alg.zero();
    for (w, c, k) in ws {
        let coeff = alg.ring().from_laurent(&QLaurent::from_pairs(&[(*k, *c)]));
        e = alg.add(&e, &alg.scale(&alg.normal_form(w), &coeff));
    }
    e
}

fn laurent() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-4i64..=4, -5i64..=5), 1..=4).prop_map(|p| QLaurent::from_pairs(&p))
}

fn generic(name: &str) -> Algebra<GenericQ> {
    Algebra::new(by_name(name).unwrap(), GenericQ)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_division_inverts_multiplication(a in laurent(), b in laurent()) {
        prop_assume!(!b.is_zero());
        let prod = CoeffRing::mul(&GenericQ, &a, &b);
        prop_assert_eq!(prod.exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn specialization_is_multiplicative(a in laurent(), b in laurent(), l in prop::sample::select(vec![3u32, 5, 7, 9])) {
        let ring = RootOfUnity::new(l).unwrap();
        let lhs = specialize(&CoeffRing::mul(&GenericQ, &a, &b), l).unwrap();
        let rhs = CoeffRing::mul(&ring, &specialize(&a, l).unwrap(), &specialize(&b, l).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weyl_multiplication_is_associative(a in words(4, 3), b in words(4, 3), c in words(4, 3)) {
        let alg = generic("dq2");
        let (a, b, c) = (build(&alg, &a), build(&alg, &b), build(&alg, &c));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn reflection_algebra_multiplication_is_associative(a in words(4, 3), b in words(4, 3), c in words(4, 3)) {
        let alg = generic("oq_gl2_plus");
        let (a, b, c) = (build(&alg, &a), build(&alg, &b), build(&alg, &c));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn heisenberg_double_multiplication_is_associative(a in words(8, 2), b in words(8, 2), c in words(8, 2)) {
        let alg = generic("dq_gl2_plus");
        let (a, b, c) = (build(&alg, &a), build(&alg, &b), build(&alg, &c));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    /// Every split of a word reduces to the same normal form.
    #[test]
    fn normal_form_ignores_bracketing(w in prop::collection::vec(0usize..6, 0..=6)) {
        let alg = generic("dq3");
        let whole = alg.normal_form(&w);
        for k in 0..=w.len() {
            prop_assert_eq!(&alg.mul(&alg.normal_form(&w[..k]), &alg.normal_form(&w[k..])), &whole);
        }
    }

    /// A product of two monomials takes `O(degree^2)` rewrite steps on a cold cache.
    #[test]
    fn rewriting_terminates_quickly(a in prop::collection::vec(0u32..=2, 4), b in prop::collection::vec(0u32..=2, 4)) {
        let alg = generic("dq2");
        let (ma, mb) = (Monomial::from_exponents(&a), Monomial::from_exponents(&b));
        let deg = (ma.degree() + mb.degree()).max(1) as u64;
        alg.mul_monomials(&ma, &mb);
        prop_assert!(alg.steps() <= 8 * deg * deg, "{} steps for degree {}", alg.steps(), deg);
    }

    #[test]
    fn printing_round_trips(ws in words(4, 3), style in prop::sample::select(vec![Style::Ascii, Style::Unicode])) {
        let alg = generic("dq2");
        let e = build(&alg, &ws);
        let text = format_element(alg.ring(), alg.presentation().generators(), &e, style);
        prop_assert_eq!(parse_element(&alg, &text).unwrap(), e);
    }

    #[test]
    fn printing_round_trips_at_roots_of_unity(ws in words(4, 4)) {
        let alg = oq_root_algebra(5).unwrap();
        let e = build(&alg, &ws);
        let text = qweyl::expr::show(&alg, &e);
        prop_assert_eq!(parse_element(&alg, &text).unwrap(), e);
    }

    #[test]
    fn printing_round_trips_in_heisenberg_double(ws in words(8, 2)) {
        let alg = generic("dq_gl2_plus");
        let e = build(&alg, &ws);
        let text = qweyl::expr::show(&alg, &e);
        prop_assert_eq!(parse_element(&alg, &text).unwrap(), e);
    }

    #[test]
    fn classical_phi_is_conjugation_equivariant(entries in prop::collection::vec(-6i64..=6, 12)) {
        let f = Classical;
        let r = |i: usize| BigRational::from_integer(BigInt::from(entries[i]));
        let a: Mat2<BigRational> = [[r(0), r(1)], [r(2), r(3)]];
        let b: Mat2<BigRational> = [[r(4), r(5)], [r(6), r(7)]];
        let g: Mat2<BigRational> = [[r(8), r(9)], [r(10), r(11)]];
        let (Some(_), Some(_), Some(gi)) = (inverse(&f, &a), inverse(&f, &b), inverse(&f, &g)) else {
            return Ok(());
        };
        let conj = |m: &Mat2<BigRational>| mat_mul(&f, &mat_mul(&f, &g, m), &gi);
        let lhs = classical_phi(&f, &conj(&a), &conj(&b)).unwrap();
        let rhs = conj(&classical_phi(&f, &a, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn mu_is_multiplicative_on_words(w1 in prop::collection::vec(0usize..4, 0..=4), w2 in prop::collection::vec(0usize..4, 0..=4)) {
        let source = generic("oq_gl2_plus");
        let target = generic("dq2");
        let hom = mu_hom(&target).unwrap();
        let img = |w: &[usize]| target.apply_hom(&hom, &source.normal_form(w)).unwrap();
        let joined: Vec<usize> = w1.iter().chain(&w2).copied().collect();
        let product = target.ore_mul(&img(&w1), &img(&w2)).unwrap();
        prop_assert!(target.ore_eq(&img(&joined), &product).unwrap());
    }

    #[test]
    fn fiber_dimension_is_l_to_the_2n(seed in any::<u64>(), case in prop::sample::select(vec![(1usize, 3u32), (1, 5), (2, 3)])) {
        let (n, l) = case;
        let structure = FiberStructure::new(n, l).unwrap();
        let ring = structure.ring().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = sample_character(&ring, n, SampleKind::Inside, &mut rng);
        let f = FiberAlgebra::new(structure.clone(), ch.clone()).unwrap();
        prop_assert_eq!(f.dimension(), (l as usize).pow(2 * n as u32));
        // l-th powers of generators act by their character values.
        let alg = Algebra::new(dq_cn(n).unwrap(), ring.clone());
        let one = structure.basis().iter().position(|m| m.is_one()).unwrap();
        let values: Vec<_> = ch.x.iter().chain(&ch.d).cloned().collect();
        for (g, v) in values.iter().enumerate() {
            let image = f.reduce(&alg.pow(&alg.generator(g), l));
            let mut expected = BTreeMap::new();
            if !CoeffRing::is_zero(&ring, v) {
                expected.insert(one, v.clone());
            }
            prop_assert_eq!(image, expected);
        }
    }

    #[test]
    fn semiclassical_bracket_is_a_biderivation(
        f in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 1..=3),
        g in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 1..=3),
        h in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 1..=3),
    ) {
        let pr = poly_ring(2);
        let poly = |t: &Vec<(usize, usize, i64)>| -> Poly {
            t.iter().fold(pr.zero(), |acc, &(i, j, c)| {
                let c = pr.constant(BigRational::from_integer(BigInt::from(c)));
                pr.add(&acc, &pr.mul(&c, &pr.mul(&pr.var(i), &pr.var(j))))
            })
        };
        let (f, g, h) = (poly(&f), poly(&g), poly(&h));
        let s = Semiclassical::new(2).unwrap();
        let lhs = s.bracket(&f, &pr.mul(&g, &h)).unwrap();
        let rhs = pr.add(
            &pr.mul(&s.bracket(&f, &g).unwrap(), &h),
            &pr.mul(&g, &s.bracket(&f, &h).unwrap()),
        );
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn odd_levels_separate_q_squared_powers() {
    for l in (3..=15).step_by(2) {
        for k in 1..l {
            let v = specialize(&QLaurent::from_pairs(&[(2 * k as i64, 1), (0, -1)]), l).unwrap();
            assert!(!v.is_zero(), "q^{} - 1 vanishes at level {l}", 2 * k);
        }
    }
}

#[test]
fn weyl_commutators_vanish_at_q_equal_one() {
    for n in 1..=3 {
        let alg = generic(&format!("dq{n}"));
        for i in 0..alg.ngens() {
            for j in 0..alg.ngens() {
                let c = alg.commutator(&alg.generator(i), &alg.generator(j));
                assert!(c.terms().all(|(_, v)| v.at_one() == BigRational::from_integer(0.into())));
            }
        }
    }
}

#[test]
fn scalar_commuters_match_their_declared_weights() {
    for name in ["dq1", "dq2", "dq3", "oq_gl2", "dq_gl2"] {
        let alg = generic(name);
        for s in alg.presentation().commuters().iter().filter(|s| s.element.is_some()) {
            let e = alg.lift(s.element.as_ref().unwrap());
            for g in 0..alg.ngens() {
                assert!(alg.q_commutes(&e, &alg.generator(g), s.weights[g]), "{name}: {} vs generator {g}", s.name);
            }
        }
    }
}

#[test]
fn quantum_determinant_and_trace_are_central() {
    let alg = generic("oq_gl2_plus");
    assert!(alg.is_central(&alg.named("detq").unwrap()));
    assert!(alg.is_central(&alg.named("trq").unwrap()));
}

#[test]
fn left_and_right_ideals_of_d_agree() {
    let alg = generic("oq_gl2_plus");
    let d = alg.generator(3);
    for g in 0..4 {
        for e in [alg.mul(&d, &alg.generator(g)), alg.mul(&alg.generator(g), &d)] {
            assert!(e.monomials().all(|m| m.exp(3) >= 1));
        }
    }
}

#[test]
fn both_halves_of_the_double_reproduce_the_reflection_algebra() {
    let oq = oq_gl2_plus().unwrap();
    let dq = dq_gl2_plus().unwrap();
    for offset in [0, 4] {
        for j in 0..4 {
            for i in 0..j {
                let big = dq.rule(j + offset, i + offset).unwrap();
                let small: Vec<(Vec<u32>, QLaurent)> = oq
                    .rule(j, i)
                    .unwrap()
                    .terms()
                    .map(|(m, c)| {
                        let mut e = vec![0; 8];
                        e[offset..offset + 4].copy_from_slice(m.exponents());
                        (e, c.clone())
                    })
                    .collect();
                let big: Vec<(Vec<u32>, QLaurent)> = big.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect();
                assert_eq!(big, small, "offset {offset}, rule ({j}, {i})");
            }
        }
    }
}

#[test]
fn center_generators_commute_and_are_independent() {
    for (n, l) in [(1usize, 3u32), (2, 3), (1, 5)] {
        let alg = Algebra::new(dq_cn(n).unwrap(), RootOfUnity::new(l).unwrap());
        let gens: Vec<_> = (0..alg.ngens()).map(|g| alg.pow(&alg.generator(g), l)).collect();
        for a in &gens {
            for b in &gens {
                assert!(alg.commutator(a, b).is_zero());
            }
        }
        let prods = products_up_to(&alg, &gens, 2 * l);
        assert_eq!(span_rank(alg.ring(), &prods), prods.len(), "N = {n}, l = {l}");
    }
}

#[test]
fn coordinate_subalgebras_commute() {
    for l in [3, 5] {
        let alg = oq_root_algebra(l).unwrap();
        let z = compute_z(&alg, l).unwrap();
        let mut family = vec![z];
        family.extend((1..4).map(|g| alg.pow(&alg.generator(g), l)));
        for a in &family {
            for b in &family {
                assert!(alg.commutator(a, b).is_zero());
            }
        }
    }
    let (alg, vw) = compute_v_w(3).unwrap();
    // v and w stand in for x11^l and d11^l, which are not central.
    let mut family = vec![vw.v, vw.w];
    family.extend([1, 2, 3, 5, 6, 7].map(|g| alg.pow(&alg.generator(g), 3)));
    for a in &family {
        for b in &family {
            assert!(alg.commutator(a, b).is_zero());
        }
    }
    for g in [0, 4] {
        assert!(!alg.is_central(&alg.pow(&alg.generator(g), 3)));
    }
}

/// Twenty-five characters per vanishing pattern at N = 2, l = 3; the verdict
/// is the same across each class.
#[test]
fn azumaya_verdict_depends_only_on_the_pattern() {
    let structure = FiberStructure::new(2, 3).unwrap();
    let ring = structure.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut verdicts: BTreeMap<Vec<bool>, Vec<bool>> = BTreeMap::new();
    for kind in [SampleKind::Inside, SampleKind::Vanishing(1), SampleKind::Vanishing(2)] {
        for _ in 0..25 {
            let ch = sample_character(&ring, 2, kind, &mut rng);
            let pattern = ch.pattern(&ring);
            let cert = FiberAlgebra::new(structure.clone(), ch).unwrap().azumaya_certificate();
            verdicts.entry(pattern).or_default().push(cert.azumaya);
        }
    }
    for (pattern, v) in &verdicts {
        assert!(v.iter().all(|x| *x == v[0]), "pattern {pattern:?}: {v:?}");
        assert_eq!(v[0], !pattern.iter().any(|z| *z));
    }
}

#[test]
fn sweeps_are_deterministic() {
    let a = serde_json::to_string(&locus_sweep(2, 3, 5, 3, 99).unwrap()).unwrap();
    let b = serde_json::to_string(&locus_sweep(2, 3, 5, 3, 99).unwrap()).unwrap();
    assert_eq!(a, b);
}
