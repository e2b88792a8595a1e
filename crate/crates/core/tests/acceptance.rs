//! Acceptance suite: one test per top-level criterion, each printing a
//! single PASS line (visible with `--nocapture`) and asserting both the
//! mathematical content and a wall-clock ceiling.

use std::time::{Duration, Instant};

use congruence_kit::congruence::{
    abel_add, abelianize, commutator, is_member, level, GroupVariant,
};
use congruence_kit::exactmat::{
    elementary, mat_inv, mat_mul, sign_flip, BigIntMatrix,
};
use congruence_kit::genwords::{
    build_named, evaluate, gen_set, invert_word, Atom, GenFamilyTag, NamedWord, Word,
};
use congruence_kit::presentation::{
    derived_relator_words, hat_word, relators_gamma2, relators_gamma2hat, rs_rewrite, sub_word,
    verify_relators,
};
use congruence_kit::rewriter::{
    conjugate_rewrite, flatten_to_x2, is_x2_pure, md_m_word, MdmVariant,
};
use congruence_kit::quotients::{
    abelian_structure, enumerate_image, filter_enumerate, verify_quotient_claims, DEFAULT_BUDGET,
};
use congruence_kit::sample;
use congruence_kit::wordsolve2::decompose2;
use congruence_kit::Error;
use num_bigint::BigInt;
use rand::Rng;

fn e(n: usize, i: usize, j: usize, s: i64) -> BigIntMatrix {
    elementary(n, i, j, BigInt::from(s)).unwrap()
}

fn finish(criterion: &str, label: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "criterion {criterion} exceeded its {limit:?} budget: {elapsed:?}"
    );
    println!("criterion {criterion} ({label}): PASS [{elapsed:?}]");
}

#[test]
fn criterion_1_relation_grid() {
    let start = Instant::now();
    let mut instances = 0usize;
    for n in 3..=5usize {
        // Triples: same-row / same-column commutation and the two-step law.
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    if i == j || i == k || j == k {
                        continue;
                    }
                    for s in -5i64..=5 {
                        for t in -5i64..=5 {
                            let eij = e(n, i, j, s);
                            let eik = e(n, i, k, t);
                            assert_eq!(
                                mat_mul(&eij, &eik).unwrap(),
                                mat_mul(&eik, &eij).unwrap()
                            );
                            let ekj = e(n, k, j, t);
                            assert_eq!(
                                mat_mul(&eij, &ekj).unwrap(),
                                mat_mul(&ekj, &eij).unwrap()
                            );
                            let ejk = e(n, j, k, t);
                            assert_eq!(
                                mat_mul(&eij, &ejk).unwrap(),
                                mat_mul(
                                    &mat_mul(&ejk, &eij).unwrap(),
                                    &e(n, i, k, s * t)
                                )
                                .unwrap()
                            );
                            instances += 3;
                        }
                    }
                }
            }
        }
        // Disjoint 4-tuples commute.
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let idx = [i, j, k, l];
                        if (1..4).any(|p| idx[..p].contains(&idx[p])) {
                            continue;
                        }
                        for s in -5i64..=5 {
                            for t in -5i64..=5 {
                                let a = e(n, i, j, s);
                                let b = e(n, k, l, t);
                                assert_eq!(
                                    mat_mul(&a, &b).unwrap(),
                                    mat_mul(&b, &a).unwrap()
                                );
                                instances += 1;
                            }
                        }
                    }
                }
            }
        }
        // Conjugation symmetry over pairs (one exponent).
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                for s in -5i64..=5 {
                    let lhs = mat_mul(
                        &mat_mul(&e(n, j, i, 1), &e(n, i, j, s)).unwrap(),
                        &e(n, j, i, -1),
                    )
                    .unwrap();
                    let rhs = mat_mul(
                        &mat_mul(&e(n, i, j, 1), &e(n, j, i, -s)).unwrap(),
                        &e(n, i, j, -1),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs);
                    instances += 1;
                }
            }
        }
    }
    assert!(instances >= 10_000, "only {instances} instances checked");
    finish(
        "1",
        &format!("relation grid, {instances} instances"),
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_2_conjugated_generator_identities() {
    let start = Instant::now();
    let mut instances = 0usize;
    for n in 3..=5usize {
        for d in 1..=5u64 {
            for m in -3i64..=3 {
                for i in 1..=n {
                    for j in 1..=n {
                        for k in 1..=n {
                            if i == j || i == k || j == k {
                                continue;
                            }
                            let target = evaluate(
                                &Word::from_atoms(
                                    n,
                                    vec![
                                        Atom::elem(j, i, m),
                                        Atom::elem(i, j, d as i64),
                                        Atom::elem(j, i, -m),
                                    ],
                                )
                                .unwrap(),
                            );
                            for variant in [MdmVariant::V1, MdmVariant::V2] {
                                let w = md_m_word(variant, n, d, m, i, j, k).unwrap();
                                assert_eq!(
                                    evaluate(&w),
                                    target,
                                    "variant {variant:?} n={n} d={d} m={m} ({i},{j},{k})"
                                );
                                instances += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    finish(
        "2",
        &format!("conjugated-generator identities, {instances} instances"),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_3_conjugation_closure() {
    let start = Instant::now();
    let mut instances = 0usize;
    for n in 3..=4usize {
        for d in [2u64, 3] {
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    for m in 0..=1i64 {
                        for i2 in 1..=n {
                            for j2 in 1..=n {
                                if i2 == j2 {
                                    continue;
                                }
                                for eps in [1i64, -1] {
                                    let member = Word::from_atoms(
                                        n,
                                        vec![
                                            Atom::elem(j, i, m),
                                            Atom::elem(i, j, d as i64),
                                            Atom::elem(j, i, -m),
                                        ],
                                    )
                                    .unwrap();
                                    let conj = e(n, i2, j2, eps);
                                    let target = mat_mul(
                                        &mat_mul(&conj, &evaluate(&member)).unwrap(),
                                        &e(n, i2, j2, -eps),
                                    )
                                    .unwrap();
                                    let cw =
                                        conjugate_rewrite(m, i, j, i2, j2, eps, n, d).unwrap();
                                    assert_eq!(cw.evaluate(), target);
                                    let flat = flatten_to_x2(&cw, d).unwrap();
                                    assert_eq!(flat.evaluate(), target);
                                    assert!(is_x2_pure(&flat, d));
                                    instances += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    finish(
        "3",
        &format!("conjugation closure, {instances} cases"),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_abelianization() {
    let start = Instant::now();
    let mut rng = sample::rng(sample::DEFAULT_SEED);
    for (n, d) in [(3usize, 2u64), (3, 3), (4, 2)] {
        // Homomorphism on random member pairs.
        for _ in 0..1000 {
            let x = sample::random_member(&mut rng, n, d, 6);
            let y = sample::random_member(&mut rng, n, d, 6);
            let xy = mat_mul(&x, &y).unwrap();
            assert_eq!(
                abelianize(&xy, d).unwrap(),
                abel_add(&abelianize(&x, d).unwrap(), &abelianize(&y, d).unwrap()).unwrap()
            );
        }
        // Kernel criterion on random words.
        for _ in 0..1000 {
            let x = sample::random_member(&mut rng, n, d, 5);
            let phi = abelianize(&x, d).unwrap();
            assert_eq!(phi.is_zero(), level(&x).divisible_by(d * d));
        }
        // Generator images are exactly the n²−1 unit vectors.
        let fam = gen_set(GenFamilyTag::XWithFk, n, d).unwrap();
        assert_eq!(fam.members.len(), n * n - 1);
        let mut seen = std::collections::BTreeSet::new();
        for g in &fam.members {
            let phi = abelianize(&evaluate(&g.word), d).unwrap();
            let nonzero: Vec<(String, u64)> =
                phi.coordinates().filter(|(_, v)| *v != 0).collect();
            assert_eq!(nonzero.len(), 1, "{} not a unit vector", g.label);
            assert_eq!(nonzero[0].1, 1 % d, "{} has wrong coordinate", g.label);
            seen.insert(nonzero[0].0.clone());
        }
        assert_eq!(seen.len(), n * n - 1);
    }
    finish("4", "abelianization", start, Duration::from_secs(30));
}

#[test]
fn criterion_5_solver_soundness() {
    let start = Instant::now();
    let bound = BigInt::from(1_000_000i64);
    let mut rng = sample::rng(sample::DEFAULT_SEED);
    for d in 3u64..=6 {
        let fam = gen_set(GenFamilyTag::SolverD, 2, d).unwrap();
        for case in 0..200 {
            // Half generator products, half random conjugates of e(i,j)^±d.
            let a = if case % 2 == 0 {
                let mut a = BigIntMatrix::identity(2);
                for _ in 0..12 {
                    let pick = rng.gen_range(0..fam.members.len());
                    let w = if rng.gen_bool(0.5) {
                        fam.members[pick].word.clone()
                    } else {
                        invert_word(&fam.members[pick].word)
                    };
                    let next = mat_mul(&a, &evaluate(&w)).unwrap();
                    if next.max_abs_entry() > bound {
                        break;
                    }
                    a = next;
                }
                a
            } else {
                loop {
                    let g = sample::random_sl_element(&mut rng, 2, 6);
                    let (i, j) = if rng.gen_bool(0.5) { (1, 2) } else { (2, 1) };
                    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                    let x = mat_mul(
                        &mat_mul(&g, &e(2, i, j, s * d as i64)).unwrap(),
                        &mat_inv(&g).unwrap(),
                    )
                    .unwrap();
                    if x.max_abs_entry() <= bound {
                        break x;
                    }
                }
            };
            let one = Instant::now();
            let dec = decompose2(&a, d).unwrap();
            assert!(
                one.elapsed() < Duration::from_secs(1),
                "instance over 1s at d={d}"
            );
            assert_eq!(evaluate(&dec.word), a);
            for (label, _) in &dec.factors {
                assert!(fam.member(label).is_some(), "foreign factor {label}");
            }
        }
    }
    finish("5", "solver soundness, 800 instances", start, Duration::from_secs(60));
}

#[test]
fn criterion_6_presentation_soundness() {
    let start = Instant::now();
    for n in 2..=5usize {
        let report = verify_relators(&relators_gamma2hat(n).unwrap());
        assert!(report.all_identity, "GL side n={n}: {:?}", report.failures);
        let report = verify_relators(&relators_gamma2(n).unwrap());
        assert!(report.all_identity, "SL side n={n}: {:?}", report.failures);
    }
    let n = 3;
    let mut rng = sample::rng(sample::DEFAULT_SEED);
    for _ in 0..1000 {
        let w = sample::random_hat_word(&mut rng, n, 25);
        let rewritten = rs_rewrite(n, &w).unwrap();
        assert_eq!(
            evaluate(&sub_word(n, &rewritten).unwrap()),
            evaluate(&hat_word(n, &w).unwrap())
        );
    }
    for n in 3..=5usize {
        for j in 2..=n {
            for k in 2..=n {
                if j != k {
                    let (lhs, rhs) = derived_relator_words(n, j, k).unwrap();
                    assert_eq!(evaluate(&lhs), evaluate(&rhs));
                }
            }
        }
    }
    finish("6", "presentation soundness", start, Duration::from_secs(30));
}

#[test]
fn criterion_7_quotient_orders_and_structure() {
    let start = Instant::now();
    let b = DEFAULT_BUDGET;

    let t = enumerate_image(3, 1, 2, b).unwrap();
    assert_eq!(t.order(), 168);
    assert_eq!(t.elements, filter_enumerate(3, 1, 2).unwrap());

    let t = enumerate_image(3, 2, 4, b).unwrap();
    assert_eq!(t.order(), 256);
    assert_eq!(abelian_structure(&t).unwrap().factors, vec![2; 8]);

    let t = enumerate_image(3, 3, 9, b).unwrap();
    assert_eq!(t.order(), 6561);
    assert_eq!(abelian_structure(&t).unwrap().factors, vec![3; 8]);

    assert_eq!(enumerate_image(2, 1, 6, b).unwrap().order(), 144);
    assert_eq!(enumerate_image(2, 1, 2, b).unwrap().order(), 6);
    assert_eq!(enumerate_image(2, 1, 3, b).unwrap().order(), 24);

    let r = verify_quotient_claims(3, 2, 3, b).unwrap();
    assert!(r.all_pass, "{:?}", r.failures);
    assert!(r.census_match);
    assert_eq!(r.orders["image(3,1,3)"], 5616);
    assert_eq!(r.orders["image(3,2,6)"], 5616);

    finish("7", "quotient orders and structure", start, Duration::from_secs(120));
}

#[test]
fn criterion_8_commutator_levels() {
    let start = Instant::now();
    let n = 3;
    let mut rng = sample::rng(sample::DEFAULT_SEED);
    for (d1, d2) in [(2u64, 2u64), (2, 3), (3, 2), (3, 3)] {
        for _ in 0..250 {
            let x = sample::random_member(&mut rng, n, d1, 5);
            let y = sample::random_member(&mut rng, n, d2, 5);
            let c = commutator(&x, &y).unwrap();
            assert!(
                level(&c).divisible_by(d1 * d2),
                "level {} not divisible by {}",
                level(&c),
                d1 * d2
            );
        }
    }
    // Mixed GL/SL commutators at n = 2 decompose at level 6.
    for _ in 0..50 {
        let mut x = BigIntMatrix::identity(2);
        for _ in 0..4 {
            let next = if rng.gen_bool(0.25) {
                mat_mul(&x, &sign_flip(2, rng.gen_range(1..=2)).unwrap()).unwrap()
            } else {
                let (i, j) = if rng.gen_bool(0.5) { (1, 2) } else { (2, 1) };
                let s = rng.gen_range(-2i64..=2) * 2;
                mat_mul(&x, &e(2, i, j, s)).unwrap()
            };
            x = next;
        }
        assert!(is_member(&x, 2, GroupVariant::Gl).unwrap());
        let y = sample::random_member(&mut rng, 2, 3, 4);
        let c = commutator(&x, &y).unwrap();
        assert!(level(&c).divisible_by(6));
        let dec = decompose2(&c, 6).unwrap();
        assert_eq!(evaluate(&dec.word), c);
    }
    finish("8", "commutator levels", start, Duration::from_secs(60));
}

#[test]
fn criterion_9_negative_controls() {
    let start = Instant::now();

    // Corrupted relator is flagged.
    let mut rs = relators_gamma2(3).unwrap();
    let mut w = rs[4].word.clone();
    w.push(Atom::elem(2, 3, 1));
    rs[4].word = w;
    let report = verify_relators(&rs);
    assert!(!report.all_identity);
    assert_eq!(report.failures.len(), 1);

    // Non-members are rejected with the membership error.
    let not_member = BigIntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap();
    assert!(matches!(
        decompose2(&not_member, 3),
        Err(Error::NotMember(_))
    ));
    assert!(matches!(
        abelianize(&not_member, 2),
        Err(Error::NotMember(_))
    ));

    // Unsupported level for the two-by-two solver.
    let member7 = e(2, 1, 2, 7);
    assert!(matches!(decompose2(&member7, 7), Err(Error::Unsupported(_))));
    assert!(matches!(
        gen_set(GenFamilyTag::SolverD, 2, 7),
        Err(Error::Unsupported(_))
    ));

    // Unsupported enumeration parameters.
    assert!(matches!(
        enumerate_image(2, 7, 14, DEFAULT_BUDGET),
        Err(Error::Unsupported(_))
    ));

    // Flip words have determinant −1 and are rejected by the rewriter.
    assert!(matches!(
        rs_rewrite(3, &[congruence_kit::presentation::HatGen::F { k: 2 }]),
        Err(Error::NotMember(_))
    ));

    // A named-word builder rejects out-of-range indices.
    assert!(build_named(3, &NamedWord::BigE { i: 1, j: 5 }).is_err());

    finish("9", "negative controls", start, Duration::from_secs(10));
}
