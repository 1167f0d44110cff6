use std::sync::Arc;

use super::*;
use crate::linalg::rat;

fn word(s: &str) -> LyndonWord {
    LyndonWord::new(s.bytes().map(|b| b - b'a').collect()).unwrap()
}

/// Independent Lyndon oracle: enumerate every word of length <= max_len over
/// `d` letters and keep those strictly smaller than all proper suffixes.
fn lyndon_words_brute(d: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut all = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if !w.is_empty() && is_lyndon(&w) {
            all.push(w.clone());
        }
        if w.len() < max_len {
            for l in (0..d).rev() {
                let mut next = w.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    all.sort();
    all
}

#[test]
fn lyndon_words_weight_one() {
    let words = lyndon_words(&alphabet_ab(), 1);
    assert_eq!(
        words.iter().map(ToString::to_string).collect::<Vec<_>>(),
        vec!["a", "b"]
    );
}

#[test]
fn lyndon_words_match_suffix_oracle() {
    for max_len in 1..=7 {
        let duval: Vec<Vec<u8>> = lyndon_words(&alphabet_ab(), max_len)
            .into_iter()
            .map(|w| w.letters().to_vec())
            .collect();
        assert_eq!(duval, lyndon_words_brute(2, max_len), "max_len={max_len}");
    }
    // three letters as well
    let duval: Vec<Vec<u8>> = lyndon_words(&alphabet(&['a', 'b', 'c']), 4)
        .into_iter()
        .map(|w| w.letters().to_vec())
        .collect();
    assert_eq!(duval, lyndon_words_brute(3, 4));
}

#[test]
fn lyndon_words_up_to_three() {
    // frozen from the suffix oracle
    let words = lyndon_words(&alphabet_ab(), 3);
    assert_eq!(
        words.iter().map(ToString::to_string).collect::<Vec<_>>(),
        vec!["a", "aab", "ab", "abb", "b"]
    );
    let counts: Vec<usize> = (1..=3)
        .map(|n| words.iter().filter(|w| w.weight() == n).count())
        .collect();
    assert_eq!(counts, vec![2, 1, 2]);
}

#[test]
fn lyndon_words_length_four() {
    let words = lyndon_words(&alphabet_ab(), 4);
    let len4: Vec<String> = words
        .iter()
        .filter(|w| w.weight() == 4)
        .map(ToString::to_string)
        .collect();
    assert_eq!(len4, vec!["aaab", "aabb", "abbb"]);
}

#[test]
fn occurrence_enumeration_matches_filtered_duval() {
    for weight in 1..=10 {
        let full = lyndon_words(&alphabet_ab(), weight);
        for occ in 0..=weight {
            let filtered: Vec<LyndonWord> = full
                .iter()
                .filter(|w| w.weight() == weight && w.occurrence(1) == occ)
                .cloned()
                .collect();
            assert_eq!(
                lyndon_words_with_occurrence(weight, 1, occ),
                filtered,
                "weight={weight} occ={occ}"
            );
        }
    }
}

#[test]
fn witt_dimension_small_values() {
    assert_eq!(witt_dimension(2, 1), 2);
    // frozen from the enumeration oracle
    assert_eq!(witt_dimension(2, 4), 3);
    assert_eq!(witt_dimension(2, 6), 9);
}

#[test]
fn witt_dimension_matches_enumeration() {
    let words = lyndon_words(&alphabet_ab(), 12);
    for n in 1..=12 {
        let count = words.iter().filter(|w| w.weight() == n).count();
        assert_eq!(witt_dimension(2, n), count, "n={n}");
    }
}

#[test]
fn std_factorization_splits_at_least_suffix() {
    let (u, v) = word("aab").std_factorization();
    assert_eq!((u.to_string(), v.to_string()), ("a".into(), "ab".into()));
    let (u, v) = word("aabab").std_factorization();
    assert_eq!((u.to_string(), v.to_string()), ("aab".into(), "ab".into()));
}

#[test]
fn bracket_of_generators() {
    let engine = FreeLieEngine::new();
    let a = LieElement::generator(0);
    let b = LieElement::generator(1);
    // [b, a] = -(ab)
    let ba = engine.bracket(&b, &a);
    assert_eq!(ba, LieElement::term(word("ab"), rat(-1)));
    // [a, [a, b]] = +(aab)
    let ab = engine.bracket(&a, &b);
    let aab = engine.bracket(&a, &ab);
    assert_eq!(aab, LieElement::word(word("aab")));
}

#[test]
fn bracket_with_itself_vanishes() {
    let engine = FreeLieEngine::new();
    let mut x = LieElement::word(word("ab"));
    x.add_term(word("aab"), rat(3));
    x.add_term(word("b"), rat(-2));
    assert!(engine.bracket(&x, &x).is_zero());
}

#[test]
fn tensor_expand_examples() {
    let engine = FreeLieEngine::new();
    let a = LieElement::generator(0);
    assert_eq!(
        engine.tensor_expand(&a, 8).unwrap(),
        TensorPolynomial::monomial(vec![0], rat(1))
    );
    // word ab -> ab - ba
    let ab = engine
        .tensor_expand(&LieElement::word(word("ab")), 8)
        .unwrap();
    let mut expected = TensorPolynomial::monomial(vec![0, 1], rat(1));
    expected.add_term(vec![1, 0], rat(-1));
    assert_eq!(ab, expected);
    // b_2 -> aab - 2 aba + baa
    let b2 = engine.tensor_expand(&b_r(2), 8).unwrap();
    let mut expected = TensorPolynomial::monomial(vec![0, 0, 1], rat(1));
    expected.add_term(vec![0, 1, 0], rat(-2));
    expected.add_term(vec![1, 0, 0], rat(1));
    assert_eq!(b2, expected);
}

#[test]
fn tensor_expand_cutoff() {
    let engine = FreeLieEngine::new();
    let x = LieElement::word(word("aaaab"));
    assert!(matches!(
        engine.tensor_expand(&x, 4),
        Err(FreeLieError::OracleCutoff {
            weight: 5,
            cutoff: 4
        })
    ));
}

#[test]
fn b_r_examples() {
    let engine = FreeLieEngine::new();
    assert_eq!(b_r(0), LieElement::generator(1));
    assert_eq!(b_r(1), LieElement::term(word("ab"), rat(-1)));
    assert_eq!(b_r(2), LieElement::word(word("aab")));
    // cross-check the closed form against iterated bracketing with `a`
    let a = LieElement::generator(0);
    let mut current = b_r(0);
    for r in 1..=9 {
        current = engine.bracket(&current, &a);
        assert_eq!(current, b_r(r), "r={r}");
    }
}

#[test]
fn bracket_matches_tensor_oracle_on_basis_pairs() {
    let engine = FreeLieEngine::new();
    let words = lyndon_words(&alphabet_ab(), 4);
    for u in &words {
        for v in &words {
            if u.weight() + v.weight() > 7 {
                continue;
            }
            let lhs = engine
                .tensor_expand(
                    &engine.bracket(&LieElement::word(u.clone()), &LieElement::word(v.clone())),
                    8,
                )
                .unwrap();
            let rhs = engine
                .tensor_expand_word(u)
                .commutator(&engine.tensor_expand_word(v));
            assert_eq!(lhs, rhs, "[{u}, {v}]");
        }
    }
}

#[test]
fn high_weight_occurrence_two_bracket_stays_small() {
    // [b_30, b_17]: weight 49, expressible in the two-occurrence words only.
    let engine = FreeLieEngine::new();
    let result = engine.bracket(&b_r(30), &b_r(17));
    assert!(!result.is_zero());
    for (w, _) in result.terms() {
        assert_eq!(w.weight(), 49);
        assert_eq!(w.occurrence(1), 2);
    }
}

#[test]
fn quotient_k_structure() {
    let k = GradedAlgebra::quotient_k();
    let b0 = k.b_r(0);
    let a = k.gen_a();
    // [b_0, a] = b_1
    assert_eq!(k.bracket_elements(&b0, &a), k.b_r(1));
    // [b_3, b_5] = 0
    assert!(k.bracket_elements(&k.b_r(3), &k.b_r(5)).is_zero());
    // weight-5 component is spanned by b_4 alone
    assert_eq!(k.basis(5, None), vec![BasisElem::BLine(4)]);
}

#[test]
fn quotient_j_structure() {
    let j = GradedAlgebra::quotient_j();
    let c10 = j.bracket_elements(&j.b_r(1), &j.b_r(0));
    assert_eq!(c10, AlgebraElement::basis(BasisElem::BPair(1, 0)));
    // [[b_1,b_0], b_0] = 0 (occurrence 3)
    assert!(j.bracket_elements(&c10, &j.b_r(0)).is_zero());
    // [[b_1,b_0], a] = [b_2,b_0] ([b_1,b_1] drops out)
    let expected = AlgebraElement::basis(BasisElem::BPair(2, 0));
    assert_eq!(j.bracket_elements(&c10, &j.gen_a()), expected);
    // [b_0, b_1] = -[b_1, b_0]
    assert_eq!(
        j.bracket_elements(&j.b_r(0), &j.b_r(1)),
        c10.scale(&rat(-1))
    );
}

#[test]
fn quotient_j_occurrence_two_dimensions() {
    let j = GradedAlgebra::quotient_j();
    for w in 3..=14 {
        assert_eq!(j.dim(w, Some(2)), (w - 1) / 2, "weight {w}");
    }
}

#[test]
fn nilpotent_truncation_kills_high_weight() {
    let ab2 = GradedAlgebra::nilpotent_truncation(2);
    assert!(ab2.bracket_elements(&ab2.gen_a(), &ab2.gen_b()).is_zero());

    let n3 = GradedAlgebra::nilpotent_truncation(3);
    let ab = n3.bracket_elements(&n3.gen_a(), &n3.gen_b());
    assert!(!ab.is_zero());
    assert!(n3.bracket_elements(&ab, &n3.gen_a()).is_zero());

    let n4 = GradedAlgebra::nilpotent_truncation(4);
    let total: usize = (1..4).map(|w| n4.dim(w, None)).sum();
    assert_eq!(total, 5);
}

#[test]
fn quotient_axioms_hold() {
    GradedAlgebra::quotient_k().verify_axioms(12).unwrap();
    GradedAlgebra::quotient_j().verify_axioms(12).unwrap();
    GradedAlgebra::nilpotent_truncation(4)
        .verify_axioms(6)
        .unwrap();
    GradedAlgebra::free().verify_axioms(6).unwrap();
}

/// Occurrence-graded brute-force oracle for the quotients: the ideal
/// generated by brackets of occurrence >= c is exactly the span of the basis
/// words of occurrence >= c, so the quotient bracket must agree with the free
/// bracket followed by dropping those words.
fn project_occ_below(x: &LieElement, max_occ: usize) -> LieElement {
    let mut out = LieElement::zero();
    for (w, c) in x.terms() {
        if w.occurrence(1) <= max_occ {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

fn lift_to_free(e: &BasisElem, engine: &FreeLieEngine) -> LieElement {
    match e {
        BasisElem::GenA => LieElement::generator(0),
        BasisElem::BLine(r) => b_r(*r),
        BasisElem::BPair(p, q) => engine.bracket(&b_r(*p), &b_r(*q)),
        BasisElem::Word(w) => LieElement::word(w.clone()),
    }
}

fn check_quotient_against_free(algebra: &GradedAlgebra, max_occ: usize, max_weight: usize) {
    let engine = FreeLieEngine::new();
    for w1 in 1..max_weight {
        for w2 in 1..=(max_weight - w1) {
            for x in algebra.basis(w1, None) {
                for y in algebra.basis(w2, None) {
                    let quotient = algebra.bracket_elements(
                        &AlgebraElement::basis(x.clone()),
                        &AlgebraElement::basis(y.clone()),
                    );
                    let lifted =
                        engine.bracket(&lift_to_free(&x, &engine), &lift_to_free(&y, &engine));
                    let projected = project_occ_below(&lifted, max_occ);
                    let quotient_lifted: LieElement = quotient
                        .terms()
                        .map(|(e, c)| (lift_to_free(e, &engine), c.clone()))
                        .fold(LieElement::zero(), |acc, (elem, c)| {
                            acc.add(&elem.scale(&c))
                        });
                    assert_eq!(
                        quotient_lifted,
                        projected,
                        "[{x}, {y}] in {}",
                        algebra.name()
                    );
                }
            }
        }
    }
}

#[test]
fn quotient_k_matches_brute_force_quotient() {
    check_quotient_against_free(&GradedAlgebra::quotient_k(), 1, 8);
}

#[test]
fn quotient_j_matches_brute_force_quotient() {
    check_quotient_against_free(&GradedAlgebra::quotient_j(), 2, 8);
}

#[test]
fn quotient_k_ad_a_is_bijective_on_b_line() {
    let k = GradedAlgebra::quotient_k();
    for w in 1..=20 {
        let basis = k.basis(w, Some(1));
        assert_eq!(basis.len(), 1);
        let image = k.bracket_elements(&AlgebraElement::basis(basis[0].clone()), &k.gen_a());
        assert_eq!(image, AlgebraElement::basis(BasisElem::BLine(w)));
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = BracketTableCache::new(dir.path());
    let engine = FreeLieEngine::new();
    engine.populate_to_weight(5);
    let stored = engine.memo_len();
    assert!(stored > 0);
    cache.store("free", 5, &engine).unwrap();

    let fresh = FreeLieEngine::new();
    assert_eq!(
        cache.load_into("free", 5, &fresh),
        CacheLoad::Hit { entries: stored }
    );
    assert_eq!(fresh.memo_len(), stored);
    // loaded tables give the same expansions
    let expected = engine.bracket_words(&word("ab"), &word("b"));
    assert_eq!(fresh.bracket_words(&word("ab"), &word("b")), expected);

    assert_eq!(cache.load_into("free", 6, &fresh), CacheLoad::Miss);

    // flip a byte in the payload: checksum must catch it
    let path = dir
        .path()
        .join(format!("free_w5_v{CACHE_FORMAT_VERSION}.json"));
    let mut text = std::fs::read_to_string(&path).unwrap();
    text = text.replacen("\"expansion\":[[\"", "\"expansion\":[[\"z", 1);
    std::fs::write(&path, text).unwrap();
    assert!(matches!(
        cache.load_into("free", 5, &FreeLieEngine::new()),
        CacheLoad::Corrupt { .. }
    ));

    let infos = cache.inspect();
    assert_eq!(infos.len(), 1);
    assert!(!infos[0].valid);
    assert_eq!(cache.clear().unwrap(), 1);
    assert!(cache.inspect().is_empty());
}

#[test]
fn engine_is_shareable_across_threads() {
    let engine = Arc::new(FreeLieEngine::new());
    let words = lyndon_words(&alphabet_ab(), 5);
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let engine = Arc::clone(&engine);
            let words = words.clone();
            std::thread::spawn(move || {
                let mut checks = 0;
                for u in &words {
                    for v in &words {
                        if (u.weight() + v.weight() + i) % 2 == 0 && u < v {
                            let _ = engine.bracket_words(u, v);
                            checks += 1;
                        }
                    }
                }
                checks
            })
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap() > 0);
    }
}
