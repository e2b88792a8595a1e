//! Relator families for the level-2 congruence subgroup of GL(n;ℤ) and
//! SL(n;ℤ), and the transversal rewriting between their generating sets.
//!
//! Generators: E(i,j) = e(i,j)², the diagonal sign flips F(k) (GL side), and
//! F(1,k) (SL side, realized by a word in elementary matrices that evaluates
//! to the diagonal matrix with −1 at positions 1 and k).
//!
//! * [`relators_gamma2hat`] instantiates the five relator families
//!   (`hat-a` … `hat-e`) of the GL-side presentation on {E(i,j), F(k)}.
//! * [`relators_gamma2`] instantiates the four families (`g2-1` … `g2-4`)
//!   of the SL-side presentation on {E(i,j), F(1,k)}.
//! * [`rs_rewrite`] rewrites a word over {E(i,j), F(k)} into one over
//!   {E(i,j), F(1,k)} by Schreier rewriting with the two-element transversal
//!   {I, F(1)}, tracking the coset by the running determinant sign.
//!
//! Every relator is verifiable by exact evaluation ([`verify_relators`]);
//! completeness of the presentations (that these relators suffice) is not
//! decided here — that is the deep direction and out of scope.

use std::collections::BTreeMap;

use crate::genwords::{build_named, evaluate, invert_word, Atom, NamedWord, Word};
use crate::{Error, Result};

/// One instantiated relator: family tag, the kind of formula within the
/// family, the index tuple, and the full word over elementary/flip atoms.
#[derive(Clone, Debug)]
pub struct Relator {
    pub family: String,
    pub kind: String,
    pub indices: Vec<usize>,
    pub word: Word,
}

impl Relator {
    /// One JSON line: {"family":…, "kind":…, "indices":…, "word":…}.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "family": self.family,
            "kind": self.kind,
            "indices": self.indices,
            "word": self.word.to_grammar_string(),
        })
        .to_string()
    }
}

/// E(i,j) = e(i,j)² as a word.
fn big_e(n: usize, i: usize, j: usize) -> Word {
    build_named(n, &NamedWord::BigE { i, j }).expect("valid indices")
}

/// F(k) as a one-atom word.
fn flip(n: usize, k: usize) -> Word {
    Word::from_atoms(n, vec![Atom::flip(k)]).expect("valid index")
}

/// F(1,k) as its defining word in elementary generators.
fn big_f1k(n: usize, k: usize) -> Word {
    build_named(n, &NamedWord::BigF { k: 1, l: k }).expect("valid indices")
}

/// Group commutator of words: a b a⁻¹ b⁻¹.
fn comm(a: &Word, b: &Word) -> Word {
    a.concat(b).concat(&invert_word(a)).concat(&invert_word(b))
}

fn square(w: &Word) -> Word {
    w.concat(w)
}

/// The six-generator cycle (E(j,i)⁻¹E(i,j) E(k,j)⁻¹E(j,k) E(i,k)⁻¹E(k,i))².
fn cycle_squared(n: usize, i: usize, j: usize, k: usize) -> Word {
    let w = invert_word(&big_e(n, j, i))
        .concat(&big_e(n, i, j))
        .concat(&invert_word(&big_e(n, k, j)))
        .concat(&big_e(n, j, k))
        .concat(&invert_word(&big_e(n, i, k)))
        .concat(&big_e(n, k, i));
    square(&w)
}

fn ordered_pairs(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in lo..=hi {
        for j in lo..=hi {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

fn ordered_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && i != k && j != k {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Unsupported(format!(
            "presentations are defined for n ≥ 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Relator families of the presentation of the level-2 congruence subgroup
/// of GL(n;ℤ) on generators {E(i,j), F(k)}, instantiated over all admissible
/// index tuples in lexicographic order.
pub fn relators_gamma2hat(n: usize) -> Result<Vec<Relator>> {
    check_n(n)?;
    let mut out = Vec::new();
    let push = |out: &mut Vec<Relator>, family: &str, kind: &str, indices: Vec<usize>, word: Word| {
        out.push(Relator {
            family: family.into(),
            kind: kind.into(),
            indices,
            word,
        });
    };
    // (a) F(i)².
    for i in 1..=n {
        push(&mut out, "hat-a", "F(i)^2", vec![i], square(&flip(n, i)));
    }
    // (b) (F(i)F(j))², (E(i,j)F(i))², (E(i,j)F(j))² over ordered pairs.
    for (i, j) in ordered_pairs(1, n) {
        push(
            &mut out,
            "hat-b",
            "(F(i)*F(j))^2",
            vec![i, j],
            square(&flip(n, i).concat(&flip(n, j))),
        );
        push(
            &mut out,
            "hat-b",
            "(E(i,j)*F(i))^2",
            vec![i, j],
            square(&big_e(n, i, j).concat(&flip(n, i))),
        );
        push(
            &mut out,
            "hat-b",
            "(E(i,j)*F(j))^2",
            vec![i, j],
            square(&big_e(n, i, j).concat(&flip(n, j))),
        );
    }
    // (c) commutator relators over ordered triples.
    for (i, j, k) in ordered_triples(n) {
        push(
            &mut out,
            "hat-c",
            "[E(i,j),E(i,k)]",
            vec![i, j, k],
            comm(&big_e(n, i, j), &big_e(n, i, k)),
        );
        push(
            &mut out,
            "hat-c",
            "[E(i,j),E(k,j)]",
            vec![i, j, k],
            comm(&big_e(n, i, j), &big_e(n, k, j)),
        );
        push(
            &mut out,
            "hat-c",
            "[E(i,j),E(j,k)]*E(i,k)^-2",
            vec![i, j, k],
            comm(&big_e(n, i, j), &big_e(n, j, k))
                .concat(&invert_word(&square(&big_e(n, i, k)))),
        );
        push(
            &mut out,
            "hat-c",
            "[E(i,j),F(k)]",
            vec![i, j, k],
            comm(&big_e(n, i, j), &flip(n, k)),
        );
    }
    // (d) disjoint commutators over ordered 4-tuples.
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let idx = [i, j, k, l];
                    if (1..4).all(|p| !idx[..p].contains(&idx[p])) {
                        push(
                            &mut out,
                            "hat-d",
                            "[E(i,j),E(k,l)]",
                            idx.to_vec(),
                            comm(&big_e(n, i, j), &big_e(n, k, l)),
                        );
                    }
                }
            }
        }
    }
    // (e) the squared cycle for i < j < k.
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                push(
                    &mut out,
                    "hat-e",
                    "cycle(i,j,k)^2",
                    vec![i, j, k],
                    cycle_squared(n, i, j, k),
                );
            }
        }
    }
    Ok(out)
}

/// Relator families of the presentation of the level-2 congruence subgroup
/// of SL(n;ℤ) on generators {E(i,j), F(1,k)}. F(1,k) occurrences are
/// expanded through their defining elementary word.
pub fn relators_gamma2(n: usize) -> Result<Vec<Relator>> {
    check_n(n)?;
    let mut out = Vec::new();
    let push = |out: &mut Vec<Relator>, family: &str, kind: &str, indices: Vec<usize>, word: Word| {
        out.push(Relator {
            family: family.into(),
            kind: kind.into(),
            indices,
            word,
        });
    };
    // (1) F(1,i)², [E(1,i),F(1,i)], [E(i,1),F(1,i)] for i = 2..n.
    for i in 2..=n {
        push(&mut out, "g2-1", "F(1,i)^2", vec![i], square(&big_f1k(n, i)));
        push(
            &mut out,
            "g2-1",
            "[E(1,i),F(1,i)]",
            vec![i],
            comm(&big_e(n, 1, i), &big_f1k(n, i)),
        );
        push(
            &mut out,
            "g2-1",
            "[E(i,1),F(1,i)]",
            vec![i],
            comm(&big_e(n, i, 1), &big_f1k(n, i)),
        );
    }
    if n >= 3 {
        // (2) elementary commutators over all ordered triples…
        for (i, j, k) in ordered_triples(n) {
            push(
                &mut out,
                "g2-2",
                "[E(i,j),E(i,k)]",
                vec![i, j, k],
                comm(&big_e(n, i, j), &big_e(n, i, k)),
            );
            push(
                &mut out,
                "g2-2",
                "[E(i,j),E(k,j)]",
                vec![i, j, k],
                comm(&big_e(n, i, j), &big_e(n, k, j)),
            );
            push(
                &mut out,
                "g2-2",
                "[E(i,j),E(j,k)]*E(i,k)^-2",
                vec![i, j, k],
                comm(&big_e(n, i, j), &big_e(n, j, k))
                    .concat(&invert_word(&square(&big_e(n, i, k)))),
            );
        }
        // …plus the F(1,·) interaction squares over ordered pairs from 2..n.
        for (i, j) in ordered_pairs(2, n) {
            push(
                &mut out,
                "g2-2",
                "(F(1,i)*F(1,j))^2",
                vec![i, j],
                square(&big_f1k(n, i).concat(&big_f1k(n, j))),
            );
            push(
                &mut out,
                "g2-2",
                "(E(1,i)*F(1,j))^2",
                vec![i, j],
                square(&big_e(n, 1, i).concat(&big_f1k(n, j))),
            );
            push(
                &mut out,
                "g2-2",
                "(E(i,j)*F(1,j))^2",
                vec![i, j],
                square(&big_e(n, i, j).concat(&big_f1k(n, j))),
            );
            push(
                &mut out,
                "g2-2",
                "(E(i,1)*F(1,j))^2",
                vec![i, j],
                square(&big_e(n, i, 1).concat(&big_f1k(n, j))),
            );
            push(
                &mut out,
                "g2-2",
                "(E(i,j)*F(1,i))^2",
                vec![i, j],
                square(&big_e(n, i, j).concat(&big_f1k(n, i))),
            );
        }
    }
    // (3) disjoint commutators over ordered 4-tuples.
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let idx = [i, j, k, l];
                    if (1..4).all(|p| !idx[..p].contains(&idx[p])) {
                        push(
                            &mut out,
                            "g2-3",
                            "[E(i,j),E(k,l)]",
                            idx.to_vec(),
                            comm(&big_e(n, i, j), &big_e(n, k, l)),
                        );
                    }
                }
            }
        }
    }
    // (4) the squared cycle for i < j < k.
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                push(
                    &mut out,
                    "g2-4",
                    "cycle(i,j,k)^2",
                    vec![i, j, k],
                    cycle_squared(n, i, j, k),
                );
            }
        }
    }
    Ok(out)
}

/// Verification report: per-family counts and any relators that failed to
/// evaluate to the identity.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RelatorReport {
    pub total: usize,
    pub per_family: BTreeMap<String, usize>,
    /// "family kind indices" strings of non-identity relators.
    pub failures: Vec<String>,
    pub all_identity: bool,
}

/// Evaluate every relator and report.
pub fn verify_relators(relators: &[Relator]) -> RelatorReport {
    let mut per_family: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for r in relators {
        *per_family.entry(r.family.clone()).or_insert(0) += 1;
        if !evaluate(&r.word).is_identity() {
            failures.push(format!("{} {} {:?}", r.family, r.kind, r.indices));
        }
    }
    RelatorReport {
        total: relators.len(),
        per_family,
        all_identity: failures.is_empty(),
        failures,
    }
}

/// Export a relator list as JSON lines.
pub fn relators_to_jsonl(relators: &[Relator]) -> String {
    let mut s = String::new();
    for r in relators {
        s.push_str(&r.to_json_line());
        s.push('\n');
    }
    s
}

/// Generator symbol of the GL-side presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HatGen {
    /// E(i,j)^pow (pow any nonzero integer).
    E { i: usize, j: usize, pow: i64 },
    /// F(k).
    F { k: usize },
}

/// Generator symbol of the SL-side presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubGen {
    /// E(i,j)^pow.
    E { i: usize, j: usize, pow: i64 },
    /// F(1,k), k ≥ 2.
    F1k { k: usize },
}

/// Expand a GL-side generator word to elementary/flip atoms.
pub fn hat_word(n: usize, w: &[HatGen]) -> Result<Word> {
    let mut out = Word::empty(n);
    for g in w {
        match *g {
            HatGen::E { i, j, pow } => {
                let atom = Atom::elem(i, j, 2 * pow);
                Word::from_atoms(n, vec![atom.clone()])?; // index validation
                out.push(atom);
            }
            HatGen::F { k } => {
                Word::from_atoms(n, vec![Atom::flip(k)])?;
                out.push(Atom::flip(k));
            }
        }
    }
    Ok(out)
}

/// Expand an SL-side generator word to elementary/flip atoms. F(1,k) is
/// expanded to the flip pair it evaluates to, which keeps words short; the
/// full elementary realization is available via the relator machinery.
pub fn sub_word(n: usize, w: &[SubGen]) -> Result<Word> {
    let mut out = Word::empty(n);
    for g in w {
        match *g {
            SubGen::E { i, j, pow } => {
                let atom = Atom::elem(i, j, 2 * pow);
                Word::from_atoms(n, vec![atom.clone()])?;
                out.push(atom);
            }
            SubGen::F1k { k } => {
                if k < 2 {
                    return Err(Error::InvalidIndex(format!(
                        "F(1,{k}) requires k ≥ 2"
                    )));
                }
                Word::from_atoms(n, vec![Atom::flip(k)])?;
                out.push(Atom::flip(1));
                out.push(Atom::flip(k));
            }
        }
    }
    Ok(out)
}

/// Schreier rewriting with transversal {I, F(1)}: rewrite a word over
/// {E(i,j), F(k)} into one over {E(i,j), F(1,k)} with the same evaluation.
///
/// The coset is tracked by the running determinant sign. At the F(1) coset,
/// E(i,j) with i = 1 or j = 1 flips its exponent sign (conjugation by F(1));
/// every F(k) crosses cosets, emitting F(1,k) unless k = 1 (which emits
/// nothing). The word must end back at the identity coset — inputs with
/// determinant −1 are rejected.
pub fn rs_rewrite(n: usize, w: &[HatGen]) -> Result<Vec<SubGen>> {
    let mut out = Vec::new();
    let mut at_flip_coset = false;
    for g in w {
        match *g {
            HatGen::E { i, j, pow } => {
                if i == j || i < 1 || j < 1 || i > n || j > n {
                    return Err(Error::InvalidIndex(format!(
                        "E({i},{j}) invalid for n={n}"
                    )));
                }
                let effective = if at_flip_coset && (i == 1 || j == 1) {
                    -pow
                } else {
                    pow
                };
                if effective != 0 {
                    out.push(SubGen::E {
                        i,
                        j,
                        pow: effective,
                    });
                }
            }
            HatGen::F { k } => {
                if k < 1 || k > n {
                    return Err(Error::InvalidIndex(format!("F({k}) invalid for n={n}")));
                }
                if k != 1 {
                    out.push(SubGen::F1k { k });
                }
                at_flip_coset = !at_flip_coset;
            }
        }
    }
    if at_flip_coset {
        return Err(Error::NotMember(
            "word has determinant −1: it does not represent an element of the \
             determinant-1 subgroup"
                .into(),
        ));
    }
    Ok(out)
}

/// The two sides of the derived-relator identity
/// (E(j,1)E(1,j)⁻¹E(k,j)⁻¹E(j,k)E(1,k)E(k,1)⁻¹)² =
/// F(1,k)F(1,j)(E(j,1)⁻¹E(1,j)E(k,j)⁻¹E(j,k)E(1,k)⁻¹E(k,1))²F(1,j)F(1,k),
/// for distinct j, k ≥ 2. Both sides are returned as words for evaluation.
pub fn derived_relator_words(n: usize, j: usize, k: usize) -> Result<(Word, Word)> {
    if j == k || j < 2 || k < 2 || j > n || k > n {
        return Err(Error::InvalidIndex(format!(
            "derived relator needs distinct j, k in 2..={n}, got ({j},{k})"
        )));
    }
    let lhs_core = big_e(n, j, 1)
        .concat(&invert_word(&big_e(n, 1, j)))
        .concat(&invert_word(&big_e(n, k, j)))
        .concat(&big_e(n, j, k))
        .concat(&big_e(n, 1, k))
        .concat(&invert_word(&big_e(n, k, 1)));
    let lhs = square(&lhs_core);
    let rhs_core = invert_word(&big_e(n, j, 1))
        .concat(&big_e(n, 1, j))
        .concat(&invert_word(&big_e(n, k, j)))
        .concat(&big_e(n, j, k))
        .concat(&invert_word(&big_e(n, 1, k)))
        .concat(&big_e(n, k, 1));
    let rhs = big_f1k(n, k)
        .concat(&big_f1k(n, j))
        .concat(&square(&rhs_core))
        .concat(&big_f1k(n, j))
        .concat(&big_f1k(n, k));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relator_counts() {
        assert_eq!(relators_gamma2hat(2).unwrap().len(), 8);
        assert_eq!(relators_gamma2hat(3).unwrap().len(), 46);
        assert_eq!(relators_gamma2hat(4).unwrap().len(), 164);
        assert_eq!(relators_gamma2hat(5).unwrap().len(), 435);
        assert_eq!(relators_gamma2(2).unwrap().len(), 3);
        assert_eq!(relators_gamma2(3).unwrap().len(), 35);
        assert_eq!(relators_gamma2(4).unwrap().len(), 139);
        assert_eq!(relators_gamma2(5).unwrap().len(), 382);
        assert!(matches!(relators_gamma2hat(1), Err(Error::Unsupported(_))));
        assert!(matches!(relators_gamma2(1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn all_relators_evaluate_to_identity() {
        for n in 2..=4 {
            let report = verify_relators(&relators_gamma2hat(n).unwrap());
            assert!(report.all_identity, "GL side n={n}: {:?}", report.failures);
            let report = verify_relators(&relators_gamma2(n).unwrap());
            assert!(report.all_identity, "SL side n={n}: {:?}", report.failures);
        }
    }

    #[test]
    fn specific_relators_present() {
        let hat2 = relators_gamma2hat(2).unwrap();
        assert!(hat2
            .iter()
            .any(|r| r.kind == "(E(i,j)*F(i))^2" && r.indices == vec![1, 2]));
        assert!(hat2.iter().all(|r| r.family == "hat-a" || r.family == "hat-b"));

        let hat4 = relators_gamma2hat(4).unwrap();
        assert!(hat4
            .iter()
            .any(|r| r.family == "hat-d" && r.indices == vec![1, 2, 3, 4]));

        let g2_2 = relators_gamma2(2).unwrap();
        let kinds: Vec<&str> = g2_2.iter().map(|r| r.kind.as_str()).collect();
        assert_eq!(kinds, ["F(1,i)^2", "[E(1,i),F(1,i)]", "[E(i,1),F(1,i)]"]);

        let g2_3 = relators_gamma2(3).unwrap();
        assert!(g2_3
            .iter()
            .any(|r| r.kind == "(E(1,i)*F(1,j))^2" && r.indices == vec![2, 3]));
        assert!(g2_3
            .iter()
            .any(|r| r.family == "g2-4" && r.indices == vec![1, 2, 3]));
    }

    #[test]
    fn corrupted_relator_detected() {
        let mut rs = relators_gamma2(3).unwrap();
        let mut w = rs[0].word.clone();
        w.push(Atom::elem(1, 2, 1));
        rs[0].word = w;
        let report = verify_relators(&rs);
        assert!(!report.all_identity);
        assert_eq!(report.failures.len(), 1);
        assert!(report.failures[0].starts_with("g2-1"));
    }

    #[test]
    fn jsonl_export() {
        let rs = relators_gamma2(2).unwrap();
        let lines = relators_to_jsonl(&rs);
        let first = lines.lines().next().unwrap();
        let v: serde_json::Value = serde_json::from_str(first).unwrap();
        assert_eq!(v["family"], "g2-1");
        assert_eq!(v["indices"], serde_json::json!([2]));
        assert!(v["word"].as_str().unwrap().contains("e(1,2)^2"));
    }

    #[test]
    fn rewriting_examples() {
        // Identity coset: E passes through.
        let out = rs_rewrite(3, &[HatGen::E { i: 1, j: 2, pow: 1 }]).unwrap();
        assert_eq!(out, vec![SubGen::E { i: 1, j: 2, pow: 1 }]);
        // Conjugation by F(1) flips the sign of row/column-1 generators.
        let out = rs_rewrite(
            3,
            &[
                HatGen::F { k: 1 },
                HatGen::E { i: 1, j: 2, pow: 1 },
                HatGen::F { k: 1 },
            ],
        )
        .unwrap();
        assert_eq!(out, vec![SubGen::E { i: 1, j: 2, pow: -1 }]);
        // …but leaves other generators alone.
        let out = rs_rewrite(
            3,
            &[
                HatGen::F { k: 1 },
                HatGen::E { i: 2, j: 3, pow: 1 },
                HatGen::F { k: 1 },
            ],
        )
        .unwrap();
        assert_eq!(out, vec![SubGen::E { i: 2, j: 3, pow: 1 }]);
        // F(2)² becomes F(1,2)².
        let out = rs_rewrite(3, &[HatGen::F { k: 2 }, HatGen::F { k: 2 }]).unwrap();
        assert_eq!(out, vec![SubGen::F1k { k: 2 }, SubGen::F1k { k: 2 }]);
        // Determinant −1 rejected.
        assert!(matches!(
            rs_rewrite(3, &[HatGen::F { k: 2 }]),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn rewriting_preserves_evaluation() {
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let len = rng.gen_range(0..=40);
            let mut w: Vec<HatGen> = Vec::with_capacity(len + 1);
            let mut flips = 0;
            for _ in 0..len {
                if rng.gen_bool(0.3) {
                    let k = rng.gen_range(1..=n);
                    w.push(HatGen::F { k });
                    flips += 1;
                } else {
                    let i = rng.gen_range(1..=n);
                    let j = loop {
                        let j = rng.gen_range(1..=n);
                        if j != i {
                            break j;
                        }
                    };
                    let pow = if rng.gen_bool(0.5) { 1 } else { -1 };
                    w.push(HatGen::E { i, j, pow });
                }
            }
            if flips % 2 == 1 {
                let k = rng.gen_range(1..=n);
                w.push(HatGen::F { k });
            }
            let rewritten = rs_rewrite(n, &w).unwrap();
            assert_eq!(
                evaluate(&sub_word(n, &rewritten).unwrap()),
                evaluate(&hat_word(n, &w).unwrap())
            );
            // Alphabet discipline: F(1,k) only with k ≥ 2.
            for g in &rewritten {
                if let SubGen::F1k { k } = g {
                    assert!(*k >= 2);
                }
            }
        }
    }

    #[test]
    fn derived_relator_identity() {
        for (n, j, k) in [(3, 2, 3), (4, 2, 4), (4, 3, 2), (5, 4, 5)] {
            let (lhs, rhs) = derived_relator_words(n, j, k).unwrap();
            assert_eq!(evaluate(&lhs), evaluate(&rhs), "n={n} j={j} k={k}");
        }
        assert!(derived_relator_words(3, 1, 2).is_err());
        assert!(derived_relator_words(3, 2, 2).is_err());
    }
}
