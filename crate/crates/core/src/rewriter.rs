//! Constructive word identities over conjugated elementary factors.
//!
//! Everything in this module is organized around one shape of factor,
//! [`ConjFactor`]: `e(u,v)^p · e(v,u)^s · e(u,v)^−p` — an s-th power of an
//! elementary matrix conjugated to depth p. The operations emit explicit
//! factor sequences ([`ConjWord`]) for:
//!
//! * the two identities rewriting `e(j,i)^m e(i,j)^d e(j,i)^−m` (any integer
//!   m) over factors whose (i,j)-conjugation depth is bounded
//!   ([`md_m_factors`]),
//! * the depth-2 and depth-(−1) expansions over depth-≤1 factors
//!   ([`bounded_conj_factors`]),
//! * the closure of the depth-≤1 factors under conjugation by a single
//!   elementary generator ([`conjugate_rewrite`]) together with
//!   [`flatten_to_x2`], which eliminates the depth-2/−1 factors it produces,
//! * the rewrite of depth-1 factors into the X1 alphabet, whose conjugators
//!   all pass through index 1 ([`x2_to_x1_factors`]).
//!
//! Every emitted word is verified against its target by exact evaluation in
//! the test suite; the words themselves are kept un-reduced, mirroring the
//! factor order of the underlying derivations, so each factor can be traced.

use crate::exactmat::BigIntMatrix;
use crate::genwords::{evaluate, Atom, Word};
use crate::{Error, Result};

/// One factor e(u,v)^p · e(v,u)^s · e(u,v)^−p (for p = 0, just e(v,u)^s).
///
/// p is the conjugation depth and s the inner exponent (a multiple of the
/// working level d for every factor produced by this module).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ConjFactor {
    pub u: usize,
    pub v: usize,
    pub p: i64,
    pub s: i64,
}

impl ConjFactor {
    /// The factor as a plain word in dimension n.
    pub fn to_word(&self, n: usize) -> Word {
        let mut w = Word::empty(n);
        if self.p != 0 {
            w.push(Atom::elem(self.u, self.v, self.p));
        }
        w.push(Atom::elem(self.v, self.u, self.s));
        if self.p != 0 {
            w.push(Atom::elem(self.u, self.v, -self.p));
        }
        w
    }
}

impl std::fmt::Display for ConjFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{}; p={}, s={})",
            self.u, self.v, self.p, self.s
        )
    }
}

/// An ordered product of [`ConjFactor`]s in a fixed dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjWord {
    n: usize,
    factors: Vec<ConjFactor>,
}

impl ConjWord {
    pub fn new(n: usize) -> ConjWord {
        assert!(n >= 1);
        ConjWord {
            n,
            factors: Vec::new(),
        }
    }

    /// Append a factor; identity factors (s = 0) are dropped.
    fn push(&mut self, f: ConjFactor) {
        assert!(
            f.u != f.v && f.u >= 1 && f.v >= 1 && f.u <= self.n && f.v <= self.n,
            "factor indices ({},{}) invalid for n={}",
            f.u,
            f.v,
            self.n
        );
        if f.s != 0 {
            self.factors.push(f);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[ConjFactor] {
        &self.factors
    }

    /// Flatten to a plain word (three atoms per depth-≠0 factor, one per
    /// depth-0 factor).
    pub fn to_word(&self) -> Word {
        let mut w = Word::empty(self.n);
        for f in &self.factors {
            w = w.concat(&f.to_word(self.n));
        }
        w
    }

    pub fn evaluate(&self) -> BigIntMatrix {
        evaluate(&self.to_word())
    }

    /// Two-column trace: structured factor on the left, emitted atoms on the
    /// right.
    pub fn trace(&self) -> Vec<(String, String)> {
        self.factors
            .iter()
            .map(|f| (f.to_string(), f.to_word(self.n).to_grammar_string()))
            .collect()
    }
}

/// True when every factor is a power of a depth-≤1 conjugated generator at
/// level d: p ∈ {0, 1} and d | s.
pub fn is_x2_pure(w: &ConjWord, d: u64) -> bool {
    let d = d as i64;
    w.factors
        .iter()
        .all(|f| (f.p == 0 || f.p == 1) && f.s % d == 0)
}

/// True when every factor is a power of an X1 member at level d: either a
/// plain elementary power (p = 0) or a depth-1 conjugate through index 1
/// (p = 1, v = 1), with d | s in both cases.
pub fn is_x1_pure(w: &ConjWord, d: u64) -> bool {
    let d = d as i64;
    w.factors
        .iter()
        .all(|f| (f.p == 0 || (f.p == 1 && f.v == 1)) && f.s % d == 0)
}

fn check_distinct(n: usize, idx: &[usize]) -> Result<()> {
    for (pos, &a) in idx.iter().enumerate() {
        if a < 1 || a > n {
            return Err(Error::InvalidIndex(format!("index {a} out of 1..={n}")));
        }
        if idx[..pos].contains(&a) {
            return Err(Error::InvalidIndex(format!(
                "indices {idx:?} must be pairwise distinct"
            )));
        }
    }
    Ok(())
}

/// Smallest index in 1..=n avoiding the given ones.
fn aux_index(n: usize, avoid: &[usize]) -> usize {
    (1..=n)
        .find(|k| !avoid.contains(k))
        .expect("n large enough for an auxiliary index")
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Precondition("exponent overflows 64 bits".into()))
}

/// Checked factor constructor for i128 intermediates.
fn cf(u: usize, v: usize, p: i128, s: i128) -> Result<ConjFactor> {
    Ok(ConjFactor {
        u,
        v,
        p: to_i64(p)?,
        s: to_i64(s)?,
    })
}

/// Which of the two factorizations of e(j,i)^m e(i,j)^d e(j,i)^−m to emit.
/// Both hold for every integer m; they distribute the m-dependent
/// conjugation onto different index pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdmVariant {
    V1,
    V2,
}

/// Factor list equal to e(j,i)^m e(i,j)^d e(j,i)^−m, for any integer m.
///
/// The output factors conjugate only on the pairs (j,k), (i,k), (k,i), (k,j)
/// — never to depth > 1 on (i,j) itself — which is what makes the list
/// useful for bounding conjugation depth. k must differ from i and j.
pub fn md_m_factors(
    variant: MdmVariant,
    n: usize,
    d: u64,
    m: i64,
    i: usize,
    j: usize,
    k: usize,
) -> Result<ConjWord> {
    if n < 3 {
        return Err(Error::Unsupported(format!("need n ≥ 3, got {n}")));
    }
    if d < 1 {
        return Err(Error::Precondition(format!("level d={d} must be ≥ 1")));
    }
    check_distinct(n, &[i, j, k])?;
    let m = m as i128;
    let d = d as i128;
    let mut w = ConjWord::new(n);
    let fs = match variant {
        MdmVariant::V1 => vec![
            cf(j, k, m, d)?,
            cf(j, i, 0, d)?,
            cf(k, i, 0, -m * d)?,
            cf(i, k, 1, -m * d)?,
            cf(i, j, 0, -m * m * d)?,
            cf(k, j, 0, m * m * d)?,
            cf(i, k, 0, m * d)?,
            cf(j, k, 0, -d)?,
        ],
        MdmVariant::V2 => vec![
            cf(k, i, 0, d)?,
            cf(k, j, 0, m * d)?,
            cf(k, j, 1, -m * d)?,
            cf(i, j, 0, -m * m * d)?,
            cf(i, k, 0, -m * m * d)?,
            cf(k, i, -m, -d)?,
            cf(j, i, 0, d)?,
            cf(j, k, 0, -m * d)?,
        ],
    };
    for f in fs {
        w.push(f);
    }
    Ok(w)
}

/// [`md_m_factors`] flattened to a plain word.
pub fn md_m_word(
    variant: MdmVariant,
    n: usize,
    d: u64,
    m: i64,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Word> {
    Ok(md_m_factors(variant, n, d, m, i, j, k)?.to_word())
}

/// The two bounded conjugates that need explicit expansions: depth 2 and
/// depth −1 on the pair (i,j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundedCase {
    /// e(j,i)² e(i,j)^d e(j,i)^−2 over depth-≤1 factors.
    Square,
    /// e(j,i)^−1 e(i,j)^d e(j,i) over depth-≤1 factors.
    Inverse,
}

fn square_list(i: usize, j: usize, k: usize, d: i128) -> Result<Vec<ConjFactor>> {
    Ok(vec![
        cf(j, k, 1, d)?,
        cf(i, k, 0, -d)?,
        cf(i, j, 0, -d)?,
        cf(j, i, 1, d)?,
        cf(k, j, 0, -d)?,
        cf(k, i, 0, -d)?,
        cf(k, j, 0, d)?,
        cf(i, j, 0, -d)?,
        cf(i, k, 1, -d)?,
        cf(i, j, 0, -d)?,
        cf(k, j, 0, d)?,
        cf(i, k, 0, d)?,
        cf(i, k, 0, d)?,
        cf(j, k, 0, -d)?,
    ])
}

fn inverse_list(i: usize, j: usize, k: usize, d: i128) -> Result<Vec<ConjFactor>> {
    Ok(vec![
        cf(k, i, 0, d)?,
        cf(k, j, 0, -d)?,
        cf(k, j, 1, d)?,
        cf(i, j, 0, -d)?,
        cf(i, k, 0, -d)?,
        cf(k, i, 1, -d)?,
        cf(j, i, 0, d)?,
        cf(j, k, 0, d)?,
    ])
}

/// Factor list over depth-≤1 conjugates equal to e(j,i)² e(i,j)^d e(j,i)^−2
/// (Square) or e(j,i)^−1 e(i,j)^d e(j,i) (Inverse). k must differ from i, j.
pub fn bounded_conj_factors(
    case: BoundedCase,
    n: usize,
    d: u64,
    i: usize,
    j: usize,
    k: usize,
) -> Result<ConjWord> {
    if n < 3 {
        return Err(Error::Unsupported(format!("need n ≥ 3, got {n}")));
    }
    if d < 1 {
        return Err(Error::Precondition(format!("level d={d} must be ≥ 1")));
    }
    check_distinct(n, &[i, j, k])?;
    let list = match case {
        BoundedCase::Square => square_list(i, j, k, d as i128)?,
        BoundedCase::Inverse => inverse_list(i, j, k, d as i128)?,
    };
    let mut w = ConjWord::new(n);
    for f in list {
        w.push(f);
    }
    Ok(w)
}

/// [`bounded_conj_factors`] flattened to a plain word.
pub fn bounded_conj_word(
    case: BoundedCase,
    n: usize,
    d: u64,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Word> {
    Ok(bounded_conj_factors(case, n, d, i, j, k)?.to_word())
}

/// Conjugate x = e(j,i)^m e(i,j)^d e(j,i)^−m (m ∈ {0,1}) by e(i2,j2)^eps and
/// express the result over factors of depth p ∈ [−1, 2].
///
/// The case analysis is on how (i2,j2) meets (i,j): disjoint pairs commute
/// with x; the pairs (i,j) and (j,i) change the conjugation depth; the four
/// single-index overlaps append two depth-0 correction factors to x. The
/// auxiliary index k, when one is needed, is the smallest index distinct
/// from i and j.
pub fn conjugate_rewrite(
    m: i64,
    i: usize,
    j: usize,
    i2: usize,
    j2: usize,
    eps: i64,
    n: usize,
    d: u64,
) -> Result<ConjWord> {
    if n < 3 {
        return Err(Error::Unsupported(format!("need n ≥ 3, got {n}")));
    }
    if !(m == 0 || m == 1) {
        return Err(Error::Precondition(format!(
            "conjugation closure is stated for m ∈ {{0,1}}, got {m}"
        )));
    }
    if !(eps == 1 || eps == -1) {
        return Err(Error::Precondition(format!("eps must be ±1, got {eps}")));
    }
    if d < 1 {
        return Err(Error::Precondition(format!("level d={d} must be ≥ 1")));
    }
    check_distinct(n, &[i, j])?;
    check_distinct(n, &[i2, j2])?;
    let (mi, ei, di) = (m as i128, eps as i128, d as i128);
    let x = cf(j, i, mi, di)?;
    let mut w = ConjWord::new(n);
    if i2 != i && i2 != j && j2 != i && j2 != j {
        // Disjoint indices: the conjugator commutes with every atom of x.
        w.push(x);
    } else if (i2, j2) == (i, j) {
        // Same pair: depth becomes a = 1 + eps·m after commuting the
        // conjugator inward; the expansion is the V2 identity at depth a.
        let a = 1 + ei * mi;
        let k = aux_index(n, &[i, j]);
        for f in [
            cf(k, i, 0, a * di)?,
            cf(k, j, 0, mi * di)?,
            cf(k, j, a, -mi * di)?,
            cf(i, j, 0, -mi * mi * di)?,
            cf(i, k, 0, -mi * mi * a * di)?,
            cf(k, i, -mi, -a * di)?,
            cf(j, i, 0, a * a * di)?,
            cf(j, k, 0, -mi * a * a * di)?,
        ] {
            w.push(f);
        }
    } else if (i2, j2) == (j, i) {
        // Transposed pair: the conjugator merges with the existing one.
        w.push(cf(j, i, mi + ei, di)?);
    } else if i2 == i {
        let k = j2;
        w.push(x);
        w.push(cf(k, i, 0, ei * mi * di)?);
        w.push(cf(k, j, 0, ei * mi * mi * di)?);
    } else if j2 == i {
        let k = i2;
        w.push(x);
        w.push(cf(j, k, 0, ei * di)?);
        w.push(cf(i, k, 0, -ei * mi * di)?);
    } else if j2 == j {
        let k = i2;
        w.push(x);
        w.push(cf(j, k, 0, ei * mi * di)?);
        w.push(cf(i, k, 0, -ei * mi * mi * di)?);
    } else {
        // i2 == j
        let k = j2;
        w.push(x);
        w.push(cf(k, i, 0, -ei * di)?);
        w.push(cf(k, j, 0, -ei * mi * di)?);
    }
    debug_assert!(w.factors.iter().all(|f| (-1..=2).contains(&f.p)));
    Ok(w)
}

/// Replace every depth-2 and depth-(−1) factor by its bounded expansion so
/// that only depth-{0,1} factors remain. Evaluation is unchanged. Factors
/// with depth outside [−1, 2] are rejected.
pub fn flatten_to_x2(w: &ConjWord, _d: u64) -> Result<ConjWord> {
    let n = w.n;
    let mut out = ConjWord::new(n);
    for f in &w.factors {
        match f.p {
            0 | 1 => out.push(*f),
            2 => {
                // e(u,v)² e(v,u)^s e(u,v)^−2 with the roles i = v, j = u.
                let k = aux_index(n, &[f.u, f.v]);
                for g in square_list(f.v, f.u, k, f.s as i128)? {
                    out.push(g);
                }
            }
            -1 => {
                let k = aux_index(n, &[f.u, f.v]);
                for g in inverse_list(f.v, f.u, k, f.s as i128)? {
                    out.push(g);
                }
            }
            p => {
                return Err(Error::Precondition(format!(
                    "factor {f} has conjugation depth {p} outside [−1, 2]"
                )));
            }
        }
    }
    Ok(out)
}

/// Rewrite the depth-1 factor e(j,i) e(i,j)^d e(j,i)^−1 over the X1 alphabet
/// (plain elementary powers and depth-1 conjugates through index 1).
///
/// For i = 1 the target is itself an X1 member; for j = 1 it is the inverse
/// of one; otherwise an eight-factor product through index 1 is emitted.
pub fn x2_to_x1_factors(i: usize, j: usize, n: usize, d: u64) -> Result<ConjWord> {
    if n < 3 {
        return Err(Error::Unsupported(format!("need n ≥ 3, got {n}")));
    }
    if d < 1 {
        return Err(Error::Precondition(format!("level d={d} must be ≥ 1")));
    }
    check_distinct(n, &[i, j])?;
    let di = d as i128;
    let mut w = ConjWord::new(n);
    if i == 1 {
        w.push(cf(j, 1, 1, di)?);
    } else if j == 1 {
        w.push(cf(i, 1, 1, -di)?);
    } else {
        for f in [
            cf(j, 1, 1, di)?,
            cf(j, i, 0, di)?,
            cf(1, i, 0, -di)?,
            cf(i, 1, 1, -di)?,
            cf(i, j, 0, -di)?,
            cf(1, j, 0, di)?,
            cf(i, 1, 0, di)?,
            cf(j, 1, 0, -di)?,
        ] {
            w.push(f);
        }
    }
    debug_assert!(is_x1_pure(&w, d));
    Ok(w)
}

/// [`x2_to_x1_factors`] flattened to a plain word.
pub fn x2_to_x1_word(i: usize, j: usize, n: usize, d: u64) -> Result<Word> {
    Ok(x2_to_x1_factors(i, j, n, d)?.to_word())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genwords::{build_named, NamedWord};

    /// e(j,i)^m e(i,j)^d e(j,i)^−m as a matrix.
    fn target(n: usize, i: usize, j: usize, m: i64, d: i64) -> BigIntMatrix {
        evaluate(
            &Word::from_atoms(
                n,
                vec![
                    Atom::elem(j, i, m),
                    Atom::elem(i, j, d),
                    Atom::elem(j, i, -m),
                ],
            )
            .unwrap(),
        )
    }

    fn triples(n: usize) -> Vec<(usize, usize, usize)> {
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

    #[test]
    fn md_m_identities_small_grid() {
        for variant in [MdmVariant::V1, MdmVariant::V2] {
            for d in 1..=3u64 {
                for m in -3..=3i64 {
                    for &(i, j, k) in &triples(3) {
                        let w = md_m_factors(variant, 3, d, m, i, j, k).unwrap();
                        assert_eq!(
                            w.evaluate(),
                            target(3, i, j, m, d as i64),
                            "variant {variant:?} d={d} m={m} ({i},{j},{k})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn md_m_examples() {
        // m=1, d=2: equals e(2,1) e(1,2)² e(2,1)⁻¹.
        let w = md_m_word(MdmVariant::V1, 3, 2, 1, 1, 2, 3).unwrap();
        assert_eq!(evaluate(&w), target(3, 1, 2, 1, 2));
        // m=0 collapses to e(i,j)^d.
        let w = md_m_word(MdmVariant::V2, 3, 4, 0, 1, 2, 3).unwrap();
        assert_eq!(
            evaluate(&w),
            evaluate(&Word::parse(3, "e(1,2)^4").unwrap())
        );
        // Negative m also holds.
        let w = md_m_word(MdmVariant::V1, 3, 5, -3, 2, 3, 1).unwrap();
        assert_eq!(evaluate(&w), target(3, 2, 3, -3, 5));
        assert!(matches!(
            md_m_word(MdmVariant::V1, 3, 2, 1, 1, 2, 2),
            Err(Error::InvalidIndex(_))
        ));
        assert!(matches!(
            md_m_word(MdmVariant::V1, 2, 2, 1, 1, 2, 3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn bounded_conj_cases() {
        for d in [1u64, 2, 3] {
            for &(i, j, k) in &triples(3) {
                let sq = bounded_conj_factors(BoundedCase::Square, 3, d, i, j, k).unwrap();
                assert_eq!(sq.evaluate(), target(3, i, j, 2, d as i64));
                assert!(is_x2_pure(&sq, d), "square output must be depth ≤ 1");
                let inv = bounded_conj_factors(BoundedCase::Inverse, 3, d, i, j, k).unwrap();
                assert_eq!(inv.evaluate(), target(3, i, j, -1, d as i64));
                assert!(is_x2_pure(&inv, d));
            }
        }
        // The documented instance: inverse case evaluates to e(2,1)⁻¹ e(1,2)² e(2,1).
        let w = bounded_conj_word(BoundedCase::Inverse, 3, 2, 1, 2, 3).unwrap();
        assert_eq!(evaluate(&w), target(3, 1, 2, -1, 2));
    }

    #[test]
    fn conjugation_closure_all_cases() {
        let n = 3;
        for d in [2u64, 3] {
            for m in [0i64, 1] {
                for i in 1..=n {
                    for j in (1..=n).filter(|&j| j != i) {
                        for i2 in 1..=n {
                            for j2 in (1..=n).filter(|&j2| j2 != i2) {
                                for eps in [1i64, -1] {
                                    let w = conjugate_rewrite(m, i, j, i2, j2, eps, n, d)
                                        .unwrap();
                                    // Direct conjugation target.
                                    let mut t = Word::empty(n);
                                    t.push(Atom::elem(i2, j2, eps));
                                    t.push(Atom::elem(j, i, m));
                                    t.push(Atom::elem(i, j, d as i64));
                                    t.push(Atom::elem(j, i, -m));
                                    t.push(Atom::elem(i2, j2, -eps));
                                    assert_eq!(
                                        w.evaluate(),
                                        evaluate(&t),
                                        "m={m} ({i},{j}) by e({i2},{j2})^{eps} d={d}"
                                    );
                                    assert!(w.factors().iter().all(|f| (-1..=2).contains(&f.p)));
                                    // Flattening keeps the value, bounds depth to {0,1}.
                                    let flat = flatten_to_x2(&w, d).unwrap();
                                    assert!(is_x2_pure(&flat, d));
                                    assert_eq!(flat.evaluate(), evaluate(&t));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_closure_named_cases() {
        // Disjoint: unchanged single factor.
        let w = conjugate_rewrite(1, 1, 2, 3, 4, 1, 4, 2).unwrap();
        assert_eq!(w.factors().len(), 1);
        assert_eq!(w.factors()[0], ConjFactor { u: 2, v: 1, p: 1, s: 2 });
        // Row overlap (i2,j2) = (i,k): x · e(i,k)^{εmd} · e(j,k)^{εm²d}.
        let w = conjugate_rewrite(1, 1, 2, 1, 3, 1, 3, 2).unwrap();
        let fs = w.factors();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[1], ConjFactor { u: 3, v: 1, p: 0, s: 2 });
        assert_eq!(fs[2], ConjFactor { u: 3, v: 2, p: 0, s: 2 });
        // Transposed pair: depth m + eps, here 2, flattened away afterwards.
        let w = conjugate_rewrite(1, 1, 2, 2, 1, 1, 3, 2).unwrap();
        assert_eq!(w.factors(), &[ConjFactor { u: 2, v: 1, p: 2, s: 2 }]);
        let flat = flatten_to_x2(&w, 2).unwrap();
        assert!(is_x2_pure(&flat, 2));
        // m = 0 with eps = −1 on the same pair: depth a = 1 stays.
        let w = conjugate_rewrite(0, 1, 2, 1, 2, -1, 3, 2).unwrap();
        assert_eq!(w.evaluate(), target(3, 1, 2, 0, 2));
    }

    #[test]
    fn flatten_rejects_deep_factors() {
        let mut w = ConjWord::new(3);
        w.push(ConjFactor { u: 2, v: 1, p: 3, s: 2 });
        assert!(matches!(
            flatten_to_x2(&w, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn x2_to_x1_all_pairs() {
        for n in [3usize, 4] {
            for d in [2u64, 3] {
                for i in 1..=n {
                    for j in (1..=n).filter(|&j| j != i) {
                        let w = x2_to_x1_factors(i, j, n, d).unwrap();
                        assert!(is_x1_pure(&w, d), "({i},{j}) n={n} d={d}");
                        assert_eq!(
                            w.evaluate(),
                            target(n, i, j, 1, d as i64),
                            "({i},{j}) n={n} d={d}"
                        );
                    }
                }
            }
        }
        // (1,k): verbatim X1 member; (k,1): inverse of one.
        let w = x2_to_x1_factors(1, 3, 3, 2).unwrap();
        assert_eq!(w.factors(), &[ConjFactor { u: 3, v: 1, p: 1, s: 2 }]);
        let m = build_named(3, &NamedWord::ConjGen { i: 1, j: 3, m: 1, d: 2 }).unwrap();
        assert_eq!(w.to_word(), m);
        let w = x2_to_x1_factors(3, 1, 3, 2).unwrap();
        assert_eq!(w.factors(), &[ConjFactor { u: 3, v: 1, p: 1, s: -2 }]);
        // Generic pair: eight factors.
        let w = x2_to_x1_factors(2, 3, 3, 2).unwrap();
        assert_eq!(w.factors().len(), 8);
    }

    #[test]
    fn traces_are_aligned() {
        let w = x2_to_x1_factors(2, 3, 3, 2).unwrap();
        let tr = w.trace();
        assert_eq!(tr.len(), w.factors().len());
        assert_eq!(tr[0].0, "(3,1; p=1, s=2)");
        assert_eq!(tr[0].1, "e(3,1)*e(1,3)^2*e(3,1)^-1");
        // Each right column parses back to a word with the same evaluation.
        let mut prod = Word::empty(3);
        for (_, atoms) in &tr {
            prod = prod.concat(&Word::parse(3, atoms).unwrap());
        }
        assert_eq!(evaluate(&prod), w.evaluate());
    }
}
