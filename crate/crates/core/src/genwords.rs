//! Symbolic words over the generator alphabet and the named generator families.
//!
//! An [`Atom`] is a single generator symbol: `e(i,j)^s` (elementary with
//! exponent collapsed into the atom) or `F(k)` (diagonal sign flip). A
//! [`Word`] is a finite product of atoms inside a fixed ambient dimension n,
//! evaluated left to right. Exponents are arbitrary-precision: words produced
//! by the two-dimensional solver carry exponents proportional to matrix
//! entries, so unary or fixed-width encodings are not an option.
//!
//! The text grammar (used by the CLI and word files) is
//! `e(i,j)^s` and `F(k)` tokens joined by `*`, with parenthesized groups
//! raised to integer powers, e.g. `(e(2,1)*e(1,2)^3)^-1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactmat::BigIntMatrix;
use crate::{Error, Result};

/// One generator symbol.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    /// e(i,j)^exp — identity except for entry (i,j) = exp. Requires i ≠ j and
    /// exp ≠ 0 inside a validated [`Word`].
    Elem { i: usize, j: usize, exp: BigInt },
    /// F(k) — identity except entry (k,k) = −1. Self-inverse.
    Flip { k: usize },
}

impl Atom {
    /// Convenience constructor for e(i,j)^exp.
    pub fn elem(i: usize, j: usize, exp: impl Into<BigInt>) -> Atom {
        Atom::Elem {
            i,
            j,
            exp: exp.into(),
        }
    }

    pub fn flip(k: usize) -> Atom {
        Atom::Flip { k }
    }

    fn check(&self, n: usize) -> Result<()> {
        match self {
            Atom::Elem { i, j, .. } => {
                if *i == *j || *i < 1 || *j < 1 || *i > n || *j > n {
                    return Err(Error::InvalidIndex(format!(
                        "atom e({i},{j}) invalid for n={n}"
                    )));
                }
            }
            Atom::Flip { k } => {
                if *k < 1 || *k > n {
                    return Err(Error::InvalidIndex(format!("atom F({k}) invalid for n={n}")));
                }
            }
        }
        Ok(())
    }
}

/// A product of atoms in dimension n, evaluated left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    n: usize,
    atoms: Vec<Atom>,
}

impl Word {
    /// Empty word (evaluates to the identity).
    pub fn empty(n: usize) -> Word {
        assert!(n >= 1, "ambient dimension must be at least 1");
        Word { n, atoms: Vec::new() }
    }

    /// Validated constructor: all indices in [1, n], elementary atoms off the
    /// diagonal. Zero-exponent elementary atoms are dropped (they are the
    /// identity), keeping the nonzero-exponent invariant without failing.
    pub fn from_atoms(n: usize, atoms: Vec<Atom>) -> Result<Word> {
        let mut w = Word::empty(n);
        for a in atoms {
            a.check(n)?;
            w.push(a);
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Append one atom (no merging). Panics on invalid indices — callers
    /// building words programmatically are responsible for their indices;
    /// text input goes through [`Word::parse`] which returns errors instead.
    pub fn push(&mut self, a: Atom) {
        a.check(self.n).expect("atom indices valid for word dimension");
        if let Atom::Elem { exp, .. } = &a {
            if exp.is_zero() {
                return;
            }
        }
        self.atoms.push(a);
    }

    pub fn push_elem(&mut self, i: usize, j: usize, exp: impl Into<BigInt>) {
        self.push(Atom::elem(i, j, exp));
    }

    /// Concatenation (this · other). Panics if dimensions differ.
    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.n, other.n, "concatenation dimension mismatch");
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Word { n: self.n, atoms }
    }

    /// The word repeated e times; negative e repeats the inverse.
    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { invert_word(self) } else { self.clone() };
        let mut out = Word::empty(self.n);
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Canonical text form: atoms joined by `*`, exponent omitted when 1.
    pub fn to_grammar_string(&self) -> String {
        if self.atoms.is_empty() {
            return String::new();
        }
        self.atoms
            .iter()
            .map(|a| match a {
                Atom::Elem { i, j, exp } if exp.is_one() => format!("e({i},{j})"),
                Atom::Elem { i, j, exp } => format!("e({i},{j})^{exp}"),
                Atom::Flip { k } => format!("F({k})"),
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parse the text grammar. Empty (or all-whitespace) input is the empty
    /// word. Grammar: terms joined by `*`; a term is `e(i,j)` with optional
    /// `^s`, `F(k)`, or a parenthesized word with a required `^s` power.
    pub fn parse(n: usize, text: &str) -> Result<Word> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
            n,
        };
        p.skip_ws();
        if p.at_end() {
            return Ok(Word::empty(n));
        }
        let w = p.parse_word()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(Error::Parse(format!(
                "unexpected trailing input at byte {} of word {text:?}",
                p.pos
            )));
        }
        Ok(w)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_grammar_string())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {c:?} at position {}, found {:?}",
                self.pos,
                self.peek()
            )))
        }
    }

    fn parse_int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::Parse(format!("expected integer at position {start}")))
    }

    fn parse_index(&mut self) -> Result<usize> {
        let v = self.parse_int()?;
        usize::try_from(v).map_err(|_| Error::Parse("index must be a positive integer".into()))
    }

    fn parse_word(&mut self) -> Result<Word> {
        let mut w = self.parse_term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                self.skip_ws();
                let t = self.parse_term()?;
                w = w.concat(&t);
            } else {
                return Ok(w);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.peek() {
            Some('e') => {
                self.pos += 1;
                self.expect('(')?;
                let i = self.parse_index()?;
                self.skip_ws();
                self.expect(',')?;
                let j = self.parse_index()?;
                self.skip_ws();
                self.expect(')')?;
                let exp = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.parse_int()?
                } else {
                    BigInt::one()
                };
                let atom = Atom::Elem { i, j, exp };
                atom.check(self.n)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                let mut w = Word::empty(self.n);
                w.push(atom);
                Ok(w)
            }
            Some('F') => {
                self.pos += 1;
                self.expect('(')?;
                let k = self.parse_index()?;
                self.skip_ws();
                self.expect(')')?;
                let atom = Atom::Flip { k };
                atom.check(self.n)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                let mut w = Word::empty(self.n);
                w.push(atom);
                Ok(w)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_word()?;
                self.skip_ws();
                self.expect(')')?;
                self.skip_ws();
                self.expect('^')?;
                let e = self.parse_int()?;
                let e: i64 = i64::try_from(e)
                    .map_err(|_| Error::Parse("group power out of range".into()))?;
                Ok(inner.pow(e))
            }
            other => Err(Error::Parse(format!(
                "expected 'e', 'F' or '(' at position {}, found {other:?}",
                self.pos
            ))),
        }
    }
}

/// Left-to-right product of the atom matrices; the empty word gives I.
///
/// Each atom is applied as a column operation on the running product
/// (right-multiplying by e(i,j)^s adds s·column(i) to column(j); by F(k)
/// negates column(k)), so evaluation is O(n) per atom, not a full product.
pub fn evaluate(w: &Word) -> BigIntMatrix {
    let n = w.n;
    // Work on rows of the transpose so column ops are contiguous; simpler to
    // just index directly into a row-major buffer.
    let mut p: Vec<BigInt> = BigIntMatrix::identity(n).entries().to_vec();
    for a in &w.atoms {
        match a {
            Atom::Elem { i, j, exp } => {
                let (ci, cj) = (i - 1, j - 1);
                for r in 0..n {
                    let add = &p[r * n + ci] * exp;
                    if !add.is_zero() {
                        p[r * n + cj] += add;
                    }
                }
            }
            Atom::Flip { k } => {
                let ck = k - 1;
                for r in 0..n {
                    let v = std::mem::take(&mut p[r * n + ck]);
                    p[r * n + ck] = -v;
                }
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = (0..n).map(|r| p[r * n..(r + 1) * n].to_vec()).collect();
    BigIntMatrix::from_rows(rows).expect("square by construction")
}

/// Group inverse: reversed sequence, elementary exponents negated, flips kept.
pub fn invert_word(w: &Word) -> Word {
    let atoms = w
        .atoms
        .iter()
        .rev()
        .map(|a| match a {
            Atom::Elem { i, j, exp } => Atom::Elem {
                i: *i,
                j: *j,
                exp: -exp,
            },
            Atom::Flip { k } => Atom::Flip { k: *k },
        })
        .collect();
    Word { n: w.n, atoms }
}

/// Adjacent cancellation only: merge neighbouring elementary atoms with the
/// same position (dropping zero sums) and cancel doubled flips. Evaluation is
/// unchanged. This is not general free-group reduction.
pub fn free_reduce(w: &Word) -> Word {
    let mut atoms: Vec<Atom> = Vec::with_capacity(w.atoms.len());
    for a in &w.atoms {
        match (atoms.last_mut(), a) {
            (
                Some(Atom::Elem { i, j, exp }),
                Atom::Elem {
                    i: i2,
                    j: j2,
                    exp: e2,
                },
            ) if *i == *i2 && *j == *j2 => {
                *exp += e2;
                if exp.is_zero() {
                    atoms.pop();
                }
            }
            (Some(Atom::Flip { k }), Atom::Flip { k: k2 }) if *k == *k2 => {
                atoms.pop();
            }
            _ => atoms.push(a.clone()),
        }
    }
    Word { n: w.n, atoms }
}

/// Names for the individually defined composite generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedWord {
    /// E(i,j) = e(i,j)².
    BigE { i: usize, j: usize },
    /// F(k,l) = e(k,l)² · e(l,k)⁻² · e(l,k) e(k,l)² e(l,k)⁻¹ — evaluates to
    /// the diagonal matrix with −1 at positions k and l.
    BigF { k: usize, l: usize },
    /// f_k^d = e(k,1)^d · (e(k,1) e(1,k)^d e(k,1)⁻¹) · e(1,k)^−d — congruent
    /// mod d² to the diagonal matrix diag(1−d, …, 1+d, …) with the 1+d in
    /// slot k.
    FkD { k: usize, d: u64 },
    /// e(j,i)^m e(i,j)^d e(j,i)^−m — the conjugated elementary generator.
    ConjGen { i: usize, j: usize, m: i64, d: u64 },
}

/// Build the literal defining word for a named generator.
pub fn build_named(n: usize, name: &NamedWord) -> Result<Word> {
    match *name {
        NamedWord::BigE { i, j } => Word::from_atoms(n, vec![Atom::elem(i, j, 2)]),
        NamedWord::BigF { k, l } => {
            if k == l {
                return Err(Error::InvalidIndex(format!(
                    "F({k},{l}) requires distinct indices"
                )));
            }
            Word::from_atoms(
                n,
                vec![
                    Atom::elem(k, l, 2),
                    Atom::elem(l, k, -2),
                    Atom::elem(l, k, 1),
                    Atom::elem(k, l, 2),
                    Atom::elem(l, k, -1),
                ],
            )
        }
        NamedWord::FkD { k, d } => {
            if k < 2 {
                return Err(Error::InvalidIndex(format!(
                    "f_{k}^{d} requires k ≥ 2 (it conjugates through index 1)"
                )));
            }
            let d = i64::try_from(d)
                .map_err(|_| Error::Precondition("exponent d out of range".into()))?;
            Word::from_atoms(
                n,
                vec![
                    Atom::elem(k, 1, d),
                    Atom::elem(k, 1, 1),
                    Atom::elem(1, k, d),
                    Atom::elem(k, 1, -1),
                    Atom::elem(1, k, -d),
                ],
            )
        }
        NamedWord::ConjGen { i, j, m, d } => {
            let d = i64::try_from(d)
                .map_err(|_| Error::Precondition("exponent d out of range".into()))?;
            Word::from_atoms(
                n,
                vec![
                    Atom::elem(j, i, m),
                    Atom::elem(i, j, d),
                    Atom::elem(j, i, -m),
                ],
            )
        }
    }
}

/// The named generating families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFamilyTag {
    /// {e(i,j)^d} ∪ {e(k,1) e(1,k)^d e(k,1)⁻¹ : k = 2..n} — n²−1 members, n ≥ 3.
    X1,
    /// {e(j,i)^m e(i,j)^d e(j,i)^−m : i ≠ j, m ∈ {0,1}} — 2(n²−n) members.
    X2,
    /// {e(i,j)^d} ∪ {f_k^d : k = 2..n} — n²−1 members, n ≥ 3.
    XWithFk,
    /// {E(i,j)} ∪ {F(1,k) : k = 2..n} — n²−1 members at level 2, n ≥ 2.
    Gamma2,
    /// The two-dimensional solver alphabet at level d ∈ {3,4,5,6}.
    SolverD,
}

/// One labelled member of a generating family. Labels are stable strings used
/// in reports and factor certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMember {
    pub label: String,
    pub word: Word,
}

/// A complete labelled generating family.
#[derive(Clone, Debug)]
pub struct GenFamily {
    pub tag: GenFamilyTag,
    pub n: usize,
    pub d: u64,
    pub members: Vec<GenMember>,
}

impl GenFamily {
    /// Look up a member by label.
    pub fn member(&self, label: &str) -> Option<&GenMember> {
        self.members.iter().find(|m| m.label == label)
    }
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Build the complete labelled member list of a generating family.
///
/// Preconditions: X1 and XWithFk need n ≥ 3; X2 needs n ≥ 2; Gamma2 needs
/// n ≥ 2 and d = 2; SolverD needs n = 2 and d ∈ {3,4,5,6}. All families need
/// d ≥ 1.
pub fn gen_set(tag: GenFamilyTag, n: usize, d: u64) -> Result<GenFamily> {
    if d < 1 {
        return Err(Error::Unsupported(format!("level d={d} must be ≥ 1")));
    }
    let di = i64::try_from(d).map_err(|_| Error::Precondition("level out of range".into()))?;
    let mut members = Vec::new();
    match tag {
        GenFamilyTag::X1 => {
            if n < 3 {
                return Err(Error::Unsupported(format!("X1 requires n ≥ 3, got {n}")));
            }
            for (i, j) in ordered_pairs(n) {
                members.push(GenMember {
                    label: format!("e({i},{j})^{d}"),
                    word: Word::from_atoms(n, vec![Atom::elem(i, j, di)])?,
                });
            }
            for k in 2..=n {
                let word = Word::from_atoms(
                    n,
                    vec![
                        Atom::elem(k, 1, 1),
                        Atom::elem(1, k, di),
                        Atom::elem(k, 1, -1),
                    ],
                )?;
                members.push(GenMember {
                    label: word.to_grammar_string(),
                    word,
                });
            }
        }
        GenFamilyTag::X2 => {
            if n < 2 {
                return Err(Error::Unsupported(format!("X2 requires n ≥ 2, got {n}")));
            }
            for (i, j) in ordered_pairs(n) {
                for m in [0i64, 1] {
                    let word = build_named(n, &NamedWord::ConjGen { i, j, m, d })?;
                    let label = if m == 0 {
                        format!("e({i},{j})^{d}")
                    } else {
                        word.to_grammar_string()
                    };
                    members.push(GenMember { label, word });
                }
            }
        }
        GenFamilyTag::XWithFk => {
            if n < 3 {
                return Err(Error::Unsupported(format!(
                    "XWithFk requires n ≥ 3, got {n}"
                )));
            }
            for (i, j) in ordered_pairs(n) {
                members.push(GenMember {
                    label: format!("e({i},{j})^{d}"),
                    word: Word::from_atoms(n, vec![Atom::elem(i, j, di)])?,
                });
            }
            for k in 2..=n {
                members.push(GenMember {
                    label: format!("f_{k}^{d}"),
                    word: build_named(n, &NamedWord::FkD { k, d })?,
                });
            }
        }
        GenFamilyTag::Gamma2 => {
            if n < 2 {
                return Err(Error::Unsupported(format!(
                    "Gamma2 requires n ≥ 2, got {n}"
                )));
            }
            if d != 2 {
                return Err(Error::Unsupported(format!(
                    "Gamma2 is a level-2 family; got d={d}"
                )));
            }
            for (i, j) in ordered_pairs(n) {
                members.push(GenMember {
                    label: format!("E({i},{j})"),
                    word: build_named(n, &NamedWord::BigE { i, j })?,
                });
            }
            for k in 2..=n {
                members.push(GenMember {
                    label: format!("F(1,{k})"),
                    word: build_named(n, &NamedWord::BigF { k: 1, l: k })?,
                });
            }
        }
        GenFamilyTag::SolverD => {
            if n != 2 || !(3..=6).contains(&d) {
                return Err(Error::Unsupported(format!(
                    "the solver alphabet needs n = 2 and d ∈ {{3,4,5,6}}; got n={n}, d={d}"
                )));
            }
            let word = Word::from_atoms(2, vec![Atom::elem(2, 1, di)])?;
            members.push(GenMember {
                label: format!("e(2,1)^{d}"),
                word,
            });
            for m in 0..di {
                let word = build_named(2, &NamedWord::ConjGen { i: 1, j: 2, m, d })?;
                let label = if m == 0 {
                    format!("e(1,2)^{d}")
                } else {
                    word.to_grammar_string()
                };
                members.push(GenMember { label, word });
            }
            if d == 5 {
                // e(2,1)^m e(1,2)^±2 e(2,1)^5 e(1,2)^∓2 e(2,1)^−m, both signs.
                for m in 0..5i64 {
                    for s in [2i64, -2] {
                        let word = Word::from_atoms(
                            2,
                            vec![
                                Atom::elem(2, 1, m),
                                Atom::elem(1, 2, s),
                                Atom::elem(2, 1, 5),
                                Atom::elem(1, 2, -s),
                                Atom::elem(2, 1, -m),
                            ],
                        )?;
                        members.push(GenMember {
                            label: word.to_grammar_string(),
                            word,
                        });
                    }
                }
            }
            if d == 6 {
                // e(2,1)^m [e(2,1)^±3, e(1,2)^±2] e(2,1)^−m, all four sign choices.
                for m in 0..6i64 {
                    for s3 in [3i64, -3] {
                        for s2 in [2i64, -2] {
                            let word = Word::from_atoms(
                                2,
                                vec![
                                    Atom::elem(2, 1, m),
                                    Atom::elem(2, 1, s3),
                                    Atom::elem(1, 2, s2),
                                    Atom::elem(2, 1, -s3),
                                    Atom::elem(1, 2, -s2),
                                    Atom::elem(2, 1, -m),
                                ],
                            )?;
                            members.push(GenMember {
                                label: word.to_grammar_string(),
                                word,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(GenFamily {
        tag,
        n,
        d,
        members,
    })
}
