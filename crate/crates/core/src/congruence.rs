//! Level computation, membership predicates, abelianization coordinates, and
//! exact commutators.
//!
//! The level of X ≠ I is the gcd of the entries of X − I; X lies in Γ_d(n)
//! exactly when det X = 1 and d divides the level. For X = I + dA ∈ Γ_d(n)
//! with n ≥ 3, the map X ↦ (A_ij mod d for i ≠ j, A_kk mod d for k ≥ 2) is
//! the abelianization onto (ℤ/dℤ)^{n²−1}; the missing A₁₁ slot is determined
//! by trace(A) ≡ 0 mod d, which det X = 1 forces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::exactmat::{mat_det, mat_inv, mat_mul, BigIntMatrix};
use crate::{Error, Result};

/// The level of a matrix: gcd of the entries of X − I, with the sentinel 0
/// for X = I meaning "every level" (0 is divisible by every d).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Level(pub BigInt);

impl Level {
    /// True when d divides the level (always true for the identity sentinel).
    pub fn divisible_by(&self, d: u64) -> bool {
        if self.0.is_zero() {
            return true;
        }
        (&self.0 % BigInt::from(d)).is_zero()
    }

    /// True for the X = I sentinel.
    pub fn is_every_level(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_zero() {
            f.write_str("0 (identity: every level)")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// gcd of the entries of X − I (0 iff X = I).
pub fn level(x: &BigIntMatrix) -> Level {
    let n = x.n();
    let mut g = BigInt::zero();
    for i in 1..=n {
        for j in 1..=n {
            let mut v = x.entry(i, j).clone();
            if i == j {
                v -= 1;
            }
            g = g.gcd(&v);
        }
    }
    Level(g)
}

/// Which ambient group the congruence subgroup sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupVariant {
    /// Determinant must be exactly 1.
    Sl,
    /// Determinant may be ±1 (the GL analogue; for d ≥ 3 the congruence
    /// condition forces determinant 1 anyway, since det ≡ 1 mod d).
    Gl,
}

/// Membership in Γ_d(n) (Sl) or its GL analogue (Gl): determinant condition
/// plus X ≡ I mod d. Requires d ≥ 1; Γ₁(n) is all of SL(n;ℤ).
pub fn is_member(x: &BigIntMatrix, d: u64, variant: GroupVariant) -> Result<bool> {
    if d < 1 {
        return Err(Error::Precondition("membership level d must be ≥ 1".into()));
    }
    let det = mat_det(x);
    let det_ok = match variant {
        GroupVariant::Sl => det.is_one(),
        GroupVariant::Gl => det.abs().is_one(),
    };
    Ok(det_ok && level(x).divisible_by(d))
}

/// Abelianization coordinates of X = I + dA: the n²−n off-diagonal residues
/// A_ij mod d and the n−1 diagonal residues A_kk mod d for k = 2..n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelCoords {
    n: usize,
    d: u64,
    offdiag: BTreeMap<(usize, usize), u64>,
    diag: BTreeMap<usize, u64>,
    /// Set for n = 2: the formula is still a homomorphism onto (ℤ/dℤ)³, but
    /// it is not the abelianization there (that interpretation needs n ≥ 3).
    n2_warning: bool,
}

impl AbelCoords {
    /// The zero element of (ℤ/dℤ)^{n²−1}.
    pub fn zero(n: usize, d: u64) -> Result<AbelCoords> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "abelianization coordinates need n ≥ 2, got {n}"
            )));
        }
        if d < 2 {
            return Err(Error::Unsupported(format!(
                "abelianization coordinates collapse at level {d}; need d ≥ 2"
            )));
        }
        let mut offdiag = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    offdiag.insert((i, j), 0);
                }
            }
        }
        let diag = (2..=n).map(|k| (k, 0)).collect();
        Ok(AbelCoords {
            n,
            d,
            offdiag,
            diag,
            n2_warning: n == 2,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Residue of the (i,j) off-diagonal coordinate (i ≠ j).
    pub fn offdiag(&self, i: usize, j: usize) -> u64 {
        *self
            .offdiag
            .get(&(i, j))
            .expect("offdiag coordinate index in range")
    }

    /// Residue of the k-th diagonal coordinate (k ≥ 2).
    pub fn diag(&self, k: usize) -> u64 {
        *self.diag.get(&k).expect("diag coordinate index in range")
    }

    pub fn is_zero(&self) -> bool {
        self.offdiag.values().all(|&v| v == 0) && self.diag.values().all(|&v| v == 0)
    }

    /// True when the n = 2 caveat applies (homomorphism, not the abelianization).
    pub fn has_n2_warning(&self) -> bool {
        self.n2_warning
    }

    /// Iterate all n²−1 coordinates in a stable order: off-diagonal entries
    /// in (i,j) lexicographic order, then diagonal k = 2..n. Labels are
    /// `offdiag(i,j)` and `diag(k)`.
    pub fn coordinates(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.offdiag
            .iter()
            .map(|(&(i, j), &v)| (format!("offdiag({i},{j})"), v))
            .chain(self.diag.iter().map(|(&k, &v)| (format!("diag({k})"), v)))
    }
}

impl Serialize for AbelCoords {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = 3 + usize::from(self.n2_warning);
        let mut map = serializer.serialize_map(Some(entries + 1))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("d", &self.d)?;
        let off: BTreeMap<String, u64> = self
            .offdiag
            .iter()
            .map(|(&(i, j), &v)| (format!("{i},{j}"), v))
            .collect();
        map.serialize_entry("offdiag", &off)?;
        let diag: BTreeMap<String, u64> = self
            .diag
            .iter()
            .map(|(&k, &v)| (k.to_string(), v))
            .collect();
        map.serialize_entry("diag", &diag)?;
        if self.n2_warning {
            map.serialize_entry("n2_warning", &true)?;
        }
        map.end()
    }
}

/// Compute the abelianization coordinates of X ∈ Γ_d(n).
///
/// Requires d ≥ 2 (at d = 1 the coordinates collapse) and membership in
/// Γ_d(n) with determinant 1. The internal consistency check verifies
/// trace(A) ≡ 0 mod d, which holds for every determinant-1 member.
pub fn abelianize(x: &BigIntMatrix, d: u64) -> Result<AbelCoords> {
    let n = x.n();
    let mut coords = AbelCoords::zero(n, d)?;
    if !is_member(x, d, GroupVariant::Sl)? {
        return Err(Error::NotMember(format!(
            "matrix is not in the level-{d} congruence subgroup (need det 1 and X ≡ I mod {d})"
        )));
    }
    let db = BigInt::from(d);
    // X = I + dA with A integral; reduce A mod d.
    let mut trace = BigInt::zero();
    for i in 1..=n {
        for j in 1..=n {
            let mut v = x.entry(i, j).clone();
            if i == j {
                v -= 1;
            }
            debug_assert!((&v % &db).is_zero(), "membership guarantees divisibility");
            let a = v / &db;
            let r = u64::try_from(a.mod_floor(&db)).expect("residue fits u64");
            if i != j {
                coords.offdiag.insert((i, j), r);
            } else {
                trace += &a;
                if i >= 2 {
                    coords.diag.insert(i, r);
                }
            }
        }
    }
    if !trace.mod_floor(&db).is_zero() {
        return Err(Error::Consistency(format!(
            "trace of (X − I)/{d} is {trace} ≢ 0 mod {d}; upstream determinant invariant broken"
        )));
    }
    Ok(coords)
}

/// Coordinatewise sum in (ℤ/dℤ)^{n²−1}.
pub fn abel_add(a: &AbelCoords, b: &AbelCoords) -> Result<AbelCoords> {
    if a.n != b.n || a.d != b.d {
        return Err(Error::Mismatch(format!(
            "coordinate sum needs matching (n, d): ({}, {}) vs ({}, {})",
            a.n, a.d, b.n, b.d
        )));
    }
    let mut out = a.clone();
    for (k, v) in out.offdiag.iter_mut() {
        *v = (*v + b.offdiag[k]) % a.d;
    }
    for (k, v) in out.diag.iter_mut() {
        *v = (*v + b.diag[k]) % a.d;
    }
    Ok(out)
}

/// Exact group commutator X·Y·X⁻¹·Y⁻¹. Both matrices must be unimodular and
/// of equal dimension.
pub fn commutator(x: &BigIntMatrix, y: &BigIntMatrix) -> Result<BigIntMatrix> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {}×{} with {}×{}",
            x.n(),
            x.n(),
            y.n(),
            y.n()
        )));
    }
    let xi = mat_inv(x)?;
    let yi = mat_inv(y)?;
    mat_mul(&mat_mul(x, y)?, &mat_mul(&xi, &yi)?)
}
