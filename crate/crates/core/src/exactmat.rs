//! Exact integer and residue matrix arithmetic.
//!
//! [`BigIntMatrix`] is a dense square matrix with arbitrary-precision integer
//! entries — no silent overflow at any magnitude. [`ResidueMatrix`] is its
//! entrywise reduction mod m, with a canonical byte serialization so closures
//! of residue matrices can be kept in hash sets.
//!
//! Index convention: every public (i, j) index in this crate is 1-based,
//! matching the `e(i,j)` generator notation used throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Square matrix over arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigIntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl BigIntMatrix {
    /// The n×n identity matrix.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut entries = vec![BigInt::zero(); n * n];
        for k in 0..n {
            entries[k * n + k] = BigInt::one();
        }
        BigIntMatrix { n, entries }
    }

    /// Build from rows; every row must have the same length as the row count.
    pub fn from_rows<T: Into<BigInt>>(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    r + 1,
                    row.len(),
                    n
                )));
            }
            entries.extend(row.into_iter().map(Into::into));
        }
        Ok(BigIntMatrix { n, entries })
    }

    /// Dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 1-based position (i, j). Panics on out-of-range indices —
    /// this is an accessor, not a validator.
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "entry index ({i},{j}) out of range for n={}",
            self.n
        );
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == BigIntMatrix::identity(self.n)
    }

    /// Largest absolute entry value (useful for size reporting).
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl std::fmt::Debug for BigIntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| self.entries[r * self.n + c].to_string())
                    .collect()
            })
            .collect();
        write!(f, "BigIntMatrix({rows:?})")
    }
}

/// Elementary matrix e(i,j)^s: identity with entry (i, j) set to s.
/// Indices are 1-based and must be distinct.
pub fn elementary(n: usize, i: usize, j: usize, s: impl Into<BigInt>) -> Result<BigIntMatrix> {
    if i == j || i < 1 || j < 1 || i > n || j > n {
        return Err(Error::InvalidIndex(format!(
            "elementary indices ({i},{j}) invalid for n={n}: need distinct indices in 1..={n}"
        )));
    }
    let mut m = BigIntMatrix::identity(n);
    m.entries[(i - 1) * n + (j - 1)] = s.into();
    Ok(m)
}

/// Sign flip F(k): identity with the (k, k) entry set to −1. Determinant −1.
pub fn sign_flip(n: usize, k: usize) -> Result<BigIntMatrix> {
    if k < 1 || k > n {
        return Err(Error::InvalidIndex(format!(
            "sign flip index {k} invalid for n={n}"
        )));
    }
    let mut m = BigIntMatrix::identity(n);
    m.entries[(k - 1) * n + (k - 1)] = BigInt::from(-1);
    Ok(m)
}

/// Exact matrix product A·B.
pub fn mat_mul(a: &BigIntMatrix, b: &BigIntMatrix) -> Result<BigIntMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!(
            "product of {}×{} with {}×{}",
            a.n, a.n, b.n, b.n
        )));
    }
    let n = a.n;
    let mut entries = vec![BigInt::zero(); n * n];
    for r in 0..n {
        for k in 0..n {
            let ark = &a.entries[r * n + k];
            if ark.is_zero() {
                continue;
            }
            for c in 0..n {
                let brc = &b.entries[k * n + c];
                if !brc.is_zero() {
                    entries[r * n + c] += ark * brc;
                }
            }
        }
    }
    Ok(BigIntMatrix { n, entries })
}

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
/// Every intermediate division is exact, so no rationals appear.
pub fn mat_det(a: &BigIntMatrix) -> BigInt {
    let n = a.n;
    let mut w = a.entries.clone();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if w[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !w[r * n + k].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        w.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &w[i * n + j] * &w[k * n + k] - &w[i * n + k] * &w[k * n + j];
                w[i * n + j] = num / &prev;
            }
            w[i * n + k] = BigInt::zero();
        }
        prev = w[k * n + k].clone();
    }
    let det = w[(n - 1) * n + (n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Determinant of the minor obtained by deleting 0-based row `ri` and column `ci`.
fn minor_det(a: &BigIntMatrix, ri: usize, ci: usize) -> BigInt {
    let n = a.n;
    if n == 1 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(n - 1);
    for r in 0..n {
        if r == ri {
            continue;
        }
        let mut row = Vec::with_capacity(n - 1);
        for c in 0..n {
            if c == ci {
                continue;
            }
            row.push(a.entries[r * n + c].clone());
        }
        rows.push(row);
    }
    mat_det(&BigIntMatrix::from_rows(rows).expect("minor is square"))
}

/// Exact inverse of a unimodular matrix (determinant ±1), via the adjugate.
pub fn mat_inv(a: &BigIntMatrix) -> Result<BigIntMatrix> {
    let det = mat_det(a);
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(format!(
            "inverse requires determinant ±1, got {det}"
        )));
    }
    let n = a.n;
    let mut entries = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            // adj(A)[i][j] = (−1)^{i+j} · minor(A, j, i); inverse = adj / det.
            let m = minor_det(a, j, i);
            let signed = if (i + j) % 2 == 0 { m } else { -m };
            entries[i * n + j] = &det * signed;
        }
    }
    let inv = BigIntMatrix { n, entries };
    debug_assert!(mat_mul(a, &inv).expect("same dimension").is_identity());
    Ok(inv)
}

/// Entrywise reduction mod m (m ≥ 2), mapping into [0, m).
pub fn mat_mod(a: &BigIntMatrix, m: u64) -> Result<ResidueMatrix> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} < 2")));
    }
    let mb = BigInt::from(m);
    let entries = a
        .entries
        .iter()
        .map(|e| {
            let r = e.mod_floor(&mb);
            u64::try_from(r).expect("residue fits in u64")
        })
        .collect();
    Ok(ResidueMatrix {
        n: a.n,
        m,
        entries,
    })
}

/// JSON shape for [`BigIntMatrix`]: `{"n": 2, "entries": [["1","3"],["0","1"]]}`.
/// Entries are decimal strings (sign prefix allowed) so round-trips are
/// bit-exact at any magnitude.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for BigIntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| self.entries[r * self.n + c].to_string())
                    .collect()
            })
            .collect();
        MatrixJson { n: self.n, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BigIntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.n == 0 || raw.entries.len() != raw.n {
            return Err(D::Error::custom(format!(
                "matrix JSON: {} rows for n={}",
                raw.entries.len(),
                raw.n
            )));
        }
        let mut rows = Vec::with_capacity(raw.n);
        for (r, row) in raw.entries.iter().enumerate() {
            if row.len() != raw.n {
                return Err(D::Error::custom(format!(
                    "matrix JSON: row {} has {} entries for n={}",
                    r + 1,
                    row.len(),
                    raw.n
                )));
            }
            let mut out = Vec::with_capacity(raw.n);
            for s in row {
                let v: BigInt = s
                    .parse()
                    .map_err(|e| D::Error::custom(format!("entry {s:?}: {e}")))?;
                out.push(v);
            }
            rows.push(out);
        }
        BigIntMatrix::from_rows(rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl BigIntMatrix {
    /// Parse the documented matrix JSON format.
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))
    }

    /// Serialize to the documented matrix JSON format.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }
}

/// Square matrix over ℤ/mℤ with entries reduced into [0, m).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ResidueMatrix {
    n: usize,
    m: u64,
    entries: Vec<u64>,
}

impl ResidueMatrix {
    /// Identity mod m (m ≥ 2).
    pub fn identity(n: usize, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(format!("modulus {m} < 2")));
        }
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut entries = vec![0u64; n * n];
        for k in 0..n {
            entries[k * n + k] = 1 % m;
        }
        Ok(ResidueMatrix { n, m, entries })
    }

    /// Build from row-major entries, reducing each into [0, m).
    pub fn from_entries(n: usize, m: u64, entries: Vec<u64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(format!("modulus {m} < 2")));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(ResidueMatrix {
            n,
            m,
            entries: entries.into_iter().map(|e| e % m).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Entry at 1-based position (i, j).
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Residue product. Panics on mismatched dimension or modulus (callers in
    /// the enumeration code only ever combine matched matrices).
    pub fn mul(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.n, other.n, "residue product dimension mismatch");
        assert_eq!(self.m, other.m, "residue product modulus mismatch");
        let n = self.n;
        let m = self.m as u128;
        let mut entries = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k] as u128;
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let b = other.entries[k * n + c] as u128;
                    let cur = entries[r * n + c] as u128;
                    entries[r * n + c] = ((cur + a * b) % m) as u64;
                }
            }
        }
        ResidueMatrix {
            n,
            m: self.m,
            entries,
        }
    }

    /// Power by repeated squaring.
    pub fn pow(&self, e: u64) -> ResidueMatrix {
        let mut base = self.clone();
        let mut acc = ResidueMatrix::identity(self.n, self.m).expect("valid modulus");
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n;
        self.entries.iter().enumerate().all(|(idx, &v)| {
            let (r, c) = (idx / n, idx % n);
            v == if r == c { 1 % self.m } else { 0 }
        })
    }

    /// True when this matrix is ≡ I mod l. Only meaningful when l divides the
    /// modulus (entries are representatives in [0, m)).
    pub fn is_identity_mod(&self, l: u64) -> bool {
        assert!(l >= 1 && self.m % l == 0, "l must divide the modulus");
        let n = self.n;
        self.entries.iter().enumerate().all(|(idx, &v)| {
            let (r, c) = (idx / n, idx % n);
            v % l == if r == c { 1 % l } else { 0 }
        })
    }

    /// Determinant mod m. Uses exact signed cofactor expansion, so it is
    /// intended for the small dimensions the enumeration code works at.
    pub fn det_mod(&self) -> u64 {
        let n = self.n;
        let m = self.m as i128;
        let entries: Vec<i128> = self.entries.iter().map(|&v| v as i128).collect();
        fn det_rec(a: &[i128], idx: &[usize], n: usize, row: usize) -> i128 {
            if idx.len() == 1 {
                return a[row * n + idx[0]];
            }
            let mut acc = 0i128;
            for (pos, &c) in idx.iter().enumerate() {
                let v = a[row * n + c];
                if v != 0 {
                    let rest: Vec<usize> = idx
                        .iter()
                        .copied()
                        .filter(|&x| x != c)
                        .collect();
                    let sub = det_rec(a, &rest, n, row + 1);
                    if pos % 2 == 0 {
                        acc += v * sub;
                    } else {
                        acc -= v * sub;
                    }
                }
            }
            acc
        }
        let cols: Vec<usize> = (0..n).collect();
        let d = det_rec(&entries, &cols, n, 0);
        d.rem_euclid(m) as u64
    }

    /// Canonical injective serialization: row-major entries, each written
    /// big-endian in the fixed byte width needed for m−1. Usable as a set key.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let width = ((64 - (self.m - 1).leading_zeros()) as usize).div_ceil(8).max(1);
        let mut out = Vec::with_capacity(self.entries.len() * width);
        for &v in &self.entries {
            out.extend_from_slice(&v.to_be_bytes()[8 - width..]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: [[i64; 2]; 2]) -> BigIntMatrix {
        BigIntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn elementary_definition_instances() {
        assert_eq!(elementary(2, 1, 2, 3).unwrap(), m2([[1, 3], [0, 1]]));
        assert_eq!(elementary(2, 2, 1, -5).unwrap(), m2([[1, 0], [-5, 1]]));
        assert!(elementary(3, 2, 1, 0).unwrap().is_identity());
    }

    #[test]
    fn elementary_rejects_bad_indices() {
        assert!(matches!(elementary(3, 2, 2, 1), Err(Error::InvalidIndex(_))));
        assert!(matches!(elementary(3, 0, 1, 1), Err(Error::InvalidIndex(_))));
        assert!(matches!(elementary(3, 1, 4, 1), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn sign_flip_basics() {
        assert_eq!(sign_flip(2, 1).unwrap(), m2([[-1, 0], [0, 1]]));
        let f1 = sign_flip(2, 1).unwrap();
        assert!(mat_mul(&f1, &f1).unwrap().is_identity());
        let f23 = mat_mul(&sign_flip(3, 2).unwrap(), &sign_flip(3, 3).unwrap()).unwrap();
        let expect = BigIntMatrix::from_rows(vec![
            vec![1, 0, 0],
            vec![0, -1, 0],
            vec![0, 0, -1],
        ])
        .unwrap();
        assert_eq!(f23, expect);
        assert!(matches!(sign_flip(2, 3), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn product_and_power_additivity() {
        let a = elementary(2, 1, 2, 3).unwrap();
        let b = elementary(2, 2, 1, 3).unwrap();
        assert_eq!(mat_mul(&a, &b).unwrap(), m2([[10, 3], [3, 1]]));
        let i = BigIntMatrix::identity(2);
        assert_eq!(mat_mul(&a, &i).unwrap(), a);
        let s = elementary(2, 1, 2, 7).unwrap();
        let t = elementary(2, 1, 2, -2).unwrap();
        assert_eq!(mat_mul(&s, &t).unwrap(), elementary(2, 1, 2, 5).unwrap());
        assert!(matches!(
            mat_mul(&a, &BigIntMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(mat_det(&m2([[10, 3], [3, 1]])), BigInt::one());
        assert_eq!(mat_det(&BigIntMatrix::identity(4)), BigInt::one());
        assert_eq!(mat_det(&sign_flip(3, 2).unwrap()), BigInt::from(-1));
        // Zero pivot forces a row swap.
        let swapped = BigIntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(mat_det(&swapped), BigInt::from(-1));
        let singular = BigIntMatrix::from_rows(vec![vec![2, 4], vec![1, 2]]).unwrap();
        assert_eq!(mat_det(&singular), BigInt::zero());
    }

    #[test]
    fn inverse_values() {
        assert_eq!(
            mat_inv(&m2([[1, 3], [0, 1]])).unwrap(),
            m2([[1, -3], [0, 1]])
        );
        assert_eq!(
            mat_inv(&m2([[10, 3], [3, 1]])).unwrap(),
            m2([[1, -3], [-3, 10]])
        );
        assert!(mat_inv(&BigIntMatrix::identity(3)).unwrap().is_identity());
        // Determinant −1 is fine; determinant 2 is not.
        assert!(mat_inv(&sign_flip(3, 1).unwrap()).is_ok());
        assert!(matches!(
            mat_inv(&m2([[2, 0], [0, 1]])),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn reduction_mod_m() {
        let r = mat_mod(&m2([[10, 3], [3, 1]]), 3).unwrap();
        assert!(r.is_identity());
        let r = mat_mod(&m2([[1, -3], [0, 1]]), 4).unwrap();
        assert_eq!(r.entries(), &[1, 1, 0, 1]);
        assert!(matches!(
            mat_mod(&m2([[1, 0], [0, 1]]), 1),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn matrix_json_round_trip_is_bit_exact() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let a = BigIntMatrix::from_rows(vec![
            vec![BigInt::one(), -&big],
            vec![big.clone(), BigInt::zero()],
        ])
        .unwrap();
        let s = a.to_json_string();
        let back = BigIntMatrix::from_json_str(&s).unwrap();
        assert_eq!(a, back);
        // Sign prefix allowed on input.
        let c = BigIntMatrix::from_json_str(r#"{"n":2,"entries":[["+1","3"],["0","-1"]]}"#)
            .unwrap();
        assert_eq!(c, m2([[1, 3], [0, -1]]));
        assert!(BigIntMatrix::from_json_str(r#"{"n":2,"entries":[["1","3"]]}"#).is_err());
        assert!(BigIntMatrix::from_json_str(r#"{"n":2,"entries":[["1","x"],["0","1"]]}"#)
            .is_err());
    }

    #[test]
    fn residue_matrix_ops() {
        let a = mat_mod(&m2([[1, 3], [0, 1]]), 5).unwrap();
        let b = mat_mod(&m2([[1, 0], [3, 1]]), 5).unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.entries(), &[0, 3, 3, 1]); // [[10,3],[3,1]] mod 5
        assert_eq!(prod.det_mod(), 1);
        assert!(a.pow(5).is_identity()); // e12^3 has order 5 mod 5
        assert!(a.pow(0).is_identity());
        let i6 = ResidueMatrix::identity(2, 6).unwrap();
        assert!(i6.is_identity_mod(2) && i6.is_identity_mod(3));
        let e2 = mat_mod(&m2([[1, 2], [0, 1]]), 6).unwrap();
        assert!(e2.is_identity_mod(2));
        assert!(!e2.is_identity_mod(3));
    }

    #[test]
    fn canonical_bytes_width_and_injectivity() {
        let a = mat_mod(&m2([[1, 3], [0, 1]]), 5).unwrap();
        assert_eq!(a.canonical_bytes().len(), 4); // m−1 = 4 fits one byte/entry
        let b = mat_mod(&m2([[1, 0], [300, 1]]), 1000).unwrap();
        assert_eq!(b.canonical_bytes().len(), 8); // m−1 = 999 needs two bytes
        let c = mat_mod(&m2([[1, 4], [0, 1]]), 5).unwrap();
        assert_ne!(a.canonical_bytes(), c.canonical_bytes());
    }
}
