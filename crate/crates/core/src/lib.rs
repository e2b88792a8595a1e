//! Exact-arithmetic toolkit for principal congruence subgroups of SL(n;ℤ).
//!
//! The congruence subgroup of level d, written Γ_d(n) here, is the kernel of
//! entrywise reduction SL(n;ℤ) → SL(n;ℤ/dℤ): integer matrices congruent to
//! the identity mod d with determinant 1. Γ̂_d(n) is the GL analogue
//! (determinant ±1), which coincides with Γ_d(n) once d ≥ 3.
//!
//! The crate is organised around constructive, certificate-producing objects:
//!
//! - [`exactmat`] — arbitrary-precision integer matrices and residue matrices;
//!   the substrate everything else evaluates into.
//! - [`genwords`] — symbolic words over elementary matrices `e(i,j)^s` and
//!   sign flips `F(k)`, a text grammar for them, and the named generator
//!   families (the level-d families `X1`/`X2`/`XWithFk`, the level-2 family,
//!   and the 2×2 solver alphabets for d ∈ {3,4,5,6}).
//! - [`congruence`] — level computation, membership, the abelianization
//!   coordinates Γ_d(n) → (ℤ/dℤ)^{n²−1}, and commutator-level facts.
//! - [`rewriter`] — explicit word identities: the m-conjugate expansions, the
//!   bounded-conjugate expansions for conjugator exponents 2 and −1, the full
//!   conjugation case analysis, and the X₂ → X₁ rewrite; each emitted as a
//!   structured factor list and verified by evaluation.
//! - [`wordsolve2`] — the Euclidean-style decomposition algorithm for
//!   Γ_d(2), d ∈ {3,4,5,6}: turns a member matrix into a word over the
//!   labelled solver generators with a machine-checkable trace.
//! - [`presentation`] — relator families for the index-2 subgroup of the
//!   even-level GL group, Schreier rewriting with transversal {I, F₁}, and
//!   relator verification.
//! - [`quotients`] — BFS enumeration of images of Γ_l(n) in SL(n;ℤ/mℤ),
//!   abelian invariant factors by order census, and quotient-law checks.
//! - [`sample`] — deterministic, seeded random words/matrices shared by the
//!   property suites and the CLI self-test.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to share across threads.

pub mod congruence;
pub mod error;
pub mod exactmat;
pub mod genwords;
pub mod presentation;
pub mod quotients;
pub mod rewriter;
pub mod sample;
pub mod wordsolve2;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
