//! Exact classification of finitely generated modules over the regular
//! algebra `A = K^Δ` of `K`-valued functions on a finite atom set `Δ`.
//!
//! The idempotents of `A` form the Boolean algebra of subsets of `Δ`
//! ([`boolean`]); `A` itself is in [`algebra`]; submodules of `A^n` given
//! by generators are in [`module_space`]. [`classification`] computes the
//! passport, a partition of unity into pieces of constant rank that is a
//! complete isomorphism invariant, and builds explicit isomorphisms.
//! [`oracle`] recomputes everything with textbook per-atom linear algebra.
//!
//! All math is generic over a [`Field`]; the aliases below fix the two
//! supported backends, `F_p` and `Q`.

pub mod algebra;
pub mod boolean;
pub mod classification;
pub mod error;
pub mod field;
pub mod linalg;
pub mod module_space;
pub mod oracle;
pub mod random;
pub mod verify;

pub use algebra::{mix_scalars, Algebra, AlgebraElement, Op, StepForm};
pub use boolean::{disjointify, sup_family, AtomSet, Idempotent, PartitionOfUnity};
pub use classification::{
    build_isomorphism, extract_basis, finitely_dimensional_report, is_strictly_homogeneous,
    iso_check, kappa, passport, piecewise_basis, regular_eliminate, BasisStrategy,
    EliminationTrace, FiniteDimReport, IsoMap, IsoPiece, Kappa, Passport, PassportEntry,
    PiecewiseBasis, SplitEvent,
};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use module_space::{
    full_support_element, independence_test, membership, mix_vectors, reassemble, split_product,
    support_vector, GeneratorSet, Independence, Membership, ModuleVector,
};
pub use oracle::{atom_rank_profile, oracle_passport, oracle_verify_iso, RankProfile};

/// A field element of `Q`.
pub type Rational = num_rational::BigRational;

pub type FpAlgebra = Algebra<PrimeField>;
pub type QAlgebra = Algebra<Rationals>;
pub type FpElement = AlgebraElement<PrimeField>;
pub type QElement = AlgebraElement<Rationals>;
pub type FpVector = ModuleVector<PrimeField>;
pub type QVector = ModuleVector<Rationals>;
pub type FpGeneratorSet = GeneratorSet<PrimeField>;
pub type QGeneratorSet = GeneratorSet<Rationals>;
pub type FpIsoMap = IsoMap<PrimeField>;
pub type QIsoMap = IsoMap<Rationals>;
