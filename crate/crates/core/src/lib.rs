//! Exact genus-zero Gromov–Witten invariants for projective spaces, products
//! of two projective spaces and (three-point) Grassmannians, together with the
//! machinery comparing invariants of a GIT quotient with those of the ambient
//! projective space.
//!
//! Module map:
//!
//! * [`cohmodel`] – finite models of the cohomology rings and the
//!   expected-dimension formula.
//! * [`schubert`] – partitions, Pieri / Littlewood–Richardson rules,
//!   degeneracy-locus degrees `d(λ)` and rim-hook quantum products.
//! * [`gwengine`] – memoized WDVV reconstruction of genus-zero invariants.
//! * [`quotientcmp`] – the two quotient families and the comparison check.
//! * [`persist`] – flat-file persistence for the invariant cache.

pub mod cohmodel;
pub mod error;
pub mod gwengine;
pub mod persist;
pub mod quotientcmp;
pub mod schubert;

pub use cohmodel::{BasisClass, ClassVector, CurveClass, ModelKind, RingModel};
pub use error::{Error, Result};
pub use gwengine::{GwEngine, InvariantKey, LocalCache, MemoCache, SharedCache};
pub use quotientcmp::{ComparisonReport, DimensionLedger, FamilyKind, QuotientFamily};

pub use schubert::{DegCoefficient, Partition};

/// Exact rational number used for every invariant.
pub type Rational = num_rational::BigRational;
