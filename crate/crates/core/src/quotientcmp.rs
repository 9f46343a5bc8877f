//! Comparison of genus-zero invariants of a GIT quotient `X̂ = X//G` with
//! those of `X`:
//!
//! ```text
//! GW_{X̂,Â}(α̂_1, …, α̂_k) = GW_{X,A}(α_1 ∪ ζ, α_2, …, α_k)
//! ```
//!
//! where `α_i` is the pullback of `α̂_i` through the closure of the graph of
//! the quotient map and `ζ` is the class of a transverse slice.
//!
//! Two families are built in:
//!
//! * `TorusPair(m, n)`: `C*` acting on `P^{m+n+1}` by `t·(z, w) = (tz, t⁻¹w)`,
//!   quotient `P^m × P^n`, `ζ = H`, `H1^a H2^b ↦ H^{a+b}`, degree `d ↦ (d, d)`.
//! * `GrassmannQuot(m, n)`: `SL_n` acting on `P(Hom(C^m, C^n)) = P^{mn−1}`,
//!   quotient `Gr(m − n, m)` via the kernel, `ζ = H^{n²−1}`,
//!   `σ_λ ↦ d(λ) H^{|λ|}`, degree `d ↦ nd`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::cohmodel::{BasisClass, ClassVector, CurveClass, ModelKind, RingModel};
use crate::error::{param, Error, Result};
use crate::gwengine::{self, GwEngine, MemoCache};
use crate::schubert::{self, Partition};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    TorusPair { m: u32, n: u32 },
    GrassmannQuot { m: u32, n: u32 },
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::TorusPair { m, n } => write!(f, "torus:{m},{n}"),
            FamilyKind::GrassmannQuot { m, n } => write!(f, "grass:{m},{n}"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    /// `torus:m,n` or `grass:m,n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised family {s:?}"));
        let (name, params) = s.trim().split_once(':').ok_or_else(bad)?;
        let (m, n) = params.split_once(',').ok_or_else(bad)?;
        let m = m.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        match name {
            "torus" => Ok(FamilyKind::TorusPair { m, n }),
            "grass" => Ok(FamilyKind::GrassmannQuot { m, n }),
            _ => Err(bad()),
        }
    }
}

/// Ambient space, quotient and slice data for one family.
#[derive(Clone, Debug)]
pub struct QuotientFamily {
    pub kind: FamilyKind,
    /// `X`
    pub upstairs: RingModel,
    /// `X̂ = X//G`
    pub downstairs: RingModel,
    /// Dimension of the group acting freely on the semistable locus.
    pub dim_g: u32,
    /// `ζ`
    pub slice: BasisClass,
}

/// Expected-dimension bookkeeping for one `(g, k, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionLedger {
    pub genus: u32,
    pub points: u32,
    pub degree: u32,
    /// `exp.dim M̄_{g,k}(X̂, Â)`
    pub d_hat: i64,
    /// `exp.dim M̄_{g,k}(X, A) − dim G`
    pub d_minus_dim_g: i64,
    pub gap: i64,
    /// `g · dim G`
    pub expected_gap: i64,
    /// Real dimension of the space of maps from a fixed genus-`g` curve,
    /// torus families only.
    pub real_dim_2d: Option<i64>,
}

impl DimensionLedger {
    pub fn gap_ok(&self) -> bool {
        self.gap == self.expected_gap
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub family: FamilyKind,
    pub degree: u32,
    pub insertions: Vec<BasisClass>,
    /// Insertion slot receiving `ζ` (0-based).
    pub slot: usize,
    /// Invariant of the quotient.
    pub lhs: Rational,
    /// Invariant of `X` with pulled-back, slice-corrected insertions.
    pub rhs: Rational,
    pub equal: bool,
    pub lhs_dim_ok: bool,
    pub rhs_dim_ok: bool,
    pub ledger: DimensionLedger,
    pub warnings: Vec<String>,
}

impl QuotientFamily {
    pub fn new(kind: FamilyKind) -> Result<Self> {
        match kind {
            FamilyKind::TorusPair { m, n } => {
                if m == 0 || n == 0 {
                    return param(format!("{kind}: m and n must be positive"));
                }
                Ok(QuotientFamily {
                    kind,
                    upstairs: RingModel::new(ModelKind::Projective(m + n + 1))?,
                    downstairs: RingModel::new(ModelKind::Product(m, n))?,
                    dim_g: 1,
                    slice: BasisClass::Power(1),
                })
            }
            FamilyKind::GrassmannQuot { m, n } => {
                if n == 0 || n >= m {
                    return param(format!("{kind}: needs 0 < n < m"));
                }
                Ok(QuotientFamily {
                    kind,
                    upstairs: RingModel::new(ModelKind::Projective(m * n - 1))?,
                    downstairs: RingModel::new(ModelKind::Grassmannian(m - n, m))?,
                    dim_g: n * n - 1,
                    slice: BasisClass::Power(n * n - 1),
                })
            }
        }
    }

    /// Class of the image in `X̂` of a degree-`d` curve in `X`.
    pub fn pushforward_class(&self, d: u32) -> CurveClass {
        match self.kind {
            FamilyKind::TorusPair { .. } => CurveClass::bidegree(d, d),
            FamilyKind::GrassmannQuot { n, .. } => CurveClass::degree(n * d),
        }
    }

    /// Pullback of a basis class of `X̂` through the graph correspondence.
    /// Not multiplicative; only defined on basis classes and extended linearly.
    pub fn pullback_class(&self, class: &BasisClass) -> Result<ClassVector> {
        if !self.downstairs.contains(class) {
            return param(format!("{class} is not a class of {}", self.downstairs.kind));
        }
        match (self.kind, class) {
            (FamilyKind::TorusPair { .. }, BasisClass::Monomial(a, b)) => {
                Ok(ClassVector::basis(BasisClass::Power(a + b)))
            }
            (FamilyKind::GrassmannQuot { m, n }, BasisClass::Schubert(lambda)) => {
                let d = schubert::dlambda(lambda, m, n)?;
                Ok(ClassVector::term(BasisClass::Power(lambda.weight()), Rational::from_integer(d.value)))
            }
            _ => unreachable!("downstairs basis matches the family"),
        }
    }

    pub fn dimension_ledger(&self, genus: u32, points: u32, d: u32) -> DimensionLedger {
        let d_hat = self.downstairs.expected_dim(genus, points, &self.pushforward_class(d));
        let upstairs_curve = CurveClass::degree(d);
        let d_minus_dim_g = self.upstairs.expected_dim(genus, points, &upstairs_curve) - self.dim_g as i64;
        let real_dim_2d = match self.kind {
            FamilyKind::TorusPair { .. } => {
                let n = self.upstairs.complex_dimension as i64;
                let r = self.dim_g as i64;
                Some(
                    2 * (1 - genus as i64) * (n - r)
                        + 2 * self.upstairs.c1_dot(&upstairs_curve)
                        + 2 * points as i64,
                )
            }
            FamilyKind::GrassmannQuot { .. } => None,
        };
        DimensionLedger {
            genus,
            points,
            degree: d,
            d_hat,
            d_minus_dim_g,
            gap: d_hat - d_minus_dim_g,
            expected_gap: genus as i64 * self.dim_g as i64,
            real_dim_2d,
        }
    }

    /// For `Gr(1, m)` and `Gr(m − 1, m)` the quotient is a projective space;
    /// every Schubert class is then the power of `H` of the same codimension.
    fn projective_downstairs(&self) -> Option<RingModel> {
        match self.downstairs.kind {
            ModelKind::Grassmannian(k, m) if k == 1 || k == m - 1 => {
                Some(RingModel::new(ModelKind::Projective(m - 1)).expect("m ≥ 2"))
            }
            _ => None,
        }
    }

    /// Compares both sides with `ζ` on the first insertion.
    pub fn verify_comparison<C: MemoCache>(
        &self,
        engine: &GwEngine<C>,
        d: u32,
        insertions: &[BasisClass],
    ) -> Result<ComparisonReport> {
        self.verify_comparison_at(engine, d, insertions, 0)
    }

    /// As [`QuotientFamily::verify_comparison`] with `ζ` on insertion `slot`.
    pub fn verify_comparison_at<C: MemoCache>(
        &self,
        engine: &GwEngine<C>,
        d: u32,
        insertions: &[BasisClass],
        slot: usize,
    ) -> Result<ComparisonReport> {
        if d == 0 {
            return param("the comparison needs degree d ≥ 1");
        }
        let k = insertions.len();
        if slot >= k {
            return param(format!("slice slot {slot} out of range for {k} insertions"));
        }
        let pulled = insertions.iter().map(|c| self.pullback_class(c)).collect::<Result<Vec<_>>>()?;
        let curve_hat = self.pushforward_class(d);
        let codim: i64 = insertions.iter().map(|c| c.codim() as i64).sum();
        let lhs_dim_ok = codim == self.downstairs.expected_dim(0, k as u32, &curve_hat);
        let rhs_dim_ok = codim + self.dim_g as i64 == self.upstairs.expected_dim(0, k as u32, &CurveClass::degree(d));

        let mut warnings = Vec::new();
        let lhs = match self.kind {
            FamilyKind::TorusPair { .. } => engine.gw0_basis(&self.downstairs, &curve_hat, insertions)?,
            FamilyKind::GrassmannQuot { m, n } => {
                let lambdas: Vec<&Partition> = insertions
                    .iter()
                    .map(|c| match c {
                        BasisClass::Schubert(l) => l,
                        _ => unreachable!("validated by pullback_class"),
                    })
                    .collect();
                let balanced = grassmann_k_formula(&lambdas, m, n, d);
                if balanced != k as i64 {
                    warnings.push(format!("k = {k} differs from the dimensionally balanced k = {balanced}"));
                }
                if let Some(pn) = self.projective_downstairs() {
                    let mapped: Vec<BasisClass> = lambdas.iter().map(|l| BasisClass::Power(l.weight())).collect();
                    engine.gw0_basis(&pn, &curve_hat, &mapped)?
                } else if k == 3 {
                    gwengine::gw0_grassmannian_3pt(m - n, m, lambdas[0], lambdas[1], lambdas[2], n * d)?
                } else {
                    return Err(Error::UnsupportedConfiguration(format!(
                        "{}: only 3-point invariants of Gr({},{m}) are available, got k = {k}",
                        self.kind,
                        m - n
                    )));
                }
            }
        };

        let slice = ClassVector::basis(self.slice.clone());
        let mut upstairs_insertions = pulled;
        upstairs_insertions[slot] = self.upstairs.cup_vec(&upstairs_insertions[slot], &slice);
        let rhs = engine.gw0(&self.upstairs, &CurveClass::degree(d), &upstairs_insertions)?;

        debug_assert!(lhs_dim_ok || lhs.is_zero());
        debug_assert!(rhs_dim_ok || rhs.is_zero());
        Ok(ComparisonReport {
            family: self.kind,
            degree: d,
            insertions: insertions.to_vec(),
            slot,
            equal: lhs == rhs,
            lhs,
            rhs,
            lhs_dim_ok,
            rhs_dim_ok,
            ledger: self.dimension_ledger(0, k as u32, d),
            warnings,
        })
    }
}

pub fn make_family(kind: FamilyKind) -> Result<QuotientFamily> {
    QuotientFamily::new(kind)
}

/// Number of insertions balancing the Grassmannian identity:
/// `k = Σ|λ_j| − mnd − n(m − n) + 3`.
pub fn grassmann_k_formula(lambdas: &[&Partition], m: u32, n: u32, d: u32) -> i64 {
    let total: i64 = lambdas.iter().map(|l| l.weight() as i64).sum();
    let (m, n, d) = (m as i64, n as i64, d as i64);
    total - m * n * d - n * (m - n) + 3
}
