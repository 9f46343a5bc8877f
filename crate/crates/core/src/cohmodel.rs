//! Finite models of `H*(P^N)`, `H*(P^m × P^n)` and `H*(Gr(k, m))`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{param, Error, Result};
use crate::schubert::{self, Partition};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// `P^N`
    Projective(u32),
    /// `P^m × P^n`
    Product(u32, u32),
    /// `Gr(k, m)`, the `k`-planes in `C^m`
    Grassmannian(u32, u32),
}

impl ModelKind {
    pub fn curve_class_rank(&self) -> usize {
        match self {
            ModelKind::Product(..) => 2,
            _ => 1,
        }
    }

    /// Projective spaces and their products are generated by divisors.
    pub fn divisor_generated(&self) -> bool {
        !matches!(self, ModelKind::Grassmannian(..))
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Projective(n) => write!(f, "P{n}"),
            ModelKind::Product(m, n) => write!(f, "P{m}xP{n}"),
            ModelKind::Grassmannian(k, m) => write!(f, "Gr({k},{m})"),
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    /// `P3`, `P1xP2`, `Gr(2,4)` or `Gr2,4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unrecognised model {s:?}"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("Gr") {
            let inner = rest.trim_start_matches('(').trim_end_matches(')');
            let (k, m) = inner.split_once(',').ok_or_else(bad)?;
            return Ok(ModelKind::Grassmannian(num(k)?, num(m)?));
        }
        let rest = s.strip_prefix('P').ok_or_else(bad)?;
        match rest.split_once(['x', 'X']) {
            Some((m, n)) => Ok(ModelKind::Product(num(m)?, num(n.strip_prefix('P').ok_or_else(bad)?)?)),
            None => Ok(ModelKind::Projective(num(rest)?)),
        }
    }
}

/// One additive basis element.
///
/// Ordered by codimension first; within a codimension monomials put the
/// larger `H1` exponent first and partitions are in reverse lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisClass {
    /// `H^a`
    Power(u32),
    /// `H1^a H2^b`
    Monomial(u32, u32),
    /// `σ_λ`
    Schubert(Partition),
}

impl BasisClass {
    pub fn codim(&self) -> u32 {
        match self {
            BasisClass::Power(a) => *a,
            BasisClass::Monomial(a, b) => a + b,
            BasisClass::Schubert(l) => l.weight(),
        }
    }

    /// Parses the textual class syntax `H^a`, `H`, `H1^a*H2^b`, `s[2,1]`,
    /// `pt` or `1` relative to `model`.
    pub fn parse(model: &RingModel, token: &str) -> Result<BasisClass> {
        let t = token.trim();
        let class = match t {
            "1" => model.fundamental_class().clone(),
            "pt" => model.point_class().clone(),
            _ => parse_tag(model.kind, t)?,
        };
        if !model.contains(&class) {
            return param(format!("class {t:?} is not in the basis of {}", model.kind));
        }
        Ok(class)
    }
}

fn parse_tag(kind: ModelKind, t: &str) -> Result<BasisClass> {
    let bad = || Error::Parse(format!("unrecognised class {t:?} for {kind}"));
    let exponent = |factor: &str, var: &str| -> Result<Option<u32>> {
        match factor.strip_prefix(var) {
            Some("") => Ok(Some(1)),
            Some(e) => match e.strip_prefix('^') {
                Some(e) => e.parse().map(Some).map_err(|_| bad()),
                None => Ok(None),
            },
            None => Ok(None),
        }
    };
    match kind {
        ModelKind::Projective(_) => exponent(t, "H")?.map(BasisClass::Power).ok_or_else(bad),
        ModelKind::Product(..) => {
            let (mut a, mut b) = (0, 0);
            for factor in t.split('*') {
                if let Some(e) = exponent(factor, "H1")? {
                    a += e;
                } else if let Some(e) = exponent(factor, "H2")? {
                    b += e;
                } else {
                    return Err(bad());
                }
            }
            Ok(BasisClass::Monomial(a, b))
        }
        ModelKind::Grassmannian(..) => {
            let inner = t.strip_prefix('s').ok_or_else(bad)?;
            if !inner.starts_with('[') {
                return Err(bad());
            }
            Ok(BasisClass::Schubert(inner.parse()?))
        }
    }
}

impl Ord for BasisClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use BasisClass::*;
        self.codim().cmp(&other.codim()).then_with(|| match (self, other) {
            (Power(a), Power(b)) => a.cmp(b),
            (Monomial(a, _), Monomial(b, _)) => b.cmp(a),
            (Schubert(l), Schubert(m)) => m.cmp(l),
            (a, b) => variant_rank(a).cmp(&variant_rank(b)),
        })
    }
}

fn variant_rank(c: &BasisClass) -> u8 {
    match c {
        BasisClass::Power(_) => 0,
        BasisClass::Monomial(..) => 1,
        BasisClass::Schubert(_) => 2,
    }
}

impl PartialOrd for BasisClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisClass::Power(a) => write!(f, "H^{a}"),
            BasisClass::Monomial(a, b) => write!(f, "H1^{a}*H2^{b}"),
            BasisClass::Schubert(l) => write!(f, "s{l}"),
        }
    }
}

/// An effective curve class: a degree, a bidegree or a Grassmannian degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass(Vec<u32>);

impl CurveClass {
    /// Rejects negative components.
    pub fn new(components: &[i64]) -> Result<Self> {
        if let Some(c) = components.iter().find(|&&c| c < 0) {
            return param(format!("curve class {components:?} is not effective (component {c})"));
        }
        Ok(CurveClass(components.iter().map(|&c| c as u32).collect()))
    }

    pub fn degree(d: u32) -> Self {
        CurveClass(vec![d])
    }

    pub fn bidegree(d1: u32, d2: u32) -> Self {
        CurveClass(vec![d1, d2])
    }

    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// All effective `(A1, A − A1)` splittings, including the trivial ones.
    pub fn splittings(&self) -> Vec<(CurveClass, CurveClass)> {
        let mut out = vec![(Vec::new(), Vec::new())];
        for &c in &self.0 {
            out = out
                .into_iter()
                .flat_map(|(l, r)| {
                    (0..=c).map(move |i| {
                        let mut l = l.clone();
                        let mut r = r.clone();
                        l.push(i);
                        r.push(c - i);
                        (l, r)
                    })
                })
                .collect();
        }
        out.into_iter().map(|(l, r)| (CurveClass(l), CurveClass(r))).collect()
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for CurveClass {
    type Err = Error;

    /// `3` or `1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let comps = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("curve class {s:?}: {e}")))?;
        CurveClass::new(&comps)
    }
}

/// A finitely supported rational combination of basis classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassVector(BTreeMap<BasisClass, Rational>);

impl ClassVector {
    pub fn zero() -> Self {
        ClassVector(BTreeMap::new())
    }

    pub fn basis(class: BasisClass) -> Self {
        Self::term(class, Rational::one())
    }

    pub fn term(class: BasisClass, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(class, coeff);
        v
    }

    pub fn add_term(&mut self, class: BasisClass, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let e = self.0.entry(class).or_insert_with(Rational::zero);
        *e += coeff;
        if e.is_zero() {
            self.0.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&mut self, other: &ClassVector) {
        for (c, v) in other.iter() {
            self.add_term(c.clone(), v.clone());
        }
    }

    pub fn scaled(&self, s: &Rational) -> ClassVector {
        let mut out = ClassVector::zero();
        for (c, v) in self.iter() {
            out.add_term(c.clone(), v * s);
        }
        out
    }

    pub fn coeff(&self, class: &BasisClass) -> Rational {
        self.0.get(class).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisClass, &Rational)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<BasisClass> for ClassVector {
    fn from(c: BasisClass) -> Self {
        ClassVector::basis(c)
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if v.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{v}*{c}")?;
            }
        }
        Ok(())
    }
}

/// Graded cohomology ring with additive basis, Poincaré pairing and first
/// Chern class. Immutable once built.
#[derive(Clone, Debug)]
pub struct RingModel {
    pub kind: ModelKind,
    pub complex_dimension: u32,
    basis: Vec<BasisClass>,
    index: HashMap<BasisClass, usize>,
    pairing_matrix: Vec<Vec<i64>>,
    c1: ClassVector,
}

impl RingModel {
    pub fn new(kind: ModelKind) -> Result<Self> {
        let (dim, basis, c1) = match kind {
            ModelKind::Projective(n) => {
                if n == 0 {
                    return param("Projective(N) needs N > 0");
                }
                let basis = (0..=n).map(BasisClass::Power).collect();
                let c1 = ClassVector::term(BasisClass::Power(1), Rational::from_integer((n + 1).into()));
                (n, basis, c1)
            }
            ModelKind::Product(m, n) => {
                if m == 0 || n == 0 {
                    return param("Product(m,n) needs m, n > 0");
                }
                let mut basis: Vec<BasisClass> = (0..=m)
                    .flat_map(|a| (0..=n).map(move |b| BasisClass::Monomial(a, b)))
                    .collect();
                basis.sort();
                let mut c1 = ClassVector::term(BasisClass::Monomial(1, 0), Rational::from_integer((m + 1).into()));
                c1.add_term(BasisClass::Monomial(0, 1), Rational::from_integer((n + 1).into()));
                (m + n, basis, c1)
            }
            ModelKind::Grassmannian(k, m) => {
                if k == 0 || k >= m {
                    return param(format!("Grassmannian({k},{m}) needs 0 < k < m"));
                }
                let basis = Partition::all_in_box(k, m - k).into_iter().map(BasisClass::Schubert).collect();
                let c1 = ClassVector::term(
                    BasisClass::Schubert(Partition::from_sorted(vec![1])),
                    Rational::from_integer(m.into()),
                );
                (k * (m - k), basis, c1)
            }
        };
        let index: HashMap<BasisClass, usize> =
            basis.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut model = RingModel {
            kind,
            complex_dimension: dim,
            basis,
            index,
            pairing_matrix: Vec::new(),
            c1,
        };
        let n = model.basis.len();
        let mut pairing = vec![vec![0i64; n]; n];
        for (i, row) in pairing.iter_mut().enumerate() {
            let j = model.index[&model.dual(&model.basis[i])];
            row[j] = 1;
        }
        model.pairing_matrix = pairing;
        Ok(model)
    }

    /// Stable identifier used in cache keys.
    pub fn id(&self) -> String {
        self.kind.to_string()
    }

    pub fn basis(&self) -> &[BasisClass] {
        &self.basis
    }

    pub fn pairing_matrix(&self) -> &[Vec<i64>] {
        &self.pairing_matrix
    }

    pub fn c1(&self) -> &ClassVector {
        &self.c1
    }

    pub fn curve_class_rank(&self) -> usize {
        self.kind.curve_class_rank()
    }

    pub fn contains(&self, class: &BasisClass) -> bool {
        self.index.contains_key(class)
    }

    pub fn index_of(&self, class: &BasisClass) -> Option<usize> {
        self.index.get(class).copied()
    }

    pub fn fundamental_class(&self) -> &BasisClass {
        &self.basis[0]
    }

    pub fn point_class(&self) -> &BasisClass {
        self.basis.last().expect("non-empty basis")
    }

    /// The basis element pairing to one with `class`.
    pub fn dual(&self, class: &BasisClass) -> BasisClass {
        match (self.kind, class) {
            (ModelKind::Projective(n), BasisClass::Power(a)) => BasisClass::Power(n - a),
            (ModelKind::Product(m, n), BasisClass::Monomial(a, b)) => BasisClass::Monomial(m - a, n - b),
            (ModelKind::Grassmannian(k, m), BasisClass::Schubert(l)) => {
                BasisClass::Schubert(l.complement(k, m - k))
            }
            _ => panic!("{class} does not belong to {}", self.kind),
        }
    }

    /// Product of two basis classes of a divisor-generated model, which is a
    /// single basis class or zero.
    pub(crate) fn monomial_product(&self, a: &BasisClass, b: &BasisClass) -> Option<BasisClass> {
        match (self.kind, a, b) {
            (ModelKind::Projective(n), BasisClass::Power(x), BasisClass::Power(y)) => {
                (x + y <= n).then(|| BasisClass::Power(x + y))
            }
            (ModelKind::Product(m, n), BasisClass::Monomial(a1, b1), BasisClass::Monomial(a2, b2)) => {
                (a1 + a2 <= m && b1 + b2 <= n).then(|| BasisClass::Monomial(a1 + a2, b1 + b2))
            }
            _ => None,
        }
    }

    pub fn cup(&self, a: &BasisClass, b: &BasisClass) -> ClassVector {
        debug_assert!(self.contains(a) && self.contains(b));
        match (self.kind, a, b) {
            (ModelKind::Grassmannian(k, m), BasisClass::Schubert(l), BasisClass::Schubert(mu)) => {
                let mut out = ClassVector::zero();
                for (nu, c) in schubert::lr_coeffs(l, mu, k as usize) {
                    if nu.fits(k, m - k) {
                        out.add_term(BasisClass::Schubert(nu), Rational::from_integer(BigInt::from(c)));
                    }
                }
                out
            }
            _ => self.monomial_product(a, b).map(ClassVector::basis).unwrap_or_default(),
        }
    }

    pub fn cup_vec(&self, u: &ClassVector, v: &ClassVector) -> ClassVector {
        let mut out = ClassVector::zero();
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                out.add(&self.cup(a, b).scaled(&(x * y)));
            }
        }
        out
    }

    pub fn pairing(&self, u: &ClassVector, v: &ClassVector) -> Rational {
        let mut total = Rational::zero();
        for (a, x) in u.iter() {
            let i = self.index[a];
            for (b, y) in v.iter() {
                let g = self.pairing_matrix[i][self.index[b]];
                if g != 0 {
                    total += x * y * Rational::from_integer(g.into());
                }
            }
        }
        total
    }

    /// `∫ v`, the coefficient of the point class.
    pub fn integrate(&self, v: &ClassVector) -> Rational {
        v.coeff(self.point_class())
    }

    /// `c1 · A`.
    pub fn c1_dot(&self, curve: &CurveClass) -> i64 {
        let d = curve.components();
        match self.kind {
            ModelKind::Projective(n) => (n as i64 + 1) * d[0] as i64,
            ModelKind::Grassmannian(_, m) => m as i64 * d[0] as i64,
            ModelKind::Product(m, n) => (m as i64 + 1) * d[0] as i64 + (n as i64 + 1) * d[1] as i64,
        }
    }

    /// `D · A` for a divisor class `D`.
    pub fn divisor_dot(&self, divisor: &BasisClass, curve: &CurveClass) -> i64 {
        debug_assert_eq!(divisor.codim(), 1);
        let d = curve.components();
        match divisor {
            BasisClass::Monomial(1, 0) => d[0] as i64,
            BasisClass::Monomial(0, 1) => d[1] as i64,
            _ => d[0] as i64,
        }
    }

    /// Complex expected dimension `(3 − dim X)(g − 1) + c1·A + k`.
    pub fn expected_dim(&self, genus: u32, points: u32, curve: &CurveClass) -> i64 {
        (3 - self.complex_dimension as i64) * (genus as i64 - 1) + self.c1_dot(curve) + points as i64
    }

    pub fn check_curve(&self, curve: &CurveClass) -> Result<()> {
        if curve.rank() != self.curve_class_rank() {
            return param(format!(
                "curve class {curve} has rank {}, {} expects {}",
                curve.rank(),
                self.kind,
                self.curve_class_rank()
            ));
        }
        Ok(())
    }
}

/// Convenience constructor mirroring [`RingModel::new`].
pub fn make_model(kind: ModelKind) -> Result<RingModel> {
    RingModel::new(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn s(parts: &[u32]) -> BasisClass {
        BasisClass::Schubert(Partition::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn projective_model() {
        let p3 = make_model(ModelKind::Projective(3)).unwrap();
        assert_eq!(p3.basis().len(), 4);
        assert_eq!(p3.complex_dimension, 3);
        assert_eq!(p3.c1(), &ClassVector::term(BasisClass::Power(1), r(4)));
        assert_eq!(p3.cup(&BasisClass::Power(1), &BasisClass::Power(2)), ClassVector::basis(BasisClass::Power(3)));
        assert_eq!(p3.pairing(&BasisClass::Power(1).into(), &BasisClass::Power(2).into()), r(1));
        assert_eq!(p3.c1_dot(&CurveClass::degree(1)), 4);
        assert_eq!(p3.expected_dim(0, 0, &CurveClass::degree(1)), 4);
        let p5 = make_model(ModelKind::Projective(5)).unwrap();
        assert_eq!(p5.expected_dim(0, 5, &CurveClass::degree(1)), 13);
    }

    #[test]
    fn product_model() {
        let m = make_model(ModelKind::Product(1, 1)).unwrap();
        let names: Vec<String> = m.basis().iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["H1^0*H2^0", "H1^1*H2^0", "H1^0*H2^1", "H1^1*H2^1"]);
        let h1 = BasisClass::Monomial(1, 0);
        let h2 = BasisClass::Monomial(0, 1);
        assert_eq!(m.pairing(&h1.clone().into(), &h2.clone().into()), r(1));
        assert_eq!(m.pairing(&h1.clone().into(), &h1.clone().into()), r(0));
        assert!(m.cup(&h1, &h1).is_zero());
        assert_eq!(m.c1_dot(&CurveClass::bidegree(1, 1)), 4);
        assert_eq!(m.expected_dim(0, 3, &CurveClass::bidegree(1, 1)), 6);
    }

    #[test]
    fn grassmannian_model() {
        let g = make_model(ModelKind::Grassmannian(2, 4)).unwrap();
        assert_eq!(g.basis().len(), 6);
        assert_eq!(g.complex_dimension, 4);
        let mut expect = ClassVector::basis(s(&[2]));
        expect.add_term(s(&[1, 1]), r(1));
        assert_eq!(g.cup(&s(&[1]), &s(&[1])), expect);
        assert_eq!(g.pairing(&s(&[2]).into(), &s(&[1, 1]).into()), r(0));
        assert_eq!(g.pairing(&s(&[2]).into(), &s(&[2]).into()), r(1));
        assert_eq!(g.c1_dot(&CurveClass::degree(2)), 8);
    }

    #[test]
    fn normalisation_and_invalid() {
        for kind in [ModelKind::Projective(2), ModelKind::Product(2, 3), ModelKind::Grassmannian(2, 5)] {
            let m = make_model(kind).unwrap();
            let one: ClassVector = m.fundamental_class().clone().into();
            let pt: ClassVector = m.point_class().clone().into();
            assert_eq!(m.pairing(&one, &pt), r(1));
            assert_eq!(m.point_class().codim(), m.complex_dimension);
        }
        assert!(make_model(ModelKind::Projective(0)).is_err());
        assert!(make_model(ModelKind::Product(0, 2)).is_err());
        assert!(make_model(ModelKind::Grassmannian(3, 3)).is_err());
        assert!(CurveClass::new(&[1, -1]).is_err());
    }

    #[test]
    fn parsing() {
        let p = make_model(ModelKind::Projective(3)).unwrap();
        assert_eq!(BasisClass::parse(&p, "H^2").unwrap(), BasisClass::Power(2));
        assert_eq!(BasisClass::parse(&p, "H").unwrap(), BasisClass::Power(1));
        assert_eq!(BasisClass::parse(&p, "pt").unwrap(), BasisClass::Power(3));
        assert!(BasisClass::parse(&p, "H^4").is_err());
        let q = make_model(ModelKind::Product(1, 2)).unwrap();
        assert_eq!(BasisClass::parse(&q, "H1*H2^2").unwrap(), BasisClass::Monomial(1, 2));
        assert_eq!(BasisClass::parse(&q, "H2").unwrap(), BasisClass::Monomial(0, 1));
        assert_eq!(BasisClass::parse(&q, "1").unwrap(), BasisClass::Monomial(0, 0));
        let g = make_model(ModelKind::Grassmannian(2, 4)).unwrap();
        assert_eq!(BasisClass::parse(&g, "s[2,1]").unwrap(), s(&[2, 1]));
        assert!(BasisClass::parse(&g, "s[3]").is_err());
        for k in ["P3", "P1xP2", "Gr(2,4)", "Gr2,5"] {
            let kind: ModelKind = k.parse().unwrap();
            assert_eq!(kind.to_string().parse::<ModelKind>().unwrap(), kind);
        }
        assert!("Q3".parse::<ModelKind>().is_err());
    }
}
