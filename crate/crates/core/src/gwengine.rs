//! Genus-zero Gromov–Witten invariants of divisor-generated models.
//!
//! Invariants are reconstructed from the degree-zero ones with the
//! fundamental class, divisor and mapping-to-point axioms plus the WDVV
//! relation
//!
//! ```text
//! Σ_{A1+A2=A} Σ_{R1⊔R2=R} Σ_μ GW(A1; a,b,R1,T_μ) GW(A2; T_μ^∨,c,d,R2)  =  (b ↔ c)
//! ```
//!
//! applied with `a ∪ b` a factorisation of the lowest-codimension insertion.
//! The unknown invariant is the `A1 = 0, R1 = ∅` term of the left side; every
//! other term is smaller in the order (curve class, number of insertions of
//! codimension ≥ 2, smallest codimension). Values are cached per canonical
//! [`InvariantKey`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::cohmodel::{BasisClass, ClassVector, CurveClass, ModelKind, RingModel};
use crate::error::{param, Error, Result};
use crate::schubert::{self, Partition};
use crate::Rational;

/// Canonical cache key: insertions sorted, so equal multisets give equal keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    pub model: ModelKind,
    pub curve: CurveClass,
    pub insertions: Vec<BasisClass>,
}

impl InvariantKey {
    pub fn new(model: ModelKind, curve: CurveClass, mut insertions: Vec<BasisClass>) -> Self {
        insertions.sort();
        InvariantKey { model, curve, insertions }
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|", self.model, self.curve)?;
        for (i, c) in self.insertions.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for InvariantKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = s.split('|');
        let (Some(model), Some(curve), Some(ins), None) = (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse(format!("malformed key {s:?}")));
        };
        let kind: ModelKind = model.parse()?;
        let ring = RingModel::new(kind)?;
        let curve: CurveClass = curve.parse()?;
        ring.check_curve(&curve)?;
        let insertions = if ins.is_empty() {
            Vec::new()
        } else {
            ins.split(';').map(|t| BasisClass::parse(&ring, t)).collect::<Result<Vec<_>>>()?
        };
        let key = InvariantKey::new(kind, curve, insertions);
        if key.to_string() != s {
            return Err(Error::Parse(format!("key {s:?} is not in canonical form")));
        }
        Ok(key)
    }
}

/// Pure-function cache for invariants. A key, once stored, keeps its value.
pub trait MemoCache {
    fn get(&self, key: &InvariantKey) -> Option<Rational>;
    /// First writer wins; later writers must agree.
    fn insert(&self, key: InvariantKey, value: Rational);
    fn len(&self) -> usize;
    /// All entries in key order.
    fn entries(&self) -> Vec<(InvariantKey, Rational)>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Unsynchronised cache for single-threaded use.
#[derive(Debug, Default)]
pub struct LocalCache(RefCell<HashMap<InvariantKey, Rational>>);

impl MemoCache for LocalCache {
    fn get(&self, key: &InvariantKey) -> Option<Rational> {
        self.0.borrow().get(key).cloned()
    }

    fn insert(&self, key: InvariantKey, value: Rational) {
        let mut map = self.0.borrow_mut();
        let stored = map.entry(key).or_insert_with(|| value.clone());
        debug_assert_eq!(*stored, value);
    }

    fn len(&self) -> usize {
        self.0.borrow().len()
    }

    fn entries(&self) -> Vec<(InvariantKey, Rational)> {
        let mut v: Vec<_> = self.0.borrow().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        v.sort();
        v
    }
}

/// Lock-protected cache shared between threads.
#[derive(Debug, Default)]
pub struct SharedCache(RwLock<HashMap<InvariantKey, Rational>>);

impl MemoCache for SharedCache {
    fn get(&self, key: &InvariantKey) -> Option<Rational> {
        self.0.read().expect("cache lock").get(key).cloned()
    }

    fn insert(&self, key: InvariantKey, value: Rational) {
        let mut map = self.0.write().expect("cache lock");
        let stored = map.entry(key).or_insert_with(|| value.clone());
        debug_assert_eq!(*stored, value);
    }

    fn len(&self) -> usize {
        self.0.read().expect("cache lock").len()
    }

    fn entries(&self) -> Vec<(InvariantKey, Rational)> {
        let mut v: Vec<_> =
            self.0.read().expect("cache lock").iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        v.sort();
        v
    }
}

/// Genus-zero invariant engine with a memo table.
#[derive(Debug, Default)]
pub struct GwEngine<C: MemoCache = SharedCache> {
    cache: C,
}

impl GwEngine<SharedCache> {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GwEngine<LocalCache> {
    pub fn single_threaded() -> Self {
        GwEngine { cache: LocalCache::default() }
    }
}

impl<C: MemoCache> GwEngine<C> {
    pub fn with_cache(cache: C) -> Self {
        GwEngine { cache }
    }

    pub fn cache(&self) -> &C {
        &self.cache
    }

    /// Loads previously computed values (e.g. from a cache file).
    pub fn preload(&self, entries: impl IntoIterator<Item = (InvariantKey, Rational)>) {
        for (k, v) in entries {
            self.cache.insert(k, v);
        }
    }

    fn check(&self, model: &RingModel, curve: &CurveClass, points: usize) -> Result<()> {
        if !model.kind.divisor_generated() {
            return Err(Error::UnsupportedModel(format!(
                "{} is not generated by divisors; use the three-point Grassmannian invariants",
                model.kind
            )));
        }
        model.check_curve(curve)?;
        if curve.is_zero() && points < 3 {
            return param(format!("degree-zero invariants need at least 3 insertions, got {points}"));
        }
        Ok(())
    }

    /// `GW_{0,k}(X, A)(γ_1, …, γ_k)`, multilinear in the insertions.
    pub fn gw0(&self, model: &RingModel, curve: &CurveClass, insertions: &[ClassVector]) -> Result<Rational> {
        self.check(model, curve, insertions.len())?;
        for v in insertions {
            if let Some((c, _)) = v.iter().find(|(c, _)| !model.contains(c)) {
                return param(format!("{c} is not a class of {}", model.kind));
            }
        }
        let mut total = Rational::zero();
        let mut stack: Vec<(Vec<BasisClass>, Rational)> = vec![(Vec::new(), Rational::one())];
        for v in insertions {
            let mut next = Vec::with_capacity(stack.len() * v.len());
            for (list, coeff) in &stack {
                for (c, x) in v.iter() {
                    let mut l = list.clone();
                    l.push(c.clone());
                    next.push((l, coeff * x));
                }
            }
            stack = next;
        }
        for (list, coeff) in stack {
            let value = self.invariant(model, curve, list);
            if !value.is_zero() {
                total += coeff * value;
            }
        }
        Ok(total)
    }

    /// [`GwEngine::gw0`] on basis classes.
    pub fn gw0_basis(&self, model: &RingModel, curve: &CurveClass, insertions: &[BasisClass]) -> Result<Rational> {
        let vectors: Vec<ClassVector> = insertions.iter().cloned().map(ClassVector::basis).collect();
        self.gw0(model, curve, &vectors)
    }

    /// Left side minus right side of the WDVV relation for `(a, b | c, d)`
    /// with extra insertions `rest`. Always zero.
    #[allow(clippy::too_many_arguments)]
    pub fn wdvv_residual(
        &self,
        model: &RingModel,
        curve: &CurveClass,
        a: &BasisClass,
        b: &BasisClass,
        c: &BasisClass,
        d: &BasisClass,
        rest: &[BasisClass],
    ) -> Result<Rational> {
        self.check(model, curve, 4 + rest.len())?;
        for x in [a, b, c, d].into_iter().chain(rest) {
            if !model.contains(x) {
                return param(format!("{x} is not a class of {}", model.kind));
            }
        }
        let lhs = self.wdvv_side(model, curve, [a, b, c, d], rest, false);
        let rhs = self.wdvv_side(model, curve, [a, c, b, d], rest, false);
        Ok(lhs - rhs)
    }

    fn wdvv_side(
        &self,
        model: &RingModel,
        curve: &CurveClass,
        [a, b, c, d]: [&BasisClass; 4],
        rest: &[BasisClass],
        skip_target: bool,
    ) -> Rational {
        let mut grouped: Vec<(BasisClass, u32)> = Vec::new();
        for r in rest {
            match grouped.last_mut() {
                Some((c, n)) if c == r => *n += 1,
                _ => grouped.push((r.clone(), 1)),
            }
        }
        let splits = multiset_splits(&grouped);
        let mut total = Rational::zero();
        for (left_curve, right_curve) in curve.splittings() {
            for (left_rest, right_rest, weight) in &splits {
                if skip_target && left_curve.is_zero() && left_rest.is_empty() {
                    continue;
                }
                for t in model.basis() {
                    let dual = model.dual(t);
                    let mut left: Vec<BasisClass> = vec![a.clone(), b.clone()];
                    left.extend(left_rest.iter().cloned());
                    left.push(t.clone());
                    let mut right: Vec<BasisClass> = vec![dual, c.clone(), d.clone()];
                    right.extend(right_rest.iter().cloned());
                    // evaluate the degree-zero factor first; it is usually zero
                    let (first, second) = if right_curve.is_zero() && !left_curve.is_zero() {
                        ((&right_curve, right), (&left_curve, left))
                    } else {
                        ((&left_curve, left), (&right_curve, right))
                    };
                    let x = self.invariant(model, first.0, first.1);
                    if x.is_zero() {
                        continue;
                    }
                    let y = self.invariant(model, second.0, second.1);
                    if y.is_zero() {
                        continue;
                    }
                    total += x * y * Rational::from_integer(weight.clone());
                }
            }
        }
        total
    }

    fn invariant(&self, model: &RingModel, curve: &CurveClass, mut ins: Vec<BasisClass>) -> Rational {
        ins.sort();
        let codim: i64 = ins.iter().map(|c| c.codim() as i64).sum();
        if codim != model.expected_dim(0, ins.len() as u32, curve) {
            return Rational::zero();
        }
        if curve.is_zero() {
            if ins.len() != 3 {
                return Rational::zero();
            }
            let point = model
                .monomial_product(&ins[0], &ins[1])
                .and_then(|ab| model.monomial_product(&ab, &ins[2]));
            return if point.as_ref() == Some(model.point_class()) { Rational::one() } else { Rational::zero() };
        }
        if ins.first().is_some_and(|c| c.codim() == 0) {
            return Rational::zero();
        }
        let key = InvariantKey { model: model.kind, curve: curve.clone(), insertions: ins };
        if let Some(v) = self.cache.get(&key) {
            return v;
        }
        let value = self.reconstruct(model, curve, key.insertions.clone());
        self.cache.insert(key, value.clone());
        value
    }

    /// Positive degree, dimension already matched, no fundamental class.
    fn reconstruct(&self, model: &RingModel, curve: &CurveClass, ins: Vec<BasisClass>) -> Rational {
        let (divisors, rest): (Vec<BasisClass>, Vec<BasisClass>) = ins.into_iter().partition(|c| c.codim() == 1);
        if !divisors.is_empty() {
            let factor: i64 = divisors.iter().map(|d| model.divisor_dot(d, curve)).product();
            if factor == 0 {
                return Rational::zero();
            }
            return Rational::from_integer(factor.into()) * self.invariant(model, curve, rest);
        }
        let ins = rest;
        if let ModelKind::Product(m, n) = model.kind {
            let d = curve.components();
            if d[0] == 0 || d[1] == 0 {
                return self.fiber_invariant((m, n), (d[0], d[1]), &ins);
            }
        }
        if ins.len() < 3 {
            return self.few_point_invariant(model, curve, &ins);
        }
        let (delta, eps) = split_divisor(model, &ins[0]);
        let target_free = &ins[1..3];
        let rest = &ins[3..];
        let exchanged = self.wdvv_side(model, curve, [&delta, &target_free[0], &eps, &target_free[1]], rest, false);
        let others = self.wdvv_side(model, curve, [&delta, &eps, &target_free[0], &target_free[1]], rest, true);
        exchanged - others
    }

    /// Classes `(d, 0)` or `(0, d)` on `P^m × P^n`: the curves live in one
    /// factor and are constant in the other, so the invariant factors as a
    /// projective-space invariant times a classical intersection number.
    fn fiber_invariant(&self, (m, n): (u32, u32), (d1, d2): (u32, u32), ins: &[BasisClass]) -> Rational {
        let split = |c: &BasisClass| match c {
            BasisClass::Monomial(a, b) => (*a, *b),
            _ => unreachable!("product model holds monomials"),
        };
        let (curve_dim, point_dim, degree, swap) = if d2 == 0 { (m, n, d1, false) } else { (n, m, d2, true) };
        let (along, across): (Vec<u32>, Vec<u32>) = ins
            .iter()
            .map(|c| {
                let (a, b) = split(c);
                if swap { (b, a) } else { (a, b) }
            })
            .unzip();
        if across.iter().sum::<u32>() != point_dim {
            return Rational::zero();
        }
        let factor = RingModel::new(ModelKind::Projective(curve_dim)).expect("positive dimension");
        self.invariant(&factor, &CurveClass::degree(degree), along.into_iter().map(BasisClass::Power).collect())
    }

    /// Fewer than three insertions, all of codimension ≥ 2, positive degree.
    /// On `P^N` dimension counting leaves only lines through two points and
    /// the identity map of `P^1`.
    fn few_point_invariant(&self, model: &RingModel, curve: &CurveClass, ins: &[BasisClass]) -> Rational {
        let ModelKind::Projective(n) = model.kind else {
            // mixed bidegrees always carry at least three such insertions
            return Rational::zero();
        };
        let line = curve.components() == [1];
        let pt = BasisClass::Power(n);
        let value = match ins {
            [] => line && n == 1,
            [a, b] => line && *a == pt && *b == pt,
            _ => false,
        };
        if value {
            Rational::one()
        } else {
            Rational::zero()
        }
    }
}

/// `γ = δ ∪ ε` with `δ` a divisor: `H` on `P^N`, otherwise `H1` when the
/// `H1` exponent is positive, else `H2`.
fn split_divisor(model: &RingModel, class: &BasisClass) -> (BasisClass, BasisClass) {
    match (model.kind, class) {
        (ModelKind::Projective(_), BasisClass::Power(a)) => (BasisClass::Power(1), BasisClass::Power(a - 1)),
        (ModelKind::Product(..), BasisClass::Monomial(a, b)) if *a > 0 => {
            (BasisClass::Monomial(1, 0), BasisClass::Monomial(a - 1, *b))
        }
        (ModelKind::Product(..), BasisClass::Monomial(a, b)) => (BasisClass::Monomial(0, 1), BasisClass::Monomial(*a, b - 1)),
        _ => unreachable!("split_divisor on {class}"),
    }
}

/// All ways to split a multiset into two parts, with the number of ordered
/// index subsets realising each split.
fn multiset_splits(grouped: &[(BasisClass, u32)]) -> Vec<(Vec<BasisClass>, Vec<BasisClass>, BigInt)> {
    let mut out = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for (class, count) in grouped {
        let mut next = Vec::with_capacity(out.len() * (*count as usize + 1));
        for (l, r, w) in &out {
            for take in 0..=*count {
                let mut l = l.clone();
                let mut r = r.clone();
                l.extend(std::iter::repeat_n(class.clone(), take as usize));
                r.extend(std::iter::repeat_n(class.clone(), (count - take) as usize));
                next.push((l, r, w * binomial(BigInt::from(*count), BigInt::from(take))));
            }
        }
        out = next;
    }
    out
}

/// Three-point invariant `⟨σ_λ, σ_μ, σ_ν⟩_d` of `Gr(k, m)` from the
/// quantum Littlewood–Richardson rule.
pub fn gw0_grassmannian_3pt(
    k: u32,
    m: u32,
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    d: u32,
) -> Result<Rational> {
    schubert::quantum_3point(k, m, lambda, mu, nu, d).map(|v| Rational::from_integer(v.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn proj(n: u32) -> RingModel {
        RingModel::new(ModelKind::Projective(n)).unwrap()
    }

    #[test]
    fn projective_examples() {
        let e = GwEngine::new();
        let p2 = proj(2);
        let pt = BasisClass::Power(2);
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(1), &[pt.clone(), pt.clone()]).unwrap(), r(1));
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(3), &vec![pt.clone(); 8]).unwrap(), r(12));
        let p3 = proj(3);
        let line = BasisClass::Power(2);
        assert_eq!(e.gw0_basis(&p3, &CurveClass::degree(1), &vec![line.clone(); 4]).unwrap(), r(2));
        // dimension mismatch
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(1), std::slice::from_ref(&pt)).unwrap(), r(0));
    }

    #[test]
    fn product_example() {
        let e = GwEngine::new();
        let m = RingModel::new(ModelKind::Product(1, 1)).unwrap();
        let pt = BasisClass::Monomial(1, 1);
        assert_eq!(e.gw0_basis(&m, &CurveClass::bidegree(1, 1), &vec![pt.clone(); 3]).unwrap(), r(1));
        assert_eq!(e.gw0_basis(&m, &CurveClass::bidegree(1, 0), &[pt]).unwrap(), r(1));
    }

    #[test]
    fn axioms() {
        let e = GwEngine::new();
        let p2 = proj(2);
        let one = BasisClass::Power(0);
        let h = BasisClass::Power(1);
        let pt = BasisClass::Power(2);
        // mapping to a point
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(0), &[h.clone(), h.clone(), one.clone()]).unwrap(), r(1));
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(0), &[h.clone(), h.clone(), h.clone(), pt.clone()]).unwrap(), r(0));
        // fundamental class with positive degree
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(1), &[one, pt.clone(), pt.clone()]).unwrap(), r(0));
        // divisor
        assert_eq!(e.gw0_basis(&p2, &CurveClass::degree(2), &[h.clone(), pt.clone(), pt.clone(), pt.clone(), pt.clone(), pt.clone()]).unwrap(), r(2));
        // P^1 identity map
        assert_eq!(e.gw0_basis(&proj(1), &CurveClass::degree(1), std::slice::from_ref(&h)).unwrap(), r(1));
    }

    #[test]
    fn errors() {
        let e = GwEngine::new();
        let g = RingModel::new(ModelKind::Grassmannian(2, 4)).unwrap();
        let c = g.point_class().clone();
        assert!(matches!(e.gw0_basis(&g, &CurveClass::degree(1), &[c]), Err(Error::UnsupportedModel(_))));
        let p2 = proj(2);
        assert!(matches!(e.gw0_basis(&p2, &CurveClass::bidegree(1, 1), &[]), Err(Error::Parameter(_))));
        assert!(matches!(
            e.gw0_basis(&p2, &CurveClass::degree(0), &[BasisClass::Power(1), BasisClass::Power(1)]),
            Err(Error::Parameter(_))
        ));
        assert!(e.gw0_basis(&p2, &CurveClass::degree(1), &[BasisClass::Power(3)]).is_err());
    }

    #[test]
    fn multilinear() {
        let e = GwEngine::new();
        let p2 = proj(2);
        let mut v = ClassVector::term(BasisClass::Power(2), r(3));
        v.add_term(BasisClass::Power(1), r(5));
        let pt: ClassVector = BasisClass::Power(2).into();
        // 3·N(pt,pt) + 5·N(H,pt) where the second has the wrong dimension
        assert_eq!(e.gw0(&p2, &CurveClass::degree(1), &[v, pt]).unwrap(), r(3));
    }

    #[test]
    fn key_roundtrip() {
        let key = InvariantKey::new(
            ModelKind::Product(1, 2),
            CurveClass::bidegree(1, 1),
            vec![BasisClass::Monomial(1, 2), BasisClass::Monomial(1, 0)],
        );
        let text = key.to_string();
        assert_eq!(text, "P1xP2|1,1|H1^1*H2^0;H1^1*H2^2");
        assert_eq!(text.parse::<InvariantKey>().unwrap(), key);
        assert!("P1xP2|1,1|H1^2*H2^0".parse::<InvariantKey>().is_err());
        assert!("P2|1|H^2;H^1".parse::<InvariantKey>().is_err());
        assert!("P2|1".parse::<InvariantKey>().is_err());
    }

    #[test]
    fn caches_agree() {
        let shared = GwEngine::new();
        let local = GwEngine::single_threaded();
        let p3 = proj(3);
        let ins = vec![BasisClass::Power(3), BasisClass::Power(2), BasisClass::Power(2), BasisClass::Power(2), BasisClass::Power(2), BasisClass::Power(2), BasisClass::Power(2)];
        let a = shared.gw0_basis(&p3, &CurveClass::degree(2), &ins).unwrap();
        let b = local.gw0_basis(&p3, &CurveClass::degree(2), &ins).unwrap();
        assert_eq!(a, b);
        assert_eq!(shared.cache().entries(), local.cache().entries());
    }
}
