//! Partition combinatorics behind Grassmannian Schubert calculus.
//!
//! Boxes are given as `(rows, cols)`; the Grassmannian `Gr(k, m)` of
//! `k`-planes in `C^m` uses the `k × (m − k)` box.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::{param, Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return param(format!("{parts:?} is not a partition"));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub(crate) fn from_sorted(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row `i` (0-based), zero past the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn fits(&self, rows: u32, cols: u32) -> bool {
        self.0.len() <= rows as usize && self.part(0) <= cols
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| other.part(i) <= self.part(i))
    }

    /// Complement inside a `rows × cols` box; the partition must fit.
    pub fn complement(&self, rows: u32, cols: u32) -> Partition {
        debug_assert!(self.fits(rows, cols));
        let rows = rows as usize;
        Partition::from_sorted((0..rows).map(|i| cols - self.part(rows - 1 - i)).collect())
    }

    pub fn conjugate(&self) -> Partition {
        Partition::from_sorted(
            (0..self.part(0))
                .map(|c| self.0.iter().filter(|&&p| p > c).count() as u32)
                .collect(),
        )
    }

    /// Every partition inside the box, ordered by weight then reverse-lexicographically.
    pub fn all_in_box(rows: u32, cols: u32) -> Vec<Partition> {
        fn rec(rows: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition::from_sorted(cur.clone()));
            if rows == 0 {
                return;
            }
            for v in 1..=max {
                cur.push(v);
                rec(rows - 1, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| b.cmp(a)));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `2,1`, `[2,1]`, `[]` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("partition {s:?}: {e}")))?;
        Partition::new(parts)
    }
}

/// All `μ ⊇ λ` with `μ/λ` a horizontal strip of size `p`, at most
/// `max_rows` rows and first row at most `max_cols`.
fn horizontal_strips(lambda: &Partition, p: u32, max_rows: usize, max_cols: u32) -> Vec<Partition> {
    fn rec(
        lambda: &Partition,
        row: usize,
        left: u32,
        max_rows: usize,
        max_cols: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if left == 0 {
            let mut parts = cur.clone();
            parts.extend((row..lambda.len()).map(|i| lambda.part(i)));
            out.push(Partition::from_sorted(parts));
            return;
        }
        if row >= max_rows || (row > lambda.len()) {
            return;
        }
        let base = lambda.part(row);
        let cap = if row == 0 { max_cols } else { lambda.part(row - 1) };
        if cap < base {
            return;
        }
        for add in (0..=left.min(cap - base)).rev() {
            cur.push(base + add);
            rec(lambda, row + 1, left - add, max_rows, max_cols, cur, out);
            cur.pop();
        }
    }
    if lambda.len() > max_rows || lambda.part(0) > max_cols {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(lambda, 0, p, max_rows, max_cols, &mut Vec::new(), &mut out);
    out
}

/// Pieri rule: `σ_λ · σ_p` inside a `rows × cols` box.
pub fn pieri(lambda: &Partition, p: u32, box_shape: (u32, u32)) -> Vec<Partition> {
    let (rows, cols) = box_shape;
    horizontal_strips(lambda, p, rows as usize, cols)
}

fn is_lattice(word: &[u32]) -> bool {
    let mut counts: Vec<u32> = Vec::new();
    for &x in word {
        let x = x as usize;
        if counts.len() <= x {
            counts.resize(x + 1, 0);
        }
        counts[x] += 1;
        if x > 1 && counts[x - 1] < counts[x] {
            return false;
        }
    }
    true
}

/// Littlewood–Richardson coefficients by enumeration of LR tableaux
/// (semistandard skew tableaux whose reverse reading word is a lattice word).
pub fn lr_coeffs_tableaux(lambda: &Partition, mu: &Partition, max_rows: usize) -> BTreeMap<Partition, u64> {
    // rows of labels; 0 marks a cell of λ
    fn rec(
        mu: &Partition,
        label: usize,
        shape: &Partition,
        tab: &[Vec<u32>],
        max_rows: usize,
        out: &mut BTreeMap<Partition, u64>,
    ) {
        if label > mu.len() {
            *out.entry(shape.clone()).or_insert(0) += 1;
            return;
        }
        let size = mu.part(label - 1);
        let max_cols = shape.part(0) + size;
        for next in horizontal_strips(shape, size, max_rows, max_cols) {
            let mut grown = tab.to_vec();
            grown.resize(next.len(), Vec::new());
            for (r, row) in grown.iter_mut().enumerate() {
                row.resize(next.part(r) as usize, label as u32);
            }
            let word: Vec<u32> = grown
                .iter()
                .flat_map(|row| row.iter().rev().copied().filter(|&x| x > 0))
                .collect();
            if is_lattice(&word) {
                rec(mu, label + 1, &next, &grown, max_rows, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    if lambda.len() > max_rows || mu.len() > max_rows {
        return out;
    }
    let tab: Vec<Vec<u32>> = lambda.parts().iter().map(|&p| vec![0; p as usize]).collect();
    rec(mu, 1, lambda, &tab, max_rows, &mut out);
    out
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], i64)) {
    fn rec(k: usize, perm: &mut Vec<usize>, sign: i64, f: &mut dyn FnMut(&[usize], i64)) {
        if k == perm.len() {
            f(perm, sign);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, if i == k { sign } else { -sign }, f);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rec(0, &mut perm, 1, &mut f);
}

/// Littlewood–Richardson coefficients `c^ν_{λμ}` for all `ν` with at most
/// `max_rows` rows.
///
/// Expands `s_μ` by Jacobi–Trudi into complete symmetric functions and
/// multiplies `s_λ` by each factor with the Pieri rule.
pub fn lr_coeffs(lambda: &Partition, mu: &Partition, max_rows: usize) -> BTreeMap<Partition, u64> {
    let mut signed: BTreeMap<Partition, i64> = BTreeMap::new();
    if lambda.len() > max_rows || mu.len() > max_rows {
        return BTreeMap::new();
    }
    let l = mu.len();
    for_each_permutation(l, |perm, sign| {
        let mut degrees = Vec::with_capacity(l);
        for (i, &j) in perm.iter().enumerate() {
            let d = mu.part(i) as i64 - i as i64 + j as i64;
            if d < 0 {
                return;
            }
            degrees.push(d as u32);
        }
        let mut terms: BTreeMap<Partition, i64> = BTreeMap::from([(lambda.clone(), sign)]);
        for &d in &degrees {
            let mut next: BTreeMap<Partition, i64> = BTreeMap::new();
            for (shape, c) in &terms {
                let cols = shape.part(0) + d;
                for nu in horizontal_strips(shape, d, max_rows, cols) {
                    *next.entry(nu).or_insert(0) += c;
                }
            }
            terms = next;
        }
        for (nu, c) in terms {
            *signed.entry(nu).or_insert(0) += c;
        }
    });
    signed
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(nu, c)| {
            assert!(c > 0, "negative LR coefficient for {nu}");
            (nu, c as u64)
        })
        .collect()
}

/// The integer `d(λ)` with `φ*σ_λ = d(λ) H^{|λ|}` for the quotient map
/// `P(Hom(C^m, C^n)) ⇢ Gr(m − n, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegCoefficient {
    pub value: BigInt,
    pub m: u32,
    pub n: u32,
}

/// Bareiss fraction-free determinant.
pub(crate) fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Coefficient of `H^p` in `(1 − H)^{−q}`.
fn inverse_power_coeff(p: i64, q: i64) -> BigInt {
    if p < 0 {
        BigInt::zero()
    } else if p == 0 {
        BigInt::one()
    } else {
        binomial(BigInt::from(q + p - 1), BigInt::from(p))
    }
}

/// Degree of the degeneracy locus pulling back `σ_λ` along
/// `P^{mn−1} ⇢ Gr(m − n, m)`, by the Kempf–Laksov determinant
/// `det[ coeff of H^{λ_i+j−i} in (1 − H)^{−(n+i−λ_i)} ]`.
pub fn dlambda(lambda: &Partition, m: u32, n: u32) -> Result<DegCoefficient> {
    if n == 0 || n >= m {
        return param(format!("dlambda needs 0 < n < m, got m={m}, n={n}"));
    }
    let value = if !lambda.fits(m - n, n) {
        BigInt::zero()
    } else {
        let l = lambda.len();
        let rows = (0..l)
            .map(|i| {
                let li = lambda.part(i) as i64;
                let q = n as i64 + (i as i64 + 1) - li;
                (0..l)
                    .map(|j| inverse_power_coeff(li + j as i64 - i as i64, q))
                    .collect()
            })
            .collect();
        det(rows)
    };
    debug_assert!(!value.is_negative());
    Ok(DegCoefficient { value, m, n })
}

/// Quantum Littlewood–Richardson terms: `(ν, d) ↦ coefficient of q^d σ_ν`.
pub type QuantumTerms = BTreeMap<(Partition, u32), i64>;

fn check_grassmannian(k: u32, m: u32) -> Result<()> {
    if k == 0 || k >= m {
        return param(format!("Gr({k},{m}) needs 0 < k < m"));
    }
    Ok(())
}

/// Reduces `ν` (at most `k` rows) to the `k × (m − k)` box by removing
/// `m`-rim hooks. Returns the reduced shape, the number of hooks removed
/// and the accumulated sign, or `None` when the reduction vanishes.
///
/// Works on β-numbers `β_i = ν_i + k − i`: removing an `m`-rim hook replaces
/// some `β_i ≥ m` by `β_i − m`; the hook height is one more than the number
/// of β-numbers strictly between. Each hook contributes `(−1)^{k − height}`.
pub fn rim_hook_reduce(nu: &Partition, k: u32, m: u32) -> Option<(Partition, u32, i64)> {
    let k_us = k as usize;
    if nu.len() > k_us {
        return None;
    }
    let mut beta: Vec<u32> = (0..k_us).map(|i| nu.part(i) + k - 1 - i as u32).collect();
    let mut hooks = 0;
    let mut sign = 1i64;
    while beta[0] >= m {
        let top = beta[0];
        let target = top - m;
        if beta.contains(&target) {
            return None;
        }
        let between = beta.iter().filter(|&&b| b > target && b < top).count() as u32;
        let height = between + 1;
        if (k - height) % 2 == 1 {
            sign = -sign;
        }
        beta[0] = target;
        beta.sort_unstable_by(|a, b| b.cmp(a));
        hooks += 1;
    }
    let parts = beta.iter().enumerate().map(|(i, &b)| b + 1 + i as u32 - k).collect();
    Some((Partition::from_sorted(parts), hooks, sign))
}

/// Quantum product `σ_λ * σ_μ` in `QH*(Gr(k, m))` by the rim-hook rule.
pub fn quantum_lr(k: u32, m: u32, lambda: &Partition, mu: &Partition) -> Result<QuantumTerms> {
    check_grassmannian(k, m)?;
    for p in [lambda, mu] {
        if !p.fits(k, m - k) {
            return param(format!("{p} does not fit in the {k}x{} box", m - k));
        }
    }
    let mut out = QuantumTerms::new();
    for (nu, c) in lr_coeffs(lambda, mu, k as usize) {
        if let Some((reduced, d, sign)) = rim_hook_reduce(&nu, k, m) {
            debug_assert_eq!(lambda.weight() + mu.weight(), reduced.weight() + m * d);
            *out.entry((reduced, d)).or_insert(0) += sign * c as i64;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// Product of two quantum classes in `QH*(Gr(k, m))`.
pub fn quantum_product(k: u32, m: u32, a: &QuantumTerms, b: &QuantumTerms) -> Result<QuantumTerms> {
    let mut out = QuantumTerms::new();
    for ((la, da), ca) in a {
        for ((lb, db), cb) in b {
            for ((nu, d), c) in quantum_lr(k, m, la, lb)? {
                *out.entry((nu, d + da + db)).or_insert(0) += ca * cb * c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// Three-point genus-zero invariant `⟨σ_λ, σ_μ, σ_ν⟩_d` of `Gr(k, m)`.
pub fn quantum_3point(
    k: u32,
    m: u32,
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    d: u32,
) -> Result<i64> {
    check_grassmannian(k, m)?;
    if !nu.fits(k, m - k) {
        return param(format!("{nu} does not fit in the {k}x{} box", m - k));
    }
    let total = lambda.weight() + mu.weight() + nu.weight();
    if total != k * (m - k) + m * d {
        // still validate the other classes
        quantum_lr(k, m, lambda, mu)?;
        return Ok(0);
    }
    let dual = nu.complement(k, m - k);
    Ok(quantum_lr(k, m, lambda, mu)?.get(&(dual, d)).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
        assert_eq!("[3,1]".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("a,b".parse::<Partition>().is_err());
    }

    #[test]
    fn complement_and_conjugate() {
        assert_eq!(p(&[2, 1]).complement(2, 3), p(&[2, 1]));
        assert_eq!(p(&[1]).complement(2, 2), p(&[2, 1]));
        assert_eq!(Partition::empty().complement(2, 2), p(&[2, 2]));
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(Partition::all_in_box(2, 2).len(), 6);
        assert_eq!(Partition::all_in_box(3, 3).len(), 20);
    }

    #[test]
    fn pieri_examples() {
        assert_eq!(pieri(&Partition::empty(), 2, (2, 2)), vec![p(&[2])]);
        let mut got = pieri(&p(&[1]), 1, (2, 2));
        got.sort();
        assert_eq!(got, vec![p(&[1, 1]), p(&[2])]);
        assert!(pieri(&p(&[2, 2]), 1, (2, 2)).is_empty());
        assert_eq!(pieri(&p(&[1]), 0, (2, 2)), vec![p(&[1])]);
    }

    #[test]
    fn lr_examples() {
        let unit = lr_coeffs(&Partition::empty(), &p(&[2, 1]), 3);
        assert_eq!(unit, BTreeMap::from([(p(&[2, 1]), 1)]));
        let c = lr_coeffs(&p(&[1]), &p(&[2]), 3);
        assert_eq!(c.get(&p(&[3])), Some(&1));
        assert_eq!(c.get(&p(&[2, 1])), Some(&1));
        let sq = lr_coeffs(&p(&[2, 2]), &p(&[2, 2]), 2);
        assert_eq!(sq, BTreeMap::from([(p(&[4, 4]), 1)]));
    }

    #[test]
    fn lr_two_algorithms_agree_small() {
        let parts: Vec<Partition> = (0..=4).flat_map(|w| Partition::all_in_box(4, 4).into_iter().filter(move |x| x.weight() == w)).collect();
        for a in &parts {
            for b in &parts {
                assert_eq!(lr_coeffs(a, b, 4), lr_coeffs_tableaux(a, b, 4), "{a} * {b}");
            }
        }
    }

    #[test]
    fn determinant() {
        let m = |rows: Vec<Vec<i64>>| rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        assert_eq!(det(m(vec![vec![1, 1], vec![2, 3]])), BigInt::from(1));
        assert_eq!(det(m(vec![vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(det(m(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]])), BigInt::from(6));
        assert_eq!(det(m(vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]])), BigInt::from(-2));
        assert_eq!(det(m(vec![vec![1, 2], vec![2, 4]])), BigInt::zero());
    }

    #[test]
    fn dlambda_examples() {
        assert_eq!(dlambda(&p(&[1]), 3, 2).unwrap().value, BigInt::from(2));
        assert_eq!(dlambda(&Partition::empty(), 5, 3).unwrap().value, BigInt::one());
        assert_eq!(dlambda(&p(&[2, 2]), 4, 2).unwrap().value, BigInt::one());
        // outside the (m−n)×n box
        assert_eq!(dlambda(&p(&[3]), 4, 2).unwrap().value, BigInt::zero());
        assert_eq!(dlambda(&p(&[1, 1, 1]), 4, 2).unwrap().value, BigInt::zero());
        assert!(dlambda(&p(&[1]), 2, 2).is_err());
        assert!(dlambda(&p(&[1]), 3, 0).is_err());
    }

    #[test]
    fn rim_hooks() {
        // (4) in Gr(2,4): one horizontal hook of height 1
        assert_eq!(rim_hook_reduce(&p(&[4]), 2, 4), Some((Partition::empty(), 1, -1)));
        assert_eq!(rim_hook_reduce(&p(&[3, 1]), 2, 4), Some((Partition::empty(), 1, 1)));
        assert_eq!(rim_hook_reduce(&p(&[3]), 2, 4), None);
        assert_eq!(rim_hook_reduce(&p(&[4, 4]), 2, 4), Some((Partition::empty(), 2, 1)));
        assert_eq!(rim_hook_reduce(&p(&[2, 1]), 2, 4), Some((p(&[2, 1]), 0, 1)));
    }

    #[test]
    fn quantum_examples_gr24() {
        let q = quantum_lr(2, 4, &p(&[1]), &p(&[1])).unwrap();
        assert_eq!(q, QuantumTerms::from([((p(&[2]), 0), 1), ((p(&[1, 1]), 0), 1)]));
        let q = quantum_lr(2, 4, &p(&[1]), &p(&[2, 1])).unwrap();
        assert_eq!(q, QuantumTerms::from([((p(&[2, 2]), 0), 1), ((Partition::empty(), 1), 1)]));
        let q = quantum_lr(2, 4, &p(&[2]), &p(&[1, 1])).unwrap();
        assert_eq!(q, QuantumTerms::from([((Partition::empty(), 1), 1)]));
        let q = quantum_lr(2, 4, &p(&[2, 2]), &p(&[2, 2])).unwrap();
        assert_eq!(q, QuantumTerms::from([((Partition::empty(), 2), 1)]));
        assert!(quantum_lr(2, 4, &p(&[3]), &p(&[1])).is_err());
        assert!(quantum_lr(4, 4, &p(&[1]), &p(&[1])).is_err());
    }

    #[test]
    fn three_point() {
        assert_eq!(quantum_3point(2, 4, &p(&[1]), &p(&[1]), &p(&[1, 1]), 0).unwrap(), 1);
        assert_eq!(quantum_3point(2, 4, &p(&[2, 2]), &p(&[2, 2]), &p(&[2, 2]), 2).unwrap(), 1);
        assert_eq!(quantum_3point(2, 4, &p(&[1]), &p(&[1]), &p(&[1]), 0).unwrap(), 0);
        assert_eq!(quantum_3point(2, 4, &p(&[2]), &p(&[1, 1]), &p(&[2, 2]), 1).unwrap(), 1);
        assert_eq!(quantum_3point(2, 4, &p(&[2]), &p(&[2]), &p(&[2, 2]), 1).unwrap(), 0);
    }
}
