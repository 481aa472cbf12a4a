//! Exact character theory of the symmetric groups.
//!
//! Partitions index both the irreducible characters and the conjugacy classes
//! (by cycle type) of `S_n`, always in reverse lexicographic order. Character
//! values come from the Murnaghan–Nakayama rule on beta-sets.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PARTITION_BOUND: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts descending and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(n - r, 1^r)`.
    pub fn hook(n: usize, r: usize) -> Self {
        let mut parts = vec![n - r];
        parts.extend(std::iter::repeat(1).take(r));
        Partition::new(parts)
    }

    pub fn is_hook(&self) -> bool {
        self.parts.iter().skip(1).all(|&p| p == 1)
    }

    /// `z_μ = Π i^{m_i} m_i!`, the centralizer order of an element of this cycle type.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_default() += 1;
        }
        for (part, m) in counts {
            for j in 1..=m {
                z *= BigInt::from(part) * BigInt::from(j);
            }
        }
        z
    }

    /// Cycle type of the `m`-th power of an element of this cycle type: each
    /// ℓ-cycle splits into `gcd(ℓ, m)` cycles of length `ℓ / gcd(ℓ, m)`.
    pub fn power(&self, m: i64) -> Partition {
        let m = m.unsigned_abs() as usize;
        let mut parts = Vec::new();
        for &l in &self.parts {
            let d = l.gcd(&m);
            parts.extend(std::iter::repeat(l / d).take(d));
        }
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    partitions_bounded(n, DEFAULT_PARTITION_BOUND)
}

pub fn partitions_bounded(n: usize, bound: usize) -> Result<Vec<Partition>> {
    if n > bound {
        return Err(Error::BoundExceeded(format!("partitions of {n} exceed bound {bound}")));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Degree of `χ_λ` by the hook length formula.
pub fn hook_length_degree(lambda: &Partition) -> BigInt {
    let parts = lambda.parts();
    let mut product = BigInt::one();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&r| r > j).count();
            product *= BigInt::from(arm + leg + 1);
        }
    }
    factorial(lambda.n()) / product
}

type Memo = HashMap<(Vec<usize>, usize), BigInt>;

/// `χ_λ(μ)` by the Murnaghan–Nakayama rule.
pub fn mn_character_value(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.n() != mu.n() {
        return Err(Error::SizeMismatch(format!("|{lambda}| != |{mu}|")));
    }
    Ok(mn_value(lambda.parts(), mu.parts(), 0, &mut Memo::new()))
}

fn mn_value(lambda: &[usize], mu: &[usize], idx: usize, memo: &mut Memo) -> BigInt {
    if idx == mu.len() {
        return if lambda.is_empty() { BigInt::one() } else { BigInt::zero() };
    }
    let key = (lambda.to_vec(), idx);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let r = mu[idx];
    let len = lambda.len();
    // Beta-set: β_i = λ_i + (len - 1 - i), strictly decreasing.
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = BigInt::zero();
    for i in 0..len {
        if beta[i] < r {
            continue;
        }
        let target = beta[i] - r;
        if beta.contains(&target) {
            continue;
        }
        // Height of the removed strip = beads jumped over.
        let height = beta.iter().filter(|&&b| b > target && b < beta[i]).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let smaller: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(j, &b)| b - (len - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        let v = mn_value(&smaller, mu, idx + 1, memo);
        if height % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// Class sizes of a finite group, optionally labelled by cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpace {
    order: BigInt,
    sizes: Vec<BigInt>,
    cycle_types: Option<Vec<Partition>>,
}

impl ClassSpace {
    pub fn new(sizes: Vec<BigInt>) -> Self {
        let order = sizes.iter().sum();
        ClassSpace { order, sizes, cycle_types: None }
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let parts = partitions(n)?;
        let nf = factorial(n);
        let sizes = parts.iter().map(|mu| &nf / mu.centralizer_order()).collect();
        Ok(ClassSpace { order: nf, sizes, cycle_types: Some(parts) })
    }

    /// Labels classes by cycle type so Adams operations apply.
    pub fn with_cycle_types(space: ClassSpace, types: Vec<Partition>) -> Self {
        assert_eq!(types.len(), space.sizes.len(), "one cycle type per class");
        ClassSpace { cycle_types: Some(types), ..space }
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn sizes(&self) -> &[BigInt] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn cycle_types(&self) -> Option<&[Partition]> {
        self.cycle_types.as_deref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub space: Arc<ClassSpace>,
    pub values: Vec<BigRational>,
}

impl ClassFunction {
    pub fn new(space: Arc<ClassSpace>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SizeMismatch(format!(
                "{} values for {} classes",
                values.len(),
                space.len()
            )));
        }
        Ok(ClassFunction { space, values })
    }

    pub fn from_integers(space: Arc<ClassSpace>, values: &[BigInt]) -> Result<Self> {
        ClassFunction::new(space, values.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn trivial(space: Arc<ClassSpace>) -> Self {
        let values = vec![BigRational::one(); space.len()];
        ClassFunction { space, values }
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(BigRational::is_integer)
    }
}

/// `⟨α, β⟩ = (1/|G|) Σ_C |C| α(C) β(C)` for rational-valued class functions.
pub fn inner_product(alpha: &ClassFunction, beta: &ClassFunction) -> Result<BigRational> {
    if alpha.space != beta.space {
        return Err(Error::SizeMismatch("class functions live on different class spaces".into()));
    }
    let space = &alpha.space;
    let sum: BigRational = space
        .sizes
        .iter()
        .zip(alpha.values.iter().zip(&beta.values))
        .map(|(size, (a, b))| BigRational::from_integer(size.clone()) * a * b)
        .sum();
    Ok(sum / BigRational::from_integer(space.order.clone()))
}

/// `(Ψ^m χ)(x) = χ(x^m)` on a symmetric-group class space.
pub fn adams_transform(m: i64, chi: &ClassFunction) -> Result<ClassFunction> {
    let types = chi.space.cycle_types().ok_or_else(|| {
        Error::SizeMismatch("Adams operations need cycle-type labelled classes".into())
    })?;
    let index: HashMap<&Partition, usize> = types.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let values = types.iter().map(|mu| chi.values[index[&mu.power(m)]].clone()).collect();
    Ok(ClassFunction { space: chi.space.clone(), values })
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub n: usize,
    pub partitions: Vec<Partition>,
    /// `values[λ][μ]`.
    pub values: Vec<Vec<BigInt>>,
    pub space: Arc<ClassSpace>,
}

impl CharacterTable {
    pub fn order(&self) -> &BigInt {
        self.space.order()
    }

    pub fn class_sizes(&self) -> &[BigInt] {
        self.space.sizes()
    }

    pub fn degrees(&self) -> Vec<BigInt> {
        let id = self.identity_class();
        self.values.iter().map(|row| row[id].clone()).collect()
    }

    /// Column of the identity class `(1^n)`, always last in reverse lexicographic order.
    pub fn identity_class(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn class_index(&self, mu: &Partition) -> Option<usize> {
        self.partitions.iter().position(|p| p == mu)
    }

    pub fn character(&self, lambda: usize) -> ClassFunction {
        ClassFunction::from_integers(self.space.clone(), &self.values[lambda]).expect("row length")
    }

    /// Checks row and column orthogonality exactly.
    pub fn check_orthogonality(&self) -> std::result::Result<(), String> {
        let k = self.partitions.len();
        let sizes = self.class_sizes();
        for a in 0..k {
            for b in a..k {
                let s: BigInt = (0..k).map(|c| &sizes[c] * &self.values[a][c] * &self.values[b][c]).sum();
                let expected = if a == b { self.order().clone() } else { BigInt::zero() };
                if s != expected {
                    return Err(format!("rows {a}, {b}: {s} != {expected}"));
                }
            }
        }
        for c in 0..k {
            for d in c..k {
                let s: BigInt = (0..k).map(|l| &self.values[l][c] * &self.values[l][d]).sum();
                let expected = if c == d { self.order() / &sizes[c] } else { BigInt::zero() };
                if s != expected {
                    return Err(format!("columns {c}, {d}: {s} != {expected}"));
                }
            }
        }
        Ok(())
    }
}

pub fn character_table(n: usize) -> Result<CharacterTable> {
    let parts = partitions(n)?;
    let space = Arc::new(ClassSpace::symmetric(n)?);
    let mut values = vec![vec![BigInt::zero(); parts.len()]; parts.len()];
    for (c, mu) in parts.iter().enumerate() {
        let mut memo = Memo::new();
        for (l, lambda) in parts.iter().enumerate() {
            values[l][c] = mn_value(lambda.parts(), mu.parts(), 0, &mut memo);
        }
    }
    Ok(CharacterTable { n, partitions: parts, values, space })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Generate every weakly decreasing sequence with the right sum.
    fn count_partitions_oracle(n: usize) -> usize {
        fn go(rem: usize, max: usize) -> usize {
            if rem == 0 {
                return 1;
            }
            (1..=rem.min(max)).map(|k| go(rem - k, k)).sum()
        }
        go(n, n)
    }

    #[test]
    fn partition_lists() {
        assert_eq!(partitions(0).unwrap(), vec![Partition::new(vec![])]);
        assert_eq!(partitions(1).unwrap(), vec![p(&[1])]);
        assert_eq!(partitions(5).unwrap().len(), 7);
        for n in 0..15 {
            assert_eq!(partitions(n).unwrap().len(), count_partitions_oracle(n));
        }
        let four: Vec<String> = partitions(4).unwrap().iter().map(|q| q.to_string()).collect();
        assert_eq!(four, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        assert!(matches!(partitions(31), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn hooks_on_the_long_cycle() {
        for n in 1..=8 {
            let cycle = p(&[n]);
            for lambda in partitions(n).unwrap() {
                let v = mn_character_value(&lambda, &cycle).unwrap();
                if lambda.is_hook() {
                    let r = lambda.parts().len() - 1;
                    assert_eq!(v, BigInt::from(if r % 2 == 0 { 1 } else { -1 }), "{lambda}");
                } else {
                    assert!(v.is_zero(), "{lambda}");
                }
            }
        }
    }

    #[test]
    fn degrees_match_hook_length_formula() {
        assert_eq!(mn_character_value(&p(&[3, 2]), &p(&[1; 5])).unwrap(), BigInt::from(5));
        for n in 0..=8 {
            let id = Partition::new(vec![1; n]);
            for lambda in partitions(n).unwrap() {
                assert_eq!(mn_character_value(&lambda, &id).unwrap(), hook_length_degree(&lambda));
            }
        }
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(mn_character_value(&p(&[2]), &p(&[3])), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn small_tables() {
        let t3 = character_table(3).unwrap();
        let mut d = t3.degrees();
        d.sort();
        assert_eq!(d, ints(&[1, 1, 2]));
        let t5 = character_table(5).unwrap();
        let mut d = t5.degrees();
        d.sort();
        assert_eq!(d, ints(&[1, 1, 4, 4, 5, 5, 6]));
        // S3 classes in order (3), (2,1), (1,1,1).
        assert_eq!(t3.class_sizes(), &ints(&[2, 3, 1])[..]);
        assert_eq!(t3.values[1], ints(&[-1, 0, 2]));
    }

    #[test]
    fn orthogonality_up_to_eight() {
        for n in 0..=8 {
            let t = character_table(n).unwrap();
            t.check_orthogonality().unwrap();
            let sq: BigInt = t.degrees().iter().map(|d| d * d).sum();
            assert_eq!(&sq, t.order());
            assert_eq!(t.values.len(), t.values[0].len());
        }
    }

    #[test]
    fn adams_examples() {
        let t = character_table(3).unwrap();
        let std = t.character(1);
        assert_eq!(adams_transform(1, &std).unwrap(), std);
        let sq = adams_transform(2, &std).unwrap();
        // Classes (3), (2,1), (1^3): the square of a 3-cycle is a 3-cycle.
        assert_eq!(sq.values, vec![rat(-1, 1), rat(2, 1), rat(2, 1)]);
        assert_eq!(inner_product(&sq, &std).unwrap(), rat(1, 1));
        for m in -4..=6 {
            let psi = adams_transform(m, &std).unwrap();
            assert_eq!(psi.values[t.identity_class()], rat(2, 1));
            assert!(psi.is_integral());
        }
    }

    #[test]
    fn inner_products() {
        let t = character_table(4).unwrap();
        let triv = ClassFunction::trivial(t.space.clone());
        for l in 0..t.partitions.len() {
            let chi = t.character(l);
            assert_eq!(inner_product(&chi, &chi).unwrap(), rat(1, 1));
            let expected = if t.partitions[l] == p(&[4]) { 1 } else { 0 };
            assert_eq!(inner_product(&chi, &triv).unwrap(), rat(expected, 1));
        }
        let other = character_table(3).unwrap().character(0);
        assert!(inner_product(&t.character(0), &other).is_err());
    }

    #[test]
    fn power_cycle_types() {
        assert_eq!(p(&[6]).power(2), p(&[3, 3]));
        assert_eq!(p(&[6]).power(-4), p(&[3, 3]));
        assert_eq!(p(&[4, 3, 1]).power(0), p(&[1; 8]));
        assert_eq!(p(&[5, 2]).power(3), p(&[5, 2]));
    }
}
