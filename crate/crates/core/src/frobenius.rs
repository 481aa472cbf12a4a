//! Character-sum formulas for counting solutions of equations in finite
//! groups, together with the closed forms they specialize to.
//!
//! Every formula here is exact rational arithmetic. Each has a brute-force
//! counterpart in [`crate::hom`] and the tests pair them up.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fp::{evaluate_word, Word};
use crate::group::{build_group, is_prime, Elem, FiniteGroup, GroupSpec};
use crate::hom::EnumConfig;
use crate::symchar::{
    adams_transform, character_table, inner_product, CharacterTable, ClassFunction, ClassSpace, Partition,
};

/// Integer-valued irreducible characters of a finite group.
pub trait CharacterData {
    fn group_order(&self) -> &BigInt;
    fn class_sizes(&self) -> &[BigInt];
    /// `values()[χ][C]`.
    fn values(&self) -> &[Vec<BigInt>];
    fn identity_class(&self) -> usize;

    fn degree(&self, chi: usize) -> &BigInt {
        &self.values()[chi][self.identity_class()]
    }

    fn character_count(&self) -> usize {
        self.values().len()
    }
}

impl CharacterData for CharacterTable {
    fn group_order(&self) -> &BigInt {
        self.order()
    }

    fn class_sizes(&self) -> &[BigInt] {
        CharacterTable::class_sizes(self)
    }

    fn values(&self) -> &[Vec<BigInt>] {
        &self.values
    }

    fn identity_class(&self) -> usize {
        CharacterTable::identity_class(self)
    }
}

/// A character table read from a file, for groups other than `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedCharacterTable {
    pub order: BigInt,
    pub class_sizes: Vec<BigInt>,
    pub representative_orders: Vec<u64>,
    pub power_maps: BTreeMap<i64, Vec<usize>>,
    pub values: Vec<Vec<BigInt>>,
    identity: usize,
}

impl CharacterData for LoadedCharacterTable {
    fn group_order(&self) -> &BigInt {
        &self.order
    }

    fn class_sizes(&self) -> &[BigInt] {
        &self.class_sizes
    }

    fn values(&self) -> &[Vec<BigInt>] {
        &self.values
    }

    fn identity_class(&self) -> usize {
        self.identity
    }
}

#[derive(Deserialize)]
struct RawTable {
    order: serde_json::Value,
    class_sizes: Vec<serde_json::Value>,
    representative_orders: Vec<serde_json::Value>,
    #[serde(default)]
    power_maps: BTreeMap<String, Vec<serde_json::Value>>,
    values: Vec<Vec<serde_json::Value>>,
}

fn json_int(v: &serde_json::Value) -> Result<BigInt> {
    let bad = || Error::InvalidTable(format!("`{v}` is not an integer"));
    match v {
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => {
            n.to_string().parse().map_err(|_| bad())
        }
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn json_small(v: &serde_json::Value) -> Result<u64> {
    json_int(v)?
        .try_into()
        .map_err(|_| Error::InvalidTable(format!("`{v}` is not a small non-negative integer")))
}

impl LoadedCharacterTable {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses the JSON table document. Integers may be JSON numbers or
    /// decimal strings; anything non-integral is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawTable =
            serde_json::from_str(text).map_err(|e| Error::InvalidTable(format!("bad document: {e}")))?;
        let order = json_int(&raw.order)?;
        let class_sizes = raw.class_sizes.iter().map(json_int).collect::<Result<Vec<_>>>()?;
        let representative_orders =
            raw.representative_orders.iter().map(json_small).collect::<Result<Vec<_>>>()?;
        let values = raw
            .values
            .iter()
            .map(|row| row.iter().map(json_int).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut power_maps = BTreeMap::new();
        for (k, v) in &raw.power_maps {
            let m: i64 = k.trim().parse().map_err(|_| Error::InvalidTable(format!("power map key `{k}`")))?;
            let map = v.iter().map(|x| json_small(x).map(|u| u as usize)).collect::<Result<Vec<_>>>()?;
            power_maps.insert(m, map);
        }
        let k = class_sizes.len();
        let identity = representative_orders
            .iter()
            .position(|&o| o == 1)
            .ok_or_else(|| Error::InvalidTable("no class of order 1".into()))?;
        let table = LoadedCharacterTable { order, class_sizes, representative_orders, power_maps, values, identity };
        table.validate(k)?;
        Ok(table)
    }

    fn validate(&self, k: usize) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidTable(m));
        if self.representative_orders.len() != k || self.values.len() != k {
            return fail(format!("expected {k} classes and {k} characters"));
        }
        if self.values.iter().any(|row| row.len() != k) {
            return fail("ragged values matrix".into());
        }
        if self.class_sizes.iter().sum::<BigInt>() != self.order {
            return fail("class sizes do not sum to the order".into());
        }
        if !self.class_sizes[self.identity].is_one() {
            return fail("identity class must have size 1".into());
        }
        for (m, map) in &self.power_maps {
            if map.len() != k || map.iter().any(|&c| c >= k) {
                return fail(format!("power map {m} malformed"));
            }
        }
        let degree_sq: BigInt = (0..k).map(|c| self.degree(c) * self.degree(c)).sum();
        if degree_sq != self.order {
            return fail(format!("sum of squared degrees {degree_sq} != order"));
        }
        for a in 0..k {
            for b in a..k {
                let s: BigInt =
                    (0..k).map(|c| &self.class_sizes[c] * &self.values[a][c] * &self.values[b][c]).sum();
                let expected = if a == b { self.order.clone() } else { BigInt::zero() };
                if s != expected {
                    return fail(format!("rows {a} and {b} are not orthonormal"));
                }
            }
        }
        Ok(())
    }
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn nonnegative_integer(v: BigRational, what: &str) -> Result<BigInt> {
    if v.is_integer() && !v.is_negative() {
        Ok(v.to_integer())
    } else {
        Err(Error::NonIntegerResult(format!("{what} = {v}")))
    }
}

fn check_class<T: CharacterData + ?Sized>(table: &T, class: usize) -> Result<()> {
    if class >= table.class_sizes().len() {
        Err(Error::IndexOutOfRange(format!("class {class} of {}", table.class_sizes().len())))
    } else {
        Ok(())
    }
}

/// `#{(x1,y1,…,xg,yg) : [x1,y1]⋯[xg,yg] = z} = Σ_χ (|G|/χ(1))^{2g-1} χ(z)`.
pub fn commutator_count<T: CharacterData + ?Sized>(table: &T, genus: u32, z_class: usize) -> Result<BigInt> {
    check_class(table, z_class)?;
    let order = rat(table.group_order());
    let exponent = 2 * genus as i32 - 1;
    let sum: BigRational = (0..table.character_count())
        .map(|chi| (&order / rat(table.degree(chi))).pow(exponent) * rat(&table.values()[chi][z_class]))
        .sum();
    nonnegative_integer(sum, "commutator count")
}

/// `#Hom(π1(Σ_g), G) = |G| Σ_χ (|G|/χ(1))^{2g-2}`.
pub fn surface_count<T: CharacterData + ?Sized>(table: &T, genus: u32) -> Result<BigInt> {
    let order = rat(table.group_order());
    let exponent = 2 * genus as i32 - 2;
    let sum: BigRational =
        (0..table.character_count()).map(|chi| (&order / rat(table.degree(chi))).pow(exponent)).sum();
    nonnegative_integer(&order * sum, "surface count")
}

/// `f_χ(C) = |C| χ(x) / χ(1)` for `x ∈ C`; always an algebraic integer, so an
/// integer for integer-valued tables.
pub fn f_chi<T: CharacterData + ?Sized>(table: &T, chi: usize, class: usize) -> Result<BigRational> {
    check_class(table, class)?;
    if chi >= table.character_count() {
        return Err(Error::IndexOutOfRange(format!("character {chi}")));
    }
    let v = rat(&table.class_sizes()[class]) * rat(&table.values()[chi][class]) / rat(table.degree(chi));
    if !v.is_integer() {
        return Err(Error::NonIntegerResult(format!("f_chi({chi}, {class}) = {v}")));
    }
    Ok(v)
}

/// Number of tuples `(z1,…,zk)` with `z_i ∈ C_i` and `z1⋯zk = 1`:
/// `Σ_χ χ(1)²/|G| Π_i f_χ(C_i)`.
pub fn constrained_count<T: CharacterData + ?Sized>(table: &T, classes: &[usize]) -> Result<BigInt> {
    if classes.is_empty() {
        return Err(Error::SizeMismatch("at least one class required".into()));
    }
    let order = rat(table.group_order());
    let mut sum = BigRational::zero();
    for chi in 0..table.character_count() {
        let d = rat(table.degree(chi));
        let mut term = &d * &d / &order;
        for &c in classes {
            term *= f_chi(table, chi, c)?;
        }
        sum += term;
    }
    nonnegative_integer(sum, "constrained count")
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(1/n²) Σ_{r<n} ((-1)^r r! (n-r-1)!)^{k-2}`, the number of `k`-tuples of
/// `n`-cycles with product 1 divided by `n!`.
pub fn ncycle_ratio(n: usize, k: usize) -> BigRational {
    assert!(n >= 1 && k >= 2, "ncycle_ratio needs n >= 1, k >= 2");
    let sum: BigInt = (0..n)
        .map(|r| {
            let base = factorial(r) * factorial(n - r - 1);
            let signed = if r % 2 == 0 { base } else { -base };
            num_traits::pow(signed, k - 2)
        })
        .sum();
    BigRational::new(sum, BigInt::from(n * n))
}

/// Four regular semisimple classes `diag(λ_i, λ_i⁻¹)` of `SL2(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueTuple {
    p: u32,
    lambdas: [u32; 4],
}

impl EigenvalueTuple {
    pub fn new(p: u32, lambdas: [u32; 4]) -> Result<Self> {
        if p <= 2 || !is_prime(p as u64) {
            return Err(Error::InvalidSpec(format!("{p} is not an odd prime")));
        }
        let lambdas = lambdas.map(|l| l % p);
        if let Some(&l) = lambdas.iter().find(|&&l| l == 0 || l == 1 || l == p - 1) {
            return Err(Error::InvalidSpec(format!("eigenvalue {l} is 0 or ±1 mod {p}")));
        }
        Ok(EigenvalueTuple { p, lambdas })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn lambdas(&self) -> [u32; 4] {
        self.lambdas
    }
}

pub fn mod_pow(base: u64, mut e: u64, p: u64) -> u64 {
    let mut b = base % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn mod_inverse(x: u32, p: u32) -> u32 {
    mod_pow(x as u64, p as u64 - 2, p as u64) as u32
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourClassRatio {
    /// Half the number of sign vectors with `Π λ_i^{ε_i} = 1`.
    pub a: u32,
    /// `q² + 4q + 1 + a q²/(q-1)`.
    pub ratio: BigRational,
}

pub fn sl2_four_class_ratio(e: &EigenvalueTuple) -> FourClassRatio {
    let p = e.p as u64;
    let mut hits = 0u32;
    for signs in 0..16u32 {
        let product = e.lambdas.iter().enumerate().fold(1u64, |acc, (i, &l)| {
            let v = if signs >> i & 1 == 1 { mod_inverse(l, e.p) as u64 } else { l as u64 };
            acc * v % p
        });
        hits += (product == 1) as u32;
    }
    let q = BigInt::from(p);
    let base = &q * &q + BigInt::from(4) * &q + BigInt::one();
    let ratio = BigRational::from_integer(base)
        + BigRational::new(BigInt::from(hits / 2) * &q * &q, &q - BigInt::one());
    FourClassRatio { a: hits / 2, ratio }
}

/// The class space of a concrete group, labelled by cycle type when the
/// group is symmetric.
pub fn class_space_of(g: &FiniteGroup) -> Arc<ClassSpace> {
    let sizes = g.conjugacy_classes().iter().map(|c| BigInt::from(c.size)).collect();
    let mut space = ClassSpace::new(sizes);
    let types: Option<Vec<Partition>> = g
        .conjugacy_classes()
        .iter()
        .map(|c| g.cycle_type(c.representative).map(Partition::new))
        .collect();
    if let Some(types) = types {
        space = ClassSpace::with_cycle_types(space, types);
    }
    Arc::new(space)
}

/// The irreducible characters of `S_n` as class functions on the classes of
/// the concrete group `g = S_n`, matched by cycle type.
pub fn characters_on_group(table: &CharacterTable, g: &FiniteGroup) -> Result<Vec<ClassFunction>> {
    let space = class_space_of(g);
    let types = space
        .cycle_types()
        .ok_or_else(|| Error::SizeMismatch(format!("{} is not a symmetric group", g.name())))?
        .to_vec();
    let columns: Vec<usize> = types
        .iter()
        .map(|t| table.class_index(t).ok_or_else(|| Error::SizeMismatch(format!("no class {t} in table"))))
        .collect::<Result<_>>()?;
    (0..table.partitions.len())
        .map(|l| {
            let values: Vec<BigInt> = columns.iter().map(|&c| table.values[l][c].clone()).collect();
            ClassFunction::from_integers(space.clone(), &values)
        })
        .collect()
}

fn check_pair_budget(g: &FiniteGroup, letters: usize, cfg: &EnumConfig) -> Result<()> {
    let cost = (g.order() as u128).pow(2) * letters.max(1) as u128;
    if cost > cfg.budget as u128 {
        Err(Error::BudgetExceeded { cost, budget: cfg.budget })
    } else {
        Ok(())
    }
}

fn par_over_elements<T: Send>(g: &FiniteGroup, cfg: &EnumConfig, job: impl Fn(Elem) -> T + Sync + Send) -> Vec<T> {
    if cfg.workers <= 1 {
        return g.elements().map(job).collect();
    }
    let run = || (0..g.order() as Elem).into_par_iter().map(&job).collect();
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => g.elements().map(job).collect(),
    }
}

/// How often `w(x, y)` lands in each class, over all `(x, y) ∈ G²`.
pub fn word_class_histogram(g: &FiniteGroup, w: &Word, cfg: &EnumConfig) -> Result<Vec<u64>> {
    if w.max_generator().is_some_and(|m| m >= 2) {
        return Err(Error::SizeMismatch("word must use at most two generators".into()));
    }
    check_pair_budget(g, w.len(), cfg)?;
    let k = g.class_count();
    let partial = par_over_elements(g, cfg, |x| {
        let mut hist = vec![0u64; k];
        for y in g.elements() {
            hist[g.class_of(evaluate_word(w, &[x, y], g))] += 1;
        }
        hist
    });
    let mut hist = vec![0u64; k];
    for h in partial {
        for (acc, v) in hist.iter_mut().zip(h) {
            *acc += v;
        }
    }
    Ok(hist)
}

/// Pairs a class histogram of `w` with a class function: `s_χ(w)`.
pub fn s_chi_from_histogram(hist: &[u64], chi: &ClassFunction) -> Result<BigRational> {
    if hist.len() != chi.values.len() {
        return Err(Error::SizeMismatch("histogram and class function differ in length".into()));
    }
    let total: u64 = hist.iter().sum();
    let sum: BigRational =
        hist.iter().zip(&chi.values).map(|(&h, v)| BigRational::from_integer(BigInt::from(h)) * v).sum();
    Ok(sum / BigRational::from_integer(BigInt::from(total)))
}

/// `s_χ(w) = (1/|G|²) Σ_{x,y} χ(w(x,y))`.
pub fn s_chi(g: &FiniteGroup, w: &Word, chi: &ClassFunction, cfg: &EnumConfig) -> Result<BigRational> {
    if chi.values.len() != g.class_count() {
        return Err(Error::SizeMismatch("class function is not indexed by the group's classes".into()));
    }
    s_chi_from_histogram(&word_class_histogram(g, w, cfg)?, chi)
}

/// `x^{-m} y x^n y^{-1}`.
pub fn baumslag_solitar_word(m: i64, n: i64) -> Word {
    let x = Word::generator(0);
    let y = Word::generator(1);
    x.pow(-m).concat(&y).concat(&x.pow(n)).concat(&y.inverse())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BsRow {
    pub partition: Partition,
    pub degree: BigInt,
    /// `χ(1) s_χ(w)` from the brute-force histogram.
    pub weighted_s: BigRational,
    /// `⟨Ψ^m χ, Ψ^n χ⟩` from the character table.
    pub adams_inner: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BsReport {
    pub degree: usize,
    pub m: i64,
    pub n: i64,
    pub rows: Vec<BsRow>,
    pub hom_count: u64,
    pub group_order: usize,
    /// `#{C : C^m = C}`, reported when `n = 1`.
    pub m_stable_classes: Option<u64>,
    pub pass: bool,
}

/// Checks `χ(1) s_χ(x^{-m} y x^n y^{-1}) = ⟨Ψ^m χ, Ψ^n χ⟩` for every
/// irreducible `χ` of `S_degree`, and `#Hom/|G| = #{C^m = C}` when `n = 1`.
pub fn bs_identity_check(degree: usize, m: i64, n: i64, cfg: &EnumConfig) -> Result<BsReport> {
    let g = build_group(&GroupSpec::Symmetric(degree))?;
    let table = character_table(degree)?;
    let on_group = characters_on_group(&table, &g)?;
    let w = baumslag_solitar_word(m, n);
    let hist = word_class_histogram(&g, &w, cfg)?;
    let mut rows = Vec::new();
    for (l, chi_g) in on_group.iter().enumerate() {
        let chi = table.character(l);
        let d = table.degree(l).clone();
        let weighted_s = BigRational::from_integer(d.clone()) * s_chi_from_histogram(&hist, chi_g)?;
        let adams_inner = inner_product(&adams_transform(m, &chi)?, &adams_transform(n, &chi)?)?;
        rows.push(BsRow { partition: table.partitions[l].clone(), degree: d, weighted_s, adams_inner });
    }
    let hom_count = hist[g.class_of(g.identity())];
    let order = g.order() as u64;
    let weighted_total: BigRational = rows.iter().map(|r| r.weighted_s.clone()).sum();
    let mut pass = rows.iter().all(|r| r.weighted_s == r.adams_inner && r.weighted_s.is_integer())
        && weighted_total == BigRational::new(BigInt::from(hom_count), BigInt::from(order));
    let m_stable_classes = if n == 1 {
        let stable = m_stable_class_count(&g, m, cfg)?;
        pass &= hom_count == stable * order;
        Some(stable)
    } else {
        None
    };
    Ok(BsReport { degree, m, n, rows, hom_count, group_order: g.order(), m_stable_classes, pass })
}

/// Number of classes with `C^m = C`, cross-checked against the brute-force
/// count of pairs with `y x y⁻¹ = x^m` divided by `|G|`.
pub fn m_stable_class_count(g: &FiniteGroup, m: i64, cfg: &EnumConfig) -> Result<u64> {
    let stable = g.power_class_map(m).iter().enumerate().filter(|(c, &d)| *c == d).count() as u64;
    check_pair_budget(g, 4, cfg)?;
    let pairs: u64 = par_over_elements(g, cfg, |x| {
        let target = g.pow(x, m);
        g.elements().filter(|&y| g.conjugate(y, x) == target).count() as u64
    })
    .into_iter()
    .sum();
    if pairs != stable * g.order() as u64 {
        return Err(Error::OracleMismatch(format!(
            "{} pairs with y x y^-1 = x^{m}, but {stable} stable classes in {}",
            pairs,
            g.name()
        )));
    }
    Ok(stable)
}

/// Legendre-style test: is `m` congruent to a nonzero square mod `p`?
pub fn is_nonzero_square_mod(m: i64, p: u32) -> bool {
    let r = m.rem_euclid(p as i64) as u64;
    r != 0 && mod_pow(r, (p as u64 - 1) / 2, p as u64) == 1
}

/// `1 + δ_p(m) + ½ Σ_{ε1,ε2 = ±1} (gcd(p+ε1, m+ε2) - 1)` with `δ_p(m) = 2`
/// when `m` is a square mod `p`. Intended for even `m`.
pub fn sl2_m_stable_closed_form(p: u32, m: i64) -> Result<BigInt> {
    if p <= 2 || !is_prime(p as u64) {
        return Err(Error::InvalidSpec(format!("{p} is not an odd prime")));
    }
    if m % 2 != 0 {
        return Err(Error::InvalidSpec(format!("m = {m} must be even")));
    }
    let delta = if is_nonzero_square_mod(m, p) { 2 } else { 0 };
    let mut gcd_sum = 0i64;
    for e1 in [-1i64, 1] {
        for e2 in [-1i64, 1] {
            gcd_sum += (p as i64 + e1).gcd(&(m + e2)) - 1;
        }
    }
    debug_assert!(gcd_sum % 2 == 0);
    Ok(BigInt::from(1 + delta + gcd_sum / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::{parse_word, surface_presentation, Presentation};
    use crate::hom::{count_constrained, count_homs, ClassConstraint};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn col(t: &CharacterTable, parts: &[usize]) -> usize {
        t.class_index(&Partition::new(parts.to_vec())).unwrap()
    }

    fn row(t: &CharacterTable, parts: &[usize]) -> usize {
        t.partitions.iter().position(|p| p == &Partition::new(parts.to_vec())).unwrap()
    }

    #[test]
    fn commutator_counts_s3() {
        let t = character_table(3).unwrap();
        let id = t.identity_class();
        assert_eq!(commutator_count(&t, 0, id).unwrap(), int(1));
        assert_eq!(commutator_count(&t, 0, col(&t, &[3])).unwrap(), int(0));
        assert_eq!(commutator_count(&t, 1, id).unwrap(), int(18));
        assert_eq!(commutator_count(&t, 1, col(&t, &[3])).unwrap(), int(9));
        // Σ_z #U_z over all elements = |G|^{2g}.
        let total: BigInt = (0..3).map(|c| &t.class_sizes()[c] * commutator_count(&t, 1, c).unwrap()).sum();
        assert_eq!(total, int(36));
    }

    #[test]
    fn surface_counts() {
        let s2 = character_table(2).unwrap();
        let s3 = character_table(3).unwrap();
        assert_eq!(surface_count(&s2, 2).unwrap(), int(16));
        assert_eq!(surface_count(&s3, 2).unwrap(), int(486));
        for n in 1..=6 {
            let t = character_table(n).unwrap();
            let classes = BigInt::from(t.partitions.len());
            assert_eq!(surface_count(&t, 1).unwrap(), t.order() * classes);
            for g in 1..=4 {
                assert!((surface_count(&t, g).unwrap() % t.order()).is_zero());
            }
        }
    }

    #[test]
    fn f_chi_values() {
        let t = character_table(3).unwrap();
        let triv = row(&t, &[3]);
        for c in 0..3 {
            assert_eq!(f_chi(&t, triv, c).unwrap(), rat(&t.class_sizes()[c]));
        }
        assert_eq!(f_chi(&t, row(&t, &[2, 1]), col(&t, &[3])).unwrap(), r(-1, 1));
        let t5 = character_table(5).unwrap();
        let sign = row(&t5, &[1, 1, 1, 1, 1]);
        let trans = col(&t5, &[2, 1, 1, 1]);
        assert_eq!(f_chi(&t5, sign, trans).unwrap(), -rat(&t5.class_sizes()[trans]));
    }

    #[test]
    fn constrained_counts() {
        let t3 = character_table(3).unwrap();
        assert_eq!(constrained_count(&t3, &[col(&t3, &[3]); 3]).unwrap(), int(2));
        assert_eq!(constrained_count(&t3, &[col(&t3, &[2, 1]); 2]).unwrap(), int(3));
        let t4 = character_table(4).unwrap();
        assert_eq!(constrained_count(&t4, &[col(&t4, &[4]); 3]).unwrap(), int(0));
    }

    #[test]
    fn ncycle_closed_form() {
        for n in 2..=8 {
            assert_eq!(ncycle_ratio(n, 2), r(1, n as i64));
        }
        assert_eq!(ncycle_ratio(3, 3), r(1, 3));
        assert_eq!(ncycle_ratio(4, 3), r(0, 1));
        for n in 2..=6usize {
            let t = character_table(n).unwrap();
            for k in 2..=5 {
                let c = constrained_count(&t, &vec![col(&t, &[n]); k]).unwrap();
                assert_eq!(BigRational::new(c, t.order().clone()), ncycle_ratio(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn four_class_ratios() {
        let e = EigenvalueTuple::new(5, [2, 2, 2, 2]).unwrap();
        let out = sl2_four_class_ratio(&e);
        assert_eq!((out.a, out.ratio.clone()), (4, r(71, 1)));
        let e = EigenvalueTuple::new(7, [2, 2, 3, 3]).unwrap();
        let out = sl2_four_class_ratio(&e);
        assert_eq!(out.a, 3);
        assert_eq!(out.ratio, r(78, 1) + r(3 * 49, 6));
        assert!(EigenvalueTuple::new(7, [1, 2, 3, 3]).is_err());
        assert!(EigenvalueTuple::new(7, [6, 2, 3, 3]).is_err());
        assert!(EigenvalueTuple::new(9, [2, 2, 2, 2]).is_err());
        // a = 0 for a generic tuple: ratio is q² + 4q + 1.
        let e = EigenvalueTuple::new(11, [2, 3, 5, 7]).unwrap();
        let out = sl2_four_class_ratio(&e);
        if out.a == 0 {
            assert_eq!(out.ratio, r(121 + 44 + 1, 1));
        }
    }

    #[test]
    fn s_chi_examples() {
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let t = character_table(3).unwrap();
        let chars = characters_on_group(&t, &g).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        let comm = parse_word("[x,y]", &names).unwrap();
        let single = parse_word("x", &names).unwrap();
        let cfg = EnumConfig::default();
        for (l, chi) in chars.iter().enumerate() {
            let d = rat(t.degree(l));
            assert_eq!(s_chi(&g, &comm, chi, &cfg).unwrap(), BigRational::one() / d);
            let expected = if t.partitions[l].parts() == [3] { 1 } else { 0 };
            assert_eq!(s_chi(&g, &single, chi, &cfg).unwrap(), r(expected, 1));
        }
        let w = parse_word("x^-1 y x y^-1", &names).unwrap();
        assert_eq!(s_chi(&g, &w, &chars[row(&t, &[2, 1])], &cfg).unwrap(), r(1, 2));
    }

    #[test]
    fn bs_identity_small() {
        let cfg = EnumConfig::default();
        let rep = bs_identity_check(3, 1, 1, &cfg).unwrap();
        assert!(rep.pass);
        assert!(rep.rows.iter().all(|r| r.adams_inner == BigRational::one()));
        assert!(bs_identity_check(3, 2, 1, &cfg).unwrap().pass);
        assert!(bs_identity_check(4, 2, 3, &cfg).unwrap().pass);
    }

    #[test]
    fn m_stable_counts() {
        let cfg = EnumConfig::default();
        let s4 = build_group(&GroupSpec::Symmetric(4)).unwrap();
        assert_eq!(m_stable_class_count(&s4, 1, &cfg).unwrap(), 5);
        assert_eq!(m_stable_class_count(&s4, 2, &cfg).unwrap(), 2);
        let sl25 = build_group(&GroupSpec::Sl2(5)).unwrap();
        assert_eq!(m_stable_class_count(&sl25, 2, &cfg).unwrap(), 2);
    }

    #[test]
    fn sl2_closed_form_examples() {
        assert_eq!(sl2_m_stable_closed_form(5, 2).unwrap(), int(2));
        assert_eq!(sl2_m_stable_closed_form(7, 2).unwrap(), int(4));
        assert_eq!(sl2_m_stable_closed_form(5, 4).unwrap(), int(4));
        assert!(sl2_m_stable_closed_form(5, 3).is_err());
    }

    #[test]
    fn sl2_closed_form_wide_sweep() {
        let cfg = EnumConfig::default();
        for p in [3u32, 5, 7] {
            let g = build_group(&GroupSpec::Sl2(p)).unwrap();
            for m in (-6..=30).step_by(2) {
                let brute = m_stable_class_count(&g, m, &cfg).unwrap();
                assert_eq!(int(brute as i64), sl2_m_stable_closed_form(p, m).unwrap(), "p={p} m={m}");
            }
        }
    }

    /// Triples `(z1, z2, z3)` in the first three classes whose product
    /// inverts into the fourth, counted by enumeration.
    fn four_class_brute(e: &EigenvalueTuple, cfg: &EnumConfig) -> u64 {
        let g = build_group(&GroupSpec::Sl2(e.p())).unwrap();
        let class = |l: u32| {
            let d = g.matrix_element([l, 0, 0, mod_inverse(l, e.p())]).unwrap();
            g.class_of(d)
        };
        let ls = e.lambdas();
        let p = Presentation::parse("gens: x1, x2, x3").unwrap();
        let last = parse_word("(x1 x2 x3)^-1", &p.generator_names).unwrap();
        let mut cs: Vec<_> = (0..3).map(|i| ClassConstraint::generator(i, class(ls[i]))).collect();
        cs.push(ClassConstraint::new(vec![last], class(ls[3])));
        count_constrained(&p, &g, &cs, cfg).unwrap()
    }

    #[test]
    fn four_class_ratio_matches_enumeration() {
        let cfg = EnumConfig::with_budget(1_000_000_000);
        let e = EigenvalueTuple::new(5, [2, 2, 2, 2]).unwrap();
        assert_eq!(four_class_brute(&e, &cfg), 8520);
        for (p, ls) in [(5, [2, 3, 2, 2]), (7, [2, 2, 3, 3]), (7, [2, 3, 4, 5]), (7, [3, 3, 3, 3])] {
            let e = EigenvalueTuple::new(p, ls).unwrap();
            let order = BigInt::from(p * (p * p - 1));
            let expected = sl2_four_class_ratio(&e).ratio * BigRational::from_integer(order);
            assert_eq!(rat(&BigInt::from(four_class_brute(&e, &cfg))), expected, "p={p} {ls:?}");
        }
    }

    #[test]
    fn character_sums_match_enumeration() {
        let cfg = EnumConfig::default();
        let s3 = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let t = character_table(3).unwrap();
        assert_eq!(
            BigInt::from(count_homs(&surface_presentation(2), &s3, &cfg).unwrap()),
            surface_count(&t, 2).unwrap()
        );
        let p = Presentation::parse("gens: x, y, z; rels: x y z").unwrap();
        let trans = s3.conjugacy_classes().iter().find(|c| c.size == 3).unwrap().id;
        let cs: Vec<_> = (0..3).map(|i| ClassConstraint::generator(i, trans)).collect();
        assert_eq!(
            BigInt::from(count_constrained(&p, &s3, &cs, &cfg).unwrap()),
            constrained_count(&t, &[col(&t, &[2, 1]); 3]).unwrap()
        );
    }

    #[test]
    fn loaded_table_round_trip() {
        // S3 with classes ordered by element order.
        let doc = r#"{
            "order": 6,
            "class_sizes": [1, 3, "2"],
            "representative_orders": [1, 2, 3],
            "power_maps": {"2": [0, 0, 2], "3": [0, 1, 0]},
            "values": [[1, 1, 1], [1, -1, 1], [2, 0, -1]]
        }"#;
        let t = LoadedCharacterTable::parse(doc).unwrap();
        assert_eq!(t.identity_class(), 0);
        assert_eq!(surface_count(&t, 2).unwrap(), int(486));
        assert_eq!(commutator_count(&t, 1, 2).unwrap(), int(9));
        assert_eq!(constrained_count(&t, &[2, 2, 2]).unwrap(), int(2));

        let bad_sum = doc.replace("\"2\"]", "3]");
        assert!(matches!(LoadedCharacterTable::parse(&bad_sum), Err(Error::InvalidTable(_))));
        let bad_row = doc.replace("[2, 0, -1]", "[2, 1, -1]");
        assert!(matches!(LoadedCharacterTable::parse(&bad_row), Err(Error::InvalidTable(_))));
        let irrational = doc.replace("[2, 0, -1]", "[2, 0, -1.5]");
        assert!(matches!(LoadedCharacterTable::parse(&irrational), Err(Error::InvalidTable(_))));
    }
}
