//! Subgroup growth from homomorphism counts into symmetric groups.
//!
//! With `h_n = #Hom(Γ, S_n)`, the exponential formula gives
//! `Σ h_n x^n/n! = exp(Σ u_n x^n/n)` where `u_n` counts index-`n` subgroups.
//! When every `h_n/n!` is an integer the series also factors as
//! `Π (1 - x^n)^{-v_n}`, and `u_n = Σ_{d|n} d v_d`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fp::{abelianization, surface_presentation, Presentation};
use crate::frobenius::surface_count;
use crate::group::{build_group, GroupSpec, MAX_SYMMETRIC_DEGREE};
use crate::hom::{count_homs, EnumConfig};
use crate::symchar::character_table;

pub const MAX_SERIES_ORDER: usize = 64;
const MOBIUS_GUARD: u64 = 1_000_000;

/// A power series truncated after `x^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    /// Coefficients `c_0..c_N`.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least c_0");
        RationalSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        RationalSeries::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero(order: usize) -> Self {
        RationalSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn mul(&self, other: &RationalSeries) -> RationalSeries {
        let n = self.order().min(other.order());
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Logarithm of a series with constant term 1, from `n f_n = Σ k a_k f_{n-k}`.
    pub fn log(&self) -> Result<RationalSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::BadConstantTerm { op: "log", expected: 1 });
        }
        let n = self.order();
        let f = &self.coeffs;
        let mut a = Self::zero(n);
        for m in 1..=n {
            let mut acc = BigRational::from_integer(BigInt::from(m)) * &f[m];
            for k in 1..m {
                acc -= BigRational::from_integer(BigInt::from(k)) * &a.coeffs[k] * &f[m - k];
            }
            a.coeffs[m] = acc / BigRational::from_integer(BigInt::from(m));
        }
        Ok(a)
    }

    /// Exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<RationalSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm { op: "exp", expected: 0 });
        }
        let n = self.order();
        let a = &self.coeffs;
        let mut f = Self::one(n);
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                acc += BigRational::from_integer(BigInt::from(k)) * &a[k] * &f.coeffs[m - k];
            }
            f.coeffs[m] = acc / BigRational::from_integer(BigInt::from(m));
        }
        Ok(f)
    }
}

pub fn series_log(f: &RationalSeries) -> Result<RationalSeries> {
    f.log()
}

pub fn series_exp(a: &RationalSeries) -> Result<RationalSeries> {
    a.exp()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `Σ h_n x^n / n!`.
pub fn egf(h: &[BigInt]) -> RationalSeries {
    RationalSeries::new(
        h.iter().enumerate().map(|(n, v)| BigRational::new(v.clone(), factorial(n))).collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Presentation(Presentation),
    Genus(usize),
}

impl Source {
    pub fn presentation(&self) -> Presentation {
        match self {
            Source::Presentation(p) => p.clone(),
            Source::Genus(g) => surface_presentation(*g),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Brute,
    Character,
}

/// `h_0..h_N` with `h_n = #Hom(Γ, S_n)` and `h_0 = 1`.
pub fn hom_sequence(source: &Source, n_max: usize, method: Method, cfg: &EnumConfig) -> Result<Vec<BigInt>> {
    let mut h = vec![BigInt::one()];
    match (method, source) {
        (Method::Character, Source::Genus(g)) => {
            for n in 1..=n_max {
                h.push(surface_count(&character_table(n)?, *g as u32)?);
            }
        }
        (Method::Character, Source::Presentation(_)) => {
            return Err(Error::InvalidSpec("the character method needs a surface (genus) source".into()));
        }
        (Method::Brute, _) => {
            if n_max > MAX_SYMMETRIC_DEGREE {
                return Err(Error::BoundExceeded(format!("brute force stops at S{MAX_SYMMETRIC_DEGREE}")));
            }
            let p = source.presentation();
            for n in 1..=n_max {
                let g = build_group(&GroupSpec::Symmetric(n))?;
                h.push(BigInt::from(count_homs(&p, &g, cfg)?));
            }
        }
    }
    Ok(h)
}

fn integral(v: BigRational, what: impl FnOnce() -> String) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::NonIntegerResult(format!("{} = {v}", what())))
    }
}

/// `u_n = n [x^n] log(Σ h_n x^n/n!)` for `n = 1..N`.
pub fn u_from_homs(h: &[BigInt]) -> Result<Vec<BigInt>> {
    if h.first().map_or(true, |h0| !h0.is_one()) {
        return Err(Error::BadConstantTerm { op: "log", expected: 1 });
    }
    if h.len() > MAX_SERIES_ORDER + 1 {
        return Err(Error::BoundExceeded(format!("series order capped at {MAX_SERIES_ORDER}")));
    }
    let log = egf(h).log()?;
    (1..h.len())
        .map(|n| integral(BigRational::from_integer(BigInt::from(n)) * log.coeff(n), || format!("u_{n}")))
        .collect()
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1 && n <= MOBIUS_GUARD, "mobius argument {n} outside 1..={MOBIUS_GUARD}");
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n % d == 0)
}

/// `v_n = (1/n) Σ_{d|n} μ(n/d) u_d`; `u[0]` is `u_1`.
pub fn v_from_u(u: &[BigInt]) -> Result<Vec<BigInt>> {
    (1..=u.len())
        .map(|n| {
            let s: BigInt = divisors(n).map(|d| BigInt::from(mobius((n / d) as u64)) * &u[d - 1]).sum();
            integral(BigRational::new(s, BigInt::from(n)), || format!("v_{n}"))
        })
        .collect()
}

/// `u_n = Σ_{d|n} d v_d`; `v[0]` is `v_1`.
pub fn u_from_v(v: &[BigInt]) -> Vec<BigInt> {
    (1..=v.len()).map(|n| divisors(n).map(|d| BigInt::from(d) * &v[d - 1]).sum()).collect()
}

/// Coefficients of `(1 - x^step)^{-e}` through `x^order`, from the
/// generalized binomial series.
fn inverse_power_factor(step: usize, e: &BigInt, order: usize) -> RationalSeries {
    let mut s = RationalSeries::zero(order);
    let mut c = BigRational::one();
    let e = BigRational::from_integer(e.clone());
    let mut j = 0usize;
    while j * step <= order {
        s.coeffs[j * step] = c.clone();
        // binom(e + j, j + 1) / binom(e + j - 1, j) = (e + j) / (j + 1)
        c = c * (&e + BigRational::from_integer(BigInt::from(j))) / BigRational::from_integer(BigInt::from(j + 1));
        j += 1;
    }
    s
}

/// Whether `Π_{n≤N} (1 - x^n)^{-v_n}` agrees with `Σ h_n x^n/n!` through `x^N`.
pub fn product_form_check(h: &[BigInt], v: &[BigInt], n_max: usize) -> bool {
    if h.len() < n_max + 1 || v.len() < n_max {
        return false;
    }
    let mut product = RationalSeries::one(n_max);
    for n in 1..=n_max {
        product = product.mul(&inverse_power_factor(n, &v[n - 1], n_max));
    }
    product == egf(&h[..=n_max])
}

/// `u_{p^{k+1}} ≡ u_{p^k} (mod p^{k+1})`; `u[0]` is `u_1`.
pub fn congruence_check(u: &[BigInt], p: u64, k: u32) -> Result<bool> {
    let hi = p.checked_pow(k + 1).ok_or_else(|| Error::IndexOutOfRange("p^(k+1) overflows".into()))?;
    if hi as usize > u.len() || hi < 2 {
        return Err(Error::IndexOutOfRange(format!("need u_{hi} but only {} terms", u.len())));
    }
    let lo = p.pow(k) as usize;
    let diff = &u[hi as usize - 1] - &u[lo - 1];
    Ok(diff.mod_floor(&BigInt::from(hi)).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthResult {
    /// `h_0..h_N`.
    pub hom_counts: Vec<BigInt>,
    /// `u_1..u_N`.
    pub u: Vec<BigInt>,
    /// `v_1..v_N`, present when integral.
    pub v: Option<Vec<BigInt>>,
    pub infinite_abelianization: bool,
}

/// Runs the whole pipeline. For sources with infinite abelianization the
/// `v_n` must be non-negative integers and the product form must hold.
pub fn growth(source: &Source, n_max: usize, method: Method, cfg: &EnumConfig) -> Result<GrowthResult> {
    let h = hom_sequence(source, n_max, method, cfg)?;
    let infinite = abelianization(&source.presentation()).is_infinite();
    let u = u_from_homs(&h)?;
    if let Some(i) = u.iter().position(|x| x.is_negative()) {
        return Err(Error::OracleMismatch(format!("u_{} = {} is negative", i + 1, u[i])));
    }
    let v = match v_from_u(&u) {
        Ok(v) => Some(v),
        Err(e) if infinite => return Err(e),
        Err(_) => None,
    };
    if infinite {
        let vs = v.as_ref().expect("integral for infinite abelianization");
        if let Some(i) = vs.iter().position(|x| x.is_negative()) {
            return Err(Error::OracleMismatch(format!("v_{} = {} is negative", i + 1, vs[i])));
        }
        if !product_form_check(&h, vs, n_max) {
            return Err(Error::OracleMismatch("product form disagrees with the hom series".into()));
        }
    }
    Ok(GrowthResult { hom_counts: h, u, v, infinite_abelianization: infinite })
}

/// Growth rows for surface groups of genus `1..=max_genus`, via characters.
pub fn surface_table(max_genus: usize, max_n: usize) -> Result<Vec<GrowthResult>> {
    let cfg = EnumConfig::default();
    (1..=max_genus).map(|g| growth(&Source::Genus(g), max_n, Method::Character, &cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Counts transitive actions recursively: `h_n = Σ_k C(n-1,k-1) t_k h_{n-k}`,
    /// then `u_n = t_n / (n-1)!`. Independent of the series code.
    fn u_by_transitive_actions(h: &[BigInt]) -> Vec<BigInt> {
        let n_max = h.len() - 1;
        let binom = |n: usize, k: usize| factorial(n) / (factorial(k) * factorial(n - k));
        let mut t = vec![BigInt::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut rest = h[n].clone();
            for k in 1..n {
                rest -= binom(n - 1, k - 1) * &t[k] * &h[n - k];
            }
            t[n] = rest;
        }
        (1..=n_max).map(|n| &t[n] / factorial(n - 1)).collect()
    }

    fn sigma(n: i64) -> i64 {
        (1..=n).filter(|d| n % d == 0).sum()
    }

    #[test]
    fn log_of_geometric_series() {
        let f = RationalSeries::new(vec![r(1, 1); 8]);
        let log = series_log(&f).unwrap();
        for n in 1..8 {
            assert_eq!(log.coeff(n), &r(1, n as i64));
        }
        assert!(log.coeff(0).is_zero());
    }

    #[test]
    fn bad_constant_terms() {
        assert!(matches!(RationalSeries::zero(3).log(), Err(Error::BadConstantTerm { .. })));
        assert!(matches!(RationalSeries::one(3).exp(), Err(Error::BadConstantTerm { .. })));
    }

    #[test]
    fn genus_one_log_is_divisor_sums() {
        let h = hom_sequence(&Source::Genus(1), 8, Method::Character, &EnumConfig::default()).unwrap();
        let log = egf(&h).log().unwrap();
        for n in 1..=8 {
            assert_eq!(log.coeff(n), &r(sigma(n as i64), n as i64));
        }
    }

    #[test]
    fn hom_sequences() {
        let cfg = EnumConfig::default();
        let g1 = hom_sequence(&Source::Genus(1), 5, Method::Character, &cfg).unwrap();
        assert_eq!(g1, ints(&[1, 1, 4, 18, 120, 840]));
        let g2 = hom_sequence(&Source::Genus(2), 4, Method::Character, &cfg).unwrap();
        assert_eq!(g2, ints(&[1, 1, 16, 486, 34176]));
        let z = Source::Presentation(Presentation::parse("gens: x").unwrap());
        assert_eq!(hom_sequence(&z, 4, Method::Brute, &cfg).unwrap(), ints(&[1, 1, 2, 6, 24]));
        assert!(hom_sequence(&z, 4, Method::Character, &cfg).is_err());
        for g in 0..=2 {
            let brute = hom_sequence(&Source::Genus(g), 4, Method::Brute, &cfg).unwrap();
            let chars = hom_sequence(&Source::Genus(g), 4, Method::Character, &cfg).unwrap();
            assert_eq!(brute, chars, "genus {g}");
        }
    }

    #[test]
    fn u_and_v_rows() {
        let rows = surface_table(2, 5).unwrap();
        assert_eq!(rows[0].u, ints(&[1, 3, 4, 7, 6]));
        assert_eq!(rows[1].u, ints(&[1, 15, 220, 5275, 151086]));
        assert_eq!(rows[0].v.as_ref().unwrap(), &ints(&[1, 1, 1, 1, 1]));
        assert_eq!(rows[1].v.as_ref().unwrap(), &ints(&[1, 7, 73, 1315, 30217]));
        let z = Source::Presentation(Presentation::parse("gens: x").unwrap());
        let zr = growth(&z, 5, Method::Brute, &EnumConfig::default()).unwrap();
        assert_eq!(zr.u, ints(&[1; 5]));
    }

    #[test]
    fn series_route_matches_transitive_recursion() {
        let cfg = EnumConfig::default();
        for src in [
            Source::Genus(1),
            Source::Genus(2),
            Source::Presentation(Presentation::parse("gens: x, t; rels: t x t^-1 x").unwrap()),
            Source::Presentation(Presentation::parse("gens: x; rels: x^2").unwrap()),
        ] {
            let h = hom_sequence(&src, 4, Method::Brute, &cfg).unwrap();
            assert_eq!(u_from_homs(&h).unwrap(), u_by_transitive_actions(&h));
        }
    }

    #[test]
    fn genus_three_round_trip() {
        let u = vec![big("1"), big("63"), big("7924"), big("2757307"), big("2081946006")];
        let v = v_from_u(&u).unwrap();
        assert_eq!(v, vec![big("1"), big("31"), big("2641"), big("689311"), big("416389201")]);
        assert_eq!(u_from_v(&v), u);
    }

    #[test]
    fn product_forms() {
        let rows = surface_table(2, 5).unwrap();
        for row in &rows {
            let v = row.v.as_ref().unwrap();
            assert!(product_form_check(&row.hom_counts, v, 5));
            for i in 0..5 {
                let mut bad = v.clone();
                bad[i] += 1;
                assert!(!product_form_check(&row.hom_counts, &bad, 5));
            }
        }
    }

    #[test]
    fn congruences() {
        let g2 = ints(&[1, 15, 220, 5275, 151086]);
        assert!(congruence_check(&g2, 2, 1).unwrap());
        let g3 = ints(&[1, 63, 7924, 2757307, 2081946006]);
        assert!(congruence_check(&g3, 2, 1).unwrap());
        assert!(congruence_check(&g3, 2, 0).unwrap());
        assert!(!congruence_check(&ints(&[1, 2]), 2, 0).unwrap());
        assert!(matches!(congruence_check(&g2, 2, 2), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(congruence_check(&g2, 7, 0), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), m);
        }
    }

    #[test]
    fn finite_abelianization_has_no_integral_v() {
        let c2 = Source::Presentation(Presentation::parse("gens: x; rels: x^2").unwrap());
        let res = growth(&c2, 4, Method::Brute, &EnumConfig::default()).unwrap();
        // Z/2 has one subgroup of index 1 and one of index 2.
        assert_eq!(res.u, ints(&[1, 1, 0, 0]));
        assert!(!res.infinite_abelianization);
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-20i64..20, 1i64..8).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(tail in proptest::collection::vec(small_rational(), 1..10)) {
            let mut coeffs = vec![r(1, 1)];
            coeffs.extend(tail);
            let f = RationalSeries::new(coeffs);
            prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
        }

        #[test]
        fn mobius_round_trip(v in proptest::collection::vec(-1000i64..1000, 1..30)) {
            let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(v_from_u(&u_from_v(&v)).unwrap(), v);
        }
    }
}
