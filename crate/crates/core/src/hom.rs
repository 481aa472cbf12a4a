//! Brute-force enumeration of homomorphisms into a finite group, their
//! conjugation orbits, twisted fixed sets, and torsor verification for
//! mapping-torus presentations.
//!
//! A homomorphism from a presented group is an assignment of one group
//! element per generator that kills every relator. Assignments are produced
//! in lexicographic order of image indices. The search space is split by the
//! image of the first generator; partitions run on a worker pool and are
//! merged back in partition order, so results never depend on worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fp::{evaluate_word, semidirect_presentation, AutomorphismData, Presentation, Word};
use crate::group::{Elem, FiniteGroup};

/// Default budget in relator-letter evaluations.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub budget: u64,
    pub workers: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            budget: DEFAULT_BUDGET,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    }
}

impl EnumConfig {
    pub fn with_budget(budget: u64) -> Self {
        EnumConfig { budget, ..Default::default() }
    }
}

/// Words of the source group that must land in a fixed conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassConstraint {
    pub words: Vec<Word>,
    pub class_id: usize,
}

impl ClassConstraint {
    pub fn new(words: Vec<Word>, class_id: usize) -> Self {
        ClassConstraint { words, class_id }
    }

    /// Generator `i` must map into the class.
    pub fn generator(i: usize, class_id: usize) -> Self {
        ClassConstraint { words: vec![Word::generator(i)], class_id }
    }
}

/// An enumerated set of assignments, or just its size in count-only mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSet {
    generator_count: usize,
    group_order: usize,
    data: Vec<Elem>,
    count: u64,
    stored: bool,
}

impl HomSet {
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn is_stored(&self) -> bool {
        self.stored
    }

    pub fn get(&self, i: usize) -> &[Elem] {
        let k = self.generator_count;
        &self.data[i * k..(i + 1) * k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        let n = if self.stored { self.count as usize } else { 0 };
        (0..n).map(move |i| self.get(i))
    }

    /// Index of an assignment, using the lexicographic order of storage.
    pub fn position(&self, assignment: &[Elem]) -> Option<usize> {
        if !self.stored {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.count as usize);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(assignment) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    fn from_assignments(generator_count: usize, group_order: usize, data: Vec<Elem>) -> Self {
        let count = if generator_count == 0 { 0 } else { (data.len() / generator_count) as u64 };
        HomSet { generator_count, group_order, data, count, stored: true }
    }

    fn filtered(&self, mut keep: impl FnMut(&[Elem]) -> bool) -> HomSet {
        let mut data = Vec::new();
        let mut count = 0u64;
        for a in self.iter() {
            if keep(a) {
                data.extend_from_slice(a);
                count += 1;
            }
        }
        HomSet { count, data, ..self.clone() }
    }
}

/// Enumeration cost in relator-letter evaluations: `|G|^k × Σ word lengths`,
/// with at least one evaluation per assignment.
pub fn enumeration_cost(p: &Presentation, constraints: &[ClassConstraint], order: usize) -> u128 {
    let letters: usize = p.total_relator_length()
        + constraints.iter().flat_map(|c| c.words.iter()).map(Word::len).sum::<usize>();
    let mut space: u128 = 1;
    for _ in 0..p.generator_count() {
        space = space.saturating_mul(order as u128);
    }
    space.saturating_mul(letters.max(1) as u128)
}

fn check_budget(cost: u128, cfg: &EnumConfig) -> Result<()> {
    if cost > cfg.budget as u128 {
        Err(Error::BudgetExceeded { cost, budget: cfg.budget })
    } else {
        Ok(())
    }
}

enum Check<'w> {
    Relator(&'w Word),
    Constraint(&'w Word, usize),
}

struct Search<'a> {
    group: &'a FiniteGroup,
    k: usize,
    /// `checks[j]` holds every word whose largest generator is `j`.
    checks: Vec<Vec<Check<'a>>>,
    /// Words without generators already failed.
    dead: bool,
}

impl<'a> Search<'a> {
    fn new(p: &'a Presentation, g: &'a FiniteGroup, constraints: &'a [ClassConstraint]) -> Result<Self> {
        let k = p.generator_count();
        let mut checks: Vec<Vec<Check<'a>>> = (0..k).map(|_| Vec::new()).collect();
        let mut dead = false;
        for r in &p.relators {
            if let Some(m) = r.max_generator() {
                checks[m].push(Check::Relator(r));
            }
        }
        for c in constraints {
            if c.class_id >= g.class_count() {
                return Err(Error::InvalidConstraint(format!(
                    "class id {} but the group has {} classes",
                    c.class_id,
                    g.class_count()
                )));
            }
            if c.words.is_empty() {
                return Err(Error::InvalidConstraint("constraint without words".into()));
            }
            for w in &c.words {
                match w.max_generator() {
                    Some(m) if m >= k => {
                        return Err(Error::InvalidConstraint(format!(
                            "constraint word uses generator {m} of {k}"
                        )))
                    }
                    Some(m) => checks[m].push(Check::Constraint(w, c.class_id)),
                    None => dead |= g.class_of(g.identity()) != c.class_id,
                }
            }
        }
        Ok(Search { group: g, k, checks, dead })
    }

    #[inline]
    fn passes(&self, depth: usize, asg: &[Elem]) -> bool {
        let g = self.group;
        self.checks[depth].iter().all(|c| match c {
            Check::Relator(w) => evaluate_word(w, asg, g) == g.identity(),
            Check::Constraint(w, class) => g.class_of(evaluate_word(w, asg, g)) == *class,
        })
    }

    fn dfs(&self, depth: usize, asg: &mut [Elem], visit: &mut impl FnMut(&[Elem])) {
        for x in 0..self.group.order() as Elem {
            asg[depth] = x;
            if self.passes(depth, asg) {
                if depth + 1 == self.k {
                    visit(asg);
                } else {
                    self.dfs(depth + 1, asg, visit);
                }
            }
        }
    }

    fn run_partition(&self, x0: Elem, visit: &mut impl FnMut(&[Elem])) {
        let mut asg = vec![0 as Elem; self.k];
        asg[0] = x0;
        if self.passes(0, &asg) {
            if self.k == 1 {
                visit(&asg);
            } else {
                self.dfs(1, &mut asg, visit);
            }
        }
    }

    fn count(&self, cfg: &EnumConfig) -> u64 {
        if self.dead {
            return 0;
        }
        if self.k == 0 {
            return 1;
        }
        let job = |x0: Elem| {
            let mut n = 0u64;
            self.run_partition(x0, &mut |_| n += 1);
            n
        };
        on_workers(cfg.workers, self.group.order(), job).into_iter().sum()
    }

    fn collect(&self, cfg: &EnumConfig) -> HomSet {
        let order = self.group.order();
        if self.dead {
            return HomSet::from_assignments(self.k, order, vec![]);
        }
        if self.k == 0 {
            return HomSet { generator_count: 0, group_order: order, data: vec![], count: 1, stored: true };
        }
        let job = |x0: Elem| {
            let mut out = Vec::new();
            self.run_partition(x0, &mut |a| out.extend_from_slice(a));
            out
        };
        let data = on_workers(cfg.workers, order, job).concat();
        HomSet::from_assignments(self.k, order, data)
    }
}

fn on_workers<T: Send>(workers: usize, order: usize, job: impl Fn(Elem) -> T + Sync) -> Vec<T> {
    let run = || (0..order as Elem).into_par_iter().map(&job).collect::<Vec<T>>();
    if workers <= 1 || order <= 1 {
        return (0..order as Elem).map(&job).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => (0..order as Elem).map(&job).collect(),
    }
}

pub fn enumerate_homs(p: &Presentation, g: &FiniteGroup, cfg: &EnumConfig) -> Result<HomSet> {
    enumerate_constrained(p, g, &[], cfg)
}

/// Count-only variant of [`enumerate_homs`]; nothing is stored.
pub fn count_homs(p: &Presentation, g: &FiniteGroup, cfg: &EnumConfig) -> Result<u64> {
    count_constrained(p, g, &[], cfg)
}

pub fn enumerate_constrained(
    p: &Presentation,
    g: &FiniteGroup,
    constraints: &[ClassConstraint],
    cfg: &EnumConfig,
) -> Result<HomSet> {
    check_budget(enumeration_cost(p, constraints, g.order()), cfg)?;
    Ok(Search::new(p, g, constraints)?.collect(cfg))
}

pub fn count_constrained(
    p: &Presentation,
    g: &FiniteGroup,
    constraints: &[ClassConstraint],
    cfg: &EnumConfig,
) -> Result<u64> {
    check_budget(enumeration_cost(p, constraints, g.order()), cfg)?;
    Ok(Search::new(p, g, constraints)?.count(cfg))
}

fn conjugate_assignment(g: &FiniteGroup, by: Elem, a: &[Elem], out: &mut Vec<Elem>) {
    out.clear();
    out.extend(a.iter().map(|&x| g.conjugate(by, x)));
}

/// `|Stab_G(φ)|`: elements commuting with every image.
pub fn stabilizer_order(g: &FiniteGroup, a: &[Elem]) -> usize {
    g.elements().filter(|&s| a.iter().all(|&x| g.mul(s, x) == g.mul(x, s))).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Vec<Elem>,
    pub size: usize,
    pub stabilizer_order: usize,
    /// Positions of the orbit's members in the decomposed set.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub group_order: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn total(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }

    /// `Σ 1/|Stab|` over orbits, which equals `#H / |G|`.
    pub fn weighted_count(&self) -> BigRational {
        self.orbits
            .iter()
            .map(|o| BigRational::new(BigInt::from(1), BigInt::from(o.stabilizer_order)))
            .sum()
    }
}

/// Splits a conjugation-closed assignment set into orbits under simultaneous
/// conjugation of all images.
pub fn orbit_decomposition(h: &HomSet, g: &FiniteGroup) -> Result<OrbitDecomposition> {
    if !h.is_stored() {
        return Err(Error::InvalidConstraint("orbit decomposition needs stored assignments".into()));
    }
    let n = h.count() as usize;
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    let mut buf = Vec::with_capacity(h.generator_count());
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let rep = h.get(i);
        let mut members = Vec::new();
        let mut stabilizer = 0;
        for s in g.elements() {
            conjugate_assignment(g, s, rep, &mut buf);
            let j = h.position(&buf).ok_or_else(|| {
                Error::InvalidConstraint("assignment set is not closed under conjugation".into())
            })?;
            if j == i {
                stabilizer += 1;
            }
            if !seen[j] {
                seen[j] = true;
                members.push(j);
            }
        }
        members.sort_unstable();
        let size = members.len();
        assert_eq!(size * stabilizer, g.order(), "orbit-stabilizer failed");
        orbits.push(Orbit { representative: rep.to_vec(), size, stabilizer_order: stabilizer, members });
    }
    Ok(OrbitDecomposition { group_order: g.order(), orbits })
}

/// The images `φ(σ(x_i))` of the twisted generators.
fn twisted_images(sigma: &AutomorphismData, a: &[Elem], g: &FiniteGroup) -> Vec<Elem> {
    sigma.images.iter().map(|w| evaluate_word(w, a, g)).collect()
}

/// Those `φ` for which some `g` satisfies `φ(σ(x_i)) = g φ(x_i) g⁻¹` for all
/// generators. This is the same as `φ∘σ⁻¹ ~ φ`: conjugating by `g⁻¹` turns
/// one relation into the other, so `σ⁻¹` is never needed.
pub fn twisted_fixed_subset(h: &HomSet, sigma: &AutomorphismData, g: &FiniteGroup) -> Result<HomSet> {
    if sigma.images.len() != h.generator_count() {
        return Err(Error::SizeMismatch(format!(
            "sigma has {} images for {} generators",
            sigma.images.len(),
            h.generator_count()
        )));
    }
    if h.generator_count() == 0 {
        return Ok(h.clone());
    }
    Ok(h.filtered(|a| {
        let target = twisted_images(sigma, a, g);
        g.elements().any(|s| a.iter().zip(&target).all(|(&x, &y)| g.conjugate(s, x) == y))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRecord {
    pub assignment: Vec<Elem>,
    pub fiber_size: usize,
    pub stabilizer_order: usize,
    pub twisted_fixed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorReport {
    pub group_order: usize,
    pub upstairs_count: u64,
    pub downstairs_count: u64,
    pub fibers: Vec<FiberRecord>,
    /// Upstairs assignments whose restriction is not a downstairs assignment.
    pub stray_restrictions: u64,
    pub twisted_count: u64,
    pub quotient: BigRational,
    pub orbit_count: usize,
    pub fiber_condition: bool,
    pub support_matches_twisted_set: bool,
    pub mass_identity: bool,
    pub pass: bool,
}

/// Checks that restriction `Hom(Γ ⋊_σ ℤ, G) → Hom_σ(Γ, G)` is a torsor under
/// the stabilizer bundle, optionally under class constraints on words of `Γ`.
pub fn verify_torsor(
    p: &Presentation,
    sigma: &AutomorphismData,
    g: &FiniteGroup,
    constraints: Option<&[ClassConstraint]>,
    cfg: &EnumConfig,
) -> Result<TorsorReport> {
    let constraints = constraints.unwrap_or(&[]);
    let k = p.generator_count();
    let tilde = semidirect_presentation(p, sigma)?;
    for c in constraints {
        if c.words.iter().any(|w| w.max_generator().is_some_and(|m| m >= k)) {
            return Err(Error::InvalidConstraint(
                "constraint words must be words of the base group (no t)".into(),
            ));
        }
    }
    check_budget(enumeration_cost(&tilde, constraints, g.order()), cfg)?;
    check_budget(enumeration_cost(p, constraints, g.order()), cfg)?;

    let all_down = enumerate_homs(p, g, cfg)?;
    for a in all_down.iter() {
        for r in &p.relators {
            if evaluate_word(&sigma.apply(r), a, g) != g.identity() {
                return Err(Error::SigmaInconsistent(format!(
                    "φ∘σ does not kill relator {} at φ = {:?}",
                    r.display(&p.generator_names),
                    a
                )));
            }
        }
    }
    let down = enumerate_constrained(p, g, constraints, cfg)?;
    let up = enumerate_constrained(&tilde, g, constraints, cfg)?;

    let mut fiber_sizes = vec![0usize; down.count() as usize];
    let mut stray = 0u64;
    for a in up.iter() {
        match down.position(&a[..k]) {
            Some(i) => fiber_sizes[i] += 1,
            None => stray += 1,
        }
    }
    let twisted = twisted_fixed_subset(&down, sigma, g)?;
    let fibers: Vec<FiberRecord> = down
        .iter()
        .zip(&fiber_sizes)
        .map(|(a, &fiber_size)| FiberRecord {
            assignment: a.to_vec(),
            fiber_size,
            stabilizer_order: stabilizer_order(g, a),
            twisted_fixed: twisted.position(a).is_some(),
        })
        .collect();
    let orbits = orbit_decomposition(&twisted, g)?;

    let fiber_condition =
        stray == 0 && fibers.iter().all(|f| f.fiber_size == 0 || f.fiber_size == f.stabilizer_order);
    let support_matches_twisted_set = fibers.iter().all(|f| (f.fiber_size > 0) == f.twisted_fixed);
    let stab_mass: u64 = fibers.iter().filter(|f| f.twisted_fixed).map(|f| f.stabilizer_order as u64).sum();
    let mass_identity = stab_mass == up.count()
        && up.count() == (g.order() * orbits.orbits.len()) as u64;
    let quotient = BigRational::new(BigInt::from(up.count()), BigInt::from(g.order()));
    let pass = fiber_condition
        && support_matches_twisted_set
        && mass_identity
        && quotient.is_integer()
        && quotient == BigRational::from_integer(BigInt::from(orbits.orbits.len()));

    Ok(TorsorReport {
        group_order: g.order(),
        upstairs_count: up.count(),
        downstairs_count: down.count(),
        fibers,
        stray_restrictions: stray,
        twisted_count: twisted.count(),
        quotient,
        orbit_count: orbits.orbits.len(),
        fiber_condition,
        support_matches_twisted_set,
        mass_identity,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::{parse_word, surface_presentation};
    use crate::group::{build_group, GroupSpec};

    fn group(s: &str) -> FiniteGroup {
        build_group(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    fn class_with_cycle_type(g: &FiniteGroup, ct: &[usize]) -> usize {
        g.conjugacy_classes()
            .iter()
            .find(|c| g.cycle_type(c.representative).unwrap() == ct)
            .unwrap()
            .id
    }

    #[test]
    fn free_group_counts() {
        let g = group("S3");
        assert_eq!(count_homs(&pres("gens: x, y"), &g, &cfg()).unwrap(), 36);
        assert_eq!(count_homs(&pres("gens: ; rels:"), &g, &cfg()).unwrap(), 1);
    }

    #[test]
    fn commuting_pairs_in_s3() {
        let g = group("S3");
        let h = enumerate_homs(&pres("gens: x, y; rels: [x,y]"), &g, &cfg()).unwrap();
        assert_eq!(h.count(), 18);
        // Brute force over all 36 pairs directly.
        let direct = g
            .elements()
            .flat_map(|x| g.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| g.mul(x, y) == g.mul(y, x))
            .count();
        assert_eq!(direct, 18);
        let mut sorted: Vec<Vec<Elem>> = h.iter().map(<[Elem]>::to_vec).collect();
        sorted.sort();
        assert_eq!(sorted, h.iter().map(<[Elem]>::to_vec).collect::<Vec<_>>());
    }

    #[test]
    fn genus_two_into_s2() {
        assert_eq!(count_homs(&surface_presentation(2), &group("S2"), &cfg()).unwrap(), 16);
    }

    #[test]
    fn constrained_examples() {
        let g = group("S3");
        let three = class_with_cycle_type(&g, &[3]);
        let p = pres("gens: x, y, z; rels: x y z");
        let cs: Vec<_> = (0..3).map(|i| ClassConstraint::generator(i, three)).collect();
        assert_eq!(count_constrained(&p, &g, &cs, &cfg()).unwrap(), 2);

        for n in 2..=5usize {
            let g = group(&format!("S{n}"));
            let cyc = class_with_cycle_type(&g, &[n]);
            let p = pres("gens: x, y; rels: x y");
            let cs = [ClassConstraint::generator(0, cyc), ClassConstraint::generator(1, cyc)];
            let fact: u64 = (1..n as u64).product();
            assert_eq!(count_constrained(&p, &g, &cs, &cfg()).unwrap(), fact);
        }

        let g = group("S3");
        let trans = class_with_cycle_type(&g, &[2, 1]);
        let p = pres("gens: x; rels: x");
        assert_eq!(count_constrained(&p, &g, &[ClassConstraint::generator(0, trans)], &cfg()).unwrap(), 0);
    }

    #[test]
    fn orbit_examples() {
        let g = group("S3");
        let trivial = enumerate_homs(&pres("gens: x; rels: x"), &g, &cfg()).unwrap();
        let d = orbit_decomposition(&trivial, &g).unwrap();
        assert_eq!(d.orbits.len(), 1);
        assert_eq!((d.orbits[0].size, d.orbits[0].stabilizer_order), (1, 6));

        let z = enumerate_homs(&pres("gens: x"), &g, &cfg()).unwrap();
        let d = orbit_decomposition(&z, &g).unwrap();
        let mut stabs: Vec<usize> = d.orbits.iter().map(|o| o.stabilizer_order).collect();
        stabs.sort_unstable();
        assert_eq!(stabs, vec![2, 3, 6]);
        let mass: usize = d.orbits.iter().map(|o| o.size * o.stabilizer_order).sum();
        assert_eq!(mass, 6 * d.orbits.len());
        assert_eq!(d.total() as u64, z.count());
        assert_eq!(d.weighted_count(), BigRational::from_integer(BigInt::from(1)));
    }

    #[test]
    fn twisted_examples() {
        let p = pres("gens: x");
        let inv = AutomorphismData::parse("x -> x^-1", &p.generator_names).unwrap();
        let s3 = group("S3");
        let h = enumerate_homs(&p, &s3, &cfg()).unwrap();
        assert_eq!(twisted_fixed_subset(&h, &AutomorphismData::identity(1), &s3).unwrap(), h);
        assert_eq!(twisted_fixed_subset(&h, &inv, &s3).unwrap().count(), 6);
        let c3 = group("C3");
        let h = enumerate_homs(&p, &c3, &cfg()).unwrap();
        assert_eq!(twisted_fixed_subset(&h, &inv, &c3).unwrap().count(), 1);
    }

    #[test]
    fn torsor_examples() {
        let p = pres("gens: x");
        let r = verify_torsor(&p, &AutomorphismData::identity(1), &group("S3"), None, &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(r.upstairs_count, 18);
        assert_eq!(r.orbit_count, 3);

        let trivial = pres("gens: ; rels:");
        let r = verify_torsor(&trivial, &AutomorphismData::identity(0), &group("S4"), None, &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(r.upstairs_count, 24);
        assert_eq!(r.orbit_count, 1);

        let inv = AutomorphismData::parse("x -> x^-1", &p.generator_names).unwrap();
        let r = verify_torsor(&p, &inv, &group("C3"), None, &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(r.upstairs_count, 3);
    }

    #[test]
    fn torsor_rejects_non_endomorphism() {
        // x -> y sends the relator x^2 to y^2, which is not a consequence.
        let p = pres("gens: x, y; rels: x^2");
        let sigma = AutomorphismData::parse("x -> y", &p.generator_names).unwrap();
        let err = verify_torsor(&p, &sigma, &group("C4"), None, &cfg()).unwrap_err();
        assert!(matches!(err, Error::SigmaInconsistent(_)));
    }

    #[test]
    fn torsor_rejects_constraints_on_t() {
        let p = pres("gens: x");
        let g = group("S3");
        let c = ClassConstraint::new(vec![Word::generator(1)], 0);
        let err = verify_torsor(&p, &AutomorphismData::identity(1), &g, Some(&[c]), &cfg()).unwrap_err();
        assert!(matches!(err, Error::InvalidConstraint(_)));
    }

    #[test]
    fn budget_is_enforced() {
        let g = group("S4");
        let tight = EnumConfig::with_budget(1000);
        match count_homs(&surface_presentation(2), &g, &tight) {
            Err(Error::BudgetExceeded { cost, budget }) => {
                assert_eq!(cost, 24u128.pow(4) * 8);
                assert_eq!(budget, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let g = group("S4");
        let p = pres("gens: x, y; rels: x^2 y^3, (x y)^4");
        let one = enumerate_homs(&p, &g, &EnumConfig { workers: 1, ..cfg() }).unwrap();
        let many = enumerate_homs(&p, &g, &EnumConfig { workers: 4, ..cfg() }).unwrap();
        assert_eq!(one, many);
        // (2,3,4) triangle group is S4 itself: every surjection is an automorphism.
        assert!(one.count() > 0);
    }

    #[test]
    fn constraint_words_are_respected() {
        let g = group("S3");
        let p = pres("gens: x, y");
        let w = parse_word("x y", &p.generator_names).unwrap();
        let three = class_with_cycle_type(&g, &[3]);
        let h = enumerate_constrained(&p, &g, &[ClassConstraint::new(vec![w], three)], &cfg()).unwrap();
        assert!(h.iter().all(|a| g.cycle_type(g.mul(a[0], a[1])).unwrap() == vec![3]));
        // 2 elements of the class, each with 6 factorizations.
        assert_eq!(h.count(), 12);
    }
}
