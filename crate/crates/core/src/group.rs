//! Concrete finite groups on dense element indices.
//!
//! Every group stores its elements as indices `0..order`. Small groups get a
//! full multiplication table; larger permutation and matrix groups multiply on
//! the fly through their concrete carrier.
//!
//! Permutations compose left to right: `mul(f, g)` applies `f` first, then
//! `g`, so `(f·g)(i) = g(f(i))`.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Elem = u32;

pub const DEFAULT_TABLE_BOUND: usize = 2048;
pub const DEFAULT_ASSOCIATIVITY_BOUND: usize = 512;
pub const MAX_SYMMETRIC_DEGREE: usize = 10;
pub const MAX_MATRIX_PRIME: u32 = 61;
pub const MAX_CYCLIC_ORDER: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Cyclic(usize),
    Sl2(u32),
    Psl2(u32),
    Cayley(PathBuf),
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `S<n> | C<n> | SL2_<p> | PSL2_<p> | cayley:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpec(format!("unrecognized group `{s}`"));
        if let Some(path) = s.strip_prefix("cayley:") {
            return Ok(GroupSpec::Cayley(PathBuf::from(path)));
        }
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        if let Some(p) = s.strip_prefix("PSL2_") {
            Ok(GroupSpec::Psl2(num(p)? as u32))
        } else if let Some(p) = s.strip_prefix("SL2_") {
            Ok(GroupSpec::Sl2(num(p)? as u32))
        } else if let Some(n) = s.strip_prefix('S') {
            Ok(GroupSpec::Symmetric(num(n)? as usize))
        } else if let Some(n) = s.strip_prefix('C') {
            Ok(GroupSpec::Cyclic(num(n)? as usize))
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Sl2(p) => write!(f, "SL2_{p}"),
            GroupSpec::Psl2(p) => write!(f, "PSL2_{p}"),
            GroupSpec::Cayley(path) => write!(f, "cayley:{}", path.display()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Groups up to this order get a precomputed multiplication table.
    pub table_bound: usize,
    /// Run the O(n³) associativity check on Cayley tables up to this order.
    pub associativity_bound: usize,
    pub check_associativity: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            table_bound: DEFAULT_TABLE_BOUND,
            associativity_bound: DEFAULT_ASSOCIATIVITY_BOUND,
            check_associativity: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub id: usize,
    pub representative: Elem,
    pub size: usize,
    pub members: Vec<Elem>,
    pub centralizer_order: usize,
}

#[derive(Debug)]
struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

#[derive(Debug)]
enum Carrier {
    Cyclic,
    /// Flattened point images, `degree` entries per element, in lexicographic order.
    Perm { degree: usize, points: Vec<u8> },
    Matrix {
        p: u32,
        projective: bool,
        mats: Vec<[u32; 4]>,
        index: HashMap<[u32; 4], Elem>,
    },
    Abstract,
}

#[derive(Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    identity: Elem,
    inverse: Vec<Elem>,
    table: Option<Vec<Elem>>,
    carrier: Carrier,
    classes: OnceLock<ClassData>,
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    build_group_with(spec, &BuildOptions::default())
}

pub fn build_group_with(spec: &GroupSpec, opts: &BuildOptions) -> Result<FiniteGroup> {
    let group = match spec {
        GroupSpec::Symmetric(n) => symmetric(*n, opts)?,
        GroupSpec::Cyclic(n) => cyclic(*n)?,
        GroupSpec::Sl2(p) => matrix_group(*p, false, opts)?,
        GroupSpec::Psl2(p) => matrix_group(*p, true, opts)?,
        GroupSpec::Cayley(path) => return load_cayley(path, opts),
    };
    Ok(FiniteGroup { name: spec.to_string(), ..group })
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_CYCLIC_ORDER {
        return Err(Error::InvalidSpec(format!("cyclic order {n} out of range 1..={MAX_CYCLIC_ORDER}")));
    }
    let inverse = (0..n).map(|i| ((n - i) % n) as Elem).collect();
    Ok(FiniteGroup {
        name: format!("C{n}"),
        order: n,
        identity: 0,
        inverse,
        table: None,
        carrier: Carrier::Cyclic,
        classes: OnceLock::new(),
    })
}

fn symmetric(n: usize, opts: &BuildOptions) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::InvalidSpec(format!(
            "symmetric degree {n} out of range 1..={MAX_SYMMETRIC_DEGREE}"
        )));
    }
    let mut current: Vec<u8> = (0..n as u8).collect();
    let mut points = Vec::new();
    loop {
        points.extend_from_slice(&current);
        if !next_permutation(&mut current) {
            break;
        }
    }
    let order = points.len() / n;
    let carrier = Carrier::Perm { degree: n, points };
    finish(format!("S{n}"), order, 0, carrier, opts)
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic rank of a permutation of `0..n`.
fn perm_rank(perm: &[u8]) -> Elem {
    let n = perm.len();
    let mut rank: u64 = 0;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&q| q < perm[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller_after;
    }
    rank as Elem
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn normalize_sign(m: [u32; 4], p: u32) -> [u32; 4] {
    let first = m.iter().copied().find(|&x| x != 0).unwrap_or(0);
    if first > (p - 1) / 2 {
        m.map(|x| (p - x) % p)
    } else {
        m
    }
}

fn mat_mul(a: &[u32; 4], b: &[u32; 4], p: u32) -> [u32; 4] {
    let p = p as u64;
    let [a0, a1, a2, a3] = a.map(u64::from);
    let [b0, b1, b2, b3] = b.map(u64::from);
    [
        ((a0 * b0 + a1 * b2) % p) as u32,
        ((a0 * b1 + a1 * b3) % p) as u32,
        ((a2 * b0 + a3 * b2) % p) as u32,
        ((a2 * b1 + a3 * b3) % p) as u32,
    ]
}

fn matrix_group(p: u32, projective: bool, opts: &BuildOptions) -> Result<FiniteGroup> {
    if p <= 2 || !is_prime(p as u64) || p > MAX_MATRIX_PRIME {
        return Err(Error::InvalidSpec(format!(
            "SL2/PSL2 need an odd prime p <= {MAX_MATRIX_PRIME}, got {p}"
        )));
    }
    let mut mats = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = (a as u64 * d as u64 + (p as u64 - b as u64) * c as u64) % p as u64;
                    if det == 1 {
                        let m = [a, b, c, d];
                        if !projective || normalize_sign(m, p) == m {
                            mats.push(m);
                        }
                    }
                }
            }
        }
    }
    let index: HashMap<[u32; 4], Elem> =
        mats.iter().enumerate().map(|(i, m)| (*m, i as Elem)).collect();
    let identity = index[&[1, 0, 0, 1]];
    let order = mats.len();
    let carrier = Carrier::Matrix { p, projective, mats, index };
    let name = if projective { format!("PSL2_{p}") } else { format!("SL2_{p}") };
    finish(name, order, identity, carrier, opts)
}

fn finish(
    name: String,
    order: usize,
    identity: Elem,
    carrier: Carrier,
    opts: &BuildOptions,
) -> Result<FiniteGroup> {
    let mut group = FiniteGroup {
        name,
        order,
        identity,
        inverse: Vec::new(),
        table: None,
        carrier,
        classes: OnceLock::new(),
    };
    group.inverse = (0..order as Elem).map(|x| group.carrier_inverse(x)).collect();
    if order <= opts.table_bound {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order as Elem {
            for b in 0..order as Elem {
                table.push(group.carrier_mul(a, b));
            }
        }
        group.table = Some(table);
    }
    Ok(group)
}

pub fn load_cayley(path: &Path, opts: &BuildOptions) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    let mut group = parse_cayley(&text, opts)?;
    group.name = format!("cayley:{}", path.display());
    Ok(group)
}

/// Parses the Cayley text format: the order on line 1, then one row of
/// products per element. Element 0 must be the identity.
pub fn parse_cayley(text: &str, opts: &BuildOptions) -> Result<FiniteGroup> {
    let fail = |m: String| Error::CayleyValidationFailed(m);
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| fail("empty file".into()))?
        .parse()
        .map_err(|_| fail("first line must be the order".into()))?;
    if order == 0 {
        return Err(fail("order must be positive".into()));
    }
    let mut table = Vec::with_capacity(order * order);
    for row in 0..order {
        let line = lines.next().ok_or_else(|| fail(format!("missing row {row}")))?;
        let entries: Vec<Elem> = line
            .split_whitespace()
            .map(|t| t.parse::<Elem>().map_err(|_| fail(format!("bad entry `{t}` in row {row}"))))
            .collect::<Result<_>>()?;
        if entries.len() != order {
            return Err(fail(format!("row {row} has {} entries, expected {order}", entries.len())));
        }
        if let Some(&e) = entries.iter().find(|&&e| e as usize >= order) {
            return Err(fail(format!("entry {e} in row {row} out of range")));
        }
        table.extend(entries);
    }
    if lines.next().is_some() {
        return Err(fail("trailing rows after the table".into()));
    }
    let at = |a: usize, b: usize| table[a * order + b] as usize;
    for x in 0..order {
        if at(0, x) != x || at(x, 0) != x {
            return Err(fail(format!("element 0 is not an identity for {x}")));
        }
    }
    let mut inverse = vec![0 as Elem; order];
    for x in 0..order {
        let y = (0..order)
            .find(|&y| at(x, y) == 0)
            .ok_or_else(|| fail(format!("element {x} has no right inverse")))?;
        if at(y, x) != 0 {
            return Err(fail(format!("element {x} has no two-sided inverse")));
        }
        inverse[x] = y as Elem;
    }
    if opts.check_associativity && order <= opts.associativity_bound {
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(fail(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
    }
    Ok(FiniteGroup {
        name: "cayley".into(),
        order,
        identity: 0,
        inverse,
        table: Some(table),
        carrier: Carrier::Abstract,
        classes: OnceLock::new(),
    })
}

impl FiniteGroup {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.carrier_mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inverse[g as usize])
    }

    /// `x^m`; `x^0` is the identity and negative powers go through the inverse.
    pub fn pow(&self, x: Elem, m: i64) -> Elem {
        let mut base = if m < 0 { self.inv(x) } else { x };
        let mut e = m.unsigned_abs();
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn carrier_mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.carrier {
            Carrier::Cyclic => ((a as usize + b as usize) % self.order) as Elem,
            Carrier::Perm { degree, points } => {
                let n = *degree;
                let f = &points[a as usize * n..a as usize * n + n];
                let g = &points[b as usize * n..b as usize * n + n];
                let mut composed = [0u8; MAX_SYMMETRIC_DEGREE];
                for i in 0..n {
                    composed[i] = g[f[i] as usize];
                }
                perm_rank(&composed[..n])
            }
            Carrier::Matrix { p, projective, mats, index } => {
                let mut m = mat_mul(&mats[a as usize], &mats[b as usize], *p);
                if *projective {
                    m = normalize_sign(m, *p);
                }
                index[&m]
            }
            Carrier::Abstract => unreachable!("abstract groups always carry a table"),
        }
    }

    fn carrier_inverse(&self, a: Elem) -> Elem {
        match &self.carrier {
            Carrier::Cyclic => ((self.order - a as usize) % self.order) as Elem,
            Carrier::Perm { degree, points } => {
                let n = *degree;
                let f = &points[a as usize * n..a as usize * n + n];
                let mut inv = [0u8; MAX_SYMMETRIC_DEGREE];
                for i in 0..n {
                    inv[f[i] as usize] = i as u8;
                }
                perm_rank(&inv[..n])
            }
            Carrier::Matrix { p, projective, mats, index } => {
                let [a0, a1, a2, a3] = mats[a as usize];
                let mut m = [a3, (p - a1) % p, (p - a2) % p, a0];
                if *projective {
                    m = normalize_sign(m, *p);
                }
                index[&m]
            }
            Carrier::Abstract => unreachable!("abstract groups compute inverses at load"),
        }
    }

    /// Point images of a permutation element (0-based), if this is a symmetric group.
    pub fn permutation(&self, x: Elem) -> Option<&[u8]> {
        match &self.carrier {
            Carrier::Perm { degree, points } => {
                let n = *degree;
                Some(&points[x as usize * n..x as usize * n + n])
            }
            _ => None,
        }
    }

    /// Cycle type (descending, fixed points included) of a permutation element.
    pub fn cycle_type(&self, x: Elem) -> Option<Vec<usize>> {
        let perm = self.permutation(x)?;
        let mut seen = vec![false; perm.len()];
        let mut lengths = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Some(lengths)
    }

    /// Entries `[a, b, c, d]` of a matrix element.
    pub fn matrix(&self, x: Elem) -> Option<[u32; 4]> {
        match &self.carrier {
            Carrier::Matrix { mats, .. } => Some(mats[x as usize]),
            _ => None,
        }
    }

    /// Index of a matrix element, normalizing the sign for PSL2.
    pub fn matrix_element(&self, m: [u32; 4]) -> Option<Elem> {
        match &self.carrier {
            Carrier::Matrix { p, projective, index, .. } => {
                let mut m = m.map(|v| v % p);
                if *projective {
                    m = normalize_sign(m, *p);
                }
                index.get(&m).copied()
            }
            _ => None,
        }
    }

    pub fn field_prime(&self) -> Option<u32> {
        match &self.carrier {
            Carrier::Matrix { p, .. } => Some(*p),
            _ => None,
        }
    }

    pub fn label(&self, x: Elem) -> String {
        match &self.carrier {
            Carrier::Cyclic => format!("g^{x}"),
            Carrier::Perm { .. } => {
                let perm = self.permutation(x).expect("perm carrier");
                let mut seen = vec![false; perm.len()];
                let mut out = String::new();
                for start in 0..perm.len() {
                    if seen[start] || perm[start] as usize == start {
                        continue;
                    }
                    let mut cycle = Vec::new();
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        cycle.push((i + 1).to_string());
                        i = perm[i] as usize;
                    }
                    out.push('(');
                    out.push_str(&cycle.join(" "));
                    out.push(')');
                }
                if out.is_empty() {
                    "()".into()
                } else {
                    out
                }
            }
            Carrier::Matrix { mats, .. } => {
                let [a, b, c, d] = mats[x as usize];
                format!("[[{a},{b}],[{c},{d}]]")
            }
            Carrier::Abstract => format!("e{x}"),
        }
    }

    /// Finds an element by its label, ignoring whitespace.
    pub fn parse_element(&self, text: &str) -> Option<Elem> {
        let squash = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        let wanted = squash(text);
        self.elements().find(|&x| squash(&self.label(x)) == wanted)
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| {
            let mut class_of = vec![u32::MAX; self.order];
            let mut classes = Vec::new();
            for x in self.elements() {
                if class_of[x as usize] != u32::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = Vec::new();
                for g in self.elements() {
                    let y = self.conjugate(g, x);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = id as u32;
                        members.push(y);
                    }
                }
                members.sort_unstable();
                let size = members.len();
                classes.push(ConjugacyClass {
                    id,
                    representative: x,
                    size,
                    members,
                    centralizer_order: self.order / size,
                });
            }
            ClassData { classes, class_of }
        })
    }

    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.class_data().classes
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_data().class_of[x as usize] as usize
    }

    pub fn class_count(&self) -> usize {
        self.conjugacy_classes().len()
    }

    /// Elements commuting with `x`.
    pub fn centralizer(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&g| self.mul(g, x) == self.mul(x, g)).collect()
    }

    /// Maps each class id to the class of the `m`-th powers of its members.
    pub fn power_class_map(&self, m: i64) -> Vec<usize> {
        self.conjugacy_classes()
            .iter()
            .map(|c| {
                let target = self.class_of(self.pow(c.representative, m));
                if let Some(&other) = c.members.last() {
                    assert_eq!(
                        self.class_of(self.pow(other, m)),
                        target,
                        "power map not constant on class {}",
                        c.id
                    );
                }
                target
            })
            .collect()
    }

    /// Checks identity, inverse and associativity laws. Exhaustive over all
    /// triples up to `exhaustive_bound`, otherwise over a strided sample.
    pub fn check_axioms(&self, exhaustive_bound: usize) -> std::result::Result<(), String> {
        let e = self.identity;
        for x in self.elements() {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(format!("identity law fails at {x}"));
            }
            if self.mul(x, self.inv(x)) != e || self.mul(self.inv(x), x) != e {
                return Err(format!("inverse law fails at {x}"));
            }
        }
        let sample: Vec<Elem> = if self.order <= exhaustive_bound {
            self.elements().collect()
        } else {
            let stride = (self.order / 64).max(1);
            self.elements().step_by(stride).collect()
        };
        for &a in &sample {
            for &b in &sample {
                let ab = self.mul(a, b);
                for &c in &sample {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }
}
