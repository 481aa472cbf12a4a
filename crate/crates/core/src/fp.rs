//! Words, finite presentations, abelianization and mapping-torus presentations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    /// Signed 1-based form: `+i` for generator `i-1`, `-i` for its inverse.
    pub fn signed(self) -> i64 {
        let i = self.generator as i64 + 1;
        if self.inverse {
            -i
        } else {
            i
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word { letters: vec![Letter::new(i, false)] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Builds a word from signed 1-based generator indices.
    pub fn from_signed(signed: &[i64]) -> Self {
        Word::from_letters(signed.iter().map(|&s| {
            assert!(s != 0, "letter 0 is not a generator");
            Letter::new(s.unsigned_abs() as usize - 1, s < 0)
        }))
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverted()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// `u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Replaces each generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut w = Word::empty();
        for l in &self.letters {
            let img = &images[l.generator];
            w = w.concat(&if l.inverse { img.inverse() } else { img.clone() });
        }
        w
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let letters = self.word.letters();
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == letters[i] {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self
                .names
                .get(letters[i].generator)
                .cloned()
                .unwrap_or_else(|| format!("g{}", letters[i].generator));
            let exp = if letters[i].inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Left-to-right product of the images of the word's letters.
pub fn evaluate_word(w: &Word, assignment: &[Elem], g: &FiniteGroup) -> Elem {
    w.letters().iter().fold(g.identity(), |acc, l| {
        let x = assignment[l.generator];
        g.mul(acc, if l.inverse { g.inv(x) } else { x })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let k = generator_names.len();
        for r in &relators {
            if let Some(m) = r.max_generator() {
                if m >= k {
                    return Err(Error::SizeMismatch(format!(
                        "relator uses generator {m} but only {k} generators exist"
                    )));
                }
            }
        }
        let relators = relators.into_iter().filter(|r| !r.is_empty()).collect();
        Ok(Presentation { generator_names, relators })
    }

    /// Free group on the given names.
    pub fn free(names: &[&str]) -> Self {
        Presentation { generator_names: names.iter().map(|s| s.to_string()).collect(), relators: vec![] }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Parses `gens: x, y; rels: [x,y], x^2 y^-3`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (gens_part, rels_part) = match text.split_once(';') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (text, ""),
        };
        let gens = gens_part
            .strip_prefix("gens")
            .and_then(|s| s.trim_start().strip_prefix(':'))
            .ok_or_else(|| Error::Parse("presentation must start with `gens:`".into()))?;
        let names: Vec<String> = gens
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::Parse(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate generator `{n}`")));
            }
        }
        let relators = if rels_part.is_empty() {
            vec![]
        } else {
            let body = rels_part
                .strip_prefix("rels")
                .and_then(|s| s.trim_start().strip_prefix(':'))
                .ok_or_else(|| Error::Parse("expected `rels:` after `;`".into()))?;
            parse_word_list(body, &names)?
        };
        Presentation::new(names, relators)
    }

    pub fn display(&self) -> String {
        let rels: Vec<String> =
            self.relators.iter().map(|r| r.display(&self.generator_names).to_string()).collect();
        let gens = self.generator_names.join(", ");
        if rels.is_empty() {
            format!("gens: {gens}")
        } else {
            format!("gens: {gens}; rels: {}", rels.join(", "))
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Images of each generator under an endomorphism, given as words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismData {
    pub images: Vec<Word>,
}

impl AutomorphismData {
    pub fn identity(generator_count: usize) -> Self {
        AutomorphismData { images: (0..generator_count).map(Word::generator).collect() }
    }

    /// Parses `x -> x^-1; y -> x y`. Generators not mentioned map to themselves.
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let mut data = AutomorphismData::identity(names.len());
        for clause in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (lhs, rhs) = clause
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `gen -> word` in `{clause}`")))?;
            let lhs = lhs.trim();
            let i = names
                .iter()
                .position(|n| n == lhs)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{lhs}` in sigma")))?;
            data.images[i] = parse_word(rhs, names)?;
        }
        Ok(data)
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationInfo {
    pub free_rank: usize,
    pub torsion_divisors: Vec<BigInt>,
}

impl AbelianizationInfo {
    pub fn is_infinite(&self) -> bool {
        self.free_rank >= 1
    }
}

/// Entry `(j, i)` is the exponent sum of generator `i` in relator `j`.
pub fn exponent_matrix(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; p.generator_count()];
            for l in r.letters() {
                row[l.generator] += if l.inverse { -1 } else { 1 };
            }
            row
        })
        .collect()
}

/// Diagonal of the Smith normal form (non-negative, each dividing the next),
/// by row and column reduction with the smallest nonzero entry as pivot.
pub fn smith_diagonal(matrix: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> =
        matrix.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..cols {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..rows {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the remaining block; otherwise fold a bad row in.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

pub fn abelianization(p: &Presentation) -> AbelianizationInfo {
    let diag = smith_diagonal(&exponent_matrix(p), p.generator_count());
    let rank = diag.len();
    AbelianizationInfo {
        free_rank: p.generator_count() - rank,
        torsion_divisors: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// `⟨x1, y1, …, xg, yg | [x1,y1]⋯[xg,yg]⟩`.
pub fn surface_presentation(genus: usize) -> Presentation {
    let mut names = Vec::new();
    let mut relator = Word::empty();
    for i in 0..genus {
        names.push(format!("x{}", i + 1));
        names.push(format!("y{}", i + 1));
        relator = relator.concat(&Word::commutator(&Word::generator(2 * i), &Word::generator(2 * i + 1)));
    }
    Presentation::new(names, vec![relator]).expect("surface relator is well formed")
}

/// Mapping torus `Γ ⋊_σ ℤ`: adds a generator `t` and relators `t x t⁻¹ σ(x)⁻¹`.
pub fn semidirect_presentation(p: &Presentation, sigma: &AutomorphismData) -> Result<Presentation> {
    let k = p.generator_count();
    if sigma.images.len() != k {
        return Err(Error::SizeMismatch(format!(
            "sigma has {} images for {k} generators",
            sigma.images.len()
        )));
    }
    if let Some(m) = sigma.images.iter().filter_map(Word::max_generator).max() {
        if m >= k {
            return Err(Error::SizeMismatch(format!("sigma image uses generator {m} of {k}")));
        }
    }
    let mut t_name = "t".to_string();
    while p.generator_names.contains(&t_name) {
        t_name.push('_');
    }
    let mut names = p.generator_names.clone();
    names.push(t_name);
    let t = Word::generator(k);
    let mut relators = p.relators.clone();
    for (i, image) in sigma.images.iter().enumerate() {
        relators.push(t.concat(&Word::generator(i)).concat(&t.inverse()).concat(&image.inverse()));
    }
    Ok(Presentation { generator_names: names, relators })
}

// Word grammar:
//   list   := word (',' word)*
//   word   := factor*
//   factor := atom ('^' int)?
//   atom   := name | '1' | '[' word ',' word ']' | '(' word ')'

pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let mut parser = Parser::new(text, names);
    let w = parser.word()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(w)
}

fn parse_word_list(text: &str, names: &[String]) -> Result<Vec<Word>> {
    let mut parser = Parser::new(text, names);
    let mut words = vec![parser.word()?];
    loop {
        parser.skip_ws();
        match parser.peek() {
            None => break,
            Some(',') => {
                parser.pos += 1;
                words.push(parser.word()?);
            }
            Some(_) => return Err(parser.error("expected `,` between relators")),
        }
    }
    Ok(words)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(text: &str, names: &'a [String]) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, names }
    }

    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in `{text}`", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace() || c == '*') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(',') | Some(']') | Some(')') => return Ok(w),
                _ => {
                    let f = self.factor()?;
                    w = w.concat(&f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if matches!(self.peek(), Some('-') | Some('+')) {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let k: i64 = digits.parse().map_err(|_| self.error("expected integer exponent"))?;
            Ok(atom.pow(k))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                if self.peek() != Some(',') {
                    return Err(self.error("expected `,` in commutator"));
                }
                self.pos += 1;
                let v = self.word()?;
                if self.peek() != Some(']') {
                    return Err(self.error("expected `]`"));
                }
                self.pos += 1;
                Ok(Word::commutator(&u, &v))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                self.split_identifier(&ident).ok_or_else(|| {
                    self.pos = start;
                    self.error(&format!("unknown generator `{ident}`"))
                })
            }
            _ => Err(self.error("expected a generator, `[`, `(` or `1`")),
        }
    }

    /// Resolves an identifier as one generator name, or as a run of names
    /// (`xy` with generators `x`, `y`), preferring longest matches.
    fn split_identifier(&self, ident: &str) -> Option<Word> {
        if let Some(i) = self.names.iter().position(|n| n == ident) {
            return Some(Word::generator(i));
        }
        if ident.is_empty() {
            return Some(Word::empty());
        }
        let mut candidates: Vec<(usize, &String)> =
            self.names.iter().enumerate().filter(|(_, n)| ident.starts_with(n.as_str())).collect();
        candidates.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
        for (i, n) in candidates {
            if let Some(rest) = self.split_identifier(&ident[n.len()..]) {
                return Some(Word::generator(i).concat(&rest));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_reduction_and_sugar() {
        let n = names(&["x", "y"]);
        assert!(parse_word("x x^-1", &n).unwrap().is_empty());
        assert_eq!(parse_word("[x,y]", &n).unwrap().signed(), vec![1, 2, -1, -2]);
        assert_eq!(parse_word("x^-2 y", &n).unwrap().signed(), vec![-1, -1, 2]);
        assert_eq!(parse_word("(x y)^2", &n).unwrap().signed(), vec![1, 2, 1, 2]);
        assert_eq!(parse_word("xy", &n).unwrap().signed(), vec![1, 2]);
        assert_eq!(parse_word("1", &n).unwrap(), Word::empty());
    }

    #[test]
    fn parse_errors() {
        let n = names(&["x", "y"]);
        assert!(matches!(parse_word("z", &n), Err(Error::Parse(_))));
        assert!(matches!(parse_word("[x y]", &n), Err(Error::Parse(_))));
        assert!(matches!(parse_word("x^", &n), Err(Error::Parse(_))));
        assert!(Presentation::parse("x, y; rels: x").is_err());
        assert!(Presentation::parse("gens: x, x").is_err());
    }

    #[test]
    fn presentation_grammar() {
        let p = Presentation::parse("gens: x, y; rels: [x,y], x^2 y^-3").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.relators[1].signed(), vec![1, 1, -2, -2, -2]);
        let empty = Presentation::parse("gens: x; rels:").unwrap();
        assert!(empty.relators.is_empty());
        let trivial = Presentation::parse("gens: ; rels:").unwrap();
        assert_eq!(trivial.generator_count(), 0);
        let reparsed = Presentation::parse(&p.display()).unwrap();
        assert_eq!(reparsed, p);
    }

    #[test]
    fn evaluation() {
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let n = names(&["x", "y"]);
        assert_eq!(evaluate_word(&Word::empty(), &[1, 2], &g), g.identity());
        let c = parse_word("[x,y]", &n).unwrap();
        let t = g.parse_element("(1 2)").unwrap();
        let r = g.parse_element("(1 2 3)").unwrap();
        assert_eq!(evaluate_word(&c, &[r, r], &g), g.identity());
        let v = evaluate_word(&c, &[t, r], &g);
        assert_eq!(g.cycle_type(v).unwrap(), vec![3]);
    }

    #[test]
    fn exponent_matrices() {
        assert_eq!(exponent_matrix(&surface_presentation(2)), vec![vec![0; 4]]);
        let p = Presentation::parse("gens: x; rels: x^2").unwrap();
        assert_eq!(exponent_matrix(&p), vec![vec![2]]);
        let bs = Presentation::parse("gens: x, y; rels: x^-2 y x^3 y^-1").unwrap();
        assert_eq!(exponent_matrix(&bs), vec![vec![1, 0]]);
    }

    #[test]
    fn abelianizations() {
        for g in 0..4 {
            let a = abelianization(&surface_presentation(g));
            assert_eq!(a.free_rank, 2 * g);
            assert!(a.torsion_divisors.is_empty());
        }
        let c2 = abelianization(&Presentation::parse("gens: x; rels: x^2").unwrap());
        assert_eq!((c2.free_rank, c2.torsion_divisors.clone()), (0, vec![BigInt::from(2)]));
        let bs = abelianization(&Presentation::parse("gens: x, y; rels: x^-2 y x y^-1").unwrap());
        assert_eq!(bs.free_rank, 1);
        assert!(bs.torsion_divisors.is_empty());
        // Z^3 / <(2,4,4), (-6,6,12), (10,-4,-16)> = Z/2 + Z/6 + Z/12
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let d = smith_diagonal(&m, 3);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn surfaces() {
        assert_eq!(surface_presentation(0).generator_count(), 0);
        assert!(surface_presentation(0).relators.is_empty());
        let s2 = surface_presentation(2);
        assert_eq!(s2.generator_count(), 4);
        assert_eq!(s2.relators[0].len(), 8);
    }

    #[test]
    fn mapping_tori() {
        let p = Presentation::parse("gens: x; rels:").unwrap();
        let id = semidirect_presentation(&p, &AutomorphismData::identity(1)).unwrap();
        assert_eq!(id.generator_names, names(&["x", "t"]));
        assert_eq!(id.relators[0].signed(), vec![2, 1, -2, -1]);
        let flip = AutomorphismData::parse("x -> x^-1", &p.generator_names).unwrap();
        let klein = semidirect_presentation(&p, &flip).unwrap();
        assert_eq!(klein.relators[0].signed(), vec![2, 1, -2, 1]);
        assert_eq!(abelianization(&klein).free_rank, 1);
        assert_eq!(abelianization(&klein).torsion_divisors, vec![BigInt::from(2)]);
        let bad = AutomorphismData { images: vec![] };
        assert!(matches!(semidirect_presentation(&p, &bad), Err(Error::SizeMismatch(_))));
        let s2 = surface_presentation(2);
        let tor = semidirect_presentation(&s2, &AutomorphismData::identity(4)).unwrap();
        assert_eq!(tor.relators.len(), 1 + 4);
    }

    #[test]
    fn abelianization_ignores_consequences() {
        // Appending a conjugate of an existing relator, or a product of two.
        let p = Presentation::parse("gens: x, y; rels: x^4 y^2, [x,y]").unwrap();
        let a = abelianization(&p);
        let r = &p.relators[0];
        let conj = Word::generator(1).concat(r).concat(&Word::generator(1).inverse());
        let mut q = p.clone();
        q.relators.push(conj.concat(&p.relators[1]));
        assert_eq!(abelianization(&q), a);
    }
}
