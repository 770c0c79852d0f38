//! Words in free groups, finitely presented groups and the line-based
//! presentation file format.
//!
//! Words are always stored freely reduced. Relators of a [`Presentation`] are
//! additionally cyclically reduced at construction; the text they were parsed
//! from is kept alongside for display.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the total number of letters a parsed file may expand to.
pub const DEFAULT_LETTER_CAP: usize = 1_000_000;

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen: gen as u32, inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    #[inline]
    pub fn gen(self) -> usize {
        self.gen as usize
    }

    #[inline]
    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// Column index in a coset table: `2·gen` for the generator, `2·gen + 1`
    /// for its inverse.
    #[inline]
    pub fn column(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    #[inline]
    pub fn from_column(col: usize) -> Self {
        Letter::new(col / 2, col % 2 == 1)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word. Ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

/// Cancel adjacent inverse pairs.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        free_reduce(raw)
    }

    pub fn generator(gen: usize) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// `gen^exp`.
    pub fn power_of(gen: usize, exp: i64) -> Self {
        let l = Letter::new(gen, exp < 0);
        Word(vec![l; exp.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `u⁻¹ · self · u`.
    pub fn conjugate(&self, u: &Word) -> Word {
        u.inverse().concat(self).concat(u)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Strip matching letters from both ends; the result is a cyclic
    /// conjugate that is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let w = &self.0;
        let (mut i, mut j) = (0usize, w.len());
        while j >= i + 2 && w[i] == w[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inv()
    }

    /// Cyclic rotation starting at letter `k`. Only meaningful on cyclically
    /// reduced words, for which the result is again reduced.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut sums = vec![0i64; ngens];
        for l in &self.0 {
            sums[l.gen()] += l.sign();
        }
        sums
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen()).max()
    }

    pub fn columns(&self) -> Vec<usize> {
        self.0.iter().map(|l| l.column()).collect()
    }

    /// Render with `name^k` tokens, collapsing runs; the identity is `1`.
    pub fn display<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let name = names.get(l.gen()).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("g{}", l.gen));
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                tokens.push(name);
            } else {
                tokens.push(format!("{name}^{exp}"));
            }
            i += run;
        }
        tokens.join(" ")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_generator().unwrap_or(0)).map(|g| format!("x{g}")).collect();
        write!(f, "Word({})", self.display(&names))
    }
}

/// A finitely presented group. The generator list may be empty (the
/// trivial group), which only the file parser rejects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    #[serde(default)]
    relator_text: Vec<String>,
}

/// Generators of a subgroup, or of a normal closure when `normal` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub generators: Vec<Word>,
    pub normal: bool,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Word>) -> Self {
        SubgroupSpec { generators, normal: false }
    }

    pub fn normal_closure(generators: Vec<Word>) -> Self {
        SubgroupSpec { generators, normal: true }
    }

    pub fn trivial() -> Self {
        SubgroupSpec::default()
    }

    pub fn canonical_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut s = String::from(if self.normal { "normal" } else { "plain" });
        for g in &self.generators {
            s.push_str(" [");
            s.push_str(&g.display(names));
            s.push(']');
        }
        s
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("relator {index} references generator {gen} but only {ngens} exist")]
    GeneratorOutOfRange { index: usize, gen: usize, ngens: usize },
}

impl Presentation {
    pub fn new<S: Into<String>>(names: Vec<S>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(PresentationError::InvalidName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(PresentationError::DuplicateGenerator(n.clone()));
            }
        }
        let ngens = names.len();
        let mut rels = Vec::new();
        let mut text = Vec::new();
        for (index, r) in relators.into_iter().enumerate() {
            if let Some(gen) = r.max_generator() {
                if gen >= ngens {
                    return Err(PresentationError::GeneratorOutOfRange { index, gen, ngens });
                }
            }
            text.push(r.display(&names));
            rels.push(r.cyclically_reduced());
        }
        Ok(Presentation { names, relators: rels, relator_text: text })
    }

    /// Free group on the given generator names.
    pub fn free<S: Into<String>>(names: Vec<S>) -> Result<Self, PresentationError> {
        Presentation::new(names, Vec::new())
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relators as they were written, before cyclic reduction.
    pub fn relator_text(&self) -> &[String] {
        &self.relator_text
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.names)
    }

    /// Parse a single word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let mut budget = DEFAULT_LETTER_CAP;
        parse_word_tokens(text, 1, 1, &self.names, &mut budget)
    }

    /// Canonical text in the file format: whitespace-normalized, relators in
    /// their cyclically reduced form. Parsing it back yields an equal value
    /// (up to the retained display text).
    pub fn canonical_text(&self) -> String {
        let mut s = format!("gens {}\n", self.names.join(" "));
        for r in &self.relators {
            s.push_str("rel ");
            s.push_str(&r.display(&self.names));
            s.push('\n');
        }
        s
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A subgroup declared with `sub <name> ...` in a presentation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubgroup {
    pub name: String,
    pub spec: SubgroupSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub subgroups: Vec<NamedSubgroup>,
}

impl PresentationFile {
    pub fn subgroup(&self, name: &str) -> Option<&SubgroupSpec> {
        self.subgroups.iter().find(|s| s.name == name).map(|s| &s.spec)
    }

    pub fn canonical_text(&self) -> String {
        let mut s = self.presentation.canonical_text();
        let names = self.presentation.names();
        for sub in &self.subgroups {
            s.push_str("sub ");
            s.push_str(&sub.name);
            if sub.spec.normal {
                s.push_str(" normal");
            }
            for g in &sub.spec.generators {
                // one generator per `sub` token group needs explicit separation
                s.push_str(" , ");
                s.push_str(&g.display(names));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("`gens` must appear exactly once")]
    GensCount,
    #[error("expansion exceeds the letter cap of {0}")]
    LengthCap(usize),
    #[error("{0}")]
    Presentation(PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn perr(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Parse a presentation file with the default letter cap.
pub fn parse_presentation(text: &str) -> Result<PresentationFile, ParseError> {
    parse_presentation_with_cap(text, DEFAULT_LETTER_CAP)
}

/// Grammar (line based, `#` starts a comment):
///
/// ```text
/// gens <name> <name> ...          exactly once, before any word
/// rel <word> [= <word>]
/// sub <name> [normal] <word> , <word> , ...
/// ```
///
/// A word is a whitespace separated list of `name` or `name^k` tokens, or
/// `1` for the identity. Subgroup generators are separated by commas; a
/// `sub` line without commas treats every token as its own generator.
pub fn parse_presentation_with_cap(text: &str, cap: usize) -> Result<PresentationFile, ParseError> {
    let mut names: Option<Vec<String>> = None;
    let mut rels: Vec<Word> = Vec::new();
    let mut subs: Vec<NamedSubgroup> = Vec::new();
    let mut budget = cap;
    let mut gens_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let (keyword, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let rest_col = indent + keyword.len() + 1;
        match keyword {
            "gens" => {
                if names.is_some() {
                    return Err(perr(line_no, indent + 1, ParseErrorKind::GensCount));
                }
                let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if list.is_empty() {
                    return Err(perr(line_no, indent + 1, ParseErrorKind::EmptyGenerators));
                }
                for n in &list {
                    if !is_identifier(n) || n == "normal" {
                        let col = rest_col + rest.find(n.as_str()).unwrap_or(0);
                        return Err(perr(line_no, col, ParseErrorKind::Syntax(format!("invalid generator name `{n}`"))));
                    }
                }
                gens_line = line_no;
                names = Some(list);
            }
            "rel" => {
                let names = names.as_ref().ok_or_else(|| perr(line_no, indent + 1, ParseErrorKind::Syntax("`rel` before `gens`".into())))?;
                let w = match rest.find('=') {
                    Some(eq) => {
                        let lhs = parse_word_tokens(&rest[..eq], line_no, rest_col, names, &mut budget)?;
                        let rhs = parse_word_tokens(&rest[eq + 1..], line_no, rest_col + eq + 1, names, &mut budget)?;
                        lhs.concat(&rhs.inverse())
                    }
                    None => parse_word_tokens(rest, line_no, rest_col, names, &mut budget)?,
                };
                rels.push(w);
            }
            "sub" => {
                let names = names.as_ref().ok_or_else(|| perr(line_no, indent + 1, ParseErrorKind::Syntax("`sub` before `gens`".into())))?;
                let mut it = rest.split_whitespace();
                let sub_name = it.next().ok_or_else(|| perr(line_no, rest_col, ParseErrorKind::Syntax("missing subgroup name".into())))?;
                let mut body_start = rest.find(sub_name).unwrap() + sub_name.len();
                let mut normal = false;
                let after = &rest[body_start..];
                if after.split_whitespace().next() == Some("normal") {
                    normal = true;
                    body_start += after.find("normal").unwrap() + "normal".len();
                }
                let body = &rest[body_start..];
                let body_col = rest_col + body_start;
                let mut gens = Vec::new();
                if body.contains(',') {
                    let mut offset = 0;
                    for piece in body.split(',') {
                        if !piece.trim().is_empty() {
                            gens.push(parse_word_tokens(piece, line_no, body_col + offset, names, &mut budget)?);
                        }
                        offset += piece.len() + 1;
                    }
                } else {
                    let mut offset = 0;
                    for tok in body.split_whitespace() {
                        let at = body[offset..].find(tok).unwrap() + offset;
                        gens.push(parse_word_tokens(tok, line_no, body_col + at, names, &mut budget)?);
                        offset = at + tok.len();
                    }
                }
                subs.push(NamedSubgroup { name: sub_name.to_string(), spec: SubgroupSpec { generators: gens, normal } });
            }
            other => {
                return Err(perr(line_no, indent + 1, ParseErrorKind::Syntax(format!("unknown directive `{other}`"))));
            }
        }
    }
    let names = names.ok_or_else(|| perr(1, 1, ParseErrorKind::GensCount))?;
    let presentation = Presentation::new(names, rels).map_err(|e| perr(gens_line, 1, ParseErrorKind::Presentation(e)))?;
    Ok(PresentationFile { presentation, subgroups: subs })
}

fn parse_word_tokens(text: &str, line: usize, col0: usize, names: &[String], budget: &mut usize) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    let mut offset = 0;
    let mut saw_any = false;
    for tok in text.split_whitespace() {
        let at = text[offset..].find(tok).unwrap() + offset;
        offset = at + tok.len();
        let col = col0 + at;
        saw_any = true;
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let k: i64 = e
                    .parse()
                    .map_err(|_| perr(line, col + n.len() + 1, ParseErrorKind::Syntax(format!("bad exponent `{e}`"))))?;
                if k == 0 {
                    return Err(perr(line, col + n.len() + 1, ParseErrorKind::Syntax("exponent must be nonzero".into())));
                }
                (n, k)
            }
            None => (tok, 1),
        };
        if !is_identifier(name) {
            return Err(perr(line, col, ParseErrorKind::Syntax(format!("bad token `{tok}`"))));
        }
        let gen = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| perr(line, col, ParseErrorKind::UnknownGenerator(name.to_string())))?;
        let count = exp.unsigned_abs() as usize;
        if count > *budget {
            return Err(perr(line, col, ParseErrorKind::LengthCap(DEFAULT_LETTER_CAP.max(count))));
        }
        *budget -= count;
        letters.extend(std::iter::repeat(Letter::new(gen, exp < 0)).take(count));
    }
    if !saw_any {
        return Err(perr(line, col0, ParseErrorKind::Syntax("empty word (use `1` for the identity)".into())));
    }
    Ok(free_reduce(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &[(usize, i64)]) -> Word {
        free_reduce(spec.iter().flat_map(|&(g, e)| std::iter::repeat(Letter::new(g, e < 0)).take(e.unsigned_abs() as usize)))
    }

    const A: usize = 0;
    const B: usize = 1;
    const T: usize = 2;

    #[test]
    fn reduction_examples() {
        assert!(w(&[(A, 1), (A, -1)]).is_identity());
        assert_eq!(w(&[(A, 1), (B, 1), (B, -1), (A, 1)]), w(&[(A, 2)]));
        assert_eq!(w(&[(T, -1), (A, 1), (T, 1), (T, -1), (B, 1)]), w(&[(T, -1), (A, 1), (B, 1)]));
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(w(&[(A, 1), (B, -1)]).inverse(), w(&[(B, 1), (A, -1)]));
        assert_eq!(w(&[(A, 1), (B, 1)]).concat(&w(&[(B, -1), (A, 1)])), w(&[(A, 2)]));
        assert_eq!(Word::generator(A).conjugate(&Word::generator(T)), w(&[(T, -1), (A, 1), (T, 1)]));
    }

    #[test]
    fn parse_free_and_cyclic() {
        let f = parse_presentation("gens a b\n").unwrap();
        assert_eq!(f.presentation.ngens(), 2);
        assert!(f.presentation.is_free());

        let z2 = parse_presentation("gens a\nrel a^2\n").unwrap();
        assert_eq!(z2.presentation.relators(), &[w(&[(A, 2)])]);
    }

    #[test]
    fn figure_eight_abelianized_rows() {
        let f = parse_presentation("gens a b t\nrel t^-1 a t = b^-1\nrel t^-1 b t = b^2 a b\n").unwrap();
        let p = &f.presentation;
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[0].exponent_sums(3), vec![1, 1, 0]);
        assert_eq!(p.relators()[1].exponent_sums(3), vec![-1, -2, 0]);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_presentation("gens a b\nrel a c\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 7);
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator("c".into()));

        let e = parse_presentation("gens\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyGenerators);

        let e = parse_presentation("gens a\nrel a^x\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.line, 2);

        let e = parse_presentation("rel a\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn letter_cap_enforced() {
        let e = parse_presentation_with_cap("gens a\nrel a^1000\n", 100).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::LengthCap(_)));
    }

    #[test]
    fn subgroup_lines() {
        let f = parse_presentation("gens a b\nsub H a^2 b\nsub K normal a b a^-1 , b^3\n").unwrap();
        assert_eq!(f.subgroup("H").unwrap().generators.len(), 2);
        let k = f.subgroup("K").unwrap();
        assert!(k.normal);
        assert_eq!(k.generators, vec![w(&[(A, 1), (B, 1), (A, -1)]), w(&[(B, 3)])]);
    }

    #[test]
    fn relators_cyclically_reduced_text_kept() {
        let f = parse_presentation("gens a b\nrel b a^2 b^-1\n").unwrap();
        assert_eq!(f.presentation.relators(), &[w(&[(A, 2)])]);
        assert_eq!(f.presentation.relator_text(), &["b a^2 b^-1".to_string()]);
    }

    #[test]
    fn canonical_text_is_parse_stable() {
        let src = "# comment\ngens   a b t\nrel t^-1 a t b\n\nrel t^-1 b   t b^-1 a^-1 b^-2\nsub G a , b , t^3\n";
        let f = parse_presentation(src).unwrap();
        let c1 = f.canonical_text();
        let f2 = parse_presentation(&c1).unwrap();
        assert_eq!(f2.canonical_text(), c1);
        assert_eq!(f2.presentation.relators(), f.presentation.relators());
        assert_eq!(f2.subgroups, f.subgroups);
    }

    use proptest::prelude::*;

    fn letters() -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec((0usize..3, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..40)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in letters()) {
            let once = free_reduce(raw);
            let twice = free_reduce(once.letters().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn word_times_inverse_is_identity(raw in letters()) {
            let x = free_reduce(raw);
            prop_assert!(x.concat(&x.inverse()).is_identity());
        }

        #[test]
        fn reduced_words_have_no_cancelling_pairs(raw in letters()) {
            let x = free_reduce(raw);
            for pair in x.letters().windows(2) {
                prop_assert_ne!(pair[0], pair[1].inv());
            }
        }
    }
}
