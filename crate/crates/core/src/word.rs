//! Reduced words in a free group.
//!
//! Generators are plain indices; their position in an [`Alphabet`] is their
//! rank in the ambient total order. Words are kept freely reduced at all
//! times.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A generator or its inverse.
///
/// Ordering is by generator index, with `g` before `g^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    gen: u32,
    inv: bool,
}

impl Letter {
    pub const fn pos(gen: u32) -> Letter {
        Letter { gen, inv: false }
    }

    pub const fn neg(gen: u32) -> Letter {
        Letter { gen, inv: true }
    }

    /// `sign` must be `1` or `-1`.
    pub fn new(gen: u32, sign: i32) -> Letter {
        debug_assert!(sign == 1 || sign == -1);
        Letter { gen, inv: sign < 0 }
    }

    pub fn gen(self) -> u32 {
        self.gen
    }

    pub fn sign(self) -> i32 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    pub fn is_positive(self) -> bool {
        !self.inv
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Freely reduce a letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(seq: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in seq {
        match out.last() {
            Some(&last) if last.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| !w[0].cancels(w[1]))
}

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn gen(g: u32) -> Word {
        Word(vec![Letter::pos(g)])
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Build from letters, reducing them.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(seq: I) -> Word {
        free_reduce(seq)
    }

    /// Build from the signed-integer encoding `±(g+1)`.
    pub fn from_signed(seq: &[i32]) -> Word {
        free_reduce(seq.iter().map(|&s| {
            assert!(s != 0, "zero is not a letter");
            Letter::new(s.unsigned_abs() - 1, s.signum())
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        let mut rest = other.0.as_slice();
        while let (Some(&a), Some(&b)) = (out.last(), rest.first()) {
            if a.cancels(b) {
                out.pop();
                rest = &rest[1..];
            } else {
                break;
            }
        }
        out.extend_from_slice(rest);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `self^by = by^-1 · self · by`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.inverse().multiply(self).multiply(by)
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Signed letter count per generator, for generators `0..n`.
    ///
    /// Letters over generators `>= n` are ignored.
    pub fn exponent_vector(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for l in &self.0 {
            if let Some(slot) = v.get_mut(l.gen as usize) {
                *slot += l.sign() as i64;
            }
        }
        v
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<u32> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replace every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = &images[l.gen as usize];
            if l.is_positive() {
                out = out.multiply(img);
            } else {
                out = out.multiply(&img.inverse());
            }
        }
        out
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.multiply(&rhs)
    }
}

/// `[u,v] = u^-1 v^-1 u v`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.inverse().multiply(&v.inverse()).multiply(u).multiply(v)
}

/// Left-normed commutator `[w1, w2, ..., wk]`.
pub fn left_normed(parts: &[Word]) -> Word {
    let mut it = parts.iter();
    let mut acc = it.next().cloned().unwrap_or_default();
    for p in it {
        acc = commutator(&acc, p);
    }
    acc
}

/// Named generators in their ambient order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Alphabet> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::Parse(format!("invalid generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate generator name `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `x1, ..., xn`.
    pub fn standard(n: usize) -> Alphabet {
        Alphabet {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: u32) -> &str {
        &self.names[g as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn push(&mut self, name: &str) -> Result<u32> {
        if !valid_name(name) {
            return Err(Error::Parse(format!("invalid generator name `{name}`")));
        }
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        self.names.push(name.to_string());
        Ok(self.names.len() as u32 - 1)
    }

    /// Parse one letter token: `a`, `a^-1`, or `a^k`.
    fn parse_power(&self, tok: &str) -> Result<(u32, i64)> {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        let g = self
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok((g, exp))
    }

    /// Parse whitespace-separated letters. `1` (or an empty string) is the
    /// identity. With `strict`, input that is not already freely reduced is
    /// rejected.
    pub fn parse_word(&self, s: &str, strict: bool) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut raw = Vec::new();
        for tok in s.split_whitespace() {
            let (g, e) = self.parse_power(tok)?;
            let l = Letter::new(g, if e < 0 { -1 } else { 1 });
            for _ in 0..e.unsigned_abs() {
                raw.push(l);
            }
        }
        if strict && !is_reduced(&raw) {
            return Err(Error::NotReduced(s.to_string()));
        }
        Ok(free_reduce(raw))
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.is_positive() {
            self.name(l.gen()).to_string()
        } else {
            format!("{}^-1", self.name(l.gen()))
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|&l| self.format_letter(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Format with runs collapsed into powers, e.g. `x^2 y^-1`.
    pub fn format_word_compact(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let ls = w.letters();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let e = (j - i) as i64 * ls[i].sign() as i64;
            let name = self.name(ls[i].gen());
            parts.push(if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            });
            i = j;
        }
        parts.join(" ")
    }
}

/// Display wrapper pairing a word with an alphabet.
pub struct Show<'a>(pub &'a Alphabet, pub &'a Word);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_word(self.1))
    }
}
