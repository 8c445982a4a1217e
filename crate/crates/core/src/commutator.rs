//! Commutator terms and their expansion into words.
//!
//! Convention throughout the crate: `[u,v] = u^-1 v^-1 u v`, left-normed
//! (`[c,a1,a2] = [[c,a1],a2]`). Under this convention `b x = x b [b,x]`
//! holds identically, which the collector relies on.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{commutator, Alphabet, Letter, Word};

/// A named element with a defining word, e.g. the power `x^2` used as a
/// free generator of a kernel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub name: String,
    pub definition: Word,
}

impl Atom {
    pub fn new(name: impl Into<String>, definition: Word) -> Result<Atom> {
        if definition.is_identity() {
            return Err(Error::Invalid("atom definition must be nonempty".into()));
        }
        Ok(Atom {
            name: name.into(),
            definition,
        })
    }
}

/// Left-normed commutator `[leading, tail[0], ..., tail[q-1]]` over symbol
/// indices. With an empty tail the term is the bare leading letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommutatorTerm {
    pub leading: Letter,
    pub tail: Vec<Letter>,
}

impl CommutatorTerm {
    pub fn new(leading: Letter, tail: Vec<Letter>) -> Self {
        CommutatorTerm { leading, tail }
    }

    pub fn letter(leading: Letter) -> Self {
        CommutatorTerm {
            leading,
            tail: Vec::new(),
        }
    }

    /// Number of entries, `1 + q`.
    pub fn weight(&self) -> usize {
        1 + self.tail.len()
    }

    /// `[self, a]`.
    pub fn extended(&self, a: Letter) -> Self {
        let mut tail = self.tail.clone();
        tail.push(a);
        CommutatorTerm {
            leading: self.leading,
            tail,
        }
    }

    /// Sort key used for every emitted list: weight first, then entries.
    pub fn sort_key(&self) -> (usize, Letter, &[Letter]) {
        (self.weight(), self.leading, &self.tail)
    }

    /// Expand with symbol `s` standing for `defs[s]`.
    pub fn expand(&self, defs: &[Word]) -> Word {
        let sym = |l: Letter| {
            let w = &defs[l.gen() as usize];
            if l.is_positive() {
                w.clone()
            } else {
                w.inverse()
            }
        };
        let mut acc = sym(self.leading);
        for &a in &self.tail {
            acc = commutator(&acc, &sym(a));
        }
        acc
    }

    /// Expand over the base alphabet (symbol `g` is generator `g`).
    pub fn expand_plain(&self) -> Word {
        let mut acc = Word::letter(self.leading);
        for &a in &self.tail {
            acc = commutator(&acc, &Word::letter(a));
        }
        acc
    }

    pub fn to_expr(&self) -> Expr {
        if self.tail.is_empty() {
            return Expr::Letter(self.leading);
        }
        let mut parts = vec![Expr::Letter(self.leading)];
        parts.extend(self.tail.iter().map(|&l| Expr::Letter(l)));
        Expr::Comm(parts)
    }

    pub fn format(&self, names: &[String]) -> String {
        self.to_expr().format(names)
    }
}

/// Nested commutator expressions, used where terms contain other terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Letter(Letter),
    /// Left-normed commutator of at least two entries.
    Comm(Vec<Expr>),
    Inv(Box<Expr>),
}

impl Expr {
    pub fn comm(a: Expr, b: Expr) -> Expr {
        Expr::Comm(vec![a, b])
    }

    pub fn inv(self) -> Expr {
        match self {
            Expr::Inv(e) => *e,
            Expr::Letter(l) => Expr::Letter(l.inverse()),
            e => Expr::Inv(Box::new(e)),
        }
    }

    pub fn expand(&self, defs: &[Word]) -> Word {
        match self {
            Expr::Letter(l) => {
                let w = &defs[l.gen() as usize];
                if l.is_positive() {
                    w.clone()
                } else {
                    w.inverse()
                }
            }
            Expr::Inv(e) => e.expand(defs).inverse(),
            Expr::Comm(parts) => {
                let mut it = parts.iter();
                let mut acc = it.next().map(|e| e.expand(defs)).unwrap_or_default();
                for p in it {
                    acc = commutator(&acc, &p.expand(defs));
                }
                acc
            }
        }
    }

    /// Expand over the base alphabet.
    pub fn expand_plain(&self) -> Word {
        match self {
            Expr::Letter(l) => Word::letter(*l),
            Expr::Inv(e) => e.expand_plain().inverse(),
            Expr::Comm(parts) => {
                let mut it = parts.iter();
                let mut acc = it.next().map(Expr::expand_plain).unwrap_or_default();
                for p in it {
                    acc = commutator(&acc, &p.expand_plain());
                }
                acc
            }
        }
    }

    pub fn format(&self, names: &[String]) -> String {
        match self {
            Expr::Letter(l) => {
                let n = &names[l.gen() as usize];
                if l.is_positive() {
                    n.clone()
                } else {
                    format!("{n}^-1")
                }
            }
            Expr::Inv(e) => format!("{}^-1", e.format(names)),
            Expr::Comm(parts) => format!(
                "[{}]",
                parts
                    .iter()
                    .map(|p| p.format(names))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

/// Plain display with generator indices, for debugging.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Letter(l) => {
                write!(f, "g{}", l.gen())?;
                if !l.is_positive() {
                    f.write_str("^-1")?;
                }
                Ok(())
            }
            Expr::Inv(e) => write!(f, "{e}^-1"),
            Expr::Comm(parts) => {
                f.write_str("[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn inverse_product(factors: &[Expr]) -> Vec<Expr> {
    factors.iter().rev().map(|e| e.clone().inv()).collect()
}

/// `[c, a]` for letters as a product of factors whose entries carry positive
/// signs except inside a single commutator of weight three.
///
/// Exact identities used:
///   `[a^-1, b] = [a,b]^-1 · [[a,b]^-1, a^-1]`
///   `[a, b^-1] = [a,b]^-1 · [[a,b]^-1, b^-1]`
fn normalize_pair(c: Expr, a: Letter) -> Vec<Expr> {
    let c_neg = matches!(c, Expr::Letter(l) if !l.is_positive());
    match (c_neg, a.is_positive()) {
        (false, true) => vec![Expr::comm(c, Expr::Letter(a))],
        (false, false) => {
            let base = Expr::comm(c, Expr::Letter(a.inverse()));
            vec![base.clone().inv(), Expr::comm(base.inv(), Expr::Letter(a))]
        }
        (true, _) => {
            let c_pos = c.clone().inv();
            // [c_pos^-1, a] = [c_pos, a]^-1 · [[c_pos, a]^-1, c_pos^-1]
            let inner = normalize_pair(c_pos.clone(), a);
            let mut out = inverse_product(&inner);
            out.push(Expr::comm(Expr::comm(c_pos, Expr::Letter(a)).inv(), c));
            out
        }
    }
}

/// Rewrite a term whose leading or tail letters carry negative signs as a
/// product of factors whose expansions multiply to the term's expansion
/// exactly. Terms with all-positive entries come back unchanged.
pub fn normalize_sign(t: &CommutatorTerm) -> Vec<Expr> {
    if t.tail.is_empty() {
        return vec![Expr::Letter(t.leading)];
    }
    if t.leading.is_positive() && t.tail.iter().all(|l| l.is_positive()) {
        return vec![t.to_expr()];
    }
    let mut factors = normalize_pair(Expr::Letter(t.leading), t.tail[0]);
    for &a in &t.tail[1..] {
        factors = commutator_of_product(&factors, a);
    }
    factors
}

/// `[F1 ... Fk, a] = Π_i [F_i, a]^(F_{i+1} ... F_k)`, from `[xy,z] = [x,z]^y [y,z]`.
fn commutator_of_product(factors: &[Expr], a: Letter) -> Vec<Expr> {
    let mut out = Vec::new();
    for i in 0..factors.len() {
        let rest = &factors[i + 1..];
        out.extend(inverse_product(rest));
        let fi = &factors[i];
        // a negative letter inside is allowed here; only the first pair is normalized
        out.push(Expr::comm(fi.clone(), Expr::Letter(a)));
        out.extend(rest.iter().cloned());
    }
    out
}

/// Expansion of a product of factors.
pub fn expand_product(factors: &[Expr], defs: &[Word]) -> Word {
    factors
        .iter()
        .fold(Word::identity(), |acc, f| acc.multiply(&f.expand(defs)))
}

/// Parser for products of letters and bracketed commutators:
/// `x^2 [b, a, a^-1]^-1 y`.
pub struct ExprParser<'a> {
    alphabet: &'a Alphabet,
    toks: Vec<String>,
    pos: usize,
}

fn tokenize(s: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, toks: &mut Vec<String>| {
        if !cur.is_empty() {
            toks.push(std::mem::take(cur));
        }
    };
    for ch in s.chars() {
        match ch {
            '[' | ']' | ',' | '(' | ')' | '*' => {
                flush(&mut cur, &mut toks);
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => flush(&mut cur, &mut toks),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut toks);
    toks
}

impl<'a> ExprParser<'a> {
    pub fn new(alphabet: &'a Alphabet, s: &str) -> Self {
        ExprParser {
            alphabet,
            toks: tokenize(s),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Option<String> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == s => Ok(()),
            other => Err(Error::Parse(format!("expected `{s}`, found {other:?}"))),
        }
    }

    /// Exponent suffix attached to a closing bracket: `]^-1` tokenizes as
    /// `]`, `^-1`.
    fn suffix_exponent(&mut self) -> Result<i64> {
        if let Some(t) = self.peek() {
            if let Some(e) = t.strip_prefix('^') {
                let e: i64 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent `{t}`")))?;
                self.pos += 1;
                return Ok(e);
            }
        }
        Ok(1)
    }

    fn letter_power(&self, tok: &str) -> Result<(Letter, i64)> {
        let (name, e) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?,
            ),
            None => (tok, 1),
        };
        if name.is_empty() {
            return Err(Error::Parse(format!("missing generator in `{tok}`")));
        }
        let g = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok((Letter::pos(g), e))
    }

    fn power(base: Expr, e: i64) -> Vec<Expr> {
        let b = if e < 0 { base.inv() } else { base };
        vec![b; e.unsigned_abs() as usize]
    }

    /// One factor: a letter power or a bracket with optional exponent.
    fn factor(&mut self) -> Result<Vec<Expr>> {
        match self.next() {
            Some(t) if t == "[" => {
                let mut parts = vec![self.entry()?];
                while self.peek() == Some(",") {
                    self.pos += 1;
                    parts.push(self.entry()?);
                }
                self.expect("]")?;
                if parts.len() < 2 {
                    return Err(Error::Parse("commutator needs at least two entries".into()));
                }
                let e = self.suffix_exponent()?;
                Ok(Self::power(Expr::Comm(parts), e))
            }
            Some(t) if t == "1" => Ok(Vec::new()),
            Some(t) if t != "]" && t != "," && t != "(" && t != ")" && t != "*" => {
                let (l, e) = self.letter_power(&t)?;
                Ok(Self::power(Expr::Letter(l), e))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    /// A commutator entry: a product of factors, collapsed into one `Expr`.
    fn entry(&mut self) -> Result<Expr> {
        let mut fs = Vec::new();
        while let Some(t) = self.peek() {
            if t == "," || t == "]" {
                break;
            }
            fs.extend(self.factor()?);
        }
        match fs.len() {
            0 => Err(Error::Parse("empty commutator entry".into())),
            1 => Ok(fs.pop().unwrap()),
            _ => Err(Error::Parse(
                "commutator entries must be single letters or commutators".into(),
            )),
        }
    }

    /// Parse a whole product.
    pub fn product(mut self) -> Result<Vec<Expr>> {
        let mut fs = Vec::new();
        while self.peek().is_some() {
            fs.extend(self.factor()?);
        }
        Ok(fs)
    }
}

/// Parse a product of letters and commutators into its reduced word.
pub fn parse_element(alphabet: &Alphabet, s: &str) -> Result<Word> {
    let fs = ExprParser::new(alphabet, s).product()?;
    Ok(fs
        .iter()
        .fold(Word::identity(), |acc, f| acc.multiply(&f.expand_plain())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s, false).unwrap()
    }

    const A: u32 = 0;
    const B: u32 = 1;

    #[test]
    fn expand_examples() {
        let t = CommutatorTerm::new(Letter::pos(B), vec![Letter::pos(A)]);
        assert_eq!(t.expand_plain(), w("b^-1 a^-1 b a"));
        let t = CommutatorTerm::new(Letter::pos(A), vec![Letter::pos(A)]);
        assert!(t.expand_plain().is_identity());
        // [b,a,a] by naive concatenation then a single reduction
        let ba = [
            Letter::neg(B),
            Letter::neg(A),
            Letter::pos(B),
            Letter::pos(A),
        ];
        let mut naive: Vec<Letter> = ba.iter().rev().map(|l| l.inverse()).collect();
        naive.push(Letter::neg(A));
        naive.extend_from_slice(&ba);
        naive.push(Letter::pos(A));
        let t = CommutatorTerm::new(Letter::pos(B), vec![Letter::pos(A), Letter::pos(A)]);
        assert_eq!(t.expand_plain(), crate::word::free_reduce(naive));
    }

    #[test]
    fn collection_formulae_hold() {
        let b = w("b");
        let x = w("a");
        let bx = commutator(&b, &x);
        assert_eq!(b.multiply(&x), x.multiply(&b).multiply(&bx));
        assert_eq!(
            b.inverse().multiply(&x),
            x.multiply(&bx.inverse()).multiply(&b.inverse())
        );
    }

    #[test]
    fn normalize_examples() {
        let names = vec!["a".to_string(), "b".to_string()];
        let t = CommutatorTerm::new(Letter::neg(A), vec![Letter::pos(B)]);
        let f = normalize_sign(&t);
        let shown: Vec<_> = f.iter().map(|e| e.format(&names)).collect();
        assert_eq!(shown, vec!["[a,b]^-1", "[[a,b]^-1,a^-1]"]);
        assert_eq!(expand_product(&f, &[w("a"), w("b")]), w("a b^-1 a^-1 b"));

        let t = CommutatorTerm::new(Letter::pos(A), vec![Letter::neg(B)]);
        let f = normalize_sign(&t);
        let shown: Vec<_> = f.iter().map(|e| e.format(&names)).collect();
        assert_eq!(shown, vec!["[a,b]^-1", "[[a,b]^-1,b^-1]"]);
        assert_eq!(expand_product(&f, &[w("a"), w("b")]), t.expand_plain());

        let t = CommutatorTerm::new(Letter::pos(A), vec![Letter::pos(B)]);
        assert_eq!(normalize_sign(&t), vec![t.to_expr()]);
    }

    #[test]
    fn normalize_is_exact_on_random_terms() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(1..4u32);
            let q = rng.gen_range(1..4usize);
            let rl = |rng: &mut rand::rngs::StdRng| {
                Letter::new(rng.gen_range(0..n), if rng.gen_bool(0.5) { 1 } else { -1 })
            };
            let t = CommutatorTerm::new(rl(&mut rng), (0..q).map(|_| rl(&mut rng)).collect());
            let f = normalize_sign(&t);
            let defs: Vec<Word> = (0..n).map(Word::gen).collect();
            assert_eq!(expand_product(&f, &defs), t.expand_plain(), "{t:?}");
        }
    }

    #[test]
    fn parser_handles_products_and_nesting() {
        let a = ab();
        assert_eq!(parse_element(&a, "[b,a]").unwrap(), w("b^-1 a^-1 b a"));
        assert_eq!(parse_element(&a, "[ b , a , a^-1 ]").unwrap(), {
            let t = CommutatorTerm::new(Letter::pos(B), vec![Letter::pos(A), Letter::neg(A)]);
            t.expand_plain()
        });
        assert_eq!(
            parse_element(&a, "a^2 [b,a]^-1").unwrap(),
            w("a a a^-1 b^-1 a b")
        );
        assert_eq!(parse_element(&a, "[[b,a],a^-1]").unwrap().len(), 8);
        assert!(parse_element(&a, "a^").is_err());
        assert!(parse_element(&a, "[a]").is_err());
        assert!(parse_element(&a, "[a,b").is_err());
        assert_eq!(parse_element(&a, "1").unwrap(), Word::identity());
    }
}
