//! The U-, Z- and restricted U-constructions on an ordered alphabet.
//!
//! An [`OrderedAlphabet`] lists symbols in their total order: the `A`
//! symbols (optionally split into `A1` with pseudo-orders and `A2`) come
//! first, followed by `B` and, for restricted constructions, the power atoms
//! `x^γ` of the `A1` members (together forming `B̂`). Each symbol carries a
//! defining word over an ambient alphabet so constructed terms can be
//! expanded.

use std::collections::BTreeMap;

use crate::commutator::CommutatorTerm;
use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// Member of `A1` with pseudo-order `gamma ≥ 2`.
    A1 {
        gamma: u32,
    },
    /// Member of `A` without a pseudo-order (`A2`, or all of `A`).
    A2,
    B,
    /// The atom `base^exponent` for an `A1` member `base`.
    Power {
        base: u32,
        exponent: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
    pub definition: Word,
}

impl Symbol {
    pub fn is_a(&self) -> bool {
        matches!(self.kind, SymbolKind::A1 { .. } | SymbolKind::A2)
    }
}

/// Partitioned, totally ordered symbol set `A ∪ B̂`. With `A1` nonempty this
/// is the configuration of a restricted construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedAlphabet {
    symbols: Vec<Symbol>,
    ambient: Alphabet,
}

impl OrderedAlphabet {
    /// Symbols are generators of the free group on `a ∪ b` (in that order).
    pub fn plain(a: &[&str], b: &[&str]) -> Result<Self> {
        Self::partitioned(&[], &[], a, b)
    }

    /// Restricted configuration on fresh generators `a1 ∪ a2 ∪ b`, with one
    /// atom `x^γ` per `A1` member appended after `b`.
    pub fn partitioned(a1: &[&str], gammas: &[u32], a2: &[&str], b: &[&str]) -> Result<Self> {
        let names: Vec<&str> = a1.iter().chain(a2).chain(b).copied().collect();
        let ambient = Alphabet::new(names)?;
        let mut next = 0u32;
        let mut gen = || {
            let w = Word::gen(next);
            next += 1;
            w
        };
        let a1w: Vec<(String, Word)> = a1.iter().map(|n| (n.to_string(), gen())).collect();
        let a2w: Vec<(String, Word)> = a2.iter().map(|n| (n.to_string(), gen())).collect();
        let bw: Vec<(String, Word)> = b.iter().map(|n| (n.to_string(), gen())).collect();
        Self::from_words(ambient, a1w, gammas, a2w, bw)
    }

    /// General form: symbols stand for arbitrary words of `ambient`.
    pub fn from_words(
        ambient: Alphabet,
        a1: Vec<(String, Word)>,
        gammas: &[u32],
        a2: Vec<(String, Word)>,
        b: Vec<(String, Word)>,
    ) -> Result<Self> {
        if a1.len() != gammas.len() {
            return Err(Error::Invalid(format!(
                "{} A1 symbols but {} pseudo-orders",
                a1.len(),
                gammas.len()
            )));
        }
        if let Some(g) = gammas.iter().find(|&&g| g < 2) {
            return Err(Error::Invalid(format!(
                "pseudo-order {g} must be at least 2"
            )));
        }
        let mut symbols = Vec::new();
        for ((name, w), &gamma) in a1.into_iter().zip(gammas) {
            symbols.push(Symbol {
                name,
                kind: SymbolKind::A1 { gamma },
                definition: w,
            });
        }
        for (name, w) in a2 {
            symbols.push(Symbol {
                name,
                kind: SymbolKind::A2,
                definition: w,
            });
        }
        for (name, w) in b {
            symbols.push(Symbol {
                name,
                kind: SymbolKind::B,
                definition: w,
            });
        }
        let n_a1 = gammas.len();
        for (i, &gamma) in gammas.iter().enumerate().take(n_a1) {
            let base = &symbols[i];
            symbols.push(Symbol {
                name: format!("{}^{}", base.name, gamma),
                kind: SymbolKind::Power {
                    base: i as u32,
                    exponent: gamma,
                },
                definition: base.definition.pow(gamma as i64),
            });
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Invalid(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(OrderedAlphabet { symbols, ambient })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, s: u32) -> &Symbol {
        &self.symbols[s as usize]
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn ambient(&self) -> &Alphabet {
        &self.ambient
    }

    pub fn names(&self) -> Vec<String> {
        self.symbols.iter().map(|s| s.name.clone()).collect()
    }

    pub fn definitions(&self) -> Vec<Word> {
        self.symbols.iter().map(|s| s.definition.clone()).collect()
    }

    pub fn is_a(&self, s: u32) -> bool {
        self.symbol(s).is_a()
    }

    pub fn gamma(&self, s: u32) -> Option<u32> {
        match self.symbol(s).kind {
            SymbolKind::A1 { gamma } => Some(gamma),
            _ => None,
        }
    }

    pub fn a_symbols(&self) -> Vec<u32> {
        (0..self.len() as u32).filter(|&s| self.is_a(s)).collect()
    }

    /// `B̂`: members of `B` followed by the power atoms.
    pub fn b_hat_symbols(&self) -> Vec<u32> {
        (0..self.len() as u32).filter(|&s| !self.is_a(s)).collect()
    }

    pub fn is_restricted(&self) -> bool {
        self.symbols
            .iter()
            .any(|s| matches!(s.kind, SymbolKind::A1 { .. }))
    }

    pub fn has_a2(&self) -> bool {
        self.symbols.iter().any(|s| s.kind == SymbolKind::A2)
    }

    /// Symbol index by name.
    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as u32)
    }

    pub fn format_term(&self, t: &CommutatorTerm) -> String {
        t.format(&self.names())
    }

    /// Upper bound on the weight of any restricted term when `A2 = ∅`.
    pub fn restricted_weight_bound(&self) -> Option<usize> {
        if !self.is_restricted() || self.has_a2() {
            return None;
        }
        let tail: u32 = self
            .symbols
            .iter()
            .filter_map(|s| match s.kind {
                SymbolKind::A1 { gamma } => Some(gamma / 2),
                _ => None,
            })
            .sum();
        Some(1 + tail as usize)
    }
}

/// Signs seen per symbol; `None` on an incoherent sequence.
fn coherent_signs<'a, I: IntoIterator<Item = &'a Letter>>(
    letters: I,
) -> Option<BTreeMap<u32, i32>> {
    let mut signs = BTreeMap::new();
    for l in letters {
        match signs.insert(l.gen(), l.sign()) {
            Some(prev) if prev != l.sign() => return None,
            _ => {}
        }
    }
    Some(signs)
}

/// Occurrence restriction of the `A1` members: counting a leading power
/// atom of `x` as `γ/2` occurrences and every letter of `x` as one, the
/// count may not exceed `γ/2`, and every `x`-letter is positive at the bound.
fn within_restriction(alph: &OrderedAlphabet, leading: Option<Letter>, letters: &[Letter]) -> bool {
    for (s, sym) in alph.symbols().iter().enumerate() {
        let SymbolKind::A1 { gamma } = sym.kind else {
            continue;
        };
        let s = s as u32;
        let mut twice = 0u32;
        let mut all_positive = true;
        let mut visit = |l: Letter| {
            if l.gen() == s {
                twice += 2;
                all_positive &= l.is_positive();
            }
        };
        letters.iter().copied().for_each(&mut visit);
        if let Some(lead) = leading {
            visit(lead);
            if let SymbolKind::Power { base, .. } = alph.symbol(lead.gen()).kind {
                if base == s {
                    twice += gamma;
                }
            }
        }
        if twice > gamma || (twice == gamma && !all_positive) {
            return false;
        }
    }
    true
}

/// Membership of a term in the U-construction (restricted when the alphabet
/// carries pseudo-orders).
pub fn is_admissible(t: &CommutatorTerm, alph: &OrderedAlphabet) -> bool {
    let n = alph.len() as u32;
    let lead = t.leading;
    if t.tail.is_empty() || lead.gen() >= n || t.tail.iter().any(|l| l.gen() >= n) {
        return false;
    }
    if !t.tail.iter().all(|l| alph.is_a(l.gen())) {
        return false;
    }
    if lead.gen() <= t.tail[0].gen() {
        return false;
    }
    if t.tail.windows(2).any(|w| w[0].gen() > w[1].gen()) {
        return false;
    }
    let Some(signs) = coherent_signs(&t.tail) else {
        return false;
    };
    if alph.is_a(lead.gen()) {
        if let Some(&s) = signs.get(&lead.gen()) {
            if s != lead.sign() {
                return false;
            }
        }
    } else if !lead.is_positive() {
        return false;
    }
    within_restriction(alph, Some(lead), &t.tail)
}

fn sort_terms(terms: &mut [CommutatorTerm]) {
    terms.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
}

/// Nondecreasing coherent sequences over `syms` of length `1..=max_len`,
/// starting with a symbol below `first_below` (when given). Signs of
/// symbols listed in `fixed` are forced.
fn sorted_sequences(
    syms: &[u32],
    max_len: usize,
    first_below: Option<u32>,
    min_sym: Option<u32>,
    fixed: &BTreeMap<u32, i32>,
) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        syms: &[u32],
        max_len: usize,
        first_below: Option<u32>,
        min_sym: Option<u32>,
        fixed: &BTreeMap<u32, i32>,
        start: usize,
        cur: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for (k, &s) in syms.iter().enumerate().skip(start) {
            if cur.is_empty() {
                if let Some(b) = first_below {
                    if s >= b {
                        continue;
                    }
                }
                if let Some(m) = min_sym {
                    if s < m {
                        continue;
                    }
                }
            }
            let signs: Vec<i32> = match (cur.last(), fixed.get(&s)) {
                (Some(l), _) if l.gen() == s => vec![l.sign()],
                (_, Some(&f)) => vec![f],
                _ => vec![1, -1],
            };
            for sg in signs {
                cur.push(Letter::new(s, sg));
                rec(syms, max_len, first_below, min_sym, fixed, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(
        syms,
        max_len,
        first_below,
        min_sym,
        fixed,
        0,
        &mut cur,
        &mut out,
    );
    out
}

/// All admissible terms of weight `1 + q ≤ max_weight`, sorted by weight
/// and then entries.
pub fn u_construction(alph: &OrderedAlphabet, max_weight: usize) -> Vec<CommutatorTerm> {
    let a = alph.a_symbols();
    let mut out = Vec::new();
    if max_weight < 2 {
        return out;
    }
    for lead_sym in 0..alph.len() as u32 {
        let signs: &[i32] = if alph.is_a(lead_sym) { &[1, -1] } else { &[1] };
        for &sg in signs {
            let lead = Letter::new(lead_sym, sg);
            let mut fixed = BTreeMap::new();
            if alph.is_a(lead_sym) {
                fixed.insert(lead_sym, sg);
            }
            for tail in sorted_sequences(&a, max_weight - 1, Some(lead_sym), None, &fixed) {
                let t = CommutatorTerm::new(lead, tail);
                if is_admissible(&t, alph) {
                    out.push(t);
                }
            }
        }
    }
    sort_terms(&mut out);
    out
}

/// Output of the restricted construction.
#[derive(Clone, Debug)]
pub struct RestrictedU {
    /// `B̂ = B ∪ Â₁` as symbol indices.
    pub b_hat: Vec<u32>,
    pub ru: Vec<CommutatorTerm>,
    /// The whole (finite) set was produced.
    pub complete: bool,
}

/// Restricted U-construction on `(A1, A2, B̂)`. When `A2 = ∅` the set is
/// finite; passing `None` (or a large enough bound) returns all of it.
pub fn ru_construction(cfg: &OrderedAlphabet, max_weight: Option<usize>) -> Result<RestrictedU> {
    if !cfg.is_restricted() {
        return Err(Error::Invalid(
            "restricted construction needs A1 with pseudo-orders".into(),
        ));
    }
    let bound = cfg.restricted_weight_bound();
    let (w, complete) = match (max_weight, bound) {
        (Some(m), Some(b)) => (m.min(b), m >= b),
        (None, Some(b)) => (b, true),
        (Some(m), None) => (m, false),
        (None, None) => {
            return Err(Error::Invalid(
                "A2 is nonempty: the set is infinite, give a weight bound".into(),
            ))
        }
    };
    Ok(RestrictedU {
        b_hat: cfg.b_hat_symbols(),
        ru: u_construction(cfg, w),
        complete,
    })
}

/// An element of the Z-construction, or (with an empty conjugator) a member
/// of `B̂` as it appears among collected tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZElement {
    /// `b^(a1 … aq)` with `b ∈ B̂`.
    Conjugate { base: u32, conj: Vec<Letter> },
    /// `[b^β, a1 … ap]^(a(p+1) … aq)` with `b ∈ A`.
    Commutator {
        lead: Letter,
        inner: Vec<Letter>,
        conj: Vec<Letter>,
    },
}

fn product_of(letters: &[Letter], defs: &[Word]) -> Word {
    letters.iter().fold(Word::identity(), |acc, l| {
        let w = &defs[l.gen() as usize];
        acc.multiply(&if l.is_positive() {
            w.clone()
        } else {
            w.inverse()
        })
    })
}

impl ZElement {
    /// Number of `A`-letters, `q`.
    pub fn q(&self) -> usize {
        match self {
            ZElement::Conjugate { conj, .. } => conj.len(),
            ZElement::Commutator { inner, conj, .. } => inner.len() + conj.len(),
        }
    }

    pub fn expand(&self, defs: &[Word]) -> Word {
        match self {
            ZElement::Conjugate { base, conj } => {
                defs[*base as usize].conjugate(&product_of(conj, defs))
            }
            ZElement::Commutator { lead, inner, conj } => {
                let b = product_of(&[*lead], defs);
                let u = product_of(inner, defs);
                crate::word::commutator(&b, &u).conjugate(&product_of(conj, defs))
            }
        }
    }

    /// Conjugating exponent of every `A`-symbol (inner and conjugator
    /// letters together).
    pub fn a_exponents(&self) -> BTreeMap<u32, i64> {
        let mut m = BTreeMap::new();
        let letters: Vec<Letter> = match self {
            ZElement::Conjugate { conj, .. } => conj.clone(),
            ZElement::Commutator { inner, conj, .. } => inner.iter().chain(conj).copied().collect(),
        };
        for l in letters {
            *m.entry(l.gen()).or_insert(0) += l.sign() as i64;
        }
        m
    }

    /// Membership in the Z-construction (restricted when the alphabet carries
    /// pseudo-orders). `allow_bare` admits members of `B̂` themselves.
    pub fn is_admissible(&self, alph: &OrderedAlphabet, allow_bare: bool) -> bool {
        let n = alph.len() as u32;
        let sorted = |ls: &[Letter]| ls.windows(2).all(|w| w[0].gen() <= w[1].gen());
        match self {
            ZElement::Conjugate { base, conj } => {
                if *base >= n || alph.is_a(*base) {
                    return false;
                }
                if conj.is_empty() {
                    return allow_bare;
                }
                conj.iter().all(|l| l.gen() < n && alph.is_a(l.gen()))
                    && sorted(conj)
                    && coherent_signs(conj).is_some()
                    && within_restriction(alph, None, conj)
            }
            ZElement::Commutator { lead, inner, conj } => {
                let b = lead.gen();
                if b >= n || !alph.is_a(b) || inner.is_empty() {
                    return false;
                }
                let all: Vec<Letter> = inner.iter().chain(conj).copied().collect();
                all.iter().all(|l| l.gen() < n && alph.is_a(l.gen()))
                    && inner.iter().all(|l| l.gen() < b)
                    && conj.iter().all(|l| l.gen() >= b)
                    && sorted(&all)
                    && coherent_signs(all.iter().chain(std::iter::once(lead))).is_some()
                    && within_restriction(alph, None, &all)
            }
        }
    }

    /// Rewrite as a product of members of `B ∪ U` using `c^a = c·[c,a]` and
    /// `[c, x·y] = [c,y]·[c,x]^y`. Valid for unrestricted alphabets, where
    /// every factor is admissible.
    pub fn to_u_terms(&self) -> Vec<CommutatorTerm> {
        match self {
            ZElement::Conjugate { base, conj } => {
                conjugate_expansion(CommutatorTerm::letter(Letter::pos(*base)), conj)
            }
            ZElement::Commutator { lead, inner, conj } => commutator_expansion(*lead, inner)
                .into_iter()
                .flat_map(|t| conjugate_expansion(t, conj))
                .collect(),
        }
    }

    pub fn format(&self, names: &[String]) -> String {
        let letters = |ls: &[Letter]| {
            ls.iter()
                .map(|l| {
                    let n = &names[l.gen() as usize];
                    if l.is_positive() {
                        n.clone()
                    } else {
                        format!("{n}^-1")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            ZElement::Conjugate { base, conj } if conj.is_empty() => names[*base as usize].clone(),
            ZElement::Conjugate { base, conj } => {
                format!("{}^({})", names[*base as usize], letters(conj))
            }
            ZElement::Commutator { lead, inner, conj } => {
                let c = format!("[{},{}]", letters(&[*lead]), letters(inner));
                if conj.is_empty() {
                    c
                } else {
                    format!("{c}^({})", letters(conj))
                }
            }
        }
    }
}

/// `c^(a1 … ak)` as a product of terms: `c^(a·r) = c^r · [c,a]^r`.
pub fn conjugate_expansion(c: CommutatorTerm, conj: &[Letter]) -> Vec<CommutatorTerm> {
    match conj.split_first() {
        None => vec![c],
        Some((&a, rest)) => {
            let mut out = conjugate_expansion(c.clone(), rest);
            out.extend(conjugate_expansion(c.extended(a), rest));
            out
        }
    }
}

/// `[b, a1 a2 … ap] = [b, a2 … ap] · [b,a1]^(a2 … ap)`.
pub fn commutator_expansion(b: Letter, u: &[Letter]) -> Vec<CommutatorTerm> {
    match u.split_first() {
        None => Vec::new(),
        Some((&a1, [])) => vec![CommutatorTerm::new(b, vec![a1])],
        Some((&a1, rest)) => {
            let mut out = commutator_expansion(b, rest);
            out.extend(conjugate_expansion(CommutatorTerm::new(b, vec![a1]), rest));
            out
        }
    }
}

/// `Z = Z1 ∪ Z2` with at most `max_conjugators` letters from `A`, sorted by
/// `q` then structure.
pub fn z_construction(alph: &OrderedAlphabet, max_conjugators: usize) -> Vec<ZElement> {
    let a = alph.a_symbols();
    let mut out = Vec::new();
    if max_conjugators == 0 {
        return out;
    }
    let none = BTreeMap::new();
    for b in alph.b_hat_symbols() {
        for conj in sorted_sequences(&a, max_conjugators, None, None, &none) {
            let z = ZElement::Conjugate { base: b, conj };
            if z.is_admissible(alph, false) {
                out.push(z);
            }
        }
    }
    for &b in &a {
        for sg in [1, -1] {
            let lead = Letter::new(b, sg);
            let below: Vec<u32> = a.iter().copied().filter(|&s| s < b).collect();
            let above: Vec<u32> = a.iter().copied().filter(|&s| s >= b).collect();
            let mut fixed = BTreeMap::new();
            fixed.insert(b, sg);
            for inner in sorted_sequences(&below, max_conjugators, None, None, &none) {
                let room = max_conjugators - inner.len();
                let mut conjs = vec![Vec::new()];
                if room > 0 {
                    conjs.extend(sorted_sequences(&above, room, None, None, &fixed));
                }
                for conj in conjs {
                    let z = ZElement::Commutator {
                        lead,
                        inner: inner.clone(),
                        conj,
                    };
                    if z.is_admissible(alph, false) {
                        out.push(z);
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| (x.q(), x).cmp(&(y.q(), y)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{fold_words, nielsen_reduce, GenTuple};

    fn names(alph: &OrderedAlphabet, ts: &[CommutatorTerm]) -> Vec<String> {
        ts.iter().map(|t| alph.format_term(t)).collect()
    }

    #[test]
    fn admissibility_examples() {
        let alph = OrderedAlphabet::plain(&["a"], &["b"]).unwrap();
        let (a, b) = (0, 1);
        let t = CommutatorTerm::new(Letter::pos(b), vec![Letter::pos(a), Letter::neg(a)]);
        assert!(!is_admissible(&t, &alph));
        let t = CommutatorTerm::new(Letter::pos(b), vec![Letter::pos(a), Letter::pos(a)]);
        assert!(is_admissible(&t, &alph));
        let t = CommutatorTerm::new(Letter::neg(b), vec![Letter::pos(a)]);
        assert!(!is_admissible(&t, &alph));

        let cfg = OrderedAlphabet::partitioned(&["x1"], &[2], &[], &[]).unwrap();
        let atom = cfg.index_of("x1^2").unwrap();
        let t = CommutatorTerm::new(Letter::pos(atom), vec![Letter::pos(0)]);
        assert!(!is_admissible(&t, &cfg));
    }

    #[test]
    fn u_examples() {
        let alph = OrderedAlphabet::plain(&["a"], &["b"]).unwrap();
        assert_eq!(
            names(&alph, &u_construction(&alph, 3)),
            vec!["[b,a]", "[b,a^-1]", "[b,a,a]", "[b,a^-1,a^-1]"]
        );
        let alph = OrderedAlphabet::plain(&["a1", "a2"], &[]).unwrap();
        assert_eq!(
            names(&alph, &u_construction(&alph, 2)),
            vec!["[a2,a1]", "[a2,a1^-1]", "[a2^-1,a1]", "[a2^-1,a1^-1]"]
        );
        let alph = OrderedAlphabet::plain(&[], &["b", "c"]).unwrap();
        assert!(u_construction(&alph, 5).is_empty());
    }

    fn check_rank_law(cfg: &OrderedAlphabet, expect: &[&str], index: usize) {
        let r = ru_construction(cfg, None).unwrap();
        assert!(r.complete);
        let mut shown: Vec<String> = r
            .b_hat
            .iter()
            .map(|&s| cfg.symbol(s).name.clone())
            .collect();
        shown.extend(names(cfg, &r.ru));
        assert_eq!(shown, expect);
        let defs = cfg.definitions();
        let words: Vec<Word> = r
            .b_hat
            .iter()
            .map(|&s| defs[s as usize].clone())
            .chain(r.ru.iter().map(|t| t.expand(&defs)))
            .collect();
        let g = fold_words(&words, cfg.ambient().len());
        assert_eq!(g.index(), Some(index));
        assert_eq!(g.rank(), words.len());
        assert_eq!(nielsen_reduce(&GenTuple::new(words).unwrap()).eliminated, 0);
    }

    #[test]
    fn ru_examples() {
        let cfg = OrderedAlphabet::partitioned(&["x"], &[2], &[], &["b"]).unwrap();
        check_rank_law(&cfg, &["b", "x^2", "[b,x]"], 2);
        let cfg = OrderedAlphabet::partitioned(&["x"], &[3], &[], &["b"]).unwrap();
        check_rank_law(&cfg, &["b", "x^3", "[b,x]", "[b,x^-1]"], 3);
        let cfg = OrderedAlphabet::partitioned(&["x1", "x2"], &[2, 2], &[], &[]).unwrap();
        check_rank_law(
            &cfg,
            &["x1^2", "x2^2", "[x2,x1]", "[x1^2,x2]", "[x2^2,x1]"],
            4,
        );
        let cfg = OrderedAlphabet::partitioned(&["x"], &[4], &[], &["b"]).unwrap();
        check_rank_law(&cfg, &["b", "x^4", "[b,x]", "[b,x^-1]", "[b,x,x]"], 4);
    }

    #[test]
    fn ru_requires_bound_with_free_part() {
        let cfg = OrderedAlphabet::partitioned(&["x"], &[2], &["y"], &[]).unwrap();
        assert!(ru_construction(&cfg, None).is_err());
        let r = ru_construction(&cfg, Some(3)).unwrap();
        assert!(!r.complete);
        assert!(r.ru.iter().all(|t| is_admissible(t, &cfg)));
    }

    #[test]
    fn z_examples() {
        let alph = OrderedAlphabet::plain(&["a"], &["b"]).unwrap();
        let n = alph.names();
        let z: Vec<String> = z_construction(&alph, 1)
            .iter()
            .map(|z| z.format(&n))
            .collect();
        assert_eq!(z, vec!["b^(a)", "b^(a^-1)"]);
        let alph = OrderedAlphabet::plain(&["a1", "a2"], &[]).unwrap();
        let n = alph.names();
        let z: Vec<String> = z_construction(&alph, 1)
            .iter()
            .map(|z| z.format(&n))
            .collect();
        assert_eq!(
            z,
            vec!["[a2,a1]", "[a2,a1^-1]", "[a2^-1,a1]", "[a2^-1,a1^-1]"]
        );
        let alph = OrderedAlphabet::plain(&[], &["b"]).unwrap();
        assert!(z_construction(&alph, 3).is_empty());
    }

    #[test]
    fn z_to_u_is_exact_and_admissible() {
        let alph = OrderedAlphabet::plain(&["a1", "a2"], &["b"]).unwrap();
        let defs = alph.definitions();
        for z in z_construction(&alph, 3) {
            let terms = z.to_u_terms();
            let ok = |t: &CommutatorTerm| {
                is_admissible(t, &alph)
                    || (t.tail.is_empty() && !alph.is_a(t.leading.gen()) && t.leading.is_positive())
            };
            assert!(terms.iter().all(ok), "{z:?}");
            let prod = terms
                .iter()
                .fold(Word::identity(), |acc, t| acc.multiply(&t.expand(&defs)));
            assert_eq!(prod, z.expand(&defs));
            assert!(terms.iter().all(|t| t.weight() <= 1 + z.q()));
        }
    }

    /// Independent generator: every letter sequence up to the bound, then a
    /// direct reading of the defining conditions.
    fn naive_u(alph: &OrderedAlphabet, max_weight: usize) -> Vec<CommutatorTerm> {
        let n = alph.len() as u32;
        let letters: Vec<Letter> = (0..n)
            .flat_map(|s| [Letter::pos(s), Letter::neg(s)])
            .collect();
        let mut out = Vec::new();
        let mut frontier: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
        for _ in 1..max_weight {
            let mut next = Vec::new();
            for seq in &frontier {
                for &l in &letters {
                    let mut s = seq.clone();
                    s.push(l);
                    let t = CommutatorTerm::new(s[0], s[1..].to_vec());
                    let ok = {
                        let all_a = t.tail.iter().all(|l| alph.is_a(l.gen()));
                        let ordered = t.leading.gen() > t.tail[0].gen()
                            && t.tail.windows(2).all(|w| w[0].gen() <= w[1].gen());
                        let mut seen: BTreeMap<u32, i32> = BTreeMap::new();
                        let mut coherent = true;
                        let mut entries = t.tail.clone();
                        if alph.is_a(t.leading.gen()) {
                            entries.push(t.leading);
                        }
                        for e in &entries {
                            if *seen.entry(e.gen()).or_insert(e.sign()) != e.sign() {
                                coherent = false;
                            }
                        }
                        let b_pos = alph.is_a(t.leading.gen()) || t.leading.is_positive();
                        all_a && ordered && coherent && b_pos
                    };
                    if ok {
                        out.push(t);
                    }
                    next.push(s);
                }
            }
            frontier = next;
        }
        sort_terms(&mut out);
        out
    }

    #[test]
    fn enumeration_matches_naive_oracle() {
        for (a, b) in [
            (vec!["a"], vec!["b"]),
            (vec!["a1", "a2"], vec![]),
            (vec!["a1", "a2"], vec!["b1"]),
            (vec!["a1"], vec!["b1", "b2"]),
            (vec!["a1", "a2"], vec!["b1", "b2"]),
        ] {
            let alph = OrderedAlphabet::plain(&a, &b).unwrap();
            assert_eq!(u_construction(&alph, 4), naive_u(&alph, 4), "{a:?} {b:?}");
        }
    }

    #[test]
    fn deterministic_order() {
        let alph = OrderedAlphabet::plain(&["a1", "a2"], &["b"]).unwrap();
        assert_eq!(u_construction(&alph, 4), u_construction(&alph, 4));
        let u = u_construction(&alph, 4);
        assert!(u.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
    }
}
