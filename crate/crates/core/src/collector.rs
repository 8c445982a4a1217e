//! Collection: write a word as `a1^α1 … an^αn · w` with `w` a product of
//! constructed tokens.
//!
//! Collection works right to left against the transversal of sorted
//! monomials over `A`: every letter contributes the factor
//! `rep(g·t)⁻¹ · g · t`, where `t` is the monomial representing the suffix
//! already processed. For a letter of `B` this is the conjugate `b^t`; for a
//! letter `x^ε` of `A` with `t = u·x^k·w` it is `[x^ε, u]^(x^k w)` (with a
//! sign flip when `k` and `ε` disagree, and a power atom when a pseudo-order
//! wraps). In the unrestricted case these tokens are further rewritten as
//! products of U-terms and cancelled, which yields the unique reduced
//! expression over `B ∪ U`.

use crate::commutator::CommutatorTerm;
use crate::constructions::{OrderedAlphabet, SymbolKind, ZElement};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// A tail token: a member of `B ∪ U` (an empty tail is a bare `B` letter)
/// or, for restricted collection, of `B̂ ∪ Ẑ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    U(CommutatorTerm),
    Z(ZElement),
}

impl Token {
    pub fn expand(&self, defs: &[Word]) -> Word {
        match self {
            Token::U(t) => t.expand(defs),
            Token::Z(z) => z.expand(defs),
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            Token::U(t) => t.weight(),
            Token::Z(z) => 1 + z.q(),
        }
    }

    pub fn format(&self, names: &[String]) -> String {
        match self {
            Token::U(t) => t.format(names),
            Token::Z(z) => z.format(names),
        }
    }

    /// Admissible in the relevant construction, or a bare `B̂` member.
    pub fn is_certified(&self, alph: &OrderedAlphabet) -> bool {
        match self {
            Token::U(t) if t.tail.is_empty() => {
                !alph.is_a(t.leading.gen()) && t.leading.is_positive()
            }
            Token::U(t) => crate::constructions::is_admissible(t, alph),
            Token::Z(z) => z.is_admissible(alph, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollectionResult {
    /// Exponents of the `A` symbols, in alphabet order.
    pub front: Vec<i64>,
    /// Signed tokens (`±1`), freely reduced at token level.
    pub tail: Vec<(Token, i32)>,
}

impl CollectionResult {
    pub fn front_word(&self) -> Word {
        let mut w = Word::identity();
        for (s, &e) in self.front.iter().enumerate() {
            w = w.multiply(&Word::gen(s as u32).pow(e));
        }
        w
    }

    pub fn tail_word(&self, alph: &OrderedAlphabet) -> Word {
        let defs = alph.definitions();
        self.tail.iter().fold(Word::identity(), |acc, (t, s)| {
            let w = t.expand(&defs);
            acc.multiply(&if *s > 0 { w } else { w.inverse() })
        })
    }

    pub fn reassemble(&self, alph: &OrderedAlphabet) -> Word {
        self.front_word().multiply(&self.tail_word(alph))
    }

    pub fn max_weight(&self) -> usize {
        self.tail.iter().map(|(t, _)| t.weight()).max().unwrap_or(0)
    }

    /// Distinct tokens with their definitions, in order of first appearance.
    pub fn dictionary(&self, alph: &OrderedAlphabet) -> Vec<(String, Word)> {
        let defs = alph.definitions();
        let names = alph.names();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for (t, _) in &self.tail {
            if seen.insert(t.clone()) {
                out.push((t.format(&names), t.expand(&defs)));
            }
        }
        out
    }

    pub fn format_tail(&self, alph: &OrderedAlphabet) -> String {
        let names = alph.names();
        let parts: Vec<String> = self
            .tail
            .iter()
            .map(|(t, s)| {
                let f = t.format(&names);
                if *s > 0 {
                    f
                } else {
                    format!("{f}^-1")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

fn check_plain(alph: &OrderedAlphabet) -> Result<()> {
    for (i, s) in alph.symbols().iter().enumerate() {
        if matches!(s.kind, SymbolKind::Power { .. }) {
            continue;
        }
        if s.definition != Word::gen(i as u32) {
            return Err(Error::Invalid(format!(
                "symbol `{}` is not a free generator; collection needs generator symbols",
                s.name
            )));
        }
    }
    Ok(())
}

fn check_word(y: &Word, alph: &OrderedAlphabet) -> Result<()> {
    for l in y.letters() {
        let s = l.gen();
        if s as usize >= alph.len() || matches!(alph.symbol(s).kind, SymbolKind::Power { .. }) {
            return Err(Error::OutsideAlphabet(s));
        }
    }
    Ok(())
}

/// Balanced residue: `|k| ≤ γ/2`, positive at the bound.
fn balance(k: i64, gamma: u32) -> i64 {
    let g = gamma as i64;
    let r = k.rem_euclid(g);
    if 2 * r > g {
        r - g
    } else {
        r
    }
}

fn monomial_letters(exps: &[i64], range: std::ops::Range<usize>) -> Vec<Letter> {
    let mut out = Vec::new();
    for s in range {
        let e = exps[s];
        if e == 0 {
            continue;
        }
        let l = Letter::new(s as u32, e.signum() as i32);
        out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
    }
    out
}

fn atom_of(alph: &OrderedAlphabet, base: u32) -> u32 {
    alph.symbols()
        .iter()
        .position(|s| matches!(s.kind, SymbolKind::Power { base: b, .. } if b == base))
        .expect("every A1 symbol has an atom") as u32
}

/// Schreier rewriting against the (balanced, when restricted) monomial
/// transversal. Returns the exponents of `rep(y)` and signed Z-tokens with
/// `y = rep(y) · Π tokens`.
fn schreier(y: &Word, alph: &OrderedAlphabet) -> (Vec<i64>, Vec<(ZElement, i32)>) {
    let n_a = alph.a_symbols().len();
    let mut t = vec![0i64; n_a];
    let mut factors: Vec<Vec<(ZElement, i32)>> = Vec::with_capacity(y.len());
    for &g in y.letters().iter().rev() {
        let s = g.gen() as usize;
        let mut f = Vec::new();
        if s >= n_a {
            let conj = monomial_letters(&t, 0..n_a);
            f.push((
                ZElement::Conjugate {
                    base: g.gen(),
                    conj,
                },
                g.sign(),
            ));
        } else {
            let eps = g.sign() as i64;
            let k = t[s];
            let u = monomial_letters(&t, 0..s);
            let w = monomial_letters(&t, s + 1..n_a);
            let mut next = k + eps;
            if let Some(gamma) = alph.gamma(g.gen()) {
                let b = balance(next, gamma);
                if b != next {
                    let atom = atom_of(alph, g.gen());
                    f.push((
                        ZElement::Conjugate {
                            base: atom,
                            conj: w.clone(),
                        },
                        g.sign(),
                    ));
                    next = b;
                }
            }
            if !u.is_empty() {
                let power = |e: i64| {
                    monomial_letters(&[e], 0..1)
                        .into_iter()
                        .map(|l| Letter::new(g.gen(), l.sign()))
                };
                if k.signum() == -eps {
                    let conj: Vec<Letter> = power(k + eps).chain(w.iter().copied()).collect();
                    f.push((
                        ZElement::Commutator {
                            lead: g.inverse(),
                            inner: u,
                            conj,
                        },
                        -1,
                    ));
                } else {
                    let conj: Vec<Letter> = power(k).chain(w.iter().copied()).collect();
                    f.push((
                        ZElement::Commutator {
                            lead: g,
                            inner: u,
                            conj,
                        },
                        1,
                    ));
                }
            }
            t[s] = next;
        }
        factors.push(f);
    }
    let tokens = factors.into_iter().rev().flatten().collect();
    (t, tokens)
}

fn reduce_tokens<T: PartialEq>(seq: impl IntoIterator<Item = (T, i32)>) -> Vec<(T, i32)> {
    let mut out: Vec<(T, i32)> = Vec::new();
    for (t, s) in seq {
        if let Some((last, ls)) = out.last() {
            if *last == t && *ls == -s {
                out.pop();
                continue;
            }
        }
        out.push((t, s));
    }
    out
}

/// Collect `y` over a plain alphabet `(A, B)`. The tail is the reduced
/// expression of `front⁻¹·y` over `B ∪ U`.
pub fn collect(y: &Word, alph: &OrderedAlphabet) -> Result<CollectionResult> {
    if alph.is_restricted() {
        return Err(Error::Invalid(
            "alphabet has pseudo-orders; use restricted collection".into(),
        ));
    }
    check_plain(alph)?;
    check_word(y, alph)?;
    let (front, z) = schreier(y, alph);
    let u = z.into_iter().flat_map(|(z, s)| {
        let terms = z.to_u_terms();
        let v: Vec<(Token, i32)> = if s > 0 {
            terms.into_iter().map(|t| (Token::U(t), 1)).collect()
        } else {
            terms.into_iter().rev().map(|t| (Token::U(t), -1)).collect()
        };
        v
    });
    Ok(CollectionResult {
        front,
        tail: reduce_tokens(u),
    })
}

/// Collect `y` against a restricted configuration: `A1` front exponents lie
/// in `[0, γ)`, tail tokens lie in `B̂ ∪ Ẑ` with conjugating exponents of
/// each `x ∈ A1` bounded by `γ/2` in absolute value.
pub fn collect_restricted(y: &Word, cfg: &OrderedAlphabet) -> Result<CollectionResult> {
    check_plain(cfg)?;
    check_word(y, cfg)?;
    let n_a = cfg.a_symbols().len();
    let ev = y.exponent_vector(n_a);
    let front: Vec<i64> = (0..n_a)
        .map(|s| match cfg.gamma(s as u32) {
            Some(g) => ev[s].rem_euclid(g as i64),
            None => ev[s],
        })
        .collect();
    let shifted = CollectionResult {
        front: front.clone(),
        tail: Vec::new(),
    }
    .front_word()
    .inverse()
    .multiply(y);
    let (rest, z) = schreier(&shifted, cfg);
    debug_assert!(rest.iter().all(|&e| e == 0));
    let tail = reduce_tokens(z.into_iter().map(|(z, s)| (Token::Z(z), s)));
    Ok(CollectionResult { front, tail })
}

/// Membership in `⟨B ∪ U⟩`, with the tail as certificate.
pub fn member_of_y(y: &Word, alph: &OrderedAlphabet) -> Result<(bool, CollectionResult)> {
    let r = collect(y, alph)?;
    Ok((r.front.iter().all(|&e| e == 0), r))
}

/// Membership in `⟨B̂ ∪ RU⟩`.
pub fn member_of_y_restricted(y: &Word, cfg: &OrderedAlphabet) -> Result<(bool, CollectionResult)> {
    let r = collect_restricted(y, cfg)?;
    Ok((r.front.iter().all(|&e| e == 0), r))
}
