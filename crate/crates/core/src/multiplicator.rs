//! Generating sets for `R ∩ γ₂F`, `R′` and `(R ∩ γ₂F)/[R,F]` when `R` is
//! the kernel of a homomorphism onto a finite permutation group.
//!
//! A free basis of `R` comes from Reidemeister–Schreier over the Cayley
//! graph of the image; its abelianization gives exact coordinates in
//! `R/R′`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::commutator::CommutatorTerm;
use crate::constructions::{u_construction, OrderedAlphabet};
use crate::error::{Error, Result};
use crate::factor_basis::{basis_change, Verification};
use crate::lattice::{inverse_unimodular, smith_normal_form, to_bigints, ElemOp, IntMatrix};
use crate::lcs::{adapt_relators_weight1, Presentation, RelatorProduct};
use crate::subgroup::{fold_words, nielsen_reduce, GenTuple};
use crate::word::{Letter, Word};

/// Upper bound on the order of a permutation image.
pub const MAX_GROUP_ORDER: usize = 5040;

/// A permutation of `0..degree`, acting on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Permutation(self.0.iter().map(|&p| other.0[p]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut v = vec![0; self.degree()];
        for (i, &p) in self.0.iter().enumerate() {
            v[p] = i;
        }
        Permutation(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Parse cycle notation over points `1..=degree`, e.g. `(1 2)(3 4)` or `()`.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let mut v: Vec<usize> = (0..degree).collect();
        let s = s.trim();
        let mut rest = s;
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in permutation `{s}`")))?;
            let close = inner
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{s}`")))?;
            let pts: Vec<usize> = inner[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point `{t}` in `{s}`")))
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!("point {p} outside 1..={degree}")));
                }
            }
            let mut seen = std::collections::BTreeSet::new();
            if !pts.iter().all(|p| seen.insert(*p)) {
                return Err(Error::Parse(format!(
                    "repeated point in cycle `{}`",
                    &inner[..close]
                )));
            }
            for (k, &p) in pts.iter().enumerate() {
                v[p - 1] = pts[(k + 1) % pts.len()] - 1;
            }
            rest = inner[close + 1..].trim_start();
        }
        Ok(Permutation(v))
    }

    pub fn format(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cyc.push((p + 1).to_string());
                p = self.0[p];
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }
}

#[derive(Clone, Debug)]
pub struct FinitePresentation {
    pub presentation: Presentation,
    /// Images of the generators; `R` is taken to be the kernel.
    pub image: Option<Vec<Permutation>>,
}

impl FinitePresentation {
    pub fn new(presentation: Presentation, image: Option<Vec<Permutation>>) -> Result<Self> {
        if let Some(img) = &image {
            if img.len() != presentation.rank() {
                return Err(Error::Invalid(format!(
                    "{} generator images for rank {}",
                    img.len(),
                    presentation.rank()
                )));
            }
            let deg = img.first().map_or(0, Permutation::degree);
            if img.iter().any(|p| p.degree() != deg) {
                return Err(Error::Invalid(
                    "generator images have different degrees".into(),
                ));
            }
            for (i, r) in presentation.relators.iter().enumerate() {
                if !evaluate(img, r, deg).is_identity() {
                    return Err(Error::RelatorNotInKernel(i + 1));
                }
            }
        }
        Ok(FinitePresentation {
            presentation,
            image,
        })
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }
}

fn evaluate(img: &[Permutation], w: &Word, degree: usize) -> Permutation {
    w.letters()
        .iter()
        .fold(Permutation::identity(degree), |acc, l| {
            let p = &img[l.gen() as usize];
            acc.then(&if l.is_positive() {
                p.clone()
            } else {
                p.inverse()
            })
        })
}

/// Cayley graph of the image with a BFS spanning tree, and the resulting
/// free basis of the kernel.
#[derive(Clone, Debug)]
pub struct SchreierBasis {
    rank: usize,
    /// `action[g][x]`: element reached from `g` by generator `x`.
    action: Vec<Vec<usize>>,
    inverse_action: Vec<Vec<usize>>,
    pub transversal: Vec<Word>,
    /// Index in `words` of the generator on edge `(g, x)`, or `None` on tree
    /// edges.
    edge_gen: Vec<Vec<Option<usize>>>,
    pub words: Vec<Word>,
}

impl SchreierBasis {
    pub fn order(&self) -> usize {
        self.action.len()
    }

    /// The word over basis indices (signed) representing `w`, if `w ∈ R`.
    pub fn rewrite(&self, w: &Word) -> Option<Vec<(usize, i32)>> {
        let mut g = 0usize;
        let mut out: Vec<(usize, i32)> = Vec::new();
        let push = |i: usize, s: i32, out: &mut Vec<(usize, i32)>| match out.last() {
            Some(&(j, t)) if j == i && t == -s => {
                out.pop();
            }
            _ => out.push((i, s)),
        };
        for l in w.letters() {
            let x = l.gen() as usize;
            if l.is_positive() {
                if let Some(i) = self.edge_gen[g][x] {
                    push(i, 1, &mut out);
                }
                g = self.action[g][x];
            } else {
                let h = self.inverse_action[g][x];
                if let Some(i) = self.edge_gen[h][x] {
                    push(i, -1, &mut out);
                }
                g = h;
            }
        }
        (g == 0).then_some(out)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.rewrite(w).is_some()
    }

    /// Coordinates of `w ∈ R` in `R/R′ ≅ ℤ^rank(R)`.
    pub fn coordinates(&self, w: &Word) -> Result<Vec<i64>> {
        let rw = self
            .rewrite(w)
            .ok_or_else(|| Error::Verification("word is not in the kernel".into()))?;
        let mut v = vec![0i64; self.words.len()];
        for (i, s) in rw {
            v[i] += s as i64;
        }
        Ok(v)
    }

    pub fn in_derived(&self, w: &Word) -> bool {
        self.coordinates(w).is_ok_and(|v| v.iter().all(|&x| x == 0))
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }
}

pub fn schreier_basis(fp: &FinitePresentation) -> Result<SchreierBasis> {
    let img = fp.image.as_ref().ok_or(Error::MissingImage)?;
    let n = fp.rank();
    let deg = img.first().map_or(0, Permutation::degree);
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    let mut elems = vec![Permutation::identity(deg)];
    let mut transversal = vec![Word::identity()];
    index.insert(elems[0].clone(), 0);
    let mut action: Vec<Vec<usize>> = Vec::new();
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        let mut row = Vec::with_capacity(n);
        let mut tree_row = Vec::with_capacity(n);
        for (x, p) in img.iter().enumerate() {
            let h = elems[g].then(p);
            let (k, fresh) = match index.get(&h) {
                Some(&k) => (k, false),
                None => {
                    let k = elems.len();
                    if k >= MAX_GROUP_ORDER {
                        return Err(Error::Invalid(format!(
                            "image has more than {MAX_GROUP_ORDER} elements"
                        )));
                    }
                    index.insert(h.clone(), k);
                    elems.push(h);
                    transversal.push(transversal[g].multiply(&Word::gen(x as u32)));
                    queue.push_back(k);
                    (k, true)
                }
            };
            row.push(k);
            tree_row.push(fresh);
        }
        if action.len() <= g {
            action.resize(g + 1, Vec::new());
            tree.resize(g + 1, Vec::new());
        }
        action[g] = row;
        tree[g] = tree_row;
    }
    let mut words = Vec::new();
    let mut edge_gen = vec![vec![None; n]; elems.len()];
    for g in 0..elems.len() {
        for x in 0..n {
            if tree[g][x] {
                continue;
            }
            let h = action[g][x];
            let w = transversal[g]
                .multiply(&Word::gen(x as u32))
                .multiply(&transversal[h].inverse());
            edge_gen[g][x] = Some(words.len());
            words.push(w);
        }
    }
    let mut inverse_action = vec![vec![0; n]; elems.len()];
    for (g, row) in action.iter().enumerate() {
        for (x, &h) in row.iter().enumerate() {
            inverse_action[h][x] = g;
        }
    }
    Ok(SchreierBasis {
        rank: n,
        action,
        inverse_action,
        transversal,
        edge_gen,
        words,
    })
}

/// The free basis of `R` adapted to `F/F′`, with the bases of `R ∩ F′` and `R′` built on it.
#[derive(Clone, Debug)]
pub struct SchurBases {
    pub schreier: SchreierBasis,
    /// New free basis of `F` (words in the original generators).
    pub f_generators: Vec<Word>,
    /// Original generators in terms of the new basis.
    pub f_inverse: Vec<Word>,
    /// `(w_i, α_i)` with `w_i ≡ x_i^{α_i} mod F′` in the new basis.
    pub w1: Vec<(Word, i64)>,
    /// Basis members of `R` lying in `F′`.
    pub w2: Vec<Word>,
    /// `R/R′` coordinates change: coordinates over `W1 ∪ W2` are the
    /// Schreier coordinates times this matrix.
    to_adapted: IntMatrix,
    /// Symbols `a_i = w_i`, `b_j` = W2 members.
    pub alphabet: OrderedAlphabet,
    pub u1: Vec<CommutatorTerm>,
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Invalid(format!("coefficient {x} is too large")))
}

fn named(prefix: &str, ws: &[Word]) -> Vec<(String, Word)> {
    ws.iter()
        .enumerate()
        .map(|(i, w)| (format!("{prefix}{}", i + 1), w.clone()))
        .collect()
}

pub fn schur_bases(fp: &FinitePresentation, max_weight: usize) -> Result<SchurBases> {
    let schreier = schreier_basis(fp)?;
    let n = fp.rank();
    let rows: Vec<Vec<i64>> = schreier
        .words
        .iter()
        .map(|w| w.exponent_vector(n))
        .collect();
    let snf = smith_normal_form(&IntMatrix::from_i64_rows(&rows, n)?);
    let mut basis = schreier.words.clone();
    for op in &snf.row_ops {
        match op {
            ElemOp::Swap(i, j) => basis.swap(*i, *j),
            ElemOp::Negate(i) => basis[*i] = basis[*i].inverse(),
            ElemOp::Add {
                target,
                source,
                factor,
            } => {
                basis[*target] = basis[*source].pow(small(factor)?).multiply(&basis[*target]);
            }
        }
    }
    let (_, f_generators, f_inverse) = basis_change(&snf.col_ops, n)?;
    let rank = snf.rank();
    let diag = snf.diagonal();
    let w1: Vec<(Word, i64)> = basis[..rank]
        .iter()
        .zip(&diag)
        .map(|(w, d)| Ok((w.clone(), small(d)?)))
        .collect::<Result<_>>()?;
    let w2 = basis[rank..].to_vec();
    let to_adapted = inverse_unimodular(&snf.u)?;
    let a: Vec<Word> = w1.iter().map(|(w, _)| w.clone()).collect();
    let alphabet = OrderedAlphabet::from_words(
        fp.presentation.alphabet.clone(),
        Vec::new(),
        &[],
        named("a", &a),
        named("b", &w2),
    )?;
    let u1 = u_construction(&alphabet, max_weight);
    Ok(SchurBases {
        schreier,
        f_generators,
        f_inverse,
        w1,
        w2,
        to_adapted,
        alphabet,
        u1,
    })
}

impl SchurBases {
    pub fn u1_words(&self) -> Vec<Word> {
        let defs = self.alphabet.definitions();
        self.u1.iter().map(|t| t.expand(&defs)).collect()
    }

    /// `W2 ∪ U1`, a (truncated) free basis of `R ∩ γ₂F`.
    pub fn r_cap_f2_basis(&self) -> Vec<Word> {
        self.w2.iter().cloned().chain(self.u1_words()).collect()
    }

    /// Coordinates of `w ∈ R` in `R/R′` over the adapted basis `W1 ∪ W2`.
    pub fn adapted_coordinates(&self, w: &Word) -> Result<Vec<i64>> {
        let v = self.schreier.coordinates(w)?;
        self.to_adapted
            .left_apply(&to_bigints(&v))
            .iter()
            .map(small)
            .collect()
    }

    /// The `R′` side: `U1 ∪ U(A, B = U1)` up to `max_weight` (in symbols),
    /// with `A = W2`, or `A = W1` for the alternative reading.
    pub fn r_prime_basis(
        &self,
        max_weight: usize,
        use_w1: bool,
    ) -> Result<(OrderedAlphabet, Vec<Word>)> {
        let a: Vec<Word> = if use_w1 {
            self.w1.iter().map(|(w, _)| w.clone()).collect()
        } else {
            self.w2.clone()
        };
        let names = self.alphabet.names();
        let b: Vec<(String, Word)> = self
            .u1
            .iter()
            .zip(self.u1_words())
            .map(|(t, w)| (t.format(&names), w))
            .collect();
        let alph = OrderedAlphabet::from_words(
            self.alphabet.ambient().clone(),
            Vec::new(),
            &[],
            named(if use_w1 { "a" } else { "b" }, &a),
            b,
        )?;
        let defs = alph.definitions();
        let mut words: Vec<Word> = alph
            .b_hat_symbols()
            .iter()
            .map(|&s| defs[s as usize].clone())
            .collect();
        words.extend(
            u_construction(&alph, max_weight)
                .iter()
                .map(|t| t.expand(&defs)),
        );
        Ok((alph, words))
    }

    pub fn verify(&self, max_weight_r_prime: usize, use_w1: bool) -> Result<Verification> {
        let mut v = Verification::default();
        let n = self.schreier.ambient_rank();
        let g = fold_words(&self.schreier.words, n);
        v.check(
            g.index() == Some(self.schreier.order()),
            "Schreier basis has the wrong index",
        );
        v.check(
            self.schreier.words.len() == 1 + self.schreier.order() * n.saturating_sub(1),
            "Schreier basis has the wrong size",
        );
        for (i, (w, a)) in self.w1.iter().enumerate() {
            let e = w.substitute(&self.f_inverse).exponent_vector(n);
            let mut unit = vec![0; n];
            unit[i] = *a;
            v.check(
                e == unit,
                format!("W1 member {} is not congruent to a power", i + 1),
            );
        }
        let inner = self.r_cap_f2_basis();
        for w in &inner {
            v.check(self.schreier.contains(w), "member outside R");
            v.check(
                w.exponent_vector(n).iter().all(|&x| x == 0),
                "member outside F′",
            );
        }
        v.check(independent(&inner), "W2 ∪ U1 is not independent");
        let (_, rp) = self.r_prime_basis(max_weight_r_prime, use_w1)?;
        for w in &rp {
            v.check(self.schreier.in_derived(w), "R′ generator outside R′");
        }
        v.check(independent(&rp), "R′ generators are not independent");
        Ok(v)
    }
}

/// Largest set also checked by Nielsen reduction on top of folding.
const NIELSEN_CHECK_LIMIT: usize = 64;

/// `k` nontrivial words freely generate a free group exactly when their
/// folded graph has rank `k`.
fn independent(words: &[Word]) -> bool {
    let Ok(t) = GenTuple::new(words.to_vec()) else {
        return false;
    };
    let n = words
        .iter()
        .filter_map(Word::max_gen)
        .max()
        .map_or(0, |g| g as usize + 1);
    if fold_words(words, n).rank() != words.len() {
        return false;
    }
    words.len() > NIELSEN_CHECK_LIMIT || nielsen_reduce(&t).is_independent()
}

/// Generators of `(R ∩ γ₂F)/[R,F]`.
#[derive(Clone, Debug, Default)]
pub struct WGenerators {
    /// Relator combinations with zero exponent sums.
    pub t: Vec<RelatorProduct>,
    /// `T` after the adapting moves.
    pub t_adapted: Vec<RelatorProduct>,
    /// `(ŵ_i, β_i)`.
    pub w_hat: Vec<(Word, i64)>,
    /// `ŵ_i^{β_i}`.
    pub w: Vec<Word>,
}

/// Relator products with their weight-1 multipliers.
pub type Weight1Relators = Vec<(RelatorProduct, i64)>;

pub fn t_generators(p: &Presentation) -> Result<(Weight1Relators, Vec<RelatorProduct>)> {
    let ad = adapt_relators_weight1(p)?;
    Ok((ad.weight1, ad.residual))
}

pub fn w_generators(fp: &FinitePresentation) -> Result<WGenerators> {
    let p = &fp.presentation;
    let (_, t) = t_generators(p)?;
    if t.is_empty() {
        return Ok(WGenerators::default());
    }
    let bases = schur_bases(fp, 1)?;
    let s = bases.w1.len();
    let m = bases.w2.len();
    let mut rows = Vec::new();
    for (i, r) in t.iter().enumerate() {
        let coords = bases.adapted_coordinates(&r.expand(&p.relators))?;
        if coords[..s].iter().any(|&x| x != 0) {
            return Err(Error::Verification(format!(
                "T member {} has a W1 component",
                i + 1
            )));
        }
        rows.push(coords[s..].to_vec());
    }
    let k = IntMatrix::from_i64_rows(&rows, m)?;
    let snf = smith_normal_form(&k);
    let mut t_adapted = t.clone();
    for op in &snf.row_ops {
        match op {
            ElemOp::Swap(i, j) => t_adapted.swap(*i, *j),
            ElemOp::Negate(i) => t_adapted[*i] = t_adapted[*i].inverse(),
            ElemOp::Add {
                target,
                source,
                factor,
            } => {
                t_adapted[*target] = t_adapted[*source]
                    .pow(small(factor)?)
                    .multiply(&t_adapted[*target]);
            }
        }
    }
    let vinv = inverse_unimodular(&snf.v)?;
    let diag = snf.diagonal();
    let mut w_hat = Vec::new();
    let mut w = Vec::new();
    for (i, d) in diag.iter().enumerate().take(snf.rank()) {
        let mut word = Word::identity();
        for (j, c) in vinv.row(i).iter().enumerate() {
            if !c.is_zero() {
                word = word.multiply(&bases.w2[j].pow(small(c)?));
            }
        }
        let beta = small(d)?;
        let powered = word.pow(beta);
        // r′_i ≡ ŵ_i^{β_i} mod R′
        let lhs = bases
            .schreier
            .coordinates(&t_adapted[i].expand(&p.relators))?;
        if lhs != bases.schreier.coordinates(&powered)? {
            return Err(Error::Verification(format!(
                "adapted T member {} disagrees modulo R′",
                i + 1
            )));
        }
        w_hat.push((word, beta));
        w.push(powered);
    }
    Ok(WGenerators {
        t,
        t_adapted,
        w_hat,
        w,
    })
}

/// Random element of `R ∩ γ₂F` as a word over the symbols of
/// `bases.alphabet` (with zero `W1` exponent sums).
pub fn random_r_cap_f2_symbols<R: rand::Rng>(bases: &SchurBases, rng: &mut R, len: usize) -> Word {
    let n = bases.alphabet.len() as u32;
    let s = bases.w1.len();
    let mut letters: Vec<Letter> = (0..len)
        .map(|_| Letter::new(rng.gen_range(0..n), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    let mut word = Word::from_letters(letters.drain(..));
    let ev = word.exponent_vector(n as usize);
    for (a, &e) in ev.iter().enumerate().take(s) {
        word = word.multiply(&Word::gen(a as u32).pow(-e));
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collector::collect;
    use crate::nilpotent::class2_normal_form;
    use crate::word::Alphabet;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn fp(n: usize, rels: &[&str], img: Option<&[&str]>, degree: usize) -> FinitePresentation {
        let a = Alphabet::standard(n);
        let rs = rels
            .iter()
            .map(|r| crate::commutator::parse_element(&a, r).unwrap())
            .collect();
        let p = Presentation::new(a, rs).unwrap();
        let img = img.map(|v| {
            v.iter()
                .map(|s| Permutation::parse(s, degree).unwrap())
                .collect()
        });
        FinitePresentation::new(p, img).unwrap()
    }

    fn klein() -> FinitePresentation {
        fp(
            2,
            &["x1^2", "x2^2", "x1 x2 x1 x2"],
            Some(&["(1 2)", "(3 4)"]),
            4,
        )
    }

    #[test]
    fn permutations() {
        let p = Permutation::parse("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.0, vec![1, 2, 0, 4, 3]);
        assert_eq!(p.format(), "(1 2 3)(4 5)");
        assert!(p.then(&p.inverse()).is_identity());
        assert!(Permutation::parse("(1 6)", 5).is_err());
        assert!(Permutation::parse("()", 3).unwrap().is_identity());
    }

    #[test]
    fn relator_outside_kernel() {
        let a = Alphabet::standard(1);
        let p = Presentation::new(a, vec![Word::gen(0)]).unwrap();
        let img = vec![Permutation::parse("(1 2)", 2).unwrap()];
        assert!(matches!(
            FinitePresentation::new(p, Some(img)),
            Err(Error::RelatorNotInKernel(1))
        ));
    }

    #[test]
    fn schreier_examples() {
        let f = fp(2, &["x1^2", "x2"], Some(&["(1 2)", "()"]), 2);
        let sb = schreier_basis(&f).unwrap();
        assert_eq!(sb.words.len(), 3);
        assert_eq!(fold_words(&sb.words, 2).index(), Some(2));
        let f = fp(1, &["x1^3"], Some(&["(1 2 3)"]), 3);
        assert_eq!(schreier_basis(&f).unwrap().words, vec![Word::gen(0).pow(3)]);
        let sb = schreier_basis(&klein()).unwrap();
        assert_eq!(sb.words.len(), 5);
        assert_eq!(fold_words(&sb.words, 2).index(), Some(4));
        let f = fp(2, &["x1^2"], None, 0);
        assert!(matches!(schreier_basis(&f), Err(Error::MissingImage)));
    }

    #[test]
    fn rewriting_is_exact() {
        let sb = schreier_basis(&klein()).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let p = &klein().presentation;
        for _ in 0..50 {
            let w = crate::lcs::random_relator_product(p, &mut rng, 5, 3).expand(&p.relators);
            let rw = sb.rewrite(&w).unwrap();
            let back = rw.iter().fold(Word::identity(), |acc, &(i, s)| {
                acc.multiply(&if s > 0 {
                    sb.words[i].clone()
                } else {
                    sb.words[i].inverse()
                })
            });
            assert_eq!(back, w);
        }
        assert!(sb.rewrite(&Word::gen(0)).is_none());
    }

    #[test]
    fn schur_bases_examples() {
        let f = fp(2, &["x1^2", "x2"], Some(&["(1 2)", "()"]), 2);
        let b = schur_bases(&f, 3).unwrap();
        let alphas: Vec<i64> = b.w1.iter().map(|(_, a)| *a).collect();
        assert_eq!(alphas, vec![1, 2]);
        assert_eq!(b.w2.len(), 1);
        let c = class2_normal_form(&b.w2[0], 2).unwrap();
        assert_eq!(
            (c.e, c.c.iter().map(|x| x.abs()).collect::<Vec<_>>()),
            (vec![0, 0], vec![1])
        );
        assert!(b.verify(3, false).unwrap().ok());

        let f = fp(1, &["x1^2"], Some(&["(1 2)"]), 2);
        let b = schur_bases(&f, 4).unwrap();
        assert_eq!(b.w1.len(), 1);
        assert!(b.w2.is_empty() && b.u1.is_empty());

        // With A = W1 the weight-3 terms repeat U1 members, e.g. [[b,a],a].
        let f = fp(2, &["x1^2", "x2"], Some(&["(1 2)", "()"]), 2);
        let b = schur_bases(&f, 3).unwrap();
        assert!(!b.verify(3, true).unwrap().ok());

        let b = schur_bases(&klein(), 3).unwrap();
        assert_eq!((b.w1.len(), b.w2.len()), (2, 3));
        let v = b.verify(3, false).unwrap();
        assert!(v.ok(), "{:?}", v.failures);
    }

    #[test]
    fn w_examples() {
        let w = w_generators(&klein()).unwrap();
        assert_eq!(w.w.len(), 1);
        let c = class2_normal_form(&w.w[0], 2).unwrap();
        assert_eq!(c.e, vec![0, 0]);
        assert_eq!(c.c[0].abs(), 1);
        assert!(schreier_basis(&klein()).unwrap().contains(&w.w[0]));

        let f = fp(2, &["x1^2"], None, 0);
        assert!(w_generators(&f).unwrap().w.is_empty());
        let f = fp(1, &["x1^3"], Some(&["(1 2 3)"]), 3);
        assert!(w_generators(&f).unwrap().w.is_empty());
    }

    #[test]
    fn w1_coefficient_sums_vanish_after_collection() {
        let b = schur_bases(&klein(), 2).unwrap();
        let plain = OrderedAlphabet::plain(&["a1", "a2"], &["b1", "b2", "b3"]).unwrap();
        let defs = b.alphabet.definitions();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let sym = random_r_cap_f2_symbols(&b, &mut rng, 10);
            let r = collect(&sym, &plain).unwrap();
            assert!(r.front.iter().all(|&e| e == 0));
            let w = sym.substitute(&defs);
            assert!(w.exponent_vector(2).iter().all(|&e| e == 0));
            assert_eq!(r.tail_word(&plain).substitute(&defs), w);
        }
    }
}
