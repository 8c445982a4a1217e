//! Relative lower central factors of a presentation `F/R`: relators adapted
//! so that `w_i ≡ x_i^{d_i} mod γ₂F`, the weight-2 relative basics spanning
//! `R̄ ∩ γ₂N` in the class-2 quotient `N = F/γ₃F`, and unique expressions
//! of elements of `R` modulo `R ∩ γ₃F`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::factor_basis::{basis_change, BasisMove};
use crate::lattice::{inverse_unimodular, smith_normal_form, ElemOp, IntMatrix};
use crate::nilpotent::{basic_commutators, class2_normal_form, format_basic, Class2Coords};
use crate::word::{commutator, Alphabet, Word};

#[derive(Clone, Debug)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        for (i, r) in relators.iter().enumerate() {
            if r.is_identity() {
                return Err(Error::Invalid(format!("relator {} is trivial", i + 1)));
            }
            if let Some(g) = r.max_gen() {
                if g as usize >= alphabet.len() {
                    return Err(Error::OutsideAlphabet(g));
                }
            }
        }
        Ok(Presentation { alphabet, relators })
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }
}

/// One factor `(r_i^sign)^conj` of a product of conjugated relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorFactor {
    pub relator: usize,
    pub sign: i32,
    pub conj: Word,
}

/// A product of conjugated relators, an element of `R` by construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelatorProduct(pub Vec<RelatorFactor>);

impl RelatorProduct {
    pub fn relator(i: usize) -> Self {
        RelatorProduct(vec![RelatorFactor {
            relator: i,
            sign: 1,
            conj: Word::identity(),
        }])
    }

    pub fn expand(&self, relators: &[Word]) -> Word {
        self.0.iter().fold(Word::identity(), |acc, f| {
            let r = &relators[f.relator];
            let r = if f.sign > 0 { r.clone() } else { r.inverse() };
            acc.multiply(&r.conjugate(&f.conj))
        })
    }

    /// Concatenation, cancelling adjacent inverse factors.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        for f in &other.0 {
            match v.last() {
                Some(l) if l.relator == f.relator && l.sign == -f.sign && l.conj == f.conj => {
                    v.pop();
                }
                _ => v.push(f.clone()),
            }
        }
        RelatorProduct(v)
    }

    pub fn inverse(&self) -> Self {
        RelatorProduct(
            self.0
                .iter()
                .rev()
                .map(|f| RelatorFactor {
                    relator: f.relator,
                    sign: -f.sign,
                    conj: f.conj.clone(),
                })
                .collect(),
        )
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e >= 0 { self.clone() } else { self.inverse() };
        let mut out = RelatorProduct::default();
        for _ in 0..e.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    pub fn conjugate(&self, by: &Word) -> Self {
        RelatorProduct(
            self.0
                .iter()
                .map(|f| RelatorFactor {
                    relator: f.relator,
                    sign: f.sign,
                    conj: f.conj.multiply(by),
                })
                .collect(),
        )
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|f| {
                let mut s = format!("r{}", f.relator + 1);
                if f.sign < 0 {
                    s.push_str("^-1");
                }
                if !f.conj.is_identity() {
                    s.push_str(&format!("^({})", alphabet.format_word(&f.conj)));
                }
                s
            })
            .collect();
        parts.join(" * ")
    }
}

/// Parse `r1 ^ (x2 x1) * r3^-1 * r2^2`: factors joined by `*`, each a
/// relator `r<k>` followed by integer powers and `^(word)` conjugations.
pub fn parse_relator_product(
    alphabet: &Alphabet,
    relator_count: usize,
    s: &str,
) -> Result<RelatorProduct> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(RelatorProduct::default());
    }
    let mut out = RelatorProduct::default();
    for part in s.split('*') {
        let part = part.trim();
        let rest = part
            .strip_prefix('r')
            .ok_or_else(|| Error::Parse(format!("expected a relator `r<k>`, found `{part}`")))?;
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let k: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad relator index in `{part}`")))?;
        if k == 0 || k > relator_count {
            return Err(Error::Parse(format!("relator r{k} does not exist")));
        }
        let mut factor = RelatorProduct::relator(k - 1);
        let mut tail = rest[digits.len()..].trim_start();
        while !tail.is_empty() {
            tail = tail
                .strip_prefix('^')
                .ok_or_else(|| Error::Parse(format!("unexpected `{tail}` in `{part}`")))?
                .trim_start();
            if let Some(inner) = tail.strip_prefix('(') {
                let close = inner
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed `(` in `{part}`")))?;
                let w = alphabet.parse_word(&inner[..close], true)?;
                factor = factor.conjugate(&w);
                tail = inner[close + 1..].trim_start();
            } else {
                let end = tail
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                    .map(|(i, _)| i)
                    .unwrap_or(tail.len());
                let e: i64 = tail[..end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{part}`")))?;
                factor = factor.pow(e);
                tail = tail[end..].trim_start();
            }
        }
        out = out.multiply(&factor);
    }
    Ok(out)
}

/// Relators adapted to the abelianization.
#[derive(Clone, Debug)]
pub struct Weight1Adaptation {
    /// New free basis `g_j` of `F` as words in the original generators.
    pub generators: Vec<Word>,
    /// Original generators as words in the new basis.
    pub inverse_generators: Vec<Word>,
    pub basis_moves: Vec<BasisMove>,
    /// `(w_i, d_i)` with `w_i ≡ g_i^{d_i} mod γ₂F`, `d_i > 0`.
    pub weight1: Vec<(RelatorProduct, i64)>,
    /// Remaining relator combinations, with zero exponent sums.
    pub residual: Vec<RelatorProduct>,
}

impl Weight1Adaptation {
    /// Rewrite a word over the original generators in the new basis.
    pub fn in_new_basis(&self, w: &Word) -> Word {
        w.substitute(&self.inverse_generators)
    }
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Invalid(format!("coefficient {x} is too large")))
}

pub fn adapt_relators_weight1(p: &Presentation) -> Result<Weight1Adaptation> {
    let n = p.rank();
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| r.exponent_vector(n)).collect();
    let e = IntMatrix::from_i64_rows(&rows, n)?;
    let snf = smith_normal_form(&e);

    let mut rel: Vec<RelatorProduct> = (0..p.relators.len()).map(RelatorProduct::relator).collect();
    for op in &snf.row_ops {
        match op {
            ElemOp::Swap(i, j) => rel.swap(*i, *j),
            ElemOp::Negate(i) => rel[*i] = rel[*i].inverse(),
            ElemOp::Add {
                target,
                source,
                factor,
            } => {
                rel[*target] = rel[*source].pow(small(factor)?).multiply(&rel[*target]);
            }
        }
    }

    let (basis_moves, generators, inv) = basis_change(&snf.col_ops, n)?;

    let diag = snf.diagonal();
    let mut weight1 = Vec::new();
    let mut residual = Vec::new();
    for (i, r) in rel.into_iter().enumerate() {
        match diag.get(i).filter(|d| !d.is_zero()) {
            Some(d) => weight1.push((r, small(d)?)),
            None => residual.push(r),
        }
    }
    Ok(Weight1Adaptation {
        generators,
        inverse_generators: inv,
        basis_moves,
        weight1,
        residual,
    })
}

/// A weight-2 relative basic: `q ≡ b^α mod γ₃F` for a primitive vector `b`
/// over the basic commutators `[x_j, x_i]`.
#[derive(Clone, Debug)]
pub struct Weight2Basic {
    pub vector: Vec<i64>,
    pub alpha: i64,
    pub witness: RelatorProduct,
}

#[derive(Clone, Debug)]
pub struct RBasicSet {
    pub adaptation: Weight1Adaptation,
    pub weight2: Vec<Weight2Basic>,
    /// Rows generating `R̄ ∩ γ₂N` before reduction.
    pub lattice: IntMatrix,
    /// `V` from the Smith decomposition of `lattice` (coordinates change).
    v: IntMatrix,
}

impl RBasicSet {
    pub fn format_vector(&self, v: &[i64], alphabet: &Alphabet) -> String {
        let basics = basic_commutators(alphabet.len(), 2).expect("weight 2");
        let names = alphabet.names();
        let parts: Vec<String> = basics
            .iter()
            .zip(v)
            .filter(|(_, &c)| c != 0)
            .map(|(b, &c)| {
                let f = format_basic(b, names);
                if c == 1 {
                    f
                } else {
                    format!("{f}^{c}")
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

fn class2_of(p: &Presentation, x: &RelatorProduct) -> Class2Coords {
    class2_normal_form(&x.expand(&p.relators), p.rank()).expect("relators lie in the alphabet")
}

/// Generators of `R̄ ∩ γ₂N`: kernel combinations of the relators and the
/// commutators `[r_i, x_k]`, each with its witness.
fn lattice_generators(p: &Presentation) -> Result<Vec<(Vec<i64>, RelatorProduct)>> {
    let n = p.rank();
    let m = p.relators.len();
    let mut gens = Vec::new();
    if m == 0 {
        return Ok(gens);
    }
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| r.exponent_vector(n)).collect();
    let snf = smith_normal_form(&IntMatrix::from_i64_rows(&rows, n)?);
    for i in snf.rank()..m {
        let mut x = RelatorProduct::default();
        for (j, c) in snf.u.row(i).iter().enumerate() {
            x = x.multiply(&RelatorProduct::relator(j).pow(small(c)?));
        }
        let f = class2_of(p, &x);
        debug_assert!(f.e.iter().all(|&v| v == 0));
        gens.push((f.c, x));
    }
    for i in 0..m {
        for k in 0..n as u32 {
            // [r, x] = r⁻¹ · r^x
            let r = RelatorProduct::relator(i);
            let x = r.inverse().multiply(&r.conjugate(&Word::gen(k)));
            gens.push((class2_of(p, &x).c, x));
        }
    }
    Ok(gens)
}

pub fn r_basic_weight2(p: &Presentation) -> Result<RBasicSet> {
    let adaptation = adapt_relators_weight1(p)?;
    let n = p.rank();
    let dim = n * n.saturating_sub(1) / 2;
    let gens = lattice_generators(p)?;
    let rows: Vec<Vec<i64>> = gens.iter().map(|(c, _)| c.clone()).collect();
    let lattice = IntMatrix::from_i64_rows(&rows, dim)?;
    let snf = smith_normal_form(&lattice);
    let mut v = snf.v.clone();
    // Basis vectors are the rows of V⁻¹.
    let vinv = inverse_unimodular(&v)?;
    let diag = snf.diagonal();
    let mut weight2 = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for i in 0..snf.rank() {
        let mut vector: Vec<i64> = vinv.row(i).iter().map(small).collect::<Result<_>>()?;
        let mut witness = RelatorProduct::default();
        for (s, c) in snf.u.row(i).iter().enumerate() {
            witness = witness.multiply(&gens[s].1.pow(small(c)?));
        }
        if vector.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            vector.iter_mut().for_each(|x| *x = -*x);
            witness = witness.inverse();
            for r in 0..v.rows() {
                let x = -v.get(r, i).clone();
                v.set(r, i, x);
            }
        }
        let alpha = small(&diag[i])?;
        let got = class2_of(p, &witness);
        let expect: Vec<i64> = vector.iter().map(|x| x * alpha).collect();
        if got.e.iter().any(|&x| x != 0) || got.c != expect {
            return Err(Error::Verification(format!(
                "weight-2 witness {} has the wrong image",
                i + 1
            )));
        }
        weight2.push(Weight2Basic {
            vector,
            alpha,
            witness,
        });
    }
    Ok(RBasicSet {
        adaptation,
        weight2,
        lattice,
        v,
    })
}

/// Exponents of `w` over the relative basics of weight 1 and 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RNormalForm {
    pub weight1: Vec<i64>,
    pub weight2: Vec<i64>,
}

impl RNormalForm {
    /// `∏ w_i^{α_i} · ∏ q_i^{β_i}`.
    pub fn product(&self, rb: &RBasicSet) -> RelatorProduct {
        let mut out = RelatorProduct::default();
        for ((w, _), &a) in rb.adaptation.weight1.iter().zip(&self.weight1) {
            out = out.multiply(&w.pow(a));
        }
        for (q, &b) in rb.weight2.iter().zip(&self.weight2) {
            out = out.multiply(&q.witness.pow(b));
        }
        out
    }
}

pub fn r_normal_form(p: &Presentation, rb: &RBasicSet, w: &RelatorProduct) -> Result<RNormalForm> {
    let n = p.rank();
    let word = w.expand(&p.relators);
    let ad = &rb.adaptation;
    let e_new = class2_normal_form(&ad.in_new_basis(&word), n)?.e;
    let mut weight1 = Vec::new();
    for (i, (_, d)) in ad.weight1.iter().enumerate() {
        if e_new[i] % d != 0 {
            return Err(Error::Verification(
                "exponent sums are not a relator combination".into(),
            ));
        }
        weight1.push(e_new[i] / d);
    }
    let partial = RNormalForm {
        weight1: weight1.clone(),
        weight2: vec![0; rb.weight2.len()],
    };
    let rest = class2_of(p, &partial.product(rb)).inverse();
    let rho = class2_normal_form(&word, n)?.multiply(&rest);
    if rho.e.iter().any(|&x| x != 0) {
        return Err(Error::Verification(
            "exponent sums are not a relator combination".into(),
        ));
    }
    let coords = rb.v.left_apply(&crate::lattice::to_bigints(&rho.c));
    let mut weight2 = Vec::new();
    for (i, q) in rb.weight2.iter().enumerate() {
        let x = small(&coords[i])?;
        if x % q.alpha != 0 {
            return Err(Error::Verification(
                "residual outside the relative lattice".into(),
            ));
        }
        weight2.push(x / q.alpha);
    }
    if coords[rb.weight2.len()..].iter().any(|x| !x.is_zero()) {
        return Err(Error::Verification(
            "residual outside the relative lattice".into(),
        ));
    }
    Ok(RNormalForm { weight1, weight2 })
}

/// Class-2 coordinates of `w · (product of the normal form)⁻¹`.
pub fn residual(
    p: &Presentation,
    rb: &RBasicSet,
    w: &RelatorProduct,
    nf: &RNormalForm,
) -> Class2Coords {
    class2_of(p, &w.multiply(&nf.product(rb).inverse()))
}

#[derive(Clone, Debug, Default)]
pub struct HallReport {
    pub samples: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

pub fn random_relator_product<R: Rng>(
    p: &Presentation,
    rng: &mut R,
    factors: usize,
    conj_len: usize,
) -> RelatorProduct {
    let n = p.rank() as u32;
    let mut out = RelatorProduct::default();
    if p.relators.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(0..=factors) {
        let len = rng.gen_range(0..=conj_len);
        let conj = Word::from_letters((0..len).map(|_| {
            crate::word::Letter::new(rng.gen_range(0..n), if rng.gen_bool(0.5) { 1 } else { -1 })
        }));
        out.0.push(RelatorFactor {
            relator: rng.gen_range(0..p.relators.len()),
            sign: if rng.gen_bool(0.5) { 1 } else { -1 },
            conj,
        });
    }
    out
}

/// Solve random elements of `R`, check the residual vanishes in class 2 and
/// that changing any single exponent by ±1 makes it nonzero.
pub fn verify_hall_like<R: Rng>(
    p: &Presentation,
    rb: &RBasicSet,
    samples: usize,
    rng: &mut R,
) -> HallReport {
    let mut report = HallReport {
        samples,
        ..Default::default()
    };
    for s in 0..samples {
        let w = random_relator_product(p, rng, 6, 4);
        let nf = match r_normal_form(p, rb, &w) {
            Ok(nf) => nf,
            Err(e) => {
                report.failures.push(format!("sample {s}: {e}"));
                continue;
            }
        };
        if !residual(p, rb, &w, &nf).is_identity() {
            report
                .failures
                .push(format!("sample {s}: nonzero residual"));
            continue;
        }
        let mut unique = true;
        for slot in 0..nf.weight1.len() + nf.weight2.len() {
            for delta in [-1, 1] {
                let mut alt = nf.clone();
                if slot < alt.weight1.len() {
                    alt.weight1[slot] += delta;
                } else {
                    alt.weight2[slot - nf.weight1.len()] += delta;
                }
                if residual(p, rb, &w, &alt).is_identity() {
                    unique = false;
                }
            }
        }
        if unique {
            report.passed += 1;
        } else {
            report
                .failures
                .push(format!("sample {s}: expression not unique"));
        }
    }
    report
}

/// `[w_i, w_j] ≡ [x_i, x_j]^{d_i d_j} mod γ₃F` in the adapted basis.
pub fn weight1_commutator_check(p: &Presentation, ad: &Weight1Adaptation) -> bool {
    let n = p.rank();
    for (i, (wi, di)) in ad.weight1.iter().enumerate() {
        for (j, (wj, dj)) in ad.weight1.iter().enumerate() {
            let c = commutator(&wi.expand(&p.relators), &wj.expand(&p.relators));
            let lhs = class2_normal_form(&ad.in_new_basis(&c), n).expect("in alphabet");
            let rhs = commutator(&Word::gen(i as u32), &Word::gen(j as u32)).pow(di * dj);
            if lhs != class2_normal_form(&rhs, n).expect("in alphabet") {
                return false;
            }
        }
    }
    true
}
