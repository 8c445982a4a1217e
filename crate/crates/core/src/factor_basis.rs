//! Free bases adapted to an abelian factor `X/Y`, and the resulting free
//! bases of `Y`.
//!
//! `Y` is given by a lattice `L ⊆ ℤⁿ`: it is the full preimage of `L` under
//! abelianization of the free group `X` of rank `n`. A Smith decomposition
//! `U·L·V = D` yields the new basis `g_j` with exponent vectors the rows of
//! `V⁻¹`, reached from `x_1, …, x_n` by replaying the column operations as
//! Nielsen moves.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::commutator::CommutatorTerm;
use crate::constructions::{ru_construction, u_construction, OrderedAlphabet};
use crate::error::{Error, Result};
use crate::lattice::{lattice_member, smith_normal_form, to_bigints, ElemOp, IntMatrix};
use crate::subgroup::{fold_words, nielsen_reduce, GenTuple};
use crate::word::{Alphabet, Word};

#[derive(Clone, Debug)]
pub struct FactorSpec {
    pub alphabet: Alphabet,
    /// Rows span the image of `Y` in `ℤⁿ`.
    pub lattice: IntMatrix,
}

impl FactorSpec {
    pub fn new(alphabet: Alphabet, lattice: IntMatrix) -> Result<Self> {
        if lattice.cols() != alphabet.len() {
            return Err(Error::Invalid(format!(
                "lattice has {} columns but the rank is {}",
                lattice.cols(),
                alphabet.len()
            )));
        }
        Ok(FactorSpec { alphabet, lattice })
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        let v = to_bigints(&w.exponent_vector(self.rank()));
        matches!(lattice_member(&self.lattice, &v), Ok(Some(_)))
    }
}

/// Elementary change of free basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisMove {
    /// `g[target] <- g[target] · g[by]^power`
    Multiply {
        target: usize,
        by: usize,
        power: i64,
    },
    Swap(usize, usize),
    Invert(usize),
}

pub fn replay_basis_moves(start: &[Word], moves: &[BasisMove]) -> Vec<Word> {
    let mut g = start.to_vec();
    for m in moves {
        match *m {
            BasisMove::Multiply { target, by, power } => {
                g[target] = g[target].multiply(&g[by].pow(power));
            }
            BasisMove::Swap(i, j) => g.swap(i, j),
            BasisMove::Invert(i) => g[i] = g[i].inverse(),
        }
    }
    g
}

#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    /// Members of `A` with infinite-order image.
    pub a2: Vec<Word>,
    /// Members of `A` with finite image order, paired with that order.
    pub a1: Vec<(Word, u64)>,
    /// Members of `Y`.
    pub b: Vec<Word>,
    /// Changes of basis from `x_1, …, x_n` to the adapted basis `a1 ∪ a2 ∪ b`
    /// (in SNF order).
    pub moves: Vec<BasisMove>,
}

impl AdaptedBasis {
    pub fn gammas(&self) -> Vec<u64> {
        self.a1.iter().map(|(_, g)| *g).collect()
    }

    pub fn all_words(&self) -> Vec<Word> {
        self.a1
            .iter()
            .map(|(w, _)| w.clone())
            .chain(self.a2.iter().cloned())
            .chain(self.b.iter().cloned())
            .collect()
    }
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Invalid(format!("coefficient {x} is too large")))
}

/// Replay Smith column operations as a change of free basis. Returns the
/// moves, the new basis in terms of `x_1, …, x_n`, and `x_1, …, x_n` in terms
/// of the new basis. Exponent vectors of the new basis are the rows of `V⁻¹`.
pub fn basis_change(
    col_ops: &[ElemOp],
    n: usize,
) -> Result<(Vec<BasisMove>, Vec<Word>, Vec<Word>)> {
    let mut moves = Vec::new();
    for op in col_ops {
        // M ← M·E acts on the basis as g ← E⁻¹·g.
        moves.push(match op {
            ElemOp::Swap(i, j) => BasisMove::Swap(*i, *j),
            ElemOp::Negate(i) => BasisMove::Invert(*i),
            ElemOp::Add {
                target,
                source,
                factor,
            } => BasisMove::Multiply {
                target: *source,
                by: *target,
                power: -small(factor)?,
            },
        });
    }
    let start: Vec<Word> = (0..n as u32).map(Word::gen).collect();
    let gens = replay_basis_moves(&start, &moves);
    let mut inv = start;
    for m in moves.iter().rev() {
        match *m {
            BasisMove::Multiply { target, by, power } => {
                inv[target] = inv[target].multiply(&inv[by].pow(-power))
            }
            BasisMove::Swap(i, j) => inv.swap(i, j),
            BasisMove::Invert(i) => inv[i] = inv[i].inverse(),
        }
    }
    Ok((moves, gens, inv))
}

/// Adapt a free basis of `X` to the lattice; torsion of `X/Y` goes to `a1`.
pub fn adapt_basis_torsion(spec: &FactorSpec) -> Result<AdaptedBasis> {
    let n = spec.rank();
    let snf = smith_normal_form(&spec.lattice);
    let (moves, g, _) = basis_change(&snf.col_ops, n)?;
    let diag = snf.diagonal();
    let (mut a1, mut a2, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for (j, w) in g.into_iter().enumerate() {
        let d = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            a2.push(w);
        } else if d.is_one() {
            b.push(w);
        } else {
            let gamma = d
                .to_u64()
                .ok_or_else(|| Error::Invalid(format!("order {d} is too large")))?;
            a1.push((w, gamma));
        }
    }
    Ok(AdaptedBasis { a1, a2, b, moves })
}

/// Adapt a free basis of `X` to a lattice with free quotient.
pub fn adapt_basis_free(spec: &FactorSpec) -> Result<AdaptedBasis> {
    let ab = adapt_basis_torsion(spec)?;
    if !ab.a1.is_empty() {
        let t = ab.gammas().iter().map(|g| format!("Z/{g}")).collect();
        return Err(Error::Torsion(t));
    }
    Ok(ab)
}

/// A (truncated) free basis of `Y`: `B ∪ U` or `B̂ ∪ RU`.
#[derive(Clone, Debug)]
pub struct FactorBasis {
    pub alphabet: OrderedAlphabet,
    /// Symbol indices of `B` (or `B̂`).
    pub b_hat: Vec<u32>,
    pub terms: Vec<CommutatorTerm>,
    /// Whether `b_hat ∪ terms` is the whole basis.
    pub complete: bool,
}

impl FactorBasis {
    pub fn words(&self) -> Vec<Word> {
        let defs = self.alphabet.definitions();
        self.b_hat
            .iter()
            .map(|&s| defs[s as usize].clone())
            .chain(self.terms.iter().map(|t| t.expand(&defs)))
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.b_hat
            .iter()
            .map(|&s| self.alphabet.symbol(s).name.clone())
            .chain(self.terms.iter().map(|t| self.alphabet.format_term(t)))
            .collect()
    }

    pub fn gen_tuple(&self) -> Result<GenTuple> {
        GenTuple::new(self.words())
    }
}

fn named(prefix: &str, ws: &[Word]) -> Vec<(String, Word)> {
    ws.iter()
        .enumerate()
        .map(|(i, w)| (format!("{prefix}{}", i + 1), w.clone()))
        .collect()
}

fn adapted_alphabet(spec: &FactorSpec, ab: &AdaptedBasis) -> Result<OrderedAlphabet> {
    let a1: Vec<Word> = ab.a1.iter().map(|(w, _)| w.clone()).collect();
    let gammas: Vec<u32> = ab
        .gammas()
        .iter()
        .map(|&g| u32::try_from(g).map_err(|_| Error::Invalid(format!("order {g} is too large"))))
        .collect::<Result<_>>()?;
    let (a1_prefix, a2_prefix) = if a1.is_empty() { ("", "a") } else { ("x", "y") };
    OrderedAlphabet::from_words(
        spec.alphabet.clone(),
        named(a1_prefix, &a1),
        &gammas,
        named(a2_prefix, &ab.a2),
        named("b", &ab.b),
    )
}

/// `B ∪ U(A, B)` up to `max_weight`, for a free factor `X/Y`.
pub fn free_factor_basis(
    spec: &FactorSpec,
    ab: &AdaptedBasis,
    max_weight: usize,
) -> Result<FactorBasis> {
    if !ab.a1.is_empty() {
        return Err(Error::Torsion(
            ab.gammas().iter().map(|g| format!("Z/{g}")).collect(),
        ));
    }
    let alphabet = adapted_alphabet(spec, ab)?;
    let terms = u_construction(&alphabet, max_weight);
    let complete = alphabet.a_symbols().is_empty();
    Ok(FactorBasis {
        b_hat: alphabet.b_hat_symbols(),
        terms,
        complete,
        alphabet,
    })
}

/// `B̂ ∪ RU(A1, A2, B̂)` up to `max_weight`; complete whenever `X/Y` is
/// finite. A free quotient falls back to the unrestricted construction.
pub fn torsion_factor_basis(
    spec: &FactorSpec,
    ab: &AdaptedBasis,
    max_weight: usize,
) -> Result<FactorBasis> {
    if ab.a1.is_empty() {
        return free_factor_basis(spec, ab, max_weight);
    }
    let alphabet = adapted_alphabet(spec, ab)?;
    let bound = if alphabet.has_a2() {
        Some(max_weight)
    } else {
        None
    };
    let r = ru_construction(&alphabet, bound)?;
    Ok(FactorBasis {
        b_hat: r.b_hat,
        terms: r.ru,
        complete: r.complete,
        alphabet,
    })
}

/// Outcome of the oracle checks on an adapted basis and a factor basis.
#[derive(Clone, Debug, Default)]
pub struct Verification {
    pub failures: Vec<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.failures.push(what.into());
        }
    }
}

/// Check an adapted basis: free basis of `X`, `B ⊆ Y`, image orders.
pub fn verify_adapted(spec: &FactorSpec, ab: &AdaptedBasis) -> Verification {
    let mut v = Verification::default();
    let n = spec.rank();
    let words = ab.all_words();
    let g = fold_words(&words, n);
    v.check(
        words.len() == n && g.index() == Some(1) && g.rank() == n,
        "adapted set is not a free basis",
    );
    for b in &ab.b {
        v.check(spec.contains(b), "B member outside Y");
    }
    for (w, gamma) in &ab.a1 {
        let g = *gamma as i64;
        v.check(spec.contains(&w.pow(g)), "A1 power outside Y");
        for k in 1..g {
            if g % k == 0 {
                v.check(!spec.contains(&w.pow(k)), "A1 image order too small");
            }
        }
    }
    // A-images form a basis of the quotient: A ∪ B generates X, B ⊆ Y, and
    // the count matches the invariant-factor decomposition.
    let st = crate::lattice::abelian_structure(&spec.lattice);
    v.check(st.free_rank == ab.a2.len(), "free part size mismatch");
    v.check(
        st.invariant_factors
            .iter()
            .map(|x| x.to_u64())
            .collect::<Vec<_>>()
            == ab.gammas().into_iter().map(Some).collect::<Vec<_>>(),
        "pseudo-orders differ from the invariant factors",
    );
    v
}

/// Check a factor basis: independence, containment in `Y`, and (when
/// complete and `X/Y` is finite) index and rank.
pub fn verify_factor_basis(spec: &FactorSpec, fb: &FactorBasis) -> Verification {
    let mut v = Verification::default();
    let words = fb.words();
    for (w, l) in words.iter().zip(fb.labels()) {
        v.check(spec.contains(w), format!("{l} is outside Y"));
    }
    match GenTuple::new(words.clone()) {
        Ok(t) => v.check(
            nielsen_reduce(&t).is_independent(),
            "basis is not Nielsen independent",
        ),
        Err(_) => v.check(false, "basis contains the identity"),
    }
    let st = crate::lattice::abelian_structure(&spec.lattice);
    if let (true, Some(order)) = (fb.complete, st.order()) {
        let n = spec.rank();
        let g = fold_words(&words, n);
        let order = order.to_usize().unwrap_or(usize::MAX);
        v.check(
            g.index() == Some(order),
            format!("index {:?}, expected {order}", g.index()),
        );
        let expect = 1 + order * n.saturating_sub(1);
        v.check(
            g.rank() == expect && words.len() == expect,
            format!("rank {}, expected {expect}", g.rank()),
        );
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(n: usize, rows: &[Vec<i64>]) -> FactorSpec {
        FactorSpec::new(
            Alphabet::standard(n),
            IntMatrix::from_i64_rows(rows, n).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn replay_matches_inverse_of_v() {
        let s = spec(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let ab = adapt_basis_torsion(&s).unwrap();
        let snf = smith_normal_form(&s.lattice);
        let start: Vec<Word> = (0..3).map(Word::gen).collect();
        let g = replay_basis_moves(&start, &ab.moves);
        let rows: Vec<Vec<i64>> = g.iter().map(|w| w.exponent_vector(3)).collect();
        let gm = IntMatrix::from_i64_rows(&rows, 3).unwrap();
        assert_eq!(gm.mul(&snf.v), IntMatrix::identity(3));
    }

    #[test]
    fn free_examples() {
        let s = spec(2, &[vec![1, 1]]);
        let ab = adapt_basis_free(&s).unwrap();
        assert_eq!((ab.a2.len(), ab.b.len()), (1, 1));
        assert!(verify_adapted(&s, &ab).ok());

        let s = spec(2, &[]);
        let ab = adapt_basis_free(&s).unwrap();
        assert_eq!(ab.a2, vec![Word::gen(0), Word::gen(1)]);
        assert!(ab.b.is_empty());

        let s = spec(1, &[vec![1]]);
        let ab = adapt_basis_free(&s).unwrap();
        assert!(ab.a2.is_empty());
        assert_eq!(ab.b, vec![Word::gen(0)]);

        assert!(matches!(
            adapt_basis_free(&spec(1, &[vec![2]])),
            Err(Error::Torsion(_))
        ));
    }

    #[test]
    fn torsion_examples() {
        let s = spec(2, &[vec![2, 0], vec![0, 3]]);
        let ab = adapt_basis_torsion(&s).unwrap();
        assert_eq!(ab.gammas(), vec![6]);
        assert_eq!((ab.a2.len(), ab.b.len()), (0, 1));
        assert!(verify_adapted(&s, &ab).ok());

        let s = spec(2, &[vec![2, 0], vec![0, 2]]);
        let ab = adapt_basis_torsion(&s).unwrap();
        assert_eq!(ab.gammas(), vec![2, 2]);
        assert_eq!(
            ab.a1.iter().map(|(w, _)| w.clone()).collect::<Vec<_>>(),
            vec![Word::gen(0), Word::gen(1)]
        );

        let s = spec(1, &[]);
        let ab = adapt_basis_torsion(&s).unwrap();
        assert!(ab.a1.is_empty());
        assert_eq!(ab.a2, vec![Word::gen(0)]);
    }

    #[test]
    fn free_factor_examples() {
        // A = {x1}, B = {x2} via the lattice spanned by e2.
        let s = spec(2, &[vec![0, 1]]);
        let ab = adapt_basis_free(&s).unwrap();
        let fb = free_factor_basis(&s, &ab, 2).unwrap();
        assert_eq!(fb.labels(), vec!["b1", "[b1,a1]", "[b1,a1^-1]"]);
        assert!(verify_factor_basis(&s, &fb).ok());

        let s = spec(1, &[]);
        let ab = adapt_basis_free(&s).unwrap();
        let fb = free_factor_basis(&s, &ab, 4).unwrap();
        assert!(fb.words().is_empty());

        let s = spec(1, &[vec![1]]);
        let ab = adapt_basis_free(&s).unwrap();
        let fb = free_factor_basis(&s, &ab, 4).unwrap();
        assert_eq!(fb.labels(), vec!["b1"]);
        assert!(fb.complete);
    }

    #[test]
    fn torsion_factor_examples() {
        let s = spec(2, &[vec![2, 0], vec![0, 1]]);
        let ab = adapt_basis_torsion(&s).unwrap();
        let fb = torsion_factor_basis(&s, &ab, 10).unwrap();
        assert_eq!(fb.labels(), vec!["b1", "x1^2", "[b1,x1]"]);
        assert!(verify_factor_basis(&s, &fb).ok());

        let s = spec(2, &[vec![2, 0], vec![0, 2]]);
        let ab = adapt_basis_torsion(&s).unwrap();
        let fb = torsion_factor_basis(&s, &ab, 10).unwrap();
        assert_eq!(fb.words().len(), 5);
        assert!(verify_factor_basis(&s, &fb).ok());

        let s = spec(2, &[vec![4, 0], vec![0, 1]]);
        let ab = adapt_basis_torsion(&s).unwrap();
        let fb = torsion_factor_basis(&s, &ab, 10).unwrap();
        assert_eq!(
            fb.labels(),
            vec!["b1", "x1^4", "[b1,x1]", "[b1,x1^-1]", "[b1,x1,x1]"]
        );
        assert!(verify_factor_basis(&s, &fb).ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn adapted_bases_are_valid(
            n in 1usize..=3,
            rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 0..=3),
        ) {
            let rows: Vec<Vec<i64>> = rows.into_iter().map(|r| r[..n].to_vec()).collect();
            let s = spec(n, &rows);
            let ab = adapt_basis_torsion(&s).unwrap();
            let v = verify_adapted(&s, &ab);
            prop_assert!(v.ok(), "{:?}", v.failures);
        }
    }
}
