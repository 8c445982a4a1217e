//! Normal forms in the free nilpotent quotients `F/γ₃F` and `F/γ₄F` over
//! basic commutators of weight at most 3.
//!
//! Weight-2 basics are `[x_j, x_i]` with `j > i`; weight-3 basics are
//! `[x_j, x_i, x_k]` with `j > i` and `k ≥ i`. A normal form is
//! `∏ x_i^{e_i} · ∏ [x_j,x_i]^{c_ji} · ∏ [x_j,x_i,x_k]^{d_jik}` with each
//! product taken in list order.

use crate::error::{Error, Result};
use crate::word::{left_normed, Word};

/// Largest rank accepted by the class-3 normal form.
pub const MAX_CLASS3_RANK: usize = 3;

/// Basic commutators of the given weight (1, 2 or 3) on `n` generators,
/// as left-normed index lists, in lexicographic order.
pub fn basic_commutators(n: usize, weight: usize) -> Result<Vec<Vec<u32>>> {
    let n = n as u32;
    Ok(match weight {
        1 => (0..n).map(|i| vec![i]).collect(),
        2 => (0..n)
            .flat_map(|j| (0..j).map(move |i| vec![j, i]))
            .collect(),
        3 => (0..n)
            .flat_map(|j| (0..j).flat_map(move |i| (i..n).map(move |k| vec![j, i, k])))
            .collect(),
        w => {
            return Err(Error::Invalid(format!(
                "basic commutators of weight {w} are not supported"
            )))
        }
    })
}

/// Number of basic commutators of weight `w` on `n` generators (Witt's
/// formula).
pub fn witt_count(n: u64, w: u64) -> u64 {
    fn mobius(mut k: u64) -> i64 {
        let mut m = 1i64;
        let mut p = 2;
        while p * p <= k {
            if k.is_multiple_of(p) {
                k /= p;
                if k.is_multiple_of(p) {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if k > 1 {
            m = -m;
        }
        m
    }
    let sum: i64 = (1..=w)
        .filter(|d| w.is_multiple_of(*d))
        .map(|d| mobius(d) * (n as i64).pow((w / d) as u32))
        .sum();
    (sum / w as i64) as u64
}

pub fn format_basic(b: &[u32], names: &[String]) -> String {
    if b.len() == 1 {
        return names[b[0] as usize].clone();
    }
    let parts: Vec<&str> = b.iter().map(|&g| names[g as usize].as_str()).collect();
    format!("[{}]", parts.join(","))
}

pub fn basic_word(b: &[u32]) -> Word {
    let parts: Vec<Word> = b.iter().map(|&g| Word::gen(g)).collect();
    left_normed(&parts)
}

/// Index of `[x_j, x_i]` (`j > i`) in the weight-2 list.
pub fn pair_index(j: usize, i: usize) -> usize {
    debug_assert!(j > i);
    j * (j - 1) / 2 + i
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Coordinates in `F/γ₃F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class2Coords {
    pub e: Vec<i64>,
    /// Indexed by [`pair_index`].
    pub c: Vec<i64>,
}

impl Class2Coords {
    pub fn identity(n: usize) -> Self {
        Class2Coords {
            e: vec![0; n],
            c: vec![0; pair_count(n)],
        }
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn c_of(&self, j: usize, i: usize) -> i64 {
        if j > i {
            self.c[pair_index(j, i)]
        } else if i > j {
            -self.c[pair_index(i, j)]
        } else {
            0
        }
    }

    fn push_letter(&mut self, k: usize, eps: i64) {
        for j in k + 1..self.rank() {
            self.c[pair_index(j, k)] += eps * self.e[j];
        }
        self.e[k] += eps;
    }

    /// Product law `c(uv) = c(u) + c(v) + e_j(u)·e_i(v)`.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.rank();
        let mut out = self.clone();
        for k in 0..n {
            out.e[k] += other.e[k];
        }
        for j in 0..n {
            for i in 0..j {
                out.c[pair_index(j, i)] += other.c[pair_index(j, i)] + self.e[j] * other.e[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let mut out = Class2Coords::identity(n);
        for k in 0..n {
            out.e[k] = -self.e[k];
        }
        // c(u) + c(u⁻¹) + e_j(u)·e_i(u⁻¹) = 0
        for j in 0..n {
            for i in 0..j {
                out.c[pair_index(j, i)] = -self.c[pair_index(j, i)] + self.e[j] * self.e[i];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().chain(&self.c).all(|&x| x == 0)
    }

    pub fn to_word(&self) -> Word {
        let n = self.rank();
        let mut w = Word::identity();
        for (i, &e) in self.e.iter().enumerate() {
            w = w.multiply(&Word::gen(i as u32).pow(e));
        }
        for j in 0..n {
            for i in 0..j {
                w = w.multiply(&basic_word(&[j as u32, i as u32]).pow(self.c[pair_index(j, i)]));
            }
        }
        w
    }
}

pub fn class2_normal_form(w: &Word, n: usize) -> Result<Class2Coords> {
    let mut st = Class2Coords::identity(n);
    for l in w.letters() {
        let k = l.gen() as usize;
        if k >= n {
            return Err(Error::OutsideAlphabet(l.gen()));
        }
        st.push_letter(k, l.sign() as i64);
    }
    Ok(st)
}

/// Coordinates in `F/γ₄F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class3Coords {
    pub e: Vec<i64>,
    pub c: Vec<i64>,
    /// Indexed like `basic_commutators(n, 3)`.
    pub d: Vec<i64>,
}

fn binom2(e: i64) -> i64 {
    e * (e - 1) / 2
}

impl Class3Coords {
    pub fn identity(n: usize) -> Self {
        let d = witt_count(n as u64, 3) as usize;
        Class3Coords {
            e: vec![0; n],
            c: vec![0; pair_count(n)],
            d: vec![0; d],
        }
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    fn triple_index(&self, j: usize, i: usize, k: usize) -> usize {
        // Count basics before (j, i, k) in lexicographic order.
        let n = self.rank();
        let per_pair = |i: usize| n - i;
        let mut idx = 0;
        for jj in 0..j {
            for ii in 0..jj {
                idx += per_pair(ii);
            }
        }
        for ii in 0..i {
            idx += per_pair(ii);
        }
        idx + (k - i)
    }

    /// Add `coef · [[x_a, x_b], x_k]`, rewritten over the basics.
    fn add_triple(&mut self, a: usize, b: usize, k: usize, coef: i64) {
        if coef == 0 || a == b {
            return;
        }
        if a < b {
            return self.add_triple(b, a, k, -coef);
        }
        let (j, i) = (a, b);
        if k >= i {
            let idx = self.triple_index(j, i, k);
            self.d[idx] += coef;
        } else {
            // k < i < j: [[j,i],k] = −[[i,k],j] + [[j,k],i]
            self.add_triple(i, k, j, -coef);
            self.add_triple(j, k, i, coef);
        }
    }

    fn push_letter(&mut self, m: usize, f: i64) {
        let n = self.rank();
        // Move x_m^f left through the weight-2 part.
        for j in 0..n {
            for i in 0..j {
                let c = self.c[pair_index(j, i)];
                self.add_triple(j, i, m, c * f);
            }
        }
        // Then through x_n^{e_n}, …, x_{m+1}^{e_{m+1}}; each crossing leaves
        // [x_p^e, x_m^f] behind, whose weight-2 part is pushed right over the
        // higher generators.
        for p in (m + 1..n).rev() {
            let e = self.e[p];
            if e == 0 {
                continue;
            }
            let lin = if f > 0 { e } else { -e };
            self.c[pair_index(p, m)] += lin;
            if f > 0 {
                self.add_triple(p, m, p, binom2(e));
            } else {
                self.add_triple(p, m, p, -binom2(e));
                self.add_triple(p, m, m, e);
            }
            for q in p + 1..n {
                self.add_triple(p, m, q, lin * self.e[q]);
            }
        }
        self.e[m] += f;
    }

    pub fn class2(&self) -> Class2Coords {
        Class2Coords {
            e: self.e.clone(),
            c: self.c.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().chain(&self.c).chain(&self.d).all(|&x| x == 0)
    }

    pub fn to_word(&self) -> Word {
        let n = self.rank();
        let mut w = self.class2().to_word();
        let basics = basic_commutators(n, 3).expect("weight 3 is supported");
        for (b, &d) in basics.iter().zip(&self.d) {
            w = w.multiply(&basic_word(b).pow(d));
        }
        w
    }
}

pub fn class3_normal_form(w: &Word, n: usize) -> Result<Class3Coords> {
    if n > MAX_CLASS3_RANK {
        return Err(Error::RankTooLarge(n));
    }
    let mut st = Class3Coords::identity(n);
    for l in w.letters() {
        let k = l.gen() as usize;
        if k >= n {
            return Err(Error::OutsideAlphabet(l.gen()));
        }
        st.push_letter(k, l.sign() as i64);
    }
    Ok(st)
}
