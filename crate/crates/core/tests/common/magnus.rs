//! Truncated Magnus expansion: `x_i ↦ 1 + t_i` in the free associative ring
//! over ℤ modulo monomials of degree > `DEGREE`. Injective on `F/γ₄F`.

use std::collections::BTreeMap;

use freefactor::Word;

pub const DEGREE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series(pub BTreeMap<Vec<u32>, i64>);

impl Series {
    pub fn one() -> Self {
        let mut m = BTreeMap::new();
        m.insert(Vec::new(), 1);
        Series(m)
    }

    fn letter(g: u32, positive: bool) -> Self {
        // (1 + t)^-1 = 1 − t + t² − t³ + …
        let mut m = BTreeMap::new();
        m.insert(Vec::new(), 1);
        let mut mono = Vec::new();
        for k in 1..=DEGREE {
            mono.push(g);
            let c = if positive {
                if k == 1 {
                    1
                } else {
                    0
                }
            } else if k % 2 == 1 {
                -1
            } else {
                1
            };
            if c != 0 {
                m.insert(mono.clone(), c);
            }
        }
        Series(m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                if a.len() + b.len() > DEGREE {
                    continue;
                }
                let mut m = a.clone();
                m.extend(b);
                *out.entry(m).or_insert(0) += x * y;
            }
        }
        out.retain(|_, v| *v != 0);
        Series(out)
    }

    /// Drop all terms of degree above `d`.
    pub fn truncate(&self, d: usize) -> Self {
        Series(
            self.0
                .iter()
                .filter(|(k, _)| k.len() <= d)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        )
    }
}

pub fn magnus(w: &Word) -> Series {
    w.letters().iter().fold(Series::one(), |acc, l| {
        acc.mul(&Series::letter(l.gen(), l.is_positive()))
    })
}
