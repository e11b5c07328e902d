#![allow(dead_code)]

use toric_skt::bott::{build_bott, BottSpec};
use toric_skt::fan::Fan;

/// Independent H⁴ reduction for Bott towers that never touches the generic
/// normal-form code.
///
/// Every generator is rewritten as a linear form in `w_1..w_k` using
/// `w_{k+j} = w_j + Σ_{i<j} c(i,j) w_{k+i}`. A product of two such forms
/// is a quadratic form; each square `w_j²` is then replaced using
/// `w_j w_{k+j} = 0`, i.e. `w_j² = -w_j Σ_{i<j} c(i,j) L_i`, which only
/// involves `w_l w_j` with `l < j`. Coordinates are over `{w_i w_j : i < j}`
/// in lexicographic order.
pub struct BottOracle {
    k: usize,
    /// `forms[g]` is generator `g` (0-based, `0..2k`) as a form in `w_1..w_k`.
    forms: Vec<Vec<i128>>,
    /// `square_rules[j]` is `w_j²` as a form over the squarefree basis.
    square_rules: Vec<Vec<i128>>,
}

impl BottOracle {
    pub fn new(spec: &BottSpec) -> BottOracle {
        let k = spec.height();
        let mut forms = vec![vec![0i128; k]; 2 * k];
        for j in 0..k {
            forms[j][j] = 1;
        }
        // L_j = w_{k+j}
        for j in 1..=k {
            let mut l = vec![0i128; k];
            l[j - 1] = 1;
            for i in 1..j {
                let c = i128::from(spec.c(i, j));
                for t in 0..k {
                    l[t] += c * forms[k + i - 1][t];
                }
            }
            forms[k + j - 1] = l;
        }
        let pairs = pair_count(k);
        let mut square_rules = vec![vec![0i128; pairs]; k];
        for j in 1..=k {
            // -w_j * Σ_{i<j} c(i,j) L_i
            let mut rule = vec![0i128; pairs];
            for i in 1..j {
                let c = i128::from(spec.c(i, j));
                for (l, &coef) in forms[k + i - 1].iter().enumerate() {
                    assert!(l < j - 1 || coef == 0, "L_i only involves lower generators");
                    if coef != 0 {
                        rule[pair_index(k, l, j - 1)] -= c * coef;
                    }
                }
            }
            square_rules[j - 1] = rule;
        }
        BottOracle { k, forms, square_rules }
    }

    pub fn rank(&self) -> usize {
        pair_count(self.k)
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                out.push(format!("w{}*w{}", i + 1, j + 1));
            }
        }
        out
    }

    fn linear(&self, class: &[i64]) -> Vec<i128> {
        let mut v = vec![0i128; self.k];
        for (g, &a) in class.iter().enumerate() {
            for t in 0..self.k {
                v[t] += i128::from(a) * self.forms[g][t];
            }
        }
        v
    }

    pub fn product(&self, u: &[i64], v: &[i64]) -> Vec<i128> {
        let (a, b) = (self.linear(u), self.linear(v));
        let mut out = vec![0i128; self.rank()];
        for s in 0..self.k {
            for t in 0..self.k {
                let coef = a[s] * b[t];
                if coef == 0 {
                    continue;
                }
                if s == t {
                    for (o, r) in out.iter_mut().zip(&self.square_rules[s]) {
                        *o += coef * r;
                    }
                } else {
                    out[pair_index(self.k, s.min(t), s.max(t))] += coef;
                }
            }
        }
        out
    }
}

fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Lex position of `w_i w_j` (`i < j`, 0-based) among squarefree pairs.
fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

pub fn hirzebruch(a: i64) -> Fan {
    build_bott(&BottSpec::new(2).unwrap().with(1, 2, a).unwrap()).unwrap()
}

pub fn projective_line() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
}

pub fn class(coeffs: &[i64]) -> toric_skt::CohomologyClass {
    toric_skt::CohomologyClass::new(coeffs.to_vec())
}
