//! Graded dimensions by brute force: enumerate every monomial of a degree
//! and quotient by the degree piece of the relation ideal.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub struct Oracle {
    weights: Vec<i64>,
    lambdas: Vec<BigRational>,
    pbar: i64,
}

impl Oracle {
    pub fn new(weights: &[i64], lambdas: &[BigRational]) -> Self {
        let pbar = weights.iter().fold(1i64, |l, &p| num_integer::lcm(l, p));
        Oracle { weights: weights.to_vec(), lambdas: lambdas.to_vec(), pbar }
    }

    /// Residues and central part of `Σ e_i x_i`.
    fn class(&self, e: &[i64]) -> (Vec<i64>, i64) {
        let arm = e.iter().zip(&self.weights).map(|(a, p)| a.rem_euclid(*p)).collect();
        let central = e.iter().zip(&self.weights).map(|(a, p)| a.div_euclid(*p)).sum();
        (arm, central)
    }

    /// All exponent vectors of the given lattice degree.
    pub fn monomials(&self, arm: &[i64], central: i64) -> Vec<Vec<i64>> {
        let target = arm.iter().zip(&self.weights).map(|(a, p)| a * (self.pbar / p)).sum::<i64>() + central * self.pbar;
        let mut out = Vec::new();
        let mut e = vec![0; self.weights.len()];
        self.fill(0, target, &mut e, &mut out);
        out.retain(|m| self.class(m) == (arm.to_vec(), central));
        out
    }

    fn fill(&self, i: usize, left: i64, e: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == e.len() {
            if left == 0 {
                out.push(e.clone());
            }
            return;
        }
        let step = self.pbar / self.weights[i];
        let mut a = 0;
        while a * step <= left {
            e[i] = a;
            self.fill(i + 1, left - a * step, e, out);
            a += 1;
        }
        e[i] = 0;
    }

    /// `x_i^{p_i} − x_2^{p_2} + λ_i x_1^{p_1}` for each generator beyond the second.
    fn relations(&self) -> Vec<Vec<(Vec<i64>, BigRational)>> {
        let t = self.weights.len();
        (2..t)
            .map(|i| {
                let unit = |j: usize| {
                    let mut e = vec![0; t];
                    e[j] = self.weights[j];
                    e
                };
                vec![(unit(i), BigRational::one()), (unit(1), -BigRational::one()), (unit(0), self.lambdas[i - 2].clone())]
            })
            .collect()
    }

    pub fn dim(&self, arm: &[i64], central: i64) -> usize {
        let basis = self.monomials(arm, central);
        if basis.is_empty() {
            return 0;
        }
        let index: BTreeMap<&Vec<i64>, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut rows = Vec::new();
        for rel in self.relations() {
            for m in self.monomials(arm, central - 1) {
                let mut row = vec![BigRational::zero(); basis.len()];
                for (e, c) in &rel {
                    let prod: Vec<i64> = m.iter().zip(e).map(|(a, b)| a + b).collect();
                    row[index[&prod]] += c;
                }
                rows.push(row);
            }
        }
        basis.len() - rank(rows)
    }
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone() / pivot_row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= p.clone() * f.clone();
                }
            }
        }
        r += 1;
    }
    r
}
