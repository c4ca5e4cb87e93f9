//! The rank-one grading group and the graded coordinate algebra.
//!
//! Generators are indexed from zero. Fewer than two weights are padded with
//! weight-one generators, so the first two generators always exist. Every
//! further generator satisfies `x_i^{p_i} = x_2^{p_2} - λ_i x_1^{p_1}`
//! (one-based names), with the power of `x_1` taken to its own weight.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};

/// Sign class of the Euler characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curvature {
    Domestic,
    Tubular,
    Wild,
}

impl Curvature {
    pub fn as_str(self) -> &'static str {
        match self {
            Curvature::Domestic => "domestic",
            Curvature::Tubular => "tubular",
            Curvature::Wild => "wild",
        }
    }
}

/// Weight type and parameters together with the derived constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDescriptor {
    weights: Vec<i64>,
    lambdas: Vec<Q>,
    padded: Vec<i64>,
    pbar: i64,
    n: usize,
    delta_omega: i64,
}

/// Element of the grading group in normal form `Σ arm[i]·x_i + central·c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LVector {
    pub arm: Vec<i64>,
    pub central: i64,
}

/// Relation between two lattice elements under the positive-cone order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Less,
    Greater,
    Incomparable,
}

/// Exponent vector over all generators, padded ones included.
pub type Monomial = Vec<i64>;

/// Linear combination of monomials.
pub type Polynomial = BTreeMap<Monomial, Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub degree: LVector,
    pub monomials: Vec<Monomial>,
}

impl fmt::Display for LVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.arm.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")?;
        match self.central {
            0 => Ok(()),
            c if c > 0 => write!(f, "+{c}c"),
            c => write!(f, "{c}c"),
        }
    }
}

impl WeightDescriptor {
    /// Validating constructor. `lambdas` lists the parameters of the third
    /// and later points.
    pub fn new(weights: Vec<i64>, lambdas: Vec<Q>) -> Result<Self> {
        for &p in &weights {
            if p < 2 {
                return Err(Error::WeightTooSmall(p));
            }
        }
        let t = weights.len();
        let expected = t.saturating_sub(2);
        if lambdas.len() != expected {
            return Err(Error::LambdaCount { expected, got: lambdas.len() });
        }
        for (i, l) in lambdas.iter().enumerate() {
            if l.is_zero() {
                return Err(Error::LambdaZero(l.to_string()));
            }
            if lambdas[..i].contains(l) {
                return Err(Error::LambdaDuplicate(l.to_string()));
            }
        }
        if let Some(first) = lambdas.first() {
            if !first.is_one() {
                return Err(Error::LambdaNotNormalized(first.to_string()));
            }
        }
        let mut padded = weights.clone();
        while padded.len() < 2 {
            padded.push(1);
        }
        let pbar = padded.iter().fold(1i64, |acc, &p| acc.lcm(&p));
        let n = 2 + weights.iter().map(|p| (p - 1) as usize).sum::<usize>();
        let delta_omega = (t as i64 - 2) * pbar - weights.iter().map(|p| pbar / p).sum::<i64>();
        Ok(WeightDescriptor { weights, lambdas, padded, pbar, n, delta_omega })
    }

    /// Parameters default to `1, 2, 3, …`.
    pub fn with_default_lambdas(weights: Vec<i64>) -> Result<Self> {
        let k = weights.len().saturating_sub(2);
        Self::new(weights, (1..=k as i64).map(q).collect())
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn lambdas(&self) -> &[Q] {
        &self.lambdas
    }

    /// Number of weights, padding excluded.
    pub fn t(&self) -> usize {
        self.weights.len()
    }

    /// Weights including padding; one entry per generator.
    pub fn padded(&self) -> &[i64] {
        &self.padded
    }

    pub fn arms(&self) -> usize {
        self.padded.len()
    }

    pub fn pbar(&self) -> i64 {
        self.pbar
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn delta_omega(&self) -> i64 {
        self.delta_omega
    }

    pub fn curvature(&self) -> Curvature {
        match self.delta_omega.signum() {
            -1 => Curvature::Domestic,
            0 => Curvature::Tubular,
            _ => Curvature::Wild,
        }
    }

    /// `|p_1⋯p_t · χ|`, the index of the subgroup generated by the dualizing element.
    pub fn gorenstein_index(&self) -> i64 {
        let prod: i64 = self.weights.iter().product();
        (prod * self.delta_omega / self.pbar).abs()
    }

    /// Parameter of generator `i` (zero-based, `i ≥ 2`).
    pub fn lambda(&self, i: usize) -> &Q {
        &self.lambdas[i - 2]
    }

    pub fn label(&self) -> alloc::string::String {
        let w: Vec<_> = self.weights.iter().map(|p| p.to_string()).collect();
        format!("({})", w.join(","))
    }

    pub fn zero(&self) -> LVector {
        LVector { arm: vec![0; self.arms()], central: 0 }
    }

    pub fn c(&self) -> LVector {
        LVector { arm: vec![0; self.arms()], central: 1 }
    }

    /// Generator `x_i`, zero-based.
    pub fn x(&self, i: usize) -> LVector {
        let mut a = vec![0; self.arms()];
        a[i] = 1;
        self.normal_form(&a, 0)
    }

    /// Dualizing element `(t−2)c − Σ x_i`.
    pub fn omega(&self) -> LVector {
        let a: Vec<i64> = self.weights.iter().map(|_| -1).chain(core::iter::repeat(0)).take(self.arms()).collect();
        self.normal_form(&a, self.t() as i64 - 2)
    }

    /// Normal form of `Σ a_i x_i + m c`.
    pub fn normal_form(&self, a: &[i64], m: i64) -> LVector {
        assert_eq!(a.len(), self.arms(), "one coefficient per generator");
        let mut central = m;
        let arm = a
            .iter()
            .zip(&self.padded)
            .map(|(&ai, &p)| {
                central += Integer::div_floor(&ai, &p);
                Integer::mod_floor(&ai, &p)
            })
            .collect();
        LVector { arm, central }
    }

    fn check(&self, x: &LVector) -> Result<()> {
        if x.arm.len() != self.arms() || x.arm.iter().zip(&self.padded).any(|(a, p)| *a < 0 || a >= p) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn validate(&self, x: &LVector) -> Result<()> {
        self.check(x)
    }

    pub fn add(&self, x: &LVector, y: &LVector) -> LVector {
        let a: Vec<i64> = x.arm.iter().zip(&y.arm).map(|(a, b)| a + b).collect();
        self.normal_form(&a, x.central + y.central)
    }

    pub fn neg(&self, x: &LVector) -> LVector {
        let a: Vec<i64> = x.arm.iter().map(|a| -a).collect();
        self.normal_form(&a, -x.central)
    }

    pub fn sub(&self, x: &LVector, y: &LVector) -> LVector {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: i64, x: &LVector) -> LVector {
        let a: Vec<i64> = x.arm.iter().map(|a| k * a).collect();
        self.normal_form(&a, k * x.central)
    }

    /// Degree map.
    pub fn delta(&self, x: &LVector) -> i64 {
        x.arm.iter().zip(&self.padded).map(|(a, p)| a * (self.pbar / p)).sum::<i64>() + x.central * self.pbar
    }

    pub fn is_nonneg(&self, x: &LVector) -> bool {
        x.central >= 0
    }

    pub fn compare(&self, x: &LVector, y: &LVector) -> Result<Comparison> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Ok(Comparison::Equal);
        }
        if self.sub(y, x).central >= 0 {
            Ok(Comparison::Less)
        } else if self.sub(x, y).central >= 0 {
            Ok(Comparison::Greater)
        } else {
            Ok(Comparison::Incomparable)
        }
    }

    pub fn leq(&self, x: &LVector, y: &LVector) -> bool {
        self.sub(y, x).central >= 0
    }

    /// Dimension of the graded piece `S_x`.
    pub fn graded_dim(&self, x: &LVector) -> usize {
        if x.central >= 0 {
            x.central as usize + 1
        } else {
            0
        }
    }

    /// Dimensions of `Hom` and `Ext¹` from `O(x)` to `O(y)`.
    pub fn line_pair_dims(&self, x: &LVector, y: &LVector) -> (usize, usize) {
        let hom = self.graded_dim(&self.sub(y, x));
        let ext = self.graded_dim(&self.sub(&self.add(x, &self.omega()), y));
        (hom, ext)
    }

    /// Lattice degree of a monomial.
    pub fn monomial_degree(&self, m: &[i64]) -> LVector {
        self.normal_form(m, 0)
    }

    /// Basis of `S_x`: `x_1^{ℓ_1+jp_1} x_2^{ℓ_2+(ℓ−j)p_2} Π x_i^{ℓ_i}` for `j = 0..=ℓ`.
    pub fn monomial_basis(&self, x: &LVector) -> MonomialBasis {
        let monomials = if x.central < 0 {
            Vec::new()
        } else {
            let l = x.central;
            (0..=l)
                .map(|j| {
                    let mut m = x.arm.clone();
                    m[0] += j * self.padded[0];
                    m[1] += (l - j) * self.padded[1];
                    m
                })
                .collect()
        };
        MonomialBasis { degree: x.clone(), monomials }
    }

    /// Rewrite until every exponent of a generator beyond the second is
    /// below its weight.
    pub fn reduce(&self, poly: Polynomial) -> Polynomial {
        let mut out = Polynomial::new();
        let mut todo: Vec<(Monomial, Q)> = poly.into_iter().collect();
        while let Some((m, coef)) = todo.pop() {
            if coef.is_zero() {
                continue;
            }
            let hit = (2..self.arms()).find(|&i| m[i] >= self.padded[i]);
            match hit {
                None => {
                    let e = out.entry(m).or_insert_with(Q::zero);
                    *e += coef;
                }
                Some(i) => {
                    let mut base = m.clone();
                    base[i] -= self.padded[i];
                    let mut a = base.clone();
                    a[1] += self.padded[1];
                    let mut b = base;
                    b[0] += self.padded[0];
                    let lam = self.lambda(i).clone();
                    todo.push((a, coef.clone()));
                    todo.push((b, -(coef * lam)));
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Coordinates of a reduced polynomial of degree `x` in the monomial basis of `S_x`.
    pub fn coords(&self, x: &LVector, poly: &Polynomial) -> Vec<Q> {
        let dim = self.graded_dim(x);
        let mut v = vec![Q::zero(); dim];
        for (m, c) in poly {
            debug_assert_eq!(&self.monomial_degree(m), x);
            let j = (m[0] - x.arm[0]) / self.padded[0];
            debug_assert!(j >= 0 && (j as usize) < dim);
            v[j as usize] += c;
        }
        v
    }

    /// Matrix of multiplication by the monomial `e`, from `S_x` to `S_{x+deg e}`.
    pub fn monomial_action(&self, x: &LVector, e: &[i64]) -> QMatrix {
        let src = self.monomial_basis(x);
        let target = self.add(x, &self.monomial_degree(e));
        let cols: Vec<Vec<Q>> = src
            .monomials
            .iter()
            .map(|m| {
                let prod: Monomial = m.iter().zip(e).map(|(a, b)| a + b).collect();
                let poly = self.reduce(Polynomial::from([(prod, Q::one())]));
                self.coords(&target, &poly)
            })
            .collect();
        QMatrix::from_cols(self.graded_dim(&target), &cols)
    }

    /// Multiplication by generator `x_i`.
    pub fn generator_action(&self, x: &LVector, i: usize) -> QMatrix {
        let mut e = vec![0; self.arms()];
        e[i] = 1;
        self.monomial_action(x, &e)
    }

    /// Structure constants of `S_x × S_y → S_{x+y}`: entry `[a][b]` is the
    /// product of basis elements `a` and `b`.
    pub fn product_table(&self, x: &LVector, y: &LVector) -> Vec<Vec<Vec<Q>>> {
        let bx = self.monomial_basis(x);
        let by = self.monomial_basis(y);
        let s = self.add(x, y);
        bx.monomials
            .iter()
            .map(|u| {
                by.monomials
                    .iter()
                    .map(|v| {
                        let prod: Monomial = u.iter().zip(v).map(|(a, b)| a + b).collect();
                        self.coords(&s, &self.reduce(Polynomial::from([(prod, Q::one())])))
                    })
                    .collect()
            })
            .collect()
    }

    /// Points `0 ≤ y ≤ c` in canonical order: `0`, the arms in weight order
    /// with increasing multiples, then `c`.
    pub fn window(&self) -> Vec<LVector> {
        let mut out = vec![self.zero()];
        for (i, &p) in self.padded.iter().enumerate() {
            for a in 1..p {
                let mut arm = vec![0; self.arms()];
                arm[i] = a;
                out.push(LVector { arm, central: 0 });
            }
        }
        out.push(self.c());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(w: &[i64]) -> WeightDescriptor {
        WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap()
    }

    #[test]
    fn constants() {
        let x = d(&[2, 3, 7]);
        assert_eq!((x.rank(), x.pbar(), x.delta_omega(), x.curvature()), (11, 42, 1, Curvature::Wild));
        assert_eq!(d(&[2, 3, 5]).gorenstein_index(), 1);
        let e = d(&[]);
        assert_eq!((e.rank(), e.pbar(), e.delta_omega()), (2, 1, -2));
        assert_eq!(e.curvature(), Curvature::Domestic);
    }

    #[test]
    fn descriptor_errors() {
        assert_eq!(WeightDescriptor::new(vec![1, 3], vec![]), Err(Error::WeightTooSmall(1)));
        assert!(matches!(WeightDescriptor::new(vec![2, 3, 7], vec![]), Err(Error::LambdaCount { .. })));
        assert!(matches!(WeightDescriptor::new(vec![2, 2, 2, 2], vec![q(1), q(1)]), Err(Error::LambdaDuplicate(_))));
        assert!(matches!(WeightDescriptor::new(vec![2, 2, 2, 2], vec![q(1), q(0)]), Err(Error::LambdaZero(_))));
        assert!(matches!(WeightDescriptor::new(vec![2, 2, 2], vec![q(2)]), Err(Error::LambdaNotNormalized(_))));
    }

    #[test]
    fn normal_forms() {
        let x = d(&[2, 3, 7]);
        assert_eq!(x.normal_form(&[3, 0, 0], 0), LVector { arm: vec![1, 0, 0], central: 1 });
        let w = x.omega();
        assert_eq!(w, LVector { arm: vec![1, 2, 6], central: -2 });
        assert_eq!(x.delta(&w), 1);
        let y = d(&[2, 3]);
        assert_eq!(y.normal_form(&[-1, -1], 1), LVector { arm: vec![1, 2], central: -1 });
        assert_eq!(y.omega(), LVector { arm: vec![1, 2], central: -2 });
    }

    #[test]
    fn comparisons() {
        let y = d(&[2, 3]);
        assert_eq!(y.compare(&y.zero(), &y.c()).unwrap(), Comparison::Less);
        let x = d(&[2, 3, 7]);
        assert_eq!(x.compare(&x.x(0), &x.x(1)).unwrap(), Comparison::Incomparable);
        assert_eq!(x.compare(&x.zero(), &LVector { arm: vec![0, 0], central: 0 }), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn basis_of_c() {
        let y = d(&[2, 3]);
        let b = y.monomial_basis(&y.c());
        assert_eq!(b.monomials, vec![vec![0, 3], vec![2, 0]]);
        let m = y.generator_action(&y.x(0), 0);
        assert_eq!(m, QMatrix::from_rows(2, 1, vec![vec![q(0)], vec![q(1)]]));
    }

    #[test]
    fn relation_rewrite() {
        let x = d(&[2, 3, 7]);
        let r = x.reduce(Polynomial::from([(vec![0, 0, 7], q(1))]));
        assert_eq!(r, Polynomial::from([(vec![0, 3, 0], q(1)), (vec![2, 0, 0], q(-1))]));
    }

    #[test]
    fn window_order() {
        let y = d(&[2, 3]);
        let w: Vec<_> = y.window().iter().map(|v| y.delta(v)).collect();
        assert_eq!(w, vec![0, 3, 2, 4, 6]);
    }
}
