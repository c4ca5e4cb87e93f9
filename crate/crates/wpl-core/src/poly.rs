//! Integer polynomials, coefficients stored lowest degree first.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::linalg::{q, q_to_i64, IntMatrix, QMatrix, Q};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (d, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{d}")?,
                _ => write!(f, "{a}x^{d}")?,
            }
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    /// The monomial `x^d`.
    pub fn x_pow(d: usize) -> Self {
        let mut c = vec![0; d + 1];
        c[d] = 1;
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|d| self.coeff(d) + o.coeff(d)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|d| self.coeff(d) - o.coeff(d)).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn scale(&self, s: i64) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![0; k];
        c.extend(&self.coeffs);
        IntPoly::new(c)
    }

    /// Exact division by `x`, when the constant term vanishes.
    pub fn div_x(&self) -> Option<IntPoly> {
        match self.coeffs.first() {
            None => Some(IntPoly::zero()),
            Some(0) => Some(IntPoly::new(self.coeffs[1..].to_vec())),
            Some(_) => None,
        }
    }

    /// Keep the terms of degree below `n`.
    pub fn truncate(&self, n: usize) -> IntPoly {
        IntPoly::new(self.coeffs.iter().take(n).copied().collect())
    }

    /// `x^n p(1/x)` for `n` at least the degree.
    pub fn reverse(&self, n: usize) -> IntPoly {
        assert!(self.coeffs.len() <= n + 1);
        IntPoly::new((0..=n).map(|d| self.coeff(n - d)).collect())
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, c| acc * x + c)
    }

    /// Exact quotient `self / d`; `None` if the division leaves a remainder
    /// or a non-integer coefficient.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Some(IntPoly::zero()) } else { None };
        }
        let mut quo = vec![0i64; rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let top = rem[k + dd];
            if top % lead != 0 {
                return None;
            }
            let f = top / lead;
            quo[k] = f;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= f * c;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(IntPoly::new(quo))
    }

    /// Characteristic polynomial `det(x·Id − m)` by the Faddeev–LeVerrier recursion.
    pub fn charpoly(m: &IntMatrix) -> IntPoly {
        let n = m.rows();
        assert_eq!(n, m.cols());
        let a = QMatrix::from_int(m);
        let mut coeffs: Vec<Q> = vec![Q::zero(); n + 1];
        coeffs[n] = q(1);
        let mut mk = QMatrix::zeros(n, n);
        let id = QMatrix::identity(n);
        for k in 1..=n {
            mk = a.mul(&mk).add(&id.scale(&coeffs[n - k + 1]));
            let amk = a.mul(&mk);
            let mut tr = Q::zero();
            for i in 0..n {
                tr += &amk[(i, i)];
            }
            coeffs[n - k] = -tr / q(k as i64);
        }
        IntPoly::new(coeffs.iter().map(|c| q_to_i64(c).expect("integer characteristic polynomial")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = IntPoly::new(vec![-1, 1]);
        let sq = p.mul(&p);
        assert_eq!(sq, IntPoly::new(vec![1, -2, 1]));
        assert_eq!(sq.div_exact(&p), Some(p.clone()));
        assert_eq!(IntPoly::new(vec![1, 0, 1]).div_exact(&p), None);
        assert_eq!(sq.eval(1), 0);
        assert_eq!(IntPoly::new(vec![1, 2, 3]).reverse(3), IntPoly::new(vec![0, 3, 2, 1]));
    }

    #[test]
    fn charpoly_small() {
        let m = IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(IntPoly::charpoly(&m), IntPoly::new(vec![1, -2, 1]));
        let r = IntMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(IntPoly::charpoly(&r), IntPoly::new(vec![1, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", IntPoly::new(vec![1, -2, 1])), "x^2 - 2x + 1");
    }
}
