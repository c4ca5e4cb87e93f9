//! Grothendieck group in the basis of window line bundles.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lattice::{LVector, WeightDescriptor};
use crate::linalg::{dot, q, IntMatrix, QMatrix, Q};
use crate::poly::IntPoly;

/// Class coordinates, one entry per window point.
pub type Class = Vec<i64>;

/// Slope of a class; rank-zero classes have infinite slope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Q),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Numerics {
    pub rank: i64,
    pub degree: i64,
    pub slope: Slope,
}

/// Per-class output of the Hilbert–Poincaré computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareData {
    /// Leading coefficients `⟨v, Φ^k v⟩` of the series.
    pub series: Vec<i64>,
    /// Numerator of the series over `det(Id − xΦ)`.
    pub numerator: IntPoly,
    pub psi_prime: IntPoly,
    pub psi_bar: IntPoly,
}

#[derive(Clone, Debug)]
pub struct K0 {
    d: WeightDescriptor,
    window: Vec<LVector>,
    cartan: IntMatrix,
    degrees: Vec<i64>,
}

impl K0 {
    pub fn new(d: &WeightDescriptor) -> Self {
        let window = d.window();
        let n = window.len();
        let mut cartan = IntMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                cartan[(a, b)] = d.graded_dim(&d.sub(&window[b], &window[a])) as i64;
            }
        }
        let degrees = window.iter().map(|y| d.delta(y)).collect();
        K0 { d: d.clone(), window, cartan, degrees }
    }

    pub fn descriptor(&self) -> &WeightDescriptor {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[LVector] {
        &self.window
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn basis(&self, k: usize) -> Class {
        let mut v = vec![0; self.n()];
        v[k] = 1;
        v
    }

    /// Window index of arm point `a·x_i`, `1 ≤ a < p_i`.
    pub fn arm_index(&self, i: usize, a: i64) -> usize {
        let before: i64 = self.d.padded()[..i].iter().map(|p| p - 1).sum();
        (1 + before + a - 1) as usize
    }

    pub fn index_of(&self, y: &LVector) -> Option<usize> {
        self.window.iter().position(|w| w == y)
    }

    fn check_len(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: a.len() });
        }
        Ok(())
    }

    pub fn euler(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.euler_unchecked(a, b))
    }

    pub fn euler_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        dot(a, &self.cartan.mul_vec(b))
    }

    /// Class of an ordinary simple sheaf, `[O(c)] − [O]`.
    pub fn w(&self) -> Class {
        let mut v = vec![0; self.n()];
        v[0] = -1;
        v[self.n() - 1] = 1;
        v
    }

    pub fn rk(&self, a: &[i64]) -> i64 {
        self.euler_unchecked(a, &self.w())
    }

    pub fn deg(&self, a: &[i64]) -> i64 {
        dot(a, &self.degrees)
    }

    pub fn numerics(&self, a: &[i64]) -> Result<Numerics> {
        self.check_len(a)?;
        if a.iter().all(|&x| x == 0) {
            return Err(Error::ZeroClass);
        }
        let rank = self.rk(a);
        let degree = self.deg(a);
        let slope = if rank == 0 { Slope::Infinite } else { Slope::Finite(Q::new(degree.into(), rank.into())) };
        Ok(Numerics { rank, degree, slope })
    }

    /// Class of the simple `S_{i,a}`: the cokernel of `x_i` from
    /// `O((a−1)x_i)` to `O(a x_i)`, with `a` read modulo `p_i`.
    pub fn tube_simple(&self, i: usize, a: i64) -> Class {
        let p = self.d.padded()[i];
        if p == 1 {
            return self.w();
        }
        let a = a.rem_euclid(p);
        let mut v = vec![0; self.n()];
        let top = if a == 0 { self.n() - 1 } else { self.arm_index(i, a) };
        let bottom = if a == 1 { 0 } else { self.arm_index(i, (a - 1).rem_euclid(p)) };
        v[top] += 1;
        v[bottom] -= 1;
        v
    }

    /// Class of `O(z)` in window coordinates.
    pub fn line_bundle_class(&self, z: &LVector) -> Class {
        let n = self.n();
        let mut v = vec![0; n];
        v[0] = 1;
        for (i, &l) in z.arm.iter().enumerate() {
            if l > 0 {
                v[self.arm_index(i, l)] += 1;
                v[0] -= 1;
            }
        }
        v[n - 1] += z.central;
        v[0] -= z.central;
        v
    }

    /// Inverse of [`K0::line_bundle_class`] on classes of line bundles.
    pub fn line_bundle_locate(&self, cls: &[i64]) -> Result<LVector> {
        self.check_len(cls)?;
        let n = self.n();
        let bad = || Error::NotLineBundle(format!("{cls:?}"));
        let central = cls[n - 1];
        let mut arm = vec![0; self.d.arms()];
        let mut used = 0;
        for (i, &p) in self.d.padded().iter().enumerate() {
            for a in 1..p {
                match cls[self.arm_index(i, a)] {
                    0 => {}
                    1 if arm[i] == 0 => {
                        arm[i] = a;
                        used += 1;
                    }
                    _ => return Err(bad()),
                }
            }
        }
        if cls[0] != 1 - used - central {
            return Err(bad());
        }
        let z = LVector { arm, central };
        debug_assert_eq!(self.line_bundle_class(&z), cls);
        Ok(z)
    }

    /// Matrix of the twist by `x`; column `b` is the class of `O(y_b + x)`.
    pub fn twist_matrix(&self, x: &LVector) -> IntMatrix {
        let cols: Vec<Class> = self.window.iter().map(|y| self.line_bundle_class(&self.d.add(y, x))).collect();
        IntMatrix::from_cols(self.n(), &cols)
    }

    /// Coxeter transformation `−C^{−1} Cᵀ`, characterized by
    /// `⟨y, Φx⟩ = −⟨x, y⟩` for the pairing `⟨a, b⟩ = aᵀ C b`.
    pub fn coxeter_matrix(&self) -> IntMatrix {
        let cinv = self.cartan.inverse().expect("Cartan matrix is unimodular");
        cinv.mul(&self.cartan.transpose()).neg()
    }

    /// `−C^{−T} C`, the inverse Coxeter transformation in these coordinates.
    pub fn inverse_coxeter_matrix(&self) -> IntMatrix {
        let cinv_t = self.cartan.transpose().inverse().expect("Cartan matrix is unimodular");
        cinv_t.mul(&self.cartan).neg()
    }

    /// `det(x·Id − Φ)`.
    pub fn coxeter_polynomial(&self) -> IntPoly {
        IntPoly::charpoly(&self.coxeter_matrix())
    }

    /// Hilbert–Poincaré data of a class together with the two reciprocity
    /// polynomials. Fails if either is not an integer polynomial.
    pub fn poincare(&self, v: &[i64]) -> Result<PoincareData> {
        self.check_len(v)?;
        let n = self.n();
        let phi = self.coxeter_matrix();
        let psi = self.coxeter_polynomial();
        let denom = psi.reverse(n);
        let terms = 2 * n + 2;
        let mut series = Vec::with_capacity(terms);
        let mut cur = v.to_vec();
        for _ in 0..terms {
            series.push(self.euler_unchecked(v, &cur));
            cur = phi.mul_vec(&cur);
        }
        let s = IntPoly::new(series.clone());
        let full = denom.mul(&s).truncate(terms);
        let numerator = full.truncate(n);
        if full != numerator {
            return Err(Error::Internal(format!("series of {v:?} is not a rational function over det(Id - xPhi)")));
        }
        let psi_p = psi
            .mul(&numerator)
            .div_exact(&denom)
            .ok_or_else(|| Error::NotTilting(format!("reciprocity quotient of {v:?} is not a polynomial")))?;
        let psi_prime = psi
            .sub(&psi_p)
            .div_x()
            .ok_or_else(|| Error::NotTilting(format!("psi' of {v:?} is not a polynomial")))?;
        let psi_bar = psi.shift(1).add(&psi_p);
        Ok(PoincareData { series, numerator, psi_prime, psi_bar })
    }

    /// Class matrix as rationals, rows are classes.
    pub fn rows_q(rows: &[Class]) -> QMatrix {
        let n = rows.first().map_or(0, Vec::len);
        QMatrix::from_rows(rows.len(), n, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(w: &[i64]) -> K0 {
        K0::new(&WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap())
    }

    #[test]
    fn cartan_rows() {
        let x = k(&[2, 3]);
        assert_eq!(x.cartan().row(0), &[1, 1, 1, 1, 2]);
        assert_eq!(x.cartan().det(), 1);
        assert!(x.cartan().is_upper_triangular());
        let y = k(&[2, 2, 2, 2, 2]);
        assert_eq!(y.cartan()[(0, y.n() - 1)], 2);
    }

    #[test]
    fn euler_values() {
        let x = k(&[2, 3]);
        let o = x.basis(0);
        let oc = x.basis(4);
        assert_eq!(x.euler(&o, &oc).unwrap(), 2);
        assert_eq!(x.euler(&oc, &o).unwrap(), 0);
        assert!(x.euler(&o, &[1]).is_err());
    }

    #[test]
    fn line_bundle_classes() {
        let x = k(&[2, 3]);
        let d = x.descriptor().clone();
        let z = d.sub(&d.x(0), &d.x(1));
        assert_eq!(x.line_bundle_class(&z), vec![0, 1, 0, 1, -1]);
        assert_eq!(x.line_bundle_locate(&x.line_bundle_class(&z)).unwrap(), z);
        assert!(x.line_bundle_locate(&x.w()).is_err());
    }

    #[test]
    fn tube_simples_telescope() {
        let x = k(&[2, 3, 7]);
        for (i, &p) in x.descriptor().padded().to_vec().iter().enumerate() {
            let mut s = vec![0; x.n()];
            for a in 0..p {
                for (acc, v) in s.iter_mut().zip(x.tube_simple(i, a)) {
                    *acc += v;
                }
            }
            assert_eq!(s, x.w());
        }
    }

    #[test]
    fn numerics_of_w() {
        let x = k(&[2, 3, 7]);
        let num = x.numerics(&x.w()).unwrap();
        assert_eq!((num.rank, num.degree, num.slope), (0, 42, Slope::Infinite));
        assert_eq!(x.numerics(&vec![0; x.n()]), Err(Error::ZeroClass));
    }

    #[test]
    fn five_point_class() {
        let x = k(&[2, 2, 2, 2, 2]);
        let mut v = vec![0; x.n()];
        v[1..=5].fill(1);
        v[6] = -1;
        let num = x.numerics(&v).unwrap();
        assert_eq!((num.degree, num.rank), (3, 4));
    }

    #[test]
    fn coxeter_is_twist_by_omega() {
        for w in [&[][..], &[2, 3], &[2, 3, 7], &[2, 2, 2, 2]] {
            let x = k(w);
            assert_eq!(x.coxeter_matrix(), x.twist_matrix(&x.descriptor().omega()));
        }
    }

    #[test]
    fn projective_line_polynomial() {
        assert_eq!(k(&[]).coxeter_polynomial(), IntPoly::new(vec![1, -2, 1]));
    }
}
