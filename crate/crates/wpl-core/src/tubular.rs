//! Tubular mutations and the averaged Euler form, for Euler characteristic zero.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::k0::{Class, K0};
use crate::lattice::LVector;
use crate::linalg::IntMatrix;

#[derive(Clone, Debug)]
pub struct Tubular {
    k0: K0,
    phi: IntMatrix,
    sigma: IntMatrix,
    rho: IntMatrix,
    /// Generator of degree one used for `σ`.
    shift: LVector,
}

/// Outcome of the structural checks on `σ` and `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubularLaws {
    pub rho_isometry: bool,
    pub rho_unimodular: bool,
    pub rho_action: bool,
    pub sigma_action: bool,
    pub braid: bool,
    /// `ρ^{n p̄} y = y + n deg(y) z` on every basis vector for `n = 1..=3`.
    pub rho_power_law: bool,
    /// `σ^{n p̄} y = y + n rk(y) w` on every basis vector for `n = 1..=3`.
    pub sigma_power_law: bool,
    pub riemann_roch: bool,
}

impl TubularLaws {
    pub fn all(&self) -> bool {
        self.rho_isometry
            && self.rho_unimodular
            && self.rho_action
            && self.sigma_action
            && self.braid
            && self.rho_power_law
            && self.sigma_power_law
            && self.riemann_roch
    }
}

impl Tubular {
    pub fn new(k0: &K0) -> Result<Self> {
        let d = k0.descriptor();
        if d.delta_omega() != 0 {
            return Err(Error::NotTubular);
        }
        let phi = k0.coxeter_matrix();
        let i = (0..d.arms()).find(|&i| d.delta(&d.x(i)) == 1).ok_or(Error::NotTubular)?;
        let shift = d.x(i);
        let sigma = k0.twist_matrix(&shift);
        let n = k0.n();
        let mut orbit = Vec::with_capacity(d.pbar() as usize);
        let mut u = k0.basis(0);
        for _ in 0..d.pbar() {
            orbit.push(u.clone());
            u = phi.mul_vec(&u);
        }
        let mut cols = Vec::with_capacity(n);
        for b in 0..n {
            let y = k0.basis(b);
            let mut img = y.clone();
            for o in &orbit {
                let e = k0.euler_unchecked(&y, o);
                for (acc, x) in img.iter_mut().zip(o) {
                    *acc -= e * x;
                }
            }
            cols.push(img);
        }
        let rho = IntMatrix::from_cols(n, &cols);
        Ok(Tubular { k0: k0.clone(), phi, sigma, rho, shift })
    }

    pub fn k0(&self) -> &K0 {
        &self.k0
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn rho(&self) -> &IntMatrix {
        &self.rho
    }

    pub fn shift(&self) -> &LVector {
        &self.shift
    }

    /// `Σ_{j ∈ Z_p̄} ⟨a, Φ^j b⟩`.
    pub fn average_form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        let mut u = b.to_vec();
        for _ in 0..self.k0.descriptor().pbar() {
            acc += self.k0.euler_unchecked(a, &u);
            u = self.phi.mul_vec(&u);
        }
        acc
    }

    /// `rk(a) deg(b) − deg(a) rk(b)`.
    pub fn determinant_form(&self, a: &[i64], b: &[i64]) -> i64 {
        self.k0.rk(a) * self.k0.deg(b) - self.k0.deg(a) * self.k0.rk(b)
    }

    /// Class `z = σ^{−1} ρ(w)`.
    pub fn z(&self) -> Class {
        let inv = self.sigma.inverse().expect("twists are invertible");
        inv.mul_vec(&self.rho.mul_vec(&self.k0.w()))
    }

    pub fn laws(&self) -> TubularLaws {
        let k0 = &self.k0;
        let n = k0.n();
        let pbar = k0.descriptor().pbar() as u64;
        let basis: Vec<Class> = (0..n).map(|k| k0.basis(k)).collect();
        let rho_isometry = basis.iter().all(|a| {
            let ra = self.rho.mul_vec(a);
            basis.iter().all(|b| k0.euler_unchecked(&ra, &self.rho.mul_vec(b)) == k0.euler_unchecked(a, b))
        });
        let rho_unimodular = self.rho.det().abs() == 1;
        let rho_action = basis.iter().all(|y| {
            let (d, r) = (k0.deg(y), k0.rk(y));
            let img = self.rho.mul_vec(y);
            (k0.deg(&img), k0.rk(&img)) == (d, d + r)
        });
        let sigma_action = basis.iter().all(|y| {
            let (d, r) = (k0.deg(y), k0.rk(y));
            let img = self.sigma.mul_vec(y);
            (k0.deg(&img), k0.rk(&img)) == (d + r, r)
        });
        let braid = match self.rho.inverse() {
            Some(lambda) => {
                let s = &self.sigma;
                s.mul(&lambda).mul(s) == lambda.mul(s).mul(&lambda)
            }
            None => false,
        };
        let z = self.z();
        let w = k0.w();
        let rho_power_law = (1..=3u64).all(|m| {
            let p = self.rho.pow(m * pbar);
            basis.iter().all(|y| {
                let dy = k0.deg(y) * m as i64;
                let expect: Class = y.iter().zip(&z).map(|(a, b)| a + dy * b).collect();
                p.mul_vec(y) == expect
            })
        });
        let sigma_power_law = (1..=3u64).all(|m| {
            let p = self.sigma.pow(m * pbar);
            basis.iter().all(|y| {
                let ry = k0.rk(y) * m as i64;
                let expect: Class = y.iter().zip(&w).map(|(a, b)| a + ry * b).collect();
                p.mul_vec(y) == expect
            })
        });
        let riemann_roch = basis
            .iter()
            .all(|a| basis.iter().all(|b| self.average_form(a, b) == self.determinant_form(a, b)));
        TubularLaws { rho_isometry, rho_unimodular, rho_action, sigma_action, braid, rho_power_law, sigma_power_law, riemann_roch }
    }

    /// `(⟨z, s⟩, deg s)` for every tube simple `s`.
    pub fn omnipresence(&self) -> Vec<(i64, i64)> {
        let k0 = &self.k0;
        let z = self.z();
        let mut out = Vec::new();
        for (i, &p) in k0.descriptor().padded().iter().enumerate() {
            if p < 2 {
                continue;
            }
            for a in 0..p {
                let s = k0.tube_simple(i, a);
                out.push((k0.euler_unchecked(&z, &s), k0.deg(&s)));
            }
        }
        let w = k0.w();
        out.push((k0.euler_unchecked(&z, &w), k0.deg(&w)));
        out
    }

    /// `(degree, rank)` along each arm of `ρ` applied to the canonical
    /// configuration twisted by the degree-one generator.
    pub fn arm_distribution(&self) -> Vec<Vec<(i64, i64)>> {
        let k0 = &self.k0;
        let d = k0.descriptor();
        let mut arms = Vec::new();
        for (i, &p) in d.padded().iter().enumerate() {
            let mut chain = Vec::new();
            for a in 0..=p {
                let mut e = alloc::vec![0; d.arms()];
                e[i] = a;
                let y = d.add(&d.normal_form(&e, 0), &self.shift);
                let img = self.rho.mul_vec(&k0.line_bundle_class(&y));
                chain.push((k0.deg(&img), k0.rk(&img)));
            }
            arms.push(chain);
        }
        arms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::WeightDescriptor;

    fn t(w: &[i64]) -> Tubular {
        Tubular::new(&K0::new(&WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap())).unwrap()
    }

    #[test]
    fn laws_hold() {
        for w in [&[3, 3, 3][..], &[2, 4, 4], &[2, 3, 6], &[2, 2, 2, 2]] {
            let laws = t(w).laws();
            assert!(laws.all(), "{w:?}: {laws:?}");
        }
    }

    #[test]
    fn omnipresence_dims() {
        let x = t(&[2, 2, 2, 2]);
        for (hom, deg) in x.omnipresence() {
            assert_eq!(hom, deg);
        }
    }

    #[test]
    fn rejects_wild() {
        let k0 = K0::new(&WeightDescriptor::with_default_lambdas(alloc::vec![2, 3, 7]).unwrap());
        assert!(matches!(Tubular::new(&k0), Err(Error::NotTubular)));
    }
}
