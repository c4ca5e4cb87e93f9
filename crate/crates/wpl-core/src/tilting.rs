//! Tilting data as lists of classes, and the numeric invariants read off them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::k0::{Class, PoincareData, Slope, K0};
use crate::lattice::LVector;
use crate::linalg::{q_to_i64, IntMatrix, Q};
use crate::poly::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub label: i64,
    pub class: Class,
}

/// Arrow multiplicity between two labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuiverEdge {
    pub from: i64,
    pub to: i64,
    pub count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TiltingDatum {
    pub summands: Vec<Summand>,
    pub quiver: Option<Vec<QuiverEdge>>,
    pub relations: Option<Vec<QuiverEdge>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    Canonical,
    Squid,
    CoxeterDynkin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowBehaviour {
    Bijective,
    InjectiveOnly,
    SurjectiveOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericReport {
    pub duals: Vec<Class>,
    pub central_simples: usize,
    /// Maximal minus minimal slope; `None` when a summand has rank zero.
    pub width: Option<Q>,
    pub hom_matrix: IntMatrix,
    pub hom_nonnegative: bool,
    /// `Σ rk(T_i)[S_i]`, expected to be `w`.
    pub rank_weighted_duals: Class,
    /// `Σ rk(S_i)[T_i]`, expected to be `−w`.
    pub dual_rank_weighted_summands: Class,
    pub identities_hold: bool,
    /// Twist carrying the summands onto the window, when one exists.
    pub canonical_twist: Option<LVector>,
}

impl NumericReport {
    pub fn is_canonical(&self) -> bool {
        self.canonical_twist.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub coxeter_matrix: IntMatrix,
    pub coxeter_polynomial: IntPoly,
    pub poincare: Vec<PoincareData>,
    pub homogeneous: bool,
}

impl TiltingDatum {
    pub fn classes(&self) -> Vec<Class> {
        self.summands.iter().map(|s| s.class.clone()).collect()
    }

    pub fn labels(&self) -> Vec<i64> {
        self.summands.iter().map(|s| s.label).collect()
    }

    pub fn position(&self, label: i64) -> Result<usize> {
        self.summands.iter().position(|s| s.label == label).ok_or(Error::UnknownLabel(label))
    }

    /// `(degree, rank)` of every summand in order.
    pub fn degree_rank(&self, k0: &K0) -> Vec<(i64, i64)> {
        self.summands.iter().map(|s| (k0.deg(&s.class), k0.rk(&s.class))).collect()
    }

    /// Rows are the summand classes.
    pub fn class_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.classes())
    }

    /// Fail unless the classes form a basis of the lattice.
    pub fn check_unimodular(&self, k0: &K0) -> Result<()> {
        let n = k0.n();
        if self.summands.len() != n {
            return Err(Error::NotUnimodular(format!("{} summands for rank {n}", self.summands.len())));
        }
        for s in &self.summands {
            if s.class.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: s.class.len() });
            }
        }
        let det = self.class_matrix().det();
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(format!("{det}")));
        }
        Ok(())
    }

    /// Dual classes `[S_j]` with `⟨[T_i], [S_j]⟩ = δ_ij`.
    pub fn duals(&self, k0: &K0) -> Result<Vec<Class>> {
        self.check_unimodular(k0)?;
        let g = self.class_matrix().mul(k0.cartan());
        let inv = g.inverse().ok_or_else(|| Error::NotUnimodular("pairing matrix is singular".into()))?;
        Ok((0..k0.n()).map(|j| inv.col(j)).collect())
    }

    /// Euler values `⟨T_a, T_b⟩` for all summand pairs.
    pub fn hom_matrix(&self, k0: &K0) -> IntMatrix {
        let cls = self.classes();
        let n = cls.len();
        let mut h = IntMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                h[(a, b)] = k0.euler_unchecked(&cls[a], &cls[b]);
            }
        }
        h
    }
}

/// Canonical, squid or Coxeter–Dynkin configuration.
pub fn standard_tilting_data(k0: &K0, kind: StandardKind) -> Result<TiltingDatum> {
    let d = k0.descriptor();
    let n = k0.n();
    let label = |k: usize| k as i64 + 1;
    match kind {
        StandardKind::Canonical => {
            let summands = (0..n).map(|k| Summand { label: label(k), class: k0.basis(k) }).collect();
            let mut quiver = Vec::new();
            let mut direct = 0;
            for (i, &p) in d.padded().iter().enumerate() {
                if p == 1 {
                    direct += 1;
                    continue;
                }
                let mut prev = 0;
                for a in 1..p {
                    let k = k0.arm_index(i, a);
                    quiver.push(QuiverEdge { from: label(prev), to: label(k), count: 1 });
                    prev = k;
                }
                quiver.push(QuiverEdge { from: label(prev), to: label(n - 1), count: 1 });
            }
            if direct > 0 {
                quiver.push(QuiverEdge { from: label(0), to: label(n - 1), count: direct });
            }
            quiver.sort();
            let rel = d.arms() as i64 - 2;
            let relations = if rel > 0 { vec![QuiverEdge { from: label(0), to: label(n - 1), count: rel }] } else { vec![] };
            Ok(TiltingDatum { summands, quiver: Some(quiver), relations: Some(relations) })
        }
        StandardKind::Squid | StandardKind::CoxeterDynkin => {
            if kind == StandardKind::CoxeterDynkin && d.t() < 2 {
                return Err(Error::Unavailable("Coxeter-Dynkin configuration".into()));
            }
            let mut classes = Vec::with_capacity(n);
            if kind == StandardKind::Squid {
                classes.push(k0.basis(0));
                classes.push(k0.basis(n - 1));
            } else {
                classes.push(k0.basis(n - 1));
                let minus_omega = d.neg(&d.omega());
                classes.push(k0.line_bundle_class(&minus_omega).iter().map(|x| -x).collect());
            }
            for (i, &p) in d.padded().iter().enumerate() {
                for j in 1..p {
                    classes.push(tube_chain(k0, i, j));
                }
            }
            let summands = classes.into_iter().enumerate().map(|(k, class)| Summand { label: label(k), class }).collect();
            let t = TiltingDatum { summands, quiver: None, relations: None };
            t.check_unimodular(k0)?;
            Ok(t)
        }
    }
}

/// Class of the length-`j` sheaf on arm `i` with top `S_{i,0}`: the
/// cokernel of `x_i^j` from `O(c − j x_i)` to `O(c)`.
pub fn tube_chain(k0: &K0, i: usize, j: i64) -> Class {
    let d = k0.descriptor();
    let mut a = vec![0; d.arms()];
    a[i] = -j;
    let lower = k0.line_bundle_class(&d.normal_form(&a, 1));
    let mut v = k0.basis(k0.n() - 1);
    for (x, y) in v.iter_mut().zip(lower) {
        *x -= y;
    }
    v
}

fn slope_of(k0: &K0, c: &[i64]) -> Slope {
    let r = k0.rk(c);
    if r == 0 {
        Slope::Infinite
    } else {
        Slope::Finite(Q::new(k0.deg(c).into(), r.into()))
    }
}

/// Twist `z` with `{O(y − z)}` equal to the window, for a datum of line bundles.
pub fn canonical_twist(k0: &K0, t: &TiltingDatum) -> Option<LVector> {
    let d = k0.descriptor();
    let mut located = Vec::with_capacity(t.summands.len());
    for s in &t.summands {
        if k0.rk(&s.class) != 1 {
            return None;
        }
        located.push(k0.line_bundle_locate(&s.class).ok()?);
    }
    let mut window = k0.window().to_vec();
    window.sort();
    for pin in &located {
        let mut shifted: Vec<LVector> = located.iter().map(|y| d.sub(y, pin)).collect();
        shifted.sort();
        if shifted == window {
            return Some(pin.clone());
        }
    }
    None
}

pub fn tilting_numeric_report(k0: &K0, t: &TiltingDatum) -> Result<NumericReport> {
    let duals = t.duals(k0)?;
    let n = k0.n();
    let classes = t.classes();
    let central_simples = duals.iter().filter(|s| k0.rk(s) == 0).count();
    let mut slopes = Vec::with_capacity(n);
    for c in &classes {
        match slope_of(k0, c) {
            Slope::Finite(s) => slopes.push(s),
            Slope::Infinite => {
                slopes.clear();
                break;
            }
        }
    }
    let width = if slopes.len() == n && n > 0 {
        let max = slopes.iter().max().cloned().unwrap_or_else(Q::zero);
        let min = slopes.iter().min().cloned().unwrap_or_else(Q::zero);
        Some(max - min)
    } else {
        None
    };
    let hom_matrix = t.hom_matrix(k0);
    let hom_nonnegative = (0..n).all(|a| (0..n).all(|b| hom_matrix[(a, b)] >= 0));
    let mut rank_weighted_duals = vec![0; n];
    let mut dual_rank_weighted_summands = vec![0; n];
    for i in 0..n {
        let rt = k0.rk(&classes[i]);
        let rs = k0.rk(&duals[i]);
        for k in 0..n {
            rank_weighted_duals[k] += rt * duals[i][k];
            dual_rank_weighted_summands[k] += rs * classes[i][k];
        }
    }
    let w = k0.w();
    let minus_w: Class = w.iter().map(|x| -x).collect();
    let identities_hold = rank_weighted_duals == w && dual_rank_weighted_summands == minus_w;
    Ok(NumericReport {
        duals,
        central_simples,
        width,
        hom_matrix,
        hom_nonnegative,
        rank_weighted_duals,
        dual_rank_weighted_summands,
        identities_hold,
        canonical_twist: canonical_twist(k0, t),
    })
}

pub fn spectral_report(k0: &K0, t: &TiltingDatum) -> Result<SpectralData> {
    t.check_unimodular(k0)?;
    let poincare = t.summands.iter().map(|s| k0.poincare(&s.class)).collect::<Result<Vec<_>>>()?;
    let homogeneous = poincare.windows(2).all(|w| w[0].psi_prime == w[1].psi_prime && w[0].psi_bar == w[1].psi_bar);
    Ok(SpectralData { coxeter_matrix: k0.coxeter_matrix(), coxeter_polynomial: k0.coxeter_polynomial(), poincare, homogeneous })
}

/// Classify every arrow by comparing ranks at its ends.
pub fn bijection_profile(k0: &K0, t: &TiltingDatum) -> Result<Vec<(QuiverEdge, ArrowBehaviour)>> {
    let quiver = t.quiver.as_ref().ok_or(Error::MissingQuiver)?;
    quiver
        .iter()
        .map(|e| {
            let ru = k0.rk(&t.summands[t.position(e.from)?].class);
            let rv = k0.rk(&t.summands[t.position(e.to)?].class);
            let b = match rv.cmp(&ru) {
                core::cmp::Ordering::Equal => ArrowBehaviour::Bijective,
                core::cmp::Ordering::Less => ArrowBehaviour::InjectiveOnly,
                core::cmp::Ordering::Greater => ArrowBehaviour::SurjectiveOnly,
            };
            Ok((*e, b))
        })
        .collect()
}

/// Whether the dual class at position `i` is a sheaf class (formal source)
/// or minus one (formal sink).
pub fn dual_polarity(k0: &K0, dual: &[i64], label: i64) -> Result<Polarity> {
    let r = k0.rk(dual);
    let d = k0.deg(dual);
    if r > 0 || (r == 0 && d > 0) {
        Ok(Polarity::Source)
    } else if r < 0 || (r == 0 && d < 0) {
        Ok(Polarity::Sink)
    } else {
        Err(Error::NoPolarity(label))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Source,
    Sink,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Source => "source",
            Polarity::Sink => "sink",
        }
    }
}

/// Integer entries of a rational vector.
pub fn integral(v: &[Q]) -> Option<Vec<i64>> {
    v.iter().map(q_to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::WeightDescriptor;

    fn k(w: &[i64]) -> K0 {
        K0::new(&WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap())
    }

    #[test]
    fn canonical_report_237() {
        let x = k(&[2, 3, 7]);
        let t = standard_tilting_data(&x, StandardKind::Canonical).unwrap();
        assert_eq!(t.summands.len(), 11);
        let r = tilting_numeric_report(&x, &t).unwrap();
        assert_eq!(r.central_simples, 9);
        assert_eq!(r.width, Some(Q::from_integer(42.into())));
        assert!(r.identities_hold);
        assert!(r.is_canonical());
        assert_eq!(t.quiver.as_ref().unwrap().iter().map(|e| e.count).sum::<i64>(), 12);
    }

    #[test]
    fn squid_ranks() {
        let x = k(&[2, 3]);
        let t = standard_tilting_data(&x, StandardKind::Squid).unwrap();
        let ranks: Vec<i64> = t.summands.iter().map(|s| x.rk(&s.class)).collect();
        assert_eq!(ranks, vec![1, 1, 0, 0, 0]);
        let r = tilting_numeric_report(&x, &t).unwrap();
        assert!(r.hom_nonnegative);
        assert!(r.identities_hold);
    }

    #[test]
    fn coxeter_dynkin_unimodular() {
        for w in [&[2, 3][..], &[2, 3, 7], &[2, 2, 2, 2]] {
            let x = k(w);
            let t = standard_tilting_data(&x, StandardKind::CoxeterDynkin).unwrap();
            assert_eq!(t.class_matrix().det().abs(), 1);
        }
        assert!(standard_tilting_data(&k(&[3]), StandardKind::CoxeterDynkin).is_err());
    }

    #[test]
    fn non_unimodular_rejected() {
        let x = k(&[2, 3]);
        let mut t = standard_tilting_data(&x, StandardKind::Canonical).unwrap();
        t.summands[1].class = vec![2, 0, 0, 0, 0];
        assert!(matches!(tilting_numeric_report(&x, &t), Err(Error::NotUnimodular(_))));
    }
}
