//! Finite Hom-categories: hom dimensions plus bilinear composition tables.
//!
//! A tilting object is modelled by the full subcategory on its summands,
//! optionally enlarged by probe objects whose outgoing Hom spaces are tracked
//! but whose incoming ones are not. Hübner reflection at a summand rewrites
//! the category in place of the summand using kernels and cokernels of the
//! arrow approximation.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LVector, WeightDescriptor};
use crate::linalg::{QMatrix, Quotient, Q};

/// Composition table for objects `(a, b, c)`: entry `(x, y)` is the
/// coordinate vector in `Hom(a, c)` of `g_y ∘ f_x` with `f_x ∈ Hom(a, b)`
/// and `g_y ∈ Hom(b, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    ab: usize,
    bc: usize,
    ac: usize,
    data: Vec<Q>,
}

impl Tensor {
    pub fn zeros(ab: usize, bc: usize, ac: usize) -> Self {
        Tensor { ab, bc, ac, data: vec![Q::zero(); ab * bc * ac] }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.ab, self.bc, self.ac)
    }

    pub fn entry(&self, x: usize, y: usize) -> &[Q] {
        let s = (x * self.bc + y) * self.ac;
        &self.data[s..s + self.ac]
    }

    pub fn set(&mut self, x: usize, y: usize, v: &[Q]) {
        let s = (x * self.bc + y) * self.ac;
        self.data[s..s + self.ac].clone_from_slice(v);
    }

    /// `g ∘ f` for coordinate vectors `f`, `g`.
    pub fn apply(&self, f: &[Q], g: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ac];
        for (x, fx) in f.iter().enumerate() {
            if fx.is_zero() {
                continue;
            }
            for (y, gy) in g.iter().enumerate() {
                if gy.is_zero() {
                    continue;
                }
                let c = fx * gy;
                for (o, t) in out.iter_mut().zip(self.entry(x, y)) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    fn swap_factors(&self) -> Tensor {
        let mut t = Tensor::zeros(self.bc, self.ab, self.ac);
        for x in 0..self.ab {
            for y in 0..self.bc {
                t.set(y, x, self.entry(x, y));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

/// Category on objects `0..size`; `Hom(a, b)` is either tracked or unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCategory {
    size: usize,
    hom: Vec<Option<usize>>,
    comp: Vec<Option<Tensor>>,
}

/// Validation data produced by a reflection at a formal sink, measured in
/// the orientation in which the reflection was performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinkStep {
    /// Sources of the arrows into the reflected object, with multiplicity.
    pub sources: Vec<usize>,
    /// `dim Hom(T_i, E*)`.
    pub hom_old_new: usize,
    /// `dim Hom(E*, T_i)`.
    pub hom_new_old: usize,
    /// `dim End(E*)`.
    pub end_new: usize,
}

impl HomCategory {
    pub fn size(&self) -> usize {
        self.size
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * self.size + b
    }

    fn idx3(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.size + b) * self.size + c
    }

    pub fn tracked(&self, a: usize, b: usize) -> bool {
        self.hom[self.idx(a, b)].is_some()
    }

    /// Dimension of a tracked Hom space.
    pub fn hom(&self, a: usize, b: usize) -> usize {
        self.hom[self.idx(a, b)].expect("Hom space is tracked")
    }

    pub fn try_hom(&self, a: usize, b: usize) -> Option<usize> {
        self.hom[self.idx(a, b)]
    }

    pub fn tensor(&self, a: usize, b: usize, c: usize) -> &Tensor {
        self.comp[self.idx3(a, b, c)].as_ref().expect("composition is tracked")
    }

    pub fn compose(&self, a: usize, b: usize, c: usize, f: &[Q], g: &[Q]) -> Vec<Q> {
        self.tensor(a, b, c).apply(f, g)
    }

    /// Line bundles `O(y)` for the given lattice points. The first `full`
    /// objects get all Hom spaces; the remaining ones are probes, tracked
    /// only as sources.
    pub fn line_bundles(d: &WeightDescriptor, full: &[LVector], probes: &[LVector]) -> Self {
        let objs: Vec<&LVector> = full.iter().chain(probes).collect();
        let size = objs.len();
        let nf = full.len();
        let tracked = |a: usize, b: usize| a >= nf || b < nf;
        let mut hom = vec![None; size * size];
        for a in 0..size {
            for b in 0..size {
                if tracked(a, b) {
                    hom[a * size + b] = Some(d.graded_dim(&d.sub(objs[b], objs[a])));
                }
            }
        }
        let mut comp = vec![None; size * size * size];
        for a in 0..size {
            for b in 0..size {
                if !tracked(a, b) {
                    continue;
                }
                for c in 0..size {
                    if !tracked(b, c) || !tracked(a, c) {
                        continue;
                    }
                    let ab = d.sub(objs[b], objs[a]);
                    let bc = d.sub(objs[c], objs[b]);
                    let (hab, hbc, hac) = (d.graded_dim(&ab), d.graded_dim(&bc), d.graded_dim(&d.sub(objs[c], objs[a])));
                    let mut t = Tensor::zeros(hab, hbc, hac);
                    if hab > 0 && hbc > 0 {
                        let table = d.product_table(&ab, &bc);
                        for (x, row) in table.iter().enumerate() {
                            for (y, v) in row.iter().enumerate() {
                                t.set(x, y, v);
                            }
                        }
                    }
                    comp[(a * size + b) * size + c] = Some(t);
                }
            }
        }
        HomCategory { size, hom, comp }
    }

    /// Opposite category.
    pub fn op(&self) -> Self {
        let n = self.size;
        let mut hom = vec![None; n * n];
        let mut comp = vec![None; n * n * n];
        for a in 0..n {
            for b in 0..n {
                hom[b * n + a] = self.hom[a * n + b];
                for c in 0..n {
                    if let Some(t) = &self.comp[(a * n + b) * n + c] {
                        comp[(c * n + b) * n + a] = Some(t.swap_factors());
                    }
                }
            }
        }
        HomCategory { size: n, hom, comp }
    }

    /// Row-reduced spanning set of the maps `a → b` factoring through some
    /// other member.
    pub fn rad2(&self, a: usize, b: usize, members: &[usize]) -> QMatrix {
        let h = self.hom(a, b);
        let mut rows = Vec::new();
        for &k in members {
            if k == a || k == b || self.try_hom(a, k).unwrap_or(0) == 0 || self.try_hom(k, b).unwrap_or(0) == 0 {
                continue;
            }
            let t = self.tensor(a, k, b);
            for x in 0..t.ab {
                for y in 0..t.bc {
                    rows.push(t.entry(x, y).to_vec());
                }
            }
        }
        let m = QMatrix::from_rows(rows.len(), h, rows);
        m.rref().0
    }

    /// Coset representatives of `rad / rad²` from `a` to `b` (irreducible maps).
    pub fn arrows(&self, a: usize, b: usize, members: &[usize]) -> Vec<Vec<Q>> {
        if a == b {
            return Vec::new();
        }
        let h = self.hom(a, b);
        if h == 0 {
            return Vec::new();
        }
        let r = self.rad2(a, b, members);
        let quo = Quotient::new(&r.transpose());
        (0..quo.dim()).map(|k| quo.lift(k)).collect()
    }

    /// Replace object `i` by the kernel `E*` of the map from the sources of
    /// its incoming arrows. Correct when `i` is a formal sink of the tilting
    /// object formed by `members`.
    pub fn reflect_sink(&self, i: usize, members: &[usize]) -> Result<(HomCategory, SinkStep)> {
        let n = self.size;
        let mut arr: Vec<(usize, Vec<Q>)> = Vec::new();
        for &s in members {
            if s != i {
                for v in self.arrows(s, i, members) {
                    arr.push((s, v));
                }
            }
        }
        if arr.is_empty() {
            return Err(Error::Approximation("surjective: no arrows end at the vertex".into()));
        }
        let src: Vec<usize> = arr.iter().map(|(s, _)| *s).collect();

        // Hom(k, E*) as kernels, Hom(E*, k) as cokernels.
        let mut kers: Vec<Option<(QMatrix, Vec<usize>)>> = vec![None; n];
        let mut quos: Vec<Option<(Quotient, Vec<usize>)>> = vec![None; n];
        for k in 0..n {
            if self.tracked(k, i) && src.iter().all(|&s| self.tracked(k, s)) {
                let off = offsets(src.iter().map(|&s| self.hom(k, s)));
                let total = *off.last().unwrap();
                let mut phi = QMatrix::zeros(self.hom(k, i), total);
                for (r, (s, al)) in arr.iter().enumerate() {
                    for t in 0..self.hom(k, *s) {
                        let col = self.compose(k, *s, i, &unit(self.hom(k, *s), t), al);
                        for (row, v) in col.into_iter().enumerate() {
                            phi[(row, off[r] + t)] = v;
                        }
                    }
                }
                kers[k] = Some((phi.nullspace(), off));
            }
            if self.tracked(i, k) && src.iter().all(|&s| self.tracked(s, k)) {
                let off = offsets(src.iter().map(|&s| self.hom(s, k)));
                let total = *off.last().unwrap();
                let mut psi = QMatrix::zeros(total, self.hom(i, k));
                for t in 0..self.hom(i, k) {
                    for (r, (s, al)) in arr.iter().enumerate() {
                        let col = self.compose(*s, i, k, al, &unit(self.hom(i, k), t));
                        for (row, v) in col.into_iter().enumerate() {
                            psi[(off[r] + row, t)] = v;
                        }
                    }
                }
                quos[k] = Some((Quotient::new(&psi), off));
            }
        }

        let hom_old_new = kers[i].as_ref().map(|(m, _)| m.cols()).unwrap_or(0);
        let hom_new_old = quos[i].as_ref().map(|(q, _)| q.dim()).unwrap_or(0);
        let end_new = self.end_of_kernel(i, &arr, &quos)?;

        let mut hom = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                hom[a * n + b] = match (a == i, b == i) {
                    (true, true) => Some(1),
                    (false, true) => kers[a].as_ref().map(|(m, _)| m.cols()),
                    (true, false) => quos[b].as_ref().map(|(q, _)| q.dim()),
                    (false, false) => self.hom[a * n + b],
                };
            }
        }
        let get = |a: usize, b: usize| hom[a * n + b];
        let mut comp = vec![None; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let Some(hab) = get(a, b) else { continue };
                for c in 0..n {
                    let (Some(hbc), Some(hac)) = (get(b, c), get(a, c)) else { continue };
                    let idx = (a * n + b) * n + c;
                    if !(a == i || b == i || c == i) {
                        comp[idx] = self.comp[idx].clone();
                        continue;
                    }
                    let mut t = Tensor::zeros(hab, hbc, hac);
                    if hab == 0 || hbc == 0 || hac == 0 {
                        comp[idx] = Some(t);
                        continue;
                    }
                    match (a == i, b == i, c == i) {
                        (true, true, true) => t.set(0, 0, &[Q::one()]),
                        (true, true, false) => {
                            for y in 0..hbc {
                                t.set(0, y, &unit(hbc, y));
                            }
                        }
                        (false, true, true) => {
                            for x in 0..hab {
                                t.set(x, 0, &unit(hab, x));
                            }
                        }
                        (false, false, true) => {
                            let (ka, offa) = kers[a].as_ref().unwrap();
                            let (kb, offb) = kers[b].as_ref().unwrap();
                            for x in 0..hab {
                                let f = unit(hab, x);
                                for y in 0..hbc {
                                    let g = kb.col(y);
                                    let mut v = vec![Q::zero(); *offa.last().unwrap()];
                                    for (r, &s) in src.iter().enumerate() {
                                        let part = self.compose(a, b, s, &f, &g[offb[r]..offb[r + 1]]);
                                        v[offa[r]..offa[r + 1]].clone_from_slice(&part);
                                    }
                                    let coords = ka
                                        .solve_in_span(&v)
                                        .ok_or_else(|| Error::Internal("composite leaves the kernel".into()))?;
                                    t.set(x, y, &coords);
                                }
                            }
                        }
                        (true, false, false) => {
                            let (qb, offb) = quos[b].as_ref().unwrap();
                            let (qc, offc) = quos[c].as_ref().unwrap();
                            for x in 0..hab {
                                let h = qb.lift(x);
                                for y in 0..hbc {
                                    let g = unit(hbc, y);
                                    let mut v = vec![Q::zero(); *offc.last().unwrap()];
                                    for (r, &s) in src.iter().enumerate() {
                                        let part = self.compose(s, b, c, &h[offb[r]..offb[r + 1]], &g);
                                        v[offc[r]..offc[r + 1]].clone_from_slice(&part);
                                    }
                                    t.set(x, y, &qc.coords(&v));
                                }
                            }
                        }
                        (false, true, false) => {
                            let (ka, offa) = kers[a].as_ref().unwrap();
                            let (qc, offc) = quos[c].as_ref().unwrap();
                            for x in 0..hab {
                                let f = ka.col(x);
                                for y in 0..hbc {
                                    let h = qc.lift(y);
                                    let mut acc = vec![Q::zero(); hac];
                                    for (r, &s) in src.iter().enumerate() {
                                        let part =
                                            self.compose(a, s, c, &f[offa[r]..offa[r + 1]], &h[offc[r]..offc[r + 1]]);
                                        for (o, p) in acc.iter_mut().zip(part) {
                                            *o += p;
                                        }
                                    }
                                    t.set(x, y, &acc);
                                }
                            }
                        }
                        (true, false, true) => {
                            // End(E*) is one-dimensional; read the scalar off a
                            // test vector v ∈ Hom(b, E*).
                            let (qb, offq) = quos[b].as_ref().unwrap();
                            let (kb, offk) = kers[b].as_ref().unwrap();
                            let v = kb.col(0);
                            let pivot = v.iter().position(|x| !x.is_zero()).unwrap();
                            for x in 0..hab {
                                let h = qb.lift(x);
                                let mut w = vec![Q::zero(); self.hom(b, b)];
                                for (r, &s) in src.iter().enumerate() {
                                    let part = self.compose(b, s, b, &v[offk[r]..offk[r + 1]], &h[offq[r]..offq[r + 1]]);
                                    for (o, p) in w.iter_mut().zip(part) {
                                        *o += p;
                                    }
                                }
                                for y in 0..hbc {
                                    let g = kb.col(y);
                                    let mut u = vec![Q::zero(); *offk.last().unwrap()];
                                    for (r, &s) in src.iter().enumerate() {
                                        let part = self.compose(b, b, s, &w, &g[offk[r]..offk[r + 1]]);
                                        u[offk[r]..offk[r + 1]].clone_from_slice(&part);
                                    }
                                    let scalar = &u[pivot] / &v[pivot];
                                    if u.iter().zip(&v).any(|(a, b)| *a != &scalar * b) {
                                        return Err(Error::Internal("endomorphism of the new object is not scalar".into()));
                                    }
                                    t.set(x, y, &[scalar]);
                                }
                            }
                        }
                        (false, false, false) => unreachable!(),
                    }
                    comp[idx] = Some(t);
                }
            }
        }
        let step = SinkStep { sources: src, hom_old_new, hom_new_old, end_new };
        Ok((HomCategory { size: n, hom, comp }, step))
    }

    /// `dim End(E*)` as the kernel of `⊕ Hom(E*, T_s) → Hom(E*, T_i)`.
    fn end_of_kernel(
        &self,
        i: usize,
        arr: &[(usize, Vec<Q>)],
        quos: &[Option<(Quotient, Vec<usize>)>],
    ) -> Result<usize> {
        let missing = || Error::Internal("cokernel data missing for a source".into());
        let (qi, offi) = quos[i].as_ref().ok_or_else(missing)?;
        let mut cols = Vec::new();
        for (s, al) in arr {
            let (qs, offs) = quos[*s].as_ref().ok_or_else(missing)?;
            for x in 0..qs.dim() {
                let h = qs.lift(x);
                let mut v = vec![Q::zero(); *offi.last().unwrap()];
                for (q, (sq, _)) in arr.iter().enumerate() {
                    let part = self.compose(*sq, *s, i, &h[offs[q]..offs[q + 1]], al);
                    v[offi[q]..offi[q + 1]].clone_from_slice(&part);
                }
                cols.push(qi.coords(&v));
            }
        }
        let m = QMatrix::from_cols(qi.dim(), &cols);
        Ok(cols.len() - m.rank())
    }

    /// Restrict to the given objects, in order.
    pub fn restrict(&self, objs: &[usize]) -> HomCategory {
        let m = objs.len();
        let mut hom = vec![None; m * m];
        let mut comp = vec![None; m * m * m];
        for (a, &oa) in objs.iter().enumerate() {
            for (b, &ob) in objs.iter().enumerate() {
                hom[a * m + b] = self.hom[self.idx(oa, ob)];
                for (c, &oc) in objs.iter().enumerate() {
                    comp[(a * m + b) * m + c] = self.comp[self.idx3(oa, ob, oc)].clone();
                }
            }
        }
        HomCategory { size: m, hom, comp }
    }

    /// Associativity of every tracked triple of compositions on basis
    /// elements; a consistency check for tests.
    pub fn is_associative(&self) -> bool {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let pairs = [(a, b), (b, c), (c, d), (a, c), (b, d), (a, d)];
                        if pairs.iter().any(|&(x, y)| !self.tracked(x, y)) {
                            continue;
                        }
                        let (hab, hbc, hcd) = (self.hom(a, b), self.hom(b, c), self.hom(c, d));
                        for x in 0..hab {
                            for y in 0..hbc {
                                for z in 0..hcd {
                                    let f = unit(hab, x);
                                    let g = unit(hbc, y);
                                    let h = unit(hcd, z);
                                    let left = self.compose(a, c, d, &self.compose(a, b, c, &f, &g), &h);
                                    let right = self.compose(a, b, d, &f, &self.compose(b, c, d, &g, &h));
                                    if left != right {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

pub(crate) fn unit(d: usize, k: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); d];
    v[k] = Q::one();
    v
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut off = vec![0];
    for s in sizes {
        off.push(off.last().unwrap() + s);
    }
    off
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(w: &[i64]) -> (WeightDescriptor, HomCategory) {
        let d = WeightDescriptor::with_default_lambdas(w.to_vec()).unwrap();
        let c = HomCategory::line_bundles(&d, &d.window(), &[]);
        (d, c)
    }

    #[test]
    fn canonical_arrows() {
        let (d, c) = canon(&[2, 3]);
        let members: Vec<usize> = (0..c.size()).collect();
        assert_eq!(c.arrows(0, 4, &members).len(), 0);
        assert_eq!(c.arrows(0, 1, &members).len(), 1);
        assert_eq!(c.arrows(1, 4, &members).len(), 1);
        let (_, k) = canon(&[]);
        assert_eq!(k.arrows(0, 1, &[0, 1]).len(), 2);
        assert_eq!(d.rank(), 5);
    }

    #[test]
    fn line_bundle_category_is_associative() {
        let (_, c) = canon(&[2, 2, 3]);
        assert!(c.is_associative());
    }

    #[test]
    fn op_swaps() {
        let (_, c) = canon(&[2, 3]);
        let o = c.op();
        assert_eq!(o.hom(4, 0), 2);
        assert_eq!(o.op(), c);
    }

    #[test]
    fn sink_reflection_at_c() {
        let (_, c) = canon(&[2, 3]);
        let members: Vec<usize> = (0..5).collect();
        let (r, step) = c.reflect_sink(4, &members).unwrap();
        assert_eq!(step.sources, vec![1, 3]);
        assert_eq!(step.end_new, 1);
        assert_eq!((step.hom_old_new, step.hom_new_old), (0, 1));
        assert!(r.is_associative());
        assert_eq!((r.hom(0, 4), r.hom(4, 1), r.hom(4, 3)), (0, 1, 1));
    }
}
