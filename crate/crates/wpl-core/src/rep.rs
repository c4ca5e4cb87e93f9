//! Representations of a bound quiver, with Hom and Ext computed by linear
//! algebra over the rationals.
//!
//! Modules are contravariant: an arrow `a → b` acts by a linear map
//! `M(b) → M(a)`, stored as a `dim M(a) × dim M(b)` matrix. This matches
//! `Hom(T, −)` for a tilting object `T` whose summands are the vertices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{LVector, WeightDescriptor};
use crate::linalg::{q, QMatrix, Quotient, Q};

/// A path is a list of arrow indices, head to tail, starting at its source.
pub type Path = Vec<usize>;

/// Linear combination of parallel paths that must act by zero.
pub type Relation = Vec<(Q, Path)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub vertices: usize,
    /// `(from, to)` for each arrow.
    pub arrows: Vec<(usize, usize)>,
    pub relations: Vec<Relation>,
}

impl QuiverPresentation {
    /// Quiver of the canonical algebra with its `t − 2` relations, on the
    /// window vertices. Arrow `k` of arm `i` is multiplication by `x_i`.
    pub fn canonical(d: &WeightDescriptor) -> Self {
        let window = d.window();
        let n = window.len();
        let mut arrows = Vec::new();
        let mut paths = Vec::new();
        let mut vertex = 1;
        for &p in d.padded() {
            let mut path = Vec::new();
            let mut prev = 0;
            for _ in 1..p {
                path.push(arrows.len());
                arrows.push((prev, vertex));
                prev = vertex;
                vertex += 1;
            }
            path.push(arrows.len());
            arrows.push((prev, n - 1));
            paths.push(path);
        }
        let relations = (2..d.arms())
            .map(|i| {
                vec![
                    (q(1), paths[i].clone()),
                    (q(-1), paths[1].clone()),
                    (d.lambda(i).clone(), paths[0].clone()),
                ]
            })
            .collect();
        QuiverPresentation { vertices: n, arrows, relations }
    }

    /// Arm whose generator each arrow multiplies by, for the canonical quiver.
    pub fn canonical_arms(d: &WeightDescriptor) -> Vec<usize> {
        d.padded().iter().enumerate().flat_map(|(i, &p)| core::iter::repeat(i).take(p as usize)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub maps: Vec<QMatrix>,
}

/// A morphism of representations: one matrix `M(v) → N(v)` per vertex.
pub type Morphism = Vec<QMatrix>;

impl Representation {
    pub fn zero(pres: &QuiverPresentation) -> Self {
        Representation {
            dims: vec![0; pres.vertices],
            maps: pres.arrows.iter().map(|_| QMatrix::zeros(0, 0)).collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Action of a path, from the module at its target to the module at its source.
    pub fn path_action(&self, pres: &QuiverPresentation, path: &[usize]) -> QMatrix {
        let (src, _) = pres.arrows[path[0]];
        let mut acc = QMatrix::identity(self.dims[src]);
        for &a in path {
            acc = acc.mul(&self.maps[a]);
        }
        acc
    }

    /// Matrix shapes agree with the dimension vector and all relations vanish.
    pub fn validate(&self, pres: &QuiverPresentation) -> Result<()> {
        if self.dims.len() != pres.vertices || self.maps.len() != pres.arrows.len() {
            return Err(Error::Validation("representation does not fit the quiver".into()));
        }
        for (k, (&(a, b), m)) in pres.arrows.iter().zip(&self.maps).enumerate() {
            if m.rows() != self.dims[a] || m.cols() != self.dims[b] {
                return Err(Error::Validation(format!("arrow {k} has the wrong shape")));
            }
        }
        for (k, rel) in pres.relations.iter().enumerate() {
            let Some((_, first)) = rel.first() else { continue };
            let (src, _) = pres.arrows[first[0]];
            let tgt = pres.arrows[*first.last().unwrap()].1;
            let mut acc = QMatrix::zeros(self.dims[src], self.dims[tgt]);
            for (c, p) in rel {
                acc = acc.add(&self.path_action(pres, p).scale(c));
            }
            if !acc.is_zero() {
                return Err(Error::Validation(format!("relation {k} does not hold")));
            }
        }
        Ok(())
    }

    pub fn direct_sum(parts: &[Representation], pres: &QuiverPresentation) -> Representation {
        let mut out = Representation::zero(pres);
        for v in 0..pres.vertices {
            out.dims[v] = parts.iter().map(|p| p.dims[v]).sum();
        }
        for (k, &(a, b)) in pres.arrows.iter().enumerate() {
            let mut m = QMatrix::zeros(out.dims[a], out.dims[b]);
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                let pm = &p.maps[k];
                for r in 0..pm.rows() {
                    for c in 0..pm.cols() {
                        m[(r0 + r, c0 + c)] = pm[(r, c)].clone();
                    }
                }
                r0 += p.dims[a];
                c0 += p.dims[b];
            }
            out.maps[k] = m;
        }
        out
    }
}

/// `Hom(T_can, O(z))` as a representation of the canonical quiver, defined
/// when `O(z)` has no `Ext¹` from the window.
pub fn line_bundle_module(d: &WeightDescriptor, z: &LVector) -> Result<Representation> {
    let window = d.window();
    let omega = d.omega();
    for (k, y) in window.iter().enumerate() {
        if d.graded_dim(&d.sub(&d.add(y, &omega), z)) != 0 {
            return Err(Error::OutsideWindow { vertex: k });
        }
    }
    let pres = QuiverPresentation::canonical(d);
    let arms = QuiverPresentation::canonical_arms(d);
    let dims = window.iter().map(|y| d.graded_dim(&d.sub(z, y))).collect();
    let maps = pres
        .arrows
        .iter()
        .zip(&arms)
        .map(|(&(a, _), &i)| {
            let src = d.sub(&d.sub(z, &window[a]), &d.x(i));
            if d.graded_dim(&src) == 0 {
                QMatrix::zeros(d.graded_dim(&d.sub(z, &window[a])), 0)
            } else {
                d.generator_action(&src, i)
            }
        })
        .collect();
    Ok(Representation { dims, maps })
}

/// Basis of `Hom(M, N)`.
pub fn hom_space(pres: &QuiverPresentation, m: &Representation, n: &Representation) -> Vec<Morphism> {
    let nv = pres.vertices;
    let mut off = vec![0; nv + 1];
    for v in 0..nv {
        off[v + 1] = off[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = off[nv];
    // f_v is stored row-major: entry (r, c) at off[v] + r * dim M(v) + c.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (k, &(a, b)) in pres.arrows.iter().enumerate() {
        // f_a ∘ M(k) = N(k) ∘ f_b, both maps M(b) → N(a).
        let (mk, nk) = (&m.maps[k], &n.maps[k]);
        for r in 0..n.dims[a] {
            for c in 0..m.dims[b] {
                let mut row = vec![Q::zero(); unknowns];
                for s in 0..m.dims[a] {
                    let x = &mk[(s, c)];
                    if !x.is_zero() {
                        row[off[a] + r * m.dims[a] + s] += x;
                    }
                }
                for s in 0..n.dims[b] {
                    let x = &nk[(r, s)];
                    if !x.is_zero() {
                        row[off[b] + s * m.dims[b] + c] -= x;
                    }
                }
                rows.push(row);
            }
        }
    }
    let sys = QMatrix::from_rows(rows.len(), unknowns, rows);
    let null = sys.nullspace();
    (0..null.cols())
        .map(|j| {
            let v = null.col(j);
            (0..nv)
                .map(|w| {
                    let mut f = QMatrix::zeros(n.dims[w], m.dims[w]);
                    for r in 0..n.dims[w] {
                        for c in 0..m.dims[w] {
                            f[(r, c)] = v[off[w] + r * m.dims[w] + c].clone();
                        }
                    }
                    f
                })
                .collect()
        })
        .collect()
}

fn combine(basis: &[Morphism], coeffs: &[Q], m: &Representation, n: &Representation) -> Morphism {
    (0..m.dims.len())
        .map(|v| {
            let mut acc = QMatrix::zeros(n.dims[v], m.dims[v]);
            for (f, c) in basis.iter().zip(coeffs) {
                if !c.is_zero() {
                    acc = acc.add(&f[v].scale(c));
                }
            }
            acc
        })
        .collect()
}

/// Isomorphism test: equal dimension vectors and an invertible element among
/// a few generic combinations of a Hom basis.
pub fn is_isomorphic(pres: &QuiverPresentation, m: &Representation, n: &Representation) -> bool {
    if m.dims != n.dims {
        return false;
    }
    let basis = hom_space(pres, m, n);
    if basis.is_empty() {
        return m.total_dim() == 0;
    }
    let mut seed: u64 = 0x9e37_79b9;
    for _ in 0..8 {
        let coeffs: Vec<Q> = basis
            .iter()
            .map(|_| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                q(((seed >> 33) % 97) as i64 - 48)
            })
            .collect();
        let f = combine(&basis, &coeffs, m, n);
        if f.iter().all(|x| x.rows() == 0 || !x.det().is_zero()) {
            return true;
        }
    }
    false
}

/// Module category of a bound quiver whose indecomposable projectives are
/// known, with each `P_v(v)` one-dimensional.
#[derive(Clone, Debug)]
pub struct ModuleCategory {
    pub pres: QuiverPresentation,
    pub projectives: Vec<Representation>,
}

/// A submodule given by bases of its pieces inside an ambient module.
struct Sub {
    module: Representation,
    basis: Vec<QMatrix>,
}

/// A projective cover `⊕ P_{v_g} → M`, with generators `g = (v_g, m_g)`.
struct Cover {
    gens: Vec<(usize, Vec<Q>)>,
    module: Representation,
    map: Morphism,
}

/// Dimensions of `Hom`, `Ext¹`, `Ext²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtDims {
    pub hom: usize,
    pub ext1: usize,
    pub ext2: usize,
}

impl ModuleCategory {
    /// Canonical algebra with projectives `Hom(T_can, O(y_v))`.
    pub fn canonical(d: &WeightDescriptor) -> Result<Self> {
        let projectives = d.window().iter().map(|y| line_bundle_module(d, y)).collect::<Result<Vec<_>>>()?;
        Ok(ModuleCategory { pres: QuiverPresentation::canonical(d), projectives })
    }

    /// `C[u][v] = dim P_v(u)`.
    pub fn cartan(&self) -> QMatrix {
        let n = self.pres.vertices;
        let mut c = QMatrix::zeros(n, n);
        for v in 0..n {
            for u in 0..n {
                c[(u, v)] = q(self.projectives[v].dims[u] as i64);
            }
        }
        c
    }

    /// Euler form on dimension vectors, `xᵀ C^{−T} y`.
    pub fn euler(&self, x: &[usize], y: &[usize]) -> Result<Q> {
        let inv = self.cartan().transpose().inverse().ok_or_else(|| Error::Internal("singular Cartan matrix".into()))?;
        let xv: Vec<Q> = x.iter().map(|&a| q(a as i64)).collect();
        let yv: Vec<Q> = y.iter().map(|&a| q(a as i64)).collect();
        let iy = inv.mul_vec(&yv);
        Ok(xv.iter().zip(&iy).map(|(a, b)| a * b).sum())
    }

    /// `Hom(P_v, N)` basis together with the inverse of its evaluation at
    /// the generator of `P_v`.
    fn yoneda(&self, v: usize, n: &Representation) -> Result<(Vec<Morphism>, QMatrix)> {
        let p = &self.projectives[v];
        let basis = hom_space(&self.pres, p, n);
        if basis.len() != n.dims[v] {
            return Err(Error::Validation(format!("Hom from projective {v} has the wrong dimension")));
        }
        let cols: Vec<Vec<Q>> = basis.iter().map(|f| f[v].col(0)).collect();
        let e = QMatrix::from_cols(n.dims[v], &cols);
        let inv = e.inverse().ok_or_else(|| Error::Validation(format!("evaluation at projective {v} is singular")))?;
        Ok((basis, inv))
    }

    fn cover(&self, m: &Representation) -> Result<Cover> {
        let pres = &self.pres;
        let mut gens = Vec::new();
        for v in 0..pres.vertices {
            let mut image = Vec::new();
            for (k, &(a, _)) in pres.arrows.iter().enumerate() {
                if a == v {
                    let mk = &m.maps[k];
                    for c in 0..mk.cols() {
                        image.push(mk.col(c));
                    }
                }
            }
            let quo = Quotient::new(&QMatrix::from_cols(m.dims[v], &image));
            for k in 0..quo.dim() {
                gens.push((v, quo.lift(k)));
            }
        }
        let parts: Vec<Representation> = gens.iter().map(|(v, _)| self.projectives[*v].clone()).collect();
        let module = Representation::direct_sum(&parts, pres);
        let mut map: Morphism = (0..pres.vertices).map(|w| QMatrix::zeros(m.dims[w], module.dims[w])).collect();
        let mut col0 = vec![0; pres.vertices];
        for (v, elem) in &gens {
            let (basis, inv) = self.yoneda(*v, m)?;
            let f = combine(&basis, &inv.mul_vec(elem), &self.projectives[*v], m);
            for w in 0..pres.vertices {
                for r in 0..m.dims[w] {
                    for c in 0..f[w].cols() {
                        map[w][(r, col0[w] + c)] = f[w][(r, c)].clone();
                    }
                }
                col0[w] += self.projectives[*v].dims[w];
            }
        }
        Ok(Cover { gens, module, map })
    }

    fn kernel(&self, m: &Representation, f: &Morphism) -> Result<Sub> {
        let pres = &self.pres;
        let basis: Vec<QMatrix> = f.iter().map(QMatrix::nullspace).collect();
        let dims: Vec<usize> = basis.iter().map(QMatrix::cols).collect();
        let mut maps = Vec::with_capacity(pres.arrows.len());
        for (k, &(a, b)) in pres.arrows.iter().enumerate() {
            let img = m.maps[k].mul(&basis[b]);
            let mut cols = Vec::with_capacity(dims[b]);
            for c in 0..dims[b] {
                cols.push(
                    basis[a]
                        .solve_in_span(&img.col(c))
                        .ok_or_else(|| Error::Internal("kernel is not a submodule".into()))?,
                );
            }
            maps.push(QMatrix::from_cols(dims[a], &cols));
        }
        Ok(Sub { module: Representation { dims, maps }, basis })
    }

    /// Matrix of `Hom(P_prev, N) → Hom(P_next, N)`, precomposition with the
    /// differential that sends each generator of `P_next` to `targets[g]`
    /// in `P_prev`.
    fn hom_differential(
        &self,
        prev: &[(usize, Vec<Q>)],
        targets: &[(usize, Vec<Q>)],
        n: &Representation,
    ) -> Result<QMatrix> {
        let nv = self.pres.vertices;
        let col_off = offsets(prev.iter().map(|(v, _)| n.dims[*v]));
        let row_off = offsets(targets.iter().map(|(v, _)| n.dims[*v]));
        let mut out = QMatrix::zeros(*row_off.last().unwrap(), *col_off.last().unwrap());
        let mut yon = Vec::with_capacity(nv);
        for v in 0..nv {
            yon.push(self.yoneda(v, n)?);
        }
        // Offsets of each summand of P_prev inside P_prev(w).
        let mut block = vec![vec![0; prev.len() + 1]; nv];
        for (w, row) in block.iter_mut().enumerate() {
            for (h, (v, _)) in prev.iter().enumerate() {
                row[h + 1] = row[h] + self.projectives[*v].dims[w];
            }
        }
        for (g, (w, elem)) in targets.iter().enumerate() {
            for (h, (v, _)) in prev.iter().enumerate() {
                let piece = &elem[block[*w][h]..block[*w][h + 1]];
                if piece.iter().all(Zero::is_zero) {
                    continue;
                }
                let (basis, inv) = &yon[*v];
                for e in 0..n.dims[*v] {
                    let f = combine(basis, &inv.col(e), &self.projectives[*v], n);
                    let val = f[*w].mul_vec(piece);
                    for (r, x) in val.into_iter().enumerate() {
                        out[(row_off[g] + r, col_off[h] + e)] = x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Hom`, `Ext¹`, `Ext²` from a minimal projective resolution of `m`,
    /// checked against the Euler form on dimension vectors.
    pub fn ext_dims(&self, m: &Representation, n: &Representation) -> Result<ExtDims> {
        let c0 = self.cover(m)?;
        let k1 = self.kernel(&c0.module, &c0.map)?;
        let c1 = self.cover(&k1.module)?;
        let k2 = self.kernel(&c1.module, &c1.map)?;
        let c2 = self.cover(&k2.module)?;
        let k3 = self.kernel(&c2.module, &c2.map)?;
        if k3.module.total_dim() != 0 {
            return Err(Error::Validation("projective dimension exceeds two".into()));
        }
        // Generators of P1 inside P0 and of P2 inside P1.
        let embed = |sub: &Sub, gens: &[(usize, Vec<Q>)]| -> Vec<(usize, Vec<Q>)> {
            gens.iter().map(|(v, e)| (*v, sub.basis[*v].mul_vec(e))).collect()
        };
        let t1 = embed(&k1, &c1.gens);
        let t2 = embed(&k2, &c2.gens);
        let d1 = self.hom_differential(&c0.gens, &t1, n)?;
        let d2 = self.hom_differential(&c1.gens, &t2, n)?;
        let total0 = d1.cols();
        let hom = total0 - d1.rank();
        let ext1 = (d2.cols() - d2.rank()) - d1.rank();
        let ext2 = d2.rows() - d2.rank();
        let euler = self.euler(&m.dims, &n.dims)?;
        if q(hom as i64) - q(ext1 as i64) + q(ext2 as i64) != euler {
            return Err(Error::Validation("Ext dimensions disagree with the Euler form".into()));
        }
        Ok(ExtDims { hom, ext1, ext2 })
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut off = vec![0];
    for s in sizes {
        off.push(off.last().unwrap() + s);
    }
    off
}
