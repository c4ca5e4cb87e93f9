//! Tilting objects carried as actual Hom-categories, mutated by Hübner
//! reflection.
//!
//! Each state keeps the Hom dimensions and composition tables among the
//! summands, so arrows of the endomorphism quiver are read off exactly.
//! Optionally the state also tracks reference line bundles `O(y_k + r)`
//! (the canonical configuration twisted by `r`); the summands are then
//! available as modules over the canonical algebra. A reference that stops
//! seeing a summand faithfully is replaced by the next, lower twist and the
//! history is replayed.

use alloc::string::String;
use alloc::{format, vec};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::homcat::HomCategory;
use crate::k0::{Class, K0};
use crate::lattice::{LVector, WeightDescriptor};
use crate::linalg::{QMatrix, Q};
use crate::rep::{QuiverPresentation, Representation};
use crate::tilting::{dual_polarity, Polarity, QuiverEdge, Summand, TiltingDatum};

/// Number of lower twists tried before giving up on a reference.
pub const REFERENCE_POOL: usize = 8;

#[derive(Clone, Debug)]
pub struct ConcreteTilting {
    k0: K0,
    start: Vec<LVector>,
    labels: Vec<i64>,
    classes: Vec<Class>,
    cat: HomCategory,
    history: Vec<i64>,
    reference: Option<LVector>,
    retilts: usize,
}

/// Outcome of one reflection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub label: i64,
    pub polarity: Polarity,
    /// Labels of the other ends of the arrows used, with multiplicity.
    pub partners: Vec<i64>,
    pub old_class: Class,
    pub new_class: Class,
    /// `dim End` of the new summand.
    pub end_dim: usize,
    /// `dim Ext¹(old, new)`.
    pub ext_old_new: i64,
    /// `dim Ext¹(new, old)`.
    pub ext_new_old: i64,
    /// Reference twists abandoned while performing this step.
    pub retilts: usize,
}

/// Arrows and minimal relation counts between labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoQuiver {
    pub arrows: Vec<QuiverEdge>,
    pub relations: Vec<QuiverEdge>,
}

impl ConcreteTilting {
    /// The canonical configuration, labels `1..=n` in window order.
    pub fn canonical(d: &WeightDescriptor) -> Result<Self> {
        let n = d.rank() as i64;
        Self::from_line_bundles(d, d.window(), (1..=n).collect())
    }

    /// A configuration of line bundles; fails unless they form a tilting
    /// object (Hom dimensions agree with the Euler form and the classes
    /// are a basis).
    pub fn from_line_bundles(d: &WeightDescriptor, points: Vec<LVector>, labels: Vec<i64>) -> Result<Self> {
        let k0 = K0::new(d);
        let n = k0.n();
        if points.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: points.len() });
        }
        if labels.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: labels.len() });
        }
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(Error::NotTilting(format!("label {l} repeated")));
            }
        }
        for p in &points {
            d.validate(p)?;
        }
        for a in &points {
            for b in &points {
                if d.line_pair_dims(a, b).1 != 0 {
                    return Err(Error::NotTilting(format!("Ext¹(O({a}), O({b})) is nonzero")));
                }
            }
        }
        let classes: Vec<Class> = points.iter().map(|y| k0.line_bundle_class(y)).collect();
        let datum = TiltingDatum {
            summands: labels.iter().zip(&classes).map(|(&label, c)| Summand { label, class: c.clone() }).collect(),
            quiver: None,
            relations: None,
        };
        datum.check_unimodular(&k0)?;
        let cat = HomCategory::line_bundles(d, &points, &[]);
        Ok(ConcreteTilting { k0, start: points, labels, classes, cat, history: Vec::new(), reference: None, retilts: 0 })
    }

    pub fn k0(&self) -> &K0 {
        &self.k0
    }

    pub fn descriptor(&self) -> &WeightDescriptor {
        self.k0.descriptor()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    /// Labels reflected so far, in order.
    pub fn history(&self) -> &[i64] {
        &self.history
    }

    pub fn reference(&self) -> Option<&LVector> {
        self.reference.as_ref()
    }

    /// Total number of abandoned reference twists.
    pub fn retilts(&self) -> usize {
        self.retilts
    }

    pub fn position(&self, label: i64) -> Result<usize> {
        self.labels.iter().position(|&l| l == label).ok_or(Error::UnknownLabel(label))
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn members(&self) -> Vec<usize> {
        (0..self.n()).collect()
    }

    /// `dim Hom(T_a, T_b)` by position.
    pub fn hom_dims(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|a| (0..self.n()).map(|b| self.cat.hom(a, b)).collect()).collect()
    }

    pub fn datum(&self) -> TiltingDatum {
        let q = self.endo_quiver().ok();
        TiltingDatum {
            summands: self.labels.iter().zip(&self.classes).map(|(&label, c)| Summand { label, class: c.clone() }).collect(),
            quiver: q.as_ref().map(|q| q.arrows.clone()),
            relations: q.map(|q| q.relations),
        }
    }

    pub fn duals(&self) -> Result<Vec<Class>> {
        let datum = TiltingDatum {
            summands: self.labels.iter().zip(&self.classes).map(|(&label, c)| Summand { label, class: c.clone() }).collect(),
            quiver: None,
            relations: None,
        };
        datum.duals(&self.k0)
    }

    pub fn formal_polarity(&self, label: i64) -> Result<Polarity> {
        let i = self.position(label)?;
        let duals = self.duals()?;
        dual_polarity(&self.k0, &duals[i], label)
    }

    /// Arrows `a_ij` from the composition tables and relation counts
    /// `r_ij = a_ij + ⟨S_j, S_i⟩ − δ_ij`.
    pub fn endo_quiver(&self) -> Result<EndoQuiver> {
        let n = self.n();
        let members = self.members();
        let duals = self.duals()?;
        let mut arrows = Vec::new();
        let mut relations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let a = self.cat.arrows(i, j, &members).len() as i64;
                if a > 0 {
                    arrows.push(QuiverEdge { from: self.labels[i], to: self.labels[j], count: a });
                }
                let r = a + self.k0.euler_unchecked(&duals[j], &duals[i]) - i64::from(i == j);
                if r > 0 {
                    relations.push(QuiverEdge { from: self.labels[i], to: self.labels[j], count: r });
                }
            }
        }
        arrows.sort();
        relations.sort();
        Ok(EndoQuiver { arrows, relations })
    }

    /// Reflect at `label`: kernel of the sink map when the summand is a
    /// formal sink, cokernel of the source map when it is a formal source.
    /// On any failure the state is unchanged.
    pub fn huebner_reflect(&mut self, label: i64) -> Result<StepReport> {
        let mut next = self.clone();
        let report = match next.reflect_once(label) {
            Ok(r) => r,
            Err(e @ Error::OutsideWindow { .. }) if self.reference.is_some() => {
                let first = format!("reference {}: {e}", self.reference.as_ref().expect("checked"));
                next.retilt_after_failure(label, first)?
            }
            Err(e) => return Err(e),
        };
        *self = next;
        Ok(report)
    }

    fn retilt_after_failure(&mut self, label: i64, first: String) -> Result<StepReport> {
        let d = self.descriptor().clone();
        let mut history = self.history.clone();
        history.push(label);
        let mut r = self.reference.clone().expect("reference present");
        let mut trace = vec![first];
        for attempt in 1..=REFERENCE_POOL {
            r = d.sub(&r, &d.c());
            let mut fresh = self.restart(Some(r.clone()));
            if let Err(e) = fresh.check_reference(&fresh.cat, &fresh.classes) {
                trace.push(format!("reference {r}: {e} at the start"));
                continue;
            }
            match fresh.replay(&history) {
                Ok(mut last) => {
                    fresh.retilts = self.retilts + attempt;
                    last.retilts = attempt;
                    *self = fresh;
                    return Ok(last);
                }
                Err(Error::Step { step, source }) if matches!(*source, Error::OutsideWindow { .. }) => {
                    trace.push(format!("reference {r}: {source} after step {}", step + 1));
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::WindowExhausted(trace.join("; ")))
    }

    fn restart(&self, reference: Option<LVector>) -> ConcreteTilting {
        let d = self.descriptor();
        let probes: Vec<LVector> = match &reference {
            Some(r) => d.window().iter().map(|y| d.add(y, r)).collect(),
            None => Vec::new(),
        };
        let cat = HomCategory::line_bundles(d, &self.start, &probes);
        ConcreteTilting {
            k0: self.k0.clone(),
            start: self.start.clone(),
            labels: self.labels.clone(),
            classes: self.start.iter().map(|y| self.k0.line_bundle_class(y)).collect(),
            cat,
            history: Vec::new(),
            reference,
            retilts: self.retilts,
        }
    }

    /// Replay labels from the current state without reference recovery;
    /// returns the last report.
    fn replay(&mut self, labels: &[i64]) -> Result<StepReport> {
        let mut last = None;
        for (k, &l) in labels.iter().enumerate() {
            last = Some(self.reflect_once(l).map_err(|e| Error::Step { step: k, source: alloc::boxed::Box::new(e) })?);
        }
        last.ok_or_else(|| Error::Internal("empty replay".into()))
    }

    fn reflect_once(&mut self, label: i64) -> Result<StepReport> {
        let i = self.position(label)?;
        let polarity = self.formal_polarity(label)?;
        let members = self.members();
        let (cat, step) = match polarity {
            Polarity::Sink => self.cat.reflect_sink(i, &members)?,
            Polarity::Source => {
                let (c, s) = self.cat.op().reflect_sink(i, &members)?;
                (c.op(), s)
            }
        };
        let old = self.classes[i].clone();
        let mut new: Class = old.iter().map(|x| -x).collect();
        for &s in &step.sources {
            for (a, b) in new.iter_mut().zip(&self.classes[s]) {
                *a += b;
            }
        }
        let k0 = &self.k0;
        let (hom_on, hom_no) = match polarity {
            Polarity::Sink => (step.hom_old_new, step.hom_new_old),
            Polarity::Source => (step.hom_new_old, step.hom_old_new),
        };
        let ext_old_new = hom_on as i64 - k0.euler_unchecked(&old, &new);
        let ext_new_old = hom_no as i64 - k0.euler_unchecked(&new, &old);
        let expected = match polarity {
            Polarity::Sink => (1, 0),
            Polarity::Source => (0, 1),
        };
        if step.end_new != 1 || (ext_old_new, ext_new_old) != expected {
            return Err(Error::Validation(format!(
                "reflection at {label}: End {} and Ext¹ ({ext_old_new}, {ext_new_old})",
                step.end_new
            )));
        }
        let mut classes = self.classes.clone();
        classes[i] = new.clone();
        let n = self.n();
        for a in 0..n {
            for b in 0..n {
                let e = k0.euler_unchecked(&classes[a], &classes[b]);
                if cat.hom(a, b) as i64 != e {
                    return Err(Error::Validation(format!(
                        "Hom({}, {}) has dimension {} but Euler form {e}",
                        self.labels[a],
                        self.labels[b],
                        cat.hom(a, b)
                    )));
                }
            }
        }
        self.check_reference(&cat, &classes)?;
        let partners = step.sources.iter().map(|&s| self.labels[s]).collect();
        self.cat = cat;
        self.classes = classes;
        self.history.push(label);
        Ok(StepReport {
            label,
            polarity,
            partners,
            old_class: old,
            new_class: new,
            end_dim: step.end_new,
            ext_old_new,
            ext_new_old,
            retilts: 0,
        })
    }

    /// Apply reflections in order; stops at the first failure, reporting
    /// its index, and leaves the state after the last successful step.
    pub fn reflect_sequence(&mut self, labels: &[i64]) -> Result<Vec<StepReport>> {
        let mut out = Vec::with_capacity(labels.len());
        for (k, &l) in labels.iter().enumerate() {
            out.push(self.huebner_reflect(l).map_err(|e| Error::Step { step: k, source: alloc::boxed::Box::new(e) })?);
        }
        Ok(out)
    }

    /// Undo the last reflection by replaying the history without it.
    pub fn undo(&mut self) -> Result<Option<i64>> {
        let Some(last) = self.history.last().copied() else { return Ok(None) };
        let history = self.history[..self.history.len() - 1].to_vec();
        let mut fresh = self.restart(self.reference.clone());
        if !history.is_empty() {
            fresh.replay(&history)?;
        }
        fresh.retilts = self.retilts;
        *self = fresh;
        Ok(Some(last))
    }

    fn check_reference(&self, cat: &HomCategory, classes: &[Class]) -> Result<()> {
        let n = self.n();
        for (k, y) in self.reference_points().iter().enumerate() {
            let rc = self.k0.line_bundle_class(y);
            for (b, cb) in classes.iter().enumerate() {
                if cat.hom(n + k, b) as i64 != self.k0.euler_unchecked(&rc, cb) {
                    return Err(Error::OutsideWindow { vertex: k });
                }
            }
        }
        Ok(())
    }

    fn reference_points(&self) -> Vec<LVector> {
        let d = self.descriptor();
        match &self.reference {
            Some(r) => d.window().iter().map(|y| d.add(y, r)).collect(),
            None => Vec::new(),
        }
    }

    /// Track the summands over the canonical configuration twisted by `r`,
    /// replaying the history. Fails with `OutsideWindow` when some summand
    /// has `Ext¹` from the reference along the way.
    pub fn retilt_reference(&mut self, r: LVector) -> Result<()> {
        self.descriptor().validate(&r)?;
        let mut fresh = self.restart(Some(r));
        fresh.check_reference(&fresh.cat, &fresh.classes)?;
        if !self.history.is_empty() {
            let h = self.history.clone();
            fresh.replay(&h).map_err(|e| match e {
                Error::Step { source, .. } => *source,
                e => e,
            })?;
        }
        fresh.retilts = self.retilts;
        *self = fresh;
        Ok(())
    }

    /// Stop tracking a reference.
    pub fn drop_reference(&mut self) {
        if self.reference.is_none() {
            return;
        }
        let n = self.n();
        self.cat = self.cat.restrict(&(0..n).collect::<Vec<_>>());
        self.reference = None;
    }

    /// Every summand as a representation of the canonical quiver through
    /// the tracked reference: vertex `k` carries `Hom(O(y_k + r), T_j)`.
    pub fn summand_modules(&self) -> Result<Vec<Representation>> {
        if self.reference.is_none() {
            return Err(Error::Unavailable("summand modules need a reference".into()));
        }
        let d = self.descriptor();
        let n = self.n();
        let pres = QuiverPresentation::canonical(d);
        let arms = QuiverPresentation::canonical_arms(d);
        let zero = d.zero();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let dims: Vec<usize> = (0..n).map(|k| self.cat.hom(n + k, j)).collect();
            let maps = pres
                .arrows
                .iter()
                .zip(&arms)
                .map(|(&(u, v), &arm)| {
                    let alpha = d.generator_action(&zero, arm).col(0);
                    let cols: Vec<Vec<Q>> = (0..dims[v])
                        .map(|y| self.cat.compose(n + u, n + v, j, &alpha, &crate::homcat::unit(dims[v], y)))
                        .collect();
                    QMatrix::from_cols(dims[u], &cols)
                })
                .collect();
            let m = Representation { dims, maps };
            m.validate(&pres)?;
            out.push(m);
        }
        Ok(out)
    }
}
