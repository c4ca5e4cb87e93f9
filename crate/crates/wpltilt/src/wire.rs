//! JSON shapes shared by the CLI, the HTTP API and the suites.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use wpl_core::k0::{Class, Slope, K0};
use wpl_core::rep::{QuiverPresentation, Representation};
use wpl_core::tilting::{QuiverEdge, Summand, TiltingDatum};
use wpl_core::{IntPoly, LVector, WeightDescriptor, Q};
use wpl_core::linalg::q;

use crate::AppError;

/// Exact rational as `"p/q"`, or `"p"` when integral.
pub fn q_str(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn int_str(x: i64) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q, AppError> {
    let bad = || AppError::Input(format!("not a rational number: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn slope_str(s: &Slope) -> String {
    match s {
        Slope::Finite(q) => q_str(q),
        Slope::Infinite => "inf".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorWire {
    pub weights: Vec<i64>,
    /// Omitted parameters default to `1, 2, 3, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<String>>,
}

impl DescriptorWire {
    pub fn to_descriptor(&self) -> Result<WeightDescriptor, AppError> {
        match &self.lambdas {
            None => Ok(WeightDescriptor::with_default_lambdas(self.weights.clone())?),
            Some(ls) => {
                let lambdas = ls.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()?;
                Ok(WeightDescriptor::new(self.weights.clone(), lambdas)?)
            }
        }
    }

    pub fn from_descriptor(d: &WeightDescriptor) -> Self {
        DescriptorWire { weights: d.weights().to_vec(), lambdas: Some(d.lambdas().iter().map(q_str).collect()) }
    }
}

/// Parses `2,3,7`, `(2,3,7)`, `2,2,2,3;1,2` or the empty type `()`.
pub fn parse_type(s: &str) -> Result<WeightDescriptor, AppError> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    let (w, l) = match s.split_once(';') {
        Some((w, l)) => (w, Some(l)),
        None => (s, None),
    };
    let weights = split_list(w)
        .map(|x| x.parse::<i64>().map_err(|_| AppError::Input(format!("not a weight: {x:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let lambdas = l.map(|l| split_list(l).map(String::from).collect());
    DescriptorWire { weights, lambdas }.to_descriptor()
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

pub fn type_label(d: &WeightDescriptor) -> String {
    let w: Vec<String> = d.weights().iter().map(|p| p.to_string()).collect();
    let default = d.lambdas().iter().enumerate().all(|(i, l)| *l == q(i as i64 + 1));
    if default {
        format!("({})", w.join(","))
    } else {
        let l: Vec<String> = d.lambdas().iter().map(q_str).collect();
        format!("({}; {})", w.join(","), l.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LVectorWire {
    pub arm: Vec<i64>,
    pub c: i64,
}

impl LVectorWire {
    pub fn to_lvector(&self, d: &WeightDescriptor) -> Result<LVector, AppError> {
        if self.arm.len() != d.arms() {
            return Err(AppError::Input(format!("expected {} arm entries, got {}", d.arms(), self.arm.len())));
        }
        Ok(d.normal_form(&self.arm, self.c))
    }
}

impl From<&LVector> for LVectorWire {
    fn from(v: &LVector) -> Self {
        LVectorWire { arm: v.arm.clone(), c: v.central }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandWire {
    pub label: i64,
    pub k0: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltingDatumWire {
    pub summands: Vec<SummandWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<Vec<[i64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<[i64; 3]>>,
}

pub fn edges_wire(e: &[QuiverEdge]) -> Vec<[i64; 3]> {
    e.iter().map(|e| [e.from, e.to, e.count]).collect()
}

fn edges_from_wire(e: &[[i64; 3]]) -> Vec<QuiverEdge> {
    e.iter().map(|&[from, to, count]| QuiverEdge { from, to, count }).collect()
}

impl TiltingDatumWire {
    pub fn from_datum(t: &TiltingDatum) -> Self {
        TiltingDatumWire {
            summands: t.summands.iter().map(|s| SummandWire { label: s.label, k0: s.class.clone() }).collect(),
            quiver: t.quiver.as_deref().map(edges_wire),
            relations: t.relations.as_deref().map(edges_wire),
        }
    }

    pub fn to_datum(&self, k0: &K0) -> Result<TiltingDatum, AppError> {
        for s in &self.summands {
            if s.k0.len() != k0.n() {
                return Err(AppError::Input(format!("summand {} has {} coordinates, expected {}", s.label, s.k0.len(), k0.n())));
            }
        }
        let t = TiltingDatum {
            summands: self.summands.iter().map(|s| Summand { label: s.label, class: s.k0.clone() }).collect(),
            quiver: self.quiver.as_deref().map(edges_from_wire),
            relations: self.relations.as_deref().map(edges_from_wire),
        };
        t.check_unimodular(k0)?;
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowMatrixWire {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationWire {
    pub dims: Vec<usize>,
    pub arrows: Vec<ArrowMatrixWire>,
}

impl RepresentationWire {
    pub fn from_rep(pres: &QuiverPresentation, m: &Representation) -> Self {
        let arrows = pres
            .arrows
            .iter()
            .zip(&m.maps)
            .map(|(&(from, to), a)| ArrowMatrixWire {
                from,
                to,
                matrix: (0..a.rows()).map(|r| a.row(r).iter().map(q_str).collect()).collect(),
            })
            .collect();
        RepresentationWire { dims: m.dims.clone(), arrows }
    }
}

/// Coefficients, low degree first.
pub fn poly_wire(p: &IntPoly) -> Vec<i64> {
    p.coeffs().to_vec()
}

/// `deg/rk` as printed next to quiver vertices.
pub fn fraction_label(k0: &K0, c: &Class) -> String {
    format!("{}/{}", k0.deg(c), k0.rk(c))
}
