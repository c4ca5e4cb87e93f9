//! In-memory sessions: a descriptor plus a reflection history, with the
//! current tilting object derived by replay.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use wpl_core::concrete::{ConcreteTilting, StepReport};
use wpl_core::k0::{Class, K0};
use wpl_core::tilting::{spectral_report, tilting_numeric_report, QuiverEdge};
use wpl_core::{LVector, WeightDescriptor};

use crate::wire::{int_str, q_str, slope_str, type_label, DescriptorWire, LVectorWire};
use crate::AppError;

/// What a session is created from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSpec {
    pub descriptor: DescriptorWire,
    /// Twist of the canonical configuration used as module reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<LVectorWire>,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub id: String,
    pub spec: SessionSpec,
    pub descriptor: WeightDescriptor,
    pub reference: Option<LVector>,
    pub tilting: ConcreteTilting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWire {
    pub k0: Vec<String>,
    pub deg: String,
    pub rk: String,
    pub slope: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexWire {
    pub label: i64,
    #[serde(flatten)]
    pub class: ClassWire,
    /// `deg/rk`, unreduced.
    pub fraction: String,
    pub polarity: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWire {
    pub from: i64,
    pub to: i64,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverWire {
    pub arrows: Vec<EdgeWire>,
    pub relations: Vec<EdgeWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateWire {
    pub id: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub descriptor: DescriptorWire,
    pub reference: Option<LVectorWire>,
    pub history: Vec<i64>,
    pub summands: Vec<VertexWire>,
    pub quiver: QuiverWire,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepWire {
    pub label: i64,
    pub polarity: String,
    pub partners: Vec<i64>,
    pub old: ClassWire,
    pub new: ClassWire,
    pub end_dim: String,
    pub ext_old_new: String,
    pub ext_new_old: String,
    pub retilts: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksWire {
    pub width: Option<String>,
    pub pbar: String,
    pub central_simples: String,
    pub central_simples_bound: String,
    pub canonical: bool,
    pub homogeneous: bool,
    pub identities_hold: bool,
}

pub fn class_wire(k0: &K0, c: &Class) -> ClassWire {
    let slope = k0.numerics(c).map(|n| slope_str(&n.slope)).unwrap_or_else(|_| "undefined".into());
    ClassWire { k0: c.iter().map(|x| int_str(*x)).collect(), deg: int_str(k0.deg(c)), rk: int_str(k0.rk(c)), slope }
}

fn edges(e: &[QuiverEdge]) -> Vec<EdgeWire> {
    e.iter().map(|e| EdgeWire { from: e.from, to: e.to, count: int_str(e.count) }).collect()
}

pub fn step_wire(k0: &K0, s: &StepReport) -> StepWire {
    StepWire {
        label: s.label,
        polarity: s.polarity.as_str().into(),
        partners: s.partners.clone(),
        old: class_wire(k0, &s.old_class),
        new: class_wire(k0, &s.new_class),
        end_dim: s.end_dim.to_string(),
        ext_old_new: int_str(s.ext_old_new),
        ext_new_old: int_str(s.ext_new_old),
        retilts: s.retilts.to_string(),
    }
}

impl Session {
    pub fn new(id: String, spec: SessionSpec) -> Result<Self, AppError> {
        let descriptor = spec.descriptor.to_descriptor()?;
        let reference = spec.reference.as_ref().map(|r| r.to_lvector(&descriptor)).transpose()?;
        let tilting = Self::start(&descriptor, reference.clone())?;
        Ok(Session { id, spec, descriptor, reference, tilting })
    }

    fn start(d: &WeightDescriptor, reference: Option<LVector>) -> Result<ConcreteTilting, AppError> {
        let mut t = ConcreteTilting::canonical(d)?;
        if let Some(r) = reference {
            t.retilt_reference(r)?;
        }
        Ok(t)
    }

    /// Rebuilds the state from the start configuration and `history`.
    pub fn replay(&mut self, history: &[i64]) -> Result<(), AppError> {
        let mut t = Self::start(&self.descriptor, self.reference.clone())?;
        t.reflect_sequence(history)?;
        self.tilting = t;
        Ok(())
    }

    pub fn reflect(&mut self, label: i64) -> Result<StepReport, AppError> {
        Ok(self.tilting.huebner_reflect(label)?)
    }

    /// Drops the last step; the state is recomputed from scratch so that it
    /// depends only on the remaining history.
    pub fn undo(&mut self) -> Result<Option<i64>, AppError> {
        let mut h = self.tilting.history().to_vec();
        let Some(last) = h.pop() else { return Ok(None) };
        self.replay(&h)?;
        Ok(Some(last))
    }

    pub fn state(&self) -> StateWire {
        let t = &self.tilting;
        let k0 = t.k0();
        let summands = t
            .labels()
            .iter()
            .zip(t.classes())
            .map(|(&label, c)| VertexWire {
                label,
                class: class_wire(k0, c),
                fraction: format!("{}/{}", k0.deg(c), k0.rk(c)),
                polarity: t.formal_polarity(label).ok().map(|p| p.as_str().to_string()),
            })
            .collect();
        let quiver = match t.endo_quiver() {
            Ok(q) => QuiverWire { arrows: edges(&q.arrows), relations: edges(&q.relations) },
            Err(_) => QuiverWire { arrows: vec![], relations: vec![] },
        };
        StateWire {
            id: self.id.clone(),
            type_label: type_label(&self.descriptor),
            descriptor: DescriptorWire::from_descriptor(&self.descriptor),
            reference: t.reference().map(LVectorWire::from),
            history: t.history().to_vec(),
            summands,
            quiver,
        }
    }

    pub fn checks(&self) -> Result<ChecksWire, AppError> {
        let t = &self.tilting;
        let k0 = t.k0();
        let datum = t.datum();
        let report = tilting_numeric_report(k0, &datum)?;
        let spectral = spectral_report(k0, &datum)?;
        Ok(ChecksWire {
            width: report.width.as_ref().map(q_str),
            pbar: int_str(self.descriptor.pbar()),
            central_simples: report.central_simples.to_string(),
            central_simples_bound: k0.n().saturating_sub(2).to_string(),
            canonical: report.is_canonical(),
            homogeneous: spectral.homogeneous,
            identities_hold: report.identities_hold,
        })
    }
}

/// Persistent form of a session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    #[serde(flatten)]
    pub spec: SessionSpec,
    pub history: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Snapshot {
    pub sessions: Vec<SessionRecord>,
}

/// Sessions behind one lock each; the map itself has its own lock.
#[derive(Default)]
pub struct Store {
    sessions: Mutex<BTreeMap<String, Arc<Mutex<Session>>>>,
    next: Mutex<u64>,
    snapshot: Option<PathBuf>,
}

impl Store {
    pub fn new(snapshot: Option<PathBuf>) -> Self {
        Store { snapshot, ..Default::default() }
    }

    /// Restores sessions from the snapshot file, when it exists.
    pub fn load(snapshot: PathBuf) -> Result<Self, AppError> {
        let store = Store::new(Some(snapshot.clone()));
        if snapshot.exists() {
            let snap: Snapshot = serde_json::from_str(&std::fs::read_to_string(&snapshot)?)?;
            let mut map = store.sessions.lock().expect("fresh lock");
            let mut next = store.next.lock().expect("fresh lock");
            for rec in snap.sessions {
                let mut s = Session::new(rec.id.clone(), rec.spec)?;
                s.replay(&rec.history)?;
                if let Some(k) = rec.id.strip_prefix('s').and_then(|k| k.parse::<u64>().ok()) {
                    *next = (*next).max(k);
                }
                map.insert(rec.id, Arc::new(Mutex::new(s)));
            }
        }
        Ok(store)
    }

    pub fn create(&self, spec: SessionSpec) -> Result<Arc<Mutex<Session>>, AppError> {
        let id = {
            let mut next = self.next.lock().expect("counter lock");
            *next += 1;
            format!("s{}", *next)
        };
        let s = Arc::new(Mutex::new(Session::new(id.clone(), spec)?));
        self.sessions.lock().expect("store lock").insert(id, s.clone());
        Ok(s)
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions.lock().expect("store lock").get(id).cloned()
    }

    /// Writes all sessions to the snapshot file, if one is configured.
    pub fn persist(&self) -> Result<(), AppError> {
        let Some(path) = &self.snapshot else { return Ok(()) };
        let handles: Vec<Arc<Mutex<Session>>> = self.sessions.lock().expect("store lock").values().cloned().collect();
        let sessions = handles
            .iter()
            .map(|h| {
                let s = h.lock().expect("session lock");
                SessionRecord { id: s.id.clone(), spec: s.spec.clone(), history: s.tilting.history().to_vec() }
            })
            .collect();
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&Snapshot { sessions })?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}
