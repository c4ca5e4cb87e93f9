//! Reference data transcribed from published figures and tables.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
pub struct FigureSet {
    pub version: u32,
    pub figures: Vec<Figure>,
}

/// A tilting bundle drawn as a labeled quiver, together with the
/// reflection sequence (printed order) leading from it to the canonical
/// configuration.
#[derive(Clone, Debug, Deserialize)]
pub struct Figure {
    pub id: String,
    pub anchor: String,
    pub weights: Vec<i64>,
    pub lambdas: Vec<String>,
    /// Label carried by each window point of the canonical configuration;
    /// defaults to `1..=n` in window order.
    #[serde(default)]
    pub window_labels: Option<Vec<i64>>,
    pub sequence: Vec<i64>,
    /// `[label, degree, rank]`.
    pub summands: Vec<[i64; 3]>,
    #[serde(default)]
    pub arrows: Vec<[i64; 3]>,
    #[serde(default)]
    pub relations: Vec<[i64; 3]>,
    /// Stated number of central simple modules, when the text gives one.
    #[serde(default)]
    pub central_simples: Option<usize>,
    /// Stated number of arrows inducing bijections on the generic module.
    #[serde(default)]
    pub bijective_arrows: Option<usize>,
    /// Set when the drawn arrows are known not to be the Hom quiver of the
    /// bundles reached by `sequence`.
    #[serde(default)]
    pub quiver_note: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Tables {
    pub version: u32,
    pub gorenstein: GorensteinTable,
    pub coxeter_dynkin: CoxeterDynkinTable,
    pub branch_enlargement: BranchEnlargement,
    pub family_247: Family247,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GorensteinTable {
    pub anchor: String,
    pub rows: Vec<GorensteinRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GorensteinRow {
    pub family: String,
    pub weights: Vec<i64>,
    pub expected: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CoxeterDynkinTable {
    pub anchor: String,
    pub rows: Vec<CoxeterDynkinRow>,
}

/// Pairs are `[degree, rank]`.
#[derive(Clone, Debug, Deserialize)]
pub struct CoxeterDynkinRow {
    pub weights: Vec<i64>,
    pub first: [i64; 2],
    pub last: [i64; 2],
    pub summands: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BranchEnlargement {
    pub anchor: String,
    pub weights: Vec<i64>,
    pub summands: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Family247 {
    pub anchor: String,
    pub n_values: Vec<i64>,
    pub limit: String,
    pub entries: Vec<ClosedForm>,
}

/// `numerator(n) / denominator(n)`, coefficients low degree first.
#[derive(Clone, Debug, Deserialize)]
pub struct ClosedForm {
    pub name: String,
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    #[serde(default)]
    pub printed_discrepancy: Option<Discrepancy>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Discrepancy {
    pub reading: Vec<i64>,
    pub note: String,
}

const FIGURES: &str = include_str!("../data/figures.json");
const TABLES: &str = include_str!("../data/tables.json");

pub fn figures() -> &'static FigureSet {
    static CELL: OnceLock<FigureSet> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(FIGURES).expect("bundled figure data parses"))
}

pub fn tables() -> &'static Tables {
    static CELL: OnceLock<Tables> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(TABLES).expect("bundled table data parses"))
}

pub fn figure(id: &str) -> Option<&'static Figure> {
    figures().figures.iter().find(|f| f.id == id)
}

/// Figure whose weight type is written as `(2,2,2,2,2)` or `2,2,2,2,2`.
/// Types with two figures resolve to the last one listed.
pub fn figure_by_type(s: &str) -> Option<&'static Figure> {
    let key: String = s.chars().filter(|c| c.is_ascii_digit() || *c == ',').collect();
    let by_type: BTreeMap<String, &Figure> = figures()
        .figures
        .iter()
        .map(|f| (f.weights.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","), f))
        .collect();
    by_type.get(&key).copied()
}

impl Figure {
    pub fn summand(&self, label: i64) -> Option<(i64, i64)> {
        self.summands.iter().find(|s| s[0] == label).map(|s| (s[1], s[2]))
    }
}
