//! Verdict engines for Carleson, reverse Carleson, `A_2` and corona
//! conditions.
//!
//! Every verdict is three-valued and carries the numbers it was read from.
//! Sups and infs over arcs are taken over the dyadic arcs of each level and
//! their half-shifted copies; every arc is contained in one of these of at
//! most twice its length, so scanned extremes are comparable to the true ones
//! up to a factor 2.

mod a2;
mod corona;
mod direct;
mod kernel;
mod refute;
mod reverse;
mod scan;

pub use a2::{a2_check, a2_products_on_arcs, two_weight_necessary, A2Result, PairedScan};
pub use corona::{corona_check, CoronaLevel, CoronaResult};
pub use direct::{direct_carleson_verdict, norm_equivalence_verdict};
pub use kernel::{kernel_ratio_scan, kernel_ratios_at, KernelKind, KernelRatio, KernelScan, LambdaFamily};
pub use refute::{
    isometry_refutation, poisson_square_limit_check, sampling_refutation, IsometryCertificate, PoissonRow, PoissonTable,
};
pub use reverse::{ess_inf_weighted, reverse_carleson_extreme, reverse_carleson_verdict, EssInf};
pub use scan::{
    carleson_sup_scan, level_trend, reverse_inf_scan, scan_arcs, write_scan_csv, ArcValue, LevelStat, ScanKind,
    ScanResult,
};

use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::error::{HbError, Result};

/// Default scan depth.
pub const DEFAULT_DEPTH: u32 = 14;

/// Relative change between the last two levels below which a running
/// extreme counts as stabilized.
pub const STABLE_REL: f64 = 0.05;

/// Resolutions shared by the analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnalysisConfig {
    /// Arc levels `1..=depth`; kernel and corona grids use radii
    /// `1 - 2^{-j}`, `j <= depth`.
    pub depth: u32,
    /// Uniform angles per radius in interior grids.
    pub angles: usize,
    /// Boundary grid for essential infima.
    pub grid: usize,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { depth: DEFAULT_DEPTH, angles: 64, grid: 1 << 14, seed: 0 }
    }
}

impl AnalysisConfig {
    pub fn with_depth(mut self, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        self.depth = depth;
        Ok(self)
    }
}

pub(crate) fn check_depth(depth: u32) -> Result<()> {
    if !(1..=20).contains(&depth) {
        return Err(HbError::Config(format!("scan depth {depth} not in [1, 20]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Undetermined,
}

impl Verdict {
    pub fn is_determinate(self) -> bool {
        self != Verdict::Undetermined
    }

    /// Conjunction: any fail fails, otherwise any undetermined is undetermined.
    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in it {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Undetermined => out = Verdict::Undetermined,
                Verdict::Pass => {}
            }
        }
        out
    }
}

/// JSON number, with non-finite values spelled out.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// One checked condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub verdict: Verdict,
    pub statement: String,
    pub evidence: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Condition {
    pub fn new(verdict: Verdict, statement: impl Into<String>) -> Self {
        Self { verdict, statement: statement.into(), evidence: BTreeMap::new(), note: None }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.evidence.insert(key.into(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub analysis: String,
    pub subject: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub conditions: BTreeMap<String, Condition>,
    pub constants: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, Value>,
    pub diagnostics: BTreeMap<String, Value>,
}

impl AnalysisReport {
    pub fn new(analysis: impl Into<String>) -> Self {
        Self {
            analysis: analysis.into(),
            subject: BTreeMap::new(),
            verdict: Verdict::Undetermined,
            conditions: BTreeMap::new(),
            constants: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn subject(mut self, key: &str, value: impl Into<String>) -> Self {
        self.subject.insert(key.into(), value.into());
        self
    }

    pub fn condition(&mut self, key: &str, c: Condition) {
        self.conditions.insert(key.into(), c);
    }

    pub fn constant(&mut self, key: &str, x: f64) {
        self.constants.insert(key.into(), num(x));
    }

    pub fn witness(&mut self, key: &str, v: Value) {
        self.witnesses.insert(key.into(), v);
    }

    pub fn diagnostic(&mut self, key: &str, v: Value) {
        self.diagnostics.insert(key.into(), v);
    }

    /// Whether the report flags disagreeing determinate conditions.
    pub fn inconsistent(&self) -> bool {
        self.diagnostics.get("inconsistent").and_then(Value::as_bool).unwrap_or(false)
    }

    /// Mark the verdicts of an equivalence group: when all determinate ones
    /// do not agree the overall verdict becomes undetermined.
    pub(crate) fn reconcile(&mut self, keys: &[&str]) {
        let vs: Vec<Verdict> = keys
            .iter()
            .filter_map(|k| self.conditions.get(*k).map(|c| c.verdict))
            .filter(|v| v.is_determinate())
            .collect();
        let agree = vs.windows(2).all(|w| w[0] == w[1]);
        self.diagnostic("equivalence_group", json!(keys));
        self.diagnostic("inconsistent", json!(!agree));
        if !agree {
            self.verdict = Verdict::Undetermined;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
