//! JSON form of a tower.
//!
//! ```json
//! {
//!   "base": ["a", "c", "d"],
//!   "max_atoms": 4096,
//!   "history": [{ "stage": 0, "element": "{a,c}" }],
//!   "stages": [
//!     { "index": 0, "atoms": [["base", "a"], ["base", "c"], ["base", "d"]] },
//!     { "index": 1, "conditioned": "{a,c}",
//!       "atoms": [["pair", 0, 2], ["pair", 1, 2], ["pair", 2, 0], ["pair", 2, 1]],
//!       "step_map": [[0], [1], [2, 3]] }
//!   ]
//! }
//! ```
//!
//! Loading rebuilds the tower from `base` and `history`; `stages` is
//! descriptive and, when present, must agree with the rebuilt tower.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boolalg::{AtomId, FiniteBooleanAlgebra};

use super::{BayesError, ExtensionTower, Lineage, DEFAULT_MAX_ATOMS};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Value", try_from = "Value")]
pub enum LineageDump {
    Base(String),
    Pair(usize, usize),
    Same(usize),
}

impl From<LineageDump> for Value {
    fn from(l: LineageDump) -> Value {
        match l {
            LineageDump::Base(s) => json!(["base", s]),
            LineageDump::Pair(i, j) => json!(["pair", i, j]),
            LineageDump::Same(i) => json!(["same", i]),
        }
    }
}

impl TryFrom<Value> for LineageDump {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, String> {
        let bad = || format!("bad atom lineage {}", v);
        let arr = v.as_array().ok_or_else(bad)?;
        let index = |k: usize| arr.get(k).and_then(Value::as_u64).map(|n| n as usize).ok_or_else(bad);
        match (arr.first().and_then(Value::as_str), arr.len()) {
            (Some("base"), 2) => Ok(LineageDump::Base(arr[1].as_str().ok_or_else(bad)?.to_string())),
            (Some("pair"), 3) => Ok(LineageDump::Pair(index(1)?, index(2)?)),
            (Some("same"), 2) => Ok(LineageDump::Same(index(1)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDump {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditioned: Option<String>,
    pub atoms: Vec<LineageDump>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub step_map: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub stage: usize,
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDump {
    pub base: Vec<String>,
    #[serde(default = "default_max_atoms")]
    pub max_atoms: usize,
    #[serde(default)]
    pub history: Vec<HistoryEntry>,
    #[serde(default)]
    pub stages: Vec<StageDump>,
}

fn default_max_atoms() -> usize {
    DEFAULT_MAX_ATOMS
}

impl ExtensionTower {
    pub fn dump(&self) -> TowerDump {
        let history = self
            .history()
            .map(|(stage, b)| HistoryEntry {
                stage,
                element: self.stages()[stage].print(b),
            })
            .collect();
        let stages = self
            .stages()
            .iter()
            .map(|st| StageDump {
                index: st.index(),
                conditioned: st
                    .step_base()
                    .map(|b| self.stages()[st.index() - 1].print(b)),
                atoms: st
                    .lineage()
                    .iter()
                    .map(|l| match l {
                        Lineage::Base(s) => LineageDump::Base(s.clone()),
                        Lineage::Pair(p, q) => LineageDump::Pair(p.0, q.0),
                        Lineage::Carried(p) => LineageDump::Same(p.0),
                    })
                    .collect(),
                step_map: if st.index() == 0 {
                    Vec::new()
                } else {
                    let prev = self.stages()[st.index() - 1].atom_count();
                    st.step_map(prev)
                        .into_iter()
                        .map(|c| c.into_iter().map(|AtomId(i)| i).collect())
                        .collect()
                },
            })
            .collect();
        TowerDump {
            base: self.base().algebra().labels().to_vec(),
            max_atoms: self.max_atoms(),
            history,
            stages,
        }
    }

    pub fn from_dump(dump: &TowerDump) -> Result<Self, BayesError> {
        let base = FiniteBooleanAlgebra::new(dump.base.iter().cloned())?;
        let mut tower = ExtensionTower::new(base).with_max_atoms(dump.max_atoms);
        for entry in &dump.history {
            if entry.stage != tower.latest_index() {
                return Err(BayesError::Dump(format!(
                    "history entry for stage {} follows stage {}",
                    entry.stage,
                    tower.latest_index()
                )));
            }
            let b = tower.parse_element(&entry.element)?;
            tower.extend(&b)?;
        }
        if !dump.stages.is_empty() && dump.stages != tower.dump().stages {
            return Err(BayesError::Dump("stage table disagrees with history".into()));
        }
        Ok(tower)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.dump()).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self, BayesError> {
        let dump: TowerDump = serde_json::from_str(text).map_err(|e| BayesError::Dump(e.to_string()))?;
        Self::from_dump(&dump)
    }
}
