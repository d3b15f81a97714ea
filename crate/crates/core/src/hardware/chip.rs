use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitCalibration {
    pub id: u32,
    pub t1_us: f64,
    pub t2_us: f64,
    /// Single-qubit gate fidelity.
    pub f1q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coupler {
    pub a: u32,
    pub b: u32,
    /// Two-qubit gate fidelity.
    pub f2q: f64,
}

/// Validated calibration snapshot of a chip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChipModel {
    pub qubits: Vec<QubitCalibration>,
    pub couplers: Vec<Coupler>,
}

impl ChipModel {
    pub fn new(qubits: Vec<QubitCalibration>, couplers: Vec<Coupler>) -> Result<Self> {
        let chip = ChipModel { qubits, couplers };
        chip.validate()?;
        Ok(chip)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let chip: ChipModel = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        chip.validate()?;
        Ok(chip)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("calibration serializes")
    }

    fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for (k, q) in self.qubits.iter().enumerate() {
            if !ids.insert(q.id) {
                return Err(Error::parse(
                    format!("qubits[{k}].id"),
                    format!("duplicate id {}", q.id),
                ));
            }
            check_fidelity(q.f1q, || format!("qubits[{k}].f1q"))?;
            for (name, v) in [("t1_us", q.t1_us), ("t2_us", q.t2_us)] {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::parse(
                        format!("qubits[{k}].{name}"),
                        format!("{v} is not a non-negative time"),
                    ));
                }
            }
        }
        let mut pairs = BTreeSet::new();
        for (k, c) in self.couplers.iter().enumerate() {
            for (end, id) in [("a", c.a), ("b", c.b)] {
                if !ids.contains(&id) {
                    return Err(Error::parse(
                        format!("couplers[{k}].{end}"),
                        format!("qubit {id} does not exist"),
                    ));
                }
            }
            if c.a == c.b {
                return Err(Error::parse(format!("couplers[{k}]"), "self-coupling"));
            }
            if !pairs.insert((c.a.min(c.b), c.a.max(c.b))) {
                return Err(Error::parse(format!("couplers[{k}]"), "duplicate coupler"));
            }
            check_fidelity(c.f2q, || format!("couplers[{k}].f2q"))?;
        }
        Ok(())
    }

    /// Neighbor lists keyed by qubit id, each sorted by neighbor id.
    pub fn coupling_map(&self) -> BTreeMap<u32, Vec<(u32, f64)>> {
        let mut map: BTreeMap<u32, Vec<(u32, f64)>> =
            self.qubits.iter().map(|q| (q.id, Vec::new())).collect();
        for c in &self.couplers {
            map.get_mut(&c.a).expect("validated").push((c.b, c.f2q));
            map.get_mut(&c.b).expect("validated").push((c.a, c.f2q));
        }
        for list in map.values_mut() {
            list.sort_by_key(|&(q, _)| q);
        }
        map
    }

    pub fn coupler_fidelity(&self, a: u32, b: u32) -> Option<f64> {
        self.couplers
            .iter()
            .find(|c| (c.a, c.b) == (a, b) || (c.a, c.b) == (b, a))
            .map(|c| c.f2q)
    }

    pub fn mean_f2q(&self) -> f64 {
        if self.couplers.is_empty() {
            return 0.0;
        }
        self.couplers.iter().map(|c| c.f2q).sum::<f64>() / self.couplers.len() as f64
    }
}

fn check_fidelity(v: f64, at: impl FnOnce() -> String) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::parse(at(), format!("fidelity {v} outside [0, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P10: &str = include_str!("../../fixtures/scq_p10.json");

    #[test]
    fn ten_qubit_line_fixture() {
        let chip = ChipModel::from_json(P10).unwrap();
        assert_eq!(chip.qubits.len(), 10);
        assert_eq!(chip.couplers.len(), 9);
        assert!(chip.couplers.iter().all(|c| c.f2q == 0.959));
        assert_eq!(chip.qubits[3].t1_us, 30.878);
    }

    fn line(f: &[f64]) -> String {
        let qubits: Vec<_> = (0..=f.len())
            .map(|i| format!(r#"{{"id": {i}, "t1_us": 30, "t2_us": 4, "f1q": 0.99}}"#))
            .collect();
        let couplers: Vec<_> = f
            .iter()
            .enumerate()
            .map(|(i, x)| format!(r#"{{"a": {i}, "b": {}, "f2q": {x}}}"#, i + 1))
            .collect();
        format!(
            r#"{{"qubits": [{}], "couplers": [{}]}}"#,
            qubits.join(","),
            couplers.join(",")
        )
    }

    #[test]
    fn fidelity_out_of_range() {
        match ChipModel::from_json(&line(&[0.9, 1.2])) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "couplers[1].f2q"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dangling_coupler() {
        let text = P10.replacen("\"b\": 1,", "\"b\": 99,", 1);
        match ChipModel::from_json(&text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "couplers[0].b"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_violation() {
        assert!(matches!(
            ChipModel::from_json(r#"{"qubits": [], "couplers": [], "extra": 1}"#),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            ChipModel::from_json(r#"{"qubits": [{"id": 0}], "couplers": []}"#),
            Err(Error::Parse { .. })
        ));
    }
}
