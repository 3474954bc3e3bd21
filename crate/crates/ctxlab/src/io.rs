//! JSON import and export for scenarios, states, and inequalities.
//!
//! Realized scenarios serialize their projector matrices; structure is
//! recomputed on import, so a file cannot claim an orthogonality its
//! matrices do not have. Abstract scenarios serialize edges and contexts.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::InequalitySpec;
use crate::linalg::{projector_from_ket, CMat, DensityMatrix, Ket, Projector, C64};
use crate::scenario::{self, Scenario};
use crate::{Error, Result};

/// Version tag written to and required from scenario files.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    projector: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ket: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioJson {
    format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    atoms: Vec<AtomJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contexts: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    #[serde(default)]
    scenario: Option<String>,
    #[serde(default)]
    probs: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    density: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IneqJson {
    #[serde(default)]
    name: Option<String>,
    weights: BTreeMap<String, f64>,
}

/// A parsed state file: vertex probabilities or a density matrix, plus the
/// scenario the file says it belongs to.
#[derive(Debug, Clone)]
pub struct StateFile {
    pub scenario: Option<String>,
    pub input: StateInput,
}

/// The two ways a state can be specified.
#[derive(Debug, Clone)]
pub enum StateInput {
    Probs(BTreeMap<String, f64>),
    Density(DensityMatrix),
}

fn matrix_to_json(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<[f64; 2]>], dim: usize, what: &str) -> Result<CMat> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected a {dim}x{dim} matrix"
        )));
    }
    Ok(CMat::from_fn(dim, dim, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Builds a density matrix from rows of `[re, im]` pairs, the same shape
/// the state file format uses.
pub fn density_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<DensityMatrix> {
    DensityMatrix::new(matrix_from_json(rows, rows.len(), "density")?)
}

/// Serializes a scenario to pretty-printed JSON.
pub fn scenario_to_json(s: &Scenario) -> String {
    let json = match s.realization() {
        Some(real) => ScenarioJson {
            format_version: FORMAT_VERSION,
            name: s.name().map(str::to_string),
            dimension: Some(real.dim),
            atoms: s
                .labels()
                .iter()
                .zip(&real.projectors)
                .map(|(label, p)| AtomJson {
                    label: label.clone(),
                    projector: Some(matrix_to_json(p.matrix())),
                    ket: None,
                })
                .collect(),
            edges: None,
            contexts: None,
        },
        None => ScenarioJson {
            format_version: FORMAT_VERSION,
            name: s.name().map(str::to_string),
            dimension: None,
            atoms: s
                .labels()
                .iter()
                .map(|label| AtomJson {
                    label: label.clone(),
                    projector: None,
                    ket: None,
                })
                .collect(),
            edges: Some(s.graph().edges().iter().map(|&(u, v)| [u, v]).collect()),
            contexts: Some(s.contexts().to_vec()),
        },
    };
    let mut text = serde_json::to_string_pretty(&json).expect("scenario serialization");
    text.push('\n');
    text
}

/// Parses a scenario from JSON, recomputing structure from projectors when
/// the atoms are realized.
pub fn scenario_from_json(text: &str) -> Result<Scenario> {
    let json: ScenarioJson = serde_json::from_str(text)?;
    if json.format_version != FORMAT_VERSION {
        return Err(Error::BadInput(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            json.format_version
        )));
    }
    if json.atoms.is_empty() {
        return Err(Error::BadInput("scenario has no atoms".into()));
    }
    let labels: Vec<String> = json.atoms.iter().map(|a| a.label.clone()).collect();
    let realized = json
        .atoms
        .iter()
        .filter(|a| a.projector.is_some() || a.ket.is_some())
        .count();

    let mut s = if realized == json.atoms.len() {
        if json.edges.is_some() || json.contexts.is_some() {
            return Err(Error::BadInput(
                "edges and contexts are derived from projectors; remove them".into(),
            ));
        }
        let dim = json.dimension.ok_or_else(|| {
            Error::BadInput("dimension is required with projector or ket atoms".into())
        })?;
        let mut projectors = Vec::with_capacity(json.atoms.len());
        for atom in &json.atoms {
            let p = match (&atom.projector, &atom.ket) {
                (Some(rows), None) => {
                    let m = matrix_from_json(rows, dim, &atom.label)?;
                    Projector::new(m)?
                }
                (None, Some(entries)) => {
                    if entries.len() != dim {
                        return Err(Error::DimensionMismatch(format!(
                            "{}: ket has {} entries, expected {dim}",
                            atom.label,
                            entries.len()
                        )));
                    }
                    let k = Ket::new(
                        entries.iter().map(|e| C64::new(e[0], e[1])).collect(),
                    )?;
                    projector_from_ket(&k)
                }
                (Some(_), Some(_)) => {
                    return Err(Error::BadInput(format!(
                        "{}: give a projector or a ket, not both",
                        atom.label
                    )));
                }
                (None, None) => unreachable!("counted as realized"),
            };
            projectors.push(p);
        }
        scenario::from_projectors(projectors, Some(&labels))?
    } else if realized > 0 {
        return Err(Error::BadInput(
            "either all atoms are realized or none are".into(),
        ));
    } else {
        if json.dimension.is_some() {
            return Err(Error::BadInput(
                "dimension requires projector or ket atoms".into(),
            ));
        }
        if let Some(contexts) = &json.contexts {
            let s = scenario::from_cover(labels, contexts)?;
            if let Some(edges) = &json.edges {
                let mut given: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&[u, v]| (u.min(v), u.max(v)))
                    .collect();
                given.sort_unstable();
                given.dedup();
                if given != s.graph().edges() {
                    return Err(Error::BadInput(
                        "edges disagree with context co-membership".into(),
                    ));
                }
            }
            s
        } else if let Some(edges) = &json.edges {
            let pairs: Vec<(usize, usize)> = edges.iter().map(|&[u, v]| (u, v)).collect();
            scenario::from_graph(labels, &pairs)?
        } else {
            return Err(Error::BadInput(
                "abstract scenario needs edges or contexts".into(),
            ));
        }
    };
    if let Some(name) = json.name {
        s.set_name(&name);
    }
    Ok(s)
}

/// Reads and parses a scenario file.
pub fn read_scenario(path: &Path) -> Result<Scenario> {
    scenario_from_json(&std::fs::read_to_string(path)?)
}

/// Writes a scenario file.
pub fn write_scenario(path: &Path, s: &Scenario) -> Result<()> {
    std::fs::write(path, scenario_to_json(s))?;
    Ok(())
}

/// Parses a state file: exactly one of `probs` or `density`.
pub fn state_from_json(text: &str) -> Result<StateFile> {
    let json: StateJson = serde_json::from_str(text)?;
    let input = match (json.probs, json.density) {
        (Some(probs), None) => StateInput::Probs(probs),
        (None, Some(rows)) => {
            let dim = rows.len();
            let m = matrix_from_json(&rows, dim, "density")?;
            StateInput::Density(DensityMatrix::new(m)?)
        }
        (Some(_), Some(_)) => {
            return Err(Error::BadInput(
                "give probs or density, not both".into(),
            ));
        }
        (None, None) => {
            return Err(Error::BadInput("state needs probs or density".into()));
        }
    };
    Ok(StateFile {
        scenario: json.scenario,
        input,
    })
}

/// Reads and parses a state file.
pub fn read_state(path: &Path) -> Result<StateFile> {
    state_from_json(&std::fs::read_to_string(path)?)
}

/// Parses an inequality file; an absent name defaults to `custom`.
pub fn inequality_from_json(text: &str) -> Result<InequalitySpec> {
    let json: IneqJson = serde_json::from_str(text)?;
    InequalitySpec::new(json.name.as_deref().unwrap_or("custom"), json.weights)
}

/// Reads and parses an inequality file.
pub fn read_inequality(path: &Path) -> Result<InequalitySpec> {
    inequality_from_json(&std::fs::read_to_string(path)?)
}

/// Formats a number to nine significant digits, exactly zero printing as
/// `0`. Fixed point where it stays readable, scientific otherwise (the
/// `%.9g` rule).
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scenario::{from_cover, from_graph, scenarios_isomorphic};

    #[test]
    fn realized_scenario_round_trips() {
        let e = catalog::builtin("kcbs").unwrap();
        let text = scenario_to_json(&e.scenario);
        let back = scenario_from_json(&text).unwrap();
        assert_eq!(back.name(), Some("kcbs"));
        assert_eq!(back.labels(), e.scenario.labels());
        assert_eq!(back.contexts(), e.scenario.contexts());
        assert!(scenarios_isomorphic(&e.scenario, &back).unwrap());
        let a = e.scenario.realization().unwrap();
        let b = back.realization().unwrap();
        for (p, q) in a.projectors.iter().zip(&b.projectors) {
            assert!(p.approx_eq(q));
        }
    }

    #[test]
    fn ket_atoms_import_like_vectors() {
        let text = r#"{
            "format_version": 1,
            "dimension": 3,
            "atoms": [
                {"label": "a", "ket": [[0,0],[0,0],[2,0]]},
                {"label": "b", "ket": [[0,0],[1,0],[0,0]]}
            ]
        }"#;
        let s = scenario_from_json(text).unwrap();
        assert_eq!(s.n_atoms(), 2);
        assert!(s.adjacent(0, 1));
        let p = &s.realization().unwrap().projectors[0];
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn abstract_scenario_round_trips() {
        let s = from_graph(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1)],
        )
        .unwrap();
        let back = scenario_from_json(&scenario_to_json(&s)).unwrap();
        assert_eq!(back.graph().edges(), s.graph().edges());
        assert_eq!(back.contexts(), s.contexts());

        let cover = from_cover(
            vec!["x".into(), "y".into(), "z".into()],
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let back = scenario_from_json(&scenario_to_json(&cover)).unwrap();
        assert_eq!(back.contexts(), cover.contexts());
    }

    #[test]
    fn conflicting_or_missing_fields_are_rejected() {
        assert!(matches!(
            scenario_from_json(r#"{"format_version": 2, "atoms": [{"label":"a"}]}"#),
            Err(Error::BadInput(_))
        ));
        assert!(scenario_from_json(r#"{"format_version": 1, "atoms": []}"#).is_err());
        // Abstract atoms with no structure.
        assert!(scenario_from_json(
            r#"{"format_version": 1, "atoms": [{"label":"a"}]}"#
        )
        .is_err());
        // Mixed realized and abstract atoms.
        assert!(scenario_from_json(
            r#"{"format_version": 1, "dimension": 2,
                "atoms": [{"label":"a","ket":[[1,0],[0,0]]},{"label":"b"}]}"#
        )
        .is_err());
        // Realized atoms with explicit contexts.
        assert!(scenario_from_json(
            r#"{"format_version": 1, "dimension": 2, "contexts": [[0]],
                "atoms": [{"label":"a","ket":[[1,0],[0,0]]}]}"#
        )
        .is_err());
        // Edges inconsistent with the cover.
        assert!(scenario_from_json(
            r#"{"format_version": 1, "edges": [[0,2]], "contexts": [[0,1],[1,2]],
                "atoms": [{"label":"a"},{"label":"b"},{"label":"c"}]}"#
        )
        .is_err());
    }

    #[test]
    fn state_files_parse_both_forms() {
        let f = state_from_json(r#"{"scenario": "chsh", "probs": {"++|ZS": 0.5}}"#).unwrap();
        assert_eq!(f.scenario.as_deref(), Some("chsh"));
        match f.input {
            StateInput::Probs(p) => assert_eq!(p["++|ZS"], 0.5),
            _ => panic!("expected probs"),
        }
        let f = state_from_json(
            r#"{"density": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#,
        )
        .unwrap();
        match f.input {
            StateInput::Density(rho) => assert_eq!(rho.dim(), 2),
            _ => panic!("expected density"),
        }
        assert!(state_from_json(r#"{"probs": {}, "density": []}"#).is_err());
        assert!(state_from_json(r#"{"scenario": "chsh"}"#).is_err());
    }

    #[test]
    fn inequality_files_parse() {
        let i = inequality_from_json(r#"{"name": "w", "weights": {"a": 1.0, "b": -2.0}}"#)
            .unwrap();
        assert_eq!(i.name(), "w");
        assert_eq!(i.weights().len(), 2);
        let i = inequality_from_json(r#"{"weights": {"a": 1.0}}"#).unwrap();
        assert_eq!(i.name(), "custom");
        assert!(inequality_from_json(r#"{"weights": {}}"#).is_err());
    }

    #[test]
    fn sig9_is_nine_significant_digits() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(2.0 + f64::sqrt(2.0)), "3.41421356");
        assert_eq!(format_sig9(f64::sqrt(5.0)), "2.23606798");
        assert_eq!(format_sig9(2.5), "2.50000000");
        assert_eq!(format_sig9(5.0 - 2.0 * f64::sqrt(5.0)), "0.527864045");
        assert_eq!(format_sig9(-0.25), "-0.250000000");
        assert_eq!(format_sig9(1.0), "1.00000000");
        // Outside the fixed-point window the form switches to scientific.
        assert_eq!(format_sig9(1.04083409e-17), "1.04083409e-17");
        assert_eq!(format_sig9(-3.0e12), "-3.00000000e12");
        assert_eq!(format_sig9(1.0e-4), "0.000100000000");
    }
}
