//! Built-in scenarios, states, and inequalities, with machine-readable
//! expected values consumed by the self-check suite.
//!
//! Coordinates follow the standard published constructions; each entry's
//! structure (orthogonality census, context count) is revalidated on
//! construction, so a transcription slip cannot pass silently.

use crate::classify::InequalitySpec;
use crate::linalg::{
    self, pauli_matrix, projector_from_ket, tensor_projectors, CMat, DensityMatrix, Ket,
    PauliAxis, Projector, C64, EPS_MAT,
};
use crate::scenario::{self, ClosureLimits, Scenario};
use crate::states::{self, GraphState};
use crate::{Error, Result};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueSource {
    /// Stated in the published analyses of the system.
    Literature,
    /// Produced by an independent reference computation.
    Computed,
    /// Mathematically exact (counts, algebraic identities).
    Exact,
}

/// One golden value with its comparison tolerance (0 means exact).
#[derive(Debug, Clone)]
pub struct Expected {
    pub key: String,
    pub value: f64,
    pub tolerance: f64,
    pub source: ValueSource,
}

impl Expected {
    fn new(key: &str, value: f64, tolerance: f64, source: ValueSource) -> Expected {
        Expected {
            key: key.to_string(),
            value,
            tolerance,
            source,
        }
    }

    /// Whether `actual` matches this expectation.
    pub fn matches(&self, actual: f64) -> bool {
        if self.tolerance == 0.0 {
            actual == self.value
        } else {
            (actual - self.value).abs() <= self.tolerance
        }
    }
}

/// A named state: quantum (density matrix, induced on demand) or direct
/// vertex probabilities.
#[derive(Debug, Clone)]
pub enum CatalogState {
    Density(DensityMatrix),
    Graph(GraphState),
}

/// A fully constructed scenario with its states, inequalities, and golden
/// values.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub scenario: Scenario,
    pub states: Vec<(String, CatalogState)>,
    pub inequalities: Vec<InequalitySpec>,
    pub expected: Vec<Expected>,
    pub notes: String,
}

impl CatalogEntry {
    pub fn state(&self, name: &str) -> Result<&CatalogState> {
        self.states
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnknownLabel(format!("state '{name}' in entry '{}'", self.name)))
    }

    /// The state as vertex probabilities, inducing density matrices.
    pub fn graph_state(&self, name: &str) -> Result<GraphState> {
        match self.state(name)? {
            CatalogState::Graph(p) => Ok(p.clone()),
            CatalogState::Density(rho) => states::induce(&self.scenario, rho),
        }
    }

    pub fn inequality(&self, name: &str) -> Result<&InequalitySpec> {
        self.inequalities
            .iter()
            .find(|i| i.name() == name)
            .ok_or_else(|| {
                Error::UnknownLabel(format!("inequality '{name}' in entry '{}'", self.name))
            })
    }

    pub fn expected(&self, key: &str) -> Option<&Expected> {
        self.expected.iter().find(|e| e.key == key)
    }
}

/// Fixed builtin names; `cycle(n)` additionally parses for any 3 <= n <= 1000.
pub const BUILTIN_NAMES: [&str; 8] = [
    "chsh",
    "ghz322",
    "kcbs",
    "ceg18",
    "ceg17",
    "yu_oh",
    "shared_event_d3",
    "triangle",
];

/// Constructs a builtin entry by name.
pub fn builtin(name: &str) -> Result<CatalogEntry> {
    match name {
        "chsh" => chsh(),
        "ghz322" => ghz322(),
        "kcbs" => kcbs(),
        "ceg18" => ceg18(),
        "ceg17" => ceg17(),
        "yu_oh" => yu_oh(),
        "shared_event_d3" => shared_event_d3(),
        "triangle" => cycle_entry(3, "triangle"),
        other => {
            if let Some(n) = parse_cycle(other) {
                cycle_entry(n, other)
            } else {
                Err(Error::UnknownBuiltin(other.to_string()))
            }
        }
    }
}

fn parse_cycle(name: &str) -> Option<usize> {
    let inner = name.strip_prefix("cycle(")?.strip_suffix(')')?;
    let n: usize = inner.parse().ok()?;
    (3..=1000).contains(&n).then_some(n)
}

fn ket(entries: &[f64]) -> Ket {
    Ket::from_reals(entries).expect("catalog kets are nonzero")
}

fn labeled_graph_state(s: &Scenario, pairs: &[(&str, f64)]) -> Result<GraphState> {
    let mut probs = vec![0.0; s.n_atoms()];
    for (label, value) in pairs {
        probs[s.index_of(label)?] = *value;
    }
    states::validate_state(s, &probs)
}

/// Product scenario of one joint measurement per choice of observable per
/// part. Observables are Hermitian involutions (outcomes +1/-1); atoms are
/// tensor products of their eigenprojectors, labeled `+-..|WORD`. The
/// product measurements are recorded as the scenario's measurement hint.
pub fn bell_scenario(parts: &[Vec<(String, CMat)>]) -> Result<Scenario> {
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(Error::BadInput(
            "product scenario needs at least one observable per part".into(),
        ));
    }
    let mut eig: Vec<Vec<(String, Projector, Projector)>> = Vec::new();
    for part in parts {
        let d = part[0].1.nrows();
        let mut row = Vec::new();
        for (label, m) in part {
            if m.nrows() != m.ncols() || m.nrows() != d {
                return Err(Error::DimensionMismatch(format!(
                    "observable '{label}' has shape {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if (m - m.adjoint()).norm() >= EPS_MAT {
                return Err(Error::BadInput(format!(
                    "observable '{label}' is not Hermitian"
                )));
            }
            if (m * m - CMat::identity(d, d)).norm() >= EPS_MAT {
                return Err(Error::BadInput(format!(
                    "observable '{label}' is not an involution"
                )));
            }
            row.push((
                label.clone(),
                linalg::eigenprojector_involution(m, 1),
                linalg::eigenprojector_involution(m, -1),
            ));
        }
        eig.push(row);
    }

    let n_parts = parts.len();
    let n_patterns = 1usize << n_parts;
    let mut projectors = Vec::new();
    let mut labels = Vec::new();
    let mut word_blocks: Vec<Vec<usize>> = Vec::new();
    let mut word = vec![0usize; n_parts];
    loop {
        let word_label: String = word
            .iter()
            .enumerate()
            .map(|(i, &k)| eig[i][k].0.as_str())
            .collect();
        let mut block = Vec::new();
        for mask in 0..n_patterns {
            let mut signs = String::new();
            let mut proj: Option<Projector> = None;
            for (i, &k) in word.iter().enumerate() {
                let plus = mask >> (n_parts - 1 - i) & 1 == 0;
                signs.push(if plus { '+' } else { '-' });
                let factor = if plus { &eig[i][k].1 } else { &eig[i][k].2 };
                proj = Some(match proj {
                    None => factor.clone(),
                    Some(p) => tensor_projectors(&p, factor),
                });
            }
            block.push(projectors.len());
            projectors.push(proj.expect("at least one part"));
            labels.push(format!("{signs}|{word_label}"));
        }
        word_blocks.push(block);
        // Odometer over observable choices, rightmost fastest.
        let mut i = n_parts;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < eig[i].len() {
                break;
            }
            word[i] = 0;
        }
        if word.iter().all(|&k| k == 0) {
            break;
        }
    }

    let mut s = scenario::from_projectors(projectors, Some(&labels))?;
    let mut hint = Vec::new();
    for block in &word_blocks {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        let pos = s
            .contexts()
            .iter()
            .position(|c| *c == sorted)
            .ok_or_else(|| {
                Error::BadGraph("a product measurement is not a maximal context".into())
            })?;
        hint.push(pos);
    }
    s.set_measurement_hint(hint);
    Ok(s)
}

fn chsh() -> Result<CatalogEntry> {
    let z = pauli_matrix(PauliAxis::Z);
    let x = pauli_matrix(PauliAxis::X);
    let r = C64::new(1.0 / f64::sqrt(2.0), 0.0);
    let s_obs = (&z + &x) * -r;
    let t_obs = (&z - &x) * r;
    let parts = vec![
        vec![("Z".to_string(), z.clone()), ("X".to_string(), x.clone())],
        vec![("S".to_string(), s_obs.clone()), ("T".to_string(), t_obs.clone())],
    ];
    let mut scenario = bell_scenario(&parts)?;
    scenario.set_name("chsh");

    let singlet = DensityMatrix::pure(&ket(&[0.0, 1.0, -1.0, 0.0]))?;

    // Hardy pair: the unique ray killed by three joint outcomes, leaving
    // one measurement without certainty.
    let kill = [
        tensor_projectors(
            &linalg::eigenprojector_involution(&x, 1),
            &linalg::eigenprojector_involution(&s_obs, 1),
        ),
        tensor_projectors(
            &linalg::eigenprojector_involution(&z, 1),
            &linalg::eigenprojector_involution(&t_obs, 1),
        ),
        tensor_projectors(
            &linalg::eigenprojector_involution(&x, -1),
            &linalg::eigenprojector_involution(&t_obs, -1),
        ),
    ];
    let mut k_sum = CMat::zeros(4, 4);
    for k in &kill {
        k_sum += k.matrix();
    }
    let eigen = k_sum.symmetric_eigen();
    let (min_idx, min_val) = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| {
            if v < acc.1 {
                (i, v)
            } else {
                acc
            }
        });
    assert!(
        min_val.abs() < 1e-9,
        "three killed outcomes must leave a one-dimensional kernel"
    );
    let hardy_ket = Ket::new(eigen.eigenvectors.column(min_idx).iter().copied().collect())?;
    let hardy = DensityMatrix::pure(&hardy_ket)?;

    let box_support = [
        "++|ZS", "--|ZS", "++|XS", "--|XS", "++|XT", "--|XT", "+-|ZT", "-+|ZT",
    ];
    let pr_box = labeled_graph_state(
        &scenario,
        &box_support.map(|l| (l, 0.5)),
    )?;
    let ineq = InequalitySpec::new(
        "chsh",
        box_support.iter().map(|l| (l.to_string(), 1.0)),
    )?;

    let sqrt2 = f64::sqrt(2.0);
    Ok(CatalogEntry {
        name: "chsh".into(),
        scenario,
        states: vec![
            ("singlet".into(), CatalogState::Density(singlet)),
            ("hardy".into(), CatalogState::Density(hardy)),
            ("pr_box".into(), CatalogState::Graph(pr_box)),
        ],
        inequalities: vec![ineq],
        expected: vec![
            Expected::new("atoms", 16.0, 0.0, ValueSource::Exact),
            Expected::new("contexts", 12.0, 0.0, ValueSource::Computed),
            Expected::new("s01_count", 16.0, 0.0, ValueSource::Computed),
            Expected::new("nc_bound:chsh", 3.0, 0.0, ValueSource::Literature),
            Expected::new("algebraic_bound:chsh", 4.0, 1e-7, ValueSource::Computed),
            Expected::new("eval:chsh:singlet", 2.0 + sqrt2, 1e-9, ValueSource::Literature),
            Expected::new("eval:chsh:pr_box", 4.0, 1e-9, ValueSource::Computed),
            Expected::new("w_nc:pr_box", 0.0, 1e-7, ValueSource::Computed),
            Expected::new("w_nc:hardy", 5.0 / 6.0, 1e-7, ValueSource::Computed),
        ],
        notes: "Two-party scenario with observables Z, X against S = -(Z+X)/sqrt(2), \
                T = (Z-X)/sqrt(2). The box state and the inequality share the same \
                eight-atom support."
            .into(),
    })
}

fn ghz322() -> Result<CatalogEntry> {
    let x = pauli_matrix(PauliAxis::X);
    let y = pauli_matrix(PauliAxis::Y);
    let part = vec![("X".to_string(), x), ("Y".to_string(), y)];
    let parts = vec![part.clone(), part.clone(), part];
    let mut scenario = bell_scenario(&parts)?;
    scenario.set_name("ghz322");
    let mut ghz_entries = vec![0.0; 8];
    ghz_entries[0] = 1.0;
    ghz_entries[7] = 1.0;
    let ghz = DensityMatrix::pure(&ket(&ghz_entries))?;
    Ok(CatalogEntry {
        name: "ghz322".into(),
        scenario,
        states: vec![("ghz".into(), CatalogState::Density(ghz))],
        inequalities: vec![],
        expected: vec![
            Expected::new("atoms", 64.0, 0.0, ValueSource::Exact),
            Expected::new("contexts", 744.0, 0.0, ValueSource::Computed),
            Expected::new("deficient_cliques", 128.0, 0.0, ValueSource::Computed),
            Expected::new("s01_count", 64.0, 0.0, ValueSource::Computed),
            Expected::new("w_nc:ghz", 0.0, 1e-7, ValueSource::Computed),
        ],
        notes: "Three qubits measured in X or Y each. The eight product measurements \
                are the measurement hint; further complete cliques arise from \
                cross-measurement orthogonality."
            .into(),
    })
}

fn kcbs() -> Result<CatalogEntry> {
    let c5 = f64::cos(std::f64::consts::PI / 5.0);
    let cos2 = c5 / (1.0 + c5);
    let (cos_t, sin_t) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let rays: Vec<Ket> = (0..5)
        .map(|i| {
            let phi = 4.0 * std::f64::consts::PI * i as f64 / 5.0;
            ket(&[sin_t * phi.cos(), sin_t * phi.sin(), cos_t])
        })
        .collect();
    let projs: Vec<Projector> = rays.iter().map(projector_from_ket).collect();
    for i in 0..5 {
        assert!(
            linalg::is_orthogonal(&projs[i], &projs[(i + 1) % 5])?,
            "umbrella rays must have orthogonal neighbors"
        );
    }
    let base_labels: Vec<String> = (0..5).map(|i| format!("P{i}")).collect();
    let sat = scenario::saturate(&projs, Some(&base_labels), &ClosureLimits::default())?;

    // Reorder the saturated atoms so the five wedge complements follow the
    // five rays, labeled by the pair they complete.
    let sat_real = sat.scenario.realization().expect("saturated scenarios are realized");
    let mut ordered = Vec::new();
    let mut labels = Vec::new();
    for (i, p) in projs.iter().enumerate() {
        ordered.push(p.clone());
        labels.push(format!("P{i}"));
    }
    for i in 0..5 {
        let j = (i + 1) % 5;
        let wedge_mat = CMat::identity(3, 3) - projs[i].matrix() - projs[j].matrix();
        let wedge = Projector::new(wedge_mat)?;
        let found = sat_real
            .projectors
            .iter()
            .find(|a| a.approx_eq(&wedge))
            .expect("closure must contain each wedge complement");
        ordered.push(found.clone());
        labels.push(format!("P{i}{j}"));
    }
    let mut scenario = scenario::from_projectors(ordered, Some(&labels))?;
    scenario.set_name("kcbs");

    let apex: Vec<f64> = (0..3)
        .map(|k| rays.iter().map(|r| r.coefficients()[k].re).sum())
        .collect();
    let kcbs_state = DensityMatrix::pure(&ket(&apex))?;
    let half_pairs: Vec<(&str, f64)> = vec![
        ("P0", 0.5),
        ("P1", 0.5),
        ("P2", 0.5),
        ("P3", 0.5),
        ("P4", 0.5),
    ];
    let half_cycle = labeled_graph_state(&scenario, &half_pairs)?;
    let ineq = InequalitySpec::new("kcbs", (0..5).map(|i| (format!("P{i}"), 1.0)))?;

    let sqrt5 = f64::sqrt(5.0);
    Ok(CatalogEntry {
        name: "kcbs".into(),
        scenario,
        states: vec![
            ("kcbs".into(), CatalogState::Density(kcbs_state)),
            ("half_cycle".into(), CatalogState::Graph(half_cycle)),
        ],
        inequalities: vec![ineq],
        expected: vec![
            Expected::new("atoms", 10.0, 0.0, ValueSource::Literature),
            Expected::new("contexts", 5.0, 0.0, ValueSource::Literature),
            Expected::new("s01_count", 11.0, 0.0, ValueSource::Computed),
            Expected::new("nc_bound:kcbs", 2.0, 0.0, ValueSource::Literature),
            Expected::new("algebraic_bound:kcbs", 2.5, 1e-7, ValueSource::Computed),
            Expected::new("eval:kcbs:kcbs", sqrt5, 1e-9, ValueSource::Literature),
            Expected::new("eval:kcbs:half_cycle", 2.5, 1e-9, ValueSource::Exact),
            Expected::new("w_nc:kcbs", 5.0 - 2.0 * sqrt5, 1e-7, ValueSource::Computed),
        ],
        notes: "Five rays on a symmetric umbrella around the z axis, saturated; the \
                five generated atoms are the wedge complements I - Pi - Pj of \
                neighboring rays. The featured state is the normalized sum of the \
                rays (the apex)."
            .into(),
    })
}

/// The 18-ray four-dimensional set, coordinates reversed so (1,0,0,0) is
/// the first member.
fn ceg_vectors() -> Vec<Vec<f64>> {
    let raw: [[f64; 4]; 18] = [
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, -1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 1.0, 0.0],
        [1.0, 0.0, -1.0, 0.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
        [0.0, 0.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [0.0, 1.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, -1.0, 0.0],
        [1.0, 1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0, 1.0],
    ];
    raw.iter()
        .map(|v| v.iter().rev().copied().collect())
        .collect()
}

fn ceg18() -> Result<CatalogEntry> {
    let kets: Vec<Ket> = ceg_vectors().iter().map(|v| ket(v)).collect();
    let labels: Vec<String> = (1..=18).map(|i| format!("u{i}")).collect();
    let mut scenario = scenario::from_vectors(&kets, Some(&labels))?;
    scenario.set_name("ceg18");
    Ok(CatalogEntry {
        name: "ceg18".into(),
        scenario,
        states: vec![(
            "mixed".into(),
            CatalogState::Density(DensityMatrix::maximally_mixed(4)),
        )],
        inequalities: vec![],
        expected: vec![
            Expected::new("atoms", 18.0, 0.0, ValueSource::Literature),
            Expected::new("contexts", 9.0, 0.0, ValueSource::Literature),
            Expected::new("s01_count", 0.0, 0.0, ValueSource::Literature),
        ],
        notes: "Eighteen rays in dimension four forming nine full bases, each ray \
                shared by exactly two bases. No deterministic assignment exists."
            .into(),
    })
}

fn ceg17() -> Result<CatalogEntry> {
    let kets: Vec<Ket> = ceg_vectors()[1..].iter().map(|v| ket(v)).collect();
    let labels: Vec<String> = (2..=18).map(|i| format!("u{i}")).collect();
    let mut scenario = scenario::from_vectors(&kets, Some(&labels))?;
    scenario.set_name("ceg17");
    Ok(CatalogEntry {
        name: "ceg17".into(),
        scenario,
        states: vec![(
            "mixed".into(),
            CatalogState::Density(DensityMatrix::maximally_mixed(4)),
        )],
        inequalities: vec![],
        expected: vec![
            Expected::new("atoms", 17.0, 0.0, ValueSource::Exact),
            Expected::new("contexts", 7.0, 0.0, ValueSource::Computed),
            Expected::new("s01_count", 12.0, 0.0, ValueSource::Computed),
            Expected::new("sat_atoms", 24.0, 0.0, ValueSource::Computed),
            Expected::new("sat_elements", 140.0, 0.0, ValueSource::Computed),
        ],
        notes: "The eighteen-ray set with (1,0,0,0) removed. Deterministic \
                assignments exist, but closure regenerates the missing ray and \
                forces it to take both values across two bases."
            .into(),
    })
}

/// The raw thirteen rays of the dimension-three state-independent set.
pub fn yu_oh_vectors() -> Vec<(String, Ket)> {
    let v: [(&str, [f64; 3]); 13] = [
        ("z1", [1.0, 0.0, 0.0]),
        ("z2", [0.0, 1.0, 0.0]),
        ("z3", [0.0, 0.0, 1.0]),
        ("y1m", [0.0, 1.0, -1.0]),
        ("y2m", [1.0, 0.0, -1.0]),
        ("y3m", [1.0, -1.0, 0.0]),
        ("y1p", [0.0, 1.0, 1.0]),
        ("y2p", [1.0, 0.0, 1.0]),
        ("y3p", [1.0, 1.0, 0.0]),
        ("vA", [1.0, 1.0, 1.0]),
        ("vB", [-1.0, 1.0, 1.0]),
        ("vC", [1.0, -1.0, 1.0]),
        ("vD", [1.0, 1.0, -1.0]),
    ];
    v.iter()
        .map(|(n, coords)| (n.to_string(), ket(coords)))
        .collect()
}

fn yu_oh() -> Result<CatalogEntry> {
    let raw = yu_oh_vectors();
    let labels: Vec<String> = raw.iter().map(|(n, _)| n.clone()).collect();
    let projs: Vec<Projector> = raw.iter().map(|(_, k)| projector_from_ket(k)).collect();
    let sat = scenario::saturate(&projs, Some(&labels), &ClosureLimits::default())?;
    let mut scenario = sat.scenario;
    scenario.set_name("yu_oh");
    let witness_labels = ["vA", "vB", "vC", "vD"];
    let ineq = InequalitySpec::new(
        "yu_oh",
        witness_labels.iter().map(|l| (l.to_string(), 1.0)),
    )?;
    Ok(CatalogEntry {
        name: "yu_oh".into(),
        scenario,
        states: vec![(
            "mixed".into(),
            CatalogState::Density(DensityMatrix::maximally_mixed(3)),
        )],
        inequalities: vec![ineq],
        expected: vec![
            Expected::new("atoms", 25.0, 0.0, ValueSource::Computed),
            Expected::new("contexts", 16.0, 0.0, ValueSource::Computed),
            Expected::new("s01_count", 24.0, 0.0, ValueSource::Computed),
            Expected::new("nc_bound:yu_oh", 1.0, 0.0, ValueSource::Literature),
            Expected::new("algebraic_bound:yu_oh", 8.0 / 3.0, 1e-7, ValueSource::Computed),
            Expected::new("eval:yu_oh:mixed", 4.0 / 3.0, 1e-9, ValueSource::Literature),
            Expected::new("w_nc:mixed", 0.8, 1e-7, ValueSource::Computed),
            Expected::new(
                "special_projector_sum",
                4.0 / 3.0,
                1e-9,
                ValueSource::Literature,
            ),
        ],
        notes: "Thirteen rays whose closure adds twelve atoms and becomes complete. \
                The four diagonal rays vA..vD sum to (4/3)I, so their total \
                probability is 4/3 in every quantum state while deterministic \
                assignments reach at most 1."
            .into(),
    })
}

fn shared_event_d3() -> Result<CatalogEntry> {
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let kets = vec![
        ket(&[0.0, 0.0, 1.0]),
        ket(&[0.0, 1.0, 0.0]),
        ket(&[1.0, 0.0, 0.0]),
        ket(&[r2, r2, 0.0]),
        ket(&[r2, -r2, 0.0]),
    ];
    let labels: Vec<String> = ["v0", "v1", "v2", "vx", "vy"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut scenario = scenario::from_vectors(&kets, Some(&labels))?;
    scenario.set_name("shared_event_d3");
    Ok(CatalogEntry {
        name: "shared_event_d3".into(),
        scenario,
        states: vec![(
            "mixed".into(),
            CatalogState::Density(DensityMatrix::maximally_mixed(3)),
        )],
        inequalities: vec![],
        expected: vec![
            Expected::new("atoms", 5.0, 0.0, ValueSource::Exact),
            Expected::new("contexts", 2.0, 0.0, ValueSource::Exact),
            Expected::new("s01_count", 5.0, 0.0, ValueSource::Computed),
        ],
        notes: "Two bases of dimension three sharing one ray: the same outcome \
                event appears in two different measurements, so its probability \
                is measurement-independent by construction."
            .into(),
    })
}

fn cycle_entry(n: usize, name: &str) -> Result<CatalogEntry> {
    let labels: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let cover: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    let mut scenario = scenario::from_cover(labels, &cover)?;
    scenario.set_name(name);
    let half = states::validate_state(&scenario, &vec![0.5; n])?;
    let s01 = if n % 2 == 1 { 0.0 } else { 2.0 };
    Ok(CatalogEntry {
        name: name.into(),
        scenario,
        states: vec![("half".into(), CatalogState::Graph(half))],
        inequalities: vec![InequalitySpec::new(
            "cycle_sum",
            (0..n).map(|i| (format!("c{i}"), 1.0)),
        )?],
        expected: vec![
            Expected::new("atoms", n as f64, 0.0, ValueSource::Exact),
            Expected::new("contexts", n as f64, 0.0, ValueSource::Exact),
            Expected::new("s01_count", s01, 0.0, ValueSource::Exact),
        ],
        notes: "Abstract cycle with two-outcome contexts on the edges. Odd cycles \
                admit no deterministic assignment; the all-half state is their \
                unique state."
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::{enumerate_01, ks_assignment_search};
    use crate::classify::{self, Bound};
    use crate::scenario::{from_vectors, validate, Validity};
    use crate::states::induce;

    #[test]
    fn chsh_structure_and_bounds() {
        let e = builtin("chsh").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 16);
        assert_eq!(s.contexts().len(), 12);
        assert!(s.contexts().iter().all(|c| c.len() == 4));
        assert!(s.is_valid());
        let hint = s.measurement_hint().unwrap();
        assert_eq!(hint.len(), 4);
        assert_eq!(enumerate_01(s, None).states.len(), 16);
        let ineq = e.inequality("chsh").unwrap();
        assert_eq!(
            classify::nc_bound(s, ineq).unwrap(),
            Bound::Value(3.0)
        );
        let alg = classify::algebraic_bound(s, ineq).unwrap().value().unwrap();
        assert!((alg - 4.0).abs() < 1e-7);
    }

    #[test]
    fn chsh_singlet_reaches_the_quantum_value() {
        let e = builtin("chsh").unwrap();
        let p = e.graph_state("singlet").unwrap();
        let ineq = e.inequality("chsh").unwrap();
        let v = classify::eval_inequality(&e.scenario, ineq, &p).unwrap();
        assert!((v - (2.0 + f64::sqrt(2.0))).abs() < 1e-9);
        let zs = e.scenario.index_of("++|ZS").unwrap();
        assert!((p.prob(zs) - (1.0 + 1.0 / f64::sqrt(2.0)) / 4.0).abs() < 1e-9);
    }

    #[test]
    fn pr_box_attains_the_algebraic_maximum() {
        let e = builtin("chsh").unwrap();
        let p = e.graph_state("pr_box").unwrap();
        let ineq = e.inequality("chsh").unwrap();
        let v = classify::eval_inequality(&e.scenario, ineq, &p).unwrap();
        assert!((v - 4.0).abs() < 1e-9);
        let f = classify::noncontextual_fraction(&e.scenario, &p).unwrap();
        assert!(f.w_nc < 1e-7);
        assert!(classify::is_fully_contextual_witness(&e.scenario, &p, ineq).unwrap());
    }

    #[test]
    fn hardy_probabilities_are_exact_twelfths() {
        let e = builtin("chsh").unwrap();
        let p = e.graph_state("hardy").unwrap();
        let twelfths = [
            ("++|ZS", 1.0),
            ("+-|ZS", 1.0),
            ("-+|ZS", 1.0),
            ("--|ZS", 9.0),
            ("++|ZT", 0.0),
            ("+-|ZT", 2.0),
            ("-+|ZT", 8.0),
            ("--|ZT", 2.0),
            ("++|XS", 0.0),
            ("+-|XS", 8.0),
            ("-+|XS", 2.0),
            ("--|XS", 2.0),
            ("++|XT", 4.0),
            ("+-|XT", 4.0),
            ("-+|XT", 4.0),
            ("--|XT", 0.0),
        ];
        for (label, k) in twelfths {
            let v = p.prob(e.scenario.index_of(label).unwrap());
            assert!(
                (v - k / 12.0).abs() < 1e-9,
                "{label}: got {v}, want {k}/12"
            );
        }
    }

    #[test]
    fn hardy_is_logically_but_not_strongly_contextual() {
        let e = builtin("chsh").unwrap();
        let s = &e.scenario;
        let p = e.graph_state("hardy").unwrap();
        let (logical, witness) = classify::is_logically_contextual(s, &p);
        assert!(logical);
        assert!(witness.is_some());
        assert!(!classify::is_strongly_contextual(s, &p));
        // The surviving uncertain outcome is the witness pattern: positive
        // probability never reached by a support-compatible assignment.
        let zs = s.index_of("++|ZS").unwrap();
        let mask: Vec<bool> = p.probs().iter().map(|&x| x > 1e-10).collect();
        assert!(crate::assign::first_state_within(s, &mask, Some(zs)).is_none());
        let f = classify::noncontextual_fraction(s, &p).unwrap();
        assert!((f.w_nc - 5.0 / 6.0).abs() < 1e-7);
    }

    #[test]
    fn ghz_structure_and_table_values() {
        let e = builtin("ghz322").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 64);
        assert_eq!(s.contexts().len(), 744);
        assert_eq!(s.deficient_cliques().len(), 128);
        let hint = s.measurement_hint().unwrap();
        assert_eq!(hint.len(), 8);
        assert!(hint.iter().all(|&i| s.contexts()[i].len() == 8));
        let p = e.graph_state("ghz").unwrap();
        // Parity rows take 1/4 on half the patterns; mixed rows are flat 1/8.
        assert!((p.prob(s.index_of("+++|XXX").unwrap()) - 0.25).abs() < 1e-9);
        assert!((p.prob(s.index_of("++-|XXX").unwrap()) - 0.0).abs() < 1e-9);
        assert!((p.prob(s.index_of("+++|XXY").unwrap()) - 0.125).abs() < 1e-9);
        assert!((p.prob(s.index_of("++-|XYY").unwrap()) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn kcbs_structure_and_values() {
        let e = builtin("kcbs").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 10);
        assert_eq!(s.contexts().len(), 5);
        assert!(s.contexts().iter().all(|c| c.len() == 3));
        assert_eq!(enumerate_01(s, None).states.len(), 11);
        // Wedge atoms complete their ray pairs.
        let real = s.realization().unwrap();
        let p0 = s.index_of("P0").unwrap();
        let p1 = s.index_of("P1").unwrap();
        let w01 = s.index_of("P01").unwrap();
        let sum = real.projectors[p0].matrix()
            + real.projectors[p1].matrix()
            + real.projectors[w01].matrix();
        assert!((sum - CMat::identity(3, 3)).norm() < 1e-9);
        let p = e.graph_state("kcbs").unwrap();
        let sqrt5 = f64::sqrt(5.0);
        for i in 0..5 {
            let v = p.prob(s.index_of(&format!("P{i}")).unwrap());
            assert!((v - sqrt5 / 5.0).abs() < 1e-9);
        }
        let ineq = e.inequality("kcbs").unwrap();
        let v = classify::eval_inequality(s, ineq, &p).unwrap();
        assert!((v - sqrt5).abs() < 1e-9);
        assert_eq!(classify::nc_bound(s, ineq).unwrap(), Bound::Value(2.0));
        let f = classify::noncontextual_fraction(s, &p).unwrap();
        assert!((f.w_nc - (5.0 - 2.0 * sqrt5)).abs() < 1e-7);
    }

    #[test]
    fn ceg18_has_nine_bases_and_no_assignments() {
        let e = builtin("ceg18").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 18);
        let mut tetrads: Vec<Vec<usize>> = [
            [0, 1, 2, 3],
            [0, 4, 5, 6],
            [2, 7, 8, 9],
            [6, 7, 10, 11],
            [1, 4, 12, 13],
            [8, 10, 13, 14],
            [3, 9, 15, 16],
            [5, 11, 15, 17],
            [12, 14, 16, 17],
        ]
        .iter()
        .map(|t| t.to_vec())
        .collect();
        tetrads.sort();
        assert_eq!(s.contexts(), tetrads.as_slice());
        assert!(s.is_valid());
        assert!(enumerate_01(s, None).states.is_empty());
        let search = ks_assignment_search(s, None).unwrap();
        assert!(search.assignments.is_empty());
    }

    #[test]
    fn ceg17_keeps_twelve_assignments_with_forced_triples() {
        let e = builtin("ceg17").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 17);
        assert_eq!(s.contexts().len(), 7);
        let found = enumerate_01(s, None);
        assert_eq!(found.states.len(), 12);
        assert_eq!(found.states[0].support(), &[0usize, 6, 13, 14][..]);
        // The removed ray was orthogonal to atoms {0,1,2} and {3,4,5}: every
        // assignment hits that union exactly once, so closure would force
        // the regenerated ray to 0 in one base and 1 in the other.
        for z in &found.states {
            let hits = z
                .support()
                .iter()
                .filter(|&&v| v < 6)
                .count();
            assert_eq!(hits, 1, "support {:?}", z.support());
        }
    }

    #[test]
    fn yu_oh_saturates_to_a_complete_scenario() {
        let e = builtin("yu_oh").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 25);
        assert_eq!(s.contexts().len(), 16);
        assert!(s.is_valid());
        assert!(s.contexts().iter().all(|c| c.len() == 3));
        // The four diagonal rays sum to (4/3)I.
        let real = s.realization().unwrap();
        let mut sum = CMat::zeros(3, 3);
        for l in ["vA", "vB", "vC", "vD"] {
            sum += real.projectors[s.index_of(l).unwrap()].matrix();
        }
        let target = CMat::identity(3, 3) * C64::new(4.0 / 3.0, 0.0);
        assert!((sum - target).norm() < 1e-9);
        let ineq = e.inequality("yu_oh").unwrap();
        assert_eq!(classify::nc_bound(s, ineq).unwrap(), Bound::Value(1.0));
        let p = e.graph_state("mixed").unwrap();
        let v = classify::eval_inequality(s, ineq, &p).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn yu_oh_raw_rays_are_incomplete() {
        let raw = yu_oh_vectors();
        let kets: Vec<Ket> = raw.iter().map(|(_, k)| k.clone()).collect();
        let labels: Vec<String> = raw.iter().map(|(n, _)| n.clone()).collect();
        let s = from_vectors(&kets, Some(&labels)).unwrap();
        let report = validate(&s).unwrap();
        match report.validity {
            Validity::Incomplete { ref uncovered } => {
                let names: Vec<&str> =
                    uncovered.iter().map(|&v| s.label(v)).collect();
                assert_eq!(names, vec!["vA", "vB", "vC", "vD"]);
            }
            other => panic!("expected incomplete, got {other:?}"),
        }
    }

    #[test]
    fn shared_event_has_one_common_atom() {
        let e = builtin("shared_event_d3").unwrap();
        let s = &e.scenario;
        assert_eq!(s.n_atoms(), 5);
        assert_eq!(s.contexts().len(), 2);
        let v0 = s.index_of("v0").unwrap();
        assert!(s.contexts().iter().all(|c| c.contains(&v0)));
        let common: Vec<usize> = s.contexts()[0]
            .iter()
            .copied()
            .filter(|v| s.contexts()[1].contains(v))
            .collect();
        assert_eq!(common, vec![v0]);
        // Same atom, same probability, regardless of which measurement it
        // is read from.
        let p = induce(s, &DensityMatrix::maximally_mixed(3)).unwrap();
        assert!((p.prob(v0) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cycles_parse_and_count_assignments() {
        let tri = builtin("triangle").unwrap();
        assert_eq!(tri.scenario.n_atoms(), 3);
        assert!(enumerate_01(&tri.scenario, None).states.is_empty());
        let c4 = builtin("cycle(4)").unwrap();
        assert_eq!(enumerate_01(&c4.scenario, None).states.len(), 2);
        let c5 = builtin("cycle(5)").unwrap();
        assert_eq!(c5.scenario.contexts().len(), 5);
        assert!(builtin("cycle(2)").is_err());
        assert!(builtin("nonesuch").is_err());
    }

    #[test]
    fn bell_scenario_rejects_non_involutions() {
        let bad = CMat::from_row_slice(2, 2, &[C64::new(1.0, 0.0); 4]);
        let parts = vec![vec![("B".to_string(), bad)]];
        assert!(matches!(
            bell_scenario(&parts),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn expected_blocks_cover_structural_counts() {
        for name in BUILTIN_NAMES {
            let e = builtin(name).unwrap();
            let atoms = e.expected("atoms").unwrap();
            assert!(atoms.matches(e.scenario.n_atoms() as f64), "{name} atoms");
            let contexts = e.expected("contexts").unwrap();
            assert!(
                contexts.matches(e.scenario.contexts().len() as f64),
                "{name} contexts"
            );
        }
    }
}
