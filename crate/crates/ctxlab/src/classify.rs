//! The contextuality hierarchy engine: noncontextual-polytope membership,
//! contextual fraction, logical/strong/maximal contextuality, inequality
//! evaluation and bounds, and the state-independence decision pair.
//!
//! The noncontextual fraction is the optimum of a linear program over the
//! enumerated deterministic states: maximize the total weight of a
//! subdistribution of deterministic states dominated pointwise by the given
//! state. Extra rows keep the leftover part exclusive on every deficient
//! clique, so the residual is itself a valid state.

use crate::assign::{self, enumerate_01, ZeroOneState, DEFAULT_LIMIT};
use crate::lp::{self, LinearProgram, LpOutcome, Relation, EPS_LP};
use crate::scenario::Scenario;
use crate::states::{self, GraphState, TAU_ZERO};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Weight below which a decomposition entry is dropped from reports.
const WEIGHT_FLOOR: f64 = 1e-9;

/// A linear expression over atoms, by label.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySpec {
    name: String,
    weights: BTreeMap<String, f64>,
}

impl InequalitySpec {
    /// Builds an inequality, requiring at least one nonzero weight.
    pub fn new(
        name: &str,
        weights: impl IntoIterator<Item = (String, f64)>,
    ) -> Result<InequalitySpec> {
        let weights: BTreeMap<String, f64> = weights.into_iter().collect();
        if !weights.values().any(|&w| w != 0.0) {
            return Err(Error::BadInput(format!(
                "inequality '{name}' has no nonzero weight"
            )));
        }
        Ok(InequalitySpec {
            name: name.to_string(),
            weights,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    /// One coefficient per atom of `s`, zero where unmentioned. Errors on
    /// labels the scenario does not have.
    pub fn dense(&self, s: &Scenario) -> Result<Vec<f64>> {
        let mut out = vec![0.0; s.n_atoms()];
        for (label, &w) in &self.weights {
            out[s.index_of(label)?] = w;
        }
        Ok(out)
    }

    /// Scales every weight by `c`.
    pub fn scaled(&self, c: f64) -> InequalitySpec {
        InequalitySpec {
            name: format!("{}*{c}", self.name),
            weights: self.weights.iter().map(|(l, &w)| (l.clone(), c * w)).collect(),
        }
    }
}

/// Outcome of the noncontextual-fraction program.
#[derive(Debug, Clone)]
pub struct FractionResult {
    /// Largest total weight of deterministic states fitting under the state.
    pub w_nc: f64,
    /// 1 - w_nc.
    pub contextual_fraction: f64,
    /// Deterministic states and their weights (entries above 1e-9 only).
    pub decomposition: Vec<(ZeroOneState, f64)>,
    /// The contextual leftover, rescaled to a state; absent when the state
    /// is noncontextual.
    pub residual: Option<GraphState>,
    /// Dual prices on the per-atom rows: y >= 0 with y.delta >= 1 for every
    /// deterministic state and y.p = w_nc at the optimum.
    pub dual_certificate: Vec<f64>,
    /// Dual prices on the deficient-clique exclusivity rows.
    pub dual_exclusivity: Vec<(Vec<usize>, f64)>,
}

/// Computes the noncontextual fraction of a state: the optimum of
/// max sum(b) over b >= 0 with sum of b-weighted deterministic states below
/// the given state on every atom and the leftover exclusive on every
/// deficient clique. Refuses truncated enumerations.
pub fn noncontextual_fraction(s: &Scenario, p: &GraphState) -> Result<FractionResult> {
    if p.probs().len() != s.n_atoms() {
        return Err(Error::BadState(format!(
            "{} probabilities for {} atoms",
            p.probs().len(),
            s.n_atoms()
        )));
    }
    let e = enumerate_01(s, None);
    if e.truncated {
        return Err(Error::Truncated {
            limit: DEFAULT_LIMIT,
        });
    }
    let deltas = e.states;
    let n = s.n_atoms();
    let deficient: Vec<Vec<usize>> = s.deficient_cliques().into_iter().cloned().collect();
    if deltas.is_empty() {
        return Ok(FractionResult {
            w_nc: 0.0,
            contextual_fraction: 1.0,
            decomposition: Vec::new(),
            residual: Some(p.clone()),
            dual_certificate: vec![0.0; n],
            dual_exclusivity: deficient.into_iter().map(|k| (k, 0.0)).collect(),
        });
    }

    let mut prog = LinearProgram::new(vec![1.0; deltas.len()]);
    for v in 0..n {
        let row: Vec<f64> = deltas.iter().map(|d| f64::from(d.value(v))).collect();
        prog.add_row(row, Relation::Le, p.prob(v));
    }
    for k in &deficient {
        let row: Vec<f64> = deltas
            .iter()
            .map(|d| {
                if k.iter().any(|&v| d.contains(v)) {
                    0.0
                } else {
                    1.0
                }
            })
            .collect();
        let pk: f64 = k.iter().map(|&v| p.prob(v)).sum();
        prog.add_row(row, Relation::Le, (1.0 - pk).max(0.0));
    }

    let sol = match lp::solve(&prog)? {
        LpOutcome::Optimal(sol) => sol,
        LpOutcome::Infeasible => {
            return Err(Error::LpBreakdown(
                "fraction program reported infeasible despite b = 0".into(),
            ))
        }
        LpOutcome::Unbounded => {
            return Err(Error::LpBreakdown("fraction program unbounded".into()))
        }
    };

    let w_nc = sol.value.clamp(0.0, 1.0);
    let decomposition: Vec<(ZeroOneState, f64)> = deltas
        .iter()
        .zip(&sol.x)
        .filter(|(_, &b)| b > WEIGHT_FLOOR)
        .map(|(d, &b)| (d.clone(), b))
        .collect();
    let residual = if w_nc < 1.0 - EPS_LP {
        let mut covered = vec![0.0; n];
        for (d, b) in &decomposition {
            for &v in d.support() {
                covered[v] += b;
            }
        }
        let raw: Vec<f64> = (0..n)
            .map(|v| ((p.prob(v) - covered[v]) / (1.0 - w_nc)).clamp(0.0, 1.0))
            .collect();
        // Input slack up to EPS_STATE and solver slack up to EPS_LP are
        // both divided by 1 - w, so the residual check scales accordingly.
        let tol = (states::EPS_STATE + lp::EPS_LP) / (1.0 - w_nc);
        let state = states::validate_state_tol(s, &raw, tol).map_err(|e| {
            Error::LpBreakdown(format!("contextual residual failed validation: {e}"))
        })?;
        Some(state)
    } else {
        None
    };
    let dual_certificate = sol.y[..n].to_vec();
    let dual_exclusivity = deficient
        .into_iter()
        .zip(sol.y[n..].iter().copied())
        .collect();
    Ok(FractionResult {
        w_nc,
        contextual_fraction: 1.0 - w_nc,
        decomposition,
        residual,
        dual_certificate,
        dual_exclusivity,
    })
}

/// An inequality violated by a specific state, with its bound over
/// deterministic states.
#[derive(Debug, Clone)]
pub struct ViolatedInequality {
    pub inequality: InequalitySpec,
    pub nc_bound: f64,
    pub value: f64,
}

/// Membership verdict for the noncontextual polytope.
#[derive(Debug, Clone)]
pub struct Membership {
    pub noncontextual: bool,
    pub fraction: FractionResult,
    /// On a contextual verdict with nonempty deterministic set: the LP dual
    /// read as an inequality the state violates.
    pub certificate: Option<ViolatedInequality>,
}

/// Decides membership in the noncontextual polytope: true iff the fraction
/// reaches 1. On false, the LP dual is returned as a violated inequality.
pub fn is_noncontextual(s: &Scenario, p: &GraphState) -> Result<Membership> {
    let fraction = noncontextual_fraction(s, p)?;
    let noncontextual = fraction.w_nc >= 1.0 - EPS_LP;
    let certificate = if noncontextual {
        None
    } else {
        dual_as_inequality(s, p, &fraction)?
    };
    Ok(Membership {
        noncontextual,
        fraction,
        certificate,
    })
}

/// Negates the vertex dual into an inequality: y.delta >= 1 for all
/// deterministic states makes S = -y bounded by -1 on them, while
/// S(p) = -w_nc > -1 for a contextual state.
fn dual_as_inequality(
    s: &Scenario,
    p: &GraphState,
    fraction: &FractionResult,
) -> Result<Option<ViolatedInequality>> {
    let weights: Vec<(String, f64)> = fraction
        .dual_certificate
        .iter()
        .enumerate()
        .filter(|(_, &y)| y.abs() > 1e-12)
        .map(|(v, &y)| (s.label(v).to_string(), -y))
        .collect();
    if weights.is_empty() {
        return Ok(None);
    }
    let ineq = InequalitySpec::new("lp-dual", weights)?;
    let bound = match nc_bound(s, &ineq)? {
        Bound::Value(b) => b,
        Bound::MinusInfinity => return Ok(None),
    };
    let value = eval_inequality(s, &ineq, p)?;
    Ok(Some(ViolatedInequality {
        inequality: ineq,
        nc_bound: bound,
        value,
    }))
}

fn support_mask(p: &GraphState) -> Vec<bool> {
    p.probs().iter().map(|&x| x > TAU_ZERO).collect()
}

/// Logical contextuality: some atom has positive probability but no
/// deterministic state supported inside the state's support assigns it 1.
/// Returns the first witnessing atom.
pub fn is_logically_contextual(s: &Scenario, p: &GraphState) -> (bool, Option<usize>) {
    let mask = support_mask(p);
    for a in 0..s.n_atoms() {
        if !mask[a] {
            continue;
        }
        if assign::first_state_within(s, &mask, Some(a)).is_none() {
            return (true, Some(a));
        }
    }
    (false, None)
}

/// Strong contextuality: no deterministic state is supported inside the
/// state's support. Decided by backtracking restricted to the support.
pub fn is_strongly_contextual(s: &Scenario, p: &GraphState) -> bool {
    assign::first_state_within(s, &support_mask(p), None).is_none()
}

/// Maximal contextuality: the noncontextual fraction vanishes.
pub fn is_maximally_contextual(s: &Scenario, p: &GraphState) -> Result<bool> {
    Ok(noncontextual_fraction(s, p)?.w_nc <= EPS_LP)
}

/// Value of the inequality at a state.
pub fn eval_inequality(s: &Scenario, ineq: &InequalitySpec, p: &GraphState) -> Result<f64> {
    let w = ineq.dense(s)?;
    Ok(w.iter().zip(p.probs()).map(|(a, b)| a * b).sum())
}

/// A maximum that may be over an empty set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Value(f64),
    /// Empty feasible set: no deterministic states, or no states at all.
    MinusInfinity,
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Bound::Value(x) => Some(*x),
            Bound::MinusInfinity => None,
        }
    }
}

/// Largest value of the inequality over deterministic states; the linear
/// objective attains the polytope maximum at a vertex.
pub fn nc_bound(s: &Scenario, ineq: &InequalitySpec) -> Result<Bound> {
    let w = ineq.dense(s)?;
    let e = enumerate_01(s, None);
    if e.truncated {
        return Err(Error::Truncated {
            limit: DEFAULT_LIMIT,
        });
    }
    let best = e
        .states
        .iter()
        .map(|d| d.support().iter().map(|&v| w[v]).sum::<f64>())
        .fold(None::<f64>, |acc, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(best.map_or(Bound::MinusInfinity, Bound::Value))
}

/// Largest value of the inequality over all states of the scenario, by
/// linear programming: probabilities are nonnegative, contexts sum to 1,
/// deficient cliques sum to at most 1.
pub fn algebraic_bound(s: &Scenario, ineq: &InequalitySpec) -> Result<Bound> {
    let w = ineq.dense(s)?;
    let mut prog = LinearProgram::new(w);
    for ctx in s.contexts() {
        let mut row = vec![0.0; s.n_atoms()];
        for &v in ctx {
            row[v] = 1.0;
        }
        prog.add_row(row, Relation::Eq, 1.0);
    }
    for k in s.deficient_cliques() {
        let mut row = vec![0.0; s.n_atoms()];
        for &v in k {
            row[v] = 1.0;
        }
        prog.add_row(row, Relation::Le, 1.0);
    }
    match lp::solve(&prog)? {
        LpOutcome::Optimal(sol) => Ok(Bound::Value(sol.value)),
        LpOutcome::Infeasible => Ok(Bound::MinusInfinity),
        LpOutcome::Unbounded => Err(Error::LpBreakdown(
            "state polytope unbounded; atoms must lie in some clique".into(),
        )),
    }
}

/// Witness-relative full contextuality: the state attains the algebraic
/// maximum of the inequality and that maximum exceeds the deterministic
/// bound.
pub fn is_fully_contextual_witness(
    s: &Scenario,
    p: &GraphState,
    ineq: &InequalitySpec,
) -> Result<bool> {
    let value = eval_inequality(s, ineq, p)?;
    let alg = match algebraic_bound(s, ineq)? {
        Bound::Value(x) => x,
        Bound::MinusInfinity => return Ok(false),
    };
    let ncb = match nc_bound(s, ineq)? {
        Bound::Value(x) => x,
        Bound::MinusInfinity => f64::NEG_INFINITY,
    };
    Ok(value >= alg - EPS_LP && alg > ncb + EPS_LP)
}

/// Signed distances to the decision thresholds; values near zero flag
/// borderline calls.
#[derive(Debug, Clone, Copy)]
pub struct Margins {
    /// w_nc - (1 - eps): positive inside the noncontextual region.
    pub noncontextual: f64,
    /// eps - w_nc: positive inside the maximally contextual region.
    pub maximal: f64,
}

/// All hierarchy flags for one state, with certificates.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub noncontextual: bool,
    pub contextual: bool,
    pub logically_contextual: bool,
    pub strongly_contextual: bool,
    pub maximally_contextual: bool,
    pub contextual_fraction: f64,
    pub w_nc: f64,
    pub fraction: FractionResult,
    /// Atom witnessing logical contextuality, when present.
    pub logical_witness: Option<usize>,
    /// A deterministic state inside the support, present exactly when the
    /// state is not strongly contextual.
    pub strong_counterexample: Option<ZeroOneState>,
    pub margins: Margins,
}

/// Aggregates every flag and certificate for one state. Panics on internal
/// hierarchy violations, which indicate a bug rather than bad input.
pub fn classify(s: &Scenario, p: &GraphState) -> Result<ClassificationReport> {
    let fraction = noncontextual_fraction(s, p)?;
    let w_nc = fraction.w_nc;
    let noncontextual = w_nc >= 1.0 - EPS_LP;
    let contextual = !noncontextual;
    let maximally_contextual = w_nc <= EPS_LP;
    let (logically_contextual, logical_witness) = is_logically_contextual(s, p);
    let strong_counterexample = assign::first_state_within(s, &support_mask(p), None);
    let strongly_contextual = strong_counterexample.is_none();

    if strongly_contextual {
        assert!(
            logically_contextual,
            "hierarchy violation: strongly contextual state not logically contextual"
        );
        assert!(
            w_nc <= 1e-5,
            "hierarchy violation: strongly contextual state has w_nc = {w_nc}"
        );
    }
    if logically_contextual {
        let solid = logical_witness.is_some_and(|a| p.prob(a) > 1e-6);
        assert!(
            !solid || contextual,
            "hierarchy violation: logically contextual state classified noncontextual"
        );
    }

    Ok(ClassificationReport {
        noncontextual,
        contextual,
        logically_contextual,
        strongly_contextual,
        maximally_contextual,
        contextual_fraction: fraction.contextual_fraction,
        w_nc,
        fraction,
        logical_witness,
        strong_counterexample,
        margins: Margins {
            noncontextual: w_nc - (1.0 - EPS_LP),
            maximal: EPS_LP - w_nc,
        },
    })
}

/// The state-independence pair: (no deterministic assignment exists,
/// maximally mixed state is strongly contextual). Finite-dimensional
/// systems make these agree.
pub fn ks_sisc_check(s: &Scenario) -> Result<(bool, bool)> {
    let real = s
        .realization()
        .ok_or_else(|| Error::NoRealization("state-independence check needs projectors".into()))?;
    if !s.is_valid() {
        return Err(Error::NotValid(
            "state-independence check needs every atom covered by a context".into(),
        ));
    }
    let ks = assign::is_ks_contextual(s)?;
    let mixed = states::induce(s, &states::maximally_mixed(real.dim))?;
    Ok((ks, is_strongly_contextual(s, &mixed)))
}
