//! Probabilistic states on scenarios: validation, induction from density
//! matrices, supports, and event-level probabilities.
//!
//! A state assigns each atom a probability so that every context sums to 1
//! and every exclusivity clique sums to at most 1. Quantum states enter via
//! the Born rule on realized scenarios.

use crate::assign::ZeroOneState;
use crate::linalg::{self, DensityMatrix, Ket, C64};
use crate::scenario::Scenario;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Tolerance for clique-sum validation; looser than the matrix tolerance to
/// absorb accumulated rounding over sums.
pub const EPS_STATE: f64 = 1e-7;

/// Probabilities above this count as support members; separates genuine
/// zeros from roundoff.
pub const TAU_ZERO: f64 = 1e-10;

/// A probabilistic state: one probability per atom, context sums 1,
/// exclusivity-clique sums at most 1, entries clamped to [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphState {
    probs: Vec<f64>,
}

impl GraphState {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, v: usize) -> f64 {
        self.probs[v]
    }

    /// Reads a deterministic state as a probabilistic one (0/1 entries).
    pub fn from_zero_one(s: &Scenario, z: &ZeroOneState) -> GraphState {
        let probs = (0..s.n_atoms()).map(|v| f64::from(z.value(v))).collect();
        GraphState { probs }
    }
}

/// Checks a raw probability map against the scenario and returns the
/// clamped state. Errors carry the first violated constraint.
pub fn validate_state(s: &Scenario, probs: &[f64]) -> Result<GraphState> {
    validate_state_tol(s, probs, EPS_STATE)
}

/// `validate_state` with an explicit tolerance. A state that is valid
/// within eps stays valid only within eps/(1-w) after removing a weight-w
/// part, so residuals of such constructions check against a scaled bound.
pub(crate) fn validate_state_tol(s: &Scenario, probs: &[f64], tol: f64) -> Result<GraphState> {
    if probs.len() != s.n_atoms() {
        return Err(Error::BadState(format!(
            "{} probabilities for {} atoms",
            probs.len(),
            s.n_atoms()
        )));
    }
    for (v, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < -tol || p > 1.0 + tol {
            return Err(Error::BadState(format!(
                "probability {p} at atom '{}' outside [0,1]",
                s.label(v)
            )));
        }
    }
    for ctx in s.contexts() {
        let sum: f64 = ctx.iter().map(|&v| probs[v]).sum();
        if (sum - 1.0).abs() >= tol {
            return Err(Error::BadState(format!(
                "context {:?} sums to {sum}, expected 1",
                label_set(s, ctx)
            )));
        }
    }
    for clique in s.exclusivity_cliques() {
        let sum: f64 = clique.iter().map(|&v| probs[v]).sum();
        if sum > 1.0 + tol {
            return Err(Error::BadState(format!(
                "exclusive set {:?} sums to {sum}, above 1",
                label_set(s, clique)
            )));
        }
    }
    let clamped = probs.iter().map(|&p| p.clamp(0.0, 1.0)).collect();
    Ok(GraphState { probs: clamped })
}

fn label_set(s: &Scenario, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| s.label(v).to_string()).collect()
}

/// Born-rule state of a density matrix on a Valid realized scenario.
pub fn induce(s: &Scenario, rho: &DensityMatrix) -> Result<GraphState> {
    let real = s
        .realization()
        .ok_or_else(|| Error::NoRealization("induce needs projectors".into()))?;
    if !s.is_valid() {
        return Err(Error::NotValid(
            "induce needs a scenario whose atoms are all covered by contexts".into(),
        ));
    }
    if rho.dim() != real.dim {
        return Err(Error::DimensionMismatch(format!(
            "density matrix dimension {} vs scenario dimension {}",
            rho.dim(),
            real.dim
        )));
    }
    let probs: Result<Vec<f64>> = real
        .projectors
        .iter()
        .map(|p| linalg::born_probability(rho, p))
        .collect();
    validate_state(s, &probs?)
}

/// Maximally mixed state I/dim.
pub fn maximally_mixed(dim: usize) -> DensityMatrix {
    DensityMatrix::maximally_mixed(dim)
}

/// Pure state |k><k| of a (not necessarily normalized) ket.
pub fn pure(ket: &Ket) -> Result<DensityMatrix> {
    DensityMatrix::pure(ket)
}

/// A set of atoms measurable together: pairwise exclusive, hence contained
/// in a common maximal clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRef {
    atoms: Vec<usize>,
}

impl EventRef {
    /// Builds an event after checking pairwise exclusivity. The empty event
    /// is allowed (probability 0).
    pub fn new(s: &Scenario, mut atoms: Vec<usize>) -> Result<EventRef> {
        atoms.sort_unstable();
        atoms.dedup();
        if let Some(&v) = atoms.iter().find(|&&v| v >= s.n_atoms()) {
            return Err(Error::BadInput(format!(
                "event atom {v} out of range for {} atoms",
                s.n_atoms()
            )));
        }
        for (a, &i) in atoms.iter().enumerate() {
            for &j in &atoms[a + 1..] {
                if !s.adjacent(i, j) {
                    return Err(Error::BadInput(format!(
                        "event atoms '{}' and '{}' are not exclusive",
                        s.label(i),
                        s.label(j)
                    )));
                }
            }
        }
        Ok(EventRef { atoms })
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn is_subset_of(&self, other: &EventRef) -> bool {
        self.atoms.iter().all(|v| other.atoms.binary_search(v).is_ok())
    }
}

/// Probability of an event: sum over its atoms.
pub fn event_prob(p: &GraphState, e: &EventRef) -> f64 {
    e.atoms.iter().map(|&v| p.prob(v)).sum()
}

/// Value of an event under a deterministic state: 1 iff the support meets
/// the event.
pub fn event_value(z: &ZeroOneState, e: &EventRef) -> u8 {
    if e.atoms.iter().any(|&v| z.contains(v)) {
        1
    } else {
        0
    }
}

/// Atoms with probability above `tau` (default `TAU_ZERO`), sorted.
pub fn support(p: &GraphState, tau: Option<f64>) -> Vec<usize> {
    let tau = tau.unwrap_or(TAU_ZERO);
    (0..p.probs.len()).filter(|&v| p.probs[v] > tau).collect()
}

/// Samples valid states by repairing nonnegative noise onto the affine
/// space of context constraints. Draws exponential entries, alternates a
/// least-squares projection onto {q : sum over each context = 1} with
/// clamping to [0,1], and keeps the result only if it validates. Returns up
/// to `count` states within `max_attempts` draws.
pub fn random_states<R: Rng>(
    s: &Scenario,
    count: usize,
    max_attempts: usize,
    rng: &mut R,
) -> Vec<GraphState> {
    let n = s.n_atoms();
    let m = s.contexts().len();
    if m == 0 {
        return Vec::new();
    }
    let mut a = DMatrix::<f64>::zeros(m, n);
    for (i, ctx) in s.contexts().iter().enumerate() {
        for &v in ctx {
            a[(i, v)] = 1.0;
        }
    }
    let pinv = match a.clone().svd(true, true).pseudo_inverse(1e-10) {
        Ok(p) => p,
        Err(_) => return Vec::new(),
    };
    let ones = DVector::<f64>::from_element(m, 1.0);
    let mut out = Vec::new();
    for _ in 0..max_attempts {
        if out.len() >= count {
            break;
        }
        let mut q = DVector::<f64>::from_fn(n, |_, _| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        });
        for _ in 0..100 {
            let residual = &a * &q - &ones;
            q -= &pinv * residual;
            for x in q.iter_mut() {
                *x = x.clamp(0.0, 1.0);
            }
        }
        let probs: Vec<f64> = q.iter().copied().collect();
        if let Ok(state) = validate_state(s, &probs) {
            out.push(state);
        }
    }
    out
}

/// Random density matrix: normalized Gram matrix of a complex Gaussian
/// square matrix (Hilbert-Schmidt ensemble).
pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let mut gauss = || {
        // Box-Muller transform.
        let u1: f64 = rng.random::<f64>().max(1e-16);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| C64::new(gauss(), gauss()));
    let rho = &g * g.adjoint();
    let trace = rho.trace().re;
    DensityMatrix::new(rho / C64::new(trace, 0.0)).expect("Gram matrix is a valid density matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::enumerate_01;
    use crate::scenario::{from_cover, from_graph, from_vectors};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn basis_kets(dim: usize) -> Vec<Ket> {
        (0..dim)
            .map(|k| {
                let mut v = vec![0.0; dim];
                v[k] = 1.0;
                Ket::from_reals(&v).unwrap()
            })
            .collect()
    }

    fn triangle_cover() -> Scenario {
        from_cover(labels("c", 3), &[vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    #[test]
    fn all_half_is_valid_on_edge_covered_triangle() {
        let s = triangle_cover();
        let p = validate_state(&s, &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn all_half_is_invalid_on_a_four_clique() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j));
            }
        }
        let s = from_graph(labels("v", 4), &edges).unwrap();
        assert!(matches!(
            validate_state(&s, &[0.5; 4]),
            Err(Error::BadState(_))
        ));
    }

    #[test]
    fn entries_get_clamped() {
        let s = triangle_cover();
        let eps = 1e-9;
        let p = validate_state(&s, &[0.5 + eps, 0.5 - eps, 0.5 + eps]).unwrap();
        assert!(p.probs().iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn negative_entries_are_rejected() {
        let s = triangle_cover();
        assert!(validate_state(&s, &[-0.1, 1.1, 0.5]).is_err());
    }

    #[test]
    fn induce_on_basis_scenario_gives_diagonal() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        let rho = maximally_mixed(3);
        let p = induce(&s, &rho).unwrap();
        for &x in p.probs() {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn induce_requires_valid_scenario() {
        let kets = basis_kets(3);
        let s = from_vectors(&kets[..2], None).unwrap();
        assert!(matches!(
            induce(&s, &maximally_mixed(3)),
            Err(Error::NotValid(_))
        ));
        let abstract_s = triangle_cover();
        assert!(matches!(
            induce(&abstract_s, &maximally_mixed(3)),
            Err(Error::NoRealization(_))
        ));
        let valid = from_vectors(&kets, None).unwrap();
        assert!(matches!(
            induce(&valid, &maximally_mixed(4)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn events_require_exclusivity() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        assert!(EventRef::new(&s, vec![0, 1]).is_ok());
        assert!(EventRef::new(&s, vec![0, 0]).is_ok());
        assert!(EventRef::new(&s, vec![]).is_ok());
        let cover = from_cover(labels("q", 4), &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
            .unwrap();
        assert!(EventRef::new(&cover, vec![0, 2]).is_err());
    }

    #[test]
    fn event_probability_sums_atoms() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        let p = induce(&s, &maximally_mixed(3)).unwrap();
        let e = EventRef::new(&s, vec![0, 1]).unwrap();
        assert!((event_prob(&p, &e) - 2.0 / 3.0).abs() < 1e-12);
        let full = EventRef::new(&s, vec![0, 1, 2]).unwrap();
        assert!((event_prob(&p, &full) - 1.0).abs() < 1e-12);
        let empty = EventRef::new(&s, vec![]).unwrap();
        assert_eq!(event_prob(&p, &empty), 0.0);
    }

    #[test]
    fn event_value_tracks_support() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        let z = enumerate_01(&s, None).states[0].clone();
        assert_eq!(z.support(), &[0]);
        let hit = EventRef::new(&s, vec![0, 1]).unwrap();
        let miss = EventRef::new(&s, vec![1, 2]).unwrap();
        assert_eq!(event_value(&z, &hit), 1);
        assert_eq!(event_value(&z, &miss), 0);
    }

    #[test]
    fn support_respects_threshold() {
        let cover = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let s = from_cover(labels("q", 4), &cover).unwrap();
        let p = validate_state(&s, &[1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(support(&p, None), vec![0, 2]);
        assert_eq!(support(&p, Some(2.0)), Vec::<usize>::new());
    }

    #[test]
    fn zero_one_state_reads_as_graph_state() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        let z = enumerate_01(&s, None).states[1].clone();
        let p = GraphState::from_zero_one(&s, &z);
        assert_eq!(support(&p, None), z.support());
        assert!(validate_state(&s, p.probs()).is_ok());
    }

    #[test]
    fn random_states_validate_and_vary() {
        let cover = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let s = from_cover(labels("q", 4), &cover).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let states = random_states(&s, 20, 200, &mut rng);
        assert!(states.len() >= 10, "got {}", states.len());
        for p in &states {
            assert!(validate_state(&s, p.probs()).is_ok());
        }
        let first = states[0].probs().to_vec();
        assert!(states.iter().any(|p| p.probs() != first.as_slice()));
    }

    #[test]
    fn odd_cycle_forces_the_unique_half_state() {
        let s = triangle_cover();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let states = random_states(&s, 5, 50, &mut rng);
        assert!(!states.is_empty());
        for p in &states {
            for &x in p.probs() {
                assert!((x - 0.5).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn random_density_is_valid_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random_density(3, &mut rng);
        assert_eq!(rho.dim(), 3);
        let mut rng2 = ChaCha8Rng::seed_from_u64(11);
        let rho2 = random_density(3, &mut rng2);
        assert!((rho.matrix() - rho2.matrix()).norm() < 1e-15);
    }

    #[test]
    fn induce_is_affine() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        let k = Ket::from_reals(&[1.0, 1.0, 0.0]).unwrap();
        let rho1 = pure(&k).unwrap();
        let rho2 = maximally_mixed(3);
        let mixed = DensityMatrix::new((rho1.matrix() + rho2.matrix()) / C64::new(2.0, 0.0))
            .unwrap();
        let p1 = induce(&s, &rho1).unwrap();
        let p2 = induce(&s, &rho2).unwrap();
        let pm = induce(&s, &mixed).unwrap();
        for v in 0..3 {
            assert!((pm.prob(v) - 0.5 * (p1.prob(v) + p2.prob(v))).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_vectors_reject_wedge_overflow() {
        // Realized triangle: exclusivity applies to the full clique.
        let s = from_vectors(&basis_kets(3), None).unwrap();
        assert!(validate_state(&s, &[0.6, 0.3, 0.3]).is_err());
    }
}
