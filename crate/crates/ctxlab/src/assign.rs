//! Deterministic 0-1 states and their enumeration.
//!
//! A 0-1 state assigns every atom a definite value so that exactly one atom
//! per context is valued 1 and no two exclusive atoms are both valued 1.
//! The enumeration backtracks over contexts; atoms outside every context are
//! only bound by exclusivity and branch freely at the end.

use crate::scenario::Scenario;
use crate::{Error, Result};

/// Default cap on enumerated states.
pub const DEFAULT_LIMIT: usize = 100_000;

/// A deterministic global assignment, stored as its sorted support (the
/// atoms valued 1). Invariant: exactly one support member in every context
/// and no two support members exclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeroOneState {
    support: Vec<usize>,
}

impl ZeroOneState {
    /// Wraps a support set after checking the invariant against `s`.
    pub fn new(s: &Scenario, mut support: Vec<usize>) -> Result<ZeroOneState> {
        support.sort_unstable();
        support.dedup();
        if let Some(&v) = support.iter().find(|&&v| v >= s.n_atoms()) {
            return Err(Error::BadState(format!(
                "support atom {v} out of range for {} atoms",
                s.n_atoms()
            )));
        }
        for (a, &i) in support.iter().enumerate() {
            for &j in &support[a + 1..] {
                if s.adjacent(i, j) {
                    return Err(Error::BadState(format!(
                        "support atoms {i} and {j} are exclusive"
                    )));
                }
            }
        }
        for ctx in s.contexts() {
            let hits = ctx.iter().filter(|v| support.binary_search(v).is_ok()).count();
            if hits != 1 {
                return Err(Error::BadState(format!(
                    "context {ctx:?} has {hits} support atoms, expected exactly 1"
                )));
            }
        }
        Ok(ZeroOneState { support })
    }

    /// Support without validation; internal to the enumerator, which
    /// produces only invariant-satisfying sets.
    fn from_sorted_unchecked(support: Vec<usize>) -> ZeroOneState {
        ZeroOneState { support }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, v: usize) -> bool {
        self.support.binary_search(&v).is_ok()
    }

    /// 1 if `v` is in the support, else 0.
    pub fn value(&self, v: usize) -> u8 {
        if self.contains(v) {
            1
        } else {
            0
        }
    }
}

/// Result of enumerating 0-1 states.
#[derive(Debug, Clone)]
pub struct Enumeration {
    /// States in canonical order (supports sorted lexicographically).
    pub states: Vec<ZeroOneState>,
    /// True when more states exist beyond the requested limit; `states`
    /// then holds exactly `limit` of them.
    pub truncated: bool,
    /// Search nodes expanded, for diagnostics.
    pub nodes: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Cell {
    Undecided,
    One,
    Zero,
}

struct Search<'a> {
    s: &'a Scenario,
    /// Context indices ordered ascending by (size, canonical position).
    order: Vec<usize>,
    state: Vec<Cell>,
    out: Vec<Vec<usize>>,
    cap: usize,
    nodes: usize,
}

impl<'a> Search<'a> {
    fn new(s: &'a Scenario, cap: usize) -> Search<'a> {
        let mut order: Vec<usize> = (0..s.contexts().len()).collect();
        order.sort_by_key(|&i| (s.contexts()[i].len(), i));
        Search {
            s,
            order,
            state: vec![Cell::Undecided; s.n_atoms()],
            out: Vec::new(),
            cap,
            nodes: 0,
        }
    }

    /// Sets `v` to 1 and zeroes its undecided neighbors. Returns the
    /// vertices to restore to Undecided on undo (`v` first).
    fn assign_one(&mut self, v: usize) -> Vec<usize> {
        debug_assert!(self.state[v] == Cell::Undecided);
        let mut touched = vec![v];
        self.state[v] = Cell::One;
        for w in 0..self.s.n_atoms() {
            if self.state[w] == Cell::Undecided && self.s.adjacent(v, w) {
                self.state[w] = Cell::Zero;
                touched.push(w);
            }
        }
        touched
    }

    fn undo(&mut self, touched: Vec<usize>) {
        for &v in &touched {
            self.state[v] = Cell::Undecided;
        }
    }

    fn record(&mut self) {
        let support: Vec<usize> = (0..self.s.n_atoms())
            .filter(|&v| self.state[v] == Cell::One)
            .collect();
        self.out.push(support);
    }

    fn run(&mut self) {
        self.recurse(0);
    }

    fn recurse(&mut self, from: usize) {
        if self.out.len() >= self.cap {
            return;
        }
        self.nodes += 1;
        let mut k = from;
        while k < self.order.len() {
            let ctx = &self.s.contexts()[self.order[k]];
            if ctx.iter().any(|&v| self.state[v] == Cell::One) {
                k += 1;
                continue;
            }
            let candidates: Vec<usize> = ctx
                .iter()
                .copied()
                .filter(|&v| self.state[v] == Cell::Undecided)
                .collect();
            for v in candidates {
                let touched = self.assign_one(v);
                self.recurse(k + 1);
                self.undo(touched);
                if self.out.len() >= self.cap {
                    return;
                }
            }
            return;
        }
        self.recurse_free(0);
    }

    /// All contexts satisfied; branch over atoms outside every context,
    /// which are bound only by exclusivity.
    fn recurse_free(&mut self, from: usize) {
        if self.out.len() >= self.cap {
            return;
        }
        match (from..self.s.n_atoms()).find(|&v| self.state[v] == Cell::Undecided) {
            None => self.record(),
            Some(u) => {
                self.state[u] = Cell::Zero;
                self.recurse_free(u + 1);
                self.state[u] = Cell::Undecided;
                if self.out.len() >= self.cap {
                    return;
                }
                let touched = self.assign_one(u);
                self.recurse_free(u + 1);
                self.undo(touched);
            }
        }
    }
}

/// Enumerates all 0-1 states of `s`, up to `limit` (default
/// `DEFAULT_LIMIT`). Output order is canonical: supports sorted
/// lexicographically.
pub fn enumerate_01(s: &Scenario, limit: Option<usize>) -> Enumeration {
    let limit = limit.unwrap_or(DEFAULT_LIMIT);
    let mut search = Search::new(s, limit.saturating_add(1));
    search.run();
    let truncated = search.out.len() > limit;
    let mut supports = search.out;
    if truncated {
        supports.truncate(limit);
    }
    supports.sort();
    Enumeration {
        states: supports
            .into_iter()
            .map(ZeroOneState::from_sorted_unchecked)
            .collect(),
        truncated,
        nodes: search.nodes,
    }
}

/// First 0-1 state whose support avoids every atom flagged false in
/// `allowed`, optionally forcing one atom to 1. Shared backbone for the
/// logical and strong contextuality probes.
pub(crate) fn first_state_within(
    s: &Scenario,
    allowed: &[bool],
    forced_one: Option<usize>,
) -> Option<ZeroOneState> {
    debug_assert_eq!(allowed.len(), s.n_atoms());
    let mut search = Search::new(s, 1);
    for (v, ok) in allowed.iter().enumerate() {
        if !ok {
            search.state[v] = Cell::Zero;
        }
    }
    if let Some(v) = forced_one {
        if search.state[v] != Cell::Undecided {
            return None;
        }
        search.assign_one(v);
    }
    search.run();
    search
        .out
        .pop()
        .map(|mut sup| {
            sup.sort_unstable();
            ZeroOneState::from_sorted_unchecked(sup)
        })
}

/// Result of searching for Kochen-Specker assignments.
#[derive(Debug, Clone)]
pub struct KsSearch {
    pub assignments: Vec<ZeroOneState>,
    pub truncated: bool,
}

/// Enumerates noncontextual value assignments of a realized scenario:
/// exclusive atoms never both 1, exactly one 1 in every full basis
/// (context). Errors when the scenario has no realization.
pub fn ks_assignment_search(s: &Scenario, limit: Option<usize>) -> Result<KsSearch> {
    if s.realization().is_none() {
        return Err(Error::NoRealization(
            "KS assignment search needs projectors".into(),
        ));
    }
    let e = enumerate_01(s, limit);
    Ok(KsSearch {
        assignments: e.states,
        truncated: e.truncated,
    })
}

/// True when the realized scenario admits no KS assignment at all.
pub fn is_ks_contextual(s: &Scenario) -> Result<bool> {
    let search = ks_assignment_search(s, Some(1))?;
    Ok(search.assignments.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{projector_from_ket, Ket, Projector};
    use crate::scenario::{from_cover, from_graph, from_vectors, saturate, ClosureLimits};

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

    /// Brute force over all subsets, checking the invariant directly.
    fn brute_force(s: &Scenario) -> Vec<Vec<usize>> {
        let n = s.n_atoms();
        assert!(n <= 20);
        let mut out = Vec::new();
        'subset: for mask in 0u32..(1 << n) {
            let support: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            for (a, &i) in support.iter().enumerate() {
                for &j in &support[a + 1..] {
                    if s.adjacent(i, j) {
                        continue 'subset;
                    }
                }
            }
            for ctx in s.contexts() {
                if ctx.iter().filter(|&&v| mask >> v & 1 == 1).count() != 1 {
                    continue 'subset;
                }
            }
            out.push(support);
        }
        out.sort();
        out
    }

    fn supports(e: &Enumeration) -> Vec<Vec<usize>> {
        e.states.iter().map(|z| z.support().to_vec()).collect()
    }

    #[test]
    fn square_cover_has_two_states() {
        let cover = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let s = from_cover(labels("q", 4), &cover).unwrap();
        let e = enumerate_01(&s, None);
        assert_eq!(supports(&e), vec![vec![0, 2], vec![1, 3]]);
        assert!(!e.truncated);
    }

    #[test]
    fn odd_cycles_have_no_states() {
        for n in [3usize, 5, 7] {
            let cover: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
            let s = from_cover(labels("c", n), &cover).unwrap();
            let e = enumerate_01(&s, None);
            assert!(e.states.is_empty(), "odd cycle of length {n}");
        }
    }

    #[test]
    fn complete_graph_states_are_singletons() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j));
            }
        }
        let s = from_graph(labels("v", 4), &edges).unwrap();
        let e = enumerate_01(&s, None);
        assert_eq!(supports(&e), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn truncation_reports_partial_results() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j));
            }
        }
        let s = from_graph(labels("v", 4), &edges).unwrap();
        let e = enumerate_01(&s, Some(2));
        assert!(e.truncated);
        assert_eq!(e.states.len(), 2);
    }

    #[test]
    fn uncovered_atoms_branch_freely() {
        // Two orthogonal rays in d=3: no context, one exclusivity edge.
        let kets = basis_kets(3);
        let s = from_vectors(&kets[..2], None).unwrap();
        let e = enumerate_01(&s, None);
        assert_eq!(supports(&e), vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let kets = vec![
            Ket::from_reals(&[0.0, 0.0, 1.0]).unwrap(),
            Ket::from_reals(&[0.0, 1.0, 0.0]).unwrap(),
            Ket::from_reals(&[1.0, 0.0, 0.0]).unwrap(),
            Ket::from_reals(&[r2, r2, 0.0]).unwrap(),
            Ket::from_reals(&[r2, -r2, 0.0]).unwrap(),
        ];
        let s = from_vectors(&kets, None).unwrap();
        let e = enumerate_01(&s, None);
        assert_eq!(supports(&e), brute_force(&s));
        assert_eq!(e.states.len(), 5);
    }

    #[test]
    fn validated_constructor_rejects_bad_supports() {
        let cover = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let s = from_cover(labels("q", 4), &cover).unwrap();
        assert!(ZeroOneState::new(&s, vec![0, 2]).is_ok());
        assert!(ZeroOneState::new(&s, vec![0, 1]).is_err());
        assert!(ZeroOneState::new(&s, vec![0]).is_err());
        assert!(ZeroOneState::new(&s, vec![9]).is_err());
    }

    #[test]
    fn ks_search_requires_projectors() {
        let s = from_graph(labels("v", 3), &[(0, 1)]).unwrap();
        assert!(matches!(
            ks_assignment_search(&s, None),
            Err(Error::NoRealization(_))
        ));
    }

    #[test]
    fn basis_scenario_is_not_ks_contextual() {
        let s = from_vectors(&basis_kets(3), None).unwrap();
        assert!(!is_ks_contextual(&s).unwrap());
        let search = ks_assignment_search(&s, None).unwrap();
        assert_eq!(search.assignments.len(), 3);
    }

    #[test]
    fn forced_search_respects_masks() {
        let kets = basis_kets(3);
        let projs: Vec<Projector> = kets.iter().map(projector_from_ket).collect();
        let sat = saturate(&projs, None, &ClosureLimits::default()).unwrap();
        let s = &sat.scenario;
        let all = vec![true; s.n_atoms()];
        let z = first_state_within(s, &all, Some(1)).unwrap();
        assert!(z.contains(1));
        let mut blocked = all.clone();
        blocked[0] = false;
        blocked[1] = false;
        blocked[2] = false;
        assert!(first_state_within(s, &blocked, None).is_none());
        assert!(first_state_within(s, &all, None).is_some());
    }
}
