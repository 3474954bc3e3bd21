//! Scenarios: atom graphs with exclusivity edges, their maximal cliques, the
//! contexts (complete measurements) among them, and the closure procedure
//! that generates a system's atoms from arbitrary projector sets.
//!
//! A context is a clique whose projectors sum to the identity (realized
//! scenarios) or a member of the declared context cover (abstract scenarios).
//! Maximal cliques that are not contexts still carry exclusivity
//! constraints; states must respect both.

use crate::linalg::{self, CMat, Ket, Projector, EPS_MAT};
use crate::{Error, Result};
use std::collections::HashMap;

/// Caps for the saturation fixpoint loop.
#[derive(Debug, Clone, Copy)]
pub struct ClosureLimits {
    pub max_elements: usize,
    pub max_rounds: usize,
}

impl Default for ClosureLimits {
    fn default() -> Self {
        ClosureLimits {
            max_elements: 4096,
            max_rounds: 64,
        }
    }
}

/// Vertices, exclusivity adjacency, and the cached maximal cliques.
#[derive(Debug, Clone)]
pub struct AtomGraph {
    labels: Vec<String>,
    adj: Vec<Vec<bool>>,
    cliques: Vec<Vec<usize>>,
}

impl AtomGraph {
    fn build(labels: Vec<String>, adj: Vec<Vec<bool>>) -> Result<AtomGraph> {
        let n = labels.len();
        if adj.len() != n || adj.iter().any(|row| row.len() != n) {
            return Err(Error::BadGraph("adjacency matrix shape mismatch".into()));
        }
        for (i, row) in adj.iter().enumerate() {
            if row[i] {
                return Err(Error::BadGraph(format!("self-loop at vertex {i}")));
            }
            for (j, &a) in row.iter().enumerate() {
                if a != adj[j][i] {
                    return Err(Error::BadGraph(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(&first) = seen.get(l) {
                return Err(Error::BadGraph(format!(
                    "duplicate label '{l}' at vertices {first} and {i}"
                )));
            }
            seen.insert(l.clone(), i);
        }
        let cliques = maximal_cliques(&adj);
        Ok(AtomGraph {
            labels,
            adj,
            cliques,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    /// All maximal cliques, canonically ordered.
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                if self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Subgraph induced on `verts`, which are renumbered in the given order.
    pub fn induced(&self, verts: &[usize]) -> AtomGraph {
        let labels = verts.iter().map(|&v| self.labels[v].clone()).collect();
        let adj = verts
            .iter()
            .map(|&i| verts.iter().map(|&j| self.adj[i][j]).collect())
            .collect();
        AtomGraph::build(labels, adj).expect("induced subgraph of a valid graph is valid")
    }
}

/// All maximal cliques of a symmetric loop-free adjacency matrix, via
/// Bron-Kerbosch with pivoting. Each clique is sorted ascending and the list
/// is sorted lexicographically, so the output is canonical regardless of
/// traversal order.
pub fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..n).collect();
    bron_kerbosch(adj, &mut r, p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: &mut Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // Pivot: the vertex of P union X with the most neighbors in P, smallest
    // index on ties.
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    for &u in p.iter().chain(x.iter()) {
        let cnt = p.iter().filter(|&&v| adj[u][v]).count();
        if best == usize::MAX || cnt > best || (cnt == best && u < pivot) {
            best = cnt;
            pivot = u;
        }
    }
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        let np: Vec<usize> = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let nx: Vec<usize> = x.iter().copied().filter(|&w| adj[v][w]).collect();
        r.push(v);
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Projector assignment for a realized scenario.
#[derive(Debug, Clone)]
pub struct Realization {
    pub dim: usize,
    pub projectors: Vec<Projector>,
}

/// Completeness status of a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    /// Every vertex lies in at least one context.
    Valid,
    /// Some vertices lie in no context; they are listed.
    Incomplete { uncovered: Vec<usize> },
    /// Abstract scenario, nothing to check against.
    Unchecked,
}

/// A measurement scenario: atom graph plus contexts, optionally realized by
/// projectors.
#[derive(Debug, Clone)]
pub struct Scenario {
    name: Option<String>,
    graph: AtomGraph,
    realization: Option<Realization>,
    contexts: Vec<Vec<usize>>,
    measurement_hint: Option<Vec<usize>>,
    validity: Validity,
}

impl Scenario {
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub(crate) fn set_name(&mut self, name: &str) {
        self.name = Some(name.to_string());
    }

    pub fn n_atoms(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &AtomGraph {
        &self.graph
    }

    pub fn labels(&self) -> &[String] {
        self.graph.labels()
    }

    pub fn label(&self, v: usize) -> &str {
        self.graph.label(v)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.graph
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.graph.adjacent(i, j)
    }

    /// Contexts: complete measurements, each a clique. For realized
    /// scenarios these are the maximal cliques whose projectors sum to I;
    /// for abstract scenarios, the declared cover.
    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    /// Cliques that carry exclusivity constraints for states. Realized
    /// scenarios answer all maximal cliques of the atom graph; abstract
    /// scenarios answer their context cover (a maximal clique of the derived
    /// graph need not be jointly measurable there).
    pub fn exclusivity_cliques(&self) -> &[Vec<usize>] {
        if self.realization.is_some() {
            self.graph.cliques()
        } else {
            &self.contexts
        }
    }

    /// Exclusivity cliques that are not contexts (no completeness
    /// constraint, only the sum <= 1 bound).
    pub fn deficient_cliques(&self) -> Vec<&Vec<usize>> {
        self.exclusivity_cliques()
            .iter()
            .filter(|c| !self.contexts.contains(c))
            .collect()
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    pub fn projector(&self, v: usize) -> Option<&Projector> {
        self.realization.as_ref().map(|r| &r.projectors[v])
    }

    pub fn dim(&self) -> Option<usize> {
        self.realization.as_ref().map(|r| r.dim)
    }

    pub fn validity(&self) -> &Validity {
        &self.validity
    }

    pub fn is_valid(&self) -> bool {
        self.validity == Validity::Valid
    }

    /// Presentation hint: which contexts form the natural measurement rows
    /// (one observable per party in product scenarios). Indices into
    /// `contexts()`.
    pub fn measurement_hint(&self) -> Option<&[usize]> {
        self.measurement_hint.as_deref()
    }

    pub(crate) fn set_measurement_hint(&mut self, hint: Vec<usize>) {
        self.measurement_hint = Some(hint);
    }
}

fn canonical_context_list(mut contexts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut contexts {
        c.sort_unstable();
        c.dedup();
    }
    contexts.sort();
    contexts.dedup();
    contexts
}

/// Builds a realized scenario from validated projectors. Contexts are the
/// maximal cliques summing to I within `EPS_MAT`.
pub fn from_projectors(projectors: Vec<Projector>, labels: Option<&[String]>) -> Result<Scenario> {
    if projectors.is_empty() {
        return Err(Error::BadInput("no projectors given".into()));
    }
    let dim = projectors[0].dim();
    for (i, p) in projectors.iter().enumerate() {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "projector {i} has dimension {}, expected {dim}",
                p.dim()
            )));
        }
        if p.is_zero() {
            return Err(Error::BadInput(format!("projector {i} is zero")));
        }
    }
    for i in 0..projectors.len() {
        for j in (i + 1)..projectors.len() {
            if projectors[i].approx_eq(&projectors[j]) {
                return Err(Error::DuplicateAtom { first: i, second: j });
            }
        }
    }
    let labels: Vec<String> = match labels {
        Some(ls) => {
            if ls.len() != projectors.len() {
                return Err(Error::BadInput(format!(
                    "{} labels for {} projectors",
                    ls.len(),
                    projectors.len()
                )));
            }
            ls.to_vec()
        }
        None => (0..projectors.len()).map(|i| format!("a{i}")).collect(),
    };
    let n = projectors.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let orth = linalg::is_orthogonal(&projectors[i], &projectors[j])?;
            adj[i][j] = orth;
            adj[j][i] = orth;
        }
    }
    let graph = AtomGraph::build(labels, adj)?;
    let mut contexts = Vec::new();
    for clique in graph.cliques() {
        if clique_sum_norm(&projectors, clique, dim) < EPS_MAT {
            contexts.push(clique.clone());
        }
    }
    let mut covered = vec![false; n];
    for c in &contexts {
        for &v in c {
            covered[v] = true;
        }
    }
    let uncovered: Vec<usize> = (0..n).filter(|&v| !covered[v]).collect();
    let validity = if uncovered.is_empty() {
        Validity::Valid
    } else {
        Validity::Incomplete {
            uncovered: uncovered.clone(),
        }
    };
    Ok(Scenario {
        name: None,
        graph,
        realization: Some(Realization { dim, projectors }),
        contexts,
        measurement_hint: None,
        validity,
    })
}

/// `||sum of clique projectors - I||_F`.
fn clique_sum_norm(projectors: &[Projector], clique: &[usize], dim: usize) -> f64 {
    let mut sum = CMat::zeros(dim, dim);
    for &v in clique {
        sum += projectors[v].matrix();
    }
    (sum - CMat::identity(dim, dim)).norm()
}

/// Builds a realized scenario from rank-1 projectors onto the given rays.
pub fn from_vectors(kets: &[Ket], labels: Option<&[String]>) -> Result<Scenario> {
    if kets.is_empty() {
        return Err(Error::BadInput("no vectors given".into()));
    }
    let dim = kets[0].dim();
    for (i, k) in kets.iter().enumerate() {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "vector {i} has dimension {}, expected {dim}",
                k.dim()
            )));
        }
    }
    let projectors: Vec<Projector> = kets.iter().map(linalg::projector_from_ket).collect();
    from_projectors(projectors, labels)
}

/// Builds an abstract scenario from an edge list; contexts are all maximal
/// cliques of the resulting graph.
pub fn from_graph(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Scenario> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::BadInput("no vertices given".into()));
    }
    let mut adj = vec![vec![false; n]; n];
    for &(i, j) in edges {
        if i >= n || j >= n {
            return Err(Error::BadGraph(format!(
                "edge ({i},{j}) out of range for {n} vertices"
            )));
        }
        if i == j {
            return Err(Error::BadGraph(format!("self-loop at vertex {i}")));
        }
        adj[i][j] = true;
        adj[j][i] = true;
    }
    let graph = AtomGraph::build(labels, adj)?;
    let contexts = graph.cliques().to_vec();
    Ok(Scenario {
        name: None,
        graph,
        realization: None,
        contexts,
        measurement_hint: None,
        validity: Validity::Unchecked,
    })
}

/// Builds an abstract scenario from an explicit context cover. Adjacency is
/// co-membership in a cover set; the cover itself (not the derived maximal
/// cliques) supplies the contexts, so structures like the 3-cycle with
/// two-element measurements are representable.
pub fn from_cover(labels: Vec<String>, cover: &[Vec<usize>]) -> Result<Scenario> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::BadInput("no vertices given".into()));
    }
    if cover.is_empty() {
        return Err(Error::BadGraph("empty context cover".into()));
    }
    let mut adj = vec![vec![false; n]; n];
    let mut covered = vec![false; n];
    for set in cover {
        if set.is_empty() {
            return Err(Error::BadGraph("empty context in cover".into()));
        }
        for &v in set {
            if v >= n {
                return Err(Error::BadGraph(format!(
                    "context member {v} out of range for {n} vertices"
                )));
            }
            covered[v] = true;
        }
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                if i == j {
                    return Err(Error::BadGraph(format!("repeated vertex {i} in context")));
                }
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Error::BadGraph(format!(
            "vertex {v} belongs to no context in the cover"
        )));
    }
    let graph = AtomGraph::build(labels, adj)?;
    let contexts = canonical_context_list(cover.to_vec());
    Ok(Scenario {
        name: None,
        graph,
        realization: None,
        contexts,
        measurement_hint: None,
        validity: Validity::Unchecked,
    })
}

/// Result of saturating a projector set.
#[derive(Debug)]
pub struct Saturation {
    pub scenario: Scenario,
    /// Total closure elements (including 0 and I).
    pub n_elements: usize,
    /// Fixpoint rounds used.
    pub rounds: usize,
}

/// Dedup key for closure elements: rank plus rounded matrix entries.
type ElementKey = (usize, Vec<(i64, i64)>);

/// Closure element store with rounded-key bucketing for dedup.
struct ElementStore {
    elems: Vec<Projector>,
    buckets: HashMap<ElementKey, Vec<usize>>,
}

impl ElementStore {
    fn new() -> ElementStore {
        ElementStore {
            elems: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    /// Inserts unless an epsilon-equal element exists. Returns whether the
    /// element was new.
    fn push(&mut self, p: Projector) -> bool {
        let key = p.sort_key();
        if let Some(bucket) = self.buckets.get(&key) {
            if bucket.iter().any(|&i| self.elems[i].approx_eq(&p)) {
                return false;
            }
        }
        let idx = self.elems.len();
        self.elems.push(p);
        self.buckets.entry(key).or_default().push(idx);
        true
    }
}

/// Generates the closure of the inputs under complement and commuting meet,
/// then returns the scenario over its atoms (minimal nonzero elements).
///
/// Atoms equal to an input keep that input's label and are listed first in
/// input order; newly generated atoms follow in canonical matrix order with
/// labels `g0`, `g1`, ...
pub fn saturate(
    projectors: &[Projector],
    labels: Option<&[String]>,
    limits: &ClosureLimits,
) -> Result<Saturation> {
    if projectors.is_empty() {
        return Err(Error::BadInput("no projectors given".into()));
    }
    let dim = projectors[0].dim();
    for (i, p) in projectors.iter().enumerate() {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "projector {i} has dimension {}, expected {dim}",
                p.dim()
            )));
        }
        if p.is_zero() {
            return Err(Error::BadInput(format!("projector {i} is zero")));
        }
    }
    let input_labels: Vec<String> = match labels {
        Some(ls) => {
            if ls.len() != projectors.len() {
                return Err(Error::BadInput(format!(
                    "{} labels for {} projectors",
                    ls.len(),
                    projectors.len()
                )));
            }
            ls.to_vec()
        }
        None => (0..projectors.len()).map(|i| format!("a{i}")).collect(),
    };

    let mut store = ElementStore::new();
    for p in projectors {
        store.push(p.clone());
    }
    let mut rounds = 0;
    loop {
        let snapshot = store.elems.len();
        if rounds >= limits.max_rounds {
            return Err(Error::ClosureLimit {
                elements: snapshot,
                rounds,
                max_elements: limits.max_elements,
                max_rounds: limits.max_rounds,
            });
        }
        rounds += 1;
        for i in 0..snapshot {
            let c = store.elems[i].complement();
            store.push(c);
        }
        for i in 0..snapshot {
            for j in (i + 1)..snapshot {
                let (p, q) = (&store.elems[i], &store.elems[j]);
                if linalg::commutes(p, q)? {
                    let m = linalg::meet_commuting(p, q)?;
                    store.push(m);
                }
            }
        }
        if store.elems.len() > limits.max_elements {
            return Err(Error::ClosureLimit {
                elements: store.elems.len(),
                rounds,
                max_elements: limits.max_elements,
                max_rounds: limits.max_rounds,
            });
        }
        if store.elems.len() == snapshot {
            break;
        }
    }

    let elems = &store.elems;
    let nonzero: Vec<usize> = (0..elems.len()).filter(|&i| !elems[i].is_zero()).collect();
    let mut atoms: Vec<usize> = Vec::new();
    'outer: for &i in &nonzero {
        for &j in &nonzero {
            if j != i
                && linalg::leq(&elems[j], &elems[i])?
                && !elems[j].approx_eq(&elems[i])
            {
                continue 'outer;
            }
        }
        atoms.push(i);
    }

    // Input-matched atoms first, in input order; the rest canonically.
    let mut matched: Vec<(usize, String)> = Vec::new();
    let mut rest: Vec<usize> = Vec::new();
    for &a in &atoms {
        let hit = projectors
            .iter()
            .position(|p| p.approx_eq(&elems[a]))
            .map(|i| input_labels[i].clone());
        match hit {
            Some(label) => matched.push((a, label)),
            None => rest.push(a),
        }
    }
    matched.sort_by_key(|(a, label)| {
        input_labels
            .iter()
            .position(|l| l == label)
            .map(|i| (i, *a))
            .unwrap_or((usize::MAX, *a))
    });
    rest.sort_by(|&a, &b| elems[a].sort_key().cmp(&elems[b].sort_key()));

    let mut atom_projectors = Vec::new();
    let mut atom_labels = Vec::new();
    for (a, label) in &matched {
        atom_projectors.push(elems[*a].clone());
        atom_labels.push(label.clone());
    }
    for (k, &a) in rest.iter().enumerate() {
        atom_projectors.push(elems[a].clone());
        atom_labels.push(format!("g{k}"));
    }

    let scenario = from_projectors(atom_projectors, Some(&atom_labels))?;
    Ok(Saturation {
        scenario,
        n_elements: store.elems.len(),
        rounds,
    })
}

/// Per-clique completeness report for a realized scenario.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// `||sum - I||_F` for each maximal clique, in canonical clique order.
    pub clique_norms: Vec<f64>,
    /// Whether each clique is complete (norm < `EPS_MAT`).
    pub complete: Vec<bool>,
    /// Vertices lying in no complete clique.
    pub uncovered: Vec<usize>,
    pub validity: Validity,
}

/// Recomputes completeness of every maximal clique against the realization.
pub fn validate(s: &Scenario) -> Result<ValidationReport> {
    let real = s
        .realization()
        .ok_or_else(|| Error::NoRealization("validate needs projectors".into()))?;
    let cliques = s.graph().cliques();
    let mut clique_norms = Vec::with_capacity(cliques.len());
    let mut complete = Vec::with_capacity(cliques.len());
    let mut covered = vec![false; s.n_atoms()];
    for clique in cliques {
        let norm = clique_sum_norm(&real.projectors, clique, real.dim);
        let ok = norm < EPS_MAT;
        if ok {
            for &v in clique {
                covered[v] = true;
            }
        }
        clique_norms.push(norm);
        complete.push(ok);
    }
    let uncovered: Vec<usize> = (0..s.n_atoms()).filter(|&v| !covered[v]).collect();
    let validity = if uncovered.is_empty() {
        Validity::Valid
    } else {
        Validity::Incomplete {
            uncovered: uncovered.clone(),
        }
    };
    Ok(ValidationReport {
        clique_norms,
        complete,
        uncovered,
        validity,
    })
}

/// Exact graph isomorphism via iterated degree refinement plus backtracking.
/// Rejects graphs above 64 vertices.
pub fn is_isomorphic(g1: &AtomGraph, g2: &AtomGraph) -> Result<bool> {
    if g1.n() > 64 || g2.n() > 64 {
        return Err(Error::BadInput(format!(
            "isomorphism supported up to 64 vertices, got {} and {}",
            g1.n(),
            g2.n()
        )));
    }
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let n = g1.n();
    let c1 = refine_colors(g1);
    let c2 = refine_colors(g2);
    let mut hist1: Vec<usize> = Vec::new();
    let mut hist2: Vec<usize> = Vec::new();
    for v in 0..n {
        hist1.push(c1[v]);
        hist2.push(c2[v]);
    }
    let mut s1 = hist1.clone();
    let mut s2 = hist2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(false);
    }

    // Map vertices of g1 in order of ascending color-class size.
    let mut class_size = HashMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&c1[v]], c1[v], v));

    let mut search = IsoSearch {
        g1,
        g2,
        c1: &c1,
        c2: &c2,
        order: &order,
        mapping: vec![usize::MAX; n],
        used: vec![false; n],
    };
    Ok(search.run(0))
}

/// Iterated neighborhood color refinement; returns stable vertex colors.
fn refine_colors(g: &AtomGraph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    for _ in 0..n {
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<usize> = (0..n).filter(|&w| g.adjacent(v, w)).map(|w| colors[w]).collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut palette: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        palette.sort();
        palette.dedup();
        let new_colors: Vec<usize> = sigs
            .iter()
            .map(|s| palette.binary_search(&s).unwrap())
            .collect();
        if new_colors == colors {
            break;
        }
        colors = new_colors;
    }
    colors
}

/// Backtracking state for the isomorphism search: both graphs, their
/// refined colors, and the vertex order being mapped.
struct IsoSearch<'a> {
    g1: &'a AtomGraph,
    g2: &'a AtomGraph,
    c1: &'a [usize],
    c2: &'a [usize],
    order: &'a [usize],
    mapping: Vec<usize>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn run(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        for w in 0..self.g2.n() {
            if self.used[w] || self.c2[w] != self.c1[v] {
                continue;
            }
            let consistent = self.order[..k]
                .iter()
                .all(|&u| self.g1.adjacent(v, u) == self.g2.adjacent(w, self.mapping[u]));
            if !consistent {
                continue;
            }
            self.mapping[v] = w;
            self.used[w] = true;
            if self.run(k + 1) {
                return true;
            }
            self.mapping[v] = usize::MAX;
            self.used[w] = false;
        }
        false
    }
}

/// Convenience: isomorphism of two scenarios' atom graphs.
pub fn scenarios_isomorphic(s1: &Scenario, s2: &Scenario) -> Result<bool> {
    is_isomorphic(s1.graph(), s2.graph())
}
