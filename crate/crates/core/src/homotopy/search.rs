use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verify::{iteration_pins, path_pins};
use super::{
    product, standard_interval, verify_btds_homotopy, verify_iteration_homotopy,
    verify_path_homotopy, BitopPath, Homotopy, HomotopyVerdict, IntervalModel,
};
use crate::bitop::BitopSpace;
use crate::dynamics::PointMap;
use crate::error::{Error, Result};
use crate::fintop::{PointSet, TopologyIndex};

/// Highest subdivision level tried by [`search_with_escalation`] by default.
pub const DEFAULT_K_CAP: usize = 3;
/// Search nodes allowed per worker partition.
pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

/// Which boundary conditions pin the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    Btds,
    Iteration {
        x0: usize,
        budget: usize,
    },
    /// The domain is the path's interval model and the bridge is the path.
    Path {
        path: Box<BitopPath>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchProblem {
    pub x: BitopSpace,
    pub y: BitopSpace,
    pub interval: IntervalModel,
    pub f: PointMap,
    pub g: PointMap,
    pub bridge: PointMap,
    pub mode: SearchMode,
    pub node_budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        homotopy: Box<Homotopy>,
        level: Option<usize>,
    },
    /// Every table at every level tried was ruled out.
    NotFound {
        level: Option<usize>,
    },
    Timeout {
        budget: u64,
    },
}

impl SearchOutcome {
    pub fn homotopy(&self) -> Option<&Homotopy> {
        match self {
            SearchOutcome::Found { homotopy, .. } => Some(homotopy),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

impl SearchProblem {
    /// A BTDS-homotopy problem with the default budget.
    pub fn btds(
        x: BitopSpace,
        y: BitopSpace,
        interval: IntervalModel,
        f: PointMap,
        g: PointMap,
        bridge: PointMap,
    ) -> Self {
        SearchProblem {
            x,
            y,
            interval,
            f,
            g,
            bridge,
            mode: SearchMode::Btds,
            node_budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    /// A path-homotopy problem over the path's own interval model.
    pub fn path(interval: IntervalModel, f: PointMap, g: PointMap, path: BitopPath) -> Self {
        SearchProblem {
            x: path.interval().space().clone(),
            y: path.y().clone(),
            interval,
            f,
            g,
            bridge: path.map().clone(),
            mode: SearchMode::Path {
                path: Box::new(path),
            },
            node_budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    pub fn with_interval(&self, interval: IntervalModel) -> Self {
        SearchProblem {
            interval,
            ..self.clone()
        }
    }

    fn check_shapes(&self) -> Result<()> {
        let (xn, yn) = (self.x.n(), self.y.n());
        if self.f.dom_n() != xn || self.f.cod_n() != xn {
            return Err(Error::ShapeMismatch("f must be a self-map of X".into()));
        }
        if self.g.dom_n() != yn || self.g.cod_n() != yn {
            return Err(Error::ShapeMismatch("g must be a self-map of Y".into()));
        }
        if self.bridge.dom_n() != xn || self.bridge.cod_n() != yn {
            return Err(Error::ShapeMismatch("bridge must map X to Y".into()));
        }
        match &self.mode {
            SearchMode::Iteration { x0, .. } if *x0 >= xn => {
                Err(Error::OutOfRange { point: *x0, n: xn })
            }
            SearchMode::Path { path }
                if path.interval().space() != &self.x
                    || path.map() != &self.bridge
                    || path.y() != &self.y =>
            {
                Err(Error::ShapeMismatch(
                    "path search needs X = path domain and bridge = path".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// `(x, t, value)` cells fixed by the boundary conditions.
    fn pins(&self) -> Vec<(usize, usize, usize)> {
        let (e0, e1) = (self.interval.e0(), self.interval.e1());
        match &self.mode {
            SearchMode::Btds => (0..self.x.n())
                .flat_map(|x| {
                    let fx = self.bridge.apply(self.f.apply(x));
                    let gx = self.g.apply(self.bridge.apply(x));
                    [(x, e0, fx), (x, e1, gx)]
                })
                .collect(),
            SearchMode::Iteration { x0, budget } => {
                iteration_pins(&self.bridge, &self.f, &self.g, &self.interval, *x0, *budget)
            }
            SearchMode::Path { path } => {
                path_pins(path.interval(), &self.interval, &self.f, &self.g, path)
            }
        }
    }

    fn verify(&self, h: &Homotopy) -> Result<HomotopyVerdict> {
        match &self.mode {
            SearchMode::Btds => verify_btds_homotopy(h, &self.f, &self.g),
            SearchMode::Iteration { x0, budget } => {
                verify_iteration_homotopy(h, &self.f, &self.g, *x0, *budget)
            }
            SearchMode::Path { path } => {
                verify_path_homotopy(h, path.interval(), &self.f, &self.g, path)
            }
        }
    }
}

/// Per-cell candidate filters derived from pairwise continuity on `X × T`.
struct Constraints {
    /// Pinned value per cell, as a singleton set, or all of `Y`.
    domain: Vec<PointSet>,
    /// `(earlier cell d, i, d ∈ U_i(c))`: if true, `h(c)` must lie in `up_i(h(d))`,
    /// otherwise `c ∈ U_i(d)` and `h(c) ∈ U_i(h(d))`.
    links: Vec<Vec<(usize, TopologyIndex, bool)>>,
    /// `up[i][y] = {v : y ∈ U_i(v)}`.
    up: [Vec<PointSet>; 2],
    down: [Vec<PointSet>; 2],
}

impl Constraints {
    fn build(p: &SearchProblem, pins: &[(usize, usize, usize)]) -> Result<Option<Self>> {
        let prod = product(&p.x, p.interval.space())?;
        let cells = prod.space().n();
        let tn = p.interval.n();
        let mut domain = vec![PointSet::full(p.y.n()); cells];
        for &(x, t, v) in pins {
            let c = x * tn + t;
            domain[c] = domain[c].intersection(PointSet::singleton(v));
        }
        if domain.iter().any(|d| d.is_empty()) {
            return Ok(None);
        }
        let mut links = vec![Vec::new(); cells];
        for (c, link) in links.iter_mut().enumerate() {
            for i in TopologyIndex::BOTH {
                let t = prod.space().topology(i);
                for d in 0..c {
                    if t.min_nbhd(c).contains(d) {
                        link.push((d, i, true));
                    }
                    if t.min_nbhd(d).contains(c) {
                        link.push((d, i, false));
                    }
                }
            }
        }
        let table = |i: TopologyIndex| -> (Vec<PointSet>, Vec<PointSet>) {
            let t = p.y.topology(i);
            let down: Vec<PointSet> = (0..p.y.n()).map(|y| t.min_nbhd(y)).collect();
            let up = (0..p.y.n())
                .map(|y| (0..p.y.n()).filter(|&v| down[v].contains(y)).collect())
                .collect();
            (up, down)
        };
        let (u1, d1) = table(TopologyIndex::First);
        let (u2, d2) = table(TopologyIndex::Second);
        Ok(Some(Constraints {
            domain,
            links,
            up: [u1, u2],
            down: [d1, d2],
        }))
    }

    fn candidates(&self, c: usize, assigned: &[usize]) -> PointSet {
        self.links[c]
            .iter()
            .fold(self.domain[c], |acc, &(d, i, d_below_c)| {
                let k = usize::from(i.number() - 1);
                let v = assigned[d];
                acc.intersection(if d_below_c {
                    self.up[k][v]
                } else {
                    self.down[k][v]
                })
            })
    }
}

enum Branch {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

fn dfs(cons: &Constraints, assigned: &mut Vec<usize>, nodes: &mut u64, budget: u64) -> Branch {
    let c = assigned.len();
    if c == cons.domain.len() {
        return Branch::Found(assigned.clone());
    }
    for v in cons.candidates(c, assigned).iter() {
        *nodes += 1;
        if *nodes > budget {
            return Branch::OutOfBudget;
        }
        assigned.push(v);
        match dfs(cons, assigned, nodes, budget) {
            Branch::Exhausted => {}
            other => return other,
        }
        assigned.pop();
    }
    Branch::Exhausted
}

/// Consistent assignments of the first `depth` cells, in canonical order.
fn prefixes(cons: &Constraints, depth: usize) -> Vec<Vec<usize>> {
    let mut layer = vec![Vec::new()];
    for c in 0..depth.min(cons.domain.len()) {
        layer = layer
            .into_iter()
            .flat_map(|pre: Vec<usize>| {
                cons.candidates(c, &pre)
                    .iter()
                    .map(move |v| {
                        let mut next = pre.clone();
                        next.push(v);
                        next
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    layer
}

/// Depth-first search over tables in lexicographic order, with boundary
/// cells pinned and continuity pruned cell by cell. Partitions run in
/// parallel; the reported table is the lexicographically least success, so
/// the answer does not depend on scheduling.
pub fn search_homotopy(problem: &SearchProblem) -> Result<SearchOutcome> {
    problem.check_shapes()?;
    let level = problem.interval.level();
    let Some(cons) = Constraints::build(problem, &problem.pins())? else {
        return Ok(SearchOutcome::NotFound { level });
    };
    let starts = prefixes(&cons, 3);
    let results: Vec<Branch> = starts
        .into_par_iter()
        .map(|mut pre| {
            let mut nodes = 0;
            dfs(&cons, &mut pre, &mut nodes, problem.node_budget)
        })
        .collect();
    let mut timed_out = false;
    for r in results {
        match r {
            Branch::Found(table) => {
                // Only a lower partition may preempt this one, and lower
                // partitions that timed out leave the minimum undetermined.
                if timed_out {
                    break;
                }
                let h = Homotopy::new(
                    problem.x.clone(),
                    problem.y.clone(),
                    problem.interval.clone(),
                    problem.bridge.clone(),
                    table,
                )?;
                let verdict = problem.verify(&h)?;
                if !verdict.holds {
                    return Err(Error::InternalEquivalenceViolation(format!(
                        "search produced a table the verifier rejects: {verdict:?}"
                    )));
                }
                return Ok(SearchOutcome::Found {
                    homotopy: Box::new(h),
                    level,
                });
            }
            Branch::OutOfBudget => timed_out = true,
            Branch::Exhausted => {}
        }
    }
    Ok(if timed_out {
        SearchOutcome::Timeout {
            budget: problem.node_budget,
        }
    } else {
        SearchOutcome::NotFound { level }
    })
}

/// Tries standard models `k = 1, …, k_cap` and stops at the first success.
/// A timeout at some level does not stop escalation; it is reported only if
/// no later level succeeds.
pub fn search_with_escalation(problem: &SearchProblem, k_cap: usize) -> Result<SearchOutcome> {
    let mut timeout = None;
    for k in 1..=k_cap {
        let outcome = search_homotopy(&problem.with_interval(standard_interval(k)?))?;
        match outcome {
            SearchOutcome::Found { .. } => return Ok(outcome),
            SearchOutcome::Timeout { .. } => timeout = Some(outcome),
            SearchOutcome::NotFound { .. } => {}
        }
    }
    Ok(timeout.unwrap_or(SearchOutcome::NotFound { level: Some(k_cap) }))
}
