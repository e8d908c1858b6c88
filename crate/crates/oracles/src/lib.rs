//! Brute-force reference computations for tests.
//!
//! Nothing here calls the routines it is used to check: behaviours are
//! enumerated by plain recursion over the raw action list, collisions by
//! rasterizing every fact, and the Therac trigger by scanning all triples.

use std::collections::{BTreeMap, BTreeSet};
use stpt_core::gen::Rng;
use stpt_core::model::{ActionSpec, State, StateModel};
use stpt_core::stl::{CollisionWitness, Invariant, Observation, OccupancyFact, Rect, TimeWindow};

/// Every `(action names, states)` path of at most `depth` steps.
pub fn enumerate_paths(model: &StateModel, depth: usize) -> BTreeSet<(Vec<String>, Vec<State>)> {
    fn walk(
        actions: &[ActionSpec],
        names: &mut Vec<String>,
        states: &mut Vec<State>,
        depth: usize,
        out: &mut BTreeSet<(Vec<String>, Vec<State>)>,
    ) {
        out.insert((names.clone(), states.clone()));
        if depth == 0 {
            return;
        }
        let here = states.last().unwrap().clone();
        for a in actions {
            if a.enabled(&here) {
                names.push(a.name.clone());
                states.push(a.apply(&here));
                walk(actions, names, states, depth - 1, out);
                names.pop();
                states.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in model.init() {
        walk(model.actions(), &mut Vec::new(), &mut vec![s.clone()], depth, &mut out);
    }
    out
}

/// Number of behaviours with at most `depth` steps, by recursion on depth.
pub fn count_paths(model: &StateModel, depth: usize) -> usize {
    enumerate_paths(model, depth).len()
}

/// Bitset over the (x, y, t) lattice cells of a bounding block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cells(Vec<u64>);

impl Cells {
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn and(&self, other: &Cells) -> Cells {
        Cells(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

/// The block every fact of one instance lives in.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    x0: i64,
    y0: i64,
    t0: i64,
    nx: i64,
    ny: i64,
    nt: i64,
}

impl Grid {
    pub fn covering(facts: &[OccupancyFact]) -> Grid {
        let min = |f: fn(&OccupancyFact) -> i64| facts.iter().map(f).min().unwrap_or(0);
        let max = |f: fn(&OccupancyFact) -> i64| facts.iter().map(f).max().unwrap_or(0);
        let (x0, y0, t0) = (min(|f| f.area.x1), min(|f| f.area.y1), min(|f| f.window.start));
        Grid {
            x0,
            y0,
            t0,
            nx: max(|f| f.area.x2) - x0 + 1,
            ny: max(|f| f.area.y2) - y0 + 1,
            nt: max(|f| f.window.end) - t0 + 1,
        }
    }

    pub fn cells(&self, window: &TimeWindow, area: &Rect) -> Cells {
        let total = (self.nx * self.ny * self.nt) as usize;
        let mut bits = vec![0u64; total.div_ceil(64)];
        for t in window.start..=window.end {
            for x in area.x1..=area.x2 {
                for y in area.y1..=area.y2 {
                    let i = (((t - self.t0) * self.nx + (x - self.x0)) * self.ny + (y - self.y0)) as usize;
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
        }
        Cells(bits)
    }
}

/// For every pair of facts with different owners, the cells both cover,
/// when there are any. Owners are ordered within a pair; the list is sorted.
pub fn raster_collisions(grid: &Grid, facts: &[OccupancyFact]) -> Vec<(String, String, Cells)> {
    let rasters: Vec<Cells> = facts.iter().map(|f| grid.cells(&f.window, &f.area)).collect();
    let mut out = Vec::new();
    for i in 0..facts.len() {
        for j in i + 1..facts.len() {
            if facts[i].owner == facts[j].owner {
                continue;
            }
            let common = rasters[i].and(&rasters[j]);
            if !common.is_empty() {
                let mut pair = [facts[i].owner.clone(), facts[j].owner.clone()];
                pair.sort();
                let [a, b] = pair;
                out.push((a, b, common));
            }
        }
    }
    out.sort();
    out
}

/// The cells each collision witness claims, in the form of
/// [`raster_collisions`].
pub fn witness_cells(grid: &Grid, witnesses: &[CollisionWitness]) -> Vec<(String, String, Cells)> {
    let mut out: Vec<_> = witnesses
        .iter()
        .map(|w| (w.owner_a.clone(), w.owner_b.clone(), grid.cells(&w.overlap_window, &w.overlap_box)))
        .collect();
    out.sort();
    out
}

/// Whether the command at `j` is an electron selection that completes the
/// trigger: some photon selection `i` and cursor-up `c` with `i < c < j`,
/// `t[j] - t[i] <= window` and no selection strictly between `i` and `j`.
pub fn therac_trigger_at(ops: &[(&str, u64)], j: usize, window: u64) -> bool {
    const PHOTON: &str = "Select25MevPhotonMode";
    const ELECTRON: &str = "Select25MevElectronMode";
    const CURSOR: &str = "CursorUp";
    if ops[j].0 != ELECTRON {
        return false;
    }
    let is_selection = |op: &str| op == PHOTON || op == ELECTRON;
    (0..j).any(|i| {
        (i + 1..j).any(|c| {
            ops[i].0 == PHOTON
                && ops[c].0 == CURSOR
                && ops[j].1 - ops[i].1 <= window
                && (i + 1..j).all(|k| !is_selection(ops[k].0))
        })
    })
}

/// Whether the machine is left in electron mode with a photon-level beam
/// after the whole sequence, i.e. the last selection triggered.
pub fn therac_overdose_after(ops: &[(&str, u64)], window: u64) -> bool {
    let is_selection = |op: &str| op == "Select25MevPhotonMode" || op == "Select25MevElectronMode";
    match ops.iter().rposition(|(op, _)| is_selection(op)) {
        Some(j) => therac_trigger_at(ops, j, window),
        None => false,
    }
}

fn draw(rng: &mut Rng, lo: i64, hi: i64) -> i64 {
    let (v, next) = rng.next_in_range(lo, hi);
    *rng = next;
    v
}

/// A random model over integer variables with small domains: each action is
/// an arbitrary guard table plus an arbitrary successor table. Some names
/// repeat to make operations nondeterministic.
pub fn random_model(rng: &mut Rng, max_states: usize) -> StateModel {
    let vars = draw(rng, 1, 2) as usize;
    let per_var = if vars == 1 { max_states as i64 } else { (max_states as f64).sqrt() as i64 };
    let domain: Vec<i64> = (0..draw(rng, 2, per_var.max(2))).collect();
    let names: Vec<String> = (0..vars).map(|i| format!("v{i}")).collect();
    let mut all_states = vec![State::new()];
    for n in &names {
        all_states = all_states
            .into_iter()
            .flat_map(|s| domain.iter().map(move |&v| s.clone().with(n.as_str(), v)))
            .collect();
    }
    let n_actions = draw(rng, 0, 4);
    let mut actions = Vec::new();
    for a in 0..n_actions {
        let name = format!("op{}", draw(rng, 0, a));
        let mut guard = BTreeMap::new();
        let mut effect = BTreeMap::new();
        for s in &all_states {
            guard.insert(s.clone(), draw(rng, 0, 3) > 0);
            effect.insert(s.clone(), all_states[draw(rng, 0, all_states.len() as i64 - 1) as usize].clone());
        }
        actions.push(ActionSpec::new(name, move |s| guard[s], move |s| effect[s].clone()));
    }
    let n_init = draw(rng, 1, 3.min(all_states.len() as i64));
    let init: Vec<State> =
        (0..n_init).map(|_| all_states[draw(rng, 0, all_states.len() as i64 - 1) as usize].clone()).collect();
    StateModel::new(names, init, actions).expect("random model is well formed")
}

/// Random invariant over every construct, with small coordinates so that
/// the observations below hit atoms often.
pub fn random_invariant(rng: &mut Rng, depth: u32) -> Invariant {
    let leaf = depth == 0 || draw(rng, 0, 2) == 0;
    if leaf {
        return match draw(rng, 0, 5) {
            0 => Invariant::True,
            1 => Invariant::False,
            2 => Invariant::TimeInterval(TimeWindow { start: draw(rng, 0, 16), end: draw(rng, 0, 16) }),
            3 => Invariant::Owner(["a", "b", "c"][draw(rng, 0, 2) as usize].to_string()),
            4 => Invariant::OccupyBox(Rect { x1: draw(rng, 0, 31), y1: draw(rng, 0, 31), x2: draw(rng, 0, 31), y2: draw(rng, 0, 31) }),
            _ => Invariant::OccupyPoint(draw(rng, 0, 31), draw(rng, 0, 31)),
        };
    }
    match draw(rng, 0, 3) {
        0 => Invariant::And((0..draw(rng, 1, 3)).map(|_| random_invariant(rng, depth - 1)).collect()),
        1 => Invariant::Or((0..draw(rng, 1, 3)).map(|_| random_invariant(rng, depth - 1)).collect()),
        2 => Invariant::not(random_invariant(rng, depth - 1)),
        _ => Invariant::implies(random_invariant(rng, depth - 1), random_invariant(rng, depth - 1)),
    }
}

pub fn random_observation(rng: &mut Rng) -> Observation {
    let boxes: Vec<Rect> = (0..draw(rng, 0, 4))
        .map(|_| Rect::new(draw(rng, 0, 31), draw(rng, 0, 31), draw(rng, 0, 31), draw(rng, 0, 31)))
        .collect();
    Observation::new(draw(rng, 0, 16), ["a", "b", "c"][draw(rng, 0, 2) as usize], boxes)
}

/// Up to `max_facts` facts on a `grid x grid` floor over `horizon` ticks.
pub fn random_facts(rng: &mut Rng, grid: i64, horizon: i64, max_facts: usize) -> Vec<OccupancyFact> {
    (0..draw(rng, 0, max_facts as i64))
        .map(|_| {
            OccupancyFact::new(
                ["A", "B", "C", "D"][draw(rng, 0, 3) as usize],
                TimeWindow::new(draw(rng, 0, horizon - 1), draw(rng, 0, horizon - 1)),
                Rect::new(draw(rng, 0, grid - 1), draw(rng, 0, grid - 1), draw(rng, 0, grid - 1), draw(rng, 0, grid - 1)),
            )
        })
        .collect()
}
