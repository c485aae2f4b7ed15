//! Exhaustive reference implementations for small instances.
//!
//! Nothing here is clever: every routine enumerates its search space
//! directly so the matching-based solvers can be checked against it.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::game::{GameParams, Schedule};
use crate::matching::{self, BipartiteGraph, DeficiencyWitness, Side};

pub const DEFAULT_MAX_STATES: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_states: u64,
    pub symmetry_pruning: bool,
}

impl SearchBudget {
    pub fn new(max_states: u64, symmetry_pruning: bool) -> Result<Self> {
        if max_states == 0 {
            return Err(Error::InvalidParams("max_states must be positive".into()));
        }
        Ok(Self {
            max_states,
            symmetry_pruning,
        })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_states: DEFAULT_MAX_STATES,
            symmetry_pruning: true,
        }
    }
}

struct Counter {
    used: u64,
    max: u64,
}

impl Counter {
    fn new(budget: &SearchBudget) -> Self {
        Self {
            used: 0,
            max: budget.max_states,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.max {
            return Err(Error::BudgetExceeded { max_states: self.max });
        }
        Ok(())
    }
}

/// `min_A T(S, A)` by trying every kill sequence, abandoning a branch as
/// soon as it cannot beat the best violation found so far.
pub fn brute_adversary_min(s: &Schedule) -> Result<usize> {
    brute_adversary_min_with(s, &SearchBudget::default())
}

pub fn brute_adversary_min_with(s: &Schedule, budget: &SearchBudget) -> Result<usize> {
    struct Search<'a> {
        sets: &'a [Vec<usize>],
        f: usize,
        dead: Vec<u32>,
        best: usize,
        counter: Counter,
    }

    impl Search<'_> {
        fn run(&mut self, u: usize) -> Result<()> {
            if u >= self.best {
                return Ok(());
            }
            for &p in &self.sets[u] {
                self.counter.tick()?;
                self.dead[p] += 1;
                let failed = self.sets[u].iter().filter(|&&q| self.dead[q] > 0).count();
                if failed > self.f {
                    // Survived u periods; a later break can only be worse.
                    self.best = self.best.min(u);
                } else {
                    self.run(u + 1)?;
                }
                self.dead[p] -= 1;
            }
            Ok(())
        }
    }

    let mut search = Search {
        sets: s.sets(),
        f: s.params().faults(),
        dead: vec![0; s.params().pool_size() + 1],
        best: s.len(),
        counter: Counter::new(budget),
    };
    search.run(0)?;
    Ok(search.best)
}

/// All `k`-subsets of `1..=m` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=m {
            if m - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `T_opt = max_S min_A T(S, A)` by depth-first search over schedule
/// prefixes. A prefix is extended with every size-`n` set and an extension
/// is dead once its newest time graph admits a matching of size `f`.
///
/// With symmetry pruning, processors not used so far are interchangeable,
/// so an extension only ever introduces the lowest unused ids.
pub fn brute_optimum(params: &GameParams, budget: &SearchBudget) -> Result<usize> {
    struct Search {
        pool: usize,
        n: usize,
        f: usize,
        candidates: Vec<Vec<usize>>,
        prefix: Vec<Vec<usize>>,
        best: usize,
        symmetry: bool,
        counter: Counter,
    }

    impl Search {
        fn alive_with(&self, next: &[usize]) -> bool {
            let mut edges = Vec::new();
            for (u, row) in self.prefix.iter().enumerate() {
                for (j, p) in next.iter().enumerate() {
                    if row.contains(p) {
                        edges.push((u, j));
                    }
                }
            }
            let g = BipartiteGraph::from_edges(self.prefix.len(), next.len(), &edges)
                .expect("indices in range");
            matching::max_matching(&g).size() < self.f
        }

        fn extensions(&self) -> Vec<Vec<usize>> {
            if !self.symmetry {
                return self.candidates.clone();
            }
            let used = self.prefix.iter().flatten().copied().max().unwrap_or(0);
            let mut out = Vec::new();
            for fresh in 0..=self.n.min(self.pool - used) {
                let reused = self.n - fresh;
                if reused > used {
                    continue;
                }
                for mut set in subsets(used, reused) {
                    set.extend(used + 1..=used + fresh);
                    out.push(set);
                }
            }
            out
        }

        fn run(&mut self) -> Result<()> {
            self.best = self.best.max(self.prefix.len());
            if self.best == self.pool || self.prefix.len() == self.pool {
                return Ok(());
            }
            for next in self.extensions() {
                self.counter.tick()?;
                if self.alive_with(&next) {
                    self.prefix.push(next);
                    self.run()?;
                    self.prefix.pop();
                    if self.best == self.pool {
                        break;
                    }
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        pool: params.pool_size(),
        n: params.set_size(),
        f: params.faults(),
        candidates: subsets(params.pool_size(), params.set_size()),
        prefix: Vec::new(),
        best: 0,
        symmetry: budget.symmetry_pruning,
        counter: Counter::new(budget),
    };
    search.run()?;
    Ok(search.best)
}

pub const MAX_BRUTE_SIDE: usize = 20;

/// Minimum of `|B − C| + |γ(C)|` over all `2^|B|` subsets `C` of `side`.
/// Ties go to the smaller subset, then to the lexicographically smaller one.
pub fn brute_deficiency(g: &BipartiteGraph, side: Side) -> Result<DeficiencyWitness> {
    let size = g.count(side);
    if size > MAX_BRUTE_SIDE {
        return Err(Error::TooLarge(format!(
            "side has {size} vertices, enumeration limited to {MAX_BRUTE_SIDE}"
        )));
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for mask in 0u32..(1u32 << size) {
        let c: Vec<usize> = (0..size).filter(|&v| mask >> v & 1 == 1).collect();
        let value = matching::deficiency_value(g, side, &c)?;
        let better = match &best {
            None => true,
            Some((bv, bc)) => (value, c.len(), &c) < (*bv, bc.len(), bc),
        };
        if better {
            best = Some((value, c));
        }
    }
    let (value, subset) = best.expect("the empty subset is always enumerated");
    Ok(DeficiencyWitness { side, subset, value })
}

/// Uniform size-`n` subsets per step, reproducible from `seed`.
pub fn random_schedule(params: &GameParams, length: usize, seed: u64) -> Result<Schedule> {
    random_schedule_from(params, length, &mut StdRng::seed_from_u64(seed))
}

pub fn random_schedule_from<R: Rng + ?Sized>(
    params: &GameParams,
    length: usize,
    rng: &mut R,
) -> Result<Schedule> {
    if length == 0 || length > params.pool_size() {
        return Err(Error::InvalidParams(format!(
            "schedule length {length} not in 1..={}",
            params.pool_size()
        )));
    }
    let sets = (0..length)
        .map(|_| {
            rand::seq::index::sample(rng, params.pool_size(), params.set_size())
                .into_iter()
                .map(|i| i + 1)
                .collect()
        })
        .collect();
    Schedule::new(*params, sets)
}
