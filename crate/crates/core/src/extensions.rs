//! Two extensions of the basic game.
//!
//! * A lower bound for systems built from two disjoint pools of processor
//!   types, obtained by keeping the per-type split fixed over time.
//! * The exact value of the game in which the scheduler may randomise (the
//!   distribution is fixed up front) and the adversary kills on-line,
//!   seeing only the sets used so far and its own earlier kills.
//!
//! The randomized game is solved by double oracle: restricted matrix games
//! over growing supports of pure schedules and pure adversary strategies,
//! expanded with best responses until neither side can improve.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{trivial_schedule, GameParams, Schedule};
use crate::lp::{self, MatrixGameSolution};
use crate::matching::{self, BipartiteGraph};
use crate::oracle::{subsets, SearchBudget};
use crate::scalar::Scalar;
use crate::survival;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPoolParams {
    pub pool1: usize,
    pub pool2: usize,
    pub n: usize,
    pub quorum1: usize,
    pub quorum2: usize,
}

impl TwoPoolParams {
    pub fn new(pool1: usize, pool2: usize, n: usize, quorum1: usize, quorum2: usize) -> Result<Self> {
        if quorum1 + quorum2 > n {
            return Err(Error::InvalidParams(format!(
                "quorums {quorum1} + {quorum2} exceed n = {n}"
            )));
        }
        if quorum1 + quorum2 == 0 {
            return Err(Error::InvalidParams("at least one quorum must be positive".into()));
        }
        Ok(Self {
            pool1,
            pool2,
            n,
            quorum1,
            quorum2,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoPoolBound {
    pub value: usize,
    /// Maximising `(n1, n2)`; `None` when no split is admissible.
    pub split: Option<(usize, usize)>,
}

/// Survival of one pool used `size` at a time with quorum `quorum`; `None`
/// when the pool imposes no constraint (no quorum required).
fn pool_term(pool: usize, size: usize, quorum: usize) -> Option<usize> {
    (quorum > 0).then(|| {
        survival::HArgs {
            n: size,
            f: size - quorum,
            k: pool,
        }
        .eval()
    })
}

/// `max over n1 + n2 = n` of `min(h_{n1,n1−g1}(N1), h_{n2,n2−g2}(N2))`,
/// over splits with `g_i <= n_i <= N_i`. A pool with zero quorum does not
/// constrain the minimum.
pub fn two_pool_lower_bound(tp: &TwoPoolParams) -> TwoPoolBound {
    let mut best = TwoPoolBound { value: 0, split: None };
    for n1 in 0..=tp.n {
        let n2 = tp.n - n1;
        if n1 < tp.quorum1 || n1 > tp.pool1 || n2 < tp.quorum2 || n2 > tp.pool2 {
            continue;
        }
        let value = [
            pool_term(tp.pool1, n1, tp.quorum1),
            pool_term(tp.pool2, n2, tp.quorum2),
        ]
        .into_iter()
        .flatten()
        .min()
        .expect("one quorum is positive");
        if best.split.is_none() || value > best.value {
            best = TwoPoolBound {
                value,
                split: Some((n1, n2)),
            };
        }
    }
    best
}

/// Exact optimum of the two-pool game by prefix search, for probing how far
/// [`two_pool_lower_bound`] is from the truth on tiny pools.
///
/// Type-1 processors have ids `1..=N1`, type-2 ids follow. Each time the
/// scheduler may pick any `n` processors, so the split may vary over time.
/// A prefix dies at `t` when, for a type `i` with positive quorum, `S_t`
/// holds `m_i` processors of that type and the time graph restricted to them
/// has a matching of size `m_i − g_i` (negative sizes count as an immediate
/// break).
pub fn two_pool_brute_optimum(tp: &TwoPoolParams, budget: &SearchBudget) -> Result<usize> {
    let total = tp.pool1 + tp.pool2;
    if tp.n > total || tp.n == 0 {
        return Err(Error::InvalidParams(format!(
            "cannot pick {} processors from pools of {} and {}",
            tp.n, tp.pool1, tp.pool2
        )));
    }
    let candidates = subsets(total, tp.n);
    let mut prefix: Vec<Vec<usize>> = Vec::new();
    let mut best = 0;
    let mut states = 0u64;
    two_pool_search(tp, &candidates, &mut prefix, &mut best, &mut states, budget)?;
    Ok(best)
}

fn two_pool_alive(tp: &TwoPoolParams, prefix: &[Vec<usize>], next: &[usize]) -> bool {
    let types = [(1..=tp.pool1, tp.quorum1), (tp.pool1 + 1..=tp.pool1 + tp.pool2, tp.quorum2)];
    types.into_iter().all(|(ids, quorum)| {
        if quorum == 0 {
            return true;
        }
        let right: Vec<usize> = next.iter().copied().filter(|p| ids.contains(p)).collect();
        if right.len() < quorum {
            return false;
        }
        let mut edges = Vec::new();
        for (u, row) in prefix.iter().enumerate() {
            for (j, p) in right.iter().enumerate() {
                if row.contains(p) {
                    edges.push((u, j));
                }
            }
        }
        let g = BipartiteGraph::from_edges(prefix.len(), right.len(), &edges).expect("indices in range");
        matching::max_matching(&g).size() < right.len() - quorum
    })
}

fn two_pool_search(
    tp: &TwoPoolParams,
    candidates: &[Vec<usize>],
    prefix: &mut Vec<Vec<usize>>,
    best: &mut usize,
    states: &mut u64,
    budget: &SearchBudget,
) -> Result<()> {
    let horizon = tp.pool1 + tp.pool2;
    *best = (*best).max(prefix.len());
    if prefix.len() == horizon {
        return Ok(());
    }
    for next in candidates {
        *states += 1;
        if *states > budget.max_states {
            return Err(Error::BudgetExceeded {
                max_states: budget.max_states,
            });
        }
        if two_pool_alive(tp, prefix, next) {
            prefix.push(next.clone());
            two_pool_search(tp, candidates, prefix, best, states, budget)?;
            prefix.pop();
            if *best == horizon {
                break;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Deterministic,
    Randomized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameValue<S> {
    pub value: S,
    pub mode: Mode,
    /// Scheduler strategy: pure schedules with positive probability.
    pub support: Vec<(Schedule, S)>,
    /// Double-oracle rounds; zero in deterministic mode.
    pub iterations: usize,
}

pub const MAX_CANDIDATE_SETS: usize = 6;
pub const MAX_POOL: usize = 5;

/// Pure on-line adversary: the kill at time `t` as a function of the sets
/// `S_1..S_t` seen so far (its own earlier kills are a function of the same
/// history). Histories not in the table use the lowest-id live member of
/// `S_t`, or the lowest id if every member is dead.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OnlineAdversary {
    choices: HashMap<Vec<usize>, usize>,
}

impl OnlineAdversary {
    fn kill(&self, history: &[usize], set: &[usize], dead: &[bool]) -> usize {
        self.choices.get(history).copied().unwrap_or_else(|| {
            set.iter()
                .copied()
                .find(|&p| !dead[p])
                .unwrap_or(set[0])
        })
    }
}

/// Candidate sets and schedules addressed by index into the set list.
pub struct OnlineGame {
    params: GameParams,
    sets: Vec<Vec<usize>>,
}

impl OnlineGame {
    pub fn new(params: GameParams) -> Result<Self> {
        let sets = subsets(params.pool_size(), params.set_size());
        if sets.len() > MAX_CANDIDATE_SETS || params.pool_size() > MAX_POOL {
            return Err(Error::TooLarge(format!(
                "{params} has {} candidate sets; randomized solving is limited to \
                 {MAX_CANDIDATE_SETS} sets and N <= {MAX_POOL}",
                sets.len()
            )));
        }
        Ok(Self { params, sets })
    }

    pub fn candidate_sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    fn horizon(&self) -> usize {
        self.params.pool_size()
    }

    pub fn to_schedule(&self, pure: &[usize]) -> Schedule {
        let sets = pure.iter().map(|&i| self.sets[i].clone()).collect();
        Schedule::new(self.params, sets).expect("candidate sets are valid")
    }

    pub fn from_schedule(&self, s: &Schedule) -> Result<Vec<usize>> {
        if s.params() != &self.params || s.len() != self.horizon() {
            return Err(Error::InvalidParams(format!(
                "schedule must use {} and have length {}",
                self.params,
                self.horizon()
            )));
        }
        Ok(s.sets()
            .iter()
            .map(|set| self.sets.iter().position(|c| c == set).expect("all sets enumerated"))
            .collect())
    }

    /// Survival time of a pure schedule against a pure on-line adversary.
    pub fn play(&self, pure: &[usize], adv: &OnlineAdversary) -> usize {
        let mut dead = vec![false; self.params.pool_size() + 1];
        for t in 0..pure.len() {
            let set = &self.sets[pure[t]];
            let kill = adv.kill(&pure[..=t], set, &dead);
            dead[kill] = true;
            if set.iter().filter(|&&p| dead[p]).count() > self.params.faults() {
                return t;
            }
        }
        pure.len()
    }

    /// Best on-line response to a schedule distribution: the minimal expected
    /// survival time and a pure adversary attaining it.
    pub fn adversary_best_response<S: Scalar>(&self, dist: &[(Vec<usize>, S)]) -> (OnlineAdversary, S) {
        let live: Vec<(&[usize], S)> = dist
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(s, w)| (s.as_slice(), w.clone()))
            .collect();
        let dead = vec![false; self.params.pool_size() + 1];
        let mut total = S::zero();
        let mut choices = HashMap::new();
        for (first, group) in group_by_step(&live, 0) {
            let (cost, sub) = self.respond(1, vec![first], &group, &dead);
            total = total + cost;
            choices.extend(sub);
        }
        (OnlineAdversary { choices }, total)
    }

    /// Unnormalised expected survival of the schedules in `group`, all of
    /// which start with `history` (length `t`), when the adversary plays
    /// optimally from time `t` on with `dead` killed before `t`.
    fn respond<S: Scalar>(
        &self,
        t: usize,
        history: Vec<usize>,
        group: &[(&[usize], S)],
        dead: &[bool],
    ) -> (S, HashMap<Vec<usize>, usize>) {
        let mass = group.iter().fold(S::zero(), |acc, (_, w)| acc + w.clone());
        let set = &self.sets[history[t - 1]];
        let mut best: Option<(S, usize, HashMap<Vec<usize>, usize>)> = None;
        for &kill in set {
            let mut after = dead.to_vec();
            after[kill] = true;
            let failed = set.iter().filter(|&&p| after[p]).count();
            let (cost, sub) = if failed > self.params.faults() {
                (mass.clone() * S::from_count(t - 1), HashMap::new())
            } else if t == self.horizon() {
                (mass.clone() * S::from_count(t), HashMap::new())
            } else {
                let mut cost = S::zero();
                let mut sub = HashMap::new();
                for (next, next_group) in group_by_step(group, t) {
                    let mut h = history.clone();
                    h.push(next);
                    let (c, s) = self.respond(t + 1, h, &next_group, &after);
                    cost = cost + c;
                    sub.extend(s);
                }
                (cost, sub)
            };
            if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                best = Some((cost, kill, sub));
            }
        }
        let (cost, kill, mut sub) = best.expect("sets are nonempty");
        sub.insert(history, kill);
        (cost, sub)
    }

    /// Best pure schedule against a mixture of pure adversaries.
    pub fn scheduler_best_response<S: Scalar>(&self, mix: &[(&OnlineAdversary, S)]) -> (Vec<usize>, S) {
        let mut pure = vec![0; self.horizon()];
        let mut best: Option<(Vec<usize>, S)> = None;
        loop {
            let value = mix
                .iter()
                .filter(|(_, w)| !w.is_zero())
                .fold(S::zero(), |acc, (adv, w)| {
                    acc + w.clone() * S::from_count(self.play(&pure, adv))
                });
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((pure.clone(), value));
            }
            if !odometer(&mut pure, self.sets.len()) {
                break;
            }
        }
        best.expect("at least one schedule")
    }
}

/// Splits `group` by the set index used at step `t`, in ascending order.
fn group_by_step<'a, S: Clone>(group: &[(&'a [usize], S)], t: usize) -> BTreeMap<usize, Vec<(&'a [usize], S)>> {
    let mut out: BTreeMap<usize, Vec<(&[usize], S)>> = BTreeMap::new();
    for (s, w) in group {
        out.entry(s[t]).or_default().push((s, w.clone()));
    }
    out
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Optimal expected survival time against an on-line adversary.
///
/// Deterministic mode returns `h_{n,f}(N)` with the batch schedule: against
/// a deterministic scheduler the on-line adversary can simulate the whole
/// schedule, so it is as strong as the off-line one. Randomized mode solves
/// the game exactly by double oracle.
pub fn online_game_value<S: Scalar>(params: &GameParams, mode: Mode) -> Result<GameValue<S>> {
    match mode {
        Mode::Deterministic => Ok(GameValue {
            value: S::from_count(survival::optimum_survival_time(params)),
            mode,
            support: vec![(trivial_schedule(params), S::one())],
            iterations: 0,
        }),
        Mode::Randomized => randomized_value(&OnlineGame::new(*params)?),
    }
}

fn randomized_value<S: Scalar>(game: &OnlineGame) -> Result<GameValue<S>> {
    let start = game.from_schedule(&trivial_schedule(&game.params))?;
    let mut schedules = vec![start.clone()];
    let mut adversaries = vec![game.adversary_best_response(&[(start, S::one())]).0];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let payoff: Vec<Vec<S>> = schedules
            .iter()
            .map(|s| {
                adversaries
                    .iter()
                    .map(|a| S::from_count(game.play(s, a)))
                    .collect()
            })
            .collect();
        let MatrixGameSolution {
            value,
            row_strategy,
            col_strategy,
        } = lp::solve_matrix_game(&payoff);

        let dist: Vec<(Vec<usize>, S)> = schedules.iter().cloned().zip(row_strategy.iter().cloned()).collect();
        let (adv, low) = game.adversary_best_response(&dist);
        let mix: Vec<(&OnlineAdversary, S)> = adversaries.iter().zip(col_strategy.iter().cloned()).collect();
        let (sched, high) = game.scheduler_best_response(&mix);

        let adversary_improves = (low - value.clone()).is_negative_beyond_tol();
        let scheduler_improves = (high - value.clone()).is_positive_beyond_tol();
        if !adversary_improves && !scheduler_improves {
            let support = schedules
                .iter()
                .zip(row_strategy)
                .filter(|(_, p)| !p.is_zero())
                .map(|(s, p)| (game.to_schedule(s), p))
                .collect();
            return Ok(GameValue {
                value,
                mode: Mode::Randomized,
                support,
                iterations,
            });
        }
        if adversary_improves {
            adversaries.push(adv);
        }
        if scheduler_improves {
            schedules.push(sched);
        }
    }
}
