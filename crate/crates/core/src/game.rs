//! The scheduler/adversary game: parameters, schedules, kill sequences and
//! survival-time simulation.
//!
//! Processor ids are 1-based (`1..=N`) everywhere a caller can see them.
//! Times are reported 1-based as well; vectors are indexed from 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::survival;

/// The triple `(N, n, f)` with `1 <= f < n <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GameParams {
    pool_size: usize,
    set_size: usize,
    faults: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "N")]
    pool_size: usize,
    n: usize,
    f: usize,
}

impl TryFrom<RawParams> for GameParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        GameParams::new(raw.pool_size, raw.n, raw.f)
    }
}

impl From<GameParams> for RawParams {
    fn from(p: GameParams) -> Self {
        RawParams {
            pool_size: p.pool_size,
            n: p.set_size,
            f: p.faults,
        }
    }
}

impl GameParams {
    pub fn new(pool_size: usize, set_size: usize, faults: usize) -> Result<Self> {
        if faults < 1 || faults >= set_size || set_size > pool_size {
            return Err(Error::InvalidParams(format!(
                "need 1 <= f < n <= N, got N={pool_size}, n={set_size}, f={faults}"
            )));
        }
        Ok(Self {
            pool_size,
            set_size,
            faults,
        })
    }

    /// `N`, the number of processors in the pool.
    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    /// `n`, the number of processors in operation at each time.
    pub fn set_size(&self) -> usize {
        self.set_size
    }

    /// `f`, the number of faulty processors the system tolerates.
    pub fn faults(&self) -> usize {
        self.faults
    }
}

impl std::fmt::Display for GameParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={} n={} f={}", self.pool_size, self.set_size, self.faults)
    }
}

/// First problem found in a candidate schedule. Times are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleViolation {
    #[error("empty schedule")]
    Empty,
    #[error("schedule length {len} exceeds pool size {pool}")]
    TooLong { len: usize, pool: usize },
    #[error("duplicate id {id} at t={t}")]
    DuplicateId { t: usize, id: usize },
    #[error("id {id} out of range at t={t}")]
    IdOutOfRange { t: usize, id: usize },
    #[error("set at t={t} has {len} ids, expected {expected}")]
    WrongCardinality { t: usize, len: usize, expected: usize },
}

/// Checks every schedule invariant and reports the first offending index.
pub fn validate_sets(params: &GameParams, sets: &[Vec<usize>]) -> Result<(), ScheduleViolation> {
    if sets.is_empty() {
        return Err(ScheduleViolation::Empty);
    }
    if sets.len() > params.pool_size {
        return Err(ScheduleViolation::TooLong {
            len: sets.len(),
            pool: params.pool_size,
        });
    }
    let mut seen = vec![usize::MAX; params.pool_size + 1];
    for (idx, set) in sets.iter().enumerate() {
        let t = idx + 1;
        for &id in set {
            if id == 0 || id > params.pool_size {
                return Err(ScheduleViolation::IdOutOfRange { t, id });
            }
            if seen[id] == idx {
                return Err(ScheduleViolation::DuplicateId { t, id });
            }
            seen[id] = idx;
        }
        if set.len() != params.set_size {
            return Err(ScheduleViolation::WrongCardinality {
                t,
                len: set.len(),
                expected: params.set_size,
            });
        }
    }
    Ok(())
}

/// A sequence of processor sets `S_1..S_T`, each of size `n`, `1 <= T <= N`.
/// Every set is kept in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScheduleFile", into = "ScheduleFile")]
pub struct Schedule {
    params: GameParams,
    sets: Vec<Vec<usize>>,
}

/// On-disk form: `{"N":4,"n":2,"f":1,"sets":[[1,2],[3,4]]}`.
#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    #[serde(rename = "N")]
    pool_size: usize,
    n: usize,
    f: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<ScheduleFile> for Schedule {
    type Error = Error;

    fn try_from(file: ScheduleFile) -> Result<Self> {
        let params = GameParams::new(file.pool_size, file.n, file.f)?;
        Schedule::new(params, file.sets)
    }
}

impl From<Schedule> for ScheduleFile {
    fn from(s: Schedule) -> Self {
        ScheduleFile {
            pool_size: s.params.pool_size,
            n: s.params.set_size,
            f: s.params.faults,
            sets: s.sets,
        }
    }
}

impl Schedule {
    pub fn new(params: GameParams, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        validate_sets(&params, &sets)?;
        for set in &mut sets {
            set.sort_unstable();
        }
        Ok(Self { params, sets })
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// The set used at 1-based time `t`.
    pub fn set_at(&self, t: usize) -> Option<&[usize]> {
        t.checked_sub(1)
            .and_then(|i| self.sets.get(i))
            .map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The first `len` sets as a schedule of their own.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.sets.len() {
            return Err(Error::OutOfRange(format!(
                "prefix length {len} not in 1..={}",
                self.sets.len()
            )));
        }
        Ok(Self {
            params: self.params,
            sets: self.sets[..len].to_vec(),
        })
    }
}

/// Re-validates an already constructed schedule.
pub fn validate_schedule(s: &Schedule) -> Result<(), ScheduleViolation> {
    validate_sets(&s.params, &s.sets)
}

/// Kill sequence `s_1..s_T`; `kills[t]` must belong to the schedule's set at `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Adversary {
    pub kills: Vec<usize>,
}

impl Adversary {
    pub fn new(kills: Vec<usize>) -> Self {
        Self { kills }
    }

    pub fn check_against(&self, s: &Schedule) -> Result<()> {
        if self.kills.len() != s.len() {
            return Err(Error::Adversary(format!(
                "adversary has {} kills but schedule has {} sets",
                self.kills.len(),
                s.len()
            )));
        }
        for (idx, (kill, set)) in self.kills.iter().zip(&s.sets).enumerate() {
            if set.binary_search(kill).is_err() {
                return Err(Error::Adversary(format!(
                    "kill {kill} at t={} is not in the set {set:?}",
                    idx + 1
                )));
            }
        }
        Ok(())
    }
}

/// Largest `t` such that for every `u <= t` at most `f` of the distinct
/// processors killed by time `u` (the kill at `u` included) lie in `S_u`.
pub fn survival_time(s: &Schedule, a: &Adversary) -> Result<usize> {
    a.check_against(s)?;
    let mut dead = vec![false; s.params.pool_size + 1];
    for (u, (&kill, set)) in a.kills.iter().zip(&s.sets).enumerate() {
        dead[kill] = true;
        let failed = set.iter().filter(|&&p| dead[p]).count();
        if failed > s.params.faults {
            return Ok(u);
        }
    }
    Ok(s.len())
}

/// The optimal batch schedule.
///
/// Processors are cut into `⌊N/n⌋` consecutive batches, each used for `f`
/// periods. The `p = N mod n` leftover processors, topped up with the
/// lowest-indexed `n − p` processors of the last full batch, are then used
/// for `(f + p − n)⁺` periods. The `h_{n,f}(N)` sets so produced are padded
/// to length `N` by repeating the last one.
pub fn trivial_schedule(params: &GameParams) -> Schedule {
    let (pool, n, f) = (params.pool_size, params.set_size, params.faults);
    let batches = pool / n;
    let leftover = pool - batches * n;
    let mut sets = Vec::with_capacity(pool);
    for b in 0..batches {
        let batch: Vec<usize> = (b * n + 1..=(b + 1) * n).collect();
        sets.extend(std::iter::repeat_n(batch, f));
    }
    let tail_reps = (f + leftover).saturating_sub(n);
    if tail_reps > 0 {
        let last_batch_start = (batches - 1) * n + 1;
        let mut tail: Vec<usize> = (last_batch_start..last_batch_start + n - leftover).collect();
        tail.extend(batches * n + 1..=pool);
        sets.extend(std::iter::repeat_n(tail, tail_reps));
    }
    debug_assert_eq!(sets.len(), survival::optimum_survival_time(params));
    let last = sets.last().cloned().expect("f >= 1 gives at least one set");
    sets.resize(pool, last);
    Schedule::new(*params, sets).expect("batch schedule is well formed")
}
