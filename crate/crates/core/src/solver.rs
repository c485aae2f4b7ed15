//! Minimal adversaries via time graphs, and the `P` family of surviving
//! left-ordered graphs together with its one-step reduction.
//!
//! An adversary can bring a schedule down at time `t` exactly when the time
//! graph `I_t` (earlier times against the processors of `S_t`, joined by
//! shared processors) has a matching of size `f`: the matched earlier times
//! kill `f` distinct members of `S_t` and time `t` kills one more.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Adversary, Schedule};
use crate::matching::{self, BipartiteGraph, Matching, Side};
use crate::survival;

/// `I_t`: left vertex `u` is time `u + 1 < t`, right vertex `j` is processor
/// `right_labels[j]` of `S_t`; `(u, j)` is an edge iff that processor is
/// also in `S_{u+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeGraph {
    pub t: usize,
    pub graph: BipartiteGraph,
    pub right_labels: Vec<usize>,
}

impl TimeGraph {
    /// Edges as `(time, processor id)`, both 1-based.
    pub fn labelled_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .map(|(u, j)| (u + 1, self.right_labels[j]))
            .collect()
    }
}

/// Time graph of row `t` (1-based) over sorted adjacency rows.
fn rows_time_graph(rows: &[Vec<usize>], t: usize) -> TimeGraph {
    let current = &rows[t - 1];
    let mut edges = Vec::new();
    for (u, row) in rows[..t - 1].iter().enumerate() {
        for (j, id) in current.iter().enumerate() {
            if row.binary_search(id).is_ok() {
                edges.push((u, j));
            }
        }
    }
    TimeGraph {
        t,
        graph: BipartiteGraph::from_edges(t - 1, current.len(), &edges).expect("indices in range"),
        right_labels: current.clone(),
    }
}

pub fn time_graph(s: &Schedule, t: usize) -> Result<TimeGraph> {
    if t == 0 || t > s.len() {
        return Err(Error::OutOfRange(format!("time {t} not in 1..={}", s.len())));
    }
    Ok(rows_time_graph(s.sets(), t))
}

/// First time at which some adversary can bring the schedule down, with the
/// matching that proves it.
pub fn first_fatal_time(s: &Schedule) -> Option<(TimeGraph, Matching)> {
    let f = s.params().faults();
    (1..=s.len()).find_map(|t| {
        let tg = rows_time_graph(s.sets(), t);
        let m = matching::max_matching(&tg.graph);
        (m.size() >= f).then_some((tg, m))
    })
}

/// `T(S)`, the survival time against the worst adversary.
pub fn minimal_survival_time(s: &Schedule) -> usize {
    first_fatal_time(s).map_or(s.len(), |(tg, _)| tg.t - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryReport {
    pub survival: usize,
    /// 1-based time of the fatal kill, if any.
    pub fatal_time: Option<usize>,
    pub adversary: Adversary,
}

/// Minimal survival time, the fatal time and an adversary attaining it.
///
/// At the fatal time `t*` the first `f` pairs of a maximum matching of `I_{t*}`
/// fix the kills of the matched earlier times, `t*` kills the lowest-id
/// member of `S_{t*}` not yet killed, and every other time kills the
/// lowest-id member of its set.
pub fn solve(s: &Schedule) -> AdversaryReport {
    let mut kills: Vec<usize> = s.sets().iter().map(|set| set[0]).collect();
    let fatal = first_fatal_time(s);
    if let Some((tg, m)) = &fatal {
        let f = s.params().faults();
        let mut taken = Vec::with_capacity(f);
        for &(u, j) in m.pairs.iter().take(f) {
            kills[u] = tg.right_labels[j];
            taken.push(tg.right_labels[j]);
        }
        kills[tg.t - 1] = *tg
            .right_labels
            .iter()
            .find(|p| !taken.contains(p))
            .expect("f < n leaves a processor to kill");
    }
    AdversaryReport {
        survival: fatal.as_ref().map_or(s.len(), |(tg, _)| tg.t - 1),
        fatal_time: fatal.map(|(tg, _)| tg.t),
        adversary: Adversary::new(kills),
    }
}

pub fn minimal_adversary(s: &Schedule) -> Adversary {
    solve(s).adversary
}

/// The longest prefix no adversary can break before its end.
pub fn surviving_prefix(s: &Schedule) -> Schedule {
    s.prefix(minimal_survival_time(s))
        .expect("survival time is at least f >= 1")
}

/// Left vertex of a [`PInstance`]: its label and its right neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRow {
    pub label: usize,
    pub adj: Vec<usize>,
}

/// Candidate member of `P`: a left-ordered bipartite graph with parameters.
/// Right vertices are identified by label; `rows` is in left order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PInstanceFile")]
pub struct PInstance {
    n: usize,
    f: usize,
    right: Vec<usize>,
    #[serde(rename = "left")]
    rows: Vec<PRow>,
}

#[derive(Deserialize)]
struct PInstanceFile {
    n: usize,
    f: usize,
    right: Vec<usize>,
    left: Vec<PRow>,
}

impl TryFrom<PInstanceFile> for PInstance {
    type Error = Error;

    fn try_from(file: PInstanceFile) -> Result<Self> {
        PInstance::new(file.n, file.f, file.right, file.left)
    }
}

impl PInstance {
    pub fn new(n: usize, f: usize, mut right: Vec<usize>, mut rows: Vec<PRow>) -> Result<Self> {
        if f < 1 || f >= n {
            return Err(Error::InvalidParams(format!("need 1 <= f < n, got n={n}, f={f}")));
        }
        right.sort_unstable();
        if right.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("duplicate right label".into()));
        }
        for row in &mut rows {
            row.adj.sort_unstable();
            row.adj.dedup();
            if let Some(bad) = row.adj.iter().find(|p| right.binary_search(p).is_err()) {
                return Err(Error::OutOfRange(format!(
                    "left vertex {} is adjacent to unknown right vertex {bad}",
                    row.label
                )));
            }
        }
        Ok(Self { n, f, right, rows })
    }

    /// Graph of a schedule: left vertices are times `1..=T`, right vertices
    /// are processors `1..=N`.
    pub fn from_schedule(s: &Schedule) -> Self {
        let p = s.params();
        Self {
            n: p.set_size(),
            f: p.faults(),
            right: (1..=p.pool_size()).collect(),
            rows: s
                .sets()
                .iter()
                .enumerate()
                .map(|(i, set)| PRow {
                    label: i + 1,
                    adj: set.clone(),
                })
                .collect(),
        }
    }

    /// `L`
    pub fn left_size(&self) -> usize {
        self.rows.len()
    }

    /// `R`
    pub fn right_size(&self) -> usize {
        self.right.len()
    }

    pub fn set_size(&self) -> usize {
        self.n
    }

    pub fn faults(&self) -> usize {
        self.f
    }

    pub fn rows(&self) -> &[PRow] {
        &self.rows
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|r| r.adj.clone()).collect()
    }
}

/// Why a candidate fails to be in `P`. `index` is the 1-based left position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PViolation {
    #[error("left vertex {label} (position {index}) has degree {degree}, expected {expected}")]
    Degree {
        index: usize,
        label: usize,
        degree: usize,
        expected: usize,
    },
    #[error("time graph at position {index} (label {label}) has a matching of size {matching} >= f")]
    Matching {
        index: usize,
        label: usize,
        matching: usize,
    },
}

impl PViolation {
    pub fn index(&self) -> usize {
        match *self {
            PViolation::Degree { index, .. } | PViolation::Matching { index, .. } => index,
        }
    }
}

/// Checks that every left vertex has degree `n` and every `I_t` has
/// matching number at most `f − 1`.
pub fn membership_in_p(inst: &PInstance) -> Result<(), PViolation> {
    let adj = inst.adjacency();
    for (i, row) in inst.rows.iter().enumerate() {
        if row.adj.len() != inst.n {
            return Err(PViolation::Degree {
                index: i + 1,
                label: row.label,
                degree: row.adj.len(),
                expected: inst.n,
            });
        }
        let size = matching::max_matching(&rows_time_graph(&adj, i + 1).graph).size();
        if size >= inst.f {
            return Err(PViolation::Matching {
                index: i + 1,
                label: row.label,
                matching: size,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub instance: PInstance,
    /// Labels of the deficiency witness `C ⊆ γ(a_L)`.
    pub witness: Vec<usize>,
    /// Labels of the earlier left vertices adjacent to `C`.
    pub removed_left: Vec<usize>,
}

/// One descent step: take a deficiency witness `C` of `I_L` on the side
/// `γ(a_L)`, then drop `a_L`, the vertices of `C` and every earlier left
/// vertex adjacent to `C`.
pub fn reduce_instance(inst: &PInstance) -> Result<Reduction> {
    membership_in_p(inst).map_err(|v| Error::NotInP(v.to_string()))?;
    let last = inst.left_size();
    if last == 0 {
        return Err(Error::OutOfRange("cannot reduce an instance with no left vertices".into()));
    }
    let tg = rows_time_graph(&inst.adjacency(), last);
    let w = matching::deficiency_witness(&tg.graph, Side::Right);
    let witness: Vec<usize> = w.subset.iter().map(|&j| tg.right_labels[j]).collect();
    let gamma = matching::neighborhood(&tg.graph, Side::Right, &w.subset)?;

    let mut drop_left = vec![false; last];
    drop_left[last - 1] = true;
    for &u in &gamma {
        drop_left[u] = true;
    }
    let removed_left = gamma.iter().map(|&u| inst.rows[u].label).collect();
    let rows = inst
        .rows
        .iter()
        .zip(&drop_left)
        .filter(|(_, &drop)| !drop)
        .map(|(row, _)| row.clone())
        .collect();
    let right = inst
        .right
        .iter()
        .copied()
        .filter(|p| witness.binary_search(p).is_err())
        .collect();
    Ok(Reduction {
        instance: PInstance {
            n: inst.n,
            f: inst.f,
            right,
            rows,
        },
        witness,
        removed_left,
    })
}

/// `h_{n,f}(R') + (L − L') <= h_{n,f}(R)` for a reduction of `before`.
pub fn reduction_respects_h(before: &PInstance, after: &PInstance) -> bool {
    let h = |k| survival::HArgs { n: before.n, f: before.f, k }.eval();
    after.left_size() < before.left_size()
        && h(after.right_size()) + (before.left_size() - after.left_size()) <= h(before.right_size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{survival_time, trivial_schedule, GameParams};

    fn sched(pool: usize, n: usize, f: usize, sets: Vec<Vec<usize>>) -> Schedule {
        Schedule::new(GameParams::new(pool, n, f).unwrap(), sets).unwrap()
    }

    #[test]
    fn time_graph_examples() {
        let s = sched(4, 2, 1, vec![vec![1, 2], vec![3, 4], vec![3, 4]]);
        let tg = time_graph(&s, 1).unwrap();
        assert_eq!(tg.graph.left_count(), 0);
        assert_eq!(tg.right_labels, vec![1, 2]);

        let tg = time_graph(&s, 3).unwrap();
        assert_eq!(tg.graph.left_count(), 2);
        assert_eq!(tg.right_labels, vec![3, 4]);
        assert_eq!(tg.labelled_edges(), vec![(2, 3), (2, 4)]);

        let constant = sched(4, 2, 1, vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(time_graph(&constant, 2).unwrap().labelled_edges(), vec![(1, 1), (1, 2)]);

        assert!(time_graph(&s, 0).is_err());
        assert!(time_graph(&s, 4).is_err());
    }

    #[test]
    fn minimal_survival_examples() {
        let constant = sched(4, 2, 1, vec![vec![1, 2]; 4]);
        assert_eq!(minimal_survival_time(&constant), 1);
        let trivial = trivial_schedule(&GameParams::new(4, 2, 1).unwrap());
        assert_eq!(minimal_survival_time(&trivial), 2);
    }

    #[test]
    fn adversary_examples() {
        let trivial = trivial_schedule(&GameParams::new(4, 2, 1).unwrap());
        let report = solve(&trivial);
        assert_eq!(report.adversary.kills, vec![1, 3, 4, 3]);
        assert_eq!(report.fatal_time, Some(3));
        assert_eq!(survival_time(&trivial, &report.adversary).unwrap(), 2);

        let constant = sched(4, 2, 1, vec![vec![1, 2]; 2]);
        let report = solve(&constant);
        assert_eq!(report.adversary.kills, vec![1, 2]);
        assert_eq!(report.survival, 1);
    }

    #[test]
    fn adversary_when_nothing_breaks() {
        // Disjoint sets, f = 2: no time graph ever has a matching of size 2.
        let s = sched(6, 3, 2, vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let report = solve(&s);
        assert_eq!(report.fatal_time, None);
        assert_eq!(report.survival, 2);
        assert_eq!(survival_time(&s, &report.adversary).unwrap(), 2);
    }

    #[test]
    fn membership_examples() {
        let trivial = trivial_schedule(&GameParams::new(7, 4, 3).unwrap());
        let prefix = trivial.prefix(5).unwrap();
        assert_eq!(membership_in_p(&PInstance::from_schedule(&prefix)), Ok(()));
        let full = PInstance::from_schedule(&trivial);
        assert_eq!(membership_in_p(&full).unwrap_err().index(), 6);

        let constant = sched(4, 2, 1, vec![vec![1, 2]; 2]);
        let err = membership_in_p(&PInstance::from_schedule(&constant)).unwrap_err();
        assert_eq!(
            err,
            PViolation::Matching {
                index: 2,
                label: 2,
                matching: 1
            }
        );

        let single = sched(4, 2, 1, vec![vec![2, 3]]);
        assert_eq!(membership_in_p(&PInstance::from_schedule(&single)), Ok(()));
    }

    #[test]
    fn membership_degree_violation() {
        let inst = PInstance::new(
            2,
            1,
            vec![1, 2, 3],
            vec![
                PRow { label: 1, adj: vec![1, 2] },
                PRow { label: 2, adj: vec![3] },
            ],
        )
        .unwrap();
        assert!(matches!(
            membership_in_p(&inst),
            Err(PViolation::Degree { index: 2, degree: 1, .. })
        ));
    }

    #[test]
    fn reduce_single_row() {
        let single = PInstance::from_schedule(&sched(4, 2, 1, vec![vec![2, 3]]));
        let r = reduce_instance(&single).unwrap();
        assert_eq!(r.witness, vec![2, 3]);
        assert!(r.removed_left.is_empty());
        assert_eq!(r.instance.left_size(), 0);
        assert_eq!(r.instance.right(), &[1, 4]);
        assert!(reduction_respects_h(&single, &r.instance));
    }

    #[test]
    fn reduce_rejects_non_members() {
        let constant = PInstance::from_schedule(&sched(4, 2, 1, vec![vec![1, 2]; 2]));
        assert!(matches!(reduce_instance(&constant), Err(Error::NotInP(_))));
    }

    #[test]
    fn reduce_keeps_membership_on_trivial_prefixes() {
        for pool in 2..=12 {
            for n in 2..=pool {
                for f in 1..n {
                    let params = GameParams::new(pool, n, f).unwrap();
                    let s = trivial_schedule(&params);
                    let prefix = s.prefix(survival::optimum_survival_time(&params)).unwrap();
                    let inst = PInstance::from_schedule(&prefix);
                    let r = reduce_instance(&inst).unwrap();
                    assert_eq!(membership_in_p(&r.instance), Ok(()), "{params}");
                    assert!(reduction_respects_h(&inst, &r.instance), "{params}");
                }
            }
        }
    }

    #[test]
    fn instance_json() {
        let inst = PInstance::from_schedule(&sched(3, 2, 1, vec![vec![1, 2]]));
        let text = serde_json::to_string(&inst).unwrap();
        assert_eq!(text, r#"{"n":2,"f":1,"right":[1,2,3],"left":[{"label":1,"adj":[1,2]}]}"#);
        let back: PInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
        let bad = r#"{"n":2,"f":1,"right":[1,2],"left":[{"label":1,"adj":[1,3]}]}"#;
        assert!(serde_json::from_str::<PInstance>(bad).is_err());
    }
}
