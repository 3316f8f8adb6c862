//! Count-based model learning over the DDN parent domains.
//!
//! Every state factor keeps one row of successor counts per visited parent
//! configuration, plus a Dirichlet-style uniform prior weight applied to
//! every cell. Transition estimates follow the count ratio
//! `(N + N0) / sum(N + N0)`; rewards are running means. Storage is sparse
//! (insertion-ordered maps keyed by the parent configuration), so memory
//! scales with visited configurations, not with the parent domains.

use crate::model::{DdnStructure, JointAction, JointState, PartialAssignment};
use indexmap::IndexMap;
use rand::Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("unvisited parent configuration for state factor {factor} (no counts and no prior)")]
    UnvisitedConfiguration { factor: usize },
}

/// Successor counts and reward statistics for one parent configuration.
#[derive(Clone, Debug)]
pub struct Row {
    /// Observed successor counts (plus nothing; the prior is applied at
    /// estimation time so fractional priors stay configurable).
    pub counts: Vec<f64>,
    pub count_sum: f64,
    pub reward_sum: f64,
    pub visits: f64,
}

impl Row {
    fn new(card: usize) -> Self {
        Row { counts: vec![0.0; card], count_sum: 0.0, reward_sum: 0.0, visits: 0.0 }
    }

    pub fn reward_mean(&self) -> f64 {
        if self.visits > 0.0 {
            self.reward_sum / self.visits
        } else {
            0.0
        }
    }
}

/// Table key: (action configuration, state-parent offset).
pub type ParentKey = (usize, usize);

#[derive(Clone, Debug, Default)]
struct FactorStats {
    rows: IndexMap<ParentKey, Row>,
}

/// Learned transition counts and reward means for every state factor.
#[derive(Clone, Debug)]
pub struct LearnedModel {
    ddn: Arc<DdnStructure>,
    prior: f64,
    factors: Vec<FactorStats>,
}

impl LearnedModel {
    /// `prior` is the N0 weight added to every (configuration, successor)
    /// cell. With a positive prior every estimate is defined from step 0.
    pub fn new(ddn: Arc<DdnStructure>, prior: f64) -> Self {
        assert!(prior >= 0.0, "prior must be non-negative");
        let factors = vec![FactorStats::default(); ddn.num_state_factors()];
        LearnedModel { ddn, prior, factors }
    }

    pub fn ddn(&self) -> &Arc<DdnStructure> {
        &self.ddn
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    /// Folds one experience tuple into the counts and reward statistics.
    pub fn record(&mut self, s: &JointState, a: &JointAction, next: &JointState, r: &[f64]) {
        for i in 0..self.factors.len() {
            let key = self.ddn.parent_key(i, s, a);
            let card = self.ddn.states().size(i);
            let row = self.factors[i].rows.entry(key).or_insert_with(|| Row::new(card));
            row.counts[next[i]] += 1.0;
            row.count_sum += 1.0;
            row.reward_sum += r[i];
            row.visits += 1.0;
        }
    }

    #[inline]
    fn row(&self, i: usize, key: ParentKey) -> Option<&Row> {
        self.factors[i].rows.get(&key)
    }

    /// The estimated probability that factor `i` takes value `next` given a
    /// parent assignment binding all of its parents.
    pub fn transition_estimate(
        &self,
        i: usize,
        parents: &PartialAssignment,
        next: usize,
    ) -> Result<f64, LearnError> {
        let key = self
            .ddn
            .parent_key_of_assignment(i, parents)
            .expect("assignment must bind factor parents");
        self.estimate_by_key(i, key, next)
            .ok_or(LearnError::UnvisitedConfiguration { factor: i })
    }

    /// Full estimate row for a parent assignment; sums to one when defined.
    pub fn estimate_row(
        &self,
        i: usize,
        parents: &PartialAssignment,
    ) -> Result<Vec<f64>, LearnError> {
        let key = self
            .ddn
            .parent_key_of_assignment(i, parents)
            .expect("assignment must bind factor parents");
        let card = self.ddn.states().size(i);
        let row = self.row(i, key);
        let total = row.map_or(0.0, |r| r.count_sum) + self.prior * card as f64;
        if total <= 0.0 {
            return Err(LearnError::UnvisitedConfiguration { factor: i });
        }
        Ok((0..card)
            .map(|v| (row.map_or(0.0, |r| r.counts[v]) + self.prior) / total)
            .collect())
    }

    /// Estimate addressed by table key; `None` when the configuration is
    /// unvisited and the prior is zero.
    #[inline]
    pub fn estimate_by_key(&self, i: usize, key: ParentKey, next: usize) -> Option<f64> {
        let card = self.ddn.states().size(i) as f64;
        match self.row(i, key) {
            Some(row) => Some((row.counts[next] + self.prior) / (row.count_sum + self.prior * card)),
            None if self.prior > 0.0 => Some(1.0 / card),
            None => None,
        }
    }

    /// Mean observed reward for the configuration, 0 when never visited.
    pub fn reward_mean(&self, i: usize, parents: &PartialAssignment) -> f64 {
        let key = self
            .ddn
            .parent_key_of_assignment(i, parents)
            .expect("assignment must bind factor parents");
        self.row(i, key).map_or(0.0, Row::reward_mean)
    }

    /// Draws a successor state and reward vector from the learned model.
    ///
    /// Factors whose parent configuration was never visited fall back to a
    /// uniform successor draw (that is also what a pure add-one prior gives)
    /// and a zero reward.
    pub fn sample_simulated<R: Rng + ?Sized>(
        &self,
        s: &JointState,
        a: &JointAction,
        rng: &mut R,
    ) -> (JointState, Vec<f64>) {
        let n = self.factors.len();
        let mut next = Vec::with_capacity(n);
        let mut rewards = vec![0.0; n];
        for i in 0..n {
            let key = self.ddn.parent_key(i, s, a);
            let card = self.ddn.states().size(i);
            match self.row(i, key) {
                Some(row) => {
                    let total = row.count_sum + self.prior * card as f64;
                    let u: f64 = rng.random::<f64>() * total;
                    let mut acc = 0.0;
                    let mut drawn = card - 1;
                    for v in 0..card {
                        acc += row.counts[v] + self.prior;
                        if u < acc {
                            drawn = v;
                            break;
                        }
                    }
                    next.push(drawn);
                    rewards[i] = row.reward_mean();
                }
                None => {
                    next.push(rng.random_range(0..card));
                    // reward stays 0: nothing is known about this configuration
                }
            }
        }
        (JointState(next), rewards)
    }

    /// Visited parent configurations of factor `i`, in first-visit order.
    pub fn visited(&self, i: usize) -> impl Iterator<Item = (ParentKey, &Row)> + '_ {
        self.factors[i].rows.iter().map(|(&k, r)| (k, r))
    }

    pub fn visited_count(&self, i: usize) -> usize {
        self.factors[i].rows.len()
    }
}
