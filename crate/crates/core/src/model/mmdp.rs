use super::{DdnStructure, JointAction, JointState, ModelError};
use rand::Rng;
use std::sync::Arc;

/// Per-factor conditional tables, one dense slab per action configuration.
///
/// For transitions, `per_config[c]` has `state_parent_domain(i, c) * |S_i|`
/// entries (successor value varies fastest); for rewards it has one entry
/// per state-parent offset.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorTable {
    pub per_config: Vec<Vec<f64>>,
}

/// A fully specified factored MMDP: transition probabilities and rewards for
/// every state factor, over the parent domains declared by the DDN.
///
/// Immutable after construction; rewards are deterministic functions of the
/// parent values, and stochasticity enters only through the transitions.
#[derive(Clone, Debug)]
pub struct GroundTruthMmdp {
    ddn: Arc<DdnStructure>,
    transitions: Vec<FactorTable>,
    rewards: Vec<FactorTable>,
    gamma: f64,
}

pub(crate) const ROW_SUM_TOLERANCE: f64 = 1e-9;

impl GroundTruthMmdp {
    pub fn new(
        ddn: Arc<DdnStructure>,
        transitions: Vec<FactorTable>,
        rewards: Vec<FactorTable>,
        gamma: f64,
    ) -> Result<Self, ModelError> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(ModelError::BadDiscount { gamma });
        }
        let n = ddn.num_state_factors();
        if transitions.len() != n || rewards.len() != n {
            return Err(ModelError::ConfigCountMismatch {
                factor: 0,
                got: transitions.len().min(rewards.len()),
                expected: n,
            });
        }
        for i in 0..n {
            let card = ddn.states().size(i);
            let configs = ddn.action_config_count(i);
            if transitions[i].per_config.len() != configs || rewards[i].per_config.len() != configs
            {
                return Err(ModelError::ConfigCountMismatch {
                    factor: i,
                    got: transitions[i].per_config.len(),
                    expected: configs,
                });
            }
            for c in 0..configs {
                let dom = ddn.state_parent_domain(i, c);
                let t = &transitions[i].per_config[c];
                if t.len() != dom * card {
                    return Err(ModelError::TableShapeMismatch {
                        factor: i,
                        config: c,
                        got: t.len(),
                        expected: dom * card,
                    });
                }
                if rewards[i].per_config[c].len() != dom {
                    return Err(ModelError::TableShapeMismatch {
                        factor: i,
                        config: c,
                        got: rewards[i].per_config[c].len(),
                        expected: dom,
                    });
                }
                for (offset, row) in t.chunks(card).enumerate() {
                    if let Some(&p) = row.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
                        return Err(ModelError::BadProbability { factor: i, value: p });
                    }
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                        return Err(ModelError::RowNotNormalized { factor: i, config: c, offset, sum });
                    }
                }
            }
        }
        Ok(GroundTruthMmdp { ddn, transitions, rewards, gamma })
    }

    pub fn ddn(&self) -> &Arc<DdnStructure> {
        &self.ddn
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn num_state_factors(&self) -> usize {
        self.ddn.num_state_factors()
    }

    /// P(next value of factor `i` = `next` | configuration, offset).
    #[inline]
    pub fn transition_prob(&self, i: usize, config: usize, offset: usize, next: usize) -> f64 {
        let card = self.ddn.states().size(i);
        self.transitions[i].per_config[config][offset * card + next]
    }

    #[inline]
    pub fn reward_entry(&self, i: usize, config: usize, offset: usize) -> f64 {
        self.rewards[i].per_config[config][offset]
    }

    pub fn transition_table(&self, i: usize) -> &FactorTable {
        &self.transitions[i]
    }

    pub fn reward_table(&self, i: usize) -> &FactorTable {
        &self.rewards[i]
    }

    /// Writes the length-N reward vector for (s, a) into `out`.
    pub fn reward_vector_into(&self, s: &JointState, a: &JointAction, out: &mut [f64]) {
        for i in 0..self.num_state_factors() {
            let (c, o) = self.ddn.parent_key(i, s, a);
            out[i] = self.reward_entry(i, c, o);
        }
    }

    /// Draws each next-state factor independently from its conditional row
    /// and returns the (deterministic) per-factor reward vector.
    pub fn sample_step<R: Rng + ?Sized>(
        &self,
        s: &JointState,
        a: &JointAction,
        rng: &mut R,
    ) -> (JointState, Vec<f64>) {
        let n = self.num_state_factors();
        let mut next = Vec::with_capacity(n);
        let mut rewards = vec![0.0; n];
        for i in 0..n {
            let (c, o) = self.ddn.parent_key(i, s, a);
            let card = self.ddn.states().size(i);
            let row = &self.transitions[i].per_config[c][o * card..(o + 1) * card];
            next.push(sample_row(row, rng));
            rewards[i] = self.rewards[i].per_config[c][o];
        }
        (JointState(next), rewards)
    }
}

/// Samples an index from an (approximately) normalized probability row with
/// a single uniform draw.
#[inline]
pub(crate) fn sample_row<R: Rng + ?Sized>(row: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>();
    let mut acc = 0.0;
    for (v, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return v;
        }
    }
    row.len() - 1
}
