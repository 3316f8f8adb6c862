//! Linearly factored Q-functions over back-propagated basis domains.
//!
//! The joint Q-function is approximated as a sum of component tables. Each
//! component is anchored to a basis domain (a set of next-step state
//! factors); its table domain is the union of the DDN parents of those
//! factors across every action configuration, so a one-step update of the
//! component can always be expressed over current-step variables.

use crate::model::{DdnStructure, JointAction, JointState, ModelError};
use std::sync::Arc;

/// One additive component of the factored Q-function.
#[derive(Clone, Debug)]
pub struct QComponent {
    /// Next-step state factors this component is anchored to (sorted).
    pub basis: Vec<usize>,
    /// Current-step state factors spanned by the table (sorted).
    pub state_vars: Vec<usize>,
    /// Action factors spanned by the table (sorted).
    pub action_vars: Vec<usize>,
    state_cards: Vec<usize>,
    action_cards: Vec<usize>,
    /// Row-major over (state_vars, action_vars), last variable fastest.
    pub table: Vec<f64>,
}

impl QComponent {
    /// Table index for the projection of a full (s, a) pair onto this
    /// component's variables.
    #[inline]
    pub fn index_of(&self, s: &JointState, a: &JointAction) -> usize {
        let mut idx = 0usize;
        for (&v, &c) in self.state_vars.iter().zip(&self.state_cards) {
            idx = idx * c + s[v];
        }
        for (&v, &c) in self.action_vars.iter().zip(&self.action_cards) {
            idx = idx * c + a[v];
        }
        idx
    }

    pub fn state_cards(&self) -> &[usize] {
        &self.state_cards
    }

    pub fn action_cards(&self) -> &[usize] {
        &self.action_cards
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }
}

/// The domain a basis back-propagates to: the union over every basis factor,
/// over every action configuration, of that factor's DDN parents.
pub fn backpropagate_basis(basis: &[usize], ddn: &DdnStructure) -> (Vec<usize>, Vec<usize>) {
    let mut state_vars: Vec<usize> = Vec::new();
    let mut action_vars: Vec<usize> = Vec::new();
    for &i in basis {
        state_vars.extend(ddn.compact_state_parents(i));
        action_vars.extend(ddn.deps(i).action_parents.iter().copied());
    }
    state_vars.sort_unstable();
    state_vars.dedup();
    action_vars.sort_unstable();
    action_vars.dedup();
    (state_vars, action_vars)
}

/// Per-component and per-factor temporal differences from one update.
///
/// `per_factor[i]` aggregates the magnitudes of all component TDs whose
/// state domain contains factor `i`, each divided by the size of that
/// component's state domain. It is always non-negative and is what drives
/// queue back-propagation; it never feeds back into the Q tables.
#[derive(Clone, Debug)]
pub struct TdResult {
    pub per_component: Vec<f64>,
    pub per_factor: Vec<f64>,
}

/// A sum of Q components plus the per-factor fanout used to split rewards.
#[derive(Clone, Debug)]
pub struct FactoredQ {
    ddn: Arc<DdnStructure>,
    components: Vec<QComponent>,
    /// For each state factor, how many components carry it in their basis.
    fanout: Vec<usize>,
}

impl FactoredQ {
    /// Builds components for the given basis domains, with every table entry
    /// initialized to `init` (zero for sweeping; positive values give
    /// optimistic initialization).
    pub fn new(ddn: Arc<DdnStructure>, bases: &[Vec<usize>], init: f64) -> Result<Self, ModelError> {
        let n = ddn.num_state_factors();
        let mut fanout = vec![0usize; n];
        let mut components = Vec::with_capacity(bases.len());
        for basis in bases {
            if basis.is_empty() || basis.iter().any(|&i| i >= n) {
                return Err(ModelError::BadBasis);
            }
            let mut basis = basis.clone();
            basis.sort_unstable();
            basis.dedup();
            for &i in &basis {
                fanout[i] += 1;
            }
            let (state_vars, action_vars) = backpropagate_basis(&basis, &ddn);
            let state_cards: Vec<usize> =
                state_vars.iter().map(|&v| ddn.states().size(v)).collect();
            let action_cards: Vec<usize> =
                action_vars.iter().map(|&v| ddn.actions().size(v)).collect();
            let len: usize = state_cards.iter().chain(&action_cards).product();
            components.push(QComponent {
                basis,
                state_vars,
                action_vars,
                state_cards,
                action_cards,
                table: vec![init; len],
            });
        }
        Ok(FactoredQ { ddn, components, fanout })
    }

    pub fn ddn(&self) -> &Arc<DdnStructure> {
        &self.ddn
    }

    pub fn components(&self) -> &[QComponent] {
        &self.components
    }

    pub fn fanout(&self) -> &[usize] {
        &self.fanout
    }

    /// Q̂(s, a): the sum of every component's table entry at its projection.
    pub fn evaluate(&self, s: &JointState, a: &JointAction) -> f64 {
        self.components.iter().map(|x| x.table[x.index_of(s, a)]).sum()
    }

    /// The share of the reward vector owed to component `x`: the rewards of
    /// its basis factors, each split evenly among the components carrying
    /// that factor. Summed over all components this telescopes back to the
    /// total reward of the covered factors.
    pub fn split_reward(&self, x: usize, r: &[f64]) -> f64 {
        self.components[x]
            .basis
            .iter()
            .map(|&i| r[i] / self.fanout[i] as f64)
            .sum()
    }

    /// Applies one local TD update to every component and reports the
    /// temporal differences.
    ///
    /// `a_star` must be the maximizing joint action for `next` (obtained via
    /// variable elimination). Each component moves its entry at the (s, a)
    /// projection by `alpha` times its own TD; the TDs themselves are
    /// pre-`alpha`.
    pub fn td_update(
        &mut self,
        s: &JointState,
        a: &JointAction,
        next: &JointState,
        a_star: &JointAction,
        r: &[f64],
        alpha: f64,
        gamma: f64,
    ) -> TdResult {
        let mut per_component = Vec::with_capacity(self.components.len());
        let mut per_factor = vec![0.0; self.fanout.len()];
        for x in 0..self.components.len() {
            let r_x = self.split_reward(x, r);
            let comp = &mut self.components[x];
            let idx = comp.index_of(s, a);
            let idx_next = comp.index_of(next, a_star);
            let delta = r_x + gamma * comp.table[idx_next] - comp.table[idx];
            comp.table[idx] += alpha * delta;
            per_component.push(delta);
            let weight = comp.state_vars.len() as f64;
            if weight > 0.0 {
                let share = delta.abs() / weight;
                for &i in &comp.state_vars {
                    per_factor[i] += share;
                }
            }
        }
        TdResult { per_component, per_factor }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FactorDeps, FactorSpace};

    /// Fig-style DDN used across the factored-Q tests: four state factors in
    /// a chain, first factor action-conditioned.
    fn chain_ddn() -> Arc<DdnStructure> {
        let states = FactorSpace::new(vec![2, 2, 2, 2]).unwrap();
        let actions = FactorSpace::new(vec![2, 2, 2]).unwrap();
        Arc::new(
            DdnStructure::new(
                states,
                actions.clone(),
                vec![
                    FactorDeps {
                        action_parents: vec![0],
                        state_parents_per_config: vec![vec![0], vec![0, 1]],
                    },
                    FactorDeps::unconditioned(vec![1, 2], vec![0, 1], &actions),
                    FactorDeps::unconditioned(vec![2, 3], vec![1, 2], &actions),
                    FactorDeps::unconditioned(vec![0, 3], vec![2], &actions),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn basis_backpropagation_unions_parents() {
        let ddn = chain_ddn();
        // basis {S'_0}: parents across both action configurations
        let (xs, xa) = backpropagate_basis(&[0], &ddn);
        assert_eq!(xs, vec![0, 1]);
        assert_eq!(xa, vec![0]);
        // basis {S'_0, S'_1}
        let (xs, xa) = backpropagate_basis(&[0, 1], &ddn);
        assert_eq!(xs, vec![0, 1, 2]);
        assert_eq!(xa, vec![0, 1]);
    }

    #[test]
    fn all_factor_basis_degenerates_to_flat() {
        let states = FactorSpace::new(vec![2, 2]).unwrap();
        let actions = FactorSpace::new(vec![2]).unwrap();
        let ddn = Arc::new(
            DdnStructure::new(
                states,
                actions.clone(),
                vec![
                    FactorDeps::unconditioned(vec![0, 1], vec![0], &actions),
                    FactorDeps::unconditioned(vec![0, 1], vec![0], &actions),
                ],
            )
            .unwrap(),
        );
        let (xs, xa) = backpropagate_basis(&[0, 1], &ddn);
        assert_eq!(xs, vec![0, 1]);
        assert_eq!(xa, vec![0]);
        let q = FactoredQ::new(ddn, &[vec![0, 1]], 0.0).unwrap();
        assert_eq!(q.components()[0].table_len(), 2 * 2 * 2);
    }

    #[test]
    fn evaluate_sums_component_entries() {
        let ddn = chain_ddn();
        let mut q = FactoredQ::new(ddn, &[vec![0], vec![1]], 0.0).unwrap();
        let s = JointState(vec![1, 0, 1, 0]);
        let a = JointAction(vec![1, 0, 0]);
        assert_eq!(q.evaluate(&s, &a), 0.0);
        // component 0 over (S0, S1, A0); component 1 over (S1, S2, A0, A1)
        let i0 = q.components[0].index_of(&s, &a);
        let i1 = q.components[1].index_of(&s, &a);
        q.components[0].table[i0] = 2.5;
        q.components[1].table[i1] = -1.0;
        assert_eq!(q.evaluate(&s, &a), 1.5);
    }

    #[test]
    fn reward_split_weights_by_fanout() {
        let ddn = chain_ddn();
        // bases {S'_0},{S'_1}: disjoint, fanout 1 each
        let q = FactoredQ::new(ddn.clone(), &[vec![0], vec![1]], 0.0).unwrap();
        let r = [3.0, 5.0, 0.0, 0.0];
        assert_eq!(q.split_reward(0, &r), 3.0);
        assert_eq!(q.split_reward(1, &r), 5.0);
        // bases {S'_0,S'_1},{S'_1,S'_2}: factor 1 shared by two components
        let q = FactoredQ::new(ddn, &[vec![0, 1], vec![1, 2]], 0.0).unwrap();
        let r = [1.0, 2.0, 4.0, 0.0];
        assert_eq!(q.split_reward(0, &r), 1.0 + 2.0 / 2.0);
        assert_eq!(q.split_reward(1, &r), 2.0 / 2.0 + 4.0);
        // telescoping: total split equals total covered reward
        let total: f64 = (0..2).map(|x| q.split_reward(x, &r)).sum();
        assert!((total - (1.0 + 2.0 + 4.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_everything_stays_zero() {
        let ddn = chain_ddn();
        let mut q = FactoredQ::new(ddn, &[vec![0], vec![1]], 0.0).unwrap();
        let s = JointState(vec![0, 0, 0, 0]);
        let a = JointAction(vec![0, 0, 0]);
        let td = q.td_update(&s, &a, &s, &a, &[0.0; 4], 0.3, 0.9);
        assert!(td.per_component.iter().all(|&d| d == 0.0));
        assert!(td.per_factor.iter().all(|&d| d == 0.0));
        assert!(q.components().iter().all(|c| c.table.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn flat_component_with_zero_gamma_is_one_step_q_learning() {
        let states = FactorSpace::new(vec![2]).unwrap();
        let actions = FactorSpace::new(vec![2]).unwrap();
        let ddn = Arc::new(
            DdnStructure::new(
                states,
                actions.clone(),
                vec![FactorDeps::unconditioned(vec![0], vec![0], &actions)],
            )
            .unwrap(),
        );
        let mut q = FactoredQ::new(ddn, &[vec![0]], 0.0).unwrap();
        let s = JointState(vec![0]);
        let a = JointAction(vec![1]);
        let c = 4.25;
        let td = q.td_update(&s, &a, &JointState(vec![1]), &JointAction(vec![0]), &[c], 1.0, 0.0);
        assert_eq!(td.per_component[0], c);
        assert_eq!(q.evaluate(&s, &a), c);
    }

    #[test]
    fn hand_computed_two_component_update() {
        let ddn = chain_ddn();
        let mut q = FactoredQ::new(ddn, &[vec![0], vec![3]], 0.0).unwrap();
        // component 0: (S0, S1, A0); component 1: (S0, S3, A2)
        let s = JointState(vec![0, 1, 0, 0]);
        let a = JointAction(vec![1, 0, 0]);
        let next = JointState(vec![1, 1, 0, 1]);
        let a_star = JointAction(vec![0, 0, 1]);
        let i0 = q.components[0].index_of(&s, &a);
        let i0n = q.components[0].index_of(&next, &a_star);
        let i1 = q.components[1].index_of(&s, &a);
        let i1n = q.components[1].index_of(&next, &a_star);
        q.components[0].table[i0] = 1.0;
        q.components[0].table[i0n] = 2.0;
        q.components[1].table[i1] = -0.5;
        q.components[1].table[i1n] = 0.25;
        let (alpha, gamma) = (0.3, 0.9);
        let r = [0.5, 0.0, 0.0, -1.0];
        let td = q.td_update(&s, &a, &next, &a_star, &r, alpha, gamma);
        // by hand: d0 = 0.5 + 0.9*2.0 - 1.0 = 1.3 ; d1 = -1.0 + 0.9*0.25 + 0.5 = -0.275
        assert!((td.per_component[0] - 1.3).abs() < 1e-12);
        assert!((td.per_component[1] - (-0.275)).abs() < 1e-12);
        assert!((q.components[0].table[i0] - (1.0 + alpha * 1.3)).abs() < 1e-12);
        assert!((q.components[1].table[i1] - (-0.5 + alpha * (-0.275))).abs() < 1e-12);
        // per-factor deltas: |d| / |x_s| summed over components containing the factor
        // component 0 spans {0,1}, component 1 spans {0,3}
        assert!((td.per_factor[0] - (1.3 / 2.0 + 0.275 / 2.0)).abs() < 1e-12);
        assert!((td.per_factor[1] - 1.3 / 2.0).abs() < 1e-12);
        assert_eq!(td.per_factor[2], 0.0);
        assert!((td.per_factor[3] - 0.275 / 2.0).abs() < 1e-12);
        assert!(td.per_factor.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn evaluate_moves_by_alpha_times_total_delta_without_aliasing() {
        let ddn = chain_ddn();
        let mut q = FactoredQ::new(ddn, &[vec![0], vec![2]], 0.0).unwrap();
        let s = JointState(vec![0, 1, 1, 0]);
        let a = JointAction(vec![1, 1, 0]);
        let next = JointState(vec![1, 0, 0, 1]);
        let a_star = JointAction(vec![0, 0, 1]);
        for (k, comp) in q.components.iter_mut().enumerate() {
            for (j, v) in comp.table.iter_mut().enumerate() {
                *v = (k as f64 + 1.0) * 0.1 + j as f64 * 0.01;
            }
        }
        let before = q.evaluate(&s, &a);
        let alpha = 0.3;
        let td = q.td_update(&s, &a, &next, &a_star, &[0.2, 0.0, -0.4, 0.1], alpha, 0.9);
        let after = q.evaluate(&s, &a);
        let expected: f64 = td.per_component.iter().sum::<f64>() * alpha;
        assert!((after - before - expected).abs() < 1e-9);
    }
}
