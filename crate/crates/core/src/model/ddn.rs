use super::{mixed_radix_encode, FactorSpace, JointAction, JointState, ModelError, PartialAssignment, Var};

/// Dependencies of one next-step state factor.
///
/// The parents may be conditioned on the values of the factor's action
/// parents: `state_parents_per_config[c]` is the state-parent list that
/// applies when the action parents (in sorted order, last varying fastest)
/// take the joint value encoded by `c`. A factor without action conditioning
/// has the same list replicated for every configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorDeps {
    /// Sorted action-factor indices this state factor depends on.
    pub action_parents: Vec<usize>,
    /// One sorted state-parent list per action-parent configuration.
    pub state_parents_per_config: Vec<Vec<usize>>,
}

impl FactorDeps {
    /// Same state parents regardless of the action configuration.
    pub fn unconditioned(
        state_parents: Vec<usize>,
        action_parents: Vec<usize>,
        actions: &FactorSpace,
    ) -> Self {
        let configs: usize = action_parents.iter().map(|&a| actions.size(a)).product();
        FactorDeps {
            action_parents,
            state_parents_per_config: vec![state_parents; configs.max(1)],
        }
    }
}

/// The dependency topology of a factored MMDP: which current-step state and
/// action factors each next-step state factor depends on. Owns the factor
/// spaces so parent domains can be addressed without extra context.
#[derive(Clone, Debug)]
pub struct DdnStructure {
    states: FactorSpace,
    actions: FactorSpace,
    factors: Vec<FactorDeps>,
}

fn sorted_unique(list: &[usize]) -> bool {
    list.windows(2).all(|w| w[0] < w[1])
}

impl DdnStructure {
    pub fn new(
        states: FactorSpace,
        actions: FactorSpace,
        factors: Vec<FactorDeps>,
    ) -> Result<Self, ModelError> {
        if factors.len() != states.len() {
            return Err(ModelError::ConfigCountMismatch {
                factor: 0,
                got: factors.len(),
                expected: states.len(),
            });
        }
        for (i, deps) in factors.iter().enumerate() {
            if !sorted_unique(&deps.action_parents)
                || deps.state_parents_per_config.iter().any(|sp| !sorted_unique(sp))
            {
                return Err(ModelError::UnsortedParents { factor: i });
            }
            if let Some(&a) = deps.action_parents.iter().find(|&&a| a >= actions.len()) {
                return Err(ModelError::FactorOutOfRange { index: a, len: actions.len() });
            }
            for sp in &deps.state_parents_per_config {
                if let Some(&s) = sp.iter().find(|&&s| s >= states.len()) {
                    return Err(ModelError::FactorOutOfRange { index: s, len: states.len() });
                }
            }
            let expected: usize = deps
                .action_parents
                .iter()
                .map(|&a| actions.size(a))
                .product::<usize>()
                .max(1);
            if deps.state_parents_per_config.len() != expected {
                return Err(ModelError::ConfigCountMismatch {
                    factor: i,
                    got: deps.state_parents_per_config.len(),
                    expected,
                });
            }
        }
        Ok(DdnStructure { states, actions, factors })
    }

    pub fn states(&self) -> &FactorSpace {
        &self.states
    }

    pub fn actions(&self) -> &FactorSpace {
        &self.actions
    }

    pub fn num_state_factors(&self) -> usize {
        self.states.len()
    }

    pub fn num_action_factors(&self) -> usize {
        self.actions.len()
    }

    pub fn deps(&self, i: usize) -> &FactorDeps {
        &self.factors[i]
    }

    pub fn action_config_count(&self, i: usize) -> usize {
        self.factors[i].state_parents_per_config.len()
    }

    /// Mixed-radix index of factor `i`'s action-parent values under `a`.
    #[inline]
    pub fn action_config_index(&self, i: usize, a: &JointAction) -> usize {
        let deps = &self.factors[i];
        let mut idx = 0usize;
        for &ap in &deps.action_parents {
            idx = idx * self.actions.size(ap) + a[ap];
        }
        idx
    }

    /// State parents of factor `i` under action configuration `config`.
    pub fn state_parents(&self, i: usize, config: usize) -> &[usize] {
        &self.factors[i].state_parents_per_config[config]
    }

    /// Mixed-radix offset of the state-parent values of factor `i` under the
    /// given action configuration.
    #[inline]
    pub fn state_parent_offset(&self, i: usize, config: usize, s: &JointState) -> usize {
        let mut idx = 0usize;
        for &sp in &self.factors[i].state_parents_per_config[config] {
            idx = idx * self.states.size(sp) + s[sp];
        }
        idx
    }

    pub fn state_parent_domain(&self, i: usize, config: usize) -> usize {
        self.factors[i].state_parents_per_config[config]
            .iter()
            .map(|&sp| self.states.size(sp))
            .product()
    }

    /// The parents of state factor `i` given joint action `a`: the action
    /// parents bound to their values in `a`, plus the state parents selected
    /// by that action configuration (unbound; the caller binds state values).
    pub fn parents_of(&self, i: usize, a: &JointAction) -> (PartialAssignment, &[usize]) {
        let deps = &self.factors[i];
        let bound = PartialAssignment::from_pairs(
            deps.action_parents.iter().map(|&ap| (Var::Action(ap), a[ap])),
        )
        .expect("action parents are unique");
        let config = self.action_config_index(i, a);
        (bound, &deps.state_parents_per_config[config])
    }

    /// Union of all DDN parents of factor `i` over every action
    /// configuration, i.e. what the compact graph draws.
    pub fn compact_state_parents(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.factors[i]
            .state_parents_per_config
            .iter()
            .flatten()
            .copied()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Reconstructs the full parent assignment (action and state bindings)
    /// from a (configuration, offset) table key of factor `i`.
    pub fn decode_parent_key(&self, i: usize, config: usize, offset: usize) -> PartialAssignment {
        let deps = &self.factors[i];
        let mut pairs = Vec::with_capacity(
            deps.action_parents.len() + deps.state_parents_per_config[config].len(),
        );
        let mut c = config;
        for &ap in deps.action_parents.iter().rev() {
            let card = self.actions.size(ap);
            pairs.push((Var::Action(ap), c % card));
            c /= card;
        }
        let sp = &deps.state_parents_per_config[config];
        let mut o = offset;
        for &spi in sp.iter().rev() {
            let card = self.states.size(spi);
            pairs.push((Var::State(spi), o % card));
            o /= card;
        }
        PartialAssignment::from_pairs(pairs).expect("parent variables are unique")
    }

    /// Table key (action configuration, state-parent offset) of factor `i`
    /// under a full state-action pair.
    #[inline]
    pub fn parent_key(&self, i: usize, s: &JointState, a: &JointAction) -> (usize, usize) {
        let config = self.action_config_index(i, a);
        (config, self.state_parent_offset(i, config, s))
    }

    /// Table key of factor `i` extracted from a partial assignment, which
    /// must bind every parent variable.
    pub fn parent_key_of_assignment(
        &self,
        i: usize,
        pa: &PartialAssignment,
    ) -> Result<(usize, usize), ModelError> {
        let deps = &self.factors[i];
        let mut config = 0usize;
        for &ap in &deps.action_parents {
            let v = pa
                .get(Var::Action(ap))
                .ok_or(ModelError::MissingBinding { var: Var::Action(ap), factor: i })?;
            config = config * self.actions.size(ap) + v;
        }
        let mut offset = 0usize;
        for &sp in &deps.state_parents_per_config[config] {
            let v = pa
                .get(Var::State(sp))
                .ok_or(ModelError::MissingBinding { var: Var::State(sp), factor: i })?;
            offset = offset * self.states.size(sp) + v;
        }
        Ok((config, offset))
    }
}

/// Encodes a full joint action as a mixed-radix integer (used for
/// deterministic tie-breaking and flat-table addressing).
pub fn encode_joint_action(a: &JointAction, actions: &FactorSpace) -> usize {
    mixed_radix_encode(&a.0, actions.sizes())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The four-factor DDN with an action-conditioned first factor: S'_0
    /// depends on S_0 alone when A_0 = 0, and on S_0 and S_1 when A_0 = 1.
    pub(crate) fn conditioned_chain_ddn() -> DdnStructure {
        let states = FactorSpace::new(vec![2, 2, 2, 2]).unwrap();
        let actions = FactorSpace::new(vec![2, 2, 2]).unwrap();
        let factors = vec![
            FactorDeps {
                action_parents: vec![0],
                state_parents_per_config: vec![vec![0], vec![0, 1]],
            },
            FactorDeps::unconditioned(vec![1, 2], vec![0, 1], &actions),
            FactorDeps::unconditioned(vec![2, 3], vec![1, 2], &actions),
            FactorDeps::unconditioned(vec![0, 3], vec![2], &actions),
        ];
        DdnStructure::new(states, actions, factors).unwrap()
    }

    #[test]
    fn parents_follow_the_action_configuration() {
        let ddn = conditioned_chain_ddn();
        let (bound, sp) = ddn.parents_of(0, &JointAction(vec![0, 1, 1]));
        assert_eq!(bound.get(Var::Action(0)), Some(0));
        assert_eq!(sp, &[0]);
        let (bound, sp) = ddn.parents_of(0, &JointAction(vec![1, 0, 0]));
        assert_eq!(bound.get(Var::Action(0)), Some(1));
        assert_eq!(sp, &[0, 1]);
        // unconditioned factor: compact parents regardless of action
        let (_, sp) = ddn.parents_of(1, &JointAction(vec![0, 0, 0]));
        assert_eq!(sp, &[1, 2]);
        let (_, sp) = ddn.parents_of(1, &JointAction(vec![1, 1, 1]));
        assert_eq!(sp, &[1, 2]);
    }

    #[test]
    fn action_locality() {
        // two joint actions agreeing on factor 1's action parents {0, 1}
        let ddn = conditioned_chain_ddn();
        let a1 = JointAction(vec![1, 0, 0]);
        let a2 = JointAction(vec![1, 0, 1]);
        assert_eq!(ddn.parents_of(1, &a1), ddn.parents_of(1, &a2));
        assert_eq!(ddn.action_config_index(1, &a1), ddn.action_config_index(1, &a2));
    }

    #[test]
    fn decode_parent_key_inverts_parent_key() {
        let ddn = conditioned_chain_ddn();
        let s = JointState(vec![1, 0, 1, 1]);
        let a = JointAction(vec![1, 1, 0]);
        for i in 0..4 {
            let (c, o) = ddn.parent_key(i, &s, &a);
            let pa = ddn.decode_parent_key(i, c, o);
            assert_eq!(ddn.parent_key_of_assignment(i, &pa).unwrap(), (c, o));
            // decoded bindings agree with the originals
            for (var, val) in pa.iter() {
                match var {
                    Var::State(j) => assert_eq!(val, s[j]),
                    Var::Action(j) => assert_eq!(val, a[j]),
                }
            }
        }
    }

    #[test]
    fn compact_parents_are_the_union() {
        let ddn = conditioned_chain_ddn();
        assert_eq!(ddn.compact_state_parents(0), vec![0, 1]);
        assert_eq!(ddn.compact_state_parents(3), vec![0, 3]);
    }
}
