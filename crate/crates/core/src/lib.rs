//! Cooperative prioritized sweeping for multi-agent MDPs.
//!
//! This crate implements model-based reinforcement learning for cooperative
//! multi-agent problems whose transition and reward functions factor over a
//! dynamic decision network (DDN). The main pieces:
//!
//! * [`model`] — factored state/action spaces, DDNs, partial assignments, and
//!   ground-truth MMDPs that can be sampled exactly.
//! * [`learner`] — count-based transition estimates and running-mean rewards,
//!   usable as a generative model for simulated experience.
//! * [`factored_q`] — a Q-function represented as a sum of components over
//!   back-propagated basis domains, with local TD updates.
//! * [`elimination`] — exact joint-action maximization by variable
//!   elimination over the coordination graph induced by the Q components.
//! * [`queue`] — a max-priority queue over partial state-action assignments
//!   with a trie index for compatible-entry extraction.
//! * [`agent`] — the sweeping agent tying the above together: act, learn the
//!   model, update the Q-function, and run batches of simulated updates.
//! * [`baselines`] — sparse cooperative Q-learning, a random policy, and a
//!   flat value-iteration oracle for small instances.
//! * [`envs`] — SysAdmin (ring, torus, shared-control ring) and seeded
//!   random MMDP generators.
//! * [`io`] — plain-text problem files and snapshot formats.

pub mod agent;
pub mod baselines;
pub mod elimination;
pub mod envs;
pub mod factored_q;
pub mod io;
pub mod learner;
pub mod model;
pub mod queue;

pub use agent::{CpsAgent, CpsConfig, StepRecord};
pub use baselines::{flat_value_iteration, random_joint_action, FlatSolution, ScqlAgent, ScqlConfig};
pub use elimination::{argmax_action, condition, default_order, ConditionedFactorGraph, EliminationOrder};
pub use factored_q::{backpropagate_basis, FactoredQ, QComponent, TdResult};
pub use learner::LearnedModel;
pub use model::{
    DdnStructure, FactorDeps, FactorSpace, GroundTruthMmdp, JointAction, JointState, ModelError,
    PartialAssignment, Var,
};
pub use queue::{enqueue_backprop, SweepQueue};
