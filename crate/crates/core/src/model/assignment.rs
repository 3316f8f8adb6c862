use super::ModelError;

/// Identifies one state or action factor. State variables order before
/// action variables, then by index; this is the canonical order used for
/// table addressing and trie keys.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    State(usize),
    Action(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::State(i) | Var::Action(i) => i,
        }
    }

    pub fn is_state(self) -> bool {
        matches!(self, Var::State(_))
    }
}

/// A consistent set of (variable, value) bindings over state and action
/// factors. Bindings are kept sorted by variable, so equal assignments have
/// equal representations and comparisons are merge-joins.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialAssignment {
    bindings: Vec<(Var, usize)>,
}

impl PartialAssignment {
    pub fn empty() -> Self {
        PartialAssignment::default()
    }

    /// Builds an assignment from arbitrary pairs. Duplicate bindings of the
    /// same value collapse; conflicting values are an error.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (Var, usize)>,
    {
        let mut bindings: Vec<(Var, usize)> = pairs.into_iter().collect();
        bindings.sort_unstable();
        bindings.dedup();
        for w in bindings.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ModelError::ConflictingBinding {
                    var: w[0].0,
                    existing: w[0].1,
                    new: w[1].1,
                });
            }
        }
        Ok(PartialAssignment { bindings })
    }

    pub fn bindings(&self) -> &[(Var, usize)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: Var) -> Option<usize> {
        self.bindings
            .binary_search_by_key(&var, |&(v, _)| v)
            .ok()
            .map(|i| self.bindings[i].1)
    }

    /// Adds a binding. Re-binding the same value is a no-op; a different
    /// value is an error.
    pub fn insert(&mut self, var: Var, value: usize) -> Result<(), ModelError> {
        match self.bindings.binary_search_by_key(&var, |&(v, _)| v) {
            Ok(i) => {
                if self.bindings[i].1 != value {
                    return Err(ModelError::ConflictingBinding {
                        var,
                        existing: self.bindings[i].1,
                        new: value,
                    });
                }
                Ok(())
            }
            Err(i) => {
                self.bindings.insert(i, (var, value));
                Ok(())
            }
        }
    }

    /// True iff no variable bound in both assignments has differing values.
    pub fn compatible(&self, other: &Self) -> bool {
        let (mut a, mut b) = (self.bindings.iter(), other.bindings.iter());
        let (mut x, mut y) = (a.next(), b.next());
        while let (Some(&(va, la)), Some(&(vb, lb))) = (x, y) {
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => x = a.next(),
                std::cmp::Ordering::Greater => y = b.next(),
                std::cmp::Ordering::Equal => {
                    if la != lb {
                        return false;
                    }
                    x = a.next();
                    y = b.next();
                }
            }
        }
        true
    }

    /// Union of bindings, or `None` if the assignments are incompatible.
    /// Idempotent and commutative on compatible inputs.
    pub fn merged(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.bindings.len() + other.bindings.len());
        let (mut a, mut b) = (self.bindings.iter(), other.bindings.iter());
        let (mut x, mut y) = (a.next(), b.next());
        loop {
            match (x, y) {
                (Some(&(va, la)), Some(&(vb, lb))) => match va.cmp(&vb) {
                    std::cmp::Ordering::Less => {
                        out.push((va, la));
                        x = a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((vb, lb));
                        y = b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        if la != lb {
                            return None;
                        }
                        out.push((va, la));
                        x = a.next();
                        y = b.next();
                    }
                },
                (Some(&p), None) => {
                    out.push(p);
                    x = a.next();
                }
                (None, Some(&p)) => {
                    out.push(p);
                    y = b.next();
                }
                (None, None) => break,
            }
        }
        Some(PartialAssignment { bindings: out })
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, usize)> + '_ {
        self.bindings.iter().copied()
    }
}
