use super::ModelError;
use rand::Rng;

/// Cardinalities of a list of discrete factors.
///
/// The joint space is the Cartesian product of the factors. Its cardinality
/// can be astronomically large (hundreds of factors), so it is only ever
/// reported in log-space and never used for addressing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSpace {
    sizes: Vec<usize>,
}

impl FactorSpace {
    pub fn new(sizes: Vec<usize>) -> Result<Self, ModelError> {
        if let Some((index, &size)) = sizes.iter().enumerate().find(|(_, &s)| s == 0) {
            return Err(ModelError::EmptyFactor { index, size });
        }
        Ok(FactorSpace { sizes })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Natural log of the joint cardinality.
    pub fn log_cardinality(&self) -> f64 {
        self.sizes.iter().map(|&s| (s as f64).ln()).sum()
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        point.len() == self.sizes.len() && point.iter().zip(&self.sizes).all(|(&v, &s)| v < s)
    }

    /// Draws every factor independently and uniformly.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.sizes.iter().map(|&s| rng.random_range(0..s)).collect()
    }
}

/// A complete joint state: one value per state factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointState(pub Vec<usize>);

/// A complete joint action: one value per action factor (agent).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointAction(pub Vec<usize>);

impl JointState {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl JointAction {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl std::ops::Index<usize> for JointState {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl std::ops::Index<usize> for JointAction {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Mixed-radix encoding: the last value varies fastest.
#[inline]
pub fn mixed_radix_encode(values: &[usize], cards: &[usize]) -> usize {
    debug_assert_eq!(values.len(), cards.len());
    let mut idx = 0usize;
    for (&v, &c) in values.iter().zip(cards) {
        debug_assert!(v < c);
        idx = idx * c + v;
    }
    idx
}

/// Inverse of [`mixed_radix_encode`]; writes one value per card into `out`.
#[inline]
pub fn mixed_radix_decode(mut idx: usize, cards: &[usize], out: &mut [usize]) {
    debug_assert_eq!(cards.len(), out.len());
    for i in (0..cards.len()).rev() {
        out[i] = idx % cards[i];
        idx /= cards[i];
    }
    debug_assert_eq!(idx, 0);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_sized_factor() {
        assert!(FactorSpace::new(vec![3, 0, 2]).is_err());
        assert!(FactorSpace::new(vec![1]).is_ok());
    }

    #[test]
    fn encode_decode_roundtrip() {
        let cards = [3, 2, 4];
        let mut buf = [0usize; 3];
        for idx in 0..24 {
            mixed_radix_decode(idx, &cards, &mut buf);
            assert_eq!(mixed_radix_encode(&buf, &cards), idx);
        }
        // last value varies fastest
        mixed_radix_decode(1, &cards, &mut buf);
        assert_eq!(buf, [0, 0, 1]);
    }

    #[test]
    fn log_cardinality_handles_huge_spaces() {
        // 9^300 states: representable only in log-space.
        let space = FactorSpace::new(vec![9; 300]).unwrap();
        let expected = 300.0 * (9f64).ln();
        assert!((space.log_cardinality() - expected).abs() < 1e-9);
    }
}
