//! Negative log-likelihood potentials built from supplied probabilities.
//!
//! All logarithms are natural. Probabilities are clamped to `[eps, 1 - eps]`
//! before the logarithm so every potential is finite.

use crate::error::{Error, Result};
use crate::scene::is_simplex;

/// Joint state of a pedestrian pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InteractionState {
    /// The two pedestrians disagree.
    Inconsistent = 0,
    /// Both wait.
    BothNotCrossing = 1,
    /// Both cross.
    BothCrossing = 2,
}

impl InteractionState {
    pub const ALL: [InteractionState; 3] = [
        InteractionState::Inconsistent,
        InteractionState::BothNotCrossing,
        InteractionState::BothCrossing,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k).copied()
    }
}

/// Maps a label pair to its interaction state.
pub fn interaction_state(y_i: u8, y_j: u8) -> InteractionState {
    match (y_i, y_j) {
        (0, 0) => InteractionState::BothNotCrossing,
        (1, 1) => InteractionState::BothCrossing,
        _ => InteractionState::Inconsistent,
    }
}

/// Lower clamp applied to probabilities before taking a logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbClamp {
    epsilon: f64,
}

impl Default for ProbClamp {
    fn default() -> Self {
        Self { epsilon: 1e-7 }
    }
}

impl ProbClamp {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon < 0.5 {
            Ok(Self { epsilon })
        } else {
            Err(Error::Config(format!(
                "log clamp must lie in (0, 0.5), got {epsilon}"
            )))
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn apply(&self, p: f64) -> f64 {
        p.clamp(self.epsilon, 1.0 - self.epsilon)
    }

    fn neg_ln(&self, p: f64) -> f64 {
        -self.apply(p).ln()
    }
}

/// Binary cross-entropy cost of label `y` against probability `p` of label 1.
fn bernoulli_nll(y: u8, p: f64, clamp: ProbClamp) -> f64 {
    if y == 1 {
        clamp.neg_ln(p)
    } else {
        clamp.neg_ln(1.0 - p)
    }
}

/// Cost of pedestrian label `y_i` given its crossing probability `p_i`.
pub fn unary_potential(y_i: u8, p_i: f64, clamp: ProbClamp) -> f64 {
    bernoulli_nll(y_i, p_i, clamp)
}

/// Cost of the pair `(y_i, y_j)` given the pair's interaction distribution.
pub fn pp_potential(y_i: u8, y_j: u8, probs: &[f64; 3], clamp: ProbClamp) -> Result<f64> {
    if !is_simplex(probs) {
        return Err(Error::InvalidSimplex { probs: *probs });
    }
    Ok(clamp.neg_ln(probs[interaction_state(y_i, y_j).index()]))
}

/// Cost of label `y_i` given the probability that the environment supports
/// crossing. Large when `y_i = 1` in a non-supportive environment.
pub fn pe_potential(y_i: u8, p_ie: f64, clamp: ProbClamp) -> f64 {
    bernoulli_nll(y_i, p_ie, clamp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn state_mapping() {
        assert_eq!(interaction_state(0, 0), InteractionState::BothNotCrossing);
        assert_eq!(interaction_state(1, 1), InteractionState::BothCrossing);
        assert_eq!(interaction_state(0, 1), InteractionState::Inconsistent);
        assert_eq!(interaction_state(1, 0), InteractionState::Inconsistent);
        assert_eq!(interaction_state(0, 0).index(), 1);
        assert_eq!(interaction_state(1, 1).index(), 2);
        assert_eq!(interaction_state(1, 0).index(), 0);
    }

    #[test]
    fn every_state_is_reachable() {
        for k in InteractionState::ALL {
            let preimages = [(0, 0), (0, 1), (1, 0), (1, 1)]
                .iter()
                .filter(|&&(a, b)| interaction_state(a, b) == k)
                .count();
            let expected = if k == InteractionState::Inconsistent { 2 } else { 1 };
            assert_eq!(preimages, expected, "{k:?}");
        }
    }

    #[test]
    fn unary_values() {
        let c = ProbClamp::default();
        assert!((unary_potential(1, 0.5, c) - std::f64::consts::LN_2).abs() < TOL);
        // -ln(1 - 1e-7)
        assert!((unary_potential(1, 1.0, c) - 1.000_000_050_000_003_3e-7).abs() < 1e-15);
        assert!((unary_potential(0, 0.9, c) - std::f64::consts::LN_10).abs() < 1e-12);
    }

    #[test]
    fn pair_values() {
        let c = ProbClamp::default();
        let v = pp_potential(1, 1, &[0.1, 0.1, 0.8], c).unwrap();
        assert!((v - 0.223_143_551_314_209_76).abs() < TOL);
        let third = 1.0 / 3.0;
        let v = pp_potential(0, 1, &[third, third, third], c).unwrap();
        assert!((v - 3f64.ln()).abs() < TOL);
        let v = pp_potential(0, 0, &[0.0, 1.0, 0.0], c).unwrap();
        assert!((v - 1.000_000_050_000_003_3e-7).abs() < 1e-15);
        assert!(matches!(
            pp_potential(0, 0, &[0.5, 0.5, 0.5], c),
            Err(Error::InvalidSimplex { .. })
        ));
    }

    #[test]
    fn env_values() {
        let c = ProbClamp::default();
        assert!((pe_potential(1, 0.22, c) - 1.514_127_732_629_775_5).abs() < TOL);
        assert!((pe_potential(0, 0.5, c) - std::f64::consts::LN_2).abs() < TOL);
        assert!((pe_potential(1, 0.0, c) - 16.118_095_650_958_32).abs() < 1e-9);
    }

    #[test]
    fn clamp_bounds() {
        assert!(ProbClamp::new(0.0).is_err());
        assert!(ProbClamp::new(0.5).is_err());
        assert!(ProbClamp::new(1e-3).is_ok());
    }

    proptest! {
        #[test]
        fn potentials_non_negative(p in 0.0f64..=1.0, a in 0.0f64..1.0, b in 0.0f64..1.0, y in 0u8..2, z in 0u8..2) {
            let c = ProbClamp::default();
            prop_assert!(unary_potential(y, p, c) >= 0.0);
            prop_assert!(pe_potential(y, p, c) >= 0.0);
            let s = a + b + 1.0;
            let probs = [a / s, b / s, 1.0 / s];
            if is_simplex(&probs) {
                let v = pp_potential(y, z, &probs, c).unwrap();
                prop_assert!(v >= 0.0);
                prop_assert_eq!(v, pp_potential(z, y, &probs, c).unwrap());
            }
        }

        #[test]
        fn binary_entropy_bound(p in 0.0f64..=1.0) {
            let c = ProbClamp::default();
            let sum = unary_potential(1, p, c) + unary_potential(0, p, c);
            prop_assert!(sum >= 2.0 * std::f64::consts::LN_2 - 1e-15);
            if (p - 0.5).abs() > 1e-6 {
                prop_assert!(sum > 2.0 * std::f64::consts::LN_2);
            }
        }

        #[test]
        fn crossing_cost_decreases_with_probability(p in 1e-7f64..0.9999, dp in 1e-6f64..1e-4) {
            let c = ProbClamp::default();
            let q = (p + dp).min(1.0 - c.epsilon());
            prop_assume!(q > p);
            prop_assert!(unary_potential(1, q, c) < unary_potential(1, p, c));
        }
    }
}
