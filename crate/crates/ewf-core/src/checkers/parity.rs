//! Parity-constraint enumeration for the three-particle perfect-correlation
//! argument: no assignment of ±1 values to the three inside and three
//! outside results satisfies all four product constraints at once.

use crate::model::Sign;

/// Index order for the six binary variables: f1, f2, f3, w1, w2, w3.
pub const VARIABLES: [&str; 6] = ["f1", "f2", "f3", "w1", "w2", "w3"];

/// Requires the product of the selected variables to equal `sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityConstraint {
    /// Bit k selects variable k of [`VARIABLES`].
    pub mask: u8,
    pub sign: Sign,
}

impl ParityConstraint {
    pub fn new(variables: &[&str], sign: Sign) -> Self {
        let mut mask = 0u8;
        for v in variables {
            let k = VARIABLES
                .iter()
                .position(|name| name == v)
                .unwrap_or_else(|| panic!("unknown parity variable {v}"));
            mask |= 1 << k;
        }
        ParityConstraint { mask, sign }
    }

    fn satisfied(&self, assignment: u8) -> bool {
        let minus_count = (assignment & self.mask).count_ones();
        let product = if minus_count.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        product == self.sign
    }
}

/// Count the assignments of (f1, f2, f3, w1, w2, w3) ∈ {±1}⁶ satisfying all
/// constraints, by exhaustive enumeration of the 64 candidates.
pub fn count_satisfying(constraints: &[ParityConstraint]) -> usize {
    (0u8..64)
        .filter(|&assignment| constraints.iter().all(|c| c.satisfied(assignment)))
        .count()
}

/// The four perfect-correlation constraints: each mixed triple has product
/// −1 and the all-outside triple has product +1.
pub fn ghz_constraints() -> Vec<ParityConstraint> {
    vec![
        ParityConstraint::new(&["w1", "f2", "f3"], Sign::Minus),
        ParityConstraint::new(&["f1", "w2", "f3"], Sign::Minus),
        ParityConstraint::new(&["f1", "f2", "w3"], Sign::Minus),
        ParityConstraint::new(&["w1", "w2", "w3"], Sign::Plus),
    ]
}

/// Number of the 64 sign assignments compatible with all four constraints.
/// Zero: the parity argument has no definite-value model.
pub fn ghz_parity_satisfiable() -> usize {
    count_satisfying(&ghz_constraints())
}
