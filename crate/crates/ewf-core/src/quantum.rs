//! Born-rule predictions for the singlet, three-particle and coin–electron
//! arrangements.
//!
//! Conventions: spin measurements on the singlet are taken along angles in
//! the z–x plane, with the +1 observable cosφ·Z + sinφ·X. Three-particle
//! measurements are taken in the equatorial x–y plane (x ≙ 0, y ≙ π/2) with
//! the +1 observable cosφ·X + sinφ·Y, which makes the product expectation
//! equal cos(t1+t2+t3). The coin is treated as a two-level system with
//! h ≙ up and t ≙ down.

use num_complex::Complex64;

use crate::model::{labels, Angle, CorrelatorSet, Error, JointTable, Result, Settings, Sign, NORM_TOL};

type Op = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The ±1 observable for a measurement along `phi` in the z–x plane.
pub fn zx_observable(phi: f64) -> Op {
    [
        [c(phi.cos(), 0.0), c(phi.sin(), 0.0)],
        [c(phi.sin(), 0.0), c(-phi.cos(), 0.0)],
    ]
}

/// The ±1 observable for a measurement along `phi` in the equatorial x–y
/// plane.
pub fn xy_observable(phi: f64) -> Op {
    [
        [c(0.0, 0.0), c(phi.cos(), -phi.sin())],
        [c(phi.cos(), phi.sin()), c(0.0, 0.0)],
    ]
}

/// A two-outcome measurement basis: the +1 and −1 eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct Basis {
    pub plus: [Complex64; 2],
    pub minus: [Complex64; 2],
}

impl Basis {
    /// The computational basis: +1 ≙ up/h, −1 ≙ down/t.
    pub fn computational() -> Basis {
        Basis {
            plus: [c(1.0, 0.0), c(0.0, 0.0)],
            minus: [c(0.0, 0.0), c(1.0, 0.0)],
        }
    }

    /// The conjugate basis used by the outside observers: +1 ≙ f (the sum
    /// superposition), −1 ≙ o (the difference superposition).
    pub fn conjugate() -> Basis {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Basis {
            plus: [c(s, 0.0), c(s, 0.0)],
            minus: [c(s, 0.0), c(-s, 0.0)],
        }
    }

    /// Eigenbasis of the equatorial observable along `phi`.
    pub fn equatorial(phi: f64) -> Basis {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Basis {
            plus: [c(s, 0.0), c(s * phi.cos(), s * phi.sin())],
            minus: [c(s, 0.0), c(-s * phi.cos(), -s * phi.sin())],
        }
    }

    fn vector(&self, sign: Sign) -> [Complex64; 2] {
        match sign {
            Sign::Plus => self.plus,
            Sign::Minus => self.minus,
        }
    }
}

/// A pure state of two two-level systems; amplitudes ordered
/// (uu, ud, du, dd).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    amps: [Complex64; 4],
}

impl TwoQubitState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        check_norm(&amps)?;
        Ok(TwoQubitState { amps })
    }

    /// The singlet (|ud⟩ − |du⟩)/√2.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        TwoQubitState {
            amps: [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)],
        }
    }

    /// The coin–electron pair (|h↓⟩ + |t↑⟩ + |t↓⟩)/√3 with h ≙ up.
    pub fn hardy_pair() -> Self {
        let s = 1.0 / 3.0_f64.sqrt();
        TwoQubitState {
            amps: [c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(s, 0.0)],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// ⟨ψ| O_a ⊗ O_b |ψ⟩ for Hermitian single-system observables.
    #[allow(clippy::needless_range_loop)]
    pub fn product_expectation(&self, op_a: &Op, op_b: &Op) -> f64 {
        let mut applied = [c(0.0, 0.0); 4];
        for i in 0..2 {
            for a in 0..2 {
                let src = self.amps[(i << 1) | a];
                if src == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..2 {
                    for b in 0..2 {
                        applied[(j << 1) | b] += op_a[j][i] * op_b[b][a] * src;
                    }
                }
            }
        }
        inner(&self.amps, &applied).re
    }

    /// The Born distribution for measuring system 1 in `basis_a` and system
    /// 2 in `basis_b`, labeled with the given party names.
    #[allow(clippy::needless_range_loop)]
    pub fn born_table(
        &self,
        basis_a: &Basis,
        basis_b: &Basis,
        label_a: &str,
        label_b: &str,
    ) -> Result<JointTable> {
        let mut probs = Vec::with_capacity(4);
        for sa in Sign::BOTH {
            for sb in Sign::BOTH {
                let va = basis_a.vector(sa);
                let vb = basis_b.vector(sb);
                let mut amp = c(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        amp += va[i].conj() * vb[j].conj() * self.amps[(i << 1) | j];
                    }
                }
                probs.push(amp.norm_sqr());
            }
        }
        JointTable::new(vec![label_a, label_b], probs)
    }
}

/// A pure state of three two-level systems; amplitude index bit 2 is the
/// first system.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeQubitState {
    amps: [Complex64; 8],
}

impl ThreeQubitState {
    pub fn new(amps: [Complex64; 8]) -> Result<Self> {
        check_norm(&amps)?;
        Ok(ThreeQubitState { amps })
    }

    /// (|uuu⟩ + |ddd⟩)/√2.
    pub fn ghz() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = [c(0.0, 0.0); 8];
        amps[0] = c(s, 0.0);
        amps[7] = c(s, 0.0);
        ThreeQubitState { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amps
    }

    #[allow(clippy::needless_range_loop)]
    fn apply_single(&self, op: &Op, system: usize) -> [Complex64; 8] {
        let shift = 2 - system;
        let mut out = [c(0.0, 0.0); 8];
        for (index, amp) in self.amps.iter().enumerate() {
            if *amp == c(0.0, 0.0) {
                continue;
            }
            let bit = (index >> shift) & 1;
            for target_bit in 0..2 {
                let target = (index & !(1 << shift)) | (target_bit << shift);
                out[target] += op[target_bit][bit] * amp;
            }
        }
        out
    }

    /// ⟨ψ| O_1 ⊗ O_2 ⊗ O_3 |ψ⟩ by explicit contraction.
    pub fn product_expectation(&self, ops: [&Op; 3]) -> f64 {
        let mut state = self.amps;
        for (system, op) in ops.into_iter().enumerate() {
            state = ThreeQubitState { amps: state }.apply_single(op, system);
        }
        inner(&self.amps, &state).re
    }

    /// Amplitude ⟨v1 v2 v3 | ψ⟩ against a product state.
    pub fn product_amplitude(
        &self,
        v1: &[Complex64; 2],
        v2: &[Complex64; 2],
        v3: &[Complex64; 2],
    ) -> Complex64 {
        let mut amp = c(0.0, 0.0);
        for (index, a) in self.amps.iter().enumerate() {
            let (i, j, k) = ((index >> 2) & 1, (index >> 1) & 1, index & 1);
            amp += v1[i].conj() * v2[j].conj() * v3[k].conj() * a;
        }
        amp
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_norm(amps: &[Complex64]) -> Result<()> {
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        Err(Error::NotNormalized { total: norm })
    } else {
        Ok(())
    }
}

/// Standard singlet correlator for measurements along a and b: −cos(a−b).
pub fn singlet_correlator(a: Angle, b: Angle) -> f64 {
    -(a.radians() - b.radians()).cos()
}

/// The Born pair distribution for the singlet measured along (a, b): fair
/// marginals and correlator −cos(a−b).
pub fn singlet_pair_table(a: Angle, b: Angle, label_a: &str, label_b: &str) -> Result<JointTable> {
    let e = singlet_correlator(a, b);
    let probs = Sign::BOTH
        .iter()
        .flat_map(|sa| {
            Sign::BOTH
                .iter()
                .map(move |sb| (1.0 + sa.value() * sb.value() * e) / 4.0)
        })
        .collect();
    JointTable::new(vec![label_a, label_b], probs)
}

/// The assignment that treats every pair of the two-round experiment as a
/// fresh singlet: all four cross correlators are −cos of the respective
/// angle differences. Provided as the comparison baseline; it can violate
/// the CHSH bound.
pub fn quantum_correlator_set(s: &Settings) -> Result<CorrelatorSet> {
    CorrelatorSet::new(
        singlet_correlator(s.a1, s.b1),
        singlet_correlator(s.b1, s.a2),
        singlet_correlator(s.a2, s.b2),
        singlet_correlator(s.a1, s.b2),
    )
}

/// Expectation of the product of the three ±1 outcomes for equatorial
/// measurements along (t1, t2, t3) on the three-particle state, computed by
/// state-vector contraction. Equals cos(t1+t2+t3).
pub fn ghz_correlator(t1: Angle, t2: Angle, t3: Angle) -> f64 {
    let ops = [
        xy_observable(t1.radians()),
        xy_observable(t2.radians()),
        xy_observable(t3.radians()),
    ];
    ThreeQubitState::ghz().product_expectation([&ops[0], &ops[1], &ops[2]])
}

/// The full Born distribution over the eight outcome triples for equatorial
/// measurements along (t1, t2, t3).
pub fn ghz_joint(t1: Angle, t2: Angle, t3: Angle, parties: [&str; 3]) -> Result<JointTable> {
    let state = ThreeQubitState::ghz();
    let bases = [
        Basis::equatorial(t1.radians()),
        Basis::equatorial(t2.radians()),
        Basis::equatorial(t3.radians()),
    ];
    let mut probs = Vec::with_capacity(8);
    for s1 in Sign::BOTH {
        for s2 in Sign::BOTH {
            for s3 in Sign::BOTH {
                let amp = state.product_amplitude(
                    &bases[0].vector(s1),
                    &bases[1].vector(s2),
                    &bases[2].vector(s3),
                );
                probs.push(amp.norm_sqr());
            }
        }
    }
    JointTable::new(parties.to_vec(), probs)
}

/// Born tables for the coin–electron pair: the first-round distribution over
/// {h,t}×{up,down} for (Fbar, F), and the second-round distribution over the
/// conjugate bases for (Wbar, W).
pub fn hardy_born_tables() -> Result<(JointTable, JointTable)> {
    let state = TwoQubitState::hardy_pair();
    let first = state.born_table(
        &Basis::computational(),
        &Basis::computational(),
        labels::FBAR,
        labels::F,
    )?;
    let second = state.born_table(
        &Basis::conjugate(),
        &Basis::conjugate(),
        labels::WBAR,
        labels::W,
    )?;
    Ok((first, second))
}
