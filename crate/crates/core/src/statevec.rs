//! Dense statevector simulator over a bounded window of live qubits, plus a
//! direct circuit oracle for {H, CCZ} circuits.
//!
//! Qubits are addressed by opaque [`Handle`]s. Measured qubits leave the
//! window immediately (the amplitude array halves), which is what keeps
//! hundred-vertex resource states simulable inside a small window.

use crate::compiler::{Circuit, Gate};
use crate::scalar::Scalar;
use num_complex::Complex;
use rand::Rng;
use thiserror::Error;

/// Default cap on simultaneously live qubits (~64 MB of f64 amplitudes).
pub const DEFAULT_WIDTH_CAP: usize = 22;

/// Forced measurement branches below this probability are rejected.
pub const FORCED_BRANCH_MIN_PROB: f64 = 1e-12;

/// Opaque identifier of a live (or once-live) qubit. Never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle(u64);

/// Measurement basis. An X measurement is H followed by a Z measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Z,
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Basis::X => write!(f, "X"),
            Basis::Z => write!(f, "Z"),
        }
    }
}

/// Single-qubit gates used by plans and the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate1 {
    H,
    X,
    Z,
}

/// Initial state of a freshly activated qubit.
#[derive(Clone, Copy, Debug)]
pub enum Init<S: Scalar> {
    Plus,
    Zero,
    One,
    Custom(Complex<S>, Complex<S>),
}

/// Result of a single measurement.
#[derive(Clone, Copy, Debug)]
pub struct Outcome {
    pub qubit: Handle,
    pub basis: Basis,
    pub bit: bool,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("width cap {0} exceeded")]
    WidthCapExceeded(usize),
    #[error("handle {0:?} is not active")]
    InactiveHandle(Handle),
    #[error("duplicate handle {0:?}")]
    DuplicateHandle(Handle),
    #[error("forced branch has probability {0:.3e} < {FORCED_BRANCH_MIN_PROB:.0e}")]
    ZeroProbabilityForcedBranch(f64),
    #[error("dimension mismatch: state has {0} amplitudes, reference {1}")]
    DimensionMismatch(usize, usize),
}

/// Dense state over the currently active qubits.
///
/// Bit `i` of an amplitude index addresses `active[i]`.
#[derive(Clone, Debug)]
pub struct StateVector<S: Scalar> {
    active: Vec<Handle>,
    amps: Vec<Complex<S>>,
    width_cap: usize,
    next_handle: u64,
}

impl<S: Scalar> Default for StateVector<S> {
    fn default() -> Self {
        Self::new(DEFAULT_WIDTH_CAP)
    }
}

impl<S: Scalar> StateVector<S> {
    /// Empty zero-qubit state (single unit amplitude).
    pub fn new(width_cap: usize) -> Self {
        StateVector {
            active: Vec::new(),
            amps: vec![Complex::new(S::one(), S::zero())],
            width_cap,
            next_handle: 0,
        }
    }

    pub fn width_cap(&self) -> usize {
        self.width_cap
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self) -> &[Handle] {
        &self.active
    }

    pub fn amplitudes(&self) -> &[Complex<S>] {
        &self.amps
    }

    pub fn is_active(&self, q: Handle) -> bool {
        self.active.contains(&q)
    }

    fn bit_of(&self, q: Handle) -> Result<usize, SimError> {
        self.active
            .iter()
            .position(|&h| h == q)
            .ok_or(SimError::InactiveHandle(q))
    }

    /// Appends a fresh qubit in `init`, returning its handle.
    pub fn activate(&mut self, init: Init<S>) -> Result<Handle, SimError> {
        if self.active.len() >= self.width_cap {
            return Err(SimError::WidthCapExceeded(self.width_cap));
        }
        let (a0, a1) = match init {
            Init::Plus => {
                let r = S::FRAC_1_SQRT_2();
                (Complex::new(r, S::zero()), Complex::new(r, S::zero()))
            }
            Init::Zero => (
                Complex::new(S::one(), S::zero()),
                Complex::new(S::zero(), S::zero()),
            ),
            Init::One => (
                Complex::new(S::zero(), S::zero()),
                Complex::new(S::one(), S::zero()),
            ),
            Init::Custom(a0, a1) => (a0, a1),
        };
        let old = std::mem::take(&mut self.amps);
        let n = old.len();
        let mut new = vec![Complex::new(S::zero(), S::zero()); 2 * n];
        for (i, amp) in old.into_iter().enumerate() {
            new[i] = amp * a0;
            new[i + n] = amp * a1;
        }
        self.amps = new;
        let h = Handle(self.next_handle);
        self.next_handle += 1;
        self.active.push(h);
        Ok(h)
    }

    /// Generalized controlled-phase: flips the sign of every component in
    /// which all listed qubits are 1. Arity 1 = Z, 2 = CZ, 3 = CCZ.
    pub fn apply_gcz(&mut self, qs: &[Handle]) -> Result<(), SimError> {
        let mut mask = 0usize;
        for (i, &q) in qs.iter().enumerate() {
            if qs[..i].contains(&q) {
                return Err(SimError::DuplicateHandle(q));
            }
            mask |= 1 << self.bit_of(q)?;
        }
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            if idx & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn apply_1q(&mut self, q: Handle, gate: Gate1) -> Result<(), SimError> {
        let bit = self.bit_of(q)?;
        let step = 1usize << bit;
        match gate {
            Gate1::H => {
                let r = S::FRAC_1_SQRT_2();
                for base in (0..self.amps.len()).step_by(2 * step) {
                    for off in 0..step {
                        let i = base + off;
                        let j = i + step;
                        let a = self.amps[i];
                        let b = self.amps[j];
                        self.amps[i] = (a + b) * r;
                        self.amps[j] = (a - b) * r;
                    }
                }
            }
            Gate1::X => {
                for base in (0..self.amps.len()).step_by(2 * step) {
                    for off in 0..step {
                        self.amps.swap(base + off, base + off + step);
                    }
                }
            }
            Gate1::Z => {
                for (idx, amp) in self.amps.iter_mut().enumerate() {
                    if idx & step != 0 {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<S>()
            .as_f64()
    }

    fn prob_one(&self, bit: usize) -> f64 {
        let step = 1usize << bit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & step != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum::<S>()
            .as_f64()
    }

    /// Removes qubit `q`, keeping the branch with value `bit` and
    /// renormalizing by `1/sqrt(p)`.
    fn collapse(&mut self, q: Handle, bit: bool, p: f64) -> Result<(), SimError> {
        let pos = self.bit_of(q)?;
        let step = 1usize << pos;
        let scale = S::from_f64(1.0 / p.sqrt());
        let keep = if bit { step } else { 0 };
        let mut new = Vec::with_capacity(self.amps.len() / 2);
        for idx in 0..self.amps.len() {
            if idx & step == keep {
                new.push(self.amps[idx] * scale);
            }
        }
        self.amps = new;
        self.active.remove(pos);
        Ok(())
    }

    /// Born-rule measurement; the qubit leaves the active window.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        q: Handle,
        basis: Basis,
        rng: &mut R,
    ) -> Result<Outcome, SimError> {
        if basis == Basis::X {
            self.apply_1q(q, Gate1::H)?;
        }
        let pos = self.bit_of(q)?;
        let p1 = self.prob_one(pos);
        let bit = rng.random::<f64>() < p1;
        let p = if bit { p1 } else { 1.0 - p1 };
        self.collapse(q, bit, p)?;
        Ok(Outcome {
            qubit: q,
            basis,
            bit,
            probability: p,
        })
    }

    /// Forces the given branch; errors if its probability is negligible.
    pub fn measure_forced(
        &mut self,
        q: Handle,
        basis: Basis,
        bit: bool,
    ) -> Result<Outcome, SimError> {
        if basis == Basis::X {
            self.apply_1q(q, Gate1::H)?;
        }
        let pos = self.bit_of(q)?;
        let p1 = self.prob_one(pos);
        let p = if bit { p1 } else { 1.0 - p1 };
        if p < FORCED_BRANCH_MIN_PROB {
            // Undo the basis rotation so the caller's state is untouched.
            if basis == Basis::X {
                self.apply_1q(q, Gate1::H)?;
            }
            return Err(SimError::ZeroProbabilityForcedBranch(p));
        }
        self.collapse(q, bit, p)?;
        Ok(Outcome {
            qubit: q,
            basis,
            bit,
            probability: p,
        })
    }

    /// Amplitudes re-indexed so bit `i` addresses `order[i]`.
    pub fn amplitudes_in_order(&self, order: &[Handle]) -> Result<Vec<Complex<S>>, SimError> {
        if order.len() != self.active.len() {
            return Err(SimError::DimensionMismatch(
                self.amps.len(),
                1 << order.len(),
            ));
        }
        let mut bits = Vec::with_capacity(order.len());
        for (i, &q) in order.iter().enumerate() {
            if order[..i].contains(&q) {
                return Err(SimError::DuplicateHandle(q));
            }
            bits.push(self.bit_of(q)?);
        }
        let mut out = vec![Complex::new(S::zero(), S::zero()); self.amps.len()];
        for (src, &amp) in self.amps.iter().enumerate() {
            let mut dst = 0usize;
            for (i, &b) in bits.iter().enumerate() {
                if src & (1 << b) != 0 {
                    dst |= 1 << i;
                }
            }
            out[dst] = amp;
        }
        Ok(out)
    }

    /// Squared overlap `|<ref|s>|^2` against a reference amplitude vector in
    /// this state's own qubit order. Global-phase invariant.
    pub fn fidelity(&self, reference: &[Complex<S>]) -> Result<f64, SimError> {
        fidelity_vec(&self.amps, reference)
    }
}

/// Squared overlap of two amplitude vectors of equal dimension.
pub fn fidelity_vec<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> Result<f64, SimError> {
    if a.len() != b.len() {
        return Err(SimError::DimensionMismatch(a.len(), b.len()));
    }
    let mut acc = Complex::new(S::zero(), S::zero());
    for (x, y) in a.iter().zip(b.iter()) {
        acc = acc + y.conj() * x;
    }
    Ok(acc.norm_sqr().as_f64())
}

/// Reference implementation: applies each layer's gates of a {H, CCZ}
/// circuit directly to `input`. Wire `w` is `input.active()[w]`.
pub fn oracle_run<S: Scalar>(
    circuit: &Circuit,
    mut input: StateVector<S>,
) -> Result<StateVector<S>, SimError> {
    let handles: Vec<Handle> = input.active().to_vec();
    assert_eq!(
        circuit.n_qubits,
        handles.len(),
        "circuit width must match input width"
    );
    for layer in &circuit.layers {
        for gate in &layer.gates {
            match *gate {
                Gate::H(q) => input.apply_1q(handles[q], Gate1::H)?,
                Gate::Ccz(a, b, c) => {
                    input.apply_gcz(&[handles[a], handles[b], handles[c]])?
                }
            }
        }
    }
    Ok(input)
}
