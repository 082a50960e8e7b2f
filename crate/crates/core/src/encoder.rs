//! Rate-1/2 recursive systematic convolutional encoder.
//!
//! The register is kept in controller canonical form. With feedback
//! `G_R(D) = 1 + r_1 D + ... + r_ν D^ν` and feedforward
//! `G_F(D) = f_0 + f_1 D + ... + f_ν D^ν`, the recursion bit is
//! `a_t = x_t + Σ r_j a_{t-j}` and the parity bit is `y_t = Σ f_j a_{t-j}`.
//! The state stores `a_{t-1}` in its most significant bit and `a_{t-ν}` in
//! bit 0, so a single 1 from the zero state lands in state `2^{ν-1}` and the
//! only state from which a 1 input returns to zero is state 1.

use std::fmt;

use crate::poly::BinaryPolynomial;
use crate::{Error, Result};

/// Largest memory for which the trellis is enumerated explicitly.
pub const MAX_MEMORY: u32 = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EncoderState(pub u32);

impl EncoderState {
    pub const ZERO: EncoderState = EncoderState(0);
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RscCode {
    feedback: BinaryPolynomial,
    feedforward: BinaryPolynomial,
    memory: u32,
    period: usize,
    feedback_mask: u32,
    feedforward_mask: u32,
}

impl RscCode {
    pub fn new(feedback: BinaryPolynomial, feedforward: BinaryPolynomial) -> Result<Self> {
        let memory = feedback.degree();
        if memory == 0 {
            return Err(Error::InvalidPolynomial(
                "feedback polynomial must have degree >= 1".into(),
            ));
        }
        if memory > MAX_MEMORY {
            return Err(Error::InvalidPolynomial(format!(
                "memory {memory} exceeds the supported maximum {MAX_MEMORY}"
            )));
        }
        if !feedback.coeff(0) || !feedforward.coeff(0) {
            return Err(Error::InvalidPolynomial(
                "generator polynomials need a constant term of 1".into(),
            ));
        }
        if feedforward.degree() > memory {
            return Err(Error::InvalidPolynomial(format!(
                "feedforward degree {} exceeds the memory {memory}",
                feedforward.degree()
            )));
        }
        if feedback == feedforward {
            log::warn!("feedback equals feedforward ({feedback}); the core weight is not 2^(ν-1)");
        }
        let period = feedback.period()? as usize;
        let mask = |p: &BinaryPolynomial| {
            (1..=memory)
                .filter(|&j| p.coeff(j))
                .fold(0u32, |m, j| m | 1 << (memory - j))
        };
        Ok(Self {
            feedback_mask: mask(&feedback),
            feedforward_mask: mask(&feedforward),
            feedback,
            feedforward,
            memory,
            period,
        })
    }

    /// Builds a code from octal feedback and feedforward generators.
    pub fn from_octal(feedback: &str, feedforward: &str) -> Result<Self> {
        Self::new(
            BinaryPolynomial::from_octal(feedback)?,
            BinaryPolynomial::from_octal(feedforward)?,
        )
    }

    pub fn feedback(&self) -> BinaryPolynomial {
        self.feedback
    }

    pub fn feedforward(&self) -> BinaryPolynomial {
        self.feedforward
    }

    /// Memory size ν.
    pub fn memory(&self) -> u32 {
        self.memory
    }

    /// Period `L` of the feedback polynomial.
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory
    }

    pub fn has_primitive_feedback(&self) -> bool {
        self.feedback.is_primitive()
    }

    /// One trellis transition: `(next state, systematic bit, parity bit)`.
    #[inline]
    pub fn step(&self, state: EncoderState, input: u8) -> (EncoderState, u8, u8) {
        debug_assert!(state.0 < 1 << self.memory);
        let input = input & 1;
        let a = input ^ (state.0 & self.feedback_mask).count_ones() as u8 & 1;
        let parity = (a & u8::from(self.feedforward.coeff(0)))
            ^ ((state.0 & self.feedforward_mask).count_ones() as u8 & 1);
        let next = (u32::from(a) << (self.memory - 1)) | (state.0 >> 1);
        (EncoderState(next), input, parity)
    }

    /// Encodes from the zero state without a termination tail. Returns the
    /// systematic and parity sequences and the final state.
    pub fn encode(&self, input: &[u8]) -> (Vec<u8>, Vec<u8>, EncoderState) {
        let mut state = EncoderState::ZERO;
        let mut sys = Vec::with_capacity(input.len());
        let mut par = Vec::with_capacity(input.len());
        for &bit in input {
            let (next, x, y) = self.step(state, bit);
            sys.push(x);
            par.push(y);
            state = next;
        }
        (sys, par, state)
    }

    /// Parity bits `y_1 … y_L` of the `L` zero-input steps that follow a
    /// single 1 entering the zero state. Afterwards the encoder is back in
    /// state `2^{ν-1}`.
    pub fn weight2_parity_response(&self) -> Vec<u8> {
        let (mut state, _, _) = self.step(EncoderState::ZERO, 1);
        let start = state;
        let mut ys = Vec::with_capacity(self.period);
        for _ in 0..self.period {
            let (next, _, y) = self.step(state, 0);
            ys.push(y);
            state = next;
        }
        debug_assert_eq!(state, start);
        ys
    }

    /// Parity weight accumulated strictly between the diverging and the
    /// remerging transition of the shortest weight-2 path.
    pub fn core_weight(&self) -> u32 {
        let ys = self.weight2_parity_response();
        ys[..self.period - 1].iter().map(|&y| u32::from(y)).sum()
    }

    /// Parity bit of the transition leaving the zero state on a 1.
    pub fn diverge_parity(&self) -> u8 {
        self.step(EncoderState::ZERO, 1).2
    }

    /// Parity bit of the transition from state 1 back to zero on a 1.
    pub fn remerge_parity(&self) -> u8 {
        self.step(EncoderState(1), 1).2
    }
}

impl fmt::Display for RscCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}",
            self.feedback.to_octal(),
            self.feedforward.to_octal()
        )
    }
}

impl fmt::Debug for RscCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RscCode(feedback {}, feedforward {}, L={})",
            self.feedback.to_octal(),
            self.feedforward.to_octal(),
            self.period
        )
    }
}
