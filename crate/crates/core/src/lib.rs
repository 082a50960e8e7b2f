//! Weight-2 union bound approximation for punctured turbo codes (PCCCs).
//!
//! The crate computes the conditional weight enumerating function (CWEF) of a
//! punctured rate-1/2 recursive systematic convolutional (RSC) code for input
//! weight two in closed form, combines two constituent codes through the
//! uniform interleaver, and evaluates the dominant term `P(2)` of the ML union
//! bound on the bit error probability over an AWGN channel.
//!
//! Module map:
//!
//! - [`poly`]: GF(2) polynomials, primitivity, periods and m-sequences.
//! - [`encoder`]: the RSC state machine and its weight-2 impulse response.
//! - [`puncture`]: puncturing rows, pseudo-random patterns, rates and
//!   catastrophic-pattern classification.
//! - [`cwef`]: closed-form weight-2 enumerators and minimum weights.
//! - [`pccc`]: uniform-interleaver combination, IOWEF slices, the Q-function
//!   and union-bound curves.
//! - [`oracle`]: exact trellis dynamic programming and brute-force enumeration
//!   used to validate the closed forms.
//! - [`cli`]: the `pccc-bound` command-line front end.

pub mod cli;
pub mod cwef;
pub mod encoder;
mod error;
pub mod oracle;
pub mod pccc;
pub mod poly;
pub mod puncture;

pub use cwef::{Cwef, MinWeights};
pub use encoder::{EncoderState, RscCode};
pub use error::{Error, Result};
pub use pccc::{BoundCurve, BoundPoint, IowefSlice, PcccConfig, PcccCwef};
pub use poly::BinaryPolynomial;
pub use puncture::{
    Classification, PcccPunctureSet, PseudoVariant, PunctureRow, PuncturingPattern,
};

/// Exact code rate `k/n`.
pub type Rate = num_rational::Ratio<u64>;
