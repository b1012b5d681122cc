//! Low-complexity LP (LCLP) decoding of nonbinary LDPC codes over small
//! rings and fields.
//!
//! The crate provides two iterative decoders that maximize the dual of the
//! nonbinary LP decoding relaxation:
//!
//! * [`BasicDecoder`] — cyclic per-edge block-coordinate ascent on the
//!   (optionally softened) dual, with check-node marginals computed by a
//!   forward/backward sweep over the partial-syndrome trellis of each
//!   single parity-check row.
//! * [`SubgradDecoder`] — node-by-node incremental subgradient ascent,
//!   with check-node subgradients obtained by a Viterbi search on the same
//!   trellis and a configurable step-size schedule.
//!
//! Supporting machinery: ring/field arithmetic tables ([`algebra`]), sparse
//! parity-check storage and Tanner-graph index sets ([`code`]), q-ary PSK
//! modulation and AWGN log-likelihood ratios ([`channel`]), brute-force
//! reference implementations for testing ([`oracle`]), and a deterministic
//! Monte-Carlo frame-error-rate harness ([`sim`]).

pub mod algebra;
pub mod channel;
pub mod code;
pub mod lclp_basic;
pub mod lclp_subgrad;
pub mod oracle;
pub mod selftest;
pub mod semiring;
pub mod sim;
pub mod trellis;

mod error;

pub use algebra::{RingKind, RingSpec};
pub use channel::{LlrMatrix, Modulation};
pub use code::{ParityCheckMatrix, TannerGraph};
pub use error::{Error, Result};
pub use lclp_basic::{
    BasicConfig, BasicDecoder, DecodeResult, DecodeStatus, DualState, IntervalPick, OpCounts,
    Workspace,
};
pub use lclp_subgrad::{StepRule, StepSchedule, SubgradConfig, SubgradDecoder};
pub use semiring::Kappa;
pub use sim::{CodewordSource, DecoderChoice, SimConfig, SimPoint};
pub use trellis::{RowMarginals, SpcTrellis, TrellisMetrics};
