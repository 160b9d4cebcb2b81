pub mod baselines;
pub mod basis;
pub mod bounds;
pub mod codec;
pub mod decomp;
pub mod error;
pub mod imaging;
pub mod linalg;
pub mod sweep;
pub mod synthetic;

pub use baselines::{eckart_young_error, rsvd_fixed_rank, truncated_svd, FixedRankParams};
pub use basis::{basis_ext, numerical_rank, BasisParams, BasisResult, EpsilonMode};
pub use bounds::{expected_error_bound, flop_estimate, is_compressible, storage_cost, BoundInputs};
pub use decomp::{
    diag_deviation_report, eod_abe, eod_abe_detailed, reconstruct, DecompParams, Decomposition,
    UtvFactors,
};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, RngState, SvdTriple};
pub use synthetic::{gen_matrix, GeneratedMatrix, SpectrumKind, SpectrumSpec};
