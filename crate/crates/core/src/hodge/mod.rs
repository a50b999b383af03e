//! Exact dimension-level calculus of rational Hodge structures.

mod cm;
mod family;
mod json;
mod ops;
mod structure;

pub use cm::{cm_propagate, CmExpr, CmRule, CmState, CmStatus, CmStep};
pub use family::{blowup_cohomology, primitive_part, HodgeDiamondFamily, PrimitiveDecomposition};
pub use ops::{
    direct_sum, direct_sum_all, direct_summand_descent_dims, invariant_part_of_product, signature, tate_twist,
    tensor, FiltrationSignature, SplitReport,
};
pub use structure::{GradedHodgeStructure, Grading, PieceKey, Sign};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("Hodge symmetry violated: h^{{{p},{q}}} = {h_pq} but h^{{{q},{p}}} = {h_qp}")]
    SymmetryViolation { p: u32, q: u32, h_pq: u64, h_qp: u64 },
    #[error("bidegree ({p},{q}) does not have weight {weight}")]
    BadBidegree { p: u32, q: u32, weight: u32 },
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("gradings have different moduli {left} and {right}")]
    GradingIncompatible { left: u32, right: u32 },
    #[error("weights differ: {left} vs {right}")]
    WeightMismatch { left: u32, right: u32 },
    #[error("twist produces negative bidegree ({p},{q})")]
    NegativeBidegree { p: i64, q: i64 },
    #[error("blow-up centre of dimension {centre} in a {ambient}-fold is not of codimension 2")]
    CodimUnsupported { ambient: u32, centre: u32 },
    #[error("hard Lefschetz violated in degree {degree} at p = {p}")]
    HardLefschetzViolation { degree: u32, p: u32 },
    #[error("infeasible split: {0}")]
    InfeasibleSplit(String),
    #[error("involution sign data missing")]
    MissingSignData,
    #[error("family flagged connected but h^{{0,0}} = {0}")]
    NotConnected(u64),
}
