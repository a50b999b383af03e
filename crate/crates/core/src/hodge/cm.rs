//! Propagation of the complex-multiplication flag through sums, tensor
//! products and Tate twists.
//!
//! Rules:
//! - a structure concentrated in one bidegree `(p,p)` (or zero) is CM;
//! - a direct sum is CM iff every summand is;
//! - a tensor product is CM iff every factor is;
//! - a Tate twist leaves the flag unchanged.
//!
//! With the order `NotCm < Unknown < Cm`, sums and tensors take the minimum
//! of their inputs, which makes propagation monotone in the leaves.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ops::{direct_sum, tate_twist, tensor};
use super::structure::GradedHodgeStructure;
use super::HodgeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CmState {
    #[serde(rename = "not-CM")]
    NotCm,
    #[serde(rename = "unknown")]
    Unknown,
    #[serde(rename = "CM")]
    Cm,
}

impl CmState {
    pub fn as_str(self) -> &'static str {
        match self {
            CmState::Cm => "CM",
            CmState::NotCm => "not-CM",
            CmState::Unknown => "unknown",
        }
    }
}

impl fmt::Display for CmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmRule {
    Leaf,
    Sum,
    Tensor,
    Twist,
    #[serde(rename = "bidegree-(p,p)")]
    PpConcentrated,
}

impl CmRule {
    pub fn as_str(self) -> &'static str {
        match self {
            CmRule::Leaf => "leaf",
            CmRule::Sum => "sum",
            CmRule::Tensor => "tensor",
            CmRule::Twist => "twist",
            CmRule::PpConcentrated => "bidegree-(p,p)",
        }
    }
}

/// One evaluated node of a composition tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmStep {
    pub rule: CmRule,
    pub label: String,
    pub state: CmState,
}

/// CM flag with the list of rules that produced it (post-order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmStatus {
    pub state: CmState,
    pub provenance: Vec<CmStep>,
}

impl CmStatus {
    /// A caller-asserted flag.
    pub fn asserted(state: CmState, label: impl Into<String>) -> Self {
        Self {
            state,
            provenance: vec![CmStep {
                rule: CmRule::Leaf,
                label: label.into(),
                state,
            }],
        }
    }

    pub fn unknown() -> Self {
        Self {
            state: CmState::Unknown,
            provenance: Vec::new(),
        }
    }

    /// The deepest-first steps that reported `NotCm`.
    pub fn not_cm_sources(&self) -> Vec<&CmStep> {
        self.provenance.iter().filter(|s| s.state == CmState::NotCm).collect()
    }
}

/// Composition tree over leaves with asserted CM flags.
#[derive(Debug, Clone)]
pub enum CmExpr {
    Leaf {
        label: String,
        hodge: GradedHodgeStructure,
        asserted: CmState,
    },
    Sum {
        label: String,
        terms: Vec<CmExpr>,
    },
    Tensor {
        label: String,
        factors: Vec<CmExpr>,
    },
    Twist {
        inner: Box<CmExpr>,
        shift: i32,
    },
}

impl CmExpr {
    pub fn leaf(label: impl Into<String>, hodge: GradedHodgeStructure, asserted: CmState) -> Self {
        CmExpr::Leaf {
            label: label.into(),
            hodge,
            asserted,
        }
    }

    pub fn sum(label: impl Into<String>, terms: Vec<CmExpr>) -> Self {
        CmExpr::Sum {
            label: label.into(),
            terms,
        }
    }

    pub fn tensor(label: impl Into<String>, factors: Vec<CmExpr>) -> Self {
        CmExpr::Tensor {
            label: label.into(),
            factors,
        }
    }

    pub fn twist(inner: CmExpr, shift: i32) -> Self {
        CmExpr::Twist {
            inner: Box::new(inner),
            shift,
        }
    }

    fn label(&self) -> String {
        match self {
            CmExpr::Leaf { label, .. } | CmExpr::Sum { label, .. } | CmExpr::Tensor { label, .. } => label.clone(),
            CmExpr::Twist { inner, shift } => format!("{}({})", inner.label(), -shift),
        }
    }

    /// Hodge numbers of the node.
    pub fn structure(&self) -> Result<GradedHodgeStructure, HodgeError> {
        Ok(self.evaluate()?.0)
    }

    fn evaluate(&self) -> Result<(GradedHodgeStructure, CmStatus), HodgeError> {
        let mut provenance = Vec::new();
        let (hs, rule, combined) = match self {
            CmExpr::Leaf { hodge, asserted, .. } => (hodge.clone(), CmRule::Leaf, *asserted),
            CmExpr::Sum { terms, .. } => {
                let mut acc: Option<GradedHodgeStructure> = None;
                let mut state = CmState::Cm;
                for t in terms {
                    let (h, s) = t.evaluate()?;
                    provenance.extend(s.provenance);
                    state = state.min(s.state);
                    acc = Some(match acc {
                        None => h,
                        Some(a) => direct_sum(&a, &h)?,
                    });
                }
                (acc.unwrap_or_else(|| GradedHodgeStructure::zero(0)), CmRule::Sum, state)
            }
            CmExpr::Tensor { factors, .. } => {
                let mut acc = GradedHodgeStructure::unit();
                let mut state = CmState::Cm;
                for t in factors {
                    let (h, s) = t.evaluate()?;
                    provenance.extend(s.provenance);
                    state = state.min(s.state);
                    acc = tensor(&acc.without_grading(), &h.without_grading())?;
                }
                (acc, CmRule::Tensor, state)
            }
            CmExpr::Twist { inner, shift } => {
                let (h, s) = inner.evaluate()?;
                provenance.extend(s.provenance);
                (tate_twist(&h, *shift)?, CmRule::Twist, s.state)
            }
        };
        let (rule, state) = if hs.is_concentrated_pp() {
            (CmRule::PpConcentrated, CmState::Cm)
        } else {
            (rule, combined)
        };
        provenance.push(CmStep {
            rule,
            label: self.label(),
            state,
        });
        Ok((hs, CmStatus { state, provenance }))
    }
}

/// Evaluates the CM flag at the root of `expr`.
pub fn cm_propagate(expr: &CmExpr) -> Result<CmStatus, HodgeError> {
    Ok(expr.evaluate()?.1)
}
