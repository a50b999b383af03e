//! Linear-algebra operations on Hodge numbers: filtration signatures, sums,
//! Künneth products, Tate twists and involution-invariant parts.

use std::collections::BTreeMap;

use super::structure::{GradedHodgeStructure, Grading, PieceKey, Sign};
use super::HodgeError;

/// Dimensions `f^{p,k} = sum_{p' >= p} h^{p', k-p'}` of the Hodge filtration,
/// listed for `p = 0..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationSignature {
    pub dims: Vec<u64>,
}

impl FiltrationSignature {
    pub fn new(dims: Vec<u64>) -> Result<Self, HodgeError> {
        if dims.is_empty() {
            return Err(HodgeError::InfeasibleSplit("empty signature".into()));
        }
        if dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(HodgeError::InfeasibleSplit(format!("signature {dims:?} is not non-increasing")));
        }
        Ok(Self { dims })
    }

    pub fn weight(&self) -> u32 {
        self.dims.len() as u32 - 1
    }

    pub fn total(&self) -> u64 {
        self.dims[0]
    }

    /// Recovers `h^{p,k-p} = f^p - f^{p+1}`, indexed by `p`.
    pub fn hodge_by_p(&self) -> Vec<u64> {
        let k = self.dims.len();
        (0..k)
            .map(|p| self.dims[p] - if p + 1 < k { self.dims[p + 1] } else { 0 })
            .collect()
    }
}

pub fn signature(hs: &GradedHodgeStructure) -> FiltrationSignature {
    let dims = hs.dims_raw();
    let mut f = vec![0u64; dims.len()];
    let mut acc = 0;
    for p in (0..dims.len()).rev() {
        acc += dims[p];
        f[p] = acc;
    }
    FiltrationSignature { dims: f }
}

pub fn direct_sum(
    a: &GradedHodgeStructure,
    b: &GradedHodgeStructure,
) -> Result<GradedHodgeStructure, HodgeError> {
    if a.weight() != b.weight() {
        return Err(HodgeError::WeightMismatch {
            left: a.weight(),
            right: b.weight(),
        });
    }
    let dims: Vec<u64> = a.dims_raw().iter().zip(b.dims_raw()).map(|(x, y)| x + y).collect();
    let grading = match (a.grading(), b.grading()) {
        (Some(ga), Some(gb)) if ga.modulus == gb.modulus => {
            let mut pieces = ga.pieces.clone();
            for (k, v) in &gb.pieces {
                let e = pieces.entry(*k).or_insert_with(|| vec![0; v.len()]);
                for (x, y) in e.iter_mut().zip(v) {
                    *x += y;
                }
            }
            Some(Grading {
                modulus: ga.modulus,
                pieces,
            })
        }
        (Some(g), _) if b.is_zero() => Some(g.clone()),
        (_, Some(g)) if a.is_zero() => Some(g.clone()),
        _ => None,
    };
    GradedHodgeStructure::from_parts(a.weight(), dims, grading)
}

/// Direct sum of a list of structures of equal weight.
pub fn direct_sum_all<'a, I>(weight: u32, items: I) -> Result<GradedHodgeStructure, HodgeError>
where
    I: IntoIterator<Item = &'a GradedHodgeStructure>,
{
    let mut acc = GradedHodgeStructure::zero(weight);
    for hs in items {
        acc = direct_sum(&acc, hs)?;
    }
    Ok(acc)
}

/// Künneth tensor product: `h^{r,s} = sum h^{p,q}(a) h^{p',q'}(b)`.
///
/// Gradings multiply (characters add mod `m`, signs multiply) when both
/// factors are graded with the same modulus.
pub fn tensor(
    a: &GradedHodgeStructure,
    b: &GradedHodgeStructure,
) -> Result<GradedHodgeStructure, HodgeError> {
    let w = a.weight() + b.weight();
    let dims = convolve(a.dims_raw(), b.dims_raw());
    let grading = match (a.grading(), b.grading()) {
        (Some(ga), Some(gb)) => {
            if ga.modulus != gb.modulus {
                return Err(HodgeError::GradingIncompatible {
                    left: ga.modulus,
                    right: gb.modulus,
                });
            }
            let m = ga.modulus;
            let mut pieces: BTreeMap<PieceKey, Vec<u64>> = BTreeMap::new();
            for (ka, va) in &ga.pieces {
                for (kb, vb) in &gb.pieces {
                    let key = PieceKey::new((ka.character + kb.character) % m, ka.sign.mul(kb.sign));
                    let prod = convolve(va, vb);
                    let e = pieces.entry(key).or_insert_with(|| vec![0; w as usize + 1]);
                    for (x, y) in e.iter_mut().zip(&prod) {
                        *x += y;
                    }
                }
            }
            let mut g = Grading { modulus: m, pieces };
            g.pieces.retain(|_, v| v.iter().any(|&h| h != 0));
            Some(g)
        }
        _ => None,
    };
    GradedHodgeStructure::from_parts(w, dims, grading)
}

fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Tate twist `(-n)` in the bidegree-shift convention: `h^{p,q} -> h^{p+n,q+n}`.
pub fn tate_twist(a: &GradedHodgeStructure, n: i32) -> Result<GradedHodgeStructure, HodgeError> {
    let new_weight = a.weight() as i64 + 2 * n as i64;
    let shift = |v: &[u64]| -> Result<Vec<u64>, HodgeError> {
        let mut out = vec![0u64; new_weight.max(0) as usize + 1];
        for (p, &h) in v.iter().enumerate() {
            if h == 0 {
                continue;
            }
            let np = p as i64 + n as i64;
            let nq = (v.len() - 1 - p) as i64 + n as i64;
            if np < 0 || nq < 0 {
                return Err(HodgeError::NegativeBidegree { p: np, q: nq });
            }
            out[np as usize] = h;
        }
        Ok(out)
    };
    if new_weight < 0 {
        if a.is_zero() {
            return Err(HodgeError::NegativeBidegree { p: n as i64, q: n as i64 });
        }
        // Any nonzero class would land in negative bidegree.
        let (p, q, _) = a.entries()[0];
        return Err(HodgeError::NegativeBidegree {
            p: p as i64 + n as i64,
            q: q as i64 + n as i64,
        });
    }
    let dims = shift(a.dims_raw())?;
    let grading = match a.grading() {
        Some(g) => {
            let mut pieces = BTreeMap::new();
            for (k, v) in &g.pieces {
                pieces.insert(*k, shift(v)?);
            }
            Some(Grading {
                modulus: g.modulus,
                pieces,
            })
        }
        None => None,
    };
    GradedHodgeStructure::from_parts(new_weight as u32, dims, grading)
}

/// Involution-invariant part of `a ⊗ b` under `I_a × I_b`:
/// `(a^+ ⊗ b^+) ⊕ (a^- ⊗ b^-)`.
///
/// The residual involution on the result is the one induced by `I_a × Id`,
/// so `a^s ⊗ b^s` keeps the sign `s` of the first factor.
pub fn invariant_part_of_product(
    a: &GradedHodgeStructure,
    b: &GradedHodgeStructure,
) -> Result<GradedHodgeStructure, HodgeError> {
    let w = a.weight() + b.weight();
    let mut out = GradedHodgeStructure::zero(w).with_uniform_sign(Sign::Plus);
    for sign in [Sign::Plus, Sign::Minus] {
        let pa = a.sign_part(sign)?.without_grading();
        let pb = b.sign_part(sign)?.without_grading();
        let term = tensor(&pa, &pb)?.with_uniform_sign(sign);
        out = direct_sum(&out, &term)?;
    }
    Ok(out)
}

/// Summary of a dimension-level split of a filtration over a subfield.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    /// Hodge numbers of each summand, indexed by `p`.
    pub summand_hodge: Vec<Vec<u64>>,
}

/// Checks that a filtration with signature `total` can restrict to the
/// given summands: `f^p(total) = sum_i f^p(summand_i)` for every `p`, each
/// summand signature non-increasing and Hodge-symmetric.
pub fn direct_summand_descent_dims(
    total: &FiltrationSignature,
    summands: &[FiltrationSignature],
) -> Result<SplitReport, HodgeError> {
    let k = total.dims.len();
    let mut sum = vec![0u64; k];
    let mut report = SplitReport {
        summand_hodge: Vec::with_capacity(summands.len()),
    };
    for (i, s) in summands.iter().enumerate() {
        if s.dims.len() != k {
            return Err(HodgeError::InfeasibleSplit(format!(
                "summand {i} has weight {} but the total has weight {}",
                s.weight(),
                total.weight()
            )));
        }
        if s.dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(HodgeError::InfeasibleSplit(format!("summand {i} signature is not non-increasing")));
        }
        let h = s.hodge_by_p();
        if (0..k).any(|p| h[p] != h[k - 1 - p]) {
            return Err(HodgeError::InfeasibleSplit(format!(
                "summand {i} signature {:?} violates Hodge symmetry",
                s.dims
            )));
        }
        for (acc, f) in sum.iter_mut().zip(&s.dims) {
            *acc += f;
        }
        report.summand_hodge.push(h);
    }
    if sum != total.dims {
        return Err(HodgeError::InfeasibleSplit(format!(
            "summand signatures add to {sum:?}, expected {:?}",
            total.dims
        )));
    }
    Ok(report)
}
