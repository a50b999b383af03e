//! Full cohomology of a compact Kähler manifold at the level of Hodge numbers.

use std::collections::BTreeMap;

use super::ops::{direct_sum, direct_sum_all, tate_twist, tensor};
use super::structure::{GradedHodgeStructure, Grading, PieceKey, Sign};
use super::HodgeError;

/// Hodge data of `H^0 .. H^n` of an `n`-dimensional variety. Degrees above
/// `n` are derived by Poincaré duality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeDiamondFamily {
    dim: u32,
    levels: Vec<GradedHodgeStructure>,
    connected: bool,
}

impl HodgeDiamondFamily {
    /// `levels[k]` must have weight `k` for `k = 0..=dim`.
    pub fn new(dim: u32, levels: Vec<GradedHodgeStructure>, connected: bool) -> Result<Self, HodgeError> {
        if levels.len() != dim as usize + 1 {
            return Err(HodgeError::GradingMismatch(format!(
                "a {dim}-dimensional family needs {} levels, got {}",
                dim + 1,
                levels.len()
            )));
        }
        for (k, l) in levels.iter().enumerate() {
            if l.weight() != k as u32 {
                return Err(HodgeError::WeightMismatch {
                    left: k as u32,
                    right: l.weight(),
                });
            }
        }
        if connected && levels[0].h(0, 0) != 1 {
            return Err(HodgeError::NotConnected(levels[0].h(0, 0)));
        }
        Ok(Self { dim, levels, connected })
    }

    /// Builds a family from Hodge-number rows `h^{k,0}, ..., h^{0,k}` for
    /// `k = 0..=dim`. Connectedness is read off `h^{0,0} = 1`.
    pub fn from_rows(dim: u32, rows: &[&[u64]]) -> Result<Self, HodgeError> {
        let levels = rows
            .iter()
            .enumerate()
            .map(|(k, r)| GradedHodgeStructure::from_hodge_numbers(k as u32, r))
            .collect::<Result<Vec<_>, _>>()?;
        let connected = levels.first().is_some_and(|l| l.h(0, 0) == 1);
        Self::new(dim, levels, connected)
    }

    /// The empty variety of dimension `dim` (all cohomology zero).
    pub fn empty(dim: u32) -> Self {
        Self {
            dim,
            levels: (0..=dim).map(GradedHodgeStructure::zero).collect(),
            connected: false,
        }
    }

    /// `count` disjoint points.
    pub fn points(count: u64) -> Self {
        let h0 = GradedHodgeStructure::from_hodge_numbers(0, &[count]).expect("weight 0 is symmetric");
        Self {
            dim: 0,
            levels: vec![h0],
            connected: count == 1,
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(GradedHodgeStructure::is_zero)
    }

    /// Stored levels `H^0 .. H^dim`.
    pub fn stored_levels(&self) -> &[GradedHodgeStructure] {
        &self.levels
    }

    /// `H^k` for `0 <= k <= 2 dim`; zero outside that range.
    ///
    /// Above the middle degree: `h^{p,q}(k) = h^{n-p,n-q}(2n-k)`; graded
    /// pieces pair character `j` with `m - j` and keep their sign.
    pub fn level(&self, k: u32) -> GradedHodgeStructure {
        let n = self.dim;
        if k <= n {
            return self.levels[k as usize].clone();
        }
        if k > 2 * n {
            return GradedHodgeStructure::zero(k);
        }
        let src = &self.levels[(2 * n - k) as usize];
        let w = k as usize;
        let dual = |v: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; w + 1];
            for (p, &h) in v.iter().enumerate() {
                if h != 0 {
                    out[n as usize - (v.len() - 1 - p)] = h;
                }
            }
            out
        };
        // p' = n - q_src keeps p' + q' = k; equivalently dual of (n-p, n-q).
        let dims = dual(src.dims_raw());
        let grading = src.grading().map(|g| {
            let m = g.modulus;
            let pieces: BTreeMap<PieceKey, Vec<u64>> = g
                .pieces
                .iter()
                .map(|(key, v)| {
                    // Dual of piece j at (n-p', n-q') is piece m-j; swapping via
                    // conjugation returns to character j at (n-q', n-p').
                    (*key, dual(v))
                })
                .collect();
            Grading { modulus: m, pieces }
        });
        GradedHodgeStructure::from_parts(k, dims, grading).expect("duality preserves validity")
    }

    /// All levels `H^0 .. H^{2n}`.
    pub fn all_levels(&self) -> Vec<GradedHodgeStructure> {
        (0..=2 * self.dim).map(|k| self.level(k)).collect()
    }

    pub fn betti(&self, k: u32) -> u64 {
        self.level(k).dimension()
    }

    pub fn betti_numbers(&self) -> Vec<u64> {
        (0..=2 * self.dim).map(|k| self.betti(k)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti_numbers()
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// `h^{p,q}` of the whole diamond.
    pub fn h(&self, p: u32, q: u32) -> u64 {
        self.level(p + q).h(p, q)
    }

    /// Künneth product `X × Y`.
    pub fn product(&self, other: &Self) -> Result<Self, HodgeError> {
        let dim = self.dim + other.dim;
        let mut levels = Vec::with_capacity(dim as usize + 1);
        for k in 0..=dim {
            let mut acc = GradedHodgeStructure::zero(k);
            for r in 0..=k {
                let term = tensor(&self.level(r), &other.level(k - r))?;
                acc = direct_sum(&acc, &term)?;
            }
            levels.push(acc);
        }
        Ok(Self {
            dim,
            levels,
            connected: self.connected && other.connected,
        })
    }

    /// Restricts every level to the pieces of one involution sign.
    pub fn sign_part(&self, sign: Sign) -> Result<Self, HodgeError> {
        let levels = self
            .levels
            .iter()
            .map(|l| l.sign_part(sign))
            .collect::<Result<Vec<_>, _>>()?;
        let connected = levels[0].h(0, 0) == 1 && self.connected;
        Ok(Self {
            dim: self.dim,
            levels,
            connected,
        })
    }

    /// Replaces all gradings by a single involution sign.
    pub fn with_uniform_sign(&self, sign: Sign) -> Self {
        Self {
            dim: self.dim,
            levels: self
                .levels
                .iter()
                .map(|l| l.without_grading().with_uniform_sign(sign))
                .collect(),
            connected: self.connected,
        }
    }

    pub fn without_grading(&self) -> Self {
        Self {
            dim: self.dim,
            levels: self.levels.iter().map(GradedHodgeStructure::without_grading).collect(),
            connected: self.connected,
        }
    }

    /// Disjoint union of two varieties of equal dimension.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, HodgeError> {
        if self.dim != other.dim {
            return Err(HodgeError::WeightMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| direct_sum(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let connected = levels[0].h(0, 0) == 1;
        Ok(Self {
            dim: self.dim,
            levels,
            connected,
        })
    }
}

/// Cohomology of the blow-up of `x` along a codimension-2 smooth centre `z`:
/// `H^k(X̂) = H^k(X) ⊕ H^{k-2}(Z)(-1)`.
pub fn blowup_cohomology(
    x: &HodgeDiamondFamily,
    z: &HodgeDiamondFamily,
) -> Result<HodgeDiamondFamily, HodgeError> {
    if z.is_empty() {
        return Ok(x.clone());
    }
    if z.dim + 2 != x.dim {
        return Err(HodgeError::CodimUnsupported {
            ambient: x.dim,
            centre: z.dim,
        });
    }
    let mut levels = Vec::with_capacity(x.dim as usize + 1);
    for k in 0..=x.dim {
        let base = x.level(k);
        let lvl = if k >= 2 {
            let exc = tate_twist(&z.level(k - 2), 1)?;
            direct_sum(&base, &exc)?
        } else {
            base
        };
        levels.push(lvl);
    }
    HodgeDiamondFamily::new(x.dim, levels, x.connected)
}

/// Primitive pieces `P^k`, `k = 0..=n`, of a connected projective variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDecomposition {
    pub dim: u32,
    pub pieces: Vec<GradedHodgeStructure>,
}

impl PrimitiveDecomposition {
    /// Rebuilds `H^k = ⊕_r L^r P^{k-2r}` for `k = 0..=n`.
    pub fn reassemble(&self) -> Result<HodgeDiamondFamily, HodgeError> {
        let mut levels = Vec::with_capacity(self.dim as usize + 1);
        for k in 0..=self.dim {
            let terms = (0..=k / 2)
                .map(|r| tate_twist(&self.pieces[(k - 2 * r) as usize], r as i32))
                .collect::<Result<Vec<_>, _>>()?;
            levels.push(direct_sum_all(k, terms.iter())?);
        }
        let connected = levels[0].h(0, 0) == 1;
        HodgeDiamondFamily::new(self.dim, levels, connected)
    }
}

/// Dimension-level Lefschetz decomposition:
/// `h_P^{p,q}(k) = h^{p,q}(k) - h^{p-1,q-1}(k-2)` for `k <= n`.
pub fn primitive_part(family: &HodgeDiamondFamily) -> Result<PrimitiveDecomposition, HodgeError> {
    let mut pieces = Vec::with_capacity(family.dim as usize + 1);
    for k in 0..=family.dim {
        let cur = family.level(k);
        if k < 2 {
            pieces.push(cur);
            continue;
        }
        let prev = family.level(k - 2);
        let sub = |a: &[u64], b: &[u64]| -> Result<Vec<u64>, HodgeError> {
            let mut out = a.to_vec();
            for (p, &h) in b.iter().enumerate() {
                let target = p + 1;
                out[target] = out[target].checked_sub(h).ok_or(HodgeError::HardLefschetzViolation {
                    degree: k,
                    p: target as u32,
                })?;
            }
            Ok(out)
        };
        let dims = sub(cur.dims_raw(), prev.dims_raw())?;
        let grading = match (cur.grading(), prev.grading()) {
            (Some(gc), Some(gp)) if gc.modulus == gp.modulus => {
                let mut pieces_map = gc.pieces.clone();
                for (key, v) in &gp.pieces {
                    let base = pieces_map
                        .get(key)
                        .cloned()
                        .unwrap_or_else(|| vec![0; k as usize + 1]);
                    pieces_map.insert(*key, sub(&base, v)?);
                }
                pieces_map.retain(|_, v| v.iter().any(|&h| h != 0));
                Some(Grading {
                    modulus: gc.modulus,
                    pieces: pieces_map,
                })
            }
            _ => None,
        };
        pieces.push(GradedHodgeStructure::from_parts(k, dims, grading)?);
    }
    Ok(PrimitiveDecomposition {
        dim: family.dim,
        pieces,
    })
}
