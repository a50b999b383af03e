//! Eigenspace bookkeeping for cyclic covers of `P^1`, Fermat curves and the
//! iterated cyclic-cover (Viehweg-Zuo) surfaces and threefolds.
//!
//! Index convention: `h^{1,0}_j = -1 + sum_i <j d_i / m>`, so the Fermat
//! curve of degree `m` has `h^{1,0}_j = j - 1`. The values `r_n` tabulated
//! in the classical references are `h^{1,0}_{m-n}` here.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hodge::{direct_sum, tate_twist, GradedHodgeStructure, HodgeError, PieceKey, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("degenerate cover: {0}")]
    DegenerateSpec(String),
    #[error("eigenspace index convention mismatch: core has h^{{2,0}} = {h20}, expected 1")]
    ConventionMismatch { h20: u64 },
    #[error("eigen tables have different degrees {left} and {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("surface data carries no Z/m grading")]
    MissingGrading,
    #[error("correction {c} would make h^{{1,1}} negative")]
    InvalidCorrection { c: i64 },
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}

/// `y^m = prod (x - a_i)^{d_i}` with the point at infinity included among
/// the branch points, so that `sum d_i ≡ 0 (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicCoverSpec {
    pub m: u32,
    pub branch_exponents: Vec<u32>,
}

impl CyclicCoverSpec {
    pub fn new(m: u32, branch_exponents: Vec<u32>) -> Result<Self, CoverError> {
        if m < 2 {
            return Err(CoverError::DegenerateSpec(format!("degree {m} < 2")));
        }
        if let Some(&d) = branch_exponents.iter().find(|&&d| d == 0 || d > m) {
            return Err(CoverError::DegenerateSpec(format!("exponent {d} outside 1..={m}")));
        }
        let total: u64 = branch_exponents.iter().map(|&d| d as u64).sum();
        if !total.is_multiple_of(m as u64) {
            return Err(CoverError::DegenerateSpec(format!(
                "exponents sum to {total}, not divisible by {m}"
            )));
        }
        let effective = branch_exponents.iter().filter(|&&d| d % m != 0).count();
        if effective < 3 {
            return Err(CoverError::DegenerateSpec(format!(
                "{effective} effective branch points, need at least 3"
            )));
        }
        let g = branch_exponents.iter().fold(m, |g, &d| g.gcd(&d));
        if g != 1 {
            return Err(CoverError::DegenerateSpec(format!(
                "exponents share the factor {g} with m, the cover is disconnected"
            )));
        }
        Ok(Self { m, branch_exponents })
    }

    /// Riemann-Hurwitz: `2g - 2 = -2m + sum (m - gcd(m, d_i))`.
    pub fn riemann_hurwitz_genus(&self) -> u64 {
        let m = self.m as i64;
        let ram: i64 = self
            .branch_exponents
            .iter()
            .map(|&d| m - m.gcd(&(d as i64)))
            .sum();
        ((2 - 2 * m + ram) / 2) as u64
    }
}

/// `(h^{1,0}_j, h^{0,1}_j)` for `j = 1..m-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenTable {
    pub m: u32,
    /// `rows[j - 1] = (h^{1,0}_j, h^{0,1}_j)`.
    pub rows: Vec<(u64, u64)>,
}

impl EigenTable {
    pub fn h10(&self, j: u32) -> u64 {
        self.row(j).0
    }

    pub fn h01(&self, j: u32) -> u64 {
        self.row(j).1
    }

    fn row(&self, j: u32) -> (u64, u64) {
        let j = j % self.m;
        if j == 0 {
            (0, 0)
        } else {
            self.rows[j as usize - 1]
        }
    }

    pub fn genus(&self) -> u64 {
        self.rows.iter().map(|r| r.0).sum()
    }

    /// Values `r_n = h^{1,0}_{m-n}` for `n = 1..m-1`.
    pub fn r_values(&self) -> Vec<u64> {
        (1..self.m).map(|n| self.h10(self.m - n)).collect()
    }

    /// Whole `H^1` with its `Z/m` grading.
    pub fn to_graded(&self) -> Result<GradedHodgeStructure, HodgeError> {
        let g = self.genus();
        let mut pieces = Vec::new();
        for j in 1..self.m {
            if self.h10(j) > 0 {
                pieces.push((j, Sign::None, 1, 0, self.h10(j)));
            }
            if self.h01(j) > 0 {
                pieces.push((j, Sign::None, 0, 1, self.h01(j)));
            }
        }
        GradedHodgeStructure::new(1, &[(1, 0, g), (0, 1, g)], Some((self.m, &pieces)))
    }
}

/// Chevalley-Weil count `h^{1,0}_j = -1 + sum_i <j d_i / m>`.
pub fn eigen_dims_cyclic_cover(spec: &CyclicCoverSpec) -> Result<EigenTable, CoverError> {
    let spec = CyclicCoverSpec::new(spec.m, spec.branch_exponents.clone())?;
    let m = spec.m as u64;
    let h10 = |j: u64| -> u64 {
        // sum of fractional parts, times m; always a multiple of m.
        let s: u64 = spec.branch_exponents.iter().map(|&d| (j * d as u64) % m).sum();
        (s / m).saturating_sub(1)
    };
    let rows: Vec<(u64, u64)> = (1..m).map(|j| (h10(j), h10(m - j))).collect();
    let table = EigenTable { m: spec.m, rows };
    let rh = spec.riemann_hurwitz_genus();
    if table.genus() != rh {
        return Err(CoverError::DegenerateSpec(format!(
            "eigenspace total {} disagrees with Riemann-Hurwitz genus {rh}",
            table.genus()
        )));
    }
    Ok(table)
}

/// Fermat curve of degree `m`, as the cover `w^m = prod_{i=1}^m (z - ε_i)`.
pub fn fermat_curve_eigen(m: u32) -> Result<EigenTable, CoverError> {
    if m < 3 {
        return Err(CoverError::DegenerateSpec(format!("Fermat curve needs m >= 3, got {m}")));
    }
    eigen_dims_cyclic_cover(&CyclicCoverSpec::new(m, vec![1; m as usize])?)
}

/// The curve `y^m = x(x-1)(x-a_1)...(x-a_n)` of the first tower step, with
/// the matching exponent at infinity.
pub fn vz_base_curve(m: u32, n: u32) -> Result<EigenTable, CoverError> {
    let finite = n + 2;
    let mut d = vec![1; finite as usize];
    let r = finite % m;
    d.push(if r == 0 { m } else { m - r });
    eigen_dims_cyclic_cover(&CyclicCoverSpec::new(m, d)?)
}

/// Contribution of `H^1_i ⊗ H^1_{m-i}` to the surface core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTerm {
    pub i: u32,
    /// `(h^{2,0}, h^{1,1}, h^{0,2})`.
    pub hodge: [u64; 3],
}

/// `⊕_{i=1}^{m-1} H^1_i(base) ⊗ H^1_{m-i}(fermat)` with an unresolved
/// `(1,1)` correction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VzSurface {
    pub core: GradedHodgeStructure,
    pub terms: Vec<SurfaceTerm>,
}

impl VzSurface {
    /// Correction `c` on the `(1,1)` slot that brings `b_2` to `target_b2`.
    pub fn correction_for(&self, target_b2: u64) -> i64 {
        target_b2 as i64 - self.core.dimension() as i64
    }

    /// Core with `c` added to `h^{1,1}`.
    pub fn with_correction(&self, c: i64) -> Result<GradedHodgeStructure, CoverError> {
        let h11 = self.core.h(1, 1) as i64 + c;
        if h11 < 0 {
            return Err(CoverError::InvalidCorrection { c });
        }
        Ok(GradedHodgeStructure::from_hodge_numbers(
            2,
            &[self.core.h(2, 0), h11 as u64, self.core.h(0, 2)],
        )?)
    }

    /// Resolves the correction against a target diamond's `b_2`.
    pub fn resolve(&self, target_b2: u64) -> Result<(i64, GradedHodgeStructure), CoverError> {
        let c = self.correction_for(target_b2);
        Ok((c, self.with_correction(c)?))
    }
}

pub fn vz_surface_assemble(base: &EigenTable, fermat: &EigenTable) -> Result<VzSurface, CoverError> {
    if base.m != fermat.m {
        return Err(CoverError::ModulusMismatch {
            left: base.m,
            right: fermat.m,
        });
    }
    let m = base.m;
    let mut terms = Vec::with_capacity(m as usize - 1);
    let mut total = [0u64; 3];
    for i in 1..m {
        let (a10, a01) = (base.h10(i), base.h01(i));
        let (b10, b01) = (fermat.h10(m - i), fermat.h01(m - i));
        let hodge = [a10 * b10, a10 * b01 + a01 * b10, a01 * b01];
        for (t, h) in total.iter_mut().zip(hodge) {
            *t += h;
        }
        terms.push(SurfaceTerm { i, hodge });
    }
    if total[0] != 1 {
        return Err(CoverError::ConventionMismatch { h20: total[0] });
    }
    let core = GradedHodgeStructure::from_hodge_numbers(2, &total)?;
    Ok(VzSurface { core, terms })
}

/// Middle cohomology of `y^m + G(x_0, ..., x_{N-1}) = 0` in `P^N`, graded by
/// the characters of `y ↦ ζ_m y`, from the Jacobian ring
/// `C[x]/(x_i^{m-1}) ⊗ C[y]/(y^{m-1})`.
///
/// The monomial `y^e x^A` of degree `(q+1)m - N - 1` contributes to
/// `H^{N-1-q,q}` in character `m - 1 - e`; the hyperplane power (for even
/// `N - 1`) has character 0.
pub fn jacobian_graded_hypersurface(m: u32, ambient: u32) -> Result<GradedHodgeStructure, CoverError> {
    if m < 2 || ambient < 2 {
        return Err(CoverError::DegenerateSpec(format!(
            "need degree >= 2 and ambient dimension >= 2, got ({m}, {ambient})"
        )));
    }
    let w = ambient - 1;
    let x_series = truncated_power(m - 2, ambient);
    let mut pieces = Vec::new();
    let mut totals = vec![0u64; w as usize + 1];
    for q in 0..=w {
        let deg = (q as i64 + 1) * m as i64 - ambient as i64 - 1;
        for e in 0..=(m as i64 - 2) {
            let rest = deg - e;
            if rest < 0 || rest as usize >= x_series.len() {
                continue;
            }
            let h = x_series[rest as usize];
            if h > 0 {
                let j = m - 1 - e as u32;
                pieces.push((j, Sign::None, w - q, q, h));
                totals[q as usize] += h;
            }
        }
    }
    if w.is_multiple_of(2) {
        pieces.push((0, Sign::None, w / 2, w / 2, 1));
        totals[w as usize / 2] += 1;
    }
    let dims: Vec<(u32, u32, u64)> = (0..=w).map(|q| (w - q, q, totals[q as usize])).collect();
    Ok(GradedHodgeStructure::new(w, &dims, Some((m, &pieces)))?)
}

/// Coefficients of `(1 + t + ... + t^top)^count`.
fn truncated_power(top: u32, count: u32) -> Vec<u64> {
    let mut poly = vec![1u64];
    for _ in 0..count {
        let mut next = vec![0u64; poly.len() + top as usize];
        for (i, &c) in poly.iter().enumerate() {
            for k in 0..=top as usize {
                next[i + k] += c;
            }
        }
        poly = next;
    }
    poly
}

/// Middle Hodge numbers `h^{N-1,0}, ..., h^{0,N-1}` of a smooth degree-`d`
/// hypersurface in `P^N`.
pub fn hypersurface_hodge_oracle(degree: u32, ambient: u32) -> Vec<u64> {
    let w = ambient.saturating_sub(1);
    let series = truncated_power(degree.saturating_sub(2), ambient + 1);
    (0..=w)
        .map(|q| {
            let deg = (q as i64 + 1) * degree as i64 - ambient as i64 - 1;
            let mut h = if deg >= 0 && (deg as usize) < series.len() {
                series[deg as usize]
            } else {
                0
            };
            if w.is_multiple_of(2) && 2 * q == w {
                h += 1;
            }
            h
        })
        .collect()
}

/// `⊕_{i=1}^{m-1} H^2_i ⊗ H^1(fermat)_{m-i} ⊕ (m-1)·H^1(base)(-1)`.
pub fn vz_threefold_assemble(
    surface_graded: &GradedHodgeStructure,
    fermat: &EigenTable,
    base_curve: &EigenTable,
) -> Result<GradedHodgeStructure, CoverError> {
    let g = surface_graded.grading().ok_or(CoverError::MissingGrading)?;
    if g.pieces().next().is_none() {
        return Err(CoverError::MissingGrading);
    }
    let m = g.modulus();
    if m != fermat.m {
        return Err(CoverError::ModulusMismatch {
            left: m,
            right: fermat.m,
        });
    }
    let mut dims = [0u64; 4];
    for i in 1..m {
        let s = surface_graded.piece_numbers(PieceKey::new(i, Sign::None));
        let (b10, b01) = (fermat.h10(m - i), fermat.h01(m - i));
        // s = (h^{2,0}, h^{1,1}, h^{0,2}) of the piece.
        dims[0] += s[0] * b10;
        dims[1] += s[0] * b01 + s[1] * b10;
        dims[2] += s[1] * b01 + s[2] * b10;
        dims[3] += s[2] * b01;
    }
    let core = GradedHodgeStructure::from_hodge_numbers(3, &dims)?;
    let curve = GradedHodgeStructure::from_hodge_numbers(1, &[base_curve.genus(), base_curve.genus()])?;
    let twisted = tate_twist(&curve, 1)?;
    let mut out = core;
    for _ in 1..m {
        out = direct_sum(&out, &twisted)?;
    }
    Ok(out)
}

/// Tables and assembled diamonds for the `(m, n)` tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VzReport {
    pub m: u32,
    pub n: u32,
    pub base: EigenTable,
    pub fermat: EigenTable,
    pub r_values: Vec<u64>,
    pub surface: Option<VzSurfaceReport>,
    pub threefold: Option<VzThreefoldReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VzSurfaceReport {
    pub assembly: VzSurface,
    pub target: Vec<u64>,
    pub correction: i64,
    pub diamond: GradedHodgeStructure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VzThreefoldReport {
    pub surface_graded: GradedHodgeStructure,
    pub twisted_contribution: u64,
    pub diamond: GradedHodgeStructure,
    pub oracle: Vec<u64>,
}

/// Eigen tables for the `(m, n)` curves, plus the K3 assembly for
/// `(4, 1)` and the threefold assembly for `(5, 2)`.
pub fn vz_report(m: u32, n: u32) -> Result<VzReport, CoverError> {
    let base = vz_base_curve(m, n)?;
    let fermat = fermat_curve_eigen(m)?;
    let r_values = base.r_values();
    let surface = if n == 1 && m == 4 {
        let assembly = vz_surface_assemble(&base, &fermat)?;
        let target = hypersurface_hodge_oracle(m, 3);
        let (correction, diamond) = assembly.resolve(target.iter().sum())?;
        Some(VzSurfaceReport {
            assembly,
            target,
            correction,
            diamond,
        })
    } else {
        None
    };
    let threefold = if n == 2 && m == 5 {
        let surface_graded = jacobian_graded_hypersurface(m, 3)?;
        let diamond = vz_threefold_assemble(&surface_graded, &fermat, &base)?;
        Some(VzThreefoldReport {
            surface_graded,
            twisted_contribution: (m as u64 - 1) * base.genus(),
            diamond,
            oracle: hypersurface_hodge_oracle(m, 4),
        })
    } else {
        None
    };
    Ok(VzReport {
        m,
        n,
        base,
        fermat,
        r_values,
        surface,
        threefold,
    })
}
