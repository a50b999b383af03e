//! Borcea-Voisin steps and towers at the level of Hodge numbers.
//!
//! Given Calabi-Yau varieties `A1`, `A2` with involutions `I1`, `I2` and
//! ramification divisors `R1`, `R2`, the resolved quotient `B` of
//! `A1 × A2 / (I1 × I2)` has
//!
//! ```text
//! H^k(B) = (⊕_{r+s=k} A1^{r,+} ⊗ A2^{s,+} ⊕ A1^{r,-} ⊗ A2^{s,-}) ⊕ H^{k-2}(R1 × R2)(-1)
//! ```
//!
//! The new involution is induced by `I1 × Id`: a product term of sign `s`
//! keeps sign `s`, the exceptional part is invariant. Its ramification is
//! `R1 × A2/I2 ⊔ A1/I1 × R2`, with the quotient cohomology taken to be the
//! invariant part.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hodge::{
    cm_propagate, direct_sum, invariant_part_of_product, tate_twist, tensor, CmExpr, CmState, CmStatus,
    GradedHodgeStructure, HodgeDiamondFamily, HodgeError, PieceKey, Sign,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error("not a Calabi-Yau with involution: {}", .0.join("; "))]
    InvariantViolation(Vec<String>),
    #[error("a Borcea-Voisin step needs positive-dimensional factors")]
    EmptyProduct,
    #[error("a tower needs at least 2 bases, got {0}")]
    TooFewBases(usize),
}

/// Outcome of [`check_cy`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyCheck {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks connectedness, `h^{j,0} = 0` for `0 < j < n` and `h^{n,0} = 1`.
pub fn check_cy(candidate: &HodgeDiamondFamily) -> CyCheck {
    let n = candidate.dim();
    let mut violations = Vec::new();
    let h00 = candidate.h(0, 0);
    if h00 != 1 {
        violations.push(format!("h^{{0,0}} = {h00}, expected 1"));
    }
    for j in 1..n {
        let h = candidate.h(j, 0);
        if h != 0 {
            violations.push(format!("h^{{{j},0}} = {h}, expected 0"));
        }
    }
    if n > 0 {
        let h = candidate.h(n, 0);
        if h != 1 {
            violations.push(format!("h^{{{n},0}} = {h}, expected 1"));
        }
    }
    CyCheck {
        ok: violations.is_empty(),
        violations,
    }
}

/// Hodge data of a Calabi-Yau `n`-fold with an involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CyWire", into = "CyWire")]
pub struct CYWithInvolution {
    family: HodgeDiamondFamily,
    ramification: HodgeDiamondFamily,
    cm: Vec<CmState>,
}

#[derive(Serialize, Deserialize)]
struct CyWire {
    family: HodgeDiamondFamily,
    ramification: HodgeDiamondFamily,
    #[serde(default)]
    cm: Option<Vec<CmState>>,
}

impl TryFrom<CyWire> for CYWithInvolution {
    type Error = TowerError;

    fn try_from(w: CyWire) -> Result<Self, TowerError> {
        match w.cm {
            Some(cm) => Self::new(w.family, w.ramification, cm),
            None => Self::with_default_cm(w.family, w.ramification),
        }
    }
}

impl From<CYWithInvolution> for CyWire {
    fn from(c: CYWithInvolution) -> Self {
        CyWire {
            family: c.family,
            ramification: c.ramification,
            cm: Some(c.cm),
        }
    }
}

impl CYWithInvolution {
    /// `family` must carry involution signs on every level `0..=n`;
    /// `ramification` has dimension `n - 1` (use an empty family for a free
    /// involution); `cm[k]` is the asserted flag of `H^k`.
    pub fn new(
        family: HodgeDiamondFamily,
        ramification: HodgeDiamondFamily,
        cm: Vec<CmState>,
    ) -> Result<Self, TowerError> {
        let n = family.dim();
        let mut violations = check_cy(&family).violations;
        for (k, lvl) in family.stored_levels().iter().enumerate() {
            let plus = lvl.sign_part(Sign::Plus)?;
            let minus = lvl.sign_part(Sign::Minus)?;
            if direct_sum(&plus, &minus)?.without_grading() != lvl.without_grading() {
                violations.push(format!("sign parts of H^{k} do not sum to the total"));
            }
        }
        if n > 0 {
            let top = family.level(n);
            if top.piece_h(PieceKey::signed(Sign::Plus), n, 0) != 0 {
                violations.push(format!("H^{{{n},0}} meets the invariant part"));
            }
            if ramification.dim() + 1 != n {
                violations.push(format!(
                    "ramification has dimension {}, expected {}",
                    ramification.dim(),
                    n - 1
                ));
            }
        }
        if cm.len() != n as usize + 1 {
            violations.push(format!("{} CM flags given for {} levels", cm.len(), n + 1));
        }
        if !violations.is_empty() {
            return Err(TowerError::InvariantViolation(violations));
        }
        Ok(Self {
            family,
            ramification,
            cm,
        })
    }

    /// Like [`CYWithInvolution::new`] with every level flagged `Unknown`
    /// (the `(p,p)` rule still applies downstream).
    pub fn with_default_cm(family: HodgeDiamondFamily, ramification: HodgeDiamondFamily) -> Result<Self, TowerError> {
        let cm = vec![CmState::Unknown; family.dim() as usize + 1];
        Self::new(family, ramification, cm)
    }

    /// Elliptic curve with `x ↦ -x`: `H^1` anti-invariant, four fixed points.
    pub fn elliptic_curve(cm: CmState) -> Self {
        let h0 = GradedHodgeStructure::unit().with_uniform_sign(Sign::Plus);
        let h1 = GradedHodgeStructure::from_hodge_numbers(1, &[1, 1])
            .expect("symmetric")
            .with_uniform_sign(Sign::Minus);
        let family = HodgeDiamondFamily::new(1, vec![h0, h1], true).expect("valid elliptic diamond");
        Self::new(family, HodgeDiamondFamily::points(4), vec![CmState::Cm, cm]).expect("valid elliptic curve")
    }

    pub fn dim(&self) -> u32 {
        self.family.dim()
    }

    pub fn family(&self) -> &HodgeDiamondFamily {
        &self.family
    }

    pub fn ramification(&self) -> &HodgeDiamondFamily {
        &self.ramification
    }

    pub fn cm(&self) -> &[CmState] {
        &self.cm
    }

    /// CM flag of `H^k`, using Poincaré duality above the middle degree.
    pub fn cm_level(&self, k: u32) -> CmState {
        let n = self.dim();
        if k > 2 * n {
            return CmState::Cm;
        }
        self.cm[k.min(2 * n - k) as usize]
    }
}

/// One Künneth term `H^r(A1) ⊗ H^s(A2)` and its invariant part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethTerm {
    pub r: u32,
    pub s: u32,
    pub product: GradedHodgeStructure,
    pub invariant: GradedHodgeStructure,
}

/// Per-degree breakdown of a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    pub degree: u32,
    pub kunneth: Vec<KunnethTerm>,
    pub invariant: GradedHodgeStructure,
    pub exceptional: GradedHodgeStructure,
    pub total: GradedHodgeStructure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BVStepReport {
    pub label: String,
    pub output: CYWithInvolution,
    pub degrees: Vec<DegreeTable>,
    pub cm_trace: Vec<CmStatus>,
}

fn opposite(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
        Sign::None => Sign::None,
    }
}

/// Leaf flag of one sign part of a level. A non-CM level whose other part
/// is `(p,p)` (hence CM) must owe its non-CM-ness to this part.
fn sign_leaf(label: String, level: &GradedHodgeStructure, state: CmState, sign: Sign) -> Result<CmExpr, HodgeError> {
    let part = level.sign_part(sign)?;
    let other = level.sign_part(opposite(sign))?;
    let asserted = match state {
        CmState::Cm => CmState::Cm,
        CmState::NotCm if other.is_concentrated_pp() => CmState::NotCm,
        _ => CmState::Unknown,
    };
    Ok(CmExpr::leaf(label, part.without_grading(), asserted))
}

/// One Borcea-Voisin step with default labels.
pub fn bv_step(a1: &CYWithInvolution, a2: &CYWithInvolution) -> Result<BVStepReport, TowerError> {
    bv_step_labeled(a1, "A1", a2, "A2")
}

/// One Borcea-Voisin step; labels name the factors in the CM provenance.
pub fn bv_step_labeled(
    a1: &CYWithInvolution,
    l1: &str,
    a2: &CYWithInvolution,
    l2: &str,
) -> Result<BVStepReport, TowerError> {
    if a1.dim() == 0 || a2.dim() == 0 {
        return Err(TowerError::EmptyProduct);
    }
    let n = a1.dim() + a2.dim();
    let label = format!("({l1}×{l2})/I");
    let r1 = a1.ramification.without_grading();
    let r2 = a2.ramification.without_grading();
    let r12 = r1.product(&r2)?;

    let mut degrees = Vec::with_capacity(n as usize + 1);
    let mut levels = Vec::with_capacity(n as usize + 1);
    let mut cm_trace = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let mut kunneth = Vec::new();
        let mut invariant = GradedHodgeStructure::zero(k).with_uniform_sign(Sign::Plus);
        let mut terms = Vec::new();
        for r in 0..=k {
            let s = k - r;
            let x = a1.family.level(r);
            let y = a2.family.level(s);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let inv = invariant_part_of_product(&x, &y)?;
            invariant = direct_sum(&invariant, &inv)?;
            for sign in [Sign::Plus, Sign::Minus] {
                let xs = x.sign_part(sign)?;
                let ys = y.sign_part(sign)?;
                if xs.is_zero() || ys.is_zero() {
                    continue;
                }
                let tag = sign.symbol();
                terms.push(CmExpr::tensor(
                    format!("H^{r}({l1})^{tag}⊗H^{s}({l2})^{tag}"),
                    vec![
                        sign_leaf(format!("H^{r}({l1})^{tag}"), &x, a1.cm_level(r), sign)?,
                        sign_leaf(format!("H^{s}({l2})^{tag}"), &y, a2.cm_level(s), sign)?,
                    ],
                ));
            }
            kunneth.push(KunnethTerm {
                r,
                s,
                product: tensor(&x.without_grading(), &y.without_grading())?,
                invariant: inv,
            });
        }
        let exceptional = if k >= 2 {
            tate_twist(&r12.level(k - 2), 1)?.with_uniform_sign(Sign::Plus)
        } else {
            GradedHodgeStructure::zero(k).with_uniform_sign(Sign::Plus)
        };
        if !exceptional.is_zero() {
            let leaf = CmExpr::leaf(
                format!("H^{}(R({l1})×R({l2}))", k - 2),
                r12.level(k - 2).without_grading(),
                CmState::Unknown,
            );
            terms.push(CmExpr::twist(leaf, 1));
        }
        let total = direct_sum(&invariant, &exceptional)?;
        let status = if terms.is_empty() {
            CmStatus::asserted(CmState::Cm, format!("H^{k}({label}) = 0"))
        } else {
            cm_propagate(&CmExpr::sum(format!("H^{k}({label})"), terms))?
        };
        cm_trace.push(status);
        levels.push(total.clone());
        degrees.push(DegreeTable {
            degree: k,
            kunneth,
            invariant,
            exceptional,
            total,
        });
    }

    let family = HodgeDiamondFamily::new(n, levels, true)?;
    let q1 = a1.family.sign_part(Sign::Plus)?.without_grading();
    let q2 = a2.family.sign_part(Sign::Plus)?.without_grading();
    let ramification = r1.product(&q2)?.disjoint_union(&q1.product(&r2)?)?;
    let cm = cm_trace.iter().map(|s| s.state).collect();
    let output = CYWithInvolution::new(family, ramification, cm)?;
    Ok(BVStepReport {
        label,
        output,
        degrees,
        cm_trace,
    })
}

/// A named base of a tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerBase {
    pub name: String,
    pub cy: CYWithInvolution,
}

/// Tower input: `{"bases":[{"name":...,"cy":...},...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub bases: Vec<TowerBase>,
}

/// Left fold of [`bv_step`] over the bases.
pub fn run_tower(spec: &TowerSpec) -> Result<Vec<BVStepReport>, TowerError> {
    if spec.bases.len() < 2 {
        return Err(TowerError::TooFewBases(spec.bases.len()));
    }
    let mut reports: Vec<BVStepReport> = Vec::with_capacity(spec.bases.len() - 1);
    let mut current = spec.bases[0].cy.clone();
    let mut label = spec.bases[0].name.clone();
    for (i, base) in spec.bases.iter().enumerate().skip(1) {
        let mut report = bv_step_labeled(&current, &label, &base.cy, &base.name)?;
        label = format!("B{i}");
        report.label = label.clone();
        current = report.output.clone();
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> CYWithInvolution {
        CYWithInvolution::elliptic_curve(CmState::Cm)
    }

    #[test]
    fn kummer_step() {
        let rep = bv_step(&e(), &e()).unwrap();
        let b = rep.output.family();
        assert_eq!(b.betti(1), 0);
        assert_eq!(b.level(2).hodge_numbers(), vec![1, 20, 1]);
        assert_eq!(b.euler_characteristic(), 24);
        let h2 = b.level(2);
        assert_eq!(h2.piece_h(PieceKey::signed(Sign::Plus), 1, 1), 18);
        assert_eq!(h2.piece_h(PieceKey::signed(Sign::Minus), 1, 1), 2);
        assert_eq!(h2.piece_h(PieceKey::signed(Sign::Minus), 2, 0), 1);
        // 8 rational curves.
        let r = rep.output.ramification();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.betti_numbers(), vec![8, 0, 8]);
        assert_eq!(rep.degrees[2].exceptional.h(1, 1), 16);
        assert!(rep.cm_trace.iter().all(|s| s.state == CmState::Cm));
    }

    #[test]
    fn borcea_threefold_step() {
        let spec = TowerSpec {
            bases: ["E1", "E2", "E3"]
                .iter()
                .map(|n| TowerBase {
                    name: n.to_string(),
                    cy: e(),
                })
                .collect(),
        };
        let reps = run_tower(&spec).unwrap();
        assert_eq!(reps.len(), 2);
        let y = reps[1].output.family();
        assert_eq!(y.level(3).hodge_numbers(), vec![1, 3, 3, 1]);
        assert_eq!(y.betti(1), 0);
        assert_eq!(y.h(2, 0), 0);
        assert_eq!(y.h(1, 1), 51);
        assert_eq!(y.euler_characteristic(), 96);
        assert!(check_cy(y).ok);
        assert_eq!(reps[1].cm_trace[3].state, CmState::Cm);
    }

    #[test]
    fn non_cm_factor_propagates() {
        let rep = bv_step(&e(), &CYWithInvolution::elliptic_curve(CmState::NotCm)).unwrap();
        let h2 = &rep.cm_trace[2];
        assert_eq!(h2.state, CmState::NotCm);
        assert!(h2
            .not_cm_sources()
            .iter()
            .any(|s| s.label.contains("⊗") && s.rule == crate::hodge::CmRule::Tensor));
        assert_eq!(rep.cm_trace[0].state, CmState::Cm);
    }

    #[test]
    fn too_few_bases() {
        let spec = TowerSpec {
            bases: vec![TowerBase {
                name: "E".into(),
                cy: e(),
            }],
        };
        assert_eq!(run_tower(&spec), Err(TowerError::TooFewBases(1)));
    }

    #[test]
    fn check_cy_examples() {
        let k3 = HodgeDiamondFamily::from_rows(2, &[&[1], &[0, 0], &[1, 20, 1]]).unwrap();
        assert!(check_cy(&k3).ok);
        let abelian = HodgeDiamondFamily::from_rows(2, &[&[1], &[2, 2], &[1, 4, 1]]).unwrap();
        let c = check_cy(&abelian);
        assert!(!c.ok);
        assert_eq!(c.violations.len(), 1);
        assert!(check_cy(&HodgeDiamondFamily::points(1)).ok);
    }

    #[test]
    fn invariant_holomorphic_form_rejected() {
        let h0 = GradedHodgeStructure::unit().with_uniform_sign(Sign::Plus);
        let h1 = GradedHodgeStructure::from_hodge_numbers(1, &[1, 1])
            .unwrap()
            .with_uniform_sign(Sign::Plus);
        let fam = HodgeDiamondFamily::new(1, vec![h0, h1], true).unwrap();
        let err = CYWithInvolution::with_default_cm(fam, HodgeDiamondFamily::empty(0));
        assert!(matches!(err, Err(TowerError::InvariantViolation(_))));
    }

    #[test]
    fn missing_signs_rejected() {
        let fam = HodgeDiamondFamily::from_rows(1, &[&[1], &[1, 1]]).unwrap();
        let err = CYWithInvolution::with_default_cm(fam, HodgeDiamondFamily::points(4));
        assert_eq!(err, Err(TowerError::Hodge(HodgeError::MissingSignData)));
    }

    #[test]
    fn report_json_round_trip() {
        let rep = bv_step(&e(), &e()).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        let back: BVStepReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
    }
}
