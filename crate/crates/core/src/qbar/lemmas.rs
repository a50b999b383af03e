//! Hermitian forms, subspaces and the constructive descent algorithms.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::field::CyclotomicNumber;
use super::linalg::{
    combine, greedy_basis, in_span, independent, is_zero_vector, kronecker, rank, scale, sub,
    zero_vector, Matrix, Vector,
};
use crate::periods::num::{with_digits, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbarError {
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("matrix has rank {rank}, not an elementary tensor")]
    NotElementary { rank: usize },
    #[error("vector {index} is isotropic: h(v, v) = 0")]
    IsotropicVector { index: usize },
    #[error("U1 vectors {i} and {j} are not h-orthogonal")]
    NotOrthogonalInput { i: usize, j: usize },
    #[error("U1 vector {index} is isotropic")]
    IsotropicU1Vector { index: usize },
    #[error("projections of ranks {rank1} and {rank2} do not reconstruct a space of dimension {dim}")]
    NotSplitCompatible { rank1: usize, rank2: usize, dim: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("Gram matrix is not conjugate-symmetric at ({i}, {j})")]
    NotHermitian { i: usize, j: usize },
}

/// Sign of a real element of a cyclotomic field under `ζ_m ↦ e^{2πi/m}`.
///
/// The embedding is refined until its error bound separates the value from
/// zero, which always happens for a nonzero algebraic number.
pub fn real_sign(x: &CyclotomicNumber) -> Ordering {
    if x.is_zero() {
        return Ordering::Equal;
    }
    debug_assert!(x.is_real(), "real_sign on a non-real element");
    let l1 = x.coeff_l1();
    let mut digits = 30u32;
    loop {
        let v = x.embed(digits);
        let decided = with_digits(digits + 10, || {
            let bound = Real::from_ratio(&l1) * Real::pow10(-(digits as i32) + 2);
            if v.re.abs() > bound {
                Some(v.re.sign())
            } else {
                None
            }
        });
        if let Some(s) = decided {
            return s;
        }
        digits *= 2;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianForm {
    gram: Matrix,
}

impl HermitianForm {
    pub fn new(gram: Matrix) -> Result<Self, QbarError> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(QbarError::DimensionMismatch(format!(
                    "row {i} has length {} in a {n}x{n} Gram matrix",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in i..n {
                if gram[i][j] != gram[j][i].conj() {
                    return Err(QbarError::NotHermitian { i, j });
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn identity(n: usize) -> Self {
        Self::diag((0..n).map(|_| CyclotomicNumber::one()).collect())
    }

    /// Diagonal form; entries should be real for the result to be hermitian.
    pub fn diag(entries: Vec<CyclotomicNumber>) -> Self {
        let n = entries.len();
        let mut gram = vec![zero_vector(n); n];
        for (i, e) in entries.into_iter().enumerate() {
            gram[i][i] = e;
        }
        Self { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `h(u, v) = uᵀ G conj(v)`.
    pub fn eval(&self, u: &[CyclotomicNumber], v: &[CyclotomicNumber]) -> CyclotomicNumber {
        let cv: Vector = v.iter().map(|x| x.conj()).collect();
        let mut acc = CyclotomicNumber::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = CyclotomicNumber::zero();
            for (g, c) in self.gram[i].iter().zip(&cv) {
                if !g.is_zero() && !c.is_zero() {
                    row = row + g * c;
                }
            }
            acc = acc + ui * &row;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<Vector>,
}

impl SubspaceBasis {
    pub fn new(ambient: usize, vectors: Vec<Vector>) -> Result<Self, QbarError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(QbarError::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        if !independent(&vectors) {
            return Err(QbarError::DependentVectors);
        }
        Ok(Self { ambient, vectors })
    }

    pub fn empty(ambient: usize) -> Self {
        Self { ambient, vectors: Vec::new() }
    }

    /// The coordinate basis of `K^n`.
    pub fn standard(n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| {
                let mut v = zero_vector(n);
                v[i] = CyclotomicNumber::one();
                v
            })
            .collect();
        Self { ambient: n, vectors }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn contains(&self, v: &[CyclotomicNumber]) -> bool {
        in_span(&self.vectors, v)
    }

    pub fn contains_space(&self, other: &SubspaceBasis) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }
}

/// Splits a rank-one matrix `a_ij = α_i β_j`, with the first nonzero entry
/// of `α` equal to 1.
pub fn rank1_factor(a: &[Vector]) -> Result<(Vector, Vector), QbarError> {
    let Some(i0) = a.iter().position(|row| !is_zero_vector(row)) else {
        return Err(QbarError::ZeroMatrix);
    };
    let r = rank(a);
    if r != 1 {
        return Err(QbarError::NotElementary { rank: r });
    }
    let beta = a[i0].clone();
    let j0 = beta.iter().position(|x| !x.is_zero()).expect("nonzero row");
    let pivot = beta[j0].inv().expect("nonzero pivot");
    let alpha: Vector = a.iter().map(|row| &row[j0] * &pivot).collect();
    Ok((alpha, beta))
}

/// Recovers a basis of `U` from a basis of `U ⊗ Ω` inside `K^{n1} ⊗ K^{n2}`.
///
/// Each `w = u ⊗ Ω` gives `u_i = w_{i,j0} / Ω_{j0}` at the first nonzero
/// coordinate `j0` of `Ω`; the factorization is checked exactly.
pub fn tensor_factor_recover(
    w: &SubspaceBasis,
    omega: &[CyclotomicNumber],
) -> Result<SubspaceBasis, QbarError> {
    let n2 = omega.len();
    if n2 == 0 || !w.ambient().is_multiple_of(n2) {
        return Err(QbarError::DimensionMismatch(format!(
            "ambient {} is not a multiple of {n2}",
            w.ambient()
        )));
    }
    let n1 = w.ambient() / n2;
    let Some(j0) = omega.iter().position(|x| !x.is_zero()) else {
        return Err(QbarError::ZeroMatrix);
    };
    let inv = omega[j0].inv().expect("nonzero entry");
    let mut out = Vec::with_capacity(w.dim());
    for v in w.vectors() {
        let u: Vector = (0..n1).map(|i| &v[i * n2 + j0] * &inv).collect();
        for i in 0..n1 {
            for j in 0..n2 {
                if v[i * n2 + j] != &u[i] * &omega[j] {
                    let m: Matrix = (0..n1).map(|i| v[i * n2..(i + 1) * n2].to_vec()).collect();
                    return Err(QbarError::NotElementary { rank: rank(&m) });
                }
            }
        }
        out.push(u);
    }
    SubspaceBasis::new(n1, out)
}

/// Gram-Schmidt `v_k = x_k - Σ_{j<k} h(x_k, v_j)/h(v_j, v_j) v_j`.
pub fn gram_schmidt(x: &SubspaceBasis, h: &HermitianForm) -> Result<SubspaceBasis, QbarError> {
    gram_schmidt_with_transform(x, h).map(|(v, _)| v)
}

/// As [`gram_schmidt`], also returning the lower unitriangular `T` with
/// `v_k = Σ_j T_kj x_j`.
pub fn gram_schmidt_with_transform(
    x: &SubspaceBasis,
    h: &HermitianForm,
) -> Result<(SubspaceBasis, Matrix), QbarError> {
    check_form_dim(x, h)?;
    let k = x.dim();
    let mut vs: Vec<Vector> = Vec::with_capacity(k);
    let mut norms: Vec<CyclotomicNumber> = Vec::with_capacity(k);
    let mut t: Matrix = Vec::with_capacity(k);
    for (idx, xk) in x.vectors().iter().enumerate() {
        let mut v = xk.clone();
        let mut row = zero_vector(k);
        row[idx] = CyclotomicNumber::one();
        for (j, vj) in vs.iter().enumerate() {
            let mu = &h.eval(xk, vj) / &norms[j];
            if mu.is_zero() {
                continue;
            }
            v = sub(&v, &scale(&mu, vj));
            row = sub(&row, &scale(&mu, &t[j]));
        }
        let n = h.eval(&v, &v);
        if n.is_zero() {
            return Err(QbarError::IsotropicVector { index: idx });
        }
        vs.push(v);
        norms.push(n);
        t.push(row);
    }
    Ok((SubspaceBasis { ambient: x.ambient(), vectors: vs }, t))
}

fn check_form_dim(x: &SubspaceBasis, h: &HermitianForm) -> Result<(), QbarError> {
    if x.ambient() != h.dim() {
        return Err(QbarError::DimensionMismatch(format!(
            "form of dimension {} on vectors of length {}",
            h.dim(),
            x.ambient()
        )));
    }
    Ok(())
}

/// A basis over `K` of the `h`-orthogonal complement of `U1` inside the span
/// of `ambient`, from the projections `x - Σ h(x,u_j)/h(u_j,u_j) u_j`.
pub fn ortho_complement_descend(
    ambient: &SubspaceBasis,
    u1: &SubspaceBasis,
    h: &HermitianForm,
) -> Result<SubspaceBasis, QbarError> {
    check_form_dim(ambient, h)?;
    check_form_dim(u1, h)?;
    let us = u1.vectors();
    let mut norms = Vec::with_capacity(us.len());
    for (i, u) in us.iter().enumerate() {
        let n = h.eval(u, u);
        if n.is_zero() {
            return Err(QbarError::IsotropicU1Vector { index: i });
        }
        norms.push(n);
        for (j, w) in us.iter().enumerate().take(i) {
            if !h.eval(u, w).is_zero() {
                return Err(QbarError::NotOrthogonalInput { i: j, j: i });
            }
        }
    }
    if !ambient.contains_space(u1) {
        return Err(QbarError::DimensionMismatch("U1 is not contained in the ambient span".into()));
    }
    let target = ambient.dim() - u1.dim();
    let projected: Vec<Vector> = ambient
        .vectors()
        .iter()
        .map(|x| {
            let coeffs: Vec<CyclotomicNumber> =
                us.iter().zip(&norms).map(|(u, n)| &h.eval(x, u) / n).collect();
            sub(x, &combine(&coeffs, us, x.len()))
        })
        .collect();
    let mut out: Vec<Vector> = Vec::with_capacity(target);
    for p in projected {
        if out.len() == target {
            break;
        }
        if is_zero_vector(&p) {
            continue;
        }
        let mut trial = out.clone();
        trial.push(p.clone());
        if independent(&trial) {
            out = trial;
        }
    }
    if out.len() != target {
        return Err(QbarError::HypothesisViolation(format!(
            "complement has dimension {} instead of {target}",
            out.len()
        )));
    }
    Ok(SubspaceBasis { ambient: ambient.ambient(), vectors: out })
}

/// Projects `F ⊂ K^{n1} ⊕ K^{n2}` onto both summands, reduces the
/// projections to bases and checks that `F` lies in the span they rebuild.
pub fn summand_basis_extract(
    n1: usize,
    n2: usize,
    f: &SubspaceBasis,
) -> Result<(SubspaceBasis, SubspaceBasis), QbarError> {
    if f.ambient() != n1 + n2 {
        return Err(QbarError::DimensionMismatch(format!(
            "split {n1}+{n2} of ambient dimension {}",
            f.ambient()
        )));
    }
    let p1: Vec<Vector> = f.vectors().iter().map(|v| v[..n1].to_vec()).collect();
    let p2: Vec<Vector> = f.vectors().iter().map(|v| v[n1..].to_vec()).collect();
    let b1 = greedy_basis(&p1);
    let b2 = greedy_basis(&p2);
    let rebuilt: Vec<Vector> = b1
        .iter()
        .map(|u| u.iter().cloned().chain(zero_vector(n2)).collect())
        .chain(b2.iter().map(|u| zero_vector(n1).into_iter().chain(u.iter().cloned()).collect()))
        .collect();
    if !f.vectors().iter().all(|v| in_span(&rebuilt, v)) {
        return Err(QbarError::NotSplitCompatible { rank1: b1.len(), rank2: b2.len(), dim: f.dim() });
    }
    Ok((SubspaceBasis { ambient: n1, vectors: b1 }, SubspaceBasis { ambient: n2, vectors: b2 }))
}

/// Whether `F = (F ∩ V1) ⊕ (F ∩ V2)`, i.e. the projections have total
/// dimension `dim F`.
pub fn is_split_compatible(n1: usize, n2: usize, f: &SubspaceBasis) -> bool {
    summand_basis_extract(n1, n2, f).is_ok_and(|(a, b)| a.dim() + b.dim() == f.dim())
}

/// One Hodge summand `V^{p,q}` with a basis over `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgePiece {
    pub p: usize,
    pub q: usize,
    pub basis: SubspaceBasis,
}

/// Checks that `h` is definite on the span of `basis`, returning an
/// orthogonal basis of it.
fn definite_orthogonal(basis: &SubspaceBasis, h: &HermitianForm, label: &str) -> Result<SubspaceBasis, QbarError> {
    let ortho = gram_schmidt(basis, h).map_err(|_| {
        QbarError::HypothesisViolation(format!("h is degenerate or indefinite on {label}"))
    })?;
    let mut sign = None;
    for v in ortho.vectors() {
        let s = real_sign(&h.eval(v, v));
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => {
                return Err(QbarError::HypothesisViolation(format!("h is indefinite on {label}")))
            }
            _ => {}
        }
    }
    Ok(ortho)
}

/// Splits a filtration `F^k ⊂ … ⊂ F^0` into `V^{p,k-p}` by peeling the
/// orthogonal complement of `F^{p+1}` inside `F^p`.
///
/// `filtration[i]` is a basis of `F^{k-i}`. Each piece must be `h`-definite.
pub fn hodge_basis_descent(
    filtration: &[SubspaceBasis],
    h: &HermitianForm,
    k: usize,
) -> Result<Vec<HodgePiece>, QbarError> {
    if filtration.len() != k + 1 {
        return Err(QbarError::DimensionMismatch(format!(
            "weight {k} needs {} filtration pieces, got {}",
            k + 1,
            filtration.len()
        )));
    }
    for (i, f) in filtration.iter().enumerate() {
        check_form_dim(f, h)?;
        if i > 0 && !f.contains_space(&filtration[i - 1]) {
            return Err(QbarError::HypothesisViolation(format!(
                "F^{} is not contained in F^{}",
                k - i + 1,
                k - i
            )));
        }
    }
    let mut pieces = Vec::with_capacity(k + 1);
    let top = &filtration[0];
    let mut orthogonal_so_far: Vec<Vector> =
        definite_orthogonal(top, h, &format!("V^{{{k},0}}"))?.vectors().to_vec();
    pieces.push(HodgePiece { p: k, q: 0, basis: top.clone() });
    for (i, f) in filtration.iter().enumerate().skip(1) {
        let p = k - i;
        let label = format!("V^{{{p},{i}}}");
        let u1 = SubspaceBasis { ambient: f.ambient(), vectors: orthogonal_so_far.clone() };
        let piece = ortho_complement_descend(f, &u1, h)
            .map_err(|e| QbarError::HypothesisViolation(format!("{label}: {e}")))?;
        let ortho = definite_orthogonal(&piece, h, &label)?;
        orthogonal_so_far.extend(ortho.vectors().iter().cloned());
        pieces.push(HodgePiece { p, q: i, basis: piece });
    }
    Ok(pieces)
}

/// The product form on `V1 ⊗ V2`, Gram matrix `G1 ⊗ G2`.
pub fn tensor_hermitian(h1: &HermitianForm, h2: &HermitianForm) -> HermitianForm {
    HermitianForm { gram: kronecker(&h1.gram, &h2.gram) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbar::linalg::{add, span_equal, tensor_vectors};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(n: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_int(n)
    }

    fn r(n: i64, d: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_ratio(n, d)
    }

    fn vecs(rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter().map(|row| row.iter().map(|&x| c(x)).collect()).collect()
    }

    fn random_element(rng: &mut ChaCha8Rng, m: u32) -> CyclotomicNumber {
        let d = crate::qbar::CyclotomicField::get(m).degree();
        let coeffs = (0..d)
            .map(|_| BigRational::from_integer(rng.gen_range(-3i64..=3).into()))
            .collect();
        CyclotomicNumber::from_coeffs(m, coeffs)
    }

    fn random_vector(rng: &mut ChaCha8Rng, m: u32, n: usize) -> Vector {
        (0..n).map(|_| random_element(rng, m)).collect()
    }

    #[test]
    fn rank1_examples() {
        let (a, b) = rank1_factor(&vecs(&[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(a, vecs(&[&[1, 2]])[0]);
        assert_eq!(b, vecs(&[&[1, 2]])[0]);

        let i = CyclotomicNumber::i();
        let m = vec![vec![c(1), i.clone()], vec![-&i, c(1)]];
        let (a, b) = rank1_factor(&m).unwrap();
        assert_eq!(a, vec![c(1), -&i]);
        assert_eq!(b, vec![c(1), i.clone()]);

        assert_eq!(rank1_factor(&vecs(&[&[1, 0], &[0, 1]])).unwrap_err(), QbarError::NotElementary { rank: 2 });
        assert_eq!(rank1_factor(&vecs(&[&[0, 0], &[0, 0]])).unwrap_err(), QbarError::ZeroMatrix);
    }

    #[test]
    fn rank1_random_outer_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..30 {
            let m = if trial % 2 == 0 { 4 } else { 5 };
            let (n1, n2) = (rng.gen_range(1..4), rng.gen_range(1..4));
            let alpha = random_vector(&mut rng, m, n1);
            let beta = random_vector(&mut rng, m, n2);
            let a: Matrix = alpha.iter().map(|x| beta.iter().map(|y| x * y).collect()).collect();
            match rank1_factor(&a) {
                Ok((p, q)) => {
                    let first = p.iter().find(|x| !x.is_zero()).unwrap();
                    assert!(first.is_one());
                    for i in 0..n1 {
                        for j in 0..n2 {
                            assert_eq!(&p[i] * &q[j], a[i][j]);
                        }
                    }
                }
                Err(e) => {
                    assert_eq!(e, QbarError::ZeroMatrix);
                    assert!(is_zero_vector(&alpha) || is_zero_vector(&beta));
                }
            }
        }
    }

    #[test]
    fn tensor_factor_recovers_left_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let omega = vec![c(0), CyclotomicNumber::zeta(5), c(2)];
        let u = vec![random_vector(&mut rng, 5, 3), random_vector(&mut rng, 5, 3)];
        let w: Vec<Vector> = u.iter().map(|x| tensor_vectors(x, &omega)).collect();
        let rec = tensor_factor_recover(&SubspaceBasis::new(9, w).unwrap(), &omega).unwrap();
        assert!(span_equal(rec.vectors(), &u));

        let bad = SubspaceBasis::new(4, vecs(&[&[1, 0, 0, 1]])).unwrap();
        assert_eq!(
            tensor_factor_recover(&bad, &[c(1), c(0)]).unwrap_err(),
            QbarError::NotElementary { rank: 2 }
        );
    }

    #[test]
    fn gram_schmidt_examples() {
        let h = HermitianForm::identity(2);
        let std = SubspaceBasis::standard(2);
        assert_eq!(gram_schmidt(&std, &h).unwrap(), std);

        let x = SubspaceBasis::new(2, vecs(&[&[1, 1], &[1, 0]])).unwrap();
        let (v, t) = gram_schmidt_with_transform(&x, &h).unwrap();
        assert_eq!(v.vectors()[1], vec![r(1, 2), r(-1, 2)]);
        assert_eq!(t, vec![vec![c(1), c(0)], vec![r(-1, 2), c(1)]]);

        let hm = HermitianForm::diag(vec![c(1), c(-1)]);
        let iso = SubspaceBasis::new(2, vecs(&[&[1, 1]])).unwrap();
        assert_eq!(gram_schmidt(&iso, &hm).unwrap_err(), QbarError::IsotropicVector { index: 0 });
    }

    #[test]
    fn complement_examples() {
        let h = HermitianForm::identity(2);
        let u1 = SubspaceBasis::new(2, vecs(&[&[1, 0]])).unwrap();
        let out = ortho_complement_descend(&SubspaceBasis::standard(2), &u1, &h).unwrap();
        assert!(span_equal(out.vectors(), &vecs(&[&[0, 1]])));

        let h2 = HermitianForm::diag(vec![c(1), c(2)]);
        let u = SubspaceBasis::new(2, vecs(&[&[1, 1]])).unwrap();
        let out = ortho_complement_descend(&SubspaceBasis::standard(2), &u, &h2).unwrap();
        assert_eq!(out.vectors(), &[vec![r(2, 3), r(-1, 3)]]);

        let skew = SubspaceBasis::new(2, vecs(&[&[1, 0], &[1, 1]])).unwrap();
        assert_eq!(
            ortho_complement_descend(&SubspaceBasis::standard(2), &skew, &h).unwrap_err(),
            QbarError::NotOrthogonalInput { i: 0, j: 1 }
        );
        let hm = HermitianForm::diag(vec![c(1), c(-1)]);
        let iso = SubspaceBasis::new(2, vecs(&[&[1, 1]])).unwrap();
        assert_eq!(
            ortho_complement_descend(&SubspaceBasis::standard(2), &iso, &hm).unwrap_err(),
            QbarError::IsotropicU1Vector { index: 0 }
        );
    }

    #[test]
    fn summand_examples() {
        let f = SubspaceBasis::new(4, vecs(&[&[1, 0, 1, 0]])).unwrap();
        let (a, b) = summand_basis_extract(2, 2, &f).unwrap();
        assert_eq!(a.vectors(), &vecs(&[&[1, 0]])[..]);
        assert_eq!(b.vectors(), &vecs(&[&[1, 0]])[..]);
        assert!(!is_split_compatible(2, 2, &f));

        let g = SubspaceBasis::new(4, vecs(&[&[1, 0, 0, 0], &[0, 1, 1, 0]])).unwrap();
        let (a, b) = summand_basis_extract(2, 2, &g).unwrap();
        assert_eq!((a.dim(), b.dim()), (2, 1));
        let rebuilt: Vec<Vector> = vec![
            vec![c(1), c(0), c(0), c(0)],
            vec![c(0), c(1), c(0), c(0)],
            vec![c(0), c(0), c(1), c(0)],
        ];
        assert!(g.vectors().iter().all(|v| in_span(&rebuilt, v)));

        let split = SubspaceBasis::new(4, vecs(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[1, 0, 2, 0]]));
        assert_eq!(split.unwrap_err(), QbarError::DependentVectors);
        let split = SubspaceBasis::new(4, vecs(&[&[1, 1, 0, 0], &[0, 0, 1, 2]])).unwrap();
        let (a, b) = summand_basis_extract(2, 2, &split).unwrap();
        assert_eq!(a.vectors(), &vecs(&[&[1, 1]])[..]);
        assert_eq!(b.vectors(), &vecs(&[&[1, 2]])[..]);

        let (a, b) = summand_basis_extract(2, 2, &SubspaceBasis::empty(4)).unwrap();
        assert_eq!((a.dim(), b.dim()), (0, 0));
        assert!(is_split_compatible(2, 2, &split));
    }

    #[test]
    fn hodge_descent_weight_zero_and_two() {
        let h = HermitianForm::diag(vec![c(2), c(3)]);
        let f0 = SubspaceBasis::new(2, vecs(&[&[1, 1], &[0, 1]])).unwrap();
        let pieces = hodge_basis_descent(&[f0.clone()], &h, 0).unwrap();
        assert_eq!(pieces, vec![HodgePiece { p: 0, q: 0, basis: f0 }]);

        // Weight 2 over Q(i): pieces are the images of e1, e2, e3 under a
        // unitriangular change of coordinates, signs (+, -, +).
        let i = CyclotomicNumber::i();
        let p: Matrix = vec![
            vec![c(1), c(0), c(0)],
            vec![i.clone(), c(1), c(0)],
            vec![c(2), -&i, c(1)],
        ];
        let signs = [c(1), c(-1), c(1)];
        // Gram matrix G with h(P_a, P_b) = δ_ab s_a, i.e. G = P^{-1} S P^{-*}.
        let pinv = invert(&p);
        let s = HermitianForm::diag(signs.to_vec());
        let g = triple(&pinv, s.gram(), &crate::qbar::linalg::conj_transpose(&pinv));
        let h = HermitianForm::new(g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { signs[a].clone() } else { c(0) };
                assert_eq!(h.eval(&p[a], &p[b]), expect);
            }
        }
        let f2 = SubspaceBasis::new(3, vec![p[0].clone()]).unwrap();
        let f1 = SubspaceBasis::new(3, vec![add(&p[0], &p[1]), p[0].clone()]).unwrap();
        let f0 = SubspaceBasis::standard(3);
        let pieces = hodge_basis_descent(&[f2, f1.clone(), f0], &h, 2).unwrap();
        assert_eq!(pieces.iter().map(|x| (x.p, x.q, x.basis.dim())).collect::<Vec<_>>(), vec![(2, 0, 1), (1, 1, 1), (0, 2, 1)]);
        for (a, pa) in pieces.iter().enumerate() {
            assert!(span_equal(pa.basis.vectors(), &[p[a].clone()]));
            for pb in pieces.iter().skip(a + 1) {
                assert!(h.eval(&pa.basis.vectors()[0], &pb.basis.vectors()[0]).is_zero());
            }
        }

        // Indefinite middle piece.
        let h = HermitianForm::diag(vec![c(1), c(1), c(-1), c(1)]);
        let f2 = SubspaceBasis::new(4, vecs(&[&[1, 0, 0, 0]])).unwrap();
        let f1 = SubspaceBasis::new(4, vecs(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]])).unwrap();
        let f0 = SubspaceBasis::standard(4);
        assert!(matches!(
            hodge_basis_descent(&[f2, f1, f0], &h, 2),
            Err(QbarError::HypothesisViolation(_))
        ));
    }

    fn triple(a: &Matrix, b: &Matrix, c: &Matrix) -> Matrix {
        mat_mul(&mat_mul(a, b), c)
    }

    fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = b[0].len();
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b).fold(CyclotomicNumber::zero(), |s, (x, br)| s + x * &br[j]))
                    .collect()
            })
            .collect()
    }

    fn invert(a: &Matrix) -> Matrix {
        let n = a.len();
        let aug: Matrix = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { c(1) } else { c(0) }));
                r
            })
            .collect();
        let (red, _) = crate::qbar::linalg::rref(&aug);
        red.iter().map(|r| r[n..].to_vec()).collect()
    }

    #[test]
    fn tensor_form_properties() {
        let h = tensor_hermitian(&HermitianForm::diag(vec![c(2), c(3)]), &HermitianForm::diag(vec![c(5), c(-1)]));
        assert_eq!(h, HermitianForm::diag(vec![c(10), c(-2), c(15), c(-3)]));

        // Symmetric ⊗ antisymmetric bilinear forms: Q(u,v) = (-1)^{k1+k2} Q(v,u).
        let sym = vecs(&[&[1, 2], &[2, 5]]);
        let alt = vecs(&[&[0, 1], &[-1, 0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (q1, k1) in [(&sym, 0), (&alt, 1)] {
            for (q2, k2) in [(&sym, 0), (&alt, 1)] {
                let q = kronecker(q1, q2);
                let sign = if (k1 + k2) % 2 == 0 { c(1) } else { c(-1) };
                for _ in 0..5 {
                    let u: Vector = (0..4).map(|_| c(rng.gen_range(-4..5))).collect();
                    let v: Vector = (0..4).map(|_| c(rng.gen_range(-4..5))).collect();
                    assert_eq!(bilinear(&q, &u, &v), &sign * &bilinear(&q, &v, &u));
                }
            }
        }

        // Blocks between different bidegrees vanish.
        let h1 = HermitianForm::diag(vec![c(1), c(-2)]);
        let h2 = HermitianForm::diag(vec![c(3), c(1), c(-1)]);
        let h12 = tensor_hermitian(&h1, &h2);
        let e = |n: usize, i: usize| -> Vector { (0..n).map(|j| if i == j { c(1) } else { c(0) }).collect() };
        for (a, b, a2, b2) in [(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 0, 2)] {
            let x = tensor_vectors(&e(2, a), &e(3, b));
            let y = tensor_vectors(&e(2, a2), &e(3, b2));
            assert!(h12.eval(&x, &y).is_zero());
        }
        assert!(HermitianForm::new(h12.gram().clone()).is_ok());
    }

    fn bilinear(q: &Matrix, u: &[CyclotomicNumber], v: &[CyclotomicNumber]) -> CyclotomicNumber {
        let mut s = CyclotomicNumber::zero();
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                s = s + ui * &q[i][j] * vj;
            }
        }
        s
    }

    #[test]
    fn hermitian_validation() {
        let i = CyclotomicNumber::i();
        assert!(HermitianForm::new(vec![vec![c(1), i.clone()], vec![-&i, c(1)]]).is_ok());
        assert_eq!(
            HermitianForm::new(vec![vec![c(1), i.clone()], vec![i.clone(), c(1)]]).unwrap_err(),
            QbarError::NotHermitian { i: 0, j: 1 }
        );
        assert_eq!(HermitianForm::new(vec![vec![i.clone()]]).unwrap_err(), QbarError::NotHermitian { i: 0, j: 0 });
    }

    #[test]
    fn real_sign_of_golden_ratio_conjugates() {
        let z = CyclotomicNumber::zeta(5);
        let t = &z + &z.conj();
        assert_eq!(real_sign(&t), Ordering::Greater);
        let t2 = CyclotomicNumber::zeta_pow(5, 2) + CyclotomicNumber::zeta_pow(5, 3);
        assert_eq!(real_sign(&t2), Ordering::Less);
        // A tiny but nonzero value forces refinement.
        let tiny = &t - &CyclotomicNumber::from_ratio(618_033_988_749_895, 1_000_000_000_000_000);
        assert_eq!(real_sign(&tiny), Ordering::Less);
    }
}
