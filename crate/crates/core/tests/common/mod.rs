//! Random instance generators and brute-force oracles shared by the
//! integration suites.

#![allow(dead_code)]

use hodge_core::hodge::{
    cm_propagate, CmExpr, CmState, GradedHodgeStructure, HodgeDiamondFamily, PrimitiveDecomposition,
};
use hodge_core::qbar::{CyclotomicField, CyclotomicNumber, HermitianForm, Matrix, SubspaceBasis, Vector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Hodge-number generators

/// Symmetric Hodge numbers of weight `k`, entries in `0..=max`.
pub fn random_numbers(rng: &mut ChaCha8Rng, k: u32, max: u64) -> Vec<u64> {
    let mut v = vec![0u64; k as usize + 1];
    for p in 0..=(k as usize) / 2 {
        let h = rng.gen_range(0..=max);
        v[p] = h;
        v[k as usize - p] = h;
    }
    v
}

pub fn random_structure(rng: &mut ChaCha8Rng, k: u32, max: u64) -> GradedHodgeStructure {
    GradedHodgeStructure::from_hodge_numbers(k, &random_numbers(rng, k, max)).unwrap()
}

/// A connected family obeying hard Lefschetz, built from random primitive
/// pieces.
pub fn random_family(rng: &mut ChaCha8Rng, dim: u32) -> HodgeDiamondFamily {
    let mut pieces = vec![GradedHodgeStructure::unit()];
    for k in 1..=dim {
        pieces.push(random_structure(rng, k, 3));
    }
    PrimitiveDecomposition { dim, pieces }.reassemble().unwrap()
}

/// Full diamond `h[p][q]`, `0 <= p, q <= dim`.
pub fn diamond(x: &HodgeDiamondFamily) -> Vec<Vec<u64>> {
    let n = x.dim();
    (0..=n).map(|p| (0..=n).map(|q| x.h(p, q)).collect()).collect()
}

/// Independent Künneth oracle by convolving full diamonds.
pub fn convolve_diamonds(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len() + b.len() - 1;
    let mut out = vec![vec![0u64; n]; n];
    for (p1, row1) in a.iter().enumerate() {
        for (q1, &x) in row1.iter().enumerate() {
            for (p2, row2) in b.iter().enumerate() {
                for (q2, &y) in row2.iter().enumerate() {
                    out[p1 + p2][q1 + q2] += x * y;
                }
            }
        }
    }
    out
}

pub fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn random_state(rng: &mut ChaCha8Rng) -> CmState {
    match rng.gen_range(0..3) {
        0 => CmState::NotCm,
        1 => CmState::Unknown,
        _ => CmState::Cm,
    }
}

/// Leaf shapes of a weight-2 CM expression: each term is a weight-2 leaf, a
/// tensor of two weight-1 leaves, or a twisted weight-0 leaf.
#[derive(Clone, Debug)]
pub enum TermShape {
    Leaf(Vec<u64>),
    Tensor(Vec<u64>, Vec<u64>),
    Twist(u64),
}

pub fn random_cm_shape(rng: &mut ChaCha8Rng) -> Vec<TermShape> {
    let terms = rng.gen_range(1..=4);
    (0..terms)
        .map(|_| match rng.gen_range(0..3) {
            0 => TermShape::Leaf(random_numbers(rng, 2, 3)),
            1 => TermShape::Tensor(random_numbers(rng, 1, 2), random_numbers(rng, 1, 2)),
            _ => TermShape::Twist(rng.gen_range(1..=3)),
        })
        .collect()
}

pub fn leaf_count(shape: &[TermShape]) -> usize {
    shape
        .iter()
        .map(|t| match t {
            TermShape::Tensor(..) => 2,
            _ => 1,
        })
        .sum()
}

pub fn build_cm_expr(shape: &[TermShape], states: &[CmState]) -> CmExpr {
    let mut it = states.iter().copied();
    let mut n = 0;
    let mut leaf = |w: u32, h: &[u64], st: CmState| {
        n += 1;
        CmExpr::leaf(format!("L{n}"), GradedHodgeStructure::from_hodge_numbers(w, h).unwrap(), st)
    };
    let terms = shape
        .iter()
        .map(|t| match t {
            TermShape::Leaf(h) => leaf(2, h, it.next().unwrap()),
            TermShape::Tensor(a, b) => {
                let x = leaf(1, a, it.next().unwrap());
                let y = leaf(1, b, it.next().unwrap());
                CmExpr::tensor("T", vec![x, y])
            }
            TermShape::Twist(d) => CmExpr::twist(leaf(0, &[*d], it.next().unwrap()), 1),
        })
        .collect();
    CmExpr::sum("S", terms)
}

/// Root state before and after raising one leaf; monotonicity demands
/// `after >= before`.
pub fn cm_monotone_pair(rng: &mut ChaCha8Rng) -> (CmState, CmState) {
    let shape = random_cm_shape(rng);
    let n = leaf_count(&shape);
    let mut states: Vec<CmState> = (0..n).map(|_| random_state(rng)).collect();
    let before = cm_propagate(&build_cm_expr(&shape, &states)).unwrap().state;
    let i = rng.gen_range(0..n);
    states[i] = match states[i] {
        CmState::NotCm => {
            if rng.gen_bool(0.5) {
                CmState::Unknown
            } else {
                CmState::Cm
            }
        }
        _ => CmState::Cm,
    };
    let after = cm_propagate(&build_cm_expr(&shape, &states)).unwrap().state;
    (before, after)
}

// ---------------------------------------------------------------------------
// Cyclotomic generators

pub fn random_element(rng: &mut ChaCha8Rng, m: u32, range: i64) -> CyclotomicNumber {
    let d = CyclotomicField::get(m).degree();
    let coeffs = (0..d)
        .map(|_| BigRational::from_integer(rng.gen_range(-range..=range).into()))
        .collect();
    CyclotomicNumber::from_coeffs(m, coeffs)
}

pub fn random_vector(rng: &mut ChaCha8Rng, m: u32, n: usize) -> Vector {
    (0..n).map(|_| random_element(rng, m, 2)).collect()
}

pub fn random_nonzero_vector(rng: &mut ChaCha8Rng, m: u32, n: usize) -> Vector {
    loop {
        let v = random_vector(rng, m, n);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `k` vectors of `K^n` that are independent according to the oracle.
pub fn random_independent(rng: &mut ChaCha8Rng, m: u32, n: usize, k: usize) -> Vec<Vector> {
    loop {
        let vs: Vec<Vector> = (0..k).map(|_| random_vector(rng, m, n)).collect();
        if oracle_rank(&vs, m) == k {
            return vs;
        }
    }
}

/// Positive definite form `A A* + I` (conjugation commutes with every
/// complex embedding of a cyclotomic field).
pub fn random_definite_form(rng: &mut ChaCha8Rng, m: u32, n: usize) -> HermitianForm {
    let a: Matrix = (0..n).map(|_| random_vector(rng, m, n)).collect();
    let mut g: Matrix = vec![vec![CyclotomicNumber::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = if i == j { CyclotomicNumber::one() } else { CyclotomicNumber::zero() };
            for k in 0..n {
                s = s + &a[i][k] * &a[j][k].conj();
            }
            g[i][j] = s;
        }
    }
    HermitianForm::new(g).unwrap()
}

pub fn pick_field(rng: &mut ChaCha8Rng) -> u32 {
    if rng.gen_bool(0.5) {
        4
    } else {
        5
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracles

/// Rank over `Q` of a rational matrix: rows are cleared of denominators and
/// reduced by fraction-free (Bareiss) elimination over `Z`.
pub fn rational_rank(rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            r.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in col + 1..ncols {
                let t = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = t / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank over `K = Q(ζ_m)` of `vectors`, computed as the `Q`-rank of the
/// orbit `{ζ^j v}` divided by `[K : Q]`.
pub fn oracle_rank(vectors: &[Vector], m: u32) -> usize {
    let d = CyclotomicField::get(m).degree();
    let mut rows = Vec::with_capacity(vectors.len() * d);
    for v in vectors {
        for j in 0..d {
            let z = CyclotomicNumber::zeta_pow(m, j as i64);
            let mut row = Vec::with_capacity(v.len() * d);
            for x in v {
                let y = (&z * x).lift(m);
                row.extend(y.coeffs().iter().cloned());
            }
            rows.push(row);
        }
    }
    let r = rational_rank(rows);
    assert_eq!(r % d, 0, "Q-rank of a K-orbit must be a multiple of [K:Q]");
    r / d
}

pub fn oracle_span_equal(a: &[Vector], b: &[Vector], m: u32) -> bool {
    let ra = oracle_rank(a, m);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == oracle_rank(b, m) && oracle_rank(&both, m) == ra
}

pub fn oracle_in_span(basis: &[Vector], v: &Vector, m: u32) -> bool {
    let mut ext = basis.to_vec();
    ext.push(v.clone());
    oracle_rank(&ext, m) == oracle_rank(basis, m)
}

pub fn outer(a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> Matrix {
    a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect()
}

pub fn tensor_vec(u: &[CyclotomicNumber], v: &[CyclotomicNumber]) -> Vector {
    u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect()
}

/// `Σ c_k v_k`.
pub fn lin_comb(coeffs: &[CyclotomicNumber], vs: &[Vector]) -> Vector {
    let n = vs[0].len();
    let mut out = vec![CyclotomicNumber::zero(); n];
    for (c, v) in coeffs.iter().zip(vs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &(c * x);
        }
    }
    out
}

/// Recovers `(K Ω1 ⊕ W1, K Ω2 ⊕ W2)` from a basis of
/// `W = W1 ⊗ Ω2 ⊕ Ω1 ⊗ W2`: every `w` viewed as an `n1 × n2` matrix is
/// `ω Ω2ᵀ + Ω1 ηᵀ`, so the column spaces of the basis matrices span the
/// first space and the row spaces the second.
pub fn lemma7_recover(w: &SubspaceBasis, n1: usize, n2: usize) -> (SubspaceBasis, SubspaceBasis) {
    use hodge_core::qbar::linalg::greedy_basis;
    let mut cols = Vec::new();
    let mut rows = Vec::new();
    for v in w.vectors() {
        for j in 0..n2 {
            cols.push((0..n1).map(|i| v[i * n2 + j].clone()).collect::<Vector>());
        }
        for i in 0..n1 {
            rows.push(v[i * n2..(i + 1) * n2].to_vec());
        }
    }
    (
        SubspaceBasis::new(n1, greedy_basis(&cols)).unwrap(),
        SubspaceBasis::new(n2, greedy_basis(&rows)).unwrap(),
    )
}

pub fn bigint(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}

// ---------------------------------------------------------------------------
// One randomized instance per lemma algorithm. Each returns `Err` with a
// description when the algorithm disagrees with the oracle.

use hodge_core::qbar::{
    gram_schmidt_with_transform, ortho_complement_descend, rank1_factor, tensor_factor_recover,
    QbarError,
};

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Rank-one factorization of an outer product, or of a random matrix.
pub fn instance_rank1(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = pick_field(rng);
    let n1 = rng.gen_range(1..=6);
    let n2 = rng.gen_range(1..=6);
    let a: Matrix = if rng.gen_bool(0.7) {
        outer(&random_vector(rng, m, n1), &random_vector(rng, m, n2))
    } else {
        (0..n1).map(|_| random_vector(rng, m, n2)).collect()
    };
    let r = oracle_rank(&a, m);
    match rank1_factor(&a) {
        Ok((alpha, beta)) => {
            check(r == 1, || format!("factored a matrix of oracle rank {r}"))?;
            check(outer(&alpha, &beta) == a, || "outer product differs from input".into())?;
            let first = alpha.iter().find(|x| !x.is_zero());
            check(first.is_some_and(|x| x.is_one()), || "alpha not normalized".into())
        }
        Err(QbarError::ZeroMatrix) => check(r == 0, || "ZeroMatrix on a nonzero matrix".into()),
        Err(QbarError::NotElementary { rank }) => {
            check(r >= 2 && rank == r, || format!("NotElementary rank {rank}, oracle {r}"))
        }
        Err(e) => Err(format!("unexpected error {e}")),
    }
}

/// Recovery of `U` from a mixed basis of `U ⊗ Ω`.
pub fn instance_tensor_factor(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = pick_field(rng);
    let (n1, n2) = [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (1, 6), (6, 1), (3, 1), (1, 3)][rng.gen_range(0..9)];
    let k = rng.gen_range(1..=n1);
    let u = random_independent(rng, m, n1, k);
    let omega = random_nonzero_vector(rng, m, n2);
    // Mix by a random invertible matrix so the input basis is not the u_k ⊗ Ω.
    let mix = random_independent(rng, m, k, k);
    let w: Vec<Vector> = mix
        .iter()
        .map(|c| tensor_vec(&lin_comb(c, &u), &omega))
        .collect();
    let ws = SubspaceBasis::new(n1 * n2, w).map_err(|e| e.to_string())?;
    let rec = tensor_factor_recover(&ws, &omega).map_err(|e| e.to_string())?;
    check(rec.dim() == k, || format!("recovered dimension {} instead of {k}", rec.dim()))?;
    check(oracle_span_equal(rec.vectors(), &u, m), || "recovered span differs".into())?;
    for (r, w) in rec.vectors().iter().zip(ws.vectors()) {
        check(&tensor_vec(r, &omega) == w, || "u ⊗ Ω does not reproduce w".into())?;
    }
    Ok(())
}

/// Two-sided recovery of `K Ω1 ⊕ W1` and `K Ω2 ⊕ W2`.
pub fn instance_two_sided(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = pick_field(rng);
    let (n1, n2) = [(2, 2), (2, 3), (3, 2)][rng.gen_range(0..3)];
    let h1 = rng.gen_range(1..n1);
    let h2 = rng.gen_range(1..n2);
    let b1 = random_independent(rng, m, n1, h1 + 1);
    let b2 = random_independent(rng, m, n2, h2 + 1);
    let (omega1, w1) = (b1[h1].clone(), b1[..h1].to_vec());
    let (omega2, w2) = (b2[h2].clone(), b2[..h2].to_vec());
    let mut gens: Vec<Vector> = w1.iter().map(|x| tensor_vec(x, &omega2)).collect();
    gens.extend(w2.iter().map(|y| tensor_vec(&omega1, y)));
    let k = gens.len();
    let mix = random_independent(rng, m, k, k);
    let w: Vec<Vector> = mix.iter().map(|c| lin_comb(c, &gens)).collect();
    let ws = SubspaceBasis::new(n1 * n2, w).map_err(|e| e.to_string())?;
    let (r1, r2) = lemma7_recover(&ws, n1, n2);
    check(oracle_span_equal(r1.vectors(), &b1, m), || "W1' differs from K Ω1 ⊕ W1".into())?;
    check(oracle_span_equal(r2.vectors(), &b2, m), || "W2' differs from K Ω2 ⊕ W2".into())?;
    check(r1.dim() == h1 + 1 && r2.dim() == h2 + 1, || "wrong dimensions".into())
}

/// Gram-Schmidt on a definite form, or on an indefinite diagonal form.
pub fn instance_gram_schmidt(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = pick_field(rng);
    let definite = rng.gen_bool(0.8);
    let n = if definite { rng.gen_range(1..=6) } else { rng.gen_range(2..=4) };
    let k = rng.gen_range(1..=n);
    let h = if definite {
        random_definite_form(rng, m, n)
    } else {
        HermitianForm::diag((0..n).map(|i| CyclotomicNumber::from_int(if i % 2 == 0 { 1 } else { -1 })).collect())
    };
    let x = if definite {
        random_independent(rng, m, n, k)
    } else {
        // Small integer entries make isotropic vectors likely.
        loop {
            let vs: Vec<Vector> = (0..k)
                .map(|_| (0..n).map(|_| CyclotomicNumber::from_int(rng.gen_range(-1..=1))).collect())
                .collect();
            if oracle_rank(&vs, m) == k {
                break vs;
            }
        }
    };
    let xs = SubspaceBasis::new(n, x.clone()).map_err(|e| e.to_string())?;
    // Oracle: step j is isotropic iff the leading j x j Gram determinant
    // vanishes while the previous ones do not.
    let first_singular = (1..=k).find(|&j| gram_det(&h, &x[..j]).is_zero());
    match gram_schmidt_with_transform(&xs, &h) {
        Ok((v, t)) => {
            check(first_singular.is_none(), || "missed an isotropic vector".into())?;
            let vs = v.vectors();
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        check(h.eval(&vs[i], &vs[j]).is_zero(), || format!("h(v{i}, v{j}) != 0"))?;
                    }
                }
                check(t[i][i].is_one() && t[i][i + 1..].iter().all(|c| c.is_zero()), || {
                    "transform is not unitriangular".into()
                })?;
                check(lin_comb(&t[i], &x) == vs[i], || "v != T x".into())?;
            }
            check(oracle_span_equal(vs, &x, m), || "span changed".into())
        }
        Err(QbarError::IsotropicVector { index }) => check(first_singular == Some(index + 1), || {
            format!("isotropic at {index}, oracle {first_singular:?}")
        }),
        Err(e) => Err(format!("unexpected error {e}")),
    }
}

/// Determinant of `[h(x_i, x_j)]` by cofactor expansion.
pub fn gram_det(h: &HermitianForm, x: &[Vector]) -> CyclotomicNumber {
    let g: Matrix = x.iter().map(|a| x.iter().map(|b| h.eval(a, b)).collect()).collect();
    det(&g)
}

pub fn det(a: &Matrix) -> CyclotomicNumber {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut total = CyclotomicNumber::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Matrix = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &a[0][j] * &det(&minor);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

/// Orthogonal complement of a random orthogonal `U1` in a random basis of `K^n`.
pub fn instance_ortho_complement(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = pick_field(rng);
    let n = rng.gen_range(2..=6);
    let k = rng.gen_range(1..n);
    let h = random_definite_form(rng, m, n);
    let raw = SubspaceBasis::new(n, random_independent(rng, m, n, k)).map_err(|e| e.to_string())?;
    let (u1, _) = gram_schmidt_with_transform(&raw, &h).map_err(|e| e.to_string())?;
    let ambient = SubspaceBasis::new(n, random_independent(rng, m, n, n)).map_err(|e| e.to_string())?;
    let out = ortho_complement_descend(&ambient, &u1, &h).map_err(|e| e.to_string())?;
    check(out.dim() + k == n, || format!("dimensions {} + {k} != {n}", out.dim()))?;
    for v in out.vectors() {
        for u in u1.vectors() {
            check(h.eval(v, u).is_zero(), || "output not orthogonal to U1".into())?;
        }
    }
    let mut all = out.vectors().to_vec();
    all.extend(u1.vectors().iter().cloned());
    check(oracle_rank(&all, m) == n, || "output and U1 are dependent".into())
}
