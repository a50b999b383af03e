//! Exact linear algebra over cyclotomic fields.

use super::field::CyclotomicNumber;

pub type Vector = Vec<CyclotomicNumber>;
pub type Matrix = Vec<Vec<CyclotomicNumber>>;

pub fn zero_vector(n: usize) -> Vector {
    vec![CyclotomicNumber::zero(); n]
}

pub fn is_zero_vector(v: &[CyclotomicNumber]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add(a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &CyclotomicNumber, v: &[CyclotomicNumber]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `Σ c_k v_k`.
pub fn combine(coeffs: &[CyclotomicNumber], vectors: &[Vector], dim: usize) -> Vector {
    let mut out = zero_vector(dim);
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &(c * x);
        }
    }
    out
}

/// Reduced row echelon form and pivot columns.
pub fn rref(rows: &[Vector]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].inv().expect("nonzero pivot");
        m[r] = scale(&inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let row = scale(&f, &m[r]);
                m[i] = sub(&m[i], &row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).1.len()
}

pub fn independent(rows: &[Vector]) -> bool {
    rank(rows) == rows.len()
}

/// Solutions `x` of `A x = 0`, one basis vector per free column.
pub fn nullspace(a: &[Vector], ncols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(a);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = zero_vector(ncols);
        x[free] = CyclotomicNumber::one();
        for (row, &p) in r.iter().zip(&pivots) {
            x[p] = -&row[free];
        }
        out.push(x);
    }
    out
}

/// Coefficients `c` with `Σ c_k basis_k = v`, if `v` lies in the span.
pub fn solve_in_span(basis: &[Vector], v: &[CyclotomicNumber]) -> Option<Vector> {
    let dim = v.len();
    let k = basis.len();
    if k == 0 {
        return is_zero_vector(v).then(Vec::new);
    }
    // Augmented system with columns basis_k | v.
    let rows: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut row: Vector = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = zero_vector(k);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}

pub fn in_span(basis: &[Vector], v: &[CyclotomicNumber]) -> bool {
    solve_in_span(basis, v).is_some()
}

pub fn span_equal(a: &[Vector], b: &[Vector]) -> bool {
    let ra = rank(a);
    ra == rank(b) && {
        let mut both = a.to_vec();
        both.extend_from_slice(b);
        rank(&both) == ra
    }
}

/// Keeps, in order, each vector that is independent of those kept so far.
pub fn greedy_basis(vectors: &[Vector]) -> Vec<Vector> {
    let mut kept: Vec<Vector> = Vec::new();
    for v in vectors {
        if is_zero_vector(v) {
            continue;
        }
        if !in_span(&kept, v) {
            kept.push(v.clone());
        }
    }
    kept
}

/// Kronecker product with index `(i1, i2) ↦ i1 * n2 + i2`.
pub fn kronecker(a: &[Vector], b: &[Vector]) -> Matrix {
    let (ra, ca) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (rb, cb) = (b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = vec![zero_vector(ca * cb); ra * rb];
    for i1 in 0..ra {
        for j1 in 0..ca {
            if a[i1][j1].is_zero() {
                continue;
            }
            for i2 in 0..rb {
                for j2 in 0..cb {
                    out[i1 * rb + i2][j1 * cb + j2] = &a[i1][j1] * &b[i2][j2];
                }
            }
        }
    }
    out
}

/// `u ⊗ v` with the same index convention as [`kronecker`].
pub fn tensor_vectors(u: &[CyclotomicNumber], v: &[CyclotomicNumber]) -> Vector {
    u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect()
}

pub fn transpose(a: &[Vector]) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn conj_transpose(a: &[Vector]) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].conj()).collect()).collect()
}
