//! Fixed examples for the cyclotomic linear-algebra routines.

use anyhow::{bail, Result};
use serde_json::json;

use hodge_core::qbar::linalg::{span_equal, tensor_vectors};
use hodge_core::qbar::{
    gram_schmidt, gram_schmidt_with_transform, hodge_basis_descent, is_split_compatible, ortho_complement_descend,
    rank1_factor, summand_basis_extract, tensor_factor_recover, CyclotomicNumber, HermitianForm, HodgePiece,
    QbarError, SubspaceBasis, Vector,
};

use crate::{render, Emit};

fn c(n: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_int(n)
}

fn r(n: i64, d: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_ratio(n, d)
}

fn vecs(rows: &[&[i64]]) -> Vec<Vector> {
    rows.iter().map(|row| row.iter().map(|&x| c(x)).collect()).collect()
}

fn basis(n: usize, rows: &[&[i64]]) -> Result<SubspaceBasis, String> {
    SubspaceBasis::new(n, vecs(rows)).map_err(|e| e.to_string())
}

fn expect(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

type Check = fn() -> Result<(), String>;

const CHECKS: &[(&str, Check)] = &[
    ("rank1 factor of an integer outer product", || {
        let (a, b) = rank1_factor(&vecs(&[&[1, 2], &[2, 4]])).map_err(|e| e.to_string())?;
        expect(a == vecs(&[&[1, 2]])[0] && b == vecs(&[&[1, 2]])[0], "factors differ from (1,2), (1,2)")
    }),
    ("rank1 factor over Q(i)", || {
        let i = CyclotomicNumber::i();
        let m = vec![vec![c(1), i.clone()], vec![-&i, c(1)]];
        let (a, b) = rank1_factor(&m).map_err(|e| e.to_string())?;
        expect(a == vec![c(1), -&i] && b == vec![c(1), i], "factors differ from (1,-i), (1,i)")
    }),
    ("rank1 factor rejects rank 2", || {
        expect(
            rank1_factor(&vecs(&[&[1, 0], &[0, 1]])) == Err(QbarError::NotElementary { rank: 2 }),
            "identity was not rejected as rank 2",
        )
    }),
    ("tensor factor recovery over Q(zeta5)", || {
        let z = CyclotomicNumber::zeta(5);
        let omega = vec![c(0), z.clone(), c(2)];
        let u = vec![vec![c(1), z.clone(), c(0)], vec![c(0), c(1), &z * &z]];
        let w: Vec<Vector> = u.iter().map(|x| tensor_vectors(x, &omega)).collect();
        let w = SubspaceBasis::new(9, w).map_err(|e| e.to_string())?;
        let rec = tensor_factor_recover(&w, &omega).map_err(|e| e.to_string())?;
        expect(span_equal(rec.vectors(), &u), "recovered span differs")
    }),
    ("gram-schmidt with unitriangular transform", || {
        let x = basis(2, &[&[1, 1], &[1, 0]])?;
        let (v, t) = gram_schmidt_with_transform(&x, &HermitianForm::identity(2)).map_err(|e| e.to_string())?;
        expect(
            v.vectors()[1] == vec![r(1, 2), r(-1, 2)] && t[1] == vec![r(-1, 2), c(1)],
            "second vector is not (1/2, -1/2)",
        )
    }),
    ("gram-schmidt reports an isotropic vector", || {
        let h = HermitianForm::diag(vec![c(1), c(-1)]);
        expect(
            gram_schmidt(&basis(2, &[&[1, 1]])?, &h) == Err(QbarError::IsotropicVector { index: 0 }),
            "(1,1) not reported isotropic",
        )
    }),
    ("orthogonal complement under diag(1,2)", || {
        let h = HermitianForm::diag(vec![c(1), c(2)]);
        let out = ortho_complement_descend(&SubspaceBasis::standard(2), &basis(2, &[&[1, 1]])?, &h)
            .map_err(|e| e.to_string())?;
        expect(out.vectors() == [vec![r(2, 3), r(-1, 3)]], "complement is not (2/3, -1/3)")
    }),
    ("summand bases of a diagonal line", || {
        let f = basis(4, &[&[1, 0, 1, 0]])?;
        let (a, b) = summand_basis_extract(2, 2, &f).map_err(|e| e.to_string())?;
        expect(
            a.vectors() == &vecs(&[&[1, 0]])[..] && b.vectors() == &vecs(&[&[1, 0]])[..] && !is_split_compatible(2, 2, &f),
            "projections differ from (1,0), (1,0) or line reported split",
        )
    }),
    ("hodge basis descent in weight 0", || {
        let h = HermitianForm::diag(vec![c(2), c(3)]);
        let f0 = basis(2, &[&[1, 1], &[0, 1]])?;
        let pieces = hodge_basis_descent(std::slice::from_ref(&f0), &h, 0).map_err(|e| e.to_string())?;
        expect(pieces == vec![HodgePiece { p: 0, q: 0, basis: f0 }], "weight 0 piece is not F^0")
    }),
];

pub fn run(emit: Emit) -> Result<String> {
    let results: Vec<(&str, Result<(), String>)> = CHECKS.iter().map(|(name, f)| (*name, f())).collect();
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    let out = match emit {
        Emit::Json => render::json(&json!({
            "checks": results
                .iter()
                .map(|(name, r)| json!({ "name": name, "ok": r.is_ok(), "detail": r.as_ref().err() }))
                .collect::<Vec<_>>(),
            "passed": results.len() - failed,
            "failed": failed,
        }))?,
        Emit::Table => {
            let mut s = String::new();
            for (name, r) in &results {
                match r {
                    Ok(()) => s.push_str(&format!("PASS  {name}\n")),
                    Err(e) => s.push_str(&format!("FAIL  {name}: {e}\n")),
                }
            }
            s.push_str(&format!("{} passed, {failed} failed\n", results.len() - failed));
            s
        }
    };
    if failed > 0 {
        print!("{out}");
        bail!("{failed} lemma self-test(s) failed");
    }
    Ok(out)
}
