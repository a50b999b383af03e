use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hodge_core::covers::{hypersurface_hodge_oracle, vz_report};
use hodge_core::hodge::CmState;
use hodge_core::qbar::{gram_schmidt, CyclotomicNumber, HermitianForm, SubspaceBasis};
use hodge_core::tower::{bv_step, run_tower, CYWithInvolution, TowerBase, TowerSpec};

fn borcea_voisin(c: &mut Criterion) {
    let e = CYWithInvolution::elliptic_curve(CmState::Cm);
    c.bench_function("bv_step/kummer", |b| b.iter(|| bv_step(black_box(&e), &e).unwrap()));
    let spec = |n: usize| TowerSpec {
        bases: (0..n)
            .map(|i| TowerBase {
                name: format!("E{i}"),
                cy: e.clone(),
            })
            .collect(),
    };
    for n in [3usize, 4] {
        let s = spec(n);
        c.bench_function(&format!("run_tower/{n}_curves"), |b| b.iter(|| run_tower(black_box(&s)).unwrap()));
    }
}

fn cyclic_covers(c: &mut Criterion) {
    c.bench_function("vz_report/5_2", |b| b.iter(|| vz_report(black_box(5), 2).unwrap()));
    c.bench_function("hypersurface_oracle/5_4", |b| b.iter(|| hypersurface_hodge_oracle(black_box(5), 4)));
}

fn cyclotomic_gram_schmidt(c: &mut Criterion) {
    // A deterministic basis of Q(ζ5)^5 and a diagonal positive form.
    let n = 5;
    let vectors = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = ((i * 3 + j * 7) % 5) as i64;
                    &CyclotomicNumber::zeta_pow(5, k) + &CyclotomicNumber::from_int(if i == j { 3 } else { 0 })
                })
                .collect()
        })
        .collect();
    let x = SubspaceBasis::new(n, vectors).unwrap();
    let h = HermitianForm::diag((1..=n as i64).map(CyclotomicNumber::from_int).collect());
    c.bench_function("gram_schmidt/qzeta5_dim5", |b| b.iter(|| gram_schmidt(black_box(&x), &h).unwrap()));
}

criterion_group!(benches, borcea_voisin, cyclic_covers, cyclotomic_gram_schmidt);
criterion_main!(benches);
