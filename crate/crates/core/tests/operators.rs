use ncgeo::expr::parse_element;
use ncgeo::operators::{
    build_dirac, build_lindbladian, derivation_sparse, heat_apply, BasisWindow, SparseMatrix,
};
use ncgeo::torus::{DerivationSpec, TorusElement, C64};

const THETA: f64 = 0.37;

fn el(s: &str) -> TorusElement {
    parse_element(s, THETA).unwrap()
}

fn max_entry(m: &SparseMatrix) -> f64 {
    m.triplets().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn perturbed_laplacian_splits_into_b_plus_a() {
    let w = BasisWindow::new(8);
    let (r1, r2) = (el("U+U^-1"), el("0"));
    let l = build_lindbladian(&r1, &r2, w).unwrap();
    let l0 = build_lindbladian(&r2, &r2, w).unwrap();
    let d1 = derivation_sparse(&DerivationSpec::canonical(THETA, 1).unwrap(), w);
    let d2 = derivation_sparse(&DerivationSpec::canonical(THETA, 2).unwrap(), w);
    let dr1 = derivation_sparse(&DerivationSpec::inner(r1.clone()), w);
    let dr2 = derivation_sparse(&DerivationSpec::inner(r2.clone()), w);
    let dd1 = derivation_sparse(&DerivationSpec::inner(r1.d1()), w);
    let dd2 = derivation_sparse(&DerivationSpec::inner(r2.d2()), w);
    let b = dr1
        .matmul(&dr1)
        .add(&dr2.matmul(&dr2))
        .add(&dd1)
        .add(&dd2)
        .scale(c(-0.5, 0.0));
    let a = dr1.matmul(&d1).add(&dr2.matmul(&d2)).scale(c(-1.0, 0.0));
    let diff = l.matrix().sub(l0.matrix()).sub(&b.add(&a));
    assert!(max_entry(&diff) < 1e-12, "{}", max_entry(&diff));
    assert!(max_entry(&a) > 1.0);
}

#[test]
fn dirac_square_is_block_diagonal_laplacian() {
    let w = BasisWindow::new(6);
    for r in ["U", "U+2V^-1", "0.5U^2V+0.25i"] {
        let r = el(r);
        let rs = r.adjoint();
        let d = build_dirac(&r, w);
        let sq = d.operator().matrix().matmul(d.operator().matrix());
        let d1 = derivation_sparse(&DerivationSpec::canonical(THETA, 1).unwrap(), w);
        let d2 = derivation_sparse(&DerivationSpec::canonical(THETA, 2).unwrap(), w);
        let dr = derivation_sparse(&DerivationSpec::inner(r.clone()), w);
        let drs = derivation_sparse(&DerivationSpec::inner(rs.clone()), w);
        let l0 = d1.matmul(&d1).add(&d2.matmul(&d2)).scale(c(-0.5, 0.0));
        let i = c(0.0, 1.0);
        let e1 = dr
            .matmul(&drs)
            .add(&d1.matmul(&drs))
            .add(&dr.matmul(&d1))
            .add(&d2.matmul(&drs).sub(&dr.matmul(&d2)).scale(i));
        let e2 = drs
            .matmul(&dr)
            .add(&d1.matmul(&dr))
            .add(&drs.matmul(&d1))
            .add(&drs.matmul(&d2).sub(&d2.matmul(&dr)).scale(i));
        let l1 = l0.add(&e1.scale(c(-0.5, 0.0)));
        let l2 = l0.add(&e2.scale(c(-0.5, 0.0)));
        let z = SparseMatrix::zeros(w.dim(), w.dim());
        let expected = SparseMatrix::block2(&l1, &z, &z, &l2).scale(c(-2.0, 0.0));
        let diff = sq.sub(&expected);
        assert!(max_entry(&diff) < 1e-12, "{}", max_entry(&diff));
    }
}

#[test]
fn truncation_error_shrinks_with_window() {
    let (r1, r2) = (el("U+U^-1"), el("0"));
    let x = el("U+2V-UV^-1");
    let t = 0.1;
    let mut errs = Vec::new();
    for n in [2usize, 4, 6, 8, 10, 12] {
        let small = heat_apply(
            &build_lindbladian(&r1, &r2, BasisWindow::new(n)).unwrap(),
            t,
            &x,
        )
        .unwrap();
        let large = heat_apply(
            &build_lindbladian(&r1, &r2, BasisWindow::new(n + 8)).unwrap(),
            t,
            &x,
        )
        .unwrap();
        errs.push(small.distance(&large));
    }
    assert!(errs.windows(2).all(|e| e[1] < e[0]), "{errs:?}");
    assert!(errs[5] < 1e-7, "{errs:?}");
}
