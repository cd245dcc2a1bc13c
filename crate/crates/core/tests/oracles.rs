//! Cross-checks against nalgebra's dense decompositions and against scalar
//! closed forms.

use heinzlab::inequality::block::{block_form, theorem2_steps, BlockVariant};
use heinzlab::inequality::{reference_counterexample, reference_pair, zhan_check, NuGrid};
use heinzlab::linalg::random::{random_psd_with, rng_from_seed};
use heinzlab::linalg::{
    eigvalsh, product_eigenvalues, singular_values, Field, GeneralMatrix, HermitianMatrix, PsdMatrix, C64,
};
use heinzlab::means::{heinz_matrix, heinz_scalar};
use heinzlab::monotone::{eval_integral, eval_spectral, MonotoneFunctionSpec};
use heinzlab::verdict::Tolerances;
use nalgebra::{DMatrix, DVector};

fn to_na(m: &GeneralMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn to_na_real(m: &GeneralMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].re)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `A^p` from nalgebra's symmetric eigendecomposition, zeroing eigenvalues
/// below `1e-12 * λ_max`.
fn na_power(a: &DMatrix<f64>, p: f64) -> DMatrix<f64> {
    let eig = a.clone().symmetric_eigen();
    let top = eig.eigenvalues.max();
    let d = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| if l <= 1e-12 * top { 0.0 } else { l.powf(p) }),
    );
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

fn na_sigma(m: &DMatrix<f64>) -> Vec<f64> {
    sorted_desc(m.singular_values().iter().copied().collect())
}

fn na_gap(a: &DMatrix<f64>, b: &DMatrix<f64>, nu: f64) -> f64 {
    let h = (na_power(a, nu) * na_power(b, 1.0 - nu) + na_power(a, 1.0 - nu) * na_power(b, nu)) * 0.5;
    let g = na_power(a, 0.5) * na_power(b, 0.5);
    na_sigma(&h)[1] - na_sigma(&g)[1]
}

fn assert_close(x: &[f64], y: &[f64], tol: f64) {
    assert_eq!(x.len(), y.len());
    for (a, b) in x.iter().zip(y) {
        assert!((a - b).abs() <= tol, "{x:?} vs {y:?}");
    }
}

#[test]
fn hermitian_eigenvalues_match_nalgebra() {
    let mut rng = rng_from_seed(1);
    for dim in [1, 2, 3, 5, 8, 13] {
        let g = heinzlab::linalg::random::gaussian_matrix(&mut rng, dim, dim, Field::Complex);
        let h = HermitianMatrix::new(&g).unwrap();
        let ours = eigvalsh(&h).unwrap();
        let theirs = sorted_desc(to_na(h.as_general()).symmetric_eigenvalues().iter().copied().collect());
        assert_close(&ours, &theirs, 1e-12 * (1.0 + theirs[0].abs()));
    }
}

#[test]
fn singular_values_match_nalgebra() {
    let mut rng = rng_from_seed(2);
    for (rows, cols) in [(1, 1), (2, 3), (4, 4), (7, 3), (6, 6)] {
        let g = heinzlab::linalg::random::gaussian_matrix(&mut rng, rows, cols, Field::Complex);
        let ours = singular_values(&g).unwrap().values;
        let theirs = sorted_desc(to_na(&g).singular_values().iter().copied().collect());
        assert_close(&ours, &theirs, 1e-12 * (1.0 + theirs[0]));
    }
}

#[test]
fn product_eigenvalues_match_schur_of_product() {
    let mut rng = rng_from_seed(3);
    for dim in [2, 3, 6] {
        let a = random_psd_with(&mut rng, dim, dim, 1.0, Field::Real).unwrap();
        let b = random_psd_with(&mut rng, dim, dim - 1, 1.0, Field::Real).unwrap();
        let ours = product_eigenvalues(&a, &b).unwrap();
        let ab = to_na_real(a.as_general()) * to_na_real(b.as_general());
        let theirs = sorted_desc(ab.complex_eigenvalues().iter().map(|z| z.re).collect());
        assert_close(&ours, &theirs, 1e-10 * (1.0 + theirs[0]));
    }
}

#[test]
fn fractional_powers_match_nalgebra() {
    let mut rng = rng_from_seed(4);
    for rank in [1, 3, 4] {
        let a = random_psd_with(&mut rng, 4, rank, 1.0, Field::Real).unwrap();
        for p in [0.05, 0.5, 0.9, 1.7] {
            let ours = a.power(p).unwrap();
            let theirs = na_power(&to_na_real(a.as_general()), p);
            let diff = (to_na_real(ours.as_general()) - &theirs).abs().max();
            assert!(diff < 1e-11 * (1.0 + theirs.abs().max()), "rank {rank} p {p}: {diff:e}");
        }
    }
}

#[test]
fn heinz_mean_of_reference_pair_matches_spectral_oracle() {
    let (a, b) = reference_pair();
    let (na, nb) = (to_na_real(a.as_general()), to_na_real(b.as_general()));
    let nu = 0.05;
    let oracle = (na_power(&na, nu) * na_power(&nb, 1.0 - nu) + na_power(&na, 1.0 - nu) * na_power(&nb, nu)) * 0.5;
    let ours = heinz_matrix(&a, &b, nu).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((ours[(i, j)].re - oracle[(i, j)]).abs() < 1e-12, "({i},{j})");
            assert!(ours[(i, j)].im.abs() < 1e-14);
        }
    }
}

#[test]
fn reference_gap_matches_nalgebra_and_independent_bisection() {
    let (a, b) = reference_pair();
    let (na, nb) = (to_na_real(a.as_general()), to_na_real(b.as_general()));
    let report = reference_counterexample(&NuGrid::new(vec![0.05, 0.2, 0.4]).unwrap()).unwrap();
    for row in &report.scan {
        assert!((row.g - na_gap(&na, &nb, row.nu)).abs() < 1e-12, "nu {}", row.nu);
    }
    let (mut lo, mut hi) = (0.01, 0.4);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if na_gap(&na, &nb, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((report.threshold - lo).abs() < 2e-6, "{} vs {lo}", report.threshold);
    // published σ(A^{1/2}B^{1/2}), rounded to three decimals
    let geom = na_sigma(&(na_power(&na, 0.5) * na_power(&nb, 0.5)));
    assert_close(&geom, &[6.451, 0.620, 0.0], 1e-3);
}

#[test]
fn zhan_holds_on_reference_pair_at_small_s() {
    let (a, b) = reference_pair();
    let v = zhan_check(&a, &b, 0.05, &Tolerances::default()).unwrap();
    assert!(v.holds);
    let sum = to_na_real(a.as_general()) + to_na_real(b.as_general());
    let rhs: Vec<f64> = v.comparisons.iter().map(|c| c.rhs).collect();
    assert_close(&rhs, &na_sigma(&sum), 1e-12);
}

#[test]
fn theorem2_chain_on_commuting_diagonals_matches_scalars() {
    let (da, db) = ([3.0, 0.5, 0.0], [1.0, 2.0, 4.0]);
    let a = PsdMatrix::diag(&da).unwrap();
    let b = PsdMatrix::diag(&db).unwrap();
    for r in [0.0, 0.3, 0.5, 1.0] {
        let steps = theorem2_steps(&a, &b, r, &Tolerances::default()).unwrap();
        assert!(steps.holds());
        let pw = |x: f64, p: f64| {
            if x == 0.0 {
                if p == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                x.powf(p)
            }
        };
        let lambda = sorted_desc(
            da.iter()
                .zip(&db)
                .map(|(&x, &y)| pw(x, r + 1.0) + pw(y, r + 1.0))
                .collect(),
        );
        let sigma = sorted_desc(
            da.iter()
                .zip(&db)
                .map(|(&x, &y)| (pw(x, 1.0 + r / 2.0) * pw(y, r / 2.0) + pw(x, r / 2.0) * pw(y, 1.0 + r / 2.0)).abs())
                .collect(),
        );
        assert_close(&steps.outer.lambda, &lambda, 1e-12);
        assert_close(&steps.outer.sigma, &sigma, 1e-12);
        for (s, l) in sigma.iter().zip(&lambda) {
            assert!(s <= l);
        }
    }
}

#[test]
fn block_spectrum_matches_product_oracle() {
    let mut rng = rng_from_seed(6);
    let a = random_psd_with(&mut rng, 4, 4, 1.0, Field::Real).unwrap();
    let b = random_psd_with(&mut rng, 4, 3, 1.0, Field::Real).unwrap();
    let r = 0.6;
    let form = block_form(&a, &b, r, BlockVariant::PowerOutside, &Tolerances::default()).unwrap();
    let (na, nb) = (to_na_real(a.as_general()), to_na_real(b.as_general()));
    let product = (&na + &nb) * (na_power(&na, r) + na_power(&nb, r));
    let oracle = sorted_desc(product.complex_eigenvalues().iter().map(|z| z.re).collect());
    let z = form.block.z().eigenvalues();
    assert_close(&z[..4], &oracle, 1e-9 * (1.0 + oracle[0]));
    for l in &z[4..] {
        assert!(l.abs() < 1e-12 * (1.0 + oracle[0]));
    }
}

#[test]
fn atomic_measure_matches_scalar_closed_form() {
    let f = MonotoneFunctionSpec::atoms(0.5, 0.25, &[(0.1, 1.0), (7.0, 0.3)]).unwrap();
    let d = [0.0, 1e-3, 2.0, 50.0];
    let a = PsdMatrix::diag(&d).unwrap();
    let spectral = eval_spectral(&f, &a);
    let integral = eval_integral(&f, &a, 1e-10).unwrap();
    for (i, &t) in d.iter().enumerate() {
        let exact = 0.5 + 0.25 * t + 0.1 * t / (t + 0.1) + 0.3 * 7.0 * t / (t + 7.0);
        assert!((spectral[(i, i)].re - exact).abs() < 1e-13);
        assert!((integral[(i, i)].re - exact).abs() < 1e-12);
    }
}

#[test]
fn scalar_heinz_mean_is_between_geometric_and_arithmetic() {
    for (a, b) in [(1.0, 4.0), (0.0, 3.0), (2.5, 2.5)] {
        for nu in [0.0, 0.1, 0.5, 0.8, 1.0] {
            let h = heinz_scalar(a, b, nu).unwrap();
            assert!(h >= (a * b).sqrt() - 1e-15 && h <= 0.5 * (a + b) + 1e-15);
        }
    }
    assert_eq!(heinz_scalar(4.0, 9.0, 0.5).unwrap(), 6.0);
}
