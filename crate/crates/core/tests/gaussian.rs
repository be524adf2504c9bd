mod common;

use multistep_barrier::gaussian::{bvn_cdf, mvn_cdf, mvn_cdf_qmc, norm_cdf, MvnProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_brownian(rng: &mut ChaCha8Rng, n: usize) -> MvnProblem {
    let mut t = 0.0;
    let times: Vec<f64> = (0..n)
        .map(|_| {
            t += rng.random_range(0.02..0.5);
            t
        })
        .collect();
    let signs: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let z: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..2.5)).collect();
    MvnProblem::brownian(&times, &signs, z).unwrap()
}

/// Random correlation matrix `D^-1/2 A A^T D^-1/2`.
fn random_corr(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let a: Vec<f64> = (0..n * (n + 1)).map(|_| rng.random_range(-1.0..1.0)).collect();
    let cols = n + 1;
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = (0..cols).map(|k| a[i * cols + k] * a[j * cols + k]).sum();
        }
    }
    let d: Vec<f64> = (0..n).map(|i| s[i * n + i].sqrt()).collect();
    let mut r = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            r[i * n + j] = if i == j { 1.0 } else { s[i * n + j] / (d[i] * d[j]) };
        }
    }
    r
}

#[test]
fn sequential_quadrature_agrees_with_lattice_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 4..=8 {
        for _ in 0..3 {
            let p = random_brownian(&mut rng, n);
            let chain = mvn_cdf(&p, 1e-7, 1).unwrap();
            let qmc = mvn_cdf_qmc(&p, 1e-6, 1).unwrap();
            assert!(
                (chain.value - qmc.value).abs() <= qmc.error + chain.error + 1e-9,
                "n={n}: {} vs {} (qmc error {})",
                chain.value,
                qmc.value,
                qmc.error
            );
        }
    }
}

#[test]
fn low_dimensions_match_conditioning_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let rho = rng.random_range(-0.99..0.99);
        assert!((bvn_cdf(a, b, rho) - common::cdf2(a, b, rho)).abs() < 1e-11);

        let corr = random_corr(&mut rng, 3);
        let lim = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let p = MvnProblem::new(lim.to_vec(), corr.clone()).unwrap();
        let got = mvn_cdf(&p, 1e-8, 0).unwrap();
        let want = common::cdf3(lim, corr[1], corr[2], corr[5]);
        assert!((got.value - want).abs() < 1e-8, "{} vs {want}", got.value);
    }
}

#[test]
fn infinite_limit_marginalises() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5 {
        let n = 5;
        let corr = random_corr(&mut rng, n);
        let mut lim: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..2.0)).collect();
        lim[2] = f64::INFINITY;
        let full = mvn_cdf(&MvnProblem::new(lim.clone(), corr.clone()).unwrap(), 1e-7, 3).unwrap();
        let keep = [0, 1, 3, 4];
        let sub = MvnProblem::from_fn(keep.iter().map(|&i| lim[i]).collect(), |i, j| corr[keep[i] * n + keep[j]]).unwrap();
        let reduced = mvn_cdf(&sub, 1e-7, 3).unwrap();
        assert!((full.value - reduced.value).abs() <= full.error + reduced.error + 1e-12);
    }
}

#[test]
fn permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 6;
    let corr = random_corr(&mut rng, n);
    let lim: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..2.0)).collect();
    let base = mvn_cdf(&MvnProblem::new(lim.clone(), corr.clone()).unwrap(), 1e-6, 5).unwrap();
    let perm = [3, 0, 5, 1, 4, 2];
    let permuted =
        MvnProblem::from_fn(perm.iter().map(|&i| lim[i]).collect(), |i, j| corr[perm[i] * n + perm[j]]).unwrap();
    let other = mvn_cdf(&permuted, 1e-6, 9).unwrap();
    assert!((base.value - other.value).abs() <= base.error + other.error);
}

#[test]
fn independent_blocks_factorise() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let a = random_corr(&mut rng, 2);
    let b = random_corr(&mut rng, 3);
    let lim = [0.3, -0.2, 1.1, 0.4, 0.0];
    let p = MvnProblem::from_fn(lim.to_vec(), |i, j| match (i < 2, j < 2) {
        (true, true) => a[i * 2 + j],
        (false, false) => b[(i - 2) * 3 + (j - 2)],
        _ => 0.0,
    })
    .unwrap();
    let got = mvn_cdf(&p, 1e-7, 2).unwrap();
    let want = common::cdf2(lim[0], lim[1], a[1]) * common::cdf3([lim[2], lim[3], lim[4]], b[1], b[2], b[5]);
    assert!((got.value - want).abs() <= got.error + 1e-9, "{} vs {want}", got.value);
}

#[test]
fn brownian_one_point_is_univariate() {
    let p = MvnProblem::brownian(&[0.7], &[-1.0], vec![0.37]).unwrap();
    assert_eq!(mvn_cdf(&p, 1e-7, 0).unwrap().value, norm_cdf(0.37));
}
