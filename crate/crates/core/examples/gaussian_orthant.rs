//! Multivariate normal orthant probabilities with Brownian correlation,
//! evaluated two independent ways.
//!
//! ```text
//! cargo run --release --example gaussian_orthant
//! ```

use multistep_barrier::gaussian::{bvn_cdf, mvn_cdf, mvn_cdf_qmc, MvnProblem};

fn main() -> multistep_barrier::Result<()> {
    println!("P(Z1 <= 0.5, Z2 <= -0.2; rho = 0.6) = {:.10}", bvn_cdf(0.5, -0.2, 0.6));

    let times: Vec<f64> = (1..=6).map(|i| i as f64 / 6.0).collect();
    let signs = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
    let limits = vec![1.0, 0.8, 1.2, 0.5, 1.5, 0.9];
    let problem = MvnProblem::brownian(&times, &signs, limits)?;

    let quadrature = mvn_cdf(&problem, 1e-8, 1)?;
    let lattice = mvn_cdf_qmc(&problem, 1e-6, 1)?;
    println!("sequential quadrature {:.8} (+/- {:.1e})", quadrature.value, quadrature.error);
    println!("randomised lattice    {:.8} (+/- {:.1e}, {} evaluations)", lattice.value, lattice.error, lattice.evaluations);
    Ok(())
}
