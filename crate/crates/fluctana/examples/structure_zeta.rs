//! Structure functions and the mono/multifractal verdict.
//!
//! A Brownian walk has ζ_n = n/2 exactly in the large-sample limit, so the
//! constrained fit ζ_n = α·n fits well and the verdict is monofractal.

use fluctana::scaling::{compute_structure_set, fit_zeta, multifractality_test, sigma_tau};
use fluctana::synth::gen_gaussian_noise;
use fluctana::Series;

fn main() -> fluctana::Result<()> {
    let noise = gen_gaussian_noise(1 << 16, 1)?;
    let mut acc = 0.0;
    let walk: Vec<f64> = noise
        .values()
        .iter()
        .map(|&v| {
            acc += v;
            acc
        })
        .collect();
    let series = Series::from_values(walk, "brownian walk")?;

    let lags: Vec<usize> = vec![1, 2, 3, 4, 6, 8, 11, 16, 22, 32, 45, 64, 100];
    let orders: Vec<f64> = (1..=8).map(|i| 0.5 * i as f64).collect();
    let set = compute_structure_set(&series, &lags, &orders)?;
    let zeta = fit_zeta(&set, (1.0, 100.0))?;

    println!("{:>5} {:>10} {:>10}", "n", "zeta_n", "n/2");
    for (n, z) in zeta.orders.iter().zip(&zeta.zeta) {
        println!("{:>5} {:>10.4} {:>10.4}", n, z, n / 2.0);
    }
    println!("constrained alpha = {:.4}", zeta.linear_alpha);
    println!("nonlinearity      = {:.4}", zeta.nonlinearity);

    let verdict = multifractality_test(&zeta, 0.05)?;
    println!("verdict: {:?}", verdict.verdict);

    let sigma = sigma_tau(&series, &lags, (1.0, 100.0))?;
    println!("sigma(tau) exponent = {:.4} ± {:.4}", sigma.alpha, sigma.stderr);
    Ok(())
}
