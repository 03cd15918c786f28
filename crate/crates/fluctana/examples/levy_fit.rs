//! Fitting a symmetric Lévy-stable model from the lag scaling of the PDF
//! peak, then comparing the fitted density against the histogram.

use fluctana::levy::{fit_mu_from_peaks, levy_density, LevyModel};
use fluctana::pdf::{estimate_pdf, EmpiricalPdf};
use fluctana::series::compute_returns;
use fluctana::synth::gen_stable_flight;

fn main() -> fluctana::Result<()> {
    let (mu, gamma) = (1.5, 1.0);
    let flight = gen_stable_flight(1_000_000, mu, gamma, 17)?;

    // fine bins so the central bin resolves the peak
    let pdfs: Vec<EmpiricalPdf> = (1..=10)
        .map(|lag| {
            let r = compute_returns(&flight, lag)?;
            let lo = r.values().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = r.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            estimate_pdf(&r, (((hi - lo) / 0.25).ceil() as usize).max(8))
        })
        .collect::<fluctana::Result<_>>()?;

    let fit = fit_mu_from_peaks(&pdfs)?;
    println!("generator:  mu = {mu}, gamma = {gamma}");
    println!(
        "fitted:     mu = {:.4} ± {:.4}, gamma = {:.4} (raw slope {:.4})",
        fit.mu_hat, fit.mu_stderr, fit.gamma_hat, fit.raw_slope
    );

    let model = LevyModel::new(fit.mu_hat, fit.gamma_hat, 1.0)?;
    println!("\n{:>6} {:>12} {:>12}", "x", "histogram", "levy");
    let reference = &pdfs[0];
    let sigma = reference.normalization;
    for &x in &[0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        // nearest bin of the lag-1 histogram, in raw units
        let (i, _) = reference
            .bin_centers
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 * sigma - x).abs().total_cmp(&(b.1 * sigma - x).abs()))
            .unwrap();
        let hist = reference.density[i] / sigma;
        println!("{:>6.1} {:>12.6} {:>12.6}", x, hist, levy_density(&model, x)?);
    }
    Ok(())
}
