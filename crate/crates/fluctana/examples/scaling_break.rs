//! Detecting a crossover in the fluctuation function.
//!
//! White noise added to persistent fGn dominates at small scales
//! (α ≈ 0.5) while the correlated part wins at large scales (α → H),
//! producing a knee in log F₂(s) vs log s.

use fluctana::mfdfa::{detect_scaling_break, mfdfa_surface, DEFAULT_BREAK_SLOPE_THRESHOLD};
use fluctana::mfdfa::log_scale_grid;
use fluctana::synth::{gen_fgn, gen_gaussian_noise};

fn main() -> fluctana::Result<()> {
    let n = 1 << 16;
    let fgn = gen_fgn(n, 0.9, 5)?;
    let noise = gen_gaussian_noise(n, 6)?;
    let mixed: Vec<f64> = fgn
        .values()
        .iter()
        .zip(noise.values())
        .map(|(&slow, &fast)| slow + 4.0 * fast)
        .collect();

    let scales = log_scale_grid(8, 8192, 24);
    let surface = mfdfa_surface(&mixed, &scales, &[2.0], 1)?;

    println!("{:>7} {:>12}", "s", "F2(s)");
    for (s, f) in surface.scales.iter().zip(&surface.f_values[0]) {
        println!("{s:>7} {f:>12.4}");
    }

    match detect_scaling_break(&surface, 2.0, 3, DEFAULT_BREAK_SLOPE_THRESHOLD)? {
        Some(knee) => println!("\ncrossover detected near s ≈ {knee:.0}"),
        None => println!("\nno crossover detected"),
    }
    Ok(())
}
