//! Gaussian-mechanism calibration: sensitivity, noise scale across a
//! privacy-budget grid, and sequential composition.

use signed_unlearn::unlearn::{compose_budget, noise_scale, PrivacyBudget};

fn main() -> signed_unlearn::Result<()> {
    // sigma = sqrt(2 ln(1.25/delta)) * sensitivity / epsilon
    let sensitivity = 0.02;
    println!("noise scale for sensitivity {sensitivity}:");
    for &delta in &[1e-4, 1e-5, 1e-6] {
        for &epsilon in &[1.0, 0.5, 0.1] {
            let sigma = noise_scale(epsilon, delta, sensitivity)?;
            println!("  epsilon {epsilon:>4}, delta {delta:>6.0e}: sigma = {sigma:.6}");
        }
    }

    // Halving epsilon exactly doubles the scale.
    let base = noise_scale(1.0, 1e-5, 1.0)?;
    println!("\nunit sensitivity at (1.0, 1e-5): sigma = {base:.9}");
    println!(
        "at (0.5, 1e-5): sigma = {:.9} (= 2x)",
        noise_scale(0.5, 1e-5, 1.0)?
    );

    // A ledger of sequential releases composes additively.
    let mut budget = PrivacyBudget::calibrate(1.0, 1e-5, sensitivity)?;
    budget.record_spend(1.0, 1e-5);
    budget.record_spend(0.5, 1e-5);
    budget.record_spend(0.25, 1e-6);
    let (eps_total, delta_total) = budget.composed()?;
    println!("\nafter three requests: total budget = ({eps_total}, {delta_total:.1e})");
    println!(
        "compose_budget over an explicit ledger: {:?}",
        compose_budget(&[(1.0, 1e-5), (0.5, 1e-5)])?
    );
    Ok(())
}
