//! One configured experiment run end to end, through the same entry
//! point the command-line binary uses.

use signed_unlearn::pipeline::{run, Method, RunConfig};

fn main() -> signed_unlearn::Result<()> {
    let out = tempfile::tempdir().expect("temp dir");
    let base = RunConfig {
        lambda: 0.1, // the 1e-4 default needs far more epochs
        max_epochs: 60_000,
        seed: 3,
        out_dir: Some(out.path().to_path_buf()),
        ..RunConfig::default()
    };

    for method in [
        Method::Csgu,
        Method::WoSiq,
        Method::WoNoise,
        Method::Retrain,
    ] {
        let cfg = RunConfig {
            method,
            ..base.clone()
        };
        let report = run(&cfg)?;
        println!(
            "{:9} macro_f1 {:.4}  mi_auc {:.4}  |theta~ - theta_r| {:.4}  unlearn {:.4}ms  retrain {:.4}ms",
            method.as_str(),
            report.eval.macro_f1,
            report.eval.mi_auc,
            report.eval.dist_to_retrained,
            1e3 * report.eval.unlearn_time_s,
            1e3 * report.eval.retrain_time_s,
        );
    }

    let csv = std::fs::read_to_string(out.path().join("results.csv")).expect("csv");
    println!("\nresults.csv:\n{csv}");
    Ok(())
}
