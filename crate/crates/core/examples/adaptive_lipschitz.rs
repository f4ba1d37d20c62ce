//! Adaptive squeeze sampling for a Lipschitz log-density on [0, 1].

use dp_rejection::adaptive::{adaptive_sample_with, AdaptiveOptions, LogHolderTarget, Schedule};
use dp_rejection::distributions::RngStream;

fn main() -> dp_rejection::Result<()> {
    let target = LogHolderTarget::unit(1, 1.0, 7.0, |x| -3.0 * (x[0] - 0.5).abs() + 0.2 * (20.0 * x[0]).sin())?;
    let schedule = Schedule::doubling(4);
    let mut rng = RngStream::new(5, 0);
    let run = adaptive_sample_with(&target, 20_000, &schedule, AdaptiveOptions::default(), &mut rng)?;
    println!("{} samples, {} log-density evaluations", run.samples.len(), run.evaluations);
    for l in &run.levels {
        println!(
            "m = {:>4}  r_hat = {:.4}  iterations {:>6}  publishes {:>6}",
            l.m, l.r_hat, l.iterations, l.publishes
        );
    }
    let mean = run.samples.iter().map(|x| x[0]).sum::<f64>() / run.samples.len() as f64;
    println!("sample mean {mean:.4}");
    Ok(())
}
