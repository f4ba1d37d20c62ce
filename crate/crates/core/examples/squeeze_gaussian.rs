//! Squeeze rejection sampling from exp(-x^2): runtime is Geom(1/2) on any
//! target with the same (alpha, L).

use dp_rejection::distributions::RngStream;
use dp_rejection::mechanisms::{gaussian_envelope, StronglyConcaveTarget};
use dp_rejection::samplers::{squeeze_reject, squeeze_reject_with, SamplerOptions};

fn main() -> dp_rejection::Result<()> {
    let t = StronglyConcaveTarget::new(1.0, 4.0, vec![0.0], |x| -x[0] * x[0])?;
    let env = gaussian_envelope(&t)?;
    let target = t.target();
    println!("c_L / c_U = {}", env.squeeze_ratio().unwrap());

    let n = 50_000;
    let (mut sum_rt, mut sum_sq) = (0.0, 0.0);
    for i in 0..n {
        let mut rng = RngStream::new(1, i);
        let s = squeeze_reject(&target, &env, &mut rng)?;
        sum_rt += s.runtime as f64;
        sum_sq += s.value[0] * s.value[0];
    }
    println!("mean runtime {:.4} (expect 2), output variance {:.4} (expect 0.5)", sum_rt / n as f64, sum_sq / n as f64);

    let mut rng = RngStream::new(2, 0);
    let trace = squeeze_reject_with(&target, &env, &mut rng, SamplerOptions::recording())?;
    print!("{}", trace.events_jsonl());
    Ok(())
}
