//! Additive waiting: pad the plain sampler so the runtime is Geom(1/c).

use std::sync::Arc;

use dp_rejection::distributions::{GaussianLaw, RngStream};
use dp_rejection::samplers::{additive_wait_reject_with, Envelope, SamplerOptions, UnnormalizedTarget, WaitMode};

fn main() -> dp_rejection::Result<()> {
    // normalized N(0, 1/2) under the proposal N(0, 1): c_D = sqrt(2)
    let law = GaussianLaw::new(vec![0.0], 2.0)?;
    let target = UnnormalizedTarget::new(1, move |x| law.logpdf(x));
    let cd = 2f64.sqrt();
    let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 1.0)?), cd.ln()).validated(&target)?;
    let c = 3.0;
    for mode in [WaitMode::Memoryless, WaitMode::Thinning] {
        let n = 30_000;
        let mean: f64 = (0..n)
            .map(|i| {
                let mut rng = RngStream::new(4, i);
                additive_wait_reject_with(&target, &env, cd, c, mode, &mut rng, SamplerOptions::default())
                    .unwrap()
                    .runtime as f64
            })
            .sum::<f64>()
            / n as f64;
        println!("{mode:?}: mean runtime {mean:.4} (expect {c})");
    }
    Ok(())
}
