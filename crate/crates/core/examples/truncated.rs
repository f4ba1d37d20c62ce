//! Truncated rejection sampling: fixed runtime, failure probability at most delta.

use std::sync::Arc;

use dp_rejection::distributions::{RngStream, UniformBox};
use dp_rejection::samplers::{truncated_reject, truncation_length, Envelope, Support, UnnormalizedTarget};

fn main() -> dp_rejection::Result<()> {
    // density 2x on [0, 1], bounded by 2 times the uniform: acceptance 1/2
    let target = UnnormalizedTarget::new(1, |x| (2.0 * x[0]).ln()).with_support(Support::Box {
        lower: vec![0.0],
        upper: vec![1.0],
    });
    let env = Envelope::new(Arc::new(UniformBox::unit(1)?), 2f64.ln()).validated(&target)?;
    let (alpha0, delta) = (0.5, 1e-6);
    println!("N = {}", truncation_length(alpha0, delta)?);
    let mut failures = 0;
    let mut mean = 0.0;
    let n = 20_000;
    for i in 0..n {
        let s = truncated_reject(&target, &env, alpha0, delta, &mut RngStream::new(3, i))?;
        if s.accepted {
            mean += s.value[0];
        } else {
            failures += 1;
        }
    }
    println!("failures {failures}, output mean {:.4} (expect 2/3)", mean / (n - failures) as f64);
    Ok(())
}
