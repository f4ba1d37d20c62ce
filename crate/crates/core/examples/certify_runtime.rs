//! Goodness-of-fit certificates for a sampler's runtimes.

use dp_rejection::harness::runner::{run_sampler, SamplerKind, SamplerParams};
use dp_rejection::harness::targets::{ridge_demo_spec, Prepared};
use dp_rejection::harness::{certify_independence, certify_runtime_law};

fn main() -> dp_rejection::Result<()> {
    let a = Prepared::from_erm(&ridge_demo_spec(false))?;
    let b = Prepared::from_erm(&ridge_demo_spec(true))?;
    let params = SamplerParams::default();
    let ra: Vec<u64> = run_sampler(&a, SamplerKind::Squeeze, &params, 50_000, 10)?.iter().map(|r| r.runtime).collect();
    let rb: Vec<u64> = run_sampler(&b, SamplerKind::Squeeze, &params, 50_000, 11)?.iter().map(|r| r.runtime).collect();
    println!("{}", certify_runtime_law(&ra, a.squeeze_ratio()?)?.line());
    println!("{}", certify_independence(&ra, &rb)?.line());
    Ok(())
}
