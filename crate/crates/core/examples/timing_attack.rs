//! An observer who only sees runtimes: empirical versus exact tradeoff.

use dp_rejection::distributions::{geometric_sample, GeometricLaw};
use dp_rejection::harness::{attack_tradeoff, replicate};

fn main() -> dp_rejection::Result<()> {
    let (p, q) = (0.19, 0.1);
    let (a, b) = (GeometricLaw::new(p)?, GeometricLaw::new(q)?);
    let ra = replicate(8, 100_000, |rng| Ok(geometric_sample(&a, rng)))?;
    let rb = replicate(9, 100_000, |rng| Ok(geometric_sample(&b, rng)))?;
    let rep = attack_tradeoff(&ra, &rb, p, q)?;
    println!("R = {:.4}", rep.r.value());
    println!("sup |empirical - exact| = {:.4}", rep.empirical_gap);
    println!("exact curve minus f_R: min {:.2e}, max {:.4}", rep.min_slack, rep.max_gap);
    for pt in rep.log_ratios.iter().take(5) {
        println!("{pt:?}");
    }
    Ok(())
}
