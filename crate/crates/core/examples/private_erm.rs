//! Ridge regression through the exponential mechanism, on two neighboring databases.

use dp_rejection::distributions::RngStream;
use dp_rejection::mechanisms::{build_erm_target, gaussian_envelope, ErmSpec};
use dp_rejection::samplers::squeeze_reject;

fn main() -> dp_rejection::Result<()> {
    let mut records: Vec<Vec<f64>> = (0..30)
        .map(|i| {
            let a = (i as f64 * 0.21).cos();
            vec![a, (0.5 * a + 0.1).clamp(-1.0, 1.0)]
        })
        .collect();
    for (label, last) in [("D", None), ("D'", Some(vec![0.9, -0.9]))] {
        if let Some(r) = last {
            *records.last_mut().unwrap() = r;
        }
        let spec = ErmSpec::ridge(1, records.clone(), 1.0, 1.0, 1.0, 1.0);
        let t = build_erm_target(&spec)?;
        let env = gaussian_envelope(&t)?;
        let target = t.target();
        let n = 10_000;
        let (mut m, mut rt) = (0.0, 0.0);
        for i in 0..n {
            let s = squeeze_reject(&target, &env, &mut RngStream::new(7, i))?;
            m += s.value[0];
            rt += s.runtime as f64;
        }
        println!(
            "{label}: minimizer {:.4}, mean release {:.4}, mean runtime {:.3}, c_L/c_U {:.6}",
            t.mode()[0],
            m / n as f64,
            rt / n as f64,
            env.squeeze_ratio().unwrap()
        );
    }
    Ok(())
}
