//! K-norm gradient mechanism with a K-norm envelope.

use dp_rejection::distributions::RngStream;
use dp_rejection::mechanisms::{knorm_envelope, KngTarget};
use dp_rejection::samplers::squeeze_reject;

fn main() -> dp_rejection::Result<()> {
    // gradient of x1^2/2 + 3 x2^2/2
    let t = KngTarget::new(1.0, 3.0, vec![0.0, 0.0], |x| vec![x[0], 3.0 * x[1]])?;
    let env = knorm_envelope(&t)?;
    let target = t.target();
    println!("c_L / c_U = {:.6} (expect 1/9)", env.squeeze_ratio().unwrap());
    let n = 20_000;
    let mut mean_rt = 0.0;
    for i in 0..n {
        mean_rt += squeeze_reject(&target, &env, &mut RngStream::new(6, i))?.runtime as f64;
    }
    println!("mean runtime {:.3} (expect 9)", mean_rt / n as f64);
    Ok(())
}
