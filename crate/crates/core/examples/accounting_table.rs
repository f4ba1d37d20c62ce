//! eps(delta) for a few runtime ratios, and the tradeoff curve at a glance.

use dp_rejection::accounting::{delta_of_eps, eps_of_delta, exp_mech_r, f_r, RBound};

fn main() -> dp_rejection::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10}", "R", "1e-3", "1e-6", "1e-9");
    for r in [1.1, 1.5, 2.0, 5.0] {
        let rb = RBound::new(r)?;
        let row: Vec<String> = [1e-3, 1e-6, 1e-9]
            .iter()
            .map(|d| format!("{:>10.4}", eps_of_delta(rb, *d).unwrap()))
            .collect();
        println!("{r:>6} {}", row.join(" "));
    }

    let rb = RBound::new(2.0)?;
    println!("\nf_2 on a coarse grid:");
    for i in 0..=10 {
        let a = i as f64 / 10.0;
        println!("  alpha = {a:.1}  beta = {:.4}", f_r(rb, a));
    }
    println!("delta at eps = 3: {:.3e}", delta_of_eps(rb, 3.0)?);

    // exponential mechanism with privacy level 1 and best-candidate mass 0.3
    let r = exp_mech_r(1.0, 0.3)?;
    println!("exp. mechanism runtime R = {:.4}, eps at 1e-6 = {:.3}", r.value(), eps_of_delta(r, 1e-6)?);
    Ok(())
}
