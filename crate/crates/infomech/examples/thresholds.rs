//! Distribution analytics and the market's characteristic thresholds.
//!
//! ```bash
//! cargo run --example thresholds
//! ```

use infomech::{GameSpec, TypeDistribution};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    println!("distribution: {dist}");
    println!("  cdf(ln 2)        = {}", dist.cdf(2.0_f64.ln()));
    println!("  quantile(0.75)   = {}", dist.quantile(0.75)?);
    println!("  virtual value at 2.0 = {}", dist.virtual_value(2.0)?);
    println!("  inverse virtual value at 0 = {}", dist.inverse_virtual_value(0.0)?);
    println!("  regular: {}", dist.check_regularity(1000));
    println!();

    for (alpha, prior) in [(0.5, 0.5), (0.5, 0.75), (1.5, 0.5)] {
        let g = GameSpec::new(alpha, prior, dist.clone())?;
        let vstar = g.obedience_threshold();
        let v0 = dist.inverse_virtual_value(0.0)?;
        let vtilde = dist.inverse_virtual_value(alpha * dist.virtual_value(vstar)?)?;
        println!("alpha = {alpha}, prior = {prior}:");
        println!("  p_max = {}  (most likely state)", g.p_max());
        println!("  v*    = {vstar:.6}  (obedience threshold type)");
        println!("  v0    = {v0:.6}  (zero virtual value)");
        println!("  vt    = {vtilde:.6}  (obedience binds up to here in the revenue mechanism)");
        println!("  K     = {:.6}  (outside-option share)", g.outside_option_share());
        println!();
    }
    Ok(())
}
