//! Emit the interim share and payment curves of the revenue mechanism as
//! CSV, one column group per competition intensity — the data behind the
//! crate's headline comparative-statics plots.
//!
//! ```bash
//! cargo run --example share_payment_curves > curves.csv
//! ```

use infomech::mechanism::{closed_form_share_fn, RuleKind};
use infomech::payments::optimal_payment_schedule;
use infomech::{GameSpec, TypeDistribution};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    let alphas = [0.5, 1.0, 1.5];

    let mut shares = Vec::new();
    let mut payments = Vec::new();
    for &alpha in &alphas {
        let g = GameSpec::new(alpha, 0.5, dist.clone())?;
        shares.push(closed_form_share_fn(RuleKind::Revenue, &g)?);
        payments.push(optimal_payment_schedule(RuleKind::Revenue, &g)?);
    }

    print!("value");
    for a in alphas {
        print!(",share{a}");
    }
    for a in alphas {
        print!(",pay{a}");
    }
    println!();

    let rows = 200;
    let top = dist.quantile(0.99)?;
    for r in 0..rows {
        let v = top * r as f64 / (rows - 1) as f64;
        print!("{v}");
        for s in &shares {
            print!(",{}", s.eval(v));
        }
        for p in &payments {
            print!(",{}", p.interim_payment(v));
        }
        println!();
    }
    Ok(())
}
