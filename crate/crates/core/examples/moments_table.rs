//! Closed-form moments and central moments with their main/tail split.

use szasz_durrmeyer::moments::{central_moment, central_moment_bounds, moment};
use szasz_durrmeyer::OperatorParams;

fn main() -> szasz_durrmeyer::Result<()> {
    let x = 0.5;
    for j in [0, 1, 3] {
        let params = OperatorParams::new(10.0, j)?;
        println!("n = 10, j = {j}, x = {x}");
        for r in 0..=4 {
            println!("  S e_{r} = {:.16}   (x^{r} = {:.16})", moment(params, r, x)?, x.powi(r as i32));
        }
        for s in 1..=4 {
            let c = central_moment(params, s, x)?;
            println!("  central s = {s}: main {:+.6e} tail {:+.6e} total {:+.6e}", c.main, c.tail, c.total);
        }
        let (lo, hi) = central_moment_bounds(params, 2, x)?;
        println!("  second central moment bounds [{lo:.6e}, {hi:.6e}]");
    }
    Ok(())
}
