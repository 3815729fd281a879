//! Prints the low-level W, Y and U values from the recursion next to
//! their closed forms.

use std::f64::consts::PI;

use hpint::{build_u_table, build_w_table, y_value, IndexTuple};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = build_w_table(6)?;
    let u = build_u_table(6)?;

    println!("{:<10} {:>22} {:>22}", "integral", "recursion", "closed form");
    let w_rows: [([u32; 4], f64); 5] = [
        ([0, 0, 0, 0], 1.0 / (2.0 * PI).sqrt()),
        ([2, 0, 0, 0], -1.0 / (4.0 * PI.sqrt())),
        ([1, 1, 0, 0], 1.0 / (2.0 * (2.0 * PI).sqrt())),
        ([3, 3, 0, 0], 5.0 / 32.0 * (2.0 / PI).sqrt()),
        ([2, 2, 1, 1], 7.0 / 32.0 * (2.0 / PI).sqrt()),
    ];
    for (t, closed) in w_rows {
        let t = IndexTuple::four(t);
        println!("W{:<9} {:>22.16e} {:>22.16e}", t.to_string(), w.value(&t)?.value, closed);
    }
    for (t, closed) in [
        ([2, 1, 1, 0], 1.5 / PI.sqrt()),
        ([4, 1, 1, 0], -0.625 * (3.0 / PI).sqrt()),
        ([3, 2, 1, 0], 1.25 * (1.5 / PI).sqrt()),
    ] {
        let t = IndexTuple::four(t);
        println!("Y{:<9} {:>22.16e} {:>22.16e}", t.to_string(), y_value(&w, &t)?.value, closed);
    }
    let s3 = 3f64.sqrt();
    for (t, closed) in [
        ([0, 0, 0, 0, 0, 0], 1.0 / (s3 * PI)),
        ([1, 1, 1, 1, 0, 0], 1.0 / (3.0 * PI * s3)),
        ([3, 3, 0, 0, 0, 0], 7.0 / (27.0 * PI * s3)),
        ([1, 1, 1, 1, 1, 1], 5.0 / (9.0 * PI * s3)),
    ] {
        let t = IndexTuple::six(t);
        println!("U{:<9} {:>22.16e} {:>22.16e}", t.to_string(), u.value(&t)?.value, closed);
    }

    // zero entries carry a reason
    for t in [IndexTuple::six([2, 1, 1, 0, 0, 0]), IndexTuple::six([1, 0, 0, 0, 0, 0])] {
        let r = u.value(&t)?;
        match r.zero_reason {
            Some(reason) => println!("U{t} = 0 ({reason})"),
            None => println!("U{t} = {} (no selection rule applies)", r.value),
        }
    }
    Ok(())
}
