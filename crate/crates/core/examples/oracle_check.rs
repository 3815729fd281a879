//! Compares recursion values with the exact oracle, which keeps every
//! step in rational arithmetic.

use hpint::oracle::{relative_error, ExactOracle};
use hpint::{build_u_table, build_w_table, y_value, IndexTuple, IntegralKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = 8;
    let w = build_w_table(m)?;
    let u = build_u_table(m)?;
    let oracle = ExactOracle::new(m);

    let cases = [
        (IntegralKind::W, IndexTuple::four([8, 6, 5, 3])),
        (IntegralKind::Y, IndexTuple::four([7, 2, 5, 4])),
        (IntegralKind::U, IndexTuple::six([8, 7, 4, 4, 2, 1])),
    ];
    for (kind, t) in cases {
        let exact = oracle.exact(kind, &t)?;
        let got = match kind {
            IntegralKind::W => w.value(&t)?.value,
            IntegralKind::Y => y_value(&w, &t)?.value,
            IntegralKind::U => u.value(&t)?.value,
        };
        println!("{kind}{t}");
        println!("  exact     {:.40}", exact.float_value);
        println!("  value^2 * pi^{} = {}", exact.pi_power, exact.pi_scaled_square);
        println!("  recursion {got:.17e}  (relative error {:.1e})", relative_error(got, exact.to_f64()));
    }
    Ok(())
}
