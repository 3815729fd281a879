//! Y is evaluated from a W table. Shows the selection rule, the pair
//! antisymmetry and a full export of the Y representatives.

use hpint::tableio::{export_y, write_y_csv};
use hpint::{build_w_table, y_value, IndexTuple};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = build_w_table(3)?;
    let y = |t: [u32; 4]| y_value(&w, &IndexTuple::four(t));

    for t in [[2, 1, 1, 0], [1, 2, 1, 0], [1, 0, 2, 1], [1, 1, 2, 0], [2, 1, 1, 1]] {
        let r = y(t)?;
        let reason = r.zero_reason.map(|z| format!(" ({z})")).unwrap_or_default();
        println!("Y{} = {}{reason}", IndexTuple::four(t), r.value);
    }

    let table = export_y(&w, 3)?;
    println!("\n{} representatives up to degree 3:", table.records().len());
    write_y_csv(&table, &mut std::io::stdout().lock())?;
    Ok(())
}
