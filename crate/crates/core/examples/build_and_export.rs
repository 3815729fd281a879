//! Builds a W table with a fixed worker count, writes it in all three
//! formats and reads the binary and CSV copies back.

use std::fs::File;
use std::io::BufReader;

use hpint::recursion::{build_table, BuildOptions};
use hpint::tableio;
use hpint::IntegralKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = BuildOptions {
        threads: Some(2),
        ..BuildOptions::default()
    };
    let table = build_table(IntegralKind::W, 20, &opts)?;
    println!("built W up to degree 20: {} records, {} bytes", table.record_count(), table.byte_size());

    let dir = std::env::temp_dir().join(format!("hpint-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let bin = dir.join("w20.hpit");
    let csv = dir.join("w20.csv");
    let json = dir.join("w20.json");

    let written = tableio::write_binary(&table, &mut File::create(&bin)?)?;
    tableio::write_csv(&table, &mut File::create(&csv)?)?;
    tableio::write_json_meta(&table, &mut File::create(&json)?)?;
    println!("wrote {written} bytes to {}", bin.display());

    let from_bin = tableio::read_binary(File::open(&bin)?)?;
    let from_csv = tableio::read_csv(BufReader::new(File::open(&csv)?))?;
    println!("binary copy identical: {}", from_bin == table);
    println!("CSV copy identical: {}", from_csv == table);
    println!("{}", std::fs::read_to_string(&json)?.trim());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
