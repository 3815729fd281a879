//! Canonical keys, parity and ranks in the index space.

use hpint::index::{Arity, IndexSpace};
use hpint::{canonicalize, parity_nonzero, IndexTuple, IntegralKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = IndexTuple::six([0, 3, 1, 2, 2, 0]);
    let key = canonicalize(&t);
    println!("{t} -> {} at level {}", key.sorted(), key.level());
    println!("non-zero by parity: {}", parity_nonzero(IntegralKind::U, &t)?);

    let space = IndexSpace::new(Arity::Six, 3);
    println!("\nU index space up to degree 3:");
    for level in 0..=space.max_level() {
        println!("  level {level:>2}: {:>3} canonical tuples", space.count(level));
    }
    println!("  even-level total: {}", space.even_total());

    let rank = space.rank(&key)?;
    println!("\nrank of {} within level {}: {rank}", key.sorted(), key.level());
    println!("unrank back: {}", space.unrank(key.level(), rank)?.sorted());
    let level = space.enumerate_level(4)?;
    let listed: Vec<String> = level.keys.iter().map(|k| k.sorted().to_string()).collect();
    println!("level 4 in rank order: {}", listed.join(" "));
    Ok(())
}
