//! Ground-state energy of two trapped bosons with a contact interaction,
//! for a few couplings and basis cutoffs.

use hpint::build_w_table;
use hpint::ci::{build_hamiltonian, ground_state_energy, PairBasis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cutoffs = [5, 10, 20, 30];
    let w = build_w_table(30)?;
    print!("{:>6}", "g");
    for m in cutoffs {
        print!("  M={m:<2} ({:>3} pairs)", PairBasis::new(m).len());
    }
    println!();
    for g in [0.0, 0.1, 1.0, 5.0, 20.0] {
        print!("{g:>6}");
        for m in cutoffs {
            let e = ground_state_energy(&build_hamiltonian(m, g, &w)?)?;
            print!("  {e:>18.12}");
        }
        println!();
    }
    Ok(())
}
