//! Gauss-Hermite rules and the quadrature oracle.

use hpint::oracle::{gauss_hermite, quadrature_value};
use hpint::{IndexTuple, IntegralKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = gauss_hermite(5)?;
    println!("5-point rule");
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  x = {x:>22.17}  w = {w:.17}");
    }
    // exact for polynomials up to degree 9: integral of x^8 exp(-x^2) = 105 sqrt(pi) / 16
    let approx = rule.integrate(|x| x.powi(8));
    println!("x^8 moment {approx:.17} vs {:.17}", 105.0 * std::f64::consts::PI.sqrt() / 16.0);

    let t = IndexTuple::four([9, 7, 4, 2]);
    // the integrand has degree 22, so 12 nodes is the smallest exact rule
    for nodes in [11, 12, 20] {
        match quadrature_value(IntegralKind::W, &t, nodes) {
            Ok(v) => println!("W{t} with {nodes} nodes: {v:.17e}"),
            Err(e) => println!("W{t} with {nodes} nodes: {e}"),
        }
    }
    Ok(())
}
