//! Gauss rules for the chord weight `(1-t²)^μ`, their exactness certificates,
//! and the Chebyshev and axis rules used by the other schemes.

use oped::quadrature::{cheb2_point_rule, cylinder_axis_rule, gauss_symmetric_jacobi};

fn main() -> oped::Result<()> {
    for mu in [0.0, 0.5, 1.5, 2.5] {
        let rule = gauss_symmetric_jacobi(mu, 6)?;
        println!("mu = {mu}: {} nodes, precision {}, certificate {:.2e}", rule.len(), rule.precision, rule.certify());
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            println!("  {t:+.16e}  {w:.16e}");
        }
    }

    let cheb = cheb2_point_rule(5);
    let exact = 3.0 * std::f64::consts::PI / 8.0;
    println!("Gauss-Chebyshev, 6 nodes: integral of t^4 / sqrt(1-t^2) = {:.16e} (exact {exact:.16e})", cheb.integrate(|t| t.powi(4)));

    let axis = cylinder_axis_rule(2.5, 4)?;
    println!("axis rule on [0, 2.5]: nodes {:?}", axis.nodes);
    Ok(())
}
