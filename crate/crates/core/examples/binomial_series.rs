//! Truncated binomial series of `(omega + delta)^j` inside and outside its
//! radius of convergence, and the verdict for the vector form.

use fraclab::analysis::binomial_residual;

fn main() -> fraclab::Result<()> {
    for (omega, delta) in [(2.0, 0.5), (2.0, -1.0), (0.5, 1.0)] {
        let r = binomial_residual(omega, delta, 0.5, 30)?.with_vector_verdict(9);
        println!("omega = {omega}, delta = {delta}: {}", r.notes);
        for k in [0, 5, 10, 20, 30] {
            println!("  K = {k:>2}  residual {:.3e}", r.scalar_residuals[k]);
        }
    }
    let r = binomial_residual(2.0, 0.5, 0.5, 1)?.with_vector_verdict(9);
    println!(
        "vector form, n = 9: {}",
        r.vector_verdict.map(|v| v.message()).unwrap_or_default()
    );
    Ok(())
}
