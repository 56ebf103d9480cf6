//! Fox derivatives of a polynomial and the reconstruction identity.
use foxfactor::cli::parse_expr;
use foxfactor::fox::{derivative_span, partial_derivative, DerivativeIndex};
use foxfactor::{FieldSpec, FreePolynomial, Result};

fn main() -> Result<()> {
    let g = parse_expr("t1*t2 - 2*t2^-1*t1 + 3", 2, FieldSpec::Rationals)?;
    println!("gamma = {g}");
    let mut rebuilt = FreePolynomial::constant(2, g.augmentation());
    for d in DerivativeIndex::all(2) {
        let dg = partial_derivative(d, &g)?;
        println!("d/d{} gamma = {dg}", d.letter());
        if !d.barred {
            let t = FreePolynomial::t(2, FieldSpec::Rationals, d.index, 1);
            rebuilt = &rebuilt + &(&(&t - &FreePolynomial::one(2, FieldSpec::Rationals)) * &dg);
        }
    }
    assert_eq!(rebuilt, g);
    println!("sum (t_i - 1) d_i gamma + eps(gamma) == gamma");
    println!(
        "derivative span has dimension {}",
        derivative_span(&g)?.dimension()
    );
    Ok(())
}
