//! Magnus embedding, quasi-inverses and a rational series.
use foxfactor::cli::{parse_expr, parse_rational};
use foxfactor::series::{
    magnus_embed, quasi_inverse, rat_eval, solve_affine_system, TruncatedSeries,
};
use foxfactor::{FieldSpec, FreePolynomial, Result};

fn main() -> Result<()> {
    let q = FieldSpec::Rationals;
    let g = parse_expr("t1^-1*t2", 2, q)?;
    println!("magnus({g}) = {}", magnus_embed(&g, 3));

    let x1 = TruncatedSeries::var(2, q, 1, 4);
    println!("x1^+ = {}", quasi_inverse(&x1)?);

    let r = parse_rational("(x1 + x2)^+ * x1", 2, q)?;
    println!("(x1 + x2)^+ x1 = {}", rat_eval(&r, 3)?);

    // z = 1 + x1 z
    let p = vec![TruncatedSeries::one(2, q, 3)];
    let m = vec![vec![magnus_embed(
        &(&FreePolynomial::t(2, q, 1, 1) - &FreePolynomial::one(2, q)),
        3,
    )]];
    println!("z = 1 + x1 z  =>  z = {}", solve_affine_system(&p, &m)?[0]);
    Ok(())
}
