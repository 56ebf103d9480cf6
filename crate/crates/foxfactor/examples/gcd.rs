//! Right gcd and exact right division.
use foxfactor::cli::parse_expr;
use foxfactor::factor::{divide_right, gcd};
use foxfactor::{FieldSpec, Result};

fn main() -> Result<()> {
    let f5 = FieldSpec::Prime(5);
    let a = parse_expr("(2 - t2)*(2 - t1)", 2, f5)?;
    let b = parse_expr("2 - t1", 2, f5)?;
    println!("gcd({a}, {b}) = {}", gcd(&a, &b)?);
    let q = divide_right(&a, &b, None)?;
    println!("({a}) / ({b}) = {q}");
    assert_eq!(&q * &b, a);
    Ok(())
}
