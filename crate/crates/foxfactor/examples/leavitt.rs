//! Arithmetic in the Leavitt algebra and its normal form.
use foxfactor::cli::parse_leavitt;
use foxfactor::leavitt::{canonical_form, equals, zeta};
use foxfactor::{FieldSpec, Result};

fn main() -> Result<()> {
    let q = FieldSpec::Rationals;
    let a = parse_leavitt("x1^* * t1^-1", 2, q)?;
    println!("x1^* t1^-1 = {a}");
    let one = parse_leavitt("1", 2, q)?;
    println!("1 at depth 1 = {}", canonical_form(&one, 1)?);
    let b = parse_leavitt("x1^* * x2", 2, q)?;
    println!("x1^* x2 = {b}");
    println!("zeta_1 = {}", zeta(2, q, 1)?);
    assert!(equals(&canonical_form(&one, 2)?, &one)?);
    Ok(())
}
