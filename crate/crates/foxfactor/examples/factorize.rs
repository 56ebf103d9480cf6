//! Factorization into irreducibles, checked by multiplying back.
use foxfactor::cli::parse_expr;
use foxfactor::factor::factorize;
use foxfactor::{FieldSpec, Result};

fn main() -> Result<()> {
    let cases = [
        ("t1 - 4*t1^-1", FieldSpec::Rationals),
        ("(2 - t1)*(3 - 2*t2)*(2 - t1^-1)", FieldSpec::Prime(5)),
        ("(1 + t1*t2)*(3 - t2^-1)*t1", FieldSpec::Rationals),
    ];
    for (text, field) in cases {
        let g = parse_expr(text, 2, field)?;
        let f = factorize(&g)?;
        println!("{g}");
        println!("  unit {} * {}", f.unit, f.unit_word);
        for p in &f.factors {
            println!("  ({p})");
        }
        assert_eq!(f.product(2), g);
    }
    Ok(())
}
