//! Finite-dimensional modules: submodules, composition series, isomorphism.
use foxfactor::cli::parse_expr;
use foxfactor::factor::{lattice_of, similar};
use foxfactor::repmod::{composition_series, is_isomorphic, is_simple};
use foxfactor::{FieldSpec, Result};

fn main() -> Result<()> {
    let f5 = FieldSpec::Prime(5);
    let g = parse_expr("(2 - t1)*(3 - 2*t2)", 2, f5)?;
    let m = lattice_of(&g)?.module;
    println!("lattice of {g}: dim {}, simple {}", m.dim(), is_simple(&m)?);
    let chain = composition_series(&m)?;
    let dims: Vec<usize> = chain.iter().map(|s| s.dim()).collect();
    println!("composition series dims {dims:?}");

    let a = lattice_of(&parse_expr("2 - t1", 2, f5)?)?.module;
    let b = lattice_of(&parse_expr("t2*(2 - t1)", 2, f5)?.comonic()?)?.module;
    println!(
        "M(2 - t1) vs M(t2 (2 - t1)): isomorphic {}",
        is_isomorphic(&a, &b)?
    );
    // A unit on the right changes the lattice itself; `similar` strips it first.
    let c = parse_expr("(2 - t1)*t2", 2, f5)?;
    println!(
        "2 - t1 similar to (2 - t1) t2: {}",
        similar(&parse_expr("2 - t1", 2, f5)?, &c)?
    );
    Ok(())
}
