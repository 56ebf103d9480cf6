//! The lattice module of a polynomial and the star action on it.
use foxfactor::cli::parse_expr;
use foxfactor::factor::{endo_dim, is_irreducible, lattice_of};
use foxfactor::fox::{star_action, StarContext};
use foxfactor::repmod::is_simple;
use foxfactor::{FieldSpec, Result};

fn main() -> Result<()> {
    let q = FieldSpec::Rationals;
    for text in [
        "2 - t1",
        "t1 - 4*t1^-1",
        "(2 - t1)*t2",
        "1 + t1 + t2 + t1*t2",
    ] {
        let g = parse_expr(text, 2, q)?;
        let lat = lattice_of(&g.comonic()?)?;
        println!(
            "{text}: lattice dim {}, simple {}, irreducible {}, endo dim {}",
            lat.dim(),
            is_simple(&lat.module)?,
            is_irreducible(&g)?,
            endo_dim(&g)?,
        );
    }
    let g = parse_expr("t1 - 4*t1^-1", 2, q)?;
    let ctx = StarContext::new(&g.comonic()?)?;
    let one = parse_expr("1", 2, q)?;
    for j in 1..=4 {
        println!("z{j} * 1 = {}", star_action(&ctx, j, &one)?);
    }
    Ok(())
}
