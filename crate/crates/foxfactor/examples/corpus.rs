//! Verify the shipped corpus and run the exhaustive factor search.
use foxfactor::cli::parse_expr;
use foxfactor::repmod_io::oracle::run_oracle_factor_search;
use foxfactor::repmod_io::{load_corpus, verify_entries, SHIPPED_CORPUS};
use foxfactor::{FieldSpec, Result};

fn main() -> Result<()> {
    let entries = load_corpus(SHIPPED_CORPUS)?;
    let report = verify_entries(&entries);
    println!(
        "corpus: {} checked, {} mismatches",
        report.checked,
        report.mismatches.len()
    );

    let g = parse_expr("(2 - t1)*(3 - 2*t2)", 2, FieldSpec::Prime(5))?;
    let pairs = run_oracle_factor_search(&g, 2)?;
    println!("{g} has {} factor pairs of length <= 2:", pairs.len());
    for (a, b) in pairs.iter().take(6) {
        println!("  ({a}) * ({b})");
    }
    Ok(())
}
