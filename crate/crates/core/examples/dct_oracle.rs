//! Compare the separable DCT against the direct quadruple-loop form.

use eps::oracle::{oracle_check, DEFAULT_SIZES, DEFAULT_TRIALS};

fn main() -> eps::Result<()> {
    let reports = oracle_check(&DEFAULT_SIZES, DEFAULT_TRIALS, 0)?;
    for r in &reports {
        println!("{r}");
    }
    let ok = reports.iter().all(|r| r.passed());
    println!("{}", if ok { "all sizes agree" } else { "MISMATCH" });
    if !ok {
        std::process::exit(1);
    }
    Ok(())
}
