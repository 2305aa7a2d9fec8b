//! Exhaustive backtracking: prove small unavoidability results and count
//! avoiding words per length.

use revform::formula::make_phi;
use revform::prover::{census, prove_unavoidable, Budget, VerdictKind};

fn main() -> revform::Result<()> {
    let phi1 = make_phi(1)?;

    // Over one letter every word of length 2 already meets phi_1, so the
    // search tree closes at depth 2.
    let verdict = prove_unavoidable(&phi1, 1, Budget::new(10, 10_000)?, 1)?;
    println!("phi_1 over 1 letter: {verdict:?}");
    assert_eq!(verdict.kind, VerdictKind::Unavoidable);

    let verdict = prove_unavoidable(&phi1, 2, Budget::new(20, 100_000)?, 1)?;
    println!("phi_1 over 2 letters: {verdict:?}");

    // Over four letters phi_1 is avoidable; the prover surfaces a deep
    // avoiding word as evidence instead of a closure proof.
    let verdict = prove_unavoidable(&phi1, 4, Budget::new(12, 2_000_000)?, 4)?;
    println!("phi_1 over 4 letters: kind={:?}", verdict.kind);
    if let Some(example) = &verdict.example {
        println!("  avoider of length {}: {example}", example.len());
    }

    // Census of avoiding words: counts[l] is the number of words of length l
    // over the given alphabet avoiding the formula.
    let table = census(&phi1, 4, 10, 4)?;
    println!("census of phi_1 over 4 letters: {:?}", table.counts);
    Ok(())
}
