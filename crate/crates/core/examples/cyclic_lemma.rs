//! Cyclic words, the run-length "bad factor" condition, and the equivalence
//! report that cross-checks both directions on small exponent words.

use revform::cyclic::{
    all_exponent_words, build_cyclic, find_bad_factor, lemma_equivalence_report, ExponentWord,
    LemmaStatus,
};
use revform::word::Alphabet;

fn main() -> revform::Result<()> {
    // The 4-cyclic word of an exponent word repeats the letters 0123 in
    // blocks whose heights are the exponents.
    let a4 = Alphabet::canonical(4)?;
    let w = ExponentWord::parse("2,1,2,2,2,1")?;
    let c = build_cyclic(4, &w, &a4)?;
    println!("C_4[{}] = {c}", w.to_csv());

    // A bad factor x' a_1..a_j x'' certifies an encounter of phi_k in the
    // cyclic word. All-ones words have one right at the start.
    let ones = ExponentWord::new(vec![1; 9])?;
    let witness = find_bad_factor(&ones, 1, 4)?.expect("all ones is bad");
    println!("bad factor of 1^9 (k=1, m=4): {witness:?}");

    // Exhaustive cross-check on every exponent word over {1,2} of length 6:
    // a bad factor without an encounter would refute the characterization,
    // an encounter without a bad factor only happens at cut-off boundaries.
    let words = all_exponent_words(2, 6);
    let report = lemma_equivalence_report(1, 4, &words)?;
    let agree = report
        .entries
        .iter()
        .filter(|e| e.status == LemmaStatus::Agree)
        .count();
    println!(
        "{} words checked: {} agree, {} boundary-inconclusive, {} hard failures",
        report.entries.len(),
        agree,
        report.entries.len() - agree - report.hard_failures,
        report.hard_failures
    );
    assert_eq!(report.hard_failures, 0);
    Ok(())
}
