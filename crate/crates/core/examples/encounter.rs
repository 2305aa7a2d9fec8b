//! Decide whether a formula with reversal occurs in a word, and print the
//! witness assignment when it does.

use revform::encounter::{avoids, encounters};
use revform::formula::parse_formula;
use revform::word::Word;

fn main() -> revform::Result<()> {
    let formula = parse_formula("x y1 x . y1^R")?;
    println!("formula: {formula}");

    for text in ["0110", "01210", "012", "0102010"] {
        let word = Word::parse_inferred(text)?;
        match encounters(&word, &formula) {
            Some(witness) => {
                println!("{text}: encounter {}", serde_json::to_string(&witness).unwrap());
                assert!(witness.validate(&word, &formula)?);
            }
            None => {
                assert!(avoids(&word, &formula));
                println!("{text}: avoids");
            }
        }
    }

    // A variable that only ever occurs reversed can borrow its image from a
    // reversed factor of the host.
    let formula = parse_formula("x y1 y2 x . y1^R . y2^R")?;
    let word = Word::parse_inferred("0120210")?;
    let witness = encounters(&word, &formula).expect("phi_2 occurs here");
    println!("{word}: encounter {}", serde_json::to_string(&witness).unwrap());
    Ok(())
}
