//! The ternary square-free stream (fixed point of 0 -> 012, 1 -> 02, 2 -> 1)
//! and the square-freeness check.

use revform::word::{square_free_stream, Word};

fn main() -> revform::Result<()> {
    let w = square_free_stream(60)?;
    println!("stream prefix: {w}");
    assert!(w.is_square_free());

    // Every factor of a square-free word is square-free, so sliding windows
    // give a cheap supply of square-free base words for the constructions.
    for start in 0..5 {
        let window = w.factor(start, 20);
        assert!(window.is_square_free());
        println!("window at {start}: {window}");
    }

    let bad = Word::parse_inferred("0120120")?;
    assert!(!bad.is_square_free()); // contains the square 012 012
    println!("{bad} square-free: {}", bad.is_square_free());
    Ok(())
}
