//! The formula family phi_k = x y1 ... yk x . y1^R . ... . yk^R, and the
//! formula grammar used on the command line.

use revform::formula::{make_phi, parse_formula};

fn main() -> revform::Result<()> {
    for k in 1..=5 {
        let phi = make_phi(k)?;
        println!("phi_{k} = {phi}");
    }

    // Round trip: the printed form parses back to the same formula.
    let phi = make_phi(3)?;
    assert_eq!(parse_formula(&phi.to_string())?, phi);

    // Fragments are separated by '.', symbols by whitespace, and a trailing
    // ^R marks a reversed variable occurrence.
    let f = parse_formula("a b a . b^R a")?;
    println!("parsed: {f}");
    println!("variables: {:?}", f.variables());
    println!("reversed: {:?}", f.reversed_variables());
    Ok(())
}
