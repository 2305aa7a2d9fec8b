//! Build verified avoiders of phi_k for several k, and peek at the morphic
//! machinery underneath.

use revform::constructions::{build_avoider, f_phi1, gdk, rho_stream};
use revform::encounter::avoids;
use revform::formula::make_phi;
use revform::word::square_free_stream;

fn main() -> revform::Result<()> {
    // One verified avoider per k; each output records how it was built.
    for k in [1, 2, 3, 4, 5, 7, 8] {
        let out = build_avoider(k, 24)?;
        println!(
            "k={k}: |w|={} over {} letters via {} -> {}",
            out.word.len(),
            out.alphabet_size,
            out.provenance.base,
            out.provenance.chain.join(" -> "),
        );
    }

    // The k=1 ingredient: a square-free ternary word pushed through the
    // 8-uniform morphism f, then wrapped as a 4-cyclic word.
    let v = square_free_stream(12)?;
    let fv = f_phi1(&v)?;
    println!("f({v}) = {fv}");

    // The k=2 ingredient: the binary stream 21222121... generated by
    // 1 -> 22, 2 -> 21.
    println!("rho stream: {}", rho_stream(24)?);

    // For k = 3K the base word goes through i -> i^{K+1} and then i -> i a b.
    let g1 = gdk(&square_free_stream(6)?, 1)?;
    println!("g(d_1(012021)) = {g1}");
    assert!(avoids(&g1, &make_phi(3)?));
    Ok(())
}
