//! Exhaustive commutation relations of the transpositions `P(i,j)`.

use kz_rational::verify::consistency_relations;

fn main() -> kz_rational::Result<()> {
    for n in 3..=7 {
        let r = consistency_relations(n)?;
        println!(
            "n={n}: {} ({} pairs, {} triples, {} quadruples)",
            if r.holds { "holds" } else { "fails" },
            r.pairs_checked,
            r.triples_checked,
            r.quadruples_checked
        );
    }
    Ok(())
}
