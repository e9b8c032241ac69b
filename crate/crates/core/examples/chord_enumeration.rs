//! Chord diagrams on 2l points and the genus/boundary table they induce on a vertex profile.
//!
//! cargo run --example chord_enumeration -- 4,2

use gue_moments::chords::{build_graph, eta_table, ChordDiagrams, VertexProfile};
use gue_moments::EnumerationCap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ks: Vec<usize> = match std::env::args().nth(1) {
        Some(arg) => arg.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => vec![4, 2],
    };
    let profile = VertexProfile::new(ks)?;
    let l = profile.points() / 2;

    println!("chord diagrams on {} points:", profile.points());
    for c in ChordDiagrams::new(l, EnumerationCap::default())?.take(15) {
        let inv = build_graph(&c, &profile)?.invariants()?;
        println!("  {c}  g={} b={}", inv.genus, inv.boundaries);
    }
    if l > 3 {
        println!("  ...");
    }

    let table = eta_table(&profile, EnumerationCap::default())?;
    println!("eta table for {:?}:", profile.ks());
    for (&(g, b), count) in table.counts() {
        println!("  g={g} b={b} count={count}");
    }
    println!("total {} diagrams", table.total());
    println!("polynomial {}", table.to_polynomial());
    Ok(())
}
