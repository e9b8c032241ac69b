//! Surface invariants of a ribbon graph, its dual, and what contracting each edge does.
//!
//! cargo run --example ribbon_graphs

use gue_moments::ribbon::{Permutation, RibbonGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // two vertices (0 1 2) and (3 4 5), edges {0,3} {1,5} {2,4}
    let sigma = Permutation::from_cycles(6, &[vec![0, 1, 2], vec![3, 4, 5]])?;
    let kappa = Permutation::from_cycles(6, &[vec![0, 3], vec![1, 5], vec![2, 4]])?;
    let graph = RibbonGraph::new(sigma, kappa)?;

    let inv = graph.invariants()?;
    println!("graph       {graph}");
    println!("boundaries  {}", graph.boundary_permutation());
    println!(
        "V={} E={} b={} g={} chi={}",
        inv.vertices, inv.edges, inv.boundaries, inv.genus, inv.euler_characteristic
    );

    let dual = graph.dual().invariants()?;
    println!(
        "dual: V={} b={} g={}",
        dual.vertices, dual.boundaries, dual.genus
    );

    for e in graph.edges().collect::<Vec<_>>() {
        let case = graph.contraction_case(e)?;
        let after = graph.contract_edge(e)?.invariants()?;
        println!(
            "contract edge at half-edge {}: {case:?}, b {} -> {}, g {} -> {}",
            e.0 + 1,
            inv.boundaries,
            after.boundaries,
            inv.genus,
            after.genus
        );
    }
    Ok(())
}
