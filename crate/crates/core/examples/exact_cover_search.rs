//! Every line partition of the internal points for small q, by dancing
//! links, checked against naive backtracking where that is feasible.
//!
//! cargo run --release --example exact_cover_search -- 7

use conicpart::conic::ConicGeometry;
use conicpart::gf::make_field;
use conicpart::search::{brute_force_solve, build_instance, solve_all, CoverMode, SearchOptions};

fn main() -> conicpart::Result<()> {
    let q: u64 = std::env::args().nth(1).map_or(5, |a| a.parse().expect("prime q"));
    let geom = ConicGeometry::standard(make_field(q, 1, None)?);
    let inst = build_instance(&geom, CoverMode::Exact, None);
    println!("{} internal points, {} candidate lines", inst.columns().len(), inst.rows().len());

    let sols = solve_all(&geom, &inst, &SearchOptions::default())?;
    println!(
        "{} partitions in {:?} ({} nodes); by size {:?}",
        sols.solutions.len(),
        sols.stats.elapsed,
        sols.stats.nodes,
        sols.size_histogram()
    );
    if q <= 5 {
        let brute = brute_force_solve(&inst, 100_000_000)?;
        println!("brute force agrees: {}", brute.solutions == sols.solutions);
    }
    Ok(())
}
