//! Orbits of all line partitions under the stabilizer of the conic.
//!
//! cargo run --release --example classify_orbits -- 3 2

use conicpart::classify::{canonical_partition, classify_solutions, conic_stabilizer};
use conicpart::conic::ConicGeometry;
use conicpart::gf::make_field;
use conicpart::search::{build_instance, solve_all, CoverMode, SearchOptions};

fn main() -> conicpart::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer"));
    let p = args.next().unwrap_or(7);
    let h = args.next().unwrap_or(1) as u32;
    let geom = ConicGeometry::standard(make_field(p, h, None)?);
    let group = conic_stabilizer(&geom);
    println!("stabilizer of order {}", group.order());

    let inst = build_instance(&geom, CoverMode::Exact, None);
    let sols = solve_all(&geom, &inst, &SearchOptions::default())?;
    let report = classify_solutions(&geom, &sols, &group)?;
    let plane = geom.plane();
    for o in &report.orbits {
        let lines: Vec<String> =
            o.canonical_form.line_ids().iter().map(|&l| plane.format_line(&plane.line(l))).collect();
        println!("{:?} x{}: {}", o.family_label, o.orbit_size, lines.join(" "));
    }
    println!("{} solutions in {} orbits", report.total_solutions, report.orbits.len());

    // canonical forms are invariant under the group
    let s = &sols.solutions[0];
    let moved = group.apply(group.order() / 2, s);
    println!(
        "canonical form invariant under a random element: {}",
        canonical_partition(&moved, &group)? == canonical_partition(s, &group)?
    );
    Ok(())
}
