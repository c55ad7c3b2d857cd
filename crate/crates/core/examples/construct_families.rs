//! The three families of line partitions of the internal points, built and
//! verified. Pass p and h; square q adds the Baer subplane family.
//!
//! cargo run --example construct_families -- 5 2

use conicpart::conic::ConicGeometry;
use conicpart::families::{baer_subplane, family_representatives, verify_partition};
use conicpart::gf::make_field;

fn main() -> conicpart::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer"));
    let p = args.next().unwrap_or(3);
    let h = args.next().unwrap_or(2) as u32;
    let geom = ConicGeometry::standard(make_field(p, h, None)?);
    let plane = geom.plane();
    println!("q = {}: {:?}", geom.q(), geom.census());

    for set in family_representatives(&geom) {
        let r = verify_partition(&geom, &set);
        println!(
            "{:?}: {} lines ({} secant, {} external), exact = {}, conic covered = {}, spectrum {:?}",
            set.provenance(),
            r.size,
            r.secant_count,
            r.external_line_count,
            r.is_exact_partition,
            r.conic_covered,
            r.count_spectrum
        );
        let lines: Vec<String> = set.line_ids().iter().map(|&l| plane.format_line(&plane.line(l))).collect();
        println!("    {}", lines.join(" "));
    }
    if let Ok(sub) = baer_subplane(&geom) {
        let pts: Vec<String> = sub.conic_points.iter().map(|&p| plane.format_point(&plane.point(p))).collect();
        println!("Baer subplane: {} lines, conic points {}", sub.lines.len(), pts.join(" "));
    }
    Ok(())
}
