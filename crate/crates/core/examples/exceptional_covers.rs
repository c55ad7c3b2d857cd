//! Minimal covers of the internal points by q-1 lines. For q = 5 and 7 one
//! orbit besides the external pencils appears; for q = 11 none does.
//!
//! cargo run --release --example exceptional_covers

use conicpart::classify::{classify_solutions, conic_stabilizer, FamilyLabel};
use conicpart::conic::{ConicGeometry, LineClass};
use conicpart::gf::make_field;
use conicpart::search::{build_instance, solve_all, CoverMode, SearchOptions};

fn main() -> conicpart::Result<()> {
    for q in [5u64, 7, 11] {
        let geom = ConicGeometry::standard(make_field(q, 1, None)?);
        let size = q as usize - 1;
        let inst = build_instance(&geom, CoverMode::AtLeastOnce, Some(size));
        let sols = solve_all(&geom, &inst, &SearchOptions::default())?;
        let report = classify_solutions(&geom, &sols, &conic_stabilizer(&geom))?;
        println!("q = {q}: {} covers of size {size}", sols.solutions.len());
        for o in &report.orbits {
            let plane = geom.plane();
            let describe: Vec<String> = o
                .canonical_form
                .line_ids()
                .iter()
                .map(|&l| {
                    let tag = match geom.classify_line(l).class {
                        LineClass::Secant => "s",
                        LineClass::ExternalLine => "e",
                        LineClass::Tangent => "t",
                    };
                    format!("{}{}", plane.format_line(&plane.line(l)), tag)
                })
                .collect();
            println!("  {:?} x{}: {}", o.family_label, o.orbit_size, describe.join(" "));
        }
        if report.count(FamilyLabel::ExceptionalCover) == 0 {
            println!("  no exceptional cover");
        }
    }
    Ok(())
}
