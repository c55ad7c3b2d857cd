//! The pencil C_s: Y = X^2 - s over GF(q), q = 3 mod 4: tangency indices,
//! the internal/external relation between members, and the character matrix.
//!
//! cargo run --example pencil_lemmas -- 11

use conicpart::conic::{character_matrix, internal_subfamily, pencil_relation, tangent_pencil_index};
use conicpart::gf::make_field;
use conicpart::plane::Plane;

fn main() -> conicpart::Result<()> {
    let q: u64 = std::env::args().nth(1).map_or(7, |a| a.parse().expect("prime q"));
    let f = make_field(q, 1, None)?;
    let plane = Plane::new(f.clone());

    let mut hits = vec![0usize; f.q() as usize];
    for l in plane.all_lines() {
        if let Ok(s) = tangent_pencil_index(&f, &l) {
            hits[s.index()] += 1;
        }
    }
    println!("lines off Y_inf tangent to each C_s: {hits:?}");

    let ns = f.non_squares();
    println!("internal pencil indices: {:?}", ns.iter().map(|&s| f.format(s)).collect::<Vec<_>>());
    for &s in &ns {
        let rel: Vec<String> = ns
            .iter()
            .filter(|&&t| t != s)
            .map(|&t| format!("{}:{:?}", f.format(t), pencil_relation(&f, s, t).unwrap()))
            .collect();
        println!("  C_{} sees {}; |I_s| = {}", f.format(s), rel.join(" "), internal_subfamily(&f, s)?.len());
    }

    let a = character_matrix(&f)?;
    for row in &a.entries {
        println!("  {}", row.iter().map(|x| format!("{x:>3}")).collect::<String>());
    }
    println!(
        "rank {} of {}, nullspace {:?}, det(A11) mod 2 = {}",
        a.rank,
        a.dim(),
        a.nullspace,
        a.minor_det_mod2
    );
    Ok(())
}
