//! Points, lines, joins and meets in PG(2,5), and a collineation acting on both.

use conicpart::gf::make_field;
use conicpart::plane::{join, meet, Collineation, Plane, ProjPoint, Y_INFINITY};

fn main() -> conicpart::Result<()> {
    let f = make_field(5, 1, None)?;
    let plane = Plane::new(f.clone());
    println!("PG(2,{}): {} points, {} lines", plane.q(), plane.size(), plane.size());

    let a = ProjPoint::affine(f.from_int(1), f.from_int(2));
    let b = ProjPoint::affine(f.from_int(3), f.from_int(0));
    let l = join(&f, &a, &b)?;
    let m = join(&f, &a, &Y_INFINITY)?;
    println!("{} v {} = {}", plane.format_point(&a), plane.format_point(&b), plane.format_line(&l));
    println!("{} ^ {} = {}", plane.format_line(&l), plane.format_line(&m), plane.format_point(&meet(&f, &l, &m)?));

    let id = plane.line_id(&l);
    let pts: Vec<String> = plane.points_on(id).iter().map(|&p| plane.format_point(&plane.point(p))).collect();
    println!("points on line {}: {}", id.0, pts.join(" "));

    let e = |n| f.from_int(n);
    let g = Collineation::new(&f, [[e(1), e(2), e(0)], [e(0), e(1), e(3)], [e(1), e(0), e(1)]])?;
    let (ga, gl) = (g.apply(&f, &a), g.apply_dual(&f, &l));
    println!("g{} = {}, g{} = {}", plane.format_point(&a), plane.format_point(&ga), plane.format_line(&l), plane.format_line(&gl));
    println!("incidence preserved: {}", plane.incident(&ga, &gl));
    Ok(())
}
