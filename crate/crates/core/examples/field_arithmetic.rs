//! Arithmetic in GF(9) and GF(7): tables, inverses, and the quadratic character.
//!
//! cargo run --example field_arithmetic

use conicpart::gf::{make_field, ArithOp, FieldElement};

fn main() -> conicpart::Result<()> {
    let f = make_field(3, 2, None)?;
    println!("GF({}) with modulus {:?} (constant term first)", f.q(), f.modulus());
    let t = f.generator().expect("extension field");
    let elems: Vec<_> = f.elements().collect();
    print!("{:>6} |", "*");
    for &b in &elems {
        print!("{:>6}", f.format(b));
    }
    println!();
    for &a in &elems {
        print!("{:>6} |", f.format(a));
        for &b in &elems {
            print!("{:>6}", f.format(f.mul(a, b)));
        }
        println!();
    }
    println!("t^2 = {}, t^4 = {}", f.format(f.pow(t, 2)), f.format(f.pow(t, 4)));
    println!("non-squares: {:?}", f.non_squares().iter().map(|&a| f.format(a)).collect::<Vec<_>>());

    // the checked API refuses mixed fields and division by zero
    let g7 = make_field(7, 1, None)?;
    let three = FieldElement::from_int(&g7, 3);
    let five = FieldElement::from_int(&g7, 5);
    println!("3 * 5 = {:?} in GF(7)", three.arith(ArithOp::Mul, &five)?.repr());
    println!("chi(3) = {}, chi(2) = {}", three.quadratic_character(), g7.chi(g7.from_int(2)));
    let zero = FieldElement::from_int(&g7, 0);
    println!("3 / 0 -> {}", three.arith(ArithOp::Div, &zero).unwrap_err());
    let other = FieldElement::from_int(&f, 1);
    println!("GF(7) + GF(9) -> {}", three.arith(ArithOp::Add, &other).unwrap_err());
    Ok(())
}
