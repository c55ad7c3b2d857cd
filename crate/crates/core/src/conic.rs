//! The conic `C: X^2 = YZ` (affine `Y = X^2`), the pencil `C_s: Y = X^2 - s`,
//! and the classification of points and lines with respect to a conic.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::linalg;
use crate::plane::{Collineation, LineId, Plane, PointId, ProjLine, ProjPoint, Triple, Y_INFINITY};

pub type Form = [[Elem; 3]; 3];

/// A nondegenerate conic given by a symmetric 3x3 form, stored mod scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Conic {
    form: Form,
    pencil_index: Option<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointClass {
    OnConic,
    Internal,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LineClass {
    Tangent,
    Secant,
    ExternalLine,
}

/// Line class together with the number of internal points on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineInfo {
    pub class: LineClass,
    pub internal_points: u32,
}

fn apply_form(f: &FieldSpec, m: &Form, v: &Triple) -> Triple {
    [0, 1, 2].map(|i| {
        f.add(f.add(f.mul(m[i][0], v[0]), f.mul(m[i][1], v[1])), f.mul(m[i][2], v[2]))
    })
}

impl Conic {
    /// Validates symmetry, nondegeneracy and the q+1 point count.
    pub fn from_form(f: &FieldSpec, form: Form) -> Result<Conic> {
        for i in 0..3 {
            for j in 0..3 {
                f.elem(form[i][j].0)?;
                if form[i][j] != form[j][i] {
                    return Err(Error::DegenerateConic);
                }
            }
        }
        let form = match Collineation::new(f, form) {
            Ok(c) => c.matrix(),
            Err(Error::Singular) => return Err(Error::DegenerateConic),
            Err(e) => return Err(e),
        };
        let conic = Conic { form, pencil_index: None };
        let q = f.q();
        let count = (0..q * q + q + 1)
            .filter(|&id| {
                let p = crate::plane::point_from_index(q, id);
                conic.contains(f, &p)
            })
            .count();
        if count != q as usize + 1 {
            return Err(Error::DegenerateConic);
        }
        Ok(conic)
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn pencil_index(&self) -> Option<Elem> {
        self.pencil_index
    }

    /// Value of the quadratic form at a representative of `p`.
    pub fn evaluate(&self, f: &FieldSpec, p: &ProjPoint) -> Elem {
        let v = p.coords();
        let mv = apply_form(f, &self.form, &v);
        f.add(f.add(f.mul(v[0], mv[0]), f.mul(v[1], mv[1])), f.mul(v[2], mv[2]))
    }

    pub fn contains(&self, f: &FieldSpec, p: &ProjPoint) -> bool {
        self.evaluate(f, p).is_zero()
    }

    /// Polar line of `p`; the tangent at `p` when `p` is on the conic.
    pub fn polar_line(&self, f: &FieldSpec, p: &ProjPoint) -> ProjLine {
        ProjLine::new(f, apply_form(f, &self.form, &p.coords())).expect("nondegenerate form")
    }

    /// Pole of `l`, the inverse of [`Conic::polar_line`].
    pub fn pole(&self, f: &FieldSpec, l: &ProjLine) -> ProjPoint {
        // the form is symmetric, so its inverse acts like the dual map
        let g = Collineation::new(f, self.form).expect("nondegenerate form");
        ProjPoint::new(f, g.apply_dual(f, &ProjLine::new(f, l.coeffs()).unwrap()).coeffs())
            .expect("nonzero")
    }
}

/// `X^2 - YZ`.
pub fn standard_conic(f: &FieldSpec) -> Conic {
    pencil_conic(f, Elem::ZERO)
}

/// `C_s: X^2 - YZ - s Z^2`, i.e. affine `Y = X^2 - s`.
pub fn pencil_conic(f: &FieldSpec, s: Elem) -> Conic {
    let (o, i) = (Elem::ZERO, Elem::ONE);
    let half = f.neg(f.inv(f.from_int(2)).expect("odd characteristic"));
    let form = [[i, o, o], [o, o, half], [o, half, f.neg(s)]];
    Conic { form, pencil_index: Some(s) }
}

/// Point and line classification tables for one conic.
pub struct ConicGeometry {
    plane: Arc<Plane>,
    conic: Conic,
    on_conic: Vec<PointId>,
    tangents: Vec<LineId>,
    point_class: Vec<PointClass>,
    line_info: Vec<LineInfo>,
}

impl ConicGeometry {
    pub fn new(plane: Arc<Plane>, conic: Conic) -> ConicGeometry {
        let f = plane.field().clone();
        let on_conic: Vec<PointId> =
            plane.point_ids().filter(|&p| conic.contains(&f, &plane.point(p))).collect();
        let tangents: Vec<LineId> =
            on_conic.iter().map(|&p| plane.line_id(&conic.polar_line(&f, &plane.point(p)))).collect();
        let mut tangent_count = vec![0u32; plane.size()];
        for &t in &tangents {
            for p in plane.points_on(t) {
                tangent_count[p.index()] += 1;
            }
        }
        let mut is_on = vec![false; plane.size()];
        for p in &on_conic {
            is_on[p.index()] = true;
        }
        let point_class: Vec<PointClass> = plane
            .point_ids()
            .map(|p| match (is_on[p.index()], tangent_count[p.index()]) {
                (true, _) => PointClass::OnConic,
                (false, 0) => PointClass::Internal,
                (false, 2) => PointClass::External,
                (false, n) => unreachable!("off-conic point on {n} tangents"),
            })
            .collect();
        let line_info = plane
            .line_ids()
            .map(|l| {
                let pts = plane.points_on(l);
                let hits = pts.iter().filter(|p| is_on[p.index()]).count();
                let internal = pts
                    .iter()
                    .filter(|p| point_class[p.index()] == PointClass::Internal)
                    .count() as u32;
                let class = match hits {
                    0 => LineClass::ExternalLine,
                    1 => LineClass::Tangent,
                    2 => LineClass::Secant,
                    n => unreachable!("line meets conic in {n} points"),
                };
                LineInfo { class, internal_points: internal }
            })
            .collect();
        ConicGeometry { plane, conic, on_conic, tangents, point_class, line_info }
    }

    /// The plane together with the standard conic.
    pub fn standard(field: Arc<FieldSpec>) -> ConicGeometry {
        let conic = standard_conic(&field);
        ConicGeometry::new(Arc::new(Plane::new(field)), conic)
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.plane.field()
    }

    pub fn q(&self) -> u32 {
        self.plane.q()
    }

    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    pub fn conic_points(&self) -> &[PointId] {
        &self.on_conic
    }

    pub fn tangents(&self) -> &[LineId] {
        &self.tangents
    }

    pub fn classify_point(&self, p: PointId) -> PointClass {
        self.point_class[p.index()]
    }

    pub fn classify_line(&self, l: LineId) -> LineInfo {
        self.line_info[l.index()]
    }

    pub fn internal_points(&self) -> Vec<PointId> {
        self.points_of(PointClass::Internal)
    }

    pub fn external_points(&self) -> Vec<PointId> {
        self.points_of(PointClass::External)
    }

    pub fn points_of(&self, class: PointClass) -> Vec<PointId> {
        self.plane.point_ids().filter(|&p| self.point_class[p.index()] == class).collect()
    }

    pub fn lines_of(&self, class: LineClass) -> Vec<LineId> {
        self.plane.line_ids().filter(|&l| self.line_info[l.index()].class == class).collect()
    }

    /// Census of point and line classes.
    pub fn census(&self) -> Census {
        let count_p = |c| self.point_class.iter().filter(|&&x| x == c).count();
        let count_l = |c| self.line_info.iter().filter(|x| x.class == c).count();
        Census {
            on_conic: count_p(PointClass::OnConic),
            internal: count_p(PointClass::Internal),
            external: count_p(PointClass::External),
            tangents: count_l(LineClass::Tangent),
            secants: count_l(LineClass::Secant),
            external_lines: count_l(LineClass::ExternalLine),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Census {
    pub on_conic: usize,
    pub internal: usize,
    pub external: usize,
    pub tangents: usize,
    pub secants: usize,
    pub external_lines: usize,
}

/// Classifies a single point by counting the tangents of `k` through it.
pub fn classify_point(plane: &Plane, k: &Conic, p: &ProjPoint) -> PointClass {
    let f = plane.field();
    if k.contains(f, p) {
        return PointClass::OnConic;
    }
    let tangents = plane
        .point_ids()
        .map(|id| plane.point(id))
        .filter(|x| k.contains(f, x))
        .filter(|x| plane.incident(p, &k.polar_line(f, x)))
        .count();
    if tangents == 0 {
        PointClass::Internal
    } else {
        PointClass::External
    }
}

/// Classifies a single line by its intersection with `k`.
pub fn classify_line(plane: &Plane, k: &Conic, l: &ProjLine) -> LineInfo {
    let f = plane.field();
    let pts = plane.points_on(plane.line_id(l));
    let hits = pts.iter().filter(|&&p| k.contains(f, &plane.point(p))).count();
    let internal = pts
        .iter()
        .filter(|&&p| classify_point(plane, k, &plane.point(p)) == PointClass::Internal)
        .count() as u32;
    let class = match hits {
        0 => LineClass::ExternalLine,
        1 => LineClass::Tangent,
        _ => LineClass::Secant,
    };
    LineInfo { class, internal_points: internal }
}

/// Second point-classification route: the quadratic character of the
/// evaluated form, with its sign calibrated on one known external point
/// (the meet of two tangents).
pub struct CharacterClassifier {
    conic: Conic,
    external_sign: i8,
}

impl CharacterClassifier {
    pub fn calibrate(plane: &Plane, k: &Conic) -> CharacterClassifier {
        let f = plane.field();
        let mut on = plane.point_ids().map(|id| plane.point(id)).filter(|x| k.contains(f, x));
        let (a, b) = (on.next().expect("conic point"), on.next().expect("conic point"));
        let ext = crate::plane::meet(f, &k.polar_line(f, &a), &k.polar_line(f, &b))
            .expect("distinct tangents");
        CharacterClassifier { conic: *k, external_sign: f.chi(k.evaluate(f, &ext)) }
    }

    pub fn classify(&self, f: &FieldSpec, p: &ProjPoint) -> PointClass {
        match f.chi(self.conic.evaluate(f, p)) {
            0 => PointClass::OnConic,
            c if c == self.external_sign => PointClass::External,
            _ => PointClass::Internal,
        }
    }
}

// The pencil C_s and the character matrix.

/// The unique `s` such that `l` is tangent to `C_s`, for `l: Y = αX + β`.
pub fn tangent_pencil_index(f: &FieldSpec, l: &ProjLine) -> Result<Elem> {
    let [u, v, w] = l.coeffs();
    if v.is_zero() {
        return Err(Error::LineThroughYInfinity);
    }
    // uX + vY + wZ = 0  =>  Y = αX + β
    let alpha = f.neg(f.div(u, v)?);
    let beta = f.neg(f.div(w, v)?);
    let four = f.from_int(4);
    let num = f.add(f.mul(alpha, alpha), f.mul(four, beta));
    Ok(f.neg(f.div(num, four)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PencilRelation {
    /// The affine points of `C_{s'}` are all external to `C_s`.
    ExternalTo,
    /// The affine points of `C_{s'}` are all internal to `C_s`.
    InternalTo,
}

/// Position of the affine points of `C_{s'}` relative to `C_s`.
pub fn pencil_relation(f: &FieldSpec, s: Elem, s_prime: Elem) -> Result<PencilRelation> {
    if s == s_prime {
        return Err(Error::EqualIndices);
    }
    Ok(match f.chi(f.sub(s_prime, s)) {
        1 => PencilRelation::ExternalTo,
        _ => PencilRelation::InternalTo,
    })
}

/// The pencil indices whose conics consist of internal points of `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilFamily {
    pub internal_indices: Vec<Elem>,
}

impl PencilFamily {
    pub fn new(f: &FieldSpec) -> PencilFamily {
        PencilFamily { internal_indices: f.non_squares() }
    }
}

fn require_three_mod_four(f: &FieldSpec) -> Result<()> {
    if f.q_mod4() == 3 {
        Ok(())
    } else {
        Err(Error::WrongCongruenceClass(f.q() as u64))
    }
}

/// `I_s`: the internal pencil conics that are internal to `C_s`.
pub fn internal_subfamily(f: &FieldSpec, s: Elem) -> Result<Vec<Elem>> {
    require_three_mod_four(f)?;
    if f.chi(s) != -1 {
        return Err(Error::NotInternalIndex);
    }
    Ok(f.non_squares().into_iter().filter(|&t| t != s && f.chi(f.sub(t, s)) == -1).collect())
}

/// The matrix `a_ij = χ(s_i - s_j)` over the ordered non-squares, with
/// exact rank, nullspace, and the parity of its (1,1) minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterMatrix {
    pub non_squares: Vec<Elem>,
    pub entries: Vec<Vec<i64>>,
    pub rank: usize,
    pub nullspace: Vec<Vec<BigInt>>,
    pub minor_det_mod2: u8,
}

impl CharacterMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// True when the nullspace is exactly the span of the all-ones vector.
    pub fn nullspace_is_constants(&self) -> bool {
        self.nullspace.len() == 1 && self.nullspace[0].iter().all(|x| *x == BigInt::from(1))
    }
}

pub fn character_matrix(f: &FieldSpec) -> Result<CharacterMatrix> {
    require_three_mod_four(f)?;
    let non_squares = f.non_squares();
    let entries: Vec<Vec<i64>> = non_squares
        .iter()
        .map(|&si| non_squares.iter().map(|&sj| f.chi(f.sub(si, sj)) as i64).collect())
        .collect();
    let minor: Vec<Vec<i64>> = entries.iter().skip(1).map(|r| r[1..].to_vec()).collect();
    Ok(CharacterMatrix {
        rank: linalg::bareiss_rank(&entries),
        nullspace: linalg::rational_nullspace(&entries),
        minor_det_mod2: linalg::det_mod2(&minor),
        non_squares,
        entries,
    })
}

// Parametrization of the standard conic and its stabilizer.

/// Point `(st, t^2, s^2)` of `X^2 = YZ`; `(1, a)` gives `(a, a^2, 1)` and
/// `(0, 1)` gives `Y_inf`.
pub fn conic_point(f: &FieldSpec, s: Elem, t: Elem) -> Result<ProjPoint> {
    ProjPoint::new(f, [f.mul(s, t), f.mul(t, t), f.mul(s, s)])
}

/// Inverse of [`conic_point`] on the standard conic, normalized so that the
/// parameter is `(1, a)` or `(0, 1)`.
pub fn conic_parameter(f: &FieldSpec, p: &ProjPoint) -> Result<(Elem, Elem)> {
    if !standard_conic(f).contains(f, p) {
        return Err(Error::NotOnConic);
    }
    if *p == Y_INFINITY {
        Ok((Elem::ZERO, Elem::ONE))
    } else {
        Ok((Elem::ONE, p.coords()[0]))
    }
}

/// The collineation of the standard conic induced by the projectivity
/// `(s, t) -> (as + bt, cs + dt)` of its parameter line.
pub fn lift_mobius(f: &FieldSpec, [[a, b], [c, d]]: [[Elem; 2]; 2]) -> Result<Collineation> {
    if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
        return Err(Error::Singular);
    }
    let two = f.from_int(2);
    Collineation::new(
        f,
        [
            [f.add(f.mul(a, d), f.mul(b, c)), f.mul(b, d), f.mul(a, c)],
            [f.mul(two, f.mul(c, d)), f.mul(d, d), f.mul(c, c)],
            [f.mul(two, f.mul(a, b)), f.mul(b, b), f.mul(a, a)],
        ],
    )
}

/// A stabilizer element of the standard conic moving `p` to `Y_inf`.
pub fn frame_to_y_infinity(f: &FieldSpec, p: &ProjPoint) -> Result<Collineation> {
    let (s, a) = conic_parameter(f, p)?;
    if s.is_zero() {
        return Ok(Collineation::identity());
    }
    // (s, t) -> (t - a s, s) sends (1, a) to (0, 1)
    lift_mobius(f, [[f.neg(a), Elem::ONE], [Elem::ONE, Elem::ZERO]])
}
