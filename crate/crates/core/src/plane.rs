//! The projective plane PG(2,q).
//!
//! Points and lines are normalized homogeneous triples whose last nonzero
//! coordinate is 1. Both are indexed densely: `(x, y, 1)` gets id `x*q + y`,
//! `(x, 1, 0)` gets `q^2 + x`, and `(1, 0, 0)` gets `q^2 + q`, where `x`, `y`
//! are element indices. Ids are stable for a fixed field descriptor.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

pub type Triple = [Elem; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LineId(pub u32);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LineId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Triple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjLine {
    coeffs: Triple,
}

fn normalize(f: &FieldSpec, v: Triple) -> Result<Triple> {
    for &c in &v {
        f.elem(c.0)?;
    }
    let last = v.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let s = f.inv(v[last])?;
    Ok([f.mul(v[0], s), f.mul(v[1], s), f.mul(v[2], s)])
}

fn dot(f: &FieldSpec, a: &Triple, b: &Triple) -> Elem {
    f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
}

fn cross(f: &FieldSpec, a: &Triple, b: &Triple) -> Triple {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

fn triple_id(q: u32, v: &Triple) -> u32 {
    if !v[2].is_zero() {
        v[0].0 * q + v[1].0
    } else if !v[1].is_zero() {
        q * q + v[0].0
    } else {
        q * q + q
    }
}

fn triple_from_id(q: u32, id: u32) -> Triple {
    let (zero, one) = (Elem::ZERO, Elem::ONE);
    if id < q * q {
        [Elem(id / q), Elem(id % q), one]
    } else if id < q * q + q {
        [Elem(id - q * q), one, zero]
    } else {
        [one, zero, zero]
    }
}

pub(crate) fn point_from_index(q: u32, id: u32) -> ProjPoint {
    ProjPoint { coords: triple_from_id(q, id) }
}

impl ProjPoint {
    /// Normalizes a nonzero triple.
    pub fn new(f: &FieldSpec, coords: Triple) -> Result<Self> {
        Ok(ProjPoint { coords: normalize(f, coords)? })
    }

    /// The affine point `(x, y)`, i.e. `(x, y, 1)`.
    pub fn affine(x: Elem, y: Elem) -> Self {
        ProjPoint { coords: [x, y, Elem::ONE] }
    }

    pub fn coords(&self) -> Triple {
        self.coords
    }
}

impl ProjLine {
    pub fn new(f: &FieldSpec, coeffs: Triple) -> Result<Self> {
        Ok(ProjLine { coeffs: normalize(f, coeffs)? })
    }

    pub fn coeffs(&self) -> Triple {
        self.coeffs
    }
}

/// The point with homogeneous coordinates (0, 1, 0).
pub const Y_INFINITY: ProjPoint = ProjPoint { coords: [Elem::ZERO, Elem::ONE, Elem::ZERO] };

/// The line Z = 0.
pub const LINE_AT_INFINITY: ProjLine = ProjLine { coeffs: [Elem::ZERO, Elem::ZERO, Elem::ONE] };

pub fn incident(f: &FieldSpec, p: &ProjPoint, l: &ProjLine) -> bool {
    dot(f, &p.coords, &l.coeffs).is_zero()
}

/// The line through two distinct points.
pub fn join(f: &FieldSpec, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::EqualArguments);
    }
    ProjLine::new(f, cross(f, &p.coords, &q.coords))
}

/// The intersection point of two distinct lines.
pub fn meet(f: &FieldSpec, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    if l == m {
        return Err(Error::EqualArguments);
    }
    ProjPoint::new(f, cross(f, &l.coeffs, &m.coeffs))
}

/// An element of PGL(3,q), stored with its first nonzero entry equal to 1.
///
/// Points are column vectors (`P -> M P`); lines transform by the inverse
/// transpose so that incidence is preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collineation {
    m: [[Elem; 3]; 3],
}

fn det3(f: &FieldSpec, m: &[[Elem; 3]; 3]) -> Elem {
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        f.sub(f.mul(m[1][a], m[2][b]), f.mul(m[1][c], m[2][d]))
    };
    let t0 = f.mul(m[0][0], minor(1, 2, 2, 1));
    let t1 = f.mul(m[0][1], minor(0, 2, 2, 0));
    let t2 = f.mul(m[0][2], minor(0, 1, 1, 0));
    f.add(f.sub(t0, t1), t2)
}

impl Collineation {
    pub fn new(f: &FieldSpec, m: [[Elem; 3]; 3]) -> Result<Self> {
        for c in m.iter().flatten() {
            f.elem(c.0)?;
        }
        if det3(f, &m).is_zero() {
            return Err(Error::Singular);
        }
        let lead = *m.iter().flatten().find(|c| !c.is_zero()).expect("nonsingular");
        let s = f.inv(lead)?;
        let mut out = m;
        for c in out.iter_mut().flatten() {
            *c = f.mul(*c, s);
        }
        Ok(Collineation { m: out })
    }

    pub fn identity() -> Self {
        let (o, i) = (Elem::ZERO, Elem::ONE);
        Collineation { m: [[i, o, o], [o, i, o], [o, o, i]] }
    }

    pub fn matrix(&self) -> [[Elem; 3]; 3] {
        self.m
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, f: &FieldSpec, other: &Collineation) -> Collineation {
        let mut r = [[Elem::ZERO; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..3).fold(Elem::ZERO, |acc, k| {
                    f.add(acc, f.mul(self.m[i][k], other.m[k][j]))
                });
            }
        }
        Collineation::new(f, r).expect("product of invertible matrices")
    }

    /// Adjugate matrix (inverse up to the scalar det).
    fn adjugate(&self, f: &FieldSpec) -> [[Elem; 3]; 3] {
        let m = &self.m;
        let mut adj = [[Elem::ZERO; 3]; 3];
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                // cofactor of m[j][i]
                let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                let d = f.sub(
                    f.mul(m[rows[0]][cols[0]], m[rows[1]][cols[1]]),
                    f.mul(m[rows[0]][cols[1]], m[rows[1]][cols[0]]),
                );
                *slot = if (i + j) % 2 == 0 { d } else { f.neg(d) };
            }
        }
        adj
    }

    pub fn inverse(&self, f: &FieldSpec) -> Collineation {
        Collineation::new(f, self.adjugate(f)).expect("adjugate of invertible matrix")
    }

    pub fn apply(&self, f: &FieldSpec, p: &ProjPoint) -> ProjPoint {
        let v = p.coords;
        let img = [dot(f, &self.m[0], &v), dot(f, &self.m[1], &v), dot(f, &self.m[2], &v)];
        ProjPoint::new(f, img).expect("invertible map")
    }

    /// Action on lines: `l -> M^{-T} l`.
    pub fn apply_dual(&self, f: &FieldSpec, l: &ProjLine) -> ProjLine {
        let adj = self.adjugate(f);
        let c = l.coeffs;
        // (adj^T) c, columns of adj
        let img: Triple = [0, 1, 2].map(|j| {
            f.add(f.add(f.mul(adj[0][j], c[0]), f.mul(adj[1][j], c[1])), f.mul(adj[2][j], c[2]))
        });
        ProjLine::new(f, img).expect("invertible map")
    }
}

/// Point and line tables of PG(2,q) with incidence lists.
pub struct Plane {
    field: Arc<FieldSpec>,
    points_on_line: Vec<Vec<PointId>>,
    lines_through_point: Vec<Vec<LineId>>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plane").field("q", &self.field.q()).finish()
    }
}

impl Plane {
    pub fn new(field: Arc<FieldSpec>) -> Plane {
        let q = field.q();
        let n = (q * q + q + 1) as usize;
        let mut points_on_line = vec![Vec::with_capacity(q as usize + 1); n];
        let mut lines_through_point = vec![Vec::with_capacity(q as usize + 1); n];
        let basis = [[Elem::ONE, Elem::ZERO, Elem::ZERO], [Elem::ZERO, Elem::ONE, Elem::ZERO], [
            Elem::ZERO,
            Elem::ZERO,
            Elem::ONE,
        ]];
        for lid in 0..n as u32 {
            let l = triple_from_id(q, lid);
            // two independent points of l, then the pencil a + λb together with b
            let mut on: Vec<Triple> = basis
                .iter()
                .map(|e| cross(&field, &l, e))
                .filter(|v| v.iter().any(|c| !c.is_zero()))
                .collect();
            let a = on.remove(0);
            let b = *on.iter().find(|v| cross(&field, &a, v).iter().any(|c| !c.is_zero())).unwrap();
            let mut ids: Vec<u32> = field
                .elements()
                .map(|t| {
                    let v = [0, 1, 2].map(|i| field.add(a[i], field.mul(t, b[i])));
                    triple_id(q, &normalize(&field, v).expect("independent"))
                })
                .collect();
            ids.push(triple_id(q, &normalize(&field, b).expect("nonzero")));
            ids.sort_unstable();
            for pid in ids {
                points_on_line[lid as usize].push(PointId(pid));
                lines_through_point[pid as usize].push(LineId(lid));
            }
        }
        Plane { field, points_on_line, lines_through_point }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// q^2 + q + 1.
    pub fn size(&self) -> usize {
        self.points_on_line.len()
    }

    pub fn point_id(&self, p: &ProjPoint) -> PointId {
        PointId(triple_id(self.q(), &p.coords))
    }

    pub fn line_id(&self, l: &ProjLine) -> LineId {
        LineId(triple_id(self.q(), &l.coeffs))
    }

    pub fn point(&self, id: PointId) -> ProjPoint {
        ProjPoint { coords: triple_from_id(self.q(), id.0) }
    }

    pub fn line(&self, id: LineId) -> ProjLine {
        ProjLine { coeffs: triple_from_id(self.q(), id.0) }
    }

    pub fn all_points(&self) -> Vec<ProjPoint> {
        (0..self.size() as u32).map(|i| self.point(PointId(i))).collect()
    }

    pub fn all_lines(&self) -> Vec<ProjLine> {
        (0..self.size() as u32).map(|i| self.line(LineId(i))).collect()
    }

    pub fn point_ids(&self) -> impl Iterator<Item = PointId> {
        (0..self.size() as u32).map(PointId)
    }

    pub fn line_ids(&self) -> impl Iterator<Item = LineId> {
        (0..self.size() as u32).map(LineId)
    }

    pub fn points_on(&self, l: LineId) -> &[PointId] {
        &self.points_on_line[l.index()]
    }

    pub fn lines_through(&self, p: PointId) -> &[LineId] {
        &self.lines_through_point[p.index()]
    }

    pub fn incident(&self, p: &ProjPoint, l: &ProjLine) -> bool {
        incident(&self.field, p, l)
    }

    /// Image of every line id under `g`.
    pub fn line_permutation(&self, g: &Collineation) -> Vec<LineId> {
        self.line_ids().map(|l| self.line_id(&g.apply_dual(&self.field, &self.line(l)))).collect()
    }

    pub fn point_permutation(&self, g: &Collineation) -> Vec<PointId> {
        self.point_ids().map(|p| self.point_id(&g.apply(&self.field, &self.point(p)))).collect()
    }

    pub fn format_point(&self, p: &ProjPoint) -> String {
        format_triple(&self.field, &p.coords, '(', ')')
    }

    pub fn format_line(&self, l: &ProjLine) -> String {
        format_triple(&self.field, &l.coeffs, '[', ']')
    }
}

fn format_triple(f: &FieldSpec, v: &Triple, open: char, close: char) -> String {
    format!("{open}{},{},{}{close}", f.format(v[0]), f.format(v[1]), f.format(v[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use rand::{Rng, SeedableRng};

    fn e(f: &FieldSpec, n: i64) -> Elem {
        f.from_int(n)
    }

    #[test]
    fn incidence_examples() {
        let f = make_field(7, 1, None).unwrap();
        let origin = ProjPoint::new(&f, [e(&f, 0), e(&f, 0), e(&f, 1)]).unwrap();
        let y0 = ProjLine::new(&f, [e(&f, 0), e(&f, 1), e(&f, 0)]).unwrap();
        assert!(incident(&f, &origin, &y0));
        let x3 = ProjLine::new(&f, [e(&f, 1), e(&f, 0), e(&f, -3)]).unwrap();
        assert!(incident(&f, &Y_INFINITY, &x3));

        let g = make_field(5, 1, None).unwrap();
        let p = ProjPoint::new(&g, [e(&g, 1); 3]).unwrap();
        let l = ProjLine::new(&g, [e(&g, 1); 3]).unwrap();
        assert!(!incident(&g, &p, &l));
    }

    #[test]
    fn join_and_meet() {
        let f = make_field(7, 1, None).unwrap();
        let a = ProjPoint::new(&f, [e(&f, 0), e(&f, 0), e(&f, 1)]).unwrap();
        let b = ProjPoint::new(&f, [e(&f, 1), e(&f, 1), e(&f, 1)]).unwrap();
        let l = join(&f, &a, &b).unwrap();
        assert_eq!(l, ProjLine::new(&f, [e(&f, 1), e(&f, -1), e(&f, 0)]).unwrap());
        assert_eq!(join(&f, &a, &a).unwrap_err(), Error::EqualArguments);

        let v3 = ProjLine::new(&f, [e(&f, 1), e(&f, 0), e(&f, -3)]).unwrap();
        let v5 = ProjLine::new(&f, [e(&f, 1), e(&f, 0), e(&f, -5)]).unwrap();
        assert_eq!(meet(&f, &v3, &v5).unwrap(), Y_INFINITY);
        assert_eq!(meet(&f, &v3, &v3).unwrap_err(), Error::EqualArguments);
        assert_eq!(ProjPoint::new(&f, [Elem::ZERO; 3]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn counts_and_axioms() {
        for (p, h) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = make_field(p, h, None).unwrap();
            let plane = Plane::new(f.clone());
            let q = plane.q() as usize;
            assert_eq!(plane.size(), q * q + q + 1);
            let pts = plane.all_points();
            let mut ids: Vec<_> = pts.iter().map(|x| plane.point_id(x)).collect();
            ids.dedup();
            assert_eq!(ids, plane.point_ids().collect::<Vec<_>>());
            for l in plane.line_ids() {
                assert_eq!(plane.points_on(l).len(), q + 1);
            }
            for pt in plane.point_ids() {
                assert_eq!(plane.lines_through(pt).len(), q + 1);
            }
        }
    }

    #[test]
    fn join_meet_consistency_exhaustive() {
        for (p, h) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let f = make_field(p, h, None).unwrap();
            let plane = Plane::new(f.clone());
            let pts = plane.all_points();
            for a in &pts {
                for b in &pts {
                    if a == b {
                        continue;
                    }
                    let l = join(&f, a, b).unwrap();
                    assert!(incident(&f, a, &l) && incident(&f, b, &l));
                    for m in plane.lines_through(plane.point_id(a)) {
                        let m = plane.line(*m);
                        if m != l {
                            assert_eq!(meet(&f, &l, &m).unwrap(), *a);
                        }
                    }
                }
            }
        }
    }

    fn random_collineation<R: Rng>(f: &FieldSpec, rng: &mut R) -> Collineation {
        loop {
            let m = [[(); 3]; 3].map(|r| r.map(|_| Elem(rng.gen_range(0..f.q()))));
            if let Ok(g) = Collineation::new(f, m) {
                return g;
            }
        }
    }

    #[test]
    fn scalar_multiples_are_identified() {
        let f = make_field(7, 1, None).unwrap();
        let (o, t) = (Elem::ZERO, e(&f, 3));
        let g = Collineation::new(&f, [[t, o, o], [o, t, o], [o, o, t]]).unwrap();
        assert_eq!(g, Collineation::identity());
        let p = ProjPoint::affine(e(&f, 2), e(&f, 5));
        assert_eq!(g.apply(&f, &p), p);
        assert_eq!(Collineation::new(&f, [[o; 3]; 3]).unwrap_err(), Error::Singular);
    }

    #[test]
    fn incidence_preserved_and_group_action() {
        let f = make_field(5, 1, None).unwrap();
        let plane = Plane::new(f.clone());
        let mut rng = rand_chacha_like();
        for _ in 0..5 {
            let g = random_collineation(&f, &mut rng);
            let h = random_collineation(&f, &mut rng);
            let gh = g.compose(&f, &h);
            for pt in plane.all_points() {
                assert_eq!(gh.apply(&f, &pt), g.apply(&f, &h.apply(&f, &pt)));
                for l in plane.all_lines() {
                    assert_eq!(
                        incident(&f, &pt, &l),
                        incident(&f, &g.apply(&f, &pt), &g.apply_dual(&f, &l))
                    );
                }
            }
            assert_eq!(g.compose(&f, &g.inverse(&f)), Collineation::identity());
        }
    }

    fn rand_chacha_like() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(0x5eed)
    }
}
