//! Line sets, the three partition families, and the partition verifier.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::conic::{frame_to_y_infinity, tangent_pencil_index, ConicGeometry, LineClass, PointClass};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldDescriptor};
use crate::plane::{LineId, Plane, PointId, Y_INFINITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    ExternalPencil,
    ConicPointPencil,
    BaerSubplane,
    SearchResult,
}

/// A set of lines of one plane, kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineSet {
    field: FieldDescriptor,
    line_ids: Vec<LineId>,
    provenance: Provenance,
}

impl LineSet {
    /// Sorts `ids`; rejects duplicates and ids outside the plane.
    pub fn new(plane: &Plane, mut ids: Vec<LineId>, provenance: Provenance) -> Result<LineSet> {
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLine(w[0].0));
            }
        }
        if let Some(bad) = ids.iter().find(|l| l.index() >= plane.size()) {
            return Err(Error::InvalidLineId(bad.0));
        }
        Ok(LineSet { field: plane.field().descriptor().clone(), line_ids: ids, provenance })
    }

    /// For ids already known to be sorted, distinct and in range.
    pub(crate) fn from_sorted(field: FieldDescriptor, ids: Vec<LineId>, provenance: Provenance) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        LineSet { field, line_ids: ids, provenance }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn line_ids(&self) -> &[LineId] {
        &self.line_ids
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.line_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.line_ids.is_empty()
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> LineSet {
        self.provenance = provenance;
        self
    }

    /// Image under a line permutation.
    pub fn map(&self, perm: &[LineId]) -> LineSet {
        let mut ids: Vec<LineId> = self.line_ids.iter().map(|l| perm[l.index()]).collect();
        ids.sort_unstable();
        LineSet { field: self.field.clone(), line_ids: ids, provenance: self.provenance }
    }

    pub fn to_record(&self, plane: &Plane) -> LineSetRecord {
        LineSetRecord {
            field: self.field.clone(),
            provenance: self.provenance,
            line_ids: self.line_ids.clone(),
            lines: self.line_ids.iter().map(|&l| plane.format_line(&plane.line(l))).collect(),
        }
    }

    pub fn from_record(plane: &Plane, rec: &LineSetRecord) -> Result<LineSet> {
        if rec.field != *plane.field().descriptor() {
            return Err(Error::FieldMismatch);
        }
        LineSet::new(plane, rec.line_ids.clone(), rec.provenance)
    }
}

/// JSON form of a [`LineSet`]. `lines` repeats each line as `[u,v,w]` for
/// readers without the binary; it is ignored on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSetRecord {
    pub field: FieldDescriptor,
    pub provenance: Provenance,
    pub line_ids: Vec<LineId>,
    #[serde(default)]
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub is_exact_partition: bool,
    pub size: usize,
    pub secant_count: usize,
    pub external_line_count: usize,
    pub tangent_count: usize,
    /// Number of lines of the set through each point of the conic.
    pub per_conic_point_line_counts: BTreeMap<PointId, u32>,
    pub uncovered_internal: usize,
    pub multiply_covered_internal: usize,
    /// Every point of the conic lies on some line of the set.
    pub conic_covered: bool,
    /// Distinct values of `per_conic_point_line_counts`, ascending.
    pub count_spectrum: Vec<u32>,
}

/// Census of a line set against the internal points of the conic. Never fails.
pub fn verify_partition(geom: &ConicGeometry, set: &LineSet) -> PartitionReport {
    let plane = geom.plane();
    let mut cover = vec![0u32; plane.size()];
    let (mut secants, mut externals, mut tangents) = (0, 0, 0);
    for &l in set.line_ids() {
        match geom.classify_line(l).class {
            LineClass::Secant => secants += 1,
            LineClass::ExternalLine => externals += 1,
            LineClass::Tangent => tangents += 1,
        }
        for p in plane.points_on(l) {
            cover[p.index()] += 1;
        }
    }
    let (mut uncovered, mut multiple) = (0, 0);
    for p in geom.internal_points() {
        match cover[p.index()] {
            0 => uncovered += 1,
            1 => {}
            _ => multiple += 1,
        }
    }
    let per_point: BTreeMap<PointId, u32> =
        geom.conic_points().iter().map(|&p| (p, cover[p.index()])).collect();
    let mut spectrum: Vec<u32> = per_point.values().copied().collect();
    spectrum.sort_unstable();
    spectrum.dedup();
    PartitionReport {
        is_exact_partition: uncovered == 0 && multiple == 0 && tangents == 0,
        size: set.len(),
        secant_count: secants,
        external_line_count: externals,
        tangent_count: tangents,
        conic_covered: per_point.values().all(|&c| c > 0),
        per_conic_point_line_counts: per_point,
        uncovered_internal: uncovered,
        multiply_covered_internal: multiple,
        count_spectrum: spectrum,
    }
}

fn non_tangents_through(geom: &ConicGeometry, p: PointId) -> Vec<LineId> {
    geom.plane()
        .lines_through(p)
        .iter()
        .copied()
        .filter(|&l| geom.classify_line(l).class != LineClass::Tangent)
        .collect()
}

/// The q-1 non-tangent lines through an external point.
pub fn external_pencil_partition(geom: &ConicGeometry, p: PointId) -> Result<LineSet> {
    if geom.classify_point(p) != PointClass::External {
        return Err(Error::NotExternalPoint);
    }
    LineSet::new(geom.plane(), non_tangents_through(geom, p), Provenance::ExternalPencil)
}

/// The q lines through a point of the conic other than its tangent.
pub fn conic_point_pencil_partition(geom: &ConicGeometry, p: PointId) -> Result<LineSet> {
    if geom.classify_point(p) != PointClass::OnConic {
        return Err(Error::NotOnConic);
    }
    LineSet::new(geom.plane(), non_tangents_through(geom, p), Provenance::ConicPointPencil)
}

/// The subfield subplane PG(2, sqrt q) and its relation to the conic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaerSubplane {
    pub points: Vec<PointId>,
    pub lines: Vec<LineId>,
    /// Subplane points lying on the conic.
    pub conic_points: Vec<PointId>,
    /// Subplane lines tangent to the conic.
    pub tangent_lines: Vec<LineId>,
}

pub fn baer_subplane(geom: &ConicGeometry) -> Result<BaerSubplane> {
    let f = geom.field();
    let sub = f.square_root_subfield().ok_or(Error::NotASquare(f.q() as u64))?;
    let mut in_sub = vec![false; f.q() as usize];
    for e in &sub {
        in_sub[e.index()] = true;
    }
    let rational = |v: [Elem; 3]| v.iter().all(|c| in_sub[c.index()]);
    let plane = geom.plane();
    let points: Vec<PointId> =
        plane.point_ids().filter(|&p| rational(plane.point(p).coords())).collect();
    let lines: Vec<LineId> =
        plane.line_ids().filter(|&l| rational(plane.line(l).coeffs())).collect();
    let conic_points = points
        .iter()
        .copied()
        .filter(|&p| geom.classify_point(p) == PointClass::OnConic)
        .collect();
    let tangent_lines = lines
        .iter()
        .copied()
        .filter(|&l| geom.classify_line(l).class == LineClass::Tangent)
        .collect();
    Ok(BaerSubplane { points, lines, conic_points, tangent_lines })
}

/// The non-tangent lines of the subfield Baer subplane (square q only).
pub fn baer_subplane_partition(geom: &ConicGeometry) -> Result<LineSet> {
    let sub = baer_subplane(geom)?;
    let ids = sub.lines.into_iter().filter(|l| !sub.tangent_lines.contains(l)).collect();
    LineSet::new(geom.plane(), ids, Provenance::BaerSubplane)
}

/// One constructed representative per family available for this q.
pub fn family_representatives(geom: &ConicGeometry) -> Vec<LineSet> {
    let mut reps = Vec::new();
    if let Some(&p) = geom.external_points().first() {
        reps.push(external_pencil_partition(geom, p).expect("external point"));
    }
    let y_inf = geom.plane().point_id(&Y_INFINITY);
    reps.push(conic_point_pencil_partition(geom, y_inf).expect("Y_inf is on the conic"));
    if let Ok(baer) = baer_subplane_partition(geom) {
        reps.push(baer);
    }
    reps
}

/// Per-point tangency data of a size-q partition, in a frame where the
/// chosen point of the conic is `Y_inf`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangencyProfile {
    /// Lines of the set through the point.
    pub m: u32,
    /// For each non-square s, the number of lines tangent to `C_s`.
    pub phi: BTreeMap<Elem, u32>,
    /// Lines not through the point that are tangent to some `C_s` with s a
    /// square (including s = 0).
    pub stray_tangents: u32,
    /// Common value of `phi`, if constant.
    pub t: Option<u32>,
    pub identity_holds: bool,
}

pub fn tangency_profile(geom: &ConicGeometry, set: &LineSet, p: PointId) -> Result<TangencyProfile> {
    let f = geom.field();
    let q = geom.q();
    if f.q_mod4() != 3 {
        return Err(Error::WrongCongruenceClass(q as u64));
    }
    if geom.classify_point(p) != PointClass::OnConic {
        return Err(Error::NotOnConic);
    }
    let report = verify_partition(geom, set);
    if !report.is_exact_partition || report.size != q as usize {
        return Err(Error::NotAPartition);
    }
    let plane = geom.plane();
    let frame = frame_to_y_infinity(f, &plane.point(p))?;
    let mut phi: BTreeMap<Elem, u32> = f.non_squares().into_iter().map(|s| (s, 0)).collect();
    let (mut m, mut stray) = (0u32, 0u32);
    for &l in set.line_ids() {
        let image = frame.apply_dual(f, &plane.line(l));
        match tangent_pencil_index(f, &image) {
            Err(_) => m += 1,
            Ok(s) => match phi.get_mut(&s) {
                Some(c) => *c += 1,
                None => stray += 1,
            },
        }
    }
    let sum: u32 = phi.values().sum();
    let first = phi.values().next().copied();
    let t = first.filter(|&v| phi.values().all(|&x| x == v));
    let half = (q - 1) / 2;
    let identity_holds = stray == 0
        && sum == q - m
        && t.is_some_and(|t| t <= 2 && t * half == q - m);
    Ok(TangencyProfile { m, phi, stray_tangents: stray, t, identity_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::plane::ProjLine;

    fn geom(p: u64, h: u32) -> ConicGeometry {
        ConicGeometry::standard(make_field(p, h, None).unwrap())
    }

    #[test]
    fn external_pencils() {
        for (p, h, size) in [(3u64, 1u32, 2usize), (5, 1, 4), (7, 1, 6)] {
            let g = geom(p, h);
            for e in g.external_points() {
                let set = external_pencil_partition(&g, e).unwrap();
                let r = verify_partition(&g, &set);
                assert!(r.is_exact_partition);
                assert_eq!(r.size, size);
                assert_eq!(r.secant_count, size / 2);
                assert_eq!(r.external_line_count, size / 2);
            }
        }
        let g = geom(5, 1);
        let y_inf = g.plane().point_id(&Y_INFINITY);
        assert_eq!(external_pencil_partition(&g, y_inf).unwrap_err(), Error::NotExternalPoint);
    }

    #[test]
    fn conic_point_pencils() {
        let g = geom(7, 1);
        let f = g.field().clone();
        let y_inf = g.plane().point_id(&Y_INFINITY);
        let set = conic_point_pencil_partition(&g, y_inf).unwrap();
        let verticals: Vec<LineId> = f
            .elements()
            .map(|c| {
                g.plane().line_id(&ProjLine::new(&f, [Elem::ONE, Elem::ZERO, f.neg(c)]).unwrap())
            })
            .collect();
        let expected = LineSet::new(g.plane(), verticals, Provenance::ConicPointPencil).unwrap();
        assert_eq!(set, expected);
        let r = verify_partition(&g, &set);
        assert!(r.is_exact_partition);
        assert_eq!(r.size, 7);
        assert_eq!(r.secant_count, 7);
        let mut counts: Vec<u32> = r.per_conic_point_line_counts.values().copied().collect();
        counts.sort_unstable();
        assert_eq!(counts, vec![1, 1, 1, 1, 1, 1, 1, 7]);

        let g3 = geom(3, 1);
        let origin = g3.plane().point_id(&crate::plane::ProjPoint::affine(Elem::ZERO, Elem::ZERO));
        let r = verify_partition(&g3, &conic_point_pencil_partition(&g3, origin).unwrap());
        assert!(r.is_exact_partition && r.size == 3);

        let g9 = geom(3, 2);
        let y9 = g9.plane().point_id(&Y_INFINITY);
        let r = verify_partition(&g9, &conic_point_pencil_partition(&g9, y9).unwrap());
        assert!(r.is_exact_partition && r.size == 9);

        let off = g.internal_points()[0];
        assert_eq!(conic_point_pencil_partition(&g, off).unwrap_err(), Error::NotOnConic);
    }

    #[test]
    fn baer_partition_q9() {
        let g = geom(3, 2);
        let sub = baer_subplane(&g).unwrap();
        assert_eq!(sub.points.len(), 13);
        assert_eq!(sub.lines.len(), 13);
        assert_eq!(sub.conic_points.len(), 4);
        assert_eq!(sub.tangent_lines.len(), 4);
        let set = baer_subplane_partition(&g).unwrap();
        let r = verify_partition(&g, &set);
        assert!(r.is_exact_partition);
        assert_eq!(r.size, 9);
        assert!(r.conic_covered);
        assert_eq!(g.internal_points().len(), 36);
        assert_eq!(baer_subplane_partition(&geom(7, 1)).unwrap_err(), Error::NotASquare(7));
    }

    #[test]
    fn broken_set_is_reported() {
        let g = geom(5, 1);
        let f = g.field().clone();
        let mut ids: Vec<LineId> = (1..5)
            .map(|c| {
                let l = ProjLine::new(&f, [Elem::ONE, Elem::ZERO, f.neg(f.from_int(c))]).unwrap();
                g.plane().line_id(&l)
            })
            .collect();
        // Y = X
        ids.push(g.plane().line_id(&ProjLine::new(&f, [Elem::ONE, f.from_int(-1), Elem::ZERO]).unwrap()));
        let set = LineSet::new(g.plane(), ids, Provenance::SearchResult).unwrap();
        let r = verify_partition(&g, &set);
        assert!(!r.is_exact_partition);
        assert!(r.uncovered_internal > 0 || r.multiply_covered_internal > 0);
    }

    #[test]
    fn line_set_validation() {
        let g = geom(3, 1);
        let plane = g.plane();
        assert_eq!(
            LineSet::new(plane, vec![LineId(1), LineId(1)], Provenance::SearchResult).unwrap_err(),
            Error::DuplicateLine(1)
        );
        assert_eq!(
            LineSet::new(plane, vec![LineId(13)], Provenance::SearchResult).unwrap_err(),
            Error::InvalidLineId(13)
        );
        let set = LineSet::new(plane, vec![LineId(5), LineId(2)], Provenance::SearchResult).unwrap();
        assert_eq!(set.line_ids(), &[LineId(2), LineId(5)]);
        let rec = set.to_record(plane);
        let json = serde_json::to_string(&rec).unwrap();
        let back: LineSetRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(LineSet::from_record(plane, &back).unwrap(), set);
        let other = geom(5, 1);
        assert_eq!(LineSet::from_record(other.plane(), &back).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn tangency_profiles_of_conic_pencil_q7() {
        let g = geom(7, 1);
        let y_inf = g.plane().point_id(&Y_INFINITY);
        let set = conic_point_pencil_partition(&g, y_inf).unwrap();
        for &p in g.conic_points() {
            let prof = tangency_profile(&g, &set, p).unwrap();
            assert!(prof.identity_holds);
            if p == y_inf {
                assert_eq!((prof.m, prof.t), (7, Some(0)));
            } else {
                assert_eq!((prof.m, prof.t), (1, Some(2)));
            }
        }
        let ext = external_pencil_partition(&g, g.external_points()[0]).unwrap();
        assert_eq!(tangency_profile(&g, &ext, y_inf).unwrap_err(), Error::NotAPartition);
        let g9 = geom(3, 2);
        let s9 = baer_subplane_partition(&g9).unwrap();
        assert!(matches!(
            tangency_profile(&g9, &s9, g9.conic_points()[0]),
            Err(Error::WrongCongruenceClass(9))
        ));
    }
}
