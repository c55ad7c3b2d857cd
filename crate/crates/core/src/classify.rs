//! The stabilizer of the conic in PGL(3,q), canonical forms of line sets
//! under it, and orbit classification of search results.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conic::{conic_parameter, lift_mobius, ConicGeometry};
use crate::error::{Error, Result};
use crate::families::{family_representatives, LineSet, Provenance};
use crate::gf::{Elem, FieldDescriptor, FieldSpec};
use crate::plane::{Collineation, LineId};
use crate::search::{CoverMode, SolutionSet};

/// All collineations fixing the conic, with their action on line ids.
pub struct StabilizerGroup {
    field: FieldDescriptor,
    elements: Vec<Collineation>,
    line_perms: Vec<Vec<LineId>>,
}

impl StabilizerGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Collineation] {
        &self.elements
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// Line permutation of the i-th element.
    pub fn line_permutation(&self, i: usize) -> &[LineId] {
        &self.line_perms[i]
    }

    /// Image of `set` under the i-th element.
    pub fn apply(&self, i: usize, set: &LineSet) -> LineSet {
        set.map(&self.line_perms[i])
    }
}

/// The projectivity of the parameter line sending (1,0), (0,1), (1,1) to
/// `u`, `v`, `w`.
fn mobius_from_triple(f: &FieldSpec, u: [Elem; 2], v: [Elem; 2], w: [Elem; 2]) -> Option<[[Elem; 2]; 2]> {
    // solve lambda u + mu v = w
    let det = f.sub(f.mul(u[0], v[1]), f.mul(v[0], u[1]));
    let inv = f.inv(det).ok()?;
    let lambda = f.mul(f.sub(f.mul(w[0], v[1]), f.mul(v[0], w[1])), inv);
    let mu = f.mul(f.sub(f.mul(u[0], w[1]), f.mul(w[0], u[1])), inv);
    Some([
        [f.mul(lambda, u[0]), f.mul(mu, v[0])],
        [f.mul(lambda, u[1]), f.mul(mu, v[1])],
    ])
}

/// The (q+1)q(q-1) collineations fixing the standard conic, one for each
/// ordered triple of distinct conic points, in the order of the triples.
pub fn conic_stabilizer(geom: &ConicGeometry) -> StabilizerGroup {
    let f = geom.field();
    let plane = geom.plane();
    let params: Vec<[Elem; 2]> = geom
        .conic_points()
        .iter()
        .map(|&p| {
            let (s, t) = conic_parameter(f, &plane.point(p)).expect("conic point");
            [s, t]
        })
        .collect();
    let n = params.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| a != b && b != c && a != c)
        .collect();
    let elements: Vec<Collineation> = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let m = mobius_from_triple(f, params[a], params[b], params[c]).expect("distinct points");
            lift_mobius(f, m).expect("invertible")
        })
        .collect();
    let line_perms = elements.par_iter().map(|g| plane.line_permutation(g)).collect();
    StabilizerGroup { field: f.descriptor().clone(), elements, line_perms }
}

/// Lexicographically least image of the sorted id list over the group.
pub fn canonical_partition(set: &LineSet, group: &StabilizerGroup) -> Result<LineSet> {
    if set.field() != group.field() {
        return Err(Error::FieldMismatch);
    }
    let best = group
        .line_perms
        .par_iter()
        .map(|perm| set.map(perm))
        .min_by(|a, b| a.line_ids().cmp(b.line_ids()))
        .expect("group contains the identity");
    Ok(best.with_provenance(set.provenance()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyLabel {
    ExternalPencil,
    ConicPointPencil,
    BaerSubplane,
    ExceptionalCover,
    Unknown,
}

impl FamilyLabel {
    fn of(p: Provenance) -> Option<FamilyLabel> {
        match p {
            Provenance::ExternalPencil => Some(FamilyLabel::ExternalPencil),
            Provenance::ConicPointPencil => Some(FamilyLabel::ConicPointPencil),
            Provenance::BaerSubplane => Some(FamilyLabel::BaerSubplane),
            Provenance::SearchResult => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub canonical_form: LineSet,
    pub orbit_size: usize,
    pub family_label: FamilyLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub mode: CoverMode,
    /// Sorted by label, then canonical form.
    pub orbits: Vec<Orbit>,
    pub total_solutions: usize,
}

impl OrbitReport {
    pub fn count(&self, label: FamilyLabel) -> usize {
        self.orbits.iter().filter(|o| o.family_label == label).count()
    }

    pub fn orbit_sizes(&self, label: FamilyLabel) -> Vec<usize> {
        self.orbits.iter().filter(|o| o.family_label == label).map(|o| o.orbit_size).collect()
    }
}

/// Groups the solutions into orbits and names each orbit after the family
/// whose constructed representative it contains. Unmatched orbits are
/// `ExceptionalCover` in cover mode and `Unknown` otherwise.
pub fn classify_solutions(
    geom: &ConicGeometry,
    solutions: &SolutionSet,
    group: &StabilizerGroup,
) -> Result<OrbitReport> {
    if solutions.field != *group.field() || *geom.field().descriptor() != *group.field() {
        return Err(Error::FieldMismatch);
    }
    let canon: Vec<LineSet> = solutions
        .solutions
        .par_iter()
        .map(|s| {
            if s.field() != group.field() {
                return Err(Error::FieldMismatch);
            }
            Ok(canonical_partition(s, group)?.with_provenance(Provenance::SearchResult))
        })
        .collect::<Result<_>>()?;
    let mut families: BTreeMap<Vec<LineId>, FamilyLabel> = BTreeMap::new();
    for rep in family_representatives(geom) {
        let c = canonical_partition(&rep, group)?;
        families.insert(c.line_ids().to_vec(), FamilyLabel::of(rep.provenance()).expect("constructed"));
    }
    let mut sizes: BTreeMap<Vec<LineId>, (LineSet, usize)> = BTreeMap::new();
    for c in canon {
        sizes.entry(c.line_ids().to_vec()).or_insert((c, 0)).1 += 1;
    }
    let fallback = match solutions.mode {
        CoverMode::Exact => FamilyLabel::Unknown,
        CoverMode::AtLeastOnce => FamilyLabel::ExceptionalCover,
    };
    let mut orbits: Vec<Orbit> = sizes
        .into_iter()
        .map(|(key, (form, orbit_size))| Orbit {
            family_label: families.get(&key).copied().unwrap_or(fallback),
            canonical_form: form,
            orbit_size,
        })
        .collect();
    orbits.sort_by(|a, b| {
        (a.family_label, a.canonical_form.line_ids()).cmp(&(b.family_label, b.canonical_form.line_ids()))
    });
    Ok(OrbitReport { mode: solutions.mode, orbits, total_solutions: solutions.solutions.len() })
}
