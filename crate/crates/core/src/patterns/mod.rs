//! Type I/II patterns, their occurrences in a walk, shells and pattern swaps.
//!
//! An occurrence of `χ` in `γ` is a step index `k` such that `γ[k, k+|χ|]` is
//! a translate of `χ` and no other vertex of `γ` lies in the translated
//! cube. The second condition keeps every swap self-avoiding: the cube is
//! then reserved for the pattern, whatever its type.

mod allocation;
mod corpus;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use allocation::{
    allocation_tail, gaussian_resample_ratio, gaussian_t1_approx, hypergeom_law, hypergeom_t1,
    resample_ratio, HypergeomLaw,
};
pub use corpus::{shell_members, stacked_shells};

use crate::error::{Result, SawError};
use crate::lattice::{check_dim, Point, Step};
use crate::walk::Walk;

const SHIPPED_D2: &str = include_str!("../../data/pattern_pair_d2.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternType {
    I,
    II,
}

impl PatternType {
    pub fn other(self) -> Self {
        match self {
            PatternType::I => PatternType::II,
            PatternType::II => PatternType::I,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternPair {
    pub cube_side: i32,
    pub chi_i: Walk,
    pub chi_ii: Walk,
}

#[derive(Serialize, Deserialize)]
struct PatternPairFile {
    dim: usize,
    cube_side: i32,
    chi_i: String,
    chi_ii: String,
}

/// Outcome of each defining clause for a pattern pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCertificate {
    pub same_dimension: bool,
    pub self_avoiding: bool,
    pub inside_cube: bool,
    pub start: bool,
    pub end: bool,
    pub length: bool,
    pub boundary: bool,
}

impl PairCertificate {
    pub fn passes(&self) -> bool {
        self.same_dimension
            && self.self_avoiding
            && self.inside_cube
            && self.start
            && self.end
            && self.length
            && self.boundary
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("same_dimension", self.same_dimension),
            ("self_avoiding", self.self_avoiding),
            ("inside_cube", self.inside_cube),
            ("start", self.start),
            ("end", self.end),
            ("length", self.length),
            ("boundary", self.boundary),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

impl PatternPair {
    pub fn dim(&self) -> usize {
        self.chi_i.dim()
    }

    pub fn pattern(&self, t: PatternType) -> &Walk {
        match t {
            PatternType::I => &self.chi_i,
            PatternType::II => &self.chi_ii,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: PatternPairFile =
            serde_json::from_str(text).map_err(|e| SawError::Parse(e.to_string()))?;
        check_dim(f.dim)?;
        Ok(PatternPair {
            cube_side: f.cube_side,
            chi_i: Walk::parse(&f.chi_i, f.dim)?,
            chi_ii: Walk::parse(&f.chi_ii, f.dim)?,
        })
    }

    pub fn to_json(&self) -> String {
        let f = PatternPairFile {
            dim: self.dim(),
            cube_side: self.cube_side,
            chi_i: self.chi_i.to_string(),
            chi_ii: self.chi_ii.to_string(),
        };
        serde_json::to_string_pretty(&f).expect("plain struct serializes")
    }

    /// `(k, 1, …, 1)`, where both patterns start.
    pub fn entry_point(&self) -> Point {
        corner(self.dim(), self.cube_side, 1)
    }

    /// `(k, 2, 1, …, 1)`, where both patterns end.
    pub fn exit_point(&self) -> Point {
        corner(self.dim(), self.cube_side, 2)
    }

    /// Whether `p` lies in the closed cube with lowest corner `base`.
    pub fn cube_contains(&self, base: &Point, p: &Point) -> bool {
        let q = p.sub(base);
        q.coords()
            .iter()
            .all(|&c| (0..=self.cube_side).contains(&c))
    }
}

fn corner(dim: usize, k: i32, second: i32) -> Point {
    let mut c = vec![1; dim];
    c[0] = k;
    c[1] = second;
    Point::new(&c).expect("dimension checked by caller")
}

fn cube_boundary(dim: usize, k: i32) -> Vec<Point> {
    let side = (k + 1) as usize;
    let mut out = Vec::new();
    let mut coords = vec![0i32; dim];
    for idx in 0..side.pow(dim as u32) {
        let mut r = idx;
        for c in coords.iter_mut() {
            *c = (r % side) as i32;
            r /= side;
        }
        if coords.iter().any(|&c| c == 0 || c == k) {
            out.push(Point::new(&coords).expect("valid dim"));
        }
    }
    out
}

pub fn validate_pattern_pair(pp: &PatternPair) -> PairCertificate {
    let dim = pp.dim();
    let same_dimension = pp.chi_ii.dim() == dim;
    let mut cert = PairCertificate {
        same_dimension,
        self_avoiding: pp.chi_i.is_self_avoiding() && pp.chi_ii.is_self_avoiding(),
        inside_cube: false,
        start: false,
        end: false,
        length: pp.chi_ii.len() == pp.chi_i.len() + 2,
        boundary: false,
    };
    if !same_dimension || pp.cube_side < 2 {
        return cert;
    }
    let origin = Point::origin(dim).expect("valid dim");
    let patterns = [&pp.chi_i, &pp.chi_ii];
    cert.inside_cube = patterns
        .iter()
        .all(|w| w.vertices().iter().all(|v| pp.cube_contains(&origin, v)));
    cert.start = patterns.iter().all(|w| w.origin() == pp.entry_point());
    cert.end = patterns.iter().all(|w| w.endpoint() == pp.exit_point());
    let boundary = cube_boundary(dim, pp.cube_side);
    cert.boundary = patterns.iter().all(|w| {
        let verts = w.vertices();
        boundary.iter().all(|b| verts.contains(b))
    });
    cert
}

pub fn default_pattern_pair(dim: usize) -> Result<PatternPair> {
    match dim {
        2 => PatternPair::from_json(SHIPPED_D2),
        d => Err(SawError::UnsupportedDimension(d)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Occurrence {
    pub index: usize,
    pub kind: PatternType,
    /// Corner of the slot cube with the smallest coordinates.
    pub base: Point,
}

impl Occurrence {
    pub fn end(&self, pp: &PatternPair) -> usize {
        self.index + pp.pattern(self.kind).len()
    }
}

fn clean_match(
    verts: &[Point],
    steps: &[Step],
    k: usize,
    pp: &PatternPair,
    kind: PatternType,
) -> Option<Occurrence> {
    let chi = pp.pattern(kind);
    let len = chi.len();
    if k + len > steps.len() || steps[k..k + len] != *chi.steps() {
        return None;
    }
    let base = verts[k].sub(&chi.origin());
    let outside = verts[..k].iter().chain(&verts[k + len + 1..]);
    for v in outside {
        if pp.cube_contains(&base, v) {
            return None;
        }
    }
    Some(Occurrence {
        index: k,
        kind,
        base,
    })
}

pub fn find_occurrences(w: &Walk, pp: &PatternPair) -> Result<Vec<Occurrence>> {
    if w.dim() != pp.dim() {
        return Err(SawError::DimensionMismatch {
            left: w.dim(),
            right: pp.dim(),
        });
    }
    if !w.is_self_avoiding() {
        return Err(SawError::NotSelfAvoiding);
    }
    let verts = w.vertices();
    let steps = w.steps();
    let mut out: Vec<Occurrence> = Vec::new();
    for k in 0..steps.len() {
        for kind in [PatternType::I, PatternType::II] {
            if let Some(occ) = clean_match(&verts, steps, k, pp, kind) {
                if let Some(prev) = out.last() {
                    if prev.end(pp) > k {
                        return Err(SawError::OverlappingOccurrences {
                            first: prev.index,
                            second: k,
                        });
                    }
                }
                out.push(occ);
            }
        }
    }
    Ok(out)
}

/// Replaces the pattern in slot `slot` by the pattern of the other type.
pub fn swap_pattern(w: &Walk, pp: &PatternPair, slot: usize) -> Result<Walk> {
    let occ = find_occurrences(w, pp)?;
    let o = occ.get(slot).ok_or(SawError::InvalidSlot {
        index: slot,
        count: occ.len(),
    })?;
    let mut steps = w.steps()[..o.index].to_vec();
    steps.extend_from_slice(pp.pattern(o.kind.other()).steps());
    steps.extend_from_slice(&w.steps()[o.end(pp)..]);
    Walk::new(w.origin(), steps)
}

/// Walks that differ only by the types of their patterns share a shell.
///
/// Stored relative to a walk starting at the origin: the step runs between
/// consecutive slots and the base corner of each slot cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shell {
    pub dim: usize,
    pub segments: Vec<Vec<Step>>,
    pub slots: Vec<Point>,
}

impl Shell {
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// Length of the member with every slot of type I.
    pub fn base_len(&self, pp: &PatternPair) -> usize {
        self.segments.iter().map(Vec::len).sum::<usize>() + self.slots.len() * pp.chi_i.len()
    }

    /// `(T_I, T_II)` of a member of length `n`, if that length is attained.
    pub fn type_counts(&self, pp: &PatternPair, n: usize) -> Option<(usize, usize)> {
        let base = self.base_len(pp);
        if n < base || !(n - base).is_multiple_of(2) {
            return None;
        }
        let t_ii = (n - base) / 2;
        (t_ii <= self.slots.len()).then(|| (self.slots.len() - t_ii, t_ii))
    }

    pub fn member_lengths(&self, pp: &PatternPair) -> Vec<usize> {
        let base = self.base_len(pp);
        (0..=self.slots.len()).map(|t| base + 2 * t).collect()
    }

    /// The member walk (from the origin) with the given slot types.
    pub fn realize(&self, pp: &PatternPair, types: &[PatternType]) -> Result<Walk> {
        if types.len() != self.slots.len() {
            return Err(SawError::InvalidSlot {
                index: types.len(),
                count: self.slots.len(),
            });
        }
        let mut steps = self.segments[0].clone();
        for (t, seg) in types.iter().zip(&self.segments[1..]) {
            steps.extend_from_slice(pp.pattern(*t).steps());
            steps.extend_from_slice(seg);
        }
        Walk::from_steps(self.dim, steps)
    }
}

pub fn shell_of(w: &Walk, pp: &PatternPair) -> Result<Shell> {
    let occ = find_occurrences(w, pp)?;
    let w0 = w.at_origin();
    let steps = w0.steps();
    let mut segments = Vec::with_capacity(occ.len() + 1);
    let mut at = 0;
    for o in &occ {
        segments.push(steps[at..o.index].to_vec());
        at = o.end(pp);
    }
    segments.push(steps[at..].to_vec());
    Ok(Shell {
        dim: w.dim(),
        segments,
        slots: occ.iter().map(|o| o.base.sub(&w.origin())).collect(),
    })
}

/// `(T_I, T_II)` of a walk.
pub fn type_counts(w: &Walk, pp: &PatternPair) -> Result<(usize, usize)> {
    let occ = find_occurrences(w, pp)?;
    let t_ii = occ.iter().filter(|o| o.kind == PatternType::II).count();
    Ok((occ.len() - t_ii, t_ii))
}

/// A split of a shell's slot indices into two disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotPartition {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

impl SlotPartition {
    /// `s1` as given, `s2` its complement in `0..slot_count`.
    pub fn new(slot_count: usize, mut s1: Vec<usize>) -> Result<Self> {
        s1.sort_unstable();
        s1.dedup();
        if let Some(&bad) = s1.iter().find(|&&i| i >= slot_count) {
            return Err(SawError::InvalidSlot {
                index: bad,
                count: slot_count,
            });
        }
        let s2 = (0..slot_count)
            .filter(|i| s1.binary_search(i).is_err())
            .collect();
        Ok(SlotPartition { s1, s2 })
    }

    /// Slots before the hanging time against slots after it. Fails when the
    /// lexicographic maximum of `w` is a vertex of one of its patterns.
    pub fn around_hang(w: &Walk, pp: &PatternPair) -> Result<Self> {
        let occ = find_occurrences(w, pp)?;
        let hang = w.hang_time()?;
        let mut s1 = Vec::new();
        for (i, o) in occ.iter().enumerate() {
            if (o.index..=o.end(pp)).contains(&hang) {
                return Err(SawError::InvalidPatternPair(format!(
                    "lexicographic maximum at step {hang} lies inside slot {i}"
                )));
            }
            if o.end(pp) < hang {
                s1.push(i);
            }
        }
        SlotPartition::new(occ.len(), s1)
    }

    /// `(T_I^1, T_II^1)`: pattern types counted over `s1`.
    pub fn first_part_counts(&self, w: &Walk, pp: &PatternPair) -> Result<(usize, usize)> {
        let occ = find_occurrences(w, pp)?;
        if occ.len() != self.s1.len() + self.s2.len() {
            return Err(SawError::InvalidSlot {
                index: self.s1.len() + self.s2.len(),
                count: occ.len(),
            });
        }
        let t_i = self
            .s1
            .iter()
            .filter(|&&i| occ[i].kind == PatternType::I)
            .count();
        Ok((t_i, self.s1.len() - t_i))
    }
}

impl fmt::Display for PatternType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternType::I => "I",
            PatternType::II => "II",
        })
    }
}
