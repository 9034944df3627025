//! The walk value type and the per-walk constructions: concatenation,
//! hanging time, unfolding, bridge/half-space/closing classification,
//! renewal structure and the cyclic structure of closing walks.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SawError};
use crate::lattice::{check_dim, Point, Step};

/// A lattice path: a starting point and a sequence of unit steps.
///
/// Equality is positional (same origin and steps); use [`Walk::same_shape`]
/// to compare up to translation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    origin: Point,
    steps: Vec<Step>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub self_avoiding: bool,
    pub bridge: bool,
    pub halfspace: bool,
    pub closing: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenewalReport {
    pub renewal_times: Vec<usize>,
    pub z_renewal_times: Vec<usize>,
}

impl Walk {
    pub fn new(origin: Point, steps: Vec<Step>) -> Result<Self> {
        if let Some(bad) = steps.iter().find(|s| !s.fits(origin.dim())) {
            return Err(SawError::InvalidStep {
                axis: bad.axis(),
                sign: i64::from(bad.sign()),
            });
        }
        Ok(Walk { origin, steps })
    }

    /// A walk from the origin of `Z^dim`.
    pub fn from_steps(dim: usize, steps: Vec<Step>) -> Result<Self> {
        Walk::new(Point::origin(dim)?, steps)
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Walk::from_steps(dim, Vec::new())
    }

    /// Parses the textual form `+1,+2,-1`, optionally prefixed by `@(x,y,…);`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let text = text.trim();
        let (origin, rest) = match text.strip_prefix('@') {
            Some(r) => {
                let (pt, rest) = r.split_once(';').ok_or_else(|| {
                    SawError::Parse(format!("missing ';' after origin in {text:?}"))
                })?;
                let origin: Point = pt.parse()?;
                if origin.dim() != dim {
                    return Err(SawError::DimensionMismatch {
                        left: origin.dim(),
                        right: dim,
                    });
                }
                (origin, rest)
            }
            None => (Point::origin(dim)?, text),
        };
        let steps = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(str::parse)
                .collect::<Result<Vec<Step>>>()?
        };
        Walk::new(origin, steps)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.origin.dim()
    }

    /// Number of steps.
    #[inline]
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    #[inline]
    pub fn origin(&self) -> Point {
        self.origin
    }

    #[inline]
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn vertices(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut cur = self.origin;
        out.push(cur);
        for &s in &self.steps {
            cur = cur.step(s);
            out.push(cur);
        }
        out
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.steps[..i].iter().fold(self.origin, |p, &s| p.step(s))
    }

    pub fn endpoint(&self) -> Point {
        self.vertex(self.len())
    }

    pub fn heights(&self) -> Vec<i32> {
        self.vertices().iter().map(Point::height).collect()
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len() + 1);
        self.vertices().into_iter().all(|p| seen.insert(p))
    }

    pub fn translate(&self, v: &Point) -> Walk {
        Walk {
            origin: self.origin.add(v),
            steps: self.steps.clone(),
        }
    }

    pub fn at_origin(&self) -> Walk {
        Walk {
            origin: Point::origin(self.dim()).expect("valid dim"),
            steps: self.steps.clone(),
        }
    }

    pub fn with_origin(&self, origin: Point) -> Result<Walk> {
        Walk::new(origin, self.steps.clone())
    }

    /// Equality up to translation.
    pub fn same_shape(&self, other: &Walk) -> bool {
        self.dim() == other.dim() && self.steps == other.steps
    }

    /// `γ ∘ γ̃`: `other` translated to start at the end of `self`.
    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.dim() != other.dim() {
            return Err(SawError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let mut steps = Vec::with_capacity(self.len() + other.len());
        steps.extend_from_slice(&self.steps);
        steps.extend_from_slice(&other.steps);
        Ok(Walk {
            origin: self.origin,
            steps,
        })
    }

    /// `γ[i, j]`, positioned at `γ_i`.
    pub fn segment(&self, i: usize, j: usize) -> Walk {
        assert!(i <= j && j <= self.len(), "segment [{i},{j}] out of range");
        Walk {
            origin: self.vertex(i),
            steps: self.steps[i..j].to_vec(),
        }
    }

    /// The same vertex set traversed backwards.
    pub fn reverse(&self) -> Walk {
        Walk {
            origin: self.endpoint(),
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// Index of the lexicographically maximal vertex.
    pub fn hang_time(&self) -> Result<usize> {
        if !self.is_self_avoiding() {
            return Err(SawError::NotSelfAvoiding);
        }
        Ok(lex_max_index(&self.vertices()))
    }

    /// `(γ[0, hang], γ[hang, n])`.
    pub fn split_at_hang(&self) -> Result<(Walk, Walk)> {
        let h = self.hang_time()?;
        Ok((self.segment(0, h), self.segment(h, self.len())))
    }

    /// `γ^1`, one `+e_1` edge, then `γ^2` reflected through the hang level.
    pub fn unfold(&self) -> Result<Walk> {
        let h = self.hang_time()?;
        let mut steps = Vec::with_capacity(self.len() + 1);
        steps.extend_from_slice(&self.steps[..h]);
        steps.push(Step::up());
        steps.extend(self.steps[h..].iter().map(|s| s.reflected_e1()));
        Ok(Walk {
            origin: self.origin,
            steps,
        })
    }

    pub fn classify(&self) -> Classification {
        let verts = self.vertices();
        let self_avoiding = self.is_self_avoiding();
        let h0 = verts[0].height();
        let hn = verts[verts.len() - 1].height();
        let bridge = self_avoiding
            && verts[1..]
                .iter()
                .all(|p| h0 < p.height() && p.height() <= hn);
        let halfspace = self_avoiding && verts[1..].iter().all(|p| p.height() > h0);
        let closing = self_avoiding && verts[0].is_adjacent(&verts[verts.len() - 1]);
        Classification {
            self_avoiding,
            bridge,
            halfspace,
            closing,
        }
    }

    pub fn is_closing(&self) -> bool {
        self.classify().closing
    }

    pub fn renewal_report(&self) -> Result<RenewalReport> {
        if !self.is_self_avoiding() {
            return Err(SawError::NotSelfAvoiding);
        }
        Ok(renewal_from_heights(&self.heights()))
    }

    pub fn z_renewal_times(&self) -> Result<Vec<usize>> {
        Ok(self.renewal_report()?.z_renewal_times)
    }

    /// Replaces the flat step `γ_{k+1} → γ_{k+2}` at a z-renewal time by
    /// another lateral step; the suffix is carried along.
    pub fn edge_swap_at_z_renewal(&self, k: usize, axis: usize, sign: i64) -> Result<Walk> {
        let step = Step::new(axis, sign)?;
        if axis < 2 || axis > self.dim() {
            return Err(SawError::InvalidStep { axis, sign });
        }
        if !self.z_renewal_times()?.contains(&k) {
            return Err(SawError::NotZRenewal(k));
        }
        if self.steps[k + 1] == step {
            return Err(SawError::SameStep);
        }
        let mut steps = self.steps.clone();
        steps[k + 1] = step;
        Ok(Walk {
            origin: self.origin,
            steps,
        })
    }

    /// The step closing the vertex cycle, `γ_n → γ_0`.
    fn closing_step(&self) -> Result<Step> {
        if !self.is_closing() {
            return Err(SawError::NotClosing);
        }
        Ok(self
            .endpoint()
            .step_to(&self.origin)
            .expect("closing walk ends next to its start"))
    }

    /// The closing walk visiting `γ_s, …, γ_n, γ_0, …, γ_{s−1}`, anchored at `γ_s`.
    pub fn cyclic_shift(&self, s: i64) -> Result<Walk> {
        let closing = self.closing_step()?;
        let period = self.len() + 1;
        let s = s.rem_euclid(period as i64) as usize;
        let mut cycle = self.steps.clone();
        cycle.push(closing);
        cycle.rotate_left(s);
        cycle.pop();
        Ok(Walk {
            origin: self.vertex(s),
            steps: cycle,
        })
    }

    /// Canonical key of the oriented polygon: the lexicographically least
    /// step sequence over all cyclic shifts. Translation is ignored.
    pub fn polygon_key(&self) -> Result<Vec<u8>> {
        let closing = self.closing_step()?;
        let mut cycle: Vec<u8> = self.steps.iter().map(|s| s.code()).collect();
        cycle.push(closing.code());
        let period = cycle.len();
        let best = (0..period)
            .min_by(|&a, &b| {
                (0..period - 1)
                    .map(|i| cycle[(a + i) % period])
                    .cmp((0..period - 1).map(|i| cycle[(b + i) % period]))
            })
            .expect("nonempty cycle");
        let mut key = Vec::with_capacity(period);
        key.push(self.dim() as u8);
        key.extend((0..period - 1).map(|i| cycle[(best + i) % period]));
        Ok(key)
    }
}

/// Index of the lexicographically greatest point (first one on ties).
pub(crate) fn lex_max_index(points: &[Point]) -> usize {
    let mut best = 0;
    for (i, p) in points.iter().enumerate().skip(1) {
        if p > &points[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn renewal_from_heights(h: &[i32]) -> RenewalReport {
    let n = h.len() - 1;
    let mut prefix_max = Vec::with_capacity(h.len());
    let mut m = i32::MIN;
    for &x in h {
        m = m.max(x);
        prefix_max.push(m);
    }
    // suffix_min[i] = min h[i..], with i32::MAX past the end
    let mut suffix_min = vec![i32::MAX; h.len() + 1];
    for i in (0..h.len()).rev() {
        suffix_min[i] = suffix_min[i + 1].min(h[i]);
    }
    let renewal_times = (0..=n)
        .filter(|&k| (k == 0 || prefix_max[k - 1] <= h[k]) && suffix_min[k + 1] > h[k])
        .collect();
    let z_renewal_times = if n >= 2 {
        (0..=n - 2)
            .filter(|&k| {
                prefix_max[k] < h[k + 1] && h[k + 1] == h[k + 2] && suffix_min[k + 3] > h[k + 1]
            })
            .collect()
    } else {
        Vec::new()
    };
    RenewalReport {
        renewal_times,
        z_renewal_times,
    }
}

/// `g` avoids `chi`: the two vertex sets meet exactly in `g_0`.
pub fn avoids(g: &Walk, chi: &Walk) -> Result<bool> {
    check_attached(g, chi)?;
    let chi_set: HashSet<Point> = chi.vertices().into_iter().collect();
    Ok(g.vertices()[1..].iter().all(|p| !chi_set.contains(p)))
}

/// `g` closes `chi`: it starts at `chi`'s end and ends next to `chi`'s start.
pub fn closes_ext(g: &Walk, chi: &Walk) -> Result<bool> {
    check_attached(g, chi)?;
    Ok(g.endpoint().is_adjacent(&chi.origin()))
}

fn check_attached(g: &Walk, chi: &Walk) -> Result<()> {
    if g.dim() != chi.dim() {
        return Err(SawError::DimensionMismatch {
            left: g.dim(),
            right: chi.dim(),
        });
    }
    if g.origin() != chi.endpoint() {
        return Err(SawError::StartMismatch);
    }
    Ok(())
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.origin.coords().iter().any(|&c| c != 0) {
            write!(f, "@{};", self.origin)?;
        }
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Walk[d={}; {}]", self.dim(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Walk {
        Walk::parse(s, 2).unwrap()
    }

    fn pt(c: &[i32]) -> Point {
        Point::new(c).unwrap()
    }

    #[test]
    fn self_avoidance_examples() {
        assert!(w("+1,+1,+1").is_self_avoiding());
        assert!(!w("+1,-1").is_self_avoiding());
        assert!(!w("+1,+2,-1,-2").is_self_avoiding());
        assert!(w("").is_self_avoiding());
    }

    #[test]
    fn concat_examples() {
        let a = w("+1,+2");
        assert_eq!(w("").concat(&a).unwrap(), a);
        assert_eq!(w("+1").concat(&w("+1")).unwrap(), w("+1,+1"));
        let back = w("+1").concat(&w("-1")).unwrap();
        assert_eq!(back, w("+1,-1"));
        assert!(!back.is_self_avoiding());
        // second walk's own position is irrelevant
        let moved = w("@(5,5);+2");
        assert_eq!(w("+1").concat(&moved).unwrap(), w("+1,+2"));
        assert!(w("+1").concat(&Walk::parse("+1", 3).unwrap()).is_err());
    }

    #[test]
    fn hang_examples() {
        assert_eq!(w("+1,+1,+1").hang_time().unwrap(), 3);
        assert_eq!(w("+2").hang_time().unwrap(), 1);
        assert_eq!(w("+1,+2,-1").hang_time().unwrap(), 2);
        assert_eq!(w("").hang_time().unwrap(), 0);
        assert_eq!(w("+1,-1").hang_time(), Err(SawError::NotSelfAvoiding));
        let (a, b) = w("+1,+2,-1").split_at_hang().unwrap();
        assert_eq!(a, w("+1,+2"));
        assert_eq!(b, w("@(1,1);-1"));
    }

    #[test]
    fn unfold_examples() {
        for n in 0..6 {
            let straight = Walk::from_steps(2, vec![Step::up(); n]).unwrap();
            let expect = Walk::from_steps(2, vec![Step::up(); n + 1]).unwrap();
            assert_eq!(straight.unfold().unwrap(), expect);
        }
        assert_eq!(w("+1,+2,-1").unfold().unwrap(), w("+1,+2,+1,+1"));
        assert!(w("+1,-1").unfold().is_err());
    }

    #[test]
    fn classify_examples() {
        let c = w("+1").classify();
        assert!(c.bridge && c.halfspace && c.closing);
        let c = w("+2").classify();
        assert!(!c.bridge && !c.halfspace);
        let c = w("+1,+2,-1").classify();
        assert!(c.closing && !c.bridge);
        // bridge requires intermediate heights not above the end
        assert!(!w("+1,+1,+2,-1").classify().bridge);
        assert!(w("+1,+1,+2,-1").classify().halfspace);
        assert!(!w("").classify().closing);
    }

    #[test]
    fn renewal_examples() {
        let r = w("+1,+1,+1").renewal_report().unwrap();
        assert_eq!(r.renewal_times, vec![0, 1, 2, 3]);
        assert!(r.z_renewal_times.is_empty());

        let r = w("+1,+2,+1").renewal_report().unwrap();
        assert_eq!(r.z_renewal_times, vec![0]);
        assert_eq!(r.renewal_times, vec![0, 2, 3]);

        let r = w("").renewal_report().unwrap();
        assert_eq!(r.renewal_times, vec![0]);
        assert!(r.z_renewal_times.is_empty());
    }

    #[test]
    fn edge_swap_examples() {
        let g = w("+1,+2,+1");
        let swapped = g.edge_swap_at_z_renewal(0, 2, -1).unwrap();
        assert_eq!(swapped, w("+1,-2,+1"));
        assert!(swapped.is_self_avoiding());
        assert_eq!(swapped.endpoint().height(), 2);
        assert_eq!(g.edge_swap_at_z_renewal(0, 2, 1), Err(SawError::SameStep));
        assert_eq!(
            g.edge_swap_at_z_renewal(1, 2, -1),
            Err(SawError::NotZRenewal(1))
        );
        assert!(g.edge_swap_at_z_renewal(0, 1, 1).is_err());
        assert!(g.edge_swap_at_z_renewal(0, 3, 1).is_err());
    }

    #[test]
    fn edge_swap_all_lateral_choices() {
        for dim in [2, 3] {
            let g = Walk::parse("+1,+2,+1", dim).unwrap();
            let mut outs = vec![g.clone()];
            for axis in 2..=dim {
                for sign in [1, -1] {
                    if let Ok(out) = g.edge_swap_at_z_renewal(0, axis, sign) {
                        assert!(out.is_self_avoiding());
                        assert_eq!(out.endpoint().height(), g.endpoint().height());
                        outs.push(out);
                    }
                }
            }
            assert_eq!(outs.len(), 2 * dim - 2);
            let distinct: HashSet<_> = outs.iter().collect();
            assert_eq!(distinct.len(), outs.len());
        }
    }

    #[test]
    fn cyclic_shift_examples() {
        let square = w("+1,+2,-1");
        assert_eq!(square.cyclic_shift(0).unwrap(), square);
        let s1 = square.cyclic_shift(1).unwrap();
        assert!(s1.is_closing());
        assert_eq!(s1, w("@(1,0);+2,-1,-2"));
        let s4 = square.cyclic_shift(4).unwrap();
        assert!(s4.same_shape(&square));
        let a = square.cyclic_shift(3).unwrap().cyclic_shift(2).unwrap();
        assert!(a.same_shape(&square.cyclic_shift(1).unwrap()));
        assert_eq!(w("+1,+1").cyclic_shift(1), Err(SawError::NotClosing));
    }

    #[test]
    fn polygon_key_examples() {
        let ccw = w("+1,+2,-1");
        let cw = w("+2,+1,-2");
        let ccw_keys: HashSet<_> = (0..4)
            .map(|s| ccw.cyclic_shift(s).unwrap().polygon_key().unwrap())
            .collect();
        let cw_keys: HashSet<_> = (0..4)
            .map(|s| cw.cyclic_shift(s).unwrap().polygon_key().unwrap())
            .collect();
        assert_eq!(ccw_keys.len(), 1);
        assert_eq!(cw_keys.len(), 1);
        assert_ne!(ccw_keys, cw_keys);
        assert_eq!(
            ccw.polygon_key().unwrap(),
            ccw.cyclic_shift(3).unwrap().polygon_key().unwrap()
        );
        assert_eq!(
            ccw.polygon_key().unwrap(),
            ccw.translate(&pt(&[5, 5])).polygon_key().unwrap()
        );
        assert!(w("+1,+1").polygon_key().is_err());
    }

    #[test]
    fn avoid_and_close_examples() {
        let chi = w("+1");
        let at_end = |s: &str| Walk::parse(&format!("@(1,0);{s}"), 2).unwrap();
        assert!(avoids(&at_end("+1"), &chi).unwrap());
        assert!(!avoids(&at_end("-1"), &chi).unwrap());
        let g = at_end("+2,-1");
        assert_eq!(g.endpoint(), pt(&[0, 1]));
        assert!(closes_ext(&g, &chi).unwrap());
        assert!(!closes_ext(&at_end("+1"), &chi).unwrap());
        assert_eq!(avoids(&w("+1"), &chi), Err(SawError::StartMismatch));
    }

    #[test]
    fn text_roundtrip() {
        let a = w("@(2,-1);+1,-2");
        assert_eq!(a.to_string(), "@(2,-1);+1,-2");
        assert_eq!(w(&a.to_string()), a);
        assert_eq!(w("").len(), 0);
        assert!(Walk::parse("+3", 2).is_err());
        assert!(Walk::parse("@(0,0,0);+1", 2).is_err());
    }

    fn arb_walk() -> impl Strategy<Value = Walk> {
        prop::collection::vec(0u8..4, 0..14).prop_map(|codes| {
            Walk::from_steps(2, codes.into_iter().map(Step::from_code).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reverse_is_involution(g in arb_walk()) {
            prop_assert_eq!(g.reverse().reverse(), g.clone());
            prop_assert_eq!(g.reverse().endpoint(), g.origin());
        }

        #[test]
        fn concat_associative_up_to_translation(a in arb_walk(), b in arb_walk(), c in arb_walk()) {
            let left = a.concat(&b).unwrap().concat(&c).unwrap();
            let right = a.concat(&b.concat(&c).unwrap()).unwrap();
            prop_assert!(left.same_shape(&right));
        }

        #[test]
        fn hang_translation_invariant(g in arb_walk(), dx in -9i32..9, dy in -9i32..9) {
            prop_assume!(g.is_self_avoiding());
            let moved = g.translate(&pt(&[dx, dy]));
            prop_assert_eq!(moved.hang_time().unwrap(), g.hang_time().unwrap());
        }

        #[test]
        fn unfold_keeps_prefix(g in arb_walk()) {
            prop_assume!(g.is_self_avoiding());
            let u = g.unfold().unwrap();
            let h = g.hang_time().unwrap();
            prop_assert!(u.is_self_avoiding());
            prop_assert_eq!(u.len(), g.len() + 1);
            prop_assert_eq!(&u.steps()[..h], &g.steps()[..h]);
            prop_assert!(u.hang_time().unwrap() >= h);
        }

        #[test]
        fn z_renewals_are_renewals(g in arb_walk()) {
            prop_assume!(g.is_self_avoiding());
            let r = g.renewal_report().unwrap();
            for k in &r.z_renewal_times {
                prop_assert!(r.renewal_times.contains(k));
            }
        }

    }

    #[test]
    fn cyclic_shifts_stay_closing() {
        use crate::enumerate::{EnumSpec, Enumerator, WalkClass};
        for n in [3, 5, 7, 9] {
            let e = Enumerator::new(EnumSpec::new(2, n, WalkClass::Closing)).unwrap();
            e.for_each(|v| {
                let g = v.to_walk();
                let key = g.polygon_key().unwrap();
                for s in -(n as i64 + 2)..=(n as i64 + 2) {
                    let shifted = g.cyclic_shift(s).unwrap();
                    assert!(shifted.classify().closing);
                    assert_eq!(shifted.polygon_key().unwrap(), key);
                }
            });
        }
    }
}
