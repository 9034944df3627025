//! Backtracking enumeration of self-avoiding walks from the origin.
//!
//! Occupancy is a dense bit grid over `[−n−1, n+1]^d`, flat-indexed, so the
//! self-avoidance test is a single bit probe. Parallel runs enumerate all
//! admissible prefixes of a fixed split depth, explore each subtree
//! independently and merge the per-subtree accumulators in prefix order,
//! which makes every result independent of the thread count.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SawError};
use crate::lattice::{check_dim, Point, Step, MAX_DIM};
use crate::scalar::Count;
use crate::walk::{lex_max_index, renewal_from_heights, Walk};

use super::table::CountTable;

pub const DEFAULT_SPLIT_DEPTH: usize = 6;

const MAX_GRID_CELLS: usize = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkClass {
    Walk,
    Bridge,
    Halfspace,
    Closing,
}

impl WalkClass {
    pub const ALL: [WalkClass; 4] = [
        WalkClass::Walk,
        WalkClass::Bridge,
        WalkClass::Halfspace,
        WalkClass::Closing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WalkClass::Walk => "walk",
            WalkClass::Bridge => "bridge",
            WalkClass::Halfspace => "halfspace",
            WalkClass::Closing => "closing",
        }
    }
}

impl fmt::Display for WalkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalkClass {
    type Err = SawError;

    fn from_str(s: &str) -> Result<Self> {
        WalkClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SawError::Parse(format!("unknown walk class {s:?}")))
    }
}

/// What to enumerate: walks of length `n` from the origin in `Z^dim`,
/// restricted to a class and optional constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub dim: usize,
    pub n: usize,
    pub class: WalkClass,
    /// Fixed initial steps (the prefix's own origin is ignored).
    pub prefix: Option<Walk>,
    /// Required index of the lexicographically maximal vertex.
    pub hang_time: Option<usize>,
    pub endpoint: Option<Point>,
    pub min_z_renewals: Option<usize>,
}

impl EnumSpec {
    pub fn new(dim: usize, n: usize, class: WalkClass) -> Self {
        EnumSpec {
            dim,
            n,
            class,
            prefix: None,
            hang_time: None,
            endpoint: None,
            min_z_renewals: None,
        }
    }

    pub fn with_prefix(mut self, prefix: Walk) -> Self {
        self.prefix = Some(prefix);
        self
    }

    pub fn with_hang_time(mut self, h: usize) -> Self {
        self.hang_time = Some(h);
        self
    }

    pub fn with_endpoint(mut self, x: Point) -> Self {
        self.endpoint = Some(x);
        self
    }

    pub fn with_min_z_renewals(mut self, m: usize) -> Self {
        self.min_z_renewals = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        if let Some(p) = &self.prefix {
            if p.dim() != self.dim {
                return Err(SawError::DimensionMismatch {
                    left: p.dim(),
                    right: self.dim,
                });
            }
            if p.len() > self.n {
                return Err(SawError::InvalidSpec(format!(
                    "prefix length {} exceeds n = {}",
                    p.len(),
                    self.n
                )));
            }
            if !p.is_self_avoiding() {
                return Err(SawError::InvalidSpec("prefix is not self-avoiding".into()));
            }
            if let Some(h) = self.hang_time {
                if h < p.len() {
                    let verts = p.at_origin().vertices();
                    if lex_max_index(&verts) != h {
                        return Err(SawError::InvalidSpec(format!(
                            "prefix lexicographic maximum is not at required hang time {h}"
                        )));
                    }
                }
            }
        }
        if let Some(h) = self.hang_time {
            if h > self.n {
                return Err(SawError::InvalidSpec(format!(
                    "hang time {h} exceeds n = {}",
                    self.n
                )));
            }
        }
        if let Some(x) = &self.endpoint {
            if x.dim() != self.dim {
                return Err(SawError::DimensionMismatch {
                    left: x.dim(),
                    right: self.dim,
                });
            }
        }
        let side = 2 * self.n + 3;
        let cells = (0..self.dim).try_fold(1usize, |acc, _| acc.checked_mul(side));
        match cells {
            Some(c) if c <= MAX_GRID_CELLS => Ok(()),
            _ => Err(SawError::Infeasible(format!(
                "occupancy grid for d = {}, n = {} is too large",
                self.dim, self.n
            ))),
        }
    }
}

/// A borrowed view of the walk currently being visited.
#[derive(Clone, Copy)]
pub struct WalkView<'a> {
    steps: &'a [Step],
    points: &'a [Point],
}

impl<'a> WalkView<'a> {
    #[inline]
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    #[inline]
    pub fn steps(&self) -> &'a [Step] {
        self.steps
    }

    #[inline]
    pub fn vertices(&self) -> &'a [Point] {
        self.points
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.points[i]
    }

    #[inline]
    pub fn endpoint(&self) -> Point {
        self.points[self.points.len() - 1]
    }

    pub fn hang_time(&self) -> usize {
        lex_max_index(self.points)
    }

    pub fn z_renewal_count(&self) -> usize {
        let h: Vec<i32> = self.points.iter().map(Point::height).collect();
        renewal_from_heights(&h).z_renewal_times.len()
    }

    pub fn to_walk(&self) -> Walk {
        Walk::new(self.points[0], self.steps.to_vec()).expect("engine steps fit the dimension")
    }
}

struct BitGrid {
    words: Vec<u64>,
}

impl BitGrid {
    fn new(cells: usize) -> Self {
        BitGrid {
            words: vec![0; cells.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i >> 6] & (1 << (i & 63)) != 0
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }
}

struct Search<'s> {
    spec: &'s EnumSpec,
    n: usize,
    n_dirs: usize,
    grid: BitGrid,
    offsets: [isize; 2 * MAX_DIM],
    flat: Vec<usize>,
    points: Vec<Point>,
    steps: Vec<Step>,
    lexmax: Vec<usize>,
    maxh: Vec<i32>,
}

impl<'s> Search<'s> {
    fn new(spec: &'s EnumSpec) -> Self {
        let n = spec.n;
        let side = 2 * n + 3;
        let half = n + 1;
        let cells = side.pow(spec.dim as u32);
        let mut offsets = [0isize; 2 * MAX_DIM];
        let mut stride = 1isize;
        for axis in 0..spec.dim {
            offsets[2 * axis] = stride;
            offsets[2 * axis + 1] = -stride;
            stride *= side as isize;
        }
        let origin_flat = (0..spec.dim).map(|a| half * side.pow(a as u32)).sum();
        let origin = Point::origin(spec.dim).expect("validated dim");
        let mut grid = BitGrid::new(cells);
        grid.set(origin_flat);
        let mut flat = Vec::with_capacity(n + 1);
        flat.push(origin_flat);
        let mut points = Vec::with_capacity(n + 1);
        points.push(origin);
        Search {
            spec,
            n,
            n_dirs: 2 * spec.dim,
            grid,
            offsets,
            flat,
            points,
            steps: Vec::with_capacity(n),
            lexmax: vec![0],
            maxh: vec![0],
        }
    }

    #[inline]
    fn depth(&self) -> usize {
        self.steps.len()
    }

    /// Whether a walk extended to `p` at index `depth` can still satisfy the spec.
    #[inline]
    fn admissible(&self, depth: usize, p: &Point) -> bool {
        let spec = self.spec;
        let remaining = (self.n - depth) as i64;
        let h = p.height();
        match spec.class {
            WalkClass::Walk => {}
            WalkClass::Halfspace => {
                if h <= 0 {
                    return false;
                }
            }
            WalkClass::Bridge => {
                if h <= 0 {
                    return false;
                }
                let mh = self.maxh[depth - 1].max(h);
                if i64::from(mh - h) > remaining {
                    return false;
                }
            }
            WalkClass::Closing => {
                if p.l1_norm() > remaining + 1 {
                    return false;
                }
            }
        }
        if let Some(x) = &spec.endpoint {
            if p.sub(x).l1_norm() > remaining {
                return false;
            }
        }
        if let Some(hang) = spec.hang_time {
            match depth.cmp(&hang) {
                Ordering::Less => {}
                Ordering::Equal => {
                    if *p < self.points[self.lexmax[depth - 1]] {
                        return false;
                    }
                }
                Ordering::Greater => {
                    if *p > self.points[hang] {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[inline]
    fn accept_leaf(&self) -> bool {
        let spec = self.spec;
        let end = self.points[self.n];
        match spec.class {
            WalkClass::Bridge if end.height() != self.maxh[self.n] => return false,
            WalkClass::Closing if end.l1_norm() != 1 => return false,
            _ => {}
        }
        if let Some(x) = &spec.endpoint {
            if end != *x {
                return false;
            }
        }
        if let Some(m) = spec.min_z_renewals {
            if self.view().z_renewal_count() < m {
                return false;
            }
        }
        true
    }

    #[inline]
    fn push(&mut self, s: Step, p: Point, f: usize) {
        let depth = self.depth();
        self.grid.set(f);
        self.flat.push(f);
        self.points.push(p);
        self.steps.push(s);
        let lm = if p > self.points[self.lexmax[depth]] {
            depth + 1
        } else {
            self.lexmax[depth]
        };
        self.lexmax.push(lm);
        self.maxh.push(self.maxh[depth].max(p.height()));
    }

    #[inline]
    fn pop(&mut self) {
        let f = self.flat.pop().expect("nonempty");
        self.grid.clear(f);
        self.points.pop();
        self.steps.pop();
        self.lexmax.pop();
        self.maxh.pop();
    }

    /// Extends the current walk by `s` if that keeps it admissible.
    fn try_push(&mut self, s: Step) -> bool {
        let depth = self.depth();
        let cur = self.flat[depth];
        let f = (cur as isize + self.offsets[s.code() as usize]) as usize;
        if self.grid.get(f) {
            return false;
        }
        let p = self.points[depth].step(s);
        if !self.admissible(depth + 1, &p) {
            return false;
        }
        self.push(s, p, f);
        true
    }

    fn view(&self) -> WalkView<'_> {
        WalkView {
            steps: &self.steps,
            points: &self.points,
        }
    }

    /// Pushes `steps` in order; false (and a partially pushed state) if any is inadmissible.
    fn push_all(&mut self, steps: &[Step]) -> bool {
        steps.iter().all(|&s| self.try_push(s))
    }

    fn run<F: FnMut(&WalkView<'_>)>(&mut self, stop: usize, visit: &mut F) {
        if self.depth() == stop {
            if stop < self.n || self.accept_leaf() {
                visit(&self.view());
            }
            return;
        }
        for code in 0..self.n_dirs as u8 {
            if self.try_push(Step::from_code(code)) {
                self.run(stop, visit);
                self.pop();
            }
        }
    }
}

/// Configured enumeration of one [`EnumSpec`].
#[derive(Clone, Debug)]
pub struct Enumerator {
    spec: EnumSpec,
    threads: usize,
    split_depth: usize,
}

impl Enumerator {
    pub fn new(spec: EnumSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Enumerator {
            spec,
            threads: 0,
            split_depth: DEFAULT_SPLIT_DEPTH,
        })
    }

    /// Worker threads; 0 uses the global pool (all available cores).
    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn split_depth(mut self, depth: usize) -> Self {
        self.split_depth = depth;
        self
    }

    pub fn spec(&self) -> &EnumSpec {
        &self.spec
    }

    fn prefix_steps(&self) -> &[Step] {
        self.spec.prefix.as_ref().map_or(&[], |p| p.steps())
    }

    /// Visits every matching walk in a fixed depth-first order on the
    /// calling thread. Returns the number of visits.
    pub fn for_each<F: FnMut(&WalkView<'_>)>(&self, mut visit: F) -> u64 {
        let mut count = 0u64;
        let mut search = Search::new(&self.spec);
        if search.push_all(self.prefix_steps()) {
            search.run(self.spec.n, &mut |v: &WalkView<'_>| {
                count += 1;
                visit(v);
            });
        }
        count
    }

    /// Folds over every matching walk, possibly in parallel. Subtree
    /// accumulators are merged in a fixed order.
    pub fn fold<A, I, V, M>(&self, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        V: Fn(&mut A, &WalkView<'_>) + Sync + Send,
        M: Fn(A, A) -> A,
    {
        if self.threads == 1 {
            let mut acc = init();
            self.for_each(|v| visit(&mut acc, v));
            return acc;
        }
        let base = self.prefix_steps().to_vec();
        let stop = (base.len() + self.split_depth).min(self.spec.n);
        let mut frontier: Vec<Vec<Step>> = Vec::new();
        {
            let mut search = Search::new(&self.spec);
            if !search.push_all(&base) {
                return init();
            }
            search.run(stop, &mut |v: &WalkView<'_>| {
                frontier.push(v.steps().to_vec())
            });
        }
        let work = |prefix: &Vec<Step>| {
            let mut acc = init();
            let mut search = Search::new(&self.spec);
            let pushed = search.push_all(prefix);
            debug_assert!(pushed);
            search.run(self.spec.n, &mut |v: &WalkView<'_>| visit(&mut acc, v));
            acc
        };
        let parts: Vec<A> = if self.threads == 0 {
            frontier.par_iter().map(work).collect()
        } else {
            match rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
            {
                Ok(pool) => pool.install(|| frontier.par_iter().map(work).collect()),
                Err(_) => frontier.iter().map(work).collect(),
            }
        };
        parts.into_iter().reduce(merge).unwrap_or_else(init)
    }

    pub fn count(&self) -> Count {
        BigUint::from(self.fold(|| 0u64, |c, _| *c += 1, |a, b| a + b))
    }
}

/// Runs `visitor` once per matching walk on the calling thread and returns
/// the total, keyed by `(class, n)`.
pub fn run_enumeration<F: FnMut(&WalkView<'_>)>(
    spec: &EnumSpec,
    visitor: F,
) -> Result<CountTable<(WalkClass, usize)>> {
    let visits = Enumerator::new(spec.clone())?.threads(1).for_each(visitor);
    let mut table = CountTable::new();
    table.add((spec.class, spec.n), BigUint::from(visits));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn count(dim: usize, n: usize, class: WalkClass) -> u64 {
        Enumerator::new(EnumSpec::new(dim, n, class))
            .unwrap()
            .count()
            .to_u64()
            .unwrap()
    }

    #[test]
    fn small_walk_counts() {
        let spec = EnumSpec::new(2, 0, WalkClass::Walk);
        let mut seen = Vec::new();
        let t = run_enumeration(&spec, |v| seen.push(v.to_walk())).unwrap();
        assert_eq!(seen, vec![Walk::empty(2).unwrap()]);
        assert_eq!(t.total(), &BigUint::from(1u32));
        assert_eq!(count(2, 1, WalkClass::Walk), 4);
        assert_eq!(count(2, 4, WalkClass::Walk), 100);
        assert_eq!(count(3, 2, WalkClass::Walk), 30);
    }

    #[test]
    fn class_counts() {
        assert_eq!(count(2, 2, WalkClass::Bridge), 3);
        assert_eq!(count(2, 3, WalkClass::Closing), 8);
        assert_eq!(count(2, 4, WalkClass::Closing), 0);
        assert_eq!(count(2, 1, WalkClass::Halfspace), 1);
        assert_eq!(count(2, 2, WalkClass::Halfspace), 3);
    }

    #[test]
    fn visits_are_self_avoiding_and_distinct() {
        let spec = EnumSpec::new(2, 6, WalkClass::Walk);
        let mut all = std::collections::HashSet::new();
        run_enumeration(&spec, |v| {
            let w = v.to_walk();
            assert!(w.is_self_avoiding());
            assert!(all.insert(w));
        })
        .unwrap();
        assert_eq!(all.len(), 780);
    }

    #[test]
    fn thread_count_and_split_invariant() {
        for class in WalkClass::ALL {
            let reference = count(2, 9, class);
            for threads in [1, 2, 3] {
                for split in [0, 1, 4, 12] {
                    let c = Enumerator::new(EnumSpec::new(2, 9, class))
                        .unwrap()
                        .threads(threads)
                        .split_depth(split)
                        .count();
                    assert_eq!(
                        c.to_u64().unwrap(),
                        reference,
                        "{class} t={threads} s={split}"
                    );
                }
            }
        }
    }

    #[test]
    fn prefix_and_hang_constraints() {
        let prefix = Walk::parse("+1", 2).unwrap();
        let spec = EnumSpec::new(2, 3, WalkClass::Walk)
            .with_prefix(prefix.clone())
            .with_hang_time(1);
        let mut got = Vec::new();
        run_enumeration(&spec, |v| got.push(v.to_walk())).unwrap();
        // brute force filter over all of SAW_3
        let mut expect = Vec::new();
        run_enumeration(&EnumSpec::new(2, 3, WalkClass::Walk), |v| {
            let w = v.to_walk();
            if w.steps()[0] == prefix.steps()[0] && w.hang_time().unwrap() == 1 {
                expect.push(w);
            }
        })
        .unwrap();
        assert_eq!(got, expect);
        assert!(!got.is_empty());
    }

    #[test]
    fn endpoint_constraint() {
        let x = Point::new(&[1, 1]).unwrap();
        let spec = EnumSpec::new(2, 2, WalkClass::Walk).with_endpoint(x);
        let c = Enumerator::new(spec).unwrap().count();
        assert_eq!(c, BigUint::from(2u32));
    }

    #[test]
    fn invalid_specs() {
        let long = Walk::parse("+1,+1,+1", 2).unwrap();
        assert!(EnumSpec::new(2, 2, WalkClass::Walk)
            .with_prefix(long)
            .validate()
            .is_err());
        let loopy = Walk::parse("+1,-1", 2).unwrap();
        assert!(EnumSpec::new(2, 4, WalkClass::Walk)
            .with_prefix(loopy)
            .validate()
            .is_err());
        assert!(EnumSpec::new(2, 4, WalkClass::Walk)
            .with_hang_time(5)
            .validate()
            .is_err());
        assert!(EnumSpec::new(1, 4, WalkClass::Walk).validate().is_err());
        let p = Walk::parse("+1,+1", 2).unwrap();
        assert!(EnumSpec::new(2, 4, WalkClass::Walk)
            .with_prefix(p)
            .with_hang_time(1)
            .validate()
            .is_err());
    }

    #[test]
    fn class_names_parse() {
        for c in WalkClass::ALL {
            assert_eq!(c.name().parse::<WalkClass>().unwrap(), c);
        }
        assert!("polygon".parse::<WalkClass>().is_err());
    }
}
