//! Points and steps of the hypercubic lattice, and the maps on it.
//!
//! Axis 1 (`e_1`) is the vertical direction throughout the crate; "height"
//! always means the first coordinate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SawError};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    dim: u8,
    coords: [i32; MAX_DIM],
}

impl Point {
    pub fn new(coords: &[i32]) -> Result<Self> {
        check_dim(coords.len())?;
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Point {
            dim: coords.len() as u8,
            coords: c,
        })
    }

    pub fn origin(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Point {
            dim: dim as u8,
            coords: [0; MAX_DIM],
        })
    }

    /// `e_axis`, with `axis` counted from 1.
    pub fn unit(dim: usize, axis: usize) -> Result<Self> {
        let mut p = Point::origin(dim)?;
        if axis == 0 || axis > dim {
            return Err(SawError::InvalidStep { axis, sign: 1 });
        }
        p.coords[axis - 1] = 1;
        Ok(p)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i32] {
        &self.coords[..self.dim as usize]
    }

    /// Coordinate along `e_1`.
    #[inline]
    pub fn height(&self) -> i32 {
        self.coords[0]
    }

    /// Coordinate along `e_axis` (1-based).
    #[inline]
    pub fn coord(&self, axis: usize) -> i32 {
        self.coords[axis - 1]
    }

    #[inline]
    pub fn step(&self, s: Step) -> Point {
        let mut p = *self;
        p.coords[s.axis() - 1] += s.sign() as i32;
        p
    }

    #[inline]
    pub fn add(&self, other: &Point) -> Point {
        let mut p = *self;
        for i in 0..self.dim() {
            p.coords[i] += other.coords[i];
        }
        p
    }

    #[inline]
    pub fn sub(&self, other: &Point) -> Point {
        let mut p = *self;
        for i in 0..self.dim() {
            p.coords[i] -= other.coords[i];
        }
        p
    }

    pub fn l1_norm(&self) -> i64 {
        self.coords().iter().map(|c| i64::from(c.abs())).sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.coords()
            .iter()
            .map(|&c| i64::from(c) * i64::from(c))
            .sum()
    }

    pub fn is_adjacent(&self, other: &Point) -> bool {
        self.dim == other.dim && self.sub(other).l1_norm() == 1
    }

    /// The step leading from `self` to an adjacent `other`.
    pub fn step_to(&self, other: &Point) -> Option<Step> {
        if !self.is_adjacent(other) {
            return None;
        }
        let diff = other.sub(self);
        diff.coords()
            .iter()
            .position(|&c| c != 0)
            .map(|i| Step::from_parts(i + 1, diff.coords[i] > 0))
    }

    fn same_dim(&self, other: &Point) -> Result<()> {
        if self.dim != other.dim {
            return Err(SawError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(SawError::UnsupportedDimension(dim));
    }
    Ok(())
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords()
            .cmp(other.coords())
            .then(self.dim.cmp(&other.dim))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Point {
    type Err = SawError;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| SawError::Parse(format!("point must be parenthesized: {s:?}")))?;
        let coords = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|e| SawError::Parse(format!("bad coordinate {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Point::new(&coords)
    }
}

macro_rules! serde_via_text {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                let text = <std::borrow::Cow<'de, str>>::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_text!(Point);
serde_via_text!(Step);

/// Lexicographic order on coordinate lists.
pub fn lex_compare(p: &Point, q: &Point) -> Result<Ordering> {
    p.same_dim(q)?;
    Ok(p.coords().cmp(q.coords()))
}

/// Reflection through the hyperplane `{⟨x|e_1⟩ = ⟨z|e_1⟩}`: `x + 2⟨z − x|e_1⟩ e_1`.
pub fn reflect_e1(z: &Point, x: &Point) -> Result<Point> {
    z.same_dim(x)?;
    let mut p = *x;
    p.coords[0] = 2 * z.coords[0] - x.coords[0];
    Ok(p)
}

/// Orthogonal projection onto `{⟨x|e_1⟩ = 0}`.
pub fn project_h(x: &Point) -> Point {
    let mut p = *x;
    p.coords[0] = 0;
    p
}

/// A unit increment `±e_axis`, packed as `2 (axis − 1) + [sign < 0]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step(u8);

impl Step {
    pub fn new(axis: usize, sign: i64) -> Result<Self> {
        if axis == 0 || axis > MAX_DIM || (sign != 1 && sign != -1) {
            return Err(SawError::InvalidStep { axis, sign });
        }
        Ok(Step::from_parts(axis, sign > 0))
    }

    #[inline]
    pub(crate) fn from_parts(axis: usize, positive: bool) -> Self {
        Step((2 * (axis - 1) + usize::from(!positive)) as u8)
    }

    #[inline]
    pub fn from_code(code: u8) -> Self {
        Step(code)
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn axis(self) -> usize {
        (self.0 / 2) as usize + 1
    }

    #[inline]
    pub fn sign(self) -> i8 {
        if self.0.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn reversed(self) -> Self {
        Step(self.0 ^ 1)
    }

    /// The step after reflecting through a horizontal hyperplane.
    #[inline]
    pub fn reflected_e1(self) -> Self {
        if self.axis() == 1 {
            self.reversed()
        } else {
            self
        }
    }

    pub fn fits(self, dim: usize) -> bool {
        self.axis() <= dim
    }

    /// All `2d` steps in code order.
    pub fn all(dim: usize) -> impl Iterator<Item = Step> {
        (0..(2 * dim) as u8).map(Step)
    }

    pub fn up() -> Self {
        Step(0)
    }
}

impl fmt::Debug for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign() > 0 { '+' } else { '-' };
        write!(f, "{sign}{}", self.axis())
    }
}

impl FromStr for Step {
    type Err = SawError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (sign, digits) = match t.as_bytes().first() {
            Some(b'+') => (1, &t[1..]),
            Some(b'-') => (-1, &t[1..]),
            _ => (1, t),
        };
        let axis: usize = digits
            .parse()
            .map_err(|e| SawError::Parse(format!("bad step {t:?}: {e}")))?;
        Step::new(axis, sign)
    }
}

/// A lattice symmetry fixing the origin: a signed permutation of the axes.
///
/// Maps `e_i` to `signs[i] · e_{perm[i]}` (0-based internally).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Symmetry {
    dim: u8,
    perm: [u8; MAX_DIM],
    negate: [bool; MAX_DIM],
}

impl Symmetry {
    pub fn identity(dim: usize) -> Self {
        let mut perm = [0; MAX_DIM];
        for (i, p) in perm.iter_mut().enumerate().take(dim) {
            *p = i as u8;
        }
        Symmetry {
            dim: dim as u8,
            perm,
            negate: [false; MAX_DIM],
        }
    }

    /// The full hyperoctahedral group, `2^d · d!` elements, identity first.
    pub fn group(dim: usize) -> Vec<Symmetry> {
        let mut perms = Vec::new();
        let mut current: Vec<u8> = (0..dim as u8).collect();
        permutations(&mut current, 0, &mut perms);
        let mut out = Vec::with_capacity(perms.len() << dim);
        for p in &perms {
            for mask in 0u32..(1 << dim) {
                let mut perm = [0; MAX_DIM];
                perm[..dim].copy_from_slice(p);
                let mut negate = [false; MAX_DIM];
                for (i, n) in negate.iter_mut().enumerate().take(dim) {
                    *n = mask & (1 << i) != 0;
                }
                out.push(Symmetry {
                    dim: dim as u8,
                    perm,
                    negate,
                });
            }
        }
        let id = Symmetry::identity(dim);
        let pos = out.iter().position(|s| *s == id).expect("identity present");
        out.swap(0, pos);
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Symmetry::identity(self.dim as usize)
    }

    #[inline]
    pub fn apply_step(&self, s: Step) -> Step {
        let i = s.axis() - 1;
        let positive = (s.sign() > 0) ^ self.negate[i];
        Step::from_parts(self.perm[i] as usize + 1, positive)
    }

    #[inline]
    pub fn apply(&self, p: &Point) -> Point {
        let mut q = *p;
        for i in 0..self.dim as usize {
            let v = p.coords[i];
            q.coords[self.perm[i] as usize] = if self.negate[i] { -v } else { v };
        }
        q
    }
}

fn permutations(items: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}
