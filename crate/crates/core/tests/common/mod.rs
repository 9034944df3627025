//! Naive reference implementations, written against the definitions and
//! sharing no code with the library's engine.
#![allow(dead_code)]

use saw_core::{Point, Walk};

pub type V = Vec<i32>;

fn extend(d: usize, n: usize, path: &mut Vec<V>, visit: &mut dyn FnMut(&[V])) {
    if path.len() == n + 1 {
        visit(path);
        return;
    }
    let last = path.last().unwrap().clone();
    for axis in 0..d {
        for delta in [1, -1] {
            let mut next = last.clone();
            next[axis] += delta;
            if path.contains(&next) {
                continue;
            }
            path.push(next);
            extend(d, n, path, visit);
            path.pop();
        }
    }
}

/// Calls `visit` with the vertex list of every self-avoiding walk of length `n` from 0.
pub fn for_each_saw(d: usize, n: usize, mut visit: impl FnMut(&[V])) {
    let mut path = vec![vec![0; d]];
    extend(d, n, &mut path, &mut visit);
}

pub fn is_bridge(vs: &[V]) -> bool {
    let top = vs.last().unwrap()[0];
    vs[1..].iter().all(|v| v[0] > vs[0][0] && v[0] <= top)
}

pub fn is_halfspace(vs: &[V]) -> bool {
    vs[1..].iter().all(|v| v[0] > 0)
}

pub fn is_closing(vs: &[V]) -> bool {
    let end = vs.last().unwrap();
    end.iter()
        .zip(&vs[0])
        .map(|(a, b)| (a - b).abs())
        .sum::<i32>()
        == 1
}

/// Index of the lexicographic maximum (Vec<i32> orders lexicographically).
pub fn hang(vs: &[V]) -> usize {
    (0..vs.len()).max_by(|&i, &j| vs[i].cmp(&vs[j])).unwrap()
}

/// The three z-renewal conditions, checked literally.
pub fn z_renewals(vs: &[V]) -> Vec<usize> {
    let h: Vec<i32> = vs.iter().map(|v| v[0]).collect();
    let n = h.len() - 1;
    if n < 2 {
        return vec![];
    }
    (0..=n - 2)
        .filter(|&k| {
            (0..=k).all(|i| h[i] < h[k + 1])
                && h[k + 1] == h[k + 2]
                && (k + 3..=n).all(|i| h[i] > h[k + 1])
        })
        .collect()
}

/// Counts of (walk, bridge, halfspace, closing) at length `n`.
pub fn class_counts(d: usize, n: usize) -> [u64; 4] {
    let mut c = [0u64; 4];
    for_each_saw(d, n, |vs| {
        c[0] += 1;
        c[1] += is_bridge(vs) as u64;
        c[2] += is_halfspace(vs) as u64;
        c[3] += is_closing(vs) as u64;
    });
    c
}

pub fn to_point(v: &V) -> Point {
    Point::new(v).unwrap()
}

pub fn to_walk(vs: &[V]) -> Walk {
    let steps: Vec<String> = vs
        .windows(2)
        .map(|w| {
            let axis = (0..w[0].len()).find(|&a| w[0][a] != w[1][a]).unwrap();
            let sign = if w[1][axis] > w[0][axis] { '+' } else { '-' };
            format!("{sign}{}", axis + 1)
        })
        .collect();
    Walk::parse(&steps.join(","), vs[0].len()).unwrap()
}

pub fn vertices(w: &Walk) -> Vec<V> {
    w.vertices().iter().map(|p| p.coords().to_vec()).collect()
}

pub fn is_self_avoiding(vs: &[V]) -> bool {
    (0..vs.len()).all(|i| !vs[i + 1..].contains(&vs[i]))
}
