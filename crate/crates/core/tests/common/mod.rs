//! Independent oracles used by the integration tests. Nothing here calls the
//! library's classification code.
#![allow(dead_code)]

use std::collections::HashSet;

/// Values of `(a, h, b)` on `(1,0), (0,1), (1,1)`.
pub fn marked_triple(a: i128, h: i128, b: i128) -> [i128; 3] {
    [a, b, a + h + b]
}

pub fn eval(f: (i128, i128, i128), x: i128, y: i128) -> i128 {
    f.0 * x * x + f.1 * x * y + f.2 * y * y
}

// Straight transcription of the reference listing, over i128.

fn last_pos(list: &[i128]) -> i128 {
    let mut i = list.len() - 2;
    while list[i] < 0 {
        i -= 1;
    }
    list[i]
}

fn last_neg(list: &[i128]) -> i128 {
    let mut i = list.len() - 2;
    while list[i] > 0 {
        i -= 1;
    }
    list[i]
}

fn triplet(list: &[i128]) -> [i128; 3] {
    [*list.last().unwrap(), last_pos(list), last_neg(list)]
}

fn river(tri: [i128; 3], cap: usize) -> Vec<i128> {
    let start = triplet(&tri);
    let mut list = tri.to_vec();
    let mut previous = start;
    loop {
        let keep_going = *list.last().unwrap() != 0 && (list.len() <= 4 || previous != start);
        if !keep_going {
            return list;
        }
        assert!(list.len() < cap, "listing river exceeded {cap} steps");
        let [last, pos, neg] = triplet(&list);
        previous = [last, pos, neg];
        let next = if last > 0 {
            2 * (neg + last) - pos
        } else {
            2 * (pos + last) - neg
        };
        list.push(next);
    }
}

fn river_invariant(river: &[i128]) -> [i128; 3] {
    (3..=river.len() - 2)
        .map(|i| {
            let mut t = triplet(&river[..i]);
            t.sort();
            t
        })
        .min()
        .unwrap()
}

enum Descended {
    Well([i128; 3]),
    Vertex([i128; 3]),
}

fn descend(tri: [i128; 3]) -> Descended {
    let mut t = tri;
    loop {
        t.sort();
        let [min, middle, max] = t;
        if max > min + middle {
            t = [min, middle, 2 * (min + middle) - max];
            if t.iter().any(|&v| v <= 0) {
                return Descended::Vertex(t);
            }
        } else {
            return Descended::Well(t);
        }
    }
}

/// The reference listing's invariant, serialized in the library's text format.
pub fn listing_invariant(tri: [i128; 3]) -> String {
    const CAP: usize = 10_000_000;
    let mut d = tri;
    if tri.iter().min().unwrap() > &0 {
        match descend(tri) {
            Descended::Well(w) => return format!("WELL[{},{},{}]", w[0], w[1], w[2]),
            Descended::Vertex(v) => d = v,
        }
    }
    if tri.iter().max().unwrap() < &0 {
        match descend(tri.map(|v| -v)) {
            Descended::Well(w) => {
                let mut w = w.map(|v| -v);
                w.sort();
                return format!("WELL[{},{},{}]", w[0], w[1], w[2]);
            }
            Descended::Vertex(v) => d = v.map(|x| -x),
        }
    }
    if !d.contains(&0) {
        let mut s = d;
        s.sort();
        let r = river([s[0], s[2], s[1]], CAP);
        if *r.last().unwrap() == 0 {
            d = triplet(&r);
        } else {
            let t = river_invariant(&r);
            return format!("RIVER[{},{},{}]", t[0], t[1], t[2]);
        }
    }
    let mut by_abs = d.to_vec();
    by_abs.sort_by_key(|v| v.abs());
    let (mut a, mut b) = (by_abs[1], by_abs[2]);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if a == b {
        return if a == 0 {
            "ZERO".into()
        } else {
            format!("LAKE[{a}]")
        };
    }
    let step = b - a;
    // a in (-step, 0], b = a + step
    let rem = a.rem_euclid(step);
    let a = if rem == 0 { 0 } else { rem - step };
    let b = a + step;
    if a == 0 {
        return format!("WEIR[{b}]");
    }
    let r = river([a, b, 2 * (a + b)], CAP);
    let mut uv: Vec<i128> = triplet(&r).into_iter().filter(|&v| v != 0).collect();
    uv.sort();
    let mut pairs = [[a, b], [uv[0], uv[1]]];
    pairs.sort();
    format!(
        "LAKEPAIR[[{},{}],[{},{}]]",
        pairs[0][0], pairs[0][1], pairs[1][0], pairs[1][1]
    )
}

/// Bases `(v1, v2)` of ℤ² with determinant 1 and coordinates at most `bound`.
/// Each gives the topograph vertex `{v1, v2, v1 + v2}`.
pub fn superbases(bound: i128) -> Vec<[(i128, i128); 2]> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for c in -bound..=bound {
            for b in -bound..=bound {
                if a == 0 {
                    // c = ±1 and b = -c; d is free
                    if c.abs() == 1 && b == -c {
                        out.extend((-bound..=bound).map(|d| [(a, c), (b, d)]));
                    }
                    continue;
                }
                let num = 1 + b * c;
                if num % a == 0 && (num / a).abs() <= bound {
                    out.push([(a, c), (b, num / a)]);
                }
            }
        }
    }
    out
}

/// Brute-force canonical triple for a definite form (least vertex, by
/// absolute values) or an indefinite form without zeros (least sorted
/// mixed-sign vertex). Returns `None` if the form represents 0 on the bases.
pub fn brute_force_canonical(f: (i128, i128, i128), bases: &[[(i128, i128); 2]]) -> Option<String> {
    let disc = f.1 * f.1 - 4 * f.0 * f.2;
    let mut vertices = Vec::with_capacity(bases.len());
    for &[(a, c), (b, d)] in bases {
        let mut t = [eval(f, a, c), eval(f, b, d), eval(f, a + b, c + d)];
        if t.contains(&0) {
            return None;
        }
        t.sort();
        vertices.push(t);
    }
    if disc < 0 {
        let sign = f.0.signum();
        let mut best = vertices
            .iter()
            .map(|t| {
                let mut u = t.map(|v| v * sign);
                u.sort();
                u
            })
            .min()?
            .map(|v| v * sign);
        best.sort();
        Some(format!("WELL[{},{},{}]", best[0], best[1], best[2]))
    } else {
        let best = vertices
            .into_iter()
            .filter(|t| t[0] < 0 && t[2] > 0)
            .min()?;
        Some(format!("RIVER[{},{},{}]", best[0], best[1], best[2]))
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Gauss-reduced representative of a positive definite form:
/// `|h| <= a <= b`, with `h >= 0` when `|h| = a` or `a = b`.
pub fn gauss_reduced_positive(f: (i128, i128, i128)) -> (i128, i128, i128) {
    let (mut a, mut h, mut b) = f;
    assert!(a > 0 && h * h - 4 * a * b < 0);
    loop {
        if h > a || h <= -a {
            // x -> x + t y keeps a and moves h by 2at
            let t = (a - h).div_euclid(2 * a);
            b += a * t * t + h * t;
            h += 2 * a * t;
            continue;
        }
        if a > b {
            (a, b) = (b, a);
            h = -h;
            continue;
        }
        if a == b && h < 0 {
            h = -h;
        }
        return (a, h, b);
    }
}

/// Classes of definite forms up to GL₂(ℤ): the smaller reduced form of `F`
/// and its `h`-mirror, tagged with the sign.
pub fn gauss_gl2_key(f: (i128, i128, i128)) -> (i128, (i128, i128, i128)) {
    let sign = f.0.signum();
    let g = (f.0 * sign, f.1 * sign, f.2 * sign);
    let r0 = gauss_reduced_positive(g);
    let r1 = gauss_reduced_positive((g.0, -g.1, g.2));
    (sign, r0.min(r1))
}

/// Every `(a, h, b)` in the cube `[-m, m]³`.
pub fn cube(m: i128) -> impl Iterator<Item = (i128, i128, i128)> {
    (-m..=m).flat_map(move |a| (-m..=m).flat_map(move |h| (-m..=m).map(move |b| (a, h, b))))
}

pub fn distinct<T: std::hash::Hash + Eq + Clone>(items: &[T]) -> usize {
    items.iter().cloned().collect::<HashSet<_>>().len()
}
