//! Independent brute-force Mamdani model of the treadmill controller.
//!
//! Shares nothing with the library's inference path: membership grades,
//! the rule table and the centroid are all written out here directly.

#![allow(dead_code)]

pub const SPAN: f64 = 500.0;
pub const SHOULDER: f64 = 125.0;
pub const FINE: usize = 1_000_000;

pub const FRONT: usize = 0;
pub const REAR: usize = 1;
pub const LEFT: usize = 2;
pub const RIGHT: usize = 3;

#[derive(Clone, Copy)]
pub enum Grade {
    Near,
    Far,
}

#[derive(Clone, Copy, PartialEq)]
pub enum Push {
    Front,
    Rear,
    Left,
    Right,
}

use Grade::*;

/// Antecedent clauses `(distance index, grade)` and pushed directions.
pub type Rule = (&'static [(usize, Grade)], &'static [Push]);

/// The ten support rules as a table.
pub const RULES: [Rule; 10] = [
    (&[(FRONT, Far), (REAR, Near)], &[Push::Front]),
    (&[(FRONT, Near), (REAR, Far)], &[Push::Rear]),
    (&[(LEFT, Near), (FRONT, Near)], &[Push::Right, Push::Rear]),
    (&[(LEFT, Near), (REAR, Near)], &[Push::Right, Push::Front]),
    (&[(RIGHT, Near), (FRONT, Near)], &[Push::Left, Push::Rear]),
    (&[(RIGHT, Near), (REAR, Near)], &[Push::Left, Push::Front]),
    (&[(LEFT, Far), (FRONT, Far)], &[Push::Left, Push::Front]),
    (&[(LEFT, Far), (REAR, Far)], &[Push::Left, Push::Rear]),
    (&[(RIGHT, Far), (FRONT, Far)], &[Push::Right, Push::Front]),
    (&[(RIGHT, Far), (REAR, Far)], &[Push::Right, Push::Rear]),
];

pub fn grade(g: Grade, d: f64) -> f64 {
    let t = d.clamp(0.0, SPAN) / SPAN;
    match g {
        Near => 1.0 - t,
        Far => t,
    }
}

/// Rule firing strengths at distances `[front, rear, left, right]`.
pub fn strengths(d: [f64; 4]) -> [f64; 10] {
    let mut out = [0.0; 10];
    for (slot, (ante, _)) in out.iter_mut().zip(RULES.iter()) {
        *slot = ante.iter().map(|&(i, g)| grade(g, d[i])).fold(f64::INFINITY, f64::min);
    }
    out
}

/// Max-aggregated activation of one push direction.
pub fn activation(d: [f64; 4], push: Push) -> f64 {
    let s = strengths(d);
    RULES.iter().zip(s).filter(|((_, cons), _)| cons.contains(&push)).map(|(_, s)| s).fold(0.0, f64::max)
}

/// Brute-force centroid over `n` evenly spaced samples of [0, SPAN] for an
/// arbitrary aggregate membership `mu`.
pub fn centroid(n: usize, fallback: f64, mu: impl Fn(f64) -> f64) -> f64 {
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for i in 0..n {
        let u = SPAN * i as f64 / (n - 1) as f64;
        let m = mu(u);
        num += u * m;
        den += m;
    }
    if den < 1e-9 {
        fallback
    } else {
        num / den
    }
}

fn low_shoulder(u: f64) -> f64 {
    ((SHOULDER - u) / SHOULDER).clamp(0.0, 1.0)
}

fn high_shoulder(u: f64) -> f64 {
    ((u - (SPAN - SHOULDER)) / SHOULDER).clamp(0.0, 1.0)
}

/// Crisp output for an axis given activation of the low term and high term.
pub fn axis_output(low: f64, high: f64, n: usize) -> f64 {
    centroid(n, SPAN / 2.0, |u| low.min(low_shoulder(u)).max(high.min(high_shoulder(u))))
}

/// `(steer_x, steer_y)` at distances `[front, rear, left, right]`.
pub fn steer(d: [f64; 4], n: usize) -> (f64, f64) {
    let sx = axis_output(activation(d, Push::Left), activation(d, Push::Right), n);
    let sy = axis_output(activation(d, Push::Rear), activation(d, Push::Front), n);
    (sx, sy)
}

/// Distances for a position on the 500 x 500 field.
pub fn distances(x: f64, y: f64) -> [f64; 4] {
    let c = |v: f64| v.clamp(0.0, SPAN);
    [c(SPAN - y), c(y), c(x), c(SPAN - x)]
}

/// `steer(d, FINE)` computed in one pass over the samples for both axes,
/// with the sums split across lanes.
pub fn steer_fine(d: [f64; 4]) -> (f64, f64) {
    const LANES: usize = 8;
    const _: () = assert!(FINE.is_multiple_of(LANES));
    let lt = |a: f64, b: f64| if a < b { a } else { b };
    let gt = |a: f64, b: f64| if a > b { a } else { b };
    let (xl, xh) = (activation(d, Push::Left), activation(d, Push::Right));
    let (yl, yh) = (activation(d, Push::Rear), activation(d, Push::Front));
    let step = SPAN / (FINE - 1) as f64;
    let mut acc = [[0.0f64; LANES]; 4];
    let mut add = |k: usize, i: usize| {
        let u = i as f64 * step;
        let l = lt(1.0, gt(0.0, (SHOULDER - u) / SHOULDER));
        let h = lt(1.0, gt(0.0, (u - (SPAN - SHOULDER)) / SHOULDER));
        let mx = gt(lt(xl, l), lt(xh, h));
        let my = gt(lt(yl, l), lt(yh, h));
        acc[0][k] += u * mx;
        acc[1][k] += mx;
        acc[2][k] += u * my;
        acc[3][k] += my;
    };
    for base in (0..FINE).step_by(LANES) {
        for k in 0..LANES {
            add(k, base + k);
        }
    }
    let [nx, dx, ny, dy] = acc.map(|a| a.iter().sum::<f64>());
    let out = |num: f64, den: f64| if den < 1e-9 { SPAN / 2.0 } else { num / den };
    (out(nx, dx), out(ny, dy))
}
