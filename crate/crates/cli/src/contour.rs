//! Zero-level contour extraction by marching squares.
//!
//! The scalar field is consumed in (sign, ln|value|) form, which stays
//! well-defined at any order where raw values would overflow; crossing
//! positions are interpolated directly from the logarithms:
//!   t = |v0| / (|v0| + |v1|) = 1 / (1 + exp(L1 - L0)).
//! Exact zeros at grid nodes count as positive, so every node has a definite
//! sign and the case analysis is total. Ambiguous saddle cells are split by
//! the field's sign at the cell center.

use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

#[derive(Clone, Copy)]
struct Node {
    negative: bool,
    log_mag: f64,
}

fn node_of(sign: f64, log_mag: f64) -> Node {
    // sign == 0.0 (an exact zero on the grid) counts as positive.
    Node {
        negative: sign < 0.0,
        log_mag: if sign == 0.0 {
            f64::NEG_INFINITY
        } else {
            log_mag
        },
    }
}

/// Interpolated crossing between two nodes of opposite sign, as a fraction
/// t in [0, 1] measured from the first node.
fn crossing(a: Node, b: Node) -> f64 {
    1.0 / (1.0 + (b.log_mag - a.log_mag).exp())
}

/// Extracts the zero-level set of `field` over the square of the given
/// half-width centered on the origin, sampled on an m×m node grid.
/// Segments come out in deterministic row-major cell order.
pub fn zero_contour<F>(field: F, half_width: f64, m: u32) -> Vec<Segment>
where
    F: Fn(f64, f64) -> (f64, f64) + Sync,
{
    assert!(m >= 2, "contour grid needs at least 2 nodes per side");
    let m = m as usize;
    let coord = |i: usize| -half_width + 2.0 * half_width * (i as f64) / ((m - 1) as f64);
    let nodes: Vec<Node> = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % m, idx / m);
            let (sign, log_mag) = field(coord(i), coord(j));
            node_of(sign, log_mag)
        })
        .collect();
    let node = |i: usize, j: usize| nodes[j * m + i];

    let mut segments = Vec::new();
    for j in 0..m - 1 {
        for i in 0..m - 1 {
            let (x0, x1) = (coord(i), coord(i + 1));
            let (y0, y1) = (coord(j), coord(j + 1));
            // Corners: a bottom-left, b bottom-right, c top-right, d top-left.
            let a = node(i, j);
            let b = node(i + 1, j);
            let c = node(i + 1, j + 1);
            let d = node(i, j + 1);
            let case = usize::from(a.negative)
                | usize::from(b.negative) << 1
                | usize::from(c.negative) << 2
                | usize::from(d.negative) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            // Crossing points on the four edges (computed lazily per case).
            let bottom = || {
                let t = crossing(a, b);
                (x0 + t * (x1 - x0), y0)
            };
            let right = || {
                let t = crossing(b, c);
                (x1, y0 + t * (y1 - y0))
            };
            let top = || {
                let t = crossing(d, c);
                (x0 + t * (x1 - x0), y1)
            };
            let left = || {
                let t = crossing(a, d);
                (x0, y0 + t * (y1 - y0))
            };
            let mut push = |p: (f64, f64), q: (f64, f64)| {
                segments.push(Segment {
                    x1: p.0,
                    y1: p.1,
                    x2: q.0,
                    y2: q.1,
                });
            };
            match case {
                1 | 14 => push(left(), bottom()),
                2 | 13 => push(bottom(), right()),
                3 | 12 => push(left(), right()),
                4 | 11 => push(right(), top()),
                6 | 9 => push(bottom(), top()),
                7 | 8 => push(left(), top()),
                5 => {
                    // Negative at BL and TR; the center sign decides whether
                    // the negative set bridges the diagonal.
                    let (cs, _) = field((x0 + x1) / 2.0, (y0 + y1) / 2.0);
                    if cs < 0.0 {
                        push(left(), top());
                        push(bottom(), right());
                    } else {
                        push(left(), bottom());
                        push(right(), top());
                    }
                }
                10 => {
                    // Negative at BR and TL.
                    let (cs, _) = field((x0 + x1) / 2.0, (y0 + y1) / 2.0);
                    if cs < 0.0 {
                        push(bottom(), left());
                        push(right(), top());
                    } else {
                        push(bottom(), right());
                        push(top(), left());
                    }
                }
                _ => unreachable!("cases 0 and 15 are handled above"),
            }
        }
    }
    segments
}
