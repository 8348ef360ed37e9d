//! Sign grids: signs of a function sampled on a tensor-product lattice of
//! sample lines.
//!
//! For `Φ^θ_n` the sampled quantity is the polynomial part
//! `cos θ H_n(x) + sin θ H_n(y)` (same sign as `Φ^θ_n`), which is a sum
//! `a(x) + b(y)`. When the zeros of `H_{n-1}` are themselves sample lines,
//! `a` and `b` are monotone on every cell, and then:
//!
//! - a cell never shows the alternating four-corner sign pattern;
//! - the positive (negative) part of a cell is connected and contains a
//!   corner.
//!
//! So 4-adjacency connectivity of sample points reproduces the connectivity
//! of the nodal domains inside the box exactly, at any spacing.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;

use rayon::prelude::*;

use crate::geometry::Rect;

/// Relative distance under which two sample lines are merged.
const MERGE_TOL: f64 = 1e-6;

/// How the sampled values are stored.
#[derive(Debug, Clone)]
pub enum GridValues {
    /// `v(i, j) = a[i] + b[j]`.
    Sum { a: Vec<f64>, b: Vec<f64> },
    /// `v(i, j) = a[i] · b[j]`.
    Product { a: Vec<f64>, b: Vec<f64> },
    /// Row-major `v[j * nx + i]`.
    Dense(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SignGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major signs `signs[j * nx + i]` in {-1, 0, +1}. A zero is a point
    /// known to lie on the nodal set (for instance on the diagonal at θ = 3π/4,
    /// or at a critical zero) and belongs to no domain.
    pub signs: Vec<i8>,
    pub values: GridValues,
    /// Number of base cells across the box before refinement.
    pub base_resolution: usize,
    /// Coordinate bands (in x and in y) sampled 4× finer.
    pub refined_bands: Vec<(f64, f64)>,
    /// For cells whose corners alternate in sign, the sign of the diagonal
    /// corner pair connected inside the cell, keyed by cell index
    /// `j * (nx - 1) + i`. Cells where neither pair connects are absent.
    pub saddle_centers: HashMap<usize, i8>,
}

impl SignGrid {
    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.xs.len() + i
    }

    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[self.index(i, j)]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        match &self.values {
            GridValues::Sum { a, b } => a[i] + b[j],
            GridValues::Product { a, b } => a[i] * b[j],
            GridValues::Dense(v) => v[self.index(i, j)],
        }
    }

    pub fn bounds(&self) -> Rect {
        Rect {
            x_min: self.xs[0],
            x_max: *self.xs.last().expect("non-empty"),
            y_min: self.ys[0],
            y_max: *self.ys.last().expect("non-empty"),
        }
    }

    /// Largest distance between consecutive sample lines.
    pub fn max_spacing(&self) -> f64 {
        let gap = |v: &[f64]| v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        gap(&self.xs).max(gap(&self.ys))
    }

    /// Zeroes the sign at the sample nearest to `(x, y)`, which must be a
    /// sample point up to rounding.
    pub fn mark_zero(&mut self, x: f64, y: f64) -> bool {
        let (Some(i), Some(j)) = (find_line(&self.xs, x), find_line(&self.ys, y)) else {
            return false;
        };
        let k = self.index(i, j);
        self.signs[k] = 0;
        true
    }

    fn with_values(xs: Vec<f64>, ys: Vec<f64>, values: GridValues, base_resolution: usize, bands: Vec<(f64, f64)>) -> Self {
        let nx = xs.len();
        let mut signs = vec![0i8; nx * ys.len()];
        signs.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            for (i, s) in row.iter_mut().enumerate() {
                let v = match &values {
                    GridValues::Sum { a, b } => a[i] + b[j],
                    GridValues::Product { a, b } => a[i] * b[j],
                    GridValues::Dense(v) => v[j * nx + i],
                };
                *s = sign_of(v);
            }
        });
        SignGrid {
            xs,
            ys,
            signs,
            values,
            base_resolution,
            refined_bands: bands,
            saddle_centers: HashMap::new(),
        }
    }

    /// Grid of `a(x) + b(y)`.
    pub fn separable_sum(lines: SampleLines, a: impl Fn(f64) -> f64 + Sync, b: impl Fn(f64) -> f64 + Sync) -> Self {
        let av: Vec<f64> = lines.xs.par_iter().map(|&x| a(x)).collect();
        let bv: Vec<f64> = lines.ys.par_iter().map(|&y| b(y)).collect();
        Self::with_values(lines.xs, lines.ys, GridValues::Sum { a: av, b: bv }, lines.base, lines.bands)
    }

    /// Grid of `a(x) · b(y)`.
    pub fn separable_product(lines: SampleLines, a: impl Fn(f64) -> f64 + Sync, b: impl Fn(f64) -> f64 + Sync) -> Self {
        let av: Vec<f64> = lines.xs.par_iter().map(|&x| a(x)).collect();
        let bv: Vec<f64> = lines.ys.par_iter().map(|&y| b(y)).collect();
        // nodal lines of a product cross transversally inside alternating
        // cells, which separates both diagonal pairs: no saddle resolution
        Self::with_values(lines.xs, lines.ys, GridValues::Product { a: av, b: bv }, lines.base, lines.bands)
    }

    /// Grid of an arbitrary function. Cells with alternating corner signs are
    /// resolved by recursive sub-sampling of `f` inside the cell.
    pub fn from_fn(lines: SampleLines, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let nx = lines.xs.len();
        let mut v = vec![0.0; nx * lines.ys.len()];
        let (xs, ys) = (&lines.xs, &lines.ys);
        v.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            for (i, out) in row.iter_mut().enumerate() {
                *out = f(xs[i], ys[j]);
            }
        });
        let mut g = Self::with_values(lines.xs, lines.ys, GridValues::Dense(v), lines.base, lines.bands);
        g.resolve_saddles(&f);
        g
    }

    fn resolve_saddles(&mut self, f: &(impl Fn(f64, f64) -> f64 + Sync)) {
        let (nx, ny) = (self.nx(), self.ny());
        let cells: Vec<usize> = (0..(nx - 1) * (ny - 1))
            .filter(|&cell| {
                let (i, j) = (cell % (nx - 1), cell / (nx - 1));
                let c = [self.sign(i, j), self.sign(i + 1, j), self.sign(i + 1, j + 1), self.sign(i, j + 1)];
                is_alternating(c)
            })
            .collect();
        let (xs, ys) = (&self.xs, &self.ys);
        let resolved: Vec<(usize, i8)> = cells
            .par_iter()
            .filter_map(|&cell| {
                let (i, j) = (cell % (nx - 1), cell / (nx - 1));
                connected_pair(f, (xs[i], xs[i + 1]), (ys[j], ys[j + 1]), SADDLE_DEPTH).map(|s| (cell, s))
            })
            .collect();
        self.saddle_centers.extend(resolved);
    }
}

/// Subdivisions per side and recursion depth used to decide which diagonal
/// pair of an alternating cell is connected inside the cell.
const SADDLE_SPLIT: usize = 4;
const SADDLE_DEPTH: u32 = 4;

fn is_alternating(c: [i8; 4]) -> bool {
    c[0] != 0 && c[0] == c[2] && c[1] == c[3] && c[0] == -c[1]
}

/// Sign of the diagonal corner pair of the cell `[x0, x1] × [y0, y1]` that is
/// joined by a same-sign path of sub-samples, or `None` when neither pair is
/// (for instance at a transversal crossing of two nodal lines, which
/// separates both pairs). Alternating sub-cells are decided recursively.
fn connected_pair(f: &impl Fn(f64, f64) -> f64, (x0, x1): (f64, f64), (y0, y1): (f64, f64), depth: u32) -> Option<i8> {
    const K: usize = SADDLE_SPLIT;
    const W: usize = K + 1;
    let px = |a: usize| if a == K { x1 } else { x0 + (x1 - x0) * a as f64 / K as f64 };
    let py = |b: usize| if b == K { y1 } else { y0 + (y1 - y0) * b as f64 / K as f64 };
    let mut sg = [0i8; W * W];
    for b in 0..W {
        for a in 0..W {
            sg[b * W + a] = sign_of(f(px(a), py(b)));
        }
    }
    let mut parent: [usize; W * W] = std::array::from_fn(|k| k);
    fn find(p: &mut [usize], mut k: usize) -> usize {
        while p[k] != k {
            p[k] = p[p[k]];
            k = p[k];
        }
        k
    }
    let union = |p: &mut [usize], a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for b in 0..W {
        for a in 0..W {
            let k = b * W + a;
            if sg[k] == 0 {
                continue;
            }
            if a + 1 < W && sg[k + 1] == sg[k] {
                union(&mut parent, k, k + 1);
            }
            if b + 1 < W && sg[k + W] == sg[k] {
                union(&mut parent, k, k + W);
            }
        }
    }
    if depth > 0 {
        for b in 0..K {
            for a in 0..K {
                let k = b * W + a;
                let c = [sg[k], sg[k + 1], sg[k + W + 1], sg[k + W]];
                if !is_alternating(c) {
                    continue;
                }
                match connected_pair(f, (px(a), px(a + 1)), (py(b), py(b + 1)), depth - 1) {
                    Some(s) if s == c[0] => union(&mut parent, k, k + W + 1),
                    Some(_) => union(&mut parent, k + 1, k + W),
                    None => {}
                }
            }
        }
    }
    let (sw, se, ne, nw) = (0, K, W * W - 1, W * K);
    if find(&mut parent, sw) == find(&mut parent, ne) {
        Some(sg[sw])
    } else if find(&mut parent, se) == find(&mut parent, nw) {
        Some(sg[se])
    } else {
        None
    }
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn find_line(lines: &[f64], t: f64) -> Option<usize> {
    let k = lines.partition_point(|&v| v < t);
    let mut best = None;
    let mut dist = f64::INFINITY;
    for c in [k.saturating_sub(1), k] {
        if let Some(&v) = lines.get(c) {
            if (v - t).abs() < dist {
                dist = (v - t).abs();
                best = Some(c);
            }
        }
    }
    let scale = 1e-12 * (1.0 + t.abs());
    best.filter(|_| dist <= scale)
}

/// Sample lines along one axis (the same list serves x and y).
#[derive(Debug, Clone)]
pub struct SampleLines {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub base: usize,
    pub bands: Vec<(f64, f64)>,
}

impl SampleLines {
    /// `base` jittered lines across `[-half, half]`, the `exact` positions
    /// inserted verbatim, and 4× refinement within one base spacing of every
    /// position in `refine_at`.
    ///
    /// The jitter `h(√2 - 1)/4` keeps base lines off the symmetric positions
    /// (such as 0) where nodal lines of degenerate angles sit.
    pub fn square(half: f64, base: usize, exact: &[f64], refine_at: &[f64]) -> Self {
        let h = 2.0 * half / base as f64;
        let jitter = h * (SQRT_2 - 1.0) / 4.0;
        let mut pts: Vec<(f64, bool)> = (0..base).map(|k| (-half + (k as f64 + 0.5) * h + jitter, false)).collect();
        let fine = h / 4.0;
        let mut bands = Vec::new();
        for &t in refine_at {
            let (lo, hi) = ((t - h).max(-half), (t + h).min(half));
            if lo >= hi {
                continue;
            }
            bands.push((lo, hi));
            let start = ((lo + half) / fine).floor() as i64;
            let end = ((hi + half) / fine).ceil() as i64;
            for m in start..=end {
                let v = -half + (m as f64 + 0.5) * fine + jitter / 4.0;
                if v > lo && v < hi {
                    pts.push((v, false));
                }
            }
        }
        for &t in exact {
            if t > -half && t < half {
                pts.push((t, true));
            }
        }
        // exact lines first among equals so that merging keeps them
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(b.1.cmp(&a.1)));
        let mut merged: Vec<(f64, bool)> = Vec::with_capacity(pts.len());
        for p in pts {
            match merged.last_mut() {
                Some(last) if p.0 - last.0 <= MERGE_TOL * fine => {
                    if p.1 && !last.1 {
                        *last = p;
                    }
                }
                _ => merged.push(p),
            }
        }
        let xs: Vec<f64> = merged.into_iter().map(|p| p.0).collect();
        SampleLines {
            ys: xs.clone(),
            xs,
            base,
            bands,
        }
    }
}
