//! Nodal-domain counting by union-find over 4-adjacent sample points.
//!
//! Diagonal neighbours are never joined directly: across a double crossing
//! the two same-sign corners belong to different domains. The only exception
//! is a cell whose corners alternate in sign, where the sign at the cell
//! center decides which diagonal pair is connected through the cell.

use serde::{Deserialize, Serialize};

use super::grid::SignGrid;

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainCount {
    pub total: usize,
    pub positive: usize,
    pub negative: usize,
    /// Domains that reach the edge of the box (the unbounded ones).
    pub touching_boundary: usize,
}

pub fn count_domains(grid: &SignGrid) -> DomainCount {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut uf = UnionFind::new(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            let s = grid.signs[k];
            if s == 0 {
                continue;
            }
            if i + 1 < nx && grid.signs[k + 1] == s {
                uf.union(k as u32, (k + 1) as u32);
            }
            if j + 1 < ny && grid.signs[k + nx] == s {
                uf.union(k as u32, (k + nx) as u32);
            }
        }
    }
    for (&cell, &s) in &grid.saddle_centers {
        let (i, j) = (cell % (nx - 1), cell / (nx - 1));
        let bl = j * nx + i;
        let (a, b) = if grid.signs[bl] == s {
            (bl, bl + nx + 1)
        } else {
            (bl + 1, bl + nx)
        };
        uf.union(a as u32, b as u32);
    }

    let mut count = DomainCount {
        total: 0,
        positive: 0,
        negative: 0,
        touching_boundary: 0,
    };
    let mut boundary_root = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                let k = j * nx + i;
                if grid.signs[k] != 0 {
                    let r = uf.find(k as u32) as usize;
                    boundary_root[r] = true;
                }
            }
        }
    }
    for (k, &s) in grid.signs.iter().enumerate() {
        if s != 0 && uf.find(k as u32) as usize == k {
            count.total += 1;
            if s > 0 {
                count.positive += 1;
            } else {
                count.negative += 1;
            }
            if boundary_root[k] {
                count.touching_boundary += 1;
            }
        }
    }
    count
}
