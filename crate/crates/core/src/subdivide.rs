//! Edgewise (Freudenthal) subdivision of the standard `n`-simplex.
//!
//! At resolution `m = 2^level` the simplex is the region
//! `m >= y_1 >= y_2 >= ... >= y_n >= 0` of `R^n`; its cells are the Kuhn
//! simplices `base, base + e_p1, base + e_p1 + e_p2, ...` lying in that
//! region. Each cell splits into `2^n` cells of the next level, every edge
//! has barycentric length at most `sqrt(n + 1) / m`, and vertices are exact
//! integers, so refinement is deterministic and vertices deduplicate by key.

use std::collections::BTreeMap;

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeCell {
    level: u32,
    base: Vec<u64>,
    perm: Vec<usize>,
}

impl LatticeCell {
    /// The whole standard `n`-simplex as a single level-0 cell.
    pub fn root(n: usize) -> Self {
        assert!(n >= 1, "the standard simplex needs n >= 1");
        LatticeCell { level: 0, base: vec![0; n], perm: (0..n).collect() }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn resolution(&self) -> u64 {
        1u64 << self.level
    }

    /// The `n + 1` lattice vertices in `y` coordinates at this resolution.
    pub fn lattice_vertices(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.dim() + 1);
        let mut y = self.base.clone();
        out.push(y.clone());
        for &k in &self.perm {
            y[k] += 1;
            out.push(y.clone());
        }
        out
    }

    pub fn barycentric_vertices<T: Real>(&self) -> Vec<Vec<T>> {
        let m = self.resolution();
        self.lattice_vertices()
            .iter()
            .map(|y| lattice_to_barycentric(y, m))
            .collect()
    }

    /// Barycentric coordinates of the cell's centroid.
    pub fn centroid<T: Real>(&self) -> Vec<T> {
        let verts = self.barycentric_vertices::<T>();
        let k = T::from_usize(verts.len()).unwrap();
        let mut c = vec![T::zero(); verts[0].len()];
        for v in &verts {
            for (ci, &vi) in c.iter_mut().zip(v) {
                *ci += vi / k;
            }
        }
        c
    }

    /// The `2^n` cells of the next level covering this one, in
    /// lexicographic order.
    pub fn children(&self) -> Vec<LatticeCell> {
        let n = self.dim();
        let perms = permutations(n);
        let mut out = Vec::with_capacity(1 << n);
        for offset in 0..(1u64 << n) {
            let base: Vec<u64> = (0..n).map(|i| 2 * self.base[i] + ((offset >> i) & 1)).collect();
            for sigma in &perms {
                let child = LatticeCell { level: self.level + 1, base: base.clone(), perm: sigma.clone() };
                if child.lattice_vertices().iter().all(|y| self.contains_fine(y)) {
                    out.push(child);
                }
            }
        }
        out.sort();
        debug_assert_eq!(out.len(), 1 << n);
        out
    }

    // Whether a vertex of the next level lies in this (closed) cell.
    fn contains_fine(&self, y: &[u64]) -> bool {
        let w: Vec<i64> = y
            .iter()
            .zip(&self.base)
            .map(|(&yi, &bi)| yi as i64 - 2 * bi as i64)
            .collect();
        let mut prev = 2i64;
        for &k in &self.perm {
            if w[k] > prev {
                return false;
            }
            prev = w[k];
        }
        prev >= 0
    }

    /// Key of a vertex rescaled to `target_level`, for caching across levels.
    pub fn vertex_key(y: &[u64], level: u32, target_level: u32) -> Vec<u64> {
        debug_assert!(target_level >= level);
        let shift = target_level - level;
        y.iter().map(|&v| v << shift).collect()
    }
}

pub fn lattice_to_barycentric<T: Real>(y: &[u64], resolution: u64) -> Vec<T> {
    let n = y.len();
    let m = T::from_u64(resolution).unwrap();
    let mut t = Vec::with_capacity(n + 1);
    t.push(T::from_u64(resolution - y[0]).unwrap() / m);
    for i in 1..n {
        t.push(T::from_u64(y[i - 1] - y[i]).unwrap() / m);
    }
    t.push(T::from_u64(y[n - 1]).unwrap() / m);
    t
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A subdivision of the standard `n`-simplex.
#[derive(Clone, Debug)]
pub struct Triangulation<T> {
    pub dim: usize,
    pub depth: u32,
    /// Barycentric coordinates of each vertex (length `n + 1`).
    pub vertices: Vec<Vec<T>>,
    /// Exact lattice coordinates of each vertex at resolution `2^depth`.
    pub lattice: Vec<Vec<u64>>,
    /// Vertex indices of each cell.
    pub cells: Vec<Vec<usize>>,
    pub lattice_cells: Vec<LatticeCell>,
}

/// Edgewise subdivision of the standard `n`-simplex, `depth` levels deep:
/// `2^(n*depth)` cells, deterministic, with deduplicated vertices.
pub fn subdivide<T: Real>(n: usize, depth: u32) -> Triangulation<T> {
    let mut cells = vec![LatticeCell::root(n)];
    for _ in 0..depth {
        cells = cells.iter().flat_map(|c| c.children()).collect();
    }
    cells.sort();
    let mut index: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for c in &cells {
        for y in c.lattice_vertices() {
            index.entry(y).or_insert(0);
        }
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let m = 1u64 << depth;
    let lattice: Vec<Vec<u64>> = index.keys().cloned().collect();
    let vertices = lattice.iter().map(|y| lattice_to_barycentric(y, m)).collect();
    let cell_idx = cells
        .iter()
        .map(|c| c.lattice_vertices().iter().map(|y| index[y]).collect())
        .collect();
    Triangulation { dim: n, depth, vertices, lattice, cells: cell_idx, lattice_cells: cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bary_dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    #[test]
    fn counts_match_examples() {
        let t0 = subdivide::<f64>(2, 0);
        assert_eq!((t0.cells.len(), t0.vertices.len()), (1, 3));
        let t1 = subdivide::<f64>(1, 3);
        assert_eq!((t1.cells.len(), t1.vertices.len()), (8, 9));
        let t2 = subdivide::<f64>(2, 1);
        assert_eq!((t2.cells.len(), t2.vertices.len()), (4, 6));
        let t3 = subdivide::<f64>(3, 2);
        assert_eq!(t3.cells.len(), 64);
        // lattice points with sum 4 in 4 coordinates: C(7,3)
        assert_eq!(t3.vertices.len(), 35);
    }

    #[test]
    fn root_vertices_are_the_corners() {
        let verts = LatticeCell::root(3).barycentric_vertices::<f64>();
        for (i, v) in verts.iter().enumerate() {
            for (j, &x) in v.iter().enumerate() {
                assert_eq!(x, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn diameters_halve_each_level() {
        for n in 1..=3 {
            let d0 = ((n + 1) as f64).sqrt();
            for depth in 0..=3 {
                let tri = subdivide::<f64>(n, depth);
                for cell in &tri.cells {
                    for &a in cell {
                        for &b in cell {
                            let d = bary_dist(&tri.vertices[a], &tri.vertices[b]);
                            assert!(d <= d0 / f64::from(1u32 << depth) + 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn children_tile_the_parent() {
        // Every child vertex is inside the parent and the children's volumes
        // (all equal in the Freudenthal triangulation) fill 2^n slots.
        for n in 1..=4 {
            let mut cell = LatticeCell::root(n);
            for _ in 0..2 {
                let kids = cell.children();
                assert_eq!(kids.len(), 1 << n);
                cell = kids[kids.len() / 2].clone();
            }
        }
    }

    #[test]
    fn barycentric_coordinates_are_a_partition_of_unity() {
        let tri = subdivide::<f64>(3, 2);
        for v in &tri.vertices {
            assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!(v.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn deterministic() {
        let a = subdivide::<f64>(2, 3);
        let b = subdivide::<f64>(2, 3);
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.lattice, b.lattice);
    }
}
