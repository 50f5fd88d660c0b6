//! Path following on the Freudenthal subdivision of the grid
//! `{v ∈ Z^{d+1} : v ≥ 0, Σv = M}`.
//!
//! Cells are handled in the coordinates `u_k = Σ_{i≥k} v_i` (`k = 1..d`), in
//! which the grid simplex is the order region `M ≥ u_1 ≥ … ≥ u_d ≥ 0` and a
//! cell is a base point `b` plus a permutation `π`, with vertices
//! `y^0 = b`, `y^j = y^{j-1} + e_{π_j}`.
//!
//! The walk is the classical recursive one. At level `k` it moves inside the
//! face spanned by the first `k + 1` corners through facets labeled exactly
//! `{0..k-1}`. A cell labeled `{0..k}` lifts to level `k + 1`, and a door on
//! the face `u_k = 0` drops back to level `k - 1`. Starting from corner `e_0`
//! this path is unique and ends in a fully labeled cell.

use std::collections::HashMap;
#[cfg(debug_assertions)]
use std::collections::HashSet;

use crate::{Error, Result};

/// A fully labeled cell: `vertices[j]` carries label `labels[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PanchromaticCell {
    pub vertices: Vec<Vec<i64>>,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub cell: PanchromaticCell,
    pub pivots: usize,
    pub labels_queried: usize,
}

fn to_v(u: &[i64], d: usize, m: i64) -> Vec<i64> {
    let at = |k: usize| u.get(k).copied().unwrap_or(0);
    let mut v = Vec::with_capacity(d + 1);
    v.push(m - at(0));
    for i in 1..=d {
        v.push(at(i - 1) - at(i));
    }
    v
}

fn in_region(u: &[i64], m: i64) -> bool {
    u.first().is_none_or(|&f| f <= m) && u.windows(2).all(|w| w[0] >= w[1]) && u.last().is_none_or(|&l| l >= 0)
}

struct Labeler<'a, L> {
    d: usize,
    m: i64,
    label: &'a mut L,
    cache: HashMap<Vec<i64>, usize>,
}

impl<L: FnMut(&[i64]) -> Result<usize>> Labeler<'_, L> {
    fn get(&mut self, u: &[i64]) -> Result<usize> {
        let v = to_v(u, self.d, self.m);
        if let Some(&l) = self.cache.get(&v) {
            return Ok(l);
        }
        let l = (self.label)(&v)?;
        if l > self.d || v[l] == 0 {
            return Err(Error::invalid(format!("label {l} at {v:?} breaks the boundary condition")));
        }
        self.cache.insert(v, l);
        Ok(l)
    }
}

/// Walks to a fully labeled cell. `label` receives grid points `v` and must
/// return an index `l` with `v_l > 0`.
pub fn follow_path<L: FnMut(&[i64]) -> Result<usize>>(d: usize, m: i64, mut label: L, step_cap: usize) -> Result<Walk> {
    if m < 1 {
        return Err(Error::invalid("grid resolution must be at least 1"));
    }
    let mut lab = Labeler { d, m, label: &mut label, cache: HashMap::new() };
    if d == 0 {
        let l = lab.get(&[])?;
        let cell = PanchromaticCell { vertices: vec![vec![m]], labels: vec![l] };
        return Ok(Walk { cell, pivots: 0, labels_queried: 1 });
    }
    #[cfg(debug_assertions)]
    let mut visited: HashSet<(Vec<i64>, Vec<usize>)> = HashSet::new();

    // level-1 cell [e_0, e_0 + step toward e_1]
    let mut k = 1;
    let mut b: Vec<i64> = vec![0];
    let mut pi: Vec<usize> = vec![0];
    let mut verts: Vec<Vec<i64>> = vec![vec![0], vec![1]];
    let mut labels = vec![lab.get(&verts[0])?, lab.get(&verts[1])?];
    let mut entered = 1;
    let mut pivots = 0;
    loop {
        #[cfg(debug_assertions)]
        debug_assert!(visited.insert((b.clone(), pi.clone())), "cell revisited");
        let l = labels[entered];
        let drop = if l == k {
            if k == d {
                let vertices = verts.iter().map(|u| to_v(u, d, m)).collect();
                let labels_queried = lab.cache.len();
                return Ok(Walk { cell: PanchromaticCell { vertices, labels }, pivots, labels_queried });
            }
            // lift into the cell above this face
            let mut top = verts[k].clone();
            top.push(1);
            for y in &mut verts {
                y.push(0);
            }
            b.push(0);
            pi.push(k);
            k += 1;
            labels.push(lab.get(&top)?);
            verts.push(top);
            entered = k;
            continue;
        } else {
            (0..=k).find(|&j| j != entered && labels[j] == l).ok_or_else(|| {
                Error::invalid("labeling produced a cell without the expected door")
            })?
        };
        let mut s = drop;
        loop {
            if pivots >= step_cap {
                return Err(Error::SizeCapExceeded { what: "path-following pivots", size: pivots as u128, cap: step_cap as u128 });
            }
            pivots += 1;
            // candidate vertex replacing index s
            let (candidate, at) = if s == 0 {
                let mut y = verts[k].clone();
                y[pi[0]] += 1;
                (y, k)
            } else if s == k {
                let mut y = b.clone();
                y[pi[k - 1]] -= 1;
                (y, 0)
            } else {
                let mut y = verts[s - 1].clone();
                y[pi[s]] += 1;
                (y, s)
            };
            if in_region(&candidate, m) {
                if s == 0 {
                    b[pi[0]] += 1;
                    pi.rotate_left(1);
                    verts.rotate_left(1);
                    labels.rotate_left(1);
                } else if s == k {
                    b[pi[k - 1]] -= 1;
                    pi.rotate_right(1);
                    verts.rotate_right(1);
                    labels.rotate_right(1);
                } else {
                    pi.swap(s - 1, s);
                }
                labels[at] = lab.get(&candidate)?;
                verts[at] = candidate;
                entered = at;
                break;
            }
            // the door lies in u_k = 0: drop to the face below
            if s != k || b[k - 1] != 0 || pi[k - 1] != k - 1 {
                return Err(Error::invalid("walk reached a boundary facet that cannot carry a door"));
            }
            b.pop();
            pi.pop();
            verts.pop();
            labels.pop();
            for y in &mut verts {
                y.pop();
            }
            k -= 1;
            if k == 0 {
                return Err(Error::invalid("walk returned to its starting corner"));
            }
            s = (0..=k).find(|&j| labels[j] == k).expect("face cell is fully labeled");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argmax(v: &[i64]) -> usize {
        let mx = *v.iter().max().unwrap();
        v.iter().position(|&x| x == mx).unwrap()
    }

    fn fully_labeled(w: &Walk, d: usize, m: i64) {
        let mut ls = w.cell.labels.clone();
        ls.sort_unstable();
        assert_eq!(ls, (0..=d).collect::<Vec<_>>());
        for v in &w.cell.vertices {
            assert_eq!(v.iter().sum::<i64>(), m);
            assert!(v.iter().all(|&x| x >= 0));
        }
    }

    #[test]
    fn argmax_labeling_in_several_dimensions() {
        for d in 0..=4 {
            for m in [1, 2, 5, 9] {
                let w = follow_path(d, m, |v| Ok(argmax(v)), 1 << 20).unwrap();
                fully_labeled(&w, d, m);
            }
        }
    }

    #[test]
    fn last_positive_labeling() {
        // label = largest index with v_i > 0 is proper; the answer is the corner cell at e_d
        for d in 1..=3 {
            let w = follow_path(d, 6, |v| Ok(v.iter().rposition(|&x| x > 0).unwrap()), 1 << 20).unwrap();
            fully_labeled(&w, d, 6);
        }
    }

    #[test]
    fn random_proper_labelings() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let d = 1 + trial % 4;
            let m = rng.gen_range(1..12);
            let seed: u64 = rng.gen();
            let label = |v: &[i64]| {
                let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 0).collect();
                let h = v.iter().fold(seed, |h, &x| h.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(x as u64 + 1));
                Ok(support[(h >> 33) as usize % support.len()])
            };
            let w = follow_path(d, m, label, 1 << 22).unwrap();
            fully_labeled(&w, d, m);
        }
    }

    #[test]
    fn improper_labels_rejected() {
        assert!(follow_path(2, 3, |_| Ok(2), 1000).is_err());
    }
}
