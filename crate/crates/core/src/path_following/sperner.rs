use num_traits::ToPrimitive;

use super::simplicial::follow_path;
use crate::circuits::{circuit_eval, AlgebraicCircuit};
use crate::exact::Rational;
use crate::{Error, Result};

/// Largest resolution accepted by [`brute_force_sperner`].
pub const BRUTE_FORCE_SPERNER_CAP: u64 = 256;

/// The 2D Sperner problem: grid points `(i_1, i_2, i_3)` with
/// `i_1 + i_2 + i_3 = n`, colored by an oracle in `{1, 2, 3}` subject to
/// `i_c ≠ 0`.
pub struct SpernerInstance<'a> {
    n: u64,
    oracle: Box<dyn Fn([u64; 3]) -> Result<u64> + 'a>,
}

impl std::fmt::Debug for SpernerInstance<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpernerInstance").field("n", &self.n).finish_non_exhaustive()
    }
}

impl<'a> SpernerInstance<'a> {
    pub fn new(n: u64, oracle: impl Fn([u64; 3]) -> Result<u64> + 'a) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("Sperner resolution must be at least 1"));
        }
        Ok(SpernerInstance { n, oracle: Box::new(oracle) })
    }

    /// Colors given by a circuit on inputs `(i_1, i_2, i_3)` whose single
    /// output is the color.
    pub fn from_circuit(n: u64, c: &'a AlgebraicCircuit) -> Result<Self> {
        if c.inputs() != 3 || c.outputs().len() != 1 {
            return Err(Error::dims("coloring circuit must map 3 inputs to 1 output"));
        }
        Self::new(n, move |v| {
            let x: Vec<Rational> = v.iter().map(|&i| Rational::from_integer(i.into())).collect();
            let out = circuit_eval(c, &x)?.remove(0);
            if !out.is_integer() {
                return Err(Error::invalid(format!("coloring circuit returned {out} at {v:?}")));
            }
            Ok(out.to_integer().to_u64().unwrap_or(0))
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Queries the oracle and checks the boundary condition.
    pub fn color(&self, v: [u64; 3]) -> Result<u64> {
        let c = (self.oracle)(v)?;
        if !(1..=3).contains(&c) || v[(c - 1) as usize] == 0 {
            return Err(Error::OracleViolation { vertex: v.to_vec(), color: c });
        }
        Ok(c)
    }
}

/// `vertices[c]` is the vertex colored `c + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrichromaticCell {
    pub vertices: [[u64; 3]; 3],
}

impl TrichromaticCell {
    /// `+1` if colors 1, 2, 3 run counterclockwise in the `(i_1, i_2)`
    /// plane (the orientation of the corner cell), `-1` otherwise.
    pub fn orientation(&self) -> i8 {
        let p = |c: usize| (self.vertices[c][0] as i128, self.vertices[c][1] as i128);
        let (a, b, c) = (p(0), p(1), p(2));
        let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        if cross > 0 { 1 } else { -1 }
    }

    fn from_colored(pts: [[u64; 3]; 3], colors: [u64; 3]) -> Option<Self> {
        let mut out = [[0; 3]; 3];
        let mut seen = [false; 3];
        for (p, &c) in pts.iter().zip(&colors) {
            let c = (c - 1) as usize;
            if seen[c] {
                return None;
            }
            seen[c] = true;
            out[c] = *p;
        }
        Some(TrichromaticCell { vertices: out })
    }
}

fn as_u64(v: &[i64]) -> [u64; 3] {
    [v[0] as u64, v[1] as u64, v[2] as u64]
}

/// Path following from the corner `(n, 0, 0)`; the answer is re-checked
/// against fresh oracle queries before it is returned.
pub fn sperner_solve(inst: &SpernerInstance<'_>) -> Result<TrichromaticCell> {
    let m = i64::try_from(inst.n).map_err(|_| Error::invalid("resolution too large"))?;
    let walk = follow_path(2, m, |v| Ok(inst.color(as_u64(v))? as usize - 1), usize::MAX)?;
    let pts: Vec<[u64; 3]> = walk.cell.vertices.iter().map(|v| as_u64(v)).collect();
    let pts = [pts[0], pts[1], pts[2]];
    let colors = [inst.color(pts[0])?, inst.color(pts[1])?, inst.color(pts[2])?];
    let cell = TrichromaticCell::from_colored(pts, colors)
        .ok_or_else(|| Error::ValidationFailed("returned cell is not trichromatic on re-query".into()))?;
    Ok(cell)
}

fn each_cell(n: u64, mut f: impl FnMut([[u64; 3]; 3]) -> Result<()>) -> Result<()> {
    for i1 in 0..n {
        for i2 in 0..n - i1 {
            let i3 = n - 1 - i1 - i2;
            f([[i1 + 1, i2, i3], [i1, i2 + 1, i3], [i1, i2, i3 + 1]])?;
        }
    }
    for i1 in 0..n.saturating_sub(1) {
        for i2 in 0..n - 1 - i1 {
            let i3 = n - 2 - i1 - i2;
            f([[i1 + 1, i2 + 1, i3], [i1 + 1, i2, i3 + 1], [i1, i2 + 1, i3 + 1]])?;
        }
    }
    Ok(())
}

/// Every trichromatic cell, by scanning all `n²` cells; sorted.
pub fn brute_force_sperner(inst: &SpernerInstance<'_>) -> Result<Vec<TrichromaticCell>> {
    let n = inst.n;
    if n > BRUTE_FORCE_SPERNER_CAP {
        return Err(Error::SizeCapExceeded { what: "Sperner resolution", size: n.into(), cap: BRUTE_FORCE_SPERNER_CAP.into() });
    }
    let mut colors = std::collections::HashMap::new();
    let mut out = Vec::new();
    each_cell(n, |pts| {
        let mut cs = [0; 3];
        for (c, p) in cs.iter_mut().zip(&pts) {
            *c = match colors.get(p) {
                Some(&c) => c,
                None => {
                    let c = inst.color(*p)?;
                    colors.insert(*p, c);
                    c
                }
            };
        }
        if let Some(cell) = TrichromaticCell::from_colored(pts, cs) {
            out.push(cell);
        }
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationCount {
    pub positive: usize,
    pub negative: usize,
}

impl OrientationCount {
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }

    pub fn degree(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Trichromatic cells split by orientation. Sperner's lemma in its degree
/// form says `positive − negative = 1`, so the total is odd.
pub fn sperner_orientation_counts(inst: &SpernerInstance<'_>) -> Result<OrientationCount> {
    let cells = brute_force_sperner(inst)?;
    let positive = cells.iter().filter(|c| c.orientation() > 0).count();
    Ok(OrientationCount { positive, negative: cells.len() - positive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smallest_admissible(v: [u64; 3]) -> Result<u64> {
        Ok(v.iter().position(|&i| i != 0).unwrap() as u64 + 1)
    }

    #[test]
    fn single_cell() {
        let inst = SpernerInstance::new(1, smallest_admissible).unwrap();
        let cell = sperner_solve(&inst).unwrap();
        assert_eq!(cell.vertices, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(brute_force_sperner(&inst).unwrap(), vec![cell]);
        assert_eq!(cell.orientation(), 1);
    }

    #[test]
    fn smallest_index_coloring_n2() {
        let inst = SpernerInstance::new(2, smallest_admissible).unwrap();
        let all = brute_force_sperner(&inst).unwrap();
        assert_eq!(all, vec![TrichromaticCell { vertices: [[1, 0, 1], [0, 1, 1], [0, 0, 2]] }]);
        assert!(all.contains(&sperner_solve(&inst).unwrap()));
    }

    #[test]
    fn circuit_coloring() {
        // color 3 when i_3 > 0 and i_3 ≥ i_1, else the smallest admissible of 1 and 2
        let text = "inputs 3\n\
                    g0 = min(x0, 1)\n\
                    g1 = sub(1, g0)\n\
                    g2 = add(1, g1)\n\
                    g3 = sub(x2, x0)\n\
                    g4 = add(g3, 1)\n\
                    g5 = max(g4, 0)\n\
                    g6 = min(g5, 1)\n\
                    g7 = min(x2, 1)\n\
                    g8 = mul(g6, g7)\n\
                    g9 = sub(3, g2)\n\
                    g10 = mul(g8, g9)\n\
                    g11 = add(g2, g10)\n\
                    outputs g11";
        let c: AlgebraicCircuit = text.parse().unwrap();
        for n in 1..=12 {
            let inst = SpernerInstance::from_circuit(n, &c).unwrap();
            let all = brute_force_sperner(&inst).unwrap();
            assert!(all.contains(&sperner_solve(&inst).unwrap()));
            let counts = sperner_orientation_counts(&inst).unwrap();
            assert_eq!(counts.degree(), 1);
        }
    }

    #[test]
    fn oracle_violation_reported() {
        let inst = SpernerInstance::new(3, |_| Ok(1)).unwrap();
        assert!(matches!(sperner_solve(&inst), Err(Error::OracleViolation { .. })));
    }
}
