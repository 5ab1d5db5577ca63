//! Exhaustive fixed-space census over the m-torsion of a maximal torus.
//!
//! Elements of the m-torsion subgroup are parametrized by exponent vectors
//! `c ∈ (ℤ/m)^rank` through the coroot one-parameter subgroups,
//! `t(c) = Π_i h_{α_i}(ζ^{c_i})` with `ζ` a fixed primitive m-th root of
//! unity. This parametrization is onto whenever m is coprime to the order
//! of the fundamental group (always, for the cases scanned here). On a
//! weight vector of weight λ the element `t(c)` acts by `ζ^{⟨λ,c⟩}`, so
//! its fixed space on a module is counted directly from the weights; the
//! scan walks all `m^rank` exponent vectors with an odometer that updates
//! the pairing residues incrementally.

use super::subsys::module_ops;
use super::{build_root_system, Family, ModuleKind};
use std::collections::BTreeMap;

pub struct TorusRow {
    /// Fixed-space dimension on the minimal module, when included.
    pub d_minimal: Option<usize>,
    /// Fixed-space dimension on the adjoint module.
    pub d_adjoint: usize,
    /// Number of exponent vectors attaining this pair.
    pub count: u64,
    /// The first exponent vector (odometer order) attaining it.
    pub example: Vec<u64>,
}

pub struct TorusScan {
    pub family: Family,
    pub m: u64,
    pub includes_minimal: bool,
    /// Total elements scanned (m^rank).
    pub total: u64,
    /// Rows sorted by (d_adjoint, d_minimal).
    pub rows: Vec<TorusRow>,
}

impl TorusScan {
    pub fn min_adjoint(&self) -> usize {
        self.rows.iter().map(|r| r.d_adjoint).min().unwrap()
    }

    pub fn min_minimal(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.d_minimal).min()
    }
}

/// One module's incremental zero-counter: tracked basis vectors (nonzero
/// weight), their pairing residues, and sparse per-digit increments.
struct Tracker {
    /// cols[j] lists (tracked index, weight mod m) with nonzero weight.
    cols: Vec<Vec<(u32, u32)>>,
    vals: Vec<u32>,
    zeros: usize,
    /// Basis vectors of weight zero: always fixed.
    base: usize,
    m: u32,
}

impl Tracker {
    fn new(weights: &[Vec<i64>], rank: usize, m: u32) -> Tracker {
        let tracked: Vec<usize> = (0..weights.len())
            .filter(|&b| weights[b].iter().any(|&w| w.rem_euclid(m as i64) != 0))
            .collect();
        let base = weights.len() - tracked.len();
        let mut cols = vec![Vec::new(); rank];
        for (ti, &b) in tracked.iter().enumerate() {
            for j in 0..rank {
                let w = weights[b][j].rem_euclid(m as i64) as u32;
                if w != 0 {
                    cols[j].push((ti as u32, w));
                }
            }
        }
        let zeros = tracked.len();
        Tracker { cols, vals: vec![0; tracked.len()], zeros, base, m }
    }

    /// Adds column j to the residues (the effect of `c_j += 1`).
    fn bump(&mut self, j: usize) {
        let m = self.m;
        for &(ti, w) in &self.cols[j] {
            let v = &mut self.vals[ti as usize];
            if *v == 0 {
                self.zeros -= 1;
            }
            *v += w;
            if *v >= m {
                *v -= m;
            }
            if *v == 0 {
                self.zeros += 1;
            }
        }
    }

    fn fixed_dim(&self) -> usize {
        self.base + self.zeros
    }
}

pub fn torus_fixed_dims(family: Family, m: u64, include_minimal: bool) -> TorusScan {
    assert!(m >= 1 && m <= u32::MAX as u64 / 2);
    let rs = build_root_system(family);
    let rank = rs.rank();
    let adj = module_ops(family, ModuleKind::Adjoint);
    let mut track_adj = Tracker::new(adj.weights(), rank, m as u32);
    let mut track_min = if include_minimal {
        let min = module_ops(family, ModuleKind::Minimal);
        Some(Tracker::new(min.weights(), rank, m as u32))
    } else {
        None
    };

    let total: u64 = (0..rank).fold(1u64, |acc, _| acc.checked_mul(m).unwrap());
    let mut hist: BTreeMap<(usize, usize), (u64, Vec<u64>)> = BTreeMap::new();
    let mut c = vec![0u64; rank];
    let mut steps = 0u64;
    loop {
        let d_adj = track_adj.fixed_dim();
        let d_min = track_min.as_ref().map_or(0, |t| t.fixed_dim());
        let entry = hist.entry((d_adj, d_min)).or_insert_with(|| (0, c.clone()));
        entry.0 += 1;
        steps += 1;
        if steps == total {
            break;
        }
        // Odometer increment: a digit rolling over from m−1 to 0 changes
        // every residue by −(m−1)·w ≡ +w, the same bump as an increment.
        let mut j = 0;
        loop {
            track_adj.bump(j);
            if let Some(t) = track_min.as_mut() {
                t.bump(j);
            }
            if c[j] + 1 < m {
                c[j] += 1;
                break;
            }
            c[j] = 0;
            j += 1;
        }
    }

    let rows = hist
        .into_iter()
        .map(|((d_adjoint, d_min), (count, example))| TorusRow {
            d_minimal: include_minimal.then_some(d_min),
            d_adjoint,
            count,
            example,
        })
        .collect();
    TorusScan { family, m, includes_minimal: include_minimal, total, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_septic_torsion_census_is_exact() {
        // Adjoint weights ±2, 0; natural weights ±1. Only the identity
        // fixes anything mod 7.
        let scan = torus_fixed_dims(Family::A1, 7, true);
        assert_eq!(scan.total, 7);
        assert_eq!(scan.rows.len(), 2);
        let id = &scan.rows[1];
        assert_eq!((id.d_adjoint, id.d_minimal, id.count), (3, Some(2), 1));
        assert_eq!(id.example, vec![0]);
        let rest = &scan.rows[0];
        assert_eq!((rest.d_adjoint, rest.d_minimal, rest.count), (1, Some(0), 6));
    }

    #[test]
    fn f4_involution_fixed_spaces_match_centralizer_dimensions() {
        // Nontrivial 2-torsion elements of F4 have centralizers B4 (dim 36)
        // or C3×A1 (dim 24); the identity fixes all 52.
        let scan = torus_fixed_dims(Family::F4, 2, false);
        assert_eq!(scan.total, 16);
        let dims: Vec<(usize, u64)> =
            scan.rows.iter().map(|r| (r.d_adjoint, r.count)).collect();
        assert!(dims.contains(&(52, 1)), "identity row");
        let nontrivial: Vec<(usize, u64)> =
            dims.iter().copied().filter(|&(d, _)| d != 52).collect();
        assert!(nontrivial.iter().all(|&(d, _)| d == 24 || d == 36), "{:?}", nontrivial);
        assert!(nontrivial.iter().any(|&(d, _)| d == 24));
        assert!(nontrivial.iter().any(|&(d, _)| d == 36));
        assert_eq!(scan.rows.iter().map(|r| r.count).sum::<u64>(), 16);
    }

    #[test]
    fn brute_force_cross_check_on_a2() {
        // Recompute the A2 adjoint census mod 5 directly from weight
        // pairings, without the odometer.
        let scan = torus_fixed_dims(Family::A2, 5, false);
        let ops = module_ops(Family::A2, ModuleKind::Adjoint);
        let mut hist = std::collections::BTreeMap::new();
        for c0 in 0..5i64 {
            for c1 in 0..5i64 {
                let d = ops
                    .weights()
                    .iter()
                    .filter(|w| (w[0] * c0 + w[1] * c1).rem_euclid(5) == 0)
                    .count();
                *hist.entry(d).or_insert(0u64) += 1;
            }
        }
        assert_eq!(scan.total, 25);
        for row in &scan.rows {
            assert_eq!(hist.get(&row.d_adjoint), Some(&row.count), "d={}", row.d_adjoint);
        }
        assert_eq!(
            scan.rows.iter().map(|r| r.count).sum::<u64>(),
            hist.values().sum::<u64>()
        );
    }

    #[test]
    fn septic_torsion_minimum_fixed_spaces_on_the_big_families() {
        let e7 = torus_fixed_dims(Family::E7, 7, true);
        assert_eq!(e7.total, 7u64.pow(7));
        assert_eq!(e7.min_adjoint(), 19);
        let e8 = torus_fixed_dims(Family::E8, 7, false);
        assert_eq!(e8.total, 7u64.pow(8));
        assert_eq!(e8.min_adjoint(), 36);
    }
}
