//! Weight multisets of the constructed modules.

use super::subsys::module_ops;
use super::{Family, ModuleKind};

/// The weights of a module grouped with multiplicities, in fundamental
/// coordinates (pairings with the simple coroots), sorted.
pub struct WeightSet {
    pub family: Family,
    pub kind: ModuleKind,
    items: Vec<(Vec<i64>, usize)>,
}

pub fn weight_set(family: Family, kind: ModuleKind) -> WeightSet {
    let ops = module_ops(family, kind);
    let mut sorted: Vec<Vec<i64>> = ops.weights().to_vec();
    sorted.sort();
    let mut items: Vec<(Vec<i64>, usize)> = Vec::new();
    for w in sorted {
        match items.last_mut() {
            Some((prev, mult)) if *prev == w => *mult += 1,
            _ => items.push((w, 1)),
        }
    }
    WeightSet { family, kind, items }
}

impl WeightSet {
    pub fn num_distinct(&self) -> usize {
        self.items.len()
    }

    pub fn dim(&self) -> usize {
        self.items.iter().map(|&(_, m)| m).sum()
    }

    pub fn multiplicity(&self, w: &[i64]) -> usize {
        self.items
            .iter()
            .find(|(v, _)| v.as_slice() == w)
            .map_or(0, |&(_, m)| m)
    }

    pub fn zero_multiplicity(&self) -> usize {
        let z: Vec<i64> = self
            .items
            .first()
            .map_or(Vec::new(), |(v, _)| vec![0; v.len()]);
        self.multiplicity(&z)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], usize)> {
        self.items.iter().map(|(v, m)| (v.as_slice(), *m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    #[test]
    fn adjoint_zero_weight_space_is_the_cartan() {
        for family in [
            Family::A1,
            Family::A2,
            Family::D4,
            Family::G2,
            Family::F4,
            Family::E6,
            Family::E7,
            Family::E8,
        ] {
            let ws = weight_set(family, ModuleKind::Adjoint);
            let rs = build_root_system(family);
            assert_eq!(ws.zero_multiplicity(), rs.rank());
            assert_eq!(ws.dim(), rs.rank() + rs.num_roots());
            // Nonzero adjoint weights are the roots, each once.
            assert_eq!(ws.num_distinct(), rs.num_roots() + 1);
        }
    }

    #[test]
    fn minimal_weight_counts() {
        for (family, dim, distinct) in [
            (Family::A1, 2usize, 2usize),
            (Family::D4, 8, 8),
            (Family::G2, 7, 7),
            (Family::F4, 26, 25),
            (Family::E6, 27, 27),
            (Family::E7, 56, 56),
        ] {
            let ws = weight_set(family, ModuleKind::Minimal);
            assert_eq!(ws.dim(), dim, "{:?}", family);
            assert_eq!(ws.num_distinct(), distinct, "{:?}", family);
        }
        assert_eq!(weight_set(Family::F4, ModuleKind::Minimal).zero_multiplicity(), 2);
        assert_eq!(weight_set(Family::G2, ModuleKind::Minimal).zero_multiplicity(), 1);
    }
}
