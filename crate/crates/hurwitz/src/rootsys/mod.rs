//! Root systems and everything derived from them: Chevalley structure
//! constants, integral module operators, weight systems, and toral
//! fixed-space enumeration.
//!
//! All structure constants — for every supported family — are obtained from
//! a single integral construction of the E8 lattice algebra
//! ([`lattice`]), by restricting to subsystems (E7, E6, A2), folding by
//! diagram automorphisms (F4 from E6, G2 from D4), and slicing off coset
//! modules (the 56-, 27- and 8-dimensional minimal pieces). Deriving every
//! family from one source fixes all sign conventions globally and
//! guarantees that the minimal and adjoint operators of a family agree on
//! their one-parameter subgroups without any reconciliation step.

pub mod lattice;
pub mod subsys;
pub mod torus;
pub mod weights;

use std::collections::HashMap;
use std::sync::OnceLock;

/// Supported root-system families. `A2` and `D4` participate as internal
/// stepping stones (subsystem transport and triality folding) but are
/// first-class root systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A1,
    A2,
    D4,
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl Family {
    pub fn rank(self) -> usize {
        match self {
            Family::A1 => 1,
            Family::A2 => 2,
            Family::D4 => 4,
            Family::G2 => 2,
            Family::F4 => 4,
            Family::E6 => 6,
            Family::E7 => 7,
            Family::E8 => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::D4 => "D4",
            Family::G2 => "G2",
            Family::F4 => "F4",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Some(Family::A1),
            "A2" => Some(Family::A2),
            "D4" => Some(Family::D4),
            "G2" => Some(Family::G2),
            "F4" => Some(Family::F4),
            "E6" => Some(Family::E6),
            "E7" => Some(Family::E7),
            "E8" => Some(Family::E8),
            _ => None,
        }
    }
}

/// Module kinds the toolkit constructs for each family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    /// Natural/minimal module: A1 → 2, G2 → 7, F4 → 26, E6 → 27, E7 → 56.
    Minimal,
    /// Adjoint module (dimension = number of roots + rank).
    Adjoint,
}

/// Symmetrized inner-product matrix of the simple roots, short roots
/// normalized to squared length 2. Bourbaki numbering throughout
/// (E-series: chain 1−3−4−5−6(−7(−8)), node 2 attached to node 4;
/// F4: 1−2⇒3−4 with 1, 2 long; G2: 1 short, 2 long).
fn bilinear_form(family: Family) -> Vec<Vec<i64>> {
    let r = family.rank();
    let mut b = vec![vec![0i64; r]; r];
    let set = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        b[i - 1][j - 1] = v;
        b[j - 1][i - 1] = v;
    };
    match family {
        Family::A1 => {
            b[0][0] = 2;
        }
        Family::A2 => {
            b[0][0] = 2;
            b[1][1] = 2;
            set(&mut b, 1, 2, -1);
        }
        Family::D4 => {
            for i in 0..4 {
                b[i][i] = 2;
            }
            set(&mut b, 1, 2, -1);
            set(&mut b, 3, 2, -1);
            set(&mut b, 4, 2, -1);
        }
        Family::G2 => {
            b[0][0] = 2;
            b[1][1] = 6;
            set(&mut b, 1, 2, -3);
        }
        Family::F4 => {
            b[0][0] = 4;
            b[1][1] = 4;
            b[2][2] = 2;
            b[3][3] = 2;
            set(&mut b, 1, 2, -2);
            set(&mut b, 2, 3, -2);
            set(&mut b, 3, 4, -1);
        }
        Family::E6 | Family::E7 | Family::E8 => {
            for i in 0..r {
                b[i][i] = 2;
            }
            set(&mut b, 1, 3, -1);
            set(&mut b, 3, 4, -1);
            set(&mut b, 4, 5, -1);
            set(&mut b, 2, 4, -1);
            if r >= 6 {
                set(&mut b, 5, 6, -1);
            }
            if r >= 7 {
                set(&mut b, 6, 7, -1);
            }
            if r >= 8 {
                set(&mut b, 7, 8, -1);
            }
        }
    }
    b
}

/// A finite crystallographic root system in simple-root coordinates.
///
/// Roots are indexed `0..num_roots`: first all positive roots sorted by
/// (height, coordinates), then the negatives in matching order, so
/// `neg_index(i) = (i + num_positive) % num_roots`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    /// `bilin[i][j] = (α_i, α_j)`, short roots of squared length 2.
    bilin: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨α_i, α_j∨⟩ = 2(α_i,α_j)/(α_j,α_j)`.
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    num_positive: usize,
}

/// Builds the root system of a family (cached; the returned value is a
/// cheap clone of the cached instance).
pub fn build_root_system(family: Family) -> RootSystem {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<Family, RootSystem>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(family).or_insert_with(|| RootSystem::build(family)).clone()
}

impl RootSystem {
    fn build(family: Family) -> RootSystem {
        let rank = family.rank();
        let bilin = bilinear_form(family);
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let num = 2 * bilin[i][j];
                assert_eq!(num % bilin[j][j], 0, "non-integral Cartan entry");
                cartan[i][j] = num / bilin[j][j];
            }
        }
        // Reflection closure from the simple roots.
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..rank {
            let mut v = vec![0i64; rank];
            v[i] = 1;
            seen.insert(v.clone(), ());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for j in 0..rank {
                // s_j(v) = v − ⟨v, α_j∨⟩ α_j.
                let pair: i64 = (0..rank).map(|i| v[i] * cartan[i][j]).sum();
                let mut w = v.clone();
                w[j] -= pair;
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), ());
                    queue.push(w);
                }
            }
        }
        let mut positives: Vec<Vec<i64>> = Vec::new();
        for (v, _) in seen.iter() {
            let pos = v.iter().all(|&c| c >= 0);
            let neg = v.iter().all(|&c| c <= 0);
            assert!(pos || neg, "root with mixed signs: {:?}", v);
            if pos {
                positives.push(v.clone());
            }
        }
        positives.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
        let num_positive = positives.len();
        let mut roots = positives;
        for i in 0..num_positive {
            let neg: Vec<i64> = roots[i].iter().map(|&c| -c).collect();
            roots.push(neg);
        }
        let mut index = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            index.insert(r.clone(), i);
        }
        RootSystem { family, rank, bilin, cartan, roots, index, num_positive }
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }
    pub fn num_positive(&self) -> usize {
        self.num_positive
    }
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }
    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }
    /// `cartan()[i][j] = ⟨α_i, α_j∨⟩`.
    pub fn cartan(&self) -> &Vec<Vec<i64>> {
        &self.cartan
    }
    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }
    pub fn neg_index(&self, i: usize) -> usize {
        (i + self.num_positive) % self.roots.len()
    }
    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive
    }
    pub fn height(&self, i: usize) -> i64 {
        self.roots[i].iter().sum()
    }

    /// Inner product of arbitrary lattice vectors in simple-root coords.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.bilin[i][j] * b[j];
            }
        }
        s
    }

    pub fn root_inner(&self, a: usize, b: usize) -> i64 {
        self.inner(&self.roots[a], &self.roots[b])
    }

    pub fn norm(&self, a: usize) -> i64 {
        self.root_inner(a, a)
    }

    /// `⟨v, α_j∨⟩` for a lattice vector in simple coords.
    pub fn pairing_with_simple_coroot(&self, v: &[i64], j: usize) -> i64 {
        (0..self.rank).map(|i| v[i] * self.cartan[i][j]).sum()
    }

    /// `⟨α_a, α_b∨⟩ = 2(α_a, α_b)/(α_b, α_b)`.
    pub fn root_coroot_pairing(&self, a: usize, b: usize) -> i64 {
        let num = 2 * self.root_inner(a, b);
        debug_assert_eq!(num % self.norm(b), 0);
        num / self.norm(b)
    }

    /// Coordinates of the coroot `α∨ = 2α/(α,α)` in the simple-coroot
    /// basis; integral for all roots of all supported families.
    pub fn coroot_coords(&self, a: usize) -> Vec<i64> {
        let norm = self.norm(a);
        self.roots[a]
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let num = m * self.bilin[i][i];
                assert_eq!(num % norm, 0, "non-integral coroot coordinate");
                num / norm
            })
            .collect()
    }

    pub fn reflect(&self, v: &[i64], j: usize) -> Vec<i64> {
        let pair = self.pairing_with_simple_coroot(v, j);
        let mut w = v.to_vec();
        w[j] -= pair;
        w
    }

    /// Index of α_a + α_b if it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let v: Vec<i64> = self.roots[a]
            .iter()
            .zip(self.roots[b].iter())
            .map(|(&x, &y)| x + y)
            .collect();
        self.index_of(&v)
    }

    /// Largest `k ≥ 0` with `β − kα` a root (the `p` of the α-string
    /// through β); structure constants satisfy `|N(α,β)| = p + 1`.
    pub fn root_string_down(&self, alpha: usize, beta: usize) -> i64 {
        let mut k = 0i64;
        loop {
            let v: Vec<i64> = self.roots[beta]
                .iter()
                .zip(self.roots[alpha].iter())
                .map(|(&b, &a)| b - (k + 1) * a)
                .collect();
            if self.index_of(&v).is_none() {
                return k;
            }
            k += 1;
        }
    }

    /// Index of the highest root.
    pub fn highest_root(&self) -> usize {
        (0..self.num_positive)
            .max_by_key(|&i| (self.height(i), i))
            .expect("nonempty root system")
    }

    /// Simple-root indices (the first `rank` positive roots by height).
    pub fn simple_indices(&self) -> Vec<usize> {
        (0..self.rank)
            .map(|i| {
                let mut v = vec![0i64; self.rank];
                v[i] = 1;
                self.index_of(&v).unwrap()
            })
            .collect()
    }
}

pub use subsys::{module_ops, structure_constants, ModuleOps, SparseMat, StructureConstants};
pub use torus::{torus_fixed_dims, TorusRow, TorusScan};
pub use weights::{weight_set, WeightSet};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let expected = [
            (Family::A1, 2),
            (Family::A2, 6),
            (Family::D4, 24),
            (Family::G2, 12),
            (Family::F4, 48),
            (Family::E6, 72),
            (Family::E7, 126),
            (Family::E8, 240),
        ];
        for (fam, count) in expected {
            let rs = build_root_system(fam);
            assert_eq!(rs.num_roots(), count, "{:?}", fam);
            assert_eq!(rs.num_positive() * 2, count);
        }
    }

    #[test]
    fn root_norms_and_duality() {
        for fam in [Family::A2, Family::G2, Family::F4, Family::E6, Family::E7, Family::E8] {
            let rs = build_root_system(fam);
            for i in 0..rs.num_roots() {
                let n = rs.norm(i);
                match fam {
                    Family::G2 => assert!(n == 2 || n == 6),
                    Family::F4 => assert!(n == 2 || n == 4),
                    _ => assert_eq!(n, 2),
                }
                // β(α∨) integral for all pairs.
                for j in 0..rs.num_roots() {
                    let _ = rs.root_coroot_pairing(i, j);
                }
                // Coroot coordinates integral.
                let _ = rs.coroot_coords(i);
            }
        }
    }

    #[test]
    fn long_short_counts() {
        let f4 = build_root_system(Family::F4);
        let long = (0..48).filter(|&i| f4.norm(i) == 4).count();
        assert_eq!(long, 24);
        let g2 = build_root_system(Family::G2);
        let long = (0..12).filter(|&i| g2.norm(i) == 6).count();
        assert_eq!(long, 6);
    }

    #[test]
    fn highest_root_heights() {
        // Heights of highest roots: A1:1, A2:2, D4:5, G2:5, F4:11, E6:11,
        // E7:17, E8:29.
        let expected = [
            (Family::A1, 1),
            (Family::A2, 2),
            (Family::D4, 5),
            (Family::G2, 5),
            (Family::F4, 11),
            (Family::E6, 11),
            (Family::E7, 17),
            (Family::E8, 29),
        ];
        for (fam, h) in expected {
            let rs = build_root_system(fam);
            assert_eq!(rs.height(rs.highest_root()), h, "{:?}", fam);
        }
    }

    #[test]
    fn reflections_permute_roots() {
        for fam in [Family::G2, Family::F4, Family::E6] {
            let rs = build_root_system(fam);
            for j in 0..rs.rank() {
                let mut seen = std::collections::HashSet::new();
                for i in 0..rs.num_roots() {
                    let w = rs.reflect(rs.root(i), j);
                    let wi = rs.index_of(&w).expect("reflected root is a root");
                    seen.insert(wi);
                }
                assert_eq!(seen.len(), rs.num_roots());
            }
        }
    }

    #[test]
    fn root_strings_bounded() {
        // String lengths: ≤ 2 simply-laced, ≤ 3 in F4, ≤ 4 in G2.
        for (fam, max) in [(Family::E6, 1), (Family::F4, 2), (Family::G2, 3)] {
            let rs = build_root_system(fam);
            for a in 0..rs.num_roots() {
                for b in 0..rs.num_roots() {
                    if rs.sum_index(a, b).is_some() {
                        assert!(rs.root_string_down(a, b) <= max, "{:?}", fam);
                    }
                }
            }
        }
    }
}
