//! Module analysis for matrix groups: spinning, irreducibility
//! certification, and splitting into composition factors.
//!
//! The core test is the classic nullity-one argument: pick a random
//! element θ of the enveloping algebra with one-dimensional kernel. If
//! its null vector spins to a proper subspace, that subspace is a proper
//! submodule; otherwise, if the null vector of θᵀ spins to a proper
//! subspace of the dual, the annihilator of that subspace is a proper
//! submodule; otherwise the module is irreducible, and (θ, the two null
//! vectors) form a certificate that any third party can recheck.

use crate::ffla::{FieldCtx, MatrixGF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A module given by the matrices of a generating set acting on column
/// vectors.
#[derive(Clone)]
pub struct GfModule {
    pub field: FieldCtx,
    pub dim: usize,
    pub gens: Vec<MatrixGF>,
}

impl GfModule {
    pub fn new(gens: Vec<MatrixGF>) -> GfModule {
        assert!(!gens.is_empty(), "a module needs at least one generator");
        let field = gens[0].field().clone();
        let dim = gens[0].rows();
        for g in &gens {
            assert!(g.is_square() && g.rows() == dim);
            assert_eq!(*g.field(), field);
        }
        GfModule { field, dim, gens }
    }

    /// The dual module: transposed generators (the action φ ↦ φ∘g).
    pub fn dual(&self) -> GfModule {
        GfModule::new(self.gens.iter().map(|g| g.transpose()).collect())
    }
}

/// Row-echelon accumulator for spinning subspaces.
struct Echelon {
    field: FieldCtx,
    dim: usize,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(field: FieldCtx, dim: usize) -> Echelon {
        Echelon { field, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    fn reduce(&self, v: &mut [u16]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row.iter()) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    /// Reduces v against the basis and inserts the remainder if nonzero.
    /// Returns true if the subspace grew.
    fn insert(&mut self, mut v: Vec<u16>) -> bool {
        self.reduce(&mut v);
        let f = self.field.clone();
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                let inv = f.inv(v[p]);
                for x in v.iter_mut() {
                    *x = f.mul(inv, *x);
                }
                self.rows.push(v);
                self.pivots.push(p);
                true
            }
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Basis as the columns of a dim × k matrix.
    fn to_basis(&self) -> MatrixGF {
        let mut m = MatrixGF::zero(self.field.clone(), self.dim, self.rows.len());
        for (j, row) in self.rows.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.set(i, j, x);
                }
            }
        }
        m
    }
}

/// Smallest invariant subspace containing the seed vectors, as the
/// columns of a dim × k matrix in echelon form.
pub fn spin_up(module: &GfModule, seeds: &[Vec<u16>]) -> MatrixGF {
    spin_echelon(module, seeds).to_basis()
}

fn spin_echelon(module: &GfModule, seeds: &[Vec<u16>]) -> Echelon {
    let mut ech = Echelon::new(module.field.clone(), module.dim);
    let mut queue: Vec<Vec<u16>> = Vec::new();
    for s in seeds {
        assert_eq!(s.len(), module.dim);
        if ech.insert(s.clone()) {
            queue.push(ech.rows.last().unwrap().clone());
        }
    }
    while let Some(v) = queue.pop() {
        if ech.len() == module.dim {
            break;
        }
        for g in &module.gens {
            let img = g.matvec(&v);
            if ech.insert(img) {
                queue.push(ech.rows.last().unwrap().clone());
                if ech.len() == module.dim {
                    return ech;
                }
            }
        }
    }
    ech
}

/// An irreducibility certificate: θ has nullity exactly one, its null
/// vector spins to the whole module, and the null vector of θᵀ spins to
/// the whole dual module.
#[derive(Clone)]
pub struct IrreducibilityCertificate {
    pub theta: MatrixGF,
    pub null_vector: Vec<u16>,
    pub dual_null_vector: Vec<u16>,
}

pub enum MeataxeOutcome {
    Irreducible(IrreducibilityCertificate),
    /// A proper nonzero invariant subspace, as echelonized basis columns.
    Reducible(MatrixGF),
}

impl MeataxeOutcome {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, MeataxeOutcome::Irreducible(_))
    }
}

/// Rechecks a stored certificate from scratch.
pub fn verify_certificate(module: &GfModule, cert: &IrreducibilityCertificate) -> bool {
    let n = module.dim;
    if cert.theta.rows() != n || cert.theta.kernel_dim() != 1 {
        return false;
    }
    let zero = vec![0u16; n];
    if cert.theta.matvec(&cert.null_vector) != zero || cert.null_vector == zero {
        return false;
    }
    let tt = cert.theta.transpose();
    if tt.matvec(&cert.dual_null_vector) != zero || cert.dual_null_vector == zero {
        return false;
    }
    spin_echelon(module, &[cert.null_vector.clone()]).len() == n
        && spin_echelon(&module.dual(), &[cert.dual_null_vector.clone()]).len() == n
}

/// Random element of the enveloping algebra: a small sum of scaled words
/// in the generators. The words are long enough to mix well even over
/// GF(2) with involutory generators, where short sums would have the
/// corank of a group element's fixed space instead of that of a generic
/// matrix.
fn random_theta(module: &GfModule, rng: &mut ChaCha8Rng) -> MatrixGF {
    let f = &module.field;
    let terms = rng.gen_range(2..=4);
    let mut theta = MatrixGF::zero(f.clone(), module.dim, module.dim);
    for _ in 0..terms {
        let len = rng.gen_range(2..=6);
        let mut w = module.gens[rng.gen_range(0..module.gens.len())].clone();
        for _ in 1..len {
            w = w.mul(&module.gens[rng.gen_range(0..module.gens.len())]);
        }
        theta = theta.add(&w.scale(f.sample_nonzero(rng)));
    }
    theta
}

/// Decides irreducibility. Deterministic for a fixed seed.
pub fn analyze(module: &GfModule, seed: u64) -> MeataxeOutcome {
    let n = module.dim;
    let f = &module.field;
    if n == 1 {
        // The zero map certifies a one-dimensional module.
        return MeataxeOutcome::Irreducible(IrreducibilityCertificate {
            theta: MatrixGF::zero(f.clone(), 1, 1),
            null_vector: vec![f.one()],
            dual_null_vector: vec![f.one()],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dual = module.dual();
    for _attempt in 0..10_000 {
        let theta = random_theta(module, &mut rng);
        let kernel = theta.kernel_basis();
        let nullity = kernel.cols();
        if nullity == 0 {
            continue;
        }
        if nullity == 1 {
            let v = kernel.col(0);
            let spun = spin_echelon(module, &[v.clone()]);
            if spun.len() < n {
                return MeataxeOutcome::Reducible(spun.to_basis());
            }
            let w = theta.transpose().kernel_basis().col(0);
            let dual_spun = spin_echelon(&dual, &[w.clone()]);
            if dual_spun.len() < n {
                // The annihilator of a proper dual submodule is a proper
                // submodule: the common kernel of its functionals.
                let rows: Vec<Vec<u16>> = dual_spun.rows.clone();
                let ann = MatrixGF::from_rows(f.clone(), &rows).kernel_basis();
                assert!(ann.cols() > 0 && ann.cols() < n);
                let cols: Vec<Vec<u16>> = (0..ann.cols()).map(|j| ann.col(j)).collect();
                let sub = spin_echelon(module, &cols);
                assert!(sub.len() < n, "annihilator must be invariant and proper");
                return MeataxeOutcome::Reducible(sub.to_basis());
            }
            return MeataxeOutcome::Irreducible(IrreducibilityCertificate {
                theta,
                null_vector: v,
                dual_null_vector: w,
            });
        }
        // Nullity too large for the certificate, but null vectors may
        // still expose a submodule cheaply (and always do when the
        // action has large endomorphism algebras, e.g. trivial blocks).
        // Capped: on an irreducible module every one of these spins is
        // full and therefore wasted, so large-corank misses must stay
        // cheap.
        for j in 0..nullity.min(3) {
            let spun = spin_echelon(module, &[kernel.col(j)]);
            if spun.len() < n {
                return MeataxeOutcome::Reducible(spun.to_basis());
            }
        }
    }
    panic!("meataxe: no conclusive element found after 10000 attempts");
}

/// Sub- and quotient-module actions for an invariant subspace given by
/// basis columns.
pub fn split_action(module: &GfModule, basis: &MatrixGF) -> (GfModule, GfModule) {
    let n = module.dim;
    let k = basis.cols();
    assert!(k > 0 && k < n, "need a proper nonzero subspace");
    let f = &module.field;
    // Complete the basis with unit vectors on the non-pivot coordinates.
    let mut t = MatrixGF::zero(f.clone(), n, n);
    for j in 0..k {
        for i in 0..n {
            t.set(i, j, basis.at(i, j));
        }
    }
    let mut used = vec![false; n];
    {
        // Pivot rows of the echelonized columns.
        let mut probe = basis.transpose();
        for p in probe.row_reduce() {
            used[p] = true;
        }
    }
    let mut j = k;
    for i in 0..n {
        if !used[i] {
            t.set(i, j, f.one());
            j += 1;
        }
    }
    assert_eq!(j, n);
    let tinv = t.inverse().expect("completed basis must be invertible");
    let mut sub_gens = Vec::with_capacity(module.gens.len());
    let mut quot_gens = Vec::with_capacity(module.gens.len());
    for g in &module.gens {
        let m = tinv.mul(&g.mul(&t));
        let sub = MatrixGF::from_fn(f.clone(), k, k, |r, c| m.at(r, c));
        let quot = MatrixGF::from_fn(f.clone(), n - k, n - k, |r, c| m.at(k + r, k + c));
        for r in k..n {
            for c in 0..k {
                assert_eq!(m.at(r, c), f.zero(), "subspace is not invariant");
            }
        }
        sub_gens.push(sub);
        quot_gens.push(quot);
    }
    (GfModule::new(sub_gens), GfModule::new(quot_gens))
}

/// Multiset of composition factor dimensions, sorted ascending.
pub fn composition_dims(module: &GfModule, seed: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![module.clone()];
    let mut salt = seed;
    while let Some(m) = stack.pop() {
        salt = salt.wrapping_add(0x9e3779b97f4a7c15);
        match analyze(&m, salt) {
            MeataxeOutcome::Irreducible(_) => out.push(m.dim),
            MeataxeOutcome::Reducible(basis) => {
                let (sub, quot) = split_action(&m, &basis);
                stack.push(sub);
                stack.push(quot);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevgrp::ChevalleyGroup;
    use crate::rootsys::{Family, ModuleKind};

    fn group_module(family: Family, kind: ModuleKind, q: u64) -> GfModule {
        let g = ChevalleyGroup::new(family, kind, q).unwrap();
        GfModule::new(g.generators())
    }

    #[test]
    fn composition_factors_match_known_small_cases() {
        // F4 over GF(3): the 26-dimensional module picks up a trivial
        // factor; over GF(2) the adjoint splits into two 26-dim factors;
        // E6 over GF(3) sheds the one-dimensional center of the algebra.
        assert_eq!(
            composition_dims(&group_module(Family::F4, ModuleKind::Minimal, 3), 7),
            vec![1, 25]
        );
        assert_eq!(
            composition_dims(&group_module(Family::F4, ModuleKind::Adjoint, 2), 7),
            vec![26, 26]
        );
        assert_eq!(
            composition_dims(&group_module(Family::E6, ModuleKind::Adjoint, 3), 7),
            vec![1, 77]
        );
        // G2 degenerations: the 7-dim module loses a line over GF(2);
        // the adjoint splits in half over GF(3).
        assert_eq!(
            composition_dims(&group_module(Family::G2, ModuleKind::Minimal, 2), 7),
            vec![1, 6]
        );
        assert_eq!(
            composition_dims(&group_module(Family::G2, ModuleKind::Adjoint, 3), 7),
            vec![7, 7]
        );
        assert_eq!(
            composition_dims(&group_module(Family::G2, ModuleKind::Minimal, 3), 7),
            vec![7]
        );
    }

    #[test]
    fn irreducible_cases_come_with_verifiable_certificates() {
        for (family, kind, q) in [
            (Family::F4, ModuleKind::Minimal, 2u64),
            (Family::F4, ModuleKind::Adjoint, 3),
            (Family::E6, ModuleKind::Minimal, 3),
            (Family::A1, ModuleKind::Adjoint, 7),
        ] {
            let m = group_module(family, kind, q);
            match analyze(&m, 11) {
                MeataxeOutcome::Irreducible(cert) => {
                    assert!(verify_certificate(&m, &cert), "{:?} {:?}", family, kind);
                    // A corrupted certificate must not verify.
                    let mut bad = IrreducibilityCertificate {
                        theta: cert.theta.clone(),
                        null_vector: cert.null_vector.clone(),
                        dual_null_vector: cert.dual_null_vector.clone(),
                    };
                    bad.null_vector = vec![0; m.dim];
                    assert!(!verify_certificate(&m, &bad));
                }
                MeataxeOutcome::Reducible(_) => {
                    panic!("{:?} {:?} over GF({}) should be irreducible", family, kind, q)
                }
            }
        }
    }

    #[test]
    fn split_action_blocks_are_consistent() {
        let m = group_module(Family::E6, ModuleKind::Adjoint, 3);
        match analyze(&m, 5) {
            MeataxeOutcome::Reducible(basis) => {
                let k = basis.cols();
                assert!(k == 1 || k == 77);
                let (sub, quot) = split_action(&m, &basis);
                assert_eq!(sub.dim + quot.dim, 78);
                // Spinning any basis column stays inside the subspace.
                let spun = spin_up(&m, &[basis.col(0)]);
                assert!(spun.cols() <= k);
            }
            MeataxeOutcome::Irreducible(_) => panic!("78 over GF(3) must be reducible"),
        }
    }

    #[test]
    fn conjugated_modules_have_the_same_factors() {
        use rand::SeedableRng;
        let m = group_module(Family::F4, ModuleKind::Minimal, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let t = MatrixGF::random_invertible(m.field.clone(), m.dim, &mut rng);
        let tinv = t.inverse().unwrap();
        let conj = GfModule::new(m.gens.iter().map(|g| tinv.mul(&g.mul(&t))).collect());
        assert_eq!(composition_dims(&conj, 3), vec![1, 25]);
    }

    #[test]
    fn trivial_action_blocks_are_peeled_off() {
        // Generators acting as the identity on a 3-dim space: composition
        // factors are three trivial lines; exercises the high-nullity
        // fallback path.
        let f = FieldCtx::new(3).unwrap();
        let m = GfModule::new(vec![MatrixGF::identity(f, 3)]);
        assert_eq!(composition_dims(&m, 1), vec![1, 1, 1]);
    }
}
