//! Chevalley groups over finite fields.
//!
//! A group context reduces the integral one-parameter operators of a
//! chosen module mod p and exposes the standard generators: root elements
//! `x_α(t)`, torus elements `h_α(λ)` (diagonal on the weight basis), and
//! the Weyl representatives `n_α(λ) = x_α(λ) x_{−α}(−λ⁻¹) x_α(λ)`. The
//! group generated by the root elements is the image of the universal
//! Chevalley group of the family on that module.
//!
//! For hunts run on a minimal faithful module, fixed spaces on the Lie
//! algebra are still available: the degree-one operator images span a
//! copy of the algebra inside matrix space (full-dimensional for the
//! cases used here, asserted on first use), and conjugation by a group
//! element acts on that span exactly as the adjoint module.

use crate::ffla::{FflaError, FieldCtx, MatrixGF};
use crate::meataxe::{analyze, GfModule, MeataxeOutcome};
use crate::rootsys::{build_root_system, module_ops, Family, ModuleKind, ModuleOps, RootSystem};
use crate::util::sha256_hex;
use std::sync::{Arc, OnceLock};

pub struct ChevalleyGroup {
    family: Family,
    kind: ModuleKind,
    field: FieldCtx,
    dim: usize,
    abs: RootSystem,
    ops: Arc<ModuleOps>,
    /// coeff[r][k]: sparse (row, col, value) triplets of the t^{k+1}
    /// coefficient of x_r, reduced into the field.
    coeff: Vec<Vec<Vec<(u32, u32, u16)>>>,
    /// Verified lazily: the algebra operators span a full-dimensional
    /// copy of the Lie algebra inside matrix space.
    span_checked: OnceLock<usize>,
}

impl ChevalleyGroup {
    /// Builds the group context for a family and module over GF(q).
    /// Panics for module kinds the toolkit does not construct (minimal
    /// modules of A2 and E8).
    pub fn new(family: Family, kind: ModuleKind, q: u64) -> Result<ChevalleyGroup, FflaError> {
        let field = FieldCtx::new(q)?;
        let abs = build_root_system(family);
        let ops = module_ops(family, kind);
        let dim = ops.dim;
        let mut coeff = Vec::with_capacity(ops.num_roots());
        for r in 0..ops.num_roots() {
            let mut degrees = Vec::new();
            for c in ops.op_poly(r) {
                let mut triplets = Vec::new();
                for (i, j, v) in c.entries() {
                    let code = field.from_int(v);
                    if code != field.zero() {
                        triplets.push((i as u32, j as u32, code));
                    }
                }
                degrees.push(triplets);
            }
            while degrees.len() > 1 && degrees.last().unwrap().is_empty() {
                degrees.pop();
            }
            coeff.push(degrees);
        }
        Ok(ChevalleyGroup {
            family,
            kind,
            field,
            dim,
            abs,
            ops,
            coeff,
            span_checked: OnceLock::new(),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.abs
    }

    pub fn identity(&self) -> MatrixGF {
        MatrixGF::identity(self.field.clone(), self.dim)
    }

    /// Root element `x_r(t)`.
    pub fn x(&self, root: usize, t: u16) -> MatrixGF {
        let f = &self.field;
        let mut m = self.identity();
        let mut tp = f.one();
        for triplets in &self.coeff[root] {
            tp = f.mul(tp, t);
            if tp == f.zero() {
                break;
            }
            for &(i, j, v) in triplets {
                let (i, j) = (i as usize, j as usize);
                m.set(i, j, f.add(m.at(i, j), f.mul(tp, v)));
            }
        }
        m
    }

    /// Torus element `h_r(λ)`, diagonal on the weight basis: the basis
    /// vector of weight μ is scaled by `λ^{⟨μ, r∨⟩}`.
    pub fn h(&self, root: usize, lambda: u16) -> MatrixGF {
        let f = &self.field;
        assert_ne!(lambda, f.zero(), "torus parameter must be invertible");
        let coroot = self.abs.coroot_coords(root);
        let unit_order = (f.q() - 1).max(1) as i64;
        let mut m = MatrixGF::zero(f.clone(), self.dim, self.dim);
        for b in 0..self.dim {
            let e: i64 = coroot
                .iter()
                .zip(&self.ops.weights()[b])
                .map(|(&c, &w)| c * w)
                .sum();
            m.set(b, b, f.pow(lambda, e.rem_euclid(unit_order) as u64));
        }
        m
    }

    /// Weyl representative `n_r(λ) = x_r(λ) x_{−r}(−λ⁻¹) x_r(λ)`.
    pub fn n(&self, root: usize, lambda: u16) -> MatrixGF {
        let f = &self.field;
        assert_ne!(lambda, f.zero());
        let neg = self.abs.neg_index(root);
        let a = self.x(root, lambda);
        let b = self.x(neg, f.neg(f.inv(lambda)));
        a.mul(&b).mul(&a)
    }

    /// `h_r(λ)` computed inside the group, as `n_r(λ) n_r(−1)`; equals
    /// the diagonal form.
    pub fn h_from_group(&self, root: usize, lambda: u16) -> MatrixGF {
        let f = &self.field;
        self.n(root, lambda).mul(&self.n(root, f.neg(f.one())))
    }

    /// Standard generators: `x_{±α}(ξ^j)` over the simple roots, with ξ
    /// a primitive element and j ranging over a GF(p)-basis of the field.
    pub fn generators(&self) -> Vec<MatrixGF> {
        let f = &self.field;
        let xi = f.primitive_element();
        let mut ts = Vec::new();
        let mut t = f.one();
        for _ in 0..f.n() {
            ts.push(t);
            t = f.mul(t, xi);
        }
        let mut gens = Vec::new();
        for s in self.abs.simple_indices() {
            for &t in &ts {
                gens.push(self.x(s, t));
                gens.push(self.x(self.abs.neg_index(s), t));
            }
        }
        gens
    }

    /// The images of the Chevalley basis on this module: Cartan operators
    /// first, then the degree-one root operators.
    pub fn algebra_matrices(&self) -> Vec<MatrixGF> {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.algebra_dim());
        for i in 0..self.abs.rank() {
            out.push(MatrixGF::from_fn(f.clone(), self.dim, self.dim, |r, c| {
                if r == c {
                    f.from_int(self.ops.weights()[r][i])
                } else {
                    f.zero()
                }
            }));
        }
        for root in 0..self.abs.num_roots() {
            let mut m = MatrixGF::zero(f.clone(), self.dim, self.dim);
            for (i, j, v) in self.ops.d_rho(root).entries() {
                m.set(i, j, f.from_int(v));
            }
            out.push(m);
        }
        out
    }

    /// Dimension of the Lie algebra of the family.
    pub fn algebra_dim(&self) -> usize {
        self.abs.rank() + self.abs.num_roots()
    }

    /// Fixed-space dimension of `g` on this module.
    pub fn fixed_dim(&self, g: &MatrixGF) -> usize {
        g.fixed_space_dim()
    }

    /// Fixed-space dimension of `g` acting by conjugation on the span of
    /// the algebra operators — the adjoint (Lie algebra) module. Requires
    /// that span to be full-dimensional, which is checked on first use.
    pub fn adjoint_fixed_dim(&self, g: &MatrixGF) -> usize {
        let mats = self.algebra_matrices();
        let adim = *self.span_checked.get_or_init(|| {
            let rows: Vec<Vec<u16>> = mats.iter().map(|m| m.data().to_vec()).collect();
            let span = MatrixGF::from_rows(self.field.clone(), &rows).rank();
            assert_eq!(
                span,
                self.algebra_dim(),
                "algebra operators do not span a full copy of the algebra"
            );
            span
        });
        let ginv = g.inverse().expect("group element must be invertible");
        let rows: Vec<Vec<u16>> = mats
            .iter()
            .map(|b| g.mul(b).mul(&ginv).sub(b).data().to_vec())
            .collect();
        let moved = MatrixGF::from_rows(self.field.clone(), &rows).rank();
        adim - moved
    }
}

/// Module tag of a search context: the full minimal (M) and adjoint (L)
/// modules, their irreducible reductions (M′, L′) in the characteristics
/// where the full module acquires a trivial or small composition factor,
/// and ad-hoc natural modules for groups given by raw generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtxModule {
    M,
    MPrime,
    L,
    LPrime,
    Natural,
}

impl CtxModule {
    pub fn name(self) -> &'static str {
        match self {
            CtxModule::M => "M",
            CtxModule::MPrime => "M'",
            CtxModule::L => "L",
            CtxModule::LPrime => "L'",
            CtxModule::Natural => "nat",
        }
    }

    pub fn parse(s: &str) -> Option<CtxModule> {
        match s {
            "M" => Some(CtxModule::M),
            "M'" => Some(CtxModule::MPrime),
            "L" => Some(CtxModule::L),
            "L'" => Some(CtxModule::LPrime),
            "nat" => Some(CtxModule::Natural),
            _ => None,
        }
    }

    /// True for the meataxe-reduced kinds.
    pub fn is_reduced(self) -> bool {
        matches!(self, CtxModule::MPrime | CtxModule::LPrime)
    }

    /// True when the module itself is (a reduction of) the adjoint module,
    /// so a fixed space on it is already an adjoint fixed space.
    pub fn is_adjoint_side(self) -> bool {
        matches!(self, CtxModule::L | CtxModule::LPrime)
    }

    fn reduction(self) -> Option<CtxModule> {
        match self {
            CtxModule::M => Some(CtxModule::MPrime),
            CtxModule::L => Some(CtxModule::LPrime),
            _ => None,
        }
    }
}

/// The span of the algebra operators inside End(V) for a module V,
/// held as an echelonized basis. Conjugation by a group element maps the
/// span to itself and acts on it exactly as on the adjoint module, so
/// fixed spaces (and Jordan data) of the adjoint action can be measured
/// from matrices on V alone.
#[derive(Clone)]
pub struct AlgebraSpan {
    field: FieldCtx,
    module_dim: usize,
    /// Basis matrices whose flattenings are in row-echelon form with
    /// leading coefficient one.
    basis: Vec<MatrixGF>,
    /// Flat index of each basis matrix's leading entry.
    pivots: Vec<usize>,
}

impl AlgebraSpan {
    /// Echelonizes a spanning set. Returns `None` for an empty span.
    pub fn new(field: FieldCtx, module_dim: usize, mats: &[MatrixGF]) -> Option<AlgebraSpan> {
        let mut span = AlgebraSpan { field, module_dim, basis: Vec::new(), pivots: Vec::new() };
        for m in mats {
            assert_eq!(m.rows(), module_dim);
            assert_eq!(m.cols(), module_dim);
            span.insert(m.data().to_vec());
        }
        if span.basis.is_empty() {
            None
        } else {
            Some(span)
        }
    }

    fn insert(&mut self, mut v: Vec<u16>) -> bool {
        let f = self.field.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(b.data().iter()) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                let inv = f.inv(v[p]);
                for x in v.iter_mut() {
                    *x = f.mul(inv, *x);
                }
                let n = self.module_dim;
                let m = MatrixGF::from_fn(f, n, n, |r, c| v[r * n + c]);
                self.basis.push(m);
                self.pivots.push(p);
                true
            }
        }
    }

    /// Dimension of the span.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MatrixGF] {
        &self.basis
    }

    /// Coordinates of a matrix in the echelon basis; `None` if it lies
    /// outside the span.
    fn coords(&self, m: &MatrixGF) -> Option<Vec<u16>> {
        let f = &self.field;
        let mut v = m.data().to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p];
            out.push(c);
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(b.data().iter()) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        if v.iter().all(|&x| x == 0) {
            Some(out)
        } else {
            None
        }
    }

    /// The matrix of conjugation by `g` on the span, in the echelon basis.
    /// Panics if the span is not stable under conjugation (which would
    /// signal a corrupted context, never a property of a group element).
    pub fn conjugation_matrix(&self, g: &MatrixGF) -> MatrixGF {
        let ginv = g.inverse().expect("group element must be invertible");
        let k = self.basis.len();
        let mut cols = Vec::with_capacity(k);
        for b in &self.basis {
            let image = g.mul(b).mul(&ginv);
            let c = self
                .coords(&image)
                .expect("algebra span must be stable under group conjugation");
            cols.push(c);
        }
        MatrixGF::from_fn(self.field.clone(), k, k, |r, c| cols[c][r])
    }
}

/// An immutable matrix-group search context: explicit generators acting on
/// a stated module, plus (for minimal-module contexts) the algebra span
/// used to measure adjoint fixed spaces without a second representation.
#[derive(Clone)]
pub struct GroupCtx {
    /// Family label as used in reports and witness files ("F4", "A1", …).
    pub family: String,
    pub q: u64,
    pub kind: CtxModule,
    pub dim: usize,
    pub field: FieldCtx,
    pub gens: Vec<MatrixGF>,
    /// Construction parameters: module, field modulus, basis-order hash.
    pub provenance: String,
    /// Present on minimal-module contexts; `None` when the module itself
    /// is the adjoint one or the group is ad-hoc.
    pub algebra: Option<AlgebraSpan>,
}

/// Fixed deterministic seed for the meataxe calls a context construction
/// performs; part of the replay contract.
const SPLIT_SEED: u64 = 0x517e_a7e5;

impl GroupCtx {
    /// Builds the context for a Chevalley group family on a full module.
    pub fn build(family: Family, kind: ModuleKind, q: u64) -> Result<GroupCtx, FflaError> {
        let g = ChevalleyGroup::new(family, kind, q)?;
        let field = g.field().clone();
        let gens = g.generators();
        for m in &gens {
            assert!(m.inverse().is_some(), "generators must be invertible");
        }
        let ctx_kind = match kind {
            ModuleKind::Minimal => CtxModule::M,
            ModuleKind::Adjoint => CtxModule::L,
        };
        let algebra = if ctx_kind == CtxModule::M {
            let span = AlgebraSpan::new(field.clone(), g.dim(), &g.algebra_matrices())
                .expect("algebra operators cannot all vanish");
            Some(span)
        } else {
            None
        };
        let mut ctx = GroupCtx {
            family: format!("{:?}", family),
            q,
            kind: ctx_kind,
            dim: g.dim(),
            field,
            gens,
            provenance: String::new(),
            algebra,
        };
        ctx.provenance = ctx.provenance_line();
        Ok(ctx)
    }

    /// Wraps an ad-hoc generator set (natural modules, test groups).
    pub fn from_generators(family: &str, q: u64, gens: Vec<MatrixGF>) -> GroupCtx {
        assert!(!gens.is_empty());
        let field = gens[0].field().clone();
        let dim = gens[0].rows();
        for m in &gens {
            assert!(m.is_square() && m.rows() == dim);
            assert!(m.inverse().is_some(), "generators must be invertible");
        }
        let mut ctx = GroupCtx {
            family: family.to_string(),
            q,
            kind: CtxModule::Natural,
            dim,
            field,
            gens,
            provenance: String::new(),
            algebra: None,
        };
        ctx.provenance = ctx.provenance_line();
        ctx
    }

    fn provenance_line(&self) -> String {
        let modulus: Vec<String> =
            self.field.modulus().iter().map(|c| c.to_string()).collect();
        format!(
            "family={} kind={} q={} dim={} modulus=[{}] basis-hash={}",
            self.family,
            self.kind.name(),
            self.q,
            self.dim,
            modulus.join(","),
            &self.gens_hash()[..16],
        )
    }

    /// Hash of the generator block: pins the weight-basis ordering.
    fn gens_hash(&self) -> String {
        let mut buf = String::new();
        for g in &self.gens {
            buf.push_str(&g.to_text());
            buf.push('\n');
        }
        sha256_hex(buf.as_bytes())
    }

    /// One meataxe reduction step: splits off the unique proper invariant
    /// subspace found and keeps the larger factor (the submodule on a
    /// tie). Errors if the module is already irreducible. The algebra
    /// span, when present, is transported through the same change of
    /// basis; its block structure is asserted, so an invalid transport
    /// can never produce silent garbage.
    pub fn reduced(&self) -> Result<GroupCtx, String> {
        let target_kind = self
            .kind
            .reduction()
            .ok_or_else(|| format!("module kind {} has no reduction", self.kind.name()))?;
        let module = GfModule::new(self.gens.clone());
        let basis = match analyze(&module, SPLIT_SEED) {
            MeataxeOutcome::Irreducible(_) => {
                return Err("module is already irreducible".to_string())
            }
            MeataxeOutcome::Reducible(basis) => basis,
        };
        let n = self.dim;
        let k = basis.cols();
        let t = completion_transform(&self.field, n, &basis);
        let tinv = t.inverse().expect("completed basis must be invertible");
        // Keep the larger block; on a tie prefer the submodule block.
        let keep_sub = k >= n - k;
        let keep_dim = if keep_sub { k } else { n - k };
        let take_block = |m: &MatrixGF, ctx_name: &str| -> MatrixGF {
            let c = tinv.mul(&m.mul(&t));
            for r in k..n {
                for col in 0..k {
                    assert_eq!(
                        c.at(r, col),
                        self.field.zero(),
                        "{ctx_name}: subspace is not invariant"
                    );
                }
            }
            if keep_sub {
                MatrixGF::from_fn(self.field.clone(), k, k, |r, col| c.at(r, col))
            } else {
                MatrixGF::from_fn(self.field.clone(), n - k, n - k, |r, col| {
                    c.at(k + r, k + col)
                })
            }
        };
        let gens: Vec<MatrixGF> =
            self.gens.iter().map(|g| take_block(g, "generator")).collect();
        match analyze(&GfModule::new(gens.clone()), SPLIT_SEED) {
            MeataxeOutcome::Irreducible(_) => {}
            MeataxeOutcome::Reducible(_) => {
                return Err(format!(
                    "the {keep_dim}-dimensional factor is still reducible; \
                     a single reduction step does not reach an irreducible module"
                ))
            }
        }
        let algebra = match &self.algebra {
            None => None,
            Some(span) => {
                let mats: Vec<MatrixGF> =
                    span.basis().iter().map(|b| take_block(b, "algebra operator")).collect();
                AlgebraSpan::new(self.field.clone(), keep_dim, &mats)
            }
        };
        let mut ctx = GroupCtx {
            family: self.family.clone(),
            q: self.q,
            kind: target_kind,
            dim: keep_dim,
            field: self.field.clone(),
            gens,
            provenance: String::new(),
            algebra,
        };
        ctx.provenance = ctx.provenance_line();
        Ok(ctx)
    }

    pub fn identity(&self) -> MatrixGF {
        MatrixGF::identity(self.field.clone(), self.dim)
    }

    /// Fixed-space dimension of `g` on this module.
    pub fn fixed_dim(&self, g: &MatrixGF) -> usize {
        g.fixed_space_dim()
    }

    /// Fixed-space dimension of `g` on the adjoint module, measured as the
    /// fixed space of conjugation on the algebra span. `None` when the
    /// context has no span (adjoint-side and ad-hoc modules).
    pub fn adjoint_fixed_dim(&self, g: &MatrixGF) -> Option<usize> {
        let span = self.algebra.as_ref()?;
        Some(span.conjugation_matrix(g).fixed_space_dim())
    }

    /// Serializes the context for the on-disk group cache.
    pub fn cache_text(&self) -> String {
        let mut s = String::new();
        s.push_str("hurwitz group cache v1\n");
        s.push_str(&format!("family: {}\n", self.family));
        s.push_str(&format!("q: {}\n", self.q));
        s.push_str(&format!("kind: {}\n", self.kind.name()));
        s.push_str(&format!("dim: {}\n", self.dim));
        let modulus: Vec<String> =
            self.field.modulus().iter().map(|c| c.to_string()).collect();
        s.push_str(&format!("modulus: {}\n", modulus.join(" ")));
        s.push_str(&format!("provenance: {}\n", self.provenance));
        s.push_str(&format!("weight-hash: {}\n", &self.gens_hash()[..16]));
        s.push_str(&format!("gens: {}\n", self.gens.len()));
        for g in &self.gens {
            s.push_str(&g.to_text());
            s.push('\n');
        }
        match &self.algebra {
            None => s.push_str("algebra: 0\n"),
            Some(span) => {
                s.push_str(&format!("algebra: {}\n", span.dim()));
                for b in span.basis() {
                    s.push_str(&b.to_text());
                    s.push('\n');
                }
            }
        }
        s.push_str("end\n");
        s
    }

    /// Rebuilds a context from cache text, re-deriving and re-checking
    /// everything derivable (field modulus, hashes, invertibility, span
    /// echelon structure).
    pub fn from_cache_text(text: &str) -> Result<GroupCtx, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty cache file")?;
        if header != "hurwitz group cache v1" {
            return Err(format!("unrecognized cache header {header:?}"));
        }
        let mut need = |name: &str| -> Result<String, String> {
            let line = lines.next().ok_or_else(|| format!("missing field {name}"))?;
            let (k, v) = line.split_once(": ").ok_or_else(|| format!("bad line {line:?}"))?;
            if k != name {
                return Err(format!("expected field {name}, found {k}"));
            }
            Ok(v.to_string())
        };
        let family = need("family")?;
        let q: u64 = need("q")?.parse().map_err(|e| format!("q: {e}"))?;
        let kind = CtxModule::parse(&need("kind")?).ok_or("bad module kind")?;
        let dim: usize = need("dim")?.parse().map_err(|e| format!("dim: {e}"))?;
        let modulus = need("modulus")?;
        let provenance = need("provenance")?;
        let weight_hash = need("weight-hash")?;
        let n_gens: usize = need("gens")?.parse().map_err(|e| format!("gens: {e}"))?;
        let field = FieldCtx::new(q).map_err(|e| format!("field: {e}"))?;
        let live_modulus: Vec<String> =
            field.modulus().iter().map(|c| c.to_string()).collect();
        if modulus != live_modulus.join(" ") {
            return Err("field modulus does not match this build".to_string());
        }
        let mut gens = Vec::with_capacity(n_gens);
        for _ in 0..n_gens {
            let line = lines.next().ok_or("missing generator line")?;
            let m = MatrixGF::from_text(field.clone(), line)?;
            if !m.is_square() || m.rows() != dim {
                return Err("generator dimension mismatch".to_string());
            }
            if m.inverse().is_none() {
                return Err("cached generator is singular".to_string());
            }
            gens.push(m);
        }
        let n_alg: usize = {
            let line = lines.next().ok_or("missing algebra count")?;
            let v = line.strip_prefix("algebra: ").ok_or("bad algebra line")?;
            v.parse().map_err(|e| format!("algebra: {e}"))?
        };
        let algebra = if n_alg == 0 {
            None
        } else {
            let mut mats = Vec::with_capacity(n_alg);
            for _ in 0..n_alg {
                let line = lines.next().ok_or("missing algebra line")?;
                mats.push(MatrixGF::from_text(field.clone(), line)?);
            }
            let span = AlgebraSpan::new(field.clone(), dim, &mats)
                .ok_or("algebra block spans nothing")?;
            if span.dim() != n_alg {
                return Err("cached algebra block is not an echelon basis".to_string());
            }
            Some(span)
        };
        if lines.next() != Some("end") {
            return Err("missing end marker".to_string());
        }
        let ctx = GroupCtx { family, q, kind, dim, field, gens, provenance, algebra };
        if ctx.gens_hash()[..16] != weight_hash {
            return Err("weight-order hash mismatch".to_string());
        }
        Ok(ctx)
    }

    /// Hash identifying this exact context (basis order included);
    /// recorded in witness files and re-checked by the verifier.
    pub fn cache_hash(&self) -> String {
        sha256_hex(self.cache_text().as_bytes())
    }
}

/// Completes echelonized basis columns to a full change-of-basis matrix by
/// unit vectors on the non-pivot coordinates (same construction as the
/// meataxe split).
fn completion_transform(field: &FieldCtx, n: usize, basis: &MatrixGF) -> MatrixGF {
    let k = basis.cols();
    assert!(k > 0 && k < n);
    let mut t = MatrixGF::zero(field.clone(), n, n);
    for j in 0..k {
        for i in 0..n {
            t.set(i, j, basis.at(i, j));
        }
    }
    let mut used = vec![false; n];
    {
        let mut probe = basis.transpose();
        for p in probe.row_reduce() {
            used[p] = true;
        }
    }
    let mut j = k;
    for i in 0..n {
        if !used[i] {
            t.set(i, j, field.one());
            j += 1;
        }
    }
    assert_eq!(j, n);
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn closure_size(group: &ChevalleyGroup, cap: usize) -> usize {
        let gens = group.generators();
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        let mut frontier = vec![group.identity()];
        seen.insert(group.identity().data().to_vec());
        while let Some(m) = frontier.pop() {
            for g in &gens {
                let next = m.mul(g);
                if seen.insert(next.data().to_vec()) {
                    assert!(seen.len() <= cap, "closure exceeded cap");
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn a1_over_gf7_generates_the_expected_groups() {
        // On the natural 2-dimensional module the root elements generate
        // the full special linear group of order 336; on the adjoint
        // module the center dies and 168 elements remain.
        let natural = ChevalleyGroup::new(Family::A1, ModuleKind::Minimal, 7).unwrap();
        assert_eq!(closure_size(&natural, 400), 336);
        let adjoint = ChevalleyGroup::new(Family::A1, ModuleKind::Adjoint, 7).unwrap();
        assert_eq!(closure_size(&adjoint, 200), 168);
    }

    #[test]
    fn root_and_torus_elements_have_determinant_one() {
        for (family, kind, q) in [
            (Family::F4, ModuleKind::Minimal, 3),
            (Family::G2, ModuleKind::Minimal, 2),
            (Family::E6, ModuleKind::Minimal, 3),
            (Family::A1, ModuleKind::Adjoint, 7),
        ] {
            let g = ChevalleyGroup::new(family, kind, q).unwrap();
            let f = g.field().clone();
            let nroots = g.root_system().num_roots();
            for root in (0..nroots).step_by(5) {
                assert_eq!(g.x(root, f.one()).det(), f.one());
                if q > 2 {
                    let xi = f.primitive_element();
                    assert_eq!(g.x(root, xi).det(), f.one());
                    assert_eq!(g.h(root, xi).det(), f.one());
                    assert_eq!(g.n(root, xi).det(), f.one());
                }
            }
        }
    }

    #[test]
    fn torus_conjugation_rescales_root_subgroups() {
        // h_β(λ) x_α(t) h_β(λ)⁻¹ = x_α(λ^{⟨α,β∨⟩} t).
        for (family, q) in [(Family::F4, 3u64), (Family::E6, 3), (Family::A1, 7)] {
            let g = ChevalleyGroup::new(family, ModuleKind::Minimal, q).unwrap();
            let f = g.field().clone();
            let rs = g.root_system();
            let xi = f.primitive_element();
            for alpha in (0..rs.num_roots()).step_by(7) {
                for beta in (0..rs.num_roots()).step_by(11) {
                    let h = g.h(beta, xi);
                    let hinv = h.inverse().unwrap();
                    let lhs = h.mul(&g.x(alpha, f.one())).mul(&hinv);
                    let pairing = rs.root_coroot_pairing(alpha, beta);
                    let scale = f.pow(
                        xi,
                        pairing.rem_euclid((f.q() - 1) as i64) as u64,
                    );
                    assert_eq!(lhs, g.x(alpha, scale), "{:?} α={} β={}", family, alpha, beta);
                }
            }
        }
    }

    #[test]
    fn weyl_representatives_permute_root_subgroups() {
        for (family, q) in [(Family::F4, 3u64), (Family::G2, 2)] {
            let g = ChevalleyGroup::new(family, ModuleKind::Minimal, q).unwrap();
            let f = g.field().clone();
            let rs = g.root_system();
            for (label, s) in rs.simple_indices().into_iter().enumerate() {
                let n = g.n(s, f.one());
                let ninv = n.inverse().unwrap();
                for beta in (0..rs.num_roots()).step_by(3) {
                    let conj = n.mul(&g.x(beta, f.one())).mul(&ninv);
                    let image = rs
                        .index_of(&rs.reflect(rs.root(beta), label))
                        .expect("reflection of a root is a root");
                    let plus = g.x(image, f.one());
                    let minus = g.x(image, f.neg(f.one()));
                    assert!(
                        conj == plus || conj == minus,
                        "{:?} s_{} of root {}",
                        family,
                        label,
                        beta
                    );
                }
            }
        }
    }

    #[test]
    fn group_side_torus_matches_the_diagonal_form() {
        for (family, kind, q) in [
            (Family::A1, ModuleKind::Minimal, 7),
            (Family::F4, ModuleKind::Minimal, 3),
            (Family::E6, ModuleKind::Minimal, 3),
            (Family::E7, ModuleKind::Minimal, 3),
        ] {
            let g = ChevalleyGroup::new(family, kind, q).unwrap();
            let f = g.field().clone();
            let xi = f.primitive_element();
            for root in 0..g.root_system().rank() {
                assert_eq!(g.h_from_group(root, xi), g.h(root, xi));
                // n(λ)⁻¹ = n(−λ) as well.
                assert_eq!(
                    g.n(root, xi).inverse().unwrap(),
                    g.n(root, f.neg(xi))
                );
            }
        }
    }

    #[test]
    fn root_elements_have_order_p() {
        for (family, q, p) in [(Family::F4, 3u64, 3u128), (Family::E7, 2, 2)] {
            let g = ChevalleyGroup::new(family, ModuleKind::Minimal, q).unwrap();
            let f = g.field().clone();
            for root in (0..g.root_system().num_roots()).step_by(9) {
                let x = g.x(root, f.one());
                assert!(!x.is_identity());
                assert!(x.pow(p).is_identity());
            }
        }
    }

    #[test]
    fn algebra_spans_are_full_for_the_hunting_modules() {
        for (family, q, adim) in [
            (Family::F4, 3u64, 52usize),
            (Family::E6, 3, 78),
            (Family::E7, 2, 133),
        ] {
            let g = ChevalleyGroup::new(family, ModuleKind::Minimal, q).unwrap();
            assert_eq!(g.algebra_dim(), adim);
            // The identity fixes the whole algebra; this also triggers the
            // span-dimension assertion.
            assert_eq!(g.adjoint_fixed_dim(&g.identity()), adim);
        }
    }

    #[test]
    fn adjoint_fixed_spaces_of_small_elements() {
        // For A1 over GF(7), a regular torus element fixes exactly the
        // Cartan line of the algebra, and a root element fixes its own
        // line plus nothing else new: dim ker(Ad(x(1)) − 1) = 1 on sl2.
        let g = ChevalleyGroup::new(Family::A1, ModuleKind::Minimal, 7).unwrap();
        let f = g.field().clone();
        let xi = f.primitive_element();
        assert_eq!(g.adjoint_fixed_dim(&g.h(0, xi)), 1);
        assert_eq!(g.adjoint_fixed_dim(&g.x(0, f.one())), 1);
        // Consistency with the honest adjoint-module context.
        let adj = ChevalleyGroup::new(Family::A1, ModuleKind::Adjoint, 7).unwrap();
        assert_eq!(adj.fixed_dim(&adj.h(0, xi)), 1);
        assert_eq!(adj.fixed_dim(&adj.x(0, f.one())), 1);
    }

    #[test]
    fn reduced_contexts_have_the_pinned_dimensions() {
        for (family, kind, q, full, reduced) in [
            (Family::F4, ModuleKind::Minimal, 3u64, 26usize, 25usize),
            (Family::F4, ModuleKind::Adjoint, 2, 52, 26),
            (Family::E6, ModuleKind::Adjoint, 3, 78, 77),
            (Family::E7, ModuleKind::Adjoint, 2, 133, 132),
        ] {
            let ctx = GroupCtx::build(family, kind, q).unwrap();
            assert_eq!(ctx.dim, full);
            let red = ctx.reduced().unwrap();
            assert_eq!(red.dim, reduced);
            assert!(red.kind.is_reduced());
            assert_eq!(red.q, q);
            for g in &red.gens {
                assert!(g.inverse().is_some());
            }
        }
    }

    #[test]
    fn reduction_of_an_irreducible_module_is_refused() {
        let ctx = GroupCtx::build(Family::F4, ModuleKind::Minimal, 5).unwrap();
        let err = match ctx.reduced() {
            Ok(_) => panic!("reduction must be refused"),
            Err(e) => e,
        };
        assert!(err.contains("already irreducible"), "{err}");
    }

    #[test]
    fn adjoint_measurement_survives_the_reduction() {
        // The span of the algebra operators is carried through the change
        // of basis, so conjugation fixed spaces agree between the full
        // module and its irreducible reduction for the same group element
        // (represented by the generator with the same index).
        let ctx = GroupCtx::build(Family::F4, ModuleKind::Minimal, 3).unwrap();
        let red = ctx.reduced().unwrap();
        let span = red.algebra.as_ref().expect("reduced context keeps the span");
        assert_eq!(span.dim(), 52);
        assert_eq!(red.adjoint_fixed_dim(&red.identity()), Some(52));
        for i in [0usize, 3, 7] {
            let full_d = ctx.adjoint_fixed_dim(&ctx.gens[i]).unwrap();
            let red_d = red.adjoint_fixed_dim(&red.gens[i]).unwrap();
            assert_eq!(full_d, red_d, "generator {i}");
        }
    }

    #[test]
    fn cache_text_round_trips_and_detects_tampering() {
        let ctx = GroupCtx::build(Family::F4, ModuleKind::Minimal, 3).unwrap().reduced().unwrap();
        let text = ctx.cache_text();
        let back = GroupCtx::from_cache_text(&text).unwrap();
        assert_eq!(back.cache_hash(), ctx.cache_hash());
        assert_eq!(back.dim, ctx.dim);
        assert_eq!(back.kind, ctx.kind);
        assert_eq!(back.gens.len(), ctx.gens.len());
        for (a, b) in back.gens.iter().zip(&ctx.gens) {
            assert_eq!(a.data(), b.data());
        }
        assert_eq!(
            back.algebra.as_ref().map(|s| s.dim()),
            ctx.algebra.as_ref().map(|s| s.dim())
        );
        // Flip one generator entry: the weight-order hash must catch it.
        let marker = "gens: ";
        let pos = text.find(marker).unwrap();
        let line_start = text[pos..].find('\n').unwrap() + pos + 1;
        let mut bytes = text.into_bytes();
        let entry = (line_start..bytes.len())
            .find(|&i| bytes[i] == b' ' && bytes[i + 1].is_ascii_hexdigit())
            .unwrap()
            + 1;
        bytes[entry] = if bytes[entry] == b'0' { b'1' } else { b'0' };
        let tampered = String::from_utf8(bytes).unwrap();
        assert!(GroupCtx::from_cache_text(&tampered).is_err());
    }

    #[test]
    fn ad_hoc_contexts_wrap_plain_generator_sets() {
        let f = FieldCtx::new(2).unwrap();
        // Companion matrix of x^3 + x + 1 and a transvection generate
        // the full group GL(3, 2) of order 168.
        let a = MatrixGF::from_int_entries(f.clone(), 3, 3, &[0, 0, 1, 1, 0, 1, 0, 1, 0]);
        let b = MatrixGF::from_int_entries(f.clone(), 3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 1]);
        let ctx = GroupCtx::from_generators("GL32", 2, vec![a, b]);
        assert_eq!(ctx.dim, 3);
        assert_eq!(ctx.kind, CtxModule::Natural);
        assert!(ctx.algebra.is_none());
        assert!(ctx.adjoint_fixed_dim(&ctx.identity()).is_none());
        let text = ctx.cache_text();
        let back = GroupCtx::from_cache_text(&text).unwrap();
        assert_eq!(back.cache_hash(), ctx.cache_hash());
    }
}

