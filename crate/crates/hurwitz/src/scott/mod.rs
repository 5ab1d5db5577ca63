//! The admissibility engine.
//!
//! For a Hurwitz generating triple (x, y, z) — x² = y³ = z⁷ = xyz = 1 with
//! ⟨x, y, z⟩ = G — and any nontrivial G-module V with no trivial summand,
//! Scott's bound forces d_x^V + d_y^V + d_z^V ≤ dim V, where d_g^V is the
//! fixed-space dimension. Running that inequality over the class tables
//! yields, per family and field size, the short list of class triples a
//! Hurwitz triple could possibly inhabit ([`enumerate_admissible`]), or a
//! proof that there are none ([`Verdict::Impossible`]).
//!
//! For E7 and E8 the class tables are partial, so [`verdict`] instead
//! reports bound-constrained candidate lists per slot ([`Verdict::Slots`]):
//! printed per-characteristic caps on d^L, sharpened where a second module
//! is available, with order-7 semisimple data summarized from the torus
//! census of `rootsys` because no labelled class rows exist for them.

use crate::classdata::{
    all_records, lookup, prime_power, ClassDataError, ClassRecord, GroupFamily, LookupHit,
    ModuleTag,
};
use crate::rootsys::{torus_fixed_dims, TorusScan};
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// One admissible class triple at a given (family, congruence case of q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleType {
    pub family: GroupFamily,
    /// Congruence-case label for q, e.g. "3^n" or "2^(3n)".
    pub q_condition: String,
    pub x: String,
    pub y: String,
    pub z: String,
    /// (module, d_x + d_y + d_z, dim) for each checked module on which all
    /// three dimensions are known.
    pub module_sums: Vec<(ModuleTag, u32, u32)>,
    /// True when some class's existence at this q rests on a condition the
    /// tables leave unstated.
    pub assumed: bool,
}

impl TripleType {
    /// Machine-readable one-liner: `family|q-cond|x|y|z`.
    pub fn machine_line(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}",
            self.family.name(),
            self.q_condition,
            self.x,
            self.y,
            self.z
        )
    }

    pub fn labels(&self) -> (&str, &str, &str) {
        (&self.x, &self.y, &self.z)
    }
}

/// Candidate lists for the families whose class tables are partial.
#[derive(Clone, Debug)]
pub struct SlotReport {
    pub family: GroupFamily,
    pub q_condition: String,
    /// The printed per-characteristic caps on (d_x^L, d_y^L, d_z^L).
    pub bounds: (u32, u32, u32),
    pub x: Vec<String>,
    pub y: Vec<String>,
    /// Labelled z-candidates (unipotent case, characteristic 7).
    pub z: Vec<String>,
    /// Unlabelled z-candidates (semisimple case): attained (d^M, d^L)
    /// pairs from the torus census that satisfy the caps, with d^M absent
    /// for E8. Empty when `z` is populated.
    pub z_census: Vec<(Option<u32>, u32)>,
    pub notes: Vec<String>,
}

/// The outcome of the admissibility analysis at (family, q).
#[derive(Clone, Debug)]
pub enum Verdict {
    /// Complete enumeration (F4, E6, SE6, twisted E6).
    Triples(Vec<TripleType>),
    /// Bound-constrained candidate lists (E7, SE7, E8).
    Slots(SlotReport),
    /// The enumeration is empty: no Hurwitz triple can exist.
    Impossible {
        family: GroupFamily,
        q: u64,
        q_condition: String,
        reason: String,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum ScottError {
    #[error(transparent)]
    ClassData(#[from] ClassDataError),
    #[error("{0} has no complete admissibility enumeration; only bound-constrained candidate lists are available (use verdict)")]
    SlotsOnly(&'static str),
}

/// The modules Scott's bound is checked on for (family, q), with their
/// dimensions. Families whose tables are partial get an error; use
/// [`verdict`] for those.
///
/// The selection mirrors, per characteristic, the module each group form
/// actually acts on with the dimensions the class tables quote:
/// - F4: the 26-dimensional module plus the adjoint 52; in characteristic
///   3 the 25-dimensional irreducible piece M′ replaces M (d-values are
///   corrected per class); in characteristic 2 only the adjoint is used.
/// - E6 (adjoint form): the adjoint module only — the 27-dimensional
///   module is not a module for the adjoint group — except in
///   characteristic 3 where the quoted M-dims apply and L drops to 77.
/// - SE6 (simply connected): the 27-dimensional module counts, except in
///   characteristic 2 (kept identical to the adjoint case).
/// - Twisted E6: like SE6 when the form is simply connected,
///   gcd(3, q+1) = 1; like E6 otherwise.
pub fn modules_for(family: GroupFamily, q: u64) -> Result<Vec<(ModuleTag, u32)>, ScottError> {
    let (p, _n) = prime_power(q).ok_or(ClassDataError::BadQ(q))?;
    let mods = match family {
        GroupFamily::F4 => match p {
            2 => vec![(ModuleTag::L, 52)],
            3 => vec![(ModuleTag::MPrime, 25), (ModuleTag::L, 52)],
            _ => vec![(ModuleTag::M, 26), (ModuleTag::L, 52)],
        },
        GroupFamily::E6 => match p {
            3 => vec![(ModuleTag::M, 27), (ModuleTag::L, 77)],
            _ => vec![(ModuleTag::L, 78)],
        },
        GroupFamily::SE6 => match p {
            2 => vec![(ModuleTag::L, 78)],
            3 => vec![(ModuleTag::M, 27), (ModuleTag::L, 77)],
            _ => vec![(ModuleTag::M, 27), (ModuleTag::L, 78)],
        },
        GroupFamily::TwistedE6 => match p {
            2 => vec![(ModuleTag::L, 78)],
            3 => vec![(ModuleTag::M, 27), (ModuleTag::L, 77)],
            _ => {
                if (q + 1) % 3 == 0 {
                    vec![(ModuleTag::L, 78)]
                } else {
                    vec![(ModuleTag::M, 27), (ModuleTag::L, 78)]
                }
            }
        },
        GroupFamily::E7 | GroupFamily::SE7 | GroupFamily::E8 => {
            return Err(ScottError::SlotsOnly(family.name()))
        }
    };
    Ok(mods)
}

/// Scott's inequality over every module in `modules`: true iff
/// d_x + d_y + d_z ≤ dim holds on each one. A module on which some class's
/// dimension is unknown is skipped for that triple (unknown data can never
/// refute admissibility).
pub fn scott_check(
    x: &ClassRecord,
    y: &ClassRecord,
    z: &ClassRecord,
    modules: &[(ModuleTag, u32)],
) -> bool {
    modules.iter().all(|&(tag, dim)| {
        match (x.d_on(tag), y.d_on(tag), z.d_on(tag)) {
            (Some(a), Some(b), Some(c)) => a + b + c <= dim,
            _ => true,
        }
    })
}

/// Congruence-case label for q in the full-enumeration families, matching
/// the case split of the analysis.
pub fn q_condition_label(family: GroupFamily, q: u64) -> String {
    let Some((p, n)) = prime_power(q) else {
        return format!("q={q}");
    };
    match family {
        GroupFamily::F4 => match p {
            2 => match n % 3 {
                0 => "2^(3n)".to_string(),
                1 => "2^(3n-2)".to_string(),
                _ => "2^(3n-1)".to_string(),
            },
            3 => "3^n".to_string(),
            7 => "7^n".to_string(),
            _ => "p^n, p != 2,3,7".to_string(),
        },
        GroupFamily::E6 | GroupFamily::SE6 | GroupFamily::TwistedE6 => match p {
            2 => "2^n".to_string(),
            3 => "3^n".to_string(),
            7 => "7^n".to_string(),
            _ => "p^n, p != 2,3,7".to_string(),
        },
        GroupFamily::E7 | GroupFamily::SE7 | GroupFamily::E8 => match p {
            2 => "2^n".to_string(),
            3 => "3^n".to_string(),
            7 => "7^n".to_string(),
            _ => "p^n, p >= 5".to_string(),
        },
    }
}

fn triples_from_hits(
    family: GroupFamily,
    q: u64,
    modules: &[(ModuleTag, u32)],
    xs: &[LookupHit],
    ys: &[LookupHit],
    zs: &[LookupHit],
) -> Vec<TripleType> {
    let q_condition = q_condition_label(family, q);
    let mut out = Vec::new();
    for hx in xs {
        for hy in ys {
            for hz in zs {
                let (x, y, z) = (hx.record, hy.record, hz.record);
                if !scott_check(x, y, z, modules) {
                    continue;
                }
                let module_sums = modules
                    .iter()
                    .filter_map(|&(tag, dim)| {
                        match (x.d_on(tag), y.d_on(tag), z.d_on(tag)) {
                            (Some(a), Some(b), Some(c)) => Some((tag, a + b + c, dim)),
                            _ => None,
                        }
                    })
                    .collect();
                out.push(TripleType {
                    family,
                    q_condition: q_condition.clone(),
                    x: x.label.clone(),
                    y: y.label.clone(),
                    z: z.label.clone(),
                    module_sums,
                    assumed: hx.condition_assumed
                        || hy.condition_assumed
                        || hz.condition_assumed,
                });
            }
        }
    }
    out
}

/// Every class triple (x, y, z) of orders (2, 3, 7) that exists over GF(q)
/// and passes Scott's bound on all modules in scope. Complete for F4, E6,
/// SE6 and the twisted E6 form; errors for E7/SE7/E8.
pub fn enumerate_admissible(
    family: GroupFamily,
    q: u64,
) -> Result<Vec<TripleType>, ScottError> {
    let modules = modules_for(family, q)?;
    let xs = lookup(family, q, 2)?;
    let ys = lookup(family, q, 3)?;
    let zs = lookup(family, q, 7)?;
    Ok(triples_from_hits(family, q, &modules, &xs, &ys, &zs))
}

/// Why an empty enumeration came out empty, reconstructed by re-running
/// relaxed variants of the check.
fn impossibility_reason(family: GroupFamily, q: u64) -> String {
    let (p, n) = prime_power(q).expect("caller verified q");
    let modules = modules_for(family, q).expect("caller verified family");
    let xs = lookup(family, q, 2).expect("caller verified inputs");
    let ys = lookup(family, q, 3).expect("caller verified inputs");
    let zs = lookup(family, q, 7).expect("caller verified inputs");

    // Relaxation 1: waive the existence conditions on the order-7 classes.
    // If triples appear, the blocker is a missing z-class, not dimensions.
    let want_unipotent_z = p == 7;
    let all_z: Vec<LookupHit> = all_records(family)
        .into_iter()
        .filter(|r| r.order == 7 && r.unipotent == want_unipotent_z)
        .map(|record| LookupHit { record, condition_assumed: true })
        .collect();
    let with_waived_z = triples_from_hits(family, q, &modules, &xs, &ys, &all_z);
    if !with_waived_z.is_empty() {
        let missing: BTreeSet<&str> =
            with_waived_z.iter().map(|t| t.z.as_str()).collect();
        let labels: Vec<&str> = missing.into_iter().collect();
        let mut reason = format!(
            "the only z-class{} passing the dimension bounds: {}, which do{} not exist over GF({q})",
            if labels.len() == 1 { "" } else { "es" },
            labels.join(", "),
            if labels.len() == 1 { "es" } else { "" },
        );
        if labels == ["7O"] && p == 2 {
            reason = format!(
                "the only z-class passing the dimension bounds is 7O, which in characteristic 2 exists only when 3 divides n (here q = 2^{n}, n = {n})"
            );
        }
        return reason;
    }

    // Relaxation 2: drop the minimal module. If triples appear, the
    // minimal-module budget is the contradiction.
    let l_only: Vec<(ModuleTag, u32)> = modules
        .iter()
        .copied()
        .filter(|(tag, _)| *tag == ModuleTag::L)
        .collect();
    if l_only.len() != modules.len() {
        let with_l_only = triples_from_hits(family, q, &l_only, &xs, &ys, &zs);
        if !with_l_only.is_empty() {
            let (m_tag, m_dim) = modules
                .iter()
                .copied()
                .find(|(tag, _)| *tag != ModuleTag::L)
                .expect("some non-adjoint module was dropped");
            let min_dz = zs
                .iter()
                .filter_map(|h| h.record.d_on(m_tag))
                .min()
                .unwrap_or(0);
            let max_budget = with_l_only
                .iter()
                .filter_map(|t| {
                    let dx = xs
                        .iter()
                        .find(|h| h.record.label == t.x)
                        .and_then(|h| h.record.d_on(m_tag))?;
                    let dy = ys
                        .iter()
                        .find(|h| h.record.label == t.y)
                        .and_then(|h| h.record.d_on(m_tag))?;
                    Some(m_dim.saturating_sub(dx + dy))
                })
                .max()
                .unwrap_or(0);
            return format!(
                "every order-7 class has d_z^{} >= {}, but after the adjoint-module filter the {}-dimensional module leaves a budget of at most {} for d_z^{}",
                m_tag.name(),
                min_dz,
                m_dim,
                max_budget,
                m_tag.name(),
            );
        }
    }

    "no class triple of orders (2, 3, 7) satisfies the fixed-space dimension bounds".to_string()
}

/// Printed per-characteristic caps (d_x^L, d_y^L, d_z^L) for the partial
/// families.
fn corollary_bounds(family: GroupFamily, p: u32) -> (u32, u32, u32) {
    match (family.table_family(), p) {
        (crate::classdata::TableFamily::E7, 2) => (71, 44, 20),
        (crate::classdata::TableFamily::E7, 3) => (69, 63, 25),
        (crate::classdata::TableFamily::E7, _) => (71, 51, 27),
        (crate::classdata::TableFamily::E8, 2) => (132, 84, 40),
        (crate::classdata::TableFamily::E8, 3) => (128, 92, 44),
        (crate::classdata::TableFamily::E8, _) => (132, 92, 48),
        _ => unreachable!("corollary bounds exist only for E7/E8"),
    }
}

static E7_CENSUS: OnceLock<TorusScan> = OnceLock::new();
static E8_CENSUS: OnceLock<TorusScan> = OnceLock::new();

/// Order-7 torus census for the partial families (cached; the E8 scan
/// walks 7^8 exponent vectors).
pub fn order7_census(family: GroupFamily) -> &'static TorusScan {
    match family.table_family() {
        crate::classdata::TableFamily::E7 => E7_CENSUS
            .get_or_init(|| torus_fixed_dims(crate::rootsys::Family::E7, 7, true)),
        crate::classdata::TableFamily::E8 => E8_CENSUS
            .get_or_init(|| torus_fixed_dims(crate::rootsys::Family::E8, 7, false)),
        _ => panic!("census summaries are kept only for E7/E8"),
    }
}

/// Bound-constrained candidate lists for E7, SE7 and E8.
fn slot_report(family: GroupFamily, q: u64) -> Result<SlotReport, ScottError> {
    let (p, _n) = prime_power(q).ok_or(ClassDataError::BadQ(q))?;
    let bounds = corollary_bounds(family, p);
    let mut notes = Vec::new();

    let recs_of = |order: u32, cap: u32| -> Vec<&'static ClassRecord> {
        let want_unipotent = p == order;
        all_records(family)
            .into_iter()
            .filter(|r| r.order == order && r.unipotent == want_unipotent && r.d_l <= cap)
            .collect()
    };

    let mut x_recs = recs_of(2, bounds.0);
    let mut y_recs = recs_of(3, bounds.1);

    if family == GroupFamily::SE7 && p != 2 {
        // In the simply connected form the involution classes are exactly
        // the rows carrying a d^M value (the remaining adjoint-form class
        // lifts to an element of order 4 there).
        x_recs.retain(|r| r.d_m.is_some());
        notes.push(
            "simply connected form: involution candidates restricted to the classes with a d^M entry"
                .to_string(),
        );
    }
    if family == GroupFamily::SE7 && p == 2 {
        notes.push("q even: the simply connected and adjoint forms coincide".to_string());
    }

    // z-slot: labelled unipotent rows in characteristic 7, torus census
    // summary otherwise (no labelled semisimple order-7 rows exist).
    let mut z_recs: Vec<&'static ClassRecord> = Vec::new();
    let mut z_census: Vec<(Option<u32>, u32)> = Vec::new();
    if p == 7 {
        z_recs = recs_of(7, bounds.2);
    } else {
        let scan = order7_census(family);
        let mut pairs: BTreeSet<(Option<u32>, u32)> = BTreeSet::new();
        for row in &scan.rows {
            if row.d_adjoint as u32 <= bounds.2 {
                pairs.insert((row.d_minimal.map(|d| d as u32), row.d_adjoint as u32));
            }
        }
        z_census = pairs.into_iter().collect();
        notes.push(
            "order-7 z-candidates are semisimple; no labelled class rows exist, so attained (d^M, d^L) torus pairs are reported instead"
                .to_string(),
        );
    }

    // Sharpen with iterated fixed-space budgets where a second module or
    // tighter floors apply.
    let min_dl = |recs: &[&ClassRecord]| recs.iter().map(|r| r.d_l).min();

    if family == GroupFamily::SE7 && p != 2 {
        // Iterate the adjoint budget to a fixpoint over the restricted
        // candidate lists.
        let dim = 133;
        loop {
            let z_floor = if p == 7 {
                min_dl(&z_recs)
            } else {
                z_census.iter().map(|&(_, dl)| dl).min()
            };
            let (Some(xf), Some(yf), Some(zf)) = (min_dl(&x_recs), min_dl(&y_recs), z_floor)
            else {
                break;
            };
            let before = (x_recs.len(), y_recs.len(), z_recs.len(), z_census.len());
            x_recs.retain(|r| r.d_l + yf + zf <= dim);
            y_recs.retain(|r| xf + r.d_l + zf <= dim);
            if let (Some(xf2), Some(yf2)) = (min_dl(&x_recs), min_dl(&y_recs)) {
                z_recs.retain(|r| xf2 + yf2 + r.d_l <= dim);
                z_census.retain(|&(_, dl)| xf2 + yf2 + dl <= dim);
            }
            if (x_recs.len(), y_recs.len(), z_recs.len(), z_census.len()) == before {
                break;
            }
        }
        if let (Some(xf), Some(yf)) = (min_dl(&x_recs), min_dl(&y_recs)) {
            let attained = if p == 7 {
                z_recs.iter().map(|r| r.d_l.to_string()).collect::<Vec<_>>()
            } else {
                z_census.iter().map(|&(_, dl)| dl.to_string()).collect::<Vec<_>>()
            };
            notes.push(format!(
                "adjoint budget: d_z^L <= {}; attained values: {}",
                dim - xf - yf,
                attained.join(", ")
            ));
        }
    }

    if family.table_family() == crate::classdata::TableFamily::E7 && p == 2 {
        // q even: the 56-dimensional module is a module for the group, so
        // its budget filters too. Iterate to a fixpoint.
        let dim_m = 56u32;
        loop {
            let min_m = |recs: &[&ClassRecord]| recs.iter().filter_map(|r| r.d_m).min();
            let zc_min = z_census.iter().filter_map(|&(dm, _)| dm).min();
            let (Some(xm), Some(ym), Some(zm)) = (min_m(&x_recs), min_m(&y_recs), zc_min)
            else {
                break;
            };
            let before = (x_recs.len(), y_recs.len(), z_census.len());
            x_recs.retain(|r| r.d_m.is_none_or(|d| d + ym + zm <= dim_m));
            y_recs.retain(|r| r.d_m.is_none_or(|d| xm + d + zm <= dim_m));
            z_census.retain(|&(dm, _)| dm.is_none_or(|d| xm + ym + d <= dim_m));
            if (x_recs.len(), y_recs.len(), z_census.len()) == before {
                break;
            }
        }
        notes.push(
            "q even: candidates additionally filtered through the 56-dimensional module's budget"
                .to_string(),
        );
    }

    let dedup = |recs: &[&ClassRecord]| -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in recs {
            if !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    };

    Ok(SlotReport {
        family,
        q_condition: q_condition_label(family, q),
        bounds,
        x: dedup(&x_recs),
        y: dedup(&y_recs),
        z: dedup(&z_recs),
        z_census,
        notes,
    })
}

/// The full admissibility verdict at (family, q): the enumerated triples,
/// an impossibility statement with its reason, or candidate slots for the
/// partial families.
pub fn verdict(family: GroupFamily, q: u64) -> Result<Verdict, ScottError> {
    match family {
        GroupFamily::E7 | GroupFamily::SE7 | GroupFamily::E8 => {
            Ok(Verdict::Slots(slot_report(family, q)?))
        }
        _ => {
            let triples = enumerate_admissible(family, q)?;
            if triples.is_empty() {
                Ok(Verdict::Impossible {
                    family,
                    q,
                    q_condition: q_condition_label(family, q),
                    reason: impossibility_reason(family, q),
                })
            } else {
                Ok(Verdict::Triples(triples))
            }
        }
    }
}

/// Renders a verdict as a human-readable report.
pub fn render_verdict(v: &Verdict) -> String {
    let mut out = String::new();
    match v {
        Verdict::Triples(ts) => {
            if let Some(first) = ts.first() {
                out.push_str(&format!(
                    "{}({}) admissible Hurwitz class triples:\n",
                    first.family.name(),
                    first.q_condition
                ));
                out.push_str(&format!(
                    "{:<12} {:<12} {:<12} {}\n",
                    "x", "y", "z", "module sums"
                ));
                for t in ts {
                    let sums = t
                        .module_sums
                        .iter()
                        .map(|(tag, sum, dim)| format!("{}: {}/{}", tag.name(), sum, dim))
                        .collect::<Vec<_>>()
                        .join("  ");
                    let mark = if t.assumed { " (existence assumed)" } else { "" };
                    out.push_str(&format!(
                        "{:<12} {:<12} {:<12} {}{}\n",
                        t.x, t.y, t.z, sums, mark
                    ));
                }
            }
        }
        Verdict::Impossible { family, q, q_condition, reason } => {
            out.push_str(&format!(
                "{}({}) [q = {}]: not a Hurwitz group — {}\n",
                family.name(),
                q_condition,
                q,
                reason
            ));
        }
        Verdict::Slots(s) => {
            out.push_str(&format!(
                "{}({}) candidate classes (bounds on d^L: x <= {}, y <= {}, z <= {}):\n",
                s.family.name(),
                s.q_condition,
                s.bounds.0,
                s.bounds.1,
                s.bounds.2
            ));
            out.push_str(&format!("  x: {}\n", s.x.join(", ")));
            out.push_str(&format!("  y: {}\n", s.y.join(", ")));
            if !s.z.is_empty() {
                out.push_str(&format!("  z: {}\n", s.z.join(", ")));
            }
            if !s.z_census.is_empty() {
                let pairs = s
                    .z_census
                    .iter()
                    .map(|(dm, dl)| match dm {
                        Some(dm) => format!("({dm}, {dl})"),
                        None => format!("(-, {dl})"),
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push_str(&format!("  z (d^M, d^L) attained: {pairs}\n"));
            }
            for n in &s.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label_triples(ts: &[TripleType]) -> Vec<(String, String, String)> {
        ts.iter()
            .map(|t| (t.x.clone(), t.y.clone(), t.z.clone()))
            .collect()
    }

    fn expect(
        family: GroupFamily,
        q: u64,
        want: &[(&str, &str, &str)],
    ) -> Vec<TripleType> {
        let got = enumerate_admissible(family, q).unwrap();
        let got_labels = label_triples(&got);
        let want_labels: Vec<(String, String, String)> = want
            .iter()
            .map(|(x, y, z)| (x.to_string(), y.to_string(), z.to_string()))
            .collect();
        assert_eq!(
            got_labels, want_labels,
            "admissible set mismatch for {}({})",
            family.name(),
            q
        );
        got
    }

    #[test]
    fn f4_characteristic_two_cases() {
        // 7O exists over GF(2^n) exactly when 3 | n.
        expect(GroupFamily::F4, 8, &[("A1+~A1", "3C", "7O")]);
        expect(GroupFamily::F4, 64, &[("A1+~A1", "3C", "7O")]);
        expect(GroupFamily::F4, 512, &[("A1+~A1", "3C", "7O")]);
        expect(GroupFamily::F4, 2, &[]);
        expect(GroupFamily::F4, 4, &[]);
        expect(GroupFamily::F4, 16, &[]);
        expect(GroupFamily::F4, 32, &[]);
    }

    #[test]
    fn f4_characteristic_three_block() {
        let want: &[(&str, &str, &str)] = &[
            ("2A", "A2+~A1", "7N"),
            ("2A", "~A2+A1", "7N"),
            ("2A", "~A2+A1", "7O"),
        ];
        expect(GroupFamily::F4, 3, want);
        expect(GroupFamily::F4, 27, want);
    }

    #[test]
    fn f4_characteristic_seven_case() {
        expect(GroupFamily::F4, 7, &[("2A", "3C", "C3"), ("2A", "3C", "F4(a2)")]);
    }

    #[test]
    fn f4_generic_characteristic_case() {
        let want: &[(&str, &str, &str)] = &[
            ("2A", "3C", "7L"),
            ("2A", "3C", "7N"),
            ("2A", "3C", "7O"),
        ];
        let ts = expect(GroupFamily::F4, 5, want);
        expect(GroupFamily::F4, 13, want);
        // The F4 semisimple z-rows rest on unstated existence cells.
        assert!(ts.iter().all(|t| t.assumed));
    }

    #[test]
    fn e6_cases_match_the_contract_table() {
        expect(GroupFamily::E6, 2, &[("3A1", "3C", "7N")]);
        expect(
            GroupFamily::E6,
            8,
            &[("3A1", "3C", "7M"), ("3A1", "3C", "7N"), ("3A1", "3C", "7O")],
        );
        expect(GroupFamily::E6, 3, &[("2A", "2A2+A1", "7N")]);
        expect(
            GroupFamily::E6,
            7,
            &[
                ("2A", "3C", "A4+A1"),
                ("2A", "3C", "A5"),
                ("2A", "3C", "D5(a1)"),
                ("2A", "3C", "E6(a3)"),
            ],
        );
        expect(
            GroupFamily::E6,
            43,
            &[
                ("2A", "3C", "7K"),
                ("2A", "3C", "7L"),
                ("2A", "3C", "7M"),
                ("2A", "3C", "7N"),
                ("2A", "3C", "7O"),
            ],
        );
    }

    #[test]
    fn se6_cases_match_the_contract_table() {
        expect(
            GroupFamily::SE6,
            8,
            &[("3A1", "3C", "7M"), ("3A1", "3C", "7N"), ("3A1", "3C", "7O")],
        );
        expect(GroupFamily::SE6, 3, &[("2A", "2A2+A1", "7N")]);
        expect(
            GroupFamily::SE6,
            43,
            &[("2A", "3C", "7K"), ("2A", "3C", "7M"), ("2A", "3C", "7N")],
        );
        expect(GroupFamily::SE6, 7, &[]);
    }

    #[test]
    fn twisted_e6_rows_are_computed_from_twisted_conditions() {
        // No printed reference rows exist for the twisted form; these
        // outputs are locked in as computed values. 13 ≡ -1 (mod 7) and
        // 13 ≡ 1 (mod 3), so the twisted form at 13 has 7K (mirrored from
        // q ≡ 1 (7)) and is simply connected (gcd(3, 14) = 1), pulling in
        // the 27-dimensional module.
        expect(GroupFamily::TwistedE6, 7, &[]);
        expect(
            GroupFamily::TwistedE6,
            13,
            &[("2A", "3C", "7K"), ("2A", "3C", "7M"), ("2A", "3C", "7N")],
        );
        // 2 ≡ 2 (mod 7): twisted 7M (needs q ≡ -1 ≡ 6) absent; 7N stays.
        expect(GroupFamily::TwistedE6, 2, &[("3A1", "3C", "7N")]);
    }

    #[test]
    fn impossibility_verdicts_carry_reasons() {
        for q in [2u64, 4] {
            match verdict(GroupFamily::F4, q).unwrap() {
                Verdict::Impossible { reason, q_condition, .. } => {
                    assert!(reason.contains("7O"), "F4({q}) reason: {reason}");
                    assert!(reason.contains("3 divides n"), "F4({q}) reason: {reason}");
                    assert!(q_condition.starts_with("2^(3n-"), "F4({q}) case: {q_condition}");
                }
                other => panic!("F4({q}) should be impossible, got {other:?}"),
            }
        }
        for family in [GroupFamily::SE6, GroupFamily::TwistedE6] {
            match verdict(family, 7).unwrap() {
                Verdict::Impossible { reason, .. } => {
                    assert!(
                        reason.contains("d_z^M"),
                        "{} reason: {reason}",
                        family.name()
                    );
                    assert!(reason.contains("budget"), "{} reason: {reason}", family.name());
                }
                other => panic!("{}(7) should be impossible, got {other:?}", family.name()),
            }
        }
    }

    #[test]
    fn possible_cases_return_triples() {
        assert!(matches!(
            verdict(GroupFamily::F4, 3).unwrap(),
            Verdict::Triples(ts) if ts.len() == 3
        ));
        assert!(matches!(
            verdict(GroupFamily::E6, 2).unwrap(),
            Verdict::Triples(ts) if ts.len() == 1
        ));
    }

    #[test]
    fn lemma_projections_hold_over_all_enumerated_cases() {
        // Projections of the enumerated sets reproduce the x- and y-class
        // restrictions stated for the full-enumeration families.
        let f4_qs = [2u64, 4, 8, 64, 512, 3, 27, 7, 49, 5, 13, 11];
        for q in f4_qs {
            for t in enumerate_admissible(GroupFamily::F4, q).unwrap() {
                assert!(
                    ["A1+~A1", "2A"].contains(&t.x.as_str()),
                    "F4({q}) x = {}",
                    t.x
                );
                assert!(
                    ["A2+~A1", "~A2+A1", "3C"].contains(&t.y.as_str()),
                    "F4({q}) y = {}",
                    t.y
                );
            }
        }
        let e6_qs = [2u64, 4, 8, 3, 27, 7, 49, 5, 13, 43];
        for family in [GroupFamily::E6, GroupFamily::SE6, GroupFamily::TwistedE6] {
            for q in e6_qs {
                for t in enumerate_admissible(family, q).unwrap() {
                    assert!(
                        ["3A1", "2A"].contains(&t.x.as_str()),
                        "{}({q}) x = {}",
                        family.name(),
                        t.x
                    );
                    assert!(
                        ["2A2+A1", "3C"].contains(&t.y.as_str()),
                        "{}({q}) y = {}",
                        family.name(),
                        t.y
                    );
                }
            }
        }
    }

    #[test]
    fn dropping_a_module_never_shrinks_the_admissible_set() {
        for (family, q) in [
            (GroupFamily::F4, 3u64),
            (GroupFamily::F4, 5),
            (GroupFamily::SE6, 43),
            (GroupFamily::SE6, 7),
            (GroupFamily::TwistedE6, 13),
        ] {
            let modules = modules_for(family, q).unwrap();
            let xs = lookup(family, q, 2).unwrap();
            let ys = lookup(family, q, 3).unwrap();
            let zs = lookup(family, q, 7).unwrap();
            let full = triples_from_hits(family, q, &modules, &xs, &ys, &zs);
            for drop_idx in 0..modules.len() {
                let subset: Vec<_> = modules
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(i, _)| i != drop_idx)
                    .map(|(_, m)| m)
                    .collect();
                let relaxed = triples_from_hits(family, q, &subset, &xs, &ys, &zs);
                for t in &full {
                    assert!(
                        relaxed
                            .iter()
                            .any(|r| (r.x == t.x) && (r.y == t.y) && (r.z == t.z)),
                        "triple {:?} lost after dropping module {:?}",
                        t.machine_line(),
                        modules[drop_idx]
                    );
                }
                assert!(relaxed.len() >= full.len());
            }
        }
    }

    #[test]
    fn machine_lines_are_stable() {
        let ts = enumerate_admissible(GroupFamily::F4, 3).unwrap();
        let lines: Vec<String> = ts.iter().map(|t| t.machine_line()).collect();
        assert_eq!(
            lines,
            [
                "F4|3^n|2A|A2+~A1|7N",
                "F4|3^n|2A|~A2+A1|7N",
                "F4|3^n|2A|~A2+A1|7O"
            ]
        );
    }

    #[test]
    fn e7_slots_in_even_characteristic_pin_x() {
        let Verdict::Slots(s) = verdict(GroupFamily::E7, 2).unwrap() else {
            panic!("E7 must report slots");
        };
        assert_eq!(s.bounds, (71, 44, 20));
        assert_eq!(s.x, ["4A1"]);
        assert_eq!(s.y, ["A2A5"]);
        assert!(s.z.is_empty());
        assert_eq!(s.z_census, [(Some(8), 19)]);
    }

    #[test]
    fn e7_slots_in_odd_characteristics() {
        let Verdict::Slots(s) = verdict(GroupFamily::E7, 3).unwrap() else {
            panic!("E7 must report slots");
        };
        assert_eq!(s.bounds, (69, 63, 25));
        assert_eq!(s.x, ["A1D6", "eA7"]);
        assert_eq!(s.y, ["A2+2A1", "2A2", "A2+3A1", "2A2+A1"]);
        assert_eq!(
            s.z_census,
            [
                (Some(6), 21),
                (Some(6), 25),
                (Some(8), 19),
                (Some(8), 21),
                (Some(12), 23)
            ]
        );

        let Verdict::Slots(s) = verdict(GroupFamily::E7, 5).unwrap() else {
            panic!("E7 must report slots");
        };
        assert_eq!(s.bounds, (71, 51, 27));
        assert_eq!(s.x, ["A1D6", "eA7"]);
        assert_eq!(s.y, ["A6T1", "D5A1T1", "A2A5"]);
        assert!(s.z_census.iter().all(|&(_, dl)| dl <= 27));
        assert!(s.z_census.contains(&(Some(8), 19)));

        let Verdict::Slots(s) = verdict(GroupFamily::E7, 7).unwrap() else {
            panic!("E7 must report slots");
        };
        assert_eq!(s.x, ["A1D6", "eA7"]);
        // All nine unipotent z-rows pass the cap d_z^L <= 27.
        assert_eq!(s.z.len(), 9);
        assert!(s.z_census.is_empty());
    }

    #[test]
    fn se7_slots_recover_the_two_involution_classes_and_forced_y() {
        let Verdict::Slots(s) = verdict(GroupFamily::SE7, 3).unwrap() else {
            panic!("SE7 must report slots");
        };
        assert_eq!(s.x, ["A1D6"]);
        assert_eq!(s.y, ["2A2+A1"]);
        // Budget pins d_z^L to exactly 19 here: 133 - 69 - 45.
        assert_eq!(s.z_census, [(Some(8), 19)]);

        let Verdict::Slots(s) = verdict(GroupFamily::SE7, 5).unwrap() else {
            panic!("SE7 must report slots");
        };
        assert_eq!(s.x, ["A1D6"]);
        assert_eq!(s.y, ["A2A5"]);
        // Budget window 133 - 69 - 43 = 21.
        assert_eq!(s.z_census, [(Some(6), 21), (Some(8), 19), (Some(8), 21)]);

        // Even characteristic: coincides with the adjoint-form report.
        let Verdict::Slots(s) = verdict(GroupFamily::SE7, 2).unwrap() else {
            panic!("SE7 must report slots");
        };
        assert_eq!(s.x, ["4A1"]);
    }

    #[test]
    fn e8_slots_in_characteristic_seven_use_unipotent_rows() {
        let Verdict::Slots(s) = verdict(GroupFamily::E8, 7).unwrap() else {
            panic!("E8 must report slots");
        };
        assert_eq!(s.bounds, (132, 92, 48));
        assert_eq!(s.x, ["D8"]);
        assert_eq!(s.y, ["D7T1", "E6T2", "A8"]);
        assert_eq!(s.z.len(), 9);
        assert!(s.z_census.is_empty());
    }

    #[test]
    fn e8_slots_in_characteristics_two_and_three_label_sides() {
        // z-census paths for E8 walk 7^8 torus vectors; exercised in the
        // acceptance suite. Here only the labelled sides are checked via
        // the record filters.
        let (p2, p3) = (2u32, 3u32);
        let b2 = corollary_bounds(GroupFamily::E8, p2);
        let b3 = corollary_bounds(GroupFamily::E8, p3);
        let xs2: Vec<&str> = all_records(GroupFamily::E8)
            .into_iter()
            .filter(|r| r.order == 2 && r.unipotent && r.d_l <= b2.0)
            .map(|r| r.label.as_str())
            .collect();
        assert_eq!(xs2, ["4A1"]);
        let ys2: Vec<&str> = all_records(GroupFamily::E8)
            .into_iter()
            .filter(|r| r.order == 3 && !r.unipotent && r.d_l <= b2.1)
            .map(|r| r.label.as_str())
            .collect();
        assert_eq!(ys2, ["A8"]);
        let ys3: Vec<&str> = all_records(GroupFamily::E8)
            .into_iter()
            .filter(|r| r.order == 3 && r.unipotent && r.d_l <= b3.1)
            .map(|r| r.label.as_str())
            .collect();
        assert_eq!(ys3, ["2A2", "2A2+A1", "2A2+2A1"]);
    }

    #[test]
    fn enumerate_refuses_partial_families() {
        assert!(matches!(
            enumerate_admissible(GroupFamily::E7, 2),
            Err(ScottError::SlotsOnly(_))
        ));
        assert!(matches!(
            enumerate_admissible(GroupFamily::E8, 5),
            Err(ScottError::SlotsOnly(_))
        ));
    }

    #[test]
    fn renderer_mentions_the_essentials() {
        let v = verdict(GroupFamily::F4, 4).unwrap();
        let text = render_verdict(&v);
        assert!(text.contains("not a Hurwitz group"));
        assert!(text.contains("7O"));
        let v = verdict(GroupFamily::F4, 3).unwrap();
        let text = render_verdict(&v);
        assert!(text.contains("2A"));
        assert!(text.contains("~A2+A1"));
        assert!(text.contains("M': "));
    }
}
