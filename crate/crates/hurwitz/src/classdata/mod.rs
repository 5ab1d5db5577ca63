//! Encoded conjugacy-class tables for the exceptional families.
//!
//! The tables live in `classes.dat`, one record per line, guarded by a
//! SHA-256 footer so the numbers cannot drift silently. Each record gives,
//! for one conjugacy class of elements of order 2, 3 or 7: the fixed-space
//! dimensions on the minimal and adjoint modules, the existence condition
//! on q, character values where known, Jordan partitions for the unipotent
//! classes the search pipeline fingerprints, and the correction needed on
//! the 25-dimensional F4 module in characteristic 3.
//!
//! [`lookup`] filters records by family, field size and element order;
//! [`classify`] inverts measured fixed-space data back to class labels.

use crate::util::sha256_hex;
use std::fmt;
use std::sync::OnceLock;

/// The groups the toolkit reasons about. `SE6`, `TwistedE6` and `SE7`
/// share class data with their adjoint relatives; the distinction matters
/// for which modules exist (and, for the twisted form, how congruence
/// conditions on q read).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupFamily {
    F4,
    E6,
    SE6,
    /// The twisted form 2E6(q).
    TwistedE6,
    E7,
    SE7,
    E8,
}

impl GroupFamily {
    pub const ALL: [GroupFamily; 7] = [
        GroupFamily::F4,
        GroupFamily::E6,
        GroupFamily::SE6,
        GroupFamily::TwistedE6,
        GroupFamily::E7,
        GroupFamily::SE7,
        GroupFamily::E8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupFamily::F4 => "F4",
            GroupFamily::E6 => "E6",
            GroupFamily::SE6 => "SE6",
            GroupFamily::TwistedE6 => "2E6",
            GroupFamily::E7 => "E7",
            GroupFamily::SE7 => "SE7",
            GroupFamily::E8 => "E8",
        }
    }

    pub fn parse(s: &str) -> Option<GroupFamily> {
        GroupFamily::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }

    /// The table whose records describe this family's classes.
    pub fn table_family(self) -> TableFamily {
        match self {
            GroupFamily::F4 => TableFamily::F4,
            GroupFamily::E6 | GroupFamily::SE6 | GroupFamily::TwistedE6 => TableFamily::E6,
            GroupFamily::E7 | GroupFamily::SE7 => TableFamily::E7,
            GroupFamily::E8 => TableFamily::E8,
        }
    }

    /// The underlying (untwisted) Lie family, for root-system work.
    pub fn lie_family(self) -> crate::rootsys::Family {
        match self {
            GroupFamily::F4 => crate::rootsys::Family::F4,
            GroupFamily::E6 | GroupFamily::SE6 | GroupFamily::TwistedE6 => {
                crate::rootsys::Family::E6
            }
            GroupFamily::E7 | GroupFamily::SE7 => crate::rootsys::Family::E7,
            GroupFamily::E8 => crate::rootsys::Family::E8,
        }
    }

    /// Whether congruence conditions on q must be mirrored (q ↦ −q).
    pub fn is_twisted(self) -> bool {
        matches!(self, GroupFamily::TwistedE6)
    }

    /// Full dimensions of the minimal and adjoint modules.
    pub fn module_dims(self) -> (Option<u32>, u32) {
        self.table_family().module_dims()
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The four base tables records are filed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableFamily {
    F4,
    E6,
    E7,
    E8,
}

impl TableFamily {
    fn parse(s: &str) -> Option<TableFamily> {
        match s {
            "F4" => Some(TableFamily::F4),
            "E6" => Some(TableFamily::E6),
            "E7" => Some(TableFamily::E7),
            "E8" => Some(TableFamily::E8),
            _ => None,
        }
    }

    /// Full dimensions (minimal, adjoint) of the modules the d-values in
    /// the table refer to.
    pub fn module_dims(self) -> (Option<u32>, u32) {
        match self {
            TableFamily::F4 => (Some(26), 52),
            TableFamily::E6 => (Some(27), 78),
            TableFamily::E7 => (Some(56), 133),
            TableFamily::E8 => (None, 248),
        }
    }
}

/// Dimensions of the smallest non-trivial irreducible subquotients of the
/// minimal and adjoint modules in characteristic p.
pub fn irreducible_quotient_dims(family: GroupFamily, p: u32) -> (Option<u32>, u32) {
    match family.table_family() {
        TableFamily::F4 => (
            Some(if p == 3 { 25 } else { 26 }),
            if p == 2 { 26 } else { 52 },
        ),
        TableFamily::E6 => (Some(27), if p == 3 { 77 } else { 78 }),
        TableFamily::E7 => (Some(56), if p == 2 { 132 } else { 133 }),
        TableFamily::E8 => (None, 248),
    }
}

/// The modules Scott-style dimension counting runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleTag {
    /// The full minimal module (26 / 27 / 56).
    M,
    /// The 25-dimensional irreducible piece of the F4 minimal module in
    /// characteristic 3; d-values are corrected by each record's `mshift`.
    MPrime,
    /// The adjoint module.
    L,
}

impl ModuleTag {
    pub fn name(self) -> &'static str {
        match self {
            ModuleTag::M => "M",
            ModuleTag::MPrime => "M'",
            ModuleTag::L => "L",
        }
    }
}

/// Existence condition of a class as a function of q = p^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Stated to exist for all q.
    All,
    /// The source table leaves the cell blank; treated as all q, flagged.
    Unstated,
    /// q ≡ r (mod modulus) for one of the listed residues.
    QCong { modulus: u32, residues: Vec<u32> },
    /// Unstated in general, but in characteristic 2 the class exists
    /// exactly when 3 divides n.
    UnstatedExceptCharTwoCube,
}

impl Condition {
    fn parse(s: &str) -> Option<Condition> {
        match s {
            "all" => Some(Condition::All),
            "?" => Some(Condition::Unstated),
            "?;p=2:n=0(3)" => Some(Condition::UnstatedExceptCharTwoCube),
            "q=1(7)" => Some(Condition::QCong { modulus: 7, residues: vec![1] }),
            "q=+-1(7)" => Some(Condition::QCong { modulus: 7, residues: vec![1, 6] }),
            "q=1(3)" => Some(Condition::QCong { modulus: 3, residues: vec![1] }),
            _ => None,
        }
    }

    /// Evaluates the condition at q = p^n. Returns `(holds, assumed)`
    /// where `assumed` marks conclusions resting on an unstated cell.
    /// For twisted groups congruences are mirrored: q ≡ r becomes q ≡ −r.
    pub fn eval(&self, p: u32, n: u32, q: u64, twisted: bool) -> (bool, bool) {
        match self {
            Condition::All => (true, false),
            Condition::Unstated => (true, true),
            Condition::QCong { modulus, residues } => {
                let r = (q % *modulus as u64) as u32;
                let hit = residues.iter().any(|&want| {
                    let want = if twisted { (*modulus - want) % *modulus } else { want };
                    r == want
                });
                (hit, false)
            }
            Condition::UnstatedExceptCharTwoCube => {
                if p == 2 {
                    (n % 3 == 0, false)
                } else {
                    (true, true)
                }
            }
        }
    }
}

/// One line of the class tables.
#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub table_family: TableFamily,
    pub label: String,
    pub order: u32,
    pub unipotent: bool,
    /// Fixed-space dimension on the full minimal module, where the table
    /// states it.
    pub d_m: Option<u32>,
    /// Fixed-space dimension on the adjoint module.
    pub d_l: u32,
    pub cond: Condition,
    pub chi_m: Option<i32>,
    pub chi_l: Option<i32>,
    /// Jordan partition on the full minimal module (unipotent classes the
    /// search pipeline fingerprints; derived, cross-checked in tests).
    pub part_m: Option<Vec<u32>>,
    /// Jordan partition on the adjoint module.
    pub part_l: Option<Vec<u32>>,
    /// dM' = dM − mshift on the 25-dimensional F4 module in
    /// characteristic 3; `None` where not stated.
    pub m_shift: Option<u32>,
}

impl ClassRecord {
    /// The record's fixed-space dimension on the given module, if known.
    pub fn d_on(&self, tag: ModuleTag) -> Option<u32> {
        match tag {
            ModuleTag::M => self.d_m,
            ModuleTag::MPrime => match (self.d_m, self.m_shift) {
                (Some(d), Some(s)) => Some(d - s),
                _ => None,
            },
            ModuleTag::L => Some(self.d_l),
        }
    }
}

/// A record admitted by [`lookup`] at a specific q.
#[derive(Clone, Debug)]
pub struct LookupHit {
    pub record: &'static ClassRecord,
    /// True when existence rests on an unstated table cell.
    pub condition_assumed: bool,
}

/// Measured data for one module: the dimension the measurement was taken
/// on, the fixed-space dimension found there, and optionally the Jordan
/// partition (unipotent elements on the full module).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMeasurement {
    pub dim: u32,
    pub d: u32,
    pub partition: Option<Vec<u32>>,
}

/// What the search pipeline measures about a group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: u32,
    pub minimal: Option<ModuleMeasurement>,
    pub adjoint: Option<ModuleMeasurement>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ClassDataError {
    #[error("unsupported element order {0} (only 2, 3 and 7 are tabulated)")]
    BadOrder(u32),
    #[error("q = {0} is not a prime power")]
    BadQ(u64),
    #[error("fingerprint dimension {dim} does not match any module of {family} (expected {expected})")]
    BadFingerprintDim { family: &'static str, dim: u32, expected: String },
}

struct TableData {
    records: Vec<ClassRecord>,
    /// Declared fingerprint collisions: (family, order, label, label).
    collisions: Vec<(TableFamily, u32, String, String)>,
}

static TABLE: OnceLock<TableData> = OnceLock::new();

fn table() -> &'static TableData {
    TABLE.get_or_init(|| {
        parse_table(include_str!("classes.dat")).expect("embedded class table is invalid")
    })
}

/// All records of the base table serving `family` (no q filtering).
pub fn all_records(family: GroupFamily) -> Vec<&'static ClassRecord> {
    let tf = family.table_family();
    table().records.iter().filter(|r| r.table_family == tf).collect()
}

/// Splits q into (p, n) with q = p^n, p prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut m = q;
    let mut p = 0u64;
    for cand in 2..=q {
        if cand * cand > m {
            break;
        }
        if m % cand == 0 {
            p = cand;
            break;
        }
    }
    if p == 0 {
        p = m; // q itself is prime
    }
    let mut n = 0u32;
    while m % p == 0 {
        m /= p;
        n += 1;
    }
    if m == 1 {
        Some((u32::try_from(p).ok()?, n))
    } else {
        None
    }
}

/// Records of the right order and type for elements of GF(q)-groups:
/// unipotent classes in the matching characteristic, semisimple otherwise.
/// No condition filtering.
fn candidate_records(
    family: GroupFamily,
    q: u64,
    order: u32,
) -> Result<(Vec<&'static ClassRecord>, u32, u32), ClassDataError> {
    if !matches!(order, 2 | 3 | 7) {
        return Err(ClassDataError::BadOrder(order));
    }
    let (p, n) = prime_power(q).ok_or(ClassDataError::BadQ(q))?;
    let want_unipotent = p == order;
    let tf = family.table_family();
    let recs = table()
        .records
        .iter()
        .filter(|r| r.table_family == tf && r.order == order && r.unipotent == want_unipotent)
        .collect();
    Ok((recs, p, n))
}

/// The classes of the given order that exist in `family` over GF(q):
/// unipotent classes in the matching characteristic, semisimple classes
/// otherwise, both subject to each record's congruence condition (mirrored
/// for the twisted form).
pub fn lookup(
    family: GroupFamily,
    q: u64,
    order: u32,
) -> Result<Vec<LookupHit>, ClassDataError> {
    let (recs, p, n) = candidate_records(family, q, order)?;
    let mut hits = Vec::new();
    for rec in recs {
        let (holds, assumed) = rec.cond.eval(p, n, q, family.is_twisted());
        if holds {
            hits.push(LookupHit { record: rec, condition_assumed: assumed });
        }
    }
    Ok(hits)
}

/// Checks one measurement against a record's stored value for that module.
/// `full_dim` is the table's module dimension. A measurement on `full_dim`
/// compares directly; one on `full_dim − 1` (the irreducible piece of a
/// reducible module) compares with the record's correction where stated,
/// and accepts a drop of 0 or 1 where not. Partition data is compared only
/// on the full module, where the stored partitions live.
fn measurement_consistent(
    meas: &ModuleMeasurement,
    stored_d: Option<u32>,
    stored_part: Option<&Vec<u32>>,
    shift: Option<u32>,
    full_dim: u32,
    family: &'static str,
) -> Result<bool, ClassDataError> {
    let Some(d) = stored_d else {
        return Ok(true); // nothing stored: cannot refute
    };
    if meas.dim == full_dim {
        if meas.d != d {
            return Ok(false);
        }
        if let (Some(p_meas), Some(p_stored)) = (&meas.partition, stored_part) {
            if p_meas != p_stored {
                return Ok(false);
            }
        }
        Ok(true)
    } else if meas.dim + 1 == full_dim {
        match shift {
            Some(s) => Ok(meas.d == d - s),
            None => Ok(meas.d == d || meas.d + 1 == d),
        }
    } else {
        Err(ClassDataError::BadFingerprintDim {
            family,
            dim: meas.dim,
            expected: format!("{} or {}", full_dim, full_dim - 1),
        })
    }
}

/// Labels of all classes consistent with the fingerprint. Declared
/// fingerprint collisions surface as multi-label results; an empty list
/// means no tabulated class matches. Existence conditions on q are not
/// applied here: the fingerprint came from a measured element, so
/// existence is settled empirically.
pub fn classify(
    fp: &Fingerprint,
    family: GroupFamily,
    q: u64,
) -> Result<Vec<String>, ClassDataError> {
    let (m_full, l_full) = family.module_dims();
    let mut labels = Vec::new();
    let (recs, _, _) = candidate_records(family, q, fp.order)?;
    for rec in recs {
        if let Some(meas) = &fp.minimal {
            let full = m_full.ok_or(ClassDataError::BadFingerprintDim {
                family: family.name(),
                dim: meas.dim,
                expected: "no minimal module".to_string(),
            })?;
            if !measurement_consistent(
                meas,
                rec.d_m,
                rec.part_m.as_ref(),
                rec.m_shift,
                full,
                family.name(),
            )? {
                continue;
            }
        }
        if let Some(meas) = &fp.adjoint {
            if !measurement_consistent(
                meas,
                Some(rec.d_l),
                rec.part_l.as_ref(),
                None,
                l_full,
                family.name(),
            )? {
                continue;
            }
        }
        if !labels.contains(&rec.label) {
            labels.push(rec.label.clone());
        }
    }
    Ok(labels)
}

fn parse_partition(s: &str) -> Result<Vec<u32>, String> {
    let mut parts = Vec::new();
    for item in s.split(',') {
        let (part, mult) = match item.split_once('^') {
            Some((p, m)) => (
                p.parse::<u32>().map_err(|e| e.to_string())?,
                m.parse::<u32>().map_err(|e| e.to_string())?,
            ),
            None => (item.parse::<u32>().map_err(|e| e.to_string())?, 1),
        };
        if part == 0 || mult == 0 {
            return Err(format!("bad partition item {item:?}"));
        }
        for _ in 0..mult {
            parts.push(part);
        }
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(format!("partition not descending: {s:?}"));
    }
    Ok(parts)
}

fn opt_field<T, F: Fn(&str) -> Result<T, String>>(
    s: &str,
    f: F,
) -> Result<Option<T>, String> {
    if s == "-" {
        Ok(None)
    } else {
        f(s).map(Some)
    }
}

fn parse_record(line: &str) -> Result<ClassRecord, String> {
    let cols: Vec<&str> = line.split('|').collect();
    if cols.len() != 12 {
        return Err(format!("expected 12 columns, got {}: {line:?}", cols.len()));
    }
    let table_family =
        TableFamily::parse(cols[0]).ok_or_else(|| format!("bad family {:?}", cols[0]))?;
    let order: u32 = cols[2].parse().map_err(|e| format!("bad order: {e}"))?;
    if !matches!(order, 2 | 3 | 7) {
        return Err(format!("unsupported order {order}"));
    }
    let unipotent = match cols[3] {
        "u" => true,
        "s" => false,
        other => return Err(format!("bad u/s flag {other:?}")),
    };
    let rec = ClassRecord {
        table_family,
        label: cols[1].to_string(),
        order,
        unipotent,
        d_m: opt_field(cols[4], |s| s.parse().map_err(|e: std::num::ParseIntError| e.to_string()))?,
        d_l: cols[5].parse().map_err(|e| format!("bad dL: {e}"))?,
        cond: Condition::parse(cols[6]).ok_or_else(|| format!("bad condition {:?}", cols[6]))?,
        chi_m: opt_field(cols[7], |s| s.parse().map_err(|e: std::num::ParseIntError| e.to_string()))?,
        chi_l: opt_field(cols[8], |s| s.parse().map_err(|e: std::num::ParseIntError| e.to_string()))?,
        part_m: opt_field(cols[9], parse_partition)?,
        part_l: opt_field(cols[10], parse_partition)?,
        m_shift: opt_field(cols[11], |s| s.parse().map_err(|e: std::num::ParseIntError| e.to_string()))?,
    };
    Ok(rec)
}

fn validate(data: &TableData) -> Result<(), String> {
    for rec in &data.records {
        let (m_dim, l_dim) = rec.table_family.module_dims();
        if let Some(d) = rec.d_m {
            let m_dim = m_dim.ok_or_else(|| {
                format!("{:?} {} stores dM but the family has no minimal module", rec.table_family, rec.label)
            })?;
            if d > m_dim {
                return Err(format!("{} dM {} exceeds dim M {}", rec.label, d, m_dim));
            }
        }
        if rec.d_l > l_dim {
            return Err(format!("{} dL {} exceeds dim L {}", rec.label, rec.d_l, l_dim));
        }
        if rec.m_shift.is_some() && rec.table_family != TableFamily::F4 {
            return Err(format!("{} carries mshift outside F4", rec.label));
        }
        for (part, d, dim, which) in [
            (&rec.part_m, rec.d_m, m_dim, "M"),
            (&rec.part_l, Some(rec.d_l), Some(l_dim), "L"),
        ] {
            let Some(part) = part else { continue };
            if !rec.unipotent {
                return Err(format!("{} stores a partition but is semisimple", rec.label));
            }
            let d = d.ok_or_else(|| format!("{} partition on {} without d", rec.label, which))?;
            let dim = dim.unwrap();
            if part.len() != d as usize {
                return Err(format!(
                    "{} partition on {} has {} parts, d = {}",
                    rec.label,
                    which,
                    part.len(),
                    d
                ));
            }
            if part.iter().sum::<u32>() != dim {
                return Err(format!("{} partition on {} does not sum to {}", rec.label, which, dim));
            }
            if part.iter().any(|&p| p > rec.order) {
                return Err(format!(
                    "{} partition on {} has a block larger than the element order",
                    rec.label, which
                ));
            }
        }
    }
    // Fingerprint uniqueness: within (family, order, unipotent), the
    // (dM, dL) pair identifies the class unless declared as a collision.
    for (i, a) in data.records.iter().enumerate() {
        for b in data.records.iter().skip(i + 1) {
            if a.table_family != b.table_family
                || a.order != b.order
                || a.unipotent != b.unipotent
                || a.label == b.label
            {
                continue;
            }
            if a.d_m == b.d_m && a.d_l == b.d_l {
                let declared = data.collisions.iter().any(|(tf, ord, l1, l2)| {
                    *tf == a.table_family
                        && *ord == a.order
                        && ((l1 == &a.label && l2 == &b.label)
                            || (l1 == &b.label && l2 == &a.label))
                });
                if !declared {
                    return Err(format!(
                        "undeclared fingerprint collision: {:?} order {} {} / {}",
                        a.table_family, a.order, a.label, b.label
                    ));
                }
            }
        }
    }
    Ok(())
}

fn parse_table(text: &str) -> Result<TableData, String> {
    // The last line must be the checksum footer; everything before it is
    // covered by the hash.
    let footer_start = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or("data file has no content")?;
    let footer = text[footer_start..].trim_end();
    let body = &text[..footer_start];
    let want = footer
        .strip_prefix("#sha256 ")
        .ok_or("missing #sha256 footer on the last line")?;
    let got = sha256_hex(body.as_bytes());
    if got != want {
        return Err(format!("checksum mismatch: file says {want}, content hashes to {got}"));
    }
    let mut data = TableData { records: Vec::new(), collisions: Vec::new() };
    for line in body.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("!collision ") {
            let cols: Vec<&str> = rest.split('|').collect();
            if cols.len() != 4 {
                return Err(format!("bad collision declaration: {line:?}"));
            }
            let tf = TableFamily::parse(cols[0])
                .ok_or_else(|| format!("bad family in collision: {:?}", cols[0]))?;
            let ord: u32 = cols[1].parse().map_err(|e| format!("bad order: {e}"))?;
            data.collisions.push((tf, ord, cols[2].to_string(), cols[3].to_string()));
            continue;
        }
        data.records.push(parse_record(line)?);
    }
    validate(&data)?;
    Ok(data)
}
