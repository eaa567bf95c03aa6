//! One-parameter families of semistable curves with balanced bundles, used
//! to pin down the degrees of the boundary line bundles. Each family pairs
//! a pencil of curves with an explicit bundle; we only keep the discrete
//! data: the special-fiber dual graphs, the multidegrees, and the degree of
//! each boundary line bundle pulled back to the base of the family. Rows
//! assembled over all families give a triangular intersection matrix, which
//! is how one sees the boundary classes are independent in the Picard group.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::balance::{is_balanced, BalanceMode, Multidegree};
use crate::boundary::{boundary_indices, j_set, BoundaryIndex};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::invariants::{make_context, NumericalContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Conic pencil glued to a fixed curve of genus g-3; hits only delta_0.
    FTilde,
    /// Conic pencil with an extra elliptic tail; hits the level-1 divisor
    /// indexed by k. Applicable for 0 <= d <= r(g-1).
    FPrime1 { k: i64 },
    /// Same fibration, different bundle; applicable r(g-1) <= d < r(2g-2).
    FPrime2 { k: i64 },
    /// Elliptic-bridge family whose general fiber is a chain of genus
    /// h, 1, g-h-1; hits the level-(h+1) divisor indexed by k.
    FH { h: i64, k: i64 },
    /// Genus 2 only: pencil of irreducible curves, degree 30 on delta_0.
    GTilde,
    /// Genus 2 only: cubic pencil with elliptic tail, -1 on delta_1^k.
    G1 { k: i64 },
}

impl FamilyKind {
    pub fn label(&self) -> String {
        match self {
            FamilyKind::FTilde => "F".into(),
            FamilyKind::FPrime1 { k } => format!("F'1[{k}]"),
            FamilyKind::FPrime2 { k } => format!("F'2[{k}]"),
            FamilyKind::FH { h, k } => format!("F{h}[{k}]"),
            FamilyKind::GTilde => "G".into(),
            FamilyKind::G1 { k } => format!("G1[{k}]"),
        }
    }

    /// Boundary level of the diagonal entry this family pins down.
    pub fn level(&self) -> i64 {
        match self {
            FamilyKind::FTilde | FamilyKind::GTilde => 0,
            FamilyKind::FPrime1 { .. } | FamilyKind::FPrime2 { .. } | FamilyKind::G1 { .. } => 1,
            FamilyKind::FH { h, .. } => h + 1,
        }
    }

    /// Multidegree label of the diagonal entry.
    pub fn column(&self) -> i64 {
        match self {
            FamilyKind::FTilde | FamilyKind::GTilde => 0,
            FamilyKind::FPrime1 { k } | FamilyKind::FPrime2 { k } => *k,
            FamilyKind::FH { k, .. } => *k,
            FamilyKind::G1 { k } => *k,
        }
    }
}

/// A pulled-back boundary degree; entries the construction leaves
/// uncomputed stay `Unknown`, never silently 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeEntry {
    Known(i64),
    Unknown,
}

fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

/// The families exist for one degree per residue class mod r(2g-2); the
/// stacks for equivalent degrees are isomorphic, so reduce d first.
pub fn normalize_context(ctx: &NumericalContext) -> Result<NumericalContext> {
    let period = ctx.r * (2 * ctx.g - 2);
    make_context(ctx.r, ctx.d.rem_euclid(period), ctx.g)
}

fn check_applicable(ctx: &NumericalContext, f: FamilyKind) -> Result<()> {
    let (r, d, g) = (ctx.r, ctx.d, ctx.g);
    debug_assert!((0..r * (2 * g - 2)).contains(&d));
    match f {
        FamilyKind::FTilde => {
            if g < 3 {
                return Err(Error::Domain("the conic-pencil family needs genus >= 3".into()));
            }
        }
        FamilyKind::FPrime1 { k } => {
            if g < 3 {
                return Err(Error::Domain("the elliptic-tail family needs genus >= 3".into()));
            }
            if d > r * (g - 1) {
                return Err(Error::Domain(format!(
                    "first elliptic-tail bundle needs 0 <= d <= r(g-1); d = {d} exceeds {}",
                    r * (g - 1)
                )));
            }
            check_column(ctx, 1, k)?;
        }
        FamilyKind::FPrime2 { k } => {
            if g < 3 {
                return Err(Error::Domain("the elliptic-tail family needs genus >= 3".into()));
            }
            if d < r * (g - 1) {
                return Err(Error::Domain(format!(
                    "second elliptic-tail bundle needs d >= r(g-1) = {}; d = {d}",
                    r * (g - 1)
                )));
            }
            check_column(ctx, 1, k)?;
        }
        FamilyKind::FH { h, k } => {
            if h < 1 || 2 * h > g - 2 {
                return Err(Error::Domain(format!(
                    "elliptic-bridge family needs 1 <= h <= (g-2)/2; got h = {h}, g = {g}"
                )));
            }
            check_column(ctx, h + 1, k)?;
        }
        FamilyKind::GTilde | FamilyKind::G1 { .. } => {
            if g != 2 {
                return Err(Error::Domain("this family is specific to genus 2".into()));
            }
            if let FamilyKind::G1 { k } = f {
                check_column(ctx, 1, k)?;
            }
        }
    }
    Ok(())
}

fn check_column(ctx: &NumericalContext, i: i64, k: i64) -> Result<()> {
    if j_set(ctx, i)?.contains(&k) {
        Ok(())
    } else {
        Err(Error::Domain(format!("label {k} is not in J_{i}")))
    }
}

/// The full row list for the independence matrix, levels ascending.
pub fn families_for(ctx: &NumericalContext) -> Result<Vec<FamilyKind>> {
    let ctx = normalize_context(ctx)?;
    let mut out = Vec::new();
    if ctx.g == 2 {
        out.push(FamilyKind::GTilde);
        for k in j_set(&ctx, 1)? {
            out.push(FamilyKind::G1 { k });
        }
        return Ok(out);
    }
    out.push(FamilyKind::FTilde);
    let first = ctx.d <= ctx.r * (ctx.g - 1);
    for k in j_set(&ctx, 1)? {
        out.push(if first { FamilyKind::FPrime1 { k } } else { FamilyKind::FPrime2 { k } });
    }
    for h in 1..=(ctx.g - 2) / 2 {
        for k in j_set(&ctx, h + 1)? {
            out.push(FamilyKind::FH { h, k });
        }
    }
    Ok(out)
}

/// Degree of each boundary line bundle pulled back to the family's base.
pub fn family_degrees(
    ctx: &NumericalContext,
    f: FamilyKind,
) -> Result<Vec<(BoundaryIndex, DegreeEntry)>> {
    let ctx = normalize_context(ctx)?;
    check_applicable(&ctx, f)?;
    let level = f.level();
    let col = f.column();
    let mut out = Vec::new();
    for b in boundary_indices(&ctx)? {
        let entry = if b.i < level {
            // the construction never pins these down
            DegreeEntry::Unknown
        } else if b.i > level {
            DegreeEntry::Known(0)
        } else if b.j == col {
            DegreeEntry::Known(if f == FamilyKind::GTilde { 30 } else { -1 })
        } else {
            DegreeEntry::Known(0)
        };
        out.push((b, entry));
    }
    Ok(out)
}

/// A fiber of the family together with the bundle multidegrees allowed by
/// the balance lemma for that family.
#[derive(Debug, Clone)]
pub struct FiberData {
    pub name: String,
    pub graph: DualGraph,
    pub bundles: Vec<Multidegree>,
}

pub fn ftilde_special_fiber(ctx: &NumericalContext) -> Result<(DualGraph, Multidegree)> {
    let g = u32::try_from(ctx.g - 3).expect("genus >= 3");
    let graph = DualGraph::new(
        &[("c", g), ("r1", 0), ("r2", 0)],
        &[("c", "r1"), ("c", "r1"), ("c", "r2"), ("c", "r2"), ("r1", "r2")],
    )?;
    let md = Multidegree::from_pairs(ctx.r, &[("c", ctx.d), ("r1", 0), ("r2", 0)])?;
    Ok((graph, md))
}

fn fprime_graphs(g: i64) -> Result<(DualGraph, DualGraph)> {
    let gc = u32::try_from(g - 3).expect("genus >= 3");
    let special = DualGraph::new(
        &[("c", gc), ("gamma", 1), ("r1", 0), ("r2", 0)],
        &[("c", "r1"), ("c", "r1"), ("c", "r2"), ("r1", "r2"), ("r2", "gamma")],
    )?;
    let general = DualGraph::new(
        &[("c", gc), ("gamma", 1), ("q", 0)],
        &[("c", "q"), ("c", "q"), ("c", "q"), ("q", "gamma")],
    )?;
    Ok((special, general))
}

/// Special fiber of the elliptic-tail families: the three-component chain
/// curve with an elliptic tail attached to the last rational bridge.
pub fn fprime_special_graph(g: i64) -> Result<DualGraph> {
    Ok(fprime_graphs(g)?.0)
}

/// Inclusive range of tail degrees j allowed by the balance lemma for the
/// elliptic-tail families: |j - d/(2g-2)| <= r/2.
pub fn fprime_box(ctx: &NumericalContext) -> (i64, i64) {
    let den = 2 * ctx.g - 2;
    (ceil_div(2 * ctx.d - ctx.r * den, 2 * den), floor_div(2 * ctx.d + ctx.r * den, 2 * den))
}

/// Special-fiber multidegree of the elliptic-tail bundle with tail degree j.
pub fn fprime_special_multidegree(
    ctx: &NumericalContext,
    first_variant: bool,
    j: i64,
) -> Result<Multidegree> {
    let d = ctx.d;
    if first_variant {
        Multidegree::from_pairs(ctx.r, &[("c", d - j), ("gamma", j), ("r1", 0), ("r2", 0)])
    } else {
        Multidegree::from_pairs(ctx.r, &[("c", d - 3 * j), ("gamma", j), ("r1", j), ("r2", j)])
    }
}

pub fn fh_special_fiber(ctx: &NumericalContext, h: i64) -> Result<DualGraph> {
    let g1 = u32::try_from(h).expect("h >= 1");
    let g2 = u32::try_from(ctx.g - h - 1).expect("h <= g - 2");
    DualGraph::new(
        &[("c1", g1), ("c2", g2), ("gamma", 1), ("e", 0)],
        &[("e", "c1"), ("e", "c2"), ("e", "gamma")],
    )
}

/// Boxes for the three free degrees (j on the genus-h part, k on the
/// genus-(g-h-1) part, t on the elliptic bridge).
pub fn fh_boxes(ctx: &NumericalContext, h: i64) -> [(i64, i64); 3] {
    let (r, d, g) = (ctx.r, ctx.d, ctx.g);
    let den = 2 * g - 2;
    let bx = |num: i64| {
        (ceil_div(2 * num - r * den, 2 * den), floor_div(2 * num + r * den, 2 * den))
    };
    [bx(d * (2 * h - 1)), bx(d * (2 * g - 2 * h - 3)), bx(d)]
}

pub fn fh_special_multidegree(ctx: &NumericalContext, j: i64, k: i64, t: i64) -> Result<Multidegree> {
    Multidegree::from_pairs(
        ctx.r,
        &[("c1", j), ("c2", k), ("gamma", t), ("e", ctx.d - j - k - t)],
    )
}

/// Genus-2 elliptic-tail fibers: the general fiber is two elliptic curves
/// meeting once; in the special fibers one of them degenerates to a nodal
/// rational curve.
pub fn g1_fibers(ctx: &NumericalContext, k: i64) -> Result<Vec<(String, DualGraph, Multidegree)>> {
    let dc = floor_div(ctx.d + ctx.r, 2) - k;
    let dgamma = ceil_div(ctx.d - ctx.r, 2) + k;
    let general = DualGraph::new(&[("c", 1), ("gamma", 1)], &[("c", "gamma")])?;
    let special = DualGraph::new(&[("c", 0), ("gamma", 1)], &[("c", "c"), ("c", "gamma")])?;
    let md = Multidegree::from_pairs(ctx.r, &[("c", dc), ("gamma", dgamma)])?;
    Ok(alloc::vec![
        ("general".into(), general, md.clone()),
        ("special".into(), special, md),
    ])
}

/// All fibers of the family, each with the multidegrees the balance lemma
/// asserts to be balanced (the whole lemma box, not just the one value the
/// independence argument uses).
pub fn fibers(ctx: &NumericalContext, f: FamilyKind) -> Result<Vec<FiberData>> {
    let ctx = normalize_context(ctx)?;
    check_applicable(&ctx, f)?;
    let mut out = Vec::new();
    match f {
        FamilyKind::FTilde => {
            let (special, md) = ftilde_special_fiber(&ctx)?;
            let gc = u32::try_from(ctx.g - 3).unwrap();
            let general = DualGraph::new(
                &[("c", gc), ("q", 0)],
                &[("c", "q"), ("c", "q"), ("c", "q"), ("c", "q")],
            )?;
            let gen_md = Multidegree::from_pairs(ctx.r, &[("c", ctx.d), ("q", 0)])?;
            out.push(FiberData { name: "special".into(), graph: special, bundles: alloc::vec![md] });
            out.push(FiberData {
                name: "general".into(),
                graph: general,
                bundles: alloc::vec![gen_md],
            });
        }
        FamilyKind::FPrime1 { .. } | FamilyKind::FPrime2 { .. } => {
            let first = matches!(f, FamilyKind::FPrime1 { .. });
            let (special, general) = fprime_graphs(ctx.g)?;
            let (lo, hi) = fprime_box(&ctx);
            let mut special_mds = Vec::new();
            let mut general_mds = Vec::new();
            for j in lo..=hi {
                special_mds.push(fprime_special_multidegree(&ctx, first, j)?);
                let q_deg = if first { 0 } else { 2 * j };
                let c_deg = if first { ctx.d - j } else { ctx.d - 3 * j };
                general_mds.push(Multidegree::from_pairs(
                    ctx.r,
                    &[("c", c_deg), ("gamma", j), ("q", q_deg)],
                )?);
            }
            out.push(FiberData { name: "special".into(), graph: special, bundles: special_mds });
            out.push(FiberData { name: "general".into(), graph: general, bundles: general_mds });
        }
        FamilyKind::FH { h, .. } => {
            let special = fh_special_fiber(&ctx, h)?;
            let [bj, bk, bt] = fh_boxes(&ctx, h);
            let mut special_mds = Vec::new();
            let mut general_mds = Vec::new();
            let g1 = u32::try_from(h).unwrap();
            let g2 = u32::try_from(ctx.g - h - 1).unwrap();
            let general = DualGraph::new(
                &[("c1", g1), ("c2", g2), ("gamma", 1)],
                &[("c1", "gamma"), ("c2", "gamma")],
            )?;
            for j in bj.0..=bj.1 {
                for k in bk.0..=bk.1 {
                    for t in bt.0..=bt.1 {
                        special_mds.push(fh_special_multidegree(&ctx, j, k, t)?);
                        general_mds.push(Multidegree::from_pairs(
                            ctx.r,
                            &[("c1", j), ("c2", k), ("gamma", ctx.d - j - k)],
                        )?);
                    }
                }
            }
            out.push(FiberData { name: "special".into(), graph: special, bundles: special_mds });
            out.push(FiberData { name: "general".into(), graph: general, bundles: general_mds });
        }
        FamilyKind::GTilde => {
            let smooth = DualGraph::new(&[("c", 2)], &[])?;
            let nodal = DualGraph::new(&[("c", 1)], &[("c", "c")])?;
            let md = Multidegree::from_pairs(ctx.r, &[("c", ctx.d)])?;
            out.push(FiberData {
                name: "general".into(),
                graph: smooth,
                bundles: alloc::vec![md.clone()],
            });
            out.push(FiberData { name: "special".into(), graph: nodal, bundles: alloc::vec![md] });
        }
        FamilyKind::G1 { .. } => {
            // the lemma box is the whole of J_1
            let mut by_graph: Vec<FiberData> = Vec::new();
            for k in j_set(&ctx, 1)? {
                for (name, graph, md) in g1_fibers(&ctx, k)? {
                    if let Some(fd) = by_graph.iter_mut().find(|fd| fd.name == name) {
                        fd.bundles.push(md);
                    } else {
                        by_graph.push(FiberData { name, graph, bundles: alloc::vec![md] });
                    }
                }
            }
            out = by_graph;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BalanceReport {
    pub family: FamilyKind,
    pub fibers_checked: usize,
    pub bundles_checked: usize,
    pub failures: Vec<String>,
}

impl BalanceReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-check the family's balance lemma: every bundle in the lemma box must
/// be balanced on every fiber.
pub fn validate_family_balance(ctx: &NumericalContext, f: FamilyKind) -> Result<BalanceReport> {
    let mut report =
        BalanceReport { family: f, fibers_checked: 0, bundles_checked: 0, failures: Vec::new() };
    for fiber in fibers(ctx, f)? {
        report.fibers_checked += 1;
        for md in &fiber.bundles {
            report.bundles_checked += 1;
            if !is_balanced(&fiber.graph, md, BalanceMode::All)? {
                report.failures.push(format!(
                    "{} fiber '{}': multidegree {:?} violates the basic inequality",
                    f.label(),
                    fiber.name,
                    md.degrees()
                ));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct IndependenceMatrix {
    pub rows: Vec<FamilyKind>,
    pub columns: Vec<BoundaryIndex>,
    pub entries: Vec<Vec<DegreeEntry>>,
    pub verdict: bool,
    pub failure: Option<String>,
    /// Product of the diagonal entries; up to sign this is the determinant
    /// of the known triangular system.
    pub diagonal_product: i64,
}

/// Assemble the rows of all families against all boundary columns and check
/// the block triangular shape that forces full column rank.
pub fn independence_matrix(ctx: &NumericalContext) -> Result<IndependenceMatrix> {
    let ctx = normalize_context(ctx)?;
    let rows = families_for(&ctx)?;
    let columns = boundary_indices(&ctx)?;
    let mut entries = Vec::with_capacity(rows.len());
    for f in &rows {
        let row = family_degrees(&ctx, *f)?;
        debug_assert!(row.iter().map(|(b, _)| *b).eq(columns.iter().copied()));
        entries.push(row.into_iter().map(|(_, e)| e).collect::<Vec<_>>());
    }
    let mut verdict = true;
    let mut failure = None;
    let mut diagonal_product: i64 = 1;
    if rows.len() != columns.len() {
        verdict = false;
        failure = Some(format!(
            "{} families against {} boundary columns",
            rows.len(),
            columns.len()
        ));
    }
    for (ci, col) in columns.iter().enumerate() {
        if !verdict {
            break;
        }
        let owners: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, f)| f.level() == col.i && f.column() == col.j)
            .map(|(ri, _)| ri)
            .collect();
        let [ri] = owners[..] else {
            verdict = false;
            failure = Some(format!("no unique family for boundary index ({}, {})", col.i, col.j));
            break;
        };
        let expected = if rows[ri] == FamilyKind::GTilde { 30 } else { -1 };
        if entries[ri][ci] != DegreeEntry::Known(expected) {
            verdict = false;
            failure = Some(format!("bad diagonal entry at ({}, {})", col.i, col.j));
            break;
        }
        diagonal_product *= expected;
        // everything else in this column at or above the diagonal level
        // must be known zero
        for (rj, f) in rows.iter().enumerate() {
            if rj != ri && f.level() <= col.i && entries[rj][ci] != DegreeEntry::Known(0) {
                verdict = false;
                failure = Some(format!(
                    "entry of {} at ({}, {}) breaks triangularity",
                    f.label(),
                    col.i,
                    col.j
                ));
                break;
            }
        }
    }
    if !verdict {
        diagonal_product = 0;
    }
    Ok(IndependenceMatrix { rows, columns, entries, verdict, failure, diagonal_product })
}
