//! The basic inequality and (properly) balanced multidegrees.
//!
//! For a subcurve Z of a semistable curve C and a rank-r, degree-d
//! multidegree, the basic inequality reads
//!     | deg_Z - d * omega_Z / omega_C |  <=  r * k_Z / 2,
//! and `slack` is the (exact, rational) gap to the bound.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::graph::{DualGraph, Subcurve, SubcurveMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multidegree {
    rank: i64,
    degrees: BTreeMap<String, i64>,
}

impl Multidegree {
    pub fn new(rank: i64, degrees: BTreeMap<String, i64>) -> Result<Self> {
        if rank < 1 {
            return Err(Error::Validation("rank must be >= 1".into()));
        }
        if degrees.is_empty() {
            return Err(Error::Validation("multidegree must assign at least one vertex".into()));
        }
        Ok(Multidegree { rank, degrees })
    }

    pub fn from_pairs(rank: i64, pairs: &[(&str, i64)]) -> Result<Self> {
        Self::new(rank, pairs.iter().map(|&(k, v)| (k.into(), v)).collect())
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn degrees(&self) -> &BTreeMap<String, i64> {
        &self.degrees
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.values().sum()
    }

    pub fn degree_of(&self, id: &str) -> Result<i64> {
        self.degrees
            .get(id)
            .copied()
            .ok_or_else(|| Error::Validation(format!("no degree assigned to vertex '{id}'")))
    }

    /// Total degree on a subcurve.
    pub fn degree_on(&self, graph: &DualGraph, z: &Subcurve) -> Result<i64> {
        self.check_matches(graph)?;
        let mut sum = 0;
        for (i, v) in graph.vertices().iter().enumerate() {
            if z.contains(i) {
                sum += self.degree_of(&v.id)?;
            }
        }
        Ok(sum)
    }

    pub fn check_matches(&self, graph: &DualGraph) -> Result<()> {
        if self.degrees.len() != graph.vertex_count()
            || graph.vertices().iter().any(|v| !self.degrees.contains_key(&v.id))
        {
            return Err(Error::Validation(
                "multidegree vertex ids do not match the graph".into(),
            ));
        }
        Ok(())
    }
}

/// The three quantifier variants of the basic inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceMode {
    /// Two-sided inequality over every nonempty proper subcurve.
    All,
    /// Two-sided inequality over subcurves connected on both sides.
    ConnectedBothSides,
    /// One-sided inequality (deg excess bounded above) over subcurves
    /// connected on both sides; equivalent to the others by complementation.
    OneSidedConnected,
}

/// Exact slack of the basic inequality on Z:
/// r*k_Z/2 - |deg_Z - d*omega_Z/omega_C|. Nonnegative iff Z satisfies the
/// inequality; zero iff it is saturated.
pub fn basic_inequality_slack(
    graph: &DualGraph,
    md: &Multidegree,
    z: &Subcurve,
) -> Result<Rational64> {
    md.check_matches(graph)?;
    if z.len() >= graph.vertex_count() {
        return Err(Error::Validation("slack requires a proper subcurve".into()));
    }
    let omega_c = graph.omega(&graph.full_subcurve())?;
    if omega_c == 0 {
        return Err(Error::Domain("basic inequality needs omega_C != 0 (genus >= 2)".into()));
    }
    let omega_z = graph.omega(z)?;
    let k_z = graph.k_z(z)?;
    let d = md.total_degree();
    let dev = Rational64::new(md.degree_on(graph, z)?, 1) - Rational64::new(d * omega_z, omega_c);
    let dev = if dev < Rational64::new(0, 1) { -dev } else { dev };
    Ok(Rational64::new(md.rank() * k_z, 2) - dev)
}

// integer form of the check, used on hot paths:
// |2*degZ*omega_C - 2*d*omega_Z| <= r*k_Z*|omega_C| (omega_C > 0 for g >= 2)
fn balanced_on(graph: &DualGraph, md: &Multidegree, z: &Subcurve, omega_c: i64, d: i64, one_sided: bool) -> Result<bool> {
    let omega_z = graph.omega(z)?;
    let k_z = graph.k_z(z)?;
    let lhs = 2 * md.degree_on(graph, z)? as i128 * omega_c as i128 - 2 * d as i128 * omega_z as i128;
    let rhs = md.rank() as i128 * k_z as i128 * omega_c as i128;
    Ok(if one_sided { lhs <= rhs } else { lhs.abs() <= rhs })
}

/// Does the multidegree satisfy the basic inequality in the given mode?
/// Vacuously true on a one-vertex graph.
pub fn is_balanced(graph: &DualGraph, md: &Multidegree, mode: BalanceMode) -> Result<bool> {
    md.check_matches(graph)?;
    if graph.vertex_count() < 2 {
        return Ok(true);
    }
    let omega_c = graph.omega(&graph.full_subcurve())?;
    if omega_c == 0 {
        return Err(Error::Domain("basic inequality needs omega_C != 0 (genus >= 2)".into()));
    }
    let d = md.total_degree();
    let (subs, one_sided) = match mode {
        BalanceMode::All => (graph.subcurves(SubcurveMode::All), false),
        BalanceMode::ConnectedBothSides => (graph.subcurves(SubcurveMode::ConnectedBothSides), false),
        BalanceMode::OneSidedConnected => (graph.subcurves(SubcurveMode::ConnectedBothSides), true),
    };
    for z in &subs {
        if !balanced_on(graph, md, z, omega_c, d, one_sided)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subcurves (connected on both sides) where the inequality is saturated.
pub fn saturated_subcurves(graph: &DualGraph, md: &Multidegree) -> Result<Vec<Subcurve>> {
    md.check_matches(graph)?;
    let mut out = Vec::new();
    for z in graph.subcurves(SubcurveMode::ConnectedBothSides) {
        if basic_inequality_slack(graph, md, &z)? == Rational64::new(0, 1) {
            out.push(z);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceDiagnostics {
    pub ok: bool,
    /// First violated condition, human-readable.
    pub violation: Option<String>,
}

/// Necessary conditions at the multidegree level for proper balancedness:
/// balanced in mode All, plus on each maximal rational chain
///   - every chain vertex degree lies in [1, r],
///   - the chain's total degree lies in [1, r],
///   - chain length <= chain total degree.
pub fn properly_balanced_necessary(graph: &DualGraph, md: &Multidegree) -> Result<BalanceDiagnostics> {
    md.check_matches(graph)?;
    if graph.vertex_count() >= 2 && !is_balanced(graph, md, BalanceMode::All)? {
        for z in graph.subcurves(SubcurveMode::All) {
            if basic_inequality_slack(graph, md, &z)? < Rational64::new(0, 1) {
                return Ok(BalanceDiagnostics {
                    ok: false,
                    violation: Some(format!(
                        "basic inequality fails on subcurve {{{}}}",
                        graph.subcurve_ids(&z).join(",")
                    )),
                });
            }
        }
    }
    let r = md.rank();
    for chain in graph.maximal_chains()? {
        let mut total = 0;
        for id in &chain.vertices {
            let deg = md.degree_of(id)?;
            if deg < 1 || deg > r {
                return Ok(BalanceDiagnostics {
                    ok: false,
                    violation: Some(format!(
                        "chain vertex '{id}' has degree {deg} outside [1, {r}]"
                    )),
                });
            }
            total += deg;
        }
        if total < 1 || total > r {
            return Ok(BalanceDiagnostics {
                ok: false,
                violation: Some(format!(
                    "chain through '{}' has total degree {total} outside [1, {r}]",
                    chain.vertices[0]
                )),
            });
        }
        if (chain.vertices.len() as i64) > total {
            return Ok(BalanceDiagnostics {
                ok: false,
                violation: Some(format!(
                    "chain through '{}' is longer ({}) than its total degree {total}",
                    chain.vertices[0],
                    chain.vertices.len()
                )),
            });
        }
    }
    Ok(BalanceDiagnostics { ok: true, violation: None })
}
