//! Boundary strata of the compactified moduli space: the index set
//! {delta_i^j}, the generic two-component multidegrees, extremality, and the
//! pullback of the boundary divisors of the moduli of curves.

use alloc::vec::Vec;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::NumericalContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryIndex {
    pub i: i64,
    pub j: i64,
    pub extremal: bool,
}

fn ceil_ratio(q: Rational64) -> i64 {
    q.ceil().to_integer()
}

/// The set J_i of multidegree labels over the boundary divisor delta_i of
/// the moduli of curves:
///   i = 0:              {0}
///   0 < i < g/2:        {0..r} if k | 2i-1, else {0..r-1}
///   i = g/2 (g even):   {0..floor(r/2)}.
pub fn j_set(ctx: &NumericalContext, i: i64) -> Result<Vec<i64>> {
    let (r, g, k) = (ctx.r, ctx.g, ctx.k_rdg);
    if i < 0 || 2 * i > g {
        return Err(Error::Domain("boundary level i must satisfy 0 <= i <= g/2".into()));
    }
    let hi = if i == 0 {
        0
    } else if 2 * i < g {
        if (2 * i - 1) % k == 0 {
            r
        } else {
            r - 1
        }
    } else {
        r / 2
    };
    Ok((0..=hi).collect())
}

/// All boundary indices, ordered by (i, j).
pub fn boundary_indices(ctx: &NumericalContext) -> Result<Vec<BoundaryIndex>> {
    let mut out = Vec::new();
    for i in 0..=(ctx.g / 2) {
        for j in j_set(ctx, i)? {
            out.push(BoundaryIndex { i, j, extremal: is_extremal(ctx, i, j) });
        }
    }
    Ok(out)
}

/// Extremal boundary divisors are the ones whose generic multidegree
/// saturates the basic inequality: j in {0, r} at a level 1 <= i < g/2 with
/// k | 2i-1, or j = 0 at level i = g/2 when g and d + r are even.
pub fn is_extremal(ctx: &NumericalContext, i: i64, j: i64) -> bool {
    let (r, d, g, k) = (ctx.r, ctx.d, ctx.g, ctx.k_rdg);
    if i >= 1 && 2 * i < g && (2 * i - 1) % k == 0 && (j == 0 || j == r) {
        return true;
    }
    g % 2 == 0 && 2 * i == g && (d + r) % 2 == 0 && j == 0
}

/// Generic multidegree (d1, d2) on the two-component curve of type
/// (genus i) join (genus g-i) underlying delta_i^j. Defined for i >= 1.
pub fn generic_multidegree(ctx: &NumericalContext, i: i64, j: i64) -> Result<(i64, i64)> {
    let (r, d, g, k) = (ctx.r, ctx.d, ctx.g, ctx.k_rdg);
    if i < 1 || 2 * i > g {
        return Err(Error::Domain(
            "generic multidegrees are defined for levels 1 <= i <= g/2".into(),
        ));
    }
    if !j_set(ctx, i)?.contains(&j) {
        return Err(Error::Domain("label j is not in J_i".into()));
    }
    let omega_c = 2 * g - 2;
    let d1 = if 2 * i == g {
        ceil_ratio(Rational64::new(d - r, 2)) + j
    } else if (2 * i - 1) % k == 0 {
        let exact = Rational64::new(d * (2 * i - 1), omega_c) - Rational64::new(r, 2);
        if !exact.is_integer() {
            return Err(Error::Internal(
                "k | 2i-1 must make d(2i-1)/(2g-2) - r/2 an integer".into(),
            ));
        }
        exact.to_integer() + j
    } else {
        ceil_ratio(Rational64::new(d * (2 * i - 1), omega_c) - Rational64::new(r, 2)) + j
    };
    Ok((d1, d - d1))
}

/// Deviation of the genus-i side from d * omega_Z / omega_C, as an exact
/// rational; |dev| <= r/2 is the basic inequality on the one-node
/// two-component curve, and dev = -r/2 + (integer) characterizes extremals.
pub fn generic_deviation(ctx: &NumericalContext, i: i64, j: i64) -> Result<Rational64> {
    let (d1, _) = generic_multidegree(ctx, i, j)?;
    let omega_c = 2 * ctx.g - 2;
    Ok(Rational64::new(d1, 1) - Rational64::new(ctx.d * (2 * i - 1), omega_c))
}

/// The pullback of O(delta_i) from the moduli of curves decomposes with all
/// coefficients 1 over the labels J_i.
pub fn pullback_decomposition(ctx: &NumericalContext, i: i64) -> Result<Vec<(BoundaryIndex, i64)>> {
    Ok(j_set(ctx, i)?
        .into_iter()
        .map(|j| (BoundaryIndex { i, j, extremal: is_extremal(ctx, i, j) }, 1))
        .collect())
}

/// Extremality is equivalent to zero slack on the two-component model.
pub fn slack_on_two_component_model(ctx: &NumericalContext, i: i64, j: i64) -> Result<Rational64> {
    let dev = generic_deviation(ctx, i, j)?;
    Ok(Rational64::new(ctx.r, 2) - dev.abs())
}

pub fn slack_is_zero(ctx: &NumericalContext, i: i64, j: i64) -> Result<bool> {
    Ok(slack_on_two_component_model(ctx, i, j)?.is_zero())
}
