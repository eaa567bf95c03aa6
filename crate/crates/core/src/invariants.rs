//! Numerical invariants of the triple (r, d, g) and the weight-lattice data
//! attached to it: the four tautological line-bundle weights under the
//! rigidification character, and the distinguished weight-zero combinations
//! Xi and Theta.

use alloc::format;
use num_integer::gcd;

use crate::error::{Error, Result};

/// n = gcd(r, d), v = gcd(d/n + (r/n)(1-g), d+1-g, 2g-2),
/// k = (2g-2) / gcd(2g-2, d + r(1-g)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumericalContext {
    pub r: i64,
    pub d: i64,
    pub g: i64,
    pub n_rd: i64,
    pub v_rdg: i64,
    pub k_rdg: i64,
}

pub fn make_context(r: i64, d: i64, g: i64) -> Result<NumericalContext> {
    if r < 1 {
        return Err(Error::Domain("rank must be >= 1".into()));
    }
    if g < 2 {
        return Err(Error::Domain("genus must be >= 2".into()));
    }
    let n = gcd(r, d);
    let v = gcd(gcd(d / n + (r / n) * (1 - g), d + 1 - g), 2 * g - 2);
    let k = (2 * g - 2) / gcd(2 * g - 2, d + r * (1 - g));
    let ctx = NumericalContext { r, d, g, n_rd: n, v_rdg: v, k_rdg: k };
    if (d + r * (1 - g)) % (n * v) != 0 {
        return Err(Error::Internal(format!(
            "n*v = {} does not divide d + r(1-g) = {}",
            n * v,
            d + r * (1 - g)
        )));
    }
    Ok(ctx)
}

/// Index order for the tautological basis Lambda(m, n, l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LambdaBasis {
    /// Lambda(1,0,0)
    L100,
    /// Lambda(0,1,0)
    L010,
    /// Lambda(1,1,0)
    L110,
    /// Lambda(0,0,1)
    L001,
}

pub const LAMBDA_BASIS: [LambdaBasis; 4] =
    [LambdaBasis::L100, LambdaBasis::L010, LambdaBasis::L110, LambdaBasis::L001];

impl LambdaBasis {
    pub fn label(&self) -> &'static str {
        match self {
            LambdaBasis::L100 => "Lambda(1,0,0)",
            LambdaBasis::L010 => "Lambda(0,1,0)",
            LambdaBasis::L110 => "Lambda(1,1,0)",
            LambdaBasis::L001 => "Lambda(0,0,1)",
        }
    }
}

/// Weights of the four tautological bundles under the rigidification
/// character, in basis order (L100, L010, L110, L001).
pub fn res_weights(ctx: &NumericalContext) -> [i64; 4] {
    let (r, d, g) = (ctx.r, ctx.d, ctx.g);
    [0, r * (d + 1 - g), r * (d + g - 1), d + r * (1 - g)]
}

/// gcd of the four weights: the image of the weight homomorphism is this
/// multiple of Z. (It equals n_rd * v_rdg; the acceptance suite checks that.)
pub fn res_image_generator(ctx: &NumericalContext) -> i64 {
    let w = res_weights(ctx);
    let mut out = 0;
    for x in w {
        out = gcd(out, x);
    }
    out
}

/// Exponent vectors (over the Lambda basis) of the weight-zero generators
/// Xi and Theta, together with the Bezout pair (alpha, beta) used by Theta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightZeroBasis {
    pub xi: [i64; 4],
    pub theta: [i64; 4],
    pub alpha: i64,
    pub beta: i64,
    pub v1: i64,
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.abs(), if a >= 0 { 1 } else { -1 }, 0);
    }
    let (g, x, y) = egcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Xi = L010^((d+g-1)/v1) * L110^(-(d-g+1)/v1) with v1 = gcd(d+1-g, 2g-2),
/// Theta = L001^((r/n)(v1/v)) * L010^alpha * L110^beta where (alpha, beta)
/// is the minimal-|alpha| solution of
///   alpha (d+1-g) + beta (d+g-1) = -(1/n)(v1/v)(d + r(1-g)).
pub fn weight_zero_basis(ctx: &NumericalContext) -> Result<WeightZeroBasis> {
    let (r, d, g) = (ctx.r, ctx.d, ctx.g);
    let v1 = gcd(d + 1 - g, 2 * g - 2);
    let a = d + 1 - g;
    let b = d + g - 1;
    let xi = [0, (d + g - 1) / v1, -(d - g + 1) / v1, 0];
    let target = -v1 * ((d + r * (1 - g)) / (ctx.n_rd * ctx.v_rdg));
    let (g0, x, y) = egcd(a, b);
    if g0 != v1 {
        return Err(Error::Internal("gcd(d+1-g, d+g-1) != v1".into()));
    }
    let (alpha, beta) = if b == 0 {
        (target / a, 0)
    } else {
        let (a0, b0) = (x * (target / g0), y * (target / g0));
        let (step_a, step_b) = (b / g0, a / g0);
        if step_a == 0 {
            (a0, b0)
        } else {
            let m = step_a.abs();
            let r0 = a0.rem_euclid(m);
            let alpha = if r0.abs() <= (r0 - m).abs() { r0 } else { r0 - m };
            let t = (alpha - a0) / step_a;
            (alpha, b0 - t * step_b)
        }
    };
    if alpha * a + beta * b != target {
        return Err(Error::Internal("Bezout solution for Theta does not verify".into()));
    }
    let theta = [0, alpha, beta, (r / ctx.n_rd) * (v1 / ctx.v_rdg)];
    // both must be weight-zero
    let w = res_weights(ctx);
    for exps in [&xi, &theta] {
        let dot: i64 = exps.iter().zip(w.iter()).map(|(e, wi)| e * wi).sum();
        if dot != 0 {
            return Err(Error::Internal("Xi/Theta exponent vector has nonzero weight".into()));
        }
    }
    Ok(WeightZeroBasis { xi, theta, alpha, beta, v1 })
}

/// A Poincare bundle exists on the smooth locus iff n*v = 1, equivalently
/// iff gcd(d + r(1-g), r(d+1-g), r(2g-2)) = 1. Both are computed; they must
/// agree.
pub fn poincare_bundle_exists(ctx: &NumericalContext) -> Result<bool> {
    let via_nv = ctx.n_rd * ctx.v_rdg == 1;
    let (r, d, g) = (ctx.r, ctx.d, ctx.g);
    let via_gcd =
        gcd(gcd(d + r * (1 - g), r * (d + 1 - g)), r * (2 * g - 2)) == 1;
    if via_nv != via_gcd {
        return Err(Error::Internal("the two Poincare-existence criteria disagree".into()));
    }
    Ok(via_nv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_examples() {
        let c = make_context(2, 3, 3).unwrap();
        assert_eq!((c.n_rd, c.v_rdg, c.k_rdg), (1, 1, 4));
        let c = make_context(2, 0, 3).unwrap();
        assert_eq!((c.n_rd, c.v_rdg, c.k_rdg), (2, 2, 1));
        // the classical v_{1, g-1, g} = 2g - 2
        for g in 2..10 {
            let c = make_context(1, g - 1, g).unwrap();
            assert_eq!(c.v_rdg, 2 * g - 2);
        }
        assert!(make_context(2, 0, 1).is_err());
        assert!(make_context(0, 0, 3).is_err());
    }

    #[test]
    fn res_weight_examples() {
        let c = make_context(2, 3, 3).unwrap();
        assert_eq!(res_weights(&c), [0, 2, 10, -1]);
        let c = make_context(1, 0, 2).unwrap();
        assert_eq!(res_weights(&c), [0, -1, 1, -1]);
        let c = make_context(2, 0, 3).unwrap();
        assert_eq!(res_weights(&c), [0, -4, 4, -4]);
        assert_eq!(res_image_generator(&c), 4);
        assert_eq!(res_image_generator(&make_context(2, 3, 3).unwrap()), 1);
    }

    #[test]
    fn weight_generator_matches_nv_on_grid() {
        for g in 2..=8 {
            for r in 1..=5 {
                for d in -12..=12 {
                    let c = make_context(r, d, g).unwrap();
                    assert_eq!(res_image_generator(&c), c.n_rd * c.v_rdg, "r={r} d={d} g={g}");
                }
            }
        }
    }

    #[test]
    fn xi_theta_examples() {
        let c = make_context(2, 3, 3).unwrap();
        let b = weight_zero_basis(&c).unwrap();
        assert_eq!(b.v1, 1);
        assert_eq!(b.xi, [0, 5, -1, 0]);
        // alpha (d+1-g) + beta (d+g-1) = alpha + 5 beta = -(1/1)(1/1)(-1) = 1
        assert_eq!(b.alpha * 1 + b.beta * 5, 1);
        assert_eq!(b.alpha, 1); // minimal |alpha|
        assert_eq!(b.theta[3], 2);

        let c = make_context(2, 0, 3).unwrap();
        let b = weight_zero_basis(&c).unwrap();
        assert_eq!(b.v1, 2);
        assert_eq!(b.xi, [0, 1, -(-2) / 2, 0]);
    }

    #[test]
    fn poincare_examples() {
        assert!(poincare_bundle_exists(&make_context(2, 3, 3).unwrap()).unwrap());
        assert!(!poincare_bundle_exists(&make_context(2, 0, 3).unwrap()).unwrap());
        assert!(!poincare_bundle_exists(&make_context(1, 1, 2).unwrap()).unwrap());
        assert!(poincare_bundle_exists(&make_context(1, 0, 2).unwrap()).unwrap());
    }
}
