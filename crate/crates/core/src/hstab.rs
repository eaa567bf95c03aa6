//! GIT weight computations for a two-component curve carrying the extremal
//! multidegree: the exact weight polynomial P(n, m) of a one-parameter
//! subgroup, the witness that every such point is strictly semistable, and
//! a slope-inequality oracle on two-vertex graphs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::balance::Multidegree;
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::poly::{brat, Poly2};

/// Two smooth components of genus g1 <= g2 meeting at N nodes. The bundle
/// restricted to the first component splits into stable summands of rank q
/// and equal slope; `alphas` are the weights of the one-parameter subgroup
/// acting on the summand filtration (one per summand, k = r/q of them).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComponentConfig {
    pub g1: i64,
    pub g2: i64,
    pub nodes: i64,
    pub r: i64,
    pub q: i64,
    pub d: i64,
    pub alphas: Vec<BigRational>,
}

impl TwoComponentConfig {
    pub fn new(g1: i64, g2: i64, nodes: i64, r: i64, q: i64, d: i64) -> Result<Self> {
        if g1 < 1 || g1 > g2 {
            return Err(Error::Validation("need 1 <= g1 <= g2".into()));
        }
        if nodes < 1 {
            return Err(Error::Validation("need at least one node".into()));
        }
        if r < 1 || q < 1 || r % q != 0 {
            return Err(Error::Validation("need q | r with r, q >= 1".into()));
        }
        let cfg = TwoComponentConfig {
            g1,
            g2,
            nodes,
            r,
            q,
            d,
            alphas: alloc::vec![BigRational::zero(); (r / q) as usize],
        };
        // both halves of the extremal multidegree must be integers, and the
        // summand degree e = d1 q / r as well
        let two_d1 = 2 * d * cfg.omega1();
        if two_d1 % cfg.omega_c() != 0 || (two_d1 / cfg.omega_c() - nodes * r) % 2 != 0 {
            return Err(Error::Validation(format!(
                "d omega_1 / omega_C - N r / 2 is not an integer for d = {d}"
            )));
        }
        if (cfg.d1() * q) % r != 0 {
            return Err(Error::Validation("summand degree d1 q / r is not an integer".into()));
        }
        Ok(cfg)
    }

    pub fn with_alphas(mut self, alphas: &[BigRational]) -> Result<Self> {
        if alphas.len() != self.summands() as usize {
            return Err(Error::Validation(format!(
                "expected {} subgroup weights, got {}",
                self.summands(),
                alphas.len()
            )));
        }
        if alphas.iter().any(|a| a < &BigRational::zero()) {
            return Err(Error::Validation("subgroup weights must be nonnegative".into()));
        }
        self.alphas = alphas.to_vec();
        Ok(self)
    }

    pub fn genus(&self) -> i64 {
        self.g1 + self.g2 + self.nodes - 1
    }

    pub fn omega1(&self) -> i64 {
        2 * self.g1 - 2 + self.nodes
    }

    pub fn omega2(&self) -> i64 {
        2 * self.g2 - 2 + self.nodes
    }

    pub fn omega_c(&self) -> i64 {
        2 * self.genus() - 2
    }

    pub fn summands(&self) -> i64 {
        self.r / self.q
    }

    /// Degree on the first component: d omega_1 / omega_C - N r / 2.
    pub fn d1(&self) -> i64 {
        (2 * self.d * self.omega1() / self.omega_c() - self.nodes * self.r) / 2
    }

    pub fn d2(&self) -> i64 {
        self.d - self.d1()
    }

    /// Degree of each stable summand on the first component.
    pub fn summand_degree(&self) -> i64 {
        self.d1() * self.q / self.r
    }
}

/// Euler characteristics of the twisted sheaves in the filtration, as
/// linear polynomials in the twist level n.
#[derive(Debug, Clone)]
pub struct ChiValues {
    /// chi of the whole bundle E(n).
    pub chi_e: Poly2,
    /// chi of the second-component part twisted down at the nodes.
    pub chi_f0: Poly2,
    /// chi of one stable summand on the first component.
    pub chi_g: Poly2,
    /// chi_f0 + i * chi_g for i = 0, ..., k.
    pub chi_f: Vec<Poly2>,
}

pub fn chi_values(cfg: &TwoComponentConfig) -> ChiValues {
    let g = cfg.genus();
    let chi_e = Poly2::linear_n(cfg.d + cfg.r * (1 - g), cfg.r * cfg.omega_c());
    let chi_f0 = Poly2::linear_n(
        cfg.d2() - cfg.r * cfg.nodes + cfg.r * (1 - cfg.g2),
        cfg.r * cfg.omega2(),
    );
    let chi_g =
        Poly2::linear_n(cfg.summand_degree() + cfg.q * (1 - cfg.g1), cfg.q * cfg.omega1());
    let chi_f = (0..=cfg.summands())
        .map(|i| chi_f0.add(&chi_g.scale(&brat(i))))
        .collect();
    ChiValues { chi_e, chi_f0, chi_g, chi_f }
}

// core assembly; d1 is passed separately (and rationally) so the witness
// can recompute with a perturbed multidegree
fn weight_polynomial_at(cfg: &TwoComponentConfig, d1: &BigRational) -> Poly2 {
    let (r, q, nn) = (cfg.r, cfg.q, cfg.nodes);
    let k = cfg.summands();
    let g = cfg.genus();
    let d2 = brat(cfg.d) - d1;
    let e = d1 * brat(q) / brat(r);

    let chi_e = Poly2::linear_n(cfg.d + r * (1 - g), r * cfg.omega_c());
    let chi_f0 = Poly2::linear_n(-r * nn + r * (1 - cfg.g2), r * cfg.omega2())
        .add(&Poly2::constant(d2.clone()));
    let chi_g = Poly2::linear_n(q * (1 - cfg.g1), q * cfg.omega1()).add(&Poly2::constant(e));
    let chi_f: Vec<Poly2> =
        (0..k).map(|i| chi_f0.add(&chi_g.scale(&brat(i)))).collect();

    let mut w1 = Poly2::zero();
    let mut w2 = Poly2::zero();
    let mut d2_term = Poly2::zero();
    let m = Poly2::var_m();
    let m2 = m.mul(&m);
    for (i, alpha) in cfg.alphas.iter().enumerate() {
        if alpha.is_zero() {
            continue;
        }
        let iq = i as i64 * q;
        w1 = w1.add(
            &chi_f[i]
                .scale(&brat(r))
                .sub(&chi_e.scale(&brat(iq)))
                .scale(alpha),
        );
        w2 = w2.add(&chi_f[i].sub(&chi_e).scale(&brat(r)).scale(alpha));
        // half-integer binomial factor (r - iq - 1)(r - iq) / 2
        let half_binom = brat((r - iq - 1) * (r - iq)) / brat(2);
        let quad = chi_f[i]
            .scale(&brat(r * r))
            .sub(&chi_e.scale(&(brat(r * r) - half_binom)))
            .mul(&m2);
        // m(m+1)/2 (r - iq) chi_e
        let tri = m2.add(&m).scale(&(brat(r - iq) / brat(2))).mul(&chi_e);
        d2_term = d2_term.add(&quad.add(&tri).scale(alpha));
    }
    d2_term = d2_term.scale(&brat(nn));

    // K_i = m (m (deg_i + n r omega_i) + 1 - g_i) w_i, where deg_1 = d1 and
    // deg_2 = d2 - rN (the second part is twisted down at the nodes)
    let inner1 = Poly2::linear_n(0, r * cfg.omega1()).add(&Poly2::constant(d1.clone()));
    let k1 = m.mul(&m.mul(&inner1).add(&Poly2::constant(brat(1 - cfg.g1)))).mul(&w1);
    let inner2 =
        Poly2::linear_n(-r * nn, r * cfg.omega2()).add(&Poly2::constant(d2.clone()));
    let k2 = m.mul(&m.mul(&inner2).add(&Poly2::constant(brat(1 - cfg.g2)))).mul(&w2);

    k1.add(&k2).add(&d2_term).sub(&m.scale(&brat(nn)).mul(&w1))
}

/// The weight polynomial P(n, m) of the one-parameter subgroup encoded by
/// cfg.alphas, exact in both variables.
pub fn weight_polynomial(cfg: &TwoComponentConfig) -> Poly2 {
    weight_polynomial_at(cfg, &brat(cfg.d1()))
}

/// P for the simplex vertex alpha = e_t (all weight on summand t).
pub fn vertex_weight_polynomial(cfg: &TwoComponentConfig, t: usize) -> Result<Poly2> {
    let k = cfg.summands() as usize;
    if t >= k {
        return Err(Error::Validation(format!("summand index {t} out of range 0..{k}")));
    }
    let mut alphas = alloc::vec![BigRational::zero(); k];
    alphas[t] = brat(1);
    let v = cfg.clone().with_alphas(&alphas)?;
    Ok(weight_polynomial_at(&v, &brat(cfg.d1())))
}

/// Smallest twist level making every chi in the filtration positive.
pub fn n_zero(cfg: &TwoComponentConfig) -> i64 {
    let chis = chi_values(cfg);
    // chi_f = chi_f0 + i chi_g is positive once chi_f0 and chi_g are
    let mut n = 0;
    for chi in [&chis.chi_e, &chis.chi_f0, &chis.chi_g] {
        while chi.eval(0, n) <= BigRational::zero() {
            n += 1;
        }
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessVerdict {
    StrictlySemistable,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub verdict: WitnessVerdict,
    pub n_zero: i64,
    /// Simplex vertices whose weight polynomial vanishes identically.
    pub zero_vertices: Vec<usize>,
    /// (vertex, n, offending m-coefficient) for any positive coefficient.
    pub positive_coefficients: Vec<(usize, i64, String)>,
}

fn witness_at(cfg: &TwoComponentConfig, d1: &BigRational, n0: i64) -> Result<WitnessReport> {
    let k = cfg.summands() as usize;
    let mut zero_vertices = Vec::new();
    let mut positive = Vec::new();
    for t in 0..k {
        let mut alphas = alloc::vec![BigRational::zero(); k];
        alphas[t] = brat(1);
        let v = cfg.clone().with_alphas(&alphas)?;
        let p = weight_polynomial_at(&v, d1);
        if p.is_zero() {
            zero_vertices.push(t);
            continue;
        }
        for n in n0..=n0 + 5 {
            for (deg, c) in p.eval_n(n).iter().enumerate() {
                if c > &BigRational::zero() {
                    positive.push((t, n, format!("coefficient of m^{deg} is {c}")));
                }
            }
        }
    }
    let verdict = if positive.is_empty() && !zero_vertices.is_empty() {
        WitnessVerdict::StrictlySemistable
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(WitnessReport { verdict, n_zero: n0, zero_vertices, positive_coefficients: positive })
}

/// Checks the strict-semistability criterion: by linearity in the subgroup
/// weights it is enough that every simplex vertex has P coefficientwise
/// nonpositive on a window of twist levels, with at least one vertex
/// identically zero.
pub fn is_h_semistable_witness(cfg: &TwoComponentConfig) -> Result<WitnessReport> {
    witness_at(cfg, &brat(cfg.d1()), n_zero(cfg))
}

/// Same check but starting the twist-level window at an explicit n instead
/// of the smallest one that makes the Euler characteristics positive.
pub fn witness_from(cfg: &TwoComponentConfig, n_start: i64) -> Result<WitnessReport> {
    witness_at(cfg, &brat(cfg.d1()), n_start)
}

/// Same computation with the first-component degree shifted away from the
/// extremal value; used to confirm the witness is not vacuous.
pub fn shifted_witness(cfg: &TwoComponentConfig, shift: i64) -> Result<WitnessReport> {
    witness_at(cfg, &(brat(cfg.d1()) + brat(shift)), n_zero(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeFindingKind {
    SubsheafViolation,
    SubsheafSaturation,
    QuotientViolation,
    QuotientSaturation,
}

#[derive(Debug, Clone)]
pub struct SlopeFinding {
    pub kind: SlopeFindingKind,
    pub multirank: (i64, i64),
}

/// Result of the slope oracle: violations rule out semistability; with no
/// violations, saturations flag strictly-semistable candidates.
#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub violations: Vec<SlopeFinding>,
    pub saturations: Vec<SlopeFinding>,
}

impl SlopeReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Slope-inequality scan on a stable two-vertex graph: checks the
/// node-twisted restrictions as candidate subsheaves over all multiranks,
/// and the two restriction quotients. A necessary condition only — full
/// semistability quantifies over all subsheaves, which needs more than
/// multidegree data.
pub fn p_slope_check(graph: &DualGraph, md: &Multidegree, n: i64) -> Result<SlopeReport> {
    if graph.vertex_count() != 2 {
        return Err(Error::Validation("the slope oracle handles exactly two components".into()));
    }
    if !graph.is_stable() {
        return Err(Error::Domain("the slope inequalities are defined over stable curves".into()));
    }
    md.check_matches(graph)?;
    let r = md.rank();
    let z1 = graph.subcurve_from_mask(0b01)?;
    let z2 = graph.subcurve_from_mask(0b10)?;
    let full = graph.full_subcurve();
    let omega = [graph.omega(&z1)?, graph.omega(&z2)?];
    let omega_c = graph.omega(&full)?;
    let nodes = graph.k_z(&z1)?;
    let genus = [graph.subcurve_genus(&z1)?, graph.subcurve_genus(&z2)?];
    let g = graph.arithmetic_genus();
    let deg = [md.degree_on(graph, &z1)?, md.degree_on(graph, &z2)?];
    let chi = [
        BigInt::from(deg[0] + n * r * omega[0] + r * (1 - genus[0])),
        BigInt::from(deg[1] + n * r * omega[1] + r * (1 - genus[1])),
    ];
    let chi_e = BigInt::from(md.total_degree() + n * r * omega_c + r * (1 - g));

    let mut violations = Vec::new();
    let mut saturations = Vec::new();
    // candidate subsheaves: multirank (m1, m2) pieces of the restrictions,
    // twisted down at the nodes; chi bound r * chi(F) <= m1(chi1 - rN) + m2(chi2 - rN)
    for m1 in 0..=r {
        for m2 in 0..=r {
            if (m1 == 0 && m2 == 0) || (m1 == r && m2 == r) {
                continue;
            }
            let bound = BigInt::from(m1) * (&chi[0] - BigInt::from(r * nodes))
                + BigInt::from(m2) * (&chi[1] - BigInt::from(r * nodes));
            let lhs = bound * BigInt::from(omega_c);
            let rhs = BigInt::from(m1 * omega[0] + m2 * omega[1]) * &chi_e;
            if lhs > rhs {
                violations.push(SlopeFinding {
                    kind: SlopeFindingKind::SubsheafViolation,
                    multirank: (m1, m2),
                });
            } else if lhs == rhs {
                saturations.push(SlopeFinding {
                    kind: SlopeFindingKind::SubsheafSaturation,
                    multirank: (m1, m2),
                });
            }
        }
    }
    // restriction quotients E -> E_{C_i}: need chi_i omega_C >= omega_i chi_E
    for side in 0..2 {
        let lhs = &chi[side] * BigInt::from(omega_c);
        let rhs = BigInt::from(omega[side]) * &chi_e;
        let multirank = if side == 0 { (r, 0) } else { (0, r) };
        if lhs < rhs {
            violations.push(SlopeFinding { kind: SlopeFindingKind::QuotientViolation, multirank });
        } else if lhs == rhs {
            saturations.push(SlopeFinding { kind: SlopeFindingKind::QuotientSaturation, multirank });
        }
    }
    Ok(SlopeReport { violations, saturations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::{basic_inequality_slack, is_balanced, BalanceMode};

    fn cfg(g1: i64, g2: i64, nodes: i64, r: i64, q: i64, d: i64) -> TwoComponentConfig {
        TwoComponentConfig::new(g1, g2, nodes, r, q, d).unwrap()
    }

    #[test]
    fn chi_examples() {
        // g1 = g2 = 2, N = 1, r = 2, q = 2, d = 2: d1 = 0, chi(E(0)) = -4
        let c = cfg(2, 2, 1, 2, 2, 2);
        assert_eq!(c.d1(), 0);
        let chis = chi_values(&c);
        assert_eq!(chis.chi_e.eval(0, 0), brat(-4));
        // twist shift adds r * omega_C
        assert_eq!(
            chis.chi_e.eval(0, 7) - chis.chi_e.eval(0, 6),
            brat(c.r * c.omega_c())
        );
        // the extremal multidegree makes omega_C chi(E_{C1}) = omega_1 chi(E)
        let chi_c1 = c.d1() + c.r * (1 - c.g1);
        assert_eq!(brat(c.omega_c() * chi_c1), chis.chi_e.eval(0, 0) * brat(c.omega1()));
    }

    #[test]
    fn zero_alphas_give_zero_polynomial() {
        let c = cfg(2, 2, 2, 4, 2, 4);
        assert!(weight_polynomial(&c).is_zero());
    }

    #[test]
    fn destabilizing_vertex_vanishes() {
        for c in [cfg(2, 2, 1, 2, 1, 2), cfg(1, 3, 2, 3, 1, 0), cfg(2, 2, 2, 4, 2, 4)] {
            let p0 = vertex_weight_polynomial(&c, 0).unwrap();
            assert!(p0.is_zero(), "lowest-filtration vertex must vanish for {c:?}");
            let rep = is_h_semistable_witness(&c).unwrap();
            assert_eq!(rep.verdict, WitnessVerdict::StrictlySemistable);
            assert_eq!(rep.zero_vertices, alloc::vec![0]);
        }
    }

    #[test]
    fn alpha_linearity() {
        let base = cfg(2, 2, 2, 4, 1, 8);
        let a = base.clone().with_alphas(&[brat(1), brat(0), brat(2), brat(0)]).unwrap();
        let b = base.clone().with_alphas(&[brat(0), brat(3), brat(0), brat(1)]).unwrap();
        let sum = base.clone().with_alphas(&[brat(1), brat(3), brat(2), brat(1)]).unwrap();
        assert_eq!(
            weight_polynomial(&a).add(&weight_polynomial(&b)).coeffs(),
            weight_polynomial(&sum).coeffs()
        );
        let scaled = base.with_alphas(&[brat(2), brat(0), brat(4), brat(0)]).unwrap();
        assert_eq!(weight_polynomial(&a).scale(&brat(2)).coeffs(), weight_polynomial(&scaled).coeffs());
    }

    #[test]
    fn perturbed_degree_is_inconclusive() {
        for c in [cfg(2, 2, 1, 2, 1, 2), cfg(2, 2, 2, 4, 2, 4)] {
            let rep = shifted_witness(&c, 1).unwrap();
            assert_eq!(rep.verdict, WitnessVerdict::Inconclusive);
            assert!(rep.zero_vertices.is_empty());
        }
    }

    #[test]
    fn single_summand_degenerate_case() {
        // r = q: one summand, vertex 0 is the whole filtration and P == 0
        let c = cfg(2, 2, 1, 2, 2, 2);
        let rep = is_h_semistable_witness(&c).unwrap();
        assert_eq!(rep.verdict, WitnessVerdict::StrictlySemistable);
    }

    #[test]
    fn extremal_configuration_has_zero_slack() {
        let c = cfg(2, 3, 2, 4, 2, 10);
        let graph = DualGraph::new(&[("a", 2), ("b", 3)], &[("a", "b"), ("a", "b")]).unwrap();
        let md = Multidegree::from_pairs(4, &[("a", c.d1()), ("b", c.d2())]).unwrap();
        let z = graph.subcurve_from_ids(&["a"]).unwrap();
        let slack = basic_inequality_slack(&graph, &md, &z).unwrap();
        assert!(slack.numer().is_zero());
    }

    #[test]
    fn slope_oracle_examples() {
        let graph = DualGraph::new(&[("a", 2), ("b", 3)], &[("a", "b"), ("a", "b")]).unwrap();
        let c = cfg(2, 3, 2, 4, 2, 10); // d1 = 0, d2 = 10
        let extremal = Multidegree::from_pairs(4, &[("a", c.d1()), ("b", c.d2())]).unwrap();
        let rep = p_slope_check(&graph, &extremal, 5).unwrap();
        assert!(rep.passes());
        assert!(rep
            .saturations
            .iter()
            .any(|f| f.kind == SlopeFindingKind::QuotientSaturation && f.multirank == (4, 0)));
        assert!(rep
            .saturations
            .iter()
            .any(|f| f.kind == SlopeFindingKind::SubsheafSaturation && f.multirank == (0, 4)));

        // strictly interior balanced multidegree: no saturation
        let interior = Multidegree::from_pairs(4, &[("a", c.d1() + 2), ("b", c.d2() - 2)]).unwrap();
        assert!(is_balanced(&graph, &interior, BalanceMode::All).unwrap());
        let rep = p_slope_check(&graph, &interior, 5).unwrap();
        assert!(rep.passes());
        assert!(rep.saturations.is_empty());

        // unbalanced: violation
        let unbalanced =
            Multidegree::from_pairs(4, &[("a", c.d1() - 1), ("b", c.d2() + 1)]).unwrap();
        assert!(!is_balanced(&graph, &unbalanced, BalanceMode::All).unwrap());
        let rep = p_slope_check(&graph, &unbalanced, 5).unwrap();
        assert!(!rep.passes());
    }
}
