//! Finitely generated abelian presentations of the Picard groups of the
//! moduli stacks, across the open/compactified and rigidified variants, and
//! the lattice facts behind them (kernel of the weight map, exactness of the
//! boundary sequence).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::boundary::boundary_indices;
use crate::error::{Error, Result};
use crate::invariants::{res_weights, weight_zero_basis, NumericalContext};
use crate::snf::{determinant, kernel_of_functional, smith_normal_form};

/// Which moduli stack. `Vec*` are the stacks of vector bundles; `V*` their
/// rigidifications by the central torus. `Bar` is the full compactification,
/// `Pss`/`Hss` its P-/H-semistable open substacks (same boundary set),
/// `Ps`/`Hs` the stable loci (extremal boundary divisors fall away).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackTag {
    Vec,
    VecBar,
    VecPss,
    VecHss,
    VecPs,
    VecHs,
    V,
    VBar,
    VPss,
    VHss,
    VPs,
    VHs,
}

/// Which boundary symbols a tag carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryScope {
    None,
    All,
    NonExtremal,
}

impl StackTag {
    pub const ALL: [StackTag; 12] = [
        StackTag::Vec,
        StackTag::VecBar,
        StackTag::VecPss,
        StackTag::VecHss,
        StackTag::VecPs,
        StackTag::VecHs,
        StackTag::V,
        StackTag::VBar,
        StackTag::VPss,
        StackTag::VHss,
        StackTag::VPs,
        StackTag::VHs,
    ];

    pub fn parse(s: &str) -> Result<StackTag> {
        for t in StackTag::ALL {
            if t.label().eq_ignore_ascii_case(s) {
                return Ok(t);
            }
        }
        Err(Error::Validation(format!("unknown stack tag '{s}'")))
    }

    pub fn label(&self) -> &'static str {
        match self {
            StackTag::Vec => "Vec",
            StackTag::VecBar => "VecBar",
            StackTag::VecPss => "VecPss",
            StackTag::VecHss => "VecHss",
            StackTag::VecPs => "VecPs",
            StackTag::VecHs => "VecHs",
            StackTag::V => "V",
            StackTag::VBar => "VBar",
            StackTag::VPss => "VPss",
            StackTag::VHss => "VHss",
            StackTag::VPs => "VPs",
            StackTag::VHs => "VHs",
        }
    }

    pub fn is_rigidified(&self) -> bool {
        matches!(
            self,
            StackTag::V
                | StackTag::VBar
                | StackTag::VPss
                | StackTag::VHss
                | StackTag::VPs
                | StackTag::VHs
        )
    }

    pub fn boundary_scope(&self) -> BoundaryScope {
        match self {
            StackTag::Vec | StackTag::V => BoundaryScope::None,
            StackTag::VecBar
            | StackTag::VecPss
            | StackTag::VecHss
            | StackTag::VBar
            | StackTag::VPss
            | StackTag::VHss => BoundaryScope::All,
            StackTag::VecPs | StackTag::VecHs | StackTag::VPs | StackTag::VHs => {
                BoundaryScope::NonExtremal
            }
        }
    }

    pub fn smooth_counterpart(&self) -> StackTag {
        if self.is_rigidified() {
            StackTag::V
        } else {
            StackTag::Vec
        }
    }
}

/// <generators | rows of `relations`>; relation entries follow the
/// generator order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<BigInt>>,
}

impl AbelianPresentation {
    fn relation_rank_and_factors(&self) -> (usize, Vec<BigInt>) {
        if self.relations.is_empty() {
            return (0, Vec::new());
        }
        let snf = smith_normal_form(&self.relations);
        let nonzero: Vec<BigInt> = snf.diag.iter().filter(|d| !d.is_zero()).cloned().collect();
        let rank = nonzero.len();
        let factors = nonzero.into_iter().filter(|d| *d > BigInt::one()).collect();
        (rank, factors)
    }

    /// Nontrivial invariant factors of the torsion part.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.relation_rank_and_factors().1
    }

    pub fn free_rank(&self) -> usize {
        self.generators.len() - self.relation_rank_and_factors().0
    }

    /// Quotient by the subgroup generated by a set of generators: drop the
    /// columns (equivalently, add relations killing them).
    pub fn quotient_by(&self, names: &[String]) -> AbelianPresentation {
        let keep: Vec<usize> = (0..self.generators.len())
            .filter(|&i| !names.contains(&self.generators[i]))
            .collect();
        AbelianPresentation {
            generators: keep.iter().map(|&i| self.generators[i].clone()).collect(),
            relations: self
                .relations
                .iter()
                .map(|row| keep.iter().map(|&i| row[i].clone()).collect())
                .collect(),
        }
    }
}

pub fn delta_name(i: i64, j: i64) -> String {
    format!("delta({i},{j})")
}

fn check_supported(tag: StackTag, ctx: &NumericalContext) -> Result<()> {
    if ctx.g >= 3 {
        return Ok(());
    }
    // genus 2: only the full compactification and the P-semistable locus
    // (and the open stacks) have known presentations
    let ok = matches!(
        tag,
        StackTag::Vec
            | StackTag::VecBar
            | StackTag::VecPss
            | StackTag::V
            | StackTag::VBar
            | StackTag::VPss
    );
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "no known Picard presentation for tag {} at genus 2",
            tag.label()
        )))
    }
}

/// Presentation of Pic of the given stack. Generators: the four tautological
/// classes (or Lambda(1,0,0), Xi, Theta after rigidification), plus the
/// boundary divisors the tag carries. Free for g >= 3; at genus 2 there is
/// one relation, Lambda(1,0,0)^10 = O(boundary part).
pub fn picard_presentation(tag: StackTag, ctx: &NumericalContext) -> Result<AbelianPresentation> {
    check_supported(tag, ctx)?;
    let mut generators: Vec<String> = if tag.is_rigidified() {
        weight_zero_basis(ctx)?; // validates Xi/Theta exist for this (r, d, g)
        alloc::vec!["Lambda(1,0,0)".into(), "Xi".into(), "Theta".into()]
    } else {
        alloc::vec![
            "Lambda(1,0,0)".into(),
            "Lambda(0,1,0)".into(),
            "Lambda(1,1,0)".into(),
            "Lambda(0,0,1)".into(),
        ]
    };
    let base_len = generators.len();
    let mut boundary_cols: Vec<(i64, i64)> = Vec::new();
    match tag.boundary_scope() {
        BoundaryScope::None => {}
        BoundaryScope::All => {
            for b in boundary_indices(ctx)? {
                boundary_cols.push((b.i, b.j));
            }
        }
        BoundaryScope::NonExtremal => {
            for b in boundary_indices(ctx)? {
                if !b.extremal {
                    boundary_cols.push((b.i, b.j));
                }
            }
        }
    }
    for &(i, j) in &boundary_cols {
        generators.push(delta_name(i, j));
    }

    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    if ctx.g == 2 {
        // unique relation: Lambda(1,0,0)^10 = O on the open stack,
        // = O(delta(0,0) + 2 sum_j delta(1,j)) on the compactification
        let mut row = alloc::vec![BigInt::zero(); generators.len()];
        row[0] = BigInt::from(10);
        for (k, &(i, _)) in boundary_cols.iter().enumerate() {
            row[base_len + k] = if i == 0 { BigInt::from(-1) } else { BigInt::from(-2) };
        }
        relations.push(row);
    }
    Ok(AbelianPresentation { generators, relations })
}

/// Index of the sublattice generated by Lambda(1,0,0), Xi, Theta inside the
/// kernel of the weight functional on the tautological lattice. The
/// presentations of the rigidified stacks are valid precisely because this
/// index is 1.
pub fn kernel_of_res_index(ctx: &NumericalContext) -> Result<BigInt> {
    if ctx.g < 3 {
        return Err(Error::Domain("the weight-kernel computation needs genus >= 3".into()));
    }
    let w = res_weights(ctx);
    let wz = weight_zero_basis(ctx)?;
    let gens: [[i64; 4]; 3] = [[1, 0, 0, 0], wz.xi, wz.theta];
    for row in &gens {
        let dot: i64 = row.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
        if dot != 0 {
            return Err(Error::Internal("generator is not in the weight kernel".into()));
        }
    }
    // kernel lattice basis (saturated), then solve gens = C * basis and take
    // |det C|; C is integral because the kernel lattice is saturated
    let basis = kernel_of_functional(&w);
    let c = solve_in_basis(&basis, &gens)?;
    Ok(determinant(&c).abs())
}

// solves each target row as an integer combination of the basis rows
fn solve_in_basis(basis: &[Vec<BigInt>], targets: &[[i64; 4]; 3]) -> Result<Vec<Vec<BigInt>>> {
    use num_rational::BigRational;
    let k = basis.len();
    let n = basis[0].len();
    let mut out = Vec::with_capacity(targets.len());
    for target in targets {
        // gaussian elimination on the k x (k+1) system basis^T * c = target
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|col| {
                let mut row: Vec<BigRational> =
                    (0..k).map(|b| BigRational::from_integer(basis[b][col].clone())).collect();
                row.push(BigRational::from_integer(BigInt::from(target[col])));
                row
            })
            .collect();
        let mut piv_row = 0usize;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for col in 0..k {
            let Some(r) = (piv_row..n).find(|&r| !aug[r][col].is_zero()) else { continue };
            aug.swap(piv_row, r);
            let p = aug[piv_row][col].clone();
            for row in 0..n {
                if row != piv_row && !aug[row][col].is_zero() {
                    let f = &aug[row][col] / &p;
                    for c in 0..=k {
                        let s = &f * &aug[piv_row][c];
                        aug[row][c] -= s;
                    }
                }
            }
            pivots.push((piv_row, col));
            piv_row += 1;
        }
        let mut coeffs = alloc::vec![BigRational::from_integer(BigInt::zero()); k];
        for &(row, col) in &pivots {
            coeffs[col] = &aug[row][k] / &aug[row][col];
        }
        // consistency of the non-pivot rows
        for row in piv_row..n {
            if !aug[row][k].is_zero() {
                return Err(Error::Internal("target is not in the kernel lattice".into()));
            }
        }
        let mut int_row = Vec::with_capacity(k);
        for c in coeffs {
            if !c.is_integer() {
                return Err(Error::Internal("kernel coordinates are not integral".into()));
            }
            int_row.push(c.to_integer());
        }
        out.push(int_row);
    }
    Ok(out)
}

/// Comparison data for the localization sequence: quotienting the
/// compactified presentation by its boundary generators must reproduce the
/// smooth-locus presentation (same invariant factors and free rank).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub matches: bool,
    pub quotient_factors: Vec<BigInt>,
    pub quotient_free_rank: usize,
    pub smooth_factors: Vec<BigInt>,
    pub smooth_free_rank: usize,
}

pub fn boundary_exactness(tag: StackTag, ctx: &NumericalContext) -> Result<ExactnessReport> {
    if tag.boundary_scope() == BoundaryScope::None {
        return Err(Error::Domain("boundary exactness needs a compactified tag".into()));
    }
    let p = picard_presentation(tag, ctx)?;
    let boundary: Vec<String> =
        p.generators.iter().filter(|gname| gname.starts_with("delta(")).cloned().collect();
    let q = p.quotient_by(&boundary);
    let s = picard_presentation(tag.smooth_counterpart(), ctx)?;
    let (qf, qr) = (q.invariant_factors(), q.free_rank());
    let (sf, sr) = (s.invariant_factors(), s.free_rank());
    Ok(ExactnessReport {
        matches: qf == sf && qr == sr,
        quotient_factors: qf,
        quotient_free_rank: qr,
        smooth_factors: sf,
        smooth_free_rank: sr,
    })
}
