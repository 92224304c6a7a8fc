//! Monomial representations `u_i * z_i^(a_i) = sum_j b_ij * xi_j`.
//!
//! The search sets up, for one row at a time, an exact linear system in the
//! unknown coefficients of the cofactors `b_ij` (and of the unit `u_i`) and
//! solves it over the rationals. A solution is an exact polynomial identity,
//! so finding one certifies that the origin is an isolated zero of the germ.
//!
//! The unit `u_i` has constant term 1 and is allowed to be non-trivial only
//! so that germs with further zeros away from the origin (for instance
//! `z1 * (1 + z1)`) still admit an identity; when a representation with
//! `u_i = 1` exists at the same degree the solver prefers it, because the
//! unit's coefficients occupy the last columns and are therefore the first
//! to be set to zero.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::germ::VectorFieldGerm;
use crate::arith::{linsolve, Monomial, Poly, PolyMatrix, Rat, VarList};
use crate::error::{Error, Result};

/// Search budget for [`find_monomial_representation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest exponent `a_i` tried for each coordinate.
    pub max_exponent: u32,
    /// Largest total degree allowed for the cofactors `b_ij`.
    pub max_cofactor_degree: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_exponent: 8,
            max_cofactor_degree: 10,
        }
    }
}

/// Exponents, cofactor matrix and unit multipliers of an identity
/// `u_i * z_i^(a_i) = sum_j b_ij * xi_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialRepresentation {
    pub exponents: Vec<u32>,
    pub cofactors: PolyMatrix,
    pub units: Vec<Poly>,
}

impl MonomialRepresentation {
    /// A representation with trivial units.
    pub fn new(exponents: Vec<u32>, cofactors: PolyMatrix) -> Self {
        let one = Poly::one(cofactors.vars().clone());
        let units = vec![one; exponents.len()];
        MonomialRepresentation {
            exponents,
            cofactors,
            units,
        }
    }

    /// True if every unit is the constant 1.
    pub fn is_pure(&self) -> bool {
        self.units.iter().all(|u| u.is_constant() && u.constant_term().is_one())
    }

    /// Moves the cofactors and units to `vars` (e.g. the germ's ambient ring
    /// including parameters).
    pub fn rebase(&self, vars: &VarList) -> Result<Self> {
        let cofactors = self
            .cofactors
            .map(|p| p.rebase(vars).expect("germ coordinates exist in the target"))?;
        let units = self.units.iter().map(|u| u.rebase(vars)).collect::<Result<_>>()?;
        Ok(MonomialRepresentation {
            exponents: self.exponents.clone(),
            cofactors,
            units,
        })
    }

    /// Checks the identity for every row by full expansion.
    pub fn verify(&self, germ: &VectorFieldGerm) -> Result<()> {
        let n = germ.dim();
        if self.exponents.len() != n
            || self.units.len() != n
            || self.cofactors.rows() != n
            || self.cofactors.cols() != n
        {
            return Err(Error::Integrity(format!(
                "representation has the wrong shape for a {n}-dimensional germ"
            )));
        }
        if self.exponents.contains(&0) {
            return Err(Error::Integrity("representation exponents must be positive".into()));
        }
        let rep = if self.cofactors.vars() == germ.vars() {
            self.clone()
        } else {
            self.rebase(germ.vars())?
        };
        for i in 0..n {
            let u = &rep.units[i];
            if germ.at_origin(u)?.is_zero() {
                return Err(Error::Integrity(format!(
                    "unit multiplier of row {} vanishes at the origin",
                    i + 1
                )));
            }
            let zi = Poly::var_at(germ.vars(), i).pow(rep.exponents[i]);
            let lhs = u * &zi;
            let rhs = (0..n).fold(Poly::zero(germ.vars().clone()), |acc, j| {
                &acc + &(rep.cofactors.get(i, j) * &germ.components()[j])
            });
            let diff = &lhs - &rhs;
            if !diff.is_zero() {
                return Err(Error::Integrity(format!(
                    "row {} of the representation does not expand correctly (difference {diff})",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MonomialRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonomialRepresentation")
            .field("exponents", &self.exponents)
            .field("cofactors", &self.cofactors)
            .field("units", &self.units)
            .finish()
    }
}

/// Searches for a monomial representation of a germ with rational
/// coefficients.
///
/// Escalation is degree-major: for cofactor degree `D = 0, 1, ...` and each
/// coordinate independently, the smallest exponent `a_i <= max_exponent`
/// for which the system is solvable is accepted. Rows that succeed at a
/// lower degree keep that solution.
pub fn find_monomial_representation(germ: &VectorFieldGerm, caps: Caps) -> Result<MonomialRepresentation> {
    if germ.is_symbolic() {
        return Err(Error::usage(
            "representation search needs rational coefficients; the germ depends on parameters",
        ));
    }
    let n = germ.dim();
    let local = VarList::new(germ.vars().names()[..n].iter())?;
    let components = germ
        .components()
        .iter()
        .map(|c| c.rebase(&local))
        .collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<Option<(u32, Vec<Poly>, Poly)>> = vec![None; n];
    for degree in 0..=caps.max_cofactor_degree {
        let multipliers = Monomial::up_to_degree(n, degree);
        for (i, slot) in rows.iter_mut().enumerate() {
            if slot.is_some() {
                continue;
            }
            for a in 1..=caps.max_exponent {
                if let Some(found) = solve_row(&local, &components, &multipliers, i, a) {
                    *slot = Some((a, found.0, found.1));
                    break;
                }
            }
        }
        if rows.iter().all(Option::is_some) {
            break;
        }
    }

    if rows.iter().any(Option::is_none) {
        return Err(Error::CapsExhausted {
            max_exponent: caps.max_exponent,
            max_degree: caps.max_cofactor_degree,
        });
    }
    let mut exponents = Vec::with_capacity(n);
    let mut entries = Vec::with_capacity(n * n);
    let mut units = Vec::with_capacity(n);
    for (a, b, u) in rows.into_iter().flatten() {
        exponents.push(a);
        entries.extend(b);
        units.push(u);
    }
    let rep = MonomialRepresentation {
        exponents,
        cofactors: PolyMatrix::new(n, n, local, entries)?,
        units,
    }
    .rebase(germ.vars())?;
    rep.verify(germ)?;
    Ok(rep)
}

/// One row: find `b_j` (degree <= D) and `u = 1 + ...` (degree <= D) with
/// `u * z_i^a = sum_j b_j * xi_j`.
fn solve_row(
    vars: &VarList,
    components: &[Poly],
    multipliers: &[Monomial],
    row: usize,
    a: u32,
) -> Option<(Vec<Poly>, Poly)> {
    let n = components.len();
    let target = Monomial::new((0..n).map(|k| if k == row { a } else { 0 }).collect());
    let unit_monomials: Vec<&Monomial> = multipliers.iter().filter(|m| !m.is_one()).collect();

    // Columns: b_{j,m} for each component j and multiplier m, then u_m.
    let mut columns: Vec<Vec<(Monomial, Rat)>> = Vec::new();
    for c in components {
        for m in multipliers {
            columns.push(c.terms().map(|(cm, cc)| (cm.mul(m), cc.clone())).collect());
        }
    }
    for m in &unit_monomials {
        columns.push(vec![(target.mul(m), -Rat::one())]);
    }

    let mut row_of: HashMap<Monomial, usize> = HashMap::new();
    let mut order: Vec<Monomial> = Vec::new();
    let mut index = |m: &Monomial, order: &mut Vec<Monomial>| {
        *row_of.entry(m.clone()).or_insert_with(|| {
            order.push(m.clone());
            order.len() - 1
        })
    };
    let target_row = index(&target, &mut order);
    let mut sparse: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(columns.len());
    for col in &columns {
        sparse.push(col.iter().map(|(m, c)| (index(m, &mut order), c.clone())).collect());
    }

    let ncols = columns.len();
    let mut matrix = vec![vec![Rat::zero(); ncols]; order.len()];
    for (j, col) in sparse.iter().enumerate() {
        for (r, c) in col {
            matrix[*r][j] += c;
        }
    }
    let mut rhs = vec![Rat::zero(); order.len()];
    rhs[target_row] = Rat::one();

    let x = linsolve::solve(&matrix, &rhs, ncols)?;

    let mut cofactors = Vec::with_capacity(n);
    let per = multipliers.len();
    for j in 0..n {
        let terms = multipliers
            .iter()
            .zip(&x[j * per..(j + 1) * per])
            .map(|(m, c)| (m.clone(), c.clone()));
        cofactors.push(Poly::from_terms(vars.clone(), terms).ok()?);
    }
    let unit_terms = std::iter::once((Monomial::one(n), Rat::one())).chain(
        unit_monomials
            .iter()
            .zip(&x[n * per..])
            .map(|(m, c)| ((*m).clone(), c.clone())),
    );
    let unit = Poly::from_terms(vars.clone(), unit_terms).ok()?;
    Some((cofactors, unit))
}
