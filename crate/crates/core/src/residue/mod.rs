//! Grothendieck point residues
//!
//! `Res_0 { h dz_1 ^ ... ^ dz_n / (xi_1 ... xi_n) }` for a germ `xi` with an
//! isolated zero at the origin and a polynomial numerator `h`.
//!
//! Two evaluation routes are provided:
//!
//! - at a non-degenerate zero (`det J(0) != 0`), the closed form
//!   `h(0) / det J(0)`;
//! - in general, the transformation law. Given `z_i^(a_i) = sum_j b_ij xi_j`,
//!
//!   ```text
//!   Res = 1 / prod (a_i - 1)!  *  d^(a_1 - 1) ... d^(a_n - 1) [ det(b) h ] (0)
//!   ```
//!
//!   with derivative order `a_i - 1` in the `i`-th coordinate.
//!
//! Germs may carry symbolic parameters in their coefficients (see
//! [`VectorFieldGerm`]); residues are then rational functions of those
//! parameters. The representation search needs rational coefficients, so
//! degenerate germs must be parameter-free.

mod germ;
mod representation;

pub use germ::{jacobian, VectorFieldGerm};
pub use representation::{find_monomial_representation, Caps, MonomialRepresentation};

use num_traits::Signed;

use crate::arith::{factorial, Poly, RatFunc, Value};
use crate::error::{Error, Result};

/// True iff the Jacobian determinant does not vanish at the origin (as an
/// element of the parameter ring, for symbolic germs).
pub fn is_nondegenerate(germ: &VectorFieldGerm) -> bool {
    germ.jacobian()
        .det()
        .and_then(|d| germ.at_origin(&d))
        .map(|d| !d.is_zero())
        .unwrap_or(false)
}

/// `h(0) / det J(0)` as a rational function of the germ's parameters.
pub(crate) fn nondegenerate_ratfunc(germ: &VectorFieldGerm, numerator: &Poly) -> Result<RatFunc> {
    germ.check_numerator(numerator)?;
    let n = germ.dim();
    let jac = germ.jacobian();
    let at0 = jac.map(|p| germ.at_origin(p).expect("entries live over the germ ring"))?;
    let det = at0.det()?;
    if det.is_zero() {
        return Err(Error::Contract(
            "closed-form residue requested at a degenerate zero".into(),
        ));
    }
    let triangular = (0..n).all(|i| (0..i).all(|j| at0.get(i, j).is_zero()))
        || (0..n).all(|i| (i + 1..n).all(|j| at0.get(i, j).is_zero()));
    let factors: Vec<(Poly, u32)> = if triangular {
        (0..n).map(|i| (at0.get(i, i).clone(), 1)).collect()
    } else {
        vec![(det, 1)]
    };
    RatFunc::new(germ.at_origin(numerator)?, factors)
}

/// Closed-form residue at a non-degenerate zero.
pub fn nondegenerate_residue(germ: &VectorFieldGerm, numerator: &Poly) -> Result<Value> {
    nondegenerate_ratfunc(germ, numerator).map(Value::from)
}

pub(crate) fn representation_ratfunc(
    germ: &VectorFieldGerm,
    rep: &MonomialRepresentation,
    numerator: &Poly,
) -> Result<RatFunc> {
    germ.check_numerator(numerator)?;
    rep.verify(germ)?;
    let rep = if rep.cofactors.vars() == germ.vars() {
        rep.clone()
    } else {
        rep.rebase(germ.vars())?
    };
    let n = germ.dim();
    let coords: Vec<usize> = (0..n).collect();
    let orders: Vec<u32> = rep.exponents.iter().map(|a| a - 1).collect();
    let reach: u32 = orders.iter().sum();

    let mut integrand = &rep.cofactors.det()? * numerator;
    if !rep.is_pure() {
        // Holomorphic cofactors are b_ij / u_i; fold 1 / prod(u_i) in as a
        // truncated series. Only terms up to degree `reach` in the germ
        // coordinates can survive the derivatives below.
        let unit = rep.units.iter().fold(Poly::one(germ.vars().clone()), |acc, u| &acc * u);
        let inverse = series_inverse(&unit, &coords, reach, germ)?;
        integrand = (&integrand.truncate(&coords, reach) * &inverse).truncate(&coords, reach);
    }

    let mut derived = integrand;
    for (i, &k) in orders.iter().enumerate() {
        derived = derived.diff_index(i, k);
    }
    let prefactor = orders.iter().fold(crate::arith::int(1), |acc, &k| acc * factorial(k));
    let value = germ.at_origin(&derived)?.scale(&prefactor.recip());
    Ok(RatFunc::from_poly(value))
}

/// Truncated power series of `1 / unit` in the germ coordinates, assuming
/// the unit's constant term is a nonzero rational.
fn series_inverse(unit: &Poly, coords: &[usize], order: u32, germ: &VectorFieldGerm) -> Result<Poly> {
    let c0 = germ.at_origin(unit)?;
    if !c0.is_constant() || c0.is_zero() {
        return Err(Error::usage(
            "unit multipliers must have a nonzero rational constant term",
        ));
    }
    let c0 = c0.constant_term();
    let one = Poly::one(unit.vars().clone());
    // unit = c0 (1 + v), 1/unit = (1/c0) sum_k (-v)^k
    let v = &unit.scale(&c0.recip()) - &one;
    let neg_v = -&v;
    let mut acc = one.clone();
    let mut power = one;
    for _ in 0..order {
        power = (&power * &neg_v).truncate(coords, order);
        if power.is_zero() {
            break;
        }
        acc = &acc + &power;
    }
    Ok(acc.scale(&c0.recip()))
}

/// Residue through a given monomial representation (derivative formula).
pub fn residue_via_representation(
    germ: &VectorFieldGerm,
    rep: &MonomialRepresentation,
    numerator: &Poly,
) -> Result<Value> {
    representation_ratfunc(germ, rep, numerator).map(Value::from)
}

/// A residue together with the representation used, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub value: Value,
    pub representation: Option<MonomialRepresentation>,
}

pub(crate) fn residue_ratfunc(
    germ: &VectorFieldGerm,
    numerator: &Poly,
    caps: Caps,
) -> Result<(RatFunc, Option<MonomialRepresentation>)> {
    if is_nondegenerate(germ) {
        return Ok((nondegenerate_ratfunc(germ, numerator)?, None));
    }
    germ.check_numerator(numerator)?;
    let rep = find_monomial_representation(germ, caps)?;
    let value = representation_ratfunc(germ, &rep, numerator)?;
    Ok((value, Some(rep)))
}

/// Grothendieck point residue at the origin: the closed form when the zero
/// is non-degenerate, the transformation law otherwise.
pub fn grothendieck_residue(germ: &VectorFieldGerm, numerator: &Poly, caps: Caps) -> Result<Value> {
    residue_ratfunc(germ, numerator, caps).map(|(v, _)| v.into())
}

/// Like [`grothendieck_residue`], also returning the representation found
/// for degenerate zeros.
pub fn grothendieck_residue_report(germ: &VectorFieldGerm, numerator: &Poly, caps: Caps) -> Result<ResidueReport> {
    let (value, representation) = residue_ratfunc(germ, numerator, caps)?;
    Ok(ResidueReport {
        value: value.into(),
        representation,
    })
}

/// Local multiplicity of the zero: the residue of `det J`.
pub fn local_multiplicity(germ: &VectorFieldGerm, caps: Caps) -> Result<u64> {
    let det = germ.jacobian().det()?;
    match grothendieck_residue(germ, &det, caps)? {
        Value::Number(r) if r.is_integer() && r.is_positive() => r
            .to_integer()
            .try_into()
            .map_err(|_| Error::integrity("local multiplicity does not fit in 64 bits")),
        other => Err(Error::Integrity(format!(
            "residue of the Jacobian determinant is {other}, not a positive integer"
        ))),
    }
}
