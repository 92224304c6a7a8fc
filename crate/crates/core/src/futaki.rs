//! Futaki-type invariants as sums of residues over fixed points.
//!
//! For an orbifold vector field with isolated zeros `p`, lifted to
//! uniformizing charts with local groups `G_p`, and an invariant polynomial
//! `phi` of degree `n + k`,
//!
//! ```text
//! C(n+k, n) f_phi = (-1)^k sum_p 1/#G_p Res_p { phi(J xi) dz / (xi_1 ... xi_n) }.
//! ```
//!
//! Invariant polynomials are written in `c1..cn`, the coefficients of
//! `det(t I + M)`; so `c1` is the trace, `cn` the determinant and `Tr^m`
//! is `c1^m`.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::arith::{binomial, Poly, PolyMatrix, Rat, RatFunc, Value, VarList};
use crate::error::{Error, Result};
use crate::exprio::parse_poly;
use crate::residue::{residue_ratfunc, Caps, VectorFieldGerm};

/// A weighted-homogeneous polynomial in `c1..cn`, `c_j` of weight `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantPolynomial {
    n: usize,
    expr: Poly,
    degree: u32,
}

impl InvariantPolynomial {
    /// The variable list `c1, ..., cn`.
    pub fn symbols(n: usize) -> VarList {
        VarList::new((1..=n).map(|j| format!("c{j}"))).expect("distinct identifiers")
    }

    /// Wraps `expr`, which must live over [`InvariantPolynomial::symbols`].
    /// The zero polynomial is given degree `n`.
    pub fn new(n: usize, expr: Poly) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("invariant polynomials need n >= 1"));
        }
        if expr.vars() != &Self::symbols(n) {
            return Err(Error::usage(format!(
                "invariant polynomial must be written in c1..c{n}"
            )));
        }
        let weight = |e: &[u32]| -> u32 { e.iter().enumerate().map(|(j, &x)| (j as u32 + 1) * x).sum() };
        let degrees: Vec<u32> = expr.terms().map(|(m, _)| weight(m.exponents())).collect();
        let degree = degrees.first().copied().unwrap_or(n as u32);
        if degrees.iter().any(|&d| d != degree) {
            return Err(Error::usage(format!("`{expr}` is not weighted-homogeneous")));
        }
        if (degree as usize) < n {
            return Err(Error::usage(format!(
                "`{expr}` has degree {degree}, below the dimension {n}"
            )));
        }
        Ok(InvariantPolynomial { n, expr, degree })
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let symbols = Self::symbols(n);
        Self::new(n, parse_poly(text, &symbols)?)
    }

    /// `Tr^m = c1^m`.
    pub fn trace_power(n: usize, m: u32) -> Result<Self> {
        Self::new(n, Poly::var_at(&Self::symbols(n), 0).pow(m))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weighted degree `n + k`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn k(&self) -> u32 {
        self.degree - self.n as u32
    }

    pub fn expression(&self) -> &Poly {
        &self.expr
    }
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// `phi(M)`: substitutes the coefficients of `det(t I + M)` for `c1..cn`.
pub fn eval_invariant_on_matrix(phi: &InvariantPolynomial, m: &PolyMatrix) -> Result<Poly> {
    if !m.is_square() || m.rows() != phi.n() {
        return Err(Error::usage(format!(
            "invariant polynomial in dimension {} applied to a {}x{} matrix",
            phi.n(),
            m.rows(),
            m.cols()
        )));
    }
    phi.expression().compose(&m.charpoly_coeffs()?)
}

/// Data at one fixed point: the lifted germ and the local group order.
///
/// The lifted field is `germ / scale`. The scale is 1 unless the chart
/// coefficients have a parameter-dependent denominator (for example a
/// symbolic weight), which is cleared into it so that the germ stays
/// polynomial. Group order and scale are elements of the germ's parameter
/// ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FixedPointChart {
    group_order: Poly,
    germ: VectorFieldGerm,
    scale: Poly,
}

impl FixedPointChart {
    pub fn new(group_order: u64, germ: VectorFieldGerm) -> Result<Self> {
        if group_order == 0 {
            return Err(Error::usage("group order must be at least 1"));
        }
        let params = germ.param_vars().clone();
        Ok(FixedPointChart {
            group_order: Poly::constant(params.clone(), Rat::from_integer(group_order.into())),
            germ,
            scale: Poly::one(params),
        })
    }

    /// A chart whose group order and scale are given in the parameter ring.
    pub fn with_scale(group_order: Poly, germ: VectorFieldGerm, scale: Poly) -> Result<Self> {
        let params = germ.param_vars();
        if group_order.vars() != params || scale.vars() != params {
            return Err(Error::usage(
                "group order and scale must live over the germ's parameters",
            ));
        }
        if group_order.is_zero() || scale.is_zero() {
            return Err(Error::usage("group order and scale must be nonzero"));
        }
        Ok(FixedPointChart {
            group_order,
            germ,
            scale,
        })
    }

    pub fn germ(&self) -> &VectorFieldGerm {
        &self.germ
    }

    pub fn group_order(&self) -> &Poly {
        &self.group_order
    }

    pub fn scale(&self) -> &Poly {
        &self.scale
    }

    pub fn dim(&self) -> usize {
        self.germ.dim()
    }

    /// `1/#G * Res{ numerator / (xi / scale) }` for a numerator that is
    /// homogeneous of degree `degree` in the Jacobian entries. Scaling the
    /// field by `1/s` scales such a residue by `s^(n - degree)`.
    fn weighted_residue(&self, numerator: &Poly, degree: u32, caps: Caps) -> Result<RatFunc> {
        let (res, _) = residue_ratfunc(&self.germ, numerator, caps)?;
        let k = degree - self.dim() as u32;
        let params = self.germ.param_vars().clone();
        let weight = RatFunc::new(
            Poly::one(params),
            [(self.group_order.clone(), 1), (self.scale.clone(), k)],
        )?;
        res.try_mul(&weight)
    }
}

/// An invariant together with its per-chart breakdown:
/// `value = prefactor * sum(contributions)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantValue {
    pub value: Value,
    pub n: usize,
    pub k: u32,
    pub phi: String,
    pub prefactor: Rat,
    /// `1/#G_p * Res_p{...}` for each chart, in input order.
    pub contributions: Vec<Value>,
}

fn check_charts(charts: &[FixedPointChart], n: usize) -> Result<VarList> {
    let first = charts
        .first()
        .ok_or_else(|| Error::usage("no fixed-point charts given"))?;
    for (index, c) in charts.iter().enumerate() {
        if c.dim() != n {
            return Err(Error::AtChart {
                index,
                source: Box::new(Error::usage(format!("chart has dimension {}, expected {n}", c.dim()))),
            });
        }
        if c.germ.vars() != first.germ.vars() {
            return Err(Error::AtChart {
                index,
                source: Box::new(Error::usage("charts use different variable lists")),
            });
        }
    }
    Ok(first.germ.param_vars().clone())
}

/// Per-chart weighted residues of `numerator(chart)`, computed in parallel
/// and returned in chart order.
fn chart_terms(
    charts: &[FixedPointChart],
    degree: u32,
    caps: Caps,
    numerator: impl Fn(&FixedPointChart) -> Result<Poly> + Sync,
) -> Result<Vec<RatFunc>> {
    charts
        .par_iter()
        .enumerate()
        .map(|(index, chart)| {
            numerator(chart)
                .and_then(|h| chart.weighted_residue(&h, degree, caps))
                .map_err(|e| Error::AtChart {
                    index,
                    source: Box::new(e),
                })
        })
        .collect()
}

fn assemble(
    params: &VarList,
    terms: Vec<RatFunc>,
    prefactor: Rat,
    n: usize,
    k: u32,
    phi: String,
) -> Result<InvariantValue> {
    let mut sum = RatFunc::zero(params.clone());
    for t in &terms {
        sum = sum.try_add(t)?;
    }
    Ok(InvariantValue {
        value: sum.scale(&prefactor).into(),
        n,
        k,
        phi,
        prefactor,
        contributions: terms.into_iter().map(Value::from).collect(),
    })
}

/// `f_phi = (-1)^k / C(n+k, n) * sum_p 1/#G_p Res_p{phi(J xi)}`.
pub fn morita_futaki(charts: &[FixedPointChart], phi: &InvariantPolynomial, caps: Caps) -> Result<InvariantValue> {
    let n = phi.n();
    let params = check_charts(charts, n)?;
    let k = phi.k();
    let terms = chart_terms(charts, phi.degree(), caps, |c| {
        eval_invariant_on_matrix(phi, &c.germ.jacobian())
    })?;
    let sign = if k.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
    let prefactor = sign / Rat::from_integer(binomial(phi.degree(), n as u32));
    assemble(&params, terms, prefactor, n, k, phi.to_string())
}

/// The Futaki character `f = -1/(n+1)^2 sum_p 1/#G_p Res_p{Tr^(n+1)(J xi)}`.
///
/// Also evaluates `1/(n+1) * f_{c1^(n+1)}` through [`morita_futaki`] and
/// fails with an integrity error if the two disagree.
pub fn futaki_character(charts: &[FixedPointChart], caps: Caps) -> Result<InvariantValue> {
    let n = charts.first().map(FixedPointChart::dim).unwrap_or(0);
    let params = check_charts(charts, n)?;
    let m = n as u32 + 1;
    let terms = chart_terms(charts, m, caps, |c| Ok(c.germ.jacobian().trace()?.pow(m)))?;
    let n1 = Rat::from_integer(m.into());
    let prefactor = -(&n1 * &n1).recip();
    let direct = assemble(&params, terms, prefactor, n, 1, format!("c1^{m}"))?;

    let phi = InvariantPolynomial::trace_power(n, m)?;
    let via_invariant = morita_futaki(charts, &phi, caps)?
        .value
        .to_ratfunc(&params)?
        .scale(&n1.recip());
    let difference = direct.value.to_ratfunc(&params)?.try_sub(&via_invariant)?;
    if !difference.is_zero() {
        return Err(Error::Integrity(format!(
            "Futaki character paths disagree: {} vs {via_invariant}",
            direct.value
        )));
    }
    Ok(direct)
}

/// A characteristic number: [`morita_futaki`] for `deg phi = n`.
pub fn characteristic_number(
    charts: &[FixedPointChart],
    phi: &InvariantPolynomial,
    caps: Caps,
) -> Result<InvariantValue> {
    if phi.k() != 0 {
        return Err(Error::usage(format!(
            "characteristic numbers need deg phi = n = {}, got {}",
            phi.n(),
            phi.degree()
        )));
    }
    morita_futaki(charts, phi, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn linear_chart(order: u64, l1: Rat, l2: Rat) -> FixedPointChart {
        let v = VarList::new(["z1", "z2"]).unwrap();
        let germ = VectorFieldGerm::new(vec![Poly::var_at(&v, 0).scale(&l1), Poly::var_at(&v, 1).scale(&l2)]).unwrap();
        FixedPointChart::new(order, germ).unwrap()
    }

    fn p2(a: [i64; 3]) -> Vec<FixedPointChart> {
        (0..3)
            .map(|i| {
                let ev: Vec<Rat> = (0..3).filter(|&k| k != i).map(|k| int(a[k] - a[i])).collect();
                linear_chart(1, ev[0].clone(), ev[1].clone())
            })
            .collect()
    }

    #[test]
    fn invariant_polynomials() {
        assert_eq!(InvariantPolynomial::parse(2, "c1^3").unwrap().k(), 1);
        assert_eq!(InvariantPolynomial::parse(2, "c1^2 + 2*c2").unwrap().degree(), 2);
        assert!(InvariantPolynomial::parse(2, "c1^2 + c2^2").is_err());
        assert!(InvariantPolynomial::parse(2, "c1").is_err());
        assert!(InvariantPolynomial::parse(2, "c3").is_err());
        assert_eq!(InvariantPolynomial::parse(2, "0").unwrap().k(), 0);
    }

    #[test]
    fn evaluation_on_matrices() {
        let v = VarList::new(["l1", "l2"]).unwrap();
        let l1 = Poly::var_at(&v, 0);
        let l2 = Poly::var_at(&v, 1);
        let zero = Poly::zero(v.clone());
        let diag =
            PolyMatrix::from_rows(v.clone(), vec![vec![l1.clone(), zero.clone()], vec![zero, l2.clone()]]).unwrap();
        let phi = InvariantPolynomial::parse(2, "c1^2").unwrap();
        assert_eq!(eval_invariant_on_matrix(&phi, &diag).unwrap(), (&l1 + &l2).pow(2));
        let swap = PolyMatrix::from_rows(
            v.clone(),
            vec![
                vec![Poly::zero(v.clone()), Poly::one(v.clone())],
                vec![Poly::one(v.clone()), Poly::zero(v.clone())],
            ],
        )
        .unwrap();
        let c2 = InvariantPolynomial::parse(2, "c2").unwrap();
        assert_eq!(
            eval_invariant_on_matrix(&c2, &swap).unwrap(),
            Poly::constant(v, int(-1))
        );
    }

    #[test]
    fn projective_plane_cancels() {
        let charts = p2([0, 1, 2]);
        let phi = InvariantPolynomial::parse(2, "c1^3").unwrap();
        let v = morita_futaki(&charts, &phi, Caps::default()).unwrap();
        let got: Vec<String> = v.contributions.iter().map(ToString::to_string).collect();
        assert_eq!(got, ["27/2", "0", "-27/2"]);
        assert!(v.value.is_zero());
        assert!(futaki_character(&charts, Caps::default()).unwrap().value.is_zero());
        let c2 = InvariantPolynomial::parse(2, "c2").unwrap();
        assert_eq!(
            characteristic_number(&charts, &c2, Caps::default()).unwrap().value,
            Value::Number(int(3))
        );
        assert!(characteristic_number(&charts, &phi, Caps::default()).is_err());
    }

    #[test]
    fn single_charts() {
        let chart = linear_chart(1, int(1), int(1));
        let c2 = InvariantPolynomial::parse(2, "c2").unwrap();
        assert_eq!(
            morita_futaki(std::slice::from_ref(&chart), &c2, Caps::default())
                .unwrap()
                .value,
            Value::Number(int(1))
        );
        let zero = InvariantPolynomial::parse(2, "0*c1").unwrap();
        assert!(morita_futaki(&[chart], &zero, Caps::default()).unwrap().value.is_zero());
        // -(1/9) (1/g) (l1 + l2)^3 / (l1 l2) with g = 4, l = (2, 3)
        let f = futaki_character(&[linear_chart(4, int(2), int(3))], Caps::default()).unwrap();
        assert_eq!(f.value, Value::Number(rat(-125, 216)));
    }

    #[test]
    fn symbolic_single_chart() {
        let v = VarList::new(["z1", "z2", "l1", "l2"]).unwrap();
        let germ =
            VectorFieldGerm::new(vec![parse_poly("l1*z1", &v).unwrap(), parse_poly("l2*z2", &v).unwrap()]).unwrap();
        let chart = FixedPointChart::new(3, germ).unwrap();
        let f = futaki_character(&[chart], Caps::default()).unwrap();
        assert_eq!(
            f.value.to_string(),
            "(-1/27*l1^3 - 1/9*l1^2*l2 - 1/9*l1*l2^2 - 1/27*l2^3)/(l1*l2)"
        );
    }

    #[test]
    fn errors_carry_the_chart_index() {
        let v = VarList::new(["z1", "z2"]).unwrap();
        let flat =
            VectorFieldGerm::new(vec![parse_poly("z1*z2", &v).unwrap(), parse_poly("z1*z2", &v).unwrap()]).unwrap();
        let charts = vec![linear_chart(1, int(1), int(2)), FixedPointChart::new(1, flat).unwrap()];
        let phi = InvariantPolynomial::parse(2, "c2").unwrap();
        let caps = Caps {
            max_exponent: 2,
            max_cofactor_degree: 1,
        };
        match morita_futaki(&charts, &phi, caps) {
            Err(e @ Error::AtChart { index: 1, .. }) => assert_eq!(e.exit_code(), 3),
            other => panic!("{other:?}"),
        }
    }
}
