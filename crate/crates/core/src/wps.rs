//! The weighted projective plane `P(w0, w1, w2)`.
//!
//! The torus field `xi_a = sum_k a_k Z_k d/dZ_k` has, for pairwise coprime
//! weights and generic `a`, exactly the three coordinate points as zeros.
//! At the `i`-th point the uniformizing chart has group order `w_i` and the
//! lifted field is linear and diagonal with eigenvalues
//! `(a_k w_i - a_i w_k) / w_i`, `k != i`.
//!
//! Either the weights or the field parameters (or both) may be symbolic, in
//! which case results are rational functions in `w0, w1, w2` and
//! `a0, a1, a2`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, Monomial, Poly, Rat, RatFunc, Value, VarList};
use crate::error::{Error, Result};
use crate::exprio::parse_poly;
use crate::futaki::{characteristic_number, futaki_character, FixedPointChart, InvariantPolynomial, InvariantValue};
use crate::residue::{Caps, VectorFieldGerm};

const A_NAMES: [&str; 3] = ["a0", "a1", "a2"];
const W_NAMES: [&str; 3] = ["w0", "w1", "w2"];

/// Weights `(w0, w1, w2)`, or the symbols `w0, w1, w2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Weights {
    Numeric([u64; 3]),
    Symbolic,
}

impl Weights {
    pub fn new(w: [u64; 3]) -> Result<Self> {
        if w.contains(&0) {
            return Err(Error::Validation("weights must be positive integers".into()));
        }
        Ok(Weights::Numeric(w))
    }

    pub fn numeric(&self) -> Option<[u64; 3]> {
        match self {
            Weights::Numeric(w) => Some(*w),
            Weights::Symbolic => None,
        }
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weights::Numeric([a, b, c]) => write!(f, "{a},{b},{c}"),
            Weights::Symbolic => f.write_str("symbolic"),
        }
    }
}

/// Parameters `(a0, a1, a2)` of the torus field, or the symbols `a0, a1, a2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TorusFieldParams {
    Numeric([Rat; 3]),
    Symbolic,
}

impl TorusFieldParams {
    pub fn from_ints(a: [i64; 3]) -> Self {
        TorusFieldParams::Numeric(a.map(int))
    }

    pub fn numeric(&self) -> Option<&[Rat; 3]> {
        match self {
            TorusFieldParams::Numeric(a) => Some(a),
            TorusFieldParams::Symbolic => None,
        }
    }
}

impl fmt::Display for TorusFieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusFieldParams::Numeric([a, b, c]) => write!(f, "{a},{b},{c}"),
            TorusFieldParams::Symbolic => f.write_str("symbolic"),
        }
    }
}

/// One failed condition of [`validate_params`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// `gcd(w_i, w_j) > 1`.
    NotCoprime { i: usize, j: usize, gcd: u64 },
    /// `a_i w_j = a_j w_i`.
    Degenerate { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotCoprime { i, j, gcd } => {
                write!(f, "weights w{i} and w{j} are not coprime (gcd {gcd})")
            }
            Violation::Degenerate { i, j } => write!(f, "a{i}*w{j} = a{j}*w{i}"),
        }
    }
}

/// Outcome of [`validate_params`]; empty means valid.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            return Ok(());
        }
        let text: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        Err(Error::Validation(text.join("; ")))
    }
}

/// The parameter ring for a given combination of symbolic inputs:
/// `a0, a1, a2` (if symbolic) followed by `w0, w1, w2` (if symbolic).
pub fn param_vars(w: &Weights, a: &TorusFieldParams) -> VarList {
    let mut names: Vec<&str> = Vec::new();
    if *a == TorusFieldParams::Symbolic {
        names.extend(A_NAMES);
    }
    if *w == Weights::Symbolic {
        names.extend(W_NAMES);
    }
    VarList::new(names).expect("fixed names")
}

fn weight_polys(w: &Weights, vars: &VarList) -> [Poly; 3] {
    std::array::from_fn(|i| match w {
        Weights::Numeric(w) => Poly::constant(vars.clone(), int(w[i] as i64)),
        Weights::Symbolic => Poly::var(vars, W_NAMES[i]).expect("symbolic weights declared"),
    })
}

fn param_polys(a: &TorusFieldParams, vars: &VarList) -> [Poly; 3] {
    std::array::from_fn(|i| match a {
        TorusFieldParams::Numeric(a) => Poly::constant(vars.clone(), a[i].clone()),
        TorusFieldParams::Symbolic => Poly::var(vars, A_NAMES[i]).expect("symbolic parameters declared"),
    })
}

/// `d[k][i] = a_k w_i - a_i w_k`.
fn differences(w: &[Poly; 3], a: &[Poly; 3]) -> [[Poly; 3]; 3] {
    std::array::from_fn(|k| std::array::from_fn(|i| &(&a[k] * &w[i]) - &(&a[i] * &w[k])))
}

/// Checks pairwise coprimality of numeric weights and `a_i w_j != a_j w_i`
/// for `i < j` (as polynomials when some input is symbolic).
pub fn validate_params(w: &Weights, a: &TorusFieldParams) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Weights::Numeric(ws) = w {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let gcd = ws[i].gcd(&ws[j]);
            if gcd != 1 {
                report.violations.push(Violation::NotCoprime { i, j, gcd });
            }
        }
    }
    report.violations.extend(degeneracies(w, a));
    report
}

fn degeneracies(w: &Weights, a: &TorusFieldParams) -> Vec<Violation> {
    let vars = param_vars(w, a);
    let d = differences(&weight_polys(w, &vars), &param_polys(a, &vars));
    [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .filter(|&(i, j)| d[i][j].is_zero())
        .map(|(i, j)| Violation::Degenerate { i, j })
        .collect()
}

/// The three fixed-point charts of `xi_a`, in the order of the coordinate
/// points. Inputs are validated first.
pub fn fixed_point_charts(w: &Weights, a: &TorusFieldParams) -> Result<Vec<FixedPointChart>> {
    validate_params(w, a).into_result()?;
    build_charts(w, a)
}

/// Chart construction without the coprimality check.
fn build_charts(w: &Weights, a: &TorusFieldParams) -> Result<Vec<FixedPointChart>> {
    let params = param_vars(w, a);
    let wp = weight_polys(w, &params);
    let d = differences(&wp, &param_polys(a, &params));
    let vars = VarList::new(["z1", "z2"])?.extended(params.names())?;
    (0..3)
        .map(|i| {
            let components = (0..3)
                .filter(|&k| k != i)
                .enumerate()
                .map(|(slot, k)| {
                    let coeff = d[k][i].rebase(&vars)?;
                    Ok(&coeff * &Poly::var_at(&vars, slot))
                })
                .collect::<Result<Vec<_>>>()?;
            let germ = VectorFieldGerm::new(components)?;
            match w {
                Weights::Numeric(ws) => {
                    let germ = rescale(germ, &int(ws[i] as i64).recip())?;
                    FixedPointChart::new(ws[i], germ)
                }
                Weights::Symbolic => FixedPointChart::with_scale(wp[i].clone(), germ, wp[i].clone()),
            }
        })
        .collect()
}

fn rescale(germ: VectorFieldGerm, r: &Rat) -> Result<VectorFieldGerm> {
    VectorFieldGerm::new(germ.components().iter().map(|c| c.scale(r)).collect())
}

/// `-1/9 sum_i (sum_{k != i} d_ki)^3 / (w_i^2 prod_{k != i} d_ki)`.
fn closed_form(w: &Weights, a: &TorusFieldParams) -> Result<RatFunc> {
    let params = param_vars(w, a);
    let wp = weight_polys(w, &params);
    let d = differences(&wp, &param_polys(a, &params));
    let mut total = RatFunc::zero(params.clone());
    for i in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let sum = &d[others[0]][i] + &d[others[1]][i];
        let term = RatFunc::new(
            sum.pow(3),
            [
                (wp[i].clone(), 2),
                (d[others[0]][i].clone(), 1),
                (d[others[1]][i].clone(), 1),
            ],
        )?;
        total = total.try_add(&term)?;
    }
    Ok(total.scale(&Rat::new((-1).into(), 9.into())))
}

/// The Futaki character of `xi_a`, through the fixed-point charts and
/// through the closed form; the two must agree.
pub fn futaki_wps(w: &Weights, a: &TorusFieldParams) -> Result<InvariantValue> {
    validate_params(w, a).into_result()?;
    futaki_unchecked(w, a)
}

fn futaki_unchecked(w: &Weights, a: &TorusFieldParams) -> Result<InvariantValue> {
    if !degeneracies(w, a).is_empty() {
        return Err(Error::Validation("the field has non-isolated zeros".into()));
    }
    let charts = build_charts(w, a)?;
    let value = futaki_character(&charts, Caps::default())?;
    let params = param_vars(w, a);
    let closed = closed_form(w, a)?;
    if !value.value.to_ratfunc(&params)?.try_sub(&closed)?.is_zero() {
        return Err(Error::Integrity(format!(
            "chart sum {} disagrees with the closed form {closed}",
            value.value
        )));
    }
    Ok(value)
}

/// `zeta = -9 w0^2 w1^2 w2^2 prod_{i<j} (a_i w_j - a_j w_i) f(xi_a)`, a
/// polynomial of degree 4 in `a0, a1, a2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ObstructionPolynomial {
    weights: Weights,
    zeta: Poly,
}

impl ObstructionPolynomial {
    /// The flat polynomial over `a0, a1, a2` (then `w0, w1, w2` if the
    /// weights are symbolic).
    pub fn poly(&self) -> &Poly {
        &self.zeta
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.zeta.is_zero()
    }

    /// `zeta` as a polynomial in `a` with coefficients in `Q[w]`.
    pub fn nested(&self) -> Result<Poly<Poly<Rat>>> {
        self.zeta.split_outer(&A_NAMES)
    }

    /// The coefficient of an `a`-monomial, as a polynomial in the weights.
    pub fn coeff(&self, exponents: [u32; 3]) -> Result<Poly> {
        Ok(self.nested()?.coeff(&Monomial::new(exponents.to_vec())))
    }

    /// The coefficient of a monomial written as text, e.g. `a0^2*a1*a2`.
    pub fn coeff_of(&self, monomial: &str) -> Result<Poly> {
        let avars = VarList::new(A_NAMES)?;
        let p = parse_poly(monomial, &avars)?;
        match p.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if c.is_one() => {
                let e = m.exponents();
                self.coeff([e[0], e[1], e[2]])
            }
            _ => Err(Error::usage(format!("`{monomial}` is not a monomial in a0, a1, a2"))),
        }
    }

    /// `zeta` at numeric `a`, as a polynomial in the remaining variables.
    pub fn at(&self, a: &[Rat; 3]) -> Result<Poly> {
        let assignment: Vec<(&str, Rat)> = A_NAMES.iter().copied().zip(a.iter().cloned()).collect();
        let p = self.zeta.eval(&assignment)?;
        let rest = VarList::new(
            self.zeta
                .vars()
                .names()
                .iter()
                .filter(|n| !A_NAMES.contains(&n.as_str())),
        )?;
        p.rebase(&rest)
    }
}

impl fmt::Display for ObstructionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.zeta.fmt(f)
    }
}

/// The obstruction polynomial for numeric or symbolic weights. Numeric
/// weights need not be coprime here.
pub fn zeta(w: &Weights) -> Result<ObstructionPolynomial> {
    let a = TorusFieldParams::Symbolic;
    let params = param_vars(w, &a);
    let f = futaki_unchecked(w, &a)?.value.to_ratfunc(&params)?;
    let wp = weight_polys(w, &params);
    let ap = param_polys(&a, &params);
    let mut clear = Poly::constant(params.clone(), int(-9));
    for wi in &wp {
        clear = &clear * &wi.pow(2);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        clear = &clear * &(&(&ap[i] * &wp[j]) - &(&ap[j] * &wp[i]));
    }
    let cleared = f.mul_poly(&clear)?;
    let Some(zeta) = cleared.as_poly() else {
        return Err(Error::Integrity(format!(
            "denominators of zeta did not cancel: {cleared}"
        )));
    };
    if !zeta.is_homogeneous_in(&[0, 1, 2], 4) {
        return Err(Error::Integrity("zeta is not homogeneous of degree 4 in a".into()));
    }
    Ok(ObstructionPolynomial {
        weights: w.clone(),
        zeta: zeta.clone(),
    })
}

/// Result of [`ke_obstruction`].
#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// A field `xi_a` with nonzero Futaki character.
    Obstructed { witness: [Rat; 3], f: Rat },
    /// `zeta` vanishes identically.
    NoObstructionFound,
}

const DRAWS_PER_RANGE: usize = 256;

/// Decides whether `zeta` vanishes for the given (pairwise coprime)
/// weights; if not, finds integer parameters `a` with `f(xi_a) != 0`.
///
/// The search draws seeded random points in `[-9, 9]^3`, then
/// `[-99, 99]^3`, then sweeps `[-r, r]^3` for growing `r`.
pub fn ke_obstruction(w: [u64; 3], seed: u64) -> Result<Verdict> {
    let weights = Weights::new(w)?;
    validate_params(&weights, &TorusFieldParams::Symbolic).into_result()?;
    let z = zeta(&weights)?;
    if z.is_zero() {
        return Ok(Verdict::NoObstructionFound);
    }
    let accept = |a: [i64; 3]| -> Result<Option<Verdict>> {
        let params = TorusFieldParams::from_ints(a);
        if !validate_params(&weights, &params).is_ok() {
            return Ok(None);
        }
        let a = a.map(int);
        if z.at(&a)?.is_zero() {
            return Ok(None);
        }
        let f = futaki_wps(&weights, &params)?.value;
        match f.as_rat() {
            Some(f) if !f.is_zero() => Ok(Some(Verdict::Obstructed {
                witness: a,
                f: f.clone(),
            })),
            _ => Err(Error::Integrity(format!("zeta(a) != 0 but f(xi_a) = {f}"))),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for bound in [9i64, 99] {
        for _ in 0..DRAWS_PER_RANGE {
            let a = [0; 3].map(|_: i64| rng.gen_range(-bound..=bound));
            if let Some(v) = accept(a)? {
                return Ok(v);
            }
        }
    }
    // A nonzero polynomial of degree 4 cannot vanish on a grid with five
    // points per axis, so the sweep terminates by r = 2.
    for r in 1i64.. {
        for a0 in -r..=r {
            for a1 in -r..=r {
                for a2 in -r..=r {
                    if [a0, a1, a2].iter().any(|x| x.abs() == r) {
                        if let Some(v) = accept([a0, a1, a2])? {
                            return Ok(v);
                        }
                    }
                }
            }
        }
    }
    unreachable!("the sweep is unbounded")
}

/// A characteristic number of `P(w)` from the fixed-point charts of
/// `xi_a`. For `phi = c1^2` the value is checked against
/// `(w0 + w1 + w2)^2 / (w0 w1 w2)`.
pub fn chern_number_wps(w: &Weights, phi: &InvariantPolynomial, a: &TorusFieldParams) -> Result<InvariantValue> {
    if phi.n() != 2 {
        return Err(Error::usage("the weighted projective plane has dimension 2"));
    }
    let charts = fixed_point_charts(w, a)?;
    let value = characteristic_number(&charts, phi, Caps::default())?;
    if phi.expression() == InvariantPolynomial::trace_power(2, 2)?.expression() {
        let params = param_vars(w, a);
        let wp = weight_polys(w, &params);
        let sum = &(&wp[0] + &wp[1]) + &wp[2];
        let expected = RatFunc::new(sum.pow(2), wp.iter().map(|p| (p.clone(), 1)))?;
        if !value.value.to_ratfunc(&params)?.try_sub(&expected)?.is_zero() {
            return Err(Error::Integrity(format!(
                "c1^2 = {} but the Euler sequence gives {expected}",
                value.value
            )));
        }
    }
    Ok(value)
}

/// `|w|^2 / (w0 w1 w2)` for numeric weights.
pub fn c1_squared(w: [u64; 3]) -> Rat {
    let sum: u64 = w.iter().sum();
    Rat::new((sum * sum).into(), (w[0] * w[1] * w[2]).into())
}

impl Verdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Verdict::Obstructed { .. })
    }
}

/// Convenience: the value of an [`InvariantValue`] known to be a number.
pub fn numeric_value(v: &InvariantValue) -> Result<Rat> {
    match &v.value {
        Value::Number(r) => Ok(r.clone()),
        Value::Function(f) => f
            .as_constant()
            .ok_or_else(|| Error::usage(format!("value {f} depends on parameters"))),
    }
}
