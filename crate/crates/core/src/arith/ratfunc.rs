//! Rational functions with a tracked, factored denominator.
//!
//! Denominators are never factored automatically. Factors enter only where
//! a caller supplies them (a chart eigenvalue, a weight) and leave again
//! only by exact trial division into the numerator. That is enough for
//! denominators that are known products of simple forms, and it keeps the
//! representation canonical without a multivariate gcd.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::monomial::VarList;
use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// `numerator / prod(factor^exponent)`.
///
/// Every stored factor is non-constant, has coprime integer coefficients
/// and a positive graded-lex leading coefficient, and does not divide the
/// numerator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl RatFunc {
    pub fn from_poly(num: Poly) -> Self {
        RatFunc {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarList, c: Rat) -> Self {
        RatFunc::from_poly(Poly::constant(vars, c))
    }

    pub fn zero(vars: VarList) -> Self {
        RatFunc::from_poly(Poly::zero(vars))
    }

    /// `num / prod(factors)`, normalized and cancelled.
    pub fn new(num: Poly, factors: impl IntoIterator<Item = (Poly, u32)>) -> Result<Self> {
        let mut out = RatFunc::from_poly(num);
        for (f, e) in factors {
            out.push_factor(f, e)?;
        }
        out.cancel();
        Ok(out)
    }

    fn push_factor(&mut self, f: Poly, e: u32) -> Result<()> {
        if f.vars() != self.num.vars() {
            return Err(Error::usage("denominator factor lives over a different variable list"));
        }
        if f.is_zero() {
            return Err(Error::Arithmetic("division by the zero polynomial".into()));
        }
        if e == 0 {
            return Ok(());
        }
        let (content, mut prim) = f.primitive_part();
        let inv = num_traits::pow(content.recip(), e as usize);
        self.num = self.num.scale(&inv);
        // Variables dividing every term are stored as separate factors.
        let n = prim.vars().len();
        for i in 0..n {
            let k = prim.terms().map(|(m, _)| m.exponents()[i]).min().unwrap_or(0);
            if k > 0 {
                let x = Poly::var_at(prim.vars(), i);
                prim = prim.div_exact(&x.pow(k)).expect("variable divides every term");
                *self.den.entry(x).or_insert(0) += k * e;
            }
        }
        if !prim.is_constant() {
            *self.den.entry(prim).or_insert(0) += e;
        }
        Ok(())
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut den = std::mem::take(&mut self.den);
        for (f, e) in den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|_, e| *e > 0);
        self.den = den;
    }

    pub fn vars(&self) -> &VarList {
        self.num.vars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator factors with their exponents, in canonical order.
    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(f, &e)| (f, e))
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> Poly {
        self.den
            .iter()
            .fold(Poly::one(self.vars().clone()), |acc, (f, &e)| &acc * &f.pow(e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    fn check(&self, other: &RatFunc) -> Result<()> {
        if self.vars() != other.vars() {
            return Err(Error::usage(format!(
                "variable lists differ: {:?} vs {:?}",
                self.vars(),
                other.vars()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut common = self.den.clone();
        for (f, &e) in &other.den {
            let slot = common.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let lift = |x: &RatFunc| {
            common.iter().fold(x.num.clone(), |acc, (f, &e)| {
                let have = x.den.get(f).copied().unwrap_or(0);
                &acc * &f.pow(e - have)
            })
        };
        let mut out = RatFunc {
            num: &lift(self) + &lift(other),
            den: common,
        };
        out.cancel();
        Ok(out)
    }

    pub fn try_sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check(other)?;
        let mut out = RatFunc {
            num: &self.num * &other.num,
            den: self.den.clone(),
        };
        for (f, &e) in &other.den {
            *out.den.entry(f.clone()).or_insert(0) += e;
        }
        out.cancel();
        Ok(out)
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<RatFunc> {
        self.try_mul(&RatFunc::from_poly(p.clone()))
    }

    /// `self / other`. The numerator of `other` enters the denominator as a
    /// single factor.
    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::Arithmetic("division by the zero function".into()));
        }
        let flipped = RatFunc::new(other.denominator(), [(other.num.clone(), 1)])?;
        self.try_mul(&flipped)
    }

    pub fn scale(&self, r: &Rat) -> RatFunc {
        if r.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        RatFunc {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> RatFunc {
        self.scale(&-Rat::one())
    }

    /// Re-expresses over another variable list (see [`Poly::rebase`]).
    pub fn rebase(&self, target: &VarList) -> Result<RatFunc> {
        RatFunc::new(
            self.num.rebase(target)?,
            self.den
                .iter()
                .map(|(f, &e)| Ok((f.rebase(target)?, e)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Value at a point assigning every variable; `None` if a denominator
    /// factor vanishes there.
    pub fn eval_all(&self, point: &[Rat]) -> Result<Option<Rat>> {
        let mut den = Rat::one();
        for (f, &e) in &self.den {
            den *= num_traits::pow(f.eval_all(point)?, e as usize);
        }
        if den.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval_all(point)? / den))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let num = self.num.to_string();
        if self.num.num_terms() > 1 || num.contains('/') {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .rev()
            .map(|(p, &e)| {
                let base = if p.num_terms() > 1 {
                    format!("({p})")
                } else {
                    p.to_string()
                };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if parts.len() == 1 && self.den.values().all(|&e| e == 1) && !parts[0].contains('*') {
            write!(f, "/{}", parts[0])
        } else {
            write!(f, "/({})", parts.join("*"))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{:?}]({})", self.vars(), self)
    }
}

/// An exact scalar result: a rational number, or a rational function of
/// symbolic parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Number(Rat),
    Function(RatFunc),
}

impl Value {
    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Value::Number(r) => Some(r),
            Value::Function(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Number(r) => r.is_zero(),
            Value::Function(f) => f.is_zero(),
        }
    }

    /// The value as a rational function over `vars`.
    pub fn to_ratfunc(&self, vars: &VarList) -> Result<RatFunc> {
        match self {
            Value::Number(r) => Ok(RatFunc::constant(vars.clone(), r.clone())),
            Value::Function(f) => f.rebase(vars),
        }
    }
}

impl From<RatFunc> for Value {
    fn from(f: RatFunc) -> Self {
        match f.as_constant() {
            Some(c) => Value::Number(c),
            None => Value::Function(f),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(r) => write!(f, "{r}"),
            Value::Function(rf) => write!(f, "{rf}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::{int, rat};

    fn xy() -> (VarList, Poly, Poly) {
        let v = VarList::new(["x", "y"]).unwrap();
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        (v, x, y)
    }

    #[test]
    fn sum_of_reciprocals() {
        let (v, x, y) = xy();
        let one = Poly::one(v.clone());
        let a = RatFunc::new(one.clone(), [(x.clone(), 1)]).unwrap();
        let b = RatFunc::new(one, [(y.clone(), 1)]).unwrap();
        let s = a.try_add(&b).unwrap();
        assert_eq!(s.numerator(), &(&x + &y));
        let factors: Vec<_> = s.denominator_factors().map(|(f, e)| (f.clone(), e)).collect();
        assert_eq!(factors.len(), 2);
        assert!(factors.contains(&(x, 1)) && factors.contains(&(y, 1)));
    }

    #[test]
    fn cancels_exact_factors() {
        let (_, x, y) = xy();
        let f = RatFunc::new(&x.pow(2) - &y.pow(2), [(&x - &y, 1)]).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.numerator(), &(&x + &y));
    }

    #[test]
    fn sign_moves_to_numerator() {
        let (v, x, y) = xy();
        let one = Poly::one(v);
        let f = RatFunc::new(one.clone(), [(&y - &x, 1)]).unwrap();
        let g = RatFunc::new(one.scale(&int(-1)), [(&x - &y, 1)]).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.to_string(), "-1/(x - y)");
        let h = RatFunc::new(one, [(x.scale(&int(2)), 2)]).unwrap();
        assert_eq!(h.numerator().constant_term(), rat(1, 4));
        assert_eq!(h.to_string(), "(1/4)/(x^2)");
    }

    #[test]
    fn construction_order_does_not_matter() {
        let (v, x, y) = xy();
        let one = Poly::one(v.clone());
        let terms = [
            RatFunc::new(x.clone(), [(&x + &y, 1)]).unwrap(),
            RatFunc::new(one.clone(), [(y.clone(), 2)]).unwrap(),
            RatFunc::new(y.scale(&int(3)), [(x.clone(), 1), (&x + &y, 1)]).unwrap(),
        ];
        let forward = terms
            .iter()
            .skip(1)
            .fold(terms[0].clone(), |a, b| a.try_add(b).unwrap());
        let backward = terms
            .iter()
            .rev()
            .skip(1)
            .fold(terms[2].clone(), |a, b| a.try_add(b).unwrap());
        assert_eq!(forward, backward);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let (v, x, _) = xy();
        let f = RatFunc::from_poly(x);
        assert!(matches!(
            f.try_div(&RatFunc::zero(v.clone())),
            Err(Error::Arithmetic(_))
        ));
        assert!(matches!(
            RatFunc::new(Poly::one(v.clone()), [(Poly::zero(v), 1)]),
            Err(Error::Arithmetic(_))
        ));
    }

    #[test]
    fn values_collapse_constants() {
        let (v, x, _) = xy();
        let c: Value = RatFunc::new(x.scale(&int(3)), [(x.clone(), 1)]).unwrap().into();
        assert_eq!(c, Value::Number(int(3)));
        let f: Value = RatFunc::new(Poly::one(v), [(x, 1)]).unwrap().into();
        assert!(matches!(f, Value::Function(_)));
    }
}
