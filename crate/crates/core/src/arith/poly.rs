//! Sparse multivariate polynomials.
//!
//! A [`Poly`] is a finite map from [`Monomial`] to a nonzero coefficient,
//! stored in graded-lex order. Coefficients come from one of two rings:
//! the rationals ([`Rat`]), or polynomials over the rationals in a disjoint
//! set of variables. That second level is what lets an expression live in
//! `Q[w][a]`: a polynomial in `a` whose coefficients are polynomials in `w`.
//! Deeper towers are deliberately not representable; [`Coeff`] is sealed and
//! implemented only for those two rings.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, VarList};
use super::rat::Rat;
use crate::error::{Error, Result};

mod sealed {
    pub trait Sealed {}
    impl Sealed for super::Rat {}
    impl Sealed for super::Poly<super::Rat> {}
}

/// A coefficient ring for [`Poly`].
pub trait Coeff: sealed::Sealed + Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// Data needed to build constants of the ring (the inner variable list
    /// for polynomial coefficients, nothing for rationals).
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_rat_in(ctx: &Self::Ctx, r: Rat) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Rat) -> Self;
    /// Appends `coeff*monomial` to `out`, including the joining sign.
    fn write_term(&self, out: &mut String, first: bool, monomial: &str);
}

impl Coeff for Rat {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        Rat::zero()
    }
    fn from_rat_in(_: &(), r: Rat) -> Self {
        r
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rat) -> Self {
        self * r
    }
    fn write_term(&self, out: &mut String, first: bool, monomial: &str) {
        write_sign(out, first, self.is_negative());
        let abs = self.abs();
        if monomial.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(monomial);
        } else {
            out.push_str(&abs.to_string());
            out.push('*');
            out.push_str(monomial);
        }
    }
}

impl Coeff for Poly<Rat> {
    type Ctx = VarList;

    fn zero_in(ctx: &VarList) -> Self {
        Poly::zero(ctx.clone())
    }
    fn from_rat_in(ctx: &VarList, r: Rat) -> Self {
        Poly::constant(ctx.clone(), r)
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn write_term(&self, out: &mut String, first: bool, monomial: &str) {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            let inner = m.render(&self.vars);
            let joined = match (inner.is_empty(), monomial.is_empty()) {
                (true, _) => monomial.to_owned(),
                (false, true) => inner,
                (false, false) => format!("{inner}*{monomial}"),
            };
            c.write_term(out, first, &joined);
        } else {
            write_sign(out, first, false);
            out.push('(');
            out.push_str(&self.to_string());
            out.push(')');
            if !monomial.is_empty() {
                out.push('*');
                out.push_str(monomial);
            }
        }
    }
}

fn write_sign(out: &mut String, first: bool, negative: bool) {
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

/// Sparse polynomial over the coefficient ring `C`.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Coeff = Rat> {
    vars: VarList,
    ctx: C::Ctx,
    terms: BTreeMap<Monomial, C>,
}

impl Eq for Poly<Rat> {}

impl<C: Coeff> Poly<C> {
    pub fn zero_in(vars: VarList, ctx: C::Ctx) -> Self {
        Poly {
            vars,
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms_in(vars: VarList, ctx: C::Ctx, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut p = Poly::zero_in(vars, ctx);
        for (m, c) in terms {
            if m.len() != p.vars.len() {
                return Err(Error::usage(format!(
                    "monomial has {} exponents but the ring has {} variables",
                    m.len(),
                    p.vars.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn constant_in(vars: VarList, ctx: C::Ctx, c: C) -> Self {
        let n = vars.len();
        let mut p = Poly::zero_in(vars, ctx);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one_in(vars: VarList, ctx: C::Ctx) -> Self {
        let one = C::from_rat_in(&ctx, Rat::one());
        Poly::constant_in(vars, ctx, one)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.plus(&c);
                if sum.is_zero_coeff() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn coeff_ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of `m` (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one(self.vars.len()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[var]).max().unwrap_or(0)
    }

    /// True if every term has the same total degree `d` in the variables at
    /// `indices` (the zero polynomial is homogeneous of every degree).
    pub fn is_homogeneous_in(&self, indices: &[usize], d: u32) -> bool {
        self.terms
            .keys()
            .all(|m| indices.iter().map(|&i| m.exponents()[i]).sum::<u32>() == d)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::usage(format!(
                "variable lists differ: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        if self.ctx != other.ctx {
            return Err(Error::usage("coefficient rings differ"));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Poly::zero_in(self.vars.clone(), self.ctx.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.times(c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Poly::one_in(self.vars.clone(), self.ctx.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Poly::zero_in(self.vars.clone(), self.ctx.clone());
        }
        Poly {
            vars: self.vars.clone(),
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scaled(r))).collect(),
        }
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        let mut out = Poly::zero_in(self.vars.clone(), self.ctx.clone());
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d.times(c));
        }
        out
    }

    /// Iterated partial derivative `d^order/d(var)^order`.
    pub fn diff(&self, var: &str, order: u32) -> Result<Self> {
        let i = self.vars.require(var)?;
        Ok(self.diff_index(i, order))
    }

    pub fn diff_index(&self, var: usize, order: u32) -> Self {
        let mut out = Poly::zero_in(self.vars.clone(), self.ctx.clone());
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e < order {
                continue;
            }
            let falling: BigInt = (0..order).fold(BigInt::one(), |acc, j| acc * BigInt::from(e - j));
            let mut exps = m.exponents().to_vec();
            exps[var] -= order;
            out.add_term(Monomial::new(exps), c.scaled(&Rat::from_integer(falling)));
        }
        out
    }

    /// Keeps only terms of total degree `<= max_degree` in the variables at
    /// `indices`.
    pub fn truncate(&self, indices: &[usize], max_degree: u32) -> Self {
        Poly {
            vars: self.vars.clone(),
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| indices.iter().map(|&i| m.exponents()[i]).sum::<u32>() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl Poly<Rat> {
    pub fn zero(vars: VarList) -> Self {
        Poly::zero_in(vars, ())
    }

    pub fn one(vars: VarList) -> Self {
        Poly::one_in(vars, ())
    }

    pub fn constant(vars: VarList, c: Rat) -> Self {
        Poly::constant_in(vars, (), c)
    }

    pub fn from_terms(vars: VarList, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Result<Self> {
        Poly::from_terms_in(vars, (), terms)
    }

    /// The polynomial consisting of the variable `name`.
    pub fn var(vars: &VarList, name: &str) -> Result<Self> {
        let i = vars.require(name)?;
        Ok(Poly::var_at(vars, i))
    }

    pub fn var_at(vars: &VarList, index: usize) -> Self {
        Poly::from_terms(vars.clone(), [(Monomial::var(vars.len(), index), Rat::one())])
            .expect("index within the variable list")
    }

    pub fn monomial(vars: &VarList, m: Monomial, c: Rat) -> Result<Self> {
        Poly::from_terms(vars.clone(), [(m, c)])
    }

    /// Substitutes `value` for each listed variable. Values must live over
    /// the same variable list; unassigned variables stay symbolic.
    pub fn substitute(&self, assignment: &[(usize, Poly)]) -> Result<Poly> {
        for (_, v) in assignment {
            if v.vars != self.vars {
                return Err(Error::usage("substituted value lives over a different variable list"));
            }
        }
        let n = self.vars.len();
        let mut cache: Vec<Vec<Poly>> = assignment
            .iter()
            .map(|(_, v)| vec![Poly::one(v.vars.clone())])
            .collect();
        let mut out = Poly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let mut exps = m.exponents().to_vec();
            let mut factor = Poly::one(self.vars.clone());
            for (slot, (var, value)) in assignment.iter().enumerate() {
                if *var >= n {
                    return Err(Error::usage(format!("variable index {var} out of range")));
                }
                let e = exps[*var] as usize;
                exps[*var] = 0;
                let powers = &mut cache[slot];
                while powers.len() <= e {
                    let next = powers.last().unwrap() * value;
                    powers.push(next);
                }
                factor = &factor * &powers[e];
            }
            let rest = Poly::monomial(&self.vars, Monomial::new(exps), c.clone())?;
            out = &out + &(&rest * &factor);
        }
        Ok(out)
    }

    /// Evaluates the named variables at rational values.
    pub fn eval(&self, assignment: &[(&str, Rat)]) -> Result<Poly> {
        let mapped = assignment
            .iter()
            .map(|(name, r)| Ok((self.vars.require(name)?, Poly::constant(self.vars.clone(), r.clone()))))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(&mapped)
    }

    /// Value at a point assigning every variable.
    pub fn eval_all(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.vars.len() {
            return Err(Error::usage("point dimension does not match the variable count"));
        }
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Replaces variable `i` by `images[i]`; the result lives over the
    /// images' common variable list.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.vars.len() {
            return Err(Error::usage(format!(
                "{} images supplied for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => {
                return Ok(Poly::constant(VarList::empty(), self.constant_term()));
            }
        };
        if images.iter().any(|p| p.vars != target) {
            return Err(Error::usage("images live over different variable lists"));
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.vars.clone())]).collect();
        let mut out = Poly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target.clone(), c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another variable list, matching
    /// variables by name. Fails if a variable that occurs is missing.
    pub fn rebase(&self, target: &VarList) -> Result<Poly> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let used = self.terms.keys().any(|m| m.exponents()[i] > 0);
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if !used => map.push(None),
                None => {
                    return Err(Error::usage(format!(
                        "variable `{name}` does not exist in the target ring {target:?}"
                    )))
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if let Some(j) = map[i] {
                    exps[j] = e;
                }
            }
            (Monomial::new(exps), c.clone())
        });
        Poly::from_terms(target.clone(), terms)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() || divisor.vars != self.vars {
            return None;
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.vars.clone());
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c / &lc;
            let t = Poly::monomial(&self.vars, qm, qc).ok()?;
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Splits `self = c * primitive` where `primitive` has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let den = super::rat::common_denominator(self.terms.values());
        let num_gcd = self
            .terms
            .values()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |g, n| g.gcd(&n));
        let mut content = Rat::new(num_gcd, den);
        if self.leading_term().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Splits the variables into an outer list (`outer`, in the given
    /// order) and an inner list (the rest, in declaration order), giving a
    /// polynomial in the outer variables with coefficients in the inner ones.
    pub fn split_outer(&self, outer: &[&str]) -> Result<Poly<Poly<Rat>>> {
        let outer_idx = outer
            .iter()
            .map(|name| self.vars.require(name))
            .collect::<Result<Vec<_>>>()?;
        let inner_idx: Vec<usize> = (0..self.vars.len()).filter(|i| !outer_idx.contains(i)).collect();
        let outer_vars = VarList::new(outer.iter().copied())?;
        let inner_vars = VarList::new(inner_idx.iter().map(|&i| self.vars.names()[i].as_str()))?;
        let mut grouped: BTreeMap<Monomial, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponents();
            let om = Monomial::new(outer_idx.iter().map(|&i| e[i]).collect());
            let im = Monomial::new(inner_idx.iter().map(|&i| e[i]).collect());
            grouped.entry(om).or_default().push((im, c.clone()));
        }
        let terms = grouped
            .into_iter()
            .map(|(om, inner)| Ok((om, Poly::from_terms(inner_vars.clone(), inner)?)))
            .collect::<Result<Vec<_>>>()?;
        Poly::from_terms_in(outer_vars, inner_vars, terms)
    }
}

impl Poly<Poly<Rat>> {
    /// Inverse of [`Poly::split_outer`]: a flat polynomial over the outer
    /// variables followed by the inner ones.
    pub fn flatten(&self) -> Result<Poly<Rat>> {
        let vars = self.vars.extended(self.ctx.names())?;
        let mut terms = Vec::new();
        for (om, c) in &self.terms {
            for (im, r) in &c.terms {
                let mut e = om.exponents().to_vec();
                e.extend_from_slice(im.exponents());
                terms.push((Monomial::new(e), r.clone()));
            }
        }
        Poly::from_terms(vars, terms)
    }
}

impl PartialOrd for Poly<Rat> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly<Rat> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vars
            .cmp(&other.vars)
            .then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            c.write_term(&mut out, i == 0, &m.render(&self.vars));
        }
        f.write_str(&out)
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.vars, self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Coeff> $tr<&Poly<C>> for &Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Coeff> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$method(rhs)
            }
        }
    };
}

// The operator forms panic on mismatched variable lists; use the `try_*`
// methods where the operands come from user input.
forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            vars: self.vars.clone(),
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect(),
        }
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::{int, rat};

    fn ring(names: &[&str]) -> VarList {
        VarList::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = ring(&["z1", "z2"]);
        let z1 = Poly::var(&v, "z1").unwrap();
        let z2 = Poly::var(&v, "z2").unwrap();
        let p = &(&z1 + &z2) * &(&z1 - &z2);
        assert_eq!(p.to_string(), "z1^2 - z2^2");
        assert!((&p + &-&p).is_zero());
    }

    #[test]
    fn multinomial_coefficient() {
        let v = ring(&["a0", "a1", "a2"]);
        let s = Poly::var(&v, "a0").unwrap() + Poly::var(&v, "a1").unwrap() + Poly::var(&v, "a2").unwrap();
        let p = s.pow(4);
        assert_eq!(p.coeff(&Monomial::new(vec![2, 1, 1])), int(12));
        assert_eq!(p.num_terms(), 15);
    }

    #[test]
    fn derivatives() {
        let v = ring(&["z1", "z2"]);
        let z1 = Poly::var(&v, "z1").unwrap();
        let z2 = Poly::var(&v, "z2").unwrap();
        assert_eq!((&z1.pow(2) * &z2).diff("z1", 1).unwrap(), (&z1 * &z2).scale(&int(2)));
        assert_eq!(z1.pow(3).diff("z1", 2).unwrap(), z1.scale(&int(6)));
        let p = (&z1.pow(2) * &z2.pow(2)).scale(&int(4));
        let d = p.diff("z1", 2).unwrap().diff("z2", 2).unwrap();
        assert_eq!(d, Poly::constant(v.clone(), int(16)));
        assert!(matches!(p.diff("z3", 1), Err(Error::Usage(_))));
    }

    #[test]
    fn evaluation_and_coefficients() {
        let v = ring(&["z1"]);
        let z1 = Poly::var(&v, "z1").unwrap();
        let p = (z1.scale(&int(2)) + Poly::one(v.clone())).pow(3);
        assert_eq!(p.eval(&[("z1", int(0))]).unwrap(), Poly::one(v.clone()));
        assert_eq!(p.coeff(&Monomial::new(vec![1])), int(6));
        assert_eq!(p.coeff(&Monomial::new(vec![7])), int(0));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let p = Poly::var(&ring(&["x"]), "x").unwrap();
        let q = Poly::var(&ring(&["y"]), "y").unwrap();
        assert!(matches!(p.try_add(&q), Err(Error::Usage(_))));
        assert!(matches!(p.try_mul(&q), Err(Error::Usage(_))));
    }

    #[test]
    fn exact_division() {
        let v = ring(&["x", "y"]);
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let num = &x.pow(2) - &y.pow(2);
        assert_eq!(num.div_exact(&(&x - &y)).unwrap(), &x + &y);
        assert!(num.div_exact(&x).is_none());
        assert!(num.div_exact(&Poly::zero(v.clone())).is_none());
    }

    #[test]
    fn primitive_parts_have_positive_leading_coefficient() {
        let v = ring(&["x", "y"]);
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let p = (&x.scale(&rat(-2, 3)) + &y.scale(&rat(4, 9))).scale(&int(1));
        let (c, prim) = p.primitive_part();
        assert_eq!(c, rat(-2, 9));
        assert_eq!(prim.to_string(), "3*x - 2*y");
        assert_eq!(prim.scale(&c), p);
    }

    #[test]
    fn nesting_round_trips() {
        let v = ring(&["a0", "a1", "w0", "w1"]);
        let a0 = Poly::var(&v, "a0").unwrap();
        let w1 = Poly::var(&v, "w1").unwrap();
        let w0 = Poly::var(&v, "w0").unwrap();
        let p = &(&(&a0.pow(2) * &w1).scale(&rat(3, 2)) - &(&a0.pow(2) * &w0)) + &w0;
        let nested = p.split_outer(&["a0", "a1"]).unwrap();
        assert_eq!(nested.to_string(), "(-w0 + 3/2*w1)*a0^2 + w0");
        assert_eq!(nested.coeff(&Monomial::new(vec![2, 0])).to_string(), "-w0 + 3/2*w1");
        assert_eq!(nested.flatten().unwrap(), p);
    }

    #[test]
    fn rebase_by_name() {
        let v = ring(&["z1", "a"]);
        let w = ring(&["a"]);
        let a = Poly::var(&v, "a").unwrap();
        assert_eq!(a.rebase(&w).unwrap(), Poly::var(&w, "a").unwrap());
        assert!(Poly::var(&v, "z1").unwrap().rebase(&w).is_err());
    }

    #[test]
    fn printing() {
        let v = ring(&["a0", "a1", "w1"]);
        let p = Poly::from_terms(
            v.clone(),
            [
                (Monomial::new(vec![2, 0, 1]), rat(3, 2)),
                (Monomial::new(vec![0, 1, 0]), int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3/2*a0^2*w1 - a1");
        assert_eq!((-p).to_string(), "-3/2*a0^2*w1 + a1");
        assert_eq!(Poly::zero(v).to_string(), "0");
    }
}
