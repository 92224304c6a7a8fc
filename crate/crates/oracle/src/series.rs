use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use residue_futaki::arith::{Poly, Rat};
use residue_futaki::residue::VectorFieldGerm;
use residue_futaki::{Error, Result};

/// A power series in `nvars` variables, truncated above total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTruncation {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl SeriesTruncation {
    pub fn zero(nvars: usize, order: u32) -> Self {
        SeriesTruncation {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        let mut s = Self::zero(nvars, order);
        s.terms.insert(vec![0; nvars], Rat::one());
        s
    }

    /// The first `nvars` variables of `p`; any other variable must not occur.
    pub fn from_poly(p: &Poly, nvars: usize, order: u32) -> Result<Self> {
        let mut s = Self::zero(nvars, order);
        for (m, c) in p.terms() {
            let e = m.exponents();
            if e[nvars..].iter().any(|&x| x > 0) {
                return Err(Error::Usage("series oracle needs rational coefficients".into()));
            }
            s.add_term(e[..nvars].to_vec(), c.clone());
        }
        Ok(s)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if e.iter().sum::<u32>() > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficient(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn mul(&self, other: &SeriesTruncation) -> SeriesTruncation {
        let mut out = Self::zero(self.nvars, self.order.min(other.order));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `1 / self` by the geometric series; the constant term must be nonzero.
    pub fn inverse(&self) -> Option<SeriesTruncation> {
        let c0 = self.coefficient(&vec![0; self.nvars]);
        if c0.is_zero() {
            return None;
        }
        // self = c0 (1 - v)  =>  1/self = (1/c0) sum v^k
        let inv0 = c0.recip();
        let mut v = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            if e.iter().any(|&x| x > 0) {
                v.add_term(e.clone(), -(c * &inv0));
            }
        }
        let mut sum = Self::one(self.nvars, self.order);
        let mut power = Self::one(self.nvars, self.order);
        for _ in 0..self.order {
            power = power.mul(&v);
            if power.terms.is_empty() {
                break;
            }
            for (e, c) in &power.terms {
                sum.add_term(e.clone(), c.clone());
            }
        }
        for c in sum.terms.values_mut() {
            *c *= &inv0;
        }
        Some(sum)
    }
}

/// A separable component `z_j^a * u(z_j)`: the variable `j`, the exponent
/// `a` and the unit `u` as a univariate coefficient list.
struct Factor {
    var: usize,
    exponent: u32,
    unit: Vec<(u32, Rat)>,
}

fn split_component(c: &Poly, n: usize) -> Result<Factor> {
    let mut var = None;
    let mut exps: Vec<(u32, Rat)> = Vec::new();
    for (m, coeff) in c.terms() {
        let e = m.exponents();
        if e[n..].iter().any(|&x| x > 0) {
            return Err(Error::Usage("series oracle needs rational coefficients".into()));
        }
        let used: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        let [j] = used[..] else {
            return Err(Error::Usage(format!(
                "component `{c}` is not a function of one variable"
            )));
        };
        if var.is_some_and(|v| v != j) {
            return Err(Error::Usage(format!(
                "component `{c}` is not a function of one variable"
            )));
        }
        var = Some(j);
        exps.push((e[j], coeff.clone()));
    }
    let var = var.ok_or_else(|| Error::Usage("zero component".into()))?;
    let exponent = exps.iter().map(|(e, _)| *e).min().expect("nonempty");
    let unit = exps.into_iter().map(|(e, c)| (e - exponent, c)).collect();
    Ok(Factor { var, exponent, unit })
}

/// Residue of `h dz / (xi_1 ... xi_n)` for a germ whose components are
/// `xi_i = z_{s(i)}^{a_i} u_i(z_{s(i)})` with `s` a permutation and
/// `u_i(0) != 0`: the sign of `s` times the coefficient of
/// `prod z_{s(i)}^{a_i - 1}` in `h / prod u_i`.
pub fn separable_residue(germ: &VectorFieldGerm, numerator: &Poly) -> Result<Rat> {
    separable_residue_with_order(germ, numerator, None)
}

/// [`separable_residue`] with an explicit truncation order instead of the
/// default `deg h + sum(a_i - 1) + 1`.
pub fn separable_residue_with_order(germ: &VectorFieldGerm, numerator: &Poly, order: Option<u32>) -> Result<Rat> {
    let n = germ.dim();
    let factors = germ
        .components()
        .iter()
        .map(|c| split_component(c, n))
        .collect::<Result<Vec<_>>>()?;
    let mut perm: Vec<usize> = factors.iter().map(|f| f.var).collect();
    {
        let mut seen = perm.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::Usage("components must depend on distinct variables".into()));
        }
    }
    let h_degree = numerator.total_degree().unwrap_or(0);
    let reach: u32 = factors.iter().map(|f| f.exponent - 1).sum();
    let order = order.unwrap_or(h_degree + reach + 1);

    let mut acc = SeriesTruncation::from_poly(numerator, n, order)?;
    for f in &factors {
        let mut u = SeriesTruncation::zero(n, order);
        for (e, c) in &f.unit {
            let mut exps = vec![0; n];
            exps[f.var] = *e;
            u.add_term(exps, c.clone());
        }
        let inv = u
            .inverse()
            .ok_or_else(|| Error::Usage("unit part vanishes at the origin".into()))?;
        acc = acc.mul(&inv);
    }
    let mut target = vec![0; n];
    for f in &factors {
        target[f.var] = f.exponent - 1;
    }
    let mut value = acc.coefficient(&target);

    let mut sign = false;
    for i in 0..n {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            sign = !sign;
        }
    }
    if sign {
        value = -value;
    }
    Ok(value)
}
