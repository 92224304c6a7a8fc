//! Numerical residues of plane germs by perturbation.
//!
//! `xi + eps * A z` with a fixed generic rational `A` has only simple zeros
//! near the origin, and the sum of `h / det J` over them tends to the
//! residue of `xi` as `eps -> 0`. The zeros are located from the resultant
//! in `z2` (computed exactly), whose roots give the `z1` coordinates; each
//! point is then refined by Newton's method on the full system.

use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use residue_futaki::arith::{Poly, PolyMatrix, Rat, VarList};
use residue_futaki::residue::VectorFieldGerm;

#[derive(Clone, Debug)]
pub struct PerturbationOptions {
    /// Zeros farther than this from the origin (max norm) are ignored.
    pub radius: f64,
    /// Newton residual above which a located zero is rejected.
    pub tolerance: f64,
}

impl Default for PerturbationOptions {
    fn default() -> Self {
        PerturbationOptions {
            radius: 0.5,
            tolerance: 1e-11,
        }
    }
}

/// Richardson-extrapolated sum, its error estimate, and the number of zeros
/// found in the polydisc.
#[derive(Clone, Debug)]
pub struct PerturbationEstimate {
    pub value: Complex64,
    pub error_estimate: f64,
    pub zeros: usize,
}

/// The oracle could not produce a trustworthy number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconclusive(pub String);

impl fmt::Display for Inconclusive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perturbation oracle inconclusive: {}", self.0)
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Inconclusive> {
    Err(Inconclusive(msg.into()))
}

/// Approximates `Res_0 { h dz / (xi_1 xi_2) }` as `2 S(eps/2) - S(eps)`,
/// where `S` sums `h / det J` over the zeros of the perturbed germ.
pub fn perturbation_residue(
    germ: &VectorFieldGerm,
    numerator: &Poly,
    epsilon: &Rat,
    options: &PerturbationOptions,
) -> Result<PerturbationEstimate, Inconclusive> {
    if germ.dim() != 2 || germ.vars().len() != 2 {
        return fail("only parameter-free germs in two variables are supported");
    }
    let half = epsilon / Rat::from_integer(2.into());
    let (s1, n1) = perturbed_sum(germ, numerator, epsilon, options)?;
    let (s2, n2) = perturbed_sum(germ, numerator, &half, options)?;
    if n1 != n2 {
        return fail(format!("{n1} zeros at eps but {n2} at eps/2"));
    }
    Ok(PerturbationEstimate {
        value: s2 * 2.0 - s1,
        error_estimate: (s2 - s1).norm(),
        zeros: n1,
    })
}

/// The generic direction of the perturbation.
fn direction() -> [[Rat; 2]; 2] {
    let r = |n: i64, d: i64| Rat::new(n.into(), d.into());
    [[r(3, 7), r(-5, 11)], [r(2, 13), r(9, 17)]]
}

fn perturbed_sum(
    germ: &VectorFieldGerm,
    numerator: &Poly,
    eps: &Rat,
    options: &PerturbationOptions,
) -> Result<(Complex64, usize), Inconclusive> {
    let vars = germ.vars().clone();
    let z = [Poly::var_at(&vars, 0), Poly::var_at(&vars, 1)];
    let a = direction();
    let g: Vec<Poly> = (0..2)
        .map(|i| {
            let lin = &z[0].scale(&a[i][0]) + &z[1].scale(&a[i][1]);
            &germ.components()[i] + &lin.scale(eps)
        })
        .collect();
    let jac: Vec<Vec<Poly>> = g
        .iter()
        .map(|gi| vec![gi.diff_index(0, 1), gi.diff_index(1, 1)])
        .collect();

    let res = resultant_z2(&g[0], &g[1], &vars).ok_or_else(|| Inconclusive("resultant failed".into()))?;
    let coeffs: Vec<Complex64> = (0..=res.degree_in(0))
        .map(|k| {
            let m = residue_futaki::arith::Monomial::new(vec![k, 0]);
            Complex64::new(res.coeff(&m).to_f64().unwrap_or(f64::NAN), 0.0)
        })
        .collect();
    if coeffs.iter().all(|c| c.is_zero()) {
        return fail("resultant vanishes identically");
    }
    let roots1 = polynomial_roots(&coeffs)?;

    let mut zeros: Vec<[Complex64; 2]> = Vec::new();
    for r in roots1 {
        if r.norm() > 2.0 * options.radius {
            continue;
        }
        let slice = univariate_in_z2(&g[0], r);
        let candidates = if slice.len() > 1 {
            polynomial_roots(&slice)?
        } else {
            Vec::new()
        };
        let best = candidates
            .into_iter()
            .map(|s| (s, eval(&g[1], [r, s]).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        let Some((s, _)) = best else { continue };
        let p = newton(&g, &jac, [r, s]);
        let residual = eval(&g[0], p).norm().max(eval(&g[1], p).norm());
        if residual > options.tolerance {
            return fail(format!("Newton residual {residual:e} at a zero"));
        }
        if p[0].norm().max(p[1].norm()) > options.radius {
            continue;
        }
        let scale = p[0].norm().max(p[1].norm()).max(1e-300);
        if zeros
            .iter()
            .any(|q| (q[0] - p[0]).norm().max((q[1] - p[1]).norm()) < 1e-8 * scale)
        {
            return fail("two located zeros coincide; the projection is not generic");
        }
        zeros.push(p);
    }
    if zeros.is_empty() {
        return fail("no zeros found near the origin");
    }

    let mut sum = Complex64::zero();
    for p in &zeros {
        let det = eval(&jac[0][0], *p) * eval(&jac[1][1], *p) - eval(&jac[0][1], *p) * eval(&jac[1][0], *p);
        if det.norm() == 0.0 {
            return fail("a perturbed zero is degenerate");
        }
        sum += eval(numerator, *p) / det;
    }
    Ok((sum, zeros.len()))
}

/// Sylvester resultant of `f` and `g` with respect to the second variable.
fn resultant_z2(f: &Poly, g: &Poly, vars: &VarList) -> Option<Poly> {
    let m = f.degree_in(1) as usize;
    let l = g.degree_in(1) as usize;
    if m == 0 || l == 0 {
        return None;
    }
    let coeff_in_z2 = |p: &Poly, k: u32| -> Poly {
        let terms = p.terms().filter(|(mono, _)| mono.exponents()[1] == k).map(|(mono, c)| {
            (
                residue_futaki::arith::Monomial::new(vec![mono.exponents()[0], 0]),
                c.clone(),
            )
        });
        Poly::from_terms(vars.clone(), terms).expect("same variables")
    };
    let size = m + l;
    let zero = Poly::zero(vars.clone());
    let mut rows = vec![vec![zero; size]; size];
    for i in 0..l {
        for k in 0..=m {
            rows[i][i + k] = coeff_in_z2(f, (m - k) as u32);
        }
    }
    for i in 0..m {
        for k in 0..=l {
            rows[l + i][i + k] = coeff_in_z2(g, (l - k) as u32);
        }
    }
    PolyMatrix::from_rows(vars.clone(), rows).ok()?.det().ok()
}

fn to_c(r: &Rat) -> Complex64 {
    Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
}

fn eval(p: &Poly, z: [Complex64; 2]) -> Complex64 {
    p.terms()
        .map(|(m, c)| {
            let e = m.exponents();
            to_c(c) * z[0].powu(e[0]) * z[1].powu(e[1])
        })
        .sum()
}

/// Coefficients (ascending) of `p(r, z2)` as a polynomial in `z2`.
fn univariate_in_z2(p: &Poly, r: Complex64) -> Vec<Complex64> {
    let d = p.degree_in(1) as usize;
    let mut out = vec![Complex64::zero(); d + 1];
    for (m, c) in p.terms() {
        let e = m.exponents();
        out[e[1] as usize] += to_c(c) * r.powu(e[0]);
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.norm() == 0.0) {
        out.pop();
    }
    out
}

fn newton(g: &[Poly], jac: &[Vec<Poly>], mut p: [Complex64; 2]) -> [Complex64; 2] {
    for _ in 0..60 {
        let f = [eval(&g[0], p), eval(&g[1], p)];
        let j = [
            [eval(&jac[0][0], p), eval(&jac[0][1], p)],
            [eval(&jac[1][0], p), eval(&jac[1][1], p)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() == 0.0 {
            break;
        }
        let d0 = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let d1 = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        p = [p[0] - d0, p[1] - d1];
        if d0.norm().max(d1.norm()) <= 1e-17 * p[0].norm().max(p[1].norm()) {
            break;
        }
    }
    p
}

/// All roots of `sum c_k x^k` by Durand-Kerner iteration, each polished by
/// Newton's method.
fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, Inconclusive> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let bound = 1.0 + monic[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * (bound / 2.0)).collect();
    let poly = |x: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a);
    let mut converged = false;
    for _ in 0..5000 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                z[i] += Complex64::new(1e-10, 1e-10);
                continue;
            }
            let step = poly(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1e-300));
        }
        if delta < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return fail("root iteration did not converge");
    }
    let dpoly = |x: Complex64| {
        monic
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::zero(), |acc, (k, &a)| acc * x + a * k as f64)
    };
    for r in z.iter_mut() {
        for _ in 0..5 {
            let dp = dpoly(*r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= poly(*r) / dp;
        }
    }
    Ok(z)
}
