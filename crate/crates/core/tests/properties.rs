use proptest::prelude::*;
use residue_futaki::arith::{int, rat, Monomial, Poly, PolyMatrix, Rat, RatFunc, VarList};
use residue_futaki::exprio::parse_poly;
use residue_futaki::futaki::{morita_futaki, FixedPointChart, InvariantPolynomial};
use residue_futaki::residue::{
    find_monomial_representation, grothendieck_residue, nondegenerate_residue, residue_via_representation, Caps,
    VectorFieldGerm,
};
use residue_futaki::wps::{chern_number_wps, numeric_value, validate_params, TorusFieldParams, Weights};

fn xyz() -> VarList {
    VarList::new(["x", "y", "z"]).unwrap()
}

fn plane() -> VarList {
    VarList::new(["z1", "z2"]).unwrap()
}

fn coeff() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly_in(vars: VarList, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), coeff()), 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(vars.clone(), terms.into_iter().map(|(e, c)| (Monomial::new(e), c))).unwrap()
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    poly_in(xyz(), 3, 5)
}

/// A nonzero linear form, irreducible by construction.
fn linear_form() -> impl Strategy<Value = Poly> {
    prop::array::uniform3(-4i64..=4)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| {
            (0..3).fold(Poly::zero(xyz()), |acc, i| {
                &acc + &Poly::var_at(&xyz(), i).scale(&int(c[i]))
            })
        })
}

fn matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly_in(xyz(), 1, 2), n * n)
        .prop_map(move |entries| PolyMatrix::new(n, n, xyz(), entries).unwrap())
}

/// `L * (z1^a u1(z1), z2^b u2(z2))` for an invertible integer matrix `L`.
fn mixed_germ() -> impl Strategy<Value = VectorFieldGerm> {
    let unit = || (coeff().prop_filter("unit", |c| *c != int(0)), coeff());
    (1u32..=3, 1u32..=3, unit(), unit(), prop::array::uniform4(-3i64..=3))
        .prop_filter("invertible", |(_, _, _, _, l)| l[0] * l[3] != l[1] * l[2])
        .prop_map(|(a, b, (u0, u1), (v0, v1), l)| {
            let v = plane();
            let z1 = Poly::var_at(&v, 0);
            let z2 = Poly::var_at(&v, 1);
            let c1 = &z1.pow(a) * &(&Poly::constant(v.clone(), u0) + &z1.scale(&u1));
            let c2 = &z2.pow(b) * &(&Poly::constant(v.clone(), v0) + &z2.scale(&v1));
            let row = |p: i64, q: i64| &c1.scale(&int(p)) + &c2.scale(&int(q));
            VectorFieldGerm::new(vec![row(l[0], l[1]), row(l[2], l[3])]).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Poly::one(xyz()), p.clone());
    }

    #[test]
    fn ratfunc_canonical_form(parts in prop::collection::vec((poly(), linear_form(), 1u32..=2), 1..=4)) {
        // The same sum built in two orders has one structural form.
        let terms: Vec<RatFunc> = parts
            .iter()
            .map(|(p, f, e)| RatFunc::new(p.clone(), [(f.clone(), *e)]).unwrap())
            .collect();
        let forward = terms.iter().fold(RatFunc::zero(xyz()), |acc, t| acc.try_add(t).unwrap());
        let backward = terms.iter().rev().fold(RatFunc::zero(xyz()), |acc, t| t.try_add(&acc).unwrap());
        prop_assert_eq!(&forward, &backward);
        prop_assert_eq!(forward.to_string(), backward.to_string());
        let undone = terms.iter().fold(forward, |acc, t| acc.try_sub(t).unwrap());
        prop_assert!(undone.is_zero());
        prop_assert!(undone.is_polynomial());
    }

    #[test]
    fn ratfunc_cancels_tracked_factors(p in poly(), f in linear_form(), g in linear_form(), e in 1u32..=3) {
        let a = RatFunc::new(p.clone(), [(f.clone(), 1)]).unwrap();
        let b = RatFunc::new(&p * &g.pow(e), [(f.clone(), 1), (g.clone(), e)]).unwrap();
        prop_assert_eq!(&a, &b);
        let c = RatFunc::new(&p * &f, [(f.clone(), 1)]).unwrap();
        prop_assert_eq!(c.as_poly(), Some(&p));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        prop_assert_eq!(a.det_bareiss().unwrap(), a.det_cofactor().unwrap());
    }

    #[test]
    fn charpoly_ends_are_trace_and_determinant(m in matrix(3)) {
        let c = m.charpoly_coeffs().unwrap();
        prop_assert_eq!(c.len(), 3);
        prop_assert_eq!(&c[0], &m.trace().unwrap());
        prop_assert_eq!(&c[2], &m.det().unwrap());
        // c2 is the sum of principal 2x2 minors.
        let minors = [[0, 1], [0, 2], [1, 2]]
            .iter()
            .fold(Poly::zero(xyz()), |acc, ix| &acc + &m.minor(ix, ix).unwrap());
        prop_assert_eq!(&c[1], &minors);
    }

    #[test]
    fn printing_round_trips(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&text, &xyz()).unwrap(), p);
    }

    #[test]
    fn residue_is_linear(g in mixed_germ(), h1 in poly_in(plane(), 3, 4), h2 in poly_in(plane(), 3, 4), s in coeff(), t in coeff()) {
        let caps = Caps::default();
        let res = |h: &Poly| grothendieck_residue(&g, h, caps).unwrap().as_rat().cloned().unwrap();
        let combined = res(&(&h1.scale(&s) + &h2.scale(&t)));
        prop_assert_eq!(combined, &(&res(&h1) * &s) + &(&res(&h2) * &t));
    }

    #[test]
    fn residue_annihilates_the_ideal(g in mixed_germ(), p in poly_in(plane(), 2, 3), q in poly_in(plane(), 2, 3)) {
        let c = g.components();
        let h = &(&p * &c[0]) + &(&q * &c[1]);
        prop_assert!(grothendieck_residue(&g, &h, Caps::default()).unwrap().is_zero());
    }

    #[test]
    fn forced_transformation_law_on_linear_germs(l in prop::array::uniform4(-6i64..=6), h in poly_in(plane(), 3, 4)) {
        prop_assume!(l[0] * l[3] != l[1] * l[2]);
        let v = plane();
        let z = [Poly::var_at(&v, 0), Poly::var_at(&v, 1)];
        let row = |p: i64, q: i64| &z[0].scale(&int(p)) + &z[1].scale(&int(q));
        let g = VectorFieldGerm::new(vec![row(l[0], l[1]), row(l[2], l[3])]).unwrap();
        let rep = find_monomial_representation(&g, Caps::default()).unwrap();
        prop_assert_eq!(nondegenerate_residue(&g, &h).unwrap(), residue_via_representation(&g, &rep, &h).unwrap());
    }

    #[test]
    fn residue_scales_with_the_field(l in prop::array::uniform4(-6i64..=6), h in poly_in(plane(), 3, 4), s in coeff()) {
        // Scaling the field by s divides the residue of h by s^2.
        prop_assume!(l[0] * l[3] != l[1] * l[2] && s != int(0));
        let v = plane();
        let z = [Poly::var_at(&v, 0), Poly::var_at(&v, 1)];
        let row = |p: i64, q: i64| &z[0].scale(&int(p)) + &z[1].scale(&int(q));
        let g = VectorFieldGerm::new(vec![row(l[0], l[1]), row(l[2], l[3])]).unwrap();
        let gs = VectorFieldGerm::new(g.components().iter().map(|c| c.scale(&s)).collect()).unwrap();
        let r = nondegenerate_residue(&g, &h).unwrap().as_rat().cloned().unwrap();
        let rs = nondegenerate_residue(&gs, &h).unwrap().as_rat().cloned().unwrap();
        prop_assert_eq!(rs, r / (&s * &s));
    }

    #[test]
    fn invariants_do_not_depend_on_chart_order(perm in Just([0usize, 1, 2]).prop_shuffle(), e in prop::array::uniform6(1i64..=5)) {
        let v = plane();
        let charts: Vec<FixedPointChart> = (0..3)
            .map(|i| {
                let f = vec![Poly::var_at(&v, 0).scale(&int(e[2 * i])), Poly::var_at(&v, 1).scale(&int(-e[2 * i + 1]))];
                FixedPointChart::new(1 + i as u64, VectorFieldGerm::new(f).unwrap()).unwrap()
            })
            .collect();
        let shuffled: Vec<FixedPointChart> = perm.iter().map(|&i| charts[i].clone()).collect();
        let phi = InvariantPolynomial::parse(2, "c1^3 - 2*c1*c2").unwrap();
        let a = morita_futaki(&charts, &phi, Caps::default()).unwrap();
        let b = morita_futaki(&shuffled, &phi, Caps::default()).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn chern_numbers_do_not_depend_on_the_field(a in prop::array::uniform3(-9i64..=9), b in prop::array::uniform3(-9i64..=9)) {
        let w = Weights::new([2, 3, 5]).unwrap();
        let (pa, pb) = (TorusFieldParams::from_ints(a), TorusFieldParams::from_ints(b));
        prop_assume!(validate_params(&w, &pa).is_ok() && validate_params(&w, &pb).is_ok());
        for phi in ["c1^2", "c2", "c1^2 - 3*c2"] {
            let phi = InvariantPolynomial::parse(2, phi).unwrap();
            let x = numeric_value(&chern_number_wps(&w, &phi, &pa).unwrap()).unwrap();
            let y = numeric_value(&chern_number_wps(&w, &phi, &pb).unwrap()).unwrap();
            prop_assert_eq!(x, y);
        }
    }
}
