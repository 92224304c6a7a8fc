use residue_futaki::arith::{int, Poly};
use residue_futaki::exprio::parse_poly;
use residue_futaki::wps::{zeta, Weights};

const BLOCKS: &str = include_str!("fixtures/zeta_symbolic.txt");
const COEFFICIENT: &str = include_str!("fixtures/zeta_coefficient.txt");

#[test]
fn symbolic_zeta_matches_the_fixture() {
    let z = zeta(&Weights::Symbolic).unwrap();
    let vars = z.poly().vars().clone();
    let blocks: Vec<Poly> = BLOCKS.lines().map(|l| parse_poly(l, &vars).unwrap()).collect();
    assert_eq!(blocks.len(), 3);
    assert!(blocks.iter().all(|b| b.num_terms() == 36));
    let sum = blocks.iter().fold(Poly::zero(vars.clone()), |acc, b| &acc + b);
    assert_eq!(z.poly(), &sum);
    assert_eq!(sum.num_terms(), 90);
}

#[test]
fn the_listed_coefficient_matches() {
    let z = zeta(&Weights::Symbolic).unwrap();
    let c = z.coeff_of("a0^2*a1*a2").unwrap();
    assert_eq!(c, parse_poly(COEFFICIENT.trim(), c.vars()).unwrap());
}

#[test]
fn zeta_at_numeric_weights_is_the_specialization() {
    let symbolic = zeta(&Weights::Symbolic).unwrap();
    let numeric = zeta(&Weights::new([1, 2, 3]).unwrap()).unwrap();
    let at = symbolic
        .poly()
        .eval(&[("w0", int(1)), ("w1", int(2)), ("w2", int(3))])
        .unwrap();
    assert_eq!(at.rebase(numeric.poly().vars()).unwrap(), *numeric.poly());
}
