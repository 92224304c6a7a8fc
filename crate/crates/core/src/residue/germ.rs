use crate::arith::{Monomial, Poly, PolyMatrix, VarList};
use crate::error::{Error, Result};

/// A holomorphic vector-field germ with its singular point at the origin.
///
/// The ambient variable list starts with the `n` germ coordinates; any
/// variables after them are symbolic parameters that may appear in the
/// coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorFieldGerm {
    vars: VarList,
    components: Vec<Poly>,
    params: VarList,
}

impl VectorFieldGerm {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        let Some(first) = components.first() else {
            return Err(Error::usage("a germ needs at least one component"));
        };
        let vars = first.vars().clone();
        if components.iter().any(|c| c.vars() != &vars) {
            return Err(Error::usage("germ components live over different variable lists"));
        }
        if vars.len() < n {
            return Err(Error::usage(format!(
                "{n} components but only {} variables declared",
                vars.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.terms().any(|(m, _)| m.exponents()[..n].iter().all(|&e| e == 0)) {
                return Err(Error::usage(format!(
                    "component {} does not vanish at the origin",
                    i + 1
                )));
            }
        }
        let params = VarList::new(vars.names()[n..].iter())?;
        Ok(VectorFieldGerm {
            vars,
            components,
            params,
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Germ coordinates followed by parameters.
    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn param_vars(&self) -> &VarList {
        &self.params
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// True if any coefficient involves a parameter.
    pub fn is_symbolic(&self) -> bool {
        let n = self.dim();
        self.components
            .iter()
            .any(|c| c.terms().any(|(m, _)| m.exponents()[n..].iter().any(|&e| e > 0)))
    }

    /// Matrix of partial derivatives `d xi_i / d z_j`.
    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.dim();
        PolyMatrix::from_fn(n, n, self.vars.clone(), |i, j| self.components[i].diff_index(j, 1))
            .expect("entries share the germ's variable list")
    }

    /// Sets the germ coordinates to zero and moves the result into the
    /// parameter ring.
    pub fn at_origin(&self, p: &Poly) -> Result<Poly> {
        let n = self.dim();
        let kept = p
            .terms()
            .filter(|(m, _)| m.exponents()[..n].iter().all(|&e| e == 0))
            .map(|(m, c)| (Monomial::new(m.exponents()[n..].to_vec()), c.clone()));
        Poly::from_terms(self.params.clone(), kept)
    }

    pub(crate) fn check_numerator(&self, numerator: &Poly) -> Result<()> {
        if numerator.vars() != &self.vars {
            return Err(Error::usage(format!(
                "numerator lives over {:?} but the germ over {:?}",
                numerator.vars(),
                self.vars
            )));
        }
        Ok(())
    }
}

/// `jacobian` as a free function, mirroring the other residue operations.
pub fn jacobian(germ: &VectorFieldGerm) -> PolyMatrix {
    germ.jacobian()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprio::parse_poly;

    fn germ(vars: &[&str], field: &[&str]) -> VectorFieldGerm {
        let v = VarList::new(vars.iter().copied()).unwrap();
        VectorFieldGerm::new(field.iter().map(|s| parse_poly(s, &v).unwrap()).collect()).unwrap()
    }

    #[test]
    fn jacobians() {
        assert_eq!(
            germ(&["z1", "z2"], &["z1^2", "z2"]).jacobian().to_string(),
            "[[2*z1, 0], [0, 1]]"
        );
        assert_eq!(
            germ(&["z1", "z2"], &["z2", "z1"]).jacobian().to_string(),
            "[[0, 1], [1, 0]]"
        );
        assert_eq!(
            germ(&["z1", "z2"], &["z1^2 - z2^2", "z1*z2"]).jacobian().to_string(),
            "[[2*z1, -2*z2], [z2, z1]]"
        );
    }

    #[test]
    fn components_must_vanish_at_origin() {
        let v = VarList::new(["z1", "z2"]).unwrap();
        let bad = vec![parse_poly("z1 + 1", &v).unwrap(), parse_poly("z2", &v).unwrap()];
        assert!(matches!(VectorFieldGerm::new(bad), Err(Error::Usage(_))));
        assert!(matches!(VectorFieldGerm::new(vec![]), Err(Error::Usage(_))));
        let v = VarList::new(["z1", "z2", "l"]).unwrap();
        let param_only = vec![parse_poly("l", &v).unwrap(), parse_poly("z2", &v).unwrap()];
        assert!(VectorFieldGerm::new(param_only).is_err());
    }

    #[test]
    fn parameters_follow_germ_coordinates() {
        let g = germ(&["z1", "z2", "l1", "l2"], &["l1*z1", "l2*z2"]);
        assert!(g.is_symbolic());
        assert_eq!(g.param_vars().names(), ["l1", "l2"]);
        let det = g.jacobian().det().unwrap();
        assert_eq!(g.at_origin(&det).unwrap().to_string(), "l1*l2");
    }
}
