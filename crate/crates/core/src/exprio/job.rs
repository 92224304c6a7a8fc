//! JSON job documents.
//!
//! One document describes one computation:
//!
//! ```json
//! {"kind": "residue", "vars": ["z1", "z2"], "field": ["z1^2", "z2"], "numerator": "(2*z1+1)^3"}
//! {"kind": "futaki", "vars": ["z1", "z2"], "phi": {"n": 2, "expr": "c1^3"},
//!  "charts": [{"order": 1, "field": ["z1", "2*z2"]}]}
//! {"kind": "wps-futaki", "weights": [1, 1, 2], "params": ["0", "1", "3"]}
//! {"kind": "zeta", "weights": "symbolic", "options": {"coeff": "a0^2*a1*a2"}}
//! {"kind": "ke-check", "weights": [1, 2, 3], "options": {"seed": 7}}
//! {"kind": "chern", "weights": [1, 1, 2], "params": ["0", "1", "3"], "phi": "c1^2"}
//! ```
//!
//! `phi` is either `{"n": .., "expr": ..}` or a bare expression, in which
//! case `n` is the dimension of the charts (2 for the weighted plane). A
//! `futaki` job without `phi` asks for the Futaki character. A top-level
//! `result` field is ignored, so command output can be read back as input.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value as Json};

use crate::arith::{parse_rat, Poly, Rat, VarList};
use crate::error::{Error, Result};
use crate::futaki::{FixedPointChart, InvariantPolynomial};
use crate::residue::{Caps, VectorFieldGerm};
use crate::wps::{TorusFieldParams, Weights};

use super::parse::parse_poly;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JobKind {
    Residue,
    Futaki,
    WpsFutaki,
    Zeta,
    KeCheck,
    Chern,
}

impl JobKind {
    pub const ALL: [JobKind; 6] = [
        JobKind::Residue,
        JobKind::Futaki,
        JobKind::WpsFutaki,
        JobKind::Zeta,
        JobKind::KeCheck,
        JobKind::Chern,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            JobKind::Residue => "residue",
            JobKind::Futaki => "futaki",
            JobKind::WpsFutaki => "wps-futaki",
            JobKind::Zeta => "zeta",
            JobKind::KeCheck => "ke-check",
            JobKind::Chern => "chern",
        }
    }

    fn fields(self) -> &'static [&'static str] {
        match self {
            JobKind::Residue => &["vars", "field", "numerator"],
            JobKind::Futaki => &["vars", "charts", "phi"],
            JobKind::WpsFutaki => &["weights", "params"],
            JobKind::Zeta => &["weights"],
            JobKind::KeCheck => &["weights"],
            JobKind::Chern => &["weights", "params", "phi"],
        }
    }
}

impl fmt::Display for JobKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for JobKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        JobKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown job kind `{s}`")))
    }
}

/// Solver and search settings shared by all kinds.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct JobOptions {
    pub max_rep_degree: Option<u32>,
    pub max_exponent: Option<u32>,
    pub seed: Option<u64>,
    /// For `zeta`: report only the coefficient of this `a`-monomial.
    pub coeff: Option<String>,
}

impl JobOptions {
    pub fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            max_exponent: self.max_exponent.unwrap_or(d.max_exponent),
            max_cofactor_degree: self.max_rep_degree.unwrap_or(d.max_cofactor_degree),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Payload {
    Residue {
        germ: VectorFieldGerm,
        numerator: Poly,
    },
    Futaki {
        charts: Vec<FixedPointChart>,
        /// `None` requests the Futaki character.
        phi: Option<InvariantPolynomial>,
    },
    WpsFutaki {
        weights: Weights,
        params: TorusFieldParams,
    },
    Zeta {
        weights: Weights,
    },
    KeCheck {
        weights: [u64; 3],
    },
    Chern {
        weights: Weights,
        params: TorusFieldParams,
        phi: InvariantPolynomial,
    },
}

/// A validated job.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JobDescription {
    pub payload: Payload,
    pub options: JobOptions,
}

impl JobDescription {
    pub fn new(payload: Payload) -> Self {
        JobDescription {
            payload,
            options: JobOptions::default(),
        }
    }

    pub fn kind(&self) -> JobKind {
        match self.payload {
            Payload::Residue { .. } => JobKind::Residue,
            Payload::Futaki { .. } => JobKind::Futaki,
            Payload::WpsFutaki { .. } => JobKind::WpsFutaki,
            Payload::Zeta { .. } => JobKind::Zeta,
            Payload::KeCheck { .. } => JobKind::KeCheck,
            Payload::Chern { .. } => JobKind::Chern,
        }
    }

    /// The document form; [`parse_job_value`] reads it back to an equal job.
    pub fn to_document(&self) -> Json {
        let mut doc = Map::new();
        doc.insert("kind".into(), json!(self.kind().as_str()));
        let strings = |ps: &[Poly]| Json::from(ps.iter().map(ToString::to_string).collect::<Vec<_>>());
        match &self.payload {
            Payload::Residue { germ, numerator } => {
                doc.insert("vars".into(), json!(germ.vars().names()));
                doc.insert("field".into(), strings(germ.components()));
                doc.insert("numerator".into(), json!(numerator.to_string()));
            }
            Payload::Futaki { charts, phi } => {
                if let Some(first) = charts.first() {
                    doc.insert("vars".into(), json!(first.germ().vars().names()));
                }
                let charts: Vec<Json> = charts
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        let order = c.group_order();
                        let order = match (order.is_constant() && order.constant_term().is_integer())
                            .then(|| order.constant_term().to_u64())
                        {
                            Some(Some(k)) => json!(k),
                            _ => json!(order.to_string()),
                        };
                        m.insert("order".into(), order);
                        m.insert("field".into(), strings(c.germ().components()));
                        if !(c.scale().is_constant() && c.scale().constant_term().is_one()) {
                            m.insert("scale".into(), json!(c.scale().to_string()));
                        }
                        Json::Object(m)
                    })
                    .collect();
                doc.insert("charts".into(), Json::Array(charts));
                if let Some(phi) = phi {
                    doc.insert("phi".into(), phi_document(phi));
                }
            }
            Payload::WpsFutaki { weights, params } => {
                doc.insert("weights".into(), weights_document(weights));
                doc.insert("params".into(), params_document(params));
            }
            Payload::Zeta { weights } => {
                doc.insert("weights".into(), weights_document(weights));
            }
            Payload::KeCheck { weights } => {
                doc.insert("weights".into(), json!(weights));
            }
            Payload::Chern { weights, params, phi } => {
                doc.insert("weights".into(), weights_document(weights));
                doc.insert("params".into(), params_document(params));
                doc.insert("phi".into(), phi_document(phi));
            }
        }
        let o = &self.options;
        let mut opts = Map::new();
        if let Some(v) = o.max_rep_degree {
            opts.insert("max_rep_degree".into(), json!(v));
        }
        if let Some(v) = o.max_exponent {
            opts.insert("max_exponent".into(), json!(v));
        }
        if let Some(v) = o.seed {
            opts.insert("seed".into(), json!(v));
        }
        if let Some(v) = &o.coeff {
            opts.insert("coeff".into(), json!(v));
        }
        if !opts.is_empty() {
            doc.insert("options".into(), Json::Object(opts));
        }
        Json::Object(doc)
    }
}

fn weights_document(w: &Weights) -> Json {
    match w {
        Weights::Numeric(w) => json!(w),
        Weights::Symbolic => json!("symbolic"),
    }
}

fn params_document(a: &TorusFieldParams) -> Json {
    match a {
        TorusFieldParams::Numeric(a) => json!(a.iter().map(ToString::to_string).collect::<Vec<_>>()),
        TorusFieldParams::Symbolic => json!("symbolic"),
    }
}

fn phi_document(phi: &InvariantPolynomial) -> Json {
    json!({"n": phi.n(), "expr": phi.to_string()})
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Attaches a field path to errors raised while reading a value.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Schema { .. } => e,
        other => schema(path, other.to_string()),
    })
}

/// Parses and validates a JSON job document.
pub fn parse_job(text: &str) -> Result<JobDescription> {
    let doc: Json = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: format!("invalid JSON: {e}"),
    })?;
    parse_job_value(&doc)
}

pub fn parse_job_value(doc: &Json) -> Result<JobDescription> {
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("", "a job document must be an object"))?;
    let kind_text = obj
        .get("kind")
        .ok_or_else(|| schema("kind", "missing field"))?
        .as_str()
        .ok_or_else(|| schema("kind", "expected a string"))?;
    let kind: JobKind = at("kind", kind_text.parse())?;
    for key in obj.keys() {
        if !(key == "kind" || key == "options" || key == "result" || kind.fields().contains(&key.as_str())) {
            return Err(schema(key, format!("field not used by `{kind}` jobs")));
        }
    }
    let field = |name: &str| obj.get(name).ok_or_else(|| schema(name, "missing field"));

    let payload = match kind {
        JobKind::Residue => {
            let vars = read_vars(field("vars")?, "vars")?;
            let components = read_exprs(field("field")?, "field", &vars)?;
            let germ = at("field", VectorFieldGerm::new(components))?;
            let numerator = read_expr(field("numerator")?, "numerator", &vars)?;
            Payload::Residue { germ, numerator }
        }
        JobKind::Futaki => {
            let vars = read_vars(field("vars")?, "vars")?;
            let list = field("charts")?
                .as_array()
                .ok_or_else(|| schema("charts", "expected a list of charts"))?;
            if list.is_empty() {
                return Err(schema("charts", "at least one chart is required"));
            }
            let charts = list
                .iter()
                .enumerate()
                .map(|(i, c)| read_chart(c, &format!("charts[{i}]"), &vars))
                .collect::<Result<Vec<_>>>()?;
            let n = charts[0].dim();
            let phi = obj.get("phi").map(|p| read_phi(p, "phi", n)).transpose()?;
            Payload::Futaki { charts, phi }
        }
        JobKind::WpsFutaki => Payload::WpsFutaki {
            weights: read_weights(field("weights")?, "weights")?,
            params: read_params(field("params")?, "params")?,
        },
        JobKind::Zeta => Payload::Zeta {
            weights: read_weights(field("weights")?, "weights")?,
        },
        JobKind::KeCheck => match read_weights(field("weights")?, "weights")? {
            Weights::Numeric(weights) => Payload::KeCheck { weights },
            Weights::Symbolic => return Err(schema("weights", "ke-check needs numeric weights")),
        },
        JobKind::Chern => Payload::Chern {
            weights: read_weights(field("weights")?, "weights")?,
            params: read_params(field("params")?, "params")?,
            phi: {
                let phi = read_phi(field("phi")?, "phi", 2)?;
                if phi.k() != 0 {
                    return Err(schema("phi", "characteristic numbers need an invariant of degree 2"));
                }
                phi
            },
        },
    };
    let options = match obj.get("options") {
        Some(o) => read_options(o)?,
        None => JobOptions::default(),
    };
    if options.coeff.is_some() && kind != JobKind::Zeta {
        return Err(schema("options.coeff", "only `zeta` jobs take a coefficient"));
    }
    Ok(JobDescription { payload, options })
}

fn read_vars(v: &Json, path: &str) -> Result<VarList> {
    let list = v
        .as_array()
        .ok_or_else(|| schema(path, "expected a list of variable names"))?;
    let names = list
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_str()
                .ok_or_else(|| schema(&format!("{path}[{i}]"), "expected a string"))
        })
        .collect::<Result<Vec<_>>>()?;
    at(path, VarList::new(names))
}

fn read_expr(v: &Json, path: &str, vars: &VarList) -> Result<Poly> {
    let text = v
        .as_str()
        .ok_or_else(|| schema(path, "expected an expression string"))?;
    at(path, parse_poly(text, vars))
}

fn read_exprs(v: &Json, path: &str, vars: &VarList) -> Result<Vec<Poly>> {
    let list = v
        .as_array()
        .ok_or_else(|| schema(path, "expected a list of expressions"))?;
    if list.is_empty() {
        return Err(schema(path, "at least one component is required"));
    }
    list.iter()
        .enumerate()
        .map(|(i, x)| read_expr(x, &format!("{path}[{i}]"), vars))
        .collect()
}

fn read_uint(v: &Json, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn read_u32(v: &Json, path: &str) -> Result<u32> {
    read_uint(v, path)?
        .try_into()
        .map_err(|_| schema(path, "value too large"))
}

fn read_chart(v: &Json, path: &str, vars: &VarList) -> Result<FixedPointChart> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "expected an object with `order` and `field`"))?;
    for key in obj.keys() {
        if !["order", "field", "scale"].contains(&key.as_str()) {
            return Err(schema(&format!("{path}.{key}"), "unknown chart field"));
        }
    }
    let order_path = format!("{path}.order");
    let order = obj.get("order").ok_or_else(|| schema(&order_path, "missing field"))?;
    let field_path = format!("{path}.field");
    let components = read_exprs(
        obj.get("field").ok_or_else(|| schema(&field_path, "missing field"))?,
        &field_path,
        vars,
    )?;
    let germ = at(&field_path, VectorFieldGerm::new(components))?;
    let params = germ.param_vars().clone();
    // Symbolic orders are expressions in the parameters.
    let order = if order.is_string() {
        read_expr(order, &order_path, &params)?
    } else {
        let k = read_uint(order, &order_path)?;
        at(&order_path, FixedPointChart::new(k, germ.clone()))?
            .group_order()
            .clone()
    };
    let scale = match obj.get("scale") {
        None => Poly::one(params),
        Some(s) => read_expr(s, &format!("{path}.scale"), &params)?,
    };
    at(path, FixedPointChart::with_scale(order, germ, scale))
}

fn read_phi(v: &Json, path: &str, default_n: usize) -> Result<InvariantPolynomial> {
    match v {
        Json::String(text) => at(path, InvariantPolynomial::parse(default_n, text)),
        Json::Object(obj) => {
            for key in obj.keys() {
                if key != "n" && key != "expr" {
                    return Err(schema(&format!("{path}.{key}"), "unknown field"));
                }
            }
            let n_path = format!("{path}.n");
            let n = read_uint(obj.get("n").ok_or_else(|| schema(&n_path, "missing field"))?, &n_path)? as usize;
            if n != default_n {
                return Err(schema(&n_path, format!("expected n = {default_n}")));
            }
            let e_path = format!("{path}.expr");
            let text = obj
                .get("expr")
                .ok_or_else(|| schema(&e_path, "missing field"))?
                .as_str()
                .ok_or_else(|| schema(&e_path, "expected an expression string"))?;
            at(&e_path, InvariantPolynomial::parse(n, text))
        }
        _ => Err(schema(path, "expected an expression string or {\"n\", \"expr\"}")),
    }
}

fn read_triple<'a>(v: &'a Json, path: &str, what: &str) -> Result<Option<&'a [Json]>> {
    match v {
        Json::String(s) if s == "symbolic" => Ok(None),
        Json::Array(list) if list.len() == 3 => Ok(Some(list)),
        Json::Array(_) => Err(schema(path, format!("exactly 3 {what} required"))),
        _ => Err(schema(path, format!("expected a list of 3 {what} or \"symbolic\""))),
    }
}

fn read_weights(v: &Json, path: &str) -> Result<Weights> {
    let Some(list) = read_triple(v, path, "weights")? else {
        return Ok(Weights::Symbolic);
    };
    let mut w = [0u64; 3];
    for (i, x) in list.iter().enumerate() {
        let p = format!("{path}[{i}]");
        w[i] = read_uint(x, &p)?;
        if w[i] == 0 {
            return Err(schema(&p, "weights must be positive"));
        }
    }
    Ok(Weights::Numeric(w))
}

fn read_params(v: &Json, path: &str) -> Result<TorusFieldParams> {
    let Some(list) = read_triple(v, path, "parameters")? else {
        return Ok(TorusFieldParams::Symbolic);
    };
    let mut a: Vec<Rat> = Vec::with_capacity(3);
    for (i, x) in list.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let r = match x {
            Json::String(s) => at(&p, parse_rat(s))?,
            Json::Number(n) => match n.as_i64() {
                Some(k) => Rat::from_integer(k.into()),
                None => return Err(schema(&p, "numbers must be integers; write fractions as strings")),
            },
            _ => return Err(schema(&p, "expected a rational string or an integer")),
        };
        a.push(r);
    }
    let [a0, a1, a2]: [Rat; 3] = a.try_into().expect("three entries");
    Ok(TorusFieldParams::Numeric([a0, a1, a2]))
}

fn read_options(v: &Json) -> Result<JobOptions> {
    let obj = v.as_object().ok_or_else(|| schema("options", "expected an object"))?;
    let mut o = JobOptions::default();
    for (key, value) in obj {
        let path = format!("options.{key}");
        match key.as_str() {
            "max_rep_degree" => o.max_rep_degree = Some(read_u32(value, &path)?),
            "max_exponent" => {
                let e = read_u32(value, &path)?;
                if e == 0 {
                    return Err(schema(&path, "must be at least 1"));
                }
                o.max_exponent = Some(e);
            }
            "seed" => o.seed = Some(read_uint(value, &path)?),
            "coeff" => {
                o.coeff = Some(
                    value
                        .as_str()
                        .ok_or_else(|| schema(&path, "expected a monomial string"))?
                        .to_string(),
                )
            }
            _ => return Err(schema(&path, "unknown option")),
        }
    }
    Ok(o)
}
