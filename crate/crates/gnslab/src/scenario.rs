//! The scenario document (`gnslab-scenario/1`) and its static validation.

use std::collections::BTreeMap;

use gnslab_core::{Complex64, Exact, ToleranceConfig};
use serde::Deserialize;
use serde_json::Value;

use crate::codec::{decode_matrix, decode_vec, CodecError};

pub const SCENARIO_SCHEMA: &str = "gnslab-scenario/1";

type Rows = Vec<Vec<Value>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Exact,
    Float,
}

impl BackendChoice {
    pub fn name(self) -> &'static str {
        match self {
            BackendChoice::Exact => "exact",
            BackendChoice::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rank_tol: Option<f64>,
    pub psd_tol: Option<f64>,
    pub spec_tol: Option<f64>,
}

impl Tolerances {
    pub fn resolve(&self, uniform: Option<f64>) -> ToleranceConfig {
        let d = ToleranceConfig::default();
        match uniform {
            Some(x) => ToleranceConfig {
                rank_tol: x,
                psd_tol: x,
                spec_tol: x,
            },
            None => ToleranceConfig {
                rank_tol: self.rank_tol.unwrap_or(d.rank_tol),
                psd_tol: self.psd_tol.unwrap_or(d.psd_tol),
                spec_tol: self.spec_tol.unwrap_or(d.spec_tol),
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Scenario {
    pub schema: String,
    pub backend: BackendChoice,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub declarations: Vec<Declaration>,
    #[serde(default)]
    pub commands: Vec<Command>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Declaration {
    pub name: String,
    #[serde(flatten)]
    pub kind: DeclKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeclKind {
    MatrixAlgebra { n: usize },
    FunctionAlgebra { points: Vec<String> },
    ComplexNumbers,
    CyclicGroup { n: usize },
    Symmetric3,
    GroupTable { table: Vec<Vec<usize>> },
    GroupAlgebra { group: String },
    TensorAlgebra { left: String, right: String },
    Element {
        algebra: String,
        coords: Option<Vec<Value>>,
        matrix: Option<Rows>,
    },
    State {
        algebra: String,
        functional: Option<Vec<Value>>,
        vector: Option<Vec<Value>>,
        density: Option<Rows>,
    },
    Homomorphism { dom: String, cod: String, matrix: Rows },
    LinearMap {
        dom: String,
        cod: String,
        matrix: Option<Rows>,
        kraus: Option<Vec<Rows>>,
    },
    ProbSpace { points: Vec<String>, weights: Vec<Value> },
    Kernel { dom: Vec<String>, cod: Vec<String>, matrix: Rows },
    Action {
        group: String,
        state: String,
        permutations: Option<Vec<Vec<usize>>>,
        unitaries: Option<Vec<Rows>>,
    },
    Matrix { rows: Rows },
    Vector { entries: Vec<Value> },
}

#[derive(Debug, Clone, Deserialize)]
pub struct Command {
    pub name: Option<String>,
    #[serde(flatten)]
    pub op: Op,
    /// Payload fields the result must reproduce.
    pub expect: Option<serde_json::Map<String, Value>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    Gns { state: String },
    Positivity { state: String },
    GnsMap { hom: String, state: String },
    Dinaturality { hom: String, state: String, vector: String },
    Monoidal { left: String, right: String },
    Conjugate { state: String },
    Normalize { state: String },
    Cp { map: String },
    Stinespring { map: String, state: String },
    Process { map: String, state: String },
    Conditioning { projection: String, state: String },
    Collapse { isometry: String, vector: String },
    Scattering { s: String, i_alpha: String, p_beta: String, vector: String },
    Born { element: String, state: String },
    EeLink { element: String, state: String, lambda: Value },
    DefiniteValue { element: String, state: String },
    L2 { space: String },
    Gelfand { kernel: String },
    Compatibility { kernel: String, space: String },
    EquivariantGns { action: String },
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Gns { .. } => "gns",
            Op::Positivity { .. } => "positivity",
            Op::GnsMap { .. } => "gns_map",
            Op::Dinaturality { .. } => "dinaturality",
            Op::Monoidal { .. } => "monoidal",
            Op::Conjugate { .. } => "conjugate",
            Op::Normalize { .. } => "normalize",
            Op::Cp { .. } => "cp",
            Op::Stinespring { .. } => "stinespring",
            Op::Process { .. } => "process",
            Op::Conditioning { .. } => "conditioning",
            Op::Collapse { .. } => "collapse",
            Op::Scattering { .. } => "scattering",
            Op::Born { .. } => "born",
            Op::EeLink { .. } => "ee_link",
            Op::DefiniteValue { .. } => "definite_value",
            Op::L2 { .. } => "l2",
            Op::Gelfand { .. } => "gelfand",
            Op::Compatibility { .. } => "compatibility",
            Op::EquivariantGns { .. } => "equivariant_gns",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema {0:?}, expected {SCENARIO_SCHEMA:?}")]
    Schema(String),
}

pub fn parse(text: &str) -> Result<Scenario, LoadError> {
    let sc: Scenario = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if sc.schema != SCENARIO_SCHEMA {
        return Err(LoadError::Schema(sc.schema));
    }
    Ok(sc)
}

pub fn load(path: &str) -> Result<Scenario, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_string(),
        source,
    })?;
    parse(&text)
}

/// A problem found without executing anything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
    /// Set for references to names that are not declared earlier.
    pub unresolved: Option<String>,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// What validation knows about a declared name.
#[derive(Debug, Clone)]
enum Shape {
    Algebra { dim: usize, rep: usize, function: bool },
    Group { order: usize },
    Element { alg: String },
    State { alg: String },
    Hom { cod: String },
    Linear { cod: String },
    Prob,
    Kernel,
    Action,
    Matrix { rows: usize, cols: usize },
    Vector { len: usize },
}

impl Shape {
    fn kind(&self) -> &'static str {
        match self {
            Shape::Algebra { .. } => "algebra",
            Shape::Group { .. } => "group",
            Shape::Element { .. } => "element",
            Shape::State { .. } => "state",
            Shape::Hom { .. } => "homomorphism",
            Shape::Linear { .. } => "linear map",
            Shape::Prob => "probability space",
            Shape::Kernel => "kernel",
            Shape::Action => "action",
            Shape::Matrix { .. } => "matrix",
            Shape::Vector { .. } => "vector",
        }
    }
}

struct Checker<'a> {
    backend: BackendChoice,
    lenient: bool,
    names: BTreeMap<&'a str, Shape>,
    out: Vec<Diagnostic>,
    location: String,
}

impl<'a> Checker<'a> {
    fn report(&mut self, message: impl Into<String>) {
        self.out.push(Diagnostic {
            location: self.location.clone(),
            message: message.into(),
            unresolved: None,
        });
    }

    fn lookup(&mut self, name: &str, want: &'static str) -> Option<Shape> {
        match self.names.get(name) {
            None => {
                self.out.push(Diagnostic {
                    location: self.location.clone(),
                    message: format!("unresolved reference {name:?}"),
                    unresolved: Some(name.to_string()),
                });
                None
            }
            Some(s) if s.kind() != want => {
                let found = s.kind();
                self.report(format!("{name:?} is a {found}, expected a {want}"));
                None
            }
            Some(s) => Some(s.clone()),
        }
    }

    fn algebra(&mut self, name: &str) -> Option<(usize, usize, bool)> {
        match self.lookup(name, "algebra")? {
            Shape::Algebra { dim, rep, function } => Some((dim, rep, function)),
            _ => None,
        }
    }

    fn state_alg(&mut self, name: &str) -> Option<String> {
        match self.lookup(name, "state")? {
            Shape::State { alg } => Some(alg),
            _ => None,
        }
    }

    fn element_alg(&mut self, name: &str) -> Option<String> {
        match self.lookup(name, "element")? {
            Shape::Element { alg } => Some(alg),
            _ => None,
        }
    }

    fn codec_error(&mut self, e: CodecError) {
        self.report(e.to_string());
    }

    fn scalars(&mut self, v: &[Value]) -> Option<usize> {
        let res = match self.backend {
            BackendChoice::Exact => decode_vec::<Exact>(v, self.lenient).map(|x| x.len()),
            BackendChoice::Float => decode_vec::<Complex64>(v, self.lenient).map(|x| x.len()),
        };
        res.map_err(|e| self.codec_error(e)).ok()
    }

    fn scalar(&mut self, v: &Value) {
        self.scalars(std::slice::from_ref(v));
    }

    fn matrix(&mut self, rows: &[Vec<Value>]) -> Option<(usize, usize)> {
        let res = match self.backend {
            BackendChoice::Exact => decode_matrix::<Exact>(rows, self.lenient).map(|m| m.shape()),
            BackendChoice::Float => decode_matrix::<Complex64>(rows, self.lenient).map(|m| m.shape()),
        };
        res.map_err(|e| self.codec_error(e)).ok()
    }

    fn expect_shape(&mut self, what: &str, got: Option<(usize, usize)>, want: (usize, usize)) {
        if let Some(g) = got {
            if g != want {
                self.report(format!("{what} is {}x{}, expected {}x{}", g.0, g.1, want.0, want.1));
            }
        }
    }

    fn expect_len(&mut self, what: &str, got: Option<usize>, want: usize) {
        if let Some(g) = got {
            if g != want {
                self.report(format!("{what} has {g} entries, expected {want}"));
            }
        }
    }

    fn declaration(&mut self, d: &'a Declaration) -> Option<Shape> {
        Some(match &d.kind {
            DeclKind::MatrixAlgebra { n } => Shape::Algebra {
                dim: n * n,
                rep: *n,
                function: false,
            },
            DeclKind::FunctionAlgebra { points } => Shape::Algebra {
                dim: points.len(),
                rep: points.len(),
                function: true,
            },
            DeclKind::ComplexNumbers => Shape::Algebra {
                dim: 1,
                rep: 1,
                function: true,
            },
            DeclKind::CyclicGroup { n } => {
                if *n == 0 {
                    self.report("the cyclic group needs n >= 1");
                }
                Shape::Group { order: *n }
            }
            DeclKind::Symmetric3 => Shape::Group { order: 6 },
            DeclKind::GroupTable { table } => Shape::Group { order: table.len() },
            DeclKind::GroupAlgebra { group } => match self.lookup(group, "group")? {
                Shape::Group { order } => Shape::Algebra {
                    dim: order,
                    rep: order,
                    function: false,
                },
                _ => return None,
            },
            DeclKind::TensorAlgebra { left, right } => {
                let (a, b) = (self.algebra(left), self.algebra(right));
                let ((da, ra, fa), (db, rb, fb)) = (a?, b?);
                Shape::Algebra {
                    dim: da * db,
                    rep: ra * rb,
                    function: fa && fb,
                }
            }
            DeclKind::Element { algebra, coords, matrix } => {
                let (dim, rep, _) = self.algebra(algebra)?;
                match (coords, matrix) {
                    (Some(c), None) => {
                        let n = self.scalars(c);
                        self.expect_len("coords", n, dim);
                    }
                    (None, Some(m)) => {
                        let s = self.matrix(m);
                        self.expect_shape("matrix", s, (rep, rep));
                    }
                    _ => self.report("an element needs exactly one of coords or matrix"),
                }
                Shape::Element { alg: algebra.clone() }
            }
            DeclKind::State {
                algebra,
                functional,
                vector,
                density,
            } => {
                let (dim, rep, _) = self.algebra(algebra)?;
                match (functional, vector, density) {
                    (Some(f), None, None) => {
                        let n = self.scalars(f);
                        self.expect_len("functional", n, dim);
                    }
                    (None, Some(v), None) => {
                        let n = self.scalars(v);
                        self.expect_len("vector", n, rep);
                    }
                    (None, None, Some(m)) => {
                        let s = self.matrix(m);
                        self.expect_shape("density", s, (rep, rep));
                    }
                    _ => self.report("a state needs exactly one of functional, vector or density"),
                }
                Shape::State { alg: algebra.clone() }
            }
            DeclKind::Homomorphism { dom, cod, matrix } => {
                let (a, b) = (self.algebra(dom), self.algebra(cod));
                let ((dd, _, _), (dc, _, _)) = (a?, b?);
                let s = self.matrix(matrix);
                self.expect_shape("matrix", s, (dc, dd));
                Shape::Hom { cod: cod.clone() }
            }
            DeclKind::LinearMap { dom, cod, matrix, kraus } => {
                let (a, b) = (self.algebra(dom), self.algebra(cod));
                let ((dd, rd, _), (dc, rc, _)) = (a?, b?);
                match (matrix, kraus) {
                    (Some(m), None) => {
                        let s = self.matrix(m);
                        self.expect_shape("matrix", s, (dc, dd));
                    }
                    (None, Some(ks)) => {
                        for k in ks {
                            let s = self.matrix(k);
                            self.expect_shape("Kraus operator", s, (rd, rc));
                        }
                    }
                    _ => self.report("a linear map needs exactly one of matrix or kraus"),
                }
                Shape::Linear { cod: cod.clone() }
            }
            DeclKind::ProbSpace { points, weights } => {
                let n = self.scalars(weights);
                self.expect_len("weights", n, points.len());
                Shape::Prob
            }
            DeclKind::Kernel { dom, cod, matrix } => {
                let s = self.matrix(matrix);
                self.expect_shape("matrix", s, (dom.len(), cod.len()));
                Shape::Kernel
            }
            DeclKind::Action {
                group,
                state,
                permutations,
                unitaries,
            } => {
                let order = match self.lookup(group, "group") {
                    Some(Shape::Group { order }) => Some(order),
                    _ => None,
                };
                let alg = self.state_alg(state);
                let info = alg.and_then(|a| match self.names.get(a.as_str()) {
                    Some(Shape::Algebra { dim, rep, .. }) => Some((*dim, *rep)),
                    _ => None,
                });
                match (permutations, unitaries) {
                    (Some(ps), None) => {
                        if let Some(o) = order {
                            self.expect_len("permutations", Some(ps.len()), o);
                        }
                        if let Some((dim, _)) = info {
                            for p in ps {
                                self.expect_len("permutation", Some(p.len()), dim);
                            }
                        }
                    }
                    (None, Some(us)) => {
                        if let Some(o) = order {
                            self.expect_len("unitaries", Some(us.len()), o);
                        }
                        for u in us {
                            let s = self.matrix(u);
                            if let Some((_, rep)) = info {
                                self.expect_shape("unitary", s, (rep, rep));
                            }
                        }
                    }
                    _ => self.report("an action needs exactly one of permutations or unitaries"),
                }
                Shape::Action
            }
            DeclKind::Matrix { rows } => {
                let (r, c) = self.matrix(rows)?;
                Shape::Matrix { rows: r, cols: c }
            }
            DeclKind::Vector { entries } => Shape::Vector {
                len: self.scalars(entries)?,
            },
        })
    }

    fn same_algebra(&mut self, a: Option<String>, b: Option<String>) {
        if let (Some(a), Some(b)) = (a, b) {
            if a != b {
                self.report(format!("operands live on different algebras ({a:?} and {b:?})"));
            }
        }
    }

    fn vector_len(&mut self, name: &str) -> Option<usize> {
        match self.lookup(name, "vector")? {
            Shape::Vector { len } => Some(len),
            _ => None,
        }
    }

    fn matrix_shape(&mut self, name: &str) -> Option<(usize, usize)> {
        match self.lookup(name, "matrix")? {
            Shape::Matrix { rows, cols } => Some((rows, cols)),
            _ => None,
        }
    }

    fn command(&mut self, c: &Command) {
        match &c.op {
            Op::Gns { state } | Op::Positivity { state } | Op::Conjugate { state } | Op::Normalize { state } => {
                self.state_alg(state);
            }
            Op::GnsMap { hom, state } | Op::Dinaturality { hom, state, .. } => {
                let cod = match self.lookup(hom, "homomorphism") {
                    Some(Shape::Hom { cod, .. }) => Some(cod),
                    _ => None,
                };
                let alg = self.state_alg(state);
                self.same_algebra(cod, alg);
                if let Op::Dinaturality { vector, .. } = &c.op {
                    self.vector_len(vector);
                }
            }
            Op::Monoidal { left, right } => {
                self.state_alg(left);
                self.state_alg(right);
            }
            Op::Cp { map } => {
                self.lookup(map, "linear map");
            }
            Op::Stinespring { map, state } | Op::Process { map, state } => {
                let cod = match self.lookup(map, "linear map") {
                    Some(Shape::Linear { cod, .. }) => Some(cod),
                    _ => None,
                };
                let alg = self.state_alg(state);
                self.same_algebra(cod, alg);
            }
            Op::Conditioning { projection: element, state }
            | Op::Born { element, state }
            | Op::DefiniteValue { element, state }
            | Op::EeLink { element, state, .. } => {
                let a = self.element_alg(element);
                let b = self.state_alg(state);
                self.same_algebra(a, b);
                if let Op::EeLink { lambda, .. } = &c.op {
                    self.scalar(lambda);
                }
            }
            Op::Collapse { isometry, vector } => {
                let s = self.matrix_shape(isometry);
                let n = self.vector_len(vector);
                if let (Some((_, cols)), Some(n)) = (s, n) {
                    self.expect_len("vector", Some(n), cols);
                }
            }
            Op::Scattering { s, i_alpha, p_beta, vector } => {
                let s = self.matrix_shape(s);
                let ia = self.matrix_shape(i_alpha);
                let pb = self.matrix_shape(p_beta);
                let n = self.vector_len(vector);
                if let (Some((f, _)), Some((ri, ci)), Some((_, cp))) = (s, ia, pb) {
                    if ri != f || cp != f {
                        self.report("i_alpha and p_beta must act on the space of S");
                    }
                    if let Some(n) = n {
                        self.expect_len("vector", Some(n), ci);
                    }
                }
            }
            Op::L2 { space } => {
                self.lookup(space, "probability space");
            }
            Op::Gelfand { kernel } => {
                self.lookup(kernel, "kernel");
            }
            Op::Compatibility { kernel, space } => {
                self.lookup(kernel, "kernel");
                self.lookup(space, "probability space");
            }
            Op::EquivariantGns { action } => {
                self.lookup(action, "action");
            }
        }
    }
}

/// Checks references, shapes and scalar encodings. `lenient` accepts
/// scalars written for the other backend (used when the backend is
/// overridden on the command line).
pub fn validate(sc: &Scenario, backend: BackendChoice, lenient: bool) -> Vec<Diagnostic> {
    let mut ck = Checker {
        backend,
        lenient,
        names: BTreeMap::new(),
        out: Vec::new(),
        location: String::new(),
    };
    for (k, d) in sc.declarations.iter().enumerate() {
        ck.location = format!("declarations[{k}] ({})", d.name);
        if ck.names.contains_key(d.name.as_str()) {
            ck.report(format!("{:?} is declared twice", d.name));
            continue;
        }
        if let Some(shape) = ck.declaration(d) {
            ck.names.insert(&d.name, shape);
        }
    }
    for (k, c) in sc.commands.iter().enumerate() {
        ck.location = format!("commands[{k}] ({})", c.name.as_deref().unwrap_or(c.op.name()));
        ck.command(c);
    }
    ck.out
}
