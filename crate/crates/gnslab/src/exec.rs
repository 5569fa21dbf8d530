//! Executes a validated scenario over one scalar backend.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use gnslab_core::algebra::{
    complex_numbers, function_algebra, group_algebra, matrix_algebra, tensor_algebra, Element, GroupTable,
    StarAlgebra, StarHomomorphism, StarLinearMap,
};
use gnslab_core::gns::{
    dinaturality_holds, gns, gns_map, monoidal_iso, normalize, tensor_state, verify_conjugate_gns, PhysMorphism,
    State,
};
use gnslab_core::markov::{
    collapse_composite, conditioning, gns_m, gns_mc, is_completely_positive, kraus_map, scattering, stinespring,
    CpMap, CpVerdict, MarkovMorphism,
};
use gnslab_core::prob::{
    born_distribution, cp_to_kernel, ee_link_check, has_definite_value, kernel_to_cp, l2_compare,
    probabilistic_compatibility, FiniteProbSpace, MarkovKernel,
};
use gnslab_core::symmetry::{equivariant_gns, GroupAction};
use gnslab_core::{linalg, Complex64, Error, Matrix, PsdCertificate, Scalar, ToleranceConfig};
use serde_json::{json, Value};

use crate::codec::{decode_matrix, decode_vec, encode_matrix, encode_vec, Codec, CodecError};
use crate::report::{error_json, Record, RunReport, Status};
use crate::scenario::{Command, DeclKind, Declaration, Op, Scenario};

/// Residual bound for float identities that hold exactly in theory.
const FLOAT_IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
enum Entry<S> {
    Algebra(Arc<StarAlgebra<S>>),
    Group(GroupTable),
    Element(Element<S>),
    State(State<S>),
    Hom(StarHomomorphism<S>),
    Linear(StarLinearMap<S>),
    Prob(FiniteProbSpace<S>),
    Kernel(MarkovKernel<S>),
    Action(GroupAction<S>),
    Matrix(Matrix<S>),
    Vector(Vec<S>),
}

/// Why a command could not produce a payload.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Codec(CodecError),
    Upstream(String, Value),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}
impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        Failure::Codec(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        match self {
            Failure::Domain(e) => error_json(e),
            Failure::Codec(e) => json!({"kind": "Codec", "message": e.to_string()}),
            Failure::Upstream(name, e) => {
                let mut v = e.clone();
                v["message"] = json!(format!("declaration {name:?} failed: {}", e["message"].as_str().unwrap_or("")));
                v["declaration"] = json!(name);
                v
            }
            Failure::Internal(m) => json!({"kind": "Internal", "message": m}),
        }
    }
}

type Outcome = Result<(Value, Vec<String>), Failure>;

struct Env<S> {
    entries: BTreeMap<String, Result<Entry<S>, Value>>,
    lenient: bool,
    tol: ToleranceConfig,
    normalize: bool,
}

fn is_exact<S: Scalar>() -> bool {
    S::BACKEND == gnslab_core::Backend::Exact
}

/// Checks an identity that is exact over the rationals, up to
/// [`FLOAT_IDENTITY_TOL`] in floating point.
fn residual_ok<S: Scalar>(r: f64) -> bool {
    if is_exact::<S>() {
        r == 0.0
    } else {
        r <= FLOAT_IDENTITY_TOL
    }
}

macro_rules! getter {
    ($fn:ident, $variant:ident, $ty:ty, $what:literal) => {
        fn $fn(&self, name: &str) -> Result<&$ty, Failure> {
            match self.get(name)? {
                Entry::$variant(x) => Ok(x),
                _ => Err(Failure::Internal(format!("{name:?} is not a {}", $what))),
            }
        }
    };
}

impl<S: Codec> Env<S> {
    fn get(&self, name: &str) -> Result<&Entry<S>, Failure> {
        match self.entries.get(name) {
            Some(Ok(e)) => Ok(e),
            Some(Err(v)) => Err(Failure::Upstream(name.to_string(), v.clone())),
            None => Err(Failure::Internal(format!("unresolved reference {name:?}"))),
        }
    }

    getter!(algebra, Algebra, Arc<StarAlgebra<S>>, "algebra");
    getter!(group, Group, GroupTable, "group");
    getter!(element, Element, Element<S>, "element");
    getter!(state, State, State<S>, "state");
    getter!(hom, Hom, StarHomomorphism<S>, "homomorphism");
    getter!(linear, Linear, StarLinearMap<S>, "linear map");
    getter!(prob, Prob, FiniteProbSpace<S>, "probability space");
    getter!(kernel, Kernel, MarkovKernel<S>, "kernel");
    getter!(action, Action, GroupAction<S>, "action");
    getter!(matrix, Matrix, Matrix<S>, "matrix");
    getter!(vector, Vector, Vec<S>, "vector");

    fn vec(&self, v: &[Value]) -> Result<Vec<S>, Failure> {
        Ok(decode_vec(v, self.lenient)?)
    }
    fn mat(&self, m: &[Vec<Value>]) -> Result<Matrix<S>, Failure> {
        Ok(decode_matrix(m, self.lenient)?)
    }

    fn declare(&self, d: &Declaration) -> Result<Entry<S>, Failure> {
        let tol = &self.tol;
        Ok(match &d.kind {
            DeclKind::MatrixAlgebra { n } => Entry::Algebra(Arc::new(matrix_algebra(*n))),
            DeclKind::FunctionAlgebra { points } => Entry::Algebra(Arc::new(function_algebra(points)?)),
            DeclKind::ComplexNumbers => Entry::Algebra(Arc::new(complex_numbers())),
            DeclKind::CyclicGroup { n } => Entry::Group(GroupTable::cyclic(*n)),
            DeclKind::Symmetric3 => Entry::Group(GroupTable::symmetric3()),
            DeclKind::GroupTable { table } => Entry::Group(GroupTable::new(table.clone())?),
            DeclKind::GroupAlgebra { group } => Entry::Algebra(Arc::new(group_algebra(self.group(group)?))),
            DeclKind::TensorAlgebra { left, right } => {
                Entry::Algebra(Arc::new(tensor_algebra(self.algebra(left)?, self.algebra(right)?)))
            }
            DeclKind::Element { algebra, coords, matrix } => {
                let alg = self.algebra(algebra)?;
                match (coords, matrix) {
                    (Some(c), _) => Entry::Element(Element::new(alg.clone(), self.vec(c)?)?),
                    (None, Some(m)) => Entry::Element(Element::from_rep_matrix(alg, &self.mat(m)?, tol)?),
                    (None, None) => return Err(Failure::Internal("element without data".into())),
                }
            }
            DeclKind::State {
                algebra,
                functional,
                vector,
                density,
            } => {
                let alg = self.algebra(algebra)?;
                Entry::State(match (functional, vector, density) {
                    (Some(f), _, _) => State::new(alg.clone(), self.vec(f)?, tol)?,
                    (None, Some(v), _) => State::vectorial(alg, &self.vec(v)?)?,
                    (None, None, Some(m)) => State::from_density(alg, &self.mat(m)?, tol)?,
                    _ => return Err(Failure::Internal("state without data".into())),
                })
            }
            DeclKind::Homomorphism { dom, cod, matrix } => Entry::Hom(StarHomomorphism::new(
                self.algebra(dom)?.clone(),
                self.algebra(cod)?.clone(),
                self.mat(matrix)?,
                tol,
            )?),
            DeclKind::LinearMap { dom, cod, matrix, kraus } => {
                let (a, b) = (self.algebra(dom)?, self.algebra(cod)?);
                Entry::Linear(match (matrix, kraus) {
                    (Some(m), _) => StarLinearMap::new(a.clone(), b.clone(), self.mat(m)?, tol)?,
                    (None, Some(ks)) => {
                        let ks = ks.iter().map(|k| self.mat(k)).collect::<Result<Vec<_>, _>>()?;
                        kraus_map(a, b, &ks, tol)?
                    }
                    _ => return Err(Failure::Internal("linear map without data".into())),
                })
            }
            DeclKind::ProbSpace { points, weights } => {
                Entry::Prob(FiniteProbSpace::new(points.clone(), self.vec(weights)?)?)
            }
            DeclKind::Kernel { dom, cod, matrix } => {
                Entry::Kernel(MarkovKernel::new(dom.clone(), cod.clone(), self.mat(matrix)?, tol)?)
            }
            DeclKind::Action {
                group,
                state,
                permutations,
                unitaries,
            } => {
                let (g, phi) = (self.group(group)?.clone(), self.state(state)?.clone());
                Entry::Action(match (permutations, unitaries) {
                    (Some(ps), _) => GroupAction::by_permutations(g, phi, ps, tol)?,
                    (None, Some(us)) => {
                        let us = us.iter().map(|u| self.mat(u)).collect::<Result<Vec<_>, _>>()?;
                        GroupAction::by_unitaries(g, phi, &us, tol)?
                    }
                    _ => return Err(Failure::Internal("action without data".into())),
                })
            }
            DeclKind::Matrix { rows } => Entry::Matrix(self.mat(rows)?),
            DeclKind::Vector { entries } => Entry::Vector(self.vec(entries)?),
        })
    }

    fn gram_isometry(e: &Matrix<S>, g_dom: &Matrix<S>, g_cod: &Matrix<S>, t: f64) -> bool {
        e.transpose().mul(g_cod).mul(&e.conj()).approx_eq(g_dom, t)
    }

    fn execute(&self, op: &Op) -> Outcome {
        let tol = &self.tol;
        let t = gnslab_core::scalar::cmp_tol::<S>(tol);
        let mut failures = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                failures.push(format!("check failed: {what}"));
            }
        };
        let payload = match op {
            Op::Gns { state } => {
                let g = gns(self.state(state)?, tol)?;
                json!({
                    "dim": g.dim(),
                    "pivots": g.pivots(),
                    "radical_dim": g.radical_basis().len(),
                    "gram": encode_matrix(g.gram()),
                    "omega": encode_vec(g.omega()),
                    "positive": g.is_positive(),
                })
            }
            Op::Positivity { state } => {
                let g = gns(self.state(state)?, tol)?;
                match g.positivity() {
                    PsdCertificate::Psd => json!({"positive": true}),
                    PsdCertificate::Indefinite { witness, value } => {
                        json!({"positive": false, "witness": encode_vec(witness), "value": value.encode()})
                    }
                }
            }
            Op::GnsMap { hom, state } => {
                let m = PhysMorphism::pull_back(self.hom(hom)?, self.state(state)?, tol)?;
                let mut p = json!({
                    "admissible": m.is_admissible(),
                    "dom_dim": m.dom_gns().dim(),
                    "cod_dim": m.cod_gns().dim(),
                    "pulled_back": encode_vec(m.cod_state().functional()),
                });
                match gns_map(&m) {
                    Ok(e) => {
                        let iso = Self::gram_isometry(&e, m.cod_gns().gram(), m.dom_gns().gram(), t);
                        check(iso, "GNS(f) is isometric");
                        p["matrix"] = encode_matrix(&e);
                        p["isometric"] = json!(iso);
                    }
                    Err(_) => p["witness"] = encode_vec(m.admissibility_witness().unwrap_or(&[])),
                }
                p
            }
            Op::Dinaturality { hom, state, vector } => {
                let m = PhysMorphism::pull_back(self.hom(hom)?, self.state(state)?, tol)?;
                let holds = dinaturality_holds(&m, self.vector(vector)?, tol)?;
                check(holds, "dinaturality square commutes");
                json!({"holds": holds})
            }
            Op::Monoidal { left, right } => {
                let (phi, psi) = (self.state(left)?, self.state(right)?);
                let (gp, gq, gt) = (gns(phi, tol)?, gns(psi, tol)?, gns(&tensor_state(phi, psi), tol)?);
                let iso = monoidal_iso(&gp, &gq, &gt, tol)?;
                let unitary = iso.is_square()
                    && Self::gram_isometry(&iso, &gp.gram().kron(gq.gram()), gt.gram(), t)
                    && linalg::rank(&iso, tol) == iso.rows();
                check(unitary, "the monoidal comparison is unitary");
                json!({"dim": gt.dim(), "iso": encode_matrix(&iso), "unitary": unitary})
            }
            Op::Conjugate { state } => {
                let r = verify_conjugate_gns(self.state(state)?, tol)?;
                check(r.all_pass(), "GNS of the conjugate state is the conjugate GNS");
                json!({"pivots_match": r.pivots_match, "grams_match": r.grams_match, "represents": r.represents})
            }
            Op::Normalize { state } => {
                let n = normalize(self.state(state)?, tol)?;
                json!({"functional": encode_vec(n.functional()), "normalization": n.normalization().encode()})
            }
            Op::Cp { map } => match is_completely_positive(self.linear(map)?, tol)? {
                CpVerdict::Cp(cp) => json!({
                    "cp": true,
                    "choi": encode_matrix(cp.choi()),
                    "kraus_rank": cp.kraus_rank(tol),
                    "unital": cp.is_unital(),
                }),
                CpVerdict::NotCp { choi, witness, value } => json!({
                    "cp": false,
                    "choi": encode_matrix(&choi),
                    "witness": encode_vec(&witness),
                    "value": value.encode(),
                }),
            },
            Op::Stinespring { map, state } => {
                let cp = CpMap::new(self.linear(map)?, tol)?;
                let d = stinespring(&cp, self.state(state)?, tol)?;
                let r = d.residual();
                check(residual_ok::<S>(r), "V* pi(a) V reproduces the map");
                json!({"h_dim": d.h_dim(), "residual": r, "v": encode_matrix(&d.v)})
            }
            Op::Process { map, state } => {
                let m = MarkovMorphism::pull_back(self.linear(map)?, self.state(state)?, tol)?;
                let mut p = json!({
                    "admissible": m.is_admissible(),
                    "dom_dim": m.dom_gns().dim(),
                    "cod_dim": m.cod_gns().dim(),
                    "pulled_back": encode_vec(m.cod_state().functional()),
                });
                if let Ok(f) = gns_m(&m) {
                    p["gns_m"] = encode_matrix(&f);
                }
                if let Ok(c) = gns_mc(&m, tol) {
                    p["gns_mc"] = encode_matrix(&c);
                }
                p
            }
            Op::Conditioning { projection, state } => {
                let (_, r) = conditioning(self.element(projection)?, self.state(state)?, tol)?;
                check(r.all_pass(), "collapse identities");
                json!({
                    "probability": r.probability.encode(),
                    "p_omega": encode_vec(&r.p_omega),
                    "probability_matches": r.probability_matches,
                    "represented_by_p_omega": r.represented_by_p_omega,
                    "gns_m_factors": r.gns_m_factors,
                    "gns_mc_cyclic": r.gns_mc_cyclic,
                    "gns_mc_projects": r.gns_mc_projects,
                    "post_collapse": r.post_collapse.as_ref().map(|s| encode_vec(s.functional())),
                })
            }
            Op::Collapse { isometry, vector } => {
                let c = collapse_composite(self.matrix(isometry)?, self.vector(vector)?, tol)?;
                check(residual_ok::<S>(c.residual), "the composite reproduces P");
                json!({"operator": encode_matrix(&c.operator), "projection": encode_matrix(&c.projection), "residual": c.residual})
            }
            Op::Scattering { s, i_alpha, p_beta, vector } => {
                let (_, r) = scattering(
                    self.matrix(s)?,
                    self.matrix(i_alpha)?,
                    self.matrix(p_beta)?,
                    self.vector(vector)?,
                    tol,
                )?;
                check(residual_ok::<S>(r.residual), "GNS_Mc equals p_beta S i_alpha");
                check(r.probability_bounded, "0 <= psi(1) <= phi(1)");
                json!({
                    "amplitude": encode_matrix(&r.amplitude),
                    "probability": r.probability.encode(),
                    "initial": r.initial.encode(),
                    "residual": r.residual,
                    "bounded": r.probability_bounded,
                })
            }
            Op::Born { element, state } => {
                let mut d = born_distribution(self.element(element)?, self.state(state)?, tol)?;
                if self.normalize {
                    d = d.normalized()?;
                }
                let mut entries = d.entries.clone();
                entries.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
                let entries: Vec<Value> = entries
                    .iter()
                    .map(|(l, w)| json!({"eigenvalue": clean(*l).encode(), "weight": w}))
                    .collect();
                json!({"entries": entries, "total": d.total, "normalized": self.normalize})
            }
            Op::EeLink { element, state, lambda } => {
                let lambda = S::decode(lambda, self.lenient)?;
                let l = ee_link_check(self.element(element)?, self.state(state)?, &lambda, tol)?;
                check(l.agree(), "the three readings agree");
                json!({
                    "eigenvector": l.eigenvector,
                    "almost_everywhere": l.almost_everywhere,
                    "probability_one": l.probability_one,
                    "agree": l.agree(),
                })
            }
            Op::DefiniteValue { element, state } => {
                match has_definite_value(self.element(element)?, self.state(state)?, tol)? {
                    None => json!({"definite": false}),
                    Some(dv) => {
                        if let Some(e) = dv.eigenvector {
                            check(e, "Omega is an eigenvector for the value");
                        }
                        json!({
                            "definite": true,
                            "value": dv.value.encode(),
                            "character": encode_vec(&dv.character),
                            "eigenvector": dv.eigenvector,
                        })
                    }
                }
            }
            Op::L2 { space } => {
                let r = l2_compare(self.prob(space)?, tol)?;
                check(r.passes(), "GNS dimension equals the support size");
                json!({"support_size": r.support_size, "gns_dim": r.gns_dim, "isomorphism": encode_matrix(&r.isomorphism)})
            }
            Op::Gelfand { kernel } => {
                let k = self.kernel(kernel)?;
                let cp = kernel_to_cp(k, tol)?;
                let back = cp_to_kernel(cp.underlying(), tol)?;
                let ok = back.matrix().approx_eq(k.matrix(), t);
                check(ok, "kernel -> map -> kernel is the identity");
                json!({"map": encode_matrix(cp.underlying().matrix()), "choi": encode_matrix(cp.choi()), "roundtrip": ok})
            }
            Op::Compatibility { kernel, space } => {
                let r = probabilistic_compatibility(self.kernel(kernel)?, self.prob(space)?, tol)?;
                check(r.matches, "GNS_M agrees with row averaging");
                json!({"gns_m": encode_matrix(&r.gns_m), "row_averaging": encode_matrix(&r.row_averaging), "matches": r.matches})
            }
            Op::EquivariantGns { action } => {
                let rep = equivariant_gns(self.action(action)?, tol)?;
                check(rep.checks.all_pass(), "unitary representation laws");
                let chars: Vec<Value> = (0..rep.matrices.len()).map(|g| rep.character(g).encode()).collect();
                json!({
                    "dim": rep.dim,
                    "characters": chars,
                    "matrices": rep.matrices.iter().map(encode_matrix).collect::<Vec<_>>(),
                    "checks": {
                        "unitary": rep.checks.unitary,
                        "multiplicative": rep.checks.multiplicative,
                        "unital": rep.checks.unital,
                        "fixes_omega": rep.checks.fixes_omega,
                        "covariant": rep.checks.covariant,
                    },
                    "residual": rep.residual,
                })
            }
        };
        Ok((payload, failures))
    }
}

/// Drops floating-point dust below `1e-12` so reports stay stable.
fn clean(z: Complex64) -> Complex64 {
    let f = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

fn numbers_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * 1.0f64.max(a.abs()).max(b.abs())
}

fn as_complex(v: &Value) -> Option<Complex64> {
    match v {
        Value::String(s) => crate::codec::parse_exact(s).map(|x| x.to_c64()),
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)),
        Value::Array(p) if p.len() == 2 && p.iter().all(Value::is_number) => {
            Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?))
        }
        _ => None,
    }
}

/// Structural comparison with numeric tolerance; objects match on the keys
/// of `want`, and scalars in either encoding compare by value.
pub fn json_matches(got: &Value, want: &Value) -> bool {
    if let (Some(a), Some(b)) = (as_complex(got), as_complex(want)) {
        if !matches!((got, want), (Value::Array(_), Value::Array(_))) || got.as_array().map(Vec::len) == Some(2) {
            return numbers_close(a.re, b.re) && numbers_close(a.im, b.im);
        }
    }
    match (got, want) {
        (Value::Array(a), Value::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| json_matches(x, y)),
        (Value::Object(a), Value::Object(b)) => b.iter().all(|(k, w)| a.get(k).is_some_and(|g| json_matches(g, w))),
        _ => got == want,
    }
}

fn run_command<S: Codec>(env: &Env<S>, index: usize, c: &Command) -> Record {
    let start = Instant::now();
    let outcome = env.execute(&c.op);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let expected_error = c.expect.as_ref().and_then(|e| e.get("error")).and_then(Value::as_str);
    let (status, payload, error, mut failures) = match outcome {
        Ok((payload, failures)) => {
            let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
            (status, payload, None, failures)
        }
        Err(f) => (Status::Error, json!({}), Some(f.to_json()), Vec::new()),
    };
    let mut status = status;
    match (expected_error, &error) {
        (Some(kind), Some(e)) if e["kind"] == kind => status = Status::Pass,
        (Some(kind), _) => {
            failures.push(format!("expected error {kind}"));
            status = Status::Fail;
        }
        (None, _) => {
            for (k, want) in c.expect.iter().flatten() {
                if error.is_none() && !payload.get(k).is_some_and(|g| json_matches(g, want)) {
                    failures.push(format!("expected {k} = {want}, got {}", payload.get(k).unwrap_or(&Value::Null)));
                    status = Status::Fail;
                }
            }
        }
    }
    Record {
        index,
        name: c.name.clone(),
        op: c.op.name(),
        status,
        payload,
        error,
        failures,
        wall_ms,
    }
}

/// Builds the declarations in order, then runs every command. A failed
/// declaration is recorded and surfaces in each command that uses it.
pub fn run_scenario<S: Codec>(sc: &Scenario, tol: &ToleranceConfig, lenient: bool, normalize: bool) -> RunReport {
    let mut env: Env<S> = Env {
        entries: BTreeMap::new(),
        lenient,
        tol: tol.clone(),
        normalize,
    };
    for d in &sc.declarations {
        let entry = env.declare(d).map_err(|f| f.to_json());
        env.entries.insert(d.name.clone(), entry);
    }
    let records = sc.commands.iter().enumerate().map(|(k, c)| run_command(&env, k, c)).collect();
    RunReport::new(S::NAME, tol, records)
}
