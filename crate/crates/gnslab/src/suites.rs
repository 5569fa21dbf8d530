//! Randomized property suites. Each suite draws its instances from a seeded
//! stream of its own and checks the library against an oracle computed
//! here from first principles, usually the defining formula.

use std::fmt::Display;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gnslab_core::algebra::{matrix_algebra, tensor_linear_map, Element};
use gnslab_core::gns::{
    check_same_normalization, dinaturality_holds, gns, gns_map, make_i, monoidal_iso, tensor_phys, tensor_state,
    GnsSpace, PhysMorphism, State,
};
use gnslab_core::markov::{collapse_composite, conditioning, kraus_map, scattering, stinespring, CpMap};
use gnslab_core::matrix::form;
use gnslab_core::prob::{
    born_distribution, cp_to_kernel, ee_link_check, kernel_tensor, kernel_to_cp, kleisli_compose,
    probabilistic_compatibility, FiniteProbSpace, MarkovKernel,
};
use gnslab_core::symmetry::{equivariant_gns, GroupAction};
use gnslab_core::algebra::GroupTable;
use gnslab_core::{linalg, Complex64, Error, Exact, Matrix, Scalar, ToleranceConfig};
use serde::Serialize;

use crate::random::{function_alg, points, Gen};

/// Suite names in run order.
pub const SUITES: [&str; 12] = [
    "functoriality",
    "monoidality",
    "stinespring",
    "born",
    "ee-link",
    "collapse",
    "gelfand",
    "compatibility",
    "normalization",
    "symmetry",
    "dinaturality",
    "scattering",
];

/// Float identities are checked to this residual.
const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub instances: usize,
    pub passed: usize,
    /// Fewest instances the suite must run.
    pub required: usize,
    pub failures: Vec<String>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
    #[serde(serialize_with = "as_millis")]
    pub budget: Duration,
}

fn as_millis<Z: serde::Serializer>(d: &Duration, s: Z) -> Result<Z::Ok, Z::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.instances && self.instances >= self.required
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }
}

type Check = Result<(), String>;

fn fail<E: Display>(e: E) -> String {
    e.to_string()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Tally {
    outcome: SuiteOutcome,
    start: Instant,
}

impl Tally {
    fn new(name: &'static str, required: usize, budget_secs: u64) -> Self {
        Tally {
            outcome: SuiteOutcome {
                name,
                instances: 0,
                passed: 0,
                required,
                failures: Vec::new(),
                elapsed: Duration::ZERO,
                budget: Duration::from_secs(budget_secs),
            },
            start: Instant::now(),
        }
    }

    fn record(&mut self, label: impl Display, r: Check) {
        self.outcome.instances += 1;
        match r {
            Ok(()) => self.outcome.passed += 1,
            Err(m) => self.outcome.failures.push(format!("{label}: {m}")),
        }
    }

    fn finish(mut self) -> SuiteOutcome {
        self.outcome.elapsed = self.start.elapsed();
        self.outcome
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteOutcome> {
    let tol = ToleranceConfig::default();
    let mut g = Gen::fork(seed, name);
    let out = match name {
        "functoriality" => functoriality(&mut g, &tol),
        "monoidality" => monoidality(&mut g, &tol),
        "stinespring" => stinespring_suite(&mut g, &tol),
        "born" => born(&mut g, &tol),
        "ee-link" => ee_link(&mut g, &tol),
        "collapse" => collapse(&mut g, &tol),
        "gelfand" => gelfand(&mut g, &tol),
        "compatibility" => compatibility(&mut g, &tol),
        "normalization" => normalization(&mut g, &tol),
        "symmetry" => symmetry(&mut g, &tol),
        "dinaturality" => dinaturality(&mut g, &tol),
        "scattering" => scattering_suite(&mut g, &tol),
        _ => return None,
    };
    Some(out)
}

pub fn run_all(seed: u64) -> Vec<SuiteOutcome> {
    SUITES.iter().filter_map(|n| run_suite(n, seed)).collect()
}

/// `E^T G_target conj(E) = G_source`.
fn isometric<S: Scalar>(e: &Matrix<S>, source: &Matrix<S>, target: &Matrix<S>, t: f64) -> bool {
    e.transpose().mul(target).mul(&e.conj()).approx_eq(source, t)
}

/// `GNS(f)` must send the class of `x` to the class of `f(x)`.
fn represents_hom<S: Scalar>(m: &PhysMorphism<S>, e: &Matrix<S>, t: f64) -> bool {
    let (dom, cod) = (m.dom_gns(), m.cod_gns());
    (0..m.hom().dom().dim()).all(|k| {
        let x = m.hom().dom().basis_vector(k);
        let lhs = e.mul_vec(&cod.class_of(&x));
        let rhs = dom.class_of(&m.hom().apply(&x));
        lhs.iter().zip(&rhs).all(|(a, b)| a.near(b, t))
    })
}

fn functoriality(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("functoriality", 100, 10);
    for k in 0..100 {
        let c = g.hom_chain::<Exact>(tol);
        let r = (|| -> Check {
            let m1 = PhysMorphism::pull_back(&c.f, &c.phi, tol).map_err(fail)?;
            let m2 = PhysMorphism::pull_back_from(&c.g, m1.cod_gns().clone(), tol).map_err(fail)?;
            let m12 = m1.then(&m2, tol).map_err(fail)?;
            let (e1, e2, e12) = (
                gns_map(&m1).map_err(fail)?,
                gns_map(&m2).map_err(fail)?,
                gns_map(&m12).map_err(fail)?,
            );
            ensure!(e12 == e1.mul(&e2), "GNS(f o g) != GNS(f) GNS(g)");
            ensure!(represents_hom(&m12, &e12, 0.0), "GNS(f o g) does not send [x] to [f(g(x))]");
            for (m, e) in [(&m1, &e1), (&m2, &e2), (&m12, &e12)] {
                ensure!(
                    isometric(e, m.cod_gns().gram(), m.dom_gns().gram(), 0.0),
                    "GNS map is not isometric"
                );
            }
            Ok(())
        })();
        tally.record(format_args!("#{k} ({})", c.template), r);
    }
    tally.finish()
}

fn monoidality(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("monoidality", 50, 5);
    for k in 0..50 {
        let (c1, c2) = loop {
            let (a, b) = (g.hom_chain::<Exact>(tol), g.hom_chain::<Exact>(tol));
            if a.phi.algebra().dim() * b.phi.algebra().dim() <= 24 {
                break (a, b);
            }
        };
        let r = (|| -> Check {
            let m1 = PhysMorphism::pull_back(&c1.f, &c1.phi, tol).map_err(fail)?;
            let m2 = PhysMorphism::pull_back(&c2.f, &c2.phi, tol).map_err(fail)?;
            let mt = tensor_phys(&m1, &m2, tol).map_err(fail)?;
            let iso_dom = monoidal_iso(m1.dom_gns(), m2.dom_gns(), mt.dom_gns(), tol).map_err(fail)?;
            let iso_cod = monoidal_iso(m1.cod_gns(), m2.cod_gns(), mt.cod_gns(), tol).map_err(fail)?;
            for (iso, a, b, t) in [
                (&iso_dom, m1.dom_gns(), m2.dom_gns(), mt.dom_gns()),
                (&iso_cod, m1.cod_gns(), m2.cod_gns(), mt.cod_gns()),
            ] {
                ensure!(iso.is_square(), "comparison is not square");
                ensure!(linalg::rank(iso, tol) == iso.rows(), "comparison is singular");
                ensure!(isometric(iso, &a.gram().kron(b.gram()), t.gram(), 0.0), "comparison is not isometric");
                let omega = gnslab_core::matrix::vec_kron(a.omega(), b.omega());
                ensure!(iso.mul_vec(&omega) == t.omega(), "comparison does not send Omega (x) Omega to Omega");
            }
            let lhs = iso_dom.mul(&gns_map(&m1).map_err(fail)?.kron(&gns_map(&m2).map_err(fail)?));
            let rhs = gns_map(&mt).map_err(fail)?.mul(&iso_cod);
            ensure!(lhs == rhs, "comparison is not natural");
            Ok(())
        })();
        tally.record(format_args!("#{k} ({} x {})", c1.template, c2.template), r);
    }
    tally.finish()
}

/// `sum_j K_j* E_i K_j` flattened, the defining formula of a Kraus map.
fn kraus_image<S: Scalar>(kraus: &[Matrix<S>], na: usize, nb: usize, i: usize) -> Vec<S> {
    let mut e = Matrix::<S>::zeros(na, na);
    e[(i / na, i % na)] = S::one();
    kraus
        .iter()
        .fold(Matrix::zeros(nb, nb), |acc, k| acc.add(&k.adjoint().mul(&e).mul(k)))
        .as_slice()
        .to_vec()
}

fn stinespring_instance<S: Scalar>(g: &mut Gen, tol: &ToleranceConfig, t: f64) -> Check {
    let (na, nb, rank) = (g.range(2, 3), g.range(2, 3), g.range(1, 3));
    let (ma, mb) = (Arc::new(matrix_algebra::<S>(na)), Arc::new(matrix_algebra::<S>(nb)));
    let kraus: Vec<Matrix<S>> = (0..rank).map(|_| g.matrix(na, nb)).collect();
    let map = kraus_map(&ma, &mb, &kraus, tol).map_err(fail)?;
    for i in 0..na * na {
        let want = kraus_image(&kraus, na, nb, i);
        ensure!(
            map.apply(&ma.basis_vector(i)).iter().zip(&want).all(|(a, b)| a.near(b, t)),
            "map disagrees with its Kraus formula on E{i}"
        );
    }
    let cp = CpMap::new(&map, tol).map_err(fail)?;
    ensure!(cp.kraus_rank(tol) <= rank, "Choi rank exceeds the Kraus count");
    let phi = State::vectorial(&mb, &g.nonzero_vector::<S>(nb)).map_err(fail)?;
    let d = stinespring(&cp, &phi, tol).map_err(fail)?;
    let r = d.residual();
    ensure!(r <= t, "V* pi(a) V residual {r:e}");
    Ok(())
}

fn stinespring_suite(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("stinespring", 50, 20);
    for k in 0..50 {
        tally.record(format_args!("exact #{k}"), stinespring_instance::<Exact>(g, tol, 0.0));
    }
    for k in 0..10 {
        tally.record(format_args!("float #{k}"), stinespring_instance::<Complex64>(g, tol, FLOAT_TOL));
    }
    tally.finish()
}

fn element_of<S: Scalar>(alg: &Arc<gnslab_core::algebra::StarAlgebra<S>>, m: &Matrix<S>) -> Element<S> {
    Element::new(alg.clone(), m.as_slice().to_vec()).expect("matrix-unit coordinates")
}

/// `phi(P_lambda)` for each distinct eigenvalue, from the known
/// diagonalization.
fn spectral_weights(obs: &crate::random::NormalObservable<Exact>, phi: &State<Exact>) -> Vec<(Exact, Exact)> {
    let n = obs.eigenvalues.len();
    let mut out: Vec<(Exact, Exact)> = Vec::new();
    for l in &obs.eigenvalues {
        if out.iter().any(|(m, _)| m == l) {
            continue;
        }
        let mask: Vec<Exact> = obs
            .eigenvalues
            .iter()
            .map(|d| if d == l { Exact::one() } else { Exact::zero() })
            .collect();
        let p = obs.unitary.mul(&Matrix::diag(&mask)).mul(&obs.unitary.adjoint());
        debug_assert_eq!(p.rows(), n);
        out.push((l.clone(), phi.eval(p.as_slice())));
    }
    out
}

fn born(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("born", 101, 5);
    let qubit = (|| -> Check {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let one = Exact::one();
        let a = element_of(&m2, &Matrix::diag(&[one.clone(), -one.clone()]));
        let phi = State::vectorial(&m2, &[one.clone(), one]).map_err(fail)?;
        let d = born_distribution(&a, &phi, tol).map_err(fail)?.normalized().map_err(fail)?;
        ensure!(d.entries.len() == 2, "expected two outcomes, got {}", d.entries.len());
        for l in [1.0, -1.0] {
            let w = d.weight_at(Complex64::new(l, 0.0), 1e-9);
            ensure!((w - 0.5).abs() <= 1e-12, "weight at {l} is {w}");
        }
        Ok(())
    })();
    tally.record("qubit", qubit);
    for k in 0..100 {
        let m3 = Arc::new(matrix_algebra::<Exact>(3));
        let obs = g.normal::<Exact>(3);
        let phi = if g.coin(0.5) {
            g.positive_state(&m3, tol)
        } else {
            State::vectorial(&m3, &g.nonzero_vector::<Exact>(3)).expect("vector of length 3")
        };
        let r = (|| -> Check {
            let a = element_of(&m3, &obs.matrix);
            let d = born_distribution(&a, &phi, tol).map_err(fail)?;
            let norm = phi.normalization().re_f64();
            ensure!((d.total - norm).abs() <= FLOAT_TOL, "weights sum to {} not {norm}", d.total);
            for (l, w) in spectral_weights(&obs, &phi) {
                let got = d.weight_at(l.to_c64(), 1e-6);
                let want = w.re_f64();
                ensure!((got - want).abs() <= FLOAT_TOL, "weight at {:?} is {got}, expected {want}", l.to_c64());
            }
            Ok(())
        })();
        tally.record(format_args!("#{k}"), r);
    }
    tally.finish()
}

fn ee_link(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("ee-link", 100, 10);
    for k in 0..100 {
        let n = g.range(2, 3);
        let mn = Arc::new(matrix_algebra::<Exact>(n));
        let obs = g.normal::<Exact>(n);
        let forced = k < 20;
        let (v, lambda) = if forced {
            let j = g.below(n);
            let scale = g.gaussian::<Exact>();
            let scale = if scale.is_zero() { Exact::one() } else { scale };
            let v: Vec<Exact> = obs.unitary.column(j).iter().map(|x| x.mul_ref(&scale)).collect();
            (v, obs.eigenvalues[j].clone())
        } else {
            let v = g.nonzero_vector::<Exact>(n);
            let lambda = if g.coin(0.5) {
                obs.eigenvalues[g.below(n)].clone()
            } else {
                g.gaussian()
            };
            (v, lambda)
        };
        let r = (|| -> Check {
            let a = element_of(&mn, &obs.matrix);
            let phi = State::vectorial(&mn, &v).map_err(fail)?;
            let link = ee_link_check(&a, &phi, &lambda, tol).map_err(fail)?;
            let av = obs.matrix.mul_vec(&v);
            let oracle = av.iter().zip(&v).all(|(x, y)| *x == y.mul_ref(&lambda));
            ensure!(link.eigenvector == oracle, "eigenvector test says {}, direct check says {oracle}", link.eigenvector);
            ensure!(link.agree(), "readings disagree: {link:?}");
            ensure!(!forced || link.probability_one, "forced eigenvector has probability below one");
            Ok(())
        })();
        tally.record(format_args!("#{k}{}", if forced { " (forced)" } else { "" }), r);
    }
    tally.finish()
}

fn collapse(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("collapse", 50, 5);
    for k in 0..50 {
        let n = g.range(2, 3);
        let rank = g.range(1, n);
        let i = g.isometry::<Exact>(n, rank);
        let p = i.mul(&i.adjoint());
        let v = g.nonzero_vector::<Exact>(n);
        let w = g.nonzero_vector::<Exact>(rank);
        let r = (|| -> Check {
            let mn = Arc::new(matrix_algebra::<Exact>(n));
            let phi = State::vectorial(&mn, &v).map_err(fail)?;
            let (_, rep) = conditioning(&element_of(&mn, &p), &phi, tol).map_err(fail)?;
            let expected = form(&Matrix::identity(n), &p.mul_vec(&v), &v);
            ensure!(rep.probability == expected, "psi(1) != <Pv, v>");
            ensure!(rep.gns_mc_cyclic, "GNS_M,c does not send Omega to P Omega");
            ensure!(rep.all_pass(), "conditioning identities fail: {rep:?}");
            let c = collapse_composite(&i, &w, tol).map_err(fail)?;
            ensure!(c.projection == p, "composite projection is not i i*");
            ensure!(c.residual == 0.0, "composite residual {:e}", c.residual);
            Ok(())
        })();
        tally.record(format_args!("#{k} (n={n}, rank={rank})"), r);
    }
    tally.finish()
}

fn kernel(g: &mut Gen, rows: usize, cols: usize, tol: &ToleranceConfig) -> MarkovKernel<Exact> {
    MarkovKernel::new(points(rows), points(cols), g.stochastic(rows, cols), tol).expect("generated kernels are stochastic")
}

fn gelfand(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("gelfand", 100, 5);
    for k in 0..100 {
        let (nx, ny, nz) = (g.range(1, 6), g.range(1, 6), g.range(1, 6));
        let f = kernel(g, nx, ny, tol);
        let h = kernel(g, ny, nz, tol);
        let (nu, nw) = (g.range(1, 3), g.range(1, 3));
        let small = kernel(g, nu, nw, tol);
        let r = (|| -> Check {
            let phi_f = kernel_to_cp(&f, tol).map_err(fail)?;
            for y in 0..ny {
                let image = phi_f.underlying().apply(&function_alg::<Exact>(ny).basis_vector(y));
                ensure!(image == f.matrix().column(y), "Phi_F(1_y) is not column y of F");
            }
            let back = cp_to_kernel(phi_f.underlying(), tol).map_err(fail)?;
            ensure!(back.matrix() == f.matrix(), "kernel -> map -> kernel is not the identity");
            let again = kernel_to_cp(&back, tol).map_err(fail)?;
            ensure!(again.underlying().matrix() == phi_f.underlying().matrix(), "map -> kernel -> map is not the identity");

            let fh = kleisli_compose(&f, &h).map_err(fail)?;
            ensure!(fh.matrix() == &f.matrix().mul(h.matrix()), "Kleisli composite is not the matrix product");
            let phi_h = kernel_to_cp(&h, tol).map_err(fail)?;
            let composed = phi_f.underlying().compose(phi_h.underlying()).map_err(fail)?;
            ensure!(
                kernel_to_cp(&fh, tol).map_err(fail)?.underlying().matrix() == composed.matrix(),
                "duality is not contravariantly functorial"
            );

            if nx * nu <= 18 && ny * nw <= 18 {
                let phi_s = kernel_to_cp(&small, tol).map_err(fail)?;
                let t = kernel_to_cp(&kernel_tensor(&f, &small), tol).map_err(fail)?;
                let want = tensor_linear_map(phi_f.underlying(), phi_s.underlying());
                ensure!(t.underlying().matrix() == want.matrix(), "duality does not respect tensor products");
            }
            Ok(())
        })();
        tally.record(format_args!("#{k} ({nx}x{ny}x{nz})"), r);
    }
    tally.finish()
}

fn compatibility(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("compatibility", 50, 5);
    for k in 0..50 {
        let (nx, ny) = (g.range(1, 6), g.range(1, 6));
        let f = kernel(g, nx, ny, tol);
        let sparse = g.coin(0.6);
        let weights = g.weights::<Exact>(nx, sparse);
        let r = (|| -> Check {
            let mu = FiniteProbSpace::new(points(nx), weights.clone()).map_err(fail)?;
            let rep = probabilistic_compatibility(&f, &mu, tol).map_err(fail)?;
            let supp_mu: Vec<usize> = (0..nx).filter(|&x| !weights[x].is_zero()).collect();
            let supp_nu: Vec<usize> = (0..ny)
                .filter(|&y| {
                    let w = (0..nx).fold(Exact::zero(), |acc, x| acc + weights[x].mul_ref(&f.matrix()[(x, y)]));
                    !w.is_zero()
                })
                .collect();
            let expected = f.matrix().submatrix(&supp_mu, &supp_nu);
            ensure!(rep.gns_m == expected, "GNS_M is not row averaging on the supports");
            ensure!(rep.matches, "compatibility report disagrees");
            Ok(())
        })();
        tally.record(format_args!("#{k} ({nx}x{ny})"), r);
    }
    tally.finish()
}

fn normalization(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("normalization", 120, 2);
    let c_alg = Arc::new(gnslab_core::algebra::complex_numbers::<Exact>());
    for k in 0..100 {
        let c = g.hom_chain::<Exact>(tol);
        let factor = loop {
            let s = g.nonzero_rational::<Exact>();
            if s != Exact::one() {
                break s;
            }
        };
        let r = (|| -> Check {
            let dom = c.f.dom().clone();
            let pulled = c.phi.pullback_matrix(&dom, c.f.matrix());
            let psi = pulled.scale(&factor);
            ensure!(
                check_same_normalization(&c.phi, &psi, tol).is_err(),
                "mismatched normalizations accepted"
            );
            match PhysMorphism::new(&c.f, &c.phi, &psi, tol) {
                Err(Error::NormalizationMismatch) => {}
                Err(e) => return Err(format!("rejected for the wrong reason: {e}")),
                Ok(_) => return Err("cross-normalization morphism constructed".into()),
            }
            // the unit inclusion is the unique morphism to I_phi(1)
            let unit = gnslab_core::algebra::StarHomomorphism::unit_inclusion(&c_alg, c.phi.algebra()).map_err(fail)?;
            let m = PhysMorphism::pull_back(&unit, &c.phi, tol).map_err(fail)?;
            let i = make_i(c.phi.normalization().clone(), tol).map_err(fail)?;
            ensure!(m.cod_state().functional() == i.functional(), "pullback to C is not I_phi(1)");
            Ok(())
        })();
        tally.record(format_args!("#{k} ({})", c.template), r);
    }
    for k in 0..20 {
        let (l, m) = (g.rational::<Exact>(), g.rational::<Exact>());
        let r = (|| -> Check {
            let t = tensor_state(&make_i(l.clone(), tol).map_err(fail)?, &make_i(m.clone(), tol).map_err(fail)?);
            let want = make_i(l.mul_ref(&m), tol).map_err(fail)?;
            ensure!(t.algebra().dim() == 1, "C (x) C is not one-dimensional");
            ensure!(t.functional() == want.functional(), "I_l (x) I_m != I_lm");
            Ok(())
        })();
        tally.record(format_args!("I #{k}"), r);
    }
    tally.finish()
}

/// Every representation law checked directly on all elements and basis
/// vectors, plus the permutation character `chi(g) = #fixed points`.
fn check_permutation_rep(group: &GroupTable, perms: &[Vec<usize>], tol: &ToleranceConfig) -> Check {
    let n = perms[0].len();
    let alg = function_alg::<Exact>(n);
    let phi = State::new(alg.clone(), vec![Exact::from_ratio(1, n as i64); n], tol).map_err(fail)?;
    let action = GroupAction::by_permutations(group.clone(), phi.clone(), perms, tol).map_err(fail)?;
    let rep = equivariant_gns(&action, tol).map_err(fail)?;
    ensure!(rep.dim == n, "GNS dimension {} != {n}", rep.dim);
    ensure!(rep.checks.all_pass(), "library checks fail: {:?}", rep.checks);
    let gns_space: GnsSpace<Exact> = gns(&phi, tol).map_err(fail)?;
    let gram = gns_space.gram();
    let ord = group.order();
    for a in 0..ord {
        let u = &rep.matrices[a];
        ensure!(isometric(u, gram, gram, 0.0), "U({a}) is not unitary");
        let fixed = (0..n).filter(|&x| perms[a][x] == x).count() as i64;
        ensure!(rep.character(a) == Exact::from_i64(fixed), "character at {a} is not {fixed}");
        for b in 0..ord {
            ensure!(u.mul(&rep.matrices[b]) == rep.matrices[group.mul(a, b)], "U({a})U({b}) != U({a}{b})");
        }
        for x in 0..n {
            let e = alg.basis_vector(x);
            let moved = action.automorphism(a).apply(&e);
            ensure!(
                u.mul(&gns_space.action_of(&e)) == gns_space.action_of(&moved).mul(u),
                "covariance fails at g={a}, x={x}"
            );
        }
    }
    Ok(())
}

fn symmetry(_g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("symmetry", 7, 5);
    let s3 = GroupTable::symmetric3();
    let regular: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|x| s3.mul(a, x)).collect()).collect();
    tally.record("S3 regular", check_permutation_rep(&s3, &regular, tol));
    let natural: Vec<Vec<usize>> = (0..6).map(|a| perm_of(&s3, a).to_vec()).collect();
    tally.record("S3 on three points", check_permutation_rep(&s3, &natural, tol));
    for n in 2..=6 {
        let zn = GroupTable::cyclic(n);
        let rot: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|x| zn.mul(a, x)).collect()).collect();
        tally.record(format_args!("Z{n} rotations"), check_permutation_rep(&zn, &rot, tol));
    }
    tally.finish()
}

/// The permutation of `{0, 1, 2}` that the element `a` of `S3` stands for.
fn perm_of(s3: &GroupTable, a: usize) -> [usize; 3] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    *PERMS
        .iter()
        .find(|p| s3.element_of_perm(**p) == a)
        .expect("every element of S3 is a permutation")
}

fn dinaturality(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("dinaturality", 100, 5);
    for k in 0..100 {
        let c = g.hom_chain::<Exact>(tol);
        let r = (|| -> Check {
            let m = PhysMorphism::pull_back(&c.f, &c.phi, tol).map_err(fail)?;
            let v = g.vector::<Exact>(m.cod_gns().dim());
            let holds = dinaturality_holds(&m, &v, tol).map_err(fail)?;
            let e = gns_map(&m).map_err(fail)?;
            let ev = e.mul_vec(&v);
            let (dom, cod) = (m.dom_gns(), m.cod_gns());
            let oracle = (0..c.f.dom().dim()).all(|b| {
                let x = c.f.dom().basis_vector(b);
                let lhs = form(dom.gram(), &dom.action_of(&c.f.apply(&x)).mul_vec(&ev), &ev);
                let rhs = form(cod.gram(), &cod.action_of(&x).mul_vec(&v), &v);
                lhs == rhs
            });
            ensure!(oracle, "<f(b) GNS(f)v, GNS(f)v> != <b v, v>");
            ensure!(holds, "library reports a non-commuting square");
            Ok(())
        })();
        tally.record(format_args!("#{k} ({})", c.template), r);
    }
    tally.finish()
}

fn scattering_instance<S: Scalar>(g: &mut Gen, f: usize, tol: &ToleranceConfig, t: f64) -> Check {
    let (na, nb) = (g.range(1, f), g.range(1, f));
    let s = g.unitary::<S>(f);
    let i_alpha = g.isometry::<S>(f, na);
    let p_beta = g.isometry::<S>(f, nb).adjoint();
    let v = g.nonzero_vector::<S>(na);
    let (_, rep) = scattering(&s, &i_alpha, &p_beta, &v, tol).map_err(fail)?;
    ensure!(rep.residual <= t, "GNS_M,c residual {:e}", rep.residual);
    ensure!(rep.probability_bounded, "probability out of [0, phi(1)]");
    let k = p_beta.mul(&s).mul(&i_alpha);
    let kv = k.mul_vec(&v);
    let want = form(&Matrix::identity(nb), &kv, &kv);
    ensure!(rep.probability.near(&want, t), "psi(1) != |K v|^2");
    ensure!(rep.initial.near(&form(&Matrix::identity(na), &v, &v), t), "phi(1) != |v|^2");
    Ok(())
}

fn scattering_suite(g: &mut Gen, tol: &ToleranceConfig) -> SuiteOutcome {
    let mut tally = Tally::new("scattering", 20, 5);
    for k in 0..20 {
        let f = g.range(2, 8);
        tally.record(format_args!("float #{k} (F={f})"), scattering_instance::<Complex64>(g, f, tol, FLOAT_TOL));
    }
    for k in 0..5 {
        let f = g.range(2, 3);
        tally.record(format_args!("exact #{k} (F={f})"), scattering_instance::<Exact>(g, f, tol, 0.0));
    }
    tally.finish()
}
