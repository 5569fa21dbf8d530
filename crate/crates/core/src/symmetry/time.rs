use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::gns::{gns_c, PhysMorphism};
use crate::linalg;
use crate::markov::{gns_mc, MarkovMorphism};
use crate::matrix::Matrix;
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// Evolution operators `U(t, t') : GNS(phi(t)) -> GNS(phi(t'))` on a finite
/// grid of times, listed in increasing order.
#[derive(Debug, Clone)]
pub struct TimeChain<S> {
    times: Vec<String>,
    arrows: BTreeMap<(usize, usize), Matrix<S>>,
}

impl<S: Scalar> TimeChain<S> {
    pub fn new(times: Vec<String>) -> Self {
        TimeChain {
            times,
            arrows: BTreeMap::new(),
        }
    }

    pub fn times(&self) -> &[String] {
        &self.times
    }

    pub fn insert(&mut self, from: usize, to: usize, u: Matrix<S>) -> Result<()> {
        if from >= self.times.len() || to >= self.times.len() {
            return Err(Error::ShapeMismatch("time index out of range".into()));
        }
        self.arrows.insert((from, to), u);
        Ok(())
    }

    /// Inserts `GNS_c` of a process `phi(from) -> phi(to)`.
    pub fn insert_phys(&mut self, from: usize, to: usize, m: &PhysMorphism<S>, tol: &ToleranceConfig) -> Result<()> {
        self.insert(from, to, gns_c(m, tol)?)
    }

    /// Inserts `GNS_Mc` of a statistical process `phi(from) -> phi(to)`.
    pub fn insert_markov(
        &mut self,
        from: usize,
        to: usize,
        m: &MarkovMorphism<S>,
        tol: &ToleranceConfig,
    ) -> Result<()> {
        self.insert(from, to, gns_mc(m, tol)?)
    }

    pub fn arrow(&self, from: usize, to: usize) -> Option<&Matrix<S>> {
        self.arrows.get(&(from, to))
    }

    fn missing(&self, from: usize, to: usize) -> Error {
        Error::MissingArrow(self.times[from].clone(), self.times[to].clone())
    }

    /// Dimension of the state space at `t`, read off any arrow touching it.
    fn dim_at(&self, t: usize) -> Option<usize> {
        self.arrows.iter().find_map(|(&(a, b), m)| {
            if a == t {
                Some(m.cols())
            } else if b == t {
                Some(m.rows())
            } else {
                None
            }
        })
    }
}

/// Which categories of time the chain is a functor out of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeReport {
    /// The pair groupoid: every arrow invertible and the cocycle law holds
    /// for all triples of times.
    pub time: bool,
    /// The poset of times: `U(t, t) = 1` and the cocycle law for `t <= t' <= t''`.
    pub thermodynamical: bool,
    /// The poset of times at or after the chosen start.
    pub restricted: bool,
    /// Forward triples `(t, t', t'')` on which the cocycle law fails.
    pub failures: Vec<(usize, usize, usize)>,
}

/// Checks `U(t', t'') U(t, t') = U(t, t'')` and `U(t, t) = 1`.
///
/// Every forward arrow `t < t'` must be present. Missing diagonal arrows are
/// taken to be identities; missing backward arrows are filled in by inverses
/// when those exist. The restricted variant starts at index `t0`.
pub fn check_time_chain<S: Scalar>(chain: &TimeChain<S>, t0: usize, tol: &ToleranceConfig) -> Result<TimeReport> {
    let n = chain.times.len();
    let t = cmp_tol::<S>(tol);
    let mut fwd: BTreeMap<(usize, usize), Matrix<S>> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let m = match chain.arrow(i, j) {
                Some(m) => m.clone(),
                None if i == j => Matrix::identity(chain.dim_at(i).unwrap_or(0)),
                None => return Err(chain.missing(i, j)),
            };
            fwd.insert((i, j), m);
        }
    }
    for (&(i, j), m) in &fwd {
        let (di, dj) = (fwd[&(i, i)].rows(), fwd[&(j, j)].rows());
        if m.shape() != (dj, di) {
            return Err(Error::ShapeMismatch(alloc::format!(
                "U({}, {}) does not map between the state spaces",
                chain.times[i],
                chain.times[j]
            )));
        }
    }

    let holds = |lhs: &Matrix<S>, rhs: &Matrix<S>| lhs.approx_eq(rhs, t);
    let units_ok = |lo: usize| (lo..n).all(|i| holds(&fwd[&(i, i)], &Matrix::identity(fwd[&(i, i)].rows())));
    let mut failures = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                if !holds(&fwd[&(j, k)].mul(&fwd[&(i, j)]), &fwd[&(i, k)]) {
                    failures.push((i, j, k));
                }
            }
        }
    }
    let thermodynamical = units_ok(0) && failures.is_empty();
    let restricted = units_ok(t0.min(n)) && failures.iter().all(|&(i, _, _)| i < t0);

    let time = thermodynamical && {
        let mut all = fwd.clone();
        let mut ok = true;
        for i in 0..n {
            for j in 0..i {
                let m = match chain.arrow(i, j) {
                    Some(m) => Some(m.clone()),
                    None => linalg::inverse(&fwd[&(j, i)], tol.rank_tol).ok(),
                };
                match m {
                    Some(m) if m.shape() == (fwd[&(j, j)].rows(), fwd[&(i, i)].rows()) => {
                        all.insert((i, j), m);
                    }
                    _ => ok = false,
                }
            }
        }
        ok && (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| holds(&all[&(j, k)].mul(&all[&(i, j)]), &all[&(i, k)])))
        })
    };

    Ok(TimeReport {
        time,
        thermodynamical,
        restricted,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, Element, StarLinearMap};
    use crate::gns::{gns, lift_schrodinger, State};
    use crate::markov::kraus_map;
    use crate::scalar::Exact;
    use alloc::string::ToString;
    use alloc::sync::Arc;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }
    fn times(n: usize) -> Vec<String> {
        (0..n).map(|i| alloc::format!("t{i}")).collect()
    }

    #[test]
    fn constant_identity_family() {
        let mut chain = TimeChain::<Exact>::new(times(3));
        for i in 0..3 {
            for j in i..3 {
                chain.insert(i, j, Matrix::identity(2)).unwrap();
            }
        }
        let rep = check_time_chain(&chain, 1, &tol()).unwrap();
        assert!(rep.time && rep.thermodynamical && rep.restricted);
    }

    #[test]
    fn missing_forward_arrow() {
        let mut chain = TimeChain::<Exact>::new(times(3));
        chain.insert(0, 1, Matrix::identity(1)).unwrap();
        chain.insert(1, 2, Matrix::identity(1)).unwrap();
        assert_eq!(
            check_time_chain(&chain, 0, &tol()),
            Err(Error::MissingArrow("t0".to_string(), "t2".to_string()))
        );
    }

    #[test]
    fn broken_cocycle_is_located() {
        let mut chain = TimeChain::<Exact>::new(times(3));
        let two = Matrix::identity(1).scale(&q(2));
        chain.insert(0, 1, two.clone()).unwrap();
        chain.insert(1, 2, Matrix::identity(1)).unwrap();
        chain.insert(0, 2, Matrix::identity(1)).unwrap();
        let rep = check_time_chain(&chain, 1, &tol()).unwrap();
        assert_eq!(rep.failures, vec![(0, 1, 2)]);
        assert!(!rep.time && !rep.thermodynamical);
        // from t1 on, nothing is wrong
        assert!(rep.restricted);
    }

    #[test]
    fn unitary_chain_from_schrodinger_lifts() {
        // phi(t) is the vector state at u_t psi, with u_0 = 1, u_1 = u, u_2 = u^2, u the 3-4-5 rotation
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let psi = [q(1), q(0)];
        let u = Matrix::from_rows(vec![
            vec![Exact::from_ratio(3, 5), Exact::from_ratio(-4, 5)],
            vec![Exact::from_ratio(4, 5), Exact::from_ratio(3, 5)],
        ])
        .unwrap();
        let powers = [Matrix::identity(2), u.clone(), u.mul(&u)];
        let lifts: Vec<_> = powers.iter().map(|p| lift_schrodinger(p, &psi, &m2, &tol()).unwrap()).collect();
        // each lift is a process phi(t) -> psi; its GNS_c is unitary, so
        // U(t, t') = GNS_c(lift_t')^-1 GNS_c(lift_t)
        let gc: Vec<Matrix<Exact>> = lifts.iter().map(|l| gns_c(&l.morphism, &tol()).unwrap()).collect();
        let mut chain = TimeChain::new(times(3));
        for i in 0..3 {
            for j in i..3 {
                let back = linalg::inverse(&gc[j], 0.0).unwrap();
                chain.insert(i, j, back.mul(&gc[i])).unwrap();
            }
        }
        let rep = check_time_chain(&chain, 0, &tol()).unwrap();
        assert!(rep.time && rep.thermodynamical && rep.restricted);
    }

    #[test]
    fn conditioning_chain_is_only_thermodynamical() {
        // repeated compression a -> E11 a E11 against the vector state at (1, 1)
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let k = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(0)]]).unwrap();
        let compress: StarLinearMap<Exact> = kraus_map(&m2, &m2, &[k], &tol()).unwrap();
        let phi0 = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let m01 = MarkovMorphism::pull_back(&compress, &phi0, &tol()).unwrap();
        let m12 = MarkovMorphism::pull_back_from(&compress, m01.cod_gns().clone(), &tol()).unwrap();
        let m02 = m01.then(&m12, &tol()).unwrap();
        let mut chain = TimeChain::new(times(3));
        chain.insert_markov(0, 1, &m01, &tol()).unwrap();
        chain.insert_markov(1, 2, &m12, &tol()).unwrap();
        chain.insert_markov(0, 2, &m02, &tol()).unwrap();
        let rep = check_time_chain(&chain, 0, &tol()).unwrap();
        assert!(rep.thermodynamical && rep.restricted);
        assert!(!rep.time);
        assert!(Element::basis(&m2, 0).is_projection(&tol()));
        assert_eq!(gns(&phi0, &tol()).unwrap().dim(), 2);
    }
}
