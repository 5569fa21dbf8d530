//! Finite symmetry groups acting on states, the unitary representations
//! they induce on GNS spaces, antiunitary time reversal and chains of time
//! evolution operators.
//!
//! An action `alpha : G -> Aut(A)` with `phi o alpha(g) = phi` makes every
//! `g` a process `phi -> phi` carried by `O(g) = alpha(g^-1)`. Then
//! `U(g) = GNS_c(g)` sends `[x]` to `[alpha(g) x]`.

mod reversal;
mod time;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use reversal::{time_reversal, Semilinear, TimeReversal};
pub use time::{check_time_chain, TimeChain, TimeReport};

use crate::algebra::{same_algebra, tensor_algebra, Element, GroupTable, StarAlgebra, StarHomomorphism};
use crate::gns::{gns, gns_c, tensor_state, GnsSpace, PhysMorphism, State};
use crate::matrix::{vec_approx_eq, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// A finite group acting on an algebra by automorphisms fixing a state.
#[derive(Debug, Clone)]
pub struct GroupAction<S> {
    group: GroupTable,
    state: State<S>,
    automorphisms: Vec<StarHomomorphism<S>>,
}

impl<S: Scalar> GroupAction<S> {
    /// Checks invariance of the state and the action laws.
    pub fn new(
        group: GroupTable,
        state: State<S>,
        automorphisms: Vec<StarHomomorphism<S>>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let alg = state.algebra().clone();
        if automorphisms.len() != group.order() {
            return Err(Error::NotAnAction(format!(
                "{} automorphisms for a group of order {}",
                automorphisms.len(),
                group.order()
            )));
        }
        if automorphisms.iter().any(|f| !same_algebra(f.dom(), &alg) || !same_algebra(f.cod(), &alg)) {
            return Err(Error::AlgebraMismatch);
        }
        let automorphisms: Vec<_> = automorphisms
            .into_iter()
            .map(|f| StarHomomorphism::new_unchecked(alg.clone(), alg.clone(), f.matrix().clone()))
            .collect();
        let t = cmp_tol::<S>(tol);
        let e = group.identity();
        if !automorphisms[e].matrix().approx_eq(&Matrix::identity(alg.dim()), t) {
            return Err(Error::NotAnAction("the identity does not act trivially".into()));
        }
        for (g, f) in automorphisms.iter().enumerate() {
            if !state.pullback_matrix(&alg, f.matrix()).approx_eq(&state, t) {
                return Err(Error::NotAnAction(format!("the state is not invariant under element {g}")));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let lhs = automorphisms[g].matrix().mul(automorphisms[h].matrix());
                if !lhs.approx_eq(automorphisms[group.mul(g, h)].matrix(), t) {
                    return Err(Error::NotAnAction(format!("alpha({g}) alpha({h}) != alpha({g}{h})")));
                }
            }
        }
        Ok(GroupAction {
            group,
            state,
            automorphisms,
        })
    }

    /// `alpha(g)(1_x) = 1_{sigma_g(x)}` on a function algebra, where
    /// `perms[g]` lists `sigma_g`.
    pub fn by_permutations(
        group: GroupTable,
        state: State<S>,
        perms: &[Vec<usize>],
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let alg = state.algebra().clone();
        if !alg.is_function_algebra() {
            return Err(Error::NotFunctionAlgebra);
        }
        let n = alg.dim();
        let mut autos = Vec::with_capacity(perms.len());
        for (g, p) in perms.iter().enumerate() {
            let mut seen = alloc::vec![false; n];
            if p.len() != n || p.iter().any(|&x| x >= n || core::mem::replace(&mut seen[x], true)) {
                return Err(Error::NotAnAction(format!("element {g} does not permute the points")));
            }
            let m = Matrix::from_fn(n, n, |r, c| if p[c] == r { S::one() } else { S::zero() });
            autos.push(StarHomomorphism::new_unchecked(alg.clone(), alg.clone(), m));
        }
        Self::new(group, state, autos, tol)
    }

    /// `alpha(g)(a) = u_g a u_g*` through the faithful representation.
    pub fn by_unitaries(
        group: GroupTable,
        state: State<S>,
        unitaries: &[Matrix<S>],
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let alg = state.algebra().clone();
        let rep = alg.rep().ok_or(Error::NoFaithfulRep)?;
        let t = cmp_tol::<S>(tol);
        let mut autos = Vec::with_capacity(unitaries.len());
        for u in unitaries {
            if u.shape() != (rep.dim, rep.dim) || !u.mul(&u.adjoint()).approx_eq(&Matrix::identity(rep.dim), t) {
                return Err(Error::NotUnitary);
            }
            let cols = (0..alg.dim())
                .map(|i| {
                    let img = u.mul(&rep.matrices[i]).mul(&u.adjoint());
                    Element::from_rep_matrix(&alg, &img, tol).map(Element::into_coords)
                })
                .collect::<Result<Vec<_>>>()?;
            autos.push(StarHomomorphism::new(alg.clone(), alg.clone(), Matrix::from_columns(alg.dim(), &cols), tol)?);
        }
        Self::new(group, state, autos, tol)
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }
    pub fn state(&self) -> &State<S> {
        &self.state
    }
    pub fn algebra(&self) -> &Arc<StarAlgebra<S>> {
        self.state.algebra()
    }
    /// `alpha(g)`.
    pub fn automorphism(&self, g: usize) -> &StarHomomorphism<S> {
        &self.automorphisms[g]
    }

    /// The process `phi -> phi` of `g`, carried by `alpha(g^-1)`.
    pub fn process(&self, g: &Arc<GnsSpace<S>>, elem: usize, tol: &ToleranceConfig) -> PhysMorphism<S> {
        let hom = self.automorphisms[self.group.inverse(elem)].clone();
        PhysMorphism::assemble(hom, g.clone(), g.clone(), tol)
    }
}

/// The `(G x G')`-action on `phi (x) psi`, with pairs at `g * |G'| + h`.
pub fn tensor_action<S: Scalar>(
    a: &GroupAction<S>,
    b: &GroupAction<S>,
    tol: &ToleranceConfig,
) -> Result<GroupAction<S>> {
    let alg = Arc::new(tensor_algebra(a.algebra(), b.algebra()));
    let state = State::new_unchecked(alg.clone(), tensor_state(&a.state, &b.state).functional().to_vec());
    let mut autos = Vec::with_capacity(a.group.order() * b.group.order());
    for f in &a.automorphisms {
        for g in &b.automorphisms {
            autos.push(StarHomomorphism::new_unchecked(alg.clone(), alg.clone(), f.matrix().kron(g.matrix())));
        }
    }
    GroupAction::new(a.group.product(&b.group), state, autos, tol)
}

/// Which representation laws the operators satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepChecks {
    pub unitary: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub fixes_omega: bool,
    /// `U(g)(a v) = alpha(g)(a) U(g)(v)` for all basis `a` and all `v`.
    pub covariant: bool,
}

impl RepChecks {
    pub fn all_pass(&self) -> bool {
        self.unitary && self.multiplicative && self.unital && self.fixes_omega && self.covariant
    }
}

/// A unitary representation on a GNS space.
#[derive(Debug, Clone)]
pub struct UnitaryRep<S> {
    pub dim: usize,
    pub gram: Matrix<S>,
    pub matrices: Vec<Matrix<S>>,
    pub checks: RepChecks,
    /// Largest deviation among the checked identities.
    pub residual: f64,
}

impl<S: Scalar> UnitaryRep<S> {
    pub fn character(&self, g: usize) -> S {
        self.matrices[g].trace()
    }
}

/// `U(g) = GNS_c(g)` for every group element, with all laws verified.
pub fn equivariant_gns<S: Scalar>(action: &GroupAction<S>, tol: &ToleranceConfig) -> Result<UnitaryRep<S>> {
    let g = Arc::new(gns(&action.state, tol)?);
    if !g.is_positive() {
        return Err(Error::NotPositive);
    }
    let group = &action.group;
    let matrices = (0..group.order())
        .map(|x| gns_c(&action.process(&g, x, tol), tol))
        .collect::<Result<Vec<_>>>()?;
    let t = cmp_tol::<S>(tol);
    let gram = g.gram();
    let mut residual = 0.0f64;
    let mut track = |lhs: &Matrix<S>, rhs: &Matrix<S>| {
        residual = residual.max(lhs.residual(rhs));
        lhs.approx_eq(rhs, t)
    };

    let unitary = matrices.iter().all(|u| track(&u.transpose().mul(gram).mul(&u.conj()), gram));
    let multiplicative = (0..group.order())
        .all(|x| (0..group.order()).all(|y| track(&matrices[x].mul(&matrices[y]), &matrices[group.mul(x, y)])));
    let unital = track(&matrices[group.identity()], &Matrix::identity(g.dim()));
    let fixes_omega = matrices.iter().all(|u| vec_approx_eq(&u.mul_vec(g.omega()), g.omega(), t));
    let covariant = (0..group.order()).all(|x| {
        let alpha = action.automorphism(x);
        (0..action.algebra().dim()).all(|i| {
            let moved = alpha.matrix().column(i);
            track(&matrices[x].mul(&g.actions()[i]), &g.action_of(&moved).mul(&matrices[x]))
        })
    });
    Ok(UnitaryRep {
        dim: g.dim(),
        gram: gram.clone(),
        matrices,
        checks: RepChecks {
            unitary,
            multiplicative,
            unital,
            fixes_omega,
            covariant,
        },
        residual,
    })
}
