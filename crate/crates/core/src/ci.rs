//! Two bosons with a contact interaction in a one-dimensional harmonic trap,
//! solved by configuration interaction in the symmetrized pair basis.
//!
//! In oscillator units the Hamiltonian is
//! `sum_i (p_i^2 + x_i^2) / 2 + g delta(x_1 - x_2)`. The contact matrix
//! element between oscillator orbitals is `<ab|delta|cd> = W_abcd`, so
//! between symmetrized pairs `(n, m)` and `(p, q)` the interaction is
//! `2 g W_nmpq / sqrt((1 + d_nm)(1 + d_pq))`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::index::IndexTuple;
use crate::recursion::IntegralTable;
use crate::IntegralKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CiError {
    #[error("the CI demo needs a W table, got {0}")]
    WrongTable(IntegralKind),
    #[error("W table has max degree {table}, basis needs {needed}")]
    TableTooSmall { table: u32, needed: u32 },
    #[error("coupling g must be finite, got {0}")]
    BadCoupling(f64),
    #[error("eigensolver did not converge")]
    NonConvergence,
    #[error("ground-state residual {residual:e} exceeds {bound:e}")]
    Residual { residual: f64, bound: f64 },
}

/// Pairs `(n, m)` with `0 <= n <= m <= M`, `n` major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBasis {
    max_degree: u32,
    pairs: Vec<(u32, u32)>,
}

impl PairBasis {
    pub fn new(max_degree: u32) -> Self {
        let pairs = (0..=max_degree)
            .flat_map(|n| (n..=max_degree).map(move |m| (n, m)))
            .collect();
        PairBasis { max_degree, pairs }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub basis: PairBasis,
    pub g: f64,
    pub matrix: DMatrix<f64>,
}

pub fn build_hamiltonian(max_degree: u32, g: f64, w_table: &IntegralTable) -> Result<Hamiltonian, CiError> {
    if !g.is_finite() {
        return Err(CiError::BadCoupling(g));
    }
    if w_table.kind() != IntegralKind::W {
        return Err(CiError::WrongTable(w_table.kind()));
    }
    if w_table.max_degree() < max_degree {
        return Err(CiError::TableTooSmall {
            table: w_table.max_degree(),
            needed: max_degree,
        });
    }
    let basis = PairBasis::new(max_degree);
    let dim = basis.len();
    let mut matrix = DMatrix::zeros(dim, dim);
    let pairs = basis.pairs();
    for a in 0..dim {
        let (n, m) = pairs[a];
        for b in a..dim {
            let (p, q) = pairs[b];
            let w = w_table
                .value(&IndexTuple::four([n, m, p, q]))
                .expect("tuple within the table")
                .value;
            let sym = (if n == m { 2.0 } else { 1.0 }) * (if p == q { 2.0 } else { 1.0 });
            let mut h = 2.0 * g * w / f64::sqrt(sym);
            if a == b {
                h += f64::from(n + m + 1);
            }
            matrix[(a, b)] = h;
            matrix[(b, a)] = h;
        }
    }
    Ok(Hamiltonian { basis, g, matrix })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub vector: DVector<f64>,
    pub residual: f64,
}

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Lowest eigenpair, checked against `||H v - E v|| <= 1e-10 ||H||`.
pub fn ground_state(h: &Hamiltonian) -> Result<GroundState, CiError> {
    let eig = SymmetricEigen::try_new(h.matrix.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(CiError::NonConvergence)?;
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(CiError::NonConvergence)?;
    let vector = eig.eigenvectors.column(k).into_owned();
    let residual = (&h.matrix * &vector - &vector * energy).norm();
    let bound = 1e-10 * h.matrix.norm().max(f64::MIN_POSITIVE);
    if residual > bound {
        return Err(CiError::Residual { residual, bound });
    }
    Ok(GroundState {
        energy,
        vector,
        residual,
    })
}

pub fn ground_state_energy(h: &Hamiltonian) -> Result<f64, CiError> {
    ground_state(h).map(|s| s.energy)
}
