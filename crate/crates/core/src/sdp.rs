//! Small dense primal–dual interior-point SDP solver.
//!
//! Standard form:
//!
//! ```text
//! primal:  min <C, X>   s.t. <A_k, X> = b_k,  X ⪰ 0
//! dual:    max b·y      s.t. Z = C - Σ y_k A_k ⪰ 0
//! ```
//!
//! Search directions are HKM (`ΔX = σμZ⁻¹ - X - XΔZZ⁻¹`, symmetrised) with a
//! Mehrotra predictor–corrector step. The iterates start infeasible, so both
//! residuals are driven to zero alongside the complementarity gap. Everything
//! is dense; this is meant for matrices of a few dozen rows.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Symmetric constraint matrix stored as an explicit list of `(row, col, value)`
/// entries. Off-diagonal entries must be listed in both orientations.
#[derive(Clone, Debug, Default)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn identity(n: usize) -> Self {
        SparseSym {
            entries: (0..n).map(|i| (i, i, 1.0)).collect(),
        }
    }

    /// `E_ij + E_ji`.
    pub fn symmetric_pair(i: usize, j: usize) -> Self {
        assert_ne!(i, j);
        SparseSym {
            entries: vec![(i, j, 1.0), (j, i, 1.0)],
        }
    }

    pub fn inner(&self, m: &DMatrix<f64>) -> f64 {
        self.entries.iter().map(|&(r, c, v)| v * m[(r, c)]).sum()
    }

    fn add_scaled_to(&self, scale: f64, m: &mut DMatrix<f64>) {
        for &(r, c, v) in &self.entries {
            m[(r, c)] += scale * v;
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub dim: usize,
    pub c: DMatrix<f64>,
    pub constraints: Vec<SparseSym>,
    pub b: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SdpSettings {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub step_fraction: f64,
}

impl Default for SdpSettings {
    fn default() -> Self {
        SdpSettings {
            tolerance: 1e-8,
            max_iterations: 10_000,
            step_fraction: 0.95,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    pub z: DMatrix<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

pub(crate) fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

pub(crate) fn max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.max()
}

/// Largest `α` with `M + α D ⪰ 0`, given `M ≻ 0` (infinite if unbounded).
fn max_step(m: &DMatrix<f64>, d: &DMatrix<f64>) -> Option<f64> {
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse()?;
    let mut w = &l_inv * d * l_inv.transpose();
    symmetrize(&mut w);
    let lambda = min_eigenvalue(&w);
    Some(if lambda >= 0.0 { f64::INFINITY } else { -1.0 / lambda })
}

impl SdpProblem {
    fn apply(&self, m: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.constraints.len(),
            self.constraints.iter().map(|a| a.inner(m)),
        )
    }

    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (a, &yk) in self.constraints.iter().zip(y.iter()) {
            a.add_scaled_to(yk, &mut out);
        }
        out
    }

    /// Schur complement `M_kl = tr(A_k X A_l Z⁻¹)`.
    fn schur(&self, x: &DMatrix<f64>, z_inv: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.constraints.len();
        let n = self.dim;
        let mut schur = DMatrix::zeros(m, m);
        let mut g = DMatrix::zeros(n, n);
        for (l, al) in self.constraints.iter().enumerate() {
            g.fill(0.0);
            for &(r, c, v) in &al.entries {
                // X A_l Z⁻¹ picks column r of X and row c of Z⁻¹.
                for i in 0..n {
                    let xr = v * x[(i, r)];
                    if xr == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        g[(i, j)] += xr * z_inv[(c, j)];
                    }
                }
            }
            for (k, ak) in self.constraints.iter().enumerate() {
                schur[(k, l)] = ak.entries.iter().map(|&(r, c, v)| v * g[(c, r)]).sum();
            }
        }
        symmetrize(&mut schur);
        schur
    }

    pub fn solve(&self, settings: &SdpSettings) -> Result<SdpSolution> {
        let n = self.dim;
        let m = self.constraints.len();
        let b = DVector::from_column_slice(&self.b);
        let b_norm = b.norm();
        let c_norm = self.c.norm();

        let scale = 10f64.max((n as f64).sqrt()).max(c_norm);
        let mut x = DMatrix::<f64>::identity(n, n) * scale;
        let mut z = DMatrix::<f64>::identity(n, n) * scale;
        let mut y = DVector::<f64>::zeros(m);

        let mut last_gap = f64::INFINITY;
        for iteration in 0..settings.max_iterations {
            let rp = &b - self.apply(&x);
            let mut rd = &self.c - &z - self.adjoint(&y);
            symmetrize(&mut rd);
            let pobj = self.c.dot(&x);
            let dobj = b.dot(&y);
            let gap = x.dot(&z);
            let mu = gap / n as f64;
            let p_inf = rp.norm() / (1.0 + b_norm);
            let d_inf = rd.norm() / (1.0 + c_norm);
            let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
            last_gap = rel_gap.max(gap / (1.0 + pobj.abs() + dobj.abs()));

            if p_inf < settings.tolerance && d_inf < settings.tolerance && last_gap < settings.tolerance
            {
                return Ok(SdpSolution {
                    x,
                    y: y.iter().copied().collect(),
                    z,
                    primal_objective: pobj,
                    dual_objective: dobj,
                    primal_infeasibility: p_inf,
                    dual_infeasibility: d_inf,
                    iterations: iteration,
                });
            }

            let z_inv = Cholesky::new(z.clone())
                .ok_or(Error::NonConvergence {
                    iterations: iteration,
                    gap: last_gap,
                })?
                .inverse();
            let schur = Cholesky::new(self.schur(&x, &z_inv)).ok_or(Error::NonConvergence {
                iterations: iteration,
                gap: last_gap,
            })?;

            let x_rd_zinv = &x * &rd * &z_inv;
            let a_zinv = self.apply(&z_inv);
            let base_rhs = &b + self.apply(&x_rd_zinv);

            let direction = |sigma_mu: f64, corr: Option<&DMatrix<f64>>| {
                let mut rhs = &base_rhs - &a_zinv * sigma_mu;
                if let Some(corr) = corr {
                    rhs += self.apply(corr);
                }
                let dy = schur.solve(&rhs);
                let mut dz = &rd - self.adjoint(&dy);
                symmetrize(&mut dz);
                let mut dx = &z_inv * sigma_mu - &x - &x * &dz * &z_inv;
                if let Some(corr) = corr {
                    dx -= corr;
                }
                symmetrize(&mut dx);
                (dx, dy, dz)
            };

            let step = |dx: &DMatrix<f64>, dz: &DMatrix<f64>| -> Option<(f64, f64)> {
                let ap = max_step(&x, dx)?;
                let ad = max_step(&z, dz)?;
                Some((
                    (settings.step_fraction * ap).min(1.0),
                    (settings.step_fraction * ad).min(1.0),
                ))
            };
            let stalled = || Error::NonConvergence {
                iterations: iteration,
                gap: last_gap,
            };

            // predictor
            let (dx_a, _, dz_a) = direction(0.0, None);
            let (ap, ad) = step(&dx_a, &dz_a).ok_or_else(stalled)?;
            let mu_aff = (&x + &dx_a * ap).dot(&(&z + &dz_a * ad)) / n as f64;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

            // corrector
            let corr = &dx_a * &dz_a * &z_inv;
            let (dx, dy, dz) = direction(sigma * mu, Some(&corr));
            let (ap, ad) = step(&dx, &dz).ok_or_else(stalled)?;

            x += &dx * ap;
            symmetrize(&mut x);
            y += &dy * ad;
            z += &dz * ad;
            symmetrize(&mut z);
        }
        Err(Error::NonConvergence {
            iterations: settings.max_iterations,
            gap: last_gap,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_problem() {
        // min x11 + 2 x22  s.t. x11 + x22 = 1  ->  1 at X = diag(1, 0)
        let problem = SdpProblem {
            dim: 2,
            c: DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]),
            constraints: vec![SparseSym::identity(2)],
            b: vec![1.0],
        };
        let sol = problem.solve(&SdpSettings::default()).unwrap();
        assert!((sol.primal_objective - 1.0).abs() < 1e-7);
        assert!((sol.dual_objective - 1.0).abs() < 1e-7);
        assert!((sol.x[(0, 0)] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn coupled_offdiagonal_problem() {
        // min -2 x12  s.t. tr X = 1  ->  -1 (largest eigenvalue of [[0,1],[1,0]])
        let problem = SdpProblem {
            dim: 2,
            c: DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]),
            constraints: vec![SparseSym::identity(2)],
            b: vec![1.0],
        };
        let sol = problem.solve(&SdpSettings::default()).unwrap();
        assert!((sol.primal_objective + 1.0).abs() < 1e-7);
    }

    #[test]
    fn iteration_budget_is_reported() {
        let problem = SdpProblem {
            dim: 2,
            c: DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]),
            constraints: vec![SparseSym::identity(2)],
            b: vec![1.0],
        };
        let settings = SdpSettings {
            max_iterations: 2,
            ..SdpSettings::default()
        };
        assert!(matches!(
            problem.solve(&settings),
            Err(Error::NonConvergence { iterations: 2, .. })
        ));
    }
}
