//! Explicit finite-volume integration of the phase-space transport equation
//! with the extracted drift and diffusion coefficients.
//!
//! All first-order terms are discretized as face fluxes with zero flux
//! through the outer faces, so the discrete mass is conserved identically;
//! advective faces use an upwind-biased third-order reconstruction, the
//! diffusive faces central differences, and time stepping is classical
//! four-stage Runge-Kutta.

use rayon::prelude::*;

use crate::model::{thermal_wavelength, SimParams};
use crate::oracle::{extract_coefficients, PhaseSpaceGrid};
use crate::{require, require_time, Error, Result};

const MASS_TOL: f64 = 1e-6;
const SNAPSHOTS: usize = 5;
const ADVECTION_SAFETY: f64 = 0.8;
const DIFFUSION_SAFETY: f64 = 0.4;

/// Snapshot sequence; `times[0] = 0` holds the initial field and the last
/// entry is t_end.
#[derive(Debug, Clone)]
pub struct FpTrajectory {
    pub times: Vec<f64>,
    pub frames: Vec<PhaseSpaceGrid>,
}

struct Stencil {
    nq: usize,
    np: usize,
    dq: f64,
    dp: f64,
    q_min: f64,
    p_min: f64,
    inv_m: f64,
    m_omega2: f64,
    two_gamma: f64,
    d_pp: f64,
    d_qp: f64,
}

impl Stencil {
    /// Advective flux through the q-face between cells i_left and i_left+1
    /// at fixed j; outer faces carry none.
    fn q_flux(&self, w: &[f64], i_left: isize, j: usize, u: f64) -> f64 {
        if i_left < 0 || i_left + 1 > self.nq as isize - 1 {
            return 0.0;
        }
        let a = i_left as usize;
        let b = a + 1;
        let get = |ii: usize| w[ii * self.np + j];
        let face = if u >= 0.0 {
            if a >= 1 {
                (-get(a - 1) + 5.0 * get(a) + 2.0 * get(b)) / 6.0
            } else {
                get(a)
            }
        } else if b < self.nq - 1 {
            (2.0 * get(a) + 5.0 * get(b) - get(b + 1)) / 6.0
        } else {
            get(b)
        };
        u * face
    }

    /// Advective plus diffusive flux through the p-face between cells j_left
    /// and j_left+1 of one q-row.
    fn p_flux(&self, row: &[f64], j_left: isize, q: f64) -> f64 {
        if j_left < 0 || j_left + 1 > self.np as isize - 1 {
            return 0.0;
        }
        let a = j_left as usize;
        let b = a + 1;
        let p_face = self.p_min + (a as f64 + 0.5) * self.dp;
        let v = -(self.m_omega2 * q + self.two_gamma * p_face);
        let face = if v >= 0.0 {
            if a >= 1 {
                (-row[a - 1] + 5.0 * row[a] + 2.0 * row[b]) / 6.0
            } else {
                row[a]
            }
        } else if b < self.np - 1 {
            (2.0 * row[a] + 5.0 * row[b] - row[b + 1]) / 6.0
        } else {
            row[b]
        };
        v * face - self.d_pp * (row[b] - row[a]) / self.dp
    }

    /// Cross-diffusion flux −d_qp ∂W/∂p through a q-face.
    fn cross_flux(&self, w: &[f64], i_left: isize, j: usize) -> f64 {
        if i_left < 0 || i_left + 1 > self.nq as isize - 1 {
            return 0.0;
        }
        let a = i_left as usize;
        let b = a + 1;
        let get = |ii: usize, jj: isize| -> f64 {
            if jj < 0 || jj > self.np as isize - 1 {
                0.0
            } else {
                w[ii * self.np + jj as usize]
            }
        };
        let j = j as isize;
        let dwdp =
            (get(a, j + 1) + get(b, j + 1) - get(a, j - 1) - get(b, j - 1)) / (4.0 * self.dp);
        -self.d_qp * dwdp
    }

    fn rhs(&self, w: &[f64], out: &mut [f64]) {
        let with_cross = self.d_qp != 0.0;
        out.par_chunks_mut(self.np).enumerate().for_each(|(i, orow)| {
            let q = self.q_min + i as f64 * self.dq;
            let row = &w[i * self.np..(i + 1) * self.np];
            let i = i as isize;
            for (j, slot) in orow.iter_mut().enumerate() {
                let u = (self.p_min + j as f64 * self.dp) * self.inv_m;
                let mut fq_hi = self.q_flux(w, i, j, u);
                let mut fq_lo = self.q_flux(w, i - 1, j, u);
                if with_cross {
                    fq_hi += self.cross_flux(w, i, j);
                    fq_lo += self.cross_flux(w, i - 1, j);
                }
                let fp_hi = self.p_flux(row, j as isize, q);
                let fp_lo = self.p_flux(row, j as isize - 1, q);
                *slot = -(fq_hi - fq_lo) / self.dq - (fp_hi - fp_lo) / self.dp;
            }
        });
    }
}

fn blend(out: &mut [f64], base: &[f64], k: &[f64], c: f64) {
    for ((o, b), kk) in out.iter_mut().zip(base).zip(k) {
        *o = b + c * kk;
    }
}

/// Integrates the transport equation from the supplied post-squeeze initial
/// field to t_end.  `dt = 0` selects the stability limit; an explicit dt
/// above that limit is rejected.
pub fn fokker_planck_integrate(
    initial: &PhaseSpaceGrid,
    params: &SimParams,
    t_end: f64,
    dt: f64,
) -> Result<FpTrajectory> {
    require_time(t_end)?;
    require(
        dt >= 0.0 && dt.is_finite(),
        "dt",
        dt,
        "must be finite and >= 0 (0 selects the stability limit)",
    )?;
    if initial.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    if t_end == 0.0 {
        return Ok(FpTrajectory {
            times: vec![0.0],
            frames: vec![initial.clone()],
        });
    }

    let lam = thermal_wavelength(params);
    let coef = extract_coefficients(0.0, params, (lam / 4.0, lam / 2.0))?;
    let stencil = Stencil {
        nq: initial.nq,
        np: initial.np,
        dq: initial.dq(),
        dp: initial.dp(),
        q_min: initial.q_min,
        p_min: initial.p_min,
        inv_m: 1.0 / params.m,
        m_omega2: params.m * coef.omega2,
        two_gamma: 2.0 * coef.gamma_coeff,
        d_pp: coef.d_pp,
        d_qp: coef.d_qp,
    };

    let u_max = initial.p_min.abs().max(initial.p_max.abs()) / params.m;
    let mut v_max = 0.0f64;
    for q in [initial.q_min, initial.q_max] {
        for p in [initial.p_min, initial.p_max] {
            v_max = v_max.max((stencil.m_omega2 * q + stencil.two_gamma * p).abs());
        }
    }
    let mut limit = f64::INFINITY;
    let mut term = "advection-q";
    for (cand, name) in [
        (ADVECTION_SAFETY * stencil.dq / u_max, "advection-q"),
        (ADVECTION_SAFETY * stencil.dp / v_max, "advection-p"),
        (
            DIFFUSION_SAFETY * stencil.dp * stencil.dp / stencil.d_pp,
            "diffusion-pp",
        ),
    ] {
        if cand.is_finite() && cand > 0.0 && cand < limit {
            limit = cand;
            term = name;
        }
    }
    let step = if dt == 0.0 {
        if limit.is_finite() {
            limit
        } else {
            t_end
        }
    } else {
        if dt > limit {
            return Err(Error::CflViolation { dt, limit, term });
        }
        dt
    };
    let steps = (t_end / step).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;

    let cells = initial.nq * initial.np;
    let mut w = initial.values.clone();
    let mut k1 = vec![0.0; cells];
    let mut k2 = vec![0.0; cells];
    let mut k3 = vec![0.0; cells];
    let mut k4 = vec![0.0; cells];
    let mut tmp = vec![0.0; cells];

    let mass0: f64 = w.iter().sum();
    let mut traj = FpTrajectory {
        times: vec![0.0],
        frames: vec![initial.clone()],
    };
    let mut snap_at: Vec<usize> = (1..SNAPSHOTS).map(|s| s * steps / (SNAPSHOTS - 1)).collect();
    snap_at.dedup();

    for n in 1..=steps {
        stencil.rhs(&w, &mut k1);
        blend(&mut tmp, &w, &k1, h / 2.0);
        stencil.rhs(&tmp, &mut k2);
        blend(&mut tmp, &w, &k2, h / 2.0);
        stencil.rhs(&tmp, &mut k3);
        blend(&mut tmp, &w, &k3, h);
        stencil.rhs(&tmp, &mut k4);
        for idx in 0..cells {
            w[idx] += h / 6.0 * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }

        let mass: f64 = w.iter().sum();
        if !mass.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        if snap_at.contains(&n) {
            traj.times.push(n as f64 * h);
            traj.frames.push(PhaseSpaceGrid {
                values: w.clone(),
                ..initial.clone()
            });
        }
    }

    let mass_end: f64 = w.iter().sum();
    let drift = (mass_end - mass0).abs() * stencil.dq * stencil.dp;
    if drift > MASS_TOL {
        return Err(Error::MassDrift {
            drift,
            tol: MASS_TOL,
        });
    }
    Ok(traj)
}
