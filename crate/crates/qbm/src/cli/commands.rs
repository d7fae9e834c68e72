//! CSV-emitting subcommands.

use std::str::FromStr;

use rayon::prelude::*;

use crate::cat::{attenuation, interference_measure, CatInit};
use crate::densmat::{negativity_witness, purity};
use crate::gaussian::{second_moments, GaussianInit, Prep};
use crate::model::{fluctuation_moments, thermal_wavelength};
use crate::{Error, Result};

use super::{render_csv, time_grid, ScenarioConfig};

fn scan_rows(
    cfg: &ScenarioConfig,
    row: impl Fn(f64) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<Vec<f64>>> {
    time_grid(cfg).par_iter().map(|&t| row(t)).collect()
}

/// Interference attenuation of a split packet for both preparations, scaled
/// by lambda^2/d^2 so the bath-preparation row starts at 0.4 when sigma is a
/// quarter thermal wavelength.
pub fn cmd_fig1(cfg: &ScenarioConfig) -> Result<String> {
    crate::require(cfg.d > 0.0, "d", cfg.d, "fig1 needs a positive separation")?;
    let lam = thermal_wavelength(&cfg.params);
    let scale = lam * lam / (cfg.d * cfg.d);
    let zero = CatInit::new(cfg.d, cfg.sigma, Prep::ZeroTemp)?;
    let bath = CatInit::new(cfg.d, cfg.sigma, Prep::BathTemp)?;
    let rows = scan_rows(cfg, |t| {
        Ok(vec![
            cfg.params.gamma * t,
            interference_measure(t, &cfg.params, &zero)?.a_of_t * scale,
            interference_measure(t, &cfg.params, &bath)?.a_of_t * scale,
        ])
    })?;
    Ok(render_csv(
        &["gamma_t", "A0_scaled_eq4.5", "AT_scaled_eq4.15"],
        &rows,
    ))
}

/// Purity of a single packet; starts at 1 and transiently exceeds it for
/// sigma below half a thermal wavelength.
pub fn cmd_fig2(cfg: &ScenarioConfig) -> Result<String> {
    let init = GaussianInit::new(cfg.x0, cfg.sigma, cfg.prep)?;
    let rows = scan_rows(cfg, |t| {
        Ok(vec![cfg.params.gamma * t, purity(t, &cfg.params, &init)?])
    })?;
    Ok(render_csv(&["gamma_t", "purity_eq5.9"], &rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanQuantity {
    Moments,
    SecondMoments,
    Interference,
    Attenuation,
    Purity,
    Witness,
}

impl FromStr for ScanQuantity {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        match raw {
            "moments" => Ok(Self::Moments),
            "second-moments" => Ok(Self::SecondMoments),
            "interference" => Ok(Self::Interference),
            "attenuation" => Ok(Self::Attenuation),
            "purity" => Ok(Self::Purity),
            "witness" => Ok(Self::Witness),
            other => Err(Error::Config(format!(
                "unknown quantity `{other}`; expected moments, second-moments, \
                 interference, attenuation, purity or witness"
            ))),
        }
    }
}

/// Tabulates one quantity over the configured time grid.  Column headers
/// carry the tag matching the preparation, see [`super::COLUMN_MANIFEST`].
pub fn cmd_scan(cfg: &ScenarioConfig, quantity: ScanQuantity) -> Result<String> {
    let g = cfg.params.gamma;
    match quantity {
        ScanQuantity::Moments => {
            let rows = scan_rows(cfg, |t| {
                let m = fluctuation_moments(t, &cfg.params)?;
                Ok(vec![g * t, m.x2, m.xxd, m.xd2])
            })?;
            Ok(render_csv(
                &["gamma_t", "x2_eq2.6", "xxdot_eq2.6", "xdot2_eq2.6"],
                &rows,
            ))
        }
        ScanQuantity::SecondMoments => {
            let init = GaussianInit::new(cfg.x0, cfg.sigma, cfg.prep)?;
            let rows = scan_rows(cfg, |t| {
                let a = second_moments(t, &cfg.params, &init)?;
                Ok(vec![g * t, a.a11, a.a12, a.a22])
            })?;
            let headers = match cfg.prep {
                Prep::ZeroTemp => ["gamma_t", "A11_eq3.5", "A12_eq3.5", "A22_eq3.5"],
                Prep::BathTemp => ["gamma_t", "A11_eq3.16", "A12_eq3.16", "A22_eq3.16"],
            };
            Ok(render_csv(&headers, &rows))
        }
        ScanQuantity::Interference => {
            crate::require(cfg.d > 0.0, "d", cfg.d, "interference needs a positive separation")?;
            let lam = thermal_wavelength(&cfg.params);
            let scale = lam * lam / (cfg.d * cfg.d);
            let init = CatInit::new(cfg.d, cfg.sigma, cfg.prep)?;
            let rows = scan_rows(cfg, |t| {
                Ok(vec![
                    g * t,
                    interference_measure(t, &cfg.params, &init)?.a_of_t * scale,
                ])
            })?;
            let headers = match cfg.prep {
                Prep::ZeroTemp => ["gamma_t", "A_scaled_eq4.5"],
                Prep::BathTemp => ["gamma_t", "A_scaled_eq4.15"],
            };
            Ok(render_csv(&headers, &rows))
        }
        ScanQuantity::Attenuation => {
            let init = CatInit::new(cfg.d, cfg.sigma, cfg.prep)?;
            let rows = scan_rows(cfg, |t| {
                Ok(vec![g * t, attenuation(t, &cfg.params, &init)?])
            })?;
            let headers = match cfg.prep {
                Prep::ZeroTemp => ["gamma_t", "attenuation_eq4.12"],
                Prep::BathTemp => ["gamma_t", "attenuation_eq4.17"],
            };
            Ok(render_csv(&headers, &rows))
        }
        ScanQuantity::Purity => {
            let init = GaussianInit::new(cfg.x0, cfg.sigma, cfg.prep)?;
            let rows = scan_rows(cfg, |t| {
                Ok(vec![g * t, purity(t, &cfg.params, &init)?])
            })?;
            Ok(render_csv(&["gamma_t", "purity_eq5.9"], &rows))
        }
        ScanQuantity::Witness => {
            let rows = scan_rows(cfg, |t| {
                Ok(vec![
                    g * t,
                    negativity_witness(t, &cfg.params, cfg.sigma, cfg.prep)?,
                ])
            })?;
            Ok(render_csv(&["gamma_t", "witness_eq5.13"], &rows))
        }
    }
}
