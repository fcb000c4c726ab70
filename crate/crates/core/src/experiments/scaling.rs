use crate::classical::{farfield_power, DetectorGeometry, DetectorGrid, DEFAULT_RADIUS_FACTOR};
use crate::classical::classical_energy;
use crate::error::{invalid, Error, Result};
use crate::experiments::rng::PhaseRng;
use crate::field::{make_linear_array, BoxVolume, PhaseProfile, PhasedWaveSet, Vec3, WaveMode};
use num_complex::Complex;
use rayon::prelude::*;

/// Least-squares fit of `log E = exponent · log N + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    /// `e^c`.
    pub prefactor: f64,
    pub r_squared: f64,
    pub points: Vec<(usize, f64)>,
}

pub fn fit_power_law(points: &[(usize, f64)]) -> Result<ScalingFit> {
    let mut distinct: Vec<usize> = points.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            found: distinct.len(),
        });
    }
    if points.iter().any(|&(n, e)| n == 0 || !(e > 0.0)) {
        return Err(invalid("power-law fit needs positive N and energies"));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let syy: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        exponent,
        prefactor: intercept.exp(),
        r_squared,
        points: points.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldRegime {
    pub spacing_over_wavelength: f64,
    /// Uniform position jitter along the array axis, as a fraction of the spacing (`< 0.5`).
    pub jitter: f64,
    pub geometry: DetectorGeometry,
    pub samples: usize,
    pub seed: u64,
}

impl FarFieldRegime {
    pub fn new(spacing_over_wavelength: f64) -> Self {
        Self {
            spacing_over_wavelength,
            jitter: 0.0,
            geometry: DetectorGeometry::Arc,
            samples: crate::classical::DEFAULT_ARC_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DickeRegime {
    /// Uniform-phase classical energies `N² E₁`.
    ClosedForm,
    /// Power collected from an in-phase linear array at unit wavelength.
    FarField(FarFieldRegime),
}

/// Fits the growth exponent of the coherent energy with the number of emitters.
pub fn dicke_scaling_check(n_values: &[usize], regime: &DickeRegime) -> Result<ScalingFit> {
    let mut distinct = n_values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            found: distinct.len(),
        });
    }
    if n_values.contains(&0) {
        return Err(invalid("source counts must be positive"));
    }
    let points = match regime {
        DickeRegime::ClosedForm => {
            let mode = WaveMode::plane(Vec3::new(0.0, 0.0, 1.0), Complex::new(1.0, 0.0))?;
            let volume = BoxVolume::cube(1.0)?;
            n_values
                .iter()
                .map(|&n| {
                    let waves = PhasedWaveSet::new(mode, vec![0.0; n])?;
                    Ok((n, classical_energy(&waves, &volume).total))
                })
                .collect::<Result<Vec<_>>>()?
        }
        DickeRegime::FarField(r) => far_field_points(n_values, r)?,
    };
    fit_power_law(&points)
}

fn far_field_points(n_values: &[usize], r: &FarFieldRegime) -> Result<Vec<(usize, f64)>> {
    if !(r.spacing_over_wavelength > 0.0) {
        return Err(invalid("spacing ratio must be positive"));
    }
    if !(0.0..0.5).contains(&r.jitter) {
        return Err(invalid("jitter must lie in [0, 0.5)"));
    }
    let wavelength = 1.0;
    let spacing = r.spacing_over_wavelength * wavelength;
    let mut rng = PhaseRng::new(r.seed);
    let mut arrays = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let base = make_linear_array(n, spacing, wavelength, PhaseProfile::Uniform(0.0))?;
        let offsets: Vec<f64> = (0..n).map(|_| rng.uniform_in(-r.jitter, r.jitter) * spacing).collect();
        arrays.push(if r.jitter > 0.0 { base.displaced_along_x(&offsets)? } else { base });
    }
    // one detector for every N so the collected power shares a normalization
    let reach = arrays
        .iter()
        .map(|a| a.extent().max(a.wavelength()))
        .fold(0.0, f64::max);
    let detector = DetectorGrid::new(
        DEFAULT_RADIUS_FACTOR * reach,
        r.geometry,
        r.samples,
        std::f64::consts::FRAC_PI_2,
    )?;
    let powers: Vec<Result<f64>> = arrays
        .par_iter()
        .map(|a| farfield_power(a, &detector).map(|p| p.power))
        .collect();
    n_values
        .iter()
        .zip(powers)
        .map(|(&n, p)| Ok((n, p?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovered() {
        let pts: Vec<(usize, f64)> = [1, 2, 4, 8].iter().map(|&n| (n, 3.0 * (n as f64).powf(1.5))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_is_quadratic() {
        let fit = dicke_scaling_check(&[1, 2, 4, 8], &DickeRegime::ClosedForm).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            dicke_scaling_check(&[2, 2, 4], &DickeRegime::ClosedForm),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn widely_spaced_arrays_scale_sub_quadratically() {
        let fit = dicke_scaling_check(&[2, 4, 8], &DickeRegime::FarField(FarFieldRegime::new(10.0))).unwrap();
        assert!(fit.exponent < 1.9, "exponent {}", fit.exponent);
    }

    #[test]
    fn jittered_subwavelength_arrays_stay_near_quadratic() {
        let mut r = FarFieldRegime::new(0.01);
        r.jitter = 0.3;
        r.seed = 11;
        let fit = dicke_scaling_check(&[2, 4, 8], &DickeRegime::FarField(r.clone())).unwrap();
        assert!(fit.exponent >= 1.9 && fit.exponent <= 2.0, "exponent {}", fit.exponent);

        // at 0.05 the eight-source array already spans a third of a wavelength
        r.spacing_over_wavelength = 0.05;
        let mid = dicke_scaling_check(&[2, 4, 8], &DickeRegime::FarField(r)).unwrap();
        let wide = dicke_scaling_check(&[2, 4, 8], &DickeRegime::FarField(FarFieldRegime::new(10.0))).unwrap();
        assert!(mid.exponent > wide.exponent && mid.exponent < fit.exponent, "exponent {}", mid.exponent);
    }
}
