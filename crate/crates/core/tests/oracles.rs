use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex;

use interfield::classical::{
    canonical_coordinates, classical_energy, farfield_power, field_energy_grid, field_energy_grid_unadjusted,
    single_wave_energy, transmission_spectrum, DetectorGeometry, DetectorGrid, DEFAULT_RADIUS_FACTOR,
};
use interfield::experiments::{dicke_scaling_check, run_sweep, DickeRegime, Parameter, SweepSpec, Target};
use interfield::field::{make_linear_array, BoxVolume, PhaseProfile, PhasedWaveSet, Vec3, WaveMode, HBAR};
use interfield::multimode::{multimode_energy, overlap_nonzero_condition, ModePair, OverlapRegime};
use interfield::quantum::{
    classical_limit_check, expectation_energy, single_mode_hamiltonian, CommutatorConvention, FockSpace, QuantumState,
};

type Dense = Vec<Vec<Complex<f64>>>;

fn dense_zero(d: usize) -> Dense {
    vec![vec![Complex::new(0.0, 0.0); d]; d]
}

/// Two-mode matrices built from matrix elements: index = n₁·levels + n₂.
fn two_mode_dense(levels: usize, omega: f64, overlap: f64) -> Dense {
    let d = levels * levels;
    let mut h = dense_zero(d);
    for n1 in 0..levels {
        for n2 in 0..levels {
            let i = n1 * levels + n2;
            // oscillators plus the c-number part of the exchange terms
            h[i][i] += Complex::new(HBAR * omega * (n1 as f64 + n2 as f64 + 1.0 + overlap), 0.0);
            // a†₁a₂ |n₁,n₂⟩ = √((n₁+1) n₂) |n₁+1, n₂−1⟩
            if n1 + 1 < levels && n2 > 0 {
                let j = (n1 + 1) * levels + (n2 - 1);
                let v = HBAR * omega * overlap * (((n1 + 1) * n2) as f64).sqrt();
                h[j][i] += Complex::new(v, 0.0);
                h[i][j] += Complex::new(v, 0.0);
            }
        }
    }
    h
}

fn dense_expectation(h: &Dense, v: &[Complex<f64>]) -> f64 {
    let mut acc = Complex::new(0.0, 0.0);
    for (i, row) in h.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            acc += v[i].conj() * x * v[j];
        }
    }
    acc.re
}

fn same_pair(omega: f64) -> ModePair<f64> {
    let m = WaveMode::plane(Vec3::new(0.0, 0.0, omega), Complex::new(1.0, 0.0)).unwrap();
    ModePair::new(m, m, 0.0, 0.0, BoxVolume::cube(1.0).unwrap()).unwrap()
}

#[test]
fn entangled_single_photon_states_match_matrix_oracle() {
    let omega = 1.7;
    let space = FockSpace::new(3, 2).unwrap();
    let h = two_mode_dense(4, omega, 1.0);
    let r = 0.5f64.sqrt();
    for (sign, photon) in [(1.0, 2.0), (-1.0, 0.0)] {
        let st = QuantumState::superposition(
            &space,
            &[(Complex::new(r, 0.0), vec![1, 0]), (Complex::new(sign * r, 0.0), vec![0, 1])],
        )
        .unwrap();
        let report = multimode_energy(&st, &same_pair(omega)).unwrap();
        let oracle = dense_expectation(&h, st.amplitudes());
        assert!((report.total - oracle).abs() < 1e-12);
        assert!((report.photon_total() - photon * HBAR * omega).abs() < 1e-12, "{report:?}");
    }
    // the symmetric state carries 4ħω including zero-point terms
    let plus = QuantumState::superposition(
        &space,
        &[(Complex::new(r, 0.0), vec![1, 0]), (Complex::new(r, 0.0), vec![0, 1])],
    )
    .unwrap();
    assert!((multimode_energy(&plus, &same_pair(omega)).unwrap().total - 4.0 * HBAR * omega).abs() < 1e-12);
}

#[test]
fn vacuum_exchange_term_equals_one_quantum() {
    let space = FockSpace::new(2, 2).unwrap();
    let r = multimode_energy(&QuantumState::vacuum(&space), &same_pair(1.3)).unwrap();
    assert!((r.cross - HBAR * 1.3).abs() < 1e-14);
    assert!(r.photon_cross().abs() < 1e-14);
}

#[test]
fn product_number_states_have_no_photon_exchange() {
    let m1 = WaveMode::plane(Vec3::new(0.0f64, 0.0, 2.0), Complex::new(1.0, 0.0)).unwrap();
    let m2 = WaveMode::plane(Vec3::new(0.4, 0.0, 2.0), Complex::new(1.0, 0.0)).unwrap();
    let pair = ModePair::new(m1, m2, 0.2, 1.0, BoxVolume::cube(1.5).unwrap()).unwrap();
    let space = FockSpace::new(4, 2).unwrap();
    for occ in [[0, 0], [2, 1], [4, 3]] {
        let r = multimode_energy(&QuantumState::fock(&space, &occ).unwrap(), &pair).unwrap();
        assert!(r.photon_cross().abs() < 1e-14);
        let expected = HBAR * m1.omega() * (occ[0] as f64 + 0.5) + HBAR * m2.omega() * (occ[1] as f64 + 0.5);
        assert!((r.diagonal - expected).abs() < 1e-13);
    }
}

#[test]
fn coherent_exchange_matches_analytic_moments() {
    let m1 = WaveMode::plane(Vec3::new(0.0f64, 0.0, 2.0), Complex::new(1.0, 0.0)).unwrap();
    let m2 = WaveMode::plane(Vec3::new(0.9, 0.0, 2.2), Complex::new(1.0, 0.0)).unwrap();
    let pair = ModePair::new(m1, m2, 0.0, 0.0, BoxVolume::centered(Vec3::new(1.2, 1.0, 1.0)).unwrap()).unwrap();
    let overlap = interfield::multimode::overlap_integral(&pair);
    assert!(overlap.im.abs() < 1e-15 && overlap.re > 0.1);
    let (a1, a2) = (Complex::new(0.7, 0.2), Complex::new(-0.3, 0.5));
    let space = FockSpace::new(14, 2).unwrap();
    let st = QuantumState::coherent(&space, &[a1, a2]).unwrap();
    let r = multimode_energy(&st, &pair).unwrap();
    let p = HBAR * (m1.omega() * m2.omega()).sqrt();
    let analytic = 2.0 * p * (a1.conj() * a2 * overlap).re;
    assert!((r.photon_cross() - analytic).abs() < 1e-9, "{} vs {analytic}", r.photon_cross());
}

#[test]
fn coherent_expectation_is_stable_under_doubled_truncation() {
    let phases = [0.0, 0.9, 2.1];
    let alpha = Complex::new(1.2f64, -0.6);
    let at = |n_max: usize| {
        let space = FockSpace::single_mode(n_max).unwrap();
        let st = QuantumState::coherent(&space, &[alpha]).unwrap();
        let h = single_mode_hamiltonian(&phases, 1.0, &space, CommutatorConvention::Canonical).unwrap();
        (expectation_energy(&st, &h).unwrap(), st.tail_mass(), h.norm_inf())
    };
    let (e1, tail, norm) = at(16);
    let (e2, _, _) = at(32);
    assert!((e1 - e2).abs() <= tail * norm + 1e-13);
}

#[test]
fn classical_limit_holds_for_large_occupation() {
    assert!(classical_limit_check(100, &[0.4, 3.0, 5.1]).unwrap() < 1e-10);
    assert!(classical_limit_check(1, &[0.0, 0.0]).unwrap() < 1e-10);
}

#[test]
fn canonical_coordinates_follow_definition() {
    let volume = BoxVolume::cube(2.0).unwrap();
    let s = (volume.volume() / (4.0 * PI)).sqrt();
    let m = WaveMode::plane(Vec3::new(0.0, 0.0, 3.0), Complex::new(1.0, 0.0)).unwrap();
    let c0 = canonical_coordinates(&m, 0.0, Vec3::zero(), &volume).unwrap();
    assert!((c0.q - 2.0 * s).abs() < 1e-14 && c0.p.abs() < 1e-14);
    let c1 = canonical_coordinates(&m, FRAC_PI_2, Vec3::zero(), &volume).unwrap();
    assert!(c1.q.abs() < 1e-14 && (c1.p - 2.0 * 3.0 * s).abs() < 1e-14);

    let a = Complex::new(0.4, -1.1);
    let m = WaveMode::plane(Vec3::new(1.0, -2.0, 0.5), a).unwrap();
    let r = Vec3::new(0.3, 0.8, -1.2);
    let theta = m.k().dot(r) + 0.7;
    let x = a * Complex::cis(theta) + a.conj() * Complex::cis(-theta);
    let y = Complex::new(0.0, -m.omega()) * (a * Complex::cis(theta) - a.conj() * Complex::cis(-theta));
    let c = canonical_coordinates(&m, 0.7, r, &volume).unwrap();
    assert!((c.q - s * x.re).abs() < 1e-13 && x.im.abs() < 1e-15);
    assert!((c.p - s * y.re).abs() < 1e-13 && y.im.abs() < 1e-14);
}

#[test]
fn grid_energy_examples() {
    let m = WaveMode::plane(Vec3::new(2.0 * PI, 0.0, 2.0 * PI), Complex::new(1.0, 0.5)).unwrap();
    let volume = BoxVolume::cube(1.0).unwrap();
    let single = PhasedWaveSet::new(m, vec![0.2]).unwrap();
    let g64 = field_energy_grid(&single, &volume, [64; 3]).unwrap();
    let g32 = field_energy_grid(&single, &volume, [32; 3]).unwrap();
    let e1 = single_wave_energy(&m, &g64.volume);
    assert!((g64.energy - e1).abs() < 1e-6 * e1);
    assert!((g64.energy - g32.energy).abs() < 1e-6 * e1);

    let dark = PhasedWaveSet::new(m, vec![0.0, PI]).unwrap();
    assert!(field_energy_grid(&dark, &volume, [64; 3]).unwrap().energy < 1e-10 * e1);

    let four = PhasedWaveSet::new(m, vec![1.1; 4]).unwrap();
    let g = field_energy_grid(&four, &volume, [64; 3]).unwrap();
    assert!((g.energy - 16.0 * e1).abs() < 1e-6 * 16.0 * e1);
    assert!((g.energy - classical_energy(&four, &g.volume).total).abs() < 1e-6 * g.energy);
}

#[test]
fn non_commensurate_boxes_are_flagged() {
    let m = WaveMode::plane(Vec3::new(0.0, 0.0, 2.0 * PI), Complex::new(1.0, 0.0)).unwrap();
    let w = PhasedWaveSet::new(m, vec![0.0]).unwrap();
    let odd = BoxVolume::cube(1.3).unwrap();
    assert!(!field_energy_grid_unadjusted(&w, &odd, [16; 3]).unwrap().commensurate);
    let g = field_energy_grid(&w, &odd, [16; 3]).unwrap();
    assert!(g.adjusted && g.commensurate);
    assert!(field_energy_grid_unadjusted(&w, &BoxVolume::cube(1.0).unwrap(), [16; 3]).unwrap().commensurate);
}

#[test]
fn classifier_examples() {
    let pair = |dkx: f64| {
        let k1 = Vec3::new(0.0, 0.0, 5.0);
        let m1 = WaveMode::plane(k1, Complex::new(1.0, 0.0)).unwrap();
        let m2 = WaveMode::plane(k1 + Vec3::new(dkx, 0.0, 0.0), Complex::new(1.0, 0.0)).unwrap();
        ModePair::new(m1, m2, 0.0, 0.0, BoxVolume::cube(1.0).unwrap()).unwrap()
    };
    assert_eq!(overlap_nonzero_condition(&pair(0.0)), OverlapRegime::SameMode);
    let small = pair(0.5);
    assert_eq!(overlap_nonzero_condition(&small), OverlapRegime::SmallVolume);
    assert!((interfield::multimode::overlap_integral(&small).norm() - 0.25f64.sin() / 0.25).abs() < 1e-15);
    let far = pair(100.0);
    assert_eq!(overlap_nonzero_condition(&far), OverlapRegime::Vanishing);
    assert!(interfield::multimode::overlap_integral(&far).norm() <= 0.02);
}

/// Power from two in-phase sources on an x–z arc, by composite Simpson's rule
/// on the exact spherical-wave sum.
fn two_source_arc_oracle(spacing: f64, radius: f64, intervals: usize) -> f64 {
    let k = 2.0 * PI;
    let srcs = [-spacing / 2.0, spacing / 2.0];
    let intensity = |theta: f64, xs: &[f64]| -> f64 {
        let obs = (radius * theta.sin(), radius * theta.cos());
        let f: Complex<f64> = xs
            .iter()
            .map(|&x| {
                let d = ((obs.0 - x).powi(2) + obs.1.powi(2)).sqrt();
                Complex::cis(k * d) / d
            })
            .sum();
        f.norm_sqr() * radius
    };
    let simpson = |xs: &[f64]| {
        let h = PI / intervals as f64;
        let mut acc = intensity(-FRAC_PI_2, xs) + intensity(FRAC_PI_2, xs);
        for i in 1..intervals {
            acc += intensity(-FRAC_PI_2 + i as f64 * h, xs) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    simpson(&srcs) / (2.0 * simpson(&[0.0]))
}

#[test]
fn two_widely_spaced_sources_add_inefficiently() {
    let a = make_linear_array(2, 5.0f64, 1.0, PhaseProfile::Uniform(0.0)).unwrap();
    let radius = DEFAULT_RADIUS_FACTOR * 5.0;
    let p = farfield_power(&a, &DetectorGrid::arc(radius, 2048).unwrap()).unwrap();
    let oracle = two_source_arc_oracle(5.0, radius, 20_000);
    // paraxial limit: 1 + J₀(kΛ) with kΛ = 10π
    let paraxial = 1.100_250_994_573_006_1;
    assert!((p.enhancement - oracle).abs() < 1e-6, "{} vs {oracle}", p.enhancement);
    assert!((oracle - paraxial).abs() < 1e-3);
    assert!(p.enhancement > 0.0 && p.enhancement < 2.0);
    assert!((p.enhancement - 1.100_25).abs() < 1e-3);
}

/// `J₀(x) = (1/π) ∫₀^π cos(x sin t) dt` by Simpson's rule.
fn bessel_j0(x: f64) -> f64 {
    let m = 2000;
    let h = PI / m as f64;
    let f = |t: f64| (x * t.sin()).cos();
    let mut acc = f(0.0) + f(PI);
    for i in 1..m {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0 / PI
}

/// Far-field enhancement of `n` in-phase sources on a line, from pair sums of
/// the angular average of `cos(k d cos ψ)`: `J₀` on an arc through the axis,
/// `sinc` over a hemisphere.
fn pair_sum_enhancement(n: usize, spacing: f64, wavelength: f64, kernel: impl Fn(f64) -> f64) -> f64 {
    let k = 2.0 * PI / wavelength;
    let pairs: f64 = (1..n).map(|j| (n - j) as f64 * kernel(k * spacing * j as f64)).sum();
    1.0 + 2.0 * pairs / n as f64
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

#[test]
fn enhancement_approaches_source_count_as_spacing_shrinks() {
    let n = 6;
    let mut values = Vec::new();
    for ratio in [1.0, 0.5, 0.1, 0.01] {
        let a = make_linear_array(n, ratio, 1.0f64, PhaseProfile::Uniform(0.0)).unwrap();
        let d = DetectorGrid::new(
            DEFAULT_RADIUS_FACTOR * a.extent().max(1.0),
            DetectorGeometry::Hemisphere,
            256,
            FRAC_PI_2,
        )
        .unwrap();
        let e = farfield_power(&a, &d).unwrap().enhancement;
        let oracle = pair_sum_enhancement(n, ratio, 1.0, sinc);
        assert!((e - oracle).abs() < 2e-3 * oracle, "ratio {ratio}: {e} vs {oracle}");
        assert!(e <= n as f64 + 1e-9);
        values.push(e);
    }
    // Λ = λ and Λ = λ/2 both sit on sinc zeros, so the first step is flat
    assert!((values[0] - 1.0).abs() < 2e-3 && (values[1] - 1.0).abs() < 2e-3);
    assert!(values[2] > values[1] && values[3] > values[2]);
    assert!(values[3] > 0.95 * n as f64);
}

#[test]
fn hemisphere_detector_sees_coherent_addition() {
    let a = make_linear_array(10, 0.01f64, 1.0, PhaseProfile::Uniform(0.0)).unwrap();
    let d = DetectorGrid::new(1000.0, DetectorGeometry::Hemisphere, 128, FRAC_PI_2).unwrap();
    let e = farfield_power(&a, &d).unwrap().enhancement;
    assert!((9.5..=10.0).contains(&e), "{e}");
}

#[test]
fn detector_sample_doubling_converges() {
    let cases: [(usize, f64, f64); 4] = [(10, 0.01, 1.0), (5, 2.0, 0.7), (5, 2.0, 3.3), (2, 5.0, 1.0)];
    for (n, spacing, wavelength) in cases {
        let a = make_linear_array(n, spacing, wavelength, PhaseProfile::Uniform(0.0)).unwrap();
        let d = DetectorGrid::arc(DEFAULT_RADIUS_FACTOR * a.extent().max(wavelength), 2048).unwrap();
        let p1 = farfield_power(&a, &d).unwrap().power;
        let p2 = farfield_power(&a, &d.with_samples(4096).unwrap()).unwrap().power;
        assert!((p1 - p2).abs() < 1e-4 * p2, "{n} {spacing} {wavelength}: {p1} {p2}");
    }
}

#[test]
fn dense_subwavelength_spectrum_follows_pair_sums() {
    let a = make_linear_array(5, 0.1f64, 1.0, PhaseProfile::Uniform(0.0)).unwrap();
    let d = DetectorGrid::arc(DEFAULT_RADIUS_FACTOR * 2.0, 2048).unwrap();
    let c = transmission_spectrum(&a, (1.0, 2.0), 40, &d).unwrap();
    for (l, e) in c.parameters.iter().zip(&c.enhancement) {
        let oracle = pair_sum_enhancement(5, 0.1, *l, bessel_j0);
        assert!((e - oracle).abs() < 2e-3 * oracle, "lambda {l}: {e} vs {oracle}");
    }
    assert!(c.enhancement.windows(2).all(|w| w[1] > w[0]));
    assert!(*c.enhancement.last().unwrap() >= 4.5);

    let h = DetectorGrid::new(DEFAULT_RADIUS_FACTOR, DetectorGeometry::Hemisphere, 256, FRAC_PI_2).unwrap();
    let e = farfield_power(&a, &h).unwrap().enhancement;
    let oracle = pair_sum_enhancement(5, 0.1, 1.0, sinc);
    assert!((e - oracle).abs() < 2e-3 * oracle, "{e} vs {oracle}");
}

#[test]
fn closed_form_dicke_exponent_is_two() {
    let fit = dicke_scaling_check(&[1, 2, 4, 8], &DickeRegime::ClosedForm).unwrap();
    assert!((fit.exponent - 2.0).abs() < 1e-12);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
}

#[test]
fn source_count_sweep_grows_monotonically() {
    let c = run_sweep(
        &SweepSpec::new(Target::FarfieldPower, Parameter::SourceCount, 1.0, 8.0, 8)
            .with("spacing", 0.01)
            .with("wavelength", 1.0),
    )
    .unwrap();
    assert_eq!(c.parameters, (1..=8).map(f64::from).collect::<Vec<_>>());
    assert!(c.enhancement.windows(2).all(|w| w[1] > w[0]), "{:?}", c.enhancement);
}
