use num_complex::Complex;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::quantum::space::FockSpace;
use crate::scalar::Real;

/// Coherent states are accepted only when the discarded Poisson tail is below this.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind<T> {
    FockProduct(Vec<usize>),
    CoherentProduct(Vec<Complex<T>>),
    Superposition(Vec<(Complex<T>, Vec<usize>)>),
}

/// Normalized state vector on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    space: FockSpace,
    kind: StateKind<T>,
    amplitudes: Vec<Complex<T>>,
    tail_mass: T,
}

impl<T: Real> QuantumState<T> {
    pub fn fock(space: &FockSpace, occupations: &[usize]) -> Result<Self> {
        let idx = space.index_of(occupations)?;
        let mut amplitudes = vec![Complex::zero(); space.dimension()];
        amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(Self {
            space: *space,
            kind: StateKind::FockProduct(occupations.to_vec()),
            amplitudes,
            tail_mass: T::zero(),
        })
    }

    pub fn vacuum(space: &FockSpace) -> Self {
        Self::fock(space, &vec![0; space.mode_count()]).expect("vacuum is always representable")
    }

    /// Product of truncated, renormalized coherent states `|α₁⟩⊗|α₂⟩⊗…`.
    pub fn coherent(space: &FockSpace, alphas: &[Complex<T>]) -> Result<Self> {
        if alphas.len() != space.mode_count() {
            return Err(Error::ModeCountMismatch {
                expected: space.mode_count(),
                found: alphas.len(),
            });
        }
        let mut kept = T::one();
        let mut amplitudes = vec![Complex::new(T::one(), T::zero())];
        for &alpha in alphas {
            let (coeffs, tail) = truncated_coherent(alpha, space.n_max());
            kept *= T::one() - tail;
            let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
            let mut next = Vec::with_capacity(amplitudes.len() * coeffs.len());
            for a in &amplitudes {
                for c in &coeffs {
                    next.push(*a * *c / norm);
                }
            }
            amplitudes = next;
        }
        let tail_mass = T::one() - kept;
        if tail_mass > T::lit(COHERENT_TAIL_LIMIT) {
            return Err(Error::TruncationTail {
                tail: tail_mass.to_f64().unwrap_or(f64::NAN),
                limit: COHERENT_TAIL_LIMIT,
            });
        }
        Ok(Self {
            space: *space,
            kind: StateKind::CoherentProduct(alphas.to_vec()),
            amplitudes,
            tail_mass,
        })
    }

    /// Normalized `Σ cᵢ |occupationsᵢ⟩`; repeated basis states add.
    pub fn superposition(space: &FockSpace, terms: &[(Complex<T>, Vec<usize>)]) -> Result<Self> {
        let mut amplitudes = vec![Complex::zero(); space.dimension()];
        for (c, occ) in terms {
            amplitudes[space.index_of(occ)?] = amplitudes[space.index_of(occ)?] + *c;
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(invalid("superposition has zero norm"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            space: *space,
            kind: StateKind::Superposition(terms.to_vec()),
            amplitudes,
            tail_mass: T::zero(),
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn kind(&self) -> &StateKind<T> {
        &self.kind
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Probability mass discarded by truncation before renormalization.
    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }
}

/// Coefficients `e^{−|α|²/2} αⁿ/√n!` for `n ≤ n_max` and the exact tail mass beyond.
fn truncated_coherent<T: Real>(alpha: Complex<T>, n_max: usize) -> (Vec<Complex<T>>, T) {
    let mut c = Complex::new((-alpha.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(c);
    for n in 1..=n_max {
        c = c * alpha / T::from_count(n).sqrt();
        coeffs.push(c);
    }
    // Poisson tail: keep summing until terms stop contributing
    let mut p = c.norm_sqr();
    let mean = alpha.norm_sqr();
    let mut tail = T::zero();
    let mut n = n_max;
    loop {
        n += 1;
        p = p * mean / T::from_count(n);
        tail += p;
        if p <= tail * T::epsilon() || p == T::zero() || n > n_max + 10_000 {
            break;
        }
    }
    (coeffs, tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_states_are_normalized() {
        let s = FockSpace::new(12, 2).unwrap();
        let f = QuantumState::<f64>::fock(&s, &[3, 1]).unwrap();
        assert!((f.norm() - 1.0).abs() < 1e-12);
        let c = QuantumState::coherent(&s, &[Complex::new(0.8f64, 0.3), Complex::new(-0.5, 0.0)]).unwrap();
        assert!((c.norm() - 1.0).abs() < 1e-12);
        let sp = QuantumState::superposition(
            &s,
            &[(Complex::new(1.0f64, 0.0), vec![1, 0]), (Complex::new(0.0, 2.0), vec![0, 1])],
        )
        .unwrap();
        assert!((sp.norm() - 1.0).abs() < 1e-12);
        assert!((sp.amplitudes()[s.index_of(&[0, 1]).unwrap()].im - 2.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn coherent_tail_limit() {
        let s = FockSpace::single_mode(32).unwrap();
        let ok = QuantumState::coherent(&s, &[Complex::new(10f64.sqrt(), 0.0)]).unwrap();
        assert!(ok.tail_mass() < COHERENT_TAIL_LIMIT && ok.tail_mass() > 0.0);
        let err = QuantumState::coherent(&s, &[Complex::new(4.0, 0.0)]);
        assert!(matches!(err, Err(Error::TruncationTail { .. })));
    }

    #[test]
    fn tail_matches_poisson_complement() {
        // Poisson(1) mass beyond n = 3 is 1 − e^{-1}(1 + 1 + 1/2 + 1/6)
        let (_, tail) = truncated_coherent(Complex::new(1.0f64, 0.0), 3);
        let expected = 1.0 - (-1.0f64).exp() * (1.0 + 1.0 + 0.5 + 1.0 / 6.0);
        assert!((tail - expected).abs() < 1e-15);
    }

    #[test]
    fn invalid_states_rejected() {
        let s = FockSpace::single_mode(3).unwrap();
        assert!(QuantumState::<f64>::fock(&s, &[4]).is_err());
        assert!(QuantumState::<f64>::fock(&s, &[1, 1]).is_err());
        assert!(QuantumState::<f64>::superposition(&s, &[(Complex::new(0.0, 0.0), vec![1])]).is_err());
        assert!(QuantumState::<f64>::coherent(&s, &[]).is_err());
    }
}
