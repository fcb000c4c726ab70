use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::quantum::operator::Operator;
use crate::scalar::Real;

/// Largest product-basis dimension accepted.
pub const MAX_DIMENSION: usize = 1_000_000;

/// Truncation level used when none is given.
pub const DEFAULT_N_MAX: usize = 32;

/// Product of `mode_count` Fock ladders truncated at `n_max` photons each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    n_max: usize,
    mode_count: usize,
    dimension: usize,
}

impl FockSpace {
    pub fn new(n_max: usize, mode_count: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(invalid("n_max must be at least 1"));
        }
        if mode_count < 1 {
            return Err(invalid("a Fock space needs at least one mode"));
        }
        let levels = n_max + 1;
        let mut dimension = 1usize;
        for _ in 0..mode_count {
            dimension = dimension.checked_mul(levels).filter(|&d| d <= MAX_DIMENSION).ok_or(
                Error::DimensionOverflow {
                    dimension: levels.saturating_pow(mode_count as u32),
                    limit: MAX_DIMENSION,
                },
            )?;
        }
        Ok(Self {
            n_max,
            mode_count,
            dimension,
        })
    }

    pub fn single_mode(n_max: usize) -> Result<Self> {
        Self::new(n_max, 1)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Basis index of an occupation tuple; mode 0 is the slowest index.
    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                expected: self.mode_count,
                found: occupations.len(),
            });
        }
        let mut idx = 0;
        for &n in occupations {
            if n > self.n_max {
                return Err(invalid(format!(
                    "occupation {n} exceeds truncation {}",
                    self.n_max
                )));
            }
            idx = idx * self.levels() + n;
        }
        Ok(idx)
    }

    pub fn occupations_of(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.mode_count];
        for slot in occ.iter_mut().rev() {
            *slot = index % self.levels();
            index /= self.levels();
        }
        occ
    }

    /// True when no mode of basis state `index` sits on the truncation edge.
    pub fn below_edge(&self, index: usize) -> bool {
        self.occupations_of(index).iter().all(|&n| n < self.n_max)
    }
}

/// Ladder and number operators of one mode, embedded in the full space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperators<T> {
    pub create: Operator<T>,
    pub destroy: Operator<T>,
    pub number: Operator<T>,
}

/// Single-ladder destruction operator `a|n⟩ = √n |n−1⟩` on `levels` states.
pub fn ladder_destroy<T: Real>(levels: usize) -> Operator<T> {
    Operator::from_triplets(
        levels,
        (1..levels).map(|n| (n - 1, n, Complex::new(T::from_count(n).sqrt(), T::zero()))),
    )
}

pub fn build_operators<T: Real>(space: &FockSpace, mode_index: usize) -> Result<ModeOperators<T>> {
    if mode_index >= space.mode_count() {
        return Err(invalid(format!(
            "mode index {mode_index} out of range for {} modes",
            space.mode_count()
        )));
    }
    let levels = space.levels();
    let before = Operator::identity(levels.pow(mode_index as u32));
    let after = Operator::identity(levels.pow((space.mode_count() - mode_index - 1) as u32));
    let destroy = before.kron(&ladder_destroy(levels)).kron(&after);
    let create = destroy.adjoint();
    let number = create.matmul(&destroy);
    Ok(ModeOperators {
        create,
        destroy,
        number,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_ladder() {
        let s = FockSpace::single_mode(1).unwrap();
        let ops = build_operators::<f64>(&s, 0).unwrap();
        let d = ops.destroy.to_dense();
        assert_eq!(d[0][1], Complex::new(1.0, 0.0));
        assert_eq!(d[0][0], Complex::new(0.0, 0.0));
        assert_eq!(d[1][0], Complex::new(0.0, 0.0));
        assert_eq!(d[1][1], Complex::new(0.0, 0.0));
    }

    #[test]
    fn number_operator_diagonal() {
        let s = FockSpace::single_mode(7).unwrap();
        let ops = build_operators::<f64>(&s, 0).unwrap();
        for n in 0..=7 {
            assert!((ops.number.get(n, n).re - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn commutator_is_identity_below_truncation_edge() {
        let s = FockSpace::single_mode(6).unwrap();
        let ops = build_operators::<f64>(&s, 0).unwrap();
        let comm = ops.destroy.matmul(&ops.create).sub(&ops.create.matmul(&ops.destroy));
        let dense = comm.to_dense();
        for (i, row) in dense.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                let expected = if i == j && i < 6 { 1.0 } else { 0.0 };
                if i == 6 && j == 6 {
                    assert!((entry.re + 6.0).abs() < 1e-12);
                } else {
                    assert!((entry - Complex::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn embedded_operators_act_on_their_mode() {
        let s = FockSpace::new(2, 2).unwrap();
        let m1 = build_operators::<f64>(&s, 1).unwrap();
        for idx in 0..s.dimension() {
            let occ = s.occupations_of(idx);
            assert_eq!(s.index_of(&occ).unwrap(), idx);
            assert!((m1.number.get(idx, idx).re - occ[1] as f64).abs() < 1e-12);
        }
        assert!(build_operators::<f64>(&s, 2).is_err());
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            FockSpace::new(32, 4),
            Err(Error::DimensionOverflow { .. })
        ));
        assert!(FockSpace::new(0, 1).is_err());
        assert_eq!(FockSpace::new(9, 6).unwrap().dimension(), 1_000_000);
    }
}
