use crate::classical::SpectrumCurve;
use crate::scalar::Real;

/// A peak must exceed this multiple of the curve's global minimum.
pub const RESONANCE_PROMINENCE: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance<T> {
    pub parameter: T,
    pub enhancement: T,
}

/// Interior local maxima of the enhancement curve that stand above both
/// neighbours and above `RESONANCE_PROMINENCE × min`. A flat-topped peak is
/// reported at its smallest parameter.
pub fn find_resonances<T: Real>(curve: &SpectrumCurve<T>) -> Vec<Resonance<T>> {
    let y = &curve.enhancement;
    if y.len() < 3 {
        return Vec::new();
    }
    let floor = y.iter().copied().fold(T::infinity(), T::min) * T::lit(RESONANCE_PROMINENCE);
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < y.len() {
        if y[i] > y[i - 1] {
            let mut j = i;
            while j + 1 < y.len() && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < y.len() && y[j + 1] < y[i] && y[i] > floor {
                out.push(Resonance {
                    parameter: curve.parameters[i],
                    enhancement: y[i],
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::linspace;
    use std::f64::consts::PI;

    fn curve(y: Vec<f64>) -> SpectrumCurve<f64> {
        let x = (0..y.len()).map(|i| i as f64).collect();
        SpectrumCurve::new("x", x, vec![0.0; y.len()], y).unwrap()
    }

    #[test]
    fn monotone_curve_has_no_resonances() {
        assert!(find_resonances(&curve((0..20).map(|i| i as f64).collect())).is_empty());
        assert!(find_resonances(&curve((0..20).map(|i| -(i as f64)).collect())).is_empty());
    }

    #[test]
    fn cosine_period_has_single_peak_at_maximum() {
        let x = linspace(-PI, PI, 41);
        let y: Vec<f64> = x.iter().map(|t| 2.0 + 2.0 * t.cos()).collect();
        let c = SpectrumCurve::new("phase", x, vec![0.0; 41], y).unwrap();
        let r = find_resonances(&c);
        assert_eq!(r.len(), 1);
        assert!(r[0].parameter.abs() < 1e-12);
        assert!((r[0].enhancement - 4.0).abs() < 1e-12);
    }

    #[test]
    fn plateau_reported_at_smaller_parameter() {
        let r = find_resonances(&curve(vec![1.0, 2.0, 3.0, 3.0, 3.0, 1.0]));
        assert_eq!(r, vec![Resonance { parameter: 2.0, enhancement: 3.0 }]);
        // a plateau running into the end is not a peak
        assert!(find_resonances(&curve(vec![1.0, 2.0, 3.0, 3.0])).is_empty());
    }

    #[test]
    fn prominence_rule() {
        // bump at 1.04 above a floor of 1.0 is rejected
        assert!(find_resonances(&curve(vec![1.0, 1.04, 1.0, 1.02])).is_empty());
        assert_eq!(find_resonances(&curve(vec![1.0, 1.06, 1.0])).len(), 1);
    }

    #[test]
    fn short_curves_yield_nothing() {
        assert!(find_resonances(&curve(vec![1.0, 2.0])).is_empty());
    }
}
