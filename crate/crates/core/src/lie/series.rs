use crate::C64;

/// Truncated power series in one complex variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries(pub Vec<C64>);

pub const SERIES_ORDER: usize = 18;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl PowerSeries {
    pub fn constant(c: C64) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); SERIES_ORDER];
        v[0] = c;
        Self(v)
    }

    /// `e^{cz}`.
    pub fn exp(c: C64) -> Self {
        Self((0..SERIES_ORDER).map(|k| c.powu(k as u32) / factorial(k)).collect())
    }

    /// `(1 - e^{cz}) / z`.
    pub fn one_minus_exp_over_z(c: C64) -> Self {
        Self((0..SERIES_ORDER).map(|k| -c.powu(k as u32 + 1) / factorial(k + 1)).collect())
    }

    /// `sin(az) / z`.
    pub fn sin_over_z(a: C64) -> Self {
        Self(
            (0..SERIES_ORDER)
                .map(|k| {
                    if k % 2 == 1 {
                        C64::new(0.0, 0.0)
                    } else {
                        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                        a.powu(k as u32 + 1) * sign / factorial(k + 1)
                    }
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![C64::new(0.0, 0.0); SERIES_ORDER];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                if i + j < SERIES_ORDER {
                    out[i + j] += a * b;
                }
            }
        }
        Self(out)
    }

    pub fn reciprocal(&self) -> Option<Self> {
        let a0 = self.0[0];
        if a0.norm() == 0.0 {
            return None;
        }
        let mut out = vec![C64::new(0.0, 0.0); SERIES_ORDER];
        out[0] = a0.inv();
        for k in 1..SERIES_ORDER {
            let s: C64 = (1..=k).map(|j| self.0[j] * out[k - j]).sum();
            out[k] = -s / a0;
        }
        Some(Self(out))
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.0.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_of_exp() {
        let c = C64::new(0.3, -1.2);
        let p = PowerSeries::exp(c).mul(&PowerSeries::exp(-c).reciprocal().unwrap().reciprocal().unwrap());
        let z = C64::new(0.05, 0.02);
        assert!((p.eval(z) - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sin_series() {
        let a = C64::new(1.5, 0.0);
        let z = C64::new(0.1, 0.0);
        assert!((PowerSeries::sin_over_z(a).eval(z) - (a * z).sin() / z).norm() < 1e-15);
    }
}
