//! Laurent series in an auxiliary variable `k` with graded-series
//! coefficients.
//!
//! `k` has weight `-1`, so the coefficient of `k^e` is kept to weight
//! `N + e`. With every coefficient of non-negative weight, products
//! truncated this way are exact.

use std::collections::BTreeMap;

use super::{GradedSeries, SeriesError, SeriesRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    base: SeriesRing,
    coeffs: BTreeMap<i32, GradedSeries>,
}

impl LaurentSeries {
    /// The zero series; `base` fixes kind, parameters and total weight `N`.
    pub fn new(base: &SeriesRing) -> Self {
        LaurentSeries {
            base: base.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn total_weight(&self) -> u32 {
        self.base.truncation()
    }

    fn slot_truncation(&self, e: i32) -> Option<u32> {
        let t = self.base.truncation() as i64 + e as i64;
        (t >= 0).then_some(t as u32)
    }

    /// Adds `s·k^e`. `s` is truncated to weight `N + e`; exponents with
    /// `N + e < 0` carry nothing and are ignored.
    pub fn add_term(&mut self, e: i32, s: &GradedSeries) -> Result<(), SeriesError> {
        let Some(t) = self.slot_truncation(e) else {
            return Ok(());
        };
        self.base.check_compatible(s.ring())?;
        let s = if s.truncation() >= t {
            s.truncated(t)
        } else {
            // Not enough precision to fill the slot: keep what is known.
            s.clone()
        };
        let slot = match self.coeffs.remove(&e) {
            Some(old) => {
                let old = old.truncated(s.truncation());
                old.checked_add(&s.truncated(old.truncation()))?
            }
            None => s,
        };
        if !slot.is_zero() {
            self.coeffs.insert(e, slot);
        }
        Ok(())
    }

    /// `exp(Σ_m t_m k^m)` with `ts[m-1] = t_m`, each `t_m` of weight `m`.
    pub fn exp_xi(base: &SeriesRing, ts: &[GradedSeries]) -> Result<Self, SeriesError> {
        let n = base.truncation() as usize;
        let coeffs = super::exp_generating_coeffs(base, ts, n);
        let mut out = LaurentSeries::new(base);
        for (a, c) in coeffs.into_iter().enumerate() {
            // c has pure weight a, so it is exact in the wider slot.
            let t = base.truncation() + a as u32;
            out.add_term(a as i32, &c.widen_truncation(t)?)?;
        }
        Ok(out)
    }

    /// Reads a series in a weight-1 parameter `z = k^{-1}` as a Laurent
    /// series: the coefficient of `z^j` becomes that of `k^{-j}`.
    pub fn from_inverse_param(s: &GradedSeries, z: usize) -> Result<Self, SeriesError> {
        let mut out = LaurentSeries::new(s.ring());
        for (j, c) in s.split_by_param(z) {
            out.add_term(-(j as i32), &c)?;
        }
        Ok(out)
    }

    pub fn k_min(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn k_max(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i32, &GradedSeries)> {
        self.coeffs.iter().map(|(e, s)| (*e, s))
    }

    /// Coefficient of `k^e` (zero if absent), truncated at `N + e`.
    pub fn residue(&self, e: i32) -> GradedSeries {
        match self.coeffs.get(&e) {
            Some(s) => s.clone(),
            None => {
                let t = self.slot_truncation(e).unwrap_or(0);
                GradedSeries::zero(&self.base.with_truncation(t).expect("valid truncation"))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let mut out = LaurentSeries::new(&self.base);
        for (&a, sa) in &self.coeffs {
            for (&b, sb) in &other.coeffs {
                let Some(t) = out.slot_truncation(a + b) else {
                    continue;
                };
                out.add_term(a + b, &sa.mul_to(sb, t)?)?;
            }
        }
        Ok(out)
    }

    /// Coefficient of `k^e` in `self · other`, without forming the rest.
    pub fn product_coefficient(&self, other: &Self, e: i32) -> Result<GradedSeries, SeriesError> {
        let t = self.slot_truncation(e).unwrap_or(0);
        let mut acc = GradedSeries::zero(&self.base.with_truncation(t)?);
        if self.slot_truncation(e).is_none() {
            return Ok(acc);
        }
        for (&a, sa) in &self.coeffs {
            if let Some(sb) = other.coeffs.get(&(e - a)) {
                acc = acc.checked_add(&sa.mul_to(sb, t)?)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::series::VarKind;

    #[test]
    fn residue_reads_single_slot() {
        let ring = SeriesRing::new(VarKind::All, 4).unwrap();
        let mut l = LaurentSeries::new(&ring);
        l.add_term(-1, &GradedSeries::x(&ring, 1).unwrap()).unwrap();
        l.add_term(0, &GradedSeries::x(&ring, 2).unwrap()).unwrap();
        assert_eq!(
            l.residue(-1).terms(),
            GradedSeries::x(&ring, 1).unwrap().terms()
        );
        assert_eq!(l.residue(-1).truncation(), 3);
        assert!(l.residue(-2).is_zero());
        assert_eq!((l.k_min(), l.k_max()), (Some(-1), Some(0)));
    }

    #[test]
    fn exp_of_negative_y_has_no_negative_powers() {
        let ring = SeriesRing::new(VarKind::All, 4).unwrap();
        let ts: Vec<_> = (1..=4)
            .map(|n| {
                GradedSeries::y(&ring, n)
                    .unwrap()
                    .scale(&Rational::from_integer(-2))
            })
            .collect();
        let l = LaurentSeries::exp_xi(&ring, &ts).unwrap();
        assert!(l.residue(-1).is_zero());
        assert_eq!(l.k_min(), Some(0));
        // k^1 coefficient is -2 y_1.
        assert_eq!(l.residue(1).terms().len(), 1);
    }

    #[test]
    fn product_coefficient_matches_full_product() {
        let ring = SeriesRing::with_params(VarKind::All, &["z"], 5).unwrap();
        let shifted = GradedSeries::x(&ring, 2)
            .unwrap()
            .pow(2)
            .miwa_shift(0, &Rational::one(), 1);
        let a = LaurentSeries::from_inverse_param(&shifted, 0).unwrap();
        let ts: Vec<_> = (1..=5)
            .map(|n| GradedSeries::x(&ring, n).unwrap())
            .collect();
        let b = LaurentSeries::exp_xi(&ring, &ts).unwrap();
        let full = a.mul(&b).unwrap();
        for e in -4..=3 {
            assert_eq!(
                full.residue(e),
                a.product_coefficient(&b, e).unwrap(),
                "k^{e}"
            );
        }
    }
}
