//! Closed-form bound-state spectra and degeneracies for the N-dimensional
//! hydrogen-like atom and the N-dimensional isotropic oscillator, with
//! enumeration-backed consistency checks.
//!
//! Energies are parametrized by a caller-supplied reference level (the
//! ground energy), with the level-dependence computed as an exact rational
//! coefficient before any floating point enters.  Degeneracies use
//! arbitrary-precision integers throughout.

use crate::exact::Rat;
use num_bigint::{BigInt, BigUint};
use num_integer::{binomial, Integer};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Which of the two solvable systems a level belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Hydrogen,
    Oscillator,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Hydrogen => "hydrogen",
            System::Oscillator => "oscillator",
        })
    }
}

/// Invalid level specifications or mismatched operations.
#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("{system} needs dimension >= {minimum}, got {got}")]
    DimensionTooSmall { system: System, minimum: u32, got: u32 },
    #[error("{system} levels start at {minimum}, got {got}")]
    LevelTooSmall { system: System, minimum: u32, got: u32 },
    #[error("{system} reference energy must be {expected}, got {got}")]
    ReferenceSign { system: System, expected: &'static str, got: f64 },
    #[error("operation expects a {expected} level, got {got}")]
    WrongSystem { expected: System, got: System },
}

/// A validated bound level of one of the two systems.
///
/// Hydrogen levels have `dimension >= 2`, `level >= 1`, and a negative
/// reference energy `E_N(1)`; oscillator levels have `dimension >= 1`,
/// `level >= 0`, and a positive reference energy `F_N(0)`.  The reference
/// energy is in whatever units the caller works in; nothing physical is
/// baked in.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LevelSpec {
    pub system: System,
    pub dimension: u32,
    pub level: u32,
    pub reference_energy: f64,
}

impl LevelSpec {
    pub fn new(
        system: System,
        dimension: u32,
        level: u32,
        reference_energy: f64,
    ) -> Result<Self, SpectrumError> {
        let minimum_dim = match system {
            System::Hydrogen => 2,
            System::Oscillator => 1,
        };
        if dimension < minimum_dim {
            return Err(SpectrumError::DimensionTooSmall {
                system,
                minimum: minimum_dim,
                got: dimension,
            });
        }
        if system == System::Hydrogen && level < 1 {
            return Err(SpectrumError::LevelTooSmall { system, minimum: 1, got: level });
        }
        let sign_ok = match system {
            System::Hydrogen => reference_energy < 0.0,
            System::Oscillator => reference_energy > 0.0,
        };
        if !sign_ok {
            return Err(SpectrumError::ReferenceSign {
                system,
                expected: match system {
                    System::Hydrogen => "negative",
                    System::Oscillator => "positive",
                },
                got: reference_energy,
            });
        }
        Ok(LevelSpec { system, dimension, level, reference_energy })
    }

    pub fn hydrogen(dimension: u32, level: u32, reference_energy: f64) -> Result<Self, SpectrumError> {
        Self::new(System::Hydrogen, dimension, level, reference_energy)
    }

    pub fn oscillator(
        dimension: u32,
        level: u32,
        reference_energy: f64,
    ) -> Result<Self, SpectrumError> {
        Self::new(System::Oscillator, dimension, level, reference_energy)
    }

    /// Exact ratio `E(level) / E(reference level)`: positive, and equal to
    /// `(N-1)^2/(2n+N-3)^2` for hydrogen or `(2n+N)/N` for the oscillator.
    pub fn energy_coefficient(&self) -> Rat {
        let n = i64::from(self.level);
        let big = self.dimension as i64;
        match self.system {
            System::Hydrogen => {
                let num = BigInt::from((big - 1) * (big - 1));
                let den = BigInt::from((2 * n + big - 3) * (2 * n + big - 3));
                Rat::new(num, den)
            }
            System::Oscillator => Rat::new(BigInt::from(2 * n + big), BigInt::from(big)),
        }
    }

    /// Energy of the level: the exact coefficient, reduced, then applied to
    /// the reference energy in floating point.
    pub fn energy(&self) -> f64 {
        self.energy_coefficient().to_f64().expect("reduced small ratio fits f64")
            * self.reference_energy
    }
}

/// `E_N(n) = (N-1)^2/(2n+N-3)^2 * E_N(1)`; for N = 3 this is `E_3(1)/n^2`.
pub fn hydrogen_energy(spec: &LevelSpec) -> Result<f64, SpectrumError> {
    if spec.system != System::Hydrogen {
        return Err(SpectrumError::WrongSystem { expected: System::Hydrogen, got: spec.system });
    }
    Ok(spec.energy())
}

/// `F_N(n) = (2n+N)/N * F_N(0)`.
pub fn oscillator_energy(spec: &LevelSpec) -> Result<f64, SpectrumError> {
    if spec.system != System::Oscillator {
        return Err(SpectrumError::WrongSystem { expected: System::Oscillator, got: spec.system });
    }
    Ok(spec.energy())
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, v| acc * v)
}

/// Exact quotient that panics if the division is not exact; degeneracy
/// formulas are integral by construction, so a remainder means a bug.
fn exact_div(num: BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "degeneracy formula must divide exactly");
    q
}

/// Degeneracy of hydrogen level `n` in dimension `N`:
/// `(2n+N-3) (n+N-3)! / ((n-1)! (N-1)!)`, exactly.  Reduces to `n^2` for
/// `N = 3` and `2n-1` for `N = 2`.
pub fn hydrogen_degeneracy(dimension: u32, level: u32) -> Result<BigUint, SpectrumError> {
    if dimension < 2 {
        return Err(SpectrumError::DimensionTooSmall {
            system: System::Hydrogen,
            minimum: 2,
            got: dimension,
        });
    }
    if level < 1 {
        return Err(SpectrumError::LevelTooSmall { system: System::Hydrogen, minimum: 1, got: level });
    }
    let (n, big) = (u64::from(level), u64::from(dimension));
    let num = BigUint::from(2 * n + big - 3) * factorial(n + big - 3);
    let den = factorial(n - 1) * factorial(big - 1);
    Ok(exact_div(num, &den))
}

/// Degeneracy of oscillator level `n` in dimension `N`: the multiset count
/// `(n+N-1)! / (n! (N-1)!) = C(n+N-1, n)`, exactly.
pub fn oscillator_degeneracy(dimension: u32, level: u32) -> Result<BigUint, SpectrumError> {
    if dimension < 1 {
        return Err(SpectrumError::DimensionTooSmall {
            system: System::Oscillator,
            minimum: 1,
            got: dimension,
        });
    }
    let (n, big) = (u64::from(level), u64::from(dimension));
    Ok(binomial(BigUint::from(n + big - 1), BigUint::from(n)))
}

/// All `(l, m)` quantum-number pairs of three-dimensional hydrogen level
/// `n`, in lexicographic order; the list has length `n^2`.
pub fn enumerate_quantum_numbers(n: u32) -> Vec<(u32, i32)> {
    let mut out = Vec::with_capacity((n * n) as usize);
    for l in 0..n {
        for m in -(l as i32)..=(l as i32) {
            out.push((l, m));
        }
    }
    out
}

/// Cross-system state count for hydrogen level `n` against the four-mode
/// oscillator level with total quantum `2(n-1)`.
#[derive(Clone, Debug, Serialize)]
pub struct BridgeRecord {
    pub hydrogen_level: u32,
    pub oscillator_total: u32,
    /// Occupation vectors with `n1+n2 = n3+n4`, counted by enumeration.
    pub constrained_count: u64,
    /// All occupation vectors of the level, counted by enumeration.
    pub unconstrained_count: u64,
    /// `hydrogen_degeneracy(3, n)` — what the constrained count must equal.
    pub expected_constrained: u64,
    /// `oscillator_degeneracy(4, 2(n-1))` — what the full count must equal.
    pub expected_unconstrained: u64,
    pub consistent: bool,
}

/// Enumerate the four-mode oscillator level with total `2(n-1)` and verify
/// that the slice satisfying the balance constraint `n1+n2 = n3+n4` has
/// exactly the size of hydrogen level `n` (i.e. `n^2`), while the whole
/// level has size `oscillator_degeneracy(4, 2(n-1))`.
pub fn oscillator_hydrogen_bridge(n: u32) -> Result<BridgeRecord, SpectrumError> {
    if n < 1 {
        return Err(SpectrumError::LevelTooSmall { system: System::Hydrogen, minimum: 1, got: n });
    }
    let total = 2 * (n - 1);
    let mut constrained = 0u64;
    let mut unconstrained = 0u64;
    for n1 in 0..=total {
        for n2 in 0..=(total - n1) {
            for n3 in 0..=(total - n1 - n2) {
                let n4 = total - n1 - n2 - n3;
                unconstrained += 1;
                if n1 + n2 == n3 + n4 {
                    constrained += 1;
                }
            }
        }
    }
    let expected_constrained = hydrogen_degeneracy(3, n)?
        .to_u64()
        .expect("three-dimensional degeneracy fits u64");
    let expected_unconstrained = oscillator_degeneracy(4, total)?
        .to_u64()
        .expect("four-mode level size fits u64");
    Ok(BridgeRecord {
        hydrogen_level: n,
        oscillator_total: total,
        constrained_count: constrained,
        unconstrained_count: unconstrained,
        expected_constrained,
        expected_unconstrained,
        consistent: constrained == expected_constrained
            && unconstrained == expected_unconstrained,
    })
}

/// One row of the CLI-facing spectrum table.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub system: System,
    #[serde(rename = "N")]
    pub dimension: u32,
    #[serde(rename = "n")]
    pub level: u32,
    pub energy_coefficient_num: String,
    pub energy_coefficient_den: String,
    pub degeneracy: String,
}

/// CSV header matching [`SpectrumRow::csv_line`].
pub const CSV_HEADER: &str = "system,N,n,energy_coefficient_num,energy_coefficient_den,degeneracy";

impl SpectrumRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.system,
            self.dimension,
            self.level,
            self.energy_coefficient_num,
            self.energy_coefficient_den,
            self.degeneracy
        )
    }
}

/// Build a table row: exact energy coefficient (always positive; the sign
/// lives in the caller's reference energy) plus exact degeneracy.
pub fn spectrum_row(system: System, dimension: u32, level: u32) -> Result<SpectrumRow, SpectrumError> {
    let reference = match system {
        System::Hydrogen => -1.0,
        System::Oscillator => 1.0,
    };
    let spec = LevelSpec::new(system, dimension, level, reference)?;
    let coeff = spec.energy_coefficient();
    assert!(coeff.is_positive(), "energy coefficients are positive by construction");
    let degeneracy = match system {
        System::Hydrogen => hydrogen_degeneracy(dimension, level)?,
        System::Oscillator => oscillator_degeneracy(dimension, level)?,
    };
    Ok(SpectrumRow {
        system,
        dimension,
        level,
        energy_coefficient_num: coeff.numer().to_string(),
        energy_coefficient_den: coeff.denom().to_string(),
        degeneracy: degeneracy.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Monomial / occupation-vector count by pure Pascal recursion —
    /// independent of any closed formula.
    fn count_occupations(modes: u32, total: u32) -> u64 {
        if modes == 1 {
            return 1;
        }
        (0..=total).map(|k| count_occupations(modes - 1, total - k)).sum()
    }

    /// Dimension of degree-`l` harmonics in `N` variables: monomial count
    /// minus the Laplacian image, by the recursion oracle.
    fn harmonic_dimension(dimension: u32, l: u32) -> u64 {
        let all = count_occupations(dimension, l);
        if l >= 2 {
            all - count_occupations(dimension, l - 2)
        } else {
            all
        }
    }

    #[test]
    fn hydrogen_energies_match_the_closed_form() {
        let spec = LevelSpec::hydrogen(3, 2, -1.0).unwrap();
        assert_eq!(spec.energy_coefficient(), rat(1, 4));
        assert_relative_eq!(hydrogen_energy(&spec).unwrap(), -0.25);
        let ground = LevelSpec::hydrogen(3, 1, -1.0).unwrap();
        assert_relative_eq!(hydrogen_energy(&ground).unwrap(), -1.0);
        let five_dim = LevelSpec::hydrogen(5, 2, -1.0).unwrap();
        assert_eq!(five_dim.energy_coefficient(), rat(4, 9));
        assert_relative_eq!(hydrogen_energy(&five_dim).unwrap(), -4.0 / 9.0);
    }

    #[test]
    fn oscillator_energies_match_the_closed_form() {
        for (dimension, level, expect) in [(4, 0, 1.0), (4, 2, 2.0), (1, 3, 7.0)] {
            let spec = LevelSpec::oscillator(dimension, level, 1.0).unwrap();
            assert_relative_eq!(oscillator_energy(&spec).unwrap(), expect);
        }
    }

    #[test]
    fn level_specs_reject_bad_inputs() {
        assert_eq!(
            LevelSpec::hydrogen(1, 1, -1.0).unwrap_err(),
            SpectrumError::DimensionTooSmall { system: System::Hydrogen, minimum: 2, got: 1 }
        );
        assert_eq!(
            LevelSpec::hydrogen(3, 0, -1.0).unwrap_err(),
            SpectrumError::LevelTooSmall { system: System::Hydrogen, minimum: 1, got: 0 }
        );
        assert!(matches!(
            LevelSpec::hydrogen(3, 1, 0.5).unwrap_err(),
            SpectrumError::ReferenceSign { system: System::Hydrogen, expected: "negative", .. }
        ));
        assert!(matches!(
            LevelSpec::oscillator(3, 0, -2.0).unwrap_err(),
            SpectrumError::ReferenceSign { system: System::Oscillator, expected: "positive", .. }
        ));
        assert!(matches!(
            LevelSpec::oscillator(0, 0, 1.0).unwrap_err(),
            SpectrumError::DimensionTooSmall { system: System::Oscillator, minimum: 1, got: 0 }
        ));
        let osc = LevelSpec::oscillator(4, 0, 1.0).unwrap();
        assert_eq!(
            hydrogen_energy(&osc).unwrap_err(),
            SpectrumError::WrongSystem { expected: System::Hydrogen, got: System::Oscillator }
        );
        let hyd = LevelSpec::hydrogen(3, 1, -1.0).unwrap();
        assert_eq!(
            oscillator_energy(&hyd).unwrap_err(),
            SpectrumError::WrongSystem { expected: System::Oscillator, got: System::Hydrogen }
        );
    }

    #[test]
    fn three_dimensional_degeneracy_is_n_squared() {
        for n in 1..=10u32 {
            assert_eq!(hydrogen_degeneracy(3, n).unwrap(), BigUint::from(n * n));
        }
    }

    #[test]
    fn low_dimensional_pins() {
        assert_eq!(hydrogen_degeneracy(3, 1).unwrap(), BigUint::one());
        // Sum of SO(4) harmonic dimensions for l = 0, 1: 1 + 4.
        assert_eq!(hydrogen_degeneracy(4, 2).unwrap(), BigUint::from(5u32));
        for big in 1..=8u32 {
            assert_eq!(oscillator_degeneracy(big, 0).unwrap(), BigUint::one());
        }
        assert_eq!(oscillator_degeneracy(4, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(oscillator_degeneracy(3, 4).unwrap(), BigUint::from(15u32));
    }

    #[test]
    fn hydrogen_degeneracy_matches_the_harmonic_sum_oracle() {
        for dimension in 2..=8u32 {
            for n in 1..=10u32 {
                let oracle: u64 = (0..n).map(|l| harmonic_dimension(dimension, l)).sum();
                assert_eq!(
                    hydrogen_degeneracy(dimension, n).unwrap(),
                    BigUint::from(oracle),
                    "dimension {dimension}, level {n}"
                );
            }
        }
    }

    #[test]
    fn harmonic_oracle_agrees_with_its_closed_form() {
        // (2l+N-2)(l+N-3)!/(l!(N-2)!), avoiding the degenerate N=2, l=0 corner.
        for dimension in 2..=8u64 {
            for l in 0..=9u64 {
                if dimension == 2 && l == 0 {
                    continue;
                }
                let num = BigUint::from(2 * l + dimension - 2) * factorial(l + dimension - 3);
                let den = factorial(l) * factorial(dimension - 2);
                assert_eq!(
                    exact_div(num, &den),
                    BigUint::from(harmonic_dimension(dimension as u32, l as u32))
                );
            }
        }
    }

    #[test]
    fn oscillator_degeneracy_matches_the_enumeration_oracle() {
        for dimension in 1..=8u32 {
            for n in 0..=12u32 {
                assert_eq!(
                    oscillator_degeneracy(dimension, n).unwrap(),
                    BigUint::from(count_occupations(dimension, n)),
                    "dimension {dimension}, level {n}"
                );
            }
        }
    }

    #[test]
    fn quantum_number_enumeration_is_lexicographic_and_square() {
        assert_eq!(enumerate_quantum_numbers(1), vec![(0, 0)]);
        assert_eq!(enumerate_quantum_numbers(2), vec![(0, 0), (1, -1), (1, 0), (1, 1)]);
        assert_eq!(enumerate_quantum_numbers(5).len(), 25);
        for n in 1..=8u32 {
            let list = enumerate_quantum_numbers(n);
            assert_eq!(list.len(), (n * n) as usize);
            let mut sorted = list.clone();
            sorted.sort();
            assert_eq!(list, sorted);
            assert!(list.iter().all(|&(l, m)| l < n && m.unsigned_abs() <= l));
        }
    }

    #[test]
    fn bridge_counts_match_both_systems() {
        let first = oscillator_hydrogen_bridge(1).unwrap();
        assert_eq!((first.constrained_count, first.unconstrained_count), (1, 1));
        let third = oscillator_hydrogen_bridge(3).unwrap();
        assert_eq!((third.constrained_count, third.unconstrained_count), (9, 35));
        let fourth = oscillator_hydrogen_bridge(4).unwrap();
        assert_eq!((fourth.constrained_count, fourth.unconstrained_count), (16, 84));
        for n in 1..=6u32 {
            let record = oscillator_hydrogen_bridge(n).unwrap();
            assert!(record.consistent, "bridge fails at level {n}");
            assert_eq!(record.constrained_count, u64::from(n * n));
        }
    }

    #[test]
    fn csv_rows_carry_exact_coefficients() {
        assert_eq!(
            CSV_HEADER,
            "system,N,n,energy_coefficient_num,energy_coefficient_den,degeneracy"
        );
        let row = spectrum_row(System::Hydrogen, 3, 2).unwrap();
        assert_eq!(row.csv_line(), "hydrogen,3,2,1,4,4");
        let row = spectrum_row(System::Oscillator, 4, 2).unwrap();
        assert_eq!(row.csv_line(), "oscillator,4,2,2,1,10");
    }

    proptest! {
        /// Hydrogen energies increase strictly toward zero with the level,
        /// checked on the exact coefficients.
        #[test]
        fn hydrogen_energy_increases_with_level(dimension in 2u32..=8, n in 1u32..=30) {
            let here = LevelSpec::hydrogen(dimension, n, -1.0).unwrap();
            let next = LevelSpec::hydrogen(dimension, n + 1, -1.0).unwrap();
            prop_assert!(next.energy_coefficient() < here.energy_coefficient());
            prop_assert!(next.energy() > here.energy());
            prop_assert!(next.energy() < 0.0);
        }

        /// Degeneracies are positive and weakly increasing in dimension.
        #[test]
        fn degeneracies_are_positive(dimension in 2u32..=8, n in 1u32..=10) {
            prop_assert!(hydrogen_degeneracy(dimension, n).unwrap() > BigUint::zero());
            prop_assert!(oscillator_degeneracy(dimension, n).unwrap() > BigUint::zero());
        }
    }
}
