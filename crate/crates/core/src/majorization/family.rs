//! The finite set of worst-case candidates at a given distance from uniform.
//!
//! Member `k` puts `1/n + ε/k` on `k` heavy coordinates and `1/n − ε/(n−k)` on
//! the rest, so it sits at total variation exactly `ε` from `U_n`. For odd `n`
//! the variants with one coordinate held at `1/n` are enumerated as well.

use serde::{Deserialize, Serialize};

use crate::distribution::{DiscreteDistribution, DistributionKind};
use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + serde::de::DeserializeOwned"))]
pub struct FamilyMember<T> {
    pub heavy: usize,
    pub light: usize,
    /// One coordinate kept at exactly `1/n`.
    pub middle: bool,
    pub heavy_mass: T,
    pub light_mass: T,
    pub distribution: DiscreteDistribution<T>,
}

impl<T: Scalar> FamilyMember<T> {
    pub fn describe(&self) -> String {
        let mid = if self.middle { " + 1 at 1/n" } else { "" };
        format!(
            "{} x {:.6e}, {} x {:.6e}{}",
            self.heavy,
            self.heavy_mass.as_f64(),
            self.light,
            self.light_mass.as_f64(),
            mid
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + serde::de::DeserializeOwned"))]
pub struct CandidateFamily<T> {
    pub n: usize,
    pub epsilon: T,
    pub members: Vec<FamilyMember<T>>,
    /// Odd-`n` variants with a middle coordinate; empty for even `n`.
    pub middle_variants: Vec<FamilyMember<T>>,
}

impl<T: Scalar> CandidateFamily<T> {
    pub fn iter(&self) -> impl Iterator<Item = &FamilyMember<T>> {
        self.members.iter().chain(&self.middle_variants)
    }

    pub fn len(&self) -> usize {
        self.members.len() + self.middle_variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn member(&self, heavy: usize) -> Option<&FamilyMember<T>> {
        self.members.iter().find(|m| m.heavy == heavy)
    }
}

fn build_member<T: Scalar>(
    n: usize,
    epsilon: T,
    heavy: usize,
    middle: bool,
) -> Option<FamilyMember<T>> {
    let light = n - heavy - usize::from(middle);
    if heavy == 0 || light == 0 {
        return None;
    }
    let inv_n = T::one() / T::from_index(n);
    let heavy_mass = inv_n + epsilon / T::from_index(heavy);
    let mut light_mass = inv_n - epsilon / T::from_index(light);
    if light_mass < T::zero() {
        if light_mass < -T::exact_tolerance() * inv_n {
            return None;
        }
        light_mass = T::zero();
    }
    let mut weights = vec![heavy_mass; heavy];
    if middle {
        weights.push(inv_n);
    }
    weights.extend(std::iter::repeat_n(light_mass, light));
    Some(FamilyMember {
        heavy,
        light,
        middle,
        heavy_mass,
        light_mass,
        distribution: DiscreteDistribution::from_parts_unchecked(
            weights,
            DistributionKind::Distribution,
        ),
    })
}

/// Enumerates every feasible heavy-set size `k ∈ {1, …, n−1}`.
pub fn worst_case_family<T: Scalar>(n: usize, epsilon: T) -> Result<CandidateFamily<T>> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange("family needs n >= 2".into()));
    }
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "epsilon = {epsilon} must lie in (0, 1)"
        )));
    }
    let members: Vec<_> = (1..n)
        .filter_map(|k| build_member(n, epsilon, k, false))
        .collect();
    let middle_variants: Vec<_> = if n % 2 == 1 {
        (1..n - 1)
            .filter_map(|k| build_member(n, epsilon, k, true))
            .collect()
    } else {
        Vec::new()
    };
    if members.is_empty() && middle_variants.is_empty() {
        return Err(Error::NoFeasibleMember {
            n,
            epsilon: epsilon.as_f64(),
            max_feasible_k: 0,
        });
    }
    Ok(CandidateFamily {
        n,
        epsilon,
        members,
        middle_variants,
    })
}
