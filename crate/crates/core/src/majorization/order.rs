//! Majorization order and the averaging operations that move down it.

use crate::distance::l1_distance;
use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::Scalar;

/// `p ≻ q`: every prefix sum of `p↓` dominates the matching prefix sum of `q↓`.
pub fn majorizes<T: Scalar>(
    p: &DiscreteDistribution<T>,
    q: &DiscreteDistribution<T>,
) -> Result<bool> {
    p.ensure_same_domain(q)?;
    let tol = T::exact_tolerance();
    let (a, b) = (p.sorted_desc(), q.sorted_desc());
    let mut sa = T::zero();
    let mut sb = T::zero();
    for (&x, &y) in a.iter().zip(&b) {
        sa = sa + x;
        sb = sb + y;
        if sa < sb - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces the masses on `subset` by their average `p(S)/|S|`.
pub fn average_on_subset<T: Scalar>(
    p: &DiscreteDistribution<T>,
    subset: &[usize],
) -> Result<DiscreteDistribution<T>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut idx = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&bad) = idx.iter().find(|&&i| i >= p.n()) {
        return Err(Error::SampleOutOfDomain {
            index: bad,
            n: p.n(),
        });
    }
    let mut w = p.weights().to_vec();
    let mass: T = idx.iter().map(|&i| w[i]).sum();
    let avg = mass / T::from_index(idx.len());
    for &i in &idx {
        w[i] = avg;
    }
    Ok(DiscreteDistribution::from_parts_unchecked(w, p.kind()))
}

/// Averages the `⌊n/2⌋` heaviest and the `⌊n/2⌋` lightest masses separately;
/// for odd `n` the median element is left alone.
pub fn two_level_average<T: Scalar>(
    p: &DiscreteDistribution<T>,
) -> Result<DiscreteDistribution<T>> {
    let n = p.n();
    if n < 2 {
        return Err(Error::ParameterOutOfRange(
            "two-level averaging needs n >= 2".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        p.weights()[j]
            .partial_cmp(&p.weights()[i])
            .expect("finite weights")
    });
    let half = n / 2;
    let heavy = average_on_subset(p, &order[..half])?;
    average_on_subset(&heavy, &order[n - half..])
}

/// `‖p − U_n‖₁`.
pub fn l1_to_uniform<T: Scalar>(p: &DiscreteDistribution<T>) -> T {
    let u = T::one() / T::from_index(p.n());
    l1_distance(p.weights(), &vec![u; p.n()])
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DiscreteDistribution<f64>;

    fn d(w: &[f64]) -> D {
        D::new(w.to_vec()).unwrap()
    }

    #[test]
    fn majorization_examples() {
        let p = d(&[0.5, 0.3, 0.2]);
        assert!(majorizes(&p, &D::uniform(3)).unwrap());
        assert!(majorizes(&p, &p).unwrap());
        assert!(majorizes(&p, &d(&[0.4, 0.35, 0.25])).unwrap());
        assert!(!majorizes(&d(&[0.4, 0.35, 0.25]), &p).unwrap());
        assert!(!majorizes(&D::uniform(3), &p).unwrap());
        // order-insensitive
        assert!(majorizes(&d(&[0.2, 0.5, 0.3]), &d(&[0.25, 0.35, 0.4])).unwrap());
        assert!(majorizes(&p, &D::uniform(4)).is_err());
    }

    #[test]
    fn averaging_examples() {
        let p = d(&[0.5, 0.3, 0.2]);
        assert_eq!(average_on_subset(&p, &[1]).unwrap(), p);
        let full = average_on_subset(&p, &[0, 1, 2]).unwrap();
        for &w in full.weights() {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
        let q = average_on_subset(&p, &[0, 1]).unwrap();
        assert!((q.weights()[0] - 0.4).abs() < 1e-15);
        assert!((q.weights()[1] - 0.4).abs() < 1e-15);
        assert_eq!(q.weights()[2], 0.2);
        assert_eq!(average_on_subset(&p, &[]), Err(Error::EmptySubset));
        assert!(average_on_subset(&p, &[3]).is_err());
    }

    #[test]
    fn two_level_examples() {
        assert_eq!(two_level_average(&D::uniform(6)).unwrap(), D::uniform(6));

        let p = d(&[0.5, 0.3, 0.1, 0.1]);
        let q = two_level_average(&p).unwrap();
        let expected = [0.4, 0.4, 0.1, 0.1];
        for (a, b) in q.weights().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((l1_to_uniform(&p) - 0.6).abs() < 1e-15);
        assert!((l1_to_uniform(&q) - 0.6).abs() < 1e-15);

        let p = d(&[0.6, 0.3, 0.1]);
        assert_eq!(two_level_average(&p).unwrap(), p);
        assert!(two_level_average(&d(&[1.0])).is_err());
    }
}
