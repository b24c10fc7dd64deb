//! Total variation and Hellinger distances.

use crate::distribution::DiscreteDistribution;
use crate::error::Result;
use crate::Scalar;

pub fn l1_distance<T: Scalar>(p: &[T], q: &[T]) -> T {
    p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum()
}

/// `d_TV(p, q) = ½‖p − q‖₁`.
pub fn tv_distance<T: Scalar>(
    p: &DiscreteDistribution<T>,
    q: &DiscreteDistribution<T>,
) -> Result<T> {
    p.ensure_same_domain(q)?;
    Ok(l1_distance(p.weights(), q.weights()) * T::lit(0.5))
}

/// `H²(p, q) = ½‖√p − √q‖₂²`.
pub fn hellinger_squared<T: Scalar>(
    p: &DiscreteDistribution<T>,
    q: &DiscreteDistribution<T>,
) -> Result<T> {
    p.ensure_same_domain(q)?;
    Ok(hellinger_squared_slices(p.weights(), q.weights()))
}

pub fn hellinger_distance<T: Scalar>(
    p: &DiscreteDistribution<T>,
    q: &DiscreteDistribution<T>,
) -> Result<T> {
    hellinger_squared(p, q).map(|h2| h2.sqrt())
}

pub(crate) fn hellinger_squared_slices<T: Scalar>(p: &[T], q: &[T]) -> T {
    let s: T = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    s * T::lit(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    type D = DiscreteDistribution<f64>;

    #[test]
    fn tv_examples() {
        let p = D::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        let a = D::point_mass(2, 0);
        let b = D::point_mass(2, 1);
        assert_eq!(tv_distance(&a, &b).unwrap(), 1.0);
        let h = D::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        assert_eq!(tv_distance(&h, &D::uniform(4)).unwrap(), 0.5);
    }

    #[test]
    fn hellinger_examples() {
        let a = D::point_mass(2, 0);
        let b = D::point_mass(2, 1);
        assert_eq!(hellinger_distance(&a, &a).unwrap(), 0.0);
        assert!((hellinger_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        let half = D::uniform(2);
        let expected = (1.0 - 0.5f64.sqrt()).sqrt();
        let got = hellinger_distance(&half, &a).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.5412).abs() < 1e-4);
    }

    #[test]
    fn domain_mismatch() {
        let err = tv_distance(&D::uniform(2), &D::uniform(3)).unwrap_err();
        assert_eq!(err, Error::DomainMismatch { left: 2, right: 3 });
        assert!(hellinger_distance(&D::uniform(2), &D::uniform(3)).is_err());
    }

    fn dist(n: usize) -> impl Strategy<Value = D> {
        proptest::collection::vec(0.0f64..1.0, n)
            .prop_filter_map("zero mass", |w| D::from_unnormalized(w).ok())
    }

    fn pair() -> impl Strategy<Value = (D, D)> {
        (1usize..12).prop_flat_map(|n| (dist(n), dist(n)))
    }

    proptest! {
        #[test]
        fn metric_axioms((p, q) in pair()) {
            let tv = tv_distance(&p, &q).unwrap();
            let h = hellinger_distance(&p, &q).unwrap();
            prop_assert!((tv - tv_distance(&q, &p).unwrap()).abs() <= 1e-15);
            prop_assert!((h - hellinger_distance(&q, &p).unwrap()).abs() <= 1e-15);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&tv));
            prop_assert!((0.0..=1.0 + 1e-12).contains(&h));
            prop_assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        }

        #[test]
        fn hellinger_tv_sandwich((p, q) in pair()) {
            let tv = tv_distance(&p, &q).unwrap();
            let h2 = hellinger_squared(&p, &q).unwrap();
            prop_assert!(h2 <= tv + 1e-12);
            prop_assert!(tv <= 2f64.sqrt() * h2.sqrt() + 1e-12);
        }
    }
}
