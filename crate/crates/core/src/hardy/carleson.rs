use super::DiskSequence;

/// Products below `exp(LOG_FLOOR)` are reported as zero.
const LOG_FLOOR: f64 = -700.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CarlesonReport {
    /// `prod_{k != n} |lambda_n - lambda_k| / |1 - conj(lambda_n) lambda_k|` per `n`.
    pub products: Vec<f64>,
    /// Natural logarithms of the products (`-inf` for coincident points).
    pub log_products: Vec<f64>,
    pub infimum: f64,
    /// Index attaining the infimum (first on ties).
    pub argmin: usize,
    /// Some pair of points coincides, forcing a zero product.
    pub coincident: bool,
}

/// Carleson products of a truncated sequence, accumulated in log space.
///
/// Each factor is the pseudo-hyperbolic distance `rho`, evaluated as
/// `log rho = -log(1 + (1-|a|^2)(1-|b|^2) / |a-b|^2) / 2`, which follows from
/// `|1 - conj(a) b|^2 = |a - b|^2 + (1-|a|^2)(1-|b|^2)`.
pub fn carleson_products(seq: &DiskSequence) -> CarlesonReport {
    let k = seq.len();
    let defects: Vec<f64> = (0..k).map(|j| seq.defect(j)).collect();
    let mut coincident = false;
    let log_products: Vec<f64> = (0..k)
        .map(|n| {
            let mut acc = 0.0;
            for j in (0..k).filter(|&j| j != n) {
                let dist = seq.distance(n, j);
                if dist == 0.0 {
                    coincident = true;
                    return f64::NEG_INFINITY;
                }
                acc -= 0.5 * (defects[n] * defects[j] / (dist * dist)).ln_1p();
            }
            acc
        })
        .collect();
    let products: Vec<f64> = log_products
        .iter()
        .map(|&l| if l < LOG_FLOOR { 0.0 } else { l.exp() })
        .collect();
    let (argmin, infimum) =
        products.iter().copied().enumerate().fold(
            (0, f64::INFINITY),
            |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) },
        );
    CarlesonReport {
        products,
        log_products,
        infimum,
        argmin,
        coincident,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;

    #[test]
    fn single_point_has_empty_product() {
        let s = DiskSequence::new(vec![C64::new(0.3, 0.0)]).unwrap();
        let r = carleson_products(&s);
        assert_eq!(r.products, vec![1.0]);
        assert_eq!(r.infimum, 1.0);
    }

    #[test]
    fn two_points_give_pseudo_hyperbolic_distance() {
        let s = DiskSequence::new(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let r = carleson_products(&s);
        assert!((r.infimum - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_are_reported() {
        let s = DiskSequence::new(vec![C64::new(0.2, 0.0), C64::new(0.2, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let r = carleson_products(&s);
        assert!(r.coincident);
        assert_eq!(r.infimum, 0.0);
        assert!(r.products[2] > 0.0);
    }

    #[test]
    fn tiny_products_underflow_to_zero() {
        let s = DiskSequence::new((0..200).map(|k| C64::new(5e-5 * k as f64, 0.0)).collect()).unwrap();
        let r = carleson_products(&s);
        assert!(r.log_products.iter().any(|&l| l < -700.0));
        assert_eq!(r.infimum, 0.0);
    }
}
