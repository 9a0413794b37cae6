//! Positive-weight quadrature on reference simplices via collapsed
//! (Duffy) coordinates and Gauss-Jacobi rules.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

/// Highest polynomial degree for which reference rules are tabulated.
pub const MAX_ORDER: usize = 20;

/// Rule on the reference simplex `{xi >= 0, sum xi <= 1}` of dimension 1..=3.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceRule {
    pub dim: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Gauss-Jacobi rule with `n` points for `int_0^1 (1 - x)^alpha g(x) dx`.
pub fn gauss_jacobi(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        jac[(k, k)] = if k == 0 {
            -alpha / (alpha + 2.0)
        } else {
            -alpha * alpha / ((2.0 * kf + alpha) * (2.0 * kf + alpha + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + alpha;
            let b =
                (4.0 * m * (m + alpha) * m * (m + alpha) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
            jac[(k, k + 1)] = b;
            jac[(k + 1, k)] = b;
        }
    }
    let mu0 = 2f64.powf(alpha + 1.0) / (alpha + 1.0);
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            ((1.0 + t) / 2.0, mu0 * v0 * v0 * 2f64.powf(-alpha - 1.0))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn build(dim: usize, order: usize) -> ReferenceRule {
    let n = order / 2 + 1;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match dim {
        1 => {
            let (x, w) = gauss_jacobi(n, 0.0);
            for i in 0..n {
                points.push([x[i], 0.0, 0.0]);
                weights.push(w[i]);
            }
        }
        2 => {
            let (xu, wu) = gauss_jacobi(n, 1.0);
            let (xv, wv) = gauss_jacobi(n, 0.0);
            for i in 0..n {
                for j in 0..n {
                    points.push([xu[i], (1.0 - xu[i]) * xv[j], 0.0]);
                    weights.push(wu[i] * wv[j]);
                }
            }
        }
        3 => {
            let (xu, wu) = gauss_jacobi(n, 2.0);
            let (xv, wv) = gauss_jacobi(n, 1.0);
            let (xw, ww) = gauss_jacobi(n, 0.0);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let (u, v, w) = (xu[i], xv[j], xw[k]);
                        points.push([u, (1.0 - u) * v, (1.0 - u) * (1.0 - v) * w]);
                        weights.push(wu[i] * wv[j] * ww[k]);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    ReferenceRule {
        dim,
        points,
        weights,
    }
}

/// Cached reference rule exact for total degree `order` (`order <= MAX_ORDER`).
pub fn reference(dim: usize, order: usize) -> &'static ReferenceRule {
    static CACHE: OnceLock<Vec<Vec<ReferenceRule>>> = OnceLock::new();
    assert!((1..=3).contains(&dim) && order <= MAX_ORDER);
    let table = CACHE.get_or_init(|| {
        (1..=3)
            .map(|d| (0..=MAX_ORDER).map(|o| build(d, o)).collect())
            .collect()
    });
    &table[dim - 1][order]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// int over the reference simplex of prod x_i^a_i = prod a_i! / (sum a_i + d)!
    fn monomial_integral(exps: &[u32]) -> f64 {
        let num: f64 = exps.iter().map(|&a| factorial(a)).product();
        num / factorial(exps.iter().sum::<u32>() + exps.len() as u32)
    }

    #[test]
    fn gauss_legendre_three_points() {
        let (x, w) = gauss_jacobi(3, 0.0);
        let c = 0.5 * (0.6f64).sqrt();
        assert!((x[0] - (0.5 - c)).abs() < 1e-14 && (x[2] - (0.5 + c)).abs() < 1e-14);
        assert!((w[1] - 4.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_all_monomials_up_to_order() {
        for dim in 1..=3usize {
            for order in 0..=12usize {
                let r = reference(dim, order);
                assert!(r.weights.iter().all(|&w| w > 0.0));
                let o = order as u32;
                for a in 0..=o {
                    for b in 0..=(if dim > 1 { o - a } else { 0 }) {
                        for c in 0..=(if dim > 2 { o - a - b } else { 0 }) {
                            let exps = [a, b, c];
                            let q: f64 = r
                                .points
                                .iter()
                                .zip(&r.weights)
                                .map(|(p, w)| {
                                    w * (0..dim).map(|i| p[i].powi(exps[i] as i32)).product::<f64>()
                                })
                                .sum();
                            let exact = monomial_integral(&exps[..dim]);
                            assert!(
                                (q - exact).abs() < 1e-13,
                                "dim {dim} order {order} {exps:?}: {q} vs {exact}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reference_values_from_factorial_formula() {
        let tri = reference(2, 4);
        let q: f64 = tri
            .points
            .iter()
            .zip(&tri.weights)
            .map(|(p, w)| w * p[0] * p[0] * p[1] * p[1])
            .sum();
        assert!((q - 1.0 / 180.0).abs() < 1e-15);
        let tet = reference(3, 2);
        let q: f64 = tet
            .points
            .iter()
            .zip(&tet.weights)
            .map(|(p, w)| w * p[0])
            .sum();
        assert!((q - 1.0 / 24.0).abs() < 1e-15);
        let one = reference(2, 1);
        assert!((one.weights.iter().sum::<f64>() - 0.5).abs() < 1e-15);
    }
}
