//! Small rotation/linear-algebra helpers shared across modules.

use nalgebra::{Matrix3, Vector3};

use crate::scalar::{real, Real};

/// Cross-product (skew-symmetric) matrix of `v`.
pub fn skew<T: Real>(v: &Vector3<T>) -> Matrix3<T> {
    Matrix3::new(
        T::zero(),
        -v.z,
        v.y,
        v.z,
        T::zero(),
        -v.x,
        -v.y,
        v.x,
        T::zero(),
    )
}

/// Rotation matrix for the axis-angle vector `a` (angle = |a|, axis = a/|a|).
///
/// Uses the series form of the Rodrigues coefficients so it stays exact
/// through `a = 0`.
pub fn rotation_from_axis_angle<T: Real>(a: &Vector3<T>) -> Matrix3<T> {
    let theta2 = a.norm_squared();
    let k = skew(a);
    let k2 = k * k;
    let (c1, c2) = rodrigues_coefficients(theta2);
    Matrix3::identity() + k * c1 + k2 * c2
}

/// Rotate `v` by the axis-angle vector `a`.
pub fn rotate_axis_angle<T: Real>(a: &Vector3<T>, v: &Vector3<T>) -> Vector3<T> {
    let theta2 = a.norm_squared();
    let (c1, c2) = rodrigues_coefficients(theta2);
    let av = a.cross(v);
    let aav = a.cross(&av);
    v + av * c1 + aav * c2
}

/// (sin θ / θ, (1 − cos θ) / θ²) with Taylor fallbacks near zero.
fn rodrigues_coefficients<T: Real>(theta2: T) -> (T, T) {
    if theta2 < real(1e-14) {
        (
            T::one() - theta2 * real(1.0 / 6.0),
            real::<T>(0.5) - theta2 * real(1.0 / 24.0),
        )
    } else {
        let theta = theta2.sqrt();
        ((theta.sin()) / theta, (T::one() - theta.cos()) / theta2)
    }
}

/// Jacobian of `rotate_axis_angle(a, v)` with respect to `a` (3×3).
///
/// Closed form from Gallego & Yezzi: for a ≠ 0,
/// ∂R/∂aᵢ = (aᵢ[a]ₓ + [a × (I − R)eᵢ]ₓ) / |a|² · R,
/// with the first-order limit −[v]ₓ at a = 0.
pub fn rotate_axis_angle_jacobian<T: Real>(a: &Vector3<T>, v: &Vector3<T>) -> Matrix3<T> {
    let theta2 = a.norm_squared();
    if theta2 < real(1e-12) {
        // J ≈ −[v]ₓ + ½([eⱼ]ₓ[a]ₓ + [a]ₓ[eⱼ]ₓ)v, accurate to O(|a|²).
        let mut jac = -skew(v);
        let ka = skew(a);
        for j in 0..3 {
            let mut e = Vector3::zeros();
            e[j] = T::one();
            let col = (skew(&e) * ka + ka * skew(&e)) * v * real::<T>(0.5);
            let sum = Vector3::from(jac.column(j)) + col;
            jac.set_column(j, &sum);
        }
        return jac;
    }
    let rot = rotation_from_axis_angle(a);
    let rv = rot * v;
    let inv_theta2 = T::one() / theta2;
    let mut jac = Matrix3::zeros();
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = T::one();
        let term = (skew(a) * a[j] + skew(&(a.cross(&(e - rot * e))))) * inv_theta2;
        jac.set_column(j, &(term * rv));
    }
    jac
}

/// Sum of an iterator of values in a deterministic order (plain left fold);
/// used so energy reductions are independent of thread count.
pub fn stable_sum<T: Real>(values: impl Iterator<Item = T>) -> T {
    values.fold(T::zero(), |acc, x| acc + x)
}
