//! 2×2 helpers, generic over [`Scalar`].

use crate::jets::Scalar;

pub type Vec2<S> = [S; 2];
pub type Mat2<S> = [[S; 2]; 2];

#[inline]
pub fn det<S: Scalar>(m: &Mat2<S>) -> S {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Inverse of `m`, or `None` when the determinant's value is zero or not finite.
pub fn inverse<S: Scalar>(m: &Mat2<S>) -> Option<Mat2<S>> {
    let d = det(m);
    let dv = d.value();
    if dv == 0.0 || !dv.is_finite() {
        return None;
    }
    let inv = d.recip();
    Some([
        [m[1][1] * inv, -m[0][1] * inv],
        [-m[1][0] * inv, m[0][0] * inv],
    ])
}

#[inline]
pub fn mat_vec<S: Scalar>(m: &Mat2<S>, v: &Vec2<S>) -> Vec2<S> {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

#[inline]
pub fn dot<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>) -> S {
    a[0] * b[0] + a[1] * b[1]
}

/// `mᵢⱼ uⁱ vʲ`
#[inline]
pub fn bilinear<S: Scalar>(m: &Mat2<S>, u: &Vec2<S>, v: &Vec2<S>) -> S {
    dot(u, &mat_vec(m, v))
}

#[inline]
pub fn quad<S: Scalar>(m: &Mat2<S>, v: &Vec2<S>) -> S {
    bilinear(m, v, v)
}

pub fn mat_mul<S: Scalar>(a: &Mat2<S>, b: &Mat2<S>) -> Mat2<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub fn transpose<S: Scalar>(m: &Mat2<S>) -> Mat2<S> {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

/// `Jᵀ m J`
pub fn congruence<S: Scalar>(m: &Mat2<S>, j: &Mat2<S>) -> Mat2<S> {
    mat_mul(&transpose(j), &mat_mul(m, j))
}

pub fn frobenius(m: &Mat2<f64>) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn norm2(v: &Vec2<f64>) -> f64 {
    v[0].hypot(v[1])
}

pub fn sub_mat(a: &Mat2<f64>, b: &Mat2<f64>) -> Mat2<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

/// The rank-one matrix `w wᵀ` with `w = (-x², x¹)`, so that
/// `yᵀ W y = (x¹y² - x²y¹)²`.
pub fn rotation_square<S: Scalar>(x: &Vec2<S>) -> Mat2<S> {
    [
        [x[1] * x[1], -(x[0] * x[1])],
        [-(x[0] * x[1]), x[0] * x[0]],
    ]
}
