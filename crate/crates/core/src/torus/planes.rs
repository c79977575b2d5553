use crate::element::LinearElement;
use crate::error::Result;

use super::field::TrigVectorField;

/// `<P∇_X X, P∇_Y Y> − ¼|P(∇_Y X + (∇X)ᵀY)|² + ½|[X,Y]|² − ½|P(∇_X Y + (∇X)ᵀY)|²`,
/// the MHD numerator on the plane of `(X, 0)` and `(0, A(Y))`.
pub fn mhd_mixed_plane(x: &TrigVectorField, y: &TrigVectorField) -> Result<f64> {
    x.require_divergence_free()?;
    y.require_divergence_free()?;
    let pxx = x.directional_derivative(x).leray_project();
    let pyy = y.directional_derivative(y).leray_project();
    let jt = x.jacobian_transpose_apply(y);
    let a = y.directional_derivative(x).add(&jt).leray_project();
    let b = x.directional_derivative(y).add(&jt).leray_project();
    let br = x.lie_bracket(y);
    Ok(pxx.inner(&pyy) - 0.25 * a.norm_sq() + 0.5 * br.norm_sq() - 0.5 * b.norm_sq())
}

/// `¼|P(∇_{Y1}Y2 + ∇_{Y2}Y1)|² − <P∇_{Y1}Y1, P∇_{Y2}Y2>`, the MHD numerator on
/// the plane of `(0, A(Y1))` and `(0, A(Y2))`.
pub fn mhd_pure_magnetic_plane(y1: &TrigVectorField, y2: &TrigVectorField) -> Result<f64> {
    y1.require_divergence_free()?;
    y2.require_divergence_free()?;
    let sym = y1
        .directional_derivative(y2)
        .add(&y2.directional_derivative(y1))
        .leray_project();
    let p11 = y1.directional_derivative(y1).leray_project();
    let p22 = y2.directional_derivative(y2).leray_project();
    Ok(0.25 * sym.norm_sq() - p11.inner(&p22))
}

/// `<Q∇_X X, Q∇_Y Y> − |Q∇_X Y|²`, the numerator of volume-preserving
/// diffeomorphisms of the flat torus.
pub fn arnold_flat_curvature(x: &TrigVectorField, y: &TrigVectorField) -> Result<f64> {
    x.require_divergence_free()?;
    y.require_divergence_free()?;
    let qxx = x.directional_derivative(x).gradient_part();
    let qyy = y.directional_derivative(y).gradient_part();
    let qxy = x.directional_derivative(y).gradient_part();
    Ok(qxx.inner(&qyy) - qxy.norm_sq())
}
