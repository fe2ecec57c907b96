//! The Pauli family of involutions on 2x2 matrices: `dagger_i = Ad(sigma_i)`
//! composed with the hermitian conjugate, indefiniteness witnesses, and the
//! membership predicate for the real Lie algebras `u_{dagger_i}(2)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cmatrix::{eig2x2, CMatrix};
use crate::error::{Error, Result};
use crate::Scalar;

/// Index into the Pauli family sigma_0..sigma_3 (sigma_0 = I).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub fn new(i: u8) -> Result<Self> {
        if i > 3 {
            return Err(Error::Domain(format!("Pauli index {} not in 0..=3", i)));
        }
        Ok(PauliIndex(i))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

pub fn sigma<T: Scalar>(i: PauliIndex) -> CMatrix<T> {
    let zero = Complex::zero();
    let one = Complex::one();
    let mi = Complex::new(T::zero(), -T::one());
    let pi = Complex::new(T::zero(), T::one());
    let rows = match i.0 {
        0 => [[one, zero], [zero, one]],
        1 => [[zero, one], [one, zero]],
        2 => [[zero, mi], [pi, zero]],
        _ => [[one, zero], [zero, -one]],
    };
    CMatrix::from_fn(2, 2, |r, c| rows[r][c])
}

/// `x^{dagger_i} = sigma_i x* sigma_i`; an involution, anti-multiplicative.
pub fn pauli_dagger<T: Scalar>(i: PauliIndex, x: &CMatrix<T>) -> Result<CMatrix<T>> {
    if x.shape() != (2, 2) {
        return Err(Error::Shape {
            op: "pauli_dagger",
            left: x.shape(),
            right: (2, 2),
        });
    }
    let s = sigma::<T>(i);
    s.mul(&x.adjoint())?.mul(&s)
}

/// A pair (x, y) certifying indefiniteness: sp(x'x) meets (0, inf) and
/// sp(y'y) meets (-inf, 0) under dagger_i, with both 2x2 spectra attached.
#[derive(Clone, Debug)]
pub struct Witness<T: Scalar> {
    pub x: CMatrix<T>,
    pub y: CMatrix<T>,
    pub sp_x: [Complex<T>; 2],
    pub sp_y: [Complex<T>; 2],
}

/// Fixed indefiniteness witness for `dagger_i`, i in {1,2,3}. The unit is
/// always the positive witness; the negative witness is a Pauli matrix with
/// `y^{dagger_i} y = -I`.
pub fn indefiniteness_witness<T: Scalar>(i: PauliIndex) -> Result<Witness<T>> {
    if i.0 == 0 {
        return Err(Error::NoWitness(
            "dagger_0 is the standard conjugate and positive definite".into(),
        ));
    }
    let x = CMatrix::identity(2);
    let y = if i.0 == 1 {
        sigma::<T>(PauliIndex(3))
    } else {
        sigma::<T>(PauliIndex(1))
    };
    let xx = pauli_dagger(i, &x)?.mul(&x)?;
    let yy = pauli_dagger(i, &y)?.mul(&y)?;
    let sp_x = eig2x2(&xx)?.values;
    let sp_y = eig2x2(&yy)?.values;
    Ok(Witness { x, y, sp_x, sp_y })
}

/// Membership in `u_{dagger_i}(2) = {X : X^{dagger_i} + X = 0}`.
pub fn lie_membership<T: Scalar>(i: PauliIndex, x: &CMatrix<T>, tol: T) -> Result<bool> {
    let d = pauli_dagger(i, x)?;
    Ok(d.add(x)?.frobenius_norm() <= tol)
}

pub const LIE_MEMBERSHIP_TOL: f64 = 1e-10;
