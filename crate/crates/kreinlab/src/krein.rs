//! Krein triplets: a finite-dimensional Hilbert space together with a
//! self-adjoint unitary fundamental symmetry eta. The indefinite form is
//! `(v|w) = <v|eta w>`, the dagger adjoint is `eta T* eta`, and a Z2-covariant
//! representation can always be manufactured by doubling.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cmatrix::{inner, CMatrix};
use crate::error::{Error, Result};
use crate::Scalar;

/// Tolerance for accepting a matrix as a fundamental symmetry.
const SYMMETRY_TOL: f64 = 1e-12;

/// Sign classification of a vector under the indefinite form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormClass {
    Positive,
    Negative,
    Neutral,
}

impl NormClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NormClass::Positive => "positive",
            NormClass::Negative => "negative",
            NormClass::Neutral => "neutral",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A Hilbert space of a fixed finite dimension with a self-adjoint unitary
/// fundamental symmetry.
#[derive(Clone, Debug)]
pub struct KreinTriplet<T> {
    dim: usize,
    eta: CMatrix<T>,
}

/// Fundamental decomposition data: the two spectral projections of eta and
/// the signature (rank E+, rank E-).
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub e_plus: CMatrix<T>,
    pub e_minus: CMatrix<T>,
    pub signature: (usize, usize),
}

impl<T: Scalar> KreinTriplet<T> {
    /// Validates that `eta` is self-adjoint and involutive to 1e-12.
    pub fn new(eta: CMatrix<T>) -> Result<Self> {
        if !eta.is_square() {
            return Err(Error::NotSquare {
                rows: eta.rows(),
                cols: eta.cols(),
            });
        }
        let tol = T::approx(SYMMETRY_TOL) * (T::one() + eta.frobenius_norm());
        let sa = eta.diff_norm(&eta.adjoint())?;
        if sa > tol {
            return Err(Error::InvalidSymmetry(format!(
                "eta is not self-adjoint (residual {})",
                sa
            )));
        }
        let invol = eta.mul(&eta)?.diff_norm(&CMatrix::identity(eta.rows()))?;
        if invol > tol {
            return Err(Error::InvalidSymmetry(format!(
                "eta*eta differs from the identity (residual {})",
                invol
            )));
        }
        Ok(KreinTriplet {
            dim: eta.rows(),
            eta,
        })
    }

    /// The Hilbert case eta = I.
    pub fn hilbert(dim: usize) -> Self {
        KreinTriplet {
            dim,
            eta: CMatrix::identity(dim),
        }
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        let diag: Vec<Complex<T>> = signs
            .iter()
            .map(|&s| Complex::new(T::approx(s as f64), T::zero()))
            .collect();
        KreinTriplet {
            dim: signs.len(),
            eta: CMatrix::from_diag(&diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eta(&self) -> &CMatrix<T> {
        &self.eta
    }

    /// The indefinite form `(v|w) = <v|eta w>`, conjugate-linear in the first
    /// argument.
    pub fn form(&self, v: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
        if v.len() != self.dim || w.len() != self.dim {
            return Err(Error::Shape {
                op: "krein_form",
                left: (v.len(), 1),
                right: (w.len(), 1),
            });
        }
        inner(v, &self.eta.mul_vec(w)?)
    }

    /// Dagger adjoint `eta T* eta` with respect to the indefinite form.
    pub fn dagger_adjoint(&self, t: &CMatrix<T>) -> Result<CMatrix<T>> {
        if t.shape() != (self.dim, self.dim) {
            return Err(Error::Shape {
                op: "dagger_adjoint",
                left: t.shape(),
                right: (self.dim, self.dim),
            });
        }
        self.eta.mul(&t.adjoint())?.mul(&self.eta)
    }

    /// Spectral projections `E+- = (I +- eta)/2` and the signature, read off
    /// the traces.
    pub fn fundamental_decomposition(&self) -> Result<Decomposition<T>> {
        let id = CMatrix::identity(self.dim);
        let half = Complex::new(T::approx(0.5), T::zero());
        let e_plus = id.add(&self.eta)?.scale(half);
        let e_minus = id.sub(&self.eta)?.scale(half);
        let rank = |p: &CMatrix<T>| -> Result<usize> {
            let tr = p.trace();
            let rounded = tr.re.to_f64().round();
            if (tr.re.to_f64() - rounded).abs() > 1e-6 || tr.im.to_f64().abs() > 1e-6 {
                return Err(Error::InvalidSymmetry(format!(
                    "projection trace {} is not near an integer",
                    tr
                )));
            }
            Ok(rounded as usize)
        };
        let signature = (rank(&e_plus)?, rank(&e_minus)?);
        Ok(Decomposition {
            e_plus,
            e_minus,
            signature,
        })
    }

    /// Sign of `(v|v)`, with a relative neutrality band of 1e-10 against the
    /// Hilbert norm.
    pub fn vector_norm_class(&self, v: &[Complex<T>]) -> Result<NormClass> {
        let hilbert = inner(v, v)?.re;
        if hilbert.is_zero() {
            return Err(Error::Domain(
                "vector_norm_class requires a nonzero vector".into(),
            ));
        }
        let q = self.form(v, v)?.re;
        if q.abs() <= T::approx(1e-10) * hilbert {
            Ok(NormClass::Neutral)
        } else if q > T::zero() {
            Ok(NormClass::Positive)
        } else {
            Ok(NormClass::Negative)
        }
    }
}

/// A labeled family of generator matrices on a Krein triplet, optionally with
/// the images of the generators under a Z2 automorphism.
#[derive(Clone, Debug)]
pub struct Representation<T> {
    space: KreinTriplet<T>,
    generators: BTreeMap<String, CMatrix<T>>,
    alpha_images: Option<BTreeMap<String, CMatrix<T>>>,
}

impl<T: Scalar> Representation<T> {
    pub fn new(
        space: KreinTriplet<T>,
        generators: BTreeMap<String, CMatrix<T>>,
        alpha_images: Option<BTreeMap<String, CMatrix<T>>>,
    ) -> Result<Self> {
        let n = space.dim();
        for (label, g) in &generators {
            if g.shape() != (n, n) {
                return Err(Error::Contract(format!(
                    "generator {} is {}x{}, expected {}x{}",
                    label,
                    g.shape().0,
                    g.shape().1,
                    n,
                    n
                )));
            }
        }
        if let Some(images) = &alpha_images {
            if images.len() != generators.len()
                || !images.keys().all(|k| generators.contains_key(k))
            {
                return Err(Error::Contract(
                    "alpha_images must cover exactly the generator labels".into(),
                ));
            }
            for (label, g) in images {
                if g.shape() != (n, n) {
                    return Err(Error::Contract(format!(
                        "alpha image {} has wrong shape",
                        label
                    )));
                }
            }
        }
        Ok(Representation {
            space,
            generators,
            alpha_images,
        })
    }

    pub fn space(&self) -> &KreinTriplet<T> {
        &self.space
    }

    pub fn generators(&self) -> &BTreeMap<String, CMatrix<T>> {
        &self.generators
    }

    pub fn alpha_images(&self) -> Option<&BTreeMap<String, CMatrix<T>>> {
        self.alpha_images.as_ref()
    }

    /// Covariance defect of `pi(alpha(g)) = eta pi(g) eta`, maximized over
    /// the generators.
    pub fn covariance_residual(&self) -> Result<T> {
        let images = self
            .alpha_images
            .as_ref()
            .ok_or_else(|| Error::Contract("covariance_residual requires alpha_images".into()))?;
        let eta = self.space.eta();
        let mut worst = T::zero();
        for (label, g) in &self.generators {
            let conj = eta.mul(g)?.mul(eta)?;
            let res = images[label].diff_norm(&conj)?;
            if res > worst {
                worst = res;
            }
        }
        Ok(worst)
    }

    /// Grading defect against the fundamental decomposition: even generators
    /// must preserve H+-, odd generators must swap them. Returns the worst
    /// off-grading block norm over the labels in `parts`.
    pub fn grading_residual(&self, parts: &BTreeMap<String, Parity>) -> Result<T> {
        let dec = self.space.fundamental_decomposition()?;
        let mut worst = T::zero();
        for (label, parity) in parts {
            let g = self.generators.get(label).ok_or_else(|| {
                Error::Contract(format!("grading_residual: unknown label {}", label))
            })?;
            let pp = dec.e_plus.mul(g)?.mul(&dec.e_plus)?.frobenius_norm();
            let mm = dec.e_minus.mul(g)?.mul(&dec.e_minus)?.frobenius_norm();
            let pm = dec.e_plus.mul(g)?.mul(&dec.e_minus)?.frobenius_norm();
            let mp = dec.e_minus.mul(g)?.mul(&dec.e_plus)?.frobenius_norm();
            let bad = match parity {
                Parity::Even => pm + mp,
                Parity::Odd => pp + mm,
            };
            if bad > worst {
                worst = bad;
            }
        }
        Ok(worst)
    }
}

/// The Z2 doubling: given `pi(g)` and `pi(alpha(g))` on an n-dimensional
/// space, build the 2n-dimensional covariant representation
/// `pi~(g) = diag(pi(g), pi(alpha(g)))` with eta the coordinate swap. The
/// covariance residual of the result is zero by construction and the
/// signature is (n, n).
pub fn double_representation<T: Scalar>(
    gens: &BTreeMap<String, CMatrix<T>>,
    alpha_gens: &BTreeMap<String, CMatrix<T>>,
) -> Result<Representation<T>> {
    if gens.is_empty() {
        return Err(Error::Contract(
            "double_representation needs generators".into(),
        ));
    }
    if gens.len() != alpha_gens.len() || !gens.keys().all(|k| alpha_gens.contains_key(k)) {
        return Err(Error::Contract(
            "generator and alpha-image labels must agree".into(),
        ));
    }
    let n = gens.values().next().unwrap().rows();
    for m in gens.values().chain(alpha_gens.values()) {
        if m.shape() != (n, n) {
            return Err(Error::Shape {
                op: "double_representation",
                left: m.shape(),
                right: (n, n),
            });
        }
    }

    let mut doubled = BTreeMap::new();
    let mut doubled_alpha = BTreeMap::new();
    for (label, g) in gens {
        let ag = &alpha_gens[label];
        doubled.insert(label.clone(), block_diag2(g, ag));
        // alpha^2 = id, so the alpha image of the doubled generator swaps the
        // two blocks.
        doubled_alpha.insert(label.clone(), block_diag2(ag, g));
    }
    let space = KreinTriplet::new(block_swap_eta(n))?;
    Representation::new(space, doubled, Some(doubled_alpha))
}

fn block_diag2<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let n = a.rows();
    CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j < n {
            a.at(i, j)
        } else if i >= n && j >= n {
            b.at(i - n, j - n)
        } else {
            Complex::zero()
        }
    })
}

fn block_swap_eta<T: Scalar>(n: usize) -> CMatrix<T> {
    CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if (i + n == j) || (j + n == i) {
            Complex::one()
        } else {
            Complex::zero()
        }
    })
}
