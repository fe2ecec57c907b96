//! The worked indefinite-metric models: the C[0,1] flip involution on a
//! sampling grid, the modified Schrodinger representation of the abnormal
//! CCR on a symmetric finite-difference grid, and the two-level
//! transformation model with its eigenvalue trichotomy.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cmatrix::{eig2x2, inner, vec_norm, vec_scale, vec_sub, CMatrix};
use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockSpec};
use crate::krein::{KreinTriplet, NormClass};
use crate::report::{fmt_g17, CheckReport};
use crate::Scalar;

/// Symmetric grid q_k = (k - m) * (L/m) on [-L, L] with an odd point count,
/// so that q = 0 is a grid point and parity is an exact permutation.
#[derive(Clone, Debug)]
pub struct GridSpec<T> {
    pub points: usize,
    pub half_width: T,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(points: usize, half_width: T) -> Result<Self> {
        if points < 3 || points % 2 == 0 {
            return Err(Error::Grid(format!(
                "need an odd point count >= 3, got {}",
                points
            )));
        }
        if !(half_width > T::zero()) {
            return Err(Error::Grid("half width must be positive".into()));
        }
        Ok(GridSpec { points, half_width })
    }

    /// Exactly antisymmetric sample points: q_{n-1-k} = -q_k as floats.
    pub fn samples(&self) -> Vec<T> {
        let m = (self.points - 1) / 2;
        let step = self.half_width / T::approx(m as f64);
        (0..self.points)
            .map(|k| T::approx(k as f64 - m as f64) * step)
            .collect()
    }
}

/// The flip representation of continuous functions on [0,1]: eta reverses the
/// grid, multiplication operators are diagonal, and the dagger of
/// multiplication by f is multiplication by conj(f(1-x)).
#[derive(Clone, Debug)]
pub struct C01Flip<T> {
    grid: Vec<T>,
    triplet: KreinTriplet<T>,
    pub report: CheckReport,
}

pub fn c01_flip_rep<T: Scalar>(points: usize) -> Result<C01Flip<T>> {
    if points < 3 || points % 2 == 0 {
        return Err(Error::Grid(format!(
            "the flip fixes x = 1/2, so the grid must be odd with >= 3 points; got {}",
            points
        )));
    }
    let n = points;
    let grid: Vec<T> = (0..n)
        .map(|k| T::approx(k as f64) / T::approx((n - 1) as f64))
        .collect();
    let eta = CMatrix::from_fn(n, n, |i, j| {
        if i + j == n - 1 {
            Complex::one()
        } else {
            Complex::zero()
        }
    });
    let triplet = KreinTriplet::new(eta)?;

    let mut report = CheckReport::new("models::c01_flip_rep");
    let tol = 1e-13;

    let mult = |f: &dyn Fn(T) -> Complex<T>| -> CMatrix<T> {
        let diag: Vec<Complex<T>> = grid.iter().map(|&x| f(x)).collect();
        CMatrix::from_diag(&diag)
    };

    // The constant function is fixed by the dagger.
    let one_op = mult(&|_| Complex::one());
    let const_res = triplet.dagger_adjoint(&one_op)?.diff_norm(&one_op)?;
    report.push("c01_constant_selfadjoint", const_res.to_f64(), tol);

    // Witness f1(x) = 1 - 2x: dagger of multiplication matches sampled
    // conj(f1(1-x)), and f1~ f1 is the nonpositive function -(1-2x)^2.
    let two = T::approx(2.0);
    let f1 = mult(&|x| Complex::new(T::one() - two * x, T::zero()));
    let f1_dagger_expected = {
        let diag: Vec<Complex<T>> = grid
            .iter()
            .map(|&x| Complex::new(T::one() - two * (T::one() - x), T::zero()))
            .collect();
        CMatrix::from_diag(&diag)
    };
    let dag_res = triplet
        .dagger_adjoint(&f1)?
        .diff_norm(&f1_dagger_expected)?;
    report.push("c01_dagger_multiplication_match", dag_res.to_f64(), tol);

    let product = triplet.dagger_adjoint(&f1)?.mul(&f1)?;
    let at_zero = product.at(0, 0);
    report.push(
        "c01_witness_value_at_zero",
        (at_zero + Complex::one()).norm().to_f64(),
        tol,
    );
    let mid = (n - 1) / 2;
    report.push(
        "c01_witness_value_at_half",
        product.at(mid, mid).norm().to_f64(),
        tol,
    );
    let mut positive_part = T::zero();
    for k in 0..n {
        positive_part = positive_part.max(product.at(k, k).re);
    }
    report.push(
        "c01_witness_nonpositive",
        positive_part.max(T::zero()).to_f64(),
        tol,
    );
    report.classification = Some("indefinite_involution".to_string());
    report.note("witness f1(x) = 1-2x has (f1~ f1)(x) = -(1-2x)^2 <= 0");

    Ok(C01Flip {
        grid,
        triplet,
        report,
    })
}

impl<T: Scalar> C01Flip<T> {
    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn eta(&self) -> &CMatrix<T> {
        self.triplet.eta()
    }

    pub fn triplet(&self) -> &KreinTriplet<T> {
        &self.triplet
    }

    /// Multiplication operator from samples along the grid.
    pub fn mult(&self, samples: &[Complex<T>]) -> Result<CMatrix<T>> {
        if samples.len() != self.grid.len() {
            return Err(Error::Shape {
                op: "c01_mult",
                left: (samples.len(), 1),
                right: (self.grid.len(), 1),
            });
        }
        Ok(CMatrix::from_diag(samples))
    }
}

/// Operators of the modified Schrodinger representation on a symmetric grid.
#[derive(Clone, Debug)]
pub struct PauliOps<T> {
    pub p_hat: CMatrix<T>,
    pub q_hat: CMatrix<T>,
    pub a: CMatrix<T>,
    pub a_star: CMatrix<T>,
    pub a_dagger: CMatrix<T>,
    pub r: CMatrix<T>,
}

#[derive(Clone, Debug)]
pub struct PauliRep<T> {
    pub ops: PauliOps<T>,
    pub grid: Vec<T>,
    pub report: CheckReport,
}

/// `R m* R` computed by index reversal; exact because the parity operator is
/// a permutation.
fn reverse_dagger<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    let n = m.rows();
    CMatrix::from_fn(n, n, |i, j| m.at(n - 1 - j, n - 1 - i).conj())
}

fn reverse_both<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    let n = m.rows();
    CMatrix::from_fn(n, n, |i, j| m.at(n - 1 - i, n - 1 - j))
}

/// Discretized abnormal-CCR representation: central differences with zero
/// ghost values beyond the grid (Dirichlet), the diagonal position operator,
/// and the parity reversal R. The parity block is exact on a symmetric grid;
/// the commutator defect is the O(h^2) price of the stencil.
pub fn pauli_rep<T: Scalar>(grid: &GridSpec<T>) -> Result<PauliRep<T>> {
    let n = grid.points;
    let q = grid.samples();
    let m = (n - 1) / 2;
    let h = grid.half_width / T::approx(m as f64);
    let c = T::one() / (T::approx(2.0) * h);

    let mut d = CMatrix::zeros(n, n);
    for j in 0..n {
        if j + 1 < n {
            d.set(j, j + 1, Complex::new(c, T::zero()));
        }
        if j >= 1 {
            d.set(j, j - 1, Complex::new(-c, T::zero()));
        }
    }
    let p_hat = d.scale(Complex::new(T::zero(), -T::one()));
    let q_diag: Vec<Complex<T>> = q.iter().map(|&x| Complex::new(x, T::zero())).collect();
    let q_hat = CMatrix::from_diag(&q_diag);
    let r = CMatrix::from_fn(n, n, |i, j| {
        if i + j == n - 1 {
            Complex::one()
        } else {
            Complex::zero()
        }
    });

    let inv_sqrt2 = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let a = p_hat
        .sub(&q_hat.scale(Complex::new(T::zero(), T::one())))?
        .scale(inv_sqrt2);
    let a_star = a.adjoint();
    let a_dagger = reverse_dagger(&a);

    let mut report = CheckReport::new("models::pauli_rep");
    let exact_tol = 1e-13;

    let parity_d = reverse_both(&d).add(&d)?.frobenius_norm();
    report.push("pauli_parity_anticommutation", parity_d.to_f64(), exact_tol);
    let parity_q = reverse_both(&q_hat).add(&q_hat)?.frobenius_norm();
    report.push("pauli_q_parity", parity_q.to_f64(), exact_tol);
    let a_res = a_dagger.add(&a_star)?.frobenius_norm();
    report.push("pauli_a_dagger_plus_a_star", a_res.to_f64(), exact_tol);
    let p_res = reverse_dagger(&p_hat).add(&p_hat)?.frobenius_norm();
    report.push("pauli_p_dagger", p_res.to_f64(), exact_tol);
    let q_res = reverse_dagger(&q_hat).add(&q_hat)?.frobenius_norm();
    report.push("pauli_q_dagger", q_res.to_f64(), exact_tol);

    // O(h^2) commutator defect on the sampled Gaussian.
    let phi: Vec<Complex<T>> = q
        .iter()
        .map(|&x| Complex::new((-(x * x) / T::approx(2.0)).exp(), T::zero()))
        .collect();
    let defect = gaussian_commutator_defect(&a, &a_dagger, &phi)?;
    report.push("pauli_gaussian_commutator_defect", defect.to_f64(), 1e-2);
    report.note(format!(
        "grid step h = {}; the commutator defect is the O(h^2) stencil error",
        fmt_g17(h.to_f64())
    ));
    report.note("central differences use zero ghost values beyond the grid");

    Ok(PauliRep {
        ops: PauliOps {
            p_hat,
            q_hat,
            a,
            a_star,
            a_dagger,
            r,
        },
        grid: q,
        report,
    })
}

/// `norm(([a, a_dagger] + 1) phi) / norm(phi)` evaluated by matrix-vector
/// products.
pub fn gaussian_commutator_defect<T: Scalar>(
    a: &CMatrix<T>,
    a_dagger: &CMatrix<T>,
    phi: &[Complex<T>],
) -> Result<T> {
    let ad_phi = a.mul_vec(&a_dagger.mul_vec(phi)?)?;
    let da_phi = a_dagger.mul_vec(&a.mul_vec(phi)?)?;
    let mut defect = vec_sub(&ad_phi, &da_phi);
    for (d, p) in defect.iter_mut().zip(phi.iter()) {
        *d = *d + *p;
    }
    Ok(vec_norm(&defect) / vec_norm(phi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParticleKind {
    Bose,
    Fermi,
}

/// Statistics choice for the normal particle A and the abnormal particle B.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Combo {
    pub a: ParticleKind,
    pub b: ParticleKind,
}

impl Combo {
    pub const ALL: [Combo; 4] = [
        Combo {
            a: ParticleKind::Bose,
            b: ParticleKind::Bose,
        },
        Combo {
            a: ParticleKind::Bose,
            b: ParticleKind::Fermi,
        },
        Combo {
            a: ParticleKind::Fermi,
            b: ParticleKind::Bose,
        },
        Combo {
            a: ParticleKind::Fermi,
            b: ParticleKind::Fermi,
        },
    ];

    pub fn parse(s: &str) -> Result<Combo> {
        let kind = |ch: u8| match ch {
            b'b' => Ok(ParticleKind::Bose),
            b'f' => Ok(ParticleKind::Fermi),
            other => Err(Error::Domain(format!(
                "combo letters must be 'b' or 'f', got {:?}",
                other as char
            ))),
        };
        let bytes = s.as_bytes();
        if bytes.len() != 2 {
            return Err(Error::Domain(format!(
                "combo must be two letters like bb, bf, fb, ff; got {}",
                s
            )));
        }
        Ok(Combo {
            a: kind(bytes[0])?,
            b: kind(bytes[1])?,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match (self.a, self.b) {
            (ParticleKind::Bose, ParticleKind::Bose) => "bb",
            (ParticleKind::Bose, ParticleKind::Fermi) => "bf",
            (ParticleKind::Fermi, ParticleKind::Bose) => "fb",
            (ParticleKind::Fermi, ParticleKind::Fermi) => "ff",
        }
    }
}

/// Parameters of the two-level transformation model.
#[derive(Clone, Debug)]
pub struct ModelParams<T> {
    pub m_a: T,
    pub m_b: T,
    pub g: Complex<T>,
    pub combo: Combo,
    pub cutoff: usize,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(m_a: T, m_b: T, g: Complex<T>, combo: Combo, cutoff: usize) -> Result<Self> {
        if !(m_a > T::zero()) || !(m_b > T::zero()) {
            return Err(Error::Domain("masses must be positive".into()));
        }
        if cutoff < 2 {
            return Err(Error::Domain(
                "bosonic factors need a cutoff of at least 2".into(),
            ));
        }
        Ok(ModelParams {
            m_a,
            m_b,
            g,
            combo,
            cutoff,
        })
    }
}

/// Restriction of the Hamiltonian to span{a_A' Omega, a_B' Omega}; the same
/// matrix for every statistics combo.
pub fn two_level_matrix<T: Scalar>(p: &ModelParams<T>) -> CMatrix<T> {
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex::new(p.m_a, T::zero()),
        (0, 1) => -p.g,
        (1, 0) => p.g.conj(),
        _ => Complex::new(p.m_b, T::zero()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumClass {
    TwoReal,
    OneRealNeutral,
    ComplexPair,
}

impl SpectrumClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumClass::TwoReal => "two_real",
            SpectrumClass::OneRealNeutral => "one_real_neutral",
            SpectrumClass::ComplexPair => "complex_pair",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport<T: Scalar> {
    pub classification: SpectrumClass,
    pub eigenvalues: [Complex<T>; 2],
    pub krein_norms: Vec<NormClass>,
    pub discriminant: T,
    pub defective: bool,
}

/// Trichotomy of the restricted Hamiltonian by the discriminant
/// `(m_A - m_B)^2 - 4|g|^2`, with the Krein norm classes of the eigenvectors
/// under eta_V = diag(1, -1).
pub fn classify_spectrum<T: Scalar>(p: &ModelParams<T>) -> Result<SpectrumReport<T>> {
    let diff = p.m_a - p.m_b;
    let disc = diff * diff - T::approx(4.0) * p.g.norm_sqr();
    let total = p.m_a + p.m_b;
    let band = T::approx(1e-12) * total * total;

    let matrix = two_level_matrix(p);
    let eig = eig2x2(&matrix)?;
    let eta_v = KreinTriplet::from_signs(&[1, -1]);

    let classification = if disc.abs() <= band {
        SpectrumClass::OneRealNeutral
    } else if disc > T::zero() {
        SpectrumClass::TwoReal
    } else {
        SpectrumClass::ComplexPair
    };

    let krein_norms = match classification {
        SpectrumClass::TwoReal => eig
            .vectors
            .iter()
            .map(|v| eta_v.vector_norm_class(v))
            .collect::<Result<Vec<_>>>()?,
        SpectrumClass::OneRealNeutral => {
            vec![eta_v.vector_norm_class(&eig.vectors[0])?]
        }
        SpectrumClass::ComplexPair => Vec::new(),
    };

    Ok(SpectrumReport {
        classification,
        eigenvalues: eig.values,
        krein_norms,
        discriminant: disc,
        defective: eig.defective,
    })
}

/// The full tensor-product model: Hamiltonian, fundamental symmetry, and a
/// report checking dagger-hermiticity, the rewritten star form, the vacuum
/// excitation norms, and the invariant two-level restriction.
#[derive(Clone, Debug)]
pub struct FullModel<T: Scalar> {
    pub h: CMatrix<T>,
    pub eta: CMatrix<T>,
    pub restriction: CMatrix<T>,
    pub star_gap: T,
    pub report: CheckReport,
}

fn factor_ops<T: Scalar>(
    kind: ParticleKind,
    cutoff: usize,
    sign: i8,
) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let eta1 = CMatrix::from_diag(&[Complex::new(T::approx(sign as f64), T::zero())]);
    let spec = match kind {
        ParticleKind::Bose => FockSpec::bose(1, cutoff, eta1)?,
        ParticleKind::Fermi => FockSpec::fermi(1, eta1)?,
    };
    let basis = FockBasis::new(spec);
    Ok((basis.annihilator(0), basis.second_quantization()?))
}

pub fn full_model<T: Scalar>(p: &ModelParams<T>) -> Result<FullModel<T>> {
    let (a_local, _) = factor_ops::<T>(p.combo.a, p.cutoff, 1)?;
    let (b_local, gamma_b) = factor_ops::<T>(p.combo.b, p.cutoff, -1)?;
    let dim_a = a_local.rows();
    let dim_b = b_local.rows();
    let id_a = CMatrix::identity(dim_a);
    let id_b = CMatrix::identity(dim_b);

    // A and B commute by plain tensor placement, for fermionic combos too.
    let a = a_local.kron(&id_b);
    let b = id_a.kron(&b_local);
    let eta = id_a.kron(&gamma_b);
    let triplet = KreinTriplet::new(eta.clone())?;

    let a_dag = triplet.dagger_adjoint(&a)?;
    let b_dag = triplet.dagger_adjoint(&b)?;
    let scalar = |x: T| Complex::new(x, T::zero());

    let h = a_dag
        .mul(&a)?
        .scale(scalar(p.m_a))
        .sub(&b_dag.mul(&b)?.scale(scalar(p.m_b)))?
        .add(&a_dag.mul(&b)?.scale(p.g))?
        .add(&b_dag.mul(&a)?.scale(p.g.conj()))?;

    let mut report = CheckReport::new("models::full_model");
    let tol = 1e-12;

    // Rewritten involution form: H = mA a*a + mB b*b + g a*b - conj(g) b*a.
    let h_star_form = a
        .adjoint()
        .mul(&a)?
        .scale(scalar(p.m_a))
        .add(&b.adjoint().mul(&b)?.scale(scalar(p.m_b)))?
        .add(&a.adjoint().mul(&b)?.scale(p.g))?
        .sub(&b.adjoint().mul(&a)?.scale(p.g.conj()))?;
    report.push(
        "model_rewritten_form",
        h.diff_norm(&h_star_form)?.to_f64(),
        tol,
    );

    let conj_h = eta.mul(&h.adjoint())?.mul(&eta)?;
    report.push(
        "model_dagger_hermiticity",
        conj_h.diff_norm(&h)?.to_f64(),
        tol,
    );

    // Vacuum excitation norms: (a' vac | a' vac) = 1, (b' vac | b' vac) = -1.
    let dim = h.rows();
    let mut vacuum = vec![Complex::<T>::zero(); dim];
    vacuum[0] = Complex::one();
    let va = a_dag.mul_vec(&vacuum)?;
    let vb = b_dag.mul_vec(&vacuum)?;
    let na = triplet.form(&va, &va)?;
    let nb = triplet.form(&vb, &vb)?;
    report.push(
        "model_vacuum_adag_norm",
        (na - Complex::one()).norm().to_f64(),
        0.0,
    );
    report.push(
        "model_vacuum_bdag_norm",
        (nb + Complex::one()).norm().to_f64(),
        0.0,
    );

    // Restriction to V = span{a' vac, b' vac} and its invariance.
    let basis_v = [va.clone(), vb.clone()];
    let mut restriction = CMatrix::zeros(2, 2);
    let mut invariance = T::zero();
    for (j, vj) in basis_v.iter().enumerate() {
        let hv = h.mul_vec(vj)?;
        let mut coeffs = [Complex::<T>::zero(); 2];
        for (i, vi) in basis_v.iter().enumerate() {
            coeffs[i] = inner(vi, &hv)?;
            restriction.set(i, j, coeffs[i]);
        }
        let projected = crate::cmatrix::vec_add(
            &vec_scale(coeffs[0], &basis_v[0]),
            &vec_scale(coeffs[1], &basis_v[1]),
        );
        invariance = invariance.max(vec_norm(&vec_sub(&hv, &projected)));
    }
    report.push("model_v_invariance", invariance.to_f64(), tol);

    let expected = two_level_matrix(p);
    report.push(
        "model_restriction_match",
        restriction.diff_norm(&expected)?.to_f64(),
        tol,
    );

    // H is never *-self-adjoint for g != 0: report the gap against the
    // guaranteed lower bound min(0.1, sqrt(2) |g|).
    let star_gap = h.diff_norm(&h.adjoint())?;
    if p.g.norm() > T::zero() {
        let threshold = T::approx(0.1).min(T::approx(2.0).sqrt() * p.g.norm());
        let shortfall = (threshold - star_gap).max(T::zero());
        report.push("model_star_gap", shortfall.to_f64(), 0.0);
        report.note(format!(
            "norm(H* - H) = {} while norm(eta H* eta - H) = {}",
            fmt_g17(star_gap.to_f64()),
            fmt_g17(conj_h.diff_norm(&h)?.to_f64())
        ));
    } else {
        report.note("g = 0: H is *-self-adjoint and the model decouples");
    }
    report.param("combo", p.combo.as_str());

    Ok(FullModel {
        h,
        eta,
        restriction,
        star_gap,
        report,
    })
}
