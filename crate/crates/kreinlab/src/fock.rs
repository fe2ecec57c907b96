//! Truncated bosonic and exact fermionic Fock representations of the
//! eta-CCR/eta-CAR relations, second quantization, Weyl operators, and the
//! FP ghost system.
//!
//! Representation rule: annihilators are the standard ones (antilinear in the
//! one-particle argument), while creators take eta-twisted arguments, so that
//! `a(f)a'(g) -+ a'(g)a(f) = <f|eta g> I` and `a'(f)` is the Gamma(eta)-dagger
//! of `a(f)`. Fermionic modes use the alternating-sign chain construction;
//! bosonic modes are placed by tensor position. Bosonic creators annihilate
//! the top occupation state, so every CCR assertion is made on the compressed
//! subspace of occupations at most cutoff-1.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cmatrix::{inner, CMatrix};
use crate::error::{Error, Result};
use crate::krein::KreinTriplet;
use crate::report::CheckReport;
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Bose { cutoff: usize },
    Fermi,
}

/// One-particle data: statistics, mode count, and the one-particle
/// fundamental symmetry eta1.
#[derive(Clone, Debug)]
pub struct FockSpec<T> {
    pub statistics: Statistics,
    pub modes: usize,
    pub eta1: CMatrix<T>,
}

impl<T: Scalar> FockSpec<T> {
    pub fn bose(modes: usize, cutoff: usize, eta1: CMatrix<T>) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::Domain("bosonic cutoff must be at least 1".into()));
        }
        Self::validated(Statistics::Bose { cutoff }, modes, eta1)
    }

    pub fn fermi(modes: usize, eta1: CMatrix<T>) -> Result<Self> {
        Self::validated(Statistics::Fermi, modes, eta1)
    }

    fn validated(statistics: Statistics, modes: usize, eta1: CMatrix<T>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Domain("need at least one mode".into()));
        }
        if eta1.shape() != (modes, modes) {
            return Err(Error::Shape {
                op: "fock_spec",
                left: eta1.shape(),
                right: (modes, modes),
            });
        }
        // Reuse the Krein triplet validation of self-adjoint unitarity.
        KreinTriplet::new(eta1.clone())?;
        let spec = FockSpec {
            statistics,
            modes,
            eta1,
        };
        if spec.total_dim_checked().is_none() {
            return Err(Error::Domain(
                "Fock dimension exceeds the desk-scale budget".into(),
            ));
        }
        Ok(spec)
    }

    pub fn max_occupation(&self) -> usize {
        match self.statistics {
            Statistics::Bose { cutoff } => cutoff,
            Statistics::Fermi => 1,
        }
    }

    fn total_dim_checked(&self) -> Option<usize> {
        let radix = self.max_occupation() + 1;
        let mut dim = 1usize;
        for _ in 0..self.modes {
            dim = dim.checked_mul(radix)?;
            if dim > 20_000_000 {
                return None;
            }
        }
        Some(dim)
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim_checked().expect("validated at construction")
    }
}

/// Occupation-number basis, enumerated lexicographically with mode 1 most
/// significant; the vacuum is state 0.
#[derive(Clone, Debug)]
pub struct FockBasis<T> {
    spec: FockSpec<T>,
    states: Vec<Vec<u32>>,
    dim: usize,
}

impl<T: Scalar> FockBasis<T> {
    pub fn new(spec: FockSpec<T>) -> Self {
        let radix = spec.max_occupation() + 1;
        let d = spec.modes;
        let dim = spec.total_dim();
        let mut states = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut occ = vec![0u32; d];
            let mut rest = idx;
            for k in (0..d).rev() {
                occ[k] = (rest % radix) as u32;
                rest /= radix;
            }
            states.push(occ);
        }
        FockBasis { spec, states, dim }
    }

    pub fn spec(&self) -> &FockSpec<T> {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn index_of(&self, occ: &[u32]) -> usize {
        let radix = self.spec.max_occupation() + 1;
        occ.iter().fold(0usize, |acc, &n| acc * radix + n as usize)
    }

    pub fn vacuum(&self) -> Vec<Complex<T>> {
        let mut v = vec![Complex::zero(); self.dim];
        v[0] = Complex::one();
        v
    }

    /// Standard annihilator of mode `k` (0-based). Fermionic modes carry the
    /// alternating-sign chain so distinct modes anticommute.
    pub fn annihilator(&self, k: usize) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (idx, occ) in self.states.iter().enumerate() {
            if occ[k] == 0 {
                continue;
            }
            let mut target = occ.clone();
            target[k] -= 1;
            let tidx = self.index_of(&target);
            let amp = match self.spec.statistics {
                Statistics::Bose { .. } => T::approx(occ[k] as f64).sqrt(),
                Statistics::Fermi => {
                    let swaps: u32 = occ[..k].iter().sum();
                    if swaps % 2 == 0 {
                        T::one()
                    } else {
                        -T::one()
                    }
                }
            };
            m.set(tidx, idx, Complex::new(amp, T::zero()));
        }
        m
    }

    /// Standard annihilator `a(f) = sum conj(f_k) a_k`, antilinear in `f`.
    pub fn ann(&self, f: &[Complex<T>]) -> Result<CMatrix<T>> {
        if f.len() != self.spec.modes {
            return Err(Error::Shape {
                op: "ann",
                left: (f.len(), 1),
                right: (self.spec.modes, 1),
            });
        }
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (k, coeff) in f.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            m = m.add(&self.annihilator(k).scale(coeff.conj()))?;
        }
        Ok(m)
    }

    /// Standard creator `a*(f) = sum f_k a_k*`, linear in `f`.
    pub fn cre(&self, f: &[Complex<T>]) -> Result<CMatrix<T>> {
        Ok(self.ann(f)?.adjoint())
    }

    pub fn eta1_apply(&self, f: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.spec.eta1.mul_vec(f)
    }

    /// Eta-twisted creator: the standard creator of `eta1 f`. This is the
    /// Gamma(eta)-dagger of `ann(f)`.
    pub fn eta_cre(&self, f: &[Complex<T>]) -> Result<CMatrix<T>> {
        let tf = self.eta1_apply(f)?;
        self.cre(&tf)
    }

    /// The (annihilator, eta-creator) pair for a one-particle vector.
    pub fn ladder_ops(&self, f: &[Complex<T>]) -> Result<(CMatrix<T>, CMatrix<T>)> {
        Ok((self.ann(f)?, self.eta_cre(f)?))
    }

    fn diagonal_signs(&self, tol: f64) -> Result<Vec<i8>> {
        let d = self.spec.modes;
        let eta = &self.spec.eta1;
        let t = T::approx(tol);
        let mut signs = Vec::with_capacity(d);
        for i in 0..d {
            for j in 0..d {
                if i != j && eta.at(i, j).norm() > t {
                    return Err(Error::Contract(
                        "eta1 is not diagonal in the computational basis; \
                         supply a diagonalizing unitary"
                            .into(),
                    ));
                }
            }
            let v = eta.at(i, i);
            if (v - Complex::one()).norm() <= t {
                signs.push(1);
            } else if (v + Complex::one()).norm() <= t {
                signs.push(-1);
            } else {
                return Err(Error::Contract(format!(
                    "eta1 diagonal entry {} is not within tolerance of +-1",
                    i
                )));
            }
        }
        Ok(signs)
    }

    fn occupation_sign_diagonal(&self, signs: &[i8]) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (idx, occ) in self.states.iter().enumerate() {
            let neg: u32 = occ
                .iter()
                .zip(signs.iter())
                .filter(|(_, &s)| s < 0)
                .map(|(&n, _)| n)
                .sum();
            let v = if neg % 2 == 0 { T::one() } else { -T::one() };
            m.set(idx, idx, Complex::new(v, T::zero()));
        }
        m
    }

    /// Second quantization of a diagonal-(+-1) eta1:
    /// `Gamma(eta)|n1..nd> = prod_k eta_kk^{n_k} |n1..nd>`.
    pub fn second_quantization(&self) -> Result<CMatrix<T>> {
        let signs = self.diagonal_signs(1e-12)?;
        Ok(self.occupation_sign_diagonal(&signs))
    }

    /// Second quantization of a non-diagonal eta1 through an explicit
    /// diagonalizer: `Gamma(eta) = Gamma(u) Gamma(d) Gamma(u)*` with
    /// `d = u* eta1 u` diagonal +-1. Exact for fermions; for bosons the
    /// change of frame is cutoff-truncated.
    pub fn second_quantization_with(&self, u: &CMatrix<T>) -> Result<CMatrix<T>> {
        let d = self.spec.modes;
        if u.shape() != (d, d) {
            return Err(Error::Shape {
                op: "second_quantization_with",
                left: u.shape(),
                right: (d, d),
            });
        }
        let tol = T::approx(1e-10);
        if u.adjoint().mul(u)?.diff_norm(&CMatrix::identity(d))? > tol {
            return Err(Error::Contract("diagonalizer is not unitary".into()));
        }
        let diag = u.adjoint().mul(&self.spec.eta1)?.mul(u)?;
        let mut signs = Vec::with_capacity(d);
        for i in 0..d {
            for j in 0..d {
                if i != j && diag.at(i, j).norm() > tol {
                    return Err(Error::Contract(
                        "supplied unitary does not diagonalize eta1".into(),
                    ));
                }
            }
            let v = diag.at(i, i);
            if (v - Complex::one()).norm() <= tol {
                signs.push(1i8);
            } else if (v + Complex::one()).norm() <= tol {
                signs.push(-1i8);
            } else {
                return Err(Error::Contract(
                    "diagonalized eta1 is not a sign matrix".into(),
                ));
            }
        }
        let gamma_d = self.occupation_sign_diagonal(&signs);
        let gamma_u = self.frame_change(u)?;
        gamma_u.mul(&gamma_d)?.mul(&gamma_u.adjoint())
    }

    /// Multiplicative lift of a one-particle unitary to Fock space, built
    /// column by column by applying creators of the transformed modes to the
    /// vacuum.
    fn frame_change(&self, u: &CMatrix<T>) -> Result<CMatrix<T>> {
        let d = self.spec.modes;
        let mut creators = Vec::with_capacity(d);
        for k in 0..d {
            let col: Vec<Complex<T>> = (0..d).map(|i| u.at(i, k)).collect();
            creators.push(self.cre(&col)?);
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (idx, occ) in self.states.iter().enumerate() {
            let mut v = self.vacuum();
            let mut norm_factor = T::one();
            for k in (0..d).rev() {
                for step in 0..occ[k] {
                    v = creators[k].mul_vec(&v)?;
                    norm_factor = norm_factor * T::approx((step + 1) as f64);
                }
            }
            let scale = Complex::new(T::one() / norm_factor.sqrt(), T::zero());
            for (i, val) in v.iter().enumerate() {
                out.set(i, idx, *val * scale);
            }
        }
        Ok(out)
    }

    /// Diagonal projection onto states with every occupation at most
    /// `max_occ`.
    pub fn occupation_projector(&self, max_occ: u32) -> CMatrix<T> {
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for (idx, occ) in self.states.iter().enumerate() {
            if occ.iter().all(|&n| n <= max_occ) {
                p.set(idx, idx, Complex::one());
            }
        }
        p
    }

    /// Projection onto the truncation-safe subspace: occupations at most
    /// cutoff-1 for bosons, everything for fermions.
    pub fn safe_projector(&self) -> CMatrix<T> {
        match self.spec.statistics {
            Statistics::Bose { cutoff } => self.occupation_projector(cutoff as u32 - 1),
            Statistics::Fermi => CMatrix::identity(self.dim),
        }
    }

    /// Weyl operator `W(f) = exp(i Phi(f))` with the field operator built
    /// from standard (eta = I) ladder operators.
    pub fn weyl_operator(&self, f: &[Complex<T>], tol: T) -> Result<CMatrix<T>> {
        if let Statistics::Fermi = self.spec.statistics {
            return Err(Error::Contract(
                "Weyl operators require bosonic statistics".into(),
            ));
        }
        let a = self.ann(f)?;
        let inv_sqrt2 = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        let phi = a.add(&a.adjoint())?.scale(inv_sqrt2);
        phi.scale(Complex::new(T::zero(), T::one())).mat_exp(tol)
    }

    /// Vacuum expectation under the Krein form induced by Gamma(eta):
    /// `(Omega | X Omega) = <Omega | Gamma X Omega>`.
    pub fn krein_vacuum_expectation(
        &self,
        x: &CMatrix<T>,
        gamma: &CMatrix<T>,
    ) -> Result<Complex<T>> {
        let v = x.mul_vec(&self.vacuum())?;
        inner(&self.vacuum(), &gamma.mul_vec(&v)?)
    }

    /// Residuals for the eta-CCR / eta-CAR relation families on the given
    /// sample vectors, plus the Gamma(eta) covariance and dagger checks.
    pub fn relation_report(&self, samples: &[Vec<Complex<T>>]) -> Result<CheckReport> {
        if samples.len() < 2 {
            return Err(Error::Domain(
                "relation_report needs at least two sample vectors".into(),
            ));
        }
        let signs = self.diagonal_signs(1e-12)?;
        let gamma = self.second_quantization()?;
        let is_bose = matches!(self.spec.statistics, Statistics::Bose { .. });
        let p = self.safe_projector();
        let compress = |m: &CMatrix<T>| -> Result<CMatrix<T>> {
            if is_bose {
                p.mul(m)?.mul(&p)
            } else {
                Ok(m.clone())
            }
        };
        let bracket = |x: &CMatrix<T>, y: &CMatrix<T>| -> Result<CMatrix<T>> {
            let xy = x.mul(y)?;
            let yx = y.mul(x)?;
            if is_bose {
                xy.sub(&yx)
            } else {
                xy.add(&yx)
            }
        };

        let mut report = CheckReport::new("fock::relation_report");
        let tol = 1e-12;

        let mut anns = Vec::new();
        let mut cres = Vec::new();
        for f in samples {
            let (a, c) = self.ladder_ops(f)?;
            anns.push(a);
            cres.push(c);
        }

        let mut mixed = T::zero();
        let mut annann = T::zero();
        let mut crecre = T::zero();
        let mut covariance = T::zero();
        let mut dagger = T::zero();
        for (i, f) in samples.iter().enumerate() {
            for (j, g) in samples.iter().enumerate() {
                let rhs_coeff = inner(f, &self.eta1_apply(g)?)?;
                let rhs = CMatrix::identity(self.dim).scale(rhs_coeff);
                let defect = compress(&bracket(&anns[i], &cres[j])?.sub(&rhs)?)?;
                mixed = mixed.max(defect.frobenius_norm());

                annann = annann.max(bracket(&anns[i], &anns[j])?.frobenius_norm());
                crecre = crecre.max(bracket(&cres[i], &cres[j])?.frobenius_norm());
            }
            let conj = gamma.mul(&anns[i])?.mul(&gamma)?;
            let twisted = self.ann(&self.eta1_apply(f)?)?;
            covariance = covariance.max(conj.diff_norm(&twisted)?);

            let dg = gamma.mul(&anns[i].adjoint())?.mul(&gamma)?;
            dagger = dagger.max(dg.diff_norm(&cres[i])?);
        }

        report.push("fock_mixed_relation", mixed.to_f64(), tol);
        report.push("fock_ann_ann", annann.to_f64(), tol);
        report.push("fock_cre_cre", crecre.to_f64(), tol);
        report.push("fock_gamma_covariance", covariance.to_f64(), tol);
        report.push("fock_dagger_creator", dagger.to_f64(), tol);

        let mut indefinite = false;
        let mut vacuum_norm_residual = 0f64;
        for (k, &s) in signs.iter().enumerate() {
            let mut e = vec![Complex::<T>::zero(); self.spec.modes];
            e[k] = Complex::one();
            let v = self.eta_cre(&e)?.mul_vec(&self.vacuum())?;
            let norm = inner(&v, &gamma.mul_vec(&v)?)?;
            let expected = Complex::new(T::approx(s as f64), T::zero());
            vacuum_norm_residual = vacuum_norm_residual.max((norm - expected).norm().to_f64());
            if s < 0 {
                indefinite = true;
                report.note(format!(
                    "indefinite metric: (a_dag(e{0}) vac | a_dag(e{0}) vac) = {1}",
                    k + 1,
                    crate::report::fmt_g17(norm.re.to_f64())
                ));
            }
        }
        report.push("fock_vacuum_excitation_norm", vacuum_norm_residual, tol);
        report.classification = Some(
            if indefinite {
                "indefinite_metric"
            } else {
                "positive_definite_metric"
            }
            .to_string(),
        );
        if is_bose {
            report.note("CCR residuals are compressed to occupations <= cutoff-1 in every mode");
        }
        Ok(report)
    }
}

/// FP ghost system on 2P fermionic modes: hermitian zero modes built from the
/// first pair, plain ladder modes for the rest, and the pair-swap eta.
#[derive(Clone, Debug)]
pub struct FpGhosts<T> {
    pub pairs: usize,
    pub basis: FockBasis<T>,
    pub ops: BTreeMap<String, CMatrix<T>>,
    pub gamma: CMatrix<T>,
}

/// The eta with `eta e_{2n} = -e_{2n+1}` and `eta e_{2n+1} = -e_{2n}` on 2P
/// one-particle modes.
pub fn fp_eta1<T: Scalar>(pairs: usize) -> CMatrix<T> {
    CMatrix::from_fn(2 * pairs, 2 * pairs, |i, j| {
        if i / 2 == j / 2 && i != j {
            -Complex::one()
        } else {
            Complex::zero()
        }
    })
}

/// The explicit pair diagonalizer: columns `(e_{2n} - e_{2n+1})/sqrt(2)`
/// (eigenvalue +1) and `(e_{2n} + e_{2n+1})/sqrt(2)` (eigenvalue -1).
pub fn fp_diagonalizer<T: Scalar>(pairs: usize) -> CMatrix<T> {
    let s = T::FRAC_1_SQRT_2();
    CMatrix::from_fn(2 * pairs, 2 * pairs, |i, j| {
        if i / 2 != j / 2 {
            return Complex::zero();
        }
        let value = if j % 2 == 0 {
            if i % 2 == 0 {
                s
            } else {
                -s
            }
        } else {
            s
        };
        Complex::new(value, T::zero())
    })
}

pub fn fp_ghost_ops<T: Scalar>(pairs: usize) -> Result<FpGhosts<T>> {
    if pairs == 0 {
        return Err(Error::Domain("need at least one ghost pair".into()));
    }
    let spec = FockSpec::fermi(2 * pairs, fp_eta1(pairs))?;
    let basis = FockBasis::new(spec);
    let gamma = basis.second_quantization_with(&fp_diagonalizer(pairs))?;
    let dagger = |m: &CMatrix<T>| -> Result<CMatrix<T>> { gamma.mul(&m.adjoint())?.mul(&gamma) };

    let mut ops = BTreeMap::new();
    let inv_sqrt2 = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let a0 = basis.annihilator(0);
    let a1 = basis.annihilator(1);
    ops.insert("c0".to_string(), a0.add(&dagger(&a0)?)?.scale(inv_sqrt2));
    ops.insert("cbar0".to_string(), a1.add(&dagger(&a1)?)?.scale(inv_sqrt2));
    for n in 1..pairs {
        ops.insert(format!("c{}", n), basis.annihilator(2 * n));
        ops.insert(format!("cbar{}", n), basis.annihilator(2 * n + 1));
    }
    Ok(FpGhosts {
        pairs,
        basis,
        ops,
        gamma,
    })
}

fn fp_parse_name(name: &str) -> (bool, usize, bool) {
    let daggered = name.ends_with('~');
    let base = name.trim_end_matches('~');
    if let Some(rest) = base.strip_prefix("cbar") {
        (true, rest.parse().unwrap(), daggered)
    } else {
        (false, base[1..].parse().unwrap(), daggered)
    }
}

/// Expected anticommutator of two FP operators: `-I` for the pairings the
/// relations single out, 0 for everything else.
fn fp_expected<T: Scalar>(left: &str, right: &str, dim: usize) -> CMatrix<T> {
    let (bar_l, idx_l, dag_l) = fp_parse_name(left);
    let (bar_r, idx_r, dag_r) = fp_parse_name(right);
    let minus_i = CMatrix::identity(dim).scale(-Complex::<T>::one());
    if bar_l != bar_r && idx_l == 0 && idx_r == 0 {
        // {c0, cbar0} = -I; daggers are irrelevant since both are hermitian.
        return minus_i;
    }
    if bar_l != bar_r && idx_l >= 1 && idx_l == idx_r && (dag_l ^ dag_r) {
        // {c_m, cbar_m~} = {c_m~, cbar_m} = -I.
        return minus_i;
    }
    CMatrix::zeros(dim, dim)
}

/// Checks every relation of the FP block: the zero-mode pairing, hermiticity
/// of the zero modes, the cross pairings for m,n >= 1, and all vanishing
/// anticommutators.
pub fn fp_relation_report<T: Scalar>(ghosts: &FpGhosts<T>) -> Result<CheckReport> {
    let dim = ghosts.basis.dim();
    let dagger = |m: &CMatrix<T>| -> Result<CMatrix<T>> {
        ghosts.gamma.mul(&m.adjoint())?.mul(&ghosts.gamma)
    };
    let mut report = CheckReport::new("fock::fp_relation_report");
    let tol = 1e-12;

    let c0 = &ghosts.ops["c0"];
    let cbar0 = &ghosts.ops["cbar0"];
    let anti = |x: &CMatrix<T>, y: &CMatrix<T>| -> Result<CMatrix<T>> { x.mul(y)?.add(&y.mul(x)?) };
    let zero_mode = anti(c0, cbar0)?
        .add(&CMatrix::identity(dim))?
        .frobenius_norm();
    report.push("fp_zero_mode_pairing", zero_mode.to_f64(), tol);

    let herm = dagger(c0)?
        .diff_norm(c0)?
        .max(dagger(cbar0)?.diff_norm(cbar0)?);
    report.push("fp_zero_mode_hermitian", herm.to_f64(), tol);

    let gamma_check = ghosts
        .gamma
        .mul(&ghosts.gamma)?
        .diff_norm(&CMatrix::identity(dim))?
        .max(ghosts.gamma.diff_norm(&ghosts.gamma.adjoint())?);
    report.push("fp_gamma_selfadjoint_unitary", gamma_check.to_f64(), tol);

    // Full anticommutator table over the ops and their daggers.
    let mut table: Vec<(String, CMatrix<T>)> = Vec::new();
    for (name, op) in &ghosts.ops {
        table.push((name.clone(), op.clone()));
        table.push((format!("{}~", name), dagger(op)?));
    }
    let mut cross = T::zero();
    let mut vanishing = T::zero();
    for (i, (ln, lm)) in table.iter().enumerate() {
        for (rn, rm) in table.iter().skip(i) {
            let got = anti(lm, rm)?;
            let expected = fp_expected::<T>(ln, rn, dim);
            let res = got.diff_norm(&expected)?;
            if expected.frobenius_norm() > T::zero() {
                cross = cross.max(res);
            } else {
                vanishing = vanishing.max(res);
            }
        }
    }
    if ghosts.pairs >= 2 {
        report.push("fp_cross_pairing_max", cross.to_f64(), tol);
    }
    report.push("fp_vanishing_max", vanishing.to_f64(), tol);
    report.note(format!(
        "{} ghost pairs on a fermionic space of dimension {}",
        ghosts.pairs, dim
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;
    type M = CMatrix<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn sign_eta(signs: &[i8]) -> M {
        let diag: Vec<C> = signs.iter().map(|&s| c(s as f64, 0.0)).collect();
        M::from_diag(&diag)
    }

    fn fermi_basis(signs: &[i8]) -> FockBasis<f64> {
        FockBasis::new(FockSpec::fermi(signs.len(), sign_eta(signs)).unwrap())
    }

    fn bose_basis(signs: &[i8], cutoff: usize) -> FockBasis<f64> {
        FockBasis::new(FockSpec::bose(signs.len(), cutoff, sign_eta(signs)).unwrap())
    }

    fn basis_vec(n: usize, k: usize) -> Vec<C> {
        let mut v = vec![c(0.0, 0.0); n];
        v[k] = c(1.0, 0.0);
        v
    }

    #[test]
    fn standard_single_mode_car() {
        let b = fermi_basis(&[1]);
        let a = b.ann(&[c(1.0, 0.0)]).unwrap();
        let want = M::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(a, want);
        let anti = a
            .mul(&a.adjoint())
            .unwrap()
            .add(&a.adjoint().mul(&a).unwrap())
            .unwrap();
        assert!(anti.diff_norm(&M::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn abnormal_single_mode_car() {
        // eta1 = (-1): the eta creator is -a*, and a etacre + etacre a = -I.
        let b = fermi_basis(&[-1]);
        let (a, ec) = b.ladder_ops(&[c(1.0, 0.0)]).unwrap();
        assert!(ec.diff_norm(&a.adjoint().scale(c(-1.0, 0.0))).unwrap() < 1e-15);
        let anti = a.mul(&ec).unwrap().add(&ec.mul(&a).unwrap()).unwrap();
        assert!(anti.diff_norm(&M::identity(2).scale(c(-1.0, 0.0))).unwrap() < 1e-15);
    }

    #[test]
    fn abnormal_single_mode_ccr_on_safe_states() {
        // eta1 = (-1), cutoff 3: (a etacre - etacre a)|n> = -|n> for n <= 2.
        let b = bose_basis(&[-1], 3);
        let (a, ec) = b.ladder_ops(&[c(1.0, 0.0)]).unwrap();
        let comm = a.mul(&ec).unwrap().sub(&ec.mul(&a).unwrap()).unwrap();
        for n in 0..=2 {
            let v = basis_vec(4, n);
            let got = comm.mul_vec(&v).unwrap();
            let want = crate::cmatrix::vec_scale(c(-1.0, 0.0), &v);
            assert!(crate::cmatrix::vec_norm(&crate::cmatrix::vec_sub(&got, &want)) < 1e-14);
        }
    }

    #[test]
    fn ccr_truncation_defect_on_top_state() {
        // Uncompressed defect acts on |M> as -(M+1) times the sign.
        for (&sign, &m) in [1i8, -1].iter().zip([4usize, 6].iter()) {
            let b = bose_basis(&[sign], m);
            let (a, ec) = b.ladder_ops(&[c(1.0, 0.0)]).unwrap();
            let comm = a.mul(&ec).unwrap().sub(&ec.mul(&a).unwrap()).unwrap();
            let defect = comm
                .sub(&M::identity(m + 1).scale(c(sign as f64, 0.0)))
                .unwrap();
            let top = basis_vec(m + 1, m);
            let got = defect.mul_vec(&top).unwrap();
            let want = crate::cmatrix::vec_scale(c(-(sign as f64) * (m as f64 + 1.0), 0.0), &top);
            assert!(crate::cmatrix::vec_norm(&crate::cmatrix::vec_sub(&got, &want)) < 1e-12);
            // And the compressed defect vanishes.
            let p = b.safe_projector();
            assert!(p.mul(&defect).unwrap().mul(&p).unwrap().frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn car_exactness_all_sign_patterns_up_to_three_modes() {
        for d in 1..=3usize {
            for mask in 0..(1u32 << d) {
                let signs: Vec<i8> = (0..d)
                    .map(|k| if mask & (1 << k) == 0 { 1 } else { -1 })
                    .collect();
                let b = fermi_basis(&signs);
                let mut samples: Vec<Vec<C>> = (0..d).map(|k| basis_vec(d, k)).collect();
                samples.push((0..d).map(|k| c(0.3 + k as f64 * 0.1, -0.2)).collect());
                let report = b.relation_report(&samples).unwrap();
                for check in &report.checks {
                    assert!(
                        check.pass,
                        "{} failed for signs {:?}: {}",
                        check.name, signs, check.residual
                    );
                }
            }
        }
    }

    #[test]
    fn bose_relation_report_standard_sector() {
        let b = bose_basis(&[1], 6);
        let samples = vec![vec![c(1.0, 0.0)], vec![c(0.5, 0.5)]];
        let report = b.relation_report(&samples).unwrap();
        assert!(report.all_pass());
        assert_eq!(
            report.classification.as_deref(),
            Some("positive_definite_metric")
        );
    }

    #[test]
    fn fermi_report_flags_indefinite_metric() {
        let b = fermi_basis(&[-1]);
        let report = b
            .relation_report(&[vec![c(1.0, 0.0)], vec![c(0.0, 1.0)]])
            .unwrap();
        assert!(report.all_pass());
        assert_eq!(report.classification.as_deref(), Some("indefinite_metric"));
        assert!(report.notes.iter().any(|n| n.contains("-1")));
    }

    #[test]
    fn relation_report_requires_two_samples() {
        let b = fermi_basis(&[1]);
        assert!(b.relation_report(&[vec![c(1.0, 0.0)]]).is_err());
    }

    #[test]
    fn second_quantization_examples() {
        let b = bose_basis(&[-1], 3);
        let g = b.second_quantization().unwrap();
        let want = M::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(g.diff_norm(&want).unwrap() < 1e-15);

        let h = fermi_basis(&[1, 1]);
        assert!(
            h.second_quantization()
                .unwrap()
                .diff_norm(&M::identity(4))
                .unwrap()
                < 1e-15
        );

        // Covariance Gamma a Gamma = -a for eta1 = -1.
        let a = b.ann(&[c(1.0, 0.0)]).unwrap();
        let conj = g.mul(&a).unwrap().mul(&g).unwrap();
        assert!(conj.diff_norm(&a.scale(c(-1.0, 0.0))).unwrap() < 1e-14);
    }

    #[test]
    fn gamma_is_involutive_unitary_and_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in 1..=3usize {
            let signs: Vec<i8> = (0..d)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect();
            for basis in [fermi_basis(&signs), bose_basis(&signs, 3)] {
                let g = basis.second_quantization().unwrap();
                let dim = basis.dim();
                assert!(g.mul(&g).unwrap().diff_norm(&M::identity(dim)).unwrap() < 1e-13);
                assert!(g.diff_norm(&g.adjoint()).unwrap() < 1e-13);
                let f: Vec<C> = (0..d)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let a = basis.ann(&f).unwrap();
                let lhs = g.mul(&a).unwrap().mul(&g).unwrap();
                let rhs = basis.ann(&basis.eta1_apply(&f).unwrap()).unwrap();
                assert!(lhs.diff_norm(&rhs).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn non_diagonal_eta_needs_diagonalizer() {
        let spec = FockSpec::fermi(2, fp_eta1(1)).unwrap();
        let b = FockBasis::new(spec);
        assert!(matches!(b.second_quantization(), Err(Error::Contract(_))));
        let g = b.second_quantization_with(&fp_diagonalizer(1)).unwrap();
        assert!(g.mul(&g).unwrap().diff_norm(&M::identity(4)).unwrap() < 1e-13);
        assert!(g.diff_norm(&g.adjoint()).unwrap() < 1e-13);
        // Gamma implements the eta twist on annihilators.
        let f = vec![c(0.7, 0.1), c(-0.3, 0.4)];
        let a = b.ann(&f).unwrap();
        let lhs = g.mul(&a).unwrap().mul(&g).unwrap();
        let rhs = b.ann(&b.eta1_apply(&f).unwrap()).unwrap();
        assert!(lhs.diff_norm(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn equivalence_transform_matches_twisted_relations() {
        // t(f) = a(U*f) satisfies the (U eta U*)-relations.
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for d in 1..=3usize {
            let signs: Vec<i8> = (0..d)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect();
            let b = fermi_basis(&signs);
            let u = crate::krein::tests_support::rand_unitary(&mut rng, d);
            let eta_prime = u.mul(&sign_eta(&signs)).unwrap().mul(&u.adjoint()).unwrap();
            for _ in 0..5 {
                let f: Vec<C> = (0..d)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let g: Vec<C> = (0..d)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let uf = u.adjoint().mul_vec(&f).unwrap();
                let ug = u.adjoint().mul_vec(&g).unwrap();
                let t_ann = b.ann(&uf).unwrap();
                let t_cre = b.eta_cre(&ug).unwrap();
                let anti = t_ann
                    .mul(&t_cre)
                    .unwrap()
                    .add(&t_cre.mul(&t_ann).unwrap())
                    .unwrap();
                let rhs_coeff = inner(&f, &eta_prime.mul_vec(&g).unwrap()).unwrap();
                let rhs = M::identity(b.dim()).scale(rhs_coeff);
                assert!(anti.diff_norm(&rhs).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn weyl_vacuum_law_single_mode() {
        // Series oracle for exp(-norm^2/4).
        fn exp_series(x: f64) -> f64 {
            let mut term = 1.0f64;
            let mut sum = 1.0f64;
            let mut k = 1.0f64;
            while term.abs() > 1e-18 {
                term *= x / k;
                sum += term;
                k += 1.0;
            }
            sum
        }
        assert!((exp_series(-0.25) - 0.7788007830714049).abs() < 1e-15);

        let b = bose_basis(&[-1], 48);
        let gamma = b.second_quantization().unwrap();
        for &amp in &[0.25f64, 0.5, 1.0] {
            let f = vec![c(amp, 0.0)];
            let w = b.weyl_operator(&f, 1e-14).unwrap();
            let got = b.krein_vacuum_expectation(&w, &gamma).unwrap();
            let want = exp_series(-amp * amp / 4.0);
            assert!(
                (got - c(want, 0.0)).norm() <= 1e-6,
                "amp {}: got {} want {}",
                amp,
                got,
                want
            );
        }
        // W(0) = I.
        let w0 = b.weyl_operator(&[c(0.0, 0.0)], 1e-14).unwrap();
        assert!(w0.diff_norm(&M::identity(49)).unwrap() < 1e-12);
        // Fermi statistics are rejected.
        assert!(fermi_basis(&[1])
            .weyl_operator(&[c(1.0, 0.0)], 1e-12)
            .is_err());
    }

    #[test]
    fn weyl_group_law_and_inverse() {
        let b = bose_basis(&[1], 32);
        let f = vec![c(0.6, 0.2)];
        let g = vec![c(-0.3, 0.5)];
        let wf = b.weyl_operator(&f, 1e-14).unwrap();
        let wg = b.weyl_operator(&g, 1e-14).unwrap();
        let sum: Vec<C> = crate::cmatrix::vec_add(&f, &g);
        let wsum = b.weyl_operator(&sum, 1e-14).unwrap();
        let phase_arg = -inner(&f, &g).unwrap().im / 2.0;
        let phase = c(phase_arg.cos(), phase_arg.sin());
        let p = b.occupation_projector(16);
        let lhs = p.mul(&wf.mul(&wg).unwrap()).unwrap().mul(&p).unwrap();
        let rhs = p.mul(&wsum.scale(phase)).unwrap().mul(&p).unwrap();
        assert!(lhs.diff_norm(&rhs).unwrap() < 1e-8);

        // W(f) W(-f) = I within cutoff tolerance.
        let wneg = b
            .weyl_operator(&crate::cmatrix::vec_scale(c(-1.0, 0.0), &f), 1e-14)
            .unwrap();
        let prod = p.mul(&wf.mul(&wneg).unwrap()).unwrap().mul(&p).unwrap();
        let id = p.mul(&M::identity(33)).unwrap().mul(&p).unwrap();
        assert!(prod.diff_norm(&id).unwrap() < 1e-9);
    }

    #[test]
    fn weyl_group_law_defect_decreases_with_cutoff() {
        let f = vec![c(0.9, 0.1)];
        let g = vec![c(0.4, -0.6)];
        let mut residuals = Vec::new();
        for &m in &[16usize, 32, 48] {
            let b = bose_basis(&[1], m);
            let wf = b.weyl_operator(&f, 1e-14).unwrap();
            let wg = b.weyl_operator(&g, 1e-14).unwrap();
            let wsum = b
                .weyl_operator(&crate::cmatrix::vec_add(&f, &g), 1e-14)
                .unwrap();
            let phase_arg = -inner(&f, &g).unwrap().im / 2.0;
            let phase = c(phase_arg.cos(), phase_arg.sin());
            let p = b.occupation_projector(m as u32 / 2);
            let defect = p
                .mul(&wf.mul(&wg).unwrap().sub(&wsum.scale(phase)).unwrap())
                .unwrap()
                .mul(&p)
                .unwrap()
                .frobenius_norm();
            residuals.push(defect);
        }
        // Monotone decrease within 10%, with an absolute floor for rounding.
        for w in residuals.windows(2) {
            assert!(
                w[1] <= 1.1 * w[0] + 1e-13,
                "residuals not decreasing: {:?}",
                residuals
            );
        }
    }

    #[test]
    fn fp_ghost_relations() {
        let g1 = fp_ghost_ops::<f64>(1).unwrap();
        let r1 = fp_relation_report(&g1).unwrap();
        for check in &r1.checks {
            assert!(check.pass, "{}: {}", check.name, check.residual);
        }
        // c0 cbar0 + cbar0 c0 = -I, spelled out.
        let c0 = &g1.ops["c0"];
        let cbar0 = &g1.ops["cbar0"];
        let anti = c0.mul(cbar0).unwrap().add(&cbar0.mul(c0).unwrap()).unwrap();
        assert!(anti.diff_norm(&M::identity(4).scale(c(-1.0, 0.0))).unwrap() < 1e-13);

        let g2 = fp_ghost_ops::<f64>(2).unwrap();
        assert_eq!(g2.basis.dim(), 16);
        let r2 = fp_relation_report(&g2).unwrap();
        for check in &r2.checks {
            assert!(check.pass, "{}: {}", check.name, check.residual);
        }
        assert!(fp_ghost_ops::<f64>(0).is_err());
    }

    #[test]
    fn ladder_rejects_wrong_lengths() {
        let b = fermi_basis(&[1, -1]);
        assert!(b.ann(&[c(1.0, 0.0)]).is_err());
        assert!(FockSpec::bose(1, 0, sign_eta(&[1])).is_err());
    }

    #[test]
    fn abnormal_boson_annihilator_is_odd_for_the_occupation_grading() {
        // a shifts the occupation parity by one, so it is odd with respect
        // to Gamma(-1).
        use crate::krein::{KreinTriplet, Parity, Representation};
        use std::collections::BTreeMap;
        let b = bose_basis(&[-1], 5);
        let gamma = b.second_quantization().unwrap();
        let space = KreinTriplet::new(gamma).unwrap();
        let mut gens = BTreeMap::new();
        gens.insert("a".to_string(), b.annihilator(0));
        let rep = Representation::new(space, gens, None).unwrap();
        let mut parts = BTreeMap::new();
        parts.insert("a".to_string(), Parity::Odd);
        assert!(rep.grading_residual(&parts).unwrap() <= 1e-12);
    }
}
