//! Truncated representations of eta-Cuntz / pseudo-Cuntz algebras with the
//! chi-signed word basis: cyclic vectors of cycle length one or two, the
//! canonical endomorphism, U(d,d') actions, and unitary generator transforms.
//!
//! Sign placement: basis vectors are chosen so that the generator matrices
//! are 0/1 monomial matrices and all signs live in eta = diag(chi). Creators
//! that would leave the depth window map to zero, and every relation check is
//! compressed to labels of length at most depth-1.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::krein::{KreinTriplet, Representation};
use crate::report::CheckReport;
use crate::Scalar;

/// Multi-index over generator labels; the empty word is the vacuum label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: u8) -> Self {
        Word(vec![letter])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn prepend(&self, letter: u8) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l)?;
        }
        write!(f, ")")
    }
}

/// Sign of a word: the product of the eta diagonal over its letters.
pub fn chi_signs(word: &Word, eta_diag: &[i8]) -> Result<i8> {
    let mut sign = 1i8;
    for &l in &word.0 {
        if l == 0 || l as usize > eta_diag.len() {
            return Err(Error::Domain(format!(
                "letter {} outside generator range 1..={}",
                l,
                eta_diag.len()
            )));
        }
        sign *= eta_diag[l as usize - 1];
    }
    Ok(sign)
}

/// Strips trailing copies of the cycle word; idempotent.
pub fn canonicalize(word: &Word, cycle: &Word) -> Word {
    let mut letters = word.0.clone();
    while letters.len() >= cycle.0.len() && letters.ends_with(&cycle.0) {
        letters.truncate(letters.len() - cycle.0.len());
    }
    Word(letters)
}

/// Parameters of a truncated pseudo-Cuntz representation: signature (d, d'),
/// truncation depth, and the cyclic relation `s_cycle Omega = Omega`.
#[derive(Clone, Debug)]
pub struct PCSpec {
    d: usize,
    d_prime: usize,
    depth: usize,
    cycle: Word,
}

impl PCSpec {
    pub fn new(d: usize, d_prime: usize, depth: usize, cycle: Word) -> Result<Self> {
        let n = d + d_prime;
        if n < 2 {
            return Err(Error::Domain("need at least two generators".into()));
        }
        if depth < 2 {
            return Err(Error::Domain("depth must be at least 2".into()));
        }
        if cycle.is_empty() || cycle.len() > 2 {
            return Err(Error::Unsupported(
                "cycle words of length 1 or 2 only".into(),
            ));
        }
        for &l in &cycle.0 {
            if l == 0 || l as usize > n {
                return Err(Error::Domain(format!(
                    "cycle letter {} outside 1..={}",
                    l, n
                )));
            }
        }
        let spec = PCSpec {
            d,
            d_prime,
            depth,
            cycle,
        };
        // The cyclic identification s_cycle Omega = Omega forces
        // (Omega|Omega) = chi(cycle) (Omega|Omega); only chi = +1 is
        // consistent.
        if spec.chi(&spec.cycle)? != 1 {
            return Err(Error::Domain(
                "cycle word must have chi(cycle) = +1 for a consistent cyclic vector".into(),
            ));
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.d + self.d_prime
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    /// diag(I_d, -I_d') as a sign vector.
    pub fn eta_diag(&self) -> Vec<i8> {
        let mut signs = vec![1i8; self.d];
        signs.resize(self.d + self.d_prime, -1i8);
        signs
    }

    pub fn sign(&self, letter: u8) -> Result<i8> {
        if letter == 0 || letter as usize > self.n() {
            return Err(Error::Domain(format!(
                "letter {} outside generator range 1..={}",
                letter,
                self.n()
            )));
        }
        Ok(if (letter as usize) <= self.d { 1 } else { -1 })
    }

    pub fn chi(&self, word: &Word) -> Result<i8> {
        chi_signs(word, &self.eta_diag())
    }
}

/// A built pseudo-Cuntz representation: the canonical word labels, the 0/1
/// generator matrices, and eta = diag(chi).
#[derive(Clone, Debug)]
pub struct PCRep<T> {
    spec: PCSpec,
    basis_labels: Vec<Word>,
    generators: Vec<CMatrix<T>>,
    eta: CMatrix<T>,
}

/// Breadth-first enumeration of canonical words up to the depth, with the
/// generators acting by prepend-then-canonicalize.
pub fn build_representation<T: Scalar>(spec: &PCSpec) -> Result<PCRep<T>> {
    let n = spec.n();
    let mut labels: Vec<Word> = vec![Word::empty()];
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    index.insert(Word::empty(), 0);
    let mut level: Vec<Word> = vec![Word::empty()];
    for _ in 1..=spec.depth {
        let mut next = Vec::new();
        for word in &level {
            for letter in 1..=n as u8 {
                let candidate = canonicalize(&word.prepend(letter), spec.cycle());
                if candidate.len() == word.len() + 1 && !index.contains_key(&candidate) {
                    index.insert(candidate.clone(), labels.len());
                    labels.push(candidate.clone());
                    next.push(candidate);
                }
            }
        }
        level = next;
    }

    let dim = labels.len();
    let mut generators = Vec::with_capacity(n);
    for letter in 1..=n as u8 {
        let mut m = CMatrix::zeros(dim, dim);
        for (col, word) in labels.iter().enumerate() {
            let image = canonicalize(&word.prepend(letter), spec.cycle());
            if image.len() > spec.depth {
                continue;
            }
            let row = *index.get(&image).ok_or_else(|| {
                Error::Contract(format!("basis enumeration missed label {}", image))
            })?;
            m.set(row, col, Complex::one());
        }
        generators.push(m);
    }

    let eta_diag: Vec<Complex<T>> = labels
        .iter()
        .map(|w| {
            spec.chi(w)
                .map(|s| Complex::new(T::approx(s as f64), T::zero()))
        })
        .collect::<Result<_>>()?;
    let eta = CMatrix::from_diag(&eta_diag);

    Ok(PCRep {
        spec: spec.clone(),
        basis_labels: labels,
        generators,
        eta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformMode {
    /// Lemma-style transform `t_i = sum_j conj(Lambda_{ij}) s_j` by a unitary;
    /// the transformed family satisfies the (Lambda eta Lambda*)-relations.
    LambdaUnitary,
    /// Group action `alpha_g(s_i) = sum_j g_{ji} s_j`; membership in U(d,d')
    /// means `g eta g* = eta` and the relations are preserved.
    UDdAction,
}

/// Result of a generator transform: the new generator matrices, the N x N
/// target eta for their relations, and the mode-appropriate membership flag.
#[derive(Clone, Debug)]
pub struct TransformedGenerators<T> {
    pub generators: Vec<CMatrix<T>>,
    pub eta_target: CMatrix<T>,
    pub membership: bool,
}

impl<T: Scalar> PCRep<T> {
    pub fn spec(&self) -> &PCSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[Word] {
        &self.basis_labels
    }

    pub fn generators(&self) -> &[CMatrix<T>] {
        &self.generators
    }

    pub fn generator(&self, letter: u8) -> &CMatrix<T> {
        &self.generators[letter as usize - 1]
    }

    pub fn eta(&self) -> &CMatrix<T> {
        &self.eta
    }

    pub fn triplet(&self) -> Result<KreinTriplet<T>> {
        KreinTriplet::new(self.eta.clone())
    }

    /// Dagger of a matrix with respect to the representation's eta.
    pub fn dagger(&self, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.eta.mul(&m.adjoint())?.mul(&self.eta)
    }

    /// The N x N sign matrix diag(I_d, -I_d').
    pub fn eta_n(&self) -> CMatrix<T> {
        let diag: Vec<Complex<T>> = self
            .spec
            .eta_diag()
            .iter()
            .map(|&s| Complex::new(T::approx(s as f64), T::zero()))
            .collect();
        CMatrix::from_diag(&diag)
    }

    /// Projection onto labels of length at most `max_len`.
    pub fn length_projector(&self, max_len: usize) -> CMatrix<T> {
        let mut p = CMatrix::zeros(self.dim(), self.dim());
        for (i, w) in self.basis_labels.iter().enumerate() {
            if w.len() <= max_len {
                p.set(i, i, Complex::one());
            }
        }
        p
    }

    /// Packages the generators as a labeled representation with alpha images
    /// `alpha_eta(s_i) = eta_ii s_i`.
    pub fn to_representation(&self) -> Result<Representation<T>> {
        let mut gens = BTreeMap::new();
        let mut alphas = BTreeMap::new();
        for (k, g) in self.generators.iter().enumerate() {
            let label = format!("s{}", k + 1);
            let sign = self.spec.sign(k as u8 + 1)?;
            gens.insert(label.clone(), g.clone());
            alphas.insert(
                label,
                g.scale(Complex::new(T::approx(sign as f64), T::zero())),
            );
        }
        Representation::new(self.triplet()?, gens, Some(alphas))
    }

    /// Alpha images for the alternating-sign automorphism
    /// `s_i -> (-1)^{i-1} s_i`, independent of the representation signature.
    pub fn alternating_alpha_images(&self) -> BTreeMap<String, CMatrix<T>> {
        let mut out = BTreeMap::new();
        for (k, g) in self.generators.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out.insert(
                format!("s{}", k + 1),
                g.scale(Complex::new(T::approx(sign), T::zero())),
            );
        }
        out
    }

    pub fn labeled_generators(&self) -> BTreeMap<String, CMatrix<T>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(k, g)| (format!("s{}", k + 1), g.clone()))
            .collect()
    }

    /// The canonical endomorphism `rho(x) = sum_i eta_ii s_i x s_i^dagger`.
    pub fn rho_apply(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        if x.shape() != (self.dim(), self.dim()) {
            return Err(Error::Shape {
                op: "rho_apply",
                left: x.shape(),
                right: (self.dim(), self.dim()),
            });
        }
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (k, s) in self.generators.iter().enumerate() {
            let sign = self.spec.sign(k as u8 + 1)?;
            let term = s.mul(x)?.mul(&self.dagger(s)?)?;
            out = out.add(&term.scale(Complex::new(T::approx(sign as f64), T::zero())))?;
        }
        Ok(out)
    }

    /// Applies `pi(s_J)` to the vacuum by matrix action; the independent
    /// route for the metric check.
    pub fn word_vector(&self, word: &Word) -> Result<Vec<Complex<T>>> {
        let mut v = vec![Complex::zero(); self.dim()];
        v[0] = Complex::one();
        for &letter in word.0.iter().rev() {
            v = self.generator(letter).mul_vec(&v)?;
        }
        Ok(v)
    }

    /// Residuals of the two relation families, the chi-metric Gram check,
    /// and the covariance of alpha_eta, all compressed to labels of length
    /// at most depth-1.
    pub fn relation_residuals(&self) -> Result<CheckReport> {
        let mut report = self.relation_residuals_for(&self.generators, &self.eta_n())?;
        report.command = "cuntz::relation_residuals".to_string();

        // Metric: (s_J Omega | s_K Omega) = chi(J) delta_JK, with the left
        // side computed by matrix action rather than label bookkeeping.
        let triplet = self.triplet()?;
        let short: Vec<usize> = (0..self.dim())
            .filter(|&i| self.basis_labels[i].len() < self.spec.depth)
            .collect();
        let vectors: Vec<Vec<Complex<T>>> = short
            .iter()
            .map(|&i| self.word_vector(&self.basis_labels[i]))
            .collect::<Result<_>>()?;
        let mut metric = T::zero();
        for (a, &i) in short.iter().enumerate() {
            for (b, &j) in short.iter().enumerate() {
                let form = triplet.form(&vectors[a], &vectors[b])?;
                let expected = if i == j {
                    Complex::new(
                        T::approx(self.spec.chi(&self.basis_labels[i])? as f64),
                        T::zero(),
                    )
                } else {
                    Complex::zero()
                };
                metric = metric.max((form - expected).norm());
            }
        }
        report.push("cuntz_metric_gram", metric.to_f64(), 1e-12);

        let covariance = self.to_representation()?.covariance_residual()?;
        report.push("cuntz_covariance", covariance.to_f64(), 1e-12);
        Ok(report)
    }

    /// Relation residuals for an arbitrary generator family against a target
    /// N x N eta, using this representation's form for daggers and its depth
    /// compression.
    pub fn relation_residuals_for(
        &self,
        gens: &[CMatrix<T>],
        eta_target: &CMatrix<T>,
    ) -> Result<CheckReport> {
        let n = gens.len();
        if eta_target.shape() != (n, n) {
            return Err(Error::Shape {
                op: "relation_residuals_for",
                left: eta_target.shape(),
                right: (n, n),
            });
        }
        let dim = self.dim();
        let p = self.length_projector(self.spec.depth - 1);
        let compress = |m: &CMatrix<T>| -> Result<CMatrix<T>> { p.mul(m)?.mul(&p) };
        let id = CMatrix::identity(dim);

        let mut report = CheckReport::new("cuntz::relation_residuals_for");
        let daggers: Vec<CMatrix<T>> =
            gens.iter().map(|g| self.dagger(g)).collect::<Result<_>>()?;

        let mut toeplitz = T::zero();
        for i in 0..n {
            for j in 0..n {
                let lhs = daggers[i].mul(&gens[j])?;
                let rhs = id.scale(eta_target.at(i, j));
                let defect = compress(&lhs.sub(&rhs)?)?;
                toeplitz = toeplitz.max(defect.frobenius_norm());
            }
        }
        report.push("cuntz_toeplitz_max", toeplitz.to_f64(), 1e-12);

        let mut completeness = CMatrix::zeros(dim, dim);
        for i in 0..n {
            for j in 0..n {
                let coeff = eta_target.at(i, j);
                if coeff.is_zero() {
                    continue;
                }
                completeness = completeness.add(&gens[i].mul(&daggers[j])?.scale(coeff))?;
            }
        }
        let defect = compress(&completeness.sub(&id)?)?;
        report.push(
            "cuntz_completeness",
            defect.frobenius_norm().to_f64(),
            1e-12,
        );
        report.note(format!(
            "relation residuals compressed to word length <= {}",
            self.spec.depth - 1
        ));
        Ok(report)
    }

    /// Linear generator transform `t_i = sum_j coeff_{ji} s_j`.
    ///
    /// In `LambdaUnitary` mode the coefficients are the hermitian conjugate
    /// of `g` (so `t_i = sum_j conj(g_{ij}) s_j`), `g` must be unitary, and
    /// the transformed family satisfies the relations of
    /// `eta' = g eta g*`. In `UDdAction` mode the coefficients are `g`
    /// itself, the target eta is unchanged, and membership reports whether
    /// `g eta g* = eta`.
    pub fn transform_generators(
        &self,
        g: &CMatrix<T>,
        mode: TransformMode,
    ) -> Result<TransformedGenerators<T>> {
        let n = self.spec.n();
        if g.shape() != (n, n) {
            return Err(Error::Shape {
                op: "transform_generators",
                left: g.shape(),
                right: (n, n),
            });
        }
        let det = g.determinant()?;
        if det.norm() <= T::approx(1e-12) {
            return Err(Error::Singular(
                "transform matrix must be invertible".into(),
            ));
        }
        let eta_n = self.eta_n();
        let tol = T::approx(1e-10);
        let unitary_defect = g.adjoint().mul(g)?.diff_norm(&CMatrix::identity(n))?;
        let coeff = match mode {
            TransformMode::LambdaUnitary => {
                if unitary_defect > tol {
                    return Err(Error::Domain(
                        "lambda transform requires a unitary matrix".into(),
                    ));
                }
                g.adjoint()
            }
            TransformMode::UDdAction => g.clone(),
        };

        let mut new_gens = Vec::with_capacity(n);
        for i in 0..n {
            let mut t = CMatrix::zeros(self.dim(), self.dim());
            for (j, s) in self.generators.iter().enumerate() {
                let c = coeff.at(j, i);
                if c.is_zero() {
                    continue;
                }
                t = t.add(&s.scale(c))?;
            }
            new_gens.push(t);
        }

        let g_eta_gstar = g.mul(&eta_n)?.mul(&g.adjoint())?;
        let (eta_target, membership) = match mode {
            TransformMode::LambdaUnitary => (g_eta_gstar, unitary_defect <= tol),
            TransformMode::UDdAction => {
                let member = g_eta_gstar.diff_norm(&eta_n)? <= tol;
                (eta_n, member)
            }
        };
        Ok(TransformedGenerators {
            generators: new_gens,
            eta_target,
            membership,
        })
    }
}
