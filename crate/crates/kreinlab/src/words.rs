//! Symbolic *-algebra of words in eta-Cuntz generators with normal-form
//! rewriting, an expression parser, and numeric evaluation against a built
//! representation. This is the symbolic oracle for the matrix-level checks.
//!
//! Terms are kept in the normal form `s_J s_K~` (no dagger left of a plain
//! generator); products reduce with the single Toeplitz rule
//! `s_i~ s_j -> eta_ij`. The completeness relation
//! `sum eta_ii s_i s_i~ = I` is deliberately NOT part of the rewrite system:
//! normal forms live in the Toeplitz cover, where they are unique, and the
//! extra relation is only visible after numeric evaluation on the compressed
//! subspace.
//!
//! Expression grammar (a public contract):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := [coeff '*'] factor+ | coeff
//! factor := 's' index ['~']
//! coeff  := float | float ('+'|'-') float 'i'
//! ```
//!
//! Whitespace separates factors; `~` marks the dagger.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cmatrix::CMatrix;
use crate::cuntz::{chi_signs, PCRep, Word};
use crate::error::{Error, Result};
use crate::report::fmt_g17;
use crate::Scalar;

/// A normal-form word pair representing `s_left s_right~`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NCTerm {
    pub left: Word,
    pub right: Word,
}

impl NCTerm {
    pub fn unit() -> Self {
        NCTerm {
            left: Word::empty(),
            right: Word::empty(),
        }
    }
}

/// Finite linear combination of normal-form terms over generators 1..=n.
#[derive(Clone, Debug, PartialEq)]
pub struct NCElement<T> {
    n: usize,
    terms: BTreeMap<NCTerm, Complex<T>>,
}

impl<T: Scalar> NCElement<T> {
    pub fn zero(n: usize) -> Self {
        NCElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.add_term(NCTerm::unit(), Complex::one());
        e
    }

    pub fn monomial(n: usize, left: Word, right: Word, coeff: Complex<T>) -> Result<Self> {
        for &l in left.0.iter().chain(right.0.iter()) {
            if l == 0 || l as usize > n {
                return Err(Error::Domain(format!(
                    "letter {} outside generator range 1..={}",
                    l, n
                )));
            }
        }
        let mut e = Self::zero(n);
        e.add_term(NCTerm { left, right }, coeff);
        Ok(e)
    }

    pub fn generator(n: usize, letter: u8) -> Result<Self> {
        Self::monomial(n, Word::single(letter), Word::empty(), Complex::one())
    }

    pub fn generator_dagger(n: usize, letter: u8) -> Result<Self> {
        Self::monomial(n, Word::empty(), Word::single(letter), Complex::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<NCTerm, Complex<T>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, term: NCTerm, coeff: Complex<T>) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            Entry::Occupied(mut e) => {
                let v = *e.get() + coeff;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (term, coeff) in &other.terms {
            out.add_term(term.clone(), *coeff);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = Self::zero(self.n);
        for (term, coeff) in &self.terms {
            out.add_term(term.clone(), *coeff * c);
        }
        out
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Contract(format!(
                "elements over different generator counts: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Conjugate-linear involution: `(c, s_J s_K~) -> (conj c, s_K s_J~)`.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (term, coeff) in &self.terms {
            out.add_term(
                NCTerm {
                    left: term.right.clone(),
                    right: term.left.clone(),
                },
                coeff.conj(),
            );
        }
        out
    }

    /// The sign automorphism: each term scaled by chi(left) chi(right).
    pub fn alpha_eta(&self, eta_diag: &[i8]) -> Result<Self> {
        self.check_eta(eta_diag)?;
        let mut out = Self::zero(self.n);
        for (term, coeff) in &self.terms {
            let s = chi_signs(&term.left, eta_diag)? * chi_signs(&term.right, eta_diag)?;
            out.add_term(
                term.clone(),
                *coeff * Complex::new(T::approx(s as f64), T::zero()),
            );
        }
        Ok(out)
    }

    /// The C*-side involution `x* = alpha_eta(x~)`.
    pub fn star(&self, eta_diag: &[i8]) -> Result<Self> {
        self.dagger().alpha_eta(eta_diag)
    }

    fn check_eta(&self, eta_diag: &[i8]) -> Result<()> {
        if eta_diag.len() != self.n {
            return Err(Error::Contract(format!(
                "eta has {} signs but the element ranges over {} generators",
                eta_diag.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Canonical printed form: terms sorted by (left, right), coefficients
    /// as `a+bi` / `a-bi` with 17 significant digits.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0+0i".to_string();
        }
        let mut pieces = Vec::with_capacity(self.terms.len());
        for (term, coeff) in &self.terms {
            let mut s = format_coeff(coeff.re.to_f64(), coeff.im.to_f64());
            if !(term.left.is_empty() && term.right.is_empty()) {
                s.push('*');
                let mut factors = Vec::new();
                for &l in &term.left.0 {
                    factors.push(format!("s{}", l));
                }
                for &l in term.right.0.iter().rev() {
                    factors.push(format!("s{}~", l));
                }
                s.push_str(&factors.join(" "));
            }
            pieces.push(s);
        }
        pieces.join(" + ")
    }
}

fn format_coeff(re: f64, im: f64) -> String {
    let re = if re == 0.0 { 0.0 } else { re };
    let im = if im == 0.0 { 0.0 } else { im };
    if im >= 0.0 {
        format!("{}+{}i", fmt_g17(re), fmt_g17(im))
    } else {
        format!("{}-{}i", fmt_g17(re), fmt_g17(-im))
    }
}

/// Product of two normal-form terms under the Toeplitz reduction. Matches
/// the dagger word of the left factor against the plain word of the right
/// factor letter by letter from the left; each match contributes the eta
/// sign of that letter and any mismatch kills the product.
fn term_product(a: &NCTerm, b: &NCTerm, eta_diag: &[i8]) -> Option<(NCTerm, i8)> {
    let k1 = &a.right.0;
    let j2 = &b.left.0;
    let m = k1.len().min(j2.len());
    let mut sign = 1i8;
    for idx in 0..m {
        if k1[idx] != j2[idx] {
            return None;
        }
        sign *= eta_diag[k1[idx] as usize - 1];
    }
    let term = if k1.len() <= j2.len() {
        NCTerm {
            left: a.left.concat(&Word(j2[m..].to_vec())),
            right: b.right.clone(),
        }
    } else {
        NCTerm {
            left: a.left.clone(),
            right: b.right.concat(&Word(k1[m..].to_vec())),
        }
    };
    Some((term, sign))
}

/// Bilinear extension of the term product; the result is in normal form.
pub fn multiply<T: Scalar>(
    a: &NCElement<T>,
    b: &NCElement<T>,
    eta_diag: &[i8],
) -> Result<NCElement<T>> {
    a.check_same_n(b)?;
    a.check_eta(eta_diag)?;
    let mut out = NCElement::zero(a.n);
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            if let Some((term, sign)) = term_product(ta, tb, eta_diag) {
                let coeff = *ca * *cb * Complex::new(T::approx(sign as f64), T::zero());
                out.add_term(term, coeff);
            }
        }
    }
    Ok(out)
}

/// The canonical endomorphism applied symbolically:
/// `rho(x) = sum_i eta_ii s_i x s_i~`, built from `multiply` alone.
pub fn rho_symbolic<T: Scalar>(x: &NCElement<T>, eta_diag: &[i8]) -> Result<NCElement<T>> {
    x.check_eta(eta_diag)?;
    let mut out = NCElement::zero(x.n());
    for (i, &sign) in eta_diag.iter().enumerate() {
        let letter = (i + 1) as u8;
        let gen = NCElement::generator(x.n(), letter)?;
        let gen_dag = NCElement::generator_dagger(x.n(), letter)?;
        let term = multiply(&multiply(&gen, x, eta_diag)?, &gen_dag, eta_diag)?;
        out = out.add(&term.scale(Complex::new(T::approx(sign as f64), T::zero())))?;
    }
    Ok(out)
}

/// Homomorphic evaluation: generators map to the representation matrices and
/// dagger words to their eta-daggers.
pub fn evaluate<T: Scalar>(a: &NCElement<T>, rep: &PCRep<T>) -> Result<CMatrix<T>> {
    if a.n != rep.spec().n() {
        return Err(Error::Contract(format!(
            "element over {} generators evaluated in a representation with {}",
            a.n,
            rep.spec().n()
        )));
    }
    let dim = rep.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (term, coeff) in &a.terms {
        let mut left = CMatrix::identity(dim);
        for &l in &term.left.0 {
            left = left.mul(rep.generator(l))?;
        }
        let mut right = CMatrix::identity(dim);
        for &l in &term.right.0 {
            right = right.mul(rep.generator(l))?;
        }
        let m = left.mul(&rep.dagger(&right)?)?;
        acc = acc.add(&m.scale(*coeff))?;
    }
    Ok(acc)
}

/// One multiplicative factor of a parsed term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Gen(u8),
    GenDagger(u8),
}

#[derive(Clone, Debug)]
pub struct TermAst<T> {
    pub coeff: Complex<T>,
    pub factors: Vec<Factor>,
}

/// Parsed expression: a signed sum of terms.
#[derive(Clone, Debug)]
pub struct ExprAst<T> {
    pub n: usize,
    pub terms: Vec<TermAst<T>>,
}

impl<T: Scalar> ExprAst<T> {
    /// Multiplies the factors of each term left to right and normalizes.
    pub fn to_element(&self, eta_diag: &[i8]) -> Result<NCElement<T>> {
        let mut acc = NCElement::zero(self.n);
        for term in &self.terms {
            let mut value = NCElement::one(self.n).scale(term.coeff);
            for factor in &term.factors {
                let f = match factor {
                    Factor::Gen(l) => NCElement::generator(self.n, *l)?,
                    Factor::GenDagger(l) => NCElement::generator_dagger(self.n, *l)?,
                };
                value = multiply(&value, &f, eta_diag)?;
            }
            acc = acc.add(&value)?;
        }
        Ok(acc)
    }

    /// Direct matrix evaluation of the raw factor structure, with no
    /// symbolic normalization; the independent route for oracle checks.
    pub fn to_matrix(&self, rep: &PCRep<T>) -> Result<CMatrix<T>> {
        if self.n != rep.spec().n() {
            return Err(Error::Contract(
                "expression and representation generator counts differ".into(),
            ));
        }
        let dim = rep.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let mut m = CMatrix::identity(dim).scale(term.coeff);
            for factor in &term.factors {
                let f = match factor {
                    Factor::Gen(l) => rep.generator(*l).clone(),
                    Factor::GenDagger(l) => rep.dagger(rep.generator(*l))?,
                };
                m = m.mul(&f)?;
            }
            acc = acc.add(&m)?;
        }
        Ok(acc)
    }
}

/// Parses the expression grammar, reporting syntax errors with byte offsets.
pub fn parse_ast<T: Scalar>(text: &str, n: usize) -> Result<ExprAst<T>> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
        n,
    }
    .expr()
}

/// Parses and normalizes in one step (the eta signs drive the reduction).
pub fn parse_expr<T: Scalar>(text: &str, n: usize, eta_diag: &[i8]) -> Result<NCElement<T>> {
    if eta_diag.len() != n {
        return Err(Error::Contract(format!(
            "eta has {} signs for {} generators",
            eta_diag.len(),
            n
        )));
    }
    parse_ast::<T>(text, n)?.to_element(eta_diag)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn expr<T: Scalar>(&mut self) -> Result<ExprAst<T>> {
        let mut terms = Vec::new();
        self.skip_ws();
        terms.push(self.term::<T>()?);
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    terms.push(self.term::<T>()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    let mut t = self.term::<T>()?;
                    t.coeff = -t.coeff;
                    terms.push(t);
                }
                Some(other) => {
                    return Err(Error::Parse {
                        offset: self.pos,
                        message: format!("expected '+', '-', or end, found {:?}", other as char),
                    });
                }
            }
        }
        Ok(ExprAst { n: self.n, terms })
    }

    fn term<T: Scalar>(&mut self) -> Result<TermAst<T>> {
        self.skip_ws();
        match self.peek() {
            Some(b's') => {
                let factors = self.factors()?;
                Ok(TermAst {
                    coeff: Complex::one(),
                    factors,
                })
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' || ch == b'-' || ch == b'+' => {
                let coeff = self.coeff::<T>()?;
                self.skip_ws();
                let factors = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    let f = self.factors()?;
                    if f.is_empty() {
                        return Err(Error::Parse {
                            offset: self.pos,
                            message: "expected at least one factor after '*'".into(),
                        });
                    }
                    f
                } else {
                    Vec::new()
                };
                Ok(TermAst { coeff, factors })
            }
            Some(other) => Err(Error::Parse {
                offset: self.pos,
                message: format!("expected a term, found {:?}", other as char),
            }),
            None => Err(Error::Parse {
                offset: self.pos,
                message: "expected a term, found end of input".into(),
            }),
        }
    }

    fn factors(&mut self) -> Result<Vec<Factor>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() != Some(b's') {
                break;
            }
            let start = self.pos;
            self.pos += 1;
            let digits_start = self.pos;
            while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == digits_start {
                return Err(Error::Parse {
                    offset: start,
                    message: "generator needs an index, e.g. s1".into(),
                });
            }
            let index: usize = std::str::from_utf8(&self.bytes[digits_start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Parse {
                    offset: digits_start,
                    message: "generator index too large".into(),
                })?;
            if index == 0 || index > self.n {
                return Err(Error::IndexOutOfRange {
                    offset: start,
                    index,
                    max: self.n,
                });
            }
            if self.peek() == Some(b'~') {
                self.pos += 1;
                out.push(Factor::GenDagger(index as u8));
            } else {
                out.push(Factor::Gen(index as u8));
            }
        }
        if out.is_empty() {
            return Err(Error::Parse {
                offset: self.pos,
                message: "expected a generator factor".into(),
            });
        }
        Ok(out)
    }

    fn coeff<T: Scalar>(&mut self) -> Result<Complex<T>> {
        let re = self.float()?;
        let save = self.pos;
        let sign = match self.peek() {
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            _ => {
                return Ok(Complex::new(T::approx(re), T::zero()));
            }
        };
        self.pos += 1;
        match self.unsigned_float() {
            Ok(im) if self.peek() == Some(b'i') => {
                self.pos += 1;
                Ok(Complex::new(T::approx(re), T::approx(sign * im)))
            }
            _ => {
                // Not an imaginary part; the sign belongs to the expression.
                self.pos = save;
                Ok(Complex::new(T::approx(re), T::zero()))
            }
        }
    }

    fn float(&mut self) -> Result<f64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        self.unsigned_float().map_err(|_| Error::Parse {
            offset: start,
            message: "expected a number".into(),
        })?;
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "malformed number".into(),
            })
    }

    fn unsigned_float(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut saw_digit = false;
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            self.pos += 1;
            saw_digit = true;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                self.pos += 1;
                saw_digit = true;
            }
        }
        if !saw_digit {
            self.pos = start;
            return Err(Error::Parse {
                offset: start,
                message: "expected digits".into(),
            });
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let exp_save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let mut exp_digits = false;
            while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                self.pos += 1;
                exp_digits = true;
            }
            if !exp_digits {
                self.pos = exp_save;
            }
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "malformed number".into(),
            })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(
            self.peek(),
            Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')
        ) {
            self.pos += 1;
        }
    }
}
