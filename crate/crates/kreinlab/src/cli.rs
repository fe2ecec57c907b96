//! Command-line front end: one subcommand per experiment family, JSON
//! reports on standard output (CSV for parameter sweeps), deterministic
//! output for identical arguments.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on
//! usage or parse errors (reported on standard error).

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Deserialize;

use crate::cmatrix::{inner, CMatrix};
use crate::cuntz::{build_representation, PCSpec, Word};
use crate::error::Error;
use crate::fock::{fp_ghost_ops, fp_relation_report, FockBasis, FockSpec};
use crate::involutions::{
    indefiniteness_witness, lie_membership, pauli_dagger, sigma, PauliIndex, LIE_MEMBERSHIP_TOL,
};
use crate::krein::{double_representation, Parity};
use crate::models::{
    c01_flip_rep, classify_spectrum, full_model, pauli_rep, Combo, GridSpec, ModelParams,
    SpectrumClass,
};
use crate::report::{csv_field, fmt_g17, CheckReport};
use crate::words::{parse_ast, parse_expr};

type C64 = Complex<f64>;
type M64 = CMatrix<f64>;

const USAGE: &str = "usage: kreinlab <subcommand> [flags]

subcommands:
  involutions --pauli 0|1|2|3
  fock        --statistics bose|fermi --modes D [--cutoff M] [--eta 1,-1,..]
  ghosts      --pairs P
  cuntz       --d D --dprime D' [--depth L] [--cycle 1|12]
  words       --n N --expr EXPR [--eta 1,-1,..] [--eval-depth L]
  pauli       [--points N] [--half-width L]
  c01         [--points N]
  model       --ma M --mb M --g G [--combo bb|bf|fb|ff] [--cutoff M]
              [--sweep g=MIN:MAX:STEPS] [--format json|csv]
  double      --input FILE

every subcommand accepts --out FILE to write the report to a file";

/// Runs the CLI on an argument list (without the executable name) and
/// returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    match execute(&args) {
        Ok(outcome) => {
            let emitted = match &outcome.out_path {
                Some(path) => std::fs::write(path, &outcome.output)
                    .map_err(|e| format!("cannot write {}: {}", path, e)),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match emitted {
                Ok(()) => {
                    if outcome.pass {
                        0
                    } else {
                        1
                    }
                }
                Err(message) => {
                    eprintln!("kreinlab: {}", message);
                    2
                }
            }
        }
        Err(message) => {
            eprintln!("kreinlab: {}", message);
            eprintln!("{}", USAGE);
            2
        }
    }
}

struct Outcome {
    output: String,
    pass: bool,
    out_path: Option<String>,
}

type CliResult = Result<Outcome, String>;

fn execute(args: &[String]) -> CliResult {
    let (sub, rest) = args
        .split_first()
        .ok_or_else(|| "missing subcommand".to_string())?;
    let flags = Flags::parse(rest)?;
    let out_path = flags.get_opt("out").map(|s| s.to_string());
    let (report, raw) = match sub.as_str() {
        "involutions" => (Some(cmd_involutions(&flags)?), None),
        "fock" => (Some(cmd_fock(&flags)?), None),
        "ghosts" => (Some(cmd_ghosts(&flags)?), None),
        "cuntz" => (Some(cmd_cuntz(&flags)?), None),
        "words" => (Some(cmd_words(&flags)?), None),
        "pauli" => (Some(cmd_pauli(&flags)?), None),
        "c01" => (Some(cmd_c01(&flags)?), None),
        "model" => cmd_model(&flags)?,
        "double" => (Some(cmd_double(&flags)?), None),
        other => return Err(format!("unknown subcommand {:?}", other)),
    };
    let (output, pass) = match (report, raw) {
        (Some(r), None) => {
            let pass = r.all_pass();
            (r.to_json(), pass)
        }
        (None, Some(csv)) => (csv, true),
        _ => unreachable!(),
    };
    Ok(Outcome {
        output,
        pass,
        out_path,
    })
}

struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(flag) = it.next() {
            let name = flag
                .strip_prefix("--")
                .ok_or_else(|| format!("expected a --flag, found {:?}", flag))?;
            let value = it
                .next()
                .ok_or_else(|| format!("flag --{} needs a value", name))?;
            if values.insert(name.to_string(), value.clone()).is_some() {
                return Err(format!("flag --{} given twice", name));
            }
        }
        Ok(Flags { values })
    }

    fn get_opt(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(|s| s.as_str())
    }

    fn require(&self, name: &str) -> Result<&str, String> {
        self.get_opt(name)
            .ok_or_else(|| format!("missing required flag --{}", name))
    }

    fn usize_opt(&self, name: &str, default: usize) -> Result<usize, String> {
        match self.get_opt(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("--{} expects an integer, got {:?}", name, v)),
        }
    }

    fn usize_req(&self, name: &str) -> Result<usize, String> {
        self.require(name)?
            .parse()
            .map_err(|_| format!("--{} expects an integer", name))
    }

    fn f64_opt(&self, name: &str, default: f64) -> Result<f64, String> {
        match self.get_opt(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("--{} expects a number, got {:?}", name, v)),
        }
    }

    fn check_known(&self, allowed: &[&str]) -> Result<(), String> {
        for key in self.values.keys() {
            if key != "out" && !allowed.contains(&key.as_str()) {
                return Err(format!("unknown flag --{}", key));
            }
        }
        Ok(())
    }
}

fn parse_signs(text: &str) -> Result<Vec<i8>, String> {
    text.split(',')
        .map(|piece| match piece.trim() {
            "1" | "+1" => Ok(1i8),
            "-1" => Ok(-1i8),
            other => Err(format!("eta entries must be 1 or -1, got {:?}", other)),
        })
        .collect()
}

/// Complex literal `a`, `a+bi`, or `a-bi`.
fn parse_complex(text: &str) -> Result<C64, String> {
    let s = text.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex::new(re, 0.0));
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last +/- that is not an exponent sign.
        let bytes = body.as_bytes();
        for pos in (1..bytes.len()).rev() {
            let ch = bytes[pos];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
                let re: f64 = body[..pos]
                    .parse()
                    .map_err(|_| format!("bad complex literal {:?}", text))?;
                let im: f64 = match &body[pos..pos + 1] {
                    "+" => body[pos + 1..].parse(),
                    _ => body[pos..].parse(),
                }
                .map_err(|_| format!("bad complex literal {:?}", text))?;
                return Ok(Complex::new(re, im));
            }
        }
    }
    Err(format!(
        "bad complex literal {:?} (use a, a+bi, or a-bi)",
        text
    ))
}

fn sign_eta(signs: &[i8]) -> M64 {
    let diag: Vec<C64> = signs.iter().map(|&s| Complex::new(s as f64, 0.0)).collect();
    M64::from_diag(&diag)
}

fn cmd_involutions(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["pauli"])?;
    let idx = flags.usize_req("pauli")?;
    if idx > 3 {
        return Err("--pauli expects 0, 1, 2, or 3".into());
    }
    let i = PauliIndex::new(idx as u8).unwrap();
    let mut report = CheckReport::new("involutions");
    report.param("pauli", idx);

    let x = M64::from_fn(2, 2, |r, c| Complex::new(1.0 + r as f64, 0.5 - c as f64));
    let y = M64::from_fn(2, 2, |r, c| Complex::new(0.25 * c as f64 - 1.0, r as f64));
    let twice = pauli_dagger(i, &pauli_dagger(i, &x).map_err(err_str)?).map_err(err_str)?;
    report.push(
        "pauli_dagger_involution",
        twice.diff_norm(&x).map_err(err_str)?,
        1e-13,
    );
    let lhs = pauli_dagger(i, &x.mul(&y).map_err(err_str)?).map_err(err_str)?;
    let rhs = pauli_dagger(i, &y)
        .map_err(err_str)?
        .mul(&pauli_dagger(i, &x).map_err(err_str)?)
        .map_err(err_str)?;
    report.push(
        "pauli_dagger_antimultiplicative",
        lhs.diff_norm(&rhs).map_err(err_str)?,
        1e-12,
    );

    if idx == 0 {
        report.note("dagger_0 is the standard hermitian conjugate: positive definite, no witness");
        report.classification = Some("positive_definite_involution".to_string());
        return Ok(report);
    }

    let witness = indefiniteness_witness::<f64>(i).map_err(err_str)?;
    let pos = witness
        .sp_x
        .iter()
        .map(|l| (l - Complex::new(1.0, 0.0)).norm())
        .fold(0.0f64, f64::max);
    report.push("witness_positive_spectrum", pos, 1e-12);
    let neg = witness
        .sp_y
        .iter()
        .map(|l| (l + Complex::new(1.0, 0.0)).norm())
        .fold(0.0f64, f64::max);
    report.push("witness_negative_spectrum", neg, 1e-12);

    if idx == 1 {
        // I_{1,1}^{dagger_1} I_{1,1} = -I for I_{1,1} = sigma3.
        let s3 = sigma::<f64>(PauliIndex::new(3).unwrap());
        let product = pauli_dagger(i, &s3)
            .map_err(err_str)?
            .mul(&s3)
            .map_err(err_str)?;
        let res = product
            .add(&M64::identity(2))
            .map_err(err_str)?
            .frobenius_norm();
        report.push("I11_dag_I11_is_minus_I", res, 1e-13);
    }

    // Fixed members of the displayed parametrization, plus a rejected
    // non-member.
    let members: Vec<M64> = match idx {
        1 => vec![
            M64::from_fn(2, 2, |r, c| match (r, c) {
                (0, 0) => Complex::new(0.4, -0.3),
                (0, 1) => Complex::new(0.0, 0.8),
                (1, 0) => Complex::new(0.0, -0.6),
                _ => Complex::new(-0.4, -0.3),
            }),
            sigma::<f64>(PauliIndex::new(1).unwrap()).scale(Complex::new(0.0, 1.0)),
        ],
        2 => vec![
            M64::from_fn(2, 2, |r, c| match (r, c) {
                (0, 0) => Complex::new(0.7, 0.0),
                (0, 1) => Complex::new(-0.2, 0.0),
                (1, 0) => Complex::new(1.1, 0.0),
                _ => Complex::new(-0.7, 0.0),
            }),
            M64::identity(2).scale(Complex::new(0.0, 0.9)),
        ],
        _ => vec![
            M64::from_fn(2, 2, |r, c| match (r, c) {
                (0, 0) => Complex::new(0.0, 0.5),
                (0, 1) => Complex::new(0.3, 0.7),
                (1, 0) => Complex::new(0.3, -0.7),
                _ => Complex::new(0.0, -1.2),
            }),
            sigma::<f64>(PauliIndex::new(3).unwrap()).scale(Complex::new(0.0, 1.0)),
        ],
    };
    let mut wrong = 0usize;
    for m in &members {
        if !lie_membership(i, m, LIE_MEMBERSHIP_TOL).map_err(err_str)? {
            wrong += 1;
        }
    }
    report.push("lie_membership_members", wrong as f64, 0.0);
    let outsider = M64::identity(2);
    let rejected = !lie_membership(i, &outsider, LIE_MEMBERSHIP_TOL).map_err(err_str)?;
    report.push(
        "lie_membership_rejects",
        if rejected { 0.0 } else { 1.0 },
        0.0,
    );
    report.classification = Some("indefinite_involution".to_string());
    Ok(report)
}

fn fixed_unitary(d: usize) -> M64 {
    let mut u = M64::identity(d);
    if d >= 2 {
        let theta: f64 = 0.7;
        let mut g = M64::identity(d);
        g.set(0, 0, Complex::new(theta.cos(), 0.0));
        g.set(0, 1, Complex::new(-theta.sin(), 0.0));
        g.set(1, 0, Complex::new(theta.sin(), 0.0));
        g.set(1, 1, Complex::new(theta.cos(), 0.0));
        u = g;
    }
    let phases: Vec<C64> = (0..d)
        .map(|k| {
            let arg = 0.3 * (k as f64 + 1.0);
            Complex::new(arg.cos(), arg.sin())
        })
        .collect();
    u.mul(&M64::from_diag(&phases)).unwrap()
}

fn fock_samples(d: usize) -> Vec<Vec<C64>> {
    let mut samples: Vec<Vec<C64>> = (0..d)
        .map(|k| {
            let mut v = vec![Complex::new(0.0, 0.0); d];
            v[k] = Complex::new(1.0, 0.0);
            v
        })
        .collect();
    samples.push(
        (0..d)
            .map(|k| Complex::new(0.5 + 0.1 * k as f64, 0.3 - 0.2 * k as f64))
            .collect(),
    );
    samples
}

fn cmd_fock(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["statistics", "modes", "cutoff", "eta"])?;
    let statistics = flags.require("statistics")?;
    let modes = flags.usize_req("modes")?;
    let signs = match flags.get_opt("eta") {
        Some(text) => parse_signs(text)?,
        None => vec![1i8; modes],
    };
    if signs.len() != modes {
        return Err(format!(
            "--eta lists {} signs for {} modes",
            signs.len(),
            modes
        ));
    }
    let eta1 = sign_eta(&signs);
    let (spec, is_bose, cutoff) = match statistics {
        "bose" => {
            let cutoff = flags.usize_opt("cutoff", 8)?;
            (
                FockSpec::bose(modes, cutoff, eta1).map_err(err_str)?,
                true,
                cutoff,
            )
        }
        "fermi" => (FockSpec::fermi(modes, eta1).map_err(err_str)?, false, 0),
        other => return Err(format!("--statistics expects bose or fermi, got {}", other)),
    };
    let basis = FockBasis::new(spec);

    let mut report = CheckReport::new("fock");
    report.param("statistics", statistics);
    report.param("modes", modes);
    if is_bose {
        report.param("cutoff", cutoff);
    }
    report.param(
        "eta",
        signs
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );

    let samples = fock_samples(modes);
    report.absorb(basis.relation_report(&samples).map_err(err_str)?);

    // Equivalence transform against a fixed unitary frame.
    let u = fixed_unitary(modes);
    let eta_prime = u.mul(&sign_eta(&signs)).unwrap().mul(&u.adjoint()).unwrap();
    let p = basis.safe_projector();
    let mut transform = 0f64;
    for f in &samples {
        for g in &samples {
            let uf = u.adjoint().mul_vec(f).unwrap();
            let ug = u.adjoint().mul_vec(g).unwrap();
            let t_ann = basis.ann(&uf).map_err(err_str)?;
            let t_cre = basis.eta_cre(&ug).map_err(err_str)?;
            let lhs = if is_bose {
                t_ann
                    .mul(&t_cre)
                    .unwrap()
                    .sub(&t_cre.mul(&t_ann).unwrap())
                    .unwrap()
            } else {
                t_ann
                    .mul(&t_cre)
                    .unwrap()
                    .add(&t_cre.mul(&t_ann).unwrap())
                    .unwrap()
            };
            let rhs_coeff = inner(f, &eta_prime.mul_vec(g).unwrap()).unwrap();
            let rhs = M64::identity(basis.dim()).scale(rhs_coeff);
            let defect = p
                .mul(&lhs.sub(&rhs).unwrap())
                .unwrap()
                .mul(&p)
                .unwrap()
                .frobenius_norm();
            transform = transform.max(defect);
        }
    }
    report.push("fock_transform_equivalence", transform, 1e-12);

    if is_bose {
        // The Weyl checks need a roomy cutoff for the series to converge and
        // a small total dimension for the exponential to stay cheap.
        if cutoff >= 16 && basis.dim() <= 128 {
            let gamma = basis.second_quantization().map_err(err_str)?;
            let mut f = vec![Complex::new(0.0, 0.0); modes];
            f[0] = Complex::new(0.5, 0.0);
            let w = basis.weyl_operator(&f, 1e-14).map_err(err_str)?;
            let got = basis
                .krein_vacuum_expectation(&w, &gamma)
                .map_err(err_str)?;
            let norm2: f64 = f.iter().map(|z| z.norm_sqr()).sum();
            let want = (-norm2 / 4.0).exp();
            report.push(
                "weyl_vacuum_law",
                (got - Complex::new(want, 0.0)).norm(),
                1e-6,
            );

            let mut g = vec![Complex::new(0.0, 0.0); modes];
            g[0] = Complex::new(-0.3, 0.4);
            let wf = basis.weyl_operator(&f, 1e-14).map_err(err_str)?;
            let wg = basis.weyl_operator(&g, 1e-14).map_err(err_str)?;
            let wsum = basis
                .weyl_operator(&crate::cmatrix::vec_add(&f, &g), 1e-14)
                .map_err(err_str)?;
            let phase_arg = -inner(&f, &g).unwrap().im / 2.0;
            let phase = Complex::new(phase_arg.cos(), phase_arg.sin());
            let half = basis.occupation_projector(cutoff as u32 / 2);
            let defect = half
                .mul(&wf.mul(&wg).unwrap().sub(&wsum.scale(phase)).unwrap())
                .unwrap()
                .mul(&half)
                .unwrap()
                .frobenius_norm();
            report.push("weyl_group_law", defect, 1e-6);
        } else {
            report.note(
                "Weyl checks skipped: they need cutoff >= 16 and total dimension <= 128",
            );
        }
    }
    Ok(report)
}

fn cmd_ghosts(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["pairs"])?;
    let pairs = flags.usize_req("pairs")?;
    let ghosts = fp_ghost_ops::<f64>(pairs).map_err(err_str)?;
    let mut report = CheckReport::new("ghosts");
    report.param("pairs", pairs);
    report.absorb(fp_relation_report(&ghosts).map_err(err_str)?);
    Ok(report)
}

fn cmd_cuntz(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["d", "dprime", "depth", "cycle"])?;
    let d = flags.usize_req("d")?;
    let dp = flags.usize_req("dprime")?;
    let depth = flags.usize_opt("depth", 6)?;
    let cycle = match flags.get_opt("cycle").unwrap_or("1") {
        "1" => Word(vec![1]),
        "12" => Word(vec![1, 2]),
        other => return Err(format!("--cycle expects 1 or 12, got {}", other)),
    };
    let spec = PCSpec::new(d, dp, depth, cycle).map_err(err_str)?;
    let rep = build_representation::<f64>(&spec).map_err(err_str)?;
    let mut report = CheckReport::new("cuntz");
    report.param("d", d);
    report.param("dprime", dp);
    report.param("depth", depth);
    report.param("cycle", flags.get_opt("cycle").unwrap_or("1"));
    report.param("dim", rep.dim());
    report.absorb(rep.relation_residuals().map_err(err_str)?);
    Ok(report)
}

fn cmd_words(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["n", "eta", "expr", "eval-depth"])?;
    let n = flags.usize_req("n")?;
    let signs = match flags.get_opt("eta") {
        Some(text) => parse_signs(text)?,
        None => vec![1i8; n],
    };
    if signs.len() != n {
        return Err(format!(
            "--eta lists {} signs for {} generators",
            signs.len(),
            n
        ));
    }
    let expr = flags.require("expr")?;
    let ast = parse_ast::<f64>(expr, n).map_err(err_str)?;
    let element = ast.to_element(&signs).map_err(err_str)?;

    let mut report = CheckReport::new("words");
    report.param("n", n);
    report.param("expr", expr);
    report.param(
        "eta",
        signs
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let canonical = element.to_canonical_string();
    report.note(format!("canonical_form: {}", canonical));

    let reparsed = parse_expr::<f64>(&canonical, n, &signs).map_err(err_str)?;
    report.push(
        "words_roundtrip",
        if reparsed == element { 0.0 } else { 1.0 },
        0.0,
    );

    if let Some(depth_text) = flags.get_opt("eval-depth") {
        let depth: usize = depth_text
            .parse()
            .map_err(|_| "--eval-depth expects an integer".to_string())?;
        // Signature: the signs must be a +1 block then a -1 block.
        let d = signs.iter().take_while(|&&s| s == 1).count();
        if signs[d..].iter().any(|&s| s != -1) {
            return Err("evaluation needs eta = diag(I_d, -I_d') sign order".into());
        }
        let cycle = if d >= 1 {
            Word(vec![1])
        } else {
            Word(vec![1, 2])
        };
        let spec = PCSpec::new(d, n - d, depth, cycle).map_err(err_str)?;
        let rep = build_representation::<f64>(&spec).map_err(err_str)?;
        let symbolic = crate::words::evaluate(&element, &rep).map_err(err_str)?;
        let direct = ast.to_matrix(&rep).map_err(err_str)?;
        let max_factors = ast.terms.iter().map(|t| t.factors.len()).max().unwrap_or(0);
        let safe_len = (depth - 1).min(depth.saturating_sub(max_factors));
        let p = rep.length_projector(safe_len);
        let defect = p
            .mul(&symbolic.sub(&direct).unwrap())
            .unwrap()
            .mul(&p)
            .unwrap()
            .frobenius_norm();
        report.push("words_eval_consistency", defect, 1e-10);
        report.param("eval-depth", depth);
        report.note(format!(
            "evaluation compressed to word length <= {}",
            safe_len
        ));
    }
    Ok(report)
}

fn cmd_pauli(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["points", "half-width"])?;
    let points = flags.usize_opt("points", 401)?;
    let half_width = flags.f64_opt("half-width", 10.0)?;
    let grid = GridSpec::new(points, half_width).map_err(err_str)?;
    let rep = pauli_rep(&grid).map_err(err_str)?;
    let mut report = CheckReport::new("pauli");
    report.param("points", points);
    report.param("half-width", fmt_g17(half_width));
    report.absorb(rep.report);
    Ok(report)
}

fn cmd_c01(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["points"])?;
    let points = flags.usize_opt("points", 101)?;
    let rep = c01_flip_rep::<f64>(points).map_err(err_str)?;
    let mut report = CheckReport::new("c01");
    report.param("points", points);
    report.absorb(rep.report);
    Ok(report)
}

fn cmd_model(flags: &Flags) -> Result<(Option<CheckReport>, Option<String>), String> {
    flags.check_known(&["ma", "mb", "g", "combo", "cutoff", "sweep", "format"])?;
    let m_a = flags
        .require("ma")?
        .parse::<f64>()
        .map_err(|_| "--ma expects a number".to_string())?;
    let m_b = flags
        .require("mb")?
        .parse::<f64>()
        .map_err(|_| "--mb expects a number".to_string())?;
    let cutoff = flags.usize_opt("cutoff", 4)?;
    let format = flags.get_opt("format");

    if let Some(sweep) = flags.get_opt("sweep") {
        if matches!(format, Some("json")) {
            return Err("sweeps emit CSV; drop --format json".into());
        }
        if flags.get_opt("g").is_some() {
            return Err("--sweep g=... replaces --g".into());
        }
        let csv = run_sweep(m_a, m_b, cutoff, sweep)?;
        return Ok((None, Some(csv)));
    }
    if matches!(format, Some("csv")) {
        return Err("--format csv is only available with --sweep".into());
    }

    let g = parse_complex(flags.require("g")?)?;
    let combos: Vec<Combo> = match flags.get_opt("combo") {
        Some(text) => vec![Combo::parse(text).map_err(err_str)?],
        None => Combo::ALL.to_vec(),
    };

    let mut report = CheckReport::new("model");
    report.param("ma", fmt_g17(m_a));
    report.param("mb", fmt_g17(m_b));
    report.param("g", flags.require("g")?);
    report.param("cutoff", cutoff);
    report.param(
        "combo",
        combos
            .iter()
            .map(|c| c.as_str())
            .collect::<Vec<_>>()
            .join(","),
    );

    let base = ModelParams::new(m_a, m_b, g, combos[0], cutoff).map_err(err_str)?;
    let spectrum = classify_spectrum(&base).map_err(err_str)?;
    report.classification = Some(spectrum.classification.as_str().to_string());
    report.eigenvalues = Some(spectrum.eigenvalues.iter().map(|l| (l.re, l.im)).collect());

    // Independent quadratic-formula oracle for the eigenvalues.
    let disc = (m_a - m_b) * (m_a - m_b) - 4.0 * g.norm_sqr();
    let mid = (m_a + m_b) / 2.0;
    let (o1, o2) = if disc >= 0.0 {
        let half = disc.sqrt() / 2.0;
        (Complex::new(mid + half, 0.0), Complex::new(mid - half, 0.0))
    } else {
        let half = (-disc).sqrt() / 2.0;
        (Complex::new(mid, half), Complex::new(mid, -half))
    };
    let oracle_res = (spectrum.eigenvalues[0] - o1)
        .norm()
        .max((spectrum.eigenvalues[1] - o2).norm());
    report.push("model_eigenvalue_oracle", oracle_res, 1e-12);

    let class_ok = match spectrum.classification {
        SpectrumClass::TwoReal => disc > 0.0,
        SpectrumClass::OneRealNeutral => disc.abs() <= 1e-12 * (m_a + m_b) * (m_a + m_b),
        SpectrumClass::ComplexPair => disc < 0.0,
    };
    report.push(
        "model_classification_consistent",
        if class_ok { 0.0 } else { 1.0 },
        0.0,
    );

    let norms_ok = match spectrum.classification {
        SpectrumClass::TwoReal => {
            let mut classes: Vec<&str> = spectrum.krein_norms.iter().map(|c| c.as_str()).collect();
            classes.sort_unstable();
            classes == ["negative", "positive"]
        }
        SpectrumClass::OneRealNeutral => {
            spectrum
                .krein_norms
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                == ["neutral"]
        }
        SpectrumClass::ComplexPair => spectrum.krein_norms.is_empty(),
    };
    report.push(
        "model_krein_norm_classes",
        if norms_ok { 0.0 } else { 1.0 },
        0.0,
    );

    // Full tensor models: aggregate each named check over the combos and
    // compare the restrictions pairwise.
    let mut aggregated: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    let mut restrictions = Vec::new();
    for combo in &combos {
        let p = ModelParams::new(m_a, m_b, g, *combo, cutoff).map_err(err_str)?;
        let model = full_model(&p).map_err(err_str)?;
        for check in &model.report.checks {
            let slot = aggregated
                .entry(check.name.clone())
                .or_insert((0.0, check.tolerance));
            slot.0 = slot.0.max(check.residual);
            slot.1 = slot.1.min(check.tolerance);
        }
        restrictions.push(model.restriction);
    }
    for (name, (residual, tolerance)) in aggregated {
        report.push(&name, residual, tolerance);
    }
    let mut agreement = 0f64;
    for i in 0..restrictions.len() {
        for j in (i + 1)..restrictions.len() {
            agreement = agreement.max(
                restrictions[i]
                    .diff_norm(&restrictions[j])
                    .map_err(err_str)?,
            );
        }
    }
    if restrictions.len() > 1 {
        report.push("model_combo_agreement", agreement, 1e-12);
    }
    report.note(format!("discriminant = {}", fmt_g17(disc)));
    Ok((Some(report), None))
}

fn run_sweep(m_a: f64, m_b: f64, cutoff: usize, sweep: &str) -> Result<String, String> {
    let (name, range) = sweep
        .split_once('=')
        .ok_or_else(|| "sweep syntax is g=MIN:MAX:STEPS".to_string())?;
    if name != "g" {
        return Err(format!("only g sweeps are supported, got {:?}", name));
    }
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err("sweep syntax is g=MIN:MAX:STEPS".into());
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| "bad sweep minimum".to_string())?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| "bad sweep maximum".to_string())?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| "bad sweep step count".to_string())?;
    if steps == 0 {
        return Err("sweep needs at least one step".into());
    }

    let mut rows = String::from(
        "m_a,m_b,g_abs,discriminant,classification,lambda1_re,lambda1_im,lambda2_re,lambda2_im,norm_class_1,norm_class_2\n",
    );
    for k in 0..steps {
        let g_abs = if steps == 1 {
            min
        } else {
            min + (max - min) * k as f64 / (steps - 1) as f64
        };
        let p = ModelParams::new(m_a, m_b, Complex::new(g_abs, 0.0), Combo::ALL[0], cutoff)
            .map_err(err_str)?;
        let s = classify_spectrum(&p).map_err(err_str)?;
        let (n1, n2): (String, String) = match s.classification {
            SpectrumClass::TwoReal => (
                s.krein_norms[0].as_str().to_string(),
                s.krein_norms[1].as_str().to_string(),
            ),
            SpectrumClass::OneRealNeutral => ("neutral".to_string(), String::new()),
            SpectrumClass::ComplexPair => (String::new(), String::new()),
        };
        let fields = [
            fmt_g17(m_a),
            fmt_g17(m_b),
            fmt_g17(g_abs),
            fmt_g17(s.discriminant),
            s.classification.as_str().to_string(),
            fmt_g17(s.eigenvalues[0].re),
            fmt_g17(s.eigenvalues[0].im),
            fmt_g17(s.eigenvalues[1].re),
            fmt_g17(s.eigenvalues[1].im),
            n1,
            n2,
        ];
        let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        rows.push_str(&row.join(","));
        rows.push('\n');
    }
    Ok(rows)
}

#[derive(Deserialize)]
struct RepFile {
    dim: usize,
    generators: BTreeMap<String, Vec<[f64; 2]>>,
    alpha_images: BTreeMap<String, Vec<[f64; 2]>>,
}

fn matrix_from_entries(dim: usize, label: &str, entries: &[[f64; 2]]) -> Result<M64, String> {
    if entries.len() != dim * dim {
        return Err(format!(
            "generator {} has {} entries, expected {}",
            label,
            entries.len(),
            dim * dim
        ));
    }
    Ok(M64::from_fn(dim, dim, |i, j| {
        let e = entries[i * dim + j];
        Complex::new(e[0], e[1])
    }))
}

fn cmd_double(flags: &Flags) -> Result<CheckReport, String> {
    flags.check_known(&["input"])?;
    let path = flags.require("input")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))?;
    let file: RepFile =
        serde_json::from_str(&text).map_err(|e| format!("bad representation file: {}", e))?;
    if file.generators.is_empty() {
        return Err("representation file has no generators".into());
    }
    let mut gens = BTreeMap::new();
    let mut alphas = BTreeMap::new();
    for (label, entries) in &file.generators {
        gens.insert(
            label.clone(),
            matrix_from_entries(file.dim, label, entries)?,
        );
    }
    for (label, entries) in &file.alpha_images {
        alphas.insert(
            label.clone(),
            matrix_from_entries(file.dim, label, entries)?,
        );
    }
    let doubled = double_representation(&gens, &alphas).map_err(err_str)?;

    let mut report = CheckReport::new("double");
    report.param("input", path);
    report.param("dim", file.dim);
    report.push(
        "double_covariance_residual",
        doubled.covariance_residual().map_err(err_str)?,
        0.0,
    );
    let signature = doubled
        .space()
        .fundamental_decomposition()
        .map_err(err_str)?
        .signature;
    let sig_res =
        (signature.0 as f64 - file.dim as f64).abs() + (signature.1 as f64 - file.dim as f64).abs();
    report.push("double_signature", sig_res, 0.0);
    report.note(format!("signature = ({}, {})", signature.0, signature.1));

    // Labels whose alpha image is +-(the generator) carry a definite parity;
    // grade those.
    let mut parts = BTreeMap::new();
    for (label, g) in &gens {
        let ag = &alphas[label];
        let even = ag.diff_norm(g).map_err(err_str)?;
        let odd = ag.add(g).map_err(err_str)?.frobenius_norm();
        let scale = 1e-10 * (1.0 + g.frobenius_norm());
        if even <= scale {
            parts.insert(label.clone(), Parity::Even);
        } else if odd <= scale {
            parts.insert(label.clone(), Parity::Odd);
        }
    }
    if parts.is_empty() {
        report.note("no generator has a definite parity under alpha; grading skipped");
    } else {
        let grading = doubled.grading_residual(&parts).map_err(err_str)?;
        report.push("double_grading_residual", grading, 1e-12);
    }
    Ok(report)
}

fn err_str(e: Error) -> String {
    e.to_string()
}
