//! Input structures and their validation.
//!
//! A [`ManifoldSpec`] describes a real Lie algebra by structure constants in a
//! fixed frame `e_1..e_n`, with `[e_i, e_j] = Σ_k c^k_ij e_k`, together with an
//! almost complex structure `J` (column `j` holds `J e_j`) and a metric `g`.
//! Dual coframe relations follow `de^k = -Σ_{i<j} c^k_ij e^i ∧ e^j`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{antiderivation, Form};
use crate::field::fmt_rational;
use crate::{Rational, RealMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("dimension must be a positive even integer, got {0}")]
    Dimension(usize),
    #[error("{what} has shape {rows}x{cols}, expected {dim}x{dim}")]
    Shape {
        what: &'static str,
        rows: usize,
        cols: usize,
        dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    pub name: String,
    pub dim: usize,
    /// `constants[k][i][j] = c^k_ij`
    pub constants: Vec<Vec<Vec<Rational>>>,
    pub j: RealMatrix,
    pub metric: RealMatrix,
    /// Parameter values used to instantiate the spec, if any.
    pub params: BTreeMap<String, Rational>,
}

impl ManifoldSpec {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        constants: Vec<Vec<Vec<Rational>>>,
        j: RealMatrix,
        metric: RealMatrix,
    ) -> Result<Self, SpecError> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(SpecError::Dimension(dim));
        }
        for (what, m) in [("J", &j), ("metric", &metric)] {
            if m.rows() != dim || m.cols() != dim {
                return Err(SpecError::Shape {
                    what,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
        }
        let well_shaped = constants.len() == dim
            && constants.iter().all(|c| c.len() == dim && c.iter().all(|r| r.len() == dim));
        if !well_shaped {
            return Err(SpecError::Shape {
                what: "structure constants",
                rows: constants.len(),
                cols: constants.first().map_or(0, Vec::len),
                dim,
            });
        }
        Ok(Self {
            name: name.into(),
            dim,
            constants,
            j,
            metric,
            params: BTreeMap::new(),
        })
    }

    /// Builds the structure constants from coframe relations: `relations[k]`
    /// lists `(coefficient, i, j)` with `de^k = Σ coefficient · e^i ∧ e^j`.
    pub fn constants_from_differentials(dim: usize, relations: &[Vec<(Rational, usize, usize)>]) -> Vec<Vec<Vec<Rational>>> {
        let mut c = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for (k, terms) in relations.iter().enumerate() {
            for (coef, i, j) in terms {
                // coefficient of e^i ∧ e^j in de^k is -c^k_ij
                c[k][*i][*j] = c[k][*i][*j].clone() - coef.clone();
                c[k][*j][*i] = c[k][*j][*i].clone() + coef.clone();
            }
        }
        c
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().take(n) {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate().take(n) {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi.clone() * yj.clone();
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.constants[k][i][j].is_zero() {
                        *o = o.clone() + xy.clone() * self.constants[k][i][j].clone();
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// `de^k` as real 2-forms.
    pub fn coframe_differentials(&self) -> Vec<Form<Rational>> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                let mut f = Form::zero(n);
                for i in 0..n {
                    for j in i + 1..n {
                        let c = &self.constants[k][i][j];
                        if !c.is_zero() {
                            let term = Form::generator(n, i).wedge(&Form::generator(n, j)).scale(&-c.clone());
                            f = &f + &term;
                        }
                    }
                }
                f
            })
            .collect()
    }

    /// Matrix of the real Chevalley–Eilenberg differential on all degrees.
    pub fn real_differential(&self) -> RealMatrix {
        antiderivation(self.dim, &self.coframe_differentials())
    }

    pub fn nijenhuis(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let jx = self.j.mul_vec(x);
        let jy = self.j.mul_vec(y);
        let a = self.bracket(&jx, &jy);
        let b = self.j.mul_vec(&self.bracket(&jx, y));
        let c = self.j.mul_vec(&self.bracket(x, &jy));
        let d = self.bracket(x, y);
        (0..self.dim)
            .map(|k| a[k].clone() - b[k].clone() - c[k].clone() - d[k].clone())
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationEntry {
    pub check: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub entries: Vec<ValidationEntry>,
    /// Nonzero values `N_J(e_i, e_j)` for `i < j`, rendered in the frame.
    pub nijenhuis: Vec<NijenhuisValue>,
    pub integrable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NijenhuisValue {
    pub i: usize,
    pub j: usize,
    pub value: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, check: &str) -> Option<&ValidationEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    pub fn failures(&self) -> Vec<&ValidationEntry> {
        self.entries.iter().filter(|e| !e.passed).collect()
    }
}

fn entry(check: &'static str, witness: Option<String>) -> ValidationEntry {
    ValidationEntry {
        check,
        passed: witness.is_none(),
        witness,
    }
}

fn show_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

fn show_vector(v: &[Rational]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("{} e{}", fmt_rational(c), k + 1))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Checks every structural requirement and reports instead of failing.
pub fn validate(spec: &ManifoldSpec) -> ValidationReport {
    let n = spec.dim;
    let c = &spec.constants;
    let mut entries = Vec::new();

    let antisym = (0..n)
        .flat_map(|k| (0..n).flat_map(move |i| (i..n).map(move |j| (k, i, j))))
        .find(|&(k, i, j)| c[k][i][j] != -c[k][j][i].clone())
        .map(|(k, i, j)| {
            format!(
                "c^{}_{}{} = {}, c^{}_{}{} = {}",
                k + 1,
                i + 1,
                j + 1,
                fmt_rational(&c[k][i][j]),
                k + 1,
                j + 1,
                i + 1,
                fmt_rational(&c[k][j][i])
            )
        });
    entries.push(entry("antisymmetry", antisym));

    let mut jacobi = None;
    'outer: for a in 0..n {
        for b in a + 1..n {
            for cc in b + 1..n {
                let (x, y, z) = (spec.basis_vector(a), spec.basis_vector(b), spec.basis_vector(cc));
                let t1 = spec.bracket(&spec.bracket(&x, &y), &z);
                let t2 = spec.bracket(&spec.bracket(&y, &z), &x);
                let t3 = spec.bracket(&spec.bracket(&z, &x), &y);
                let sum: Vec<Rational> = (0..n).map(|k| t1[k].clone() + t2[k].clone() + t3[k].clone()).collect();
                if sum.iter().any(|v| !v.is_zero()) {
                    jacobi = Some(format!(
                        "cyclic sum on (e{}, e{}, e{}) = {}",
                        a + 1,
                        b + 1,
                        cc + 1,
                        show_vector(&sum)
                    ));
                    break 'outer;
                }
            }
        }
    }
    let jacobi_ok = jacobi.is_none();
    entries.push(entry("jacobi", jacobi));

    let d = spec.real_differential();
    let dd = &d * &d;
    let d_squared = if dd.is_zero() {
        None
    } else {
        let col = (0..dd.cols()).find(|&j| dd.column(j).iter().any(|v| !v.is_zero())).unwrap_or(0);
        Some(format!("d^2 is nonzero on basis monomial {col:#b}"))
    };
    let d_squared_ok = d_squared.is_none();
    entries.push(entry("d-squared-zero", d_squared));
    entries.push(entry(
        "jacobi-matches-d-squared",
        (jacobi_ok != d_squared_ok).then(|| format!("jacobi={jacobi_ok}, d^2=0 is {d_squared_ok}")),
    ));

    let unimodular = (0..n)
        .map(|i| (i, (0..n).fold(Rational::zero(), |acc, k| acc + c[k][i][k].clone())))
        .find(|(_, tr)| !tr.is_zero())
        .map(|(i, tr)| format!("trace(ad e{}) = {}", i + 1, fmt_rational(&tr)));
    entries.push(entry("unimodular", unimodular));

    let jj = &spec.j * &spec.j;
    let j_squared = (jj != (-&RealMatrix::identity(n))).then(|| {
        let col = (0..n).find(|&k| jj.column(k) != (-&RealMatrix::identity(n)).column(k)).unwrap_or(0);
        format!("J^2 e{} = {}", col + 1, show_vector(&jj.column(col)))
    });
    entries.push(entry("j-squared-minus-identity", j_squared));

    let g = &spec.metric;
    let symmetric = (g != &g.transpose()).then(|| "g is not symmetric".to_string());
    let is_symmetric = symmetric.is_none();
    entries.push(entry("metric-symmetric", symmetric));

    let spd = if is_symmetric {
        positive_definite_witness(g).map(|x| {
            let q = g.mul_vec(&x).iter().zip(&x).fold(Rational::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
            format!("x = {} has g(x, x) = {}", show_vec(&x), fmt_rational(&q))
        })
    } else {
        Some("not symmetric".into())
    };
    entries.push(entry("metric-positive-definite", spd));

    let compat = (&(&spec.j.transpose() * g) * &spec.j != *g).then(|| "J^T g J != g".to_string());
    entries.push(entry("metric-j-compatible", compat));

    let mut nijenhuis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = spec.nijenhuis(&spec.basis_vector(i), &spec.basis_vector(j));
            if v.iter().any(|x| !x.is_zero()) {
                nijenhuis.push(NijenhuisValue {
                    i: i + 1,
                    j: j + 1,
                    value: v.iter().map(fmt_rational).collect(),
                });
            }
        }
    }
    let integrable = nijenhuis.is_empty();

    ValidationReport {
        name: spec.name.clone(),
        entries,
        nijenhuis,
        integrable,
    }
}

/// `None` if `g` is positive definite, otherwise a vector `x` with `g(x,x) <= 0`.
///
/// Runs an `L D L^T` factorisation; at the first nonpositive pivot `D_k`, the
/// vector `x = L^{-T} e_k` satisfies `x^T g x = D_k`.
pub fn positive_definite_witness(g: &RealMatrix) -> Option<Vec<Rational>> {
    let n = g.rows();
    let mut l = RealMatrix::identity(n);
    let mut dvals: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut dk = g[(k, k)].clone();
        for j in 0..k {
            dk -= l[(k, j)].clone() * l[(k, j)].clone() * dvals[j].clone();
        }
        if !dk.is_positive() {
            let mut x = vec![Rational::zero(); n];
            x[k] = Rational::one();
            for i in (0..k).rev() {
                let mut s = Rational::zero();
                for j in i + 1..=k {
                    s += l[(j, i)].clone() * x[j].clone();
                }
                x[i] = -s;
            }
            return Some(x);
        }
        for i in k + 1..n {
            let mut s = g[(i, k)].clone();
            for j in 0..k {
                s -= l[(i, j)].clone() * l[(k, j)].clone() * dvals[j].clone();
            }
            l[(i, k)] = s / dk.clone();
        }
        dvals.push(dk);
    }
    None
}
