//! Spaces of invariant harmonic forms.
//!
//! Every space is the common kernel of a few operators restricted to one
//! (bi)degree, so a query turns into one stacked constraint matrix and a
//! single kernel computation. Results live in the full `2^n`-dimensional
//! coordinate space over the `θ` coframe, which lets spaces of different
//! degrees be compared, summed and intersected directly.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use num_traits::{One, Zero};

use crate::exterior::{masks_of_degree, Mask};
use crate::manifold::ManifoldSpec;
use crate::suite::{GeometryError, OperatorSuite};
use crate::{Matrix, RealMatrix, RealSubspace, Scalar, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `∂̄α = 0`, `∂*α = 0`
    Delbar,
    /// `∂α = ∂̄α = 0`, `∂∂̄*α = 0`
    DelDelbar,
    /// `δ̄α = 0`, `δ*α = 0`
    Deltabar,
    /// `δα = δ̄α = 0`, `δδ̄*α = 0`
    DeltaDeltabar,
    /// `dα = 0`, `d*α = 0` on a fixed bidegree
    D,
    /// `dα = d^cα = 0`, `d^c d*α = 0`
    DDc,
    /// `dα = d*α = 0` on `A^{2,0} ⊕ A^{0,2}`
    AntiInvariant,
    /// real harmonic forms of a degree, complexified
    DeRham,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Delbar,
        Family::DelDelbar,
        Family::Deltabar,
        Family::DeltaDeltabar,
        Family::D,
        Family::DDc,
        Family::AntiInvariant,
        Family::DeRham,
    ];

    pub fn is_bigraded(self) -> bool {
        matches!(self, Family::Delbar | Family::DelDelbar | Family::D)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Delbar => "delbar",
            Family::DelDelbar => "del-delbar",
            Family::Deltabar => "deltabar",
            Family::DeltaDeltabar => "delta-deltabar",
            Family::D => "d",
            Family::DDc => "d-dc",
            Family::AntiInvariant => "anti-invariant",
            Family::DeRham => "de-rham",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Bi(usize, usize),
    Total(usize),
    None,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error("{family} spaces are indexed by {expected}")]
    WrongDegree { family: Family, expected: &'static str },
    #[error("degree {0:?} is out of range")]
    OutOfRange(Degree),
    #[error("harmonic and cohomological counts disagree in degree {k}: {harmonic} vs {cohomology}")]
    BettiMismatch { k: usize, harmonic: usize, cohomology: usize },
    #[error("real and complex anti-invariant counts disagree: {real} vs {complex}")]
    AntiInvariantMismatch { real: usize, complex: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One harmonic space to compute: a family and a degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicQuery {
    pub family: Family,
    pub degree: Degree,
}

impl HarmonicQuery {
    pub fn new(family: Family, degree: Degree) -> Result<Self, HarmonicError> {
        let ok = match (family, degree) {
            (Family::AntiInvariant, Degree::None) => true,
            (f, Degree::Bi(..)) => f.is_bigraded(),
            (f, Degree::Total(_)) => !f.is_bigraded() && f != Family::AntiInvariant,
            _ => false,
        };
        if !ok {
            let expected = match family {
                Family::AntiInvariant => "no degree",
                f if f.is_bigraded() => "a bidegree (p, q)",
                _ => "a total degree k",
            };
            return Err(HarmonicError::WrongDegree { family, expected });
        }
        Ok(Self { family, degree })
    }

    pub fn bi(family: Family, p: usize, q: usize) -> Self {
        Self::new(family, Degree::Bi(p, q)).expect("bigraded family")
    }

    pub fn total(family: Family, k: usize) -> Self {
        Self::new(family, Degree::Total(k)).expect("graded family")
    }
}

fn common_kernel(ops: &[Matrix], domain: &[Mask], size: usize) -> Subspace {
    let blocks: Vec<Matrix> = ops.iter().map(|o| o.select_columns(domain)).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let stacked = Matrix::vstack(&refs).expect("operators share the domain");
    stacked.kernel().embed(domain, size)
}

fn then_star(suite: &OperatorSuite, ops: &[&Matrix]) -> Matrix {
    ops.iter().rev().fold(suite.star.clone(), |acc, op| *op * &acc)
}

/// Computes one harmonic space as a subspace of the full form space.
pub fn solve(suite: &OperatorSuite, query: &HarmonicQuery) -> Result<Subspace, HarmonicError> {
    let (n, m, size) = (suite.n, suite.m, suite.size());
    let domain: Vec<Mask> = match query.degree {
        Degree::Bi(p, q) if p <= m && q <= m => suite.masks_pq(p, q),
        Degree::Total(k) if k <= n => suite.masks_k(k),
        Degree::None => {
            let mut d = suite.masks_pq(2.min(m), 0);
            d.extend(suite.masks_pq(0, 2.min(m)));
            if m < 2 {
                d.clear();
            }
            d
        }
        other => return Err(HarmonicError::OutOfRange(other)),
    };
    let s = suite;
    let ops: Vec<Matrix> = match query.family {
        Family::Delbar => vec![s.delbar.clone(), then_star(s, &[&s.del])],
        Family::DelDelbar => vec![s.del.clone(), s.delbar.clone(), then_star(s, &[&s.del, &s.delbar])],
        Family::Deltabar => vec![s.deltabar.clone(), then_star(s, &[&s.delta])],
        Family::DeltaDeltabar => vec![s.delta.clone(), s.deltabar.clone(), then_star(s, &[&s.delta, &s.deltabar])],
        Family::D | Family::AntiInvariant => vec![s.d.clone(), then_star(s, &[&s.d])],
        Family::DDc => vec![s.d.clone(), s.dc.clone(), then_star(s, &[&s.dc, &s.d])],
        Family::DeRham => {
            let Degree::Total(k) = query.degree else { unreachable!() };
            let real = de_rham_real(s, k);
            return Ok(Subspace::span(size, real.basis().iter().map(|v| s.complexify(v)).collect()));
        }
    };
    Ok(common_kernel(&ops, &domain, size))
}

/// Harmonic real `k`-forms in frame coordinates.
pub fn de_rham_real(suite: &OperatorSuite, k: usize) -> RealSubspace {
    let r = &suite.real;
    let domain = masks_of_degree(suite.n, k);
    let dstar = &r.d * &r.star;
    let stacked = RealMatrix::vstack(&[&r.d.select_columns(&domain), &dstar.select_columns(&domain)]).expect("same domain");
    stacked.kernel().embed(&domain, suite.size())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Betti {
    pub b: Vec<usize>,
    /// Only defined when the middle degree is even.
    pub b_plus: Option<usize>,
    pub b_minus: Option<usize>,
}

/// Betti numbers from harmonic forms, checked against `dim ker d - rank d`.
pub fn betti(suite: &OperatorSuite) -> Result<Betti, HarmonicError> {
    let n = suite.n;
    let d = &suite.real.d;
    let mut b = Vec::with_capacity(n + 1);
    let mut previous_rank = 0;
    for k in 0..=n {
        let masks = masks_of_degree(n, k);
        let (rank, kernel) = d.select_columns(&masks).rank_kernel();
        let cohomology = kernel.dim() - previous_rank;
        previous_rank = rank;
        let harmonic = de_rham_real(suite, k).dim();
        if harmonic != cohomology {
            return Err(HarmonicError::BettiMismatch { k, harmonic, cohomology });
        }
        b.push(harmonic);
    }
    let (mut b_plus, mut b_minus) = (None, None);
    if suite.m.is_multiple_of(2) {
        let (plus, minus) = self_dual_split(suite);
        let h = de_rham_real(suite, suite.m);
        b_plus = Some(plus.intersect(&h).expect("same ambient").dim());
        b_minus = Some(minus.intersect(&h).expect("same ambient").dim());
    }
    Ok(Betti { b, b_plus, b_minus })
}

/// Self-dual and anti-self-dual real middle-degree forms.
pub fn self_dual_split(suite: &OperatorSuite) -> (RealSubspace, RealSubspace) {
    let masks = masks_of_degree(suite.n, suite.m);
    let block = suite.real.star.select(&masks, &masks);
    let (plus, minus) = block.eigensplit_involution().expect("star squares to one in the middle degree");
    (plus.embed(&masks, suite.size()), minus.embed(&masks, suite.size()))
}

/// Real closed and coclosed 2-forms with `J*α = -α`; its dimension must
/// match the complex anti-invariant count.
pub fn anti_invariant_real(suite: &OperatorSuite) -> RealSubspace {
    let r = &suite.real;
    let masks = masks_of_degree(suite.n, 2);
    let identity = RealMatrix::identity(suite.size());
    let plus_one = &r.j_pullback + &identity;
    let dstar = &r.d * &r.star;
    let blocks = [
        plus_one.select_columns(&masks),
        r.d.select_columns(&masks),
        dstar.select_columns(&masks),
    ];
    let refs: Vec<&RealMatrix> = blocks.iter().collect();
    RealMatrix::vstack(&refs).expect("same domain").kernel().embed(&masks, suite.size())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub integrable: bool,
    pub almost_kahler: bool,
    pub unimodular: bool,
}

/// Every harmonic number of one structure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicReport {
    pub name: String,
    pub digest: String,
    pub dim: usize,
    pub params: BTreeMap<String, String>,
    pub flags: Flags,
    pub betti: Betti,
    /// `delbar[p][q] = h^{p,q}_∂̄`
    pub delbar: Vec<Vec<usize>>,
    pub del_delbar: Vec<Vec<usize>>,
    pub d_pq: Vec<Vec<usize>>,
    pub deltabar_k: Vec<usize>,
    pub delta_deltabar_k: Vec<usize>,
    pub d_dc_k: Vec<usize>,
    pub h_minus_j: usize,
}

impl HarmonicReport {
    /// Flattened `(label, value)` pairs, used to compare reports.
    pub fn entries(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        for (label, grid) in [("delbar", &self.delbar), ("del-delbar", &self.del_delbar), ("d", &self.d_pq)] {
            for (p, row) in grid.iter().enumerate() {
                for (q, v) in row.iter().enumerate() {
                    out.push((format!("{label}({p},{q})"), *v));
                }
            }
        }
        for (label, list) in [
            ("deltabar", &self.deltabar_k),
            ("delta-deltabar", &self.delta_deltabar_k),
            ("d-dc", &self.d_dc_k),
            ("b", &self.betti.b),
        ] {
            for (k, v) in list.iter().enumerate() {
                out.push((format!("{label}[{k}]"), *v));
            }
        }
        out.push(("h-minus-J".into(), self.h_minus_j));
        if let (Some(p), Some(m)) = (self.betti.b_plus, self.betti.b_minus) {
            out.push(("b-plus".into(), p));
            out.push(("b-minus".into(), m));
        }
        out
    }
}

pub fn report_for(suite: &OperatorSuite) -> Result<HarmonicReport, HarmonicError> {
    let (n, m) = (suite.n, suite.m);
    let grid = |family| -> Result<Vec<Vec<usize>>, HarmonicError> {
        (0..=m)
            .map(|p| (0..=m).map(|q| Ok(solve(suite, &HarmonicQuery::bi(family, p, q))?.dim())).collect())
            .collect()
    };
    let graded = |family| -> Result<Vec<usize>, HarmonicError> {
        (0..=n).map(|k| Ok(solve(suite, &HarmonicQuery::total(family, k))?.dim())).collect()
    };
    let h_minus_j = solve(suite, &HarmonicQuery::new(Family::AntiInvariant, Degree::None)?)?.dim();
    let real = anti_invariant_real(suite).dim();
    if real != h_minus_j {
        return Err(HarmonicError::AntiInvariantMismatch { real, complex: h_minus_j });
    }
    let spec = &suite.spec;
    Ok(HarmonicReport {
        name: spec.name.clone(),
        digest: crate::specfile::digest(spec),
        dim: n,
        params: spec.params.iter().map(|(k, v)| (k.clone(), crate::field::fmt_rational(v))).collect(),
        flags: Flags {
            integrable: suite.integrable,
            almost_kahler: suite.almost_kahler,
            unimodular: suite.validation.entry("unimodular").is_some_and(|e| e.passed),
        },
        betti: betti(suite)?,
        delbar: grid(Family::Delbar)?,
        del_delbar: grid(Family::DelDelbar)?,
        d_pq: grid(Family::D)?,
        deltabar_k: graded(Family::Deltabar)?,
        delta_deltabar_k: graded(Family::DeltaDeltabar)?,
        d_dc_k: graded(Family::DDc)?,
        h_minus_j,
    })
}

/// Assembles the operators of `spec` and computes all harmonic numbers.
pub fn full_report(spec: &ManifoldSpec) -> Result<(OperatorSuite, HarmonicReport), HarmonicError> {
    let suite = OperatorSuite::assemble(spec)?;
    let report = report_for(&suite)?;
    Ok((suite, report))
}

/// `A^{p,q}` as a subspace of the full form space.
pub fn bidegree_space(suite: &OperatorSuite, p: usize, q: usize) -> Subspace {
    let size = suite.size();
    let vectors = suite
        .masks_pq(p, q)
        .into_iter()
        .map(|mask| {
            let mut v = vec![Scalar::zero(); size];
            v[mask] = Scalar::one();
            v
        })
        .collect();
    Subspace::span(size, vectors)
}

/// Kernel of `op` restricted to `A^{p,q}`.
pub fn kernel_on_bidegree(suite: &OperatorSuite, op: &Matrix, p: usize, q: usize) -> Subspace {
    common_kernel(std::slice::from_ref(op), &suite.masks_pq(p, q), suite.size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn report(id: &str) -> HarmonicReport {
        full_report(&catalog::instantiate(id, &[]).unwrap()).unwrap().1
    }

    #[test]
    fn wrong_degree_kinds_are_rejected() {
        assert!(HarmonicQuery::new(Family::Delbar, Degree::Total(1)).is_err());
        assert!(HarmonicQuery::new(Family::DDc, Degree::Bi(1, 0)).is_err());
        assert!(HarmonicQuery::new(Family::AntiInvariant, Degree::Total(2)).is_err());
        let suite = OperatorSuite::assemble(&catalog::instantiate("t4-kahler", &[]).unwrap()).unwrap();
        assert_eq!(
            solve(&suite, &HarmonicQuery::bi(Family::Delbar, 3, 0)),
            Err(HarmonicError::OutOfRange(Degree::Bi(3, 0)))
        );
    }

    #[test]
    fn torus() {
        let r = report("t4-kahler");
        assert_eq!(r.betti.b, vec![1, 4, 6, 4, 1]);
        assert_eq!((r.betti.b_plus, r.betti.b_minus), (Some(3), Some(3)));
        assert_eq!(r.delbar, vec![vec![1, 2, 1], vec![2, 4, 2], vec![1, 2, 1]]);
        assert_eq!(r.d_dc_k[1], 4);
        assert_eq!(r.h_minus_j, 2);
        assert_eq!(r.delta_deltabar_k[2], 6);
    }

    #[test]
    fn kodaira_thurston() {
        let r = report("kodaira-thurston-ak");
        assert_eq!(r.betti.b, vec![1, 3, 4, 3, 1]);
        assert_eq!((r.betti.b_plus, r.betti.b_minus), (Some(2), Some(2)));
        assert_eq!(r.d_dc_k[1], 2);
        assert_eq!(r.d_dc_k[3], 3);
        assert_eq!(r.h_minus_j, 1);
        assert_eq!(r.delta_deltabar_k[2], 4);
        assert_eq!(r.d_pq[1][0], 1);
        assert_eq!(r.d_pq[2][0], 0);
    }

    #[test]
    fn anti_invariant_basis_on_kodaira_thurston() {
        let suite = OperatorSuite::assemble(&catalog::instantiate("kodaira-thurston-ak", &[]).unwrap()).unwrap();
        let real = anti_invariant_real(&suite);
        assert_eq!(real.dim(), 1);
        let mut v = vec![crate::Rational::zero(); 16];
        v[0b1001] = crate::field::rat(1, 1);
        v[0b0110] = crate::field::rat(-1, 1);
        assert!(real.contains(&v));
    }
}
