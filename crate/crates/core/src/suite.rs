//! The complexified bigraded invariant complex and its operators.
//!
//! The complex coframe is `θ = (φ^1..φ^m, φ̄^1..φ̄^m)`; a monomial mask over
//! `θ` has bidegree `(p, q)` = (number of `φ`, number of `φ̄`). Every operator
//! is stored as a `2^n × 2^n` matrix in that basis, so restrictions to
//! `A^{p,q}` or `A^k` are column selections.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exterior::{self, antiderivation, induced_map, indices, masks_of_degree, wedge_sign, Form, Mask};
use crate::field::{ComplexField, Field};
use crate::manifold::{ManifoldSpec, ValidationReport};
use crate::{Matrix, Rational, RealMatrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("spec '{name}' failed validation: {failures}")]
    InvalidSpec { name: String, failures: String },
    #[error("omega^m/m! does not define a volume form compatible with g")]
    Orientation,
    #[error("exterior derivative has a component of bidegree ({0}, {1})")]
    Bidegree(i64, i64),
    #[error("operator identity failed: {0}")]
    Inconsistent(&'static str),
}

/// Real invariant forms in the frame coframe `e^1..e^n`.
#[derive(Clone, Debug)]
pub struct RealComplex {
    pub d: RealMatrix,
    pub star: RealMatrix,
    /// Pullback `α ↦ α(J·, …, J·)`.
    pub j_pullback: RealMatrix,
    /// Gram matrix of the induced metric on forms, all degrees.
    pub inner: RealMatrix,
    pub omega: Form<Rational>,
    pub vol: Form<Rational>,
}

#[derive(Clone, Debug)]
pub struct OperatorSuite {
    pub spec: ManifoldSpec,
    pub validation: ValidationReport,
    pub n: usize,
    pub m: usize,
    /// `(1,0)`-coframe `φ^a` as complex 1-forms on the real frame.
    pub coframe: Vec<Vec<Scalar>>,
    /// Column `K` holds `θ^K` in real coordinates.
    pub to_real: Matrix,
    pub from_real: Matrix,
    pub real: RealComplex,
    pub d: Matrix,
    pub mu: Matrix,
    pub del: Matrix,
    pub delbar: Matrix,
    pub mubar: Matrix,
    pub delta: Matrix,
    pub deltabar: Matrix,
    pub dc: Matrix,
    pub star: Matrix,
    pub j_action: Matrix,
    pub j_inverse: Matrix,
    /// Linear part of conjugation: `conj(v) = conjugation · v̄`.
    pub conjugation: Matrix,
    pub integrable: bool,
    pub almost_kahler: bool,
}

pub fn lift(m: &RealMatrix) -> Matrix {
    m.map(|r| Scalar::from_rational(r.clone()))
}

/// Bidegree of a monomial over `θ` with `m` holomorphic generators.
pub fn bidegree(m: usize, mask: Mask) -> (usize, usize) {
    let low = (1usize << m) - 1;
    ((mask & low).count_ones() as usize, (mask >> m).count_ones() as usize)
}

/// Extracts a deterministic `(1,0)`-coframe: echelon basis of
/// `π^{1,0} e^j = ½(e^j - i e^j∘J)`.
pub fn complex_coframe(spec: &ManifoldSpec) -> Vec<Vec<Scalar>> {
    let n = spec.dim;
    let half = Scalar::from_rational(crate::field::rat(1, 2));
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let e = if j == k { Scalar::one() } else { Scalar::zero() };
                    let ej = Scalar::from_rational(spec.j[(j, k)].clone());
                    half.clone() * (e - Scalar::i() * ej)
                })
                .collect()
        })
        .collect();
    let (r, pivots) = Matrix::from_rows(rows).rref();
    assert_eq!(pivots.len(), n / 2, "J^2 = -1 forces an m-dimensional (1,0) space");
    (0..n / 2).map(|i| r.row(i).to_vec()).collect()
}

impl OperatorSuite {
    pub fn assemble(spec: &ManifoldSpec) -> Result<Self, GeometryError> {
        let validation = spec.validate();
        if !validation.passed() {
            let failures = validation
                .failures()
                .iter()
                .map(|e| e.check)
                .collect::<Vec<_>>()
                .join(", ");
            return Err(GeometryError::InvalidSpec {
                name: spec.name.clone(),
                failures,
            });
        }
        let n = spec.dim;
        let m = n / 2;
        let size = 1usize << n;
        let real = real_complex(spec)?;

        let coframe = complex_coframe(spec);
        let mut gens = coframe.clone();
        gens.extend(coframe.iter().map(|row| row.iter().map(ComplexField::conj).collect::<Vec<_>>()));
        let to_real = induced_map(&Matrix::from_rows(gens));
        let from_real = to_real
            .inverse()
            .ok_or(GeometryError::Inconsistent("complex coframe is not a basis"))?;
        let conjugate = |r: &RealMatrix| &(&from_real * &lift(r)) * &to_real;

        let d = conjugate(&real.d);
        let star = conjugate(&real.star);

        let mut parts = [Matrix::zeros(size, size), Matrix::zeros(size, size), Matrix::zeros(size, size), Matrix::zeros(size, size)];
        for r in 0..size {
            for c in 0..size {
                if d[(r, c)].is_zero() {
                    continue;
                }
                let (pr, qr) = bidegree(m, r);
                let (pc, qc) = bidegree(m, c);
                let shift = (pr as i64 - pc as i64, qr as i64 - qc as i64);
                let slot = match shift {
                    (2, -1) => 0,
                    (1, 0) => 1,
                    (0, 1) => 2,
                    (-1, 2) => 3,
                    (a, b) => return Err(GeometryError::Bidegree(a, b)),
                };
                parts[slot][(r, c)] = d[(r, c)].clone();
            }
        }
        let [mu, del, delbar, mubar] = parts;
        let delta = &del + &mubar;
        let deltabar = &delbar + &mu;

        let phase = |sign: i64| {
            Matrix::diagonal(
                (0..size)
                    .map(|mask| {
                        let (p, q) = bidegree(m, mask);
                        Scalar::i_pow(sign * (p as i64 - q as i64))
                    })
                    .collect(),
            )
        };
        let j_action = phase(1);
        let j_inverse = phase(-1);
        let dc = &(&j_inverse * &d) * &j_action;
        if dc != (&deltabar - &delta).scale(&Scalar::i()) {
            return Err(GeometryError::Inconsistent("d^c = i(deltabar - delta)"));
        }

        let mut conjugation = Matrix::zeros(size, size);
        for mask in 0..size {
            let (target, sign) = conjugate_monomial(m, mask);
            conjugation[(target, mask)] = Scalar::from_i64(sign as i64);
        }

        let integrable = validation.integrable;
        let almost_kahler = real.d.mul_vec(real.omega.coeffs()).iter().all(Zero::is_zero);

        Ok(Self {
            spec: spec.clone(),
            validation,
            n,
            m,
            coframe,
            to_real,
            from_real,
            real,
            d,
            mu,
            del,
            delbar,
            mubar,
            delta,
            deltabar,
            dc,
            star,
            j_action,
            j_inverse,
            conjugation,
            integrable,
            almost_kahler,
        })
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn bidegree(&self, mask: Mask) -> (usize, usize) {
        bidegree(self.m, mask)
    }

    /// Basis monomials of `A^{p,q}`, canonical order.
    pub fn masks_pq(&self, p: usize, q: usize) -> Vec<Mask> {
        exterior::canonical_order(self.n)
            .into_iter()
            .filter(|&mask| self.bidegree(mask) == (p, q))
            .collect()
    }

    pub fn masks_k(&self, k: usize) -> Vec<Mask> {
        exterior::canonical_order(self.n)
            .into_iter()
            .filter(|&mask| exterior::degree(mask) == k)
            .collect()
    }

    /// Complex conjugation of a coordinate vector.
    pub fn conj(&self, v: &[Scalar]) -> Vec<Scalar> {
        let bar: Vec<Scalar> = v.iter().map(ComplexField::conj).collect();
        self.conjugation.mul_vec(&bar)
    }

    pub fn conj_matrix(&self, a: &Matrix) -> Matrix {
        // conj ∘ A ∘ conj
        let abar = a.map(ComplexField::conj);
        &(&self.conjugation * &abar) * &self.conjugation
    }

    /// Real form in frame coordinates, re-expressed over `θ`.
    pub fn complexify(&self, real: &[Rational]) -> Vec<Scalar> {
        let v: Vec<Scalar> = real.iter().map(|r| Scalar::from_rational(r.clone())).collect();
        self.from_real.mul_vec(&v)
    }

    /// Frame coordinates of a form given over `θ`.
    pub fn realify(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.to_real.mul_vec(v)
    }

    pub fn omega(&self) -> Vec<Scalar> {
        self.complexify(self.real.omega.coeffs())
    }

    pub fn is_dim4(&self) -> bool {
        self.n == 4
    }

    /// `conj(φ^a)` is generator `a + m` and vice versa.
    pub fn generator_name(&self, g: usize) -> String {
        if g < self.m {
            format!("phi{}", g + 1)
        } else {
            format!("phibar{}", g - self.m + 1)
        }
    }
}

/// Target monomial and sign of `conj(θ^K)`.
pub fn conjugate_monomial(m: usize, mask: Mask) -> (Mask, i8) {
    let swap = |g: usize| if g < m { g + m } else { g - m };
    let mut acc = 0;
    let mut sign = 1i8;
    for g in indices(mask) {
        let bit = 1 << swap(g);
        sign *= wedge_sign(acc, bit).expect("distinct generators");
        acc |= bit;
    }
    (acc, sign)
}

/// Real differential, metric data and Hodge star, oriented by `ω^m/m!`.
pub fn real_complex(spec: &ManifoldSpec) -> Result<RealComplex, GeometryError> {
    let n = spec.dim;
    let m = n / 2;
    let size = 1usize << n;
    let g = &spec.metric;

    // ω(e_i, e_j) = g(J e_i, e_j)
    let jtg = &spec.j.transpose() * g;
    let mut omega = Form::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            if !jtg[(i, j)].is_zero() {
                omega = &omega + &Form::monomial(n, 1 << i | 1 << j, jtg[(i, j)].clone());
            }
        }
    }
    let mut power = Form::monomial(n, 0, Rational::one());
    let mut factorial = Rational::one();
    for k in 1..=m {
        power = power.wedge(&omega);
        factorial *= Rational::from_i64(k as i64);
    }
    let vol = power.scale(&factorial.inv());
    let full = size - 1;
    let v = vol.coeff(full).clone();
    if v.is_zero() || v.clone() * v.clone() != g.determinant() {
        return Err(GeometryError::Orientation);
    }

    let ginv = g.inverse().ok_or(GeometryError::Orientation)?;
    let inner = induced_map(&ginv);
    let mut star = RealMatrix::zeros(size, size);
    for k in 0..=n {
        let masks = masks_of_degree(n, k);
        for &i in &masks {
            let complement = full ^ i;
            let s = wedge_sign(i, complement).expect("complementary monomials");
            for &j in &masks {
                let x = &inner[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let val = x.clone() * v.clone();
                star[(complement, j)] = if s < 0 { -val } else { val };
            }
        }
    }

    Ok(RealComplex {
        d: antiderivation(n, &spec.coframe_differentials()),
        star,
        j_pullback: induced_map(&spec.j),
        inner,
        omega,
        vol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::rat;
    use crate::linalg::SubspaceOver;
    use num_complex::Complex;

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    fn mono(i: &[usize]) -> Mask {
        exterior::mask_of(i)
    }

    fn real_form(terms: &[(i64, &[usize])]) -> Vec<Rational> {
        let mut v = vec![q(0); 16];
        for (c, idx) in terms {
            v[mono(idx)] = q(*c);
        }
        v
    }

    fn suite(id: &str) -> OperatorSuite {
        OperatorSuite::assemble(&catalog::instantiate(id, &[]).unwrap()).unwrap()
    }

    #[test]
    fn torus_coframe_is_e1_plus_i_e2() {
        let s = suite("t4-kahler");
        let one = Scalar::one();
        let i = Scalar::i();
        let z = Scalar::zero();
        assert_eq!(s.coframe[0], vec![one.clone(), i.clone(), z.clone(), z.clone()]);
        assert_eq!(s.coframe[1], vec![z.clone(), z, one, i]);
    }

    #[test]
    fn kodaira_thurston_coframe() {
        let s = suite("kodaira-thurston-ak");
        let (o, i, z) = (Scalar::one(), Scalar::i(), Scalar::zero());
        assert_eq!(s.coframe[0], vec![o.clone(), z.clone(), i.clone(), z.clone()]);
        assert_eq!(s.coframe[1], vec![z.clone(), o, z, i]);
    }

    #[test]
    fn top_wedge_of_coframe_is_nonzero() {
        for id in catalog::ids() {
            let s = suite(id);
            let top = s.to_real.column(s.size() - 1);
            assert!(!top[s.size() - 1].is_zero(), "{id}");
        }
    }

    #[test]
    fn real_differential_on_kodaira_thurston() {
        let s = suite("kodaira-thurston-ak");
        let d = &s.real.d;
        for g in 0..4 {
            let col = d.column(1 << g);
            let nonzero = col.iter().any(|x| !x.is_zero());
            assert_eq!(nonzero, g == 3);
        }
        assert_eq!(d.mul_vec(&real_form(&[(1, &[2, 3])])), real_form(&[(-1, &[0, 1, 2])]));
        assert!(d.mul_vec(&real_form(&[(1, &[0, 3])])).iter().all(Zero::is_zero));
    }

    #[test]
    fn torus_differential_vanishes() {
        let s = suite("t4-kahler");
        assert!(s.real.d.is_zero() && s.d.is_zero());
    }

    #[test]
    fn star_on_oriented_orthonormal_coframe() {
        let s = suite("t4-kahler");
        let st = &s.real.star;
        assert_eq!(st.mul_vec(&real_form(&[(1, &[0, 1])])), real_form(&[(1, &[2, 3])]));
        assert_eq!(st.mul_vec(&real_form(&[(1, &[])])), real_form(&[(1, &[0, 1, 2, 3])]));
        assert_eq!(st.mul_vec(&real_form(&[(1, &[0, 1, 2, 3])])), real_form(&[(1, &[])]));
    }

    #[test]
    fn star_uses_the_j_orientation_on_kodaira_thurston() {
        // ω = e13 + e24, so the volume form is e13 ∧ e24 = -e1234.
        let s = suite("kodaira-thurston-ak");
        assert_eq!(s.real.vol.coeff(15), &q(-1));
        assert_eq!(s.real.star.mul_vec(&real_form(&[(1, &[0, 2])])), real_form(&[(1, &[1, 3])]));
    }

    #[test]
    fn torus_self_dual_two_forms() {
        let s = suite("t4-kahler");
        let masks = masks_of_degree(4, 2);
        let block = s.real.star.select(&masks, &masks);
        let (plus, minus) = block.eigensplit_involution().unwrap();
        let local = |terms: &[(i64, &[usize])]| {
            let v = real_form(terms);
            masks.iter().map(|&mk| v[mk].clone()).collect::<Vec<_>>()
        };
        let expected = SubspaceOver::span(
            6,
            vec![
                local(&[(1, &[0, 1]), (1, &[2, 3])]),
                local(&[(1, &[0, 2]), (-1, &[1, 3])]),
                local(&[(1, &[0, 3]), (1, &[1, 2])]),
            ],
        );
        assert_eq!(plus, expected);
        assert_eq!(minus.dim(), 3);
        assert_eq!(plus.dim() + minus.dim(), 6);
    }

    #[test]
    fn star_maps_pq_to_complementary_bidegree() {
        let s = suite("kodaira-thurston-ak");
        for mask in 0..16 {
            let (p, qq) = s.bidegree(mask);
            let col = s.star.column(mask);
            for (r, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    assert_eq!(s.bidegree(r), (2 - qq, 2 - p));
                }
            }
        }
    }

    #[test]
    fn j_phase_matches_pullback() {
        for id in catalog::ids() {
            let s = suite(id);
            let pulled = &(&s.from_real * &lift(&s.real.j_pullback)) * &s.to_real;
            assert_eq!(pulled, s.j_action, "{id}");
        }
    }

    #[test]
    fn leibniz_route_agrees_with_conjugated_differential() {
        for id in catalog::ids() {
            let s = suite(id);
            let images: Vec<Form<Scalar>> = (0..s.n)
                .map(|g| Form::from_coeffs(s.n, s.d.column(1 << g)))
                .collect();
            assert_eq!(antiderivation(s.n, &images), s.d, "{id}");
        }
    }

    #[test]
    fn conjugation_matches_real_structure() {
        let s = suite("kodaira-thurston-ak");
        let v: Vec<Scalar> = (0..16).map(|k| Complex::new(rat(k, 3), rat(1 - k, 2))).collect();
        let via_real = {
            let r = s.realify(&v);
            let rbar: Vec<Scalar> = r.iter().map(ComplexField::conj).collect();
            s.from_real.mul_vec(&rbar)
        };
        assert_eq!(s.conj(&v), via_real);
    }

    #[test]
    fn kodaira_thurston_mubar_witness() {
        let s = suite("kodaira-thurston-ak");
        assert!(!s.mubar.is_zero());
        // dφ² = i e1 ∧ e2 has a (0,2) part
        let dphi2 = s.mubar.column(1 << 1);
        assert!(dphi2.iter().any(|x| !x.is_zero()));
        let t = suite("t4-kahler");
        assert!(t.mubar.is_zero());
    }

    #[test]
    fn omega_and_almost_kahler_flags() {
        let t = suite("t4-kahler");
        assert_eq!(t.real.omega.coeffs().to_vec(), real_form(&[(1, &[0, 1]), (1, &[2, 3])]));
        assert!(t.almost_kahler);

        let k = suite("kodaira-thurston-ak");
        assert_eq!(k.real.omega.coeffs().to_vec(), real_form(&[(1, &[0, 2]), (1, &[1, 3])]));
        assert!(k.almost_kahler && !k.integrable);

        let h = suite("kodaira-thurston-ah");
        assert_eq!(h.real.omega.coeffs().to_vec(), real_form(&[(1, &[0, 1]), (1, &[2, 3])]));
        assert!(!h.almost_kahler);
        let domega = h.real.d.mul_vec(h.real.omega.coeffs());
        assert_eq!(domega, real_form(&[(-1, &[0, 1, 2])]));
    }

    #[test]
    fn omega_squared_is_twice_the_volume() {
        for id in catalog::ids() {
            let s = suite(id);
            let w2 = s.real.omega.wedge(&s.real.omega);
            assert_eq!(w2, s.real.vol.scale(&q(2)), "{id}");
        }
    }

    #[test]
    fn basis_forms_have_positive_norm() {
        for id in catalog::ids() {
            let s = suite(id);
            for mask in 0..16 {
                assert!(s.real.inner[(mask, mask)] > q(0), "{id}");
            }
        }
    }

    #[test]
    fn integrable_structure_has_vanishing_mubar() {
        let s = suite("kodaira-thurston-ah");
        assert!(s.integrable);
        assert!(s.mubar.is_zero());
        assert!((&s.delbar * &s.delbar).is_zero());
        // d^c = i(∂̄ - ∂) in the integrable case
        assert_eq!(s.dc, (&s.delbar - &s.del).scale(&Scalar::i()));
    }

    #[test]
    fn dc_two_routes_on_kodaira_thurston() {
        let s = suite("kodaira-thurston-ak");
        let via_identity = (&s.deltabar - &s.delta).scale(&Scalar::i());
        let e1 = s.complexify(&real_form(&[(1, &[0])]));
        assert_eq!(s.dc.mul_vec(&e1), via_identity.mul_vec(&e1));
    }
}
