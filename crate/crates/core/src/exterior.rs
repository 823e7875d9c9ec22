//! Exterior algebra on `n` generators.
//!
//! A monomial is a bitmask: bit `i` set means generator `i` occurs. The wedge
//! of monomials is stored in increasing index order, so every mask names a
//! unique canonical multi-index. Dense coefficient vectors are indexed by the
//! mask itself (length `2^n`).

use crate::field::{Field, ScalarDisplay};
use crate::linalg::MatrixOver;

pub type Mask = usize;

pub fn degree(mask: Mask) -> usize {
    mask.count_ones() as usize
}

/// Indices of the generators in a monomial, increasing.
pub fn indices(mask: Mask) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

/// Sign of `e^a ∧ e^b` relative to the canonical monomial `e^(a|b)`, or
/// `None` when the monomials share a generator.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    // each generator of b must pass every larger generator of a
    let mut swaps = 0u32;
    for j in indices(b) {
        swaps += (a >> (j + 1)).count_ones();
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

fn signed<F: Field>(s: i8, v: F) -> F {
    if s < 0 {
        -v
    } else {
        v
    }
}

/// Canonical ordering of a degree: lexicographic on the index tuples.
pub fn masks_of_degree(n: usize, k: usize) -> Vec<Mask> {
    let mut masks: Vec<Mask> = (0..1usize << n).filter(|&m| degree(m) == k).collect();
    masks.sort_by_key(|&m| indices(m));
    masks
}

/// All monomials ordered by degree, then lexicographically.
pub fn canonical_order(n: usize) -> Vec<Mask> {
    (0..=n).flat_map(|k| masks_of_degree(n, k)).collect()
}

/// An element of the exterior algebra on `n` generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<F> {
    n: usize,
    coeffs: Vec<F>,
}

impl<F: Field> Form<F> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![F::zero(); 1 << n],
        }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<F>) -> Self {
        assert_eq!(coeffs.len(), 1 << n);
        Self { n, coeffs }
    }

    pub fn monomial(n: usize, mask: Mask, c: F) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[mask] = c;
        f
    }

    /// The generator `e^i` as a one-form.
    pub fn generator(n: usize, i: usize) -> Self {
        Self::monomial(n, 1 << i, F::one())
    }

    /// A 1-form from its coefficients on the generators.
    pub fn one_form(coeffs: &[F]) -> Self {
        let n = coeffs.len();
        let mut f = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            f.coeffs[1 << i] = c.clone();
        }
        f
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, mask: Mask) -> &F {
        &self.coeffs[mask]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    /// The degree if the form is homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(degree(m)),
                Some(d) if d != degree(m) => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some(s) = wedge_sign(a, b) {
                    out.coeffs[a | b] = out.coeffs[a | b].clone() + signed(s, x.clone() * y.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// Keeps only the monomials accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(Mask) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| if keep(m) { c.clone() } else { F::zero() })
            .collect();
        Self { n: self.n, coeffs }
    }

    /// Human-readable sum of terms, generators named by `name`.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String
    where
        F: ScalarDisplay,
    {
        let terms: Vec<String> = canonical_order(self.n)
            .into_iter()
            .filter(|&m| !self.coeffs[m].is_zero())
            .map(|m| {
                let mono = if m == 0 {
                    "1".to_string()
                } else {
                    indices(m).into_iter().map(&name).collect::<Vec<_>>().join("^")
                };
                format!("({})*{mono}", self.coeffs[m].display())
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl<F: Field> std::ops::Add for &Form<F> {
    type Output = Form<F>;
    fn add(self, rhs: &Form<F>) -> Form<F> {
        Form {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Field> std::ops::Sub for &Form<F> {
    type Output = Form<F>;
    fn sub(self, rhs: &Form<F>) -> Form<F> {
        Form {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

/// The algebra map induced by a substitution of generators.
///
/// Row `a` of `images` is the 1-form that generator `a` is sent to. The
/// returned `2^n × 2^n` matrix sends the coordinate vector of a form to the
/// coordinates of its image; column `K` holds the wedge of the images of the
/// generators in `K`.
pub fn induced_map<F: Field>(images: &MatrixOver<F>) -> MatrixOver<F> {
    let n = images.cols();
    assert_eq!(images.rows(), n, "substitution must be square");
    let ones: Vec<Form<F>> = (0..n).map(|a| Form::one_form(images.row(a))).collect();
    let columns: Vec<Vec<F>> = (0..1usize << n)
        .map(|mask| {
            indices(mask)
                .into_iter()
                .fold(Form::monomial(n, 0, F::one()), |acc, a| acc.wedge(&ones[a]))
                .into_coeffs()
        })
        .collect();
    MatrixOver::from_columns(1 << n, &columns)
}

/// Degree +1 antiderivation determined by its values on the generators.
///
/// `images[a]` is the 2-form `d(θ^a)`; the result is the matrix of the unique
/// extension satisfying `d(α ∧ β) = dα ∧ β + (-1)^|α| α ∧ dβ` and `d(1) = 0`.
pub fn antiderivation<F: Field>(n: usize, images: &[Form<F>]) -> MatrixOver<F> {
    assert_eq!(images.len(), n);
    let columns: Vec<Vec<F>> = (0..1usize << n)
        .map(|mask| {
            let idx = indices(mask);
            let mut out = Form::zero(n);
            for (s, &a) in idx.iter().enumerate() {
                let left = Form::monomial(n, mask_of(&idx[..s]), F::one());
                let right = Form::monomial(n, mask_of(&idx[s + 1..]), F::one());
                let term = left.wedge(&images[a]).wedge(&right);
                out = if s % 2 == 0 { &out + &term } else { &out - &term };
            }
            out.into_coeffs()
        })
        .collect();
    MatrixOver::from_columns(1 << n, &columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_rational::BigRational;
    use num_traits::One;

    type R = BigRational;

    fn e(i: usize) -> Form<R> {
        Form::generator(4, i)
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b0001, 0b0010), Some(1));
        assert_eq!(wedge_sign(0b0010, 0b0001), Some(-1));
        assert_eq!(wedge_sign(0b0011, 0b0011), None);
        // e3 ∧ e1 ∧ e2 = e1 ∧ e2 ∧ e3
        let f = e(2).wedge(&e(0)).wedge(&e(1));
        assert_eq!(f, Form::monomial(4, 0b0111, R::one()));
    }

    #[test]
    fn graded_commutativity() {
        let a = &e(0) + &e(1).scale(&rat(3, 2));
        let b = e(1).wedge(&e(2));
        assert_eq!(a.wedge(&b), b.wedge(&a));
        assert_eq!(a.wedge(&e(3)), e(3).wedge(&a).scale(&rat(-1, 1)));
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn canonical_order_is_by_degree_then_lex() {
        let order = canonical_order(3);
        let named: Vec<Vec<usize>> = order.iter().map(|&m| indices(m)).collect();
        assert_eq!(
            named,
            vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(masks_of_degree(4, 2).len(), 6);
    }

    #[test]
    fn induced_map_of_identity() {
        let id = MatrixOver::<R>::identity(4);
        assert_eq!(induced_map(&id), MatrixOver::identity(16));
    }

    #[test]
    fn induced_map_computes_minors() {
        // e1 -> e1 + 2 e2, e2 -> 3 e1 + 4 e2: e1 ∧ e2 -> det · e1 ∧ e2
        let m = MatrixOver::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(3, 1), rat(4, 1)],
        ]);
        let big = induced_map(&m);
        assert_eq!(big[(0b11, 0b11)], rat(-2, 1));
    }

    #[test]
    fn antiderivation_squares_to_zero_on_heisenberg() {
        // d e4 = e1 ∧ e2
        let mut images = vec![Form::zero(4); 4];
        images[3] = e(0).wedge(&e(1));
        let d = antiderivation(4, &images);
        assert!((&d * &d).is_zero());
        // d(e3 ∧ e4) = -e1 ∧ e2 ∧ e3
        let col = d.column(0b1100);
        assert_eq!(col[0b0111], rat(-1, 1));
    }
}
