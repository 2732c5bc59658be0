//! Exact univariate polynomials and continuous piecewise-polynomial
//! functions on a finite breakpoint span.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::polytope::{AffineFunctional, RationalPolytope};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{self, q, Q};

/// Coefficients from the constant term upward, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "crate::rational::vec_as_str")]
    coeffs: Vec<Q>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `a - x^n`, the shape of a blowup volume near a smooth point.
    pub fn constant_minus_power(a: Q, n: usize) -> Self {
        let mut c = vec![Q::zero(); n + 1];
        c[0] = a;
        c[n] -= Q::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn antiderivative(&self) -> Self {
        let mut c = vec![Q::zero()];
        for (i, a) in self.coeffs.iter().enumerate() {
            c.push(a / q(i as i64 + 1));
        }
        Self::new(c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * q(i as i64))
                .collect(),
        )
    }

    pub fn integral(&self, a: &Q, b: &Q) -> Q {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Q], i: usize| v.get(i).cloned().unwrap_or_else(Q::zero);
        Self::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&other.coeffs, i))
                .collect(),
        )
    }

    /// `p(s * x)`.
    pub fn compose_scale(&self, s: &Q) -> Self {
        let mut pow = Q::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= s;
        }
        Self::new(out)
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(points: &[(Q, Q)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(Q::one());
            let mut denom = Q::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul_linear(&-xj.clone());
                denom *= xi - xj;
            }
            acc = acc.add(&basis.scale(&(yi / denom)));
        }
        acc
    }

    /// Multiply by `(x + c)`.
    fn mul_linear(&self, c: &Q) -> Self {
        let mut out = vec![Q::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] += a * c;
            out[i + 1] += a;
        }
        Self::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// How to evaluate or integrate past the represented span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Outside the span is an error.
    None,
    /// Hold the endpoint values constant on either side.
    ClampEndpoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    #[serde(with = "crate::rational::vec_as_str")]
    breakpoints: Vec<Q>,
    pieces: Vec<Polynomial>,
    degree_bound: usize,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<Q>, pieces: Vec<Polynomial>, degree_bound: usize) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must strictly increase".into(),
            ));
        }
        if pieces.iter().any(|p| p.degree() > degree_bound) {
            return Err(Error::InvalidInput("piece exceeds degree bound".into()));
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let x = &breakpoints[i + 1];
            if w[0].eval(x) != w[1].eval(x) {
                return Err(Error::InvalidInput(format!(
                    "discontinuity at breakpoint {}",
                    rational::to_string(x)
                )));
            }
        }
        Ok(Self {
            breakpoints,
            pieces,
            degree_bound,
        })
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn lo(&self) -> &Q {
        &self.breakpoints[0]
    }

    pub fn hi(&self) -> &Q {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    /// Index of the piece governing `x` (right piece at interior breakpoints).
    fn piece_index(&self, x: &Q) -> Option<usize> {
        if x < self.lo() || x > self.hi() {
            return None;
        }
        let idx = self.breakpoints.partition_point(|b| b <= x);
        Some(idx.saturating_sub(1).min(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        self.piece_index(x)
            .map(|i| self.pieces[i].eval(x))
            .ok_or_else(|| self.out_of_domain(x, x))
    }

    pub fn eval_with(&self, x: &Q, ext: Extension) -> Result<Q> {
        match ext {
            Extension::None => self.eval(x),
            Extension::ClampEndpoints => {
                if x < self.lo() {
                    self.eval(&self.lo().clone())
                } else if x > self.hi() {
                    self.eval(&self.hi().clone())
                } else {
                    self.eval(x)
                }
            }
        }
    }

    fn out_of_domain(&self, a: &Q, b: &Q) -> Error {
        Error::OutOfDomain {
            a: rational::to_string(a),
            b: rational::to_string(b),
            lo: rational::to_string(self.lo()),
            hi: rational::to_string(self.hi()),
        }
    }

    pub fn integrate(&self, a: &Q, b: &Q) -> Result<Q> {
        self.integrate_with(a, b, Extension::None)
    }

    pub fn integrate_with(&self, a: &Q, b: &Q, ext: Extension) -> Result<Q> {
        if a > b {
            return Err(Error::Precondition(
                "integration bounds must satisfy a <= b".into(),
            ));
        }
        let mut total = Q::zero();
        let (mut a, mut b) = (a.clone(), b.clone());
        if a < *self.lo() || b > *self.hi() {
            if ext == Extension::None {
                return Err(self.out_of_domain(&a, &b));
            }
            if a < *self.lo() {
                let end = b.clone().min(self.lo().clone());
                total += (&end - &a) * self.eval(&self.lo().clone())?;
                a = end.max(self.lo().clone());
            }
            if b > *self.hi() {
                let start = a.clone().max(self.hi().clone());
                total += (&b - &start) * self.eval(&self.hi().clone())?;
                b = start.min(self.hi().clone());
            }
            if a >= b {
                return Ok(total);
            }
        }
        for (i, p) in self.pieces.iter().enumerate() {
            let lo = self.breakpoints[i].clone().max(a.clone());
            let hi = self.breakpoints[i + 1].clone().min(b.clone());
            if lo < hi {
                total += p.integral(&lo, &hi);
            }
        }
        Ok(total)
    }

    /// Build by exact interpolation of `f` on every interval; `f` must be a
    /// polynomial of degree at most `degree` between consecutive breakpoints.
    pub fn interpolate<F>(breakpoints: Vec<Q>, degree: usize, f: F) -> Result<Self>
    where
        F: Fn(&Q) -> Q + Sync + Send,
    {
        let mut nodes = Vec::new();
        for w in breakpoints.windows(2) {
            let width = &w[1] - &w[0];
            for j in 0..=degree {
                nodes.push(
                    &w[0] + &width * Q::new((j as i64 + 1).into(), (degree as i64 + 2).into()),
                );
            }
        }
        let values = par::map(&nodes, |x| f(x));
        let pieces = nodes
            .chunks(degree + 1)
            .zip(values.chunks(degree + 1))
            .map(|(xs, ys)| {
                let pts: Vec<(Q, Q)> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
                Polynomial::interpolate(&pts)
            })
            .collect();
        Self::new(breakpoints, pieces, degree)
    }

    /// Rows of `lo,hi,c0,c1,...` as rational strings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi,coefficients\n");
        for (i, p) in self.pieces.iter().enumerate() {
            let mut row = vec![
                rational::to_string(&self.breakpoints[i]),
                rational::to_string(&self.breakpoints[i + 1]),
            ];
            if p.is_zero() {
                row.push("0/1".into());
            }
            row.extend(p.coeffs().iter().map(rational::to_string));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `x -> n! * vol(P ∩ {lam >= x})` on the span of `lam` over `P`.
pub fn sliced_volume_function(
    p: &RationalPolytope,
    lam: &AffineFunctional,
) -> Result<PiecewisePolynomial> {
    if lam.coeffs.iter().all(|&c| c == 0) {
        return Err(Error::Precondition("functional must be non-zero".into()));
    }
    if !p.is_full_dimensional() {
        return Err(Error::DegeneratePolytope);
    }
    let mut values: Vec<Q> = p.vertices().iter().map(|v| lam.value(v)).collect();
    values.sort();
    values.dedup();
    PiecewisePolynomial::interpolate(values, p.dim(), |x| {
        p.intersect(&[lam.at_least(x)]).normalized_volume()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn projective_plane_vertex_slice() {
        let p = RationalPolytope::from_rays(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        let lam = AffineFunctional::new(vec![1, 1], q(2));
        let f = sliced_volume_function(&p, &lam).unwrap();
        assert_eq!(f.breakpoints(), &[q(0), q(3)]);
        assert_eq!(f.pieces(), &[poly(&[9, 0, -1])]);
        assert_eq!(f.integrate(&q(0), &q(3)).unwrap(), q(18));
    }

    #[test]
    fn segment_slice() {
        let p = RationalPolytope::from_rays(&[vec![1], vec![-1]]).unwrap();
        let f = sliced_volume_function(&p, &AffineFunctional::new(vec![1], q(1))).unwrap();
        assert_eq!(f.pieces(), &[poly(&[2, -1])]);
        assert_eq!(f.integrate(&q(0), &q(2)).unwrap(), q(2));
    }

    #[test]
    fn evaluation_conventions() {
        let f = PiecewisePolynomial::new(
            vec![q(0), q(1), q(2)],
            vec![poly(&[0, 1]), poly(&[2, -1])],
            1,
        )
        .unwrap();
        assert_eq!(f.eval(&q(1)).unwrap(), q(1));
        assert_eq!(f.eval(&q(2)).unwrap(), q(0));
        assert!(matches!(f.eval(&q(3)), Err(Error::OutOfDomain { .. })));
        assert_eq!(
            f.eval_with(&q(-4), Extension::ClampEndpoints).unwrap(),
            q(0)
        );
        assert!(f.integrate(&q(-1), &q(1)).is_err());
        assert_eq!(
            f.integrate_with(&q(-1), &q(3), Extension::ClampEndpoints)
                .unwrap(),
            q(1)
        );
        assert_eq!(f.integrate(&frac(1, 2), &frac(3, 2)).unwrap(), frac(3, 4));
    }

    #[test]
    fn rejects_discontinuity_and_bad_shapes() {
        assert!(
            PiecewisePolynomial::new(vec![q(0), q(1), q(2)], vec![poly(&[0]), poly(&[1])], 0)
                .is_err()
        );
        assert!(PiecewisePolynomial::new(vec![q(0), q(1)], vec![], 0).is_err());
        assert!(PiecewisePolynomial::new(vec![q(1), q(0)], vec![poly(&[0])], 0).is_err());
        assert!(PiecewisePolynomial::new(vec![q(0), q(1)], vec![poly(&[0, 0, 1])], 1).is_err());
    }

    #[test]
    fn constant_integral() {
        let f = PiecewisePolynomial::new(vec![q(0), q(1)], vec![poly(&[1])], 0).unwrap();
        assert_eq!(f.integrate(&q(0), &q(1)).unwrap(), q(1));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = poly(&[3, -2, 0, 5]);
        let pts: Vec<(Q, Q)> = (0..4).map(|i| (q(i), p.eval(&q(i)))).collect();
        assert_eq!(Polynomial::interpolate(&pts), p);
        assert_eq!(p.compose_scale(&q(2)), poly(&[3, -4, 0, 40]));
        assert_eq!(format!("{}", poly(&[9, 0, -1])), "9 + -1*x^2");
    }
}
