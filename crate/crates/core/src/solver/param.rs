//! Rational parametrization of a diagonal quadric by projection from a point.
//!
//! For the form `Q` with polar form `B` and a point `P` on it, the second
//! intersection of the line through `P` in direction `R` is
//! `Q(R) P - 2 B(P, R) R`. Directions range over the hyperplane `R_i = 0`,
//! `i` the first nonzero coordinate of `P`, in the chart where the first
//! remaining coordinate is 1.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::quadric::QuadricSpec;
use crate::arith::{QRatFunc, Rational, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceParam {
    params: Vec<Var>,
    coords: Vec<QRatFunc>,
    base_point: Vec<BigInt>,
    chart: usize,
}

impl SurfaceParam {
    pub fn params(&self) -> &[Var] {
        &self.params
    }

    /// Homogeneous coordinates, polynomial in the parameters.
    pub fn coords(&self) -> &[QRatFunc] {
        &self.coords
    }

    pub fn base_point(&self) -> &[BigInt] {
        &self.base_point
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    /// Coordinates divided by coordinate `j`.
    pub fn affine(&self, j: usize) -> Result<Vec<QRatFunc>> {
        let den = &self.coords[j];
        self.coords.iter().map(|c| c.div(den)).collect()
    }
}

impl Serialize for SurfaceParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SurfaceParam", 4)?;
        let names: Vec<String> = self.params.iter().map(|v| v.to_string()).collect();
        st.serialize_field("params", &names)?;
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coords", &coords)?;
        let base: Vec<String> = self.base_point.iter().map(|c| c.to_string()).collect();
        st.serialize_field("base_point", &base)?;
        st.serialize_field("chart", &self.chart)?;
        st.end()
    }
}

/// Parametrizes `q` from `p` with parameters `u` (and `v` for surfaces).
pub fn stereographic_parametrize(q: &QuadricSpec, p: &[BigInt]) -> Result<SurfaceParam> {
    let params = [Var::new("u"), Var::new("v")];
    stereographic_parametrize_with(q, p, &params[..q.dim() - 2])
}

/// As [`stereographic_parametrize`] with caller-chosen parameter names.
pub fn stereographic_parametrize_with(
    q: &QuadricSpec,
    p: &[BigInt],
    params: &[Var],
) -> Result<SurfaceParam> {
    let n = q.dim();
    if params.len() != n - 2 {
        return Err(Error::Precondition(format!(
            "{} parameters for a form in {n} variables",
            params.len()
        )));
    }
    if !q.contains(p) {
        return Err(Error::NotOnQuadric);
    }
    let ctx = &();
    let coeffs: Vec<QRatFunc> = q
        .coeffs()
        .iter()
        .map(|c| QRatFunc::from_rational(c.clone(), ctx))
        .collect();
    let point: Vec<QRatFunc> = p
        .iter()
        .map(|x| QRatFunc::from_rational(Rational::from(x.clone()), ctx))
        .collect();

    for chart in (0..n).filter(|&i| !p[i].is_zero()) {
        let mut dir = vec![QRatFunc::zero(ctx); n];
        let mut free = (0..n).filter(|&j| j != chart);
        dir[free.next().expect("n >= 3")] = QRatFunc::one(ctx);
        for (j, v) in free.zip(params) {
            dir[j] = QRatFunc::var(*v, ctx);
        }
        let mut q_r = QRatFunc::zero(ctx);
        let mut b_pr = QRatFunc::zero(ctx);
        for j in 0..n {
            q_r = &q_r + &(&coeffs[j] * &dir[j].square());
            b_pr = &b_pr + &(&(&coeffs[j] * &point[j]) * &dir[j]);
        }
        let two_b = &b_pr + &b_pr;
        let coords: Vec<QRatFunc> = (0..n)
            .map(|j| &(&q_r * &point[j]) - &(&two_b * &dir[j]))
            .collect();
        if coords.iter().all(QRatFunc::is_zero) {
            continue;
        }
        let mut total = QRatFunc::zero(ctx);
        for j in 0..n {
            total = &total + &(&coeffs[j] * &coords[j].square());
        }
        if total.is_zero() {
            return Ok(SurfaceParam {
                params: params.to_vec(),
                coords,
                base_point: p.to_vec(),
                chart,
            });
        }
    }
    Err(Error::DegenerateCenter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(c: &[i64]) -> QuadricSpec {
        QuadricSpec::new(c.iter().map(|&x| Rational::from(x)).collect()).unwrap()
    }
    fn pt(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn conic_from_point() {
        // x^2 - 2y^2 = 1 homogenized
        let q = spec(&[1, -2, -1]);
        let s = stereographic_parametrize(&q, &pt(&[1, 0, 1])).unwrap();
        let aff = s.affine(2).unwrap();
        let x = &aff[0];
        let y = &aff[1];
        let two = QRatFunc::from_rational(Rational::from(2), &());
        let lhs = &x.square() - &(&two * &y.square());
        assert!(lhs.sub(&QRatFunc::one(&())).is_zero());
        assert_eq!(s.params().len(), 1);
    }

    #[test]
    fn quadric_from_point() {
        let q = spec(&[1, -2, -1, 2]);
        let s = stereographic_parametrize(&q, &pt(&[1, 1, 1, 1])).unwrap();
        assert_eq!(s.coords().len(), 4);
        assert_eq!(s.chart(), 0);
        assert!(s.coords().iter().all(|c| c.denom().is_one()));
    }

    #[test]
    fn point_off_quadric() {
        let q = spec(&[1, -2, -1, 2]);
        assert_eq!(
            stereographic_parametrize(&q, &pt(&[1, 0, 0, 0])),
            Err(Error::NotOnQuadric)
        );
    }
}
