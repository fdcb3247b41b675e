//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] with `n` coefficients stores `f(t0), f'(t0), f''(t0)/2!, ...` up to order
//! `n - 1`. Curves are evaluated on jets so that tangents, curvature and the derivatives
//! needed by normal perturbations are exact rather than finite-differenced. Each
//! perturbation level consumes one order, which bounds the nesting depth by [`JET_CAP`].

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

use crate::geometry::SurfaceKind;

pub(crate) const JET_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet {
    c: [f64; JET_CAP],
    n: usize,
}

impl Jet {
    pub fn constant(value: f64, n: usize) -> Self {
        debug_assert!((1..=JET_CAP).contains(&n));
        let mut c = [0.0; JET_CAP];
        c[0] = value;
        Self { c, n }
    }

    /// The independent variable `t` expanded about `value`.
    pub fn variable(value: f64, n: usize) -> Self {
        let mut j = Self::constant(value, n);
        if n > 1 {
            j.c[1] = 1.0;
        }
        j
    }

    #[cfg(test)]
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        let mut c = [0.0; JET_CAP];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Self { c, n: coeffs.len() }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        if k < self.n {
            self.c[k]
        } else {
            0.0
        }
    }

    /// `k`-th derivative at the expansion point.
    pub fn deriv(&self, k: usize) -> f64 {
        let mut f = 1.0;
        for i in 2..=k {
            f *= i as f64;
        }
        self.coeff(k) * f
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.c[0] = value;
        self
    }

    pub fn truncate(mut self, n: usize) -> Self {
        let n = n.min(self.n);
        for k in n..JET_CAP {
            self.c[k] = 0.0;
        }
        self.n = n;
        self
    }

    /// Jet of the derivative; one order shorter.
    pub fn derivative(&self) -> Self {
        let n = self.n.saturating_sub(1).max(1);
        let mut c = [0.0; JET_CAP];
        for k in 0..self.n.saturating_sub(1) {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Self { c, n }
    }

    /// Antiderivative with the given constant term; one order longer.
    pub fn integral(&self, constant: f64) -> Self {
        let n = (self.n + 1).min(JET_CAP);
        let mut c = [0.0; JET_CAP];
        c[0] = constant;
        for k in 1..n {
            c[k] = self.c[k - 1] / k as f64;
        }
        Self { c, n }
    }

    pub fn scale(mut self, s: f64) -> Self {
        for k in 0..self.n {
            self.c[k] *= s;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c[..self.n].iter().all(|&v| v == 0.0)
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0, self.n).div(self)
    }

    pub fn div(&self, b: &Jet) -> Self {
        let n = self.n.min(b.n);
        let mut q = [0.0; JET_CAP];
        for k in 0..n {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= b.c[j] * q[k - j];
            }
            q[k] = acc / b.c[0];
        }
        Self { c: q, n }
    }

    pub fn sqrt(&self) -> Self {
        let n = self.n;
        let mut r = [0.0; JET_CAP];
        r[0] = self.c[0].sqrt();
        for k in 1..n {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= r[j] * r[k - j];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Self { c: r, n }
    }

    pub fn exp(&self) -> Self {
        let n = self.n;
        let mut e = [0.0; JET_CAP];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { c: e, n }
    }

    /// `(sin, cos)` of the jet.
    pub fn sin_cos(&self) -> (Self, Self) {
        self.trig_pair(-1.0)
    }

    /// `(sinh, cosh)` of the jet.
    pub fn sinh_cosh(&self) -> (Self, Self) {
        self.trig_pair(1.0)
    }

    // s' = a' c, c' = sign * a' s
    fn trig_pair(&self, sign: f64) -> (Self, Self) {
        let n = self.n;
        let mut s = [0.0; JET_CAP];
        let mut c = [0.0; JET_CAP];
        if sign < 0.0 {
            let (s0, c0) = self.c[0].sin_cos();
            s[0] = s0;
            c[0] = c0;
        } else {
            s[0] = self.c[0].sinh();
            c[0] = self.c[0].cosh();
        }
        for k in 1..n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                ds += w * c[k - j];
                dc += w * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = sign * dc / k as f64;
        }
        (Self { c: s, n }, Self { c, n })
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        let n = self.n.min(rhs.n);
        for k in 0..n {
            self.c[k] += rhs.c[k];
        }
        self.truncate(n)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        let n = self.n.min(rhs.n);
        for k in 0..n {
            self.c[k] -= rhs.c[k];
        }
        self.truncate(n)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let n = self.n.min(rhs.n);
        let mut c = [0.0; JET_CAP];
        for k in 0..n {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.c[j] * rhs.c[k - j];
            }
            c[k] = acc;
        }
        Jet { c, n }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

/// A curve in R^3 expanded in the chart parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet3 {
    pub x: Jet,
    pub y: Jet,
    pub z: Jet,
}

impl Jet3 {
    pub fn new(x: Jet, y: Jet, z: Jet) -> Self {
        Self { x, y, z }
    }

    pub fn len(&self) -> usize {
        self.x.len().min(self.y.len()).min(self.z.len())
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.x.truncate(n), self.y.truncate(n), self.z.truncate(n))
    }

    /// `k`-th derivative vector at the expansion point.
    pub fn deriv(&self, k: usize) -> Vector3<f64> {
        Vector3::new(self.x.deriv(k), self.y.deriv(k), self.z.deriv(k))
    }

    pub fn value(&self) -> Vector3<f64> {
        self.deriv(0)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.x.derivative(),
            self.y.derivative(),
            self.z.derivative(),
        )
    }

    pub fn scale(&self, s: &Jet) -> Self {
        Self::new(self.x * *s, self.y * *s, self.z * *s)
    }

    pub fn add(&self, o: &Jet3) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn transform(&self, m: &Matrix3<f64>) -> Self {
        let n = self.len();
        let row = |i: usize| {
            self.x.truncate(n).scale(m[(i, 0)])
                + self.y.truncate(n).scale(m[(i, 1)])
                + self.z.truncate(n).scale(m[(i, 2)])
        };
        Self::new(row(0), row(1), row(2))
    }

    pub fn metric_inner(&self, kind: SurfaceKind, o: &Jet3) -> Jet {
        let xy = self.x * o.x + self.y * o.y;
        match kind {
            SurfaceKind::Hyperbolic => xy - self.z * o.z,
            _ => xy + self.z * o.z,
        }
    }

    /// Jet version of [`crate::geometry::rotate_quarter`].
    pub fn rotate_quarter(&self, kind: SurfaceKind, tangent: &Jet3) -> Self {
        match kind {
            SurfaceKind::Euclidean => {
                Self::new(-tangent.y, tangent.x, Jet::constant(0.0, tangent.len()))
            }
            SurfaceKind::Sphere | SurfaceKind::Hyperbolic => {
                let cx = self.y * tangent.z - self.z * tangent.y;
                let cy = self.z * tangent.x - self.x * tangent.z;
                let cz = self.x * tangent.y - self.y * tangent.x;
                if kind == SurfaceKind::Hyperbolic {
                    Self::new(cx, cy, -cz)
                } else {
                    Self::new(cx, cy, cz)
                }
            }
        }
    }
}
