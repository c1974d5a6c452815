//! Packed exponent vectors.
//!
//! Byte 0 holds the total weight, bytes `1..=16` the exponents of
//! `x_1..x_16`, bytes `17..=32` those of `y_1..y_16` and bytes `33..=47` the
//! exponents of up to fifteen weight-1 parameters. Because the weight comes
//! first, the derived `Ord` is a graded lexicographic order.

use std::fmt;

pub const MAX_VAR: usize = 16;
pub const MAX_PARAMS: usize = 15;
pub const MAX_WEIGHT: u32 = u8::MAX as u32;

const X0: usize = 1;
const Y0: usize = X0 + MAX_VAR;
const P0: usize = Y0 + MAX_VAR;
const LEN: usize = P0 + MAX_PARAMS;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([u8; LEN]);

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial([0; LEN])
    }

    /// `x_n`. Panics when `n` is outside `1..=MAX_VAR`.
    pub fn x(n: usize) -> Self {
        Self::x_pow(n, 1)
    }

    pub fn x_pow(n: usize, e: u32) -> Self {
        assert!((1..=MAX_VAR).contains(&n), "x index {n} out of range");
        let mut m = Monomial::one();
        m.0[X0 + n - 1] = e as u8;
        m.0[0] = (n as u32 * e) as u8;
        m
    }

    pub fn y(n: usize) -> Self {
        assert!((1..=MAX_VAR).contains(&n), "y index {n} out of range");
        let mut m = Monomial::one();
        m.0[Y0 + n - 1] = 1;
        m.0[0] = n as u8;
        m
    }

    /// The `i`-th formal parameter (0-based) raised to `e`.
    pub fn param_pow(i: usize, e: u32) -> Self {
        assert!(i < MAX_PARAMS, "param index {i} out of range");
        let mut m = Monomial::one();
        m.0[P0 + i] = e as u8;
        m.0[0] = e as u8;
        m
    }

    pub fn param(i: usize) -> Self {
        Self::param_pow(i, 1)
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.0[0] as u32
    }

    #[inline]
    pub fn x_exp(&self, n: usize) -> u32 {
        self.0[X0 + n - 1] as u32
    }

    #[inline]
    pub fn y_exp(&self, n: usize) -> u32 {
        self.0[Y0 + n - 1] as u32
    }

    #[inline]
    pub fn param_exp(&self, i: usize) -> u32 {
        self.0[P0 + i] as u32
    }

    pub fn is_one(&self) -> bool {
        self.0[0] == 0
    }

    pub fn has_x(&self) -> bool {
        self.0[X0..Y0].iter().any(|&e| e != 0)
    }

    pub fn has_y(&self) -> bool {
        self.0[Y0..P0].iter().any(|&e| e != 0)
    }

    pub fn has_params(&self) -> bool {
        self.0[P0..].iter().any(|&e| e != 0)
    }

    /// Total degree in the `x` variables (not weight).
    pub fn x_degree(&self) -> u32 {
        self.0[X0..Y0].iter().map(|&e| e as u32).sum()
    }

    /// Non-zero `x` exponents as `(index, exponent)`.
    pub fn x_exps(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0[X0..Y0]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i + 1, e as u32))
    }

    pub fn y_exps(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0[Y0..P0]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i + 1, e as u32))
    }

    pub fn param_exps(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0[P0..]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e as u32))
    }

    /// Product of monomials. The caller keeps the combined weight within
    /// `MAX_WEIGHT`; every exponent is bounded by the weight, so no byte
    /// can overflow.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; LEN];
        for ((o, a), b) in out.iter_mut().zip(self.0.iter()).zip(other.0.iter()) {
            *o = a.wrapping_add(*b);
        }
        Monomial(out)
    }

    /// `self · other^e`.
    pub fn mul_pow(&self, other: &Monomial, e: u32) -> Monomial {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o = o.wrapping_add((*b as u32 * e) as u8);
        }
        Monomial(out)
    }

    pub(crate) fn set_x_exp(&mut self, n: usize, e: u32) {
        let old = self.x_exp(n);
        self.0[X0 + n - 1] = e as u8;
        self.0[0] = (self.weight() + n as u32 * e - n as u32 * old) as u8;
    }

    pub(crate) fn set_param_exp(&mut self, i: usize, e: u32) {
        let old = self.param_exp(i);
        self.0[P0 + i] = e as u8;
        self.0[0] = (self.weight() + e - old) as u8;
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Monomial {
        let mut out = self.0;
        out[X0..Y0].copy_from_slice(&self.0[Y0..P0]);
        out[Y0..P0].copy_from_slice(&self.0[X0..Y0]);
        Monomial(out)
    }

    /// Renders the monomial with the given parameter names, e.g. `x1^2*x3*a`.
    pub fn render(&self, params: &[String]) -> String {
        let mut parts = Vec::new();
        let mut push = |name: String, e: u32| {
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        };
        for (n, e) in self.x_exps() {
            push(format!("x{n}"), e);
        }
        for (n, e) in self.y_exps() {
            push(format!("y{n}"), e);
        }
        for (i, e) in self.param_exps() {
            let name = params.get(i).cloned().unwrap_or_else(|| format!("p{i}"));
            push(name, e);
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}
