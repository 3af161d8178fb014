use alloc::string::String;
#[allow(unused_imports)]
use num_traits::Float;

use super::linalg::{Matrix, C64};
use super::pauli::PauliString;
use crate::{Error, Result, EXACT_TOL};

/// Named gate families. Parameterised kinds carry their angle in
/// [`UnitaryGate::parameter`].
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    /// Phase gate `diag(1, e^{iθ})`.
    P,
    Ry,
    Rz,
    Cx,
    Cz,
    /// Controlled phase `diag(1, 1, 1, e^{iθ})`; symmetric in its qubits.
    Cp,
    Swap,
    /// Real rotation in the `{|01>, |10>}` subspace: `|10> -> cos θ |10> + sin θ |01>`.
    Givens,
    Pauli(PauliString),
    Custom(String),
}

/// A one- or two-qubit unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    kind: GateKind,
    matrix: Matrix,
    parameter: Option<f64>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl UnitaryGate {
    fn fixed(kind: GateKind, matrix: Matrix) -> Self {
        Self { kind, matrix, parameter: None }
    }

    fn param(kind: GateKind, matrix: Matrix, theta: f64) -> Self {
        Self { kind, matrix, parameter: Some(theta) }
    }

    pub fn h() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Self::fixed(GateKind::H, Matrix::from_real(2, &[s, s, s, -s]))
    }

    pub fn x() -> Self {
        Self::fixed(GateKind::X, Matrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]))
    }

    pub fn y() -> Self {
        Self::fixed(GateKind::Y, Matrix::from_rows(2, alloc::vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]))
    }

    pub fn z() -> Self {
        Self::fixed(GateKind::Z, Matrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]))
    }

    pub fn s() -> Self {
        Self::fixed(GateKind::S, Matrix::diagonal(&[c(1., 0.), c(0., 1.)]))
    }

    pub fn t() -> Self {
        Self::fixed(GateKind::T, Matrix::diagonal(&[c(1., 0.), C64::cis(core::f64::consts::FRAC_PI_4)]))
    }

    pub fn p(theta: f64) -> Self {
        Self::param(GateKind::P, Matrix::diagonal(&[c(1., 0.), C64::cis(theta)]), theta)
    }

    pub fn ry(theta: f64) -> Self {
        let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
        Self::param(GateKind::Ry, Matrix::from_real(2, &[co, -s, s, co]), theta)
    }

    pub fn rz(theta: f64) -> Self {
        Self::param(GateKind::Rz, Matrix::diagonal(&[C64::cis(-theta / 2.0), C64::cis(theta / 2.0)]), theta)
    }

    /// Controlled-X with the first target as control.
    pub fn cx() -> Self {
        #[rustfmt::skip]
        let m = Matrix::from_real(4, &[
            1., 0., 0., 0.,
            0., 1., 0., 0.,
            0., 0., 0., 1.,
            0., 0., 1., 0.,
        ]);
        Self::fixed(GateKind::Cx, m)
    }

    pub fn cz() -> Self {
        Self::fixed(GateKind::Cz, Matrix::diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)]))
    }

    pub fn cp(theta: f64) -> Self {
        Self::param(GateKind::Cp, Matrix::diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), C64::cis(theta)]), theta)
    }

    pub fn swap() -> Self {
        #[rustfmt::skip]
        let m = Matrix::from_real(4, &[
            1., 0., 0., 0.,
            0., 0., 1., 0.,
            0., 1., 0., 0.,
            0., 0., 0., 1.,
        ]);
        Self::fixed(GateKind::Swap, m)
    }

    pub fn givens(theta: f64) -> Self {
        let (s, co) = (theta.sin(), theta.cos());
        #[rustfmt::skip]
        let m = Matrix::from_real(4, &[
            1., 0., 0., 0.,
            0., co, s, 0.,
            0., -s, co, 0.,
            0., 0., 0., 1.,
        ]);
        Self::param(GateKind::Givens, m, theta)
    }

    pub fn pauli(p: PauliString) -> Self {
        Self::fixed(GateKind::Pauli(p), p.matrix())
    }

    /// A user-supplied one- or two-qubit unitary.
    pub fn custom(name: impl Into<String>, matrix: Matrix) -> Result<Self> {
        if matrix.dim() != 2 && matrix.dim() != 4 {
            return Err(Error::InvalidGate(alloc::format!("dimension {}", matrix.dim())));
        }
        if !matrix.is_unitary(EXACT_TOL) {
            return Err(Error::NotUnitary);
        }
        Ok(Self::fixed(GateKind::Custom(name.into()), matrix))
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn parameter(&self) -> Option<f64> {
        self.parameter
    }

    pub fn arity(&self) -> usize {
        self.matrix.dim().trailing_zeros() as usize
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::P => "p",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Cp => "cp",
            GateKind::Swap => "swap",
            GateKind::Givens => "givens",
            GateKind::Pauli(_) => "pauli",
            GateKind::Custom(name) => name,
        }
    }

    /// Builds a gate from its lower-case name and optional angle.
    pub fn from_name(name: &str, param: Option<f64>) -> Result<Self> {
        let need = |p: Option<f64>| p.ok_or_else(|| Error::InvalidGate(alloc::format!("{name} needs a parameter")));
        let gate = match name {
            "h" => Self::h(),
            "x" => Self::x(),
            "y" => Self::y(),
            "z" => Self::z(),
            "s" => Self::s(),
            "t" => Self::t(),
            "p" => Self::p(need(param)?),
            "ry" => Self::ry(need(param)?),
            "rz" => Self::rz(need(param)?),
            "cx" => Self::cx(),
            "cz" => Self::cz(),
            "cp" => Self::cp(need(param)?),
            "swap" => Self::swap(),
            "givens" => Self::givens(need(param)?),
            _ => return Err(Error::InvalidGate(alloc::format!("unknown gate {name}"))),
        };
        Ok(gate)
    }

    pub fn inverse(&self) -> Self {
        let matrix = self.matrix.adjoint();
        match (&self.kind, self.parameter) {
            (GateKind::P, Some(t)) => Self::p(-t),
            (GateKind::Ry, Some(t)) => Self::ry(-t),
            (GateKind::Rz, Some(t)) => Self::rz(-t),
            (GateKind::Cp, Some(t)) => Self::cp(-t),
            (GateKind::Givens, Some(t)) => Self::givens(-t),
            (GateKind::S | GateKind::T, _) => {
                Self::fixed(GateKind::Custom(alloc::format!("{}dg", self.name())), matrix)
            }
            (GateKind::Custom(n), _) => Self::fixed(GateKind::Custom(alloc::format!("{n}dg")), matrix),
            _ => self.clone(),
        }
    }
}
