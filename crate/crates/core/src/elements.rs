//! Bench elements as SU(2) rotations of the Poincaré sphere, and the rule
//! that turns a forward pass into the retraced (backward) pass.
//!
//! A reciprocal element (retarder, birefringent fiber, Pockels cell) with
//! forward unitary `exp[i(θ/2) n·σ]` is retraced as `exp[-i(θ/2) n'·σ]`
//! where `n' = (n₁, −n₂, −n₃)`, which is the same matrix as `σ₁ U† σ₁`.
//! A Faraday rotator keeps its axis on the way back and only flips the
//! sign of its phase, giving `U†`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::spin::{pauli, AxisAngle, Unitary, ALGEBRA_TOL};

/// How an element behaves when light retraces it after reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reciprocity {
    Reciprocal,
    Faraday,
}

impl fmt::Display for Reciprocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reciprocity::Reciprocal => "reciprocal",
            Reciprocity::Faraday => "faraday",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// What terminates a round trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    /// Bare mirror, `iσ₃`.
    Mirror,
    /// Faraday mirror, `iσ₁`.
    Frm,
}

impl Turn {
    pub fn unitary(&self) -> Result<Unitary> {
        match self {
            Turn::Mirror => Ok(mirror_reflection()),
            Turn::Frm => frm_unitary(),
        }
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Turn::Mirror => "mirror",
            Turn::Frm => "frm",
        })
    }
}

impl std::str::FromStr for Turn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mirror" | "m" => Ok(Turn::Mirror),
            "frm" | "faraday-mirror" => Ok(Turn::Frm),
            other => Err(Error::Parse(format!("unknown turn `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalElement {
    pub kind: Reciprocity,
    pub rotation: AxisAngle,
    pub label: String,
}

impl OpticalElement {
    pub fn reciprocal(rotation: AxisAngle, label: impl Into<String>) -> Self {
        Self {
            kind: Reciprocity::Reciprocal,
            rotation,
            label: label.into(),
        }
    }

    /// A 45°-per-pass rotator: +90° about σ₂ on the sphere.
    pub fn faraday_rotator() -> Self {
        Self {
            kind: Reciprocity::Faraday,
            rotation: AxisAngle {
                axis: [0.0, 1.0, 0.0],
                theta: FRAC_PI_2,
            },
            label: "FR".to_owned(),
        }
    }

    /// Forward-pass unitary.
    pub fn unitary(&self) -> Unitary {
        self.rotation.unitary()
    }

    /// Backward-pass unitary.
    pub fn retrace(&self) -> Unitary {
        let forward = self.unitary();
        match self.kind {
            Reciprocity::Reciprocal => {
                let s1 = Unitary::from_matrix_unchecked(pauli(1));
                s1 * forward.adjoint() * s1
            }
            Reciprocity::Faraday => forward.adjoint(),
        }
    }

    /// The element seen from the other side, so that its forward unitary is
    /// this element's retrace.
    pub fn retraced(&self) -> Self {
        let [n1, n2, n3] = self.rotation.axis;
        let axis = match self.kind {
            Reciprocity::Reciprocal => [n1, -n2, -n3],
            Reciprocity::Faraday => [n1, n2, n3],
        };
        Self {
            kind: self.kind,
            rotation: AxisAngle {
                axis,
                theta: -self.rotation.theta,
            },
            label: format!("{}'", self.label),
        }
    }
}

/// Free-function form of [`OpticalElement::retrace`].
pub fn retrace(e: &OpticalElement) -> Unitary {
    e.retrace()
}

/// Mirror reflection in the preserved right-handed frame: `iσ₃`.
pub fn mirror_reflection() -> Unitary {
    Unitary::i_sigma(3)
}

/// One pass through the Faraday rotator: `exp(±i(π/4)σ₂)`.
pub fn faraday_pass(direction: Direction) -> Unitary {
    let fr = OpticalElement::faraday_rotator();
    match direction {
        Direction::Forward => fr.unitary(),
        Direction::Backward => fr.retrace(),
    }
}

/// `U₂₋ · U₃ · U₂₊`, checked against `iσ₁`.
pub fn frm_unitary() -> Result<Unitary> {
    let product =
        faraday_pass(Direction::Backward) * mirror_reflection() * faraday_pass(Direction::Forward);
    let dev = product.max_deviation(&Unitary::i_sigma(1));
    if dev > ALGEBRA_TOL {
        return Err(Error::Consistency(format!(
            "Faraday mirror product deviates from iσ₁ by {dev:e}"
        )));
    }
    Ok(product)
}

/// A retarder with its fast axis at `physical_angle` from horizontal.
///
/// The lab angle α doubles on the sphere: the spin-space axis is
/// (sin 2α, 0, cos 2α).
pub fn linear_retarder(physical_angle: f64, retardance: f64) -> OpticalElement {
    let (s, c) = (2.0 * physical_angle).sin_cos();
    OpticalElement::reciprocal(
        AxisAngle {
            axis: [s, 0.0, c],
            theta: retardance,
        },
        format!("retarder@{:.4}", physical_angle),
    )
}

pub fn half_wave_plate(physical_angle: f64) -> OpticalElement {
    linear_retarder(physical_angle, PI)
}

/// Elements between the source and the turn, first element nearest the source.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ElementChain {
    pub elements: Vec<OpticalElement>,
}

impl ElementChain {
    pub fn new(elements: Vec<OpticalElement>) -> Self {
        Self { elements }
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// U(e_k)⋯U(e₁).
    pub fn forward_unitary(&self) -> Unitary {
        self.elements
            .iter()
            .fold(Unitary::identity(), |acc, e| e.unitary() * acc)
    }

    /// retrace(e₁)⋯retrace(e_k).
    pub fn backward_unitary(&self) -> Unitary {
        self.elements
            .iter()
            .fold(Unitary::identity(), |acc, e| acc * e.retrace())
    }

    /// Forward through the chain, the turn, then back through the chain.
    pub fn round_trip(&self, turn: Turn) -> Result<Unitary> {
        if self.is_empty() {
            return Err(Error::EmptyChain);
        }
        Ok(self.backward_unitary() * turn.unitary()? * self.forward_unitary())
    }
}

/// Free-function form of [`ElementChain::round_trip`].
pub fn round_trip_unitary(chain: &ElementChain, turn: Turn) -> Result<Unitary> {
    chain.round_trip(turn)
}
