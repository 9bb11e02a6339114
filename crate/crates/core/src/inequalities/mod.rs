//! Numerical verification of operator inequalities. Each check validates its
//! own hypotheses and refuses with [`Error::Hypothesis`] (or a more specific
//! error) instead of reporting on an instance outside them.

mod hua;
mod schwarz;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, hermitian_norm, operator_abs, ComplexMatrix, HermitianView, SpectralFunction,
    Tolerances,
};
use crate::maps::{Grade, MapDescriptor};
use crate::means::geometric_mean;
use crate::outcome::OutcomeBuilder;

pub use hua::{
    check_cdj, check_cor_3_3, check_eq_3_1, check_hua_classical, check_jensen_subunital,
    check_thm_3_1, check_thm_3_1_rescaled, check_thm_3_2, jensen_difference, rescale_for_thm_3_1,
    thm_3_2_sides, HuaInstance, Thm31Rescale,
};
pub use schwarz::{
    check_cor_2_3, check_cor_2_4, check_cor_2_5, check_mean_subpreservation, check_schwarz_block,
    check_thm_2_1, Cor25Variant, Thm21Variant,
};

/// Stable identifiers of the verified inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "schwarz-block")]
    SchwarzBlock,
    #[serde(rename = "thm-2-1-i")]
    Thm21I,
    #[serde(rename = "thm-2-1-ii")]
    Thm21Ii,
    #[serde(rename = "rmk-2-2")]
    Rmk22,
    #[serde(rename = "cor-2-3")]
    Cor23,
    #[serde(rename = "cor-2-4")]
    Cor24,
    #[serde(rename = "cor-2-5-i")]
    Cor25I,
    #[serde(rename = "cor-2-5-ii")]
    Cor25Ii,
    #[serde(rename = "mean-sub-geo")]
    MeanSubGeo,
    #[serde(rename = "mean-sub-har")]
    MeanSubHar,
    #[serde(rename = "hua-classical")]
    HuaClassical,
    #[serde(rename = "eq-3-1")]
    Eq31,
    #[serde(rename = "thm-3-1")]
    Thm31,
    #[serde(rename = "eq-3-3")]
    Eq33,
    #[serde(rename = "cdj")]
    Cdj,
    #[serde(rename = "thm-3-2")]
    Thm32,
    #[serde(rename = "cor-3-3")]
    Cor33,
}

impl InequalityId {
    pub const ALL: [InequalityId; 17] = [
        InequalityId::SchwarzBlock,
        InequalityId::Thm21I,
        InequalityId::Thm21Ii,
        InequalityId::Rmk22,
        InequalityId::Cor23,
        InequalityId::Cor24,
        InequalityId::Cor25I,
        InequalityId::Cor25Ii,
        InequalityId::MeanSubGeo,
        InequalityId::MeanSubHar,
        InequalityId::HuaClassical,
        InequalityId::Eq31,
        InequalityId::Thm31,
        InequalityId::Eq33,
        InequalityId::Cdj,
        InequalityId::Thm32,
        InequalityId::Cor33,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::SchwarzBlock => "schwarz-block",
            InequalityId::Thm21I => "thm-2-1-i",
            InequalityId::Thm21Ii => "thm-2-1-ii",
            InequalityId::Rmk22 => "rmk-2-2",
            InequalityId::Cor23 => "cor-2-3",
            InequalityId::Cor24 => "cor-2-4",
            InequalityId::Cor25I => "cor-2-5-i",
            InequalityId::Cor25Ii => "cor-2-5-ii",
            InequalityId::MeanSubGeo => "mean-sub-geo",
            InequalityId::MeanSubHar => "mean-sub-har",
            InequalityId::HuaClassical => "hua-classical",
            InequalityId::Eq31 => "eq-3-1",
            InequalityId::Thm31 => "thm-3-1",
            InequalityId::Eq33 => "eq-3-3",
            InequalityId::Cdj => "cdj",
            InequalityId::Thm32 => "thm-3-2",
            InequalityId::Cor33 => "cor-3-3",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Symmetrizes a matrix that is Hermitian up to rounding.
pub(crate) fn herm(m: &ComplexMatrix) -> Result<HermitianView> {
    HermitianView::symmetrize(m)
}

/// Smallest eigenvalue of `larger − smaller` and the scale
/// `max(1, ‖smaller‖, ‖larger‖)`.
pub(crate) fn order_margin(smaller: &ComplexMatrix, larger: &ComplexMatrix) -> Result<(f64, f64)> {
    let diff = herm(&(larger - smaller))?;
    let margin = hermitian_eig(&diff)?.min();
    let scale = hermitian_norm(&herm(smaller)?)?
        .max(hermitian_norm(&herm(larger)?)?)
        .max(1.0);
    Ok((margin, scale))
}

pub(crate) fn gmean(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    geometric_mean(&herm(a)?, &herm(b)?, tol)
}

pub(crate) fn abs(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(operator_abs(m)?.abs)
}

/// |M*| = (MM*)^{1/2}
pub(crate) fn abs_adjoint(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(operator_abs(m)?.abs_adjoint)
}

pub(crate) fn require_grade(out: &mut OutcomeBuilder, map: &MapDescriptor, grade: Grade) -> Result<()> {
    let ok = map.claimed_grade() >= grade;
    out.hypothesis(&format!("map is {grade}"), ok);
    if ok {
        Ok(())
    } else {
        Err(Error::hypothesis(
            format!("map is {grade}"),
            format!("{} is only claimed {}", map.name(), map.claimed_grade()),
        ))
    }
}

pub(crate) fn require_star(out: &mut OutcomeBuilder, map: &MapDescriptor) -> Result<()> {
    out.hypothesis("map is a *-map", map.is_star_map());
    if map.is_star_map() {
        Ok(())
    } else {
        Err(Error::hypothesis("map is a *-map", map.name()))
    }
}

pub(crate) fn require(out: &mut OutcomeBuilder, name: &str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    out.hypothesis(name, ok);
    if ok {
        Ok(())
    } else {
        Err(Error::hypothesis(name, detail()))
    }
}

/// Whether every eigenvalue of `m` lies in the domain of `f`, allowing the
/// closed-endpoint slack of the functional calculus.
pub(crate) fn spectrum_within<F: SpectralFunction + ?Sized>(
    f: &F,
    m: &HermitianView,
    tol: &Tolerances,
) -> Result<bool> {
    let e = hermitian_eig(m)?;
    let slack = tol.spec * e.spectral_radius().max(1.0);
    Ok(e.values.iter().all(|&l| f.domain().clamp_within(l, slack).is_some()))
}

pub(crate) fn ensure_square_same(name: &str, ms: &[&ComplexMatrix]) -> Result<usize> {
    let n = ms[0].rows();
    if ms.iter().any(|m| m.shape() != (n, n)) {
        return Err(Error::dims(format!("{name}: operands must be square of one size")));
    }
    Ok(n)
}

pub(crate) fn ensure_input(map: &MapDescriptor, n: usize) -> Result<()> {
    if map.input_dim() == n {
        Ok(())
    } else {
        Err(Error::dims(format!(
            "{} acts on {}x{} matrices, operands are {n}x{n}",
            map.name(),
            map.input_dim(),
            map.input_dim()
        )))
    }
}
