//! Hua type inequalities and the Jensen inequalities behind them.

use serde::{Deserialize, Serialize};

use super::{
    abs, abs_adjoint, ensure_input, ensure_square_same, gmean, herm, order_margin, require,
    require_grade, require_star, spectrum_within,
};
use crate::error::{Error, Result};
use crate::linalg::{
    apply_function, hermitian_eig, hermitian_norm, operator_norm, polar_decompose,
    singular_value_decompose, ComplexMatrix, HermitianView, SpectralFunction, Tolerances,
};
use crate::maps::{FunctionDescriptor, Grade, MapDescriptor, MapKind};
use crate::outcome::{CheckOutcome, OutcomeBuilder};

/// Parameters of the classical Hua inequality
/// (δ − Σxᵢ)² + α Σxᵢ² ≥ α/(n+α) · δ².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuaInstance {
    pub delta: f64,
    pub alpha: f64,
    pub xs: Vec<f64>,
}

impl HuaInstance {
    pub fn new(delta: f64, alpha: f64, xs: Vec<f64>) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0 && alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidArgument("δ and α must be finite and positive".into()));
        }
        if xs.is_empty() || xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("xs must be nonempty and finite".into()));
        }
        Ok(Self { delta, alpha, xs })
    }

    /// The equality case xᵢ = δ/(n+α).
    pub fn equality_case(delta: f64, alpha: f64, n: usize) -> Result<Self> {
        let x = delta / (n as f64 + alpha);
        Self::new(delta, alpha, vec![x; n])
    }
}

pub fn check_hua_classical(inst: &HuaInstance, tol: &Tolerances) -> Result<CheckOutcome> {
    let inst = HuaInstance::new(inst.delta, inst.alpha, inst.xs.clone())?;
    let mut out = OutcomeBuilder::new("hua-classical")
        .digest_scalar(inst.delta)
        .digest_scalar(inst.alpha);
    for &x in &inst.xs {
        out = out.digest_scalar(x);
    }
    let n = inst.xs.len() as f64;
    let sum: f64 = inst.xs.iter().sum();
    let squares: f64 = inst.xs.iter().map(|x| x * x).sum();
    let lhs = (inst.delta - sum).powi(2) + inst.alpha * squares;
    let rhs = inst.alpha / (n + inst.alpha) * inst.delta * inst.delta;
    out.residual("lhs", lhs);
    out.residual("rhs", rhs);
    Ok(out.finish(lhs - rhs, lhs.max(rhs), tol))
}

/// Value of a scalar-valued map as a complex number.
fn scalar_of(map: &MapDescriptor, x: &ComplexMatrix) -> Result<crate::linalg::Complex64> {
    Ok(map.apply(x)?.get(0, 0))
}

fn require_state(out: &mut OutcomeBuilder, map: &MapDescriptor, tol: &Tolerances) -> Result<()> {
    require(out, "map is scalar valued", map.is_scalar_valued(), || map.name())?;
    require(out, "map is linear", map.is_linear(), || map.name())?;
    let unital = map.is_unital(tol)?;
    require(out, "map is unital", unital, || map.name())
}

fn require_contraction(out: &mut OutcomeBuilder, name: &str, m: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let norm = operator_norm(m)?;
    require(out, &format!("{name} is a contraction"), norm <= 1.0 + tol.recon, || {
        format!("operator norm {norm}")
    })
}

/// (1 − |φ(B*A)|)² ≥ (1 − √(φ(A*A)φ(B*B)))² ≥ φ(I − A*A)φ(I − B*B) for a
/// state φ and contractions A, B. Residuals `gap_1`, `gap_2`; the margin is
/// the smaller gap.
pub fn check_eq_3_1(
    state: &MapDescriptor,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let n = ensure_square_same("eq-3-1", &[a, b])?;
    ensure_input(state, n)?;
    let mut out = OutcomeBuilder::new("eq-3-1")
        .digest_map(state)
        .digest_matrix(a)
        .digest_matrix(b);
    require_state(&mut out, state, tol)?;
    require_contraction(&mut out, "A", a, tol)?;
    require_contraction(&mut out, "B", b, tol)?;
    let (aa, bb) = (a.adjoint() * a, b.adjoint() * b);
    let cross = scalar_of(state, &(b.adjoint() * a))?.norm();
    let pa = scalar_of(state, &aa)?.re;
    let pb = scalar_of(state, &bb)?.re;
    let geo = (pa * pb).max(0.0).sqrt();
    let id = ComplexMatrix::identity(n);
    let prod = scalar_of(state, &(&id - &aa))?.re * scalar_of(state, &(&id - &bb))?.re;
    let first = (1.0 - cross).powi(2);
    let middle = (1.0 - geo).powi(2);
    let gap_1 = first - middle;
    let gap_2 = middle - prod;
    out.residual("gap_1", gap_1);
    out.residual("gap_2", gap_2);
    Ok(out.finish(gap_1.min(gap_2), first.max(prod.abs()), tol))
}

/// Record of the rescaling X ↦ sₓX, Y ↦ s_yY that brings Φ(X*|A|X) and
/// Φ(Y*|A*|Y) to norm 0.9 when they are not contractions.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm31Rescale {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub x_factor: f64,
    pub y_factor: f64,
}

pub fn rescale_for_thm_3_1(
    map: &MapDescriptor,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<Thm31Rescale> {
    let factor = |w: &ComplexMatrix, weight: &ComplexMatrix| -> Result<f64> {
        let norm = operator_norm(&map.apply(&(w.adjoint() * weight * w))?)?;
        Ok(if norm > 1.0 { (0.9 / norm).sqrt() } else { 1.0 })
    };
    let x_factor = factor(x, &abs(a)?)?;
    let y_factor = factor(y, &abs_adjoint(a)?)?;
    Ok(Thm31Rescale {
        x: x.scale(x_factor),
        y: y.scale(y_factor),
        x_factor,
        y_factor,
    })
}

/// I − |Φ(X*A*Y)| ≥ U*(I − Φ(X*|A|X))U # (I − Φ(Y*|A*|Y)) for a 2-positive
/// *-map Φ with Φ(X*|A|X), Φ(Y*|A*|Y) contractions.
pub fn check_thm_3_1(
    map: &MapDescriptor,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    thm_3_1(map, a, x, y, None, tol)
}

/// Rescales X and Y as in [`rescale_for_thm_3_1`] and checks the result; the
/// factors enter the instance digest.
pub fn check_thm_3_1_rescaled(
    map: &MapDescriptor,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let r = rescale_for_thm_3_1(map, a, x, y)?;
    thm_3_1(map, a, &r.x, &r.y, Some((r.x_factor, r.y_factor)), tol)
}

fn thm_3_1(
    map: &MapDescriptor,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    factors: Option<(f64, f64)>,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let n = ensure_square_same("thm-3-1", &[a, x, y])?;
    ensure_input(map, n)?;
    let mut out = OutcomeBuilder::new("thm-3-1")
        .digest_map(map)
        .digest_matrix(a)
        .digest_matrix(x)
        .digest_matrix(y);
    if let Some((fx, fy)) = factors {
        out = out.digest_text("rescaled").digest_scalar(fx).digest_scalar(fy);
    }
    require_grade(&mut out, map, Grade::TwoPositive)?;
    require_star(&mut out, map)?;
    let (xs, ys) = (x.adjoint(), y.adjoint());
    let p = map.apply(&(&xs * abs(a)? * x))?;
    let q = map.apply(&(&ys * abs_adjoint(a)? * y))?;
    require_contraction(&mut out, "Φ(X*|A|X)", &p, tol)?;
    require_contraction(&mut out, "Φ(Y*|A*|Y)", &q, tol)?;
    let polar = polar_decompose(&map.apply(&(&xs * a.adjoint() * y))?, tol)?;
    let u = &polar.isometry;
    let id = ComplexMatrix::identity(map.output_dim());
    let lhs = &id - &polar.positive;
    let rhs = gmean(&(u.adjoint() * (&id - &p) * u), &(&id - &q), tol)?;
    let (margin, scale) = order_margin(&rhs, &lhs)?;
    Ok(out.finish(margin, scale, tol))
}

/// Σ Xᵢ* f(Aᵢ) Xᵢ − f(Σ Xᵢ* Aᵢ Xᵢ), after checking Σ Xᵢ*Xᵢ = I and the
/// spectra of the Aᵢ. Each Xᵢ maps into the space of Aᵢ: Aᵢ is kᵢ×kᵢ and
/// Xᵢ is kᵢ×m.
pub fn jensen_difference(
    f: &FunctionDescriptor,
    pairs: &[(HermitianView, ComplexMatrix)],
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    jensen_parts(f, pairs, None, tol)
}

fn jensen_parts(
    f: &FunctionDescriptor,
    pairs: &[(HermitianView, ComplexMatrix)],
    mut out: Option<&mut OutcomeBuilder>,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    let m = pairs
        .first()
        .ok_or_else(|| Error::InvalidArgument("eq-3-3 needs at least one pair".into()))?
        .1
        .cols();
    let mut gram = ComplexMatrix::zeros(m, m);
    let mut inner = ComplexMatrix::zeros(m, m);
    let mut outer = ComplexMatrix::zeros(m, m);
    for (i, (a, x)) in pairs.iter().enumerate() {
        if x.shape() != (a.dim(), m) {
            return Err(Error::dims(format!(
                "pair {i}: X is {}x{}, expected {}x{m}",
                x.rows(),
                x.cols(),
                a.dim()
            )));
        }
        let inside = spectrum_within(f, a, tol)?;
        let name = format!("sp(A_{}) ⊆ J", i + 1);
        if let Some(o) = out.as_deref_mut() {
            o.hypothesis(&name, inside);
        }
        if !inside {
            return Err(Error::hypothesis(name, format!("{f}")));
        }
        let xs = x.adjoint();
        gram = gram + &xs * x;
        inner = inner + &xs * a.matrix() * x;
        outer = outer + &xs * apply_function(f, a, tol)? * x;
    }
    let defect = operator_norm(&(gram - ComplexMatrix::identity(m)))?;
    let normalized = defect <= tol.recon * (pairs.len() as f64).max(1.0);
    if let Some(o) = out.as_deref_mut() {
        o.hypothesis("Σ X_i* X_i = I", normalized);
    }
    if !normalized {
        return Err(Error::hypothesis("Σ X_i* X_i = I", format!("defect {defect:e}")));
    }
    let lhs = apply_function(f, &herm(&inner)?, tol)?;
    Ok(outer - lhs)
}

/// f(Σ Xᵢ*AᵢXᵢ) ≤ Σ Xᵢ*f(Aᵢ)Xᵢ for Σ Xᵢ*Xᵢ = I.
pub fn check_jensen_subunital(
    f: &FunctionDescriptor,
    pairs: &[(HermitianView, ComplexMatrix)],
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let mut out = OutcomeBuilder::new("eq-3-3").digest_text(f.name());
    for (a, x) in pairs {
        out = out.digest_matrix(a.matrix()).digest_matrix(x);
    }
    let diff = jensen_parts(f, pairs, Some(&mut out), tol)?;
    let e = hermitian_eig(&herm(&diff)?)?;
    let scale = pairs
        .iter()
        .map(|(a, x)| Ok(apply_function(f, a, tol).and_then(|m| operator_norm(&m))? * operator_norm(x)?.powi(2)))
        .sum::<Result<f64>>()?;
    Ok(out.finish(e.min(), scale, tol))
}

/// f(Φ(A)) ≤ Φ(f(A)) for a unital positive linear Φ.
pub fn check_cdj(
    map: &MapDescriptor,
    f: &FunctionDescriptor,
    a: &HermitianView,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    ensure_input(map, a.dim())?;
    let mut out = OutcomeBuilder::new("cdj")
        .digest_map(map)
        .digest_text(f.name())
        .digest_matrix(a.matrix());
    require(&mut out, "map is linear", map.is_linear(), || map.name())?;
    require_grade(&mut out, map, Grade::Positive)?;
    let unital = map.is_unital(tol)?;
    require(&mut out, "map is unital", unital, || map.name())?;
    let inside = spectrum_within(f, a, tol)?;
    require(&mut out, "sp(A) ⊆ J", inside, || format!("{f}"))?;
    let rhs = map.apply(&apply_function(f, a, tol)?)?;
    let lhs = apply_function(f, &herm(&map.apply(a.matrix())?)?, tol)?;
    let (margin, scale) = order_margin(&lhs, &rhs)?;
    Ok(out.finish(margin, scale, tol))
}

fn pinching_of(map: &MapDescriptor) -> Result<()> {
    match map.kind() {
        MapKind::Pinching { .. } => Ok(()),
        _ => Err(Error::MapPrecondition {
            map: map.name(),
            requirement: "the conditional expectation must be a pinching".into(),
        }),
    }
}

/// Both sides of f(I − Φ(B)) + C*Φ(f(C*⁻¹BC⁻¹))C ≥ f((I + C*C)⁻¹)(I + C*C),
/// after verifying the hypotheses.
pub fn thm_3_2_sides(
    pinching: &MapDescriptor,
    f: &FunctionDescriptor,
    b: &HermitianView,
    c: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    thm_3_2_parts(pinching, f, b, c, &mut OutcomeBuilder::new("thm-3-2"), tol)
}

fn thm_3_2_parts(
    pinching: &MapDescriptor,
    f: &FunctionDescriptor,
    b: &HermitianView,
    c: &ComplexMatrix,
    out: &mut OutcomeBuilder,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    pinching_of(pinching)?;
    let n = ensure_square_same("thm-3-2", &[b.matrix(), c])?;
    ensure_input(pinching, n)?;
    let defect = pinching.off_block_defect(c)?;
    require(out, "C in subalgebra", defect <= tol.herm, || {
        format!("off-block defect {defect:e}")
    })?;
    let svd = singular_value_decompose(c)?;
    let smallest = svd.singular_values.last().copied().unwrap_or(0.0);
    let invertible = smallest > 1e-8 * svd.largest();
    require(out, "C invertible", invertible, || format!("smallest singular value {smallest:e}"))?;
    let c_inv = crate::linalg::pseudo_inverse(c, tol)?;
    let id = ComplexMatrix::identity(n);
    let first = herm(&(&id - pinching.apply(b.matrix())?))?;
    let gram = herm(&(&id + c.adjoint() * c))?;
    let gram_eig = hermitian_eig(&gram)?;
    let x_sq = herm(&gram_eig.reassemble(&gram_eig.values.iter().map(|l| 1.0 / l).collect::<Vec<_>>()))?;
    let conj = herm(&(c_inv.adjoint() * b.matrix() * &c_inv))?;
    for (m, name) in [
        (&first, "sp(I − Φ(B)) ⊆ J"),
        (&x_sq, "sp((I + C*C)⁻¹) ⊆ J"),
        (&conj, "sp(C*⁻¹BC⁻¹) ⊆ J"),
    ] {
        let inside = spectrum_within(f, m, tol)?;
        require(out, name, inside, || format!("{f}"))?;
    }
    let lhs = apply_function(f, &first, tol)? + c.adjoint() * pinching.apply(&apply_function(f, &conj, tol)?)? * c;
    // f(M)·M⁻¹ for M = (I + C*C)⁻¹, through the eigenbasis of I + C*C
    let slack = tol.spec;
    let weights = gram_eig
        .values
        .iter()
        .map(|&l| {
            let t = f.domain().clamp_within(1.0 / l, slack).ok_or(Error::SpectrumViolation {
                value: 1.0 / l,
                interval: f.domain(),
            })?;
            Ok(f.eval(t) * l)
        })
        .collect::<Result<Vec<_>>>()?;
    let rhs = gram_eig.reassemble(&weights);
    Ok((lhs, rhs))
}

/// Operator Hua inequality for a pinching conditional expectation Φ.
pub fn check_thm_3_2(
    pinching: &MapDescriptor,
    f: &FunctionDescriptor,
    b: &HermitianView,
    c: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let mut out = OutcomeBuilder::new("thm-3-2")
        .digest_map(pinching)
        .digest_text(f.name())
        .digest_matrix(b.matrix())
        .digest_matrix(c);
    if let MapKind::Pinching { blocks } = pinching.kind() {
        for blk in blocks {
            out = out.digest_scalar(blk.len() as f64);
        }
    }
    let (lhs, rhs) = thm_3_2_parts(pinching, f, b, c, &mut out, tol)?;
    let (margin, scale) = order_margin(&rhs, &lhs)?;
    Ok(out.finish(margin, scale, tol))
}

/// f(1 − φ(B)) + γφ(f(B/γ)) ≥ (1 + γ)f(1/(1 + γ)) for a state φ.
pub fn check_cor_3_3(
    state: &MapDescriptor,
    f: &FunctionDescriptor,
    b: &HermitianView,
    gamma: f64,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    ensure_input(state, b.dim())?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("γ must be positive, got {gamma}")));
    }
    let mut out = OutcomeBuilder::new("cor-3-3")
        .digest_map(state)
        .digest_text(f.name())
        .digest_matrix(b.matrix())
        .digest_scalar(gamma);
    require_state(&mut out, state, tol)?;
    let phi_b = scalar_of(state, b.matrix())?.re;
    let point = 1.0 / (1.0 + gamma);
    let f_first = f.domain().clamp_within(1.0 - phi_b, tol.spec).map(|t| f.eval(t));
    require(&mut out, "1 − φ(B) ∈ J", f_first.is_some(), || format!("{} ∉ {}", 1.0 - phi_b, f.domain()))?;
    require(&mut out, "1/(1 + γ) ∈ J", f.domain().contains(point), || format!("{point} ∉ {}", f.domain()))?;
    let scaled = herm(&b.matrix().scale(1.0 / gamma))?;
    let inside = spectrum_within(f, &scaled, tol)?;
    require(&mut out, "sp(B/γ) ⊆ J", inside, || format!("{f}"))?;
    let lhs = f_first.unwrap_or(f64::NAN) + gamma * scalar_of(state, &apply_function(f, &scaled, tol)?)?.re;
    let rhs = (1.0 + gamma) * f.eval(point);
    out.residual("lhs", lhs);
    out.residual("rhs", rhs);
    let scale = lhs.abs().max(rhs.abs()).max(hermitian_norm(&scaled)?);
    Ok(out.finish(lhs - rhs, scale, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::FunctionKind;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn view(m: &ComplexMatrix) -> HermitianView {
        HermitianView::new(m, &tol()).unwrap()
    }

    fn func(k: FunctionKind) -> FunctionDescriptor {
        FunctionDescriptor::new(k)
    }

    #[test]
    fn hua_examples() {
        let o = check_hua_classical(&HuaInstance::new(1.0, 1.0, vec![0.0]).unwrap(), &tol()).unwrap();
        assert!((o.margin - 0.5).abs() < 1e-15);
        let o = check_hua_classical(&HuaInstance::new(2.0, 1.0, vec![1.0]).unwrap(), &tol()).unwrap();
        assert_eq!(o.margin, 0.0);
        let eq = HuaInstance::equality_case(3.0, 0.7, 5).unwrap();
        assert!(check_hua_classical(&eq, &tol()).unwrap().margin.abs() < 1e-13);
        assert!(HuaInstance::new(0.0, 1.0, vec![1.0]).is_err());
        assert!(HuaInstance::new(1.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn state_hua_zero_contractions() {
        let z = ComplexMatrix::zeros(2, 2);
        let s = MapDescriptor::basis_state(2, 0).unwrap();
        let o = check_eq_3_1(&s, &z, &z, &tol()).unwrap();
        assert_eq!(o.residual("gap_1"), Some(0.0));
        assert_eq!(o.residual("gap_2"), Some(0.0));
        let big = ComplexMatrix::identity(2).scale(2.0);
        assert!(check_eq_3_1(&s, &big, &z, &tol()).is_err());
        let t = MapDescriptor::transpose(2).unwrap();
        assert!(check_eq_3_1(&t, &z, &z, &tol()).is_err());
    }

    #[test]
    fn state_hua_equal_operators_and_vector_state() {
        let a = ComplexMatrix::from_real_rows(&[[0.3, 0.2], [0.1, 0.5]]).unwrap();
        let s = MapDescriptor::basis_state(2, 1).unwrap();
        let o = check_eq_3_1(&s, &a, &a, &tol()).unwrap();
        assert!(o.residual("gap_1").unwrap().abs() < 1e-15);
        assert!(o.residual("gap_2").unwrap().abs() < 1e-15);
    }

    #[test]
    fn operator_hua_zero_operands() {
        let z = ComplexMatrix::zeros(2, 2);
        let a = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        let p = MapDescriptor::block_pinching(&[1, 1]).unwrap();
        let o = check_thm_3_1(&p, &a, &z, &z, &tol()).unwrap();
        assert!((o.margin - 1.0).abs() < 1e-14);
        let t = MapDescriptor::transpose(2).unwrap();
        assert!(check_thm_3_1(&t, &a, &z, &z, &tol()).is_err());
        let big = ComplexMatrix::identity(2).scale(3.0);
        assert!(check_thm_3_1(&p, &a, &big, &z, &tol()).is_err());
        let o = check_thm_3_1_rescaled(&p, &a, &big, &z, &tol()).unwrap();
        assert!(o.holds);
    }

    #[test]
    fn jensen_congruence_and_scalar_cases() {
        let a = view(&ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap());
        let u = ComplexMatrix::from_real_rows(&[[0.6, -0.8], [0.8, 0.6]]).unwrap();
        let o = check_jensen_subunital(&func(FunctionKind::Square), &[(a, u)], &tol()).unwrap();
        assert!(o.holds && o.equality);

        let c = view(&ComplexMatrix::identity(2).scale(0.7));
        let h = ComplexMatrix::identity(2).scale(0.5f64.sqrt());
        let pairs = [(c.clone(), h.clone()), (c, h)];
        let o = check_jensen_subunital(&func(FunctionKind::NegLog), &pairs, &tol()).unwrap();
        assert!(o.margin.abs() < 1e-14);

        let bad = [(view(&ComplexMatrix::identity(2)), ComplexMatrix::identity(2).scale(2.0))];
        assert!(check_jensen_subunital(&func(FunctionKind::Square), &bad, &tol()).is_err());
        let neg = [(view(&ComplexMatrix::identity(2).scale(-1.0)), ComplexMatrix::identity(2))];
        assert!(check_jensen_subunital(&func(FunctionKind::Inverse), &neg, &tol()).is_err());
    }

    #[test]
    fn cdj_examples() {
        let tr = MapDescriptor::normalized_trace(2).unwrap();
        let a = view(&ComplexMatrix::from_diagonal(&[0.0, 2.0]));
        let o = check_cdj(&tr, &func(FunctionKind::Square), &a, &tol()).unwrap();
        assert!((o.margin - 1.0).abs() < 1e-14);
        let p = MapDescriptor::block_pinching(&[1, 1]).unwrap();
        let c = view(&ComplexMatrix::identity(2).scale(0.3));
        let o = check_cdj(&p, &func(FunctionKind::TLogT), &c, &tol()).unwrap();
        assert!(o.margin.abs() < 1e-14);
        let d = MapDescriptor::det_shift(2, 1.0).unwrap();
        assert!(check_cdj(&d, &func(FunctionKind::Square), &c, &tol()).is_err());
    }

    #[test]
    fn pinched_hua_hand_example() {
        let p = MapDescriptor::block_pinching(&[1, 1]).unwrap();
        let b = view(&ComplexMatrix::zeros(2, 2));
        let o = check_thm_3_2(&p, &func(FunctionKind::Square), &b, &ComplexMatrix::identity(2), &tol()).unwrap();
        assert!((o.margin - 0.5).abs() < 1e-14);
        let off = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(check_thm_3_2(&p, &func(FunctionKind::Square), &b, &off, &tol()).is_err());
        let o = check_thm_3_2(&p, &func(FunctionKind::Inverse), &b, &ComplexMatrix::identity(2), &tol());
        assert!(matches!(o, Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn scalar_state_hua_examples() {
        let s = MapDescriptor::basis_state(2, 0).unwrap();
        let sq = func(FunctionKind::Square);
        let o = check_cor_3_3(&s, &sq, &view(&ComplexMatrix::identity(2)), 1.0, &tol()).unwrap();
        assert!((o.margin - 0.5).abs() < 1e-15);
        for gamma in [0.5, 1.0, 3.0] {
            let b = view(&ComplexMatrix::identity(2).scale(gamma / (1.0 + gamma)));
            for f in FunctionDescriptor::catalog() {
                let o = check_cor_3_3(&s, &f, &b, gamma, &tol()).unwrap();
                assert!(o.margin.abs() < 1e-14 && o.equality, "{f} γ={gamma}");
            }
        }
        let o = check_cor_3_3(&s, &func(FunctionKind::NegLog), &view(&ComplexMatrix::identity(2)), 1.0, &tol());
        assert!(matches!(o, Err(Error::Hypothesis { .. })));
    }
}
