use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::{RunConfig, ScenarioId, ScenarioReport, DEFAULT_IDENTITY_SAMPLES, DEFAULT_ORBIT_SAMPLES};
use crate::error::{Error, Result};
use crate::finsler::{kfcl_check, quadric_fit, randers_from_quadric, FitClass, MinkowskiNorm};
use crate::numkit::{dot, mat_exp, max_abs_diff, norm, RngStream, SymEig, DEFAULT_RANK_TOL};
use crate::octonion::identities::{identity_residuals, non_associativity_witness, random_unit_imaginary};
use crate::octonion::{decompose_orthogonal, left_op, mul, right_op, PaperBasis};
use crate::spheres::realize::{complex_imag_diag, right_scalar, unit_quaternion};
use crate::spheres::{adjoint, find_conjugation, make_model, sample_orbit, SearchConfig, SphereKind, SphereModel};
use crate::spinlie::{
    closure_check, curve_generator_crosscheck, derivation_residual, g2_subalgebra, gen_spin7,
    gen_spin8, gen_spin9, rotation_curve, spin7_transcription_defect, spin9_curve_defect,
    GeneratorSet, CLOSURE_TOL,
};
use crate::triality::{companions, verify_triple, ANALYTIC_TOL, SOLVED_TOL};
use crate::{InfTriple, Matrix, Octonion, TrialityTriple};

const SEARCH_TOL: f64 = 1e-6;
const FIT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Default)]
pub(super) struct Outcome {
    residuals: BTreeMap<String, f64>,
    witnesses: BTreeMap<String, Value>,
    checks: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn residual(&mut self, name: impl Into<String>, value: f64) {
        self.residuals.insert(name.into(), value);
    }

    /// Records `value` and requires `value ≤ tol` (NaN fails).
    fn bound(&mut self, name: &str, value: f64, tol: f64) {
        self.residual(name, value);
        self.require(&format!("{name} <= {tol:e}"), value <= tol);
    }

    fn require(&mut self, what: &str, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(format!("failed: {what}"));
        }
    }

    fn witness(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("witnesses serialize");
        self.witnesses.insert(name.to_string(), v);
    }

    pub(super) fn finish(mut self, id: ScenarioId, seed: u64, duration_ms: Option<f64>) -> ScenarioReport {
        let pass = self.checks > 0 && self.failures.is_empty();
        if !self.failures.is_empty() {
            let diag = std::mem::take(&mut self.failures);
            self.witness("diagnostics", diag);
        }
        ScenarioReport {
            scenario_id: id,
            pass,
            residuals: self.residuals,
            witnesses: self.witnesses,
            seed,
            duration_ms,
        }
    }
}

fn params<const N: usize>(cfg: &RunConfig, default: [f64; N]) -> Result<[f64; N]> {
    match &cfg.params {
        None => Ok(default),
        Some(v) => v.as_slice().try_into().map_err(|_| {
            Error::Config(format!("expected {N} parameters, got {}", v.len()))
        }),
    }
}

pub(super) fn dispatch(id: ScenarioId, cfg: &RunConfig, seed: u64, out: &mut Outcome) -> Result<()> {
    if cfg.params.is_some() && id.param_arity().is_none() {
        return Err(Error::Config(format!("{id} takes no parameters")));
    }
    let mut rng = RngStream::new(seed);
    match id {
        ScenarioId::OctonionIdentities => octonion_identities(cfg, &mut rng, out),
        ScenarioId::TrialityCore => triality_core(&mut rng, out),
        ScenarioId::LieDims => {
            run_lie_dims([gen_spin7(), gen_spin8(), gen_spin9()], out);
            Ok(())
        }
        ScenarioId::UEllipsoid => u_ellipsoid(cfg, &mut rng, out),
        ScenarioId::SpNoKfcl => sp_no_kfcl(cfg, &mut rng, out),
        ScenarioId::Spsp1Round => spsp1_round(cfg, &mut rng, out),
        ScenarioId::G2Zero => g2_zero(cfg, &mut rng, out),
        ScenarioId::Spin7Line => spin7_line(cfg, &mut rng, out),
        ScenarioId::Spin7Symmetric => spin7_symmetric(cfg, &mut rng, out),
        ScenarioId::Spin9Contradiction => spin9_contradiction(out),
    }
}

fn search_cfg(cfg: &RunConfig, rng: &mut RngStream) -> SearchConfig {
    SearchConfig {
        tol: SEARCH_TOL,
        budget: cfg.budget(),
        seed: rng.next_u64(),
        ..SearchConfig::default()
    }
}

/// Searches for a conjugator reaching `target`, records the witness and
/// independently re-measures the distance from the returned matrix.
fn witness_search(
    out: &mut Outcome,
    label: &str,
    model: &SphereModel,
    x: &Matrix,
    target: &[f64],
    scfg: &SearchConfig,
) -> Result<Vec<f64>> {
    let res = find_conjugation(model, x, target, scfg)?;
    let achieved = model.pr(&adjoint(&res.g.matrix, x));
    let distance = norm(&crate::numkit::sub(&achieved, target));
    out.require(&format!("{label}: search reached target (budget {})", scfg.budget), res.success);
    out.require(&format!("{label}: recomputed distance within tolerance"), distance <= SEARCH_TOL);
    out.witness(
        label,
        json!({
            "target": target,
            "achieved": achieved,
            "distance": distance,
            "evaluations": res.evaluations,
            "restart": res.restart,
            "g": res.g,
        }),
    );
    Ok(achieved)
}

fn octonion_identities(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let samples = cfg.samples.unwrap_or(DEFAULT_IDENTITY_SAMPLES);
    for (name, r) in identity_residuals(samples, rng) {
        out.bound(&name, r, 1e-11);
    }
    let (units, d) = non_associativity_witness();
    out.residual("non_associativity_gap", d);
    out.require("(xy)z differs from x(yz)", d > 1.0);
    let (x, y, z) = (units[0], units[1], units[2]);
    out.witness(
        "non_associative_triple",
        json!({
            "x": x, "y": y, "z": z,
            "(xy)z": mul(&mul(&x, &y), &z),
            "x(yz)": mul(&x, &mul(&y, &z)),
        }),
    );
    out.witness("samples", samples);
    Ok(())
}

fn triality_core(rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let mut conj = 0.0f64;
    let mut moufang = 0.0f64;
    let mut lift = 0.0f64;
    for k in 0..50 {
        // (L_z R_z̄, L_z, L_z) needs z imaginary; (L_w, R_w, L_w R_w) any unit w.
        let z = random_unit_imaginary(rng);
        let w = Octonion::from_slice(&rng.unit_vec(8))?;
        let l = left_op(&z);
        let lr = &l * &right_op(&z.conj());
        conj = conj.max(verify_triple(&lr, &l, &l));
        let (lw, rw) = (left_op(&w), right_op(&w));
        moufang = moufang.max(verify_triple(&lw, &rw, &(&lw * &rw)));
        if k < 10 {
            let c = companions(&lr)?;
            let family = TrialityTriple::new(lr.clone(), l.clone(), l.clone());
            lift = lift.max(c.positive.distance_up_to_sign(&family));
        }
    }
    out.bound("conjugation_family", conj, ANALYTIC_TOL);
    out.bound("moufang_family", moufang, ANALYTIC_TOL);
    out.bound("companions_recover_conjugation_family", lift, SOLVED_TOL);

    let mut worst = 0.0f64;
    let mut nullities = Vec::new();
    let mut sign_gap = f64::INFINITY;
    let mut example = None;
    for _ in 0..50 {
        let a = mat_exp(&rng.skew(8, 1.0))?;
        match companions(&a) {
            Ok(c) => {
                worst = worst.max(c.positive.residual()).max(c.negative.residual());
                sign_gap = sign_gap.min(c.positive.distance(&c.negative));
                nullities.push(c.nullity);
                example.get_or_insert(c.positive);
            }
            Err(e) => {
                out.require(&format!("companions: {e}"), false);
                nullities.push(usize::MAX);
            }
        }
    }
    out.bound("companion_residual", worst, SOLVED_TOL);
    out.residual("companion_pair_separation", sign_gap);
    out.require("every companion system has nullity 1", nullities.iter().all(|&n| n == 1));
    out.require("the two companions are distinct", sign_gap > 1.0);
    out.witness("companion_example", example);
    Ok(())
}

/// The Lie-algebra checks on given generator sets (S₁, S₂, S₃); exposed so a
/// corrupted set can be fed in as a negative control.
pub fn run_lie_dims_with(sets: [GeneratorSet; 3]) -> ScenarioReport {
    let mut out = Outcome::default();
    run_lie_dims(sets, &mut out);
    out.finish(ScenarioId::LieDims, 0, None)
}

pub(super) fn run_lie_dims(sets: [GeneratorSet; 3], out: &mut Outcome) {
    for set in &sets {
        let name = format!("{:?}", set.name);
        let rank = set.rank();
        out.residual(format!("rank_{name}"), rank as f64);
        out.require(
            &format!("rank({name}) = {}", set.name.expected_len()),
            rank == set.name.expected_len() && set.len() == rank,
        );
        out.bound(&format!("closure_{name}"), closure_check(set), CLOSURE_TOL);
    }
    let (first, third) = spin7_transcription_defect(&sets[0]);
    out.residual("s1_first_entry_vs_written_form", first);
    out.residual("s1_third_minus_second", third);
    out.bound("s2_triality_residual", sets[1].max_triple_residual(), 1e-10);

    match g2_subalgebra() {
        Ok(g2) => {
            let flat: Vec<Vec<f64>> = g2.iter().map(InfTriple::flatten).collect();
            let dim = crate::numkit::rank_tol(&flat, DEFAULT_RANK_TOL).unwrap_or(0);
            out.residual("dim_g2", dim as f64);
            out.require("dim g2 = 14", dim == 14);
            let der = g2.iter().map(|d| derivation_residual(&d.a)).fold(0.0, f64::max);
            out.bound("g2_derivation", der, 1e-10);
        }
        Err(e) => out.require(&format!("g2: {e}"), false),
    }

    let curve = curve_generator_crosscheck();
    out.bound("curve_span_distance", curve.max_span_distance, 1e-6);
    out.bound("curve_second_entry", curve.max_second_entry_error, 1e-6);
    out.bound("curve_constant", curve.constant_curve_velocity, 1e-6);
    out.bound("spin9_curve_exponential", spin9_curve_defect(std::f64::consts::FRAC_PI_2), 1e-12);
    out.witness("curve_step", curve.step);
}

fn u_ellipsoid(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let [lambda, mu] = params(cfg, [1.0, 0.5])?;
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(Error::Config("u_ellipsoid needs λ, μ > 0".into()));
    }
    let n = cfg.samples.unwrap_or(DEFAULT_ORBIT_SAMPLES);
    let expected = if lambda == mu { FitClass::Riemannian } else { FitClass::Randers };
    for m in [1usize, 2] {
        let tag = format!("S{}", 2 * m + 1);
        let model = make_model(SphereKind::U, Some(m))?;
        let mut d = vec![lambda; m];
        d.push(-mu);
        let x = complex_imag_diag(&d);
        let sample = sample_orbit(&model, &x, n, rng.next_u64())?;
        out.bound(&format!("{tag}_tangency"), sample.max_tangency_defect(&model.base_point), 1e-10);
        let fit = quadric_fit(&sample.points)?;
        out.bound(&format!("{tag}_fit_residual"), fit.residual, FIT_RESIDUAL_TOL);
        out.require(
            &format!("{tag} classified {expected:?} (got {:?})", fit.classification),
            fit.classification == expected,
        );
        // The orbit is the round sphere of radius (λ+μ)/2 about (λ−μ)/2 · i e_m.
        let mut center = vec![0.0; model.ambient_dim];
        center[2 * m + 1] = 0.5 * (lambda - mu);
        out.bound(&format!("{tag}_center_error"), max_abs_diff(&fit.center, &center), 1e-8);
        let radius = 0.5 * (lambda + mu);
        let round = fit.q.scale(radius * radius) - Matrix::identity(fit.q.rows());
        out.bound(&format!("{tag}_radius_error"), round.max_abs(), 1e-8);
        if let Ok(f) = randers_from_quadric(&fit) {
            let pts: Vec<Vec<f64>> = sample.points.iter().map(|p| fit.coords(p)).collect();
            let k = kfcl_check(&pts, &f)?;
            out.bound(&format!("{tag}_fitted_norm_spread"), k.spread, 1e-8 * k.mean);
            out.witness(&format!("{tag}_norm"), &f);
        }
        out.witness(&format!("{tag}_fit"), json!({
            "classification": fit.classification,
            "center": fit.center,
            "Q": fit.q,
            "span_dim": fit.span.cols(),
        }));
    }

    // Negative control: three eigenvalue sizes.
    let model = make_model(SphereKind::U, Some(2))?;
    let x = complex_imag_diag(&[1.0, 2.0, -3.0]);
    let scfg = search_cfg(cfg, rng);
    let mut hits = Vec::new();
    for (label, v) in [("control_point_1", 1.0), ("control_point_2", 2.0)] {
        let mut t = vec![0.0; model.ambient_dim];
        t[5] = v;
        hits.push(witness_search(out, label, &model, &x, &t, &scfg)?);
    }
    let ratio = dot(&hits[1], &hits[0]) / dot(&hits[0], &hits[0]);
    out.residual("control_ratio", ratio);
    out.require("control projections positively proportional with ratio ≠ 1", ratio > 0.0 && (ratio - 1.0).abs() > 1e-6);
    let sample = sample_orbit(&model, &x, n, rng.next_u64())?;
    let fit = quadric_fit(&sample.points)?;
    out.residual("control_fit_residual", fit.residual);
    out.require("control orbit is not an ellipsoid", fit.classification == FitClass::Neither);
    Ok(())
}

fn sp_no_kfcl(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let model = make_model(SphereKind::Sp, Some(1))?;
    let x = model.random_element(rng);
    // X is conjugate to i·diag(θ₀, θ₁); the θ² are the eigenvalues of XᵀX.
    let eig = SymEig::new(&(&x.transpose() * &x))?;
    let lo = eig.values[0].max(0.0).sqrt();
    let hi = eig.values[eig.values.len() - 1].sqrt();
    out.residual("theta_min", lo);
    out.residual("theta_max", hi);
    let scfg = search_cfg(cfg, rng);
    let mut hits = Vec::new();
    for (label, v) in [("point_theta_max", hi), ("point_theta_min", lo)] {
        let mut t = vec![0.0; model.ambient_dim];
        t[model.base_index() + 1] = v;
        hits.push(witness_search(out, label, &model, &x, &t, &scfg)?);
    }
    let ratio = dot(&hits[0], &hits[1]) / dot(&hits[1], &hits[1]);
    let along: Vec<f64> = hits[1].iter().map(|v| v * ratio).collect();
    out.residual("ratio", ratio);
    out.bound("collinearity", max_abs_diff(&hits[0], &along), 1e-6);
    out.require("ratio > 0 and ratio ≠ 1", ratio > 0.0 && (ratio - 1.0).abs() > 1e-6);
    let round = MinkowskiNorm::riemannian(Matrix::identity(model.ambient_dim))?;
    let k = kfcl_check(&hits, &round)?;
    out.require("round norm differs on the pair", !k.is_constant);
    out.witness("X", &x);
    Ok(())
}

fn spsp1_round(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let model = make_model(SphereKind::SpSp1, Some(1))?;
    let dir = rng.unit_vec(3);
    let n_quat = model.ambient_dim / 4;
    let mut x = Matrix::zeros(model.ambient_dim, model.ambient_dim);
    for (k, c) in dir.iter().enumerate() {
        x += &right_scalar(n_quat, unit_quaternion(k + 1)).scale(*c);
    }
    out.bound("X_in_algebra", model.span_defect(&x), 1e-10);
    let sample = sample_orbit(&model, &x, cfg.samples.unwrap_or(DEFAULT_ORBIT_SAMPLES), rng.next_u64())?;
    let norms: Vec<f64> = sample.points.iter().map(|p| norm(p)).collect();
    let spread = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - norms.iter().copied().fold(f64::INFINITY, f64::min);
    out.bound("norm_spread", spread, 1e-8);
    let fit = quadric_fit(&sample.points)?;
    out.bound("fit_residual", fit.residual, FIT_RESIDUAL_TOL);
    out.bound("fit_center_norm", fit.center_norm(), 1e-8);
    out.require("fit classified Riemannian", fit.classification == FitClass::Riemannian);
    out.witness("fit", json!({"classification": fit.classification, "Q": fit.q, "span_dim": fit.span.cols()}));
    Ok(())
}

fn g2_zero(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let model = make_model(SphereKind::G2, None)?;
    let x = model.random_element(rng);
    let eig = SymEig::new(&(&x.transpose() * &x))?;
    let kernel = eig.vectors.column(0);
    out.bound("kernel_vector", norm(&x.mul_vec(&kernel)), 1e-10);
    let target = vec![0.0; model.ambient_dim];
    let hit = witness_search(out, "zero", &model, &x, &target, &search_cfg(cfg, rng))?;
    out.bound("projection_norm", norm(&hit), 1e-6);
    out.witness("kernel", kernel);
    out.witness("X", &x);
    Ok(())
}

/// `X₂ = a L_{e₁}L_{e₂} + b L_{e₃}L_{e₄} + c L_{e₅}L_{e₆}` and the matching
/// first entry `X₁ = 2a(E₂₁ − E₁₂) + 2b(E₄₃ − E₃₄) + 2c(E₆₅ − E₅₆)`.
fn spin7_element(abc: [f64; 3]) -> InfTriple {
    let basis = PaperBasis::new();
    let mut x1 = Matrix::zeros(8, 8);
    let mut x2 = Matrix::zeros(8, 8);
    for (k, &s) in abc.iter().enumerate() {
        let (i, j) = (2 * k + 1, 2 * k + 2);
        x1 += &(&basis.matrix_unit::<f64>(j, i) - &basis.matrix_unit(i, j)).scale(2.0 * s);
        x2 += &(&left_op(&basis.e(i)) * &left_op(&basis.e(j))).scale(s);
    }
    InfTriple::new(x1, x2.clone(), x2)
}

fn spin7_line(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let abc = params(cfg, [1.0, 0.5, 0.25])?;
    let [a, b, c] = abc;
    let model = make_model(SphereKind::Spin7, None)?;
    let t = spin7_element(abc);
    out.bound("X_triality_residual", t.residual(), 1e-10);
    let e7 = PaperBasis::new().vector::<f64>(7);
    let pr = model.pr(&t.b);
    let want: Vec<f64> = e7.iter().map(|v| v * (a + b + c)).collect();
    out.bound("projection_error", max_abs_diff(&pr, &want), 1e-12);

    let scfg = search_cfg(cfg, rng);
    let mut values: Vec<f64> = Vec::new();
    for signs in 0..8u8 {
        let s = |bit: u8| if signs >> bit & 1 == 1 { -1.0 } else { 1.0 };
        let v = s(0) * a + s(1) * b + s(2) * c;
        if values.iter().any(|&w| w == v) {
            continue;
        }
        values.push(v);
        let target: Vec<f64> = e7.iter().map(|e| e * v).collect();
        let label = format!("target_{}{}{}", ["+", "-"][(signs & 1) as usize], ["+", "-"][(signs >> 1 & 1) as usize], ["+", "-"][(signs >> 2 & 1) as usize]);
        let hit = witness_search(out, &label, &model, &t.b, &target, &scfg)?;
        let along = dot(&hit, &e7);
        let off: Vec<f64> = hit.iter().zip(&e7).map(|(h, e)| h - along * e).collect();
        out.bound(&format!("{label}_off_line"), norm(&off), 1e-6);
    }
    out.residual("distinct_targets", values.len() as f64);
    Ok(())
}

fn spin7_symmetric(cfg: &RunConfig, rng: &mut RngStream, out: &mut Outcome) -> Result<()> {
    let model = make_model(SphereKind::Spin7, None)?;
    let x = spin7_element([1.0, 0.0, 0.0]).b;
    let scfg = search_cfg(cfg, rng);
    let mut worst_split = 0.0f64;
    let mut worst_span = 0.0f64;
    let mut worst_hit = 0.0f64;
    let mut reached = 0usize;
    let mut log = Vec::new();
    for k in 0..50 {
        let z = random_unit_imaginary(rng);
        let (z1, z2) = decompose_orthogonal(&z)?;
        let l12 = &left_op(&z1) * &left_op(&z2);
        worst_split = worst_split
            .max(mul(&z1, &z2).dist(&z))
            .max(z1.inner(&z2).abs())
            .max(Octonion::apply(&l12, &Octonion::one()).dist(&z));
        worst_span = worst_span.max(model.span_defect(&l12));
        let res = find_conjugation(&model, &x, &z.to_vec(), &scfg)?;
        let achieved = model.pr(&adjoint(&res.g.matrix, &x));
        let d = norm(&crate::numkit::sub(&achieved, &z.to_vec()));
        worst_hit = worst_hit.max(d);
        if res.success && d <= SEARCH_TOL {
            reached += 1;
        } else {
            out.require(&format!("target {k} reached (distance {d:e})"), false);
        }
        log.push(json!({"z": z, "z1": z1, "z2": z2, "distance": d, "g": res.g.matrix}));
    }
    out.bound("decomposition", worst_split, 1e-12);
    out.bound("L_z1_L_z2_in_spin7", worst_span, 1e-10);
    out.bound("max_target_distance", worst_hit, SEARCH_TOL);
    out.residual("targets_reached", reached as f64);
    out.require("all 50 targets reached", reached == 50);
    out.witness("targets", log);
    Ok(())
}

fn spin9_contradiction(out: &mut Outcome) -> Result<()> {
    let model = make_model(SphereKind::Spin9, None)?;
    let e1: Octonion = PaperBasis::new().e(1);
    let (l, r) = (left_op(&e1), right_op(&e1));
    let lr = &l + &r;
    let z = Matrix::zeros(8, 8);
    let x = Matrix::block2x2(&l, &z, &z, &lr)?;
    let swapped = Matrix::block2x2(&lr, &z, &z, &l)?;
    let f = rotation_curve(std::f64::consts::FRAC_PI_2);
    let conj = adjoint(&f, &x);
    out.bound("conjugation_error", (&conj - &swapped).max_abs(), 1e-12);
    out.bound("X_in_spin9", model.span_defect(&x), 1e-10);
    out.bound("f_is_exp_of_rotation", spin9_curve_defect(std::f64::consts::FRAC_PI_2), 1e-12);

    let mut before = e1.to_vec();
    before.extend([0.0; 8]);
    let after: Vec<f64> = before.iter().map(|v| 2.0 * v).collect();
    let (p0, p1) = (model.pr(&x), model.pr(&conj));
    out.bound("projection_before", max_abs_diff(&p0, &before), 1e-12);
    out.bound("projection_after", max_abs_diff(&p1, &after), 1e-12);
    let round = MinkowskiNorm::riemannian(Matrix::identity(16))?;
    let k = kfcl_check(&[p0.clone(), p1.clone()], &round)?;
    out.require("F(2v) = 2F(v) rules out constant length", !k.is_constant);
    out.witness("f_pi_2", &f);
    out.witness("projections", json!({"before": p0, "after": p1}));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin7_element_matches_generator_combination() {
        let s1 = gen_spin7();
        let t = spin7_element([1.0, 0.5, 0.25]);
        // (1,2), (3,4), (5,6) sit at positions 0, 11, 18 of the i<j order.
        let combo = [(0usize, 1.0), (11, 0.5), (18, 0.25)]
            .iter()
            .fold(InfTriple::zero(), |acc, &(k, s)| acc.add(&s1.elements[k].as_triple().unwrap().scale(s)));
        assert!((&combo.a - &t.a).max_abs() < 1e-12);
        assert!((&combo.b - &t.b).max_abs() < 1e-12);
    }

    #[test]
    fn wrong_parameter_count_is_a_configuration_error() {
        let cfg = RunConfig {
            params: Some(vec![1.0]),
            ..RunConfig::default()
        };
        let mut out = Outcome::default();
        assert!(matches!(dispatch(ScenarioId::Spin7Line, &cfg, 0, &mut out), Err(Error::Config(_))));
        assert!(matches!(dispatch(ScenarioId::G2Zero, &cfg, 0, &mut out), Err(Error::Config(_))));
    }

    #[test]
    fn outcome_without_checks_fails() {
        let r = Outcome::default().finish(ScenarioId::G2Zero, 0, None);
        assert!(!r.pass);
    }
}
