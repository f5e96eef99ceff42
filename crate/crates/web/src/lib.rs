//! Three entry points for the static demo page in `www/`.
//!
//! The `*_values` functions are plain Rust so they can be tested natively;
//! the exported wrappers only convert errors for JavaScript.

use cvpoly::analysis::{
    linspace, plan_output, state_prep_input, sweep_bare, sweep_method1_exact, sweep_method2, target_output, wigner,
    InputFamily,
};
use cvpoly::gates::{taylor_factorize, DiagonalUnitary, EffectiveBlock, MonomialPlan};
use cvpoly::method1::{chain_method1_exact, Method1Config};
use cvpoly::method2::{chain_method2, Method2Config};
use cvpoly::states::{Grid, SqueezeConvention};
use cvpoly::{Complex64, Error, Result};
use wasm_bindgen::prelude::*;

/// Coarser than the library default so a panel renders in well under a second.
fn demo_grid() -> Grid {
    Grid::symmetric(16.0, 1024).expect("valid demo grid")
}

fn cubic(nu: f64) -> Result<(DiagonalUnitary, MonomialPlan)> {
    let u = DiagonalUnitary::cubic_phase(nu);
    let plan = taylor_factorize(&u, 1)?;
    Ok((u, plan))
}

fn to_js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Row-major `W(q_i, p_j)` on `[-half_width, half_width]^2` for one panel:
/// `target`, `polynomial`, `method1` or `method2`. The input is the 5 dB
/// momentum-squeezed vacuum.
pub fn wigner_values(panel: &str, nu: f64, db: f64, half_width: f64, points: usize) -> Result<Vec<f64>> {
    if !(half_width > 0.0) || points < 2 {
        return Err(Error::InvalidParameter(
            "need a positive half width and at least 2 points".into(),
        ));
    }
    let (u, plan) = cubic(nu)?;
    let psi = state_prep_input(demo_grid())?;
    let state = match panel {
        "target" => target_output(&u, &psi)?,
        "polynomial" => plan_output(&plan, &psi)?,
        "method1" => chain_method1_exact(&psi, &Method1Config::new(plan, db, 1.0)?)?,
        "method2" => chain_method2(&psi, &Method2Config::new(plan, db)?)?.state,
        other => return Err(Error::InvalidParameter(format!("unknown panel {other:?}"))),
    };
    let axis = linspace(-half_width, half_width, points);
    let w = wigner(&state, &axis, &axis)?;
    Ok(w.values.into_iter().flatten().collect())
}

/// Fidelity with the ideal gate for photon numbers (or `|alpha|^2`) 0..=10.
/// `method` is `bare`, `method1` or `method2`; `family` is `fock` or `coherent`.
pub fn fidelity_values(method: &str, family: &str, nu: f64, db: f64) -> Result<Vec<f64>> {
    let family = match family {
        "fock" => InputFamily::Fock,
        "coherent" => InputFamily::Coherent,
        other => return Err(Error::InvalidParameter(format!("unknown input family {other:?}"))),
    };
    let xs: Vec<f64> = (0..=10).map(f64::from).collect();
    let g = demo_grid();
    let curve = match method {
        "bare" => sweep_bare(family, &xs, nu, g)?,
        "method1" => sweep_method1_exact(family, &xs, nu, db, g)?,
        "method2" => sweep_method2(family, &xs, nu, db, SqueezeConvention::SqueezedQ, g)?,
        other => return Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
    };
    Ok(curve.y_values)
}

/// Gate transfer functions on `points` values of `q` in `[q_min, q_max]`.
///
/// Output is row-major with seven columns per point: `q`, then phase and
/// magnitude of the Taylor polynomial, of the method-1 product of blocks and
/// of the method-2 product. Both are taken relative to the value at `q = 0`;
/// the ideal gate has phase `nu q^3` (wrapped) and magnitude 1.
pub fn gate_profile_values(nu: f64, db: f64, q_min: f64, q_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(q_max > q_min) || points < 2 {
        return Err(Error::InvalidParameter(
            "need q_min < q_max and at least 2 points".into(),
        ));
    }
    let (_, plan) = cubic(nu)?;
    let m1 = Method1Config::new(plan.clone(), db, 1.0)?;
    let blocks1 = m1
        .ancillas()?
        .into_iter()
        .zip(&m1.nominal_outcomes)
        .map(|(a, &m)| EffectiveBlock::photon_subtracted(a, m))
        .collect::<Result<Vec<_>>>()?;
    let blocks2: Vec<EffectiveBlock> = Method2Config::new(plan.clone(), db)?
        .ancillas()?
        .into_iter()
        .map(EffectiveBlock::single_photon)
        .collect();
    let product =
        |blocks: &[EffectiveBlock], q: f64| blocks.iter().fold(Complex64::new(1.0, 0.0), |acc, b| acc * b.factor(q));
    let origin = [plan.eval(0.0), product(&blocks1, 0.0), product(&blocks2, 0.0)];
    let mut out = Vec::with_capacity(points * 7);
    for q in linspace(q_min, q_max, points) {
        out.push(q);
        let values = [plan.eval(q), product(&blocks1, q), product(&blocks2, q)];
        for (v, v0) in values.iter().zip(origin) {
            out.push((v * v0.conj()).arg());
            out.push(v.norm() / v0.norm());
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn wigner_panel(
    panel: &str,
    nu: f64,
    db: f64,
    half_width: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    wigner_values(panel, nu, db, half_width, points).map_err(to_js)
}

#[wasm_bindgen]
pub fn fidelity_curve(method: &str, family: &str, nu: f64, db: f64) -> std::result::Result<Vec<f64>, JsError> {
    fidelity_values(method, family, nu, db).map_err(to_js)
}

#[wasm_bindgen]
pub fn gate_profile(nu: f64, db: f64, q_min: f64, q_max: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    gate_profile_values(nu, db, q_min, q_max, points).map_err(to_js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wigner_panel_shape_and_sign() {
        let w = wigner_values("method1", 0.1, 5.0, 6.0, 61).unwrap();
        assert_eq!(w.len(), 61 * 61);
        assert!(w.iter().any(|&v| v < 0.0));
        assert!(wigner_values("nope", 0.1, 5.0, 6.0, 61).is_err());
    }

    #[test]
    fn curves_start_near_one() {
        for method in ["bare", "method1", "method2"] {
            let f = fidelity_values(method, "fock", 0.1, 20.0).unwrap();
            assert_eq!(f.len(), 11);
            assert!(f[0] > 0.99, "{method}: {}", f[0]);
        }
    }

    #[test]
    fn profile_is_flat_at_zero_strength() {
        let p = gate_profile_values(0.0, 5.0, -2.0, 2.0, 9).unwrap();
        assert_eq!(p.len(), 9 * 7);
        for row in p.chunks(7) {
            assert!(row[1].abs() < 1e-12 && (row[2] - 1.0).abs() < 1e-12);
        }
    }
}
