//! Dominations of the linearized operators: `eq5`, `eq6`, `eq7` and `tt11`.
//!
//! Each test field is paired with its own argmax selector and with one
//! uniformly random selector over the same family.

use super::{pointwise_directions, pointwise_scales, sample_fields, VerifyConfig, Worst};
use crate::error::Result;
use crate::grid::GridField;
use crate::operators::{DirectionFilter, RectFamily, Selector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub(super) fn run(name: &str, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Worst> {
    let n = cfg.n;
    let dirs = pointwise_directions()?;
    let scales = pointwise_scales()?;
    let doubled = scales.with_doubled_heights();
    let family = RectFamily::directional(n, &dirs, &scales, DirectionFilter::All)?;
    let mask = GridField::zeros(n).interior_mask(scales.max_height());
    let fields = sample_fields(n, cfg.samples_per_family, rng.gen(), 1.0);

    let rhs_family = match name {
        "eq6" => Some(family.clone()),
        "eq5" => Some(RectFamily::directional(n, &dirs, &doubled, DirectionFilter::AnchorsOnly)?),
        "eq7" => Some(RectFamily::directional(n, &dirs, &doubled, DirectionFilter::All)?),
        _ => None,
    };

    let mut worst = Worst::new();
    for (k, (id, f)) in fields.iter().enumerate() {
        let sup = family.sup(f);
        let selectors =
            [("argmax", Selector::from_sup(&family, &sup)), ("random", Selector::random(&family, rng))];
        let rhs = rhs_family.as_ref().map(|fam| if name == "eq6" { sup.values.clone() } else { fam.sup(f).values });
        for (kind, phi) in &selectors {
            let tag = format!("sample={k} field={id} selector={kind}");
            let (lhs, rhs) = match name {
                "eq6" => (phi.operator().apply(f), rhs.clone().expect("set above")),
                "eq5" => (phi.anchor_operator()?.apply(f), rhs.clone().expect("set above")),
                "eq7" => (phi.doubled_operator().apply(f), rhs.clone().expect("set above")),
                _ => tt11_sides(phi, f)?,
            };
            worst.offer_fields(&lhs, &rhs, &mask, &tag);
            worst.samples += 1;
        }
    }
    Ok(worst)
}

/// `(𝕋₂ f, T̃T₀*f + T₀T̃*f)`, so that the smallest `C` in
/// `TT*f ≤ 𝕋₁f + C(T̃T₀*f + T₀T̃*f)` is the largest pointwise ratio.
fn tt11_sides(phi: &Selector, f: &GridField) -> Result<(GridField, GridField)> {
    let n = phi.n();
    let t = phi.operator();
    let sectors = phi.sectors();
    let mut labels = sectors.clone();
    labels.sort_unstable();
    labels.dedup();
    let mut cross = GridField::zeros(n);
    for &s in &labels {
        let rows: Vec<bool> = sectors.iter().map(|&x| x == s).collect();
        let outside = GridField::from_values(
            n,
            f.values().iter().zip(&rows).map(|(&v, &inside)| if inside { 0.0 } else { v }).collect(),
        );
        let part = t.restricted_rows(&rows).apply(&t.adjoint(&outside));
        cross = cross.zip_with(&part, |a, b| a + b);
    }
    let tilde = phi.doubled_operator();
    let t0 = phi.anchor_operator()?;
    let bound = tilde.apply(&t0.adjoint(f)).zip_with(&t0.apply(&tilde.adjoint(f)), |a, b| a + b);
    Ok((cross, bound))
}
