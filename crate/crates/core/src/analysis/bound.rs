//! The fill-distance bound on the held-out error,
//! `h (L_model + L_label L_target) + L_label eps + eps_train`,
//! evaluated next to the realized maximum absolute error.

use serde::Serialize;

use super::metrics::maxae;
use crate::dataset::Dataset;
use crate::regression::{krr_lipschitz_bound, krr_predict, KernelModel};
use crate::selection::{fill_distance, SelectionResult};
use crate::{Error, Result};

const NOTE: &str = "bound_value bounds the conditional expected error at each held-out point; \
observed_maxae is the realized maximum absolute error over held-out rows";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// Fill distance of the training rows in the pool.
    pub fill_dist: f64,
    /// Lipschitz constant of the error in the features (the model's constant).
    pub lip_model: f64,
    /// Lipschitz constant of the error in the label (1 for absolute error).
    pub lip_label_arg: f64,
    /// Lipschitz constant of the conditional mean label.
    pub lip_target: f64,
    pub label_uncertainty: f64,
    /// Maximum error on the training rows.
    pub train_max_error: f64,
    pub bound_value: f64,
    /// `None` when no held-out rows remain.
    pub observed_maxae: Option<f64>,
    pub slack: Option<f64>,
    pub note: &'static str,
}

fn check_input(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::InvalidArgument(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

pub fn theorem_bound(
    fill_dist: f64,
    lip_model: f64,
    lip_label_arg: f64,
    lip_target: f64,
    eps: f64,
    eps_train: f64,
) -> Result<BoundReport> {
    for (name, v) in [
        ("fill distance", fill_dist),
        ("model Lipschitz constant", lip_model),
        ("label Lipschitz constant", lip_label_arg),
        ("target Lipschitz constant", lip_target),
        ("label uncertainty", eps),
        ("training error", eps_train),
    ] {
        check_input(name, v)?;
    }
    Ok(BoundReport {
        fill_dist,
        lip_model,
        lip_label_arg,
        lip_target,
        label_uncertainty: eps,
        train_max_error: eps_train,
        bound_value: fill_dist * (lip_model + lip_label_arg * lip_target) + lip_label_arg * eps + eps_train,
        observed_maxae: None,
        slack: None,
        note: NOTE,
    })
}

/// Largest absolute error of `model` on its training rows.
pub fn training_max_error(model: &KernelModel, train: &Dataset) -> Result<f64> {
    let y = train.require_labels()?;
    let pred = krr_predict(model, train.features())?;
    maxae(y, &pred)
}

/// [`bound_check_with`] for the absolute error, whose label Lipschitz constant is 1.
pub fn bound_check(
    pool: &Dataset,
    selection: &SelectionResult,
    model: &KernelModel,
    lip_target: f64,
    eps: f64,
) -> Result<BoundReport> {
    bound_check_with(pool, selection, model, lip_target, eps, 1.0)
}

/// Assemble the bound for a model trained on `selection` and compare it with
/// the maximum absolute error on the rows it did not see.
pub fn bound_check_with(
    pool: &Dataset,
    selection: &SelectionResult,
    model: &KernelModel,
    lip_target: f64,
    eps: f64,
    lip_label_arg: f64,
) -> Result<BoundReport> {
    let labels = pool.require_labels()?;
    let train = pool.subset(&selection.indices)?;
    if train.features() != model.train_features() {
        return Err(Error::InvalidArgument("model was not trained on exactly the selected rows".into()));
    }
    let h = fill_distance(pool.features(), &selection.indices)?;
    let eps_train = training_max_error(model, &train)?;
    let mut report = theorem_bound(h, krr_lipschitz_bound(model), lip_label_arg, lip_target, eps, eps_train)?;

    let held_out = pool.complement(&selection.indices);
    if !held_out.is_empty() {
        let test = pool.subset(&held_out)?;
        let pred = krr_predict(model, test.features())?;
        let truth: Vec<f64> = held_out.iter().map(|&i| labels[i]).collect();
        let observed = maxae(&truth, &pred)?;
        report.observed_maxae = Some(observed);
        report.slack = Some(report.bound_value - observed);
    }
    Ok(report)
}
