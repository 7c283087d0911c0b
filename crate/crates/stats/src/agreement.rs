//! Inter-annotator agreement via Cohen's kappa.
//!
//! Kappa corrects raw agreement for the agreement two annotators would reach
//! by labeling at their observed marginal rates independently. Besides the
//! overall score, a report breaks agreement down per category by collapsing
//! the labels to "this category vs everything else".

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

use crate::error::StatsError;

/// Cohen's kappa for two equal-length annotation sequences.
///
/// Perfect observed agreement is defined as kappa 1.0 even when the expected
/// agreement is also 1 (both annotators using a single category), where the
/// usual quotient would be 0/0.
pub fn cohen_kappa<T: Ord>(a: &[T], b: &[T]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch { a: a.len(), b: b.len() });
    }
    if a.is_empty() {
        return Err(StatsError::EmptyAnnotations);
    }
    let n = a.len();
    let agreements = a.iter().zip(b).filter(|(x, y)| x == y).count();
    if agreements == n {
        return Ok(1.0);
    }

    let mut marginal_a: BTreeMap<&T, usize> = BTreeMap::new();
    let mut marginal_b: BTreeMap<&T, usize> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *marginal_a.entry(x).or_insert(0) += 1;
        *marginal_b.entry(y).or_insert(0) += 1;
    }
    // Integer products first keeps the expected-agreement sum exact.
    let mut chance_products: u64 = 0;
    for (label, &count_a) in &marginal_a {
        if let Some(&count_b) = marginal_b.get(label) {
            chance_products += count_a as u64 * count_b as u64;
        }
    }
    let p_o = agreements as f64 / n as f64;
    let p_e = chance_products as f64 / (n as u64 * n as u64) as f64;
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Agreement summary with per-category breakdown.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub n: u64,
    pub observed_agreement: f64,
    pub expected_agreement: f64,
    pub kappa: f64,
    /// Binary-collapse kappa for each category either annotator used.
    pub per_category: BTreeMap<String, f64>,
}

pub fn agreement_report<T: Ord + Display>(a: &[T], b: &[T]) -> Result<AgreementReport, StatsError> {
    let kappa = cohen_kappa(a, b)?;
    let n = a.len();
    let agreements = a.iter().zip(b).filter(|(x, y)| x == y).count();

    let mut marginal_a: BTreeMap<&T, usize> = BTreeMap::new();
    let mut marginal_b: BTreeMap<&T, usize> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *marginal_a.entry(x).or_insert(0) += 1;
        *marginal_b.entry(y).or_insert(0) += 1;
    }
    let mut chance_products: u64 = 0;
    let mut categories: Vec<&T> = Vec::new();
    for (label, &count_a) in &marginal_a {
        if let Some(&count_b) = marginal_b.get(label) {
            chance_products += count_a as u64 * count_b as u64;
        }
        categories.push(label);
    }
    for label in marginal_b.keys() {
        if !marginal_a.contains_key(label) {
            categories.push(label);
        }
    }
    categories.sort();

    let mut per_category = BTreeMap::new();
    for category in categories {
        let binary_a: Vec<bool> = a.iter().map(|x| x == category).collect();
        let binary_b: Vec<bool> = b.iter().map(|y| y == category).collect();
        per_category.insert(category.to_string(), cohen_kappa(&binary_a, &binary_b)?);
    }

    Ok(AgreementReport {
        n: n as u64,
        observed_agreement: agreements as f64 / n as f64,
        expected_agreement: chance_products as f64 / (n as u64 * n as u64) as f64,
        kappa,
        per_category,
    })
}
