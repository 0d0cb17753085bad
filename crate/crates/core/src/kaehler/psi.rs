use serde::Serialize;

use super::{enumerate_tangent_derivations, OneForm};
use crate::cring::Verdict;

/// Outcome of probing `ψ: Ω¹_C → Hom(Der C, C)` at one form.
#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    /// Coefficients of `ω` in the `dxᵢ` basis.
    pub omega: Vec<String>,
    pub in_j: Verdict,
    pub derivations_checked: usize,
    pub all_contractions_in_i: bool,
    /// Per-derivation verdicts for `ι_v ω ∈ I`.
    pub contractions: Vec<Verdict>,
    pub degree_bound: u32,
    pub seed: u64,
    /// `ω ∉ J` up to the bound while every enumerated contraction lies in `I`.
    pub witness: bool,
}

impl PsiReport {
    /// JSON object with the stable field names.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "omega": self.omega,
            "in_J": self.in_j,
            "derivations_checked": self.derivations_checked,
            "all_contractions_in_I": self.all_contractions_in_i,
            "degree_bound": self.degree_bound,
            "seed": self.seed,
            "witness": self.witness,
        })
    }
}

/// Check `ω ∉ J` up to `degree_bound` and `ι_v ω ∈ I` for every tangent
/// field of coefficient degree at most `degree_bound`.
pub fn psi_noninjectivity_report(omega: &OneForm, degree_bound: u32) -> PsiReport {
    let ring = omega.presentation().ring().clone();
    let in_j = omega.member_j(degree_bound);
    let fields = enumerate_tangent_derivations(&ring, degree_bound);
    let contractions: Vec<Verdict> = fields
        .iter()
        .map(|v| ring.ideal_member(v.contract(omega).rep(), degree_bound).verdict)
        .collect();
    let all_in_i = contractions.iter().all(Verdict::is_proved_equal);
    let witness = in_j.refuted() && !fields.is_empty() && all_in_i;
    PsiReport {
        omega: omega.to_strings(),
        in_j,
        derivations_checked: fields.len(),
        all_contractions_in_i: all_in_i,
        contractions,
        degree_bound,
        seed: ring.oracle().seed,
        witness,
    }
}
