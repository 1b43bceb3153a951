//! Congruent-number obstruction from the twisted module.
//!
//! For squarefree `n = 3 mod 24` the multiplicity of the degree-55
//! irreducible in the twisted module at discriminant `-n` reduces to
//! `(1/4) Re(lambda) C_84(-n)` with `C_84` the level-8 cusp-form
//! coefficient; when that coefficient is nonzero, `n` is not a congruent
//! number. The certifier is one-directional: it never claims congruence,
//! and it does not extend the hypothesis beyond `n = 3 mod 24`.

use num_traits::Zero;
use serde::Serialize;

use crate::moonshine::phi84_coeff;
use crate::qf::prime_factors;
use crate::rational::{display_rat, ratio, Rat};

fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&display_rat(r))
}

/// Outcome of one certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Hypotheses hold and the obstruction is nonzero: `n` is certified
    /// not congruent.
    NotCongruentCertified,
    /// Hypotheses hold but the obstruction vanishes; nothing follows
    /// (such `n` may well be congruent).
    Inconclusive,
    /// `n` is not squarefree or not `3 mod 24`; the theorem does not apply.
    HypothesisNotMet,
}

/// Full record of a certification run. `c84` and `m55` are always filled
/// in (zero where the cusp form is unsupported) so that near-miss inputs
/// stay inspectable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub n: i64,
    pub squarefree: bool,
    /// `n = 3 mod 24`.
    pub residue_ok: bool,
    /// Level-8 cusp-form coefficient at discriminant `-n`.
    #[serde(serialize_with = "serialize_rat")]
    pub c84: Rat,
    /// Multiplicity of the degree-55 irreducible at `-n` under the chosen
    /// real part of the module parameter.
    #[serde(serialize_with = "serialize_rat")]
    pub m55: Rat,
    pub verdict: Verdict,
}

pub fn is_squarefree(n: i64) -> bool {
    prime_factors(n).iter().all(|&p| n % (p * p) != 0)
}

/// Run the certifier for `n >= 1`. `re_lambda` is the real part of the
/// module parameter, an even integer; the bundled module has `-4`.
pub fn certify(n: i64, re_lambda: i64) -> VerdictRecord {
    assert!(n >= 1, "certifier input must be positive");
    assert!(re_lambda % 2 == 0, "module parameter real part must be even");
    let squarefree = is_squarefree(n);
    let residue_ok = n % 24 == 3;
    let c84 = phi84_coeff(-n);
    let m55 = ratio(re_lambda, 4) * &c84;
    let verdict = if !(squarefree && residue_ok) {
        Verdict::HypothesisNotMet
    } else if c84.is_zero() {
        Verdict::Inconclusive
    } else {
        Verdict::NotCongruentCertified
    };
    VerdictRecord { n, squarefree, residue_ok, c84, m55, verdict }
}

/// Certify with the bundled module's parameter value.
pub fn certify_default(n: i64) -> VerdictRecord {
    certify(n, -4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn certified_cases() {
        let r = certify_default(3);
        assert_eq!(r.verdict, Verdict::NotCongruentCertified);
        assert_eq!(r.m55, rat(-1));
        let r = certify_default(51);
        assert_eq!(r.verdict, Verdict::NotCongruentCertified);
        assert_eq!(r.m55, rat(-2));
    }

    #[test]
    fn inconclusive_case() {
        // 219 is congruent; the obstruction must vanish.
        let r = certify_default(219);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.c84.is_zero());
        assert!(r.squarefree && r.residue_ok);
    }

    #[test]
    fn hypothesis_failures() {
        // 59 = 11 mod 24: outside the theorem even though its coefficient
        // is available.
        let r = certify_default(59);
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
        assert!(r.squarefree && !r.residue_ok);
        assert!(!r.c84.is_zero());
        // 5 = 5 mod 24 and -5 is not a discriminant.
        let r = certify_default(5);
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
        assert!(r.c84.is_zero());
        // 27 = 3 mod 24 but not squarefree.
        let r = certify_default(27);
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
        assert!(!r.squarefree && r.residue_ok);
    }

    #[test]
    fn squarefree_predicate() {
        assert!(is_squarefree(1));
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(49));
    }
}
