//! The Boltzmann-Shannon Index: one minus the base-2 Jensen-Shannon
//! divergence between the frequency distribution `p` and the geometric
//! distribution `q` of a labelled partition.

use serde::Serialize;

use crate::distribution::{kl_divergence, Distribution};
use crate::error::{domain, Result};

/// Result of one index evaluation. All divergences are in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BsiReport {
    pub bsi: f64,
    pub jsd_bits: f64,
    pub kl_p_m_bits: f64,
    pub kl_q_m_bits: f64,
    pub k: usize,
}

/// `1 - (KL(p||m) + KL(q||m)) / 2` with `m = (p + q) / 2`.
pub fn bsi(p: &Distribution, q: &Distribution) -> Result<BsiReport> {
    if p.k() != q.k() {
        return domain(format!("length mismatch: p has {} states, q has {}", p.k(), q.k()));
    }
    let m = p.midpoint(q)?;
    // m[i] >= p[i]/2 and q[i]/2, so neither KL term can hit the support error.
    let kl_p_m_bits = kl_divergence(p, &m)?;
    let kl_q_m_bits = kl_divergence(q, &m)?;
    let jsd_bits = (0.5 * (kl_p_m_bits + kl_q_m_bits)).clamp(0.0, 1.0);
    Ok(BsiReport {
        bsi: 1.0 - jsd_bits,
        jsd_bits,
        kl_p_m_bits,
        kl_q_m_bits,
        k: p.k(),
    })
}

/// Binary entropy `-a log2 a - (1-a) log2 (1-a)`.
///
/// This is exactly the index of the two-state reversal `p = (a, 1-a)`,
/// `q = (1-a, a)`, which makes it a closed-form check on [`bsi`].
pub fn reversal_bsi_closed_form(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("alpha = {alpha} is outside [0, 1]"));
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(alpha) + term(1.0 - alpha))
}

/// Numeric index of the two-state reversal at `alpha`.
pub fn reversal_bsi_numeric(alpha: f64) -> Result<BsiReport> {
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("alpha = {alpha} is outside [0, 1]"));
    }
    let p = Distribution::new(vec![alpha, 1.0 - alpha])?;
    let q = Distribution::new(vec![1.0 - alpha, alpha])?;
    bsi(&p, &q)
}
