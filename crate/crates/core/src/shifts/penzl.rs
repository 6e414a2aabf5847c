//! Greedy selection of shifts from a candidate set by the ADI min–max
//! heuristic.

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|∏ᵢ (λ − ᾱᵢ)/(λ + αᵢ)|`, the magnitude of the ADI rational function.
pub fn adi_rational_abs(lambda: Complex64, shifts: &[Complex64]) -> f64 {
    shifts.iter().map(|&a| ((lambda - a.conj()) / (lambda + a)).norm()).product()
}

/// Picks about `count` shifts from `candidates` (all with negative real
/// part).
///
/// The first shift minimizes the largest single-factor magnitude over the
/// candidates; each further shift is the candidate where the accumulated
/// rational function is largest. Complex picks are followed by their
/// conjugate (upper half-plane member first), so the result may hold
/// `count + 1` entries. Ties go to the candidate of smallest modulus.
pub fn penzl_select(candidates: &[Complex64], count: usize) -> Result<Vec<Complex64>> {
    if candidates.is_empty() {
        return Err(Error::Contract("empty candidate set".into()));
    }
    if let Some(c) = candidates.iter().find(|c| !(c.re < 0.0)) {
        return Err(Error::Contract(format!("candidate {c} is not in the open left half plane")));
    }
    let mut cands = candidates.to_vec();
    cands.sort_by(|a, b| a.norm().total_cmp(&b.norm()));

    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (k, &c) in cands.iter().enumerate() {
        let worst = cands.iter().map(|&l| adi_rational_abs(l, &[c])).fold(0.0, f64::max);
        if worst < best_val {
            best_val = worst;
            best = k;
        }
    }
    let mut chosen = Vec::with_capacity(count + 1);
    push_with_conjugate(&mut chosen, cands[best]);

    while chosen.len() < count {
        let mut pick = None;
        let mut pick_val = 0.0;
        for (k, &c) in cands.iter().enumerate() {
            let v = adi_rational_abs(c, &chosen);
            if v > pick_val {
                pick_val = v;
                pick = Some(k);
            }
        }
        match pick {
            Some(k) => push_with_conjugate(&mut chosen, cands[k]),
            None => {
                warn!("only {} distinct shifts available, {} requested", chosen.len(), count);
                break;
            }
        }
    }
    Ok(chosen)
}

/// Pushes `z`, and for complex `z` its conjugate, upper half-plane member
/// first so that the tie between the two cannot change the output.
fn push_with_conjugate(out: &mut Vec<Complex64>, z: Complex64) {
    let upper = Complex64::new(z.re, z.im.abs());
    out.push(upper);
    if z.im != 0.0 {
        out.push(upper.conj());
    }
}
