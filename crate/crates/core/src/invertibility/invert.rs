use num_bigint::BigInt;

use super::{uldi_check, InvError, UldiStatus};
use crate::exactnum::{Interval, Rational};
use crate::sysmodel::NormalizedSystem;

const MAX_BITS: u32 = 1024;

/// Recover the input word from an output sequence of a one-step D-invertible system.
///
/// Step `k` selects the unique `u` with `(a·[y_k, y_k+1) + u) ∩ [y_{k+1}, y_{k+1}+1) ≠ ∅`.
pub fn invert_sequence(sys: &NormalizedSystem, outputs: &[BigInt]) -> Result<Vec<Rational>, InvError> {
    let diff = sys.difference_system();
    match uldi_check(sys.a(), &diff.diff_inputs) {
        Ok(v) if v.status == UldiStatus::NotUldi => return Err(InvError::NotUldi),
        Ok(_) | Err(InvError::EmptyNonzeroV) => {}
        Err(e) => return Err(e),
    }
    let mut recovered = Vec::with_capacity(outputs.len().saturating_sub(1));
    for (k, pair) in outputs.windows(2).enumerate() {
        recovered.push(step_input(sys, &pair[0], &pair[1], k)?);
    }
    Ok(recovered)
}

fn step_input(sys: &NormalizedSystem, y: &BigInt, y_next: &BigInt, step: usize) -> Result<Rational, InvError> {
    let cell = Interval::cell(y);
    let next = Interval::cell(y_next);
    let mut bits = 64;
    loop {
        let a_enc = sys.a().enclosure_with_bits(bits);
        let candidates: Vec<&Rational> = sys
            .inputs()
            .iter()
            .filter(|u| cell.affine_image_enclosure(&a_enc, u).intersects(&next))
            .collect();
        match candidates.as_slice() {
            [] => return Err(InvError::NoConsistentInput(step)),
            [u] => return Ok((*u).clone()),
            _ if a_enc.is_point() || bits >= MAX_BITS => return Err(InvError::AmbiguousInput(step)),
            _ => bits *= 2,
        }
    }
}
