//! Closed-form bounds used to locate where multi-copy CHSH beats communication.

/// Upper bound `(1 + √5)^n` on the local bound of n-copy CHSH.
pub fn ambainis_upper(n: u32) -> f64 {
    (1.0 + 5f64.sqrt()).powi(n as i32)
}

/// `2^c · L`: a c-bit protocol is a mixture of at most `2^c` local strategies per message.
pub fn comm_factor_upper(local: f64, bits: u32) -> f64 {
    2f64.powi(bits as i32) * local
}

/// Copy count `13·2^c` past which n-copy CHSH is guaranteed to beat c bits.
pub fn critical_copies_upper(bits: u32) -> u64 {
    13 * (1u64 << bits)
}

/// Smallest `n` with `2^c (1+√5)^n < (2+√2)^n`, from the same two analytic bounds.
pub fn critical_copies_exact(bits: u32) -> u64 {
    let ratio = (2.0 + 2f64.sqrt()).ln() - (1.0 + 5f64.sqrt()).ln();
    (bits as f64 * 2f64.ln() / ratio).floor() as u64 + 1
}
