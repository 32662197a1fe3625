//! Cantor pairing of ℕ×ℕ with ℕ.

/// `(i + j)(i + j + 1)/2 + i`, or `None` on `u64` overflow.
pub fn cantor_pair(i: u64, j: u64) -> Option<u64> {
    let s = i.checked_add(j)?;
    let tri = (s as u128 * (s as u128 + 1)) / 2;
    u64::try_from(tri + i as u128).ok()
}

/// Inverse of [`cantor_pair`]. The first component never exceeds `n`.
pub fn cantor_unpair(n: u64) -> (u64, u64) {
    let w = ((8 * n as u128 + 1).isqrt() - 1) / 2;
    let c = n as u128 - (w * w + w) / 2;
    (c as u64, (w - c) as u64)
}
