//! Deterministic four-square decompositions.

/// Lexicographically greatest `(c1,c2,c3,c4)` with `c1 ≥ c2 ≥ c3 ≥ c4 ≥ 0`
/// and `c1²+c2²+c3²+c4² = b`.
pub fn four_squares(b: u64) -> [u64; 4] {
    four_squares_capped(b, u64::MAX).expect("every non-negative integer is a sum of four squares")
}

/// As [`four_squares`] but with `c1 ≤ max_part`. Returns `None` when no such
/// decomposition exists (e.g. `b = 4` with `max_part = 0`).
pub fn four_squares_capped(b: u64, max_part: u64) -> Option<[u64; 4]> {
    let top = b.isqrt().min(max_part);
    for c1 in (0..=top).rev() {
        let r1 = b - c1 * c1;
        for c2 in (0..=c1.min(r1.isqrt())).rev() {
            let r2 = r1 - c2 * c2;
            for c3 in (0..=c2.min(r2.isqrt())).rev() {
                let r3 = r2 - c3 * c3;
                let c4 = r3.isqrt();
                if c4 * c4 == r3 && c4 <= c3 {
                    return Some([c1, c2, c3, c4]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(b: u64) -> [u64; 4] {
        let mut best: Option<[u64; 4]> = None;
        let r = b.isqrt();
        for c1 in 0..=r {
            for c2 in 0..=c1 {
                for c3 in 0..=c2 {
                    for c4 in 0..=c3 {
                        if c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4 == b {
                            let t = [c1, c2, c3, c4];
                            if best.is_none_or(|bb| t > bb) {
                                best = Some(t);
                            }
                        }
                    }
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(four_squares(0), [0, 0, 0, 0]);
        assert_eq!(four_squares(7), [2, 1, 1, 1]);
        assert_eq!(four_squares(4), [2, 0, 0, 0]);
        assert_eq!(four_squares_capped(4, 1), Some([1, 1, 1, 1]));
        assert_eq!(four_squares_capped(5, 1), None);
    }

    #[test]
    fn agrees_with_brute_force() {
        for b in 0..=600 {
            assert_eq!(four_squares(b), brute(b), "b = {b}");
        }
    }
}
