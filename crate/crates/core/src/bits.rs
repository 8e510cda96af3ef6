//! Fixed 256-bit element set used by the enumeration hot loop.
//!
//! Bit `i` means "i is an element of the semigroup". The window [0, 256)
//! covers every membership query the traversal makes for genus <= 60:
//! effective generators are at most f + m and the sum tests reach at most
//! m + f + m + 1 <= 3g + 2.

const WORDS: usize = 4;
pub(crate) const BIT_WINDOW: u32 = 64 * WORDS as u32;

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) struct Bits256([u64; WORDS]);

impl Bits256 {
    /// The set of all of [0, 256) — the root semigroup's elements.
    pub fn full() -> Self {
        Bits256([u64::MAX; WORDS])
    }

    #[inline]
    pub fn get(&self, i: u32) -> bool {
        debug_assert!(i < BIT_WINDOW);
        self.0[(i / 64) as usize] >> (i % 64) & 1 != 0
    }

    #[inline]
    pub fn clear(&mut self, i: u32) {
        debug_assert!(i < BIT_WINDOW);
        self.0[(i / 64) as usize] &= !(1u64 << (i % 64));
    }

    /// Bit-reversal of the whole 256-bit word: bit i moves to bit 255 - i.
    #[inline]
    fn reversed(&self) -> Self {
        Bits256([
            self.0[3].reverse_bits(),
            self.0[2].reverse_bits(),
            self.0[1].reverse_bits(),
            self.0[0].reverse_bits(),
        ])
    }

    /// Logical shift right by `k` bits, zero-filling.
    #[inline]
    fn shr(&self, k: u32) -> Self {
        debug_assert!(k < BIT_WINDOW);
        let word = (k / 64) as usize;
        let bit = k % 64;
        let mut out = [0u64; WORDS];
        for j in 0..WORDS - word {
            let lo = self.0[j + word] >> bit;
            let hi = if bit == 0 || j + word + 1 >= WORDS {
                0
            } else {
                self.0[j + word + 1] << (64 - bit)
            };
            out[j] = lo | hi;
        }
        Bits256(out)
    }

    /// Is `v` the sum of two nonzero elements? Tests whether any a in
    /// [1, v-1] has both a and v - a set. With R the bit-reversal,
    /// (R >> (255 - v)) holds v - a at position a, so one AND answers
    /// every decomposition at once; positions 0 and v are masked off
    /// because they pair with 0.
    #[inline]
    pub fn has_sum_pair(&self, v: u32) -> bool {
        debug_assert!(0 < v && v < BIT_WINDOW);
        let t = self.reversed().shr(BIT_WINDOW - 1 - v);
        let mut m = [0u64; WORDS];
        for j in 0..WORDS {
            m[j] = self.0[j] & t.0[j];
        }
        // positions 0 and v pair with zero; they do not count
        m[0] &= !1;
        m[(v / 64) as usize] &= !(1u64 << (v % 64));
        m.iter().any(|w| *w != 0)
    }
}
