use rug::Float;

use crate::error::{Error, Result};

/// Guard bits carried on top of the requested precision.
pub const GUARD_BITS: u32 = 64;
pub const MIN_BITS: u32 = 128;
pub const DEFAULT_BITS: u32 = 256;

/// Working precision `B` and the identity tolerance `2^{-B/2+8}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::PrecisionTooLow(bits));
        }
        Ok(PrecisionContext { bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Precision used for every floating-point operation.
    pub fn working(self) -> u32 {
        self.bits + GUARD_BITS
    }

    pub fn tol_log2(self) -> i32 {
        -(self.bits as i32) / 2 + 8
    }

    pub fn tol(self) -> Float {
        Float::with_val(self.working(), 1) << self.tol_log2()
    }

    /// Points closer than `2^{-B/4}` to the divisor of a theta function are rejected.
    pub fn divisor_margin(self) -> Float {
        Float::with_val(self.working(), 1) >> (self.bits / 4)
    }

    pub fn doubled(self) -> Self {
        PrecisionContext {
            bits: 2 * self.bits,
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { bits: DEFAULT_BITS }
    }
}
