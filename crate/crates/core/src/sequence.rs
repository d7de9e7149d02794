//! The sequence `x_0, x_1, ...` of dyadic rationals, formed by concatenating
//! blocks `X_0, X_1, ...`.
//!
//! Block `X_l` has `2^l (2l + 1)` elements; element `i` is
//! `(-1)^l (i 2^-l - l)`. Even blocks ascend over `[-l, l + 1)`, odd blocks
//! descend over `[-l - 1 + 2^-l, l]`. Consecutive elements (also across a
//! block boundary) differ by exactly `2^-l`, `l` being the level of the
//! earlier element.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::numeric::Dyadic;

/// Highest block level addressed through `u64` sequence indices.
pub const MAX_LEVEL: u32 = 56;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub level: u32,
    pub elements: Vec<Dyadic>,
}

/// Position of a sequence element: global index, block level and offset in
/// the block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeqIndex {
    pub k: u64,
    pub level: u32,
    pub offset: u64,
}

/// `|X_l| = 2^l (2l + 1)`.
pub fn block_len(level: u32) -> u128 {
    assert!(level <= 120, "block level {level} out of range");
    (1u128 << level) * (2 * u128::from(level) + 1)
}

/// `sum_{l < m} |X_l|`, by the closed form `(2m - 3) 2^m + 3`.
pub fn block_offset(m: u32) -> u128 {
    assert!(m <= 120, "block level {m} out of range");
    let m128 = i128::from(m);
    ((2 * m128 - 3) * (1i128 << m) + 3) as u128
}

/// Element `i` of block `level`, without bounds checking.
pub fn element(level: u32, i: u64) -> Dyadic {
    let shifted = BigInt::from(i) - (BigInt::from(level) << level);
    let signed = if level % 2 == 0 { shifted } else { -shifted };
    Dyadic::new(signed, level)
}

pub fn block(level: u32, caps: &Caps) -> Result<Block> {
    let len = if level <= 120 { block_len(level) } else { u128::MAX };
    if len > u128::from(caps.max_block_len) {
        return Err(Error::CapExceeded {
            what: "block",
            requested: format!("{len} elements"),
            cap: caps.max_block_len.to_string(),
        });
    }
    let elements = (0..len as u64).map(|i| element(level, i)).collect();
    Ok(Block { level, elements })
}

/// Resolves a global index into (level, offset).
pub fn locate(k: u64) -> Result<SeqIndex> {
    let k128 = u128::from(k);
    let mut level = 0;
    while block_offset(level + 1) <= k128 {
        level += 1;
        if level > MAX_LEVEL {
            return Err(Error::CapExceeded {
                what: "sequence index",
                requested: k.to_string(),
                cap: format!("block level {MAX_LEVEL}"),
            });
        }
    }
    Ok(SeqIndex { k, level, offset: (k128 - block_offset(level)) as u64 })
}

pub fn x_at(k: u64) -> Result<Dyadic> {
    let idx = locate(k)?;
    Ok(element(idx.level, idx.offset))
}

/// Index `k` with `x_k = xhat` inside block `X_m`, computed arithmetically.
pub fn index_of(m: u32, xhat: &Dyadic) -> Result<SeqIndex> {
    if m > MAX_LEVEL {
        return Err(Error::OutOfRange(format!("block level {m} > {MAX_LEVEL}")));
    }
    if !xhat.is_n_dyadic(m) {
        return Err(Error::NotDyadic(format!("{xhat} (needs {m}-dyadic)")));
    }
    let scaled = xhat.scaled_mantissa(m);
    let level_term = BigInt::from(m) << m;
    let pos = if m % 2 == 0 { scaled + level_term } else { level_term - scaled };
    let len = block_len(m);
    let in_range = !pos.is_negative() && pos.to_u128().is_some_and(|p| p < len);
    if !in_range {
        return Err(Error::OutOfRange(format!("{xhat} is not an element of block X_{m}")));
    }
    let offset = pos.to_u64().expect("offset below block length");
    Ok(SeqIndex { k: (block_offset(m) as u64) + offset, level: m, offset })
}

/// Iterator over `x_0, x_1, ...`.
#[derive(Clone, Debug, Default)]
pub struct Sequence {
    level: u32,
    offset: u64,
}

impl Sequence {
    pub fn new() -> Self {
        Sequence::default()
    }
}

impl Iterator for Sequence {
    type Item = Dyadic;

    fn next(&mut self) -> Option<Dyadic> {
        if self.level > MAX_LEVEL {
            return None;
        }
        let x = element(self.level, self.offset);
        self.offset += 1;
        if u128::from(self.offset) == block_len(self.level) {
            self.level += 1;
            self.offset = 0;
        }
        Some(x)
    }
}

/// `x_{n-1} - x_n` for `n = 1..=k`, as a vector indexed from zero.
pub fn step_differences(k: usize) -> Vec<Dyadic> {
    let xs: Vec<Dyadic> = Sequence::new().take(k + 1).collect();
    xs.windows(2).map(|w| &w[0] - &w[1]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obs1Row {
    pub m: u32,
    /// Largest index of an element of `X_m`, with `|X_l| = 2^l (2l + 1)`.
    pub max_k: u128,
    /// `2^(2m)`.
    pub bound: u128,
    pub pass: bool,
    /// `sum_{l=1}^m (|X_l| - 1)`, the count used by the textbook argument.
    pub short_count_sum: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obs1Report {
    pub rows: Vec<Obs1Row>,
    pub note: String,
}

impl Obs1Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Checks that every index in block `X_m` is at most `2^(2m)`, for each
/// `m` in `m_lo..=m_hi`.
pub fn check_obs1(m_lo: u32, m_hi: u32) -> Result<Obs1Report> {
    if m_lo < 4 || m_lo > m_hi || m_hi > 60 {
        return Err(Error::Precondition(format!(
            "need 4 <= m_lo <= m_hi <= 60, got {m_lo}..={m_hi}"
        )));
    }
    let rows = (m_lo..=m_hi)
        .map(|m| {
            let max_k = block_offset(m + 1) - 1;
            let bound = 1u128 << (2 * m);
            // sum_{l=1}^m |X_l| = offset(m + 1) - |X_0|
            let short_count_sum = block_offset(m + 1) - 1 - u128::from(m);
            Obs1Row { m, max_k, bound, pass: max_k <= bound, short_count_sum }
        })
        .collect();
    Ok(Obs1Report {
        rows,
        note: "block size is 2^l(2l+1) (the count of i values); a sum over 2^l(2l+1)-1 \
               undercounts by one per block and by |X_0| = 1; the bound holds either way"
            .into(),
    })
}
