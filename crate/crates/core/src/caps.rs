/// Resource limits. Work beyond these is refused with
/// [`Error::CapExceeded`](crate::Error::CapExceeded) rather than approximated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Longest sequence block `block()` will materialize.
    pub max_block_len: u64,
    /// Largest line family `F_k` (and so hexagon count) per precursor.
    pub max_lines: u64,
    /// Total polygon vertices accepted by the union-area sweep.
    pub max_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_block_len: 1 << 20, max_lines: 1 << 16, max_vertices: 6 << 16 }
    }
}
