//! Paths in the 2-cycle quiver `1 ⇄ 2`.

/// The path of `len` alternating arrows starting at vertex `start` (1 or 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathMono {
    pub start: u8,
    pub len: u32,
}

impl PathMono {
    pub fn idem(v: u8) -> Self {
        PathMono { start: v, len: 0 }
    }

    pub fn new(start: u8, len: u32) -> Self {
        PathMono { start, len }
    }

    pub fn end(&self) -> u8 {
        if self.len.is_multiple_of(2) {
            self.start
        } else {
            3 - self.start
        }
    }

    pub fn degree(&self) -> i64 {
        self.len as i64
    }

    /// Arrows read right to left: the `k`-th arrow leaves the vertex reached after `k` steps.
    pub fn arrows(&self) -> Vec<u8> {
        let mut v = self.start;
        let mut out = Vec::with_capacity(self.len as usize);
        for _ in 0..self.len {
            out.push(v);
            v = 3 - v;
        }
        out
    }
}

/// `p·q` (first `q`, then `p`), or `None` when the endpoints do not match.
pub fn path_multiply(p: &PathMono, q: &PathMono) -> Option<PathMono> {
    if p.start == q.end() {
        Some(PathMono { start: q.start, len: q.len + p.len })
    } else {
        None
    }
}
