/// Disjoint sets over `0..len` with union by size and path halving.
///
/// Each set remembers its smallest element, which callers use as a stable
/// set name.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    min: Vec<u32>,
}

impl DisjointSets {
    pub(crate) fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
            min: (0..len as u32).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.min[ra as usize] = self.min[ra as usize].min(self.min[rb as usize]);
        true
    }

    /// Smallest element of the set containing `x`.
    pub(crate) fn min_of(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.min[r as usize]
    }
}
