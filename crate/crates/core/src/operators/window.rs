/// The basis `{U^mV^n : |m|, |n| ≤ N}` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisWindow {
    n: usize,
}

impl BasisWindow {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn cutoff(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn dim(&self) -> usize {
        self.side() * self.side()
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        let c = self.n as i64;
        m.abs() <= c && n.abs() <= c
    }

    pub fn index(&self, m: i64, n: i64) -> Option<usize> {
        if !self.contains(m, n) {
            return None;
        }
        let c = self.n as i64;
        Some(((m + c) as usize) * self.side() + (n + c) as usize)
    }

    pub fn point(&self, idx: usize) -> (i64, i64) {
        let c = self.n as i64;
        (
            (idx / self.side()) as i64 - c,
            (idx % self.side()) as i64 - c,
        )
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.dim()).map(|i| self.point(i))
    }
}
