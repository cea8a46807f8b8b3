//! Small fixture loops: elementary abelian 3-groups and a non-Moufang loop.

use super::{FiniteLoop, TableLoop};

/// The elementary abelian group `C3^rank`, elements encoded as base-3 digit
/// strings (first coordinate most significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementaryAbelian {
    rank: u32,
}

impl ElementaryAbelian {
    pub fn new(rank: u32) -> ElementaryAbelian {
        assert!(rank <= 10, "C3^{rank} is not supported");
        ElementaryAbelian { rank }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    fn digits(&self, x: u32) -> Vec<u32> {
        (0..self.rank).rev().map(|k| (x / 3u32.pow(k)) % 3).collect()
    }

    fn pack_digits(&self, ds: impl Iterator<Item = u32>) -> u32 {
        ds.fold(0, |acc, d| acc * 3 + d % 3)
    }

    fn combine(&self, x: u32, y: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let (a, b) = (self.digits(x), self.digits(y));
        self.pack_digits(a.into_iter().zip(b).map(|(p, q)| f(p, q)))
    }
}

impl FiniteLoop for ElementaryAbelian {
    type Elem = u32;

    fn describe(&self) -> String {
        format!("C3^{}", self.rank)
    }

    fn order(&self) -> usize {
        3usize.pow(self.rank)
    }

    fn element(&self, index: usize) -> u32 {
        index as u32
    }

    fn index_of(&self, x: &u32) -> usize {
        *x as usize
    }

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, x: &u32, y: &u32) -> u32 {
        self.combine(*x, *y, |p, q| p + q)
    }

    fn left_div(&self, x: &u32, w: &u32) -> u32 {
        self.combine(*w, *x, |p, q| p + 3 - q)
    }

    fn right_div(&self, w: &u32, y: &u32) -> u32 {
        self.combine(*w, *y, |p, q| p + 3 - q)
    }

    fn format_element(&self, x: &u32) -> String {
        let ds: Vec<String> = self.digits(*x).iter().map(|d| d.to_string()).collect();
        format!("({})", ds.join(","))
    }

    fn parse_element(&self, text: &str) -> Option<u32> {
        let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
        let ds: Option<Vec<u32>> = inner.split(',').map(|s| s.trim().parse().ok().filter(|&d| d < 3)).collect();
        let ds = ds?;
        (ds.len() == self.rank as usize).then(|| self.pack_digits(ds.into_iter()))
    }

    fn probe_elements(&self) -> Vec<u32> {
        (0..self.rank).rev().map(|k| 3u32.pow(k)).collect()
    }
}

/// A nonassociative loop of order 5. Every Moufang loop of order 5 is a
/// group, so this table fails the Moufang identity; it serves as the
/// corrupted-table fixture.
pub fn nonassociative_five() -> TableLoop {
    #[rustfmt::skip]
    let table = vec![
        0, 1, 2, 3, 4,
        1, 0, 3, 4, 2,
        2, 4, 0, 1, 3,
        3, 2, 4, 0, 1,
        4, 3, 1, 2, 0,
    ];
    let labels = (0..5).map(|i| format!("q{i}")).collect();
    TableLoop::from_table("nonassociative loop of order 5", 5, table, labels).expect("fixture is a loop")
}
