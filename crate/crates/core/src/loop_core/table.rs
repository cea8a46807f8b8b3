use std::collections::HashMap;
use std::io::Write;

use super::{FiniteLoop, LoopError, Subloop};

/// Largest order whose element indices fit the 16-bit table format.
pub const MAX_TABLE_ORDER: usize = 1 << 16;

/// A loop stored as a Cayley table, with both division tables precomputed.
/// Elements are indices `0..order`.
#[derive(Debug, Clone)]
pub struct TableLoop {
    name: String,
    n: usize,
    mul: Vec<u16>,
    ldiv: Vec<u16>,
    rdiv: Vec<u16>,
    identity: u32,
    labels: Vec<String>,
    by_label: HashMap<String, u32>,
    probes: Vec<u32>,
}

impl TableLoop {
    /// Validates that `table` (row-major, `n * n`) is a Latin square with a
    /// two-sided identity.
    pub fn from_table(
        name: impl Into<String>,
        n: usize,
        table: Vec<u32>,
        labels: Vec<String>,
    ) -> Result<TableLoop, LoopError> {
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(LoopError::TooLarge { order: n, limit: MAX_TABLE_ORDER });
        }
        if table.len() != n * n || labels.len() != n {
            return Err(LoopError::NotALoop("table dimensions do not match the order".into()));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= n) {
            return Err(LoopError::NotALoop(format!("entry {bad} out of range")));
        }
        let mul: Vec<u16> = table.iter().map(|&v| v as u16).collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] as usize == x && mul[x * n + e] as usize == x))
            .ok_or_else(|| LoopError::NotALoop("no two-sided identity".into()))?;
        const UNSET: u16 = u16::MAX;
        let mut ldiv = vec![UNSET; n * n];
        let mut rdiv = vec![UNSET; n * n];
        let mut seen_row = vec![false; n];
        for x in 0..n {
            seen_row.iter_mut().for_each(|s| *s = false);
            for u in 0..n {
                let w = mul[x * n + u] as usize;
                if seen_row[w] {
                    return Err(LoopError::NotALoop(format!("row {x} repeats entry {w}")));
                }
                seen_row[w] = true;
                ldiv[x * n + w] = u as u16;
                // rdiv[w][y] = u with u*y = w; here u = x, y = u.
                rdiv[w * n + u] = x as u16;
            }
        }
        if rdiv.contains(&UNSET) && n < UNSET as usize {
            return Err(LoopError::NotALoop("some column repeats an entry".into()));
        }
        // Columns: each (w, y) must have been hit exactly once.
        let mut col_seen = vec![false; n];
        for y in 0..n {
            col_seen.iter_mut().for_each(|s| *s = false);
            for x in 0..n {
                let w = mul[x * n + y] as usize;
                if col_seen[w] {
                    return Err(LoopError::NotALoop(format!("column {y} repeats entry {w}")));
                }
                col_seen[w] = true;
            }
        }
        let by_label = labels.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        Ok(TableLoop {
            name: name.into(),
            n,
            mul,
            ldiv,
            rdiv,
            identity: identity as u32,
            labels,
            by_label,
            probes: Vec::new(),
        })
    }

    /// Tabulates any finite loop, keeping its enumeration order, labels and
    /// probe elements.
    pub fn from_loop<L: FiniteLoop>(l: &L) -> Result<TableLoop, LoopError> {
        let n = l.order();
        if n > MAX_TABLE_ORDER {
            return Err(LoopError::TooLarge { order: n, limit: MAX_TABLE_ORDER });
        }
        let elems: Vec<L::Elem> = l.elements().collect();
        let table: Vec<u32> = {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let x = &elems[i];
                    elems.iter().map(move |y| l.index_of(&l.mul(x, y)) as u32)
                })
                .collect()
        };
        let labels = elems.iter().map(|x| l.format_element(x)).collect();
        let mut t = TableLoop::from_table(l.describe(), n, table, labels)?;
        t.probes = l.probe_elements().iter().map(|p| l.index_of(p) as u32).collect();
        Ok(t)
    }

    /// The subloop `s` of `l` as a table loop, indexed in `s`'s member order.
    pub fn from_subloop<L: FiniteLoop>(l: &L, s: &Subloop<L::Elem>) -> Result<TableLoop, LoopError> {
        let members = s.members();
        let pos: HashMap<&L::Elem, u32> = members.iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for x in members {
            for y in members {
                let p = l.mul(x, y);
                let idx = pos.get(&p).ok_or_else(|| LoopError::NotALoop(format!("{} is not closed", s.label())))?;
                table.push(*idx);
            }
        }
        let labels = members.iter().map(|x| l.format_element(x)).collect();
        let mut t = TableLoop::from_table(format!("{} in {}", s.label(), l.describe()), n, table, labels)?;
        t.probes = s.generators().iter().filter_map(|g| pos.get(g).copied()).collect();
        Ok(t)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> TableLoop {
        self.name = name.into();
        self
    }

    pub fn with_probes(mut self, probes: Vec<u32>) -> TableLoop {
        self.probes = probes;
        self
    }

    pub fn row(&self, x: u32) -> &[u16] {
        let n = self.n;
        &self.mul[x as usize * n..(x as usize + 1) * n]
    }

    /// Writes the Cayley table: a header line `order=<n>`, then one line per
    /// row of comma-separated element indices.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "order={}", self.n)?;
        let mut line = String::new();
        for x in 0..self.n {
            line.clear();
            for (k, v) in self.row(x as u32).iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                line.push_str(&v.to_string());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

impl FiniteLoop for TableLoop {
    type Elem = u32;

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> usize {
        self.n
    }

    fn element(&self, index: usize) -> u32 {
        index as u32
    }

    fn index_of(&self, x: &u32) -> usize {
        *x as usize
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    fn mul(&self, x: &u32, y: &u32) -> u32 {
        self.mul[*x as usize * self.n + *y as usize] as u32
    }

    #[inline]
    fn left_div(&self, x: &u32, w: &u32) -> u32 {
        self.ldiv[*x as usize * self.n + *w as usize] as u32
    }

    #[inline]
    fn right_div(&self, w: &u32, y: &u32) -> u32 {
        self.rdiv[*w as usize * self.n + *y as usize] as u32
    }

    fn format_element(&self, x: &u32) -> String {
        self.labels[*x as usize].clone()
    }

    fn parse_element(&self, text: &str) -> Option<u32> {
        let text = text.trim();
        if let Some(idx) = text.strip_prefix('#') {
            return idx.parse().ok().filter(|&i: &u32| (i as usize) < self.n);
        }
        self.by_label.get(text).copied()
    }

    fn probe_elements(&self) -> Vec<u32> {
        if self.probes.is_empty() {
            (0..self.n.min(27) as u32).collect()
        } else {
            self.probes.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_latin_tables() {
        let labels: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let bad = vec![0, 1, 2, 1, 1, 0, 2, 0, 1];
        assert!(matches!(TableLoop::from_table("bad", 3, bad, labels.clone()), Err(LoopError::NotALoop(_))));
        let no_identity = vec![1, 0, 2, 0, 2, 1, 2, 1, 0];
        assert!(TableLoop::from_table("bad", 3, no_identity, labels).is_err());
    }

    #[test]
    fn divisions_invert_multiplication() {
        let l = super::super::nonassociative_five();
        for x in 0..5u32 {
            for w in 0..5u32 {
                assert_eq!(l.mul(&x, &l.left_div(&x, &w)), w);
                assert_eq!(l.mul(&l.right_div(&w, &x), &x), w);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let l = super::super::nonassociative_five();
        let mut buf = Vec::new();
        l.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "order=5");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[2], "1,0,3,4,2");
    }
}
