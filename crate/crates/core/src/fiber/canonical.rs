//! Canonical keys for label-preserving isomorphism classes.
//!
//! Colour refinement splits components by `(self_int, mult, d_deg)` and then
//! by the multiset of `(neighbour cell, intersection number)` until stable.
//! Remaining ties are broken by individualising each member of the first
//! non-singleton cell in turn; every discrete leaf yields an ordering, and
//! the key is the lexicographically smallest encoding over all leaves.
//! Leaves that reach the minimum differ by automorphisms, so the same search
//! also returns the full automorphism group.

use std::fmt;

use thiserror::Error;

use super::FiberConfig;

/// Configurations larger than this are refused unless a larger limit is passed.
pub const DEFAULT_COMPONENT_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("configuration has {size} components, above the canonical-form limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
}

/// Byte string equal for two configurations exactly when they are
/// isomorphic as labelled graphs. Component ids and `d_self` are ignored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn canonical_form(config: &FiberConfig) -> Result<CanonicalKey, CanonicalError> {
    canonical_form_with_limit(config, DEFAULT_COMPONENT_LIMIT)
}

pub fn canonical_form_with_limit(
    config: &FiberConfig,
    limit: usize,
) -> Result<CanonicalKey, CanonicalError> {
    check_limit(config, limit)?;
    Ok(Search::run(config).key)
}

/// All label-preserving automorphisms, as maps `p` with component `i` sent
/// to `p[i]`. The identity is always present.
pub fn automorphisms(config: &FiberConfig) -> Result<Vec<Vec<usize>>, CanonicalError> {
    check_limit(config, DEFAULT_COMPONENT_LIMIT)?;
    let search = Search::run(config);
    let first = &search.best_orders[0];
    let mut autos: Vec<Vec<usize>> = search
        .best_orders
        .iter()
        .map(|order| {
            let mut p = vec![0; first.len()];
            for (pos, &v) in first.iter().enumerate() {
                p[v] = order[pos];
            }
            p
        })
        .collect();
    autos.sort();
    autos.dedup();
    Ok(autos)
}

fn check_limit(config: &FiberConfig, limit: usize) -> Result<(), CanonicalError> {
    if config.len() > limit {
        return Err(CanonicalError::SizeLimit {
            size: config.len(),
            limit,
        });
    }
    Ok(())
}

type Partition = Vec<Vec<usize>>;

struct Search<'a> {
    config: &'a FiberConfig,
    key: CanonicalKey,
    best_orders: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn run(config: &'a FiberConfig) -> Self {
        let mut search = Search {
            config,
            key: CanonicalKey(Vec::new()),
            best_orders: Vec::new(),
        };
        search.descend(search.initial_partition());
        search
    }

    fn initial_partition(&self) -> Partition {
        let mut labelled: Vec<_> = (0..self.config.len())
            .map(|i| (self.config.component(i).label(), i))
            .collect();
        labelled.sort();
        let mut cells: Partition = Vec::new();
        let mut last = None;
        for (label, i) in labelled {
            if last == Some(label) {
                cells.last_mut().unwrap().push(i);
            } else {
                cells.push(vec![i]);
                last = Some(label);
            }
        }
        cells
    }

    fn refine(&self, mut cells: Partition) -> Partition {
        let n = self.config.len();
        loop {
            let mut cell_of = vec![0usize; n];
            for (ci, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = ci;
                }
            }
            let mut changed = false;
            let mut next = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut signed: Vec<(Vec<(usize, u32)>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig: Vec<(usize, u32)> = self
                            .config
                            .neighbors(v)
                            .map(|u| (cell_of[u], self.config.meet(v, u)))
                            .collect();
                        sig.sort_unstable();
                        (sig, v)
                    })
                    .collect();
                signed.sort();
                let before = next.len();
                let mut last: Option<&Vec<(usize, u32)>> = None;
                for (sig, v) in &signed {
                    if last == Some(sig) {
                        if let Some(c) = next.last_mut() {
                            c.push(*v);
                        }
                    } else {
                        next.push(vec![*v]);
                        last = Some(sig);
                    }
                }
                if next.len() - before > 1 {
                    changed = true;
                }
            }
            cells = next;
            if !changed {
                return cells;
            }
        }
    }

    fn descend(&mut self, cells: Partition) {
        let cells = self.refine(cells);
        match cells.iter().position(|c| c.len() > 1) {
            Some(ci) => {
                for &v in &cells[ci] {
                    let mut branch = Vec::with_capacity(cells.len() + 1);
                    branch.extend_from_slice(&cells[..ci]);
                    branch.push(vec![v]);
                    branch.push(cells[ci].iter().copied().filter(|&u| u != v).collect());
                    branch.extend_from_slice(&cells[ci + 1..]);
                    self.descend(branch);
                }
            }
            None => {
                let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let encoded = encode(self.config, &order);
                if self.best_orders.is_empty() || encoded < self.key.0 {
                    self.key = CanonicalKey(encoded);
                    self.best_orders = vec![order];
                } else if encoded == self.key.0 {
                    self.best_orders.push(order);
                }
            }
        }
    }
}

fn push_i64(out: &mut Vec<u8>, v: i64) {
    // flip the sign bit so byte order agrees with numeric order
    out.extend_from_slice(&((v as u64) ^ (1 << 63)).to_be_bytes());
}

fn encode(config: &FiberConfig, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(8 + n * 24 + n * n * 2);
    push_i64(&mut out, n as i64);
    for &v in order {
        let (s, m, d) = config.component(v).label();
        push_i64(&mut out, s);
        push_i64(&mut out, i64::from(m));
        push_i64(&mut out, d);
    }
    for a in 0..n {
        for b in a + 1..n {
            out.extend_from_slice(&config.meet(order[a], order[b]).to_be_bytes());
        }
    }
    out
}
