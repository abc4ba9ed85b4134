//! Fibre configurations: the labelled intersection graph of a degenerate
//! fibre together with its numerical invariants.
//!
//! A [`FiberConfig`] records, for every irreducible component, its
//! self-intersection, its coefficient in the fibre cycle and its degree
//! against the strict transform of the bisecant divisor. Pairwise
//! intersection numbers are kept in a dense symmetric table; configurations
//! are small (a level-`n` fibre has `n + 1` components).

mod canonical;
mod format;

pub use canonical::{
    automorphisms, canonical_form, canonical_form_with_limit, CanonicalError, CanonicalKey,
    DEFAULT_COMPONENT_LIMIT,
};
pub use format::{parse, serialize};

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::IntMatrix;

/// Stable name of a fibre component (`f0`, `e1`, ...).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(String);

impl ComponentId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.0)
    }
}

impl From<&str> for ComponentId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for ComponentId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl PartialEq<str> for ComponentId {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for ComponentId {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

/// One irreducible component of a fibre.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentRecord {
    pub id: ComponentId,
    /// Self-intersection `C²`.
    pub self_int: i64,
    /// Coefficient of the component in the fibre cycle, always `>= 1`.
    pub mult: u32,
    /// Degree against the strict transform of the bisecant divisor.
    pub d_deg: i64,
}

impl ComponentRecord {
    pub fn new(id: impl Into<ComponentId>, self_int: i64, mult: u32, d_deg: i64) -> Self {
        Self {
            id: id.into(),
            self_int,
            mult,
            d_deg,
        }
    }

    /// The `(self_int, mult, d_deg)` label that isomorphisms must preserve.
    pub fn label(&self) -> (i64, u32, i64) {
        (self.self_int, self.mult, self.d_deg)
    }
}

/// The two families of main fibres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FiberKind {
    A,
    D,
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::A => f.write_str("A"),
            FiberKind::D => f.write_str("D"),
        }
    }
}

impl std::str::FromStr for FiberKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(FiberKind::A),
            "D" | "d" => Ok(FiberKind::D),
            other => Err(format!("unknown fibre kind `{other}` (expected A or D)")),
        }
    }
}

/// Structural problems found while assembling or parsing a configuration.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("configuration has no components")]
    Empty,
    #[error("duplicate component id `{0}`")]
    DuplicateId(ComponentId),
    #[error("edge refers to unknown component `{0}`")]
    UnknownId(ComponentId),
    #[error("self-loop on `{0}`: self-intersections belong in `self_int`")]
    SelfLoop(ComponentId),
    #[error("asymmetric intersection between `{a}` and `{b}`: listed as {first} and {second}")]
    AsymmetricEdge {
        a: ComponentId,
        b: ComponentId,
        first: i64,
        second: i64,
    },
    #[error("intersection number between `{a}` and `{b}` must be >= 1, got {value}")]
    NonPositiveIntersection {
        a: ComponentId,
        b: ComponentId,
        value: i64,
    },
    #[error("multiplicity of `{id}` must be >= 1, got {value}")]
    BadMultiplicity { id: ComponentId, value: i64 },
    #[error("configuration violates invariants: {0}")]
    Invariant(ValidationReport),
}

/// A failed fibre invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantViolation {
    Empty,
    /// The support graph splits into `pieces` connected components.
    Disconnected {
        pieces: usize,
    },
    /// Row of the intersection matrix paired with the multiplicity vector is nonzero.
    NumericalTriviality {
        id: ComponentId,
        value: i64,
    },
    /// `Σ μ·d` differs from 2.
    BisecantBalance {
        sum: i64,
    },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantViolation::Empty => f.write_str("empty configuration"),
            InvariantViolation::Disconnected { pieces } => {
                write!(
                    f,
                    "connectivity: support graph has {pieces} connected pieces"
                )
            }
            InvariantViolation::NumericalTriviality { id, value } => {
                write!(
                    f,
                    "numerical triviality: row of `{id}` gives {value}, expected 0"
                )
            }
            InvariantViolation::BisecantBalance { sum } => {
                write!(
                    f,
                    "bisecant balance: sum of mult*d_deg is {sum}, expected 2"
                )
            }
        }
    }
}

/// Every invariant a configuration fails. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<InvariantViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Labelled intersection graph of the components of one fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberConfig {
    components: Vec<ComponentRecord>,
    // symmetric, zero diagonal
    meets: Vec<Vec<u32>>,
    d_self: Option<i64>,
}

impl FiberConfig {
    /// Assembles a configuration, checking ids and edges but not the fibre
    /// invariants (see [`FiberConfig::validate`]).
    pub fn from_parts<I, A, B>(
        components: Vec<ComponentRecord>,
        edges: I,
        d_self: Option<i64>,
    ) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = (A, B, u32)>,
        A: Into<ComponentId>,
        B: Into<ComponentId>,
    {
        let raw = edges
            .into_iter()
            .map(|(a, b, k)| (a.into(), b.into(), i64::from(k)));
        Self::from_raw_edges(components, raw, d_self)
    }

    pub(crate) fn from_raw_edges(
        components: Vec<ComponentRecord>,
        edges: impl IntoIterator<Item = (ComponentId, ComponentId, i64)>,
        d_self: Option<i64>,
    ) -> Result<Self, ConfigError> {
        if components.is_empty() {
            return Err(ConfigError::Empty);
        }
        for (i, c) in components.iter().enumerate() {
            if c.mult == 0 {
                return Err(ConfigError::BadMultiplicity {
                    id: c.id.clone(),
                    value: 0,
                });
            }
            if components[..i].iter().any(|o| o.id == c.id) {
                return Err(ConfigError::DuplicateId(c.id.clone()));
            }
        }
        let n = components.len();
        let mut meets = vec![vec![0u32; n]; n];
        let mut seen = vec![vec![None::<i64>; n]; n];
        let index = |id: &ComponentId| {
            components
                .iter()
                .position(|c| &c.id == id)
                .ok_or_else(|| ConfigError::UnknownId(id.clone()))
        };
        for (a, b, k) in edges {
            let i = index(&a)?;
            let j = index(&b)?;
            if i == j {
                return Err(ConfigError::SelfLoop(a));
            }
            if k < 1 {
                return Err(ConfigError::NonPositiveIntersection { a, b, value: k });
            }
            if let Some(prev) = seen[i][j] {
                if prev != k {
                    return Err(ConfigError::AsymmetricEdge {
                        a,
                        b,
                        first: prev,
                        second: k,
                    });
                }
                continue;
            }
            seen[i][j] = Some(k);
            seen[j][i] = Some(k);
            let k = u32::try_from(k).map_err(|_| ConfigError::NonPositiveIntersection {
                a: a.clone(),
                b: b.clone(),
                value: k,
            })?;
            meets[i][j] = k;
            meets[j][i] = k;
        }
        Ok(Self {
            components,
            meets,
            d_self,
        })
    }

    /// The level-0 fibre: one smooth conic with `f0² = 0` and degree 2.
    pub fn smooth(d_self: Option<i64>) -> Self {
        Self {
            components: vec![ComponentRecord::new("f0", 0, 1, 2)],
            meets: vec![vec![0]],
            d_self,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of blow-ups separating this fibre from a smooth one.
    pub fn level(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn components(&self) -> &[ComponentRecord] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &ComponentRecord {
        &self.components[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id.as_str() == id)
    }

    pub fn get(&self, id: &str) -> Option<&ComponentRecord> {
        self.index_of(id).map(|i| &self.components[i])
    }

    /// Intersection number of two distinct components, by index.
    pub fn meet(&self, i: usize, j: usize) -> u32 {
        self.meets[i][j]
    }

    /// Intersection number by id; 0 for unknown ids or `a == b`.
    pub fn intersection(&self, a: &str, b: &str) -> u32 {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) if i != j => self.meets[i][j],
            _ => 0,
        }
    }

    /// Pairs `(i, j, k)` with `i < j` and `k = C_i·C_j > 0`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let k = self.meets[i][j];
                (k > 0).then_some((i, j, k))
            })
        })
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| j != i && self.meets[i][j] > 0)
    }

    pub fn d_self(&self) -> Option<i64> {
        self.d_self
    }

    pub fn with_d_self(mut self, d_self: Option<i64>) -> Self {
        self.d_self = d_self;
        self
    }

    pub fn multiplicities(&self) -> Vec<i64> {
        self.components.iter().map(|c| i64::from(c.mult)).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.d_deg).collect()
    }

    /// `(C_i · C_j)` with self-intersections on the diagonal, in component order.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == j {
                    self.components[i].self_int
                } else {
                    i64::from(self.meets[i][j])
                };
                m.set(i, j, v);
            }
        }
        m
    }

    /// Connected pieces of the support graph restricted to `members`,
    /// each listed in index order, pieces ordered by their smallest index.
    pub fn connected_pieces(&self, members: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        let mut seen = vec![false; self.len()];
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut pieces = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut piece = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if inside[u] && !seen[u] {
                        seen[u] = true;
                        piece.push(u);
                        queue.push_back(u);
                    }
                }
            }
            piece.sort_unstable();
            pieces.push(piece);
        }
        pieces
    }

    /// Checks connectivity, numerical triviality of the fibre cycle and
    /// bisecant balance. Never fails; every violation is listed.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.is_empty() {
            violations.push(InvariantViolation::Empty);
            return ValidationReport { violations };
        }
        let all: Vec<usize> = (0..self.len()).collect();
        let pieces = self.connected_pieces(&all).len();
        if pieces != 1 {
            violations.push(InvariantViolation::Disconnected { pieces });
        }
        let mu = self.multiplicities();
        for (c, value) in self
            .components
            .iter()
            .zip(self.intersection_matrix().mul_vec(&mu))
        {
            if value != 0 {
                violations.push(InvariantViolation::NumericalTriviality {
                    id: c.id.clone(),
                    value,
                });
            }
        }
        let sum: i64 = mu.iter().zip(self.degrees()).map(|(m, d)| m * d).sum();
        if sum != 2 {
            violations.push(InvariantViolation::BisecantBalance { sum });
        }
        ValidationReport { violations }
    }

    /// Smallest `e<k>` id, `k >= len()`, not already in use.
    pub(crate) fn fresh_exceptional_id(&self) -> ComponentId {
        let mut k = self.len();
        loop {
            let candidate = format!("e{k}");
            if self.index_of(&candidate).is_none() {
                return ComponentId(candidate);
            }
            k += 1;
        }
    }

    pub(crate) fn component_mut(&mut self, index: usize) -> &mut ComponentRecord {
        &mut self.components[index]
    }

    pub(crate) fn set_meet(&mut self, i: usize, j: usize, k: u32) {
        debug_assert_ne!(i, j);
        self.meets[i][j] = k;
        self.meets[j][i] = k;
    }

    /// Appends a component with no intersections; returns its index.
    pub(crate) fn push_component(&mut self, record: ComponentRecord) -> usize {
        for row in &mut self.meets {
            row.push(0);
        }
        self.components.push(record);
        self.meets.push(vec![0; self.components.len()]);
        self.components.len() - 1
    }

    pub(crate) fn remove_component(&mut self, index: usize) -> ComponentRecord {
        self.meets.remove(index);
        for row in &mut self.meets {
            row.remove(index);
        }
        self.components.remove(index)
    }

    /// Same components and intersections with ids and order changed by `order`
    /// (`order[new] = old`).
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len());
        let components = order.iter().map(|&i| self.components[i].clone()).collect();
        let meets = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.meets[i][j]).collect())
            .collect();
        Self {
            components,
            meets,
            d_self: self.d_self,
        }
    }

    /// Copy with component ids replaced positionally.
    pub fn relabeled(&self, ids: &[ComponentId]) -> Result<Self, ConfigError> {
        assert_eq!(ids.len(), self.len());
        let components: Vec<ComponentRecord> = self
            .components
            .iter()
            .zip(ids)
            .map(|(c, id)| ComponentRecord {
                id: id.clone(),
                ..c.clone()
            })
            .collect();
        for (i, c) in components.iter().enumerate() {
            if components[..i].iter().any(|o| o.id == c.id) {
                return Err(ConfigError::DuplicateId(c.id.clone()));
            }
        }
        Ok(Self {
            components,
            meets: self.meets.clone(),
            d_self: self.d_self,
        })
    }
}

/// The smooth fibre `f0` (self-intersection 0, multiplicity 1, degree 2).
pub fn new_smooth_fiber(d_self: Option<i64>) -> FiberConfig {
    FiberConfig::smooth(d_self)
}

pub fn validate(config: &FiberConfig) -> ValidationReport {
    config.validate()
}

pub fn intersection_matrix(config: &FiberConfig) -> IntMatrix {
    config.intersection_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2_d() -> FiberConfig {
        FiberConfig::from_parts(
            vec![
                ComponentRecord::new("f0", -2, 1, 0),
                ComponentRecord::new("e1", -2, 1, 0),
                ComponentRecord::new("e2", -1, 2, 1),
            ],
            [("f0", "e2", 1), ("e1", "e2", 1)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn smooth_fiber_is_valid() {
        let f = new_smooth_fiber(None);
        assert_eq!(f.len(), 1);
        assert_eq!(f.component(0).label(), (0, 1, 2));
        assert!(f.validate().is_valid());
        assert_eq!(f.intersection_matrix(), IntMatrix::from_rows(vec![vec![0]]));
        assert_eq!(new_smooth_fiber(Some(8)).d_self(), Some(8));
    }

    #[test]
    fn f2_d_validates() {
        assert!(f2_d().validate().is_valid());
    }

    #[test]
    fn wrong_degree_breaks_bisecant_balance() {
        let mut c = f2_d();
        c.component_mut(2).d_deg = 2;
        let report = c.validate();
        assert_eq!(
            report.violations,
            vec![InvariantViolation::BisecantBalance { sum: 4 }]
        );
        assert!(report.to_string().contains("bisecant balance"));
    }

    #[test]
    fn disjoint_components_fail_connectivity() {
        let c = FiberConfig::from_parts(
            vec![
                ComponentRecord::new("a", 0, 1, 1),
                ComponentRecord::new("b", 0, 1, 1),
            ],
            Vec::<(&str, &str, u32)>::new(),
            None,
        )
        .unwrap();
        let report = c.validate();
        assert!(report
            .violations
            .contains(&InvariantViolation::Disconnected { pieces: 2 }));
    }

    #[test]
    fn numerical_triviality_is_per_row() {
        let mut c = f2_d();
        c.component_mut(0).self_int = -3;
        let report = c.validate();
        assert_eq!(
            report.violations,
            vec![InvariantViolation::NumericalTriviality {
                id: "f0".into(),
                value: -1
            }]
        );
    }

    #[test]
    fn structural_errors() {
        let recs = || {
            vec![
                ComponentRecord::new("a", -1, 1, 1),
                ComponentRecord::new("b", -1, 1, 1),
            ]
        };
        assert!(matches!(
            FiberConfig::from_parts(recs(), [("a", "a", 1)], None),
            Err(ConfigError::SelfLoop(_))
        ));
        assert!(matches!(
            FiberConfig::from_parts(recs(), [("a", "c", 1)], None),
            Err(ConfigError::UnknownId(_))
        ));
        assert!(matches!(
            FiberConfig::from_parts(recs(), [("a", "b", 1), ("b", "a", 2)], None),
            Err(ConfigError::AsymmetricEdge { .. })
        ));
        assert!(matches!(
            FiberConfig::from_parts(recs(), [("a", "b", 0)], None),
            Err(ConfigError::NonPositiveIntersection { .. })
        ));
        let dup = vec![
            ComponentRecord::new("a", -1, 1, 1),
            ComponentRecord::new("a", -1, 1, 1),
        ];
        assert!(matches!(
            FiberConfig::from_parts(dup, [("a", "a", 1)], None),
            Err(ConfigError::DuplicateId(_))
        ));
    }

    #[test]
    fn matrix_of_f2_d() {
        let m = f2_d().intersection_matrix();
        assert_eq!(
            m,
            IntMatrix::from_rows(vec![vec![-2, 0, 1], vec![0, -2, 1], vec![1, 1, -1]])
        );
        assert_eq!(m.mul_vec(&f2_d().multiplicities()), vec![0, 0, 0]);
    }

    #[test]
    fn push_and_remove_keep_table_square() {
        let mut c = f2_d();
        let idx = c.push_component(ComponentRecord::new("x", -1, 1, 0));
        c.set_meet(idx, 0, 1);
        assert_eq!(c.meet(0, 3), 1);
        c.remove_component(1);
        assert_eq!(c.len(), 3);
        assert_eq!(c.intersection("x", "f0"), 1);
        assert_eq!(c.intersection("f0", "e2"), 1);
    }
}
