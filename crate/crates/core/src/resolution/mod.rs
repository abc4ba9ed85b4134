//! From a fibre of the smooth model to the fibre of the ruled surface.
//!
//! [`resolve`] runs the whole pipeline: subtract the base locus until every
//! degree is non-negative, collapse each connected cluster of degree-0
//! components, classify the point each cluster becomes, and read off the
//! image fibre from the components that keep positive degree.

mod report;

pub use report::{parse_report, serialize_report, ReportParseError};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fiber::{ComponentId, FiberConfig};
use crate::lattice::IntMatrix;

/// Default iteration budget per component for the base-locus fixpoint.
pub const BASE_LOCUS_ROUNDS_PER_COMPONENT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("base locus did not stabilise within {cap} subtractions")]
    BaseLocusCap { cap: usize },
    #[error("surviving components do not form a conic, two lines or a double line: {0}")]
    Shape(String),
}

/// Fixed part of the bisecant system inside the fibre, with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BaseLocus {
    // component order of the source config, counts >= 1
    entries: Vec<(ComponentId, u32)>,
}

impl BaseLocus {
    pub fn from_entries(entries: Vec<(ComponentId, u32)>) -> Self {
        Self {
            entries: entries.into_iter().filter(|(_, k)| *k > 0).collect(),
        }
    }

    pub fn entries(&self) -> &[(ComponentId, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, id: &str) -> u32 {
        self.entries
            .iter()
            .find(|(c, _)| c.as_str() == id)
            .map_or(0, |(_, k)| *k)
    }

    /// Total number of copies subtracted.
    pub fn total(&self) -> u32 {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    /// True when some component had to be subtracted more than once.
    pub fn has_repeats(&self) -> bool {
        self.entries.iter().any(|(_, k)| *k > 1)
    }

    /// Ids repeated according to their multiplicity.
    pub fn expanded(&self) -> Vec<ComponentId> {
        self.entries
            .iter()
            .flat_map(|(c, k)| std::iter::repeat_n(c.clone(), *k as usize))
            .collect()
    }
}

impl fmt::Display for BaseLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|(c, k)| {
                if *k == 1 {
                    c.to_string()
                } else {
                    format!("{k}{c}")
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// One subtraction of the base-locus fixpoint and the degrees after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLocusStep {
    pub subtracted: usize,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLocusTrace {
    pub initial: Vec<i64>,
    pub steps: Vec<BaseLocusStep>,
    pub base_locus: BaseLocus,
    pub degrees: Vec<i64>,
}

/// Base locus and reduced degrees with the default iteration cap.
pub fn base_locus(config: &FiberConfig) -> Result<(BaseLocus, Vec<i64>), ResolutionError> {
    let trace = base_locus_trace(config, BASE_LOCUS_ROUNDS_PER_COMPONENT * config.len())?;
    Ok((trace.base_locus, trace.degrees))
}

/// Repeatedly subtracts the first component of negative degree, updating
/// `d_j -= C·C_j` (with `C·C = C²`), until all degrees are `>= 0`.
pub fn base_locus_trace(
    config: &FiberConfig,
    cap: usize,
) -> Result<BaseLocusTrace, ResolutionError> {
    let matrix = config.intersection_matrix();
    let initial = config.degrees();
    let mut degrees = initial.clone();
    let mut counts = vec![0u32; config.len()];
    let mut steps = Vec::new();
    while let Some(c) = degrees.iter().position(|&d| d < 0) {
        if steps.len() == cap {
            return Err(ResolutionError::BaseLocusCap { cap });
        }
        for (j, d) in degrees.iter_mut().enumerate() {
            *d -= matrix.get(c, j);
        }
        counts[c] += 1;
        steps.push(BaseLocusStep {
            subtracted: c,
            degrees: degrees.clone(),
        });
    }
    let base_locus = BaseLocus::from_entries(
        config
            .components()
            .iter()
            .zip(counts)
            .map(|(c, k)| (c.id.clone(), k))
            .collect(),
    );
    Ok(BaseLocusTrace {
        initial,
        steps,
        base_locus,
        degrees,
    })
}

/// Connected pieces of the degree-0 components, ordered by smallest index.
pub fn contraction_clusters(config: &FiberConfig, degrees: &[i64]) -> Vec<Vec<usize>> {
    let zero: Vec<usize> = (0..config.len()).filter(|&i| degrees[i] == 0).collect();
    config.connected_pieces(&zero)
}

/// What a contracted cluster becomes on the image surface.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingularityType {
    SmoothPoint,
    A(u32),
    D(u32),
    /// Not a rational double point of type A or D; carries the reason.
    Violation(String),
}

impl SingularityType {
    pub fn is_singular(&self) -> bool {
        !matches!(self, SingularityType::SmoothPoint)
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::SmoothPoint => f.write_str("smooth"),
            SingularityType::A(n) => write!(f, "A({n})"),
            SingularityType::D(n) => write!(f, "D({n})"),
            SingularityType::Violation(why) => write!(f, "violation({why})"),
        }
    }
}

/// Contracts (−1)-curves inside the cluster until none is left, then
/// recognises the remaining (−2)-configuration by its dual graph.
pub fn classify_cluster(config: &FiberConfig, cluster: &[usize]) -> SingularityType {
    let mut selfs: Vec<i64> = cluster
        .iter()
        .map(|&i| config.component(i).self_int)
        .collect();
    let mut meets: Vec<Vec<i64>> = cluster
        .iter()
        .map(|&i| {
            cluster
                .iter()
                .map(|&j| {
                    if i == j {
                        0
                    } else {
                        i64::from(config.meet(i, j))
                    }
                })
                .collect()
        })
        .collect();
    let mut alive: Vec<usize> = (0..cluster.len()).collect();

    while let Some(pos) = alive.iter().position(|&v| selfs[v] == -1) {
        let e = alive.remove(pos);
        for (a, &c) in alive.iter().enumerate() {
            let kc = meets[c][e];
            if kc == 0 {
                continue;
            }
            selfs[c] += kc * kc;
            for &o in &alive[a + 1..] {
                let ko = meets[o][e];
                meets[c][o] += kc * ko;
                meets[o][c] += kc * ko;
            }
        }
    }

    if alive.is_empty() {
        return SingularityType::SmoothPoint;
    }
    if let Some(&v) = alive.iter().find(|&&v| selfs[v] >= 0) {
        return SingularityType::Violation(format!(
            "component `{}` has self-intersection {} after contraction",
            config.component(cluster[v]).id,
            selfs[v]
        ));
    }
    if let Some(&v) = alive.iter().find(|&&v| selfs[v] != -2) {
        return SingularityType::Violation(format!(
            "component `{}` has self-intersection {} after contraction",
            config.component(cluster[v]).id,
            selfs[v]
        ));
    }

    let size = alive.len();
    let mut matrix = IntMatrix::zeros(size);
    for (a, &u) in alive.iter().enumerate() {
        for (b, &v) in alive.iter().enumerate() {
            matrix.set(a, b, if a == b { selfs[u] } else { meets[u][v] });
        }
    }
    if !matrix.is_negative_definite() {
        return SingularityType::Violation("intersection form is not negative definite".into());
    }
    match dual_graph_type(&matrix) {
        Ok(t) => t,
        Err(why) => SingularityType::Violation(why),
    }
}

/// ADE recognition for a connected configuration of (−2)-curves.
fn dual_graph_type(matrix: &IntMatrix) -> Result<SingularityType, String> {
    let n = matrix.size();
    let mut adj = vec![Vec::new(); n];
    let mut edges = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            match matrix.get(i, j) {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                    edges += 1;
                }
                k => return Err(format!("two curves meet with multiplicity {k}")),
            }
        }
    }
    if edges + 1 != n {
        return Err("dual graph is not a tree".into());
    }
    let branch_points: Vec<usize> = (0..n).filter(|&v| adj[v].len() > 2).collect();
    let count = n as u32;
    match branch_points.as_slice() {
        [] => Ok(SingularityType::A(count)),
        [centre] if adj[*centre].len() == 3 => {
            let mut arms: Vec<usize> = adj[*centre]
                .iter()
                .map(|&start| arm_length(&adj, *centre, start))
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(SingularityType::D(count)),
                [1, 2, 2] => Err("dual graph of type E6".into()),
                [1, 2, 3] => Err("dual graph of type E7".into()),
                [1, 2, 4] => Err("dual graph of type E8".into()),
                other => Err(format!("star-shaped dual graph with arms {other:?}")),
            }
        }
        _ => Err("dual graph has a vertex of degree > 3 or several branch points".into()),
    }
}

fn arm_length(adj: &[Vec<usize>], centre: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (centre, start, 1);
    while let Some(&next) = adj[cur].iter().find(|&&u| u != prev) {
        prev = cur;
        cur = next;
        len += 1;
    }
    len
}

/// Image of the fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ImageShape {
    SmoothConic,
    TwoDistinctLines,
    DoubleLine,
}

impl fmt::Display for ImageShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImageShape::SmoothConic => "SmoothConic",
            ImageShape::TwoDistinctLines => "TwoDistinctLines",
            ImageShape::DoubleLine => "DoubleLine",
        })
    }
}

/// Where on the image fibre a singular point sits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attachment {
    /// The meeting point of two distinct lines.
    CommonPoint,
    /// A point of one of two distinct lines, away from the other.
    OnLine(ComponentId),
    OnDoubleLine,
    OnConic,
}

impl Attachment {
    /// Attachment with component names dropped, for comparing reports of
    /// differently labelled fibres.
    pub fn class(&self) -> &'static str {
        match self {
            Attachment::CommonPoint => "common_point",
            Attachment::OnLine(_) => "line",
            Attachment::OnDoubleLine => "double_line",
            Attachment::OnConic => "conic",
        }
    }
}

impl fmt::Display for Attachment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attachment::OnLine(id) => write!(f, "line:{id}"),
            other => f.write_str(other.class()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocatedSingularity {
    pub kind: SingularityType,
    pub attachment: Attachment,
    /// Components of the source fibre collapsed to this point.
    pub cluster: Vec<ComponentId>,
}

/// Result of [`resolve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub image_shape: ImageShape,
    /// Components of positive reduced degree, in source order.
    pub survivors: Vec<ComponentId>,
    pub singularities: Vec<LocatedSingularity>,
    pub base_locus: BaseLocus,
    pub contracted_smooth_points: usize,
}

/// Shape plus singularity types and attachment classes, sorted.
/// Two fibres with the same signature have the same image fibre.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReportSignature {
    pub shape: ImageShape,
    pub singularities: Vec<(SingularityType, &'static str)>,
}

impl fmt::Display for ReportSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape)?;
        if self.singularities.is_empty() {
            return f.write_str(" smooth");
        }
        for (kind, at) in &self.singularities {
            write!(f, " + {kind}@{at}")?;
        }
        Ok(())
    }
}

impl FiberReport {
    pub fn signature(&self) -> ReportSignature {
        let mut singularities: Vec<_> = self
            .singularities
            .iter()
            .map(|s| (s.kind.clone(), s.attachment.class()))
            .collect();
        singularities.sort();
        ReportSignature {
            shape: self.image_shape,
            singularities,
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &LocatedSingularity> {
        self.singularities
            .iter()
            .filter(|s| matches!(s.kind, SingularityType::Violation(_)))
    }
}

/// Full pipeline: base locus, clusters, classification, image shape.
pub fn resolve(config: &FiberConfig) -> Result<FiberReport, ResolutionError> {
    let (base_locus, degrees) = base_locus(config)?;
    let survivors: Vec<usize> = (0..config.len()).filter(|&i| degrees[i] > 0).collect();
    let shape_of = |i: usize| (config.component(i).mult, degrees[i]);
    let image_shape = match survivors.as_slice() {
        [s] if shape_of(*s) == (1, 2) => ImageShape::SmoothConic,
        [s] if shape_of(*s) == (2, 1) => ImageShape::DoubleLine,
        [a, b] if shape_of(*a) == (1, 1) && shape_of(*b) == (1, 1) => ImageShape::TwoDistinctLines,
        _ => {
            let desc: Vec<String> = survivors
                .iter()
                .map(|&i| {
                    let (m, d) = shape_of(i);
                    format!("{} (mult {m}, degree {d})", config.component(i).id)
                })
                .collect();
            return Err(ResolutionError::Shape(if desc.is_empty() {
                "no component keeps positive degree".into()
            } else {
                desc.join(", ")
            }));
        }
    };

    let mut singularities = Vec::new();
    let mut contracted_smooth_points = 0;
    for cluster in contraction_clusters(config, &degrees) {
        let kind = classify_cluster(config, &cluster);
        if !kind.is_singular() {
            contracted_smooth_points += 1;
            continue;
        }
        let attachment = match image_shape {
            ImageShape::SmoothConic => Attachment::OnConic,
            ImageShape::DoubleLine => Attachment::OnDoubleLine,
            ImageShape::TwoDistinctLines => {
                let touching: Vec<usize> = survivors
                    .iter()
                    .copied()
                    .filter(|&s| cluster.iter().any(|&c| config.meet(c, s) > 0))
                    .collect();
                match touching.as_slice() {
                    [only] => Attachment::OnLine(config.component(*only).id.clone()),
                    _ => Attachment::CommonPoint,
                }
            }
        };
        singularities.push(LocatedSingularity {
            kind,
            attachment,
            cluster: cluster
                .iter()
                .map(|&i| config.component(i).id.clone())
                .collect(),
        });
    }

    Ok(FiberReport {
        image_shape,
        survivors: survivors
            .iter()
            .map(|&i| config.component(i).id.clone())
            .collect(),
        singularities,
        base_locus,
        contracted_smooth_points,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no main fibre produces `{0}`")]
pub struct LevelError(pub String);

/// Level of the embedded fibre described by `report`: the level of the
/// main fibre producing the same image fibre and singularities.
pub fn embedded_level(report: &FiberReport) -> Result<usize, LevelError> {
    use SingularityType::{A, D};
    let sig = report.signature();
    let level = match (sig.shape, sig.singularities.as_slice()) {
        (ImageShape::SmoothConic, []) => Some(0),
        (ImageShape::TwoDistinctLines, []) => Some(1),
        (ImageShape::TwoDistinctLines, [(A(k), "common_point")]) => Some(*k as usize + 1),
        (ImageShape::DoubleLine, [(A(1), _), (A(1), _)]) => Some(2),
        (ImageShape::DoubleLine, [(A(3), _)]) => Some(3),
        (ImageShape::DoubleLine, [(D(k), _)]) if *k >= 4 => Some(*k as usize),
        _ => None,
    };
    level.ok_or_else(|| LevelError(sig.to_string()))
}
