//! Geometrically ruled models of a surface with main fibres.
//!
//! A main fibre contracts to a smooth conic by successively blowing down
//! (-1)-curves. Which component survives determines the model; models
//! differ by elementary transformations. Two contraction orders with the
//! same survivor give the same model.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::main_kind;
use crate::fiber::{ComponentId, FiberConfig, FiberKind};
use crate::transform::{blow_down, TransformError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub survivor: ComponentId,
    /// Each id is a (-1)-curve at the moment it is blown down.
    pub contraction_order: Vec<ComponentId>,
    /// Elementary transformations separating this model from the reference.
    pub elm_chain_length: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("not a main fibre; models are only defined for main fibres")]
    NotMain,
}

/// Main fibres of one surface, as `(kind, level)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceLevel {
    pub fibers: Vec<(FiberKind, usize)>,
}

impl SurfaceLevel {
    pub fn new(fibers: Vec<(FiberKind, usize)>) -> Self {
        Self { fibers }
    }

    pub fn from_fibers(configs: &[FiberConfig]) -> Result<Self, ModelError> {
        configs
            .iter()
            .map(|c| main_kind(c).ok_or(ModelError::NotMain))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    /// Sum of the fibre levels.
    pub fn total(&self) -> usize {
        self.fibers.iter().map(|(_, l)| l).sum()
    }
}

/// Replays the contraction order of `model` on `config`.
pub fn replay(
    config: &FiberConfig,
    model: &ModelDescriptor,
) -> Result<FiberConfig, TransformError> {
    model
        .contraction_order
        .iter()
        .try_fold(config.clone(), |acc, id| blow_down(&acc, id.as_str()))
}

fn is_reference_fibre(c: &FiberConfig) -> bool {
    c.len() == 1 && c.component(0).self_int == 0 && c.component(0).mult == 1
}

/// Depth-first search over sets of contracted components. The configuration
/// after contracting a set does not depend on the order, so failed sets are
/// memoised by bitmask.
fn contract_to(
    config: &FiberConfig,
    survivor: &ComponentId,
    removed: u64,
    original: &FiberConfig,
    failed: &mut HashSet<u64>,
    order: &mut Vec<ComponentId>,
) -> bool {
    if config.len() == 1 {
        return is_reference_fibre(config);
    }
    if failed.contains(&removed) {
        return false;
    }
    for c in config.components() {
        if c.self_int != -1 || c.id == *survivor {
            continue;
        }
        let Ok(next) = blow_down(config, c.id.as_str()) else {
            continue;
        };
        let bit = 1u64
            << original
                .index_of(c.id.as_str())
                .expect("original component");
        order.push(c.id.clone());
        if contract_to(&next, survivor, removed | bit, original, failed, order) {
            return true;
        }
        order.pop();
    }
    failed.insert(removed);
    false
}

fn distance(config: &FiberConfig, from: usize, to: usize) -> usize {
    let mut dist = vec![usize::MAX; config.len()];
    let mut queue = std::collections::VecDeque::from([from]);
    dist[from] = 0;
    while let Some(i) = queue.pop_front() {
        for j in config.neighbors(i) {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    dist[to]
}

/// All geometrically ruled models reached from a main fibre, one per
/// surviving component, in component order.
///
/// The reference model keeps `components[0]` when that component can
/// survive, else the first component that can. For type A the elm chain
/// length is the distance along the chain from the reference; for type D the
/// two models differ by one elementary transformation.
pub fn grc_models(config: &FiberConfig) -> Result<Vec<ModelDescriptor>, ModelError> {
    let (kind, _) = main_kind(config).ok_or(ModelError::NotMain)?;
    assert!(
        config.len() <= 64,
        "bitmask memo holds at most 64 components"
    );
    let found: Vec<(usize, Vec<ComponentId>)> = (0..config.len())
        .filter_map(|s| {
            let survivor = &config.component(s).id;
            let mut order = Vec::new();
            contract_to(config, survivor, 0, config, &mut HashSet::new(), &mut order)
                .then_some((s, order))
        })
        .collect();
    let Some(&(reference, _)) = found.first() else {
        return Ok(Vec::new());
    };
    Ok(found
        .into_iter()
        .map(|(s, order)| ModelDescriptor {
            survivor: config.component(s).id.clone(),
            contraction_order: order,
            elm_chain_length: match kind {
                FiberKind::A => distance(config, reference, s),
                FiberKind::D => usize::from(s != reference),
            },
        })
        .collect())
}

/// Number of models of a surface: the product of `l + 1` over type A fibres
/// of level `l` and 2 over type D fibres.
pub fn count_models(surface: &SurfaceLevel) -> u128 {
    surface
        .fibers
        .iter()
        .map(|&(kind, l)| match kind {
            FiberKind::A => l as u128 + 1,
            FiberKind::D => 2,
        })
        .product()
}

/// Degree of the image surface, `d - L`, for a surface whose degenerate
/// fibres are all main.
pub fn degree_of_image(d_self_initial: i64, surface: &SurfaceLevel) -> i64 {
    d_self_initial - surface.total() as i64
}

pub fn serialize_models(models: &[ModelDescriptor]) -> String {
    let mut text = serde_json::to_string_pretty(models).expect("models serialise");
    text.push('\n');
    text
}

pub fn parse_models(text: &str) -> Result<Vec<ModelDescriptor>, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::main_fiber;
    use crate::transform::{blow_up, BlowUpCenter};

    #[test]
    fn a2_has_three_models() {
        let models = grc_models(&main_fiber(FiberKind::A, 2).unwrap()).unwrap();
        let survivors: Vec<&str> = models.iter().map(|m| m.survivor.as_str()).collect();
        assert_eq!(survivors, vec!["f0", "e1", "e2"]);
        let lengths: Vec<usize> = models.iter().map(|m| m.elm_chain_length).collect();
        assert_eq!(lengths, vec![0, 1, 2]);
    }

    #[test]
    fn d_models_keep_reduced_components() {
        for n in 2..=6 {
            let f = main_fiber(FiberKind::D, n).unwrap();
            let models = grc_models(&f).unwrap();
            let survivors: Vec<&str> = models.iter().map(|m| m.survivor.as_str()).collect();
            assert_eq!(survivors, vec!["f0", "e1"], "D{n}");
            for m in &models {
                assert!(is_reference_fibre(&replay(&f, m).unwrap()));
            }
        }
    }

    #[test]
    fn non_main_is_rejected() {
        let f = blow_up(
            &main_fiber(FiberKind::A, 2).unwrap(),
            &BlowUpCenter::smooth("e1"),
        )
        .unwrap();
        assert_eq!(grc_models(&f), Err(ModelError::NotMain));
    }

    #[test]
    fn counts_and_degree() {
        let s = SurfaceLevel::new(vec![(FiberKind::A, 2), (FiberKind::D, 3)]);
        assert_eq!(count_models(&s), 6);
        assert_eq!(degree_of_image(10, &s), 5);
        assert_eq!(count_models(&SurfaceLevel::default()), 1);
        assert_eq!(
            degree_of_image(8, &SurfaceLevel::new(vec![(FiberKind::A, 3)])),
            5
        );
    }

    #[test]
    fn model_list_round_trip() {
        let models = grc_models(&main_fiber(FiberKind::A, 3).unwrap()).unwrap();
        let text = serialize_models(&models);
        assert!(text.contains("\"contraction_order\""));
        assert_eq!(parse_models(&text).unwrap(), models);
    }
}
