//! Main fibres, exhaustive blow-up enumeration and the machine check of the
//! classification.
//!
//! [`enumerate_levels`] walks every blow-up sequence breadth first from the
//! smooth fibre, keeping one representative per isomorphism class at each
//! level. Centres related by an automorphism of the parent give isomorphic
//! children, so by default only one centre per orbit is expanded and the
//! orbit size is carried as a weight; raw sequence counts are the same
//! either way.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fiber::{
    automorphisms, canonical_form, serialize, CanonicalKey, ComponentId, ComponentRecord,
    FiberConfig, FiberKind,
};
use crate::resolution::{embedded_level, resolve, serialize_report, ImageShape, ReportSignature};
use crate::script::BlowUpScript;
use crate::transform::{blow_up, BlowUpCenter};

pub const DEFAULT_LEVEL_CAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("main fibres of type D start at level 2, got level {0}")]
    DLevel(usize),
    #[error("level {level} is above the enumeration cap of {cap}")]
    LevelCap { level: usize, cap: usize },
}

fn component_id(index: usize) -> ComponentId {
    if index == 0 {
        ComponentId::from("f0")
    } else {
        ComponentId::new(format!("e{index}"))
    }
}

/// The main fibre of the given kind and level, components `f0, e1, ..., en`.
///
/// Type A is the chain `f0 - e1 - ... - en` with self-intersections
/// `(-1, -2, ..., -2, -1)` and degrees `(1, 0, ..., 0, 1)`; level 0 is the
/// smooth fibre. Type D has `f0` and `e1` (both `-2`, multiplicity 1)
/// meeting `e2`, followed by the multiplicity-2 chain `e2 - ... - en` ending
/// in the only component of positive degree.
pub fn main_fiber(kind: FiberKind, level: usize) -> Result<FiberConfig, EnumerationError> {
    let n = level;
    let (components, edges): (Vec<ComponentRecord>, Vec<(ComponentId, ComponentId, u32)>) =
        match kind {
            FiberKind::A if n == 0 => return Ok(FiberConfig::smooth(None)),
            FiberKind::A => {
                let comps = (0..=n)
                    .map(|i| {
                        if i == 0 || i == n {
                            ComponentRecord::new(component_id(i), -1, 1, 1)
                        } else {
                            ComponentRecord::new(component_id(i), -2, 1, 0)
                        }
                    })
                    .collect();
                let edges = (1..=n)
                    .map(|i| (component_id(i - 1), component_id(i), 1))
                    .collect();
                (comps, edges)
            }
            FiberKind::D => {
                if n < 2 {
                    return Err(EnumerationError::DLevel(n));
                }
                let mut comps = vec![
                    ComponentRecord::new(component_id(0), -2, 1, 0),
                    ComponentRecord::new(component_id(1), -2, 1, 0),
                ];
                for i in 2..=n {
                    let (s, d) = if i == n { (-1, 1) } else { (-2, 0) };
                    comps.push(ComponentRecord::new(component_id(i), s, 2, d));
                }
                let mut edges = vec![
                    (component_id(0), component_id(2), 1),
                    (component_id(1), component_id(2), 1),
                ];
                edges.extend((3..=n).map(|i| (component_id(i - 1), component_id(i), 1)));
                (comps, edges)
            }
        };
    Ok(FiberConfig::from_parts(components, edges, None).expect("main fibres are well formed"))
}

/// The blow-up sequence from the smooth fibre that produces
/// [`main_fiber`]`(kind, level)` with the same component names.
pub fn generating_script(kind: FiberKind, level: usize) -> Result<BlowUpScript, EnumerationError> {
    let mut script = BlowUpScript::default();
    match kind {
        FiberKind::A => {
            for i in 0..level {
                script.push(BlowUpCenter::SmoothPoint(component_id(i)));
            }
        }
        FiberKind::D => {
            if level < 2 {
                return Err(EnumerationError::DLevel(level));
            }
            script.push(BlowUpCenter::smooth("f0"));
            script.push(BlowUpCenter::node("f0", "e1"));
            for i in 2..level {
                script.push(BlowUpCenter::SmoothPoint(component_id(i)));
            }
        }
    }
    Ok(script)
}

/// Canonical keys of the main fibres of one level.
#[derive(Clone, Debug)]
pub struct MainKeys {
    pub level: usize,
    pub a: CanonicalKey,
    pub d: Option<CanonicalKey>,
}

impl MainKeys {
    pub fn for_level(level: usize) -> Self {
        let key = |kind| {
            main_fiber(kind, level)
                .ok()
                .map(|c| canonical_form(&c).expect("main fibres are small"))
        };
        Self {
            level,
            a: key(FiberKind::A).expect("type A exists at every level"),
            d: key(FiberKind::D),
        }
    }

    pub fn classify(&self, key: &CanonicalKey) -> Option<FiberKind> {
        if *key == self.a {
            Some(FiberKind::A)
        } else if self.d.as_ref() == Some(key) {
            Some(FiberKind::D)
        } else {
            None
        }
    }
}

/// `Some((kind, level))` when the configuration is isomorphic to a main fibre.
pub fn main_kind(config: &FiberConfig) -> Option<(FiberKind, usize)> {
    let key = canonical_form(config).ok()?;
    MainKeys::for_level(config.level())
        .classify(&key)
        .map(|k| (k, config.level()))
}

pub fn is_main(config: &FiberConfig) -> bool {
    main_kind(config).is_some()
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub level_cap: usize,
    /// When false, only centres allowed for main fibres are used: from
    /// level 3 on, centres must avoid components of degree `<= 0`.
    pub include_non_main: bool,
    pub quotient_automorphisms: bool,
    pub parallel: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            level_cap: DEFAULT_LEVEL_CAP,
            include_non_main: true,
            quotient_automorphisms: true,
            parallel: true,
        }
    }
}

/// One isomorphism class found by the enumeration.
#[derive(Clone, Debug)]
pub struct EnumeratedConfig {
    pub key: CanonicalKey,
    /// The configuration produced by replaying `witness`.
    pub config: FiberConfig,
    pub witness: BlowUpScript,
    /// Number of distinct centre sequences reaching this class.
    pub raw_sequences: u64,
}

/// All classes of one level, sorted by key.
#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub level: usize,
    pub configs: Vec<EnumeratedConfig>,
    pub raw_count: u64,
}

impl EnumerationResult {
    pub fn deduped_count(&self) -> usize {
        self.configs.len()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.configs.binary_search_by(|c| c.key.cmp(key)).is_ok()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&EnumeratedConfig> {
        self.configs
            .binary_search_by(|c| c.key.cmp(key))
            .ok()
            .map(|i| &self.configs[i])
    }

    /// JSON manifest: one entry per class with key, witness and report.
    pub fn manifest(&self) -> String {
        let entries: Vec<ManifestEntry> = self
            .configs
            .iter()
            .enumerate()
            .map(|(i, c)| ManifestEntry::new(self.level, i, c))
            .collect();
        let mut text = serde_json::to_string_pretty(&entries).expect("manifest serialises");
        text.push('\n');
        text
    }

    /// Writes `level<L>_<index>.json` per class plus `manifest.json`.
    pub fn export(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        for (i, c) in self.configs.iter().enumerate() {
            fs::write(dir.join(file_name(self.level, i)), serialize(&c.config))?;
        }
        fs::write(dir.join("manifest.json"), self.manifest())
    }
}

fn file_name(level: usize, index: usize) -> String {
    format!("level{level}_{index:04}.json")
}

#[derive(Serialize)]
struct ManifestEntry {
    level: usize,
    key: String,
    file: String,
    witness: String,
    raw_sequences: u64,
    report: serde_json::Value,
}

impl ManifestEntry {
    fn new(level: usize, index: usize, c: &EnumeratedConfig) -> Self {
        let report = match resolve(&c.config) {
            Ok(r) => serde_json::from_str(&serialize_report(&r)).expect("report is JSON"),
            Err(e) => serde_json::Value::String(e.to_string()),
        };
        Self {
            level,
            key: c.key.to_hex(),
            file: file_name(level, index),
            witness: c.witness.to_string(),
            raw_sequences: c.raw_sequences,
            report,
        }
    }
}

/// Every centre of `config`: one smooth point per component, then one node
/// per intersecting pair, in index order.
pub fn all_centers(config: &FiberConfig) -> Vec<BlowUpCenter> {
    let mut centers: Vec<BlowUpCenter> = config
        .components()
        .iter()
        .map(|c| BlowUpCenter::SmoothPoint(c.id.clone()))
        .collect();
    centers.extend(config.edges().filter(|e| e.2 == 1).map(|(i, j, _)| {
        BlowUpCenter::Node(
            config.component(i).id.clone(),
            config.component(j).id.clone(),
        )
    }));
    centers
}

fn center_indices(config: &FiberConfig, center: &BlowUpCenter) -> Vec<usize> {
    let idx = |id: &ComponentId| config.index_of(id.as_str()).expect("centre of this config");
    match center {
        BlowUpCenter::SmoothPoint(c) => vec![idx(c)],
        BlowUpCenter::Node(a, b) => vec![idx(a), idx(b)],
    }
}

fn main_admissible(config: &FiberConfig, center: &BlowUpCenter) -> bool {
    center_indices(config, center)
        .into_iter()
        .all(|i| config.component(i).d_deg > 0)
}

/// Centres with their orbit weights. Without quotienting every weight is 1.
fn weighted_centers(
    config: &FiberConfig,
    centers: Vec<BlowUpCenter>,
    quotient: bool,
) -> Vec<(BlowUpCenter, u64)> {
    if !quotient {
        return centers.into_iter().map(|c| (c, 1)).collect();
    }
    let autos = automorphisms(config).expect("enumerated configs are small");
    let as_set = |c: &BlowUpCenter| {
        let mut v = center_indices(config, c);
        v.sort_unstable();
        v
    };
    let sets: Vec<Vec<usize>> = centers.iter().map(as_set).collect();
    let mut orbit_of: Vec<Option<usize>> = vec![None; centers.len()];
    let mut out: Vec<(BlowUpCenter, u64)> = Vec::new();
    for i in 0..centers.len() {
        if orbit_of[i].is_some() {
            continue;
        }
        let slot = out.len();
        out.push((centers[i].clone(), 0));
        for p in &autos {
            let mut image: Vec<usize> = sets[i].iter().map(|&v| p[v]).collect();
            image.sort_unstable();
            if let Some(j) = sets.iter().position(|s| *s == image) {
                if orbit_of[j].is_none() {
                    orbit_of[j] = Some(slot);
                    out[slot].1 += 1;
                }
            }
        }
    }
    out
}

/// Levels `0..=level`, each deduplicated by canonical form.
pub fn enumerate_levels(
    level: usize,
    options: &EnumerationOptions,
) -> Result<Vec<EnumerationResult>, EnumerationError> {
    if level > options.level_cap {
        return Err(EnumerationError::LevelCap {
            level,
            cap: options.level_cap,
        });
    }
    let smooth = FiberConfig::smooth(None);
    let mut results = vec![EnumerationResult {
        level: 0,
        configs: vec![EnumeratedConfig {
            key: canonical_form(&smooth).expect("one component"),
            config: smooth,
            witness: BlowUpScript::default(),
            raw_sequences: 1,
        }],
        raw_count: 1,
    }];

    for next_level in 1..=level {
        let parents = &results.last().expect("level 0 present").configs;
        let expand =
            |parent: &EnumeratedConfig| -> Vec<(CanonicalKey, FiberConfig, BlowUpScript, u64)> {
                let mut centers = all_centers(&parent.config);
                if !options.include_non_main && next_level >= 3 {
                    centers.retain(|c| main_admissible(&parent.config, c));
                }
                weighted_centers(&parent.config, centers, options.quotient_automorphisms)
                    .into_iter()
                    .map(|(center, weight)| {
                        let child = blow_up(&parent.config, &center).expect("centres are valid");
                        let key = canonical_form(&child).expect("enumerated configs are small");
                        let mut witness = parent.witness.clone();
                        witness.push(center);
                        (key, child, witness, weight * parent.raw_sequences)
                    })
                    .collect()
            };
        let children: Vec<Vec<_>> = if options.parallel {
            parents.par_iter().map(expand).collect()
        } else {
            parents.iter().map(expand).collect()
        };

        let mut merged: BTreeMap<CanonicalKey, EnumeratedConfig> = BTreeMap::new();
        let mut raw_count = 0u64;
        for (key, config, witness, weight) in children.into_iter().flatten() {
            raw_count += weight;
            merged
                .entry(key.clone())
                .and_modify(|e| e.raw_sequences += weight)
                .or_insert(EnumeratedConfig {
                    key,
                    config,
                    witness,
                    raw_sequences: weight,
                });
        }
        results.push(EnumerationResult {
            level: next_level,
            configs: merged.into_values().collect(),
            raw_count,
        });
    }
    Ok(results)
}

/// Classes of exactly `level` blow-ups, with the default options.
pub fn enumerate(
    level: usize,
    include_non_main: bool,
) -> Result<EnumerationResult, EnumerationError> {
    let options = EnumerationOptions {
        include_non_main,
        ..EnumerationOptions::default()
    };
    Ok(enumerate_levels(level, &options)?
        .pop()
        .expect("at least level 0"))
}

/// Outcome counts for one level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelTally {
    pub level: usize,
    pub configs: usize,
    pub main: usize,
    pub non_main: usize,
    /// Report signature (as text) to number of classes.
    pub outcomes: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremFailure {
    pub level: usize,
    pub key: String,
    pub witness: String,
    pub reason: String,
}

/// Results of [`verify_classification`]. Both failure lists should be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoremReport {
    pub levels: Vec<LevelTally>,
    /// Singularities outside A/D, reports outside the table of possible
    /// fibres, or main fibres whose embedded level is not their own level.
    pub violations: Vec<TheoremFailure>,
    /// Non-main fibres that do not reduce to a main fibre of lower level.
    pub claim_failures: Vec<TheoremFailure>,
}

impl TheoremReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.claim_failures.is_empty()
    }
}

fn main_signature(shape: ImageShape, level: usize) -> Option<ReportSignature> {
    let kind = match shape {
        ImageShape::DoubleLine => FiberKind::D,
        _ => FiberKind::A,
    };
    let config = main_fiber(kind, level).ok()?;
    resolve(&config).ok().map(|r| r.signature())
}

/// Resolves every class of levels `1..=max_level` and checks that
/// (a) every singular point is of type A or D, (b) every report is one of
/// the fibres produced by main fibres, and (c) every non-main fibre of
/// level `n` gives the same report as a main fibre of level `< n`.
pub fn verify_classification(max_level: usize) -> Result<TheoremReport, EnumerationError> {
    verify_with(max_level, &EnumerationOptions::default())
}

pub fn verify_with(
    max_level: usize,
    options: &EnumerationOptions,
) -> Result<TheoremReport, EnumerationError> {
    let levels = enumerate_levels(max_level, options)?;
    let mut report = TheoremReport::default();
    for result in levels.iter().skip(1) {
        let n = result.level;
        let mains = MainKeys::for_level(n);
        let mut tally = LevelTally {
            level: n,
            configs: result.configs.len(),
            ..LevelTally::default()
        };
        for entry in &result.configs {
            let fail = |reason: String| TheoremFailure {
                level: n,
                key: entry.key.to_hex(),
                witness: entry.witness.to_string(),
                reason,
            };
            let is_main = mains.classify(&entry.key).is_some();
            if is_main {
                tally.main += 1;
            } else {
                tally.non_main += 1;
            }
            let fiber_report = match resolve(&entry.config) {
                Ok(r) => r,
                Err(e) => {
                    *tally.outcomes.entry("error".into()).or_default() += 1;
                    report.violations.push(fail(e.to_string()));
                    continue;
                }
            };
            let signature = fiber_report.signature();
            *tally.outcomes.entry(signature.to_string()).or_default() += 1;
            for v in fiber_report.violations() {
                report
                    .violations
                    .push(fail(format!("cluster {:?}: {}", v.cluster, v.kind)));
            }
            let m = match embedded_level(&fiber_report) {
                Ok(m) => m,
                Err(e) => {
                    report.violations.push(fail(e.to_string()));
                    continue;
                }
            };
            if is_main {
                if m != n {
                    report
                        .violations
                        .push(fail(format!("main fibre has embedded level {m}")));
                }
                continue;
            }
            if m >= n {
                report
                    .claim_failures
                    .push(fail(format!("embedded level {m} is not below {n}")));
            } else if main_signature(signature.shape, m).as_ref() != Some(&signature) {
                report.claim_failures.push(fail(format!(
                    "`{signature}` differs from the main fibre of level {m}"
                )));
            }
        }
        report.levels.push(tally);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::apply_script;

    #[test]
    fn main_fibre_shapes() {
        assert_eq!(
            main_fiber(FiberKind::A, 1).unwrap(),
            blow_up(&FiberConfig::smooth(None), &BlowUpCenter::smooth("f0")).unwrap()
        );
        let a3 = main_fiber(FiberKind::A, 3).unwrap();
        assert_eq!(a3.intersection_matrix().diagonal(), vec![-1, -2, -2, -1]);
        assert_eq!(a3.degrees(), vec![1, 0, 0, 1]);
        assert_eq!(a3.multiplicities(), vec![1, 1, 1, 1]);
        let d4 = main_fiber(FiberKind::D, 4).unwrap();
        assert_eq!(d4.multiplicities(), vec![1, 1, 2, 2, 2]);
        assert_eq!(d4.degrees(), vec![0, 0, 0, 0, 1]);
        assert_eq!(
            d4.intersection_matrix().diagonal(),
            vec![-2, -2, -2, -2, -1]
        );
        assert_eq!(
            main_fiber(FiberKind::D, 1),
            Err(EnumerationError::DLevel(1))
        );
    }

    #[test]
    fn generating_scripts_reproduce_main_fibres() {
        for n in 0..=10 {
            let s = generating_script(FiberKind::A, n).unwrap();
            let c = apply_script(&FiberConfig::smooth(None), &s).unwrap();
            assert_eq!(c, main_fiber(FiberKind::A, n).unwrap(), "A{n}");
        }
        for n in 2..=10 {
            let s = generating_script(FiberKind::D, n).unwrap();
            let c = apply_script(&FiberConfig::smooth(None), &s).unwrap();
            assert_eq!(c, main_fiber(FiberKind::D, n).unwrap(), "D{n}");
        }
    }

    #[test]
    fn small_levels() {
        assert_eq!(enumerate(1, true).unwrap().deduped_count(), 1);
        let two = enumerate(2, true).unwrap();
        assert_eq!(two.deduped_count(), 2);
        assert_eq!(two.raw_count, 3);
        for kind in [FiberKind::A, FiberKind::D] {
            let key = canonical_form(&main_fiber(kind, 2).unwrap()).unwrap();
            assert!(two.contains(&key));
        }
    }

    #[test]
    fn restricted_enumeration_finds_only_main_fibres() {
        let options = EnumerationOptions {
            include_non_main: false,
            ..EnumerationOptions::default()
        };
        for result in enumerate_levels(6, &options).unwrap().iter().skip(2) {
            let mains = MainKeys::for_level(result.level);
            assert_eq!(result.deduped_count(), 2, "level {}", result.level);
            assert!(result
                .configs
                .iter()
                .all(|c| mains.classify(&c.key).is_some()));
        }
    }

    #[test]
    fn level_cap() {
        assert_eq!(
            enumerate(7, true).unwrap_err(),
            EnumerationError::LevelCap { level: 7, cap: 6 }
        );
    }

    #[test]
    fn main_kind_detection() {
        let d5 = main_fiber(FiberKind::D, 5).unwrap();
        assert_eq!(main_kind(&d5), Some((FiberKind::D, 5)));
        let reversed: Vec<usize> = (0..d5.len()).rev().collect();
        assert_eq!(main_kind(&d5.permuted(&reversed)), Some((FiberKind::D, 5)));
        let non_main = blow_up(
            &main_fiber(FiberKind::A, 2).unwrap(),
            &BlowUpCenter::smooth("e1"),
        )
        .unwrap();
        assert_eq!(main_kind(&non_main), None);
    }

    #[test]
    fn level_two_tallies() {
        let report = verify_classification(2).unwrap();
        assert!(report.is_clean());
        let one: Vec<_> = report.levels[0].outcomes.keys().cloned().collect();
        assert_eq!(one, vec!["TwoDistinctLines smooth".to_string()]);
        let two: Vec<_> = report.levels[1].outcomes.keys().cloned().collect();
        assert_eq!(
            two,
            vec![
                "DoubleLine + A(1)@double_line + A(1)@double_line".to_string(),
                "TwoDistinctLines + A(1)@common_point".to_string(),
            ]
        );
    }

    #[test]
    fn export_writes_manifest() {
        let dir = std::env::temp_dir().join(format!("conic-fibers-export-{}", std::process::id()));
        let result = enumerate(3, true).unwrap();
        result.export(&dir).unwrap();
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest.as_array().unwrap().len(), result.deduped_count());
        let first = &manifest[0];
        let file = first["file"].as_str().unwrap();
        let config = crate::fiber::parse(&fs::read_to_string(dir.join(file)).unwrap()).unwrap();
        assert_eq!(
            canonical_form(&config).unwrap().to_hex(),
            first["key"].as_str().unwrap()
        );
        fs::remove_dir_all(&dir).unwrap();
    }
}
