//! JSON form of [`FiberReport`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    embedded_level, Attachment, BaseLocus, FiberReport, ImageShape, LocatedSingularity,
    SingularityType,
};
use crate::fiber::ComponentId;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SingularityDoc {
    #[serde(rename = "type")]
    kind: String,
    n: u32,
    attachment: String,
    #[serde(default)]
    cluster: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    image_shape: ImageShape,
    survivors: Vec<String>,
    singularities: Vec<SingularityDoc>,
    base_locus: Vec<String>,
    /// Some component is subtracted more than once.
    #[serde(default)]
    base_locus_repeats: bool,
    contracted_smooth_points: usize,
    embedded_level: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportParseError {
    #[error("malformed report: {0}")]
    Syntax(String),
    #[error("unknown singularity type `{0}`")]
    UnknownType(String),
    #[error("unknown attachment `{0}`")]
    UnknownAttachment(String),
    #[error("base_locus_repeats is {0} but the base locus says otherwise")]
    RepeatsMismatch(bool),
    #[error("embedded_level {stated:?} does not match the singularities (computed {computed:?})")]
    LevelMismatch {
        stated: Option<usize>,
        computed: Option<usize>,
    },
}

fn to_doc(report: &FiberReport) -> ReportDoc {
    let singularities = report
        .singularities
        .iter()
        .map(|s| {
            let (kind, n, detail) = match &s.kind {
                SingularityType::SmoothPoint => ("smooth", 0, None),
                SingularityType::A(n) => ("A", *n, None),
                SingularityType::D(n) => ("D", *n, None),
                SingularityType::Violation(why) => ("violation", 0, Some(why.clone())),
            };
            SingularityDoc {
                kind: kind.to_owned(),
                n,
                attachment: s.attachment.to_string(),
                cluster: s.cluster.iter().map(|c| c.to_string()).collect(),
                detail,
            }
        })
        .collect();
    ReportDoc {
        image_shape: report.image_shape,
        survivors: report.survivors.iter().map(|c| c.to_string()).collect(),
        singularities,
        base_locus: report
            .base_locus
            .expanded()
            .into_iter()
            .map(|c| c.to_string())
            .collect(),
        base_locus_repeats: report.base_locus.has_repeats(),
        contracted_smooth_points: report.contracted_smooth_points,
        embedded_level: embedded_level(report).ok(),
    }
}

/// Pretty-printed JSON, newline terminated. `embedded_level` is `null` when
/// the report matches no main fibre.
pub fn serialize_report(report: &FiberReport) -> String {
    let mut text = serde_json::to_string_pretty(&to_doc(report)).expect("reports serialise");
    text.push('\n');
    text
}

pub fn parse_report(text: &str) -> Result<FiberReport, ReportParseError> {
    let doc: ReportDoc =
        serde_json::from_str(text).map_err(|e| ReportParseError::Syntax(e.to_string()))?;
    let mut singularities = Vec::with_capacity(doc.singularities.len());
    for s in doc.singularities {
        let kind = match s.kind.as_str() {
            "smooth" => SingularityType::SmoothPoint,
            "A" => SingularityType::A(s.n),
            "D" => SingularityType::D(s.n),
            "violation" => SingularityType::Violation(s.detail.unwrap_or_default()),
            other => return Err(ReportParseError::UnknownType(other.to_owned())),
        };
        let attachment = match s.attachment.as_str() {
            "common_point" => Attachment::CommonPoint,
            "double_line" => Attachment::OnDoubleLine,
            "conic" => Attachment::OnConic,
            other => match other.strip_prefix("line:") {
                Some(id) if !id.is_empty() => Attachment::OnLine(ComponentId::new(id)),
                _ => return Err(ReportParseError::UnknownAttachment(other.to_owned())),
            },
        };
        singularities.push(LocatedSingularity {
            kind,
            attachment,
            cluster: s.cluster.into_iter().map(ComponentId::new).collect(),
        });
    }
    let mut base: Vec<(ComponentId, u32)> = Vec::new();
    for id in doc.base_locus {
        match base.iter_mut().find(|(c, _)| c.as_str() == id) {
            Some((_, k)) => *k += 1,
            None => base.push((ComponentId::new(id), 1)),
        }
    }
    let report = FiberReport {
        image_shape: doc.image_shape,
        survivors: doc.survivors.into_iter().map(ComponentId::new).collect(),
        singularities,
        base_locus: BaseLocus::from_entries(base),
        contracted_smooth_points: doc.contracted_smooth_points,
    };
    if report.base_locus.has_repeats() != doc.base_locus_repeats {
        return Err(ReportParseError::RepeatsMismatch(doc.base_locus_repeats));
    }
    let computed = embedded_level(&report).ok();
    if computed != doc.embedded_level {
        return Err(ReportParseError::LevelMismatch {
            stated: doc.embedded_level,
            computed,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::FiberConfig;
    use crate::resolution::resolve;
    use crate::script::{apply_script, BlowUpScript};

    fn report_for(script: &str) -> FiberReport {
        let s: BlowUpScript = script.parse().unwrap();
        resolve(&apply_script(&FiberConfig::smooth(None), &s).unwrap()).unwrap()
    }

    #[test]
    fn round_trip() {
        for script in [
            "smooth f0\nsmooth e1\nsmooth e2\n",
            "smooth f0\nnode f0 e1\n",
            "smooth f0\nsmooth e1\nnode e1 e2\n",
        ] {
            let r = report_for(script);
            let text = serialize_report(&r);
            assert_eq!(parse_report(&text).unwrap(), r);
        }
    }

    #[test]
    fn fields() {
        let text = serialize_report(&report_for("smooth f0\nsmooth e1\nsmooth e2\n"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["image_shape"], "TwoDistinctLines");
        assert_eq!(v["singularities"][0]["type"], "A");
        assert_eq!(v["singularities"][0]["n"], 2);
        assert_eq!(v["singularities"][0]["attachment"], "common_point");
        assert_eq!(v["embedded_level"], 3);
        assert_eq!(v["base_locus_repeats"], false);
    }

    #[test]
    fn repeated_base_components_are_flagged() {
        let r = report_for("smooth f0\nnode f0 e1\nnode f0 e2\nsmooth e2\nsmooth e4\n");
        let names: Vec<String> = r
            .base_locus
            .expanded()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(names, ["f0", "e1", "e2", "e2", "e3", "e3", "e4"]);
        let text = serialize_report(&r);
        assert!(text.contains("\"base_locus_repeats\": true"));
        assert_eq!(parse_report(&text).unwrap(), r);
        let lied = text.replace(
            "\"base_locus_repeats\": true",
            "\"base_locus_repeats\": false",
        );
        assert_eq!(
            parse_report(&lied),
            Err(ReportParseError::RepeatsMismatch(false))
        );
    }

    #[test]
    fn stated_level_must_agree() {
        let text = serialize_report(&report_for("smooth f0\n"))
            .replace("\"embedded_level\": 1", "\"embedded_level\": 4");
        assert!(matches!(
            parse_report(&text),
            Err(ReportParseError::LevelMismatch { .. })
        ));
    }
}
