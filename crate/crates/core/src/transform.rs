//! Blow-ups at combinatorial centres and contractions of (−1)-components.
//!
//! Degree bookkeeping follows the strict-transform rule: every component
//! through the centre loses one unit of degree and the exceptional curve
//! gets degree 1. The rule is applied at every centre, including centres on
//! components whose degree is already `<= 0`.

use std::fmt;

use thiserror::Error;

use crate::fiber::{ComponentId, ComponentRecord, FiberConfig};

/// Where a blow-up happens. Smooth points of one component carry no
/// position: any two are interchangeable for the fibre combinatorics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlowUpCenter {
    /// A point of this component lying on no other component.
    SmoothPoint(ComponentId),
    /// A transversal intersection point of two components.
    Node(ComponentId, ComponentId),
}

impl BlowUpCenter {
    pub fn smooth(id: impl Into<ComponentId>) -> Self {
        BlowUpCenter::SmoothPoint(id.into())
    }

    pub fn node(a: impl Into<ComponentId>, b: impl Into<ComponentId>) -> Self {
        BlowUpCenter::Node(a.into(), b.into())
    }
}

impl fmt::Display for BlowUpCenter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowUpCenter::SmoothPoint(c) => write!(f, "smooth {c}"),
            BlowUpCenter::Node(a, b) => write!(f, "node {a} {b}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("unknown component `{0}`")]
    UnknownId(ComponentId),
    #[error("`{a}` and `{b}` do not meet, so there is no node to blow up")]
    NotAdjacent { a: ComponentId, b: ComponentId },
    #[error("node needs two distinct components, got `{0}` twice")]
    DegenerateNode(ComponentId),
    #[error("`{a}` and `{b}` meet with multiplicity {k}; only transversal contacts are supported")]
    TangentialContact {
        a: ComponentId,
        b: ComponentId,
        k: u32,
    },
    #[error("cannot contract `{id}`: self-intersection is {self_int}, not -1")]
    NotExceptional { id: ComponentId, self_int: i64 },
    #[error("cannot contract `{id}`: multiplicity {found} but its neighbours require {expected}")]
    CycleInconsistent {
        id: ComponentId,
        expected: i64,
        found: i64,
    },
    #[error("cannot contract the only component `{0}`")]
    LastComponent(ComponentId),
}

fn lookup(config: &FiberConfig, id: &ComponentId) -> Result<usize, TransformError> {
    config
        .index_of(id.as_str())
        .ok_or_else(|| TransformError::UnknownId(id.clone()))
}

/// Blows up `center`. The exceptional component is appended last and named
/// `e<k>` with the smallest free `k >= len()`.
pub fn blow_up(config: &FiberConfig, center: &BlowUpCenter) -> Result<FiberConfig, TransformError> {
    let through: Vec<usize> = match center {
        BlowUpCenter::SmoothPoint(c) => vec![lookup(config, c)?],
        BlowUpCenter::Node(a, b) => {
            let i = lookup(config, a)?;
            let j = lookup(config, b)?;
            if i == j {
                return Err(TransformError::DegenerateNode(a.clone()));
            }
            match config.meet(i, j) {
                0 => {
                    return Err(TransformError::NotAdjacent {
                        a: a.clone(),
                        b: b.clone(),
                    })
                }
                1 => {}
                k => {
                    return Err(TransformError::TangentialContact {
                        a: a.clone(),
                        b: b.clone(),
                        k,
                    })
                }
            }
            vec![i, j]
        }
    };

    let mut out = config.clone();
    let mult: u32 = through.iter().map(|&i| config.component(i).mult).sum();
    let exceptional = out.push_component(ComponentRecord::new(
        config.fresh_exceptional_id(),
        -1,
        mult,
        1,
    ));
    for &i in &through {
        let c = out.component_mut(i);
        c.self_int -= 1;
        c.d_deg -= 1;
        out.set_meet(i, exceptional, 1);
    }
    if let [i, j] = through[..] {
        let k = out.meet(i, j);
        out.set_meet(i, j, k - 1);
    }
    let d_self = out.d_self().map(|d| d - 1);
    Ok(out.with_d_self(d_self))
}

/// Contracts the (−1)-component `id`.
///
/// For the remaining components, with `k_C = C·E` and `δ = E.d_deg`:
/// `C² += k_C²`, `C·C' += k_C·k_C'`, `d(C) += k_C·δ`, and `D²` (when
/// tracked) grows by `δ²`. These are the exact inverses of [`blow_up`].
pub fn blow_down(config: &FiberConfig, id: &str) -> Result<FiberConfig, TransformError> {
    let e = config
        .index_of(id)
        .ok_or_else(|| TransformError::UnknownId(id.into()))?;
    let rec = config.component(e);
    if rec.self_int != -1 {
        return Err(TransformError::NotExceptional {
            id: rec.id.clone(),
            self_int: rec.self_int,
        });
    }
    if config.len() == 1 {
        return Err(TransformError::LastComponent(rec.id.clone()));
    }
    let expected: i64 = config
        .neighbors(e)
        .map(|c| i64::from(config.meet(c, e)) * i64::from(config.component(c).mult))
        .sum();
    if expected != i64::from(rec.mult) {
        return Err(TransformError::CycleInconsistent {
            id: rec.id.clone(),
            expected,
            found: i64::from(rec.mult),
        });
    }

    let delta = rec.d_deg;
    let mut out = config.clone();
    let n = config.len();
    for c in 0..n {
        if c == e {
            continue;
        }
        let kc = config.meet(c, e);
        if kc == 0 {
            continue;
        }
        let k = i64::from(kc);
        let comp = out.component_mut(c);
        comp.self_int += k * k;
        comp.d_deg += k * delta;
        for other in c + 1..n {
            if other == e {
                continue;
            }
            let ko = config.meet(other, e);
            if ko > 0 {
                let current = out.meet(c, other);
                out.set_meet(c, other, current + kc * ko);
            }
        }
    }
    out.remove_component(e);
    let d_self = out.d_self().map(|d| d + delta * delta);
    Ok(out.with_d_self(d_self))
}
