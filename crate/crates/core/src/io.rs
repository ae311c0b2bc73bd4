//! JSON specifications for bodies, norm fields and curve families.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ellipse_field::{NormField, Rect};
use crate::error::{Error, Result};
use crate::geometry::{SymmetricConvexBody, Vec2};
use crate::modulus::{Boundary, Connectivity, Domain, FamilySpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Named(String),
}

/// `{"type":"polygon","vertices":[[x,y],...]}`, `{"type":"radial","samples":[...]}`
/// or `{"type":"lp","p": number | "inf"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Radial { samples: Vec<f64> },
    Lp { p: Exponent },
}

impl BodySpec {
    pub fn build(&self) -> Result<SymmetricConvexBody> {
        match self {
            BodySpec::Polygon { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::InvalidInput("polygon has no vertices".into()));
                }
                SymmetricConvexBody::polygon(vertices.iter().map(|v| Vec2::new(v[0], v[1])).collect())
            }
            BodySpec::Radial { samples } => {
                if samples.is_empty() {
                    return Err(Error::InvalidInput("radial body has no samples".into()));
                }
                SymmetricConvexBody::radial(samples.clone())
            }
            BodySpec::Lp { p } => match p {
                Exponent::Finite(p) => SymmetricConvexBody::lp_ball(*p),
                Exponent::Named(s) if s == "inf" => SymmetricConvexBody::lp_ball(f64::INFINITY),
                Exponent::Named(s) => Err(Error::InvalidInput(format!("p must be a number or \"inf\", got {s:?}"))),
            },
        }
    }
}

/// `{"constant": body}` (optionally with `"rect"`) or
/// `{"nx":..,"ny":..,"rect":[x0,y0,x1,y1],"cells":[body,...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Constant {
        constant: BodySpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rect: Option<[f64; 4]>,
    },
    Cells {
        nx: usize,
        ny: usize,
        rect: [f64; 4],
        cells: Vec<BodySpec>,
    },
}

fn rect_of(r: [f64; 4]) -> Result<Rect> {
    Rect::new(r[0], r[1], r[2], r[3])
}

impl FieldSpec {
    pub fn build(&self) -> Result<NormField> {
        match self {
            FieldSpec::Constant { constant, rect } => {
                let mut f = NormField::constant(constant.build()?);
                if let Some(r) = rect {
                    f.rect = rect_of(*r)?;
                }
                Ok(f)
            }
            FieldSpec::Cells { nx, ny, rect, cells } => {
                let bodies = cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.build().map_err(|e| Error::Cell {
                            index: i,
                            source: Box::new(e),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                NormField::per_cell(*nx, *ny, rect_of(*rect)?, bodies)
            }
        }
    }
}

/// `"left"`, `"right"`, `"top"`, `"bottom"`, `"sw"`, `"se"`, `"ne"`, `"nw"`,
/// `{"arc":[t0,t1]}`, or a list of these (their union).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Named(String),
    Arc { arc: [f64; 2] },
    Union(Vec<BoundarySpec>),
}

impl BoundarySpec {
    pub fn build(&self) -> Result<Boundary> {
        Ok(match self {
            BoundarySpec::Named(s) => match s.as_str() {
                "left" => Boundary::Left,
                "right" => Boundary::Right,
                "top" => Boundary::Top,
                "bottom" => Boundary::Bottom,
                "sw" => Boundary::SouthWest,
                "se" => Boundary::SouthEast,
                "ne" => Boundary::NorthEast,
                "nw" => Boundary::NorthWest,
                other => return Err(Error::InvalidInput(format!("unknown boundary {other:?}"))),
            },
            BoundarySpec::Arc { arc } => Boundary::Arc {
                from: arc[0],
                to: arc[1],
            },
            BoundarySpec::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidInput("empty boundary union".into()));
                }
                Boundary::Union(parts.iter().map(BoundarySpec::build).collect::<Result<_>>()?)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainShape {
    Rect,
    Diamond,
}

/// `{"source":..,"sink":..,"connectivity":"axis"|"diag","domain":"rect"|"diamond"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub source: BoundarySpec,
    pub sink: BoundarySpec,
    pub connectivity: Connectivity,
    #[serde(default = "default_shape")]
    pub domain: DomainShape,
}

fn default_shape() -> DomainShape {
    DomainShape::Rect
}

impl FamilyJson {
    pub fn build(&self) -> Result<FamilySpec> {
        Ok(FamilySpec {
            source: self.source.build()?,
            sink: self.sink.build()?,
            connectivity: self.connectivity,
        })
    }

    /// The domain over `rect`.
    pub fn domain(&self, rect: Rect) -> Domain {
        match self.domain {
            DomainShape::Rect => Domain::Rect(rect),
            DomainShape::Diamond => Domain::Diamond(rect),
        }
    }
}

impl Serialize for Connectivity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Connectivity::Axis => "axis",
            Connectivity::Diag => "diag",
        })
    }
}

impl<'de> Deserialize<'de> for Connectivity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "axis" => Ok(Connectivity::Axis),
            "diag" => Ok(Connectivity::Diag),
            other => Err(serde::de::Error::unknown_variant(other, &["axis", "diag"])),
        }
    }
}

pub fn parse_body(json: &str) -> Result<SymmetricConvexBody> {
    serde_json::from_str::<BodySpec>(json)?.build()
}

pub fn parse_field(json: &str) -> Result<NormField> {
    serde_json::from_str::<FieldSpec>(json)?.build()
}

pub fn parse_family(json: &str) -> Result<FamilyJson> {
    Ok(serde_json::from_str(json)?)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
