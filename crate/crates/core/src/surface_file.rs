// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! TOML surface documents.
//!
//! ```toml
//! name = "L-origami-3"
//! field_discriminant = 0
//! systole = "1"
//!
//! [[polygons]]
//! vertices = [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]
//!
//! [[gluings]]
//! a = { polygon = 0, edge = 1 }
//! b = { polygon = 1, edge = 3 }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactCoord, Vec2};
use crate::flatsurf::{EdgeRef, Polygon, Presentation};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    field_discriminant: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    systole: Option<String>,
    polygons: Vec<PolygonDoc>,
    gluings: Vec<GluingDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonDoc {
    vertices: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingDoc {
    a: EdgeRef,
    b: EdgeRef,
}

fn coord(text: &str, d: u32) -> Result<ExactCoord> {
    let c: ExactCoord = text
        .parse()
        .map_err(|e| Error::MalformedDocument(format!("{e}")))?;
    if c.discriminant() != 0 && c.discriminant() != d {
        return Err(Error::MalformedDocument(format!(
            "{text:?} is not in Q(√{d})"
        )));
    }
    Ok(c)
}

pub fn parse(document: &str) -> Result<Presentation> {
    let doc: Document =
        toml::from_str(document).map_err(|e| Error::MalformedDocument(e.message().to_string()))?;
    let d = doc.field_discriminant;
    let polygons = doc
        .polygons
        .iter()
        .map(|p| {
            p.vertices
                .iter()
                .map(|[x, y]| Ok(Vec2::new(coord(x, d)?, coord(y, d)?)))
                .collect::<Result<Vec<_>>>()
                .map(Polygon::new)
        })
        .collect::<Result<Vec<_>>>()?;
    let systole = doc.systole.as_deref().map(|s| coord(s, d)).transpose()?;
    Ok(Presentation {
        name: doc.name,
        field_discriminant: d,
        polygons,
        gluings: doc.gluings.iter().map(|g| (g.a, g.b)).collect(),
        systole,
    })
}

pub fn serialize(p: &Presentation) -> String {
    let doc = Document {
        name: p.name.clone(),
        field_discriminant: p.field_discriminant,
        systole: p.systole.as_ref().map(|s| s.to_string()),
        polygons: p
            .polygons
            .iter()
            .map(|q| PolygonDoc {
                vertices: q
                    .vertices
                    .iter()
                    .map(|v| [v.x.to_string(), v.y.to_string()])
                    .collect(),
            })
            .collect(),
        gluings: p
            .gluings
            .iter()
            .map(|&(a, b)| GluingDoc { a, b })
            .collect(),
    };
    toml::to_string(&doc).expect("surface documents always serialize")
}
