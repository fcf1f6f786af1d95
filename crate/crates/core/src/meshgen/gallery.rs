//! Single-polygon test gallery, shipped as fixture files.

use super::io::parse_mesh;
use crate::geometry::Polygon;
use crate::{Error, Result};

pub const GALLERY_NAMES: [&str; 6] = ["triangle", "regular", "irregular", "concave", "star", "hanging"];

fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "triangle" => include_str!("../../fixtures/gallery/triangle.mesh"),
        "regular" => include_str!("../../fixtures/gallery/regular.mesh"),
        "irregular" => include_str!("../../fixtures/gallery/irregular.mesh"),
        "concave" => include_str!("../../fixtures/gallery/concave.mesh"),
        "star" => include_str!("../../fixtures/gallery/star.mesh"),
        "hanging" => include_str!("../../fixtures/gallery/hanging.mesh"),
        _ => return None,
    })
}

pub fn gallery(name: &str) -> Result<Polygon> {
    let text = source(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    let mesh = parse_mesh(text)?;
    Ok(mesh.polygon(0).clone())
}
