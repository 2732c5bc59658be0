//! Built-in models.

use super::ToricFanoModel;
use crate::error::{Error, Result};

pub const CATALOG_NAMES: &[&str] = &["P1", "P2", "P1xP1", "dP6", "P3", "P1xP2", "P(1,1,2)"];

fn rays_for(name: &str) -> Option<Vec<Vec<i64>>> {
    let rays = match name {
        "P1" => vec![vec![1], vec![-1]],
        "P2" => vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        "P1xP1" => vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        // P2 blown up in the three torus-fixed points.
        "dP6" => vec![
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, -1],
        ],
        "P3" => vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![-1, -1, -1],
        ],
        "P1xP2" => vec![
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![0, -1, -1],
        ],
        "P(1,1,2)" => vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
        _ => return None,
    };
    Some(rays)
}

/// Look up a catalog model (case-insensitive).
pub fn by_name(name: &str) -> Result<ToricFanoModel> {
    let canon = CATALOG_NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::InvalidInput(format!("unknown catalog model {name:?}")))?;
    let rays = rays_for(canon).expect("catalog names have rays");
    ToricFanoModel::build(*canon, rays)
}

pub fn catalog() -> Vec<ToricFanoModel> {
    CATALOG_NAMES
        .iter()
        .map(|n| by_name(n).expect("catalog models are valid"))
        .collect()
}
