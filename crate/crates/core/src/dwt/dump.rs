use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DecompositionPyramid, Extension, LevelShape, Wavelet};
use crate::error::{Error, Result};
use crate::imgio::{rescale_to_byte_range, save_image, GrayImage};

/// Manifest written next to a dumped pyramid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidManifest {
    pub wavelet: Wavelet,
    pub extension: Extension,
    pub original_size: (usize, usize),
    pub levels: Vec<LevelShape>,
    /// Relative file names, one entry per written subband.
    pub files: Vec<String>,
}

/// Writes every subband as a viewing-rescaled PGM plus `manifest.json`.
pub fn dump_pyramid(
    pyramid: &DecompositionPyramid,
    dir: impl AsRef<Path>,
) -> Result<PyramidManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let mut write = |name: String, img: &GrayImage| -> Result<()> {
        save_image(&rescale_to_byte_range(img), dir.join(&name))?;
        files.push(name);
        Ok(())
    };
    for b in &pyramid.levels {
        let l = b.level;
        write(format!("level{l}_horiz.pgm"), &b.horiz_detail)?;
        write(format!("level{l}_vert.pgm"), &b.vert_detail)?;
        write(format!("level{l}_diag.pgm"), &b.diag_detail)?;
    }
    write("final_approx.pgm".into(), &pyramid.final_approx)?;

    let manifest = PyramidManifest {
        wavelet: pyramid.wavelet,
        extension: pyramid.extension,
        original_size: pyramid.original_size,
        levels: pyramid
            .levels
            .iter()
            .map(|b| LevelShape {
                level: b.level,
                width: b.approx.width(),
                height: b.approx.height(),
            })
            .collect(),
        files,
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
