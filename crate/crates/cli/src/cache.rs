//! On-disk store of Grothendieck polynomials, one JSON file per permutation.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use groth_core::poly::grothendieck;
use groth_core::{MultiPoly, Permutation};
use serde_json::json;
use sha2::{Digest, Sha256};

pub struct PolyCache {
    dir: Option<PathBuf>,
}

impl PolyCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Content-addressed file name for `w`.
    pub fn entry_name(w: &Permutation) -> String {
        let digest = Sha256::digest(format!("grothendieck:{w}").as_bytes());
        format!("{}.json", hex::encode(digest))
    }

    fn load(path: &Path, w: &Permutation) -> Result<MultiPoly, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if v["permutation"] != json!(w.to_string()) {
            return Err(format!("entry belongs to {}", v["permutation"]));
        }
        let p: MultiPoly = serde_json::from_value(v["poly"].clone()).map_err(|e| e.to_string())?;
        if p.nvars() != w.n() {
            return Err("variable count does not match".into());
        }
        Ok(p)
    }

    fn store(path: &Path, w: &Permutation, p: &MultiPoly) -> io::Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let body = json!({ "permutation": w.to_string(), "poly": p });
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, body.to_string())?;
        fs::rename(&tmp, path)
    }

    /// The polynomial of `w`, read from the cache when a valid entry exists.
    /// A corrupt entry is reported on stderr, recomputed and overwritten.
    pub fn grothendieck(&self, w: &Permutation) -> Arc<MultiPoly> {
        let Some(dir) = &self.dir else {
            return grothendieck(w);
        };
        let path = dir.join(Self::entry_name(w));
        if path.exists() {
            match Self::load(&path, w) {
                Ok(p) => return Arc::new(p),
                Err(e) => eprintln!("warning: corrupt cache entry {} ({e}); recomputing", path.display()),
            }
        }
        let p = grothendieck(w);
        if let Err(e) = Self::store(&path, w, &p) {
            eprintln!("warning: cannot write cache entry {}: {e}", path.display());
        }
        p
    }

    /// Removes every cache entry; returns how many were removed.
    pub fn clear(&self) -> io::Result<usize> {
        let Some(dir) = &self.dir else {
            return Ok(0);
        };
        if !dir.exists() {
            return Ok(0);
        }
        let mut removed = 0;
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json" || e == "tmp") {
                fs::remove_file(&path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
