//! On-disk code bundles: alist matrices plus a JSON descriptor.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hgpprep::codes::{hgp_logicals, hypergraph_product, CssCode};
use hgpprep::gf2::io::{read_alist, write_alist};
use hgpprep::gf2::BinaryMatrix;
use serde::{Deserialize, Serialize};

use crate::spec::ClassicalSpec;

pub const BUNDLE_SCHEMA: &str = "hgpprep-bundle/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleInfo {
    pub schema: String,
    pub code_id: String,
    pub family: String,
    pub classical: String,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub classical_n: usize,
    pub classical_k: usize,
    /// Exhaustive classical distance, when it was computed.
    pub classical_d: Option<usize>,
    pub library_version: String,
}

/// An HGP code with its logical basis.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub info: BundleInfo,
    pub code: CssCode,
    pub classical: BinaryMatrix,
}

impl Bundle {
    pub fn generate(classical: &str, seed: u64, with_distance: bool) -> Result<Self> {
        let spec = ClassicalSpec::parse(classical)?;
        let mut c = spec.build(seed)?;
        if with_distance {
            c = c.compute_distance(None)?;
        }
        let hgp = hypergraph_product(&c, &c)?;
        let (lx, lz) = hgp_logicals(&hgp)?;
        let code = hgp.code.clone().with_logicals(lx, lz)?;
        let info = BundleInfo {
            schema: BUNDLE_SCHEMA.into(),
            code_id: spec.code_id(seed),
            family: "hgp".into(),
            classical: classical.into(),
            seed,
            n: code.n(),
            k: code.k(),
            classical_n: c.n(),
            classical_k: c.k(),
            classical_d: c.d().and_then(|d| d.exact()),
            library_version: crate::VERSION.into(),
        };
        Ok(Self {
            info,
            code,
            classical: c.h().clone(),
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let lx = self.code.lx().expect("bundle codes carry logicals");
        let lz = self.code.lz().expect("bundle codes carry logicals");
        for (name, m) in [
            ("classical.alist", &self.classical),
            ("hx.alist", self.code.hx()),
            ("hz.alist", self.code.hz()),
            ("lx.alist", lx),
            ("lz.alist", lz),
        ] {
            fs::write(dir.join(name), write_alist(m))?;
        }
        fs::write(dir.join("bundle.json"), serde_json::to_string_pretty(&self.info)? + "\n")?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let info_path = dir.join("bundle.json");
        let text = fs::read_to_string(&info_path).with_context(|| format!("reading {}", info_path.display()))?;
        let info: BundleInfo = serde_json::from_str(&text).with_context(|| format!("parsing {}", info_path.display()))?;
        if info.schema != BUNDLE_SCHEMA {
            bail!("{}: unsupported bundle schema {:?}", info_path.display(), info.schema);
        }
        let load = |name: &str| -> Result<BinaryMatrix> {
            let p = dir.join(name);
            let t = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            read_alist(&t).with_context(|| format!("parsing {}", p.display()))
        };
        let code = CssCode::new(load("hx.alist")?, load("hz.alist")?)?.with_logicals(load("lx.alist")?, load("lz.alist")?)?;
        if code.n() != info.n || code.k() != info.k {
            bail!(
                "{}: matrices give [[{}, {}]] but the descriptor says [[{}, {}]]",
                dir.display(),
                code.n(),
                code.k(),
                info.n,
                info.k
            );
        }
        Ok(Self {
            info,
            code,
            classical: load("classical.alist")?,
        })
    }
}
