//! Textual code specifications such as `ldpc:n=18,wc=5,wr=6`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use hgpprep::codes::{repetition_code, sample_full_rank_ldpc, sample_regular_ldpc, ClassicalCode};

/// A classical code family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalSpec {
    Ldpc {
        n: usize,
        wc: usize,
        wr: usize,
        full_rank: bool,
    },
    Repetition {
        d: usize,
    },
}

impl ClassicalSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (family, args) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = BTreeMap::new();
        for part in args.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value in {s:?}, found {part:?}"))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| -> Result<usize> {
            let v = kv.remove(key).ok_or_else(|| anyhow!("{s:?} is missing {key}="))?;
            v.parse().with_context(|| format!("{key}={v} in {s:?}"))
        };
        let spec = match family.trim() {
            "ldpc" => {
                let (n, wc, wr) = (take("n")?, take("wc")?, take("wr")?);
                let full_rank = match kv.remove("full_rank").as_deref() {
                    None | Some("false") | Some("0") => false,
                    Some("true") | Some("1") => true,
                    Some(v) => bail!("full_rank={v} in {s:?}: expected true or false"),
                };
                ClassicalSpec::Ldpc { n, wc, wr, full_rank }
            }
            "rep" => ClassicalSpec::Repetition { d: take("d")? },
            other => bail!("unknown classical family {other:?} (expected ldpc or rep)"),
        };
        if let Some(k) = kv.keys().next() {
            bail!("unknown key {k:?} in {s:?}");
        }
        Ok(spec)
    }

    pub fn build(&self, seed: u64) -> Result<ClassicalCode> {
        Ok(match *self {
            ClassicalSpec::Ldpc { n, wc, wr, full_rank } => {
                if full_rank {
                    sample_full_rank_ldpc(n, wc, wr, seed)?
                } else {
                    sample_regular_ldpc(n, wc, wr, seed)?
                }
            }
            ClassicalSpec::Repetition { d } => repetition_code(d)?,
        })
    }

    /// Identifier used in file names and result rows.
    pub fn code_id(&self, seed: u64) -> String {
        match *self {
            ClassicalSpec::Ldpc { n, wc, wr, full_rank } => {
                let fr = if full_rank { "-fr" } else { "" };
                format!("hgp-ldpc-n{n}-wc{wc}-wr{wr}{fr}-s{seed}")
            }
            ClassicalSpec::Repetition { d } => format!("hgp-rep-d{d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families() {
        assert_eq!(
            ClassicalSpec::parse("ldpc:n=18,wc=5,wr=6").unwrap(),
            ClassicalSpec::Ldpc {
                n: 18,
                wc: 5,
                wr: 6,
                full_rank: false
            }
        );
        assert_eq!(ClassicalSpec::parse("rep:d=3").unwrap(), ClassicalSpec::Repetition { d: 3 });
        assert!(ClassicalSpec::parse("ldpc:n=18,wc=5").is_err());
        assert!(ClassicalSpec::parse("ldpc:n=18,wc=5,wr=6,x=1").is_err());
        assert!(ClassicalSpec::parse("turbo:n=3").is_err());
    }

    #[test]
    fn ids_are_stable() {
        let s = ClassicalSpec::parse("ldpc:n=12,wc=5,wr=6,full_rank=true").unwrap();
        assert_eq!(s.code_id(4), "hgp-ldpc-n12-wc5-wr6-fr-s4");
        assert_eq!(s.build(4).unwrap().n(), 12);
    }
}
