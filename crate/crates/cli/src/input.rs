use std::io::Read;

use eqforest::{gen_family, parse_forest, Error, FamilySpec, Forest, Result};

/// A forest together with where it came from.
pub struct Input {
    pub source: String,
    pub family: Option<FamilySpec>,
    pub forest: Forest,
    pub warnings: Vec<String>,
}

impl Input {
    /// `family:NAME:PARAMS`, `-` for stdin, or a path to an edge-list file.
    pub fn load(source: &str) -> Result<Input> {
        if source.starts_with("family:") {
            let family: FamilySpec = source.parse()?;
            let forest = gen_family(&family)?;
            return Ok(Input {
                source: source.to_string(),
                warnings: family.warnings(),
                family: Some(family),
                forest,
            });
        }
        let text = if source == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidArgument(format!("cannot read stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(source)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {source}: {e}")))?
        };
        Ok(Input {
            source: source.to_string(),
            family: None,
            forest: parse_forest(&text)?,
            warnings: Vec::new(),
        })
    }
}

/// A family spec where one parameter is a range `lo..hi` (inclusive).
pub struct TableSpec {
    name: String,
    params: Vec<Param>,
}

enum Param {
    Fixed(u64),
    Range(u64, u64),
}

impl TableSpec {
    pub fn parse(spec: &str) -> Result<TableSpec> {
        let bad = |msg: String| Error::InvalidFamily(format!("{spec}: {msg}"));
        let body = spec.strip_prefix("family:").unwrap_or(spec);
        let (name, rest) = body.split_once(':').ok_or_else(|| bad("missing parameters".into()))?;
        let mut params = Vec::new();
        for token in rest.split(',').map(str::trim) {
            let num = |t: &str| t.parse::<u64>().map_err(|_| bad(format!("bad parameter `{t}`")));
            params.push(match token.split_once("..") {
                Some((lo, hi)) => {
                    let hi = hi.strip_prefix('=').unwrap_or(hi);
                    let (lo, hi) = (num(lo)?, num(hi)?);
                    if lo > hi {
                        return Err(bad(format!("empty range {lo}..{hi}")));
                    }
                    Param::Range(lo, hi)
                }
                None => Param::Fixed(num(token)?),
            });
        }
        let ranges = params.iter().filter(|p| matches!(p, Param::Range(..))).count();
        if ranges > 1 {
            return Err(bad("at most one parameter may be a range".into()));
        }
        Ok(TableSpec {
            name: name.to_string(),
            params,
        })
    }

    pub fn members(&self) -> Result<Vec<FamilySpec>> {
        let (lo, hi) = self
            .params
            .iter()
            .find_map(|p| match p {
                Param::Range(lo, hi) => Some((*lo, *hi)),
                Param::Fixed(_) => None,
            })
            .unwrap_or((0, 0));
        (lo..=hi)
            .map(|x| {
                let values: Vec<u64> = self
                    .params
                    .iter()
                    .map(|p| match p {
                        Param::Fixed(v) => *v,
                        Param::Range(..) => x,
                    })
                    .collect();
                FamilySpec::from_parts(&self.name, &values)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_ranges_expand() {
        let t = TableSpec::parse("star:3..8").unwrap();
        let ds: Vec<_> = t.members().unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(ds.first().unwrap(), "family:star:3");
        assert_eq!(ds.len(), 6);
        let t = TableSpec::parse("family:double_star:2,1..=3").unwrap();
        assert_eq!(t.members().unwrap().len(), 3);
    }

    #[test]
    fn table_rejects_two_ranges() {
        assert!(TableSpec::parse("double_star:1..2,1..2").is_err());
        assert!(TableSpec::parse("star:5..3").is_err());
        assert!(TableSpec::parse("star").is_err());
    }
}
