//! Embedding documents: the JSON input schema and its validation.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use dval_core::embedding::Embedding;
use dval_core::error::Error;
use dval_core::field::{parse_elem, CoeffRule, FieldPresentation};
use dval_core::series::{LazySeries, Tail};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingDocument {
    pub field: FieldDoc,
    pub variables: Vec<String>,
    pub series: BTreeMap<String, SeriesDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub symbols: Vec<SymbolDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    pub name: String,
    #[serde(default = "default_bound")]
    pub radical_bound: u32,
}

fn default_bound() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    #[serde(default)]
    pub terms: Vec<TermDoc>,
    #[serde(default)]
    pub tails: Vec<TailDoc>,
    #[serde(default)]
    pub certified_infinite: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub c: String,
    pub e: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailDoc {
    pub coeff: String,
    /// Exponent rule `a*j+b` with a >= 1.
    pub exp: String,
    pub from: i64,
}

/// Parses `a*j+b` (also `j+b`, `a*j`, `j`).
fn parse_exp_rule(text: &str) -> Result<(u64, i64), Error> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("bad exponent rule `{text}`: expected a*j+b"));
    let (a_part, rest) = match s.split_once('j') {
        Some(parts) => parts,
        None => return Err(err()),
    };
    let a: u64 = if a_part.is_empty() {
        1
    } else {
        let a_txt = a_part.strip_suffix('*').ok_or_else(err)?;
        a_txt.parse().map_err(|_| err())?
    };
    if a == 0 {
        return Err(Error::Invalid(format!(
            "exponent rule `{text}` must have a >= 1"
        )));
    }
    let b: i64 = if rest.is_empty() {
        0
    } else {
        // "+3" or "-3"
        rest.parse().map_err(|_| err())?
    };
    Ok((a, b))
}

pub fn parse_document(text: &str, precision: u64) -> Result<Embedding, Error> {
    let doc: EmbeddingDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("document: {e}")))?;
    let pres = Arc::new(FieldPresentation::new(
        doc.field
            .symbols
            .iter()
            .map(|s| (s.name.clone(), s.radical_bound))
            .collect(),
    )?)
;
    for name in doc.series.keys() {
        if !doc.variables.contains(name) {
            return Err(Error::Invalid(format!(
                "series.{name}: not in the variables list"
            )));
        }
    }
    let mut images = Vec::new();
    let mut flags = Vec::new();
    for var in &doc.variables {
        let sd = doc.series.get(var).ok_or_else(|| {
            Error::Invalid(format!("series.{var}: missing series for variable"))
        })?;
        if sd.terms.is_empty() && sd.tails.is_empty() {
            return Err(Error::Invalid(format!(
                "series.{var}: needs at least one term or tail"
            )));
        }
        let mut terms = BTreeMap::new();
        for (k, term) in sd.terms.iter().enumerate() {
            let c = parse_elem(&pres, &term.c).map_err(|e| {
                Error::Invalid(format!("series.{var}.terms[{k}].c: {e}"))
            })?;
            let prev = terms.insert(term.e, c);
            if prev.is_some() {
                return Err(Error::Invalid(format!(
                    "series.{var}.terms[{k}]: duplicate exponent {}",
                    term.e
                )));
            }
        }
        let mut tails = Vec::new();
        for (k, tail) in sd.tails.iter().enumerate() {
            let (stride, offset) = parse_exp_rule(&tail.exp)
                .map_err(|e| Error::Invalid(format!("series.{var}.tails[{k}].exp: {e}")))?;
            let coeff = CoeffRule::parse(&pres, &tail.coeff, tail.from).map_err(|e| {
                Error::Invalid(format!("series.{var}.tails[{k}].coeff: {e}"))
            })?;
            tails.push(Tail {
                coeff,
                stride,
                offset,
                from: tail.from,
            });
        }
        images.push(
            LazySeries::from_parts(pres.clone(), terms, tails)
                .map_err(|e| Error::Invalid(format!("series.{var}: {e}")))?,
        );
        flags.push(sd.certified_infinite);
    }
    Embedding::new(pres, doc.variables, images, precision, flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_rules() {
        assert_eq!(parse_exp_rule("1*j+3").unwrap(), (1, 3));
        assert_eq!(parse_exp_rule("j+3").unwrap(), (1, 3));
        assert_eq!(parse_exp_rule("2*j").unwrap(), (2, 0));
        assert_eq!(parse_exp_rule("j").unwrap(), (1, 0));
        assert_eq!(parse_exp_rule("3*j-2").unwrap(), (3, -2));
        assert!(parse_exp_rule("0*j+1").is_err());
        assert!(parse_exp_rule("j*j").is_err());
        assert!(parse_exp_rule("5").is_err());
    }

    #[test]
    fn parses_minimal_document() {
        let text = r#"{
            "field": {"symbols": [{"name": "T2"}]},
            "variables": ["X1", "X2"],
            "series": {
                "X1": {"terms": [{"c": "1", "e": 2}]},
                "X2": {"terms": [{"c": "T2", "e": 4}, {"c": "T2", "e": 6}]}
            }
        }"#;
        let emb = parse_document(text, 64).unwrap();
        assert_eq!(emb.var_values(), &[2, 4]);
    }

    #[test]
    fn rejects_zero_image() {
        let text = r#"{
            "field": {"symbols": []},
            "variables": ["X1", "X2"],
            "series": {
                "X1": {"terms": [{"c": "1", "e": 1}]},
                "X2": {"terms": [{"c": "0", "e": 1}]}
            }
        }"#;
        let err = parse_document(text, 64).unwrap_err();
        assert!(err.to_string().contains("order not established"), "{err}");
    }

    #[test]
    fn rejects_undeclared_symbol() {
        let text = r#"{
            "field": {"symbols": [{"name": "T2"}]},
            "variables": ["X1", "X2"],
            "series": {
                "X1": {"terms": [{"c": "1", "e": 1}]},
                "X2": {"terms": [{"c": "T9", "e": 1}]}
            }
        }"#;
        assert!(parse_document(text, 64).is_err());
    }

    #[test]
    fn rejects_missing_series() {
        let text = r#"{
            "field": {"symbols": []},
            "variables": ["X1", "X2"],
            "series": {"X1": {"terms": [{"c": "1", "e": 1}]}}
        }"#;
        let err = parse_document(text, 64).unwrap_err();
        assert!(err.to_string().contains("series.X2"), "{err}");
    }
}
