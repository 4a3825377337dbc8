//! Input file parsing.
//!
//! Parsing runs in three passes: JSON syntax (byte offsets), a schema walk
//! (JSON pointers), then semantic checks on indices and the partition.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::fan::FanData;
use crate::linalg::{parse_rat, rat, Rat};

pub const DEFAULT_ORDER: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub name: String,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub nef_partition: Vec<Vec<usize>>,
    pub ample_weight: Option<Vec<Rat>>,
    pub order: i64,
}

impl InputSpec {
    pub fn to_fan(&self) -> Result<FanData> {
        FanData::new(
            &self.name,
            self.rank,
            &self.rays,
            &self.max_cones,
            &self.nef_partition,
            self.ample_weight.as_deref(),
        )
    }
}

pub fn parse_input(path: &Path) -> Result<InputSpec> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
        offset: e.utf8_error().valid_up_to(),
        line: 0,
        column: 0,
        message: "input is not valid UTF-8".into(),
    })?;
    parse_input_str(&text)
}

pub fn parse_input_str(text: &str) -> Result<InputSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        let offset = if e.is_eof() {
            text.len()
        } else {
            byte_offset(text, line, column)
        };
        Error::Parse {
            offset,
            line,
            column,
            message: e.to_string(),
        }
    })?;
    let spec = schema(&value)?;
    semantic(&spec)?;
    Ok(spec)
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn schema_err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

fn semantic_err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Semantic {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

fn int_at(v: &Value, pointer: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| schema_err(pointer, "expected an integer"))
}

fn index_at(v: &Value, pointer: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema_err(pointer, "expected a non-negative integer"))
}

fn array_at<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema_err(pointer, "expected an array"))
}

fn index_lists(v: &Value, pointer: &str) -> Result<Vec<Vec<usize>>> {
    array_at(v, pointer)?
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let p = format!("{pointer}/{k}");
            array_at(row, &p)?
                .iter()
                .enumerate()
                .map(|(t, x)| index_at(x, &format!("{p}/{t}")))
                .collect()
        })
        .collect()
}

fn schema(value: &Value) -> Result<InputSpec> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema_err("", "expected a JSON object"))?;
    const KEYS: [&str; 7] = [
        "name",
        "rank",
        "rays",
        "max_cones",
        "nef_partition",
        "ample_weight",
        "order",
    ];
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(schema_err(&format!("/{k}"), "unknown field"));
    }
    let get = |k: &str| {
        obj.get(k)
            .ok_or_else(|| schema_err(&format!("/{k}"), "missing required field"))
    };
    let name = get("name")?
        .as_str()
        .ok_or_else(|| schema_err("/name", "expected a string"))?
        .to_string();
    let rank = index_at(get("rank")?, "/rank")?;
    if rank == 0 {
        return Err(schema_err("/rank", "rank must be positive"));
    }
    let rays = array_at(get("rays")?, "/rays")?
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let p = format!("/rays/{k}");
            let coords = array_at(row, &p)?;
            if coords.len() != rank {
                return Err(schema_err(
                    &p,
                    format!("expected {rank} coordinates, got {}", coords.len()),
                ));
            }
            coords
                .iter()
                .enumerate()
                .map(|(t, x)| int_at(x, &format!("{p}/{t}")))
                .collect()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let max_cones = index_lists(get("max_cones")?, "/max_cones")?;
    let nef_partition = index_lists(get("nef_partition")?, "/nef_partition")?;
    let ample_weight = match obj.get("ample_weight") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            array_at(v, "/ample_weight")?
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let p = format!("/ample_weight/{k}");
                    match x {
                        Value::Number(_) => Ok(rat(int_at(x, &p)?, 1)),
                        Value::String(s) => parse_rat(s)
                            .ok_or_else(|| schema_err(&p, "expected an exact rational \"p/q\"")),
                        _ => Err(schema_err(&p, "expected an integer or a rational string")),
                    }
                })
                .collect::<Result<Vec<Rat>>>()?,
        ),
    };
    let order = match obj.get("order") {
        None | Some(Value::Null) => DEFAULT_ORDER,
        Some(v) => {
            let d = int_at(v, "/order")?;
            if d < 0 {
                return Err(schema_err("/order", "order must be non-negative"));
            }
            d
        }
    };
    Ok(InputSpec {
        name,
        rank,
        rays,
        max_cones,
        nef_partition,
        ample_weight,
        order,
    })
}

fn semantic(spec: &InputSpec) -> Result<()> {
    let p = spec.rays.len();
    if p == 0 {
        return Err(semantic_err("/rays", "at least one ray is required"));
    }
    for k in 0..p {
        if spec.rays[k].iter().all(|&x| x == 0) {
            return Err(semantic_err(&format!("/rays/{k}"), "zero ray"));
        }
        if let Some(t) = (0..k).find(|&t| spec.rays[t] == spec.rays[k]) {
            return Err(semantic_err(
                &format!("/rays/{k}"),
                format!("ray {k} duplicates ray {t}"),
            ));
        }
    }
    if spec.max_cones.is_empty() {
        return Err(semantic_err(
            "/max_cones",
            "at least one maximal cone is required",
        ));
    }
    for (c, cone) in spec.max_cones.iter().enumerate() {
        for (t, &k) in cone.iter().enumerate() {
            if k >= p {
                return Err(semantic_err(
                    &format!("/max_cones/{c}/{t}"),
                    format!("ray index {k} out of range (have {p} rays)"),
                ));
            }
            if cone[..t].contains(&k) {
                return Err(semantic_err(
                    &format!("/max_cones/{c}/{t}"),
                    format!("ray {k} repeated in cone"),
                ));
            }
        }
    }
    if spec.nef_partition.is_empty() {
        return Err(semantic_err(
            "/nef_partition",
            "at least one block is required",
        ));
    }
    let mut owner: Vec<Option<usize>> = vec![None; p];
    for (b, block) in spec.nef_partition.iter().enumerate() {
        if block.is_empty() {
            return Err(semantic_err(&format!("/nef_partition/{b}"), "empty block"));
        }
        for (t, &k) in block.iter().enumerate() {
            let ptr = format!("/nef_partition/{b}/{t}");
            if k >= p {
                return Err(semantic_err(
                    &ptr,
                    format!("ray index {k} out of range (have {p} rays)"),
                ));
            }
            if let Some(prev) = owner[k] {
                return Err(semantic_err(
                    &ptr,
                    format!("ray {k} is duplicated: already in block {prev}"),
                ));
            }
            owner[k] = Some(b);
        }
    }
    if let Some(k) = owner.iter().position(Option::is_none) {
        return Err(semantic_err(
            "/nef_partition",
            format!("ray {k} is not covered by any block"),
        ));
    }
    if let Some(w) = &spec.ample_weight {
        if w.len() != p {
            return Err(semantic_err(
                "/ample_weight",
                format!("expected {p} entries, got {}", w.len()),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = include_str!("../fixtures/p1.json");

    #[test]
    fn parses_fixture() {
        let s = parse_input_str(P1).unwrap();
        assert_eq!(s.name, "P1");
        assert_eq!(s.rays, vec![vec![1], vec![-1]]);
        assert_eq!(s.order, 8);
    }

    #[test]
    fn overlapping_partition_names_ray() {
        let txt = P1.replace("[[0, 1]]", "[[0, 1], [1]]");
        match parse_input_str(&txt) {
            Err(Error::Semantic { pointer, message }) => {
                assert_eq!(pointer, "/nef_partition/1/0");
                assert!(message.contains("ray 1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncated_file_reports_offset() {
        let txt = &P1[..40];
        match parse_input_str(txt) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 40),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_pointer_for_bad_coordinate() {
        let txt = P1.replace("[[1], [-1]]", "[[1], [\"x\"]]");
        assert_eq!(
            parse_input_str(&txt),
            Err(Error::Schema {
                pointer: "/rays/1/0".into(),
                message: "expected an integer".into()
            })
        );
    }

    #[test]
    fn rational_weights() {
        let txt = P1.replace(
            "\"order\": 8",
            "\"order\": 4, \"ample_weight\": [\"1/2\", 1]",
        );
        let s = parse_input_str(&txt).unwrap();
        assert_eq!(s.ample_weight, Some(vec![rat(1, 2), rat(1, 1)]));
        assert_eq!(s.order, 4);
    }
}
