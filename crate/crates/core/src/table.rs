use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::expr::Type;
use crate::json::{type_from_json, type_to_json, value_from_json, value_to_json};
use crate::label::{Atom, Label};
use crate::types::{value_has_type, TypeEnv};
use crate::value::{name, Env, Name, Value};

/// A named input collection whose rows are labelled by single-atom ids.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: Name,
    /// Row type.
    pub schema: Type,
    pub value: Value,
}

impl Table {
    /// Builds a table from `(id, row)` pairs, checking ids and row types.
    pub fn new(table: &str, schema: Type, rows: Vec<(String, Value)>) -> Result<Table> {
        if !crate::label::is_valid_name(table) {
            return Err(Error::Format(format!("invalid table name {table:?}")));
        }
        let mut m = BTreeMap::new();
        for (id, v) in rows {
            let atom = Atom::parse(&id).map_err(|_| Error::Format(format!("invalid row id {id:?}")))?;
            if !value_has_type(&v, &schema) {
                return Err(Error::Format(format!("row {id} of {table} does not have type {schema}")));
            }
            if !v.is_prefix_labeled() {
                return Err(Error::NotPrefixCode);
            }
            if m.insert(Label::new(vec![atom]), v).is_some() {
                return Err(Error::Format(format!("duplicate row id {id} in {table}")));
            }
        }
        Ok(Table {
            name: name(table),
            schema,
            value: Value::Coll(m),
        })
    }

    pub fn ty(&self) -> Type {
        Type::set(self.schema.clone())
    }

    pub fn from_json(j: &Json) -> Result<Table> {
        let field = |k: &str| j.get(k).ok_or_else(|| Error::Format(format!("table is missing {k:?}")));
        let table = field("name")?
            .as_str()
            .ok_or_else(|| Error::Format("table name must be a string".into()))?;
        let schema = type_from_json(field("schema")?)?;
        let rows = field("rows")?
            .as_array()
            .ok_or_else(|| Error::Format("rows must be an array".into()))?
            .iter()
            .map(|r| {
                let id = match r.get("id") {
                    Some(Json::String(s)) => s.clone(),
                    Some(Json::Number(n)) => n.to_string(),
                    _ => return Err(Error::Format("row id must be a string".into())),
                };
                let v = value_from_json(r.get("value").ok_or_else(|| Error::Format("row is missing \"value\"".into()))?)?;
                Ok((id, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Table::new(table, schema, rows)
    }

    pub fn to_json(&self) -> Json {
        let rows: Vec<Json> = match &self.value {
            Value::Coll(m) => m
                .iter()
                .map(|(l, v)| json!({ "id": l.atoms()[0].to_string(), "value": value_to_json(v) }))
                .collect(),
            _ => Vec::new(),
        };
        json!({ "name": self.name.to_string(), "schema": type_to_json(&self.schema), "rows": rows })
    }
}

/// Reads a table file.
pub fn load_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let j: Json = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Table::from_json(&j)
}

/// The value and type environments for a set of tables.
pub fn environments(tables: &[Table]) -> Result<(Env, TypeEnv)> {
    let mut env = Env::new();
    let mut types = TypeEnv::new();
    for t in tables {
        if env.insert(t.name.clone(), t.value.clone()).is_some() {
            return Err(Error::Format(format!("table {} given twice", t.name)));
        }
        types.insert(t.name.clone(), t.ty());
    }
    Ok((env, types))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let j = json!({
            "name": "R",
            "schema": {"rec": {"A": "int", "B": "int"}},
            "rows": [
                {"id": "r1", "value": {"rec": {"A": {"int": 1}, "B": {"int": 2}}}},
                {"id": "r2", "value": {"rec": {"A": {"int": 2}, "B": {"int": 3}}}}
            ]
        });
        let t = Table::from_json(&j).unwrap();
        assert_eq!(t.value.as_coll().unwrap().len(), 2);
        assert_eq!(Table::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn rejects_bad_rows() {
        let dup = json!({"name": "R", "schema": "int", "rows": [
            {"id": "r1", "value": {"int": 1}}, {"id": "r1", "value": {"int": 2}}]});
        assert!(Table::from_json(&dup).is_err());
        let ill = json!({"name": "R", "schema": "int", "rows": [{"id": "r1", "value": {"bool": true}}]});
        assert!(Table::from_json(&ill).is_err());
    }
}
