//! Line-oriented scripts shared by the derivation and map file formats.
//!
//! ```text
//! # comment
//! vars x, y, z
//! let f = x*z - y^2
//! <lhs> = <expr>
//! ```
//!
//! `let` bindings may refer to earlier bindings and are expanded while
//! parsing every later expression.

use std::collections::BTreeMap;

use crate::polyring::{parse_with, MultiPoly, ParseError, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScriptError {
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ParseError },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

pub(crate) struct Script {
    pub vars: VarSet,
    pub lets: BTreeMap<String, MultiPoly>,
    /// (line number, left-hand side, parsed right-hand side)
    pub assignments: Vec<(usize, String, MultiPoly)>,
}

pub(crate) fn parse_script(text: &str, default_vars: &VarSet) -> Result<Script, ScriptError> {
    let mut vars = default_vars.clone();
    let mut lets = BTreeMap::new();
    let mut assignments = Vec::new();
    let mut seen_expr = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("vars ") {
            if seen_expr {
                return Err(ScriptError::Line {
                    line,
                    msg: "`vars` must come before any expression".into(),
                });
            }
            let names: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            vars = VarSet::new(names).map_err(|e| ScriptError::Line {
                line,
                msg: e.to_string(),
            })?;
            continue;
        }
        let (lhs, rhs) = body.split_once('=').ok_or_else(|| ScriptError::Line {
            line,
            msg: "expected `name = expression`".into(),
        })?;
        seen_expr = true;
        let value = parse_with(rhs.trim(), &vars, &lets).map_err(|source| ScriptError::Expr { line, source })?;
        let lhs = lhs.trim();
        if let Some(name) = lhs.strip_prefix("let ") {
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ScriptError::Line {
                    line,
                    msg: format!("bad binding name `{name}`"),
                });
            }
            lets.insert(name.to_string(), value);
        } else {
            assignments.push((line, lhs.to_string(), value));
        }
    }
    Ok(Script {
        vars,
        lets,
        assignments,
    })
}
