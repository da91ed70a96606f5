//! Test support: independent oracles, seeded generators, benchmark
//! families and helpers for reading solver output.

pub mod families;
pub mod generate;
pub mod oracles;

use std::collections::HashMap;

use thiserror::Error;

use crate::smtlib::{tokenize, TokenKind};

pub use families::{benchmark, disjunct_choice_oracle, emit_benchmark, parse_manifest, write_suite, Benchmark, Family};
pub use generate::{
    generate, random_push_pop_script, random_spec, render_instance, Instance, PushPopScript, RandomInstanceSpec,
    Structure,
};
pub use oracles::{
    bellman_ford_consistent, enumerate_oracle, scratch_floyd_warshall, DistRows, Feasibility, Formula, NegativeCycle,
    OAtom, OracleError, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelValue {
    Int(i128),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed model: {0}")]
pub struct ModelParseError(String);

/// Parses `(model (define-fun x () Int 3) (define-fun p () Bool true) ...)`.
/// The leading `model` keyword is optional.
pub fn parse_model(text: &str) -> Result<HashMap<String, ModelValue>, ModelParseError> {
    let err = |m: &str| ModelParseError(m.to_string());
    let toks = tokenize(text).map_err(|e| ModelParseError(e.to_string()))?;
    let mut i = 0;
    let expect = |i: &mut usize, kind: TokenKind, text: Option<&str>| -> Result<String, ModelParseError> {
        let t = toks.get(*i).ok_or_else(|| err("unexpected end"))?;
        if t.kind != kind || text.is_some_and(|s| s != t.text) {
            return Err(ModelParseError(format!("unexpected `{}`", t.text)));
        }
        *i += 1;
        Ok(t.symbol_name().to_string())
    };
    expect(&mut i, TokenKind::LParen, None)?;
    if toks
        .get(i)
        .is_some_and(|t| t.kind == TokenKind::Symbol && t.text == "model")
    {
        i += 1;
    }
    let mut out = HashMap::new();
    while toks.get(i).is_some_and(|t| t.kind == TokenKind::LParen) {
        i += 1;
        expect(&mut i, TokenKind::Symbol, Some("define-fun"))?;
        let name = expect(&mut i, TokenKind::Symbol, None)?;
        expect(&mut i, TokenKind::LParen, None)?;
        expect(&mut i, TokenKind::RParen, None)?;
        let sort = expect(&mut i, TokenKind::Symbol, None)?;
        let value = match sort.as_str() {
            "Bool" => ModelValue::Bool(expect(&mut i, TokenKind::Symbol, None)? == "true"),
            "Int" => {
                if toks.get(i).is_some_and(|t| t.kind == TokenKind::LParen) {
                    i += 1;
                    expect(&mut i, TokenKind::Symbol, Some("-"))?;
                    let n = expect(&mut i, TokenKind::Numeral, None)?;
                    expect(&mut i, TokenKind::RParen, None)?;
                    ModelValue::Int(-n.parse::<i128>().map_err(|_| err("numeral"))?)
                } else {
                    let n = expect(&mut i, TokenKind::Numeral, None)?;
                    ModelValue::Int(n.parse::<i128>().map_err(|_| err("numeral"))?)
                }
            }
            other => return Err(ModelParseError(format!("unknown sort {other}"))),
        };
        expect(&mut i, TokenKind::RParen, None)?;
        out.insert(name, value);
    }
    expect(&mut i, TokenKind::RParen, None)?;
    Ok(out)
}

/// Integer and Boolean value vectors for generated instances, where
/// integer variable `i` is named `x{i}` and Boolean `j` is `p{j}`. Missing
/// entries read as 0 and false.
pub fn model_vectors(model: &HashMap<String, ModelValue>, vars: usize, bools: usize) -> (Vec<i128>, Vec<bool>) {
    let mut ints = vec![0i128; vars + 1];
    for (i, v) in ints.iter_mut().enumerate().skip(1) {
        if let Some(ModelValue::Int(x)) = model.get(&generate::int_name(i)) {
            *v = *x;
        }
    }
    let bs = (0..bools)
        .map(|j| matches!(model.get(&generate::bool_name(j)), Some(ModelValue::Bool(true))))
        .collect();
    (ints, bs)
}

/// Parses `(a1 a2 ...)`.
pub fn parse_core(text: &str) -> Option<Vec<String>> {
    let toks = tokenize(text).ok()?;
    let (first, rest) = toks.split_first()?;
    if first.kind != TokenKind::LParen {
        return None;
    }
    let mut names = Vec::new();
    for t in rest {
        match t.kind {
            TokenKind::Symbol => names.push(t.symbol_name().to_string()),
            TokenKind::RParen => return Some(names),
            _ => return None,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_models() {
        let m = parse_model(
            "(model\n  (define-fun x1 () Int (- 3))\n  (define-fun p0 () Bool true)\n  (define-fun |y z| () Int 12)\n)",
        )
        .unwrap();
        assert_eq!(m["x1"], ModelValue::Int(-3));
        assert_eq!(m["p0"], ModelValue::Bool(true));
        assert_eq!(m["y z"], ModelValue::Int(12));
        assert!(parse_model("(model").is_err());
        assert_eq!(parse_model("(model\n)").unwrap().len(), 0);
    }

    #[test]
    fn parses_cores() {
        assert_eq!(parse_core("(a1 a2)"), Some(vec!["a1".to_string(), "a2".to_string()]));
        assert_eq!(parse_core("()"), Some(vec![]));
        assert_eq!(parse_core("unsat"), None);
    }
}
