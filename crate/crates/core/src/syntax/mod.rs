mod lexer;
mod parser;
mod print;

use std::sync::Arc;

use crate::error::Result;
use crate::expr::{Expr, Type};
use crate::pattern::Pattern;
use crate::value::Value;
use parser::Parser;

pub use print::{render_diff, render_trace};

/// Parses a query. `for` comprehensions are desugared into the core forms.
pub fn parse_query(src: &str) -> Result<Arc<Expr>> {
    let mut p = Parser::new(src)?;
    let e = p.expr(false)?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_pattern(src: &str) -> Result<Pattern> {
    let mut p = Parser::new(src)?;
    let pat = p.pattern()?;
    p.expect_eof()?;
    Ok(pat)
}

pub fn parse_value(src: &str) -> Result<Value> {
    let mut p = Parser::new(src)?;
    let v = p.value()?;
    p.expect_eof()?;
    Ok(v)
}

pub fn parse_type(src: &str) -> Result<Type> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn round(src: &str) -> String {
        let e = parse_query(src).unwrap();
        let shown = e.to_string();
        assert_eq!(*parse_query(&shown).unwrap(), *e, "{shown}");
        shown
    }

    #[test]
    fn for_sugar() {
        let shown = round("for x in R where x.B = 3 return <A: x.A, B: x.C>");
        assert_eq!(shown, "union {if x.B = 3 then {<A: x.A, B: x.C>} else {} | x in R}");
    }

    #[test]
    fn precedence_round_trips() {
        round("1 + 2 * 3 - (4 - 5)");
        round("(1 + 2) * 3");
        round("!(x && y) || z");
        round("<A: (x > 3), B: sum R>");
        round("let x = 1 in if x < 2 then {} : {int} else {x}");
        round("union {{1}, {2}} ");
        round("1 - -3");
        round("sum union {{x.A} | x in R}");
        round("(if b then 1 else 2) + 3");
        round("empty _");
    }

    #[test]
    fn comparisons_do_not_chain() {
        assert!(matches!(parse_query("1 < 2 < 3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn patterns() {
        for src in [
            "_",
            "*",
            "{[r2].<B: 3; _>} U _",
            "{[1,r1].<A: 1, B: 2>, [2].*} U *",
            "<; _>",
            "<>",
            "{}",
            "{[].7}",
            "-4",
        ] {
            let p = parse_pattern(src).unwrap();
            assert_eq!(parse_pattern(&p.to_string()).unwrap(), p, "{src}");
        }
        assert_eq!(parse_pattern("{} U _").unwrap(), Pattern::Hole);
        assert!(parse_pattern("{[a].1, [a,b].2}").is_err());
    }

    #[test]
    fn values_and_types() {
        let v = parse_value("{[r1].<A: 1, B: true>}").unwrap();
        assert_eq!(parse_value(&v.to_string()).unwrap(), v);
        assert!(parse_value("{[r1]._}").is_err());
        let t = parse_type("{<A: int, B: {bool}>}").unwrap();
        assert_eq!(parse_type(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn error_positions() {
        match parse_query("let x = 1 in\n  x +") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            r => panic!("{r:?}"),
        }
    }
}
