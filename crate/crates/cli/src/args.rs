//! Parsers for the textual arguments: rationals, pairs, variable lists.

use cartier_core::poly::split_top_level;
use cartier_core::{parse_poly_list, Ideal, Ring};
use num_rational::Rational64;

use crate::CliError;

pub fn rational(text: &str) -> Result<Rational64, CliError> {
    let t = text.trim();
    let r: Rational64 = t
        .parse()
        .map_err(|_| CliError::Usage(format!("expected NUM/DEN, got `{t}`")))?;
    if r < Rational64::from_integer(0) {
        return Err(CliError::Usage(format!("negative rational `{t}`")));
    }
    Ok(r)
}

pub fn fmt_rat(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn var_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Identifiers of an expression, sorted and deduplicated.
pub fn infer_vars(exprs: &[&str]) -> Vec<String> {
    let mut out = std::collections::BTreeSet::new();
    for e in exprs {
        let mut cur = String::new();
        for ch in e.chars().chain(std::iter::once(' ')) {
            if ch.is_ascii_alphabetic() || ch == '_' || (!cur.is_empty() && ch.is_ascii_digit()) {
                cur.push(ch);
            } else if !cur.is_empty() {
                out.insert(std::mem::take(&mut cur));
            }
        }
    }
    out.into_iter().collect()
}

/// `EXPR` or `(g1, g2)` as an ideal.
pub fn ideal(text: &str, ring: &Ring) -> Result<Ideal, CliError> {
    let t = text.trim();
    let inner = match t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        Some(s) if split_top_level(s, ',').len() > 1 => s,
        _ => t,
    };
    Ok(Ideal::new(ring, parse_poly_list(inner, ring)?)?)
}

/// `EXPR:NUM/DEN`, split at the last colon.
pub fn pair(text: &str, ring: &Ring) -> Result<(Ideal, Rational64), CliError> {
    let (e, t) = text
        .rsplit_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected EXPR:NUM/DEN, got `{text}`")))?;
    Ok((ideal(e, ring)?, rational(t)?))
}

pub fn expr_of_pair(text: &str) -> &str {
    text.rsplit_once(':').map_or(text, |(e, _)| e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_vars() {
        assert_eq!(rational("2/6").unwrap(), Rational64::new(1, 3));
        assert_eq!(rational("3").unwrap(), Rational64::from_integer(3));
        assert!(rational("0.5").is_err());
        assert_eq!(
            infer_vars(&["x^2+y3*x", "t*x1"]),
            vec!["t", "x", "x1", "y3"]
        );
        assert_eq!(var_list("x, y"), vec!["x", "y"]);
    }

    #[test]
    fn parses_pairs() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let (i, t) = pair("x+y:1/3", &r).unwrap();
        assert_eq!(i.basis_string().unwrap(), "(x + y)");
        assert_eq!(t, Rational64::new(1, 3));
        let (i, _) = pair("(x, y^2):2", &r).unwrap();
        assert_eq!(i.generators().len(), 2);
    }
}
