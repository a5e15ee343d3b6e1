use super::PolySymbol;
use crate::error::{Error, Result};

/// One term per line: `coeff alpha_1 ... alpha_n`. Blank lines and `#` comments are skipped.
/// The dimension is fixed by the first term line.
pub(super) fn parse(src: &str) -> Result<PolySymbol> {
    let mut dim = None;
    let mut terms = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let mut fields = line.split_whitespace();
        let coeff: f64 = fields
            .next()
            .ok_or_else(|| err("missing coefficient".into()))?
            .parse()
            .map_err(|e| err(format!("bad coefficient: {e}")))?;
        let alpha = fields
            .map(|f| f.parse::<u32>().map_err(|e| err(format!("bad exponent {f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        match dim {
            None if alpha.is_empty() => return Err(err("term has no exponents".into())),
            None => dim = Some(alpha.len()),
            Some(n) if n != alpha.len() => {
                return Err(err(format!("expected {n} exponents, found {}", alpha.len())))
            }
            Some(_) => {}
        }
        terms.push((alpha, coeff));
    }
    let dim = dim.ok_or(Error::Parse { line: 0, msg: "no terms".into() })?;
    PolySymbol::new(dim, terms)
}
