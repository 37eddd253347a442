//! Parsers for the textual argument syntax.
//!
//! * lists: `1,2,3` (commas and/or spaces);
//! * multiplicative characters: indices against the field generator;
//! * additive characters and field elements: element codes;
//! * matrices: rows separated by `;`, each optionally labelled `rK:`,
//!   e.g. `r1:1,1,1,0;r2:2,0,0,1`;
//! * characters of H_Δ: block indices, then `|` and one `a=…` group per
//!   block of size > 1, e.g. `1,0,1|a=2` for Δ = (1,1,2);
//! * characters of a variety's group: multiplicative indices, then `|` and
//!   the additive codes, e.g. `1,2,0|1` (the `a=` prefix is optional).

use ffhgf::genhgf::JmChar;
use ffhgf::varieties::{GroupChar, Layout};
use ffhgf::{Ctx, Elem, Field, HDeltaChar, MatK, MulChar, Partition};

use crate::{parse_err, Result};

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

pub fn ints(s: &str) -> Result<Vec<i64>> {
    tokens(s).map(|t| t.parse::<i64>().map_err(|_| parse_err(format!("{t:?} is not an integer")))).collect()
}

pub fn u64s(s: &str) -> Result<Vec<u64>> {
    tokens(s).map(|t| t.parse::<u64>().map_err(|_| parse_err(format!("{t:?} is not a field size")))).collect()
}

pub fn elem(f: &Field, code: i64) -> Result<Elem> {
    if code < 0 || code >= f.q() as i64 {
        return Err(parse_err(format!("element code {code} is outside 0..{}", f.q())));
    }
    Ok(Elem(code as u32))
}

pub fn elems(f: &Field, s: &str) -> Result<Vec<Elem>> {
    ints(s)?.into_iter().map(|c| elem(f, c)).collect()
}

/// Characters by index; indices are taken modulo q − 1.
pub fn chars(ctx: &Ctx, s: &str) -> Result<Vec<MulChar>> {
    Ok(ints(s)?.into_iter().map(|j| ctx.chr(j)).collect())
}

pub fn one_char(ctx: &Ctx, s: &str) -> Result<MulChar> {
    match chars(ctx, s)?.as_slice() {
        [c] => Ok(*c),
        other => Err(parse_err(format!("expected one character index, got {}", other.len()))),
    }
}

pub fn matrix(f: &Field, s: &str) -> Result<MatK> {
    let rows = s
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            let body = match r.split_once(':') {
                Some((label, body)) if label.trim().starts_with('r') => body,
                Some(_) => return Err(parse_err(format!("bad row label in {r:?}"))),
                None => r,
            };
            elems(f, body)
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(parse_err("empty matrix"));
    }
    MatK::from_rows(rows).map_err(|e| parse_err(e.to_string()))
}

fn additive_groups(s: &str) -> Vec<&str> {
    s.split(';').map(|g| g.trim()).filter(|g| !g.is_empty()).map(|g| g.strip_prefix("a=").unwrap_or(g)).collect()
}

pub fn hdelta_char(ctx: &Ctx, delta: &Partition, s: &str) -> Result<HDeltaChar> {
    let (mult, add) = s.split_once('|').unwrap_or((s, ""));
    let alphas = chars(ctx, mult)?;
    if alphas.len() != delta.len() {
        return Err(parse_err(format!("Δ = ({delta}) has {} blocks, got {} indices", delta.len(), alphas.len())));
    }
    let mut groups = additive_groups(add).into_iter();
    let mut blocks = Vec::new();
    for (&m, &alpha) in delta.parts().iter().zip(&alphas) {
        let a = if m == 1 {
            vec![]
        } else {
            let g = groups.next().ok_or_else(|| parse_err(format!("missing a=… for a block of size {m}")))?;
            elems(ctx.field(), g)?
        };
        if a.len() + 1 != m {
            return Err(parse_err(format!("a block of size {m} needs {} additive codes, got {}", m - 1, a.len())));
        }
        blocks.push(JmChar::new(alpha, a));
    }
    if groups.next().is_some() {
        return Err(parse_err("more a=… groups than blocks of size > 1"));
    }
    HDeltaChar::new(delta, blocks).map_err(|e| parse_err(e.to_string()))
}

pub fn group_char(ctx: &Ctx, layout: Layout, s: &str) -> Result<GroupChar> {
    let (mult, add) = s.split_once('|').unwrap_or((s, ""));
    let m = chars(ctx, mult)?;
    let a: Vec<Elem> = additive_groups(add).into_iter().map(|g| elems(ctx.field(), g)).collect::<Result<Vec<_>>>()?.concat();
    if m.len() != layout.mult || a.len() != layout.add {
        return Err(parse_err(format!(
            "expected {} multiplicative indices and {} additive codes, got {} and {}",
            layout.mult,
            layout.add,
            m.len(),
            a.len()
        )));
    }
    Ok(GroupChar::new(m, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffhgf::ffield::field_q;

    #[test]
    fn lists_and_matrices() {
        assert_eq!(ints("1, 2 3").unwrap(), vec![1, 2, 3]);
        assert!(ints("1,x").is_err());
        let f = field_q(5).unwrap();
        let m = matrix(&f, "r1:1,2,3;r2:4,0,1").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m.get(1, 0), Elem(4));
        assert_eq!(matrix(&f, "1 2;3 4").unwrap().get(1, 1), Elem(4));
        assert!(matrix(&f, "1,5").is_err());
        assert!(matrix(&f, "1,2;3").is_err());
    }

    #[test]
    fn h_delta_characters() {
        let ctx = Ctx::new(field_q(3).unwrap());
        let d = Partition::parse("1,1,2").unwrap();
        let chi = hdelta_char(&ctx, &d, "1,0,1|a=2").unwrap();
        assert_eq!(chi.blocks[2].a, vec![Elem(2)]);
        assert_eq!(chi.blocks[0].alpha, ctx.chr(1));
        assert!(hdelta_char(&ctx, &d, "1,0,1").is_err());
        assert!(hdelta_char(&ctx, &d, "1,0|a=2").is_err());
        let d = Partition::parse("1,3").unwrap();
        let ctx5 = Ctx::new(field_q(5).unwrap());
        assert_eq!(hdelta_char(&ctx5, &d, "1,2|a=1,4").unwrap().blocks[1].a, vec![Elem(1), Elem(4)]);
    }

    #[test]
    fn group_characters() {
        let ctx = Ctx::new(field_q(3).unwrap());
        let chi = group_char(&ctx, Layout { mult: 3, add: 1, free: 0 }, "1,1,0|a=2").unwrap();
        assert_eq!(chi.add, vec![Elem(2)]);
        assert!(group_char(&ctx, Layout { mult: 4, add: 0, free: 0 }, "1,1,0").is_err());
    }
}
