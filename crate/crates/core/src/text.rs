//! Text formats: group and coefficient specs, pairing, cocycle and
//! refinement files, Cayley tables and subgroup lines.
//!
//! ```text
//! cocycle table on Z/2 x Z/2 coeff QZ
//! # omitted entries are 0
//! (1,0 | 0,1) = 1/2
//!
//! cocycle bimult on Z/2 x Z/4 coeff Z/2
//! (1,2) = 1/2
//!
//! refinement on Z/4 coeff QZ
//! f(1) = 1/8
//! ```

use std::collections::HashMap;

use crate::cocycles::{CochainFunction, Cocycle};
use crate::error::{Error, Result};
use crate::fab::{Coeff, CoeffContext, Elem, FinAbGroup, Qz};
use crate::grouprec::FiniteGroup;
use crate::pairings::Pairing;

struct Src<'a> {
    line: usize,
    text: &'a str,
    /// Column of `text[0]`, 1-based.
    base: usize,
    pos: usize,
}

impl<'a> Src<'a> {
    fn new(line: usize, text: &'a str) -> Src<'a> {
        Src { line, text, base: 1, pos: 0 }
    }

    fn col(&self) -> usize {
        self.base + self.text[..self.pos].chars().count()
    }

    /// Column of the next token.
    fn mark(&mut self) -> usize {
        self.skip_ws();
        self.col()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col(), msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn eat_ci(&mut self, s: &str) -> bool {
        self.skip_ws();
        let r = self.rest();
        if r.len() >= s.len() && r.is_char_boundary(s.len()) && r[..s.len()].eq_ignore_ascii_case(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.rest().chars().next().map_or("end of line".to_string(), |c| format!("`{c}`"));
            self.err(format!("expected `{s}`, found {found}"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected trailing text `{}`", self.rest().trim_end()))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: usize = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a number");
        }
        let v = self.rest()[..digits].parse::<u64>();
        match v {
            Ok(v) => {
                self.pos += digits;
                Ok(v)
            }
            Err(_) => self.err("number too large"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let v = self.uint()?;
        let v = i64::try_from(v).or_else(|_| self.err("number too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn qz(&mut self) -> Result<Qz> {
        let num = self.int()?;
        let den = if self.eat("/") { self.uint()? } else { 1 };
        if den == 0 {
            return self.err("zero denominator");
        }
        Ok(Qz::new(num, den))
    }
}

fn group_factors(src: &mut Src) -> Result<Vec<u64>> {
    if src.eat_ci("trivial") || src.eat("0") {
        return Ok(Vec::new());
    }
    let mut moduli = Vec::new();
    loop {
        if !src.eat("Z") {
            return src.err("expected a cyclic factor `Z/n`");
        }
        src.eat("/");
        let n = src.uint()?;
        if n == 0 {
            return src.err("Z/0 is not finite");
        }
        let k = if src.eat("^") { src.uint()? } else { 1 };
        moduli.extend(std::iter::repeat_n(n, k as usize));
        if !(src.eat("x") || src.eat("X") || src.eat("×") || src.eat("*") || src.eat("+") || src.eat("⊕")) {
            break;
        }
    }
    Ok(moduli)
}

fn group_from(src: &mut Src) -> Result<FinAbGroup> {
    let moduli = group_factors(src)?;
    FinAbGroup::new(moduli)
}

fn context_from(src: &mut Src) -> Result<CoeffContext> {
    if src.eat_ci("QZ") || src.eat_ci("Q/Z") {
        let k = if src.eat("^") { src.uint()? as usize } else { 1 };
        return Ok(CoeffContext::divisible(k));
    }
    if src.eat("[") {
        let mut ms = Vec::new();
        if !src.eat("]") {
            loop {
                let m = src.uint()?;
                if m == 0 {
                    return src.err("modulus 0");
                }
                ms.push(m);
                if src.eat("]") {
                    break;
                }
                src.expect(",")?;
            }
        }
        return CoeffContext::finite(ms);
    }
    CoeffContext::finite(group_factors(src)?)
}

/// `Z/2xZ/4`, `Z/2 x Z/4`, `Z/3^3`, `0`.
pub fn parse_group(s: &str) -> Result<FinAbGroup> {
    let mut src = Src::new(1, s);
    let g = group_from(&mut src)?;
    src.finish()?;
    Ok(g)
}

/// `QZ`, `QZ^k`, a finite group spec, a moduli list `[2,4]`, or `0`.
pub fn parse_context(s: &str) -> Result<CoeffContext> {
    let mut src = Src::new(1, s);
    let c = context_from(&mut src)?;
    src.finish()?;
    Ok(c)
}

fn ints_from(src: &mut Src) -> Result<Vec<i64>> {
    let paren = src.eat("(");
    let mut out = vec![src.int()?];
    while src.eat(",") {
        out.push(src.int()?);
    }
    if paren {
        src.expect(")")?;
    }
    Ok(out)
}

fn elem_from(src: &mut Src, group: &FinAbGroup) -> Result<Elem> {
    let col = src.mark();
    let coords = ints_from(src)?;
    if group.rank() == 0 && coords == [0] {
        return Ok(group.zero());
    }
    group.elem(&coords).map_err(|e| Error::Parse { line: src.line, col, msg: e.to_string() })
}

fn value_from(src: &mut Src, ctx: &CoeffContext) -> Result<Coeff> {
    let col = src.mark();
    let coords = if src.eat("(") {
        let mut v = vec![src.qz()?];
        while src.eat(",") {
            v.push(src.qz()?);
        }
        src.expect(")")?;
        v
    } else {
        vec![src.qz()?]
    };
    let value =
        if ctx.rank() == 0 && coords.iter().all(|q| q.is_zero()) { ctx.zero() } else { Coeff::from_coords(coords) };
    ctx.check(&value).map_err(|e| Error::Parse { line: src.line, col, msg: e.to_string() })?;
    Ok(value)
}

/// An element of `group`: `(1,0)` or `1,0`.
pub fn parse_elem(group: &FinAbGroup, s: &str) -> Result<Elem> {
    let mut src = Src::new(1, s);
    let e = elem_from(&mut src, group)?;
    src.finish()?;
    Ok(e)
}

/// A coefficient value: `1/2` or `(1/2, 1/4)`.
pub fn parse_value(ctx: &CoeffContext, s: &str) -> Result<Coeff> {
    let mut src = Src::new(1, s);
    let v = value_from(&mut src, ctx)?;
    src.finish()?;
    Ok(v)
}

/// Non-blank lines with comments stripped, numbered from 1.
fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or(""))).filter(|(_, l)| !l.trim().is_empty())
}

struct Header {
    kind: String,
    group: FinAbGroup,
    ctx: CoeffContext,
}

fn header(line: usize, text: &str, kinds: &[&str]) -> Result<Header> {
    let mut src = Src::new(line, text);
    let kind = kinds
        .iter()
        .find(|k| src.eat(k))
        .map(|k| k.to_string())
        .map_or_else(|| src.err(format!("expected a header starting with one of: {}", kinds.join(", "))), Ok)?;
    src.expect("on")?;
    let group = group_from(&mut src)?;
    src.expect("coeff")?;
    let ctx = context_from(&mut src)?;
    src.finish()?;
    Ok(Header { kind, group, ctx })
}

fn first_line(s: &str) -> Result<(usize, &str)> {
    content_lines(s).next().ok_or(Error::Parse { line: 1, col: 1, msg: "empty input".into() })
}

fn generator_entry(src: &mut Src, rank: usize) -> Result<(usize, usize)> {
    src.expect("(")?;
    let col = src.mark();
    let i = src.uint()? as usize;
    src.expect(",")?;
    let j = src.uint()? as usize;
    src.expect(")")?;
    if i == 0 || j == 0 || i > rank || j > rank {
        return Err(Error::Parse { line: src.line, col, msg: format!("generator indices must lie in 1..={rank}") });
    }
    Ok((i - 1, j - 1))
}

fn pairing_body(s: &str, h: &Header) -> Result<Pairing> {
    let mut p = Pairing::zero(&h.group, &h.ctx);
    for (line, text) in content_lines(s).skip(1) {
        let mut src = Src::new(line, text);
        let (i, j) = generator_entry(&mut src, h.group.rank())?;
        src.expect("=")?;
        let col = src.mark();
        let v = value_from(&mut src, &h.ctx)?;
        src.finish()?;
        p.set(i, j, v).map_err(|e| Error::Parse { line, col, msg: e.to_string() })?;
    }
    Ok(p)
}

/// `pairing on G coeff C` followed by `(i,j) = v` lines (1-based generators).
pub fn parse_pairing(s: &str) -> Result<Pairing> {
    let (line, text) = first_line(s)?;
    let h = header(line, text, &["pairing"])?;
    pairing_body(s, &h)
}

/// `cocycle table on G coeff C` with `(x | y) = v` lines, or
/// `cocycle bimult on G coeff C` (also `pairing on ...`) with `(i,j) = v`
/// lines. Omitted entries are 0.
pub fn parse_cocycle(s: &str) -> Result<Cocycle> {
    let (line, text) = first_line(s)?;
    let h = header(line, text, &["cocycle table", "cocycle bimult", "pairing"])?;
    if h.kind != "cocycle table" {
        return Ok(Cocycle::from_pairing(pairing_body(s, &h)?));
    }
    let n = h.group.order();
    let mut values = vec![h.ctx.zero(); n * n];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (line, text) in content_lines(s).skip(1) {
        let mut src = Src::new(line, text);
        src.expect("(")?;
        let x = elem_from(&mut src, &h.group)?;
        src.expect("|")?;
        let y = elem_from(&mut src, &h.group)?;
        src.expect(")")?;
        src.expect("=")?;
        let v = value_from(&mut src, &h.ctx)?;
        src.finish()?;
        let k = h.group.index_of(&x) * n + h.group.index_of(&y);
        if let Some(prev) = seen.insert(k, line) {
            return Err(Error::Parse { line, col: 1, msg: format!("c({x}, {y}) already given on line {prev}") });
        }
        values[k] = v;
    }
    Cocycle::from_table(&h.group, &h.ctx, values)
}

/// `refinement on G coeff C` with `f(x) = v` lines; omitted values are 0.
pub fn parse_refinement(s: &str) -> Result<CochainFunction> {
    let (line, text) = first_line(s)?;
    let h = header(line, text, &["refinement"])?;
    let mut values = vec![h.ctx.zero(); h.group.order()];
    for (line, text) in content_lines(s).skip(1) {
        let mut src = Src::new(line, text);
        src.expect("f")?;
        let x = elem_from(&mut src, &h.group)?;
        src.expect("=")?;
        let col = src.mark();
        let v = value_from(&mut src, &h.ctx)?;
        src.finish()?;
        if x.is_zero() && !v.is_zero() {
            return Err(Error::Parse { line, col, msg: "f(0) must be 0".into() });
        }
        values[h.group.index_of(&x)] = v;
    }
    CochainFunction::new(&h.group, &h.ctx, values)
}

fn index_row(line: usize, text: &str, n: Option<usize>) -> Result<Vec<usize>> {
    let mut src = Src::new(line, text);
    let mut out = Vec::new();
    while !src.at_end() {
        let col = src.mark();
        let v = src.uint()? as usize;
        if let Some(n) = n {
            if v >= n {
                return Err(Error::Parse { line, col, msg: format!("index {v} out of range for order {n}") });
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Order `n`, identity index, then `n` rows of `n` 0-based indices.
pub fn parse_cayley(s: &str) -> Result<FiniteGroup> {
    let mut lines = content_lines(s);
    let (l1, t1) = lines.next().ok_or(Error::Parse { line: 1, col: 1, msg: "empty input".into() })?;
    let mut src = Src::new(l1, t1);
    let n = src.uint()? as usize;
    src.finish()?;
    if n == 0 {
        return Err(Error::Parse { line: l1, col: 1, msg: "order must be positive".into() });
    }
    let (l2, t2) = lines.next().ok_or(Error::Parse { line: l1 + 1, col: 1, msg: "missing identity line".into() })?;
    let mut src = Src::new(l2, t2);
    let identity = src.uint()? as usize;
    src.finish()?;
    let mut table = Vec::with_capacity(n * n);
    let mut last = l2;
    for r in 0..n {
        let (line, text) =
            lines.next().ok_or(Error::Parse { line: last + 1, col: 1, msg: format!("missing row {r}") })?;
        last = line;
        let row = index_row(line, text, Some(n))?;
        if row.len() != n {
            return Err(Error::Parse { line, col: 1, msg: format!("row has {} entries, expected {n}", row.len()) });
        }
        table.extend(row.into_iter().map(|v| v as u32));
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, col: 1, msg: "extra rows after the table".into() });
    }
    FiniteGroup::new(n, identity, table)
}

/// Space-separated element indices.
pub fn parse_subgroup(s: &str, order: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (line, text) in content_lines(s) {
        out.extend(index_row(line, text, Some(order))?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprec::builtin;

    #[test]
    fn group_specs() {
        assert_eq!(parse_group("Z/2xZ/4").unwrap().moduli(), &[2, 4]);
        assert_eq!(parse_group("Z/2 x Z/4").unwrap().moduli(), &[2, 4]);
        assert_eq!(parse_group("Z/3^3").unwrap().moduli(), &[3, 3, 3]);
        assert_eq!(parse_group("Z/3xZ/3xZ/3").unwrap().moduli(), &[3, 3, 3]);
        assert_eq!(parse_group("Z/1 x Z/6").unwrap().moduli(), &[6]);
        assert_eq!(parse_group("0").unwrap().order(), 1);
        assert!(matches!(parse_group("Z/2 x Q"), Err(Error::Parse { line: 1, col: 7, .. })));
        assert!(matches!(parse_group("Z/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn context_specs() {
        assert_eq!(parse_context("QZ").unwrap(), CoeffContext::divisible(1));
        assert_eq!(parse_context("QZ^2").unwrap(), CoeffContext::divisible(2));
        assert_eq!(parse_context("Z/2").unwrap(), CoeffContext::finite([2]).unwrap());
        assert_eq!(parse_context("[2, 4]").unwrap(), CoeffContext::finite([2, 4]).unwrap());
        assert_eq!(parse_context("0").unwrap(), CoeffContext::trivial());
    }

    #[test]
    fn values_and_elements() {
        let qz = CoeffContext::divisible(1);
        assert_eq!(parse_value(&qz, "3/4").unwrap(), Coeff::scalar(Qz::new(3, 4)));
        assert_eq!(parse_value(&qz, "-1/4").unwrap(), Coeff::scalar(Qz::new(3, 4)));
        let z2 = CoeffContext::finite([2]).unwrap();
        assert!(matches!(parse_value(&z2, "1/4"), Err(Error::Parse { col: 1, .. })));
        let a = parse_group("Z/2xZ/4").unwrap();
        assert_eq!(parse_elem(&a, "(1, 3)").unwrap(), a.elem(&[1, 3]).unwrap());
        assert_eq!(parse_elem(&a, "1,-1").unwrap(), a.elem(&[1, 3]).unwrap());
        assert!(parse_elem(&a, "(1)").is_err());
    }

    #[test]
    fn pairing_and_cocycle_files_round_trip() {
        let p = parse_pairing("pairing on Z/2 x Z/4 coeff QZ\n(1,2) = 1/2\n(2,2) = 1/4 # diagonal\n").unwrap();
        assert_eq!(p.entry(0, 1), &Coeff::scalar(Qz::new(1, 2)));
        assert_eq!(parse_pairing(&p.to_string()).unwrap(), p);
        let c = Cocycle::from_pairing(p.clone());
        assert_eq!(parse_cocycle(&c.to_string()).unwrap(), c);
        let t = c.to_table();
        let back = parse_cocycle(&t.to_string()).unwrap();
        assert_eq!(back, t);
        assert!(back.as_pairing().is_none());
        let bad = parse_pairing("pairing on Z/2 x Z/4 coeff QZ\n(1,2) = 1/4\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 2, col: 9, .. }), "{bad}");
        let bad = parse_cocycle("cocycle table on Z/2 coeff QZ\n(1 | 1) = 1/2\n(1 | 1) = 0\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 3, .. }));
        let bad = parse_cocycle("cocycle graph on Z/2 coeff QZ\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 1, col: 1, .. }));
    }

    #[test]
    fn refinement_files_round_trip() {
        let a = parse_group("Z/4").unwrap();
        let qz = CoeffContext::divisible(1);
        let f = CochainFunction::new(
            &a,
            &qz,
            ["0", "1/8", "1/2", "1/8"].iter().map(|v| parse_value(&qz, v).unwrap()).collect(),
        )
        .unwrap();
        assert_eq!(parse_refinement(&f.to_string()).unwrap(), f);
        assert!(parse_refinement("refinement on Z/4 coeff QZ\nf(0) = 1/2\n").is_err());
    }

    #[test]
    fn cayley_files() {
        let g = builtin("q8").unwrap();
        assert_eq!(parse_cayley(&g.to_cayley_string()).unwrap(), g);
        let bad = parse_cayley("2\n0\n0 1\n1 2\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 4, col: 3, .. }), "{bad}");
        assert!(matches!(parse_cayley("2\n0\n0 1\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_cayley("2\n0\n0 1\n1 1\n"), Err(Error::InvalidTable(_))));
        assert_eq!(parse_subgroup("0 4\n", 8).unwrap(), vec![0, 4]);
        assert!(parse_subgroup("0 9", 8).is_err());
    }
}
