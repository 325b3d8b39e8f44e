//! Text forms of groups, elements, subsets and sequences.
//!
//! ```text
//! group    := "C1" | cyclic (sep cyclic)* | "[" (int ("," int)*)? "]"
//! cyclic   := "C" int            sep := "x" | "X" | "×" | "*"
//! element  := int | "(" int ("," int)* ")"
//! subset   := "{" (element ("," element)*)? "}"
//! sequence := (element ("^" int)?)*      whitespace separated
//! ```
//!
//! Tuples are coordinates in the invariant-factor form of the group, reduced
//! modulo each factor; a bare integer is an element index.

use crate::error::{Error, Result};
use crate::group::{make_group, Element, Group};
use crate::sequence::Sequence;
use crate::subset::GroupSubset;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.pos, message)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut len = 0;
        if rest.starts_with('-') {
            len = 1;
        }
        len += rest[len..].bytes().take_while(u8::is_ascii_digit).count();
        let text = &rest[..len];
        if text.is_empty() || text == "-" {
            return Err(self.error("expected an integer"));
        }
        self.pos += len;
        text.parse()
            .map_err(|_| Error::parse(start, format!("integer '{text}' out of range")))
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        let v = self.int()?;
        usize::try_from(v).map_err(|_| Error::parse(start, "expected a nonnegative integer"))
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_group(s: &str) -> Result<Group> {
    let mut c = Cursor::new(s);
    let mut moduli = Vec::new();
    if c.eat('[') {
        if !c.eat(']') {
            loop {
                moduli.push(c.uint()?);
                if c.eat(']') {
                    break;
                }
                c.expect(',')?;
            }
        }
    } else {
        loop {
            if !(c.eat('C') || c.eat('c')) {
                return Err(c.error("expected 'C<m>' or '[m, ...]'"));
            }
            moduli.push(c.uint()?);
            if !(c.eat('x') || c.eat('X') || c.eat('×') || c.eat('*')) {
                break;
            }
        }
        if moduli == [1] {
            moduli.clear();
        }
    }
    c.finish()?;
    make_group(&moduli)
}

fn element(c: &mut Cursor, g: &Group) -> Result<Element> {
    let start = c.pos;
    if c.eat('(') {
        let mut coords = Vec::new();
        loop {
            coords.push(c.int()?);
            if c.eat(')') {
                break;
            }
            c.expect(',')?;
        }
        g.from_coords(&coords)
            .map_err(|e| Error::parse(start, e.to_string()))
    } else {
        let i = c.uint()?;
        g.element(i).map_err(|e| Error::parse(start, e.to_string()))
    }
}

pub fn parse_element(g: &Group, s: &str) -> Result<Element> {
    let mut c = Cursor::new(s);
    let x = element(&mut c, g)?;
    c.finish()?;
    Ok(x)
}

pub fn parse_subset(g: &Group, s: &str) -> Result<GroupSubset> {
    let mut c = Cursor::new(s);
    c.expect('{')?;
    let mut elems = Vec::new();
    if !c.eat('}') {
        loop {
            elems.push(element(&mut c, g)?);
            if c.eat('}') {
                break;
            }
            c.expect(',')?;
        }
    }
    c.finish()?;
    GroupSubset::from_elements(g, &elems)
}

pub fn parse_sequence(g: &Group, s: &str) -> Result<Sequence> {
    let mut c = Cursor::new(s);
    let mut counts = vec![0usize; g.order()];
    while c.peek().is_some() {
        let x = element(&mut c, g)?;
        let k = if c.eat('^') { c.uint()? } else { 1 };
        counts[x.index()] += k;
    }
    Sequence::from_counts(g, &counts)
}

/// Index for cyclic groups, coordinate tuple otherwise.
pub fn format_element(g: &Group, x: Element) -> String {
    if g.rank() <= 1 {
        x.to_string()
    } else {
        let parts: Vec<String> = g.coords(x).iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }
}

pub fn format_subset(a: &GroupSubset) -> String {
    let parts: Vec<String> = a.elements().map(|x| format_element(a.group(), x)).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn format_sequence(s: &Sequence) -> String {
    let g = s.group();
    let parts: Vec<String> = s
        .multiplicities()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(x, &m)| {
            let e = format_element(g, g.element(x).unwrap());
            if m == 1 {
                e
            } else {
                format!("{e}^{m}")
            }
        })
        .collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups() {
        assert_eq!(parse_group("C2xC4").unwrap().moduli(), &[2, 4]);
        assert_eq!(parse_group("[2, 4]").unwrap().moduli(), &[2, 4]);
        assert_eq!(parse_group("C3 × C2").unwrap().moduli(), &[6]);
        assert_eq!(parse_group("c2*C2").unwrap().moduli(), &[2, 2]);
        assert!(parse_group("C1").unwrap().is_trivial());
        assert!(parse_group("[]").unwrap().is_trivial());
        assert!(matches!(parse_group("[1]"), Err(Error::InvalidModulus(1))));
        assert!(matches!(parse_group("C2x"), Err(Error::Parse { offset: 3, .. })));
        assert!(matches!(parse_group("D4"), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn subsets_and_sequences() {
        let g = parse_group("C2xC4").unwrap();
        let a = parse_subset(&g, "{(0,0),(1,2)}").unwrap();
        assert_eq!(format_subset(&a), "{(0,0),(1,2)}");
        assert_eq!(parse_subset(&g, "{0, 6}").unwrap(), a);
        assert!(parse_subset(&g, "{}").unwrap().is_empty());
        assert!(matches!(parse_subset(&g, "{8}"), Err(Error::Parse { .. })));
        let c4 = parse_group("C4").unwrap();
        let s = parse_sequence(&c4, "0^2 1 2^2").unwrap();
        assert_eq!(s.multiplicities(), &[2, 1, 2, 0]);
        assert_eq!(format_sequence(&s), "0^2 1 2^2");
        let t = parse_sequence(&g, "(0,1)^3 (1,0)").unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(parse_sequence(&g, &format_sequence(&t)).unwrap(), t);
        assert_eq!(parse_element(&g, "(1,-1)").unwrap(), g.from_coords(&[1, 3]).unwrap());
    }
}
