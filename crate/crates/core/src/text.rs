//! Textual antichain format.
//!
//! ```text
//! antichain := "{" [ set ("," set)* ] "}"
//! set       := "{" [ int ("," int)* ] "}"
//! ```
//!
//! Whitespace is ignored anywhere. `{}` is `⊥` and `{{}}` is `{∅}`.

use crate::antichain::{Antichain, Universe};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.err(format!("expected '{}', found '{}'", c as char, got as char))),
            None => Err(self.err(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn int(&mut self, n: usize) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an element"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: usize = digits.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("element {digits} out of range"),
        })?;
        if value == 0 || value > n {
            return Err(Error::Parse {
                pos: start,
                msg: format!("element {value} outside 1..={n}"),
            });
        }
        Ok(1 << (value - 1))
    }

    fn set(&mut self, n: usize) -> Result<u64> {
        self.expect(b'{')?;
        let mut bits = 0u64;
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(bits);
        }
        loop {
            bits |= self.int(n)?;
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(bits);
                }
                _ => return Err(self.err("expected ',' or '}' inside a set")),
            }
        }
    }

    fn family(&mut self, n: usize) -> Result<Vec<u64>> {
        self.expect(b'{')?;
        let mut sets = Vec::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
        } else {
            loop {
                sets.push(self.set(n)?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b'}') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected ',' or '}' between sets")),
                }
            }
        }
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(sets)
    }
}

/// Parses a family of sets without requiring incomparability.
pub fn parse_family(universe: Universe, text: &str) -> Result<Vec<u64>> {
    Cursor {
        src: text.as_bytes(),
        pos: 0,
    }
    .family(universe.n())
}

/// Parses an antichain. Comparable members are a precondition error.
pub fn parse_antichain(universe: Universe, text: &str) -> Result<Antichain> {
    Antichain::from_masks(universe, parse_family(universe, text)?)
}

/// Parses a family and normalizes it with `maxAC`.
pub fn parse_family_max_ac(universe: Universe, text: &str) -> Result<Antichain> {
    Antichain::max_ac(universe, parse_family(universe, text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    #[test]
    fn canonical_printing_reorders() {
        let a = parse_antichain(u(3), "{{2,3},{1}}").unwrap();
        assert_eq!(a.to_string(), "{{1},{2,3}}");
        let b = parse_antichain(u(3), " { { 3 , 2 } } ").unwrap();
        assert_eq!(b.to_string(), "{{2,3}}");
    }

    #[test]
    fn bottom_and_empty_set() {
        assert_eq!(parse_antichain(u(2), "{}").unwrap(), Antichain::bottom(u(2)));
        assert_eq!(parse_antichain(u(2), "{{}}").unwrap(), Antichain::empty_set(u(2)));
        assert_eq!(Antichain::bottom(u(2)).to_string(), "{}");
        assert_eq!(Antichain::empty_set(u(2)).to_string(), "{{}}");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_antichain(u(3), "{{1},{4}}") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_antichain(u(3), "{{1}"), Err(Error::Parse { .. })));
        assert!(matches!(parse_antichain(u(3), "{{1}} x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_antichain(u(3), "{{0}}"), Err(Error::Parse { .. })));
        assert!(matches!(parse_antichain(u(3), "{1}"), Err(Error::Parse { .. })));
        assert!(matches!(parse_antichain(u(3), ""), Err(Error::Parse { .. })));
    }

    #[test]
    fn comparable_pair_is_precondition() {
        assert!(matches!(
            parse_antichain(u(3), "{{1},{1,2}}"),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            parse_family_max_ac(u(3), "{{1},{1,2}}").unwrap().to_string(),
            "{{1,2}}"
        );
    }

    proptest! {
        #[test]
        fn printing_round_trips(family in prop::collection::vec(0u64..32, 0..8)) {
            let a = Antichain::max_ac(u(5), family).unwrap();
            let back = parse_antichain(u(5), &a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
