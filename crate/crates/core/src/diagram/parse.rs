//! PD text: `X[a,b,c,d]` items separated by `;` or `,`, or a bracketed
//! list of 4-tuples such as `[[1,4,2,5],[3,6,4,1]]`. Either form may be
//! wrapped in `PD[...]`. Empty text is the unknot.

use super::{DiagramError, PDCode};

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DiagramError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn number(&mut self) -> Result<u32, DiagramError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an arc label");
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("arc label out of range")
        })
    }

    fn tuple(&mut self, open: u8, close: u8) -> Result<[u32; 4], DiagramError> {
        self.expect(open)?;
        let mut out = [0; 4];
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                self.expect(b',')?;
            }
            *slot = self.number()?;
        }
        self.expect(close)?;
        Ok(out)
    }

    fn x_items(&mut self) -> Result<Vec<[u32; 4]>, DiagramError> {
        let mut out = Vec::new();
        while self.eat(b'X') {
            out.push(self.tuple(b'[', b']')?);
            if !(self.eat(b';') || self.eat(b',')) {
                break;
            }
        }
        Ok(out)
    }

    fn list(&mut self) -> Result<Vec<[u32; 4]>, DiagramError> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            let t = match self.peek() {
                Some(b'(') => self.tuple(b'(', b')')?,
                _ => self.tuple(b'[', b']')?,
            };
            out.push(t);
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn body(&mut self) -> Result<Vec<[u32; 4]>, DiagramError> {
        match self.peek() {
            Some(b'X') => self.x_items(),
            Some(b'[') => self.list(),
            None | Some(b']') => Ok(Vec::new()),
            _ => self.err("expected 'X[' or '['"),
        }
    }
}

/// Parse and validate a PD code.
pub fn parse_pd(text: &str) -> Result<PDCode, DiagramError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let wrapped = p.peek() == Some(b'P');
    if wrapped {
        if !p.text[p.pos..].starts_with(b"PD") {
            return p.err("expected 'PD['");
        }
        p.pos += 2;
        p.expect(b'[')?;
    }
    let crossings = p.body()?;
    if wrapped {
        p.expect(b']')?;
    }
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    let loops = usize::from(crossings.is_empty());
    PDCode::new(crossings, loops)
}
