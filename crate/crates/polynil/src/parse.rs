//! Parser for the ASCII group grammar.
//!
//! ```text
//! group  := term (sep term)*
//! sep    := "+" | "*" INT "*"
//! term   := "Z" ("^" INT | "_" modulus)?
//! modulus:= INT | "{" INT ("^" INT)? "}"
//! ```
//!
//! Whitespace between tokens is insignificant. `+` joins with class 1;
//! `*n*` joins with class `n`. `Z^k` abbreviates `k` infinite factors,
//! joined among themselves by the class of the adjacent separator
//! (following if present, else preceding, else 1). `Z_{p^a}` is the
//! literal order `p^a`.

use crate::group::{CyclicFactor, GroupError, GroupSpec, ProductClasses};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("integer at position {position} is out of range")]
    IntRange { position: usize },
    #[error(transparent)]
    Invalid(#[from] GroupError),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

enum Term {
    /// `Z^k`: that many infinite factors.
    Free(u32),
    Factor(CyclicFactor),
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", byte as char)))
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn int<T: TryFrom<u128>>(&mut self) -> Result<T, ParseError> {
        let start = self.pos;
        let mut value: u128 = 0;
        let mut any = false;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            any = true;
            value = value * 10 + u128::from(b - b'0');
            if value > u128::from(u64::MAX) {
                return Err(ParseError::IntRange { position: start });
            }
            self.pos += 1;
        }
        if !any {
            return Err(self.err("expected an integer"));
        }
        T::try_from(value).map_err(|_| ParseError::IntRange { position: start })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek() != Some(b'Z') {
            return Err(self.err("expected 'Z'"));
        }
        self.bump();
        match self.peek() {
            Some(b'^') => {
                self.bump();
                Ok(Term::Free(self.int()?))
            }
            Some(b'_') => {
                self.bump();
                Ok(Term::Factor(CyclicFactor::Finite(self.modulus()?)))
            }
            _ => Ok(Term::Factor(CyclicFactor::Infinite)),
        }
    }

    fn modulus(&mut self) -> Result<u64, ParseError> {
        if self.peek() == Some(b'{') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            let base: u64 = self.int()?;
            self.skip_ws();
            let value = if self.peek() == Some(b'^') {
                self.bump();
                self.skip_ws();
                let exp: u32 = self.int()?;
                base.checked_pow(exp)
                    .ok_or(ParseError::IntRange { position: start })?
            } else {
                base
            };
            self.skip_ws();
            self.expect(b'}')?;
            Ok(value)
        } else {
            self.int()
        }
    }

    /// A separator if one starts here: class 1 for `+`, `n` for `*n*`.
    fn separator(&mut self) -> Result<Option<u32>, ParseError> {
        match self.peek() {
            Some(b'+') => {
                self.bump();
                Ok(Some(1))
            }
            Some(b'*') => {
                self.bump();
                self.skip_ws();
                let n = self.int()?;
                self.skip_ws();
                self.expect(b'*')?;
                Ok(Some(n))
            }
            _ => Ok(None),
        }
    }
}

/// Parses a group expression. Errors carry the byte position; invariant
/// violations (broken chain, increasing classes) surface as the named
/// group-model diagnostics.
pub fn parse_group(input: &str) -> Result<GroupSpec, ParseError> {
    let mut p = Parser::new(input);
    let mut terms = Vec::new();
    let mut seps: Vec<u32> = Vec::new();
    p.skip_ws();
    terms.push(p.term()?);
    loop {
        p.skip_ws();
        match p.separator()? {
            Some(class) => {
                p.skip_ws();
                terms.push(p.term()?);
                seps.push(class);
            }
            None => break,
        }
    }
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }

    let mut factors: Vec<CyclicFactor> = Vec::new();
    let mut classes: Vec<u32> = Vec::new();
    for (i, term) in terms.iter().enumerate() {
        let (count, kind) = match term {
            Term::Factor(f) => (1usize, *f),
            Term::Free(k) => (*k as usize, CyclicFactor::Infinite),
        };
        // class joining the copies of a Z^k shorthand: the adjacent
        // separator, preferring the following one
        let inner = seps
            .get(i)
            .or_else(|| i.checked_sub(1).and_then(|j| seps.get(j)))
            .copied()
            .unwrap_or(1);
        for j in 0..count {
            if !factors.is_empty() {
                classes.push(if j == 0 { seps[i - 1] } else { inner });
            }
            factors.push(kind);
        }
    }
    Ok(GroupSpec::new(factors, ProductClasses::PerPair(classes))?)
}
