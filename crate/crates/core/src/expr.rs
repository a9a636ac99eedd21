//! Textual group expressions.
//!
//! ```text
//! expr := term ('+' term)*
//! term := atom ('^' NUM)?
//! atom := 'Z' | 'Z/' NUM | '0' | '(' expr ')'
//! ```
//!
//! `^k` repeats the preceding term `k` times, so `Z/2^3` is `Z/2 + Z/2 + Z/2`.
//! Parsing normalizes to canonical form; formatting writes the canonical form
//! back (`0` for the zero group).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::FgAbGroup;

pub fn format_group(g: &FgAbGroup) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    match g.free_rank() {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for d in g.torsion_factors() {
        parts.push(format!("Z/{d}"));
    }
    parts.join(" + ")
}

pub fn parse_group(input: &str) -> Result<FgAbGroup> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let (free, orders) = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    FgAbGroup::from_cyclic_decomposition(free, &orders)
}

type Parts = (usize, Vec<BigInt>);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Parts> {
        let (mut free, mut orders) = self.term()?;
        while self.eat(b'+') {
            let (f, o) = self.term()?;
            free += f;
            orders.extend(o);
        }
        Ok((free, orders))
    }

    fn term(&mut self) -> Result<Parts> {
        let (free, orders) = self.atom()?;
        if !self.eat(b'^') {
            return Ok((free, orders));
        }
        let k = self.number()?;
        let k: usize = k
            .try_into()
            .map_err(|_| self.error("repetition count too large"))?;
        if k > 4096 {
            return Err(self.error("repetition count too large"));
        }
        let mut all = Vec::with_capacity(orders.len() * k);
        for _ in 0..k {
            all.extend(orders.iter().cloned());
        }
        Ok((free * k, all))
    }

    fn atom(&mut self) -> Result<Parts> {
        match self.peek() {
            Some(b'Z') => {
                self.pos += 1;
                if self.eat(b'/') {
                    let n = self.number()?;
                    if n.is_zero() {
                        return Err(self.error("Z/0 is not allowed; write Z"));
                    }
                    if n.is_one() {
                        return Ok((0, vec![]));
                    }
                    Ok((0, vec![n]))
                } else {
                    Ok((1, vec![]))
                }
            }
            Some(b'0') => {
                self.pos += 1;
                Ok((0, vec![]))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.error("expected `Z`, `Z/n`, `0` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(free: usize, tors: &[u64]) -> FgAbGroup {
        FgAbGroup::from_factors(free, tors).unwrap()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse_group("Z^2 + Z/4 + Z/6").unwrap(), g(2, &[2, 12]));
        assert_eq!(parse_group("Z/2 + Z/3").unwrap(), g(0, &[6]));
        assert_eq!(parse_group("Z/2^3").unwrap(), g(0, &[2, 2, 2]));
        assert_eq!(parse_group("(Z/2 + Z)^2").unwrap(), g(2, &[2, 2]));
        assert_eq!(parse_group(" 0 ").unwrap(), FgAbGroup::zero());
        assert_eq!(parse_group("Z/1").unwrap(), FgAbGroup::zero());
        assert_eq!(parse_group("Z").unwrap(), g(1, &[]));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "Z/", "Z/0", "Q", "Z +", "Z/2)", "(Z", "Z^"] {
            assert!(parse_group(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_group(&g(2, &[2, 12])), "Z^2 + Z/2 + Z/12");
        assert_eq!(format_group(&FgAbGroup::zero()), "0");
        assert_eq!(format_group(&g(0, &[2, 2])), "Z/2 + Z/2");
    }

    proptest! {
        #[test]
        fn round_trip(free in 0usize..4, orders in proptest::collection::vec(1u64..60, 0..5)) {
            let ords: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
            let grp = FgAbGroup::from_cyclic_decomposition(free, &ords).unwrap();
            prop_assert_eq!(parse_group(&format_group(&grp)).unwrap(), grp);
        }
    }
}
