//! Expression syntax for eventually periodic sets:
//!
//! ```text
//! expr    := call | literal | finite | NAME
//! call    := ("complement" | "union" | "intersect" | "symdiff") "(" expr ("," expr)* ")"
//! literal := "ep(" "p=" N [";" "prefix=0b" BITS] [";" "tail={" N,* "}"] ")"
//! finite  := "{" N,* "}"
//! ```
//!
//! Named constants: `A1 A2 A3 N0..N5 E EMPTY NAT`.

use super::family::t_support;
use super::EPSet;
use crate::error::{OdpError, Result};

pub const CONSTANT_NAMES: &[&str] = &[
    "A1", "A2", "A3", "N0", "N1", "N2", "N3", "N4", "N5", "E", "EMPTY", "NAT",
];

pub fn constant(name: &str) -> Option<EPSet> {
    Some(match name {
        "A1" => EPSet::residues(2, &[0]),
        "A2" => EPSet::residues(6, &[0, 3]),
        "A3" => EPSet::residues(6, &[2, 3, 4]),
        "E" => t_support(),
        "EMPTY" => EPSet::empty(),
        "NAT" => EPSet::nat(),
        _ => {
            let i = name.strip_prefix('N')?.parse::<usize>().ok().filter(|&i| i < 6)?;
            EPSet::residues(6, &[i])
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Complement,
    Union,
    Intersect,
    Symdiff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(String),
    Set(EPSet),
    Call(SetOp, Vec<Expr>),
}

impl Expr {
    pub fn eval(&self) -> Result<EPSet> {
        match self {
            Expr::Const(name) => {
                constant(name).ok_or_else(|| OdpError::parse(1, format!("unknown constant {}", name)))
            }
            Expr::Set(s) => Ok(s.clone()),
            Expr::Call(op, args) => {
                let vals = args.iter().map(Expr::eval).collect::<Result<Vec<_>>>()?;
                let fold = |f: fn(&EPSet, &EPSet) -> EPSet| {
                    vals[1..].iter().fold(vals[0].clone(), |acc, v| f(&acc, v))
                };
                Ok(match op {
                    SetOp::Complement => vals[0].complement(),
                    SetOp::Union => fold(EPSet::union),
                    SetOp::Intersect => fold(EPSet::intersect),
                    SetOp::Symdiff => fold(EPSet::symdiff),
                })
            }
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

pub fn eval_expr(src: &str) -> Result<EPSet> {
    parse_expr(src)?.eval()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> OdpError {
        OdpError::parse(1, format!("{} at column {}", msg, self.pos + 1))
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name or number"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u64> {
        let w = self.word()?;
        w.parse().map_err(|_| self.error(&format!("bad number {}", w)))
    }

    fn number_list(&mut self) -> Result<Vec<u64>> {
        self.expect(b'{')?;
        let mut out = Vec::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected ',' or '}'")),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'{') {
            let elems = self.number_list()?;
            return Ok(Expr::Set(EPSet::finite(&elems)));
        }
        let name = self.word()?;
        let op = match name.as_str() {
            "ep" => return self.literal().map(Expr::Set),
            "complement" => SetOp::Complement,
            "union" => SetOp::Union,
            "intersect" => SetOp::Intersect,
            "symdiff" => SetOp::Symdiff,
            _ => {
                if constant(&name).is_none() {
                    return Err(self.error(&format!("unknown name {}", name)));
                }
                return Ok(Expr::Const(name));
            }
        };
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        let arity_ok = match op {
            SetOp::Complement => args.len() == 1,
            _ => args.len() >= 2,
        };
        if !arity_ok {
            return Err(self.error(&format!("wrong number of arguments to {}", name)));
        }
        Ok(Expr::Call(op, args))
    }

    fn literal(&mut self) -> Result<EPSet> {
        self.expect(b'(')?;
        let mut period = None;
        let mut prefix = Vec::new();
        let mut tail = Vec::new();
        loop {
            let key = self.word()?;
            self.expect(b'=')?;
            match key.as_str() {
                "p" => {
                    let p = self.number()?;
                    if p == 0 || p > 1 << 20 {
                        return Err(self.error("period must be in 1..=2^20"));
                    }
                    period = Some(p as usize);
                }
                "prefix" => {
                    let bits = self.word()?;
                    let digits = bits
                        .strip_prefix("0b")
                        .ok_or_else(|| self.error("prefix must start with 0b"))?;
                    prefix = digits
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(self.error("prefix digits must be 0 or 1")),
                        })
                        .collect::<Result<_>>()?;
                }
                "tail" => tail = self.number_list()?,
                _ => return Err(self.error(&format!("unknown field {}", key))),
            }
            match self.peek() {
                Some(b';') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ';' or ')'")),
            }
        }
        let p = period.ok_or_else(|| self.error("missing p="))?;
        let mut bits = vec![false; p];
        for r in tail {
            if r as usize >= p {
                return Err(self.error(&format!("tail residue {} not below p={}", r, p)));
            }
            bits[r as usize] = true;
        }
        Ok(EPSet::new(prefix, bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_named_expressions() {
        assert_eq!(eval_expr("symdiff(A1,A2)").unwrap(), constant("A3").unwrap());
        assert_eq!(
            eval_expr("union(intersect(A1, complement(A2)), intersect(A2, A3))").unwrap(),
            constant("A3").unwrap()
        );
        assert_eq!(constant("E"), constant("A3"));
        assert_eq!(eval_expr("union(N0, N3)").unwrap(), constant("A2").unwrap());
    }

    #[test]
    fn literals_round_trip() {
        let s = eval_expr("ep(p=6; prefix=0b0110; tail={2,3,4})").unwrap();
        assert!(s.contains(1) && s.contains(2) && !s.contains(3) && s.contains(9));
        assert_eq!(eval_expr(&s.to_string()).unwrap(), s);
        assert_eq!(eval_expr("ep(p=1; prefix=0b; tail={})").unwrap(), EPSet::empty());
        assert_eq!(eval_expr("{7, 3}").unwrap(), EPSet::finite(&[3, 7]));
        assert_eq!(eval_expr("{}").unwrap(), EPSet::empty());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "symdiff(A1)",
            "complement(A1, A2)",
            "B7",
            "ep(p=0; tail={})",
            "ep(p=3; tail={3})",
            "ep(tail={1})",
            "ep(p=2; prefix=12)",
            "A1 A2",
            "union(A1,",
        ] {
            assert!(eval_expr(bad).is_err(), "{bad}");
        }
    }
}
