//! Element expressions.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor (('.' | '·' | '*') factor)*       . and · Hall, * Ringel
//! factor  := rational | 'v' ['^' int] | '(' expr ')' | class
//! class   := summand | '[' ('0' | summand (('⊕' | '(+)') summand)*) ']'
//! summand := 'O(' int ')' ['^' uint] | 'T(' point ',' partition ')'
//! point   := 'inf' | '[' uint (',' uint)* ']'
//! ```
//!
//! Scalars are multiples of the unit class `[0]`, so both products agree on them.

use std::collections::BTreeMap;

use hallp1::hall_global::{hall_product, ringel_product, BundleClass, HallElement, SheafClass};
use hallp1::hall_torsion::TorsionClass;
use hallp1::{ClosedPoint, Coeff, GroundConfig, HallError, Partition, Result};
use num_bigint::BigInt;

pub fn parse_expr(ground: GroundConfig, src: &str) -> Result<HallElement> {
    let mut p = Parser { src, pos: 0, ground };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

/// `"[2,1]"`, `"2,1"` or `"[]"`.
pub fn parse_partition(s: &str) -> Result<Partition> {
    let t = s.trim();
    let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
    let parts = inner
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|_| HallError::Invalid(format!("bad partition {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Partition::from_parts(parts).map_err(HallError::Invalid)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ground: GroundConfig,
}

enum Summand {
    Line(i64, u32),
    Tor(ClosedPoint, Partition),
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> HallError {
        let col = self.src[..self.pos].chars().count() + 1;
        HallError::Invalid(format!("parse error at column {col}: {msg}"))
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let s = &self.src[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn uint<T: std::str::FromStr>(&mut self) -> Result<T> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| {
            self.pos = start;
            self.error("number out of range")
        })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let n: i64 = self.uint()?;
        Ok(if neg { -n } else { n })
    }

    fn scalar(&self, c: Coeff) -> HallElement {
        HallElement::single(self.ground, SheafClass::zero(), c)
    }

    fn expr(&mut self) -> Result<HallElement> {
        let neg = self.eat("-");
        let mut acc = self.term()?;
        if neg {
            acc = acc.scaled(&self.ground.int(-1));
        }
        loop {
            if self.eat("+") {
                acc = acc.plus(&self.term()?);
            } else if self.eat("-") {
                acc = acc.minus(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<HallElement> {
        let mut acc = self.factor()?;
        loop {
            let ringel = if self.eat("*") {
                true
            } else if self.eat(".") || self.eat("·") {
                false
            } else {
                return Ok(acc);
            };
            let rhs = self.factor()?;
            acc = if ringel { ringel_product(&acc, &rhs)? } else { hall_product(&acc, &rhs)? };
        }
    }

    fn factor(&mut self) -> Result<HallElement> {
        match self.peek() {
            Some('0'..='9') => {
                let n: BigInt = self.digits()?.parse().expect("digits");
                let mut c = self.ground.int(n);
                if self.eat("/") {
                    let start = self.pos;
                    let d: BigInt = self.digits()?.parse().expect("digits");
                    c = c.try_div(&self.ground.int(d)).map_err(|_| {
                        self.pos = start;
                        self.error("zero denominator")
                    })?;
                }
                Ok(self.scalar(c))
            }
            Some('v') => {
                self.pos += 1;
                let e = if self.eat("^") { self.int()? } else { 1 };
                Ok(self.scalar(self.ground.v_pow(e)))
            }
            Some('(') if !self.rest().starts_with("(+)") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                if self.eat("0") {
                    self.expect("]")?;
                    return Ok(HallElement::basis(self.ground, SheafClass::zero()));
                }
                let mut parts = vec![self.summand()?];
                while self.eat("⊕") || self.eat("(+)") {
                    parts.push(self.summand()?);
                }
                self.expect("]")?;
                Ok(HallElement::basis(self.ground, class_of(parts)))
            }
            Some('O') | Some('T') => {
                let s = self.summand()?;
                Ok(HallElement::basis(self.ground, class_of(vec![s])))
            }
            _ => Err(self.error("expected a coefficient, a class or '('")),
        }
    }

    fn summand(&mut self) -> Result<Summand> {
        if self.eat("O(") {
            let n = self.int()?;
            self.expect(")")?;
            let a = if self.eat("^") { self.uint()? } else { 1 };
            if a == 0 {
                return Err(self.error("multiplicity must be positive"));
            }
            Ok(Summand::Line(n, a))
        } else if self.eat("T(") {
            let x = self.point()?;
            self.expect(",")?;
            let lam = self.partition()?;
            self.expect(")")?;
            Ok(Summand::Tor(x, lam))
        } else {
            Err(self.error("expected O(n) or T(point, [λ])"))
        }
    }

    fn point(&mut self) -> Result<ClosedPoint> {
        if self.eat("inf") || self.eat("∞") {
            return Ok(ClosedPoint::Infinity);
        }
        let start = self.pos;
        let list = self.uint_list()?;
        let id = format!("[{}]", list.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        ClosedPoint::parse(self.ground, &id).map_err(|e| {
            self.pos = start;
            self.error(&e.to_string())
        })
    }

    fn partition(&mut self) -> Result<Partition> {
        let start = self.pos;
        let parts = self.uint_list()?;
        Partition::from_parts(parts).map_err(|e| {
            self.pos = start;
            self.error(&e)
        })
    }

    fn uint_list(&mut self) -> Result<Vec<u32>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.uint()?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}

/// Direct sum of summands; torsion at a repeated point merges partitions.
fn class_of(parts: Vec<Summand>) -> SheafClass {
    let mut twists = BTreeMap::new();
    let mut torsion: BTreeMap<ClosedPoint, Vec<u32>> = BTreeMap::new();
    for s in parts {
        match s {
            Summand::Line(n, a) => *twists.entry(n).or_insert(0) += a,
            Summand::Tor(x, lam) => torsion.entry(x).or_default().extend_from_slice(lam.parts()),
        }
    }
    let torsion = torsion.into_iter().map(|(x, p)| (x, Partition::new(p))).collect();
    SheafClass::new(BundleClass::new(twists), TorsionClass::from_map(torsion))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> GroundConfig {
        GroundConfig::new(2).unwrap()
    }

    #[test]
    fn classes() {
        let e = parse_expr(k(), "[O(1)^2 ⊕ T(inf,[2,1]) (+) O(-1)]").unwrap();
        let (class, c) = e.iter().next().unwrap();
        assert!(c.is_one());
        assert_eq!(class.to_string(), "[O(-1)⊕O(1)^2⊕T(inf,[2,1])]");
        assert_eq!(parse_expr(k(), &class.to_string()).unwrap(), e);
        let merged = parse_expr(k(), "[T([0,1],[1]) ⊕ T([0,1],[2])]").unwrap();
        assert_eq!(merged, parse_expr(k(), "T([0,1],[2,1])").unwrap());
    }

    #[test]
    fn scalars_and_sums() {
        let e = parse_expr(k(), "-(1/2 + v^-1) . O(0) + 3*O(0) - [0]").unwrap();
        let g = k();
        assert_eq!(e.coeff(&SheafClass::line(0)), g.int(3) - g.int(1).try_div(&g.int(2)).unwrap() - g.v_pow(-1));
        assert_eq!(e.coeff(&SheafClass::zero()), g.int(-1));
    }

    #[test]
    fn errors_carry_columns() {
        let err = parse_expr(k(), "O(0) . T([1,0,1],[1])").unwrap_err().to_string();
        assert!(err.contains("column 10"), "{err}");
        let err = parse_expr(k(), "O(0) +").unwrap_err().to_string();
        assert!(err.contains("column 7"), "{err}");
        assert!(parse_expr(k(), "O(0) O(1)").is_err());
    }

    #[test]
    fn partitions() {
        assert_eq!(parse_partition("[1,1]").unwrap(), Partition::new(vec![1, 1]));
        assert_eq!(parse_partition("2, 1").unwrap(), Partition::new(vec![2, 1]));
        assert!(parse_partition("[]").unwrap().is_empty());
        assert!(parse_partition("[1,2]").is_err());
    }
}
