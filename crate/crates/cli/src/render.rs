//! Human-readable output.

use hallp1::hall_global::HallElement;
use hallp1::pbw::PbwElement;
use hallp1::{Coeff, GroundConfig};

/// Largest `k` tried when recognising `[k]` coefficients.
const MAX_QNUM: i64 = 16;

fn negate(c: &Coeff) -> Coeff {
    c * &c.ground().int(-1)
}

fn qnum_index(ground: GroundConfig, c: &Coeff) -> Option<i64> {
    if c.as_rational().is_some() {
        return None;
    }
    (2..=MAX_QNUM).find(|&k| *c == ground.qnum(k))
}

/// Joins `(sign, magnitude text)` pairs as `a + b - c`.
fn join(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Splits off a sign when the coefficient is rational or a negated `[k]`.
fn sign_split(c: &Coeff) -> (bool, Coeff) {
    let neg = match c.as_rational() {
        Some(r) => r < &num_traits::Zero::zero(),
        None => qnum_index(c.ground(), &negate(c)).is_some(),
    };
    if neg {
        (true, negate(c))
    } else {
        (false, c.clone())
    }
}

/// `8·[O(0)⊕O(2)] + 6·[O(1)^2]`; every coefficient is shown so the text
/// parses back as an expression.
pub fn hall(e: &HallElement) -> String {
    join(
        e.iter()
            .map(|(class, c)| {
                let (neg, c) = sign_split(c);
                let coeff = if c.as_rational().is_some() { c.to_string() } else { format!("({c})") };
                (neg, format!("{coeff}·{class}"))
            })
            .collect(),
    )
}

/// `g0*h1 + [2] g1`, with `[k]` for quantum integers.
pub fn pbw(e: &PbwElement, line: &str, tor: &str) -> String {
    join(
        e.iter()
            .map(|(m, c)| {
                let (neg, c) = sign_split(c);
                let body = m.render(line, tor);
                let coeff = if let Some(k) = qnum_index(c.ground(), &c) {
                    format!("[{k}]")
                } else if c.as_rational().is_some() {
                    c.to_string()
                } else {
                    format!("({c})")
                };
                let text = match (c.is_one(), body == "1") {
                    (true, _) => body,
                    (false, true) => coeff,
                    (false, false) => format!("{coeff} {body}"),
                };
                (neg, text)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use hallp1::pbw::PbwMonomial;

    #[test]
    fn pbw_coefficients() {
        let k = GroundConfig::new(2).unwrap();
        let mut e = PbwElement::single(k, PbwMonomial::line(1), k.qnum(2));
        e.add_term(PbwMonomial::one(), k.int(-3));
        e.add_term(PbwMonomial::tor(2), negate(&k.qnum(4)));
        e.add_term(PbwMonomial::line(4), k.v());
        assert_eq!(pbw(&e, "g", "h"), "-3 - [4] h2 + [2] g1 + (1*v) g4");
    }
}
