//! Text syntax for expressions.
//!
//! expr      := '0' | signed ( ('+' | '-') signed )*
//! signed    := [coeff '*'] family '(' args ')'
//! coeff     := complex
//! complex   := float | float 'i' | float ('+' | '-') float 'i'
//! family    := xplus | xminus | pfplus | pfminus | delta
//!            | xplusi0 | xminusi0
//!
//! The boundary-value families xplusi0/xminusi0 are sugar: they expand
//! into the canonical basis while parsing. Floats use the ordinary Rust
//! literal forms including exponents. Whitespace may separate any two
//! tokens. Serialization emits the shortest decimal digits that parse
//! back to the same doubles, so parse(serialize(e)) == e.

use num_complex::Complex64;

use crate::algebra::{expand_i0, BoundarySign};
use crate::error::{QahdError, Result};
use crate::term::{canonicalize, delta, pfminus, pfplus, xminus, xplus, QahdExpr, QahdTerm};

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { bytes: input.as_bytes(), pos: 0 }
    }

    fn fail<T>(&self, offset: usize, expected: &str) -> Result<T> {
        Err(QahdError::Parse { offset, expected: expected.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8, expected: &str) -> Result<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            self.fail(self.pos, expected)
        }
    }

    /// Unsigned float literal: digits, optional fraction, optional
    /// exponent with sign. The exponent sign is part of the number, so
    /// "2e+3" never collides with the expression-level '+'.
    fn parse_float(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut saw_digit = false;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            saw_digit = true;
            self.pos += 1;
        }
        if self.eat(b'.') {
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                saw_digit = true;
                self.pos += 1;
            }
        }
        if !saw_digit {
            self.pos = start;
            return self.fail(start, "a number");
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let mut exp_digit = false;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                exp_digit = true;
                self.pos += 1;
            }
            if !exp_digit {
                // "2e" followed by something else: the 'e' was not an
                // exponent after all.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.fail(start, "a finite number"),
        }
    }

    /// complex := ['+'|'-'] float ['i'] [('+'|'-') float 'i']
    fn parse_complex(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let sign = if self.eat(b'-') {
            -1.0
        } else {
            self.eat(b'+');
            1.0
        };
        self.skip_ws();
        let first = self.parse_float()? * sign;
        if self.eat(b'i') {
            return Ok(Complex64::new(0.0, first));
        }
        // Optional imaginary tail; only commits when the 'i' is present.
        let mark = self.pos;
        self.skip_ws();
        let im_sign = if self.eat(b'-') {
            -1.0
        } else if self.eat(b'+') {
            1.0
        } else {
            self.pos = mark;
            return Ok(Complex64::new(first, 0.0));
        };
        self.skip_ws();
        match self.parse_float() {
            Ok(second) if self.eat(b'i') => Ok(Complex64::new(first, im_sign * second)),
            _ => {
                self.pos = mark;
                Ok(Complex64::new(first, 0.0))
            }
        }
    }

    fn parse_u32(&mut self, what: &str) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(start, what);
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<u32>().or_else(|_| self.fail(start, what))
    }

    fn parse_ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'a'..=b'z') | Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (
            start,
            std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice"),
        )
    }

    /// [coeff '*'], committed only when the '*' is found.
    fn parse_coefficient(&mut self) -> Complex64 {
        let mark = self.pos;
        if let Ok(c) = self.parse_complex() {
            self.skip_ws();
            if self.eat(b'*') {
                return c;
            }
        }
        self.pos = mark;
        Complex64::new(1.0, 0.0)
    }

    /// One product term, already expanded into basis terms.
    fn parse_term(&mut self) -> Result<Vec<(QahdTerm, Complex64)>> {
        let coeff = self.parse_coefficient();
        let (name_at, name) = self.parse_ident();
        let open = "'('";
        let close = "')'";
        let comma = "','";
        let expansion: QahdExpr = match name {
            "xplus" | "xminus" => {
                self.skip_ws();
                self.expect(b'(', open)?;
                let degree = self.parse_complex()?;
                self.skip_ws();
                self.expect(b',', comma)?;
                let k = self.parse_u32("a log power")?;
                self.skip_ws();
                self.expect(b')', close)?;
                let term = if name == "xplus" { xplus(degree, k)? } else { xminus(degree, k)? };
                QahdExpr::from_term(term)
            }
            "pfplus" | "pfminus" => {
                self.skip_ws();
                self.expect(b'(', open)?;
                let n = self.parse_u32("a pole order")?;
                self.skip_ws();
                self.expect(b',', comma)?;
                let k = self.parse_u32("a log power")?;
                self.skip_ws();
                self.expect(b')', close)?;
                let term = if name == "pfplus" { pfplus(n, k)? } else { pfminus(n, k)? };
                QahdExpr::from_term(term)
            }
            "delta" => {
                self.skip_ws();
                self.expect(b'(', open)?;
                let m = self.parse_u32("a derivative order")?;
                self.skip_ws();
                self.expect(b')', close)?;
                QahdExpr::from_term(delta(m))
            }
            "xplusi0" | "xminusi0" => {
                self.skip_ws();
                self.expect(b'(', open)?;
                let degree = self.parse_complex()?;
                self.skip_ws();
                self.expect(b',', comma)?;
                let k = self.parse_u32("a log power")?;
                self.skip_ws();
                self.expect(b')', close)?;
                let sign =
                    if name == "xplusi0" { BoundarySign::Plus } else { BoundarySign::Minus };
                expand_i0(sign, degree, k)?
            }
            _ => {
                return self.fail(
                    name_at,
                    "a term family: xplus, xminus, pfplus, pfminus, delta, xplusi0, xminusi0",
                )
            }
        };
        Ok(expansion
            .terms()
            .iter()
            .map(|&(t, c)| (t, c * coeff))
            .collect())
    }
}

/// Parse the textual expression syntax into a canonicalized expression.
pub fn parse_expr(input: &str) -> Result<QahdExpr> {
    let mut p = Parser::new(input);
    p.skip_ws();
    // Literal zero stands for the empty expression.
    if p.peek() == Some(b'0') {
        let mark = p.pos;
        p.pos += 1;
        p.skip_ws();
        if p.pos == p.bytes.len() {
            return Ok(QahdExpr::zero());
        }
        p.pos = mark;
    }
    if p.pos == p.bytes.len() {
        return p.fail(p.pos, "an expression");
    }
    let mut raw: Vec<(QahdTerm, Complex64)> = Vec::new();
    let mut sign = if p.eat(b'-') {
        -1.0
    } else {
        p.eat(b'+');
        1.0
    };
    loop {
        let piece = p.parse_term()?;
        for (t, c) in piece {
            raw.push((t, c.scale(sign)));
        }
        p.skip_ws();
        if p.pos == p.bytes.len() {
            break;
        }
        sign = if p.eat(b'+') {
            1.0
        } else if p.eat(b'-') {
            -1.0
        } else {
            return p.fail(p.pos, "'+', '-', or end of input");
        };
    }
    canonicalize(raw)
}

/// Parse a standalone complex literal ("0.5", "-2i", "1.5+0.2i"); the
/// whole input must be consumed.
pub fn parse_complex_literal(input: &str) -> Result<Complex64> {
    let mut p = Parser::new(input);
    p.skip_ws();
    let z = p.parse_complex()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.fail(p.pos, "end of input");
    }
    Ok(z)
}

/// Shortest-digit rendering of a complex scalar in the accepted syntax.
fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn format_term(term: &QahdTerm) -> String {
    match *term {
        QahdTerm::XPlusLog { degree, log_power } => {
            format!("xplus({},{})", format_complex(degree), log_power)
        }
        QahdTerm::XMinusLog { degree, log_power } => {
            format!("xminus({},{})", format_complex(degree), log_power)
        }
        QahdTerm::PfPlusLog { pole_order, log_power } => {
            format!("pfplus({pole_order},{log_power})")
        }
        QahdTerm::PfMinusLog { pole_order, log_power } => {
            format!("pfminus({pole_order},{log_power})")
        }
        QahdTerm::DeltaDeriv { delta_order } => format!("delta({delta_order})"),
    }
}

/// Render an expression so that parse_expr returns it unchanged.
pub fn serialize_expr(expr: &QahdExpr) -> String {
    if expr.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, &(term, coeff)) in expr.terms().iter().enumerate() {
        let negative = coeff.re < 0.0 || (coeff.re == 0.0 && coeff.im < 0.0);
        let magnitude = if negative { -coeff } else { coeff };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if magnitude != Complex64::new(1.0, 0.0) {
            out.push_str(&format_complex(magnitude));
            out.push('*');
        }
        out.push_str(&format_term(&term));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_plain_and_weighted_terms() {
        let e = parse_expr("xplus(0.5,1)").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.terms()[0].0, xplus(c(0.5, 0.0), 1).unwrap());
        assert_eq!(e.terms()[0].1, c(1.0, 0.0));

        let e = parse_expr("2*delta(0)").unwrap();
        assert_eq!(e.terms()[0].1, c(2.0, 0.0));

        let e = parse_expr("2.5e-1*pfminus(2,1)").unwrap();
        assert_eq!(e.terms()[0].1, c(0.25, 0.0));
    }

    #[test]
    fn parses_complex_coefficients_and_degrees() {
        let e = parse_expr("1.5*xplus(-0.5+0.4i,2) - 3i*delta(1)").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.terms()[0].0, xplus(c(-0.5, 0.4), 2).unwrap());
        assert_eq!(e.terms()[0].1, c(1.5, 0.0));
        assert_eq!(e.terms()[1].0, delta(1));
        assert_eq!(e.terms()[1].1, c(0.0, -3.0));

        let e = parse_expr("1-2i*xminus(0.5i,0)").unwrap();
        assert_eq!(e.terms()[0].0, xminus(c(0.0, 0.5), 0).unwrap());
        assert_eq!(e.terms()[0].1, c(1.0, -2.0));
    }

    #[test]
    fn whitespace_is_free_between_tokens() {
        let e = parse_expr("  xplus( 0.5 , 1 )  +  2 * delta( 0 )  ").unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn leading_sign_and_merging() {
        let e = parse_expr("-delta(0) + 3*delta(0)").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.terms()[0].1, c(2.0, 0.0));
        let e = parse_expr("delta(0) - delta(0)").unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn boundary_value_sugar_expands_at_parse_time() {
        let direct = expand_i0(BoundarySign::Plus, c(-2.0, 0.0), 0).unwrap();
        let parsed = parse_expr("xplusi0(-2,0)").unwrap();
        assert_eq!(parsed, direct);

        let direct = expand_i0(BoundarySign::Minus, c(0.7, 0.0), 1).unwrap();
        let parsed = parse_expr("2*xminusi0(0.7,1)").unwrap();
        assert_eq!(parsed, direct.scale(c(2.0, 0.0)));
    }

    #[test]
    fn zero_literal_is_the_empty_expression() {
        assert!(parse_expr("0").unwrap().is_zero());
        assert!(parse_expr("  0  ").unwrap().is_zero());
        assert_eq!(serialize_expr(&QahdExpr::zero()), "0");
    }

    #[test]
    fn parse_errors_carry_byte_offsets() {
        match parse_expr("blah(1)") {
            Err(QahdError::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("delta(0) @ delta(1)") {
            Err(QahdError::Parse { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("xplus(0.5") {
            Err(QahdError::Parse { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("delta(0) +") {
            Err(QahdError::Parse { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn constructor_validation_surfaces_through_the_parser() {
        assert!(matches!(
            parse_expr("xplus(-1,0)"),
            Err(QahdError::InvalidTerm(_))
        ));
        assert!(matches!(
            parse_expr("pfplus(0,0)"),
            Err(QahdError::InvalidTerm(_))
        ));
    }

    #[test]
    fn serialization_matches_expected_strings() {
        let e = parse_expr("xplus(0.5,1)").unwrap();
        assert_eq!(serialize_expr(&e), "xplus(0.5,1)");
        let e = parse_expr("delta(2) - 2.5*pfplus(1,0)").unwrap();
        assert_eq!(serialize_expr(&e), "-2.5*pfplus(1,0) + delta(2)");
        let e = parse_expr("-3i*delta(1)").unwrap();
        assert_eq!(serialize_expr(&e), "-3i*delta(1)");
    }

    #[test]
    fn round_trip_is_exact() {
        let inputs = [
            "xplus(0.5,1)",
            "-xminus(-0.5+0.4i,2) + 1.25e-3*delta(4)",
            "2-3i*pfplus(3,2) - pfminus(1,0)",
            "xplusi0(-2,0)",
            "0.1*xplus(1.5,0) + 0.2*xplus(1.5,1) - delta(0)",
        ];
        for input in inputs {
            let e = parse_expr(input).unwrap();
            let text = serialize_expr(&e);
            let back = parse_expr(&text).unwrap();
            assert_eq!(back, e, "through {text}");
        }
    }
}
