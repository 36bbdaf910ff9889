//! Group specification grammar: factors written `Z<n>`, joined by `x` or
//! `*`, whitespace allowed between tokens, `Z` case-insensitive. Factors
//! keep their input order since presentation matters.

use std::fmt;

use abpair::FinAbGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)
    }
}

fn err(position: usize, message: impl Into<String>) -> SpecError {
    SpecError {
        position,
        message: message.into(),
    }
}

pub fn parse_group_spec(text: &str) -> Result<FinAbGroup, SpecError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut factors = Vec::new();
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        match bytes.get(pos) {
            Some(b'Z') | Some(b'z') => pos += 1,
            Some(_) => return Err(err(pos, "expected 'Z'")),
            None => {
                return Err(err(
                    pos,
                    if factors.is_empty() {
                        "empty specification, write Z1 for the trivial group"
                    } else {
                        "expected a factor after the separator"
                    },
                ))
            }
        }
        let digits_at = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == digits_at {
            return Err(err(digits_at, "expected digits after 'Z'"));
        }
        let n: u64 = text[digits_at..pos]
            .parse()
            .map_err(|_| err(digits_at, "factor does not fit in 64 bits"))?;
        if n == 0 {
            return Err(err(digits_at, "factor 0 is not a group"));
        }
        factors.push(n);
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        match bytes.get(pos) {
            None => break,
            Some(b'x') | Some(b'X') | Some(b'*') => pos += 1,
            Some(_) => return Err(err(pos, "expected 'x' or '*' between factors")),
        }
    }
    Ok(FinAbGroup::new(factors).expect("zero factors were rejected above"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_mixed_separators() {
        assert_eq!(parse_group_spec("Z6xZ4").unwrap().factors(), &[6, 4]);
        assert_eq!(parse_group_spec("z2 * z2 * z3").unwrap().factors(), &[2, 2, 3]);
        assert_eq!(parse_group_spec("Z2XZ5*z7").unwrap().factors(), &[2, 5, 7]);
        assert_eq!(parse_group_spec("  Z12  ").unwrap().factors(), &[12]);
        assert_eq!(parse_group_spec("Z1").unwrap().factors(), &[1]);
    }

    #[test]
    fn round_trip_is_canonical() {
        for s in ["z2 * z2 * z3", "Z6xZ4", "Z1"] {
            let g = parse_group_spec(s).unwrap();
            assert_eq!(parse_group_spec(&g.to_string()).unwrap(), g);
        }
        assert_eq!(parse_group_spec("z6 x z4").unwrap().to_string(), "Z6xZ4");
    }

    #[test]
    fn zero_factor_is_rejected_with_its_position() {
        let e = parse_group_spec("Z0").unwrap_err();
        assert_eq!(e.position, 1);
        assert!(e.message.contains("factor 0"));
        assert_eq!(parse_group_spec("Z2xZ0").unwrap_err().position, 4);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_group_spec("").unwrap_err().position, 0);
        assert_eq!(parse_group_spec("Q4").unwrap_err().position, 0);
        assert_eq!(parse_group_spec("Z").unwrap_err().position, 1);
        assert_eq!(parse_group_spec("Z6yZ4").unwrap_err().position, 2);
        assert_eq!(parse_group_spec("Z6x").unwrap_err().position, 3);
        assert_eq!(parse_group_spec("Z6xxZ4").unwrap_err().position, 3);
        assert!(parse_group_spec("Z99999999999999999999").is_err());
    }
}
