use super::{Agent, Atom, Formula, LanguageTag};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Top,
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Modal(char, String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' | b'!' => {
                out.push((start, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((start, Tok::And));
                i += 1;
            }
            b'|' => {
                out.push((start, Tok::Or));
                i += 1;
            }
            b'(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Tok::Implies));
                i += 2;
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                out.push((start, Tok::Iff));
                i += 3;
            }
            b'K' | b'A' | b'X' if bytes.get(i + 1) == Some(&b'{') => {
                let close = text[i + 2..]
                    .find('}')
                    .ok_or_else(|| Error::syntax(start, "unterminated agent braces"))?;
                let name = text[i + 2..i + 2 + close].trim();
                if Agent::new(name).is_err() {
                    return Err(Error::syntax(i + 2, format!("invalid agent name `{name}`")));
                }
                out.push((start, Tok::Modal(c as char, name.to_string())));
                i += close + 3;
            }
            b'T' if !bytes
                .get(i + 1)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') =>
            {
                out.push((start, Tok::Top));
                i += 1;
            }
            c if c.is_ascii_lowercase() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::syntax(start, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(Error::syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Top => Ok(Formula::Top),
            Tok::Ident(name) => Ok(Formula::Atom(Atom::new(name)?)),
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Modal(op, name) => {
                let agent = Agent::new(name)?;
                let arg = self.unary()?;
                Ok(match op {
                    'K' => Formula::know(&agent, arg),
                    'A' => Formula::aware(&agent, arg),
                    _ => Formula::explicit(&agent, arg),
                })
            }
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::syntax(self.offset(), "expected `)`"));
                }
                Ok(inner)
            }
            other => Err(Error::syntax(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses concrete syntax into a formula of `lang`.
///
/// `|`, `->` and `<->` are rewritten into `~` and `&`. Under `L`, the
/// operators `A{..}` and `X{..}` are rejected; use [`parse`] with
/// [`LanguageTag::Lka`] followed by [`Formula::expand_defined`] to read
/// them as abbreviations.
pub fn parse(text: &str, lang: LanguageTag) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(Error::syntax(p.offset(), "trailing input"));
    }
    f.require(lang)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Formula {
        Formula::Atom(Atom::new(s).unwrap())
    }

    #[test]
    fn single_operator() {
        let b = Agent::new("b").unwrap();
        assert_eq!(parse("K{b} i", LanguageTag::L).unwrap(), Formula::know(&b, at("i")));
    }

    #[test]
    fn awareness_under_lka() {
        let o = Agent::new("o").unwrap();
        let f = parse("A{o} (i & ~l)", LanguageTag::Lka).unwrap();
        assert_eq!(f, Formula::aware(&o, Formula::and(at("i"), Formula::not(at("l")))));
    }

    #[test]
    fn awareness_rejected_under_l() {
        assert!(matches!(
            parse("A{b} l", LanguageTag::L),
            Err(Error::NotInLanguage { op: "A", .. })
        ));
        assert!(parse("X{b} l", LanguageTag::L).is_err());
        assert!(parse("X{b} l", LanguageTag::Lka).is_ok());
    }

    #[test]
    fn precedence() {
        let f = parse("i & l | ~i -> l", LanguageTag::L).unwrap();
        let g = Formula::implies(
            Formula::or(Formula::and(at("i"), at("l")), Formula::not(at("i"))),
            at("l"),
        );
        assert_eq!(f, g);
        let r = parse("i -> l -> i", LanguageTag::L).unwrap();
        assert_eq!(r, Formula::implies(at("i"), Formula::implies(at("l"), at("i"))));
        let m = parse("K{a} i & l", LanguageTag::L).unwrap();
        assert_eq!(m, Formula::and(Formula::know(&Agent::new("a").unwrap(), at("i")), at("l")));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("(i & ", LanguageTag::L) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse("i $ l", LanguageTag::L) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse("K{} i", LanguageTag::L).is_err());
        assert!(parse("i l", LanguageTag::L).is_err());
        assert!(parse("Tx", LanguageTag::L).is_err());
    }

    #[test]
    fn top_and_whitespace() {
        assert_eq!(parse("  T ", LanguageTag::L).unwrap(), Formula::Top);
        assert_eq!(parse("~~T", LanguageTag::L).unwrap().to_string(), "~~T");
    }
}
