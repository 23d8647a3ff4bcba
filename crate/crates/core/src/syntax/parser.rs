use super::{Atom, Formula};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("sort error at offset {pos}: {message}")]
    Sort { pos: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    BoxA,
    BoxK,
    DiaA,
    DiaK,
    At,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::BoxA => "`[A]`".into(),
            Tok::BoxK => "`[K]`".into(),
            Tok::DiaA => "`<A>`".into(),
            Tok::DiaK => "`<K>`".into(),
            Tok::At => "`@`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let fixed: &[(&str, Tok)] = &[
            ("[A]", Tok::BoxA),
            ("[K]", Tok::BoxK),
            ("<A>", Tok::DiaA),
            ("<K>", Tok::DiaK),
            ("->", Tok::Arrow),
            ("~", Tok::Tilde),
            ("&", Tok::Amp),
            ("|", Tok::Bar),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("@", Tok::At),
        ];
        if let Some((s, tok)) = fixed.iter().find(|(s, _)| text[i..].starts_with(s)) {
            out.push((start, tok.clone()));
            i += s.len();
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let found = text[i..].chars().next().map(|c| format!("`{c}`")).unwrap_or_default();
        return Err(ParseError::Syntax {
            pos: start,
            expected: vec!["a formula token".into()],
            found,
        });
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Tilde => Ok(Formula::not(self.unary()?)),
            Tok::BoxA => Ok(Formula::box_a(self.unary()?)),
            Tok::BoxK => Ok(Formula::box_k(self.unary()?)),
            Tok::DiaA => Ok(Formula::dia_a(self.unary()?)),
            Tok::DiaK => Ok(Formula::dia_k(self.unary()?)),
            Tok::At => {
                let npos = self.pos();
                let ident = match self.peek().clone() {
                    Tok::Ident(s) => {
                        self.bump();
                        s
                    }
                    _ => return Err(self.unexpected(&["a nominal"])),
                };
                let atom = atom_at(npos, &ident)?;
                if !atom.sort().is_nominal() {
                    return Err(ParseError::Sort {
                        pos: npos,
                        message: format!("`@` requires a nominal (na_/nk_), found `{ident}`"),
                    });
                }
                let body = self.unary()?;
                Ok(Formula::at(&atom, body).expect("nominal checked"))
            }
            Tok::Ident(s) => Ok(Formula::Atom(atom_at(pos, &s)?)),
            Tok::LParen => {
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["`)`", "`&`", "`|`", "`->`"]));
                }
                self.bump();
                Ok(inner)
            }
            tok => Err(ParseError::Syntax {
                pos,
                expected: vec![
                    "an atom".into(),
                    "`~`".into(),
                    "`(`".into(),
                    "a modality".into(),
                    "`@`".into(),
                ],
                found: tok.describe(),
            }),
        }
    }
}

fn atom_at(pos: usize, ident: &str) -> Result<Atom, ParseError> {
    Atom::from_ident(ident).ok_or_else(|| ParseError::Sort {
        pos,
        message: format!(
            "`{ident}` has no sort prefix (expected one of pa_, pk_, na_, nk_ followed by a name)"
        ),
    })
}

/// Parses the ASCII concrete syntax.
///
/// Unary operators bind tightest, then `&`, then `|`, then `->`
/// (right-associative); `&` and `|` associate to the left.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["`&`", "`|`", "`->`", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(n: &str) -> Formula {
        Formula::prop_k(n)
    }

    #[test]
    fn parses_the_friend_inference() {
        let f = parse("<A> na_a & @na_a [K] pk_p -> <A> [K] pk_p").unwrap();
        let expected = Formula::implies(
            Formula::and(
                Formula::dia_a(Formula::nom_a("a")),
                Formula::at_a("a", Formula::box_k(pk("p"))),
            ),
            Formula::dia_a(Formula::box_k(pk("p"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn single_atom() {
        assert_eq!(parse("pa_q").unwrap(), Formula::prop_a("q"));
    }

    #[test]
    fn at_requires_nominal() {
        assert!(matches!(parse("@pk_p pa_q"), Err(ParseError::Sort { pos: 1, .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("pk_a | pk_b & pk_c -> pk_d -> pk_e").unwrap();
        let expected = Formula::implies(
            Formula::or(pk("a"), Formula::and(pk("b"), pk("c"))),
            Formula::implies(pk("d"), pk("e")),
        );
        assert_eq!(f, expected);
        let f = parse("~pk_a & pk_b").unwrap();
        assert_eq!(f, Formula::and(Formula::not(pk("a")), pk("b")));
        let f = parse("pk_a & pk_b & pk_c").unwrap();
        assert_eq!(f, Formula::and(Formula::and(pk("a"), pk("b")), pk("c")));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("((") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("pk_p &") {
            Err(ParseError::Syntax { pos, found, .. }) => {
                assert_eq!(pos, 6);
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("pk_p pk_q"), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse("pk_p $"), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse("foo"), Err(ParseError::Sort { .. })));
        assert!(matches!(parse("@ ~pk_p"), Err(ParseError::Syntax { .. })));
    }
}
