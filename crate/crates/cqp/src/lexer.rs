use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    LBracket,
    RBracket,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Eq,
    NotEq,
    Dot,
    Str(String),
    Flags(String),
    Ident(String),
    // recognized only to produce precise "unsupported construct" errors
    Question,
    Star,
    Plus,
    LBrace,
    RBrace,
    Number(String),
    DoubleColon,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Eq => "'='".into(),
            Tok::NotEq => "'!='".into(),
            Tok::Dot => "'.'".into(),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Flags(f) => format!("flags %{f}"),
            Tok::Ident(w) => format!("{w:?}"),
            Tok::Question => "'?'".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Number(n) => format!("number {n}"),
            Tok::DoubleColon => "'::'".into(),
        }
    }
}

/// Token plus its 1-based character position.
pub(crate) type Spanned = (Tok, usize);

pub(crate) fn lex(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        let pos = i + 1;
        let c = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '[' => push(&mut out, Tok::LBracket, pos, &mut i),
            ']' => push(&mut out, Tok::RBracket, pos, &mut i),
            '(' => push(&mut out, Tok::LParen, pos, &mut i),
            ')' => push(&mut out, Tok::RParen, pos, &mut i),
            '&' => push(&mut out, Tok::Amp, pos, &mut i),
            '|' => push(&mut out, Tok::Pipe, pos, &mut i),
            '=' => push(&mut out, Tok::Eq, pos, &mut i),
            '.' => push(&mut out, Tok::Dot, pos, &mut i),
            '?' => push(&mut out, Tok::Question, pos, &mut i),
            '*' => push(&mut out, Tok::Star, pos, &mut i),
            '+' => push(&mut out, Tok::Plus, pos, &mut i),
            '{' => push(&mut out, Tok::LBrace, pos, &mut i),
            '}' => push(&mut out, Tok::RBrace, pos, &mut i),
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                let mut j = i;
                while let Some(&d) = chars.get(j) {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        j += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Number(digits), pos));
                i = j;
            }
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push((Tok::NotEq, pos));
                    i += 2;
                } else {
                    out.push((Tok::Bang, pos));
                    i += 1;
                }
            }
            ':' => {
                if chars.get(i + 1) == Some(&':') {
                    out.push((Tok::DoubleColon, pos));
                    i += 2;
                } else {
                    return Err(ParseError::Lex {
                        pos,
                        message: "unexpected ':'".into(),
                    });
                }
            }
            '"' => {
                let mut value = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => {
                            return Err(ParseError::Lex {
                                pos,
                                message: "unterminated string".into(),
                            })
                        }
                        Some('"') => break,
                        Some('\\') => match chars.get(j + 1) {
                            Some('"') => {
                                value.push('"');
                                j += 2;
                            }
                            Some('\\') => {
                                value.push('\\');
                                j += 2;
                            }
                            // other escapes pass through to the regex engine
                            Some(&other) => {
                                value.push('\\');
                                value.push(other);
                                j += 2;
                            }
                            None => {
                                return Err(ParseError::Lex {
                                    pos,
                                    message: "unterminated string".into(),
                                })
                            }
                        },
                        Some(&other) => {
                            value.push(other);
                            j += 1;
                        }
                    }
                }
                out.push((Tok::Str(value), pos));
                i = j + 1;
            }
            '%' => {
                let mut flags = String::new();
                let mut j = i + 1;
                while let Some(&f) = chars.get(j) {
                    if f.is_ascii_alphabetic() {
                        flags.push(f);
                        j += 1;
                    } else {
                        break;
                    }
                }
                if flags.is_empty() {
                    return Err(ParseError::Lex {
                        pos,
                        message: "expected flag letters after '%'".into(),
                    });
                }
                out.push((Tok::Flags(flags), pos));
                i = j;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                let mut j = i;
                while let Some(&w) = chars.get(j) {
                    if w.is_alphanumeric() || w == '_' {
                        word.push(w);
                        j += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(word), pos));
                i = j;
            }
            other => {
                return Err(ParseError::Lex {
                    pos,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

fn push(out: &mut Vec<Spanned>, tok: Tok, pos: usize, i: &mut usize) {
    out.push((tok, pos));
    *i += 1;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_a_typical_query() {
        let toks = lex("[word=\"so\"%c] [pos=\"JJ.*\"]").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|(t, _)| t).collect();
        assert_eq!(
            kinds,
            vec![
                &Tok::LBracket,
                &Tok::Ident("word".into()),
                &Tok::Eq,
                &Tok::Str("so".into()),
                &Tok::Flags("c".into()),
                &Tok::RBracket,
                &Tok::LBracket,
                &Tok::Ident("pos".into()),
                &Tok::Eq,
                &Tok::Str("JJ.*".into()),
                &Tok::RBracket,
            ]
        );
        assert_eq!(toks[0].1, 1);
        assert_eq!(toks[6].1, 15);
    }

    #[test]
    fn string_escapes() {
        let toks = lex(r#""a\"b" "c\\d" "e\.f""#).unwrap();
        let strings: Vec<&str> = toks
            .iter()
            .filter_map(|(t, _)| match t {
                Tok::Str(s) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(strings, vec!["a\"b", "c\\d", "e\\.f"]);
    }

    #[test]
    fn unterminated_string_positioned() {
        assert_eq!(
            lex("  \"abc"),
            Err(ParseError::Lex {
                pos: 3,
                message: "unterminated string".into()
            })
        );
    }

    #[test]
    fn bare_percent_is_an_error() {
        assert!(matches!(
            lex("[word=\"x\"%]"),
            Err(ParseError::Lex { pos: 10, .. })
        ));
    }
}
